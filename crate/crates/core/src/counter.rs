//! Exact zero counting over `A^n(F_q)`, affine subspaces, parallel classes and
//! extension fields.
//!
//! The fast engine walks the space as an odometer. Each polynomial is
//! compiled into one coefficient vector per depth: after fixing
//! `x_1..x_i`, what is left is a polynomial in `x_{i+1}..x_n` whose
//! coefficients are updated from the level above with one multiply-add per
//! suffix monomial, so moving the last digit costs only the univariate tail.
//! A plain evaluate-every-point oracle is kept alongside for cross-checking.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::affine::{AffineSubspace, Point, PointSet};
use crate::error::{Error, Result};
use crate::ff::{embed_subfield, FieldElement, FieldSpec};
use crate::poly::PolySystem;

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
pub const ORACLE_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Full,
    Subspace(AffineSubspace),
    /// Points with coordinates in `F_{q^s}`.
    Extension(u32),
}

impl Region {
    pub fn describe(&self) -> String {
        match self {
            Region::Full => "full".into(),
            Region::Subspace(l) => format!("subspace {}", l.describe()),
            Region::Extension(s) => format!("ext s={s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub q: u32,
    pub n: usize,
    pub region: String,
    pub count: u64,
    pub scanned: u128,
    pub workers: usize,
    #[serde(skip)]
    pub r: usize,
    #[serde(skip)]
    pub degrees: Vec<u32>,
    #[serde(skip)]
    pub d: u32,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

/// Counting configuration: worker count and the largest region it will scan.
#[derive(Clone, Copy, Debug)]
pub struct Counter {
    pub workers: usize,
    pub budget: u128,
}

impl Default for Counter {
    fn default() -> Self {
        Counter {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Counter {
    pub fn new(workers: usize, budget: u128) -> Self {
        Counter {
            workers: workers.max(1),
            budget,
        }
    }

    pub fn single() -> Self {
        Counter::new(1, DEFAULT_BUDGET)
    }

    pub fn count(&self, sys: &PolySystem, region: &Region) -> Result<CountReport> {
        let start = Instant::now();
        let (count, scanned) = match region {
            Region::Full => (self.count_full(sys)?, region_size(sys.q(), sys.nvars())),
            Region::Subspace(l) => {
                let restricted = sys.restrict_to_subspace(l)?;
                (self.count_full(&restricted)?, l.size())
            }
            Region::Extension(s) => {
                let lifted = lift_to_extension(sys, *s)?;
                (self.count_full(&lifted)?, region_size(lifted.q(), sys.nvars()))
            }
        };
        Ok(CountReport {
            q: sys.q(),
            n: sys.nvars(),
            region: region.describe(),
            count,
            scanned,
            workers: self.workers,
            r: sys.r(),
            degrees: sys.degrees().to_vec(),
            d: sys.total_degree(),
            elapsed_ms: start.elapsed().as_millis(),
        })
    }

    /// `N(f; A^n(F_q))`.
    pub fn count_full(&self, sys: &PolySystem) -> Result<u64> {
        Error::budget(region_size(sys.q(), sys.nvars()), self.budget)?;
        let engine = Engine::compile(sys);
        Ok(engine.run(self.workers, |_: &mut (), _| {}, |_| ()).0)
    }

    pub fn count_subspace(&self, sys: &PolySystem, l: &AffineSubspace) -> Result<u64> {
        Error::budget(l.size(), self.budget)?;
        self.count_full(&sys.restrict_to_subspace(l)?)
    }

    /// Zeros with coordinates in `F_{q^s}`.
    pub fn count_ext(&self, sys: &PolySystem, s: u32) -> Result<u64> {
        let lifted = lift_to_extension(sys, s)?;
        self.count_full(&lifted)
    }

    /// The zero set `z(f; A^n(F_q))`, materialized.
    pub fn zero_set(&self, sys: &PolySystem) -> Result<PointSet> {
        Error::budget(region_size(sys.q(), sys.nvars()), self.budget)?;
        let engine = Engine::compile(sys);
        let (_, chunks) = engine.run(
            self.workers,
            |acc: &mut Vec<Point>, x: &[FieldElement]| acc.push(x.to_vec()),
            |acc| acc,
        );
        PointSet::new(sys.field(), sys.nvars(), chunks.into_iter().flatten())
    }

    /// One count per translate of `l`'s direction space, in canonical order.
    pub fn counts_over_parallel_class(&self, sys: &PolySystem, l: &AffineSubspace) -> Result<Vec<(AffineSubspace, u64)>> {
        if l.ambient() != sys.nvars() {
            return Err(Error::AmbientMismatch {
                expected: sys.nvars(),
                subspace: l.ambient(),
            });
        }
        let zeros = self.zero_set(sys)?;
        Ok(class_counts(&zeros, l))
    }
}

/// Bucket a point set over the translates of `l`'s direction space.
pub fn class_counts(zeros: &PointSet, l: &AffineSubspace) -> Vec<(AffineSubspace, u64)> {
    let mut hits: BTreeMap<Point, u64> = BTreeMap::new();
    for z in zeros.iter() {
        *hits.entry(l.reduce(z)).or_default() += 1;
    }
    l.parallel_class()
        .into_iter()
        .map(|t| {
            let c = hits.get(t.offset()).copied().unwrap_or(0);
            (t, c)
        })
        .collect()
}

pub fn region_size(q: u32, n: usize) -> u128 {
    crate::affine::qpow(q, n)
}

/// Lifts `sys` into `F_{q^s}` through the canonical embedding.
pub fn lift_to_extension(sys: &PolySystem, s: u32) -> Result<PolySystem> {
    if s == 0 {
        return Err(Error::NotADivisor { base: 0, degree: 0 });
    }
    let base = sys.field();
    let big = FieldSpec::new(base.p() as u64, base.k() * s)?;
    let emb = embed_subfield(base, &big)?;
    sys.lift(&emb)
}

/// Convenience wrappers with the default configuration.
pub fn count_zeros(sys: &PolySystem, region: &Region) -> Result<CountReport> {
    Counter::default().count(sys, region)
}

pub fn count_zeros_ext(sys: &PolySystem, s: u32) -> Result<CountReport> {
    Counter::default().count(sys, &Region::Extension(s))
}

/// Reference count: evaluates the system at every point of the region.
pub fn count_zeros_naive(sys: &PolySystem, region: &Region, budget: u128) -> Result<u64> {
    let check = |sys: &PolySystem, sub: &AffineSubspace| -> Result<u64> {
        let mut n = 0;
        for x in sub.enumerate_points(budget)? {
            if sys.is_zero_at(&x)? {
                n += 1;
            }
        }
        Ok(n)
    };
    match region {
        Region::Full => check(sys, &AffineSubspace::full(sys.field(), sys.nvars())),
        Region::Subspace(l) => {
            if l.ambient() != sys.nvars() {
                return Err(Error::AmbientMismatch {
                    expected: sys.nvars(),
                    subspace: l.ambient(),
                });
            }
            check(sys, l)
        }
        Region::Extension(s) => {
            let lifted = lift_to_extension(sys, *s)?;
            check(&lifted, &AffineSubspace::full(lifted.field(), lifted.nvars()))
        }
    }
}

/// One polynomial, compiled per depth.
struct Compiled {
    /// `coef0[j]`: coefficient of the j-th full monomial.
    coef0: Vec<FieldElement>,
    /// `steps[i][j] = (e, t)`: suffix monomial j at depth i has exponent `e`
    /// in `x_{i+1}` and continues as suffix monomial `t` at depth i+1.
    steps: Vec<Vec<(u32, u32)>>,
    /// Number of suffix monomials at each depth (index n is 0 or 1).
    widths: Vec<usize>,
}

struct Engine {
    field: Arc<FieldSpec>,
    n: usize,
    polys: Vec<Compiled>,
    /// `pow[x * stride + e] = x^e`.
    pow: Vec<FieldElement>,
    stride: usize,
    /// Some polynomial is the zero constant, or a constant nonzero.
    trivially_empty: bool,
}

impl Engine {
    fn compile(sys: &PolySystem) -> Engine {
        let field = sys.field().clone();
        let n = sys.nvars();
        let mut order: Vec<usize> = (0..sys.r()).collect();
        order.sort_by_key(|&i| sys.polys()[i].num_terms());
        let mut polys = Vec::new();
        let mut trivially_empty = false;
        let mut max_e = 1;
        for i in order {
            let p = &sys.polys()[i];
            if p.is_zero() {
                continue;
            }
            if p.total_degree() == Some(0) {
                trivially_empty = true;
                continue;
            }
            let mut level: Vec<Vec<u32>> = p.terms().map(|(e, _)| e.clone()).collect();
            let coef0 = p.terms().map(|(_, c)| c).collect();
            let mut steps = Vec::with_capacity(n);
            let mut widths = vec![level.len()];
            for _ in 0..n {
                let mut next: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
                for s in &level {
                    let len = next.len() as u32;
                    next.entry(s[1..].to_vec()).or_insert(len);
                }
                let step = level
                    .iter()
                    .map(|s| {
                        max_e = max_e.max(s[0]);
                        (s[0], next[&s[1..]])
                    })
                    .collect();
                steps.push(step);
                let mut nl = vec![Vec::new(); next.len()];
                for (k, v) in next {
                    nl[v as usize] = k;
                }
                level = nl;
                widths.push(level.len());
            }
            polys.push(Compiled { coef0, steps, widths });
        }
        let stride = max_e as usize + 1;
        let mut pow = Vec::with_capacity(field.q() as usize * stride);
        for x in field.elements() {
            let mut acc = field.one();
            for _ in 0..stride {
                pow.push(acc);
                acc = field.mul(acc, x);
            }
        }
        Engine {
            field,
            n,
            polys,
            pow,
            stride,
            trivially_empty,
        }
    }

    /// Scans the space, calling `visit` on every common zero. The first
    /// coordinate is dealt round-robin to `workers` threads; per-worker
    /// states are returned in worker order together with the total count.
    fn run<S, V, F, O>(&self, workers: usize, visit: V, finish: F) -> (u64, Vec<O>)
    where
        V: Fn(&mut S, &[FieldElement]) + Sync,
        F: Fn(S) -> O + Sync,
        O: Send,
        S: Default,
    {
        if self.trivially_empty {
            return (0, Vec::new());
        }
        if self.n == 0 {
            let mut s = S::default();
            visit(&mut s, &[]);
            return (1, vec![finish(s)]);
        }
        let q = self.field.q();
        let workers = workers.clamp(1, q as usize);
        let results: Vec<(u64, O)> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let visit = &visit;
                    let finish = &finish;
                    scope.spawn(move || {
                        let mut state = S::default();
                        let mut walker = Walker::new(self);
                        let mut count = 0;
                        for x0 in (w as u32..q).step_by(workers) {
                            count += walker.descend(0, FieldElement::from_index(x0), &mut state, visit);
                        }
                        (count, finish(state))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("counting worker panicked")).collect()
        });
        let total = results.iter().map(|(c, _)| c).sum();
        (total, results.into_iter().map(|(_, o)| o).collect())
    }
}

struct Walker<'a> {
    engine: &'a Engine,
    /// `coefs[p][i]`: coefficient vector of polynomial p at depth i.
    coefs: Vec<Vec<Vec<FieldElement>>>,
    point: Vec<FieldElement>,
}

impl<'a> Walker<'a> {
    fn new(engine: &'a Engine) -> Self {
        let coefs = engine
            .polys
            .iter()
            .map(|c| {
                let mut v: Vec<Vec<FieldElement>> = c.widths.iter().map(|&w| vec![FieldElement::ZERO; w]).collect();
                v[0].clone_from(&c.coef0);
                v
            })
            .collect();
        Walker {
            engine,
            coefs,
            point: vec![FieldElement::ZERO; engine.n],
        }
    }

    fn step(&mut self, p: usize, depth: usize, x: FieldElement) {
        let e = self.engine;
        let f = &e.field;
        let base = x.index() as usize * e.stride;
        let (above, below) = self.coefs[p].split_at_mut(depth + 1);
        let src = &above[depth];
        let dst = &mut below[0];
        dst.iter_mut().for_each(|c| *c = FieldElement::ZERO);
        for (&c, &(k, t)) in src.iter().zip(&e.polys[p].steps[depth]) {
            if c.is_zero() {
                continue;
            }
            let term = if k == 0 { c } else { f.mul(c, e.pow[base + k as usize]) };
            let slot = &mut dst[t as usize];
            *slot = f.add(*slot, term);
        }
    }

    /// Fixes `x_{depth+1} = x` and counts zeros below.
    fn descend<S, V>(&mut self, depth: usize, x: FieldElement, state: &mut S, visit: &V) -> u64
    where
        V: Fn(&mut S, &[FieldElement]),
    {
        self.point[depth] = x;
        let n = self.engine.n;
        if depth + 1 == n {
            for p in 0..self.coefs.len() {
                self.step(p, depth, x);
                if self.coefs[p][n].first().is_some_and(|c| !c.is_zero()) {
                    return 0;
                }
            }
            visit(state, &self.point);
            return 1;
        }
        for p in 0..self.coefs.len() {
            self.step(p, depth, x);
        }
        let mut count = 0;
        for y in 0..self.engine.field.q() {
            count += self.descend(depth + 1, FieldElement::from_index(y), state, visit);
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::direction_spaces;
    use crate::poly::{default_names, parse_poly, MultiPoly};
    use crate::rng::SplitMix64;

    fn sys(texts: &[&str], p: u64, k: u32, n: usize) -> PolySystem {
        let f = FieldSpec::new(p, k).unwrap();
        PolySystem::new(texts.iter().map(|t| parse_poly(t, &f, &default_names(n)).unwrap()).collect()).unwrap()
    }

    fn random_poly(f: &Arc<FieldSpec>, n: usize, d: u32, rng: &mut SplitMix64) -> MultiPoly {
        let terms = (0..6).map(|_| {
            let mut e = vec![0; n];
            for _ in 0..rng.below(d as u64 + 1) {
                e[rng.below(n as u64) as usize] += 1;
            }
            (e, rng.element(f))
        });
        MultiPoly::from_terms(f, n, terms).unwrap()
    }

    #[test]
    fn worked_counts() {
        let c = Counter::default();
        assert_eq!(c.count_full(&sys(&["x1"], 3, 1, 2)).unwrap(), 3);
        assert_eq!(c.count_full(&sys(&["x1*x2 + x3*x4"], 2, 1, 4)).unwrap(), 10);
        assert_eq!(c.count_full(&sys(&["x1*x2 + x3^2 + x3*x4 + 2*x4^2"], 3, 1, 4)).unwrap(), 21);
        assert_eq!(c.count_full(&sys(&["1"], 3, 1, 2)).unwrap(), 0);
        assert_eq!(c.count_full(&sys(&["0"], 3, 1, 2)).unwrap(), 9);
        assert_eq!(c.count_full(&sys(&["x1", "x2"], 5, 1, 3)).unwrap(), 5);
    }

    #[test]
    fn extension_counts() {
        let c = Counter::default();
        let hyper = sys(&["x1"], 2, 1, 2);
        let counts: Vec<u64> = (1..=4).map(|s| c.count_ext(&hyper, s).unwrap()).collect();
        assert_eq!(counts, vec![2, 4, 8, 16]);
        let norm = sys(&["x1^2 + x1*x2 + x2^2"], 2, 1, 2);
        assert_eq!(c.count_ext(&norm, 1).unwrap(), 1);
        assert_eq!(c.count_ext(&norm, 2).unwrap(), 7);
        assert_eq!(count_zeros_naive(&norm, &Region::Extension(2), ORACLE_BUDGET).unwrap(), 7);
    }

    #[test]
    fn parallel_class_counts() {
        let c = Counter::default();
        let f3 = FieldSpec::new(3, 1).unwrap();
        let s = sys(&["x1"], 3, 1, 2);
        let l = AffineSubspace::new(&f3, vec![f3.zero(); 2], vec![vec![f3.zero(), f3.one()]]).unwrap();
        let counts: Vec<u64> = c.counts_over_parallel_class(&s, &l).unwrap().iter().map(|x| x.1).collect();
        assert_eq!(counts, vec![3, 0, 0]);

        let f2 = FieldSpec::new(2, 1).unwrap();
        let s = sys(&["x1*x2 + x3*x4"], 2, 1, 4);
        let (o, i) = (f2.zero(), f2.one());
        let plane = AffineSubspace::new(&f2, vec![o; 4], vec![vec![i, o, o, o], vec![o, i, o, o]]).unwrap();
        let counts: Vec<u64> = c.counts_over_parallel_class(&s, &plane).unwrap().iter().map(|x| x.1).collect();
        assert_eq!(counts, vec![3, 3, 3, 1]);
        let whole = c.counts_over_parallel_class(&s, &AffineSubspace::full(&f2, 4)).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].1, 10);
    }

    #[test]
    fn subspace_counts_match_filtering() {
        let c = Counter::default();
        let s = sys(&["x1^2*x2 + 2*x3 + x1*x2*x3 + 1", "x2 + x3^2 + x1"], 3, 1, 3);
        let f = s.field().clone();
        for k in 0..=3 {
            for dir in direction_spaces(&f, 3, k) {
                let mut total = 0;
                for l in dir.parallel_class() {
                    let fast = c.count_subspace(&s, &l).unwrap();
                    let slow = count_zeros_naive(&s, &Region::Subspace(l.clone()), ORACLE_BUDGET).unwrap();
                    assert_eq!(fast, slow);
                    total += fast;
                }
                assert_eq!(total, c.count_full(&s).unwrap());
            }
        }
    }

    #[test]
    fn engine_matches_oracle_and_is_worker_invariant() {
        let mut rng = SplitMix64::new(11);
        for (p, k, n) in [(2, 1, 5), (3, 1, 4), (2, 2, 3), (5, 1, 3), (3, 2, 2), (7, 1, 1)] {
            let f = FieldSpec::new(p, k).unwrap();
            for _ in 0..10 {
                let r = 1 + rng.below(2) as usize;
                let polys = (0..r).map(|_| random_poly(&f, n, 3, &mut rng)).collect();
                let s = PolySystem::new(polys).unwrap();
                let oracle = count_zeros_naive(&s, &Region::Full, ORACLE_BUDGET).unwrap();
                for w in [1, 2, 3, 8] {
                    assert_eq!(Counter::new(w, DEFAULT_BUDGET).count_full(&s).unwrap(), oracle);
                }
                let zs = Counter::new(3, DEFAULT_BUDGET).zero_set(&s).unwrap();
                assert_eq!(zs.len() as u64, oracle);
                assert!(zs.iter().all(|x| s.is_zero_at(x).unwrap()));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = sys(&["x1"], 3, 1, 4);
        let err = Counter::new(1, 80).count_full(&s).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 81, budget: 80 });
        assert!(count_zeros_naive(&s, &Region::Full, 10).is_err());
    }

    #[test]
    fn report_json_shape() {
        let s = sys(&["x1*x2 + x3*x4"], 2, 1, 4);
        let rep = Counter::new(2, DEFAULT_BUDGET).count(&s, &Region::Full).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(json, r#"{"q":2,"n":4,"region":"full","count":10,"scanned":16,"workers":2}"#);
    }
}
