//! Dimension estimates from counts over extension fields, a scan for
//! `D >= n - d`, and a linear-factor test for forms.
//!
//! The estimator fits `N_s ~ k q^(sD)`. It is a heuristic stand-in for a
//! decomposition of the zero set over the algebraic closure, and reports
//! residuals rather than a verdict.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::constructions::random_system;
use crate::counter::{region_size, Counter};
use crate::error::{Error, Result};
use crate::ff::{embed_subfield, FieldElement, FieldSpec};
use crate::poly::{MultiPoly, PolySystem};
use crate::rng::SplitMix64;
use crate::theorems::LawReport;

pub const SUBSTITUTION_NOTE: &str =
    "dimension estimated from point counts over F_{q^s}; no decomposition over the algebraic closure is computed";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub q: u32,
    pub n: usize,
    /// `(s, N_s)` for `s = 1..=s_max`.
    pub counts: Vec<(u32, u64)>,
    /// `None` when every count is zero.
    #[serde(rename = "D_hat")]
    pub d_hat: Option<u32>,
    #[serde(rename = "k_hat")]
    pub k_hat: Option<u64>,
    /// `|N_s - k q^(sD)| / q^(s(D - 1/2))`.
    pub residuals: Vec<f64>,
    /// Which rule produced `D_hat`: "pair", "floor" or "empty".
    pub rule: &'static str,
    pub note: &'static str,
}

impl DimensionEstimate {
    pub fn is_empty(&self) -> bool {
        self.d_hat.is_none()
    }
}

/// Fits `D` and `k` to counts `N_1..N_smax` over `F_{q^s}`.
///
/// With `s*` the largest `s` having `N_s > 0` and `Q = q^(s*)`:
/// `D_floor` is the largest `D` with `Q^D <= N_{s*}`, and `D_pair` is
/// `round(log_q(N_{s*} / N_{s*-1}))`. The pair estimate wins when it is
/// exactly one above the floor (lower-order terms pulled `N` below `Q^D`) and
/// at most `n`; otherwise the floor stands, which also covers counts that
/// jump because a component only becomes visible over some extensions.
pub fn estimate_from_counts(q: u32, n: usize, counts: &[(u32, u64)]) -> DimensionEstimate {
    let mut est = DimensionEstimate {
        q,
        n,
        counts: counts.to_vec(),
        d_hat: None,
        k_hat: None,
        residuals: Vec::new(),
        rule: "empty",
        note: SUBSTITUTION_NOTE,
    };
    let Some(&(s_star, top)) = counts.iter().rev().find(|&&(_, c)| c > 0) else {
        return est;
    };
    let qf = q as f64;
    let big = qf.powi(s_star as i32);
    let mut floor = 0u32;
    while (floor as usize) < n && big.powi(floor as i32 + 1) <= top as f64 {
        floor += 1;
    }
    let prev = counts.iter().find(|&&(s, _)| s + 1 == s_star).map(|&(_, c)| c).filter(|&c| c > 0);
    let pair = prev.map(|p| ((top as f64 / p as f64).ln() / qf.ln()).round());
    let (d, rule) = match pair {
        Some(dp) if dp == floor as f64 + 1.0 && dp <= n as f64 => (dp as u32, "pair"),
        _ => (floor, "floor"),
    };
    let k = ((top as f64 / big.powi(d as i32)).round() as u64).max(1);
    est.residuals = counts
        .iter()
        .map(|&(s, c)| {
            let qs = qf.powi(s as i32);
            (c as f64 - k as f64 * qs.powi(d as i32)).abs() / qs.powf(d as f64 - 0.5)
        })
        .collect();
    est.d_hat = Some(d);
    est.k_hat = Some(k);
    est.rule = rule;
    est
}

/// Counts zeros over `F_{q^s}` for `s = 1..=s_max` and fits `D`, `k`.
pub fn estimate_dimension(sys: &PolySystem, s_max: u32, counter: &Counter) -> Result<DimensionEstimate> {
    if s_max < 2 {
        return Err(Error::InsufficientExtensions);
    }
    let q = sys.q();
    let n = sys.nvars();
    let needed = region_size(q, n * s_max as usize);
    Error::budget(needed, counter.budget)?;
    let counts = (1..=s_max)
        .map(|s| Ok((s, if s == 1 { counter.count_full(sys)? } else { counter.count_ext(sys, s)? })))
        .collect::<Result<Vec<_>>>()?;
    Ok(estimate_from_counts(q, n, &counts))
}

/// The corpus behind a conjecture scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub qs: Vec<u32>,
    pub ns: Vec<usize>,
    /// Degree profiles; when `d >= n` no flag is possible but the row is kept.
    pub profiles: Vec<Vec<u32>>,
    pub per_cell: usize,
    pub seed: u64,
    /// Largest `s` tried; reduced per cell so `q^(s n)` stays under `cell_budget`.
    pub s_max: u32,
    pub cell_budget: u128,
}

impl ScanConfig {
    /// `q in {2,3}`, `n <= 4`, total degree `<= 3`.
    pub fn small(seed: u64) -> Self {
        ScanConfig {
            qs: vec![2, 3],
            ns: vec![1, 2, 3, 4],
            profiles: vec![vec![1], vec![2], vec![3], vec![1, 1], vec![2, 1], vec![1, 1, 1]],
            per_cell: 5,
            seed,
            s_max: 3,
            cell_budget: 1 << 20,
        }
    }

    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        match name {
            "small" => Some(Self::small(seed)),
            "tiny" => Some(ScanConfig {
                qs: vec![2],
                ns: vec![2, 3],
                profiles: vec![vec![1], vec![2]],
                per_cell: 3,
                ..Self::small(seed)
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub q: u32,
    pub n: usize,
    pub degrees: String,
    pub d: u32,
    pub seed: u64,
    pub s_max: u32,
    pub counts: String,
    pub d_hat: Option<u32>,
    pub k_hat: Option<u64>,
    pub bound: i64,
    pub flag: bool,
}

pub const SCAN_HEADER: &str = "q,n,degrees,d,seed,s_max,counts,D_hat,k_hat,n_minus_d,flag";

impl ScanRow {
    pub fn csv(&self) -> String {
        let opt = |o: Option<u64>| o.map_or("empty".to_string(), |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.q,
            self.n,
            self.degrees,
            self.d,
            self.seed,
            self.s_max,
            self.counts,
            opt(self.d_hat.map(u64::from)),
            opt(self.k_hat),
            self.bound,
            self.flag
        )
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Survey of seeded random systems; flags any nonempty one with `D_hat < n - d`.
/// A flag is a candidate for inspection, not a refutation.
pub fn conjecture_scan(cfg: &ScanConfig, counter: &Counter) -> Result<(LawReport, Vec<ScanRow>)> {
    let mut rows = Vec::new();
    let mut seeds = SplitMix64::new(cfg.seed);
    for &q in &cfg.qs {
        let field = FieldSpec::from_order(q as u64)?;
        for &n in &cfg.ns {
            let mut s_max = cfg.s_max;
            while s_max > 2 && region_size(q, n * s_max as usize) > cfg.cell_budget {
                s_max -= 1;
            }
            for degs in &cfg.profiles {
                let d: u32 = degs.iter().sum();
                for _ in 0..cfg.per_cell {
                    let seed = seeds.next_u64();
                    let sys = random_system(&field, n, degs, seed)?.system;
                    let est = estimate_dimension(&sys, s_max, counter)?;
                    let bound = n as i64 - d as i64;
                    rows.push(ScanRow {
                        q,
                        n,
                        degrees: join(degs, " "),
                        d,
                        seed,
                        s_max,
                        counts: join(est.counts.iter().map(|c| c.1), " "),
                        d_hat: est.d_hat,
                        k_hat: est.k_hat,
                        bound,
                        flag: est.d_hat.is_some_and(|dh| (dh as i64) < bound),
                    });
                }
            }
        }
    }
    let nonempty = rows.iter().filter(|r| r.d_hat.is_some()).count();
    let flags: Vec<_> = rows.iter().filter(|r| r.flag).map(|r| json!({"q": r.q, "n": r.n, "degrees": r.degrees, "seed": r.seed})).collect();
    let ev = json!({
        "systems": rows.len(),
        "nonempty": nonempty,
        "empty_excluded": rows.len() - nonempty,
        "flags": flags.len(),
        "seed": cfg.seed,
        "note": SUBSTITUTION_NOTE,
    });
    let witness = json!({"flagged": flags});
    let report = if nonempty == 0 {
        LawReport::vacuous("conjecture_scan", "no nonempty systems", ev)
    } else {
        LawReport::verdict("conjecture_scan", flags.is_empty(), ev, Some(witness))
    };
    Ok((report, rows))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FactorVerdict {
    HasFactor {
        /// Coefficients of the normalized form over `F_{q^s}`, formatted.
        witness: Vec<String>,
        text: String,
    },
    NoneFound {
        /// Per-form bound `(d / q^s)^T` as an exact fraction.
        error_bound: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub q: u32,
    pub s: u32,
    pub trials: u32,
    pub seed: u64,
    pub forms_total: u128,
    /// Forms ruled out because `f` fails to vanish on a coordinate line of the hyperplane.
    pub prefiltered: u128,
    pub sampled: u64,
    pub exact_checks: u64,
    #[serde(flatten)]
    pub verdict: FactorVerdict,
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduced_power_fraction(num: u128, den: u128, t: u32) -> String {
    let (n, d) = (num.checked_pow(t), den.checked_pow(t));
    match (n, d) {
        (Some(n), Some(d)) => {
            let g = gcd(n, d).max(1);
            format!("{}/{}", n / g, d / g)
        }
        _ => format!("({num}/{den})^{t}"),
    }
}

/// Searches for a linear factor `x_j + Σ_{i>j} a_i x_i` of the form `f` over
/// `F_{q^s}`.
///
/// If `ℓ | f`, then `f` vanishes on `ℓ = 0`, in particular at `e_i - a_i e_j`,
/// so each `a_i` is a root of `a -> f(e_i - a e_j)`; only forms built from those
/// roots are tested. Each survivor is evaluated at `trials` random points of
/// its hyperplane and, if `f` vanished at all of them, substituted exactly.
pub fn linear_factor_test(f: &MultiPoly, s: u32, trials: u32, seed: u64, counter: &Counter) -> Result<FactorReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let base = f.field();
    let big = FieldSpec::new(base.p() as u64, base.k() * s)?;
    let emb = embed_subfield(base, &big)?;
    let g = f.lift(&emb)?;
    let n = g.nvars();
    let d = g.total_degree().unwrap_or(0);
    let qq = big.q() as u128;
    let forms_total = (0..n).map(|j| crate::affine::qpow(big.q(), n - 1 - j)).sum::<u128>();
    let zero = big.zero();

    // candidate coefficient sets per (j, i)
    let unit = |i: usize| {
        let mut v = vec![zero; n];
        v[i] = big.one();
        v
    };
    let mut jobs = Vec::new();
    let mut candidates_total = 0u128;
    for j in 0..n {
        let cands: Vec<Vec<FieldElement>> = (j + 1..n)
            .map(|i| {
                big.elements()
                    .filter(|&a| {
                        let mut x = unit(i);
                        x[j] = big.neg(a);
                        g.eval_unchecked(&x).is_zero()
                    })
                    .collect()
            })
            .collect();
        let size = cands.iter().map(|c| c.len() as u128).product::<u128>();
        candidates_total += size;
        jobs.push((j, cands));
    }
    Error::budget(candidates_total, counter.budget)?;

    let workers = counter.workers.max(1).min(jobs.len().max(1));
    let results: Vec<(Option<Vec<FieldElement>>, u64, u64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let jobs = &jobs;
                let g = &g;
                let big = &big;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for (idx, (j, cands)) in jobs.iter().enumerate() {
                        if idx % workers != w {
                            continue;
                        }
                        let mut rng = SplitMix64::new(seed ^ (*j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                        out.push((idx, search(g, big, *j, cands, trials, &mut rng)));
                    }
                    out
                })
            })
            .collect();
        let mut all: Vec<_> = handles.into_iter().flat_map(|h| h.join().unwrap()).collect();
        all.sort_by_key(|x| x.0);
        all.into_iter().map(|x| x.1).collect()
    });
    let sampled = results.iter().map(|r| r.1).sum();
    let exact_checks = results.iter().map(|r| r.2).sum();
    let found = results.into_iter().find_map(|r| r.0);
    let verdict = match found {
        Some(coeffs) => {
            let names = crate::poly::default_names(n);
            let form = coeffs
                .iter()
                .enumerate()
                .fold(MultiPoly::zero(&big, n), |acc, (i, &c)| &acc + &MultiPoly::var(&big, n, i).scale(c));
            FactorVerdict::HasFactor {
                witness: coeffs.iter().map(|&c| big.format_element(c)).collect(),
                text: form.format_with(&names),
            }
        }
        None => FactorVerdict::NoneFound {
            error_bound: reduced_power_fraction(d as u128, qq, trials),
        },
    };
    Ok(FactorReport {
        q: base.q(),
        s,
        trials,
        seed,
        forms_total,
        prefiltered: forms_total - candidates_total,
        sampled,
        exact_checks,
        verdict,
    })
}

/// Walks every combination of candidates for leading position `j`.
fn search(
    g: &MultiPoly,
    big: &Arc<FieldSpec>,
    j: usize,
    cands: &[Vec<FieldElement>],
    trials: u32,
    rng: &mut SplitMix64,
) -> (Option<Vec<FieldElement>>, u64, u64) {
    let n = g.nvars();
    let (mut sampled, mut exact) = (0u64, 0u64);
    if cands.iter().any(|c| c.is_empty()) {
        return (None, 0, 0);
    }
    let mut idx = vec![0usize; cands.len()];
    loop {
        let mut coeffs = vec![big.zero(); n];
        coeffs[j] = big.one();
        for (t, &k) in idx.iter().enumerate() {
            coeffs[j + 1 + t] = cands[t][k];
        }
        let mut survives = true;
        for _ in 0..trials {
            sampled += 1;
            let mut x: Vec<FieldElement> = (0..n).map(|_| rng.element(big)).collect();
            // x_j = -Σ a_i x_i puts x on the hyperplane
            let tail = (j + 1..n).fold(big.zero(), |acc, i| big.add(acc, big.mul(coeffs[i], x[i])));
            x[j] = big.neg(tail);
            if !g.eval_unchecked(&x).is_zero() {
                survives = false;
                break;
            }
        }
        if survives {
            exact += 1;
            if divides(g, big, j, &coeffs) {
                return (Some(coeffs), sampled, exact);
            }
        }
        // odometer, last position fastest
        let mut t = idx.len();
        loop {
            if t == 0 {
                return (None, sampled, exact);
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < cands[t].len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

/// `ℓ | f` iff `f` vanishes identically after `x_j := -Σ_{i != j} a_i x_i`.
fn divides(g: &MultiPoly, big: &Arc<FieldSpec>, j: usize, coeffs: &[FieldElement]) -> bool {
    let n = g.nvars();
    let subs: Vec<MultiPoly> = (0..n)
        .map(|i| {
            if i != j {
                return MultiPoly::var(big, n, i);
            }
            (0..n)
                .filter(|&m| m != j)
                .fold(MultiPoly::zero(big, n), |acc, m| &acc + &MultiPoly::var(big, n, m).scale(big.neg(coeffs[m])))
        })
        .collect();
    g.compose(&subs).map(|h| h.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_two, norm_form};
    use crate::poly::{default_names, parse_poly};

    fn poly(text: &str, q: u64, n: usize) -> MultiPoly {
        parse_poly(text, &FieldSpec::from_order(q).unwrap(), &default_names(n)).unwrap()
    }

    fn est(text: &str, q: u64, n: usize, s_max: u32) -> DimensionEstimate {
        estimate_dimension(&PolySystem::single(poly(text, q, n)), s_max, &Counter::default()).unwrap()
    }

    #[test]
    fn hyperplane_and_two_lines() {
        let e = est("x1", 2, 2, 4);
        assert_eq!(e.counts, vec![(1, 2), (2, 4), (3, 8), (4, 16)]);
        assert_eq!((e.d_hat, e.k_hat), (Some(1), Some(1)));
        assert!(e.residuals.iter().all(|&r| r == 0.0));

        let e = est("x1*x2", 2, 2, 4);
        assert_eq!(e.counts, vec![(1, 3), (2, 7), (3, 15), (4, 31)]);
        assert_eq!((e.d_hat, e.k_hat), (Some(1), Some(2)));
    }

    #[test]
    fn norm_form_splits_over_even_extensions() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let s = norm_form(&f2, 2).unwrap().system;
        let e = estimate_dimension(&s, 4, &Counter::default()).unwrap();
        assert_eq!(e.counts, vec![(1, 1), (2, 7), (3, 1), (4, 31)]);
        assert_eq!((e.d_hat, e.k_hat), (Some(1), Some(2)));
        assert_eq!(e.rule, "floor");
    }

    #[test]
    fn hyperbola_uses_the_pair() {
        let e = est("x1*x2 - 1", 3, 2, 3);
        assert_eq!(e.d_hat, Some(1));
        assert_eq!(e.rule, "pair");
    }

    #[test]
    fn empty_and_errors() {
        let e = est("x1^2 + x1 + 1", 2, 1, 3);
        assert_eq!(e.counts[2], (3, 0));
        assert_eq!(e.d_hat, Some(0));
        let e = est("1", 3, 2, 2);
        assert!(e.is_empty());
        assert_eq!(e.rule, "empty");
        let s = PolySystem::single(poly("x1", 2, 2));
        assert_eq!(estimate_dimension(&s, 1, &Counter::default()), Err(Error::InsufficientExtensions));
        assert!(matches!(
            estimate_dimension(&s, 4, &Counter::new(1, 100)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn products_of_linear_forms() {
        for (text, q, n, t) in [
            ("x1*(x1+1)", 2, 1, 2),
            ("x1*(x1+1)*(x1+2)", 3, 1, 3),
            ("x1*x2*(x1+x2)", 2, 2, 3),
            ("x1*x2*x3", 2, 3, 3),
            ("(x1+1)*(x2+x3)", 3, 3, 2),
        ] {
            let e = est(text, q, n, 3);
            assert_eq!((e.d_hat, e.k_hat), (Some(n as u32 - 1), Some(t)), "{text}");
        }
    }

    #[test]
    fn linear_factors() {
        let c = Counter::default();
        let r = linear_factor_test(&poly("x1*(x1+x2)", 2, 2), 1, 4, 0, &c).unwrap();
        assert!(matches!(r.verdict, FactorVerdict::HasFactor { ref text, .. } if text == "x1" || text == "x1 + x2"));

        let f2 = FieldSpec::new(2, 1).unwrap();
        let nf = norm_form(&f2, 2).unwrap().system.polys()[0].clone();
        let r = linear_factor_test(&nf, 1, 4, 0, &c).unwrap();
        assert_eq!(r.forms_total, 3);
        assert!(matches!(r.verdict, FactorVerdict::NoneFound { .. }));
        // splits over F_4
        let r = linear_factor_test(&nf, 2, 4, 0, &c).unwrap();
        assert!(matches!(r.verdict, FactorVerdict::HasFactor { .. }));

        assert_eq!(
            linear_factor_test(&poly("x1 + 1", 2, 1), 1, 1, 0, &c).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn example_two_has_no_linear_factor() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let f = example_two(&f3).unwrap().system.polys()[0].clone();
        let r = linear_factor_test(&f, 4, 6, 1, &Counter::default()).unwrap();
        assert_eq!(r.forms_total, 81u128.pow(3) + 81 * 81 + 81 + 1);
        assert_eq!(
            r.verdict,
            FactorVerdict::NoneFound {
                error_bound: "4096/282429536481".into()
            }
        );
    }

    #[test]
    fn scan_tiny() {
        let (rep, rows) = conjecture_scan(&ScanConfig::preset("tiny", 3).unwrap(), &Counter::default()).unwrap();
        assert!(rep.pass);
        assert!(rows.iter().all(|r| !r.flag));
        assert!(rows.iter().all(|r| r.csv().split(',').count() == SCAN_HEADER.split(',').count()));
    }
}
