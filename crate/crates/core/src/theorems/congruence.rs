use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::LawReport;
use crate::affine::{direction_spaces, gaussian_binomial, random_direction_space, AffineSubspace, Point};
use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::poly::PolySystem;
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    /// `p | N` when `n > d`.
    ChevalleyP,
    /// `q | N` when `n > d`.
    AxQ,
    /// Parallel hyperplanes agree mod `p`. Needs hyperplanes of dimension
    /// at least `d`, i.e. `n > d`: at `n = d` the law fails already for `x1`
    /// over `F_2`.
    WarningHyperplanes,
    /// Parallel subspaces of dimension `>= d` agree mod `q`.
    Theorem1,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::ChevalleyP => "chevalley_p",
            Law::AxQ => "ax_q",
            Law::WarningHyperplanes => "warning_hyperplanes",
            Law::Theorem1 => "theorem1",
        }
    }

    pub fn parse(s: &str) -> Option<Law> {
        match s.replace('-', "_").as_str() {
            "chevalley" | "chevalley_p" => Some(Law::ChevalleyP),
            "ax" | "ax_q" => Some(Law::AxQ),
            "warning_hyperplanes" | "warning" => Some(Law::WarningHyperplanes),
            "theorem1" => Some(Law::Theorem1),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Every direction space, falling back to a seeded sample of
    /// `max_directions` spaces when there are more than that.
    AllPairs { max_directions: u128, seed: u64 },
    /// `count` seeded random direction spaces per dimension.
    Sampled { count: usize, seed: u64 },
}

impl Default for Scope {
    fn default() -> Self {
        Scope::AllPairs {
            max_directions: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    pub scope: Scope,
    /// Restrict the subspace laws to a single dimension.
    pub dim: Option<usize>,
    pub counter: Counter,
}

pub fn check_congruence(sys: &PolySystem, law: Law, opts: &CheckOptions) -> Result<LawReport> {
    let (n, d) = (sys.nvars(), sys.total_degree() as usize);
    let f = sys.field();
    let base = json!({"n": n, "d": d, "q": f.q(), "p": f.p()});
    match law {
        Law::ChevalleyP | Law::AxQ => {
            let modulus = if law == Law::AxQ { f.q() } else { f.p() } as u64;
            if n <= d {
                return Ok(LawReport::vacuous(law.name(), "n>d required", base));
            }
            let count = opts.counter.count_full(sys)?;
            let residue = count % modulus;
            let mut ev = base;
            ev["count"] = json!(count);
            ev["modulus"] = json!(modulus);
            ev["residue"] = json!(residue);
            Ok(LawReport::verdict(law.name(), residue == 0, ev, Some(json!({"count": count}))))
        }
        Law::WarningHyperplanes => {
            if n <= d {
                return Ok(LawReport::vacuous(law.name(), "n>d required (hyperplanes of dim >= d)", base));
            }
            if opts.dim.is_some_and(|k| k != n - 1) {
                return Ok(LawReport::vacuous(law.name(), "hyperplanes only", base));
            }
            parallel_law(sys, law, &[n - 1], f.p() as u64, opts, base)
        }
        Law::Theorem1 => {
            let dims: Vec<usize> = match opts.dim {
                Some(k) if k > n => return Err(Error::AmbientMismatch { expected: n, subspace: k }),
                Some(k) if k < d => return Ok(LawReport::vacuous(law.name(), format!("dim {k} < d={d}"), base)),
                Some(k) => vec![k],
                None if d > n => return Ok(LawReport::vacuous(law.name(), "no subspace of dim >= d", base)),
                None => (d..=n).collect(),
            };
            parallel_law(sys, law, &dims, f.q() as u64, opts, base)
        }
    }
}

/// Translate counts of a point set, indexed like `parallel_class()`.
struct ClassCounter<'a> {
    field: &'a FieldSpec,
    zeros: Vec<Point>,
}

impl ClassCounter<'_> {
    fn counts(&self, dir: &AffineSubspace) -> Vec<u64> {
        let f = self.field;
        let q = f.q() as usize;
        let free = dir.free_coordinates();
        let mut out = vec![0u64; q.pow(free.len() as u32)];
        for z in &self.zeros {
            let mut idx = 0usize;
            for &j in &free {
                let mut v = z[j];
                for (row, &pc) in dir.basis().iter().zip(dir.pivots()) {
                    if !row[j].is_zero() && !z[pc].is_zero() {
                        v = f.sub(v, f.mul(z[pc], row[j]));
                    }
                }
                idx = idx * q + v.index() as usize;
            }
            out[idx] += 1;
        }
        out
    }
}

fn parallel_law(sys: &PolySystem, law: Law, dims: &[usize], modulus: u64, opts: &CheckOptions, mut ev: Value) -> Result<LawReport> {
    let f = sys.field();
    let n = sys.nvars();
    let zeros = opts.counter.zero_set(sys)?;
    let cc = ClassCounter {
        field: f,
        zeros: zeros.iter().cloned().collect(),
    };
    let total: u128 = dims.iter().map(|&k| gaussian_binomial(f.q(), n, k)).sum();
    let mut per_dim = Vec::new();
    let mut classes = 0u64;
    for &k in dims {
        let available = gaussian_binomial(f.q(), n, k);
        let (dirs, mode): (Vec<AffineSubspace>, &str) = match opts.scope {
            Scope::AllPairs { max_directions, .. } if total <= max_directions => {
                (direction_spaces(f, n, k).collect(), "all")
            }
            Scope::AllPairs { max_directions, seed } => {
                let share = (max_directions * available / total).max(1);
                if available <= share {
                    (direction_spaces(f, n, k).collect(), "all")
                } else {
                    let mut rng = SplitMix64::new(seed ^ k as u64);
                    ((0..share).map(|_| random_direction_space(f, n, k, &mut rng)).collect(), "sampled")
                }
            }
            Scope::Sampled { count, seed } => {
                let mut rng = SplitMix64::new(seed ^ k as u64);
                ((0..count).map(|_| random_direction_space(f, n, k, &mut rng)).collect(), "sampled")
            }
        };
        let mut residue_classes: BTreeMap<u64, u64> = BTreeMap::new();
        for dir in &dirs {
            let counts = cc.counts(dir);
            classes += 1;
            let r0 = counts[0] % modulus;
            if let Some(i) = counts.iter().position(|c| c % modulus != r0) {
                let class = dir.parallel_class();
                let witness = json!({
                    "dim": k,
                    "translates": [class[0].describe(), class[i].describe()],
                    "counts": [counts[0], counts[i]],
                    "modulus": modulus,
                });
                ev["dims"] = json!(per_dim);
                return Ok(LawReport::verdict(law.name(), false, ev, Some(witness)));
            }
            *residue_classes.entry(r0).or_default() += 1;
        }
        per_dim.push(json!({
            "dim": k,
            "directions": dirs.len(),
            "available": available,
            "mode": mode,
            "residues": residue_classes,
        }));
    }
    ev["zeros"] = json!(zeros.len());
    ev["modulus"] = json!(modulus);
    ev["classes_checked"] = json!(classes);
    ev["dims"] = json!(per_dim);
    let (Scope::AllPairs { seed, .. } | Scope::Sampled { seed, .. }) = opts.scope;
    ev["seed"] = json!(seed);
    Ok(LawReport::verdict(law.name(), true, ev, None))
}

/// Counts `f`, `f_-` and `f_+` and checks
/// `N(f_+) = (q-1) N(f) + N(f_-)`, and `N(f) = N(f_-) mod q` when `n >= d`.
pub fn verify_homogenization_identity(sys: &PolySystem, counter: &Counter) -> Result<LawReport> {
    let plus = sys.homogenized()?;
    let minus = sys.leading_forms()?;
    let q = sys.q() as u64;
    let n_f = counter.count_full(sys)?;
    let n_minus = counter.count_full(&minus)?;
    let n_plus = counter.count_full(&plus)?;
    let identity = n_plus == (q - 1) * n_f + n_minus;
    let congruence_applies = sys.nvars() >= sys.total_degree() as usize;
    let congruent = !congruence_applies || n_f % q == n_minus % q;
    let ev = json!({
        "q": q,
        "n": sys.nvars(),
        "d": sys.total_degree(),
        "count_f": n_f,
        "count_minus": n_minus,
        "count_plus": n_plus,
        "identity": identity,
        "mod_q_applies": congruence_applies,
        "mod_q": congruent,
    });
    Ok(LawReport::verdict("homogenization_identity", identity && congruent, ev.clone(), Some(ev)))
}
