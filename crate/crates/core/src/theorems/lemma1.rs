use serde_json::json;

use super::LawReport;
use crate::affine::{qpow, AffineSubspace, PointSet};
use crate::error::{Error, Result};

/// Grows `l0` to a subspace `L` with the same number of points of `z`, picks
/// the `(k+1)`-dimensional `L' ⊃ L` with fewest points, and checks
/// `|z| >= |z∩L| + (q^(n-k)-1)/(q-1) (|z∩L'| - |z∩L|)`.
///
/// Growth takes the canonically first superspace that keeps the count, and
/// stops once every superspace of the current `L` changes it; that final
/// check certifies `L` is maximal by inclusion.
pub fn lemma1_witness(z: &PointSet, l0: &AffineSubspace) -> Result<LawReport> {
    if z.ambient() != l0.ambient() || **z.field() != **l0.field() {
        return Err(Error::AmbientMismatch {
            expected: z.ambient(),
            subspace: l0.ambient(),
        });
    }
    if l0.is_full() {
        return Err(Error::FullSpace);
    }
    let q = l0.field().q() as u128;
    let n = l0.ambient();
    let target = z.count_in(l0);
    let mut l = l0.clone();
    let mut steps = 0;
    let (lp, lp_count) = loop {
        if l.is_full() {
            break (None, None);
        }
        let supers = l.superspaces()?;
        let counts: Vec<usize> = supers.iter().map(|s| z.count_in(s)).collect();
        if let Some(i) = counts.iter().position(|&c| c == target) {
            l = supers[i].clone();
            steps += 1;
            continue;
        }
        // ties resolved by the canonical order of `supers`
        let (i, &c) = counts.iter().enumerate().min_by_key(|&(i, &c)| (c, i)).unwrap();
        break (Some(supers[i].clone()), Some(c));
    };
    let k = l.dim();
    let total = z.len() as u128;
    let n_l = target as u128;
    let multiplier = (qpow(q as u32, n - k) - 1) / (q - 1);
    let bound = n_l + multiplier * (lp_count.unwrap_or(target) as u128 - n_l);
    let holds = total >= bound;
    let ev = json!({
        "n": n,
        "q": q,
        "l0": l0.describe(),
        "l": l.describe(),
        "k": k,
        "growth_steps": steps,
        "maximal": true,
        "l_prime": lp.as_ref().map(|s| s.describe()),
        "count_total": total,
        "count_l": n_l,
        "count_l_prime": lp_count,
        "multiplier": multiplier,
        "bound": bound,
        "equality": total == bound,
    });
    Ok(LawReport::verdict("lemma1", holds, ev.clone(), Some(ev)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldSpec;
    use crate::rng::SplitMix64;

    #[test]
    fn line_in_the_plane() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let (o, i) = (f3.zero(), f3.one());
        let line = AffineSubspace::new(&f3, vec![o, o], vec![vec![o, i]]).unwrap();
        let z = PointSet::from_subspace(&line);
        let r = lemma1_witness(&z, &AffineSubspace::point(&f3, vec![o, o]).unwrap()).unwrap();
        assert!(r.pass);
        assert_eq!(r.evidence["k"], 1);
        assert_eq!(r.evidence["count_l_prime"], 3);
        assert_eq!(r.evidence["bound"], 3);
        assert_eq!(r.evidence["equality"], true);
    }

    #[test]
    fn empty_and_full_sets() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let p = AffineSubspace::point(&f2, vec![f2.zero(), f2.one()]).unwrap();
        let empty = PointSet::new(&f2, 2, []).unwrap();
        let r = lemma1_witness(&empty, &p).unwrap();
        assert!(r.pass);
        assert_eq!(r.evidence["bound"], 0);
        assert_eq!(r.evidence["k"], 2);

        let all = PointSet::from_subspace(&AffineSubspace::full(&f2, 2));
        let r = lemma1_witness(&all, &p).unwrap();
        assert!(r.pass);
        assert_eq!(r.evidence["k"], 0);
        assert_eq!(r.evidence["count_l_prime"], 2);
        assert_eq!(r.evidence["bound"], 4);
        assert_eq!(lemma1_witness(&all, &AffineSubspace::full(&f2, 2)), Err(Error::FullSpace));
    }

    #[test]
    fn random_sets() {
        let mut rng = SplitMix64::new(5);
        for (p, k, n) in [(2u64, 1u32, 3usize), (3, 1, 2), (2, 2, 2), (3, 1, 3)] {
            let f = FieldSpec::new(p, k).unwrap();
            let all: Vec<_> = AffineSubspace::full(&f, n).points().collect();
            for _ in 0..30 {
                let pts = all.iter().filter(|_| rng.coin()).cloned();
                let z = PointSet::new(&f, n, pts).unwrap();
                let l0 = AffineSubspace::point(&f, rng.choose(&all).clone()).unwrap();
                assert!(lemma1_witness(&z, &l0).unwrap().pass);
            }
        }
    }
}
