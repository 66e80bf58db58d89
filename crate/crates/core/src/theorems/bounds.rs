use serde_json::json;

use super::LawReport;
use crate::affine::{qpow, AffineSubspace, LinearVerdict, PointSet};
use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::poly::PolySystem;

/// Audits the lower bounds for a nonempty zero set when `n > d`:
/// `N >= q^(n-d)` always, and when the zero set is not an affine subspace
/// (i) `N > q^(n-d)`, (ii) `N >= 2 q^(n-d)` for `q >= 4`, and
/// (iii) `(n+2-d) N >= q^(n+1-d)` for homogeneous systems.
pub fn audit_lower_bounds(sys: &PolySystem, counter: &Counter) -> Result<LawReport> {
    let (n, d) = (sys.nvars() as i64, sys.total_degree() as i64);
    let q = sys.q();
    let mut ev = json!({"n": n, "d": d, "q": q});
    if n <= d {
        return Ok(LawReport::vacuous("lower_bounds", "n>d required", ev));
    }
    let z = counter.zero_set(sys)?;
    let count = z.len() as u128;
    ev["count"] = json!(count);
    if z.is_empty() {
        return Ok(LawReport::vacuous("lower_bounds", "zero set is empty", ev));
    }
    let e = (n - d) as usize;
    let base = qpow(q, e);
    let mut pass = true;

    let war2 = count >= base;
    pass &= war2;
    ev["warning_bound"] = json!({"bound": base, "holds": war2, "equality": count == base});

    let verdict = z.is_linear_subspace();
    ev["linear_subspace"] = json!(match verdict {
        LinearVerdict::Yes(k) => json!({"yes": k}),
        LinearVerdict::No => json!("no"),
    });
    if verdict != LinearVerdict::No {
        ev["theorem2"] = json!({"applicable": false, "reason": "zero set is an affine subspace"});
        return Ok(LawReport::verdict("lower_bounds", pass, ev.clone(), Some(ev)));
    }

    let part_i = count > base;
    let part_ii = (q >= 4).then(|| count >= 2 * base);
    let homogeneous = sys.is_homogeneous();
    // (n+2-d) N >= q^(n+1-d), cross-multiplied
    let part_iii = homogeneous.then(|| (n + 2 - d) as u128 * count >= qpow(q, e + 1));
    pass &= part_i && part_ii.unwrap_or(true) && part_iii.unwrap_or(true);

    // The bound reached by the case analysis with m = ceil(q/(n+2-d)):
    // min(m^(n+1-d), q^(n-d)(q-m), (m+1) q^(n-d)). Reported, not asserted.
    let route = homogeneous.then(|| {
        let m = (q as u128).div_ceil((n + 2 - d) as u128);
        let b = [
            m.pow(e as u32 + 1),
            base * (q as u128).saturating_sub(m),
            (m + 1) * base,
        ]
        .into_iter()
        .min()
        .unwrap();
        json!({"m": m, "bound": b, "holds": count >= b})
    });
    ev["theorem2"] = json!({
        "applicable": true,
        "i": {"bound": base, "strict": true, "holds": part_i},
        "ii": part_ii.map_or(json!({"applicable": false, "reason": "q>=4 required"}), |h| json!({"bound": 2 * base, "holds": h})),
        "iii": part_iii.map_or(
            json!({"applicable": false, "reason": "homogeneous system required"}),
            |h| json!({"numerator": qpow(q, e + 1), "denominator": n + 2 - d, "holds": h}),
        ),
        "route": route,
    });
    Ok(LawReport::verdict("lower_bounds", pass, ev.clone(), Some(ev)))
}

/// Counts around a `d`-dimensional subspace `L` that misses the origin, for a
/// zero set `z` closed under nonzero scalars.
///
/// The span `<L, 0>` splits into the origin, the scalar multiples of points
/// of `L`, and the punctured direction space `W \ {0}` of `L`. So
/// `|z ∩ <L,0>| = 1 + (q-1)|z ∩ L| + |z ∩ (W \ {0})|`; the short form
/// without the last term holds only when `W` meets `z` in the origin alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCheck {
    pub on_l: u64,
    pub on_span: u64,
    pub on_direction: u64,
    pub identity_holds: bool,
    pub short_form_holds: bool,
}

pub fn cone_identity(z: &PointSet, l: &AffineSubspace) -> Result<ConeCheck> {
    if l.contains_origin() {
        return Err(Error::InvalidElement("subspace must avoid the origin".into()));
    }
    let q = l.field().q() as u64;
    let span = l.join_point(&vec![l.field().zero(); l.ambient()])?;
    let w = l.direction();
    let on_l = z.count_in(l) as u64;
    let on_span = z.count_in(&span) as u64;
    let origin = z.contains(&vec![l.field().zero(); l.ambient()]) as u64;
    let on_direction = z.count_in(&w) as u64 - origin;
    Ok(ConeCheck {
        on_l,
        on_span,
        on_direction,
        identity_holds: on_span == origin + (q - 1) * on_l + on_direction,
        short_form_holds: on_span == 1 + (q - 1) * on_l,
    })
}
