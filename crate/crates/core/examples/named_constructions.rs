//! Norm forms, the quadric-times-norm-form family, and the quartic with a
//! single zero that has no linear factor.

use cwlab::constructions::{example_one_detailed, example_two_detailed, norm_form};
use cwlab::counter::Counter;
use cwlab::ff::FieldSpec;
use cwlab::geometry::linear_factor_test;
use cwlab::poly::default_names;

fn main() -> cwlab::Result<()> {
    let counter = Counter::default();
    for (q, k) in [(2, 2), (2, 3), (3, 2), (4, 2)] {
        let f = FieldSpec::from_order(q)?;
        let nf = norm_form(&f, k)?.system;
        println!("N_{k} over GF({q}): {}   zeros: {}", nf.format_with(&default_names(k as usize))[0], counter.count_full(&nf)?);
    }

    let f2 = FieldSpec::from_order(2)?;
    for n in 4..=6 {
        let ex = example_one_detailed(&f2, n)?;
        let count = counter.count_full(&ex.construction.system)?;
        println!(
            "Q * N_{} over GF(2), n = {n}: count {count}, derived {}, closed form {}{}",
            n - 4,
            ex.derived_total,
            ex.displayed_total,
            if ex.discrepancy() { "  (differs)" } else { "" }
        );
    }

    for q in [3, 4] {
        let ex = example_two_detailed(&FieldSpec::from_order(q)?)?;
        let f = &ex.construction.system.polys()[0];
        let zeros = counter.count_full(&ex.construction.system)?;
        let lf = linear_factor_test(f, 4, 6, 0, &counter)?;
        println!(
            "quartic over GF({q}): {} terms, beta = {}, zeros {zeros}, linear factor over GF({q}^4): {}",
            f.num_terms(),
            ex.quadratic.format_element(ex.beta),
            serde_json::to_string(&lf.verdict).unwrap()
        );
    }
    match example_two_detailed(&f2) {
        Err(e) => println!("q = 2: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
