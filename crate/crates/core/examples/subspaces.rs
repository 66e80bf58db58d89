//! Affine subspaces in canonical form: parallel classes, superspaces and the
//! `.sub` text format.

use cwlab::affine::{direction_spaces, gaussian_binomial, AffineSubspace};
use cwlab::ff::FieldSpec;
use cwlab::format::{parse_sub, write_sub};

fn main() -> cwlab::Result<()> {
    let f3 = FieldSpec::from_order(3)?;
    let e = |n| f3.from_int(n);
    // the same line given two different ways
    let a = AffineSubspace::new(&f3, vec![e(1), e(1), e(0)], vec![vec![e(2), e(2), e(1)]])?;
    let b = AffineSubspace::new(&f3, vec![e(0), e(0), e(1)], vec![vec![e(1), e(1), e(2)]])?;
    println!("{}\n{}\nequal: {}", a.describe(), b.describe(), a == b);

    let class = a.parallel_class();
    println!("parallel class: {} translates of {} points", class.len(), a.size());
    println!("superspaces: {}", a.superspaces()?.len());
    println!("planes through the origin in A^3(F_3): {} = {}", direction_spaces(&f3, 3, 2).count(), gaussian_binomial(3, 3, 2));

    let text = write_sub(&a);
    print!("{text}");
    assert_eq!(parse_sub(&text, &f3)?, a);
    Ok(())
}
