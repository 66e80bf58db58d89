//! Counting zeros: the whole space, an affine subspace, an extension field,
//! and the naive oracle the engine is tested against.

use cwlab::counter::{count_zeros_naive, Counter, Region, ORACLE_BUDGET};
use cwlab::format::{parse_sub, parse_sys};

const SYSTEM: &str = "\
# hyperbolic quadric over F_2
field p=2 k=1
vars x1 x2 x3 x4
poly x1*x2 + x3*x4
";

fn main() -> cwlab::Result<()> {
    let sys = parse_sys(SYSTEM)?.system;
    let counter = Counter::default();

    let full = counter.count(&sys, &Region::Full)?;
    println!("{}", serde_json::to_string(&full).unwrap());

    let plane = parse_sub("ambient 4\noffset 0 0 0 1\nbasis 1 0 0 0\nbasis 0 1 0 0\n", sys.field())?;
    println!("on {}: {}", plane.describe(), counter.count_subspace(&sys, &plane)?);
    for (t, c) in counter.counts_over_parallel_class(&sys, &plane)? {
        println!("  translate offset {:?}: {c}", t.offset().iter().map(|e| e.index()).collect::<Vec<_>>());
    }

    for s in 1..=3 {
        println!("over F_(2^{s}): {}", counter.count_ext(&sys, s)?);
    }
    let naive = count_zeros_naive(&sys, &Region::Full, ORACLE_BUDGET)?;
    assert_eq!(naive, full.count);
    println!("oracle agrees: {naive}");
    Ok(())
}
