//! The congruence family on one system: Chevalley, Ax, parallel hyperplanes,
//! parallel subspaces of every dimension >= d, and the homogenization identity.

use cwlab::constructions::random_system;
use cwlab::ff::FieldSpec;
use cwlab::theorems::{check_congruence, verify_homogenization_identity, CheckOptions, Law};

fn main() -> cwlab::Result<()> {
    let f4 = FieldSpec::from_order(4)?;
    let sys = random_system(&f4, 4, &[2, 1], 7)?.system;
    println!("system over GF(4), n = 4, degrees {:?}", sys.degrees());
    for line in sys.format_with(&cwlab::poly::default_names(4)) {
        println!("  {line}");
    }
    let opts = CheckOptions::default();
    for law in [Law::ChevalleyP, Law::AxQ, Law::WarningHyperplanes, Law::Theorem1] {
        let r = check_congruence(&sys, law, &opts)?;
        println!("{:<20} {:<8} {}", law.name(), r.status().as_str(), r.evidence);
    }
    let h = verify_homogenization_identity(&sys, &opts.counter)?;
    println!("homogenization: {} {}", h.status().as_str(), h.evidence);

    // n = d: the laws are not claimed, and the checker says so
    let f2 = FieldSpec::from_order(2)?;
    let tight = random_system(&f2, 3, &[3], 1)?.system;
    let r = check_congruence(&tight, Law::AxQ, &opts)?;
    println!("n = d: {} ({})", r.status().as_str(), r.evidence["reason"]);
    Ok(())
}
