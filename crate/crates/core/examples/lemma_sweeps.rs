//! The covering inequality on a zero set, and exhaustive sweeps of the
//! line-closure lemma over every subset of small affine spaces.

use cwlab::affine::AffineSubspace;
use cwlab::counter::Counter;
use cwlab::ff::FieldSpec;
use cwlab::format::parse_sys;
use cwlab::theorems::{lemma1_witness, lemma2_exhaustive, Lemma2Part, SubsetMode};

fn main() -> cwlab::Result<()> {
    let sys = parse_sys("field p=3\nvars x1 x2 x3\npoly x1*x2 - x3\n")?.system;
    let z = Counter::default().zero_set(&sys)?;
    let f = sys.field();
    let start = AffineSubspace::point(f, vec![f.zero(); 3])?;
    let r = lemma1_witness(&z, &start)?;
    println!("lemma 1: {} L = {}, bound {} <= {}", r.status().as_str(), r.evidence["l"], r.evidence["bound"], r.evidence["count_total"]);

    for (q, t, part) in [
        (2, 3, Lemma2Part::I),
        (3, 2, Lemma2Part::II),
        (4, 2, Lemma2Part::III),
        (5, 1, Lemma2Part::IV(3)),
    ] {
        let r = lemma2_exhaustive(&FieldSpec::from_order(q)?, t, part, SubsetMode::Exhaustive)?;
        let e = &r.evidence;
        println!(
            "{:<14} q={q} t={t}: {} subsets, hypothesis held {}, counterexamples {}",
            r.law, e["subsets"], e["hypothesis_held"], e["counterexamples"]
        );
    }
    let r = lemma2_exhaustive(
        &FieldSpec::from_order(5)?,
        2,
        Lemma2Part::IV(2),
        SubsetMode::Sampled { count: 20_000, seed: 1 },
    )?;
    println!("{} sampled: {}", r.law, r.evidence);
    Ok(())
}
