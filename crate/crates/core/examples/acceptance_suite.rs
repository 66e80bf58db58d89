//! Runs the named-example batteries and prints one line per criterion.
//! `cargo test --test acceptance -- --nocapture` runs all eleven.

use cwlab::campaign::{preset, SuiteConfig};

fn main() -> cwlab::Result<()> {
    let cfg = SuiteConfig::default();
    for battery in preset("examples").unwrap().into_iter().chain(preset("lemma2-exhaustive").unwrap()) {
        let r = battery(&cfg)?;
        println!("{}", r.line());
    }
    Ok(())
}
