//! Estimating dimension and component count from counts over F_{q^s}, and a
//! small scan for systems whose estimate falls below n - d.

use cwlab::counter::Counter;
use cwlab::format::parse_sys;
use cwlab::geometry::{conjecture_scan, estimate_dimension, ScanConfig};

fn main() -> cwlab::Result<()> {
    let counter = Counter::default();
    for text in [
        "field p=2\nvars x y\npoly x\n",
        "field p=2\nvars x y\npoly x*y\n",
        "field p=2\nvars x y\npoly x^2 + x*y + y^2\n",
        "field p=3\nvars x y z\npoly x*y*z\n",
        "field p=3\nvars x y z\npoly x^2 + y^2 + z^2 - 1\n",
    ] {
        let sys = parse_sys(text)?.system;
        let s_max = if sys.nvars() > 2 { 3 } else { 4 };
        let e = estimate_dimension(&sys, s_max, &counter)?;
        let counts: Vec<u64> = e.counts.iter().map(|c| c.1).collect();
        println!(
            "{:<28} counts {:?} -> D_hat {:?}, k_hat {:?} ({})",
            text.lines().last().unwrap(),
            counts,
            e.d_hat,
            e.k_hat,
            e.rule
        );
    }
    let (report, rows) = conjecture_scan(&ScanConfig::small(0), &counter)?;
    println!("scan: {} systems, {} flags", rows.len(), report.evidence["flags"]);
    Ok(())
}
