//! Lower bounds for nonempty zero sets, and the cone identity for forms.

use cwlab::affine::AffineSubspace;
use cwlab::counter::Counter;
use cwlab::format::parse_sys;
use cwlab::theorems::{audit_lower_bounds, cone_identity};

fn main() -> cwlab::Result<()> {
    let counter = Counter::default();
    for text in [
        "field p=5\nvars x1 x2 x3\npoly x1*x2\n",
        "field p=3\nvars x1 x2 x3\npoly x1^2 + x2^2\n",
        "field p=2 k=2\nvars x1 x2 x3 x4\npoly x1*x2 + x3^2 + x3*x4 + g*x4^2\n",
    ] {
        let sys = parse_sys(text)?.system;
        let r = audit_lower_bounds(&sys, &counter)?;
        println!("{} -> {}", text.lines().last().unwrap(), r.status().as_str());
        println!("  {}", serde_json::to_string(&r.evidence).unwrap());
    }

    // zeros of x1*x2 on the cone over the plane x3 = 1
    let sys = parse_sys("field p=3\nvars x1 x2 x3\npoly x1*x2\n")?.system;
    let f = sys.field();
    let (o, i) = (f.zero(), f.one());
    let plane = AffineSubspace::new(f, vec![o, o, i], vec![vec![i, o, o], vec![o, i, o]])?;
    let c = cone_identity(&counter.zero_set(&sys)?, &plane)?;
    println!(
        "cone: |Z on L| = {}, |Z on <L,0>| = {}, |Z on W minus 0| = {}; full identity {}, short form {}",
        c.on_l, c.on_span, c.on_direction, c.identity_holds, c.short_form_holds
    );
    Ok(())
}
