//! Lantern, braid and commutation relations.

use twistkit::suite::template_windows;
use twistkit::twists::{braided, commutes, lantern_check, Multitwist};
use twistkit::Atlas;

fn main() -> twistkit::Result<()> {
    let at = Atlas::from_spec("2-rays", 4)?;
    for w in template_windows(&at, 3)? {
        let names: Vec<String> = w.interior.iter().map(|c| c.to_string()).collect();
        println!("lantern on window {names:?}: {}", lantern_check(&at, &w)?);
    }
    let pairs = [("v1.blue0", "v1.red"), ("v1.blue0", "v2.red"), ("v2.blue0", "v2.blue1")];
    for (x, y) in pairs {
        let (a, b) = (Multitwist::single(x, 1), Multitwist::single(y, 1));
        println!("{x}, {y}: braided {}, commute {}", braided(&at, &a, &b, 2)?, commutes(&at, &a, &b, 2)?);
    }
    Ok(())
}
