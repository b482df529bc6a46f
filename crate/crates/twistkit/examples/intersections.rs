//! Intersection numbers, separation and coordinate curves.

use std::collections::BTreeMap;

use twistkit::curves::{intersection, is_separating};
use twistkit::{Atlas, Curve};

fn main() -> twistkit::Result<()> {
    let at = Atlas::from_spec("binary", 3)?;
    let ids = at.chain(1)?;
    print!("{:>10}", "");
    for b in &ids {
        print!("{b:>10}");
    }
    println!();
    for a in &ids {
        print!("{a:>10}");
        for b in &ids {
            print!("{:>10}", intersection(&at, &Curve::named(a), &Curve::named(b))?);
        }
        println!();
    }
    for id in ["v1.blue0", "v1.b0", "v2.b1", "z2"] {
        println!("{id} separating: {}", is_separating(&at, &Curve::named(id))?);
    }
    let c = Curve::Coords(BTreeMap::from([("v2.blue0".to_string(), (3, -1))]));
    println!("{c} meets v2.blue0 {} times", intersection(&at, &c, &Curve::named("v2.blue0"))?);
    Ok(())
}
