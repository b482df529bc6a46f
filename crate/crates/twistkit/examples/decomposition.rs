//! Infinite multiplicativity and twist-product decompositions of coherent families.

use twistkit::curves::{StreamItem, TwistStream};
use twistkit::homo::{check_infinitely_multiplicative, HomomorphismTable, Multiplicativity};
use twistkit::suite::coherent_families;
use twistkit::twists::twist_product_decomposition;
use twistkit::{Atlas, Curve};

fn main() -> twistkit::Result<()> {
    let n = 4;
    let at = Atlas::from_spec("binary", n)?;
    for (name, family) in coherent_families(&at, n) {
        let d = twist_product_decomposition(&at, &family, n)?;
        println!("{name}: {} letters, stage ends {:?}", d.letters.len(), d.ends);
    }
    let ray = Atlas::from_spec("ray", n)?;
    let stream = TwistStream::new("blue0 along the ray", |k| {
        (k < 63).then(|| StreamItem { curve: Curve::named(format!("v{}.blue0", 1u64 << k)), exponent: 1 })
    });
    for tab in [HomomorphismTable::identity(&ray), HomomorphismTable::accumulating()] {
        match check_infinitely_multiplicative(&ray, &ray, &tab, std::slice::from_ref(&stream), n)? {
            Multiplicativity::Pass { .. } => println!("{}: locally finite images", tab.name),
            Multiplicativity::Fail { certificate, .. } => {
                println!("{}: images accumulate, {} witnesses", tab.name, certificate.witnesses.len())
            }
        }
    }
    Ok(())
}
