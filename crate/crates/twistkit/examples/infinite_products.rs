//! Lazy twist streams: convergent products and divergence certificates.

use twistkit::curves::{StreamItem, TwistStream};
use twistkit::twists::{infinite_product, ProductOutcome};
use twistkit::{Atlas, Curve, MappingClass};

fn main() -> twistkit::Result<()> {
    let at = Atlas::from_spec("binary", 5)?;
    let order = at.exhaustion().order.clone();
    // One twist per piece: every curve meets finitely many of them.
    let reds = TwistStream::new("red per piece", move |i| {
        order.get(i).map(|v| StreamItem { curve: Curve::named(format!("v{v}.red")), exponent: 1 })
    });
    for probe in ["a2", "a4", "v5.blue0"] {
        match infinite_product(&at, &reds, &Curve::named(probe), 5)? {
            ProductOutcome::Converged(c) => println!("{probe} -> {c}"),
            ProductOutcome::Diverged(cert) => println!("{probe} diverged: {cert:?}"),
        }
    }
    // Twists about ever more twisted curves in one torus: not locally finite.
    let spin = TwistStream::new("spinning", |j| {
        Some(StreamItem {
            curve: Curve::Image { of: "v2.blue0".into(), word: MappingClass::twist("v2.red", j as i32 + 1) },
            exponent: 1,
        })
    });
    if let ProductOutcome::Diverged(cert) = infinite_product(&at, &spin, &Curve::named("v2.blue0"), 5)? {
        for w in cert.witnesses.iter().take(3) {
            println!("witness at {}: i = {} >= {}", w.index, w.moved_intersection, w.lower_bound);
        }
    }
    Ok(())
}
