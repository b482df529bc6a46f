//! Apply twist words to curves and compare mapping classes.

use twistkit::curves::{intersection, same_curve};
use twistkit::twists::{apply, equal_mc};
use twistkit::{Atlas, Curve, MappingClass};

fn main() -> twistkit::Result<()> {
    let at = Atlas::from_spec("ray", 4)?;
    let (a, b) = (Curve::named("v1.blue0"), Curve::named("v1.red"));
    for k in -2..=3 {
        let moved = apply(&at, &MappingClass::twist("v1.red", k), &a)?;
        println!("i(t_red^{k}(blue0), blue0) = {}", intersection(&at, &moved, &a)?);
    }
    // f t_a f^-1 = t_f(a)
    let f: MappingClass = serde_json::from_str(r#"[["v1.red", 1], ["a2", -1]]"#).expect("word JSON");
    let fa = apply(&at, &f, &a)?;
    let lhs = MappingClass::twist("v1.blue0", 1).conjugate_by(&f);
    println!("conjugation identity: {}", equal_mc(&at, &lhs, &MappingClass::twist_about(fa, 1), 2)?);
    let far = apply(&at, &MappingClass::twist("v4.red", 5), &b)?;
    println!("twisting far away fixes v1.red: {}", same_curve(&at, &far, &b)?);
    Ok(())
}
