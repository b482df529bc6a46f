//! Window formulas checked against brute-force oracles.

use twistkit::window::{annulus_oracle, annulus_twist, check_against_torus, Window};

fn main() {
    let (cases, bad) = check_against_torus(8);
    println!("torus oracle: {cases} cases, {} mismatches", bad.len());
    let t = Window::OneHoledTorus;
    println!("t_(1,0)(0,1) = {:?}", t.twist((1, 0), 1, (0, 1)));
    println!("four-holed sphere: i((1,0),(0,1)) = {}", Window::FourHoledSphere.intersection((1, 0), (0, 1)));
    for (m, tw, k) in [(3, 1, 2), (1, -4, -1), (0, 2, 5)] {
        println!("annulus ({m}, {tw}) twisted {k}: {:?} (oracle {:?})", annulus_twist(m, tw, k), annulus_oracle(m, tw, k));
    }
}
