//! Lower genus of chains and chain isomorphisms.

use twistkit::chains::{alexander_chain, chain_isomorphism, induced_matching_brute, lower_genus, Isomorphism};
use twistkit::Atlas;

fn main() -> twistkit::Result<()> {
    for fam in ["ray", "binary", "2-rays"] {
        let chain = alexander_chain(&Atlas::from_spec(fam, 5)?)?;
        let g: Vec<usize> = (0..=5).map(|n| lower_genus(&chain, n)).collect::<Result<_, _>>()?;
        println!("{fam}: lower genus per stage {g:?}");
    }
    let path4 = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
    println!("path of four curves: {}", induced_matching_brute(&path4));
    let (a, b) = (Atlas::from_spec("ray", 3)?, Atlas::from_spec("2-rays", 3)?);
    let (ca, cb) = (alexander_chain(&a)?, alexander_chain(&b)?);
    for n in 0..=3 {
        let iso = matches!(chain_isomorphism(&ca, &cb, n)?, Isomorphism::Bijection(_));
        println!("ray and 2-rays chains isomorphic at stage {n}: {iso}");
    }
    Ok(())
}
