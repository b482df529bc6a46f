//! The Alexander chain: audits and DOT output.

use twistkit::chains::{alexander_chain, is_filling, is_tree_like};
use twistkit::suite::{emit_dot, Entity};
use twistkit::Atlas;

fn main() -> twistkit::Result<()> {
    let at = Atlas::from_spec("binary", 4)?;
    let chain = alexander_chain(&at)?;
    for n in 0..=4 {
        let t = is_tree_like(&chain, n);
        let f = is_filling(&at, &chain, n)?;
        println!("stage {n}: {} curves, tree-like {}, filling {}", chain.restrict(n).len(), t.tree_like, f.filling);
    }
    print!("{}", emit_dot(&Entity::Chain(&chain.restrict(1)))?);
    Ok(())
}
