//! Search for the structure behind braided multitwists.

use twistkit::twists::{braided, braided_decomposition_search, Multitwist, SearchOutcome};
use twistkit::{Atlas, Curve};

fn mt(ids: &[&str]) -> Multitwist {
    Multitwist { terms: ids.iter().map(|id| (Curve::named(*id), 1)).collect() }
}

fn main() -> twistkit::Result<()> {
    let at = Atlas::from_spec("ray", 4)?;
    let cases = [
        (mt(&["v1.blue0", "v2.blue0"]), mt(&["v1.red", "v2.blue0"])),
        (mt(&["v1.blue0", "v2.blue1"]), mt(&["v1.red", "v2.red"])),
        (mt(&["v1.blue0"]), mt(&["v2.red"])),
    ];
    for (t1, t2) in &cases {
        let b = braided(&at, t1, t2, 3)?;
        match braided_decomposition_search(&at, t1, t2, 3, 10_000)? {
            SearchOutcome::Found(w) => println!("braided {b}: common {:?}, pairs {:?}", w.common.terms, w.pairs),
            SearchOutcome::NotFound { budget } => println!("braided {b}: no witness (budget {budget})"),
        }
    }
    Ok(())
}
