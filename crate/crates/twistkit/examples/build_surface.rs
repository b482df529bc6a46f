//! Build exhaustions for the three end families and print their stages.

use twistkit::surface::stage_genus;
use twistkit::Atlas;

fn main() -> twistkit::Result<()> {
    for fam in ["ray", "binary", "2-rays"] {
        let at = Atlas::from_spec(fam, 4)?;
        let ex = at.exhaustion();
        println!("{fam}:");
        for n in 0..=ex.stages {
            let v = ex.order[n];
            println!(
                "  stage {n}: adds v{v} ({:?}), genus {}, boundary {:?}",
                ex.pieces[&v].kind,
                stage_genus(ex, n)?,
                ex.boundary[n]
            );
        }
    }
    let json = serde_json::to_string(Atlas::from_spec("binary", 2)?.exhaustion()).expect("serialises");
    println!("binary stage-2 exhaustion JSON is {} bytes", json.len());
    Ok(())
}
