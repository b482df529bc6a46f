//! Certify homomorphism tables as induced by homeomorphisms.

use twistkit::homo::{run_pipeline, soundness_audit, standard_streams, HomomorphismTable, Verdict};
use twistkit::surface::blueprint_involution;
use twistkit::Atlas;

fn main() -> twistkit::Result<()> {
    let n = 4;
    let dom = Atlas::from_spec("binary", n)?;
    let streams = standard_streams(&dom);
    let inv = blueprint_involution(&dom.exhaustion().blueprint, 1)?;
    let cod = Atlas::new(dom.exhaustion().permuted(&inv));
    let tables = [
        (HomomorphismTable::involution(&dom, &inv), &cod),
        (HomomorphismTable::collapsing(&dom, "v1.blue0"), &dom),
        (HomomorphismTable::twist_killing(&dom, "v1.red"), &dom),
    ];
    for (tab, cod) in &tables {
        let report = run_pipeline(&dom, cod, tab, n, &streams)?;
        match &report.verdict {
            Verdict::Pass { homeomorphism } => {
                println!("{}: pass, pieces {:?}", tab.name, homeomorphism.pieces);
                println!("  soundness audit clean: {}", soundness_audit(&dom, cod, tab, homeomorphism, n)?.is_none());
            }
            Verdict::Fail { gate } => {
                let detail = report.gates.iter().find(|g| &g.gate == gate).map(|g| g.detail.to_string());
                println!("{}: fails at {gate}: {}", tab.name, detail.unwrap_or_default());
            }
        }
    }
    Ok(())
}
