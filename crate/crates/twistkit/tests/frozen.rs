//! Frozen values, each recomputed here by an independent count.

use std::process::Command;

use twistkit::chains::{alexander_chain, Chain};
use twistkit::curves::{intersection, Curve};
use twistkit::suite::multitwist_supports;
use twistkit::Atlas;

/// Chain sizes per stage, and disjoint supports of size <= 3 in A_3.
const FROZEN: [(&str, [usize; 7], usize); 3] = [
    ("ray", [2, 6, 10, 14, 18, 22, 26], 319),
    ("binary", [2, 7, 12, 17, 22, 27, 32], 608),
    ("2-rays", [2, 7, 11, 15, 19, 23, 27], 404),
];

#[test]
fn chain_sizes_count_template_curves() {
    for (fam, sizes, _) in FROZEN {
        let at = Atlas::from_spec(fam, 6).unwrap();
        let ex = at.exhaustion();
        let chain = alexander_chain(&at).unwrap();
        for (n, &size) in sizes.iter().enumerate() {
            // Blue and red curves of every piece, plus one extra curve per non-root piece.
            let count: usize = ex
                .stage_vertices(n)
                .iter()
                .map(|v| ex.pieces[v].kind.blue_count() + 1 + usize::from(*v != ex.blueprint.root))
                .sum();
            assert_eq!(count, size, "{fam} stage {n}");
            assert_eq!(chain.restrict(n).len(), size, "{fam} stage {n}");
        }
    }
}

#[test]
fn support_counts_by_direct_enumeration() {
    for (fam, _, supports) in FROZEN {
        let at = Atlas::from_spec(fam, 4).unwrap();
        let ids = at.chain(3).unwrap();
        let meets = |a: &str, b: &str| intersection(&at, &Curve::named(a), &Curve::named(b)).unwrap() > 0;
        let k = ids.len();
        let mut count = k;
        for i in 0..k {
            for j in i + 1..k {
                if meets(&ids[i], &ids[j]) {
                    continue;
                }
                count += 1;
                count += (j + 1..k).filter(|&l| !meets(&ids[i], &ids[l]) && !meets(&ids[j], &ids[l])).count();
            }
        }
        assert_eq!(count, supports, "{fam}");
        let chain = Chain::from_ids(&at, &ids).unwrap();
        assert_eq!(multitwist_supports(&chain, 3).len(), supports, "{fam}");
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twistkit")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    assert_eq!(cli(&["curve", "intersect", "v1.blue0", "v1.red", "--ends", "ray", "--stages", "2"]), (0, "1\n".into()));
    assert_eq!(cli(&["mcg", "verify", "--relation", "braid", "--a", "v1.blue0", "--b", "v1.red", "--ends", "ray"]).0, 0);
    assert_eq!(cli(&["mcg", "verify", "--relation", "commute", "--a", "v1.blue0", "--b", "v1.red", "--ends", "ray"]).0, 1);
    assert_eq!(cli(&["suite", "no-such-suite"]).0, 2);
    let (code, dot) = cli(&["chain", "graph", "--dot", "--ends", "binary", "--stages", "1"]);
    assert_eq!(code, 0);
    assert_eq!(dot.matches(" -- ").count(), 6);
}

#[test]
fn cli_table_round_trip() {
    let dir = std::env::temp_dir().join(format!("twistkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("collapse.json");
    let report = dir.join("report.json");
    let t = table.to_str().unwrap();
    assert_eq!(cli(&["homo", "table", "--kind", "collapsing", "--stages", "3", "--out", t]).0, 0);
    let (code, _) = cli(&["homo", "check", "--table", t, "--stages", "3", "--report", report.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["verdict"]["Fail"]["gate"], "twist-to-twist");
    std::fs::remove_dir_all(&dir).unwrap();
}
