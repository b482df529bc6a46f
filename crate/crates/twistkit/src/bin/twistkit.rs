use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twistkit::chains::{alexander_chain, chain_isomorphism, is_filling, is_tree_like, lower_genus, Chain};
use twistkit::curves::{intersection, is_separating};
use twistkit::homo::{run_pipeline, standard_streams, HomomorphismTable, Verdict};
use twistkit::suite::{emit_dot, emit_json, read_file, run_suite, suite_names, template_windows, write_file, Entity, SuiteConfig};
use twistkit::surface::{blueprint_involution, Exhaustion};
use twistkit::twists::{apply, braided, commutes, lantern_check, Multitwist};
use twistkit::{Atlas, Curve, Error, MappingClass, Result};

#[derive(Parser)]
#[command(name = "twistkit", version, about = "Curves, twists and chains on finite stages of infinite-genus surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build exhaustions.
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
    /// Curve queries.
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Twist words and relations.
    Mcg {
        #[command(subcommand)]
        cmd: McgCmd,
    },
    /// Chains and their graphs.
    Chain {
        #[command(subcommand)]
        cmd: ChainCmd,
    },
    /// Homomorphism tables.
    Homo {
        #[command(subcommand)]
        cmd: HomoCmd,
    },
    /// Run a named property suite.
    Suite {
        /// Suite name, or "all".
        name: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        stages: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Where the surface comes from: a saved exhaustion, or an end spec to build.
#[derive(Args)]
struct SurfaceArg {
    #[arg(long, conflicts_with = "ends")]
    surface: Option<PathBuf>,
    #[arg(long)]
    ends: Option<String>,
    #[arg(long, default_value_t = 3)]
    stages: usize,
}

impl SurfaceArg {
    fn atlas(&self) -> Result<Atlas> {
        match (&self.surface, &self.ends) {
            (Some(p), _) => load_atlas(p),
            (None, Some(e)) => Atlas::from_spec(e, self.stages),
            (None, None) => Err(Error::Malformed("pass --surface <file> or --ends <spec>".into())),
        }
    }

    /// Stage to work in: the requested one, capped by what the surface has.
    fn stage(&self, at: &Atlas) -> usize {
        self.stages.min(at.stages())
    }
}

#[derive(Subcommand)]
enum SurfaceCmd {
    Build {
        #[arg(long)]
        ends: String,
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Intersection number of two curves, given as ids or JSON.
    Intersect {
        a: String,
        b: String,
        #[command(flatten)]
        surface: SurfaceArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Lantern,
    Braid,
    Commute,
}

#[derive(Subcommand)]
enum McgCmd {
    /// Apply a twist word to a curve.
    Apply {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        curve: String,
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a relation: lantern on every template window, or braid/commute for two curves.
    Verify {
        #[arg(long, value_enum)]
        relation: Relation,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[command(flatten)]
        surface: SurfaceArg,
    },
}

#[derive(Subcommand)]
enum ChainCmd {
    /// Alexander chain of a surface at a stage.
    Build {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tree-like, filling and non-separating audits of the Alexander chain.
    Check {
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Isomorphism between two saved chains.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = usize::MAX)]
        stages: usize,
    },
    /// Lower genus of a saved chain.
    Genus {
        chain: PathBuf,
        #[arg(long, default_value_t = usize::MAX)]
        stages: usize,
    },
    /// Emit the intersection graph.
    Graph {
        #[arg(long)]
        chain: Option<PathBuf>,
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HomoCmd {
    /// Run the certification pipeline on a table.
    Check {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        /// End spec of the domain (and codomain).
        #[arg(long, default_value = "binary")]
        ends: String,
        /// Relabel the codomain through this blueprint involution.
        #[arg(long)]
        involution: Option<usize>,
    },
    /// Write one of the standard tables.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long, default_value = "binary")]
        ends: String,
        #[arg(long)]
        stages: usize,
        /// Involution index for `involution`.
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Identity,
    Involution,
    Killing,
    Collapsing,
}

fn load_atlas(p: &Path) -> Result<Atlas> {
    let ex: Exhaustion = parse(&read_file(p)?)?;
    Ok(Atlas::new(ex))
}

fn parse<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
}

fn curve_arg(s: &str) -> Result<Curve> {
    if s.trim_start().starts_with('{') {
        parse(s)
    } else {
        Ok(Curve::named(s))
    }
}

fn json<T: Serialize>(t: &T) -> String {
    serde_json::to_string_pretty(t).expect("plain data serialises")
}

fn emit(out: &Option<PathBuf>, s: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, s),
        None => {
            println!("{s}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Surface { cmd: SurfaceCmd::Build { ends, stages, out } } => {
            let at = Atlas::from_spec(&ends, stages)?;
            emit(&out, &emit_json(&Entity::Exhaustion(at.exhaustion()))?)?;
        }
        Cmd::Curve { cmd: CurveCmd::Intersect { a, b, surface } } => {
            let at = surface.atlas()?;
            println!("{}", intersection(&at, &curve_arg(&a)?, &curve_arg(&b)?)?);
        }
        Cmd::Mcg { cmd: McgCmd::Apply { word, curve, surface, out } } => {
            let at = surface.atlas()?;
            let f: MappingClass = parse(&read_file(&word)?)?;
            emit(&out, &json(&apply(&at, &f, &curve_arg(&curve)?)?))?;
        }
        Cmd::Mcg { cmd: McgCmd::Verify { relation, a, b, surface } } => {
            let at = surface.atlas()?;
            let n = surface.stage(&at);
            let ok = match relation {
                Relation::Lantern => {
                    let wins = template_windows(&at, n.saturating_sub(1))?;
                    let mut ok = true;
                    for w in &wins {
                        let r = lantern_check(&at, w)?;
                        println!("{} {}", if r { "holds" } else { "FAILS" }, serde_json::to_string(&w.interior).unwrap_or_default());
                        ok &= r;
                    }
                    ok
                }
                Relation::Braid | Relation::Commute => {
                    let (Some(a), Some(b)) = (a, b) else {
                        return Err(Error::Malformed("braid and commute need --a and --b".into()));
                    };
                    let (ma, mb) = (Multitwist::single(&a, 1), Multitwist::single(&b, 1));
                    let n = n.max(2).min(at.stages().saturating_sub(1)).max(2);
                    let r = if matches!(relation, Relation::Braid) {
                        braided(&at, &ma, &mb, n)?
                    } else {
                        commutes(&at, &ma, &mb, n)?
                    };
                    println!("{r}");
                    r
                }
            };
            return Ok(ok);
        }
        Cmd::Chain { cmd } => return chain(cmd),
        Cmd::Homo { cmd: HomoCmd::Check { table, stages, report, ends, involution } } => {
            let dom = Atlas::from_spec(&ends, stages)?;
            let cod = match involution {
                Some(k) => Atlas::new(dom.exhaustion().permuted(&blueprint_involution(&dom.exhaustion().blueprint, k)?)),
                None => Atlas::from_spec(&ends, stages)?,
            };
            let name = table.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let tab = HomomorphismTable::from_json(name, &read_file(&table)?)?;
            let r = run_pipeline(&dom, &cod, &tab, stages, &standard_streams(&dom))?;
            emit(&report, &json(&r))?;
            let pass = matches!(r.verdict, Verdict::Pass { .. });
            eprintln!("{}", if pass { "PASS".to_string() } else { format!("FAIL at {:?}", r.verdict) });
            return Ok(pass);
        }
        Cmd::Homo { cmd: HomoCmd::Table { kind, ends, stages, index, out } } => {
            let dom = Atlas::from_spec(&ends, stages)?;
            let tab = match kind {
                TableKind::Identity => HomomorphismTable::identity(&dom),
                TableKind::Involution => {
                    HomomorphismTable::involution(&dom, &blueprint_involution(&dom.exhaustion().blueprint, index)?)
                }
                TableKind::Killing => HomomorphismTable::twist_killing(&dom, &dom.chain(1)?[2]),
                TableKind::Collapsing => HomomorphismTable::collapsing(&dom, "v1.blue0"),
            };
            emit(&out, &emit_json(&Entity::Table(&tab))?)?;
        }
        Cmd::Suite { name, seed, stages, budget, out } => {
            let names: Vec<String> =
                if name == "all" { suite_names().into_iter().map(String::from).collect() } else { vec![name] };
            let mut reports = Vec::new();
            for s in names {
                let cfg = SuiteConfig { suite: s, stages, seed, budget, out: None };
                let r = run_suite(&cfg)?;
                for c in &r.checks {
                    eprintln!("{} {}: {} ({} cases, {} failed)", if c.failed == 0 { "ok  " } else { "FAIL" }, r.suite, c.name, c.cases, c.failed);
                }
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.passed);
            let body = if reports.len() == 1 { json(&reports[0]) } else { json(&reports) };
            emit(&out, &body)?;
            return Ok(ok);
        }
    }
    Ok(true)
}

fn load_chain(p: &Path) -> Result<Chain> {
    parse(&read_file(p)?)
}

fn chain(cmd: ChainCmd) -> Result<bool> {
    match cmd {
        ChainCmd::Build { surface, out } => {
            let at = surface.atlas()?;
            let c = alexander_chain(&at)?.restrict(surface.stage(&at));
            emit(&out, &emit_json(&Entity::Chain(&c))?)?;
        }
        ChainCmd::Check { surface } => {
            let at = surface.atlas()?;
            let n = surface.stage(&at);
            let c = alexander_chain(&at)?;
            let tree = is_tree_like(&c, n);
            let fill = is_filling(&at, &c, n)?;
            let mut separating = Vec::new();
            for cc in &c.restrict(n).curves {
                if is_separating(&at, &cc.curve)? {
                    separating.push(cc.name());
                }
            }
            let ok = tree.tree_like && fill.filling && separating.is_empty();
            let report = serde_json::json!({ "tree_like": tree, "filling": fill, "separating": separating });
            println!("{}", json(&report));
            return Ok(ok);
        }
        ChainCmd::Iso { first, second, stages } => {
            let r = chain_isomorphism(&load_chain(&first)?, &load_chain(&second)?, stages)?;
            println!("{}", json(&r));
        }
        ChainCmd::Genus { chain, stages } => {
            println!("{}", lower_genus(&load_chain(&chain)?, stages)?);
        }
        ChainCmd::Graph { chain, surface, dot, out } => {
            let c = match chain {
                Some(p) => load_chain(&p)?,
                None => {
                    let at = surface.atlas()?;
                    alexander_chain(&at)?.restrict(surface.stage(&at))
                }
            };
            let body = if dot { emit_dot(&Entity::Chain(&c))? } else { emit_json(&Entity::Graph(&c.graph()))? };
            emit(&out, &body)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
