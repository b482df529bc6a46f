//! Homomorphisms given by the images of chain twists, their gates, and the
//! pipeline that recovers a homeomorphism inducing them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atlas::Atlas;
use crate::chains::{
    chain_isomorphism, induced_homeomorphism, lower_genus, verify_isomorphism, Chain, HomeoOutcome, Isomorphism,
    StageMap,
};
use crate::curves::{intersection, is_locally_finite, is_separating, Curve, Finiteness, StreamItem, TwistStream};
use crate::error::{Error, Result};
use crate::surface::{relabel, EndInvolution};
use crate::twists::{infinite_product, DivergenceCertificate, MappingClass, ProductOutcome};

/// Image multitwist of one generator, as `(curve, exponent)` terms.
pub type Image = Vec<(Curve, i32)>;

type Rule = dyn Fn(&str) -> Option<Image> + Send + Sync;

/// Generator images: a finite table, optionally backed by a lazy rule for
/// generators outside it.
#[derive(Clone)]
pub struct HomomorphismTable {
    pub name: String,
    entries: BTreeMap<String, Image>,
    rule: Option<Arc<Rule>>,
}

impl fmt::Debug for HomomorphismTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomomorphismTable({}, {} entries, lazy: {})", self.name, self.entries.len(), self.rule.is_some())
    }
}

impl HomomorphismTable {
    pub fn new(name: impl Into<String>, entries: BTreeMap<String, Image>) -> Self {
        HomomorphismTable { name: name.into(), entries, rule: None }
    }

    pub fn lazy(name: impl Into<String>, rule: impl Fn(&str) -> Option<Image> + Send + Sync + 'static) -> Self {
        HomomorphismTable { name: name.into(), entries: BTreeMap::new(), rule: Some(Arc::new(rule)) }
    }

    pub fn image(&self, generator: &str) -> Option<Image> {
        self.entries.get(generator).cloned().or_else(|| self.rule.as_ref().and_then(|r| r(generator)))
    }

    pub fn image_mc(&self, generator: &str) -> Result<MappingClass> {
        self.image(generator)
            .map(MappingClass::new)
            .ok_or_else(|| Error::Unresolved(format!("no image for generator {generator}")))
    }

    pub fn generators(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn is_lazy(&self) -> bool {
        self.rule.is_some()
    }

    /// JSON `{generator: [[curve, exponent], ...]}`; lazy tables must be
    /// materialised first.
    pub fn to_json(&self) -> Result<String> {
        if self.rule.is_some() {
            return Err(Error::Unbounded(self.name.clone()));
        }
        let words: BTreeMap<&String, MappingClass> =
            self.entries.iter().map(|(g, im)| (g, MappingClass::new(im.clone()))).collect();
        serde_json::to_string_pretty(&words).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn from_json(name: impl Into<String>, s: &str) -> Result<Self> {
        let words: BTreeMap<String, MappingClass> =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(HomomorphismTable::new(name, words.into_iter().map(|(g, w)| (g, w.letters().to_vec())).collect()))
    }

    /// Finite table over the generators of stage `n`.
    pub fn materialize(&self, dom: &Atlas, n: usize) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for g in dom.chain(n)? {
            let im = self.image(&g).ok_or_else(|| Error::Unresolved(format!("no image for generator {g}")))?;
            entries.insert(g, im);
        }
        Ok(HomomorphismTable::new(self.name.clone(), entries))
    }

    pub fn identity(dom: &Atlas) -> Self {
        let entries = dom.top().chain.iter().map(|a| (a.clone(), vec![(Curve::named(a), 1)])).collect();
        HomomorphismTable::new("identity", entries)
    }

    /// Generators renamed through an end involution; the codomain is the
    /// relabelled exhaustion.
    pub fn involution(dom: &Atlas, inv: &EndInvolution) -> Self {
        let entries = dom
            .top()
            .chain
            .iter()
            .map(|a| {
                let b = relabel(a, |v| Some(inv.apply(v))).expect("chain ids carry a piece number");
                (a.clone(), vec![(Curve::Named(b), 1)])
            })
            .collect();
        HomomorphismTable::new(format!("involution-{}", inv.pivot), entries)
    }

    /// Identity except that one generator goes to the identity.
    pub fn twist_killing(dom: &Atlas, killed: &str) -> Self {
        let mut t = HomomorphismTable::identity(dom);
        t.entries.insert(killed.to_string(), Vec::new());
        t.name = format!("kill-{killed}");
        t
    }

    /// Every generator goes to the twist about one curve.
    pub fn collapsing(dom: &Atlas, target: &str) -> Self {
        let entries = dom.top().chain.iter().map(|a| (a.clone(), vec![(Curve::named(target), 1)])).collect();
        HomomorphismTable::new(format!("collapse-to-{target}"), entries)
    }

    /// Every generator goes to the identity.
    pub fn trivial(dom: &Atlas) -> Self {
        let entries = dom.top().chain.iter().map(|a| (a.clone(), Vec::new())).collect();
        HomomorphismTable::new("trivial", entries)
    }

    /// Identity away from piece `v`, whose generators go to the identity.
    pub fn omitting_piece(dom: &Atlas, v: u32) -> Self {
        let mut t = HomomorphismTable::identity(dom);
        for (g, im) in t.entries.iter_mut() {
            if dom.top().meta(g).is_some_and(|m| m.piece == v) {
                im.clear();
            }
        }
        t.name = format!("omit-v{v}");
        t
    }

    /// Lazy rule sending every generator of piece `v{h}` to the twist about
    /// `t_{v2.red}^s (v2.blue0)`, where `s` is the depth of `h`. Supports pile
    /// up in one window of the codomain.
    pub fn accumulating() -> Self {
        HomomorphismTable::lazy("accumulating", |g| {
            let digits: String = g.chars().skip_while(|c| !c.is_ascii_digit()).take_while(char::is_ascii_digit).collect();
            let h: u64 = digits.parse().ok()?;
            let s = (63 - h.leading_zeros()) as i32;
            let c = if s == 0 {
                Curve::named("v2.blue0")
            } else {
                Curve::Image { of: "v2.blue0".into(), word: MappingClass::twist("v2.red", s) }
            };
            Some(vec![(c, 1)])
        })
    }
}

/// Support of the image multitwist.
pub fn phi_star(tab: &HomomorphismTable, a: &str) -> Result<Vec<Curve>> {
    let im = tab.image(a).ok_or_else(|| Error::Unresolved(format!("no image for generator {a}")))?;
    Ok(im.into_iter().map(|(c, _)| c).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transport {
    Pass { pairs: usize },
    Violation { a: String, b: String, x: Curve, y: Curve },
}

/// Disjoint generators must have disjoint image supports.
pub fn check_disjointness_transport(dom: &Atlas, cod: &Atlas, tab: &HomomorphismTable, n: usize) -> Result<Transport> {
    let chain = Chain::from_ids(dom, &dom.chain(n)?)?;
    let names = chain.names();
    let stars: Vec<Vec<Curve>> = names.iter().map(|a| phi_star(tab, a)).collect::<Result<_>>()?;
    let mut pairs = 0;
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            if chain.table[i][j] != 0 {
                continue;
            }
            pairs += 1;
            for x in &stars[i] {
                for y in &stars[j] {
                    if intersection(cod, x, y)? != 0 {
                        return Ok(Transport::Violation {
                            a: names[i].clone(),
                            b: names[j].clone(),
                            x: x.clone(),
                            y: y.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(Transport::Pass { pairs })
}

/// Image stream: each domain letter replaced by its image terms. The stream
/// ends at the first generator the table does not cover.
pub fn image_stream(tab: &HomomorphismTable, s: &TwistStream) -> TwistStream {
    let (tab, s) = (tab.clone(), s.clone());
    TwistStream::new(format!("{}({})", tab.name, s.name), move |i| {
        let mut seen = 0;
        for j in 0.. {
            let item = s.get(j)?;
            let g = item.curve.id()?;
            let im = tab.image(g)?;
            if i < seen + im.len() {
                let (c, e) = im[i - seen].clone();
                return Some(StreamItem { curve: c, exponent: e * item.exponent });
            }
            seen += im.len();
        }
        None
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicativity {
    Pass { streams: usize },
    Fail { stream: usize, name: String, certificate: DivergenceCertificate },
}

/// Image streams of locally finite domain streams must stay locally finite.
pub fn check_infinitely_multiplicative(
    dom: &Atlas,
    cod: &Atlas,
    tab: &HomomorphismTable,
    streams: &[TwistStream],
    big_n: usize,
) -> Result<Multiplicativity> {
    let dom_probes = crate::twists::core_marking(dom, big_n)?;
    let cod_probes = crate::twists::core_marking(cod, big_n)?;
    for (i, s) in streams.iter().enumerate() {
        for p in &dom_probes {
            if let Finiteness::Violation(_) = is_locally_finite(dom, s, &Curve::named(p), big_n)? {
                return Err(Error::Malformed(format!("test stream {} is not locally finite in the domain", s.name)));
            }
        }
        let img = image_stream(tab, s);
        for p in &cod_probes {
            let probe = Curve::named(p);
            if let Finiteness::Violation(_) = is_locally_finite(cod, &img, &probe, big_n)? {
                if let ProductOutcome::Diverged(certificate) = infinite_product(cod, &img, &probe, big_n)? {
                    return Ok(Multiplicativity::Fail { stream: i, name: s.name.clone(), certificate });
                }
            }
        }
    }
    Ok(Multiplicativity::Pass { streams: streams.len() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistFailure {
    Trivial,
    SupportSize(usize),
    Exponent(i32),
    Separating(Curve),
    /// Two generators meeting once share an image, so the image group is cyclic.
    CyclicImage { other: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistToTwist {
    Pass,
    Fail { generator: String, reason: TwistFailure },
}

/// Every generator image must be one twist, exponent +1, about a non-separating curve.
pub fn check_twist_to_twist(dom: &Atlas, cod: &Atlas, tab: &HomomorphismTable, n: usize) -> Result<TwistToTwist> {
    let gens = dom.chain(n)?;
    let fail = |g: &String, reason| Ok(TwistToTwist::Fail { generator: g.clone(), reason });
    let mut images = Vec::new();
    for g in &gens {
        let im = tab.image(g).ok_or_else(|| Error::Unresolved(format!("no image for generator {g}")))?;
        match im.as_slice() {
            [] => return fail(g, TwistFailure::Trivial),
            [(c, 1)] => {
                if is_separating(cod, c)? {
                    return fail(g, TwistFailure::Separating(c.clone()));
                }
                images.push(c.clone());
            }
            [(_, k)] => return fail(g, TwistFailure::Exponent(*k)),
            more => return fail(g, TwistFailure::SupportSize(more.len())),
        }
    }
    let chain = Chain::from_ids(dom, &gens)?;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if chain.table[i][j] == 1 && crate::curves::same_curve(cod, &images[i], &images[j])? {
                return fail(&gens[i], TwistFailure::CyclicImage { other: gens[j].clone() });
            }
        }
    }
    Ok(TwistToTwist::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainIso {
    Bijection(BTreeMap<String, String>),
    Failure(String),
}

/// `a -> phi_star(a)` must be an intersection-preserving bijection onto a chain.
pub fn check_chain_isomorphism(dom: &Atlas, cod: &Atlas, tab: &HomomorphismTable, n: usize) -> Result<ChainIso> {
    let gens = dom.chain(n)?;
    let mut map = BTreeMap::new();
    let mut targets = Vec::new();
    for g in &gens {
        match phi_star(tab, g)?.as_slice() {
            [Curve::Named(t)] => {
                if let Some((other, _)) = map.iter().find(|(_, v)| *v == t) {
                    return Ok(ChainIso::Failure(format!("not injective: {other} and {g} both go to {t}")));
                }
                map.insert(g.clone(), t.clone());
                targets.push(t.clone());
            }
            [c] => return Ok(ChainIso::Failure(format!("image of {g} is not a template curve: {c}"))),
            s => return Ok(ChainIso::Failure(format!("image of {g} has {} curves", s.len()))),
        }
    }
    let c1 = Chain::from_ids(dom, &gens)?;
    let c2 = match Chain::from_ids(cod, &targets) {
        Ok(c) => c,
        Err(Error::Malformed(m)) => return Ok(ChainIso::Failure(m)),
        Err(e) => return Err(e),
    };
    if let Isomorphism::NotIsomorphic(why) = chain_isomorphism(&c1, &c2, usize::MAX)? {
        return Ok(ChainIso::Failure(why));
    }
    if !verify_isomorphism(&c1, &c2, &map) {
        return Ok(ChainIso::Failure("intersection numbers are not preserved".into()));
    }
    Ok(ChainIso::Bijection(map))
}

/// First codomain marking curve of stage `n` fixed by the image of every
/// generator reaching that marking (the generators of stage `n + 1`).
pub fn detect_reducible(dom: &Atlas, cod: &Atlas, tab: &HomomorphismTable, n: usize) -> Result<Option<String>> {
    let s = n + 1;
    let images: Vec<MappingClass> = dom.chain(s)?.iter().map(|g| tab.image_mc(g)).collect::<Result<_>>()?;
    let m = cod.model(s)?;
    'curves: for id in cod.marking(n)? {
        let w = m.word(&id).ok_or_else(|| Error::Unresolved(id.clone()))?.to_vec();
        for f in &images {
            if cod.act(f, w.clone(), s)? != w {
                continue 'curves;
            }
        }
        return Ok(Some(id));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    pub gate: String,
    /// `None` when an earlier gate failed.
    pub passed: Option<bool>,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass { homeomorphism: StageMap },
    Fail { gate: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub table: String,
    pub stage: usize,
    pub gates: Vec<GateReport>,
    pub verdict: Verdict,
    /// Hypotheses the pipeline cannot test at finite scale.
    pub untested: Vec<String>,
}

pub const GATES: [&str; 7] = [
    "multiplicativity",
    "disjointness",
    "twist-to-twist",
    "chain-isomorphism",
    "lower-genus",
    "homeomorphism",
    "soundness",
];

/// Disjoint-curve streams of the domain, one curve kind per stage.
pub fn standard_streams(dom: &Atlas) -> Vec<TwistStream> {
    let ex = dom.exhaustion();
    let root = ex.blueprint.root;
    let per = |name: &str, f: fn(u32, u32) -> Option<String>, k: i32| {
        let order = ex.order.clone();
        TwistStream::new(name, move |i| {
            order.get(i).and_then(|&v| f(v, root)).map(|id| StreamItem { curve: Curve::Named(id), exponent: k })
        })
    };
    vec![
        per("blue0-per-stage", |v, _| Some(format!("v{v}.blue0")), 1),
        per("red-per-stage", |v, _| Some(format!("v{v}.red")), 1),
        per("red-inverse-per-stage", |v, _| Some(format!("v{v}.red")), -1),
    ]
}

fn detail<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("report values serialise")
}

/// Run the gates in order and stop at the first failure.
pub fn run_pipeline(
    dom: &Atlas,
    cod: &Atlas,
    tab: &HomomorphismTable,
    big_n: usize,
    streams: &[TwistStream],
) -> Result<PipelineReport> {
    if big_n < 3 {
        return Err(Error::StageTooSmall(big_n));
    }
    let mut gates = Vec::new();
    let mut failed: Option<String> = None;
    let mut psi = BTreeMap::new();
    let mut h: Option<StageMap> = None;
    for gate in GATES {
        if failed.is_some() {
            gates.push(GateReport { gate: gate.into(), passed: None, detail: serde_json::Value::Null });
            continue;
        }
        let (passed, d) = match gate {
            "multiplicativity" => {
                let r = check_infinitely_multiplicative(dom, cod, tab, streams, big_n)?;
                (matches!(r, Multiplicativity::Pass { .. }), detail(&r))
            }
            "disjointness" => {
                let r = check_disjointness_transport(dom, cod, tab, big_n)?;
                (matches!(r, Transport::Pass { .. }), detail(&r))
            }
            "twist-to-twist" => {
                let r = check_twist_to_twist(dom, cod, tab, big_n)?;
                (r == TwistToTwist::Pass, detail(&r))
            }
            "chain-isomorphism" => {
                let r = check_chain_isomorphism(dom, cod, tab, big_n)?;
                if let ChainIso::Bijection(m) = &r {
                    psi = m.clone();
                }
                (matches!(r, ChainIso::Bijection(_)), detail(&r))
            }
            "lower-genus" => {
                let c1 = Chain::from_ids(dom, &dom.chain(big_n)?)?;
                let c2 = Chain::from_ids(cod, &cod.chain(big_n)?)?;
                let mut rows = Vec::new();
                let mut ok = true;
                for n in 0..=big_n {
                    let (g1, g2) = (lower_genus(&c1, n)?, lower_genus(&c2, n)?);
                    ok &= g1 == g2;
                    rows.push((n, g1, g2));
                }
                (ok, detail(&rows))
            }
            "homeomorphism" => {
                let r = induced_homeomorphism(&psi, dom, cod, big_n)?;
                if let HomeoOutcome::Map(m) = &r {
                    h = Some(m.clone());
                }
                (matches!(r, HomeoOutcome::Map(_)), detail(&r))
            }
            _ => {
                let r = soundness_audit(dom, cod, tab, h.as_ref().expect("homeomorphism gate passed"), big_n)?;
                (r.is_none(), detail(&r))
            }
        };
        if !passed {
            failed = Some(gate.to_string());
        }
        gates.push(GateReport { gate: gate.into(), passed: Some(passed), detail: d });
    }
    let verdict = match failed {
        Some(gate) => Verdict::Fail { gate },
        None => Verdict::Pass { homeomorphism: h.expect("every gate passed") },
    };
    Ok(PipelineReport {
        table: tab.name.clone(),
        stage: big_n,
        gates,
        verdict,
        untested: vec!["surjectivity of the homomorphism".into()],
    })
}

/// `phi(g)(h(c)) = h(g(c))` for every generator `g` of stage `N` and marking
/// curve `c` of stage `N - 1`, i.e. `h^-1 phi(g) h = g` there. Returns the
/// first failing pair.
pub fn soundness_audit(
    dom: &Atlas,
    cod: &Atlas,
    tab: &HomomorphismTable,
    h: &StageMap,
    big_n: usize,
) -> Result<Option<(String, String)>> {
    let m1 = dom.model(big_n)?;
    cod.model(big_n)?;
    let marking = dom.marking(big_n - 1)?;
    for g in &m1.chain {
        let f = tab.image_mc(g)?;
        let wg = m1.word(g).unwrap();
        for c in &marking {
            let x = m1.word(c).ok_or_else(|| Error::Unresolved(c.clone()))?;
            let lhs = cod.act(&f, h.map_word(x), big_n)?;
            let rhs = h.map_word(&m1.twist(wg, 1, x));
            if lhs != rhs {
                return Ok(Some((g.clone(), c.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::blueprint_involution;

    #[test]
    fn table_json_round_trip() {
        let at = Atlas::from_spec("ray", 2).unwrap();
        let t = HomomorphismTable::identity(&at);
        let s = t.to_json().unwrap();
        let back = HomomorphismTable::from_json("identity", &s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        assert!(matches!(HomomorphismTable::accumulating().to_json(), Err(Error::Unbounded(_))));
    }

    #[test]
    fn phi_star_reads_support() {
        let at = Atlas::from_spec("binary", 2).unwrap();
        assert_eq!(phi_star(&HomomorphismTable::identity(&at), "v2.red").unwrap(), vec![Curve::named("v2.red")]);
        let inv = blueprint_involution(&at.exhaustion().blueprint, 1).unwrap();
        let t = HomomorphismTable::involution(&at, &inv);
        assert_eq!(phi_star(&t, "v4.red").unwrap(), vec![Curve::named("v5.red")]);
        let two = HomomorphismTable::new(
            "two",
            BTreeMap::from([("v2.red".to_string(), vec![(Curve::named("v2.blue0"), 1), (Curve::named("v4.blue0"), 1)])]),
        );
        assert_eq!(phi_star(&two, "v2.red").unwrap().len(), 2);
        assert!(phi_star(&two, "v1.red").is_err());
    }

    #[test]
    fn gates_on_small_tables() {
        let at = Atlas::from_spec("ray", 3).unwrap();
        let id = HomomorphismTable::identity(&at);
        assert!(matches!(check_disjointness_transport(&at, &at, &id, 2).unwrap(), Transport::Pass { .. }));
        assert_eq!(check_twist_to_twist(&at, &at, &id, 2).unwrap(), TwistToTwist::Pass);
        let mut bad = id.clone();
        bad.entries.insert("v1.blue0".into(), vec![(Curve::named("v2.red"), 1)]);
        bad.entries.insert("v4.red".into(), vec![(Curve::named("v2.blue0"), 1)]);
        assert!(matches!(check_disjointness_transport(&at, &at, &bad, 2).unwrap(), Transport::Violation { .. }));
        let col = HomomorphismTable::collapsing(&at, "v2.red");
        match check_twist_to_twist(&at, &at, &col, 2).unwrap() {
            TwistToTwist::Fail { reason: TwistFailure::CyclicImage { .. }, .. } => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(check_chain_isomorphism(&at, &at, &col, 2).unwrap(), ChainIso::Failure(_)));
    }

    #[test]
    fn reducibility() {
        let at = Atlas::from_spec("ray", 3).unwrap();
        assert_eq!(detect_reducible(&at, &at, &HomomorphismTable::identity(&at), 2).unwrap(), None);
        let first = at.marking(2).unwrap()[0].clone();
        assert_eq!(detect_reducible(&at, &at, &HomomorphismTable::trivial(&at), 2).unwrap(), Some(first));
        let fixed = detect_reducible(&at, &at, &HomomorphismTable::omitting_piece(&at, 4), 2).unwrap().unwrap();
        assert!(fixed.starts_with("v4.") || fixed == "a4", "{fixed}");
    }

    #[test]
    fn pipeline_identity_and_killing() {
        let at = Atlas::from_spec("ray", 3).unwrap();
        let streams = standard_streams(&at);
        let r = run_pipeline(&at, &at, &HomomorphismTable::identity(&at), 3, &streams).unwrap();
        assert!(matches!(r.verdict, Verdict::Pass { .. }), "{r:?}");
        let k = run_pipeline(&at, &at, &HomomorphismTable::twist_killing(&at, "v2.red"), 3, &streams).unwrap();
        assert_eq!(k.verdict, Verdict::Fail { gate: "twist-to-twist".into() });
    }
}
