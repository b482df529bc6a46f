//! Mapping classes as twist words, their action on curves, multitwists,
//! lazily evaluated infinite products and relation checkers.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::atlas::Atlas;
use crate::curves::{
    intersection, is_locally_finite, is_separating, same_curve, Curve, Finiteness, StreamItem, TwistStream,
};
use crate::error::{Error, Result};
use crate::model::Color;
use crate::surface::label;
use crate::window::annulus_twist;
use crate::word::Letter;

/// A word in twist generators. The leftmost letter acts last:
/// `[(a, 1), (b, 2)]` is `t_a t_b^2`, which applies `t_b^2` first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MappingClass {
    word: Vec<(Curve, i32)>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CurveRef {
    Id(String),
    Full(Curve),
}

impl Serialize for MappingClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(CurveRef, i32)> = self
            .word
            .iter()
            .map(|(c, k)| match c {
                Curve::Named(id) => (CurveRef::Id(id.clone()), *k),
                other => (CurveRef::Full(other.clone()), *k),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MappingClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(CurveRef, i32)> = Vec::deserialize(d)?;
        Ok(MappingClass::new(
            v.into_iter()
                .map(|(c, k)| match c {
                    CurveRef::Id(id) => (Curve::Named(id), k),
                    CurveRef::Full(c) => (c, k),
                })
                .collect(),
        ))
    }
}

impl MappingClass {
    /// Normalise: merge adjacent letters on the same curve and drop zero exponents.
    pub fn new(letters: Vec<(Curve, i32)>) -> Self {
        let mut word: Vec<(Curve, i32)> = Vec::with_capacity(letters.len());
        for (c, k) in letters {
            if k == 0 {
                continue;
            }
            match word.last_mut() {
                Some((d, e)) if *d == c => {
                    *e += k;
                    if *e == 0 {
                        word.pop();
                    }
                }
                _ => word.push((c, k)),
            }
        }
        MappingClass { word }
    }

    pub fn identity() -> Self {
        MappingClass::default()
    }

    pub fn twist(id: impl Into<String>, k: i32) -> Self {
        MappingClass::new(vec![(Curve::Named(id.into()), k)])
    }

    pub fn twist_about(c: Curve, k: i32) -> Self {
        MappingClass::new(vec![(c, k)])
    }

    pub fn letters(&self) -> &[(Curve, i32)] {
        &self.word
    }

    pub fn is_identity_word(&self) -> bool {
        self.word.is_empty()
    }

    /// `self ∘ other`: `other` acts first.
    pub fn then_after(&self, other: &MappingClass) -> Self {
        MappingClass::new(self.word.iter().chain(&other.word).cloned().collect())
    }

    pub fn inverse(&self) -> Self {
        MappingClass::new(self.word.iter().rev().map(|(c, k)| (c.clone(), -k)).collect())
    }

    /// `f self f^-1`.
    pub fn conjugate_by(&self, f: &MappingClass) -> Self {
        f.then_after(self).then_after(&f.inverse())
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .word
            .iter()
            .map(|(c, k)| if *k == 1 { format!("t[{c}]") } else { format!("t[{c}]^{k}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Finite multitwist `T_A = prod t_a^{k_a}` over pairwise disjoint curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multitwist {
    pub terms: Vec<(Curve, i32)>,
}

impl Multitwist {
    pub fn new(atlas: &Atlas, terms: Vec<(Curve, i32)>) -> Result<Self> {
        for (i, (a, k)) in terms.iter().enumerate() {
            if *k == 0 {
                return Err(Error::Malformed(format!("zero exponent on {a}")));
            }
            for (b, _) in &terms[i + 1..] {
                if same_curve(atlas, a, b)? {
                    return Err(Error::Malformed(format!("repeated curve {a}")));
                }
                if intersection(atlas, a, b)? != 0 {
                    return Err(Error::NotMulticurve(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(Multitwist { terms })
    }

    pub fn single(id: &str, k: i32) -> Self {
        Multitwist { terms: vec![(Curve::named(id), k)] }
    }

    pub fn support(&self) -> Vec<Curve> {
        self.terms.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn to_mc(&self) -> MappingClass {
        MappingClass::new(self.terms.clone())
    }
}

/// Action on curves. Named curves and images stay symbolic; coordinate curves
/// are updated by the blue-curve rule `t ↦ t + k m`.
pub fn apply(atlas: &Atlas, f: &MappingClass, c: &Curve) -> Result<Curve> {
    atlas.word_stage(f)?;
    match c {
        Curve::Named(id) => {
            atlas.named_stage(id)?;
            Ok(if f.is_identity_word() { c.clone() } else { Curve::Image { of: id.clone(), word: f.clone() } })
        }
        Curve::Image { of, word } => {
            let w = f.then_after(word);
            Ok(if w.is_identity_word() { Curve::Named(of.clone()) } else { Curve::Image { of: of.clone(), word: w } })
        }
        Curve::Coords(cs) => {
            let mut out = cs.clone();
            for (g, k) in f.letters().iter().rev() {
                let id = match g {
                    Curve::Named(id) if atlas.color(id) == Some(Color::Blue) => id,
                    other => return Err(Error::Unsupported(format!("coordinate action of letter {other}"))),
                };
                if let Some(e) = out.get_mut(id) {
                    *e = annulus_twist(e.0, e.1, i64::from(*k));
                }
            }
            Ok(Curve::Coords(out))
        }
    }
}

/// Letters resolved to words once, for repeated evaluation.
struct Compiled(Vec<(Vec<Letter>, i32)>);

fn compile(atlas: &Atlas, f: &MappingClass, n: usize) -> Result<Compiled> {
    f.letters().iter().map(|(c, k)| Ok((atlas.resolve(c, n)?, *k))).collect::<Result<_>>().map(Compiled)
}

impl Compiled {
    fn act(&self, atlas: &Atlas, n: usize, mut x: Vec<Letter>) -> Result<Vec<Letter>> {
        let m = atlas.model(n)?;
        for (c, k) in self.0.iter().rev() {
            x = m.twist(c, *k, &x);
        }
        Ok(x)
    }
}

/// First curve of `curves` on which `f` and `g` differ, evaluated in stage `n`.
pub fn first_difference(
    atlas: &Atlas,
    f: &MappingClass,
    g: &MappingClass,
    curves: &[String],
    n: usize,
) -> Result<Option<String>> {
    let cf = compile(atlas, f, n)?;
    let cg = compile(atlas, g, n)?;
    let m = atlas.model(n)?;
    for id in curves {
        let w = m.word(id).ok_or_else(|| Error::Unresolved(id.clone()))?.to_vec();
        if cf.act(atlas, n, w.clone())? != cg.act(atlas, n, w)? {
            return Ok(Some(id.clone()));
        }
    }
    Ok(None)
}

/// Agreement on the marking of stage `n` (`A_{n+1}` and the circles of stage `n`).
pub fn equal_mc(atlas: &Atlas, f: &MappingClass, g: &MappingClass, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::StageTooSmall(n));
    }
    let s = atlas.word_stage(f)?.max(atlas.word_stage(g)?);
    if s > n {
        return Err(Error::Unsupported(format!("words live in stage {s}, above the requested stage {n}")));
    }
    let marking = atlas.marking(n)?;
    Ok(first_difference(atlas, f, g, &marking, n + 1)?.is_none())
}

pub fn commutes(atlas: &Atlas, a: &Multitwist, b: &Multitwist, n: usize) -> Result<bool> {
    let (fa, fb) = (a.to_mc(), b.to_mc());
    equal_mc(atlas, &fa.then_after(&fb), &fb.then_after(&fa), n)
}

pub fn braided(atlas: &Atlas, a: &Multitwist, b: &Multitwist, n: usize) -> Result<bool> {
    let (fa, fb) = (a.to_mc(), b.to_mc());
    equal_mc(atlas, &fa.then_after(&fb).then_after(&fa), &fb.then_after(&fa).then_after(&fb), n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWitness {
    pub common: Multitwist,
    pub pairs: Vec<(Curve, Curve)>,
    pub signs: Vec<i32>,
}

/// Check `T1 = T prod t_{a_i}^{n_i}` and `T2 = T prod t_{b_i}^{n_i}` with
/// `i(a_i, b_j) = δ_ij`, `n_i = ±1` and `T` fixing every `a_i`, `b_j`.
pub fn braided_decomposition_verify(
    atlas: &Atlas,
    t1: &Multitwist,
    t2: &Multitwist,
    w: &BraidWitness,
    n: usize,
) -> Result<bool> {
    if w.pairs.len() != w.signs.len() || w.signs.iter().any(|s| s.abs() != 1) {
        return Ok(false);
    }
    for (i, (a, _)) in w.pairs.iter().enumerate() {
        for (j, (_, b)) in w.pairs.iter().enumerate() {
            if intersection(atlas, a, b)? != usize::from(i == j) {
                return Ok(false);
            }
        }
    }
    let t = w.common.to_mc();
    let s = atlas.curve_stage_all(w.pairs.iter().flat_map(|(a, b)| [a, b]))?.max(n);
    for c in w.pairs.iter().flat_map(|(a, b)| [a, b]) {
        let x = atlas.resolve(c, s)?;
        if atlas.act(&t, x.clone(), s)? != x {
            return Ok(false);
        }
    }
    let side = |pick: fn(&(Curve, Curve)) -> &Curve| {
        let mut terms = w.common.terms.clone();
        terms.extend(w.pairs.iter().zip(&w.signs).map(|(p, &k)| (pick(p).clone(), k)));
        MappingClass::new(terms)
    };
    Ok(equal_mc(atlas, &t1.to_mc(), &side(|p| &p.0), n)? && equal_mc(atlas, &t2.to_mc(), &side(|p| &p.1), n)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Found(BraidWitness),
    NotFound { budget: usize },
}

/// Exhaustive search over splittings of the two supports into a common part
/// and once-intersecting pairs.
pub fn braided_decomposition_search(
    atlas: &Atlas,
    t1: &Multitwist,
    t2: &Multitwist,
    n: usize,
    budget: usize,
) -> Result<SearchOutcome> {
    if t1.terms.len() > 4 || t2.terms.len() > 4 {
        return Err(Error::Unsupported("braided search takes supports of size at most 4".into()));
    }
    let mut tried = 0;
    let k1 = t1.terms.len();
    let mut masks: Vec<u32> = (0..(1u32 << k1)).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for mask in masks {
        let common: Vec<(Curve, i32)> =
            (0..k1).filter(|i| mask >> i & 1 == 1).map(|i| t1.terms[i].clone()).collect();
        let rest1: Vec<(Curve, i32)> =
            (0..k1).filter(|i| mask >> i & 1 == 0).map(|i| t1.terms[i].clone()).collect();
        let mut rest2 = Vec::new();
        let mut matched = vec![false; common.len()];
        for (c, k) in &t2.terms {
            let hit = common.iter().position(|(d, e)| e == k && same_curve(atlas, c, d).unwrap_or(false));
            match hit {
                Some(i) if !matched[i] => matched[i] = true,
                _ => rest2.push((c.clone(), *k)),
            }
        }
        if matched.iter().any(|m| !m) || rest1.len() != rest2.len() {
            continue;
        }
        if rest1.iter().chain(&rest2).any(|(_, k)| k.abs() != 1) {
            continue;
        }
        for perm in permutations(rest2.len()) {
            tried += 1;
            if tried > budget {
                return Ok(SearchOutcome::NotFound { budget });
            }
            if rest1.iter().zip(&perm).any(|((_, k), &j)| rest2[j].1 != *k) {
                continue;
            }
            let w = BraidWitness {
                common: Multitwist { terms: common.clone() },
                pairs: rest1.iter().zip(&perm).map(|((a, _), &j)| (a.clone(), rest2[j].0.clone())).collect(),
                signs: rest1.iter().map(|(_, k)| *k).collect(),
            };
            if braided_decomposition_verify(atlas, t1, t2, &w, n)? {
                return Ok(SearchOutcome::Found(w));
            }
        }
    }
    Ok(SearchOutcome::NotFound { budget: tried })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceWitness {
    /// Position of the letter `a_m` in the stream.
    pub index: usize,
    pub letter: Curve,
    pub exponent: i32,
    /// `F_m(c) = t_{a_m}^{k_m}(c)`.
    pub moved: Curve,
    /// Auxiliary curve with `i(c, b_m) = 0` and `i(a_m, b_m) > 0`.
    pub auxiliary: Curve,
    /// `i(F_m(c), b_m)` and the lower bound `|k| i(a,c) i(a,b) - i(c,b)`.
    pub moved_intersection: usize,
    pub lower_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    pub probe: Curve,
    pub witnesses: Vec<DivergenceWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductOutcome {
    Converged(Curve),
    Diverged(DivergenceCertificate),
}

/// Evaluate `prod t_{a_j}^{k_j}` on `c` for the stream letters inside stage `n`.
pub fn infinite_product(atlas: &Atlas, stream: &TwistStream, c: &Curve, n: usize) -> Result<ProductOutcome> {
    match is_locally_finite(atlas, stream, c, n)? {
        Finiteness::LocallyFiniteUpTo(_) => {
            let scan = stream.scan(atlas, n)?;
            let f = MappingClass::new(scan.items.into_iter().map(|StreamItem { curve, exponent }| (curve, exponent)).collect());
            Ok(ProductOutcome::Converged(apply(atlas, &f, c)?))
        }
        Finiteness::Violation(cert) => {
            let scan = stream.scan(atlas, n)?;
            let mut pool: Vec<Curve> = atlas.model(n)?.chain.iter().map(Curve::named).collect();
            pool.extend(atlas.exhaustion().boundary[n].iter().map(Curve::named));
            pool.extend(scan.items.iter().map(|i| i.curve.clone()));
            // The probe itself always works (i(t_a^k(c), c) = |k| i(a, c)^2) but says less.
            pool.retain(|b| b != c);
            pool.push(c.clone());
            let mut witnesses = Vec::new();
            for (index, a) in cert.hits {
                let k = scan.items[index].exponent;
                let mut aux = None;
                for b in &pool {
                    if intersection(atlas, c, b)? == 0 && intersection(atlas, &a, b)? > 0 {
                        aux = Some(b.clone());
                        break;
                    }
                }
                let Some(b) = aux else { continue };
                let moved = apply(atlas, &MappingClass::twist_about(a.clone(), k), c)?;
                let moved_intersection = intersection(atlas, &moved, &b)?;
                let lower_bound = i64::from(k.abs()) * intersection(atlas, &a, c)? as i64
                    * intersection(atlas, &a, &b)? as i64
                    - intersection(atlas, c, &b)? as i64;
                witnesses.push(DivergenceWitness {
                    index,
                    letter: a,
                    exponent: k,
                    moved,
                    auxiliary: b,
                    moved_intersection,
                    lower_bound,
                });
            }
            Ok(ProductOutcome::Diverged(DivergenceCertificate { probe: c.clone(), witnesses }))
        }
    }
}

/// Four-holed sphere with boundary `a1..a4` and interior curves `a5, a6, a7`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanternWindow {
    pub boundary: [Curve; 4],
    pub interior: [Curve; 3],
}

/// The template window around the circle joining `w` to its parent.
pub fn template_window(atlas: &Atlas, w: u32) -> Result<LanternWindow> {
    let ex = atlas.exhaustion();
    let piece = ex.pieces.get(&w).ok_or_else(|| Error::Unresolved(format!("v{w}")))?;
    let p = piece.ports[0].filter(|_| w != ex.blueprint.root).ok_or_else(|| {
        Error::Malformed(format!("piece {w} has no parent window"))
    })?;
    let j = ex.pieces[&p].ports.iter().position(|q| *q == Some(w)).unwrap();
    let (before, after) = if p == ex.blueprint.root {
        (format!("v{p}.blue0"), format!("v{p}.blue0"))
    } else {
        (format!("v{p}.blue{}", j - 1), format!("v{p}.blue{j}"))
    };
    let last = format!("v{w}.blue{}", piece.kind.blue_count() - 1);
    let n = |s: String| Curve::Named(s);
    Ok(LanternWindow {
        boundary: [n(before), n(format!("v{w}.blue0")), n(after), n(last)],
        interior: [n(label(p, j)), n(format!("z{w}")), n(format!("a{w}"))],
    })
}

/// `t_1 = t_5 t_6 t_7 (t_2 t_3 t_4)^-1` on the marking of the window's stage.
pub fn lantern_check(atlas: &Atlas, r: &LanternWindow) -> Result<bool> {
    for (i, a) in r.interior.iter().enumerate() {
        for b in &r.interior[i + 1..] {
            if intersection(atlas, a, b)? != 2 {
                return Err(Error::Malformed(format!("interior curves {a} and {b} must meet twice")));
            }
        }
        for d in &r.boundary {
            if intersection(atlas, a, d)? != 0 {
                return Err(Error::Malformed(format!("interior curve {a} meets boundary curve {d}")));
            }
        }
    }
    let stage = atlas.curve_stage_all(r.boundary.iter().chain(&r.interior))?.max(2);
    let t = |c: &Curve| MappingClass::twist_about(c.clone(), 1);
    let lhs = t(&r.boundary[0]);
    let inner = t(&r.interior[0]).then_after(&t(&r.interior[1])).then_after(&t(&r.interior[2]));
    let outer = t(&r.boundary[1]).then_after(&t(&r.boundary[2])).then_after(&t(&r.boundary[3]));
    equal_mc(atlas, &lhs, &inner.then_after(&outer.inverse()), stage)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub letters: Vec<(Curve, i32)>,
    /// `letters[..ends[n]]` multiplies to the stage-`n` word.
    pub ends: Vec<usize>,
}

/// Curves a stage-`n` word is compared on: `A_n` and the circles of stage `n`.
pub fn core_marking(atlas: &Atlas, n: usize) -> Result<Vec<String>> {
    let mut out = atlas.chain(n)?;
    out.extend(atlas.exhaustion().boundary[n].iter().cloned());
    Ok(out)
}

/// Split a coherent family `f^(0), ..., f^(N)` into a sequence of twists whose
/// stage-`n` prefix acts like `f^(n)`. All comparisons run in the stage-`N` model.
pub fn twist_product_decomposition(atlas: &Atlas, family: &[MappingClass], big_n: usize) -> Result<Decomposition> {
    if family.len() < big_n + 1 {
        return Err(Error::Malformed(format!("family has {} words, need {}", family.len(), big_n + 1)));
    }
    let top = big_n.max(1);
    for n in 0..big_n {
        if first_difference(atlas, &family[n], &family[n + 1], &core_marking(atlas, n)?, top)?.is_some() {
            return Err(Error::Incoherent(n + 1));
        }
    }
    let mut letters: Vec<(Curve, i32)> = Vec::new();
    let mut ends = Vec::new();
    let mut prev = MappingClass::identity();
    for f in &family[..=big_n] {
        let step = prev.inverse().then_after(f);
        letters.extend(step.letters().iter().cloned());
        ends.push(letters.len());
        prev = f.clone();
    }
    for (c, _) in &letters {
        if is_separating(atlas, c)? {
            return Err(Error::Unsupported(format!("separating twist letter {c}")));
        }
    }
    for (n, &end) in ends.iter().enumerate() {
        let partial = MappingClass::new(letters[..end].to_vec());
        if first_difference(atlas, &partial, &family[n], &core_marking(atlas, n)?, top)?.is_some() {
            return Err(Error::Incoherent(n));
        }
    }
    Ok(Decomposition { letters, ends })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atlas() -> Atlas {
        Atlas::from_spec("ray", 4).unwrap()
    }

    #[test]
    fn word_normalisation_and_json() {
        let f = MappingClass::new(vec![
            (Curve::named("a"), 1),
            (Curve::named("a"), 2),
            (Curve::named("b"), 0),
            (Curve::named("c"), 1),
            (Curve::named("c"), -1),
        ]);
        assert_eq!(f.letters(), &[(Curve::named("a"), 3)]);
        let s = serde_json::to_string(&MappingClass::twist("v2.red", -2)).unwrap();
        assert_eq!(s, r#"[["v2.red",-2]]"#);
        assert_eq!(serde_json::from_str::<MappingClass>(&s).unwrap(), MappingClass::twist("v2.red", -2));
    }

    #[test]
    fn disjoint_twist_fixes() {
        let at = atlas();
        let f = MappingClass::twist("v2.blue0", 1);
        let c = apply(&at, &f, &Curve::named("v4.red")).unwrap();
        assert!(same_curve(&at, &c, &Curve::named("v4.red")).unwrap());
        let d = apply(&at, &f, &Curve::named("v2.red")).unwrap();
        assert!(!same_curve(&at, &d, &Curve::named("v2.red")).unwrap());
    }

    #[test]
    fn coordinate_twist() {
        let at = atlas();
        let c = Curve::Coords([("v2.blue0".to_string(), (2, 0))].into());
        let out = apply(&at, &MappingClass::twist("v2.blue0", 3), &c).unwrap();
        assert_eq!(out, Curve::Coords([("v2.blue0".to_string(), (2, 6))].into()));
        assert!(apply(&at, &MappingClass::twist("v2.red", 1), &c).is_err());
    }

    #[test]
    fn equality_on_markings() {
        let at = atlas();
        let ta = MappingClass::twist("v2.blue0", 1);
        let tb = MappingClass::twist("v2.red", 1);
        assert!(equal_mc(&at, &ta.then_after(&ta.inverse()), &MappingClass::identity(), 2).unwrap());
        assert!(!equal_mc(&at, &ta.then_after(&tb), &tb.then_after(&ta), 2).unwrap());
        let f = tb.then_after(&MappingClass::twist("a2", -1));
        let lhs = ta.conjugate_by(&f);
        let fa = apply(&at, &f, &Curve::named("v2.blue0")).unwrap();
        assert!(equal_mc(&at, &lhs, &MappingClass::twist_about(fa, 1), 2).unwrap());
        assert_eq!(equal_mc(&at, &ta, &ta, 1), Err(Error::StageTooSmall(1)));
    }

    #[test]
    fn braids_and_commutation() {
        let at = atlas();
        let m = |id: &str| Multitwist::single(id, 1);
        assert!(braided(&at, &m("v2.red"), &m("v2.blue1"), 2).unwrap());
        assert!(braided(&at, &m("v2.red"), &m("v2.red"), 2).unwrap());
        assert!(!braided(&at, &m("v2.blue0"), &m("v2.blue1"), 2).unwrap());
        assert!(commutes(&at, &m("v2.blue0"), &m("v2.blue1"), 2).unwrap());
        assert!(!commutes(&at, &m("v2.red"), &m("v2.blue1"), 2).unwrap());
    }

    #[test]
    fn braid_witnesses() {
        let at = atlas();
        let (a, b) = (Multitwist::single("v2.red", 1), Multitwist::single("v2.blue0", 1));
        let w = BraidWitness {
            common: Multitwist { terms: vec![] },
            pairs: vec![(Curve::named("v2.red"), Curve::named("v2.blue0"))],
            signs: vec![1],
        };
        assert!(braided_decomposition_verify(&at, &a, &b, &w, 2).unwrap());
        assert!(matches!(braided_decomposition_search(&at, &a, &b, 2, 100).unwrap(), SearchOutcome::Found(_)));
        let t = Multitwist { terms: vec![(Curve::named("v4.blue0"), 1)] };
        assert!(braided_decomposition_verify(&at, &t, &t, &BraidWitness { common: t.clone(), pairs: vec![], signs: vec![] }, 2).unwrap());
        let c = Multitwist::single("v2.blue1", 1);
        assert!(matches!(
            braided_decomposition_search(&at, &b, &c, 2, 100).unwrap(),
            SearchOutcome::NotFound { .. }
        ));
        let shared = |x: &str| {
            Multitwist::new(&at, vec![(Curve::named("v4.blue0"), 1), (Curve::named(x), 1)]).unwrap()
        };
        match braided_decomposition_search(&at, &shared("v2.red"), &shared("v2.blue0"), 3, 100).unwrap() {
            SearchOutcome::Found(w) => assert_eq!(w.common.terms, vec![(Curve::named("v4.blue0"), 1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lantern_windows() {
        let at = atlas();
        for w in [2, 4, 8] {
            let r = template_window(&at, w).unwrap();
            assert!(lantern_check(&at, &r).unwrap(), "window {w}");
        }
        let mut bad = template_window(&at, 4).unwrap();
        bad.interior[0] = bad.boundary[0].clone();
        assert!(lantern_check(&at, &bad).is_err());
    }
}
