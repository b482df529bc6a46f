//! Curves, multicurves and twist streams, with intersection numbers,
//! separation tests and local finiteness.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atlas::Atlas;
use crate::error::{Error, Result};
use crate::model::Color;
use crate::twists::MappingClass;

/// Per blue curve: (intersection count `m`, twisting `t`).
pub type Coords = BTreeMap<String, (u32, i64)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    /// Template, chain or boundary curve.
    Named(String),
    /// Coordinates relative to the blue pants curves.
    Coords(Coords),
    /// Image of a named curve under a twist word.
    Image { of: String, word: MappingClass },
}

impl Curve {
    pub fn named(id: impl Into<String>) -> Self {
        Curve::Named(id.into())
    }

    pub fn id(&self) -> Option<&str> {
        match self {
            Curve::Named(id) => Some(id),
            _ => None,
        }
    }

    /// Coordinate validity: `m = 0` forces `t >= 0`.
    pub fn validate(&self) -> Result<()> {
        if let Curve::Coords(cs) = self {
            if let Some((g, _)) = cs.iter().find(|(_, &(m, t))| m == 0 && t < 0) {
                return Err(Error::Malformed(format!("coordinate {g} has m = 0 and t < 0")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Named(id) => write!(f, "{id}"),
            Curve::Coords(cs) => {
                let parts: Vec<String> = cs.iter().map(|(g, (m, t))| format!("{g}:({m},{t})")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            Curve::Image { of, word } => write!(f, "{word}({of})"),
        }
    }
}

/// Stage in which a pair of curves is compared.
fn pair_stage(atlas: &Atlas, a: &Curve, b: &Curve) -> Result<usize> {
    Ok(atlas.curve_stage(a)?.max(atlas.curve_stage(b)?))
}

fn blue_read(atlas: &Atlas, coords: &Coords, other: &Curve) -> Result<usize> {
    match other {
        Curve::Named(id) if atlas.color(id) == Some(Color::Blue) => {
            atlas.named_stage(id)?;
            Ok(coords.get(id).map_or(0, |&(m, _)| m as usize))
        }
        _ => Err(Error::Unsupported(format!(
            "intersection of a coordinate curve with {other} (only blue pants curves are read off)"
        ))),
    }
}

/// Geometric intersection number.
pub fn intersection(atlas: &Atlas, a: &Curve, b: &Curve) -> Result<usize> {
    match (a, b) {
        (Curve::Coords(ca), Curve::Coords(cb)) => {
            if ca == cb {
                return Ok(0);
            }
            Err(Error::Unsupported("intersection of two coordinate curves (lower bound 0)".into()))
        }
        (Curve::Coords(ca), other) | (other, Curve::Coords(ca)) => blue_read(atlas, ca, other),
        _ => {
            let n = pair_stage(atlas, a, b)?;
            let m = atlas.model(n)?;
            Ok(m.intersection(&atlas.resolve(a, n)?, &atlas.resolve(b, n)?))
        }
    }
}

/// Separation test through the template ancestor.
pub fn is_separating(atlas: &Atlas, c: &Curve) -> Result<bool> {
    match c {
        Curve::Named(id) | Curve::Image { of: id, .. } => {
            let n = atlas.named_stage(id)?;
            let m = atlas.model(n)?;
            Ok(m.is_separating_word(m.word(id).ok_or_else(|| Error::Unresolved(id.clone()))?))
        }
        Curve::Coords(_) => Err(Error::Unsupported("coordinate curve has no template ancestry".into())),
    }
}

/// Same isotopy class.
pub fn same_curve(atlas: &Atlas, a: &Curve, b: &Curve) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    let n = pair_stage(atlas, a, b)?;
    Ok(atlas.resolve(a, n)? == atlas.resolve(b, n)?)
}

/// Finite multicurve: pairwise disjoint curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multicurve(pub Vec<Curve>);

impl Multicurve {
    pub fn new(atlas: &Atlas, curves: Vec<Curve>) -> Result<Self> {
        for (i, a) in curves.iter().enumerate() {
            for b in &curves[i + 1..] {
                if intersection(atlas, a, b)? != 0 {
                    return Err(Error::NotMulticurve(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(Multicurve(curves))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamItem {
    pub curve: Curve,
    pub exponent: i32,
}

type Generator = dyn Fn(usize) -> Option<StreamItem> + Send + Sync;

/// Restartable lazy sequence of (curve, exponent) letters, enumerated stage by stage.
#[derive(Clone)]
pub struct TwistStream {
    pub name: String,
    gen: Arc<Generator>,
}

impl fmt::Debug for TwistStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistStream({})", self.name)
    }
}

/// Elements scanned before an infinite stream inside one stage is declared infinite.
pub const STREAM_BUDGET: usize = 48;

impl TwistStream {
    pub fn new(name: impl Into<String>, f: impl Fn(usize) -> Option<StreamItem> + Send + Sync + 'static) -> Self {
        TwistStream { name: name.into(), gen: Arc::new(f) }
    }

    pub fn from_items(name: impl Into<String>, items: Vec<StreamItem>) -> Self {
        TwistStream::new(name, move |i| items.get(i).cloned())
    }

    pub fn get(&self, i: usize) -> Option<StreamItem> {
        (self.gen)(i)
    }

    /// Elements lying in stage `n`, stopping at the first element outside it.
    pub fn scan(&self, atlas: &Atlas, n: usize) -> Result<Scan> {
        let mut items = Vec::new();
        for i in 0.. {
            let Some(item) = self.get(i) else {
                return Ok(Scan { items, exhausted: false });
            };
            let inside = match atlas.curve_stage(&item.curve) {
                Ok(s) => s <= n,
                Err(Error::Unresolved(_)) => false,
                Err(e) => return Err(e),
            };
            if !inside {
                return Ok(Scan { items, exhausted: false });
            }
            items.push(item);
            if items.len() >= STREAM_BUDGET {
                return Ok(Scan { items, exhausted: true });
            }
        }
        unreachable!()
    }
}

#[derive(Debug, Clone)]
pub struct Scan {
    pub items: Vec<StreamItem>,
    /// The budget ran out while the stream was still inside the stage.
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub probe: Curve,
    /// Stream positions and curves meeting the probe.
    pub hits: Vec<(usize, Curve)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Finiteness {
    LocallyFiniteUpTo(usize),
    Violation(ViolationCertificate),
}

/// Local finiteness of a stream against a probe, up to stage `n`.
pub fn is_locally_finite(atlas: &Atlas, stream: &TwistStream, probe: &Curve, n: usize) -> Result<Finiteness> {
    atlas.model(n)?;
    let scan = stream.scan(atlas, n)?;
    if !scan.exhausted {
        return Ok(Finiteness::LocallyFiniteUpTo(n));
    }
    let mut hits = Vec::new();
    for (i, item) in scan.items.iter().enumerate() {
        if intersection(atlas, probe, &item.curve)? > 0 {
            hits.push((i, item.curve.clone()));
        }
    }
    if hits.len() >= 3 {
        Ok(Finiteness::Violation(ViolationCertificate { probe: probe.clone(), hits }))
    } else {
        Ok(Finiteness::LocallyFiniteUpTo(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let c = Curve::named("v2.red");
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"named":"v2.red"}"#);
        let k = Curve::Coords(BTreeMap::from([("v2.blue0".to_string(), (2, -3))]));
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"coords":{"v2.blue0":[2,-3]}}"#);
        assert_eq!(serde_json::from_str::<Curve>(&s).unwrap(), k);
        let bad = Curve::Coords(BTreeMap::from([("v2.blue0".to_string(), (0, -1))]));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn template_intersections() {
        let at = Atlas::from_spec("ray", 3).unwrap();
        let i = |a: &str, b: &str| intersection(&at, &Curve::named(a), &Curve::named(b)).unwrap();
        assert_eq!(i("v2.blue0", "v2.red"), 1);
        assert_eq!(i("v2.blue1", "v2.red"), 1);
        assert_eq!(i("v4.red", "v4.red"), 0);
        assert_eq!(i("v2.blue0", "v4.blue0"), 0);
        let coords = Curve::Coords(BTreeMap::from([("v2.blue0".to_string(), (2, 5))]));
        assert_eq!(intersection(&at, &coords, &Curve::named("v2.blue0")).unwrap(), 2);
        assert!(matches!(intersection(&at, &coords, &Curve::named("v2.red")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn separation() {
        let at = Atlas::from_spec("binary", 3).unwrap();
        let sep = |id: &str| is_separating(&at, &Curve::named(id)).unwrap();
        assert!(sep("v2.b1"));
        assert!(sep("v1.b0"));
        assert!(!sep("v2.blue1"));
        assert!(!sep("v4.red"));
        assert!(!sep("a5"));
        let img = Curve::Image { of: "v2.red".into(), word: MappingClass::twist("v2.blue0", 2) };
        assert!(!is_separating(&at, &img).unwrap());
        assert!(is_separating(&at, &Curve::Coords(Coords::new())).is_err());
    }

    #[test]
    fn finiteness() {
        let at = Atlas::from_spec("ray", 4).unwrap();
        let ex = at.exhaustion().clone();
        let blues = TwistStream::new("blue-per-stage", move |i| {
            ex.order.get(i).map(|v| StreamItem { curve: Curve::named(format!("v{v}.blue0")), exponent: 1 })
        });
        let probe = Curve::named("v2.red");
        assert_eq!(is_locally_finite(&at, &blues, &probe, 3).unwrap(), Finiteness::LocallyFiniteUpTo(3));
        let spin = TwistStream::new("spin", |k| {
            Some(StreamItem {
                curve: Curve::Image { of: "v2.blue0".into(), word: MappingClass::twist("v2.red", k as i32 + 1) },
                exponent: 1,
            })
        });
        match is_locally_finite(&at, &spin, &Curve::named("v2.blue1"), 3).unwrap() {
            Finiteness::Violation(cert) => assert!(cert.hits.len() >= 3),
            other => panic!("expected a violation, got {other:?}"),
        }
    }
}
