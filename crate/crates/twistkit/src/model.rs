//! Ribbon-graph realisation of one stage of an exhaustion.
//!
//! Pieces are laid out as nested blocks on a disk with bands: a piece's block is
//! its handle `[x, y, x^-1, y^-1]` followed by one component per child-facing
//! circle (a child's block, or a petal band when the circle is still a
//! boundary). Read that way the outer face would be an extra boundary circle,
//! so the last petal band is deleted and its letter rewritten through the outer
//! face relation. Template curves are written in the block words first and then
//! pushed through that rewrite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ribbon::Ribbon;
use crate::surface::{label, Exhaustion, PieceKind};
use crate::word::{self, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
    Extra,
    Boundary,
    /// Window curves outside the chain (third lantern curve).
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub color: Color,
    pub piece: u32,
    /// First stage containing the curve.
    pub stage: usize,
}

#[derive(Debug, Clone)]
pub struct StageModel {
    pub stage: usize,
    pub ribbon: Ribbon,
    words: BTreeMap<String, Vec<Letter>>,
    meta: BTreeMap<String, CurveMeta>,
    /// Chain curves of this stage in construction order.
    pub chain: Vec<String>,
    /// Boundary circles of this stage (parent-side labels).
    pub boundary: Vec<String>,
    boundary_span: Vec<Vec<bool>>,
}

struct Builder<'a> {
    ex: &'a Exhaustion,
    n: usize,
    names: Vec<String>,
    sigma: Vec<Letter>,
    petals: Vec<Letter>,
    /// Per piece: handle letters and the encircling word of each component, by port.
    handles: BTreeMap<u32, (Letter, Letter)>,
    comps: BTreeMap<u32, BTreeMap<usize, Vec<Letter>>>,
}

impl Builder<'_> {
    fn gen(&mut self, name: String) -> Letter {
        self.names.push(name);
        self.names.len() as Letter
    }

    fn present(&self, v: u32) -> bool {
        self.ex.stage_vertices(self.n).contains(&v)
    }

    fn block(&mut self, v: u32) -> Vec<Letter> {
        let x = self.gen(format!("x{v}"));
        let y = self.gen(format!("y{v}"));
        self.sigma.extend([x, y, -x, -y]);
        let mut enc = vec![x, -y, -x, y];
        self.handles.insert(v, (x, y));
        let piece = &self.ex.pieces[&v];
        let first = usize::from(v != self.ex.blueprint.root);
        let mut comps = BTreeMap::new();
        for j in first..piece.kind.boundary_count() {
            let e = match piece.ports[j] {
                Some(w) if self.present(w) && w > v => self.block(w),
                _ => {
                    let p = self.gen(format!("p{v}.{j}"));
                    self.sigma.extend([p, -p]);
                    self.petals.push(p);
                    vec![p]
                }
            };
            enc.extend(&e);
            comps.insert(j, e);
        }
        self.comps.insert(v, comps);
        enc
    }
}

/// Template words of piece `v` in block letters: blues then red.
fn piece_words(b: &Builder, v: u32) -> Vec<(String, Color, Vec<Letter>)> {
    let (x, y) = b.handles[&v];
    let kind = b.ex.pieces[&v].kind;
    let comps: Vec<&Vec<Letter>> = b.comps[&v].values().collect();
    let mut out = Vec::new();
    let blues = if kind == PieceKind::F1 { 1 } else { kind.blue_count() };
    let mut acc = vec![x];
    for i in 0..blues {
        if i > 0 {
            acc.extend(comps[i - 1]);
        }
        out.push((format!("v{v}.blue{i}"), Color::Blue, acc.clone()));
    }
    out.push((format!("v{v}.red"), Color::Red, vec![y]));
    out
}

/// The extra chain curve joining piece `w` to its parent.
fn extra_word(b: &Builder, w: u32) -> Vec<Letter> {
    let p = b.ex.pieces[&w].ports[0].expect("non-root piece has a parent");
    let j = b.ex.pieces[&p].ports.iter().position(|q| *q == Some(w)).unwrap();
    let (xp, _) = b.handles[&p];
    let mut before = vec![xp];
    for (&k, e) in &b.comps[&p] {
        if k < j {
            before.extend(e);
        }
    }
    // The parent's cuff before the circle followed by the child's last blue curve.
    let (xw, _) = b.handles[&w];
    let mut out = before;
    out.push(xw);
    for e in b.comps[&w].values() {
        out.extend(e);
    }
    out
}

/// Third interior curve of the four-holed sphere around the circle above `w`:
/// the parent's cuff after the circle followed by the inverse of the child's
/// last blue curve.
fn window_word(b: &Builder, w: u32) -> Vec<Letter> {
    let p = b.ex.pieces[&w].ports[0].expect("non-root piece has a parent");
    let j = b.ex.pieces[&p].ports.iter().position(|q| *q == Some(w)).unwrap();
    let (xp, _) = b.handles[&p];
    let mut out = vec![xp];
    for (&k, e) in &b.comps[&p] {
        if k <= j {
            out.extend(e);
        }
    }
    let (xw, _) = b.handles[&w];
    let mut last = vec![xw];
    for e in b.comps[&w].values() {
        last.extend(e);
    }
    out.extend(word::inverse(&last));
    out
}

impl StageModel {
    pub fn build(ex: &Exhaustion, n: usize) -> StageModel {
        let mut b = Builder {
            ex,
            n,
            names: Vec::new(),
            sigma: Vec::new(),
            petals: Vec::new(),
            handles: BTreeMap::new(),
            comps: BTreeMap::new(),
        };
        let root = ex.blueprint.root;
        let outer = b.block(root);

        let mut raw: Vec<(String, CurveMeta, Vec<Letter>)> = Vec::new();
        let mut chain = Vec::new();
        for (k, &v) in ex.stage_vertices(n).iter().enumerate() {
            for (id, color, w) in piece_words(&b, v) {
                chain.push(id.clone());
                raw.push((id, CurveMeta { color, piece: v, stage: k }, w));
            }
            if v != root {
                let id = format!("a{v}");
                chain.push(id.clone());
                raw.push((id, CurveMeta { color: Color::Extra, piece: v, stage: k }, extra_word(&b, v)));
                let meta = CurveMeta { color: Color::Auxiliary, piece: v, stage: k };
                raw.push((format!("z{v}"), meta, window_word(&b, v)));
            }
        }
        let mut boundary = Vec::new();
        let mut circles = Vec::new();
        for &v in ex.stage_vertices(n) {
            for (&j, e) in &b.comps[&v] {
                let l = label(v, j);
                let stage = ex.stage_of(v).unwrap();
                if e.len() == 1 && b.petals.contains(&e[0]) {
                    boundary.push(l.clone());
                }
                circles.push((l, CurveMeta { color: Color::Boundary, piece: v, stage }, e.clone()));
            }
        }
        raw.extend(circles);

        // Delete the last petal and rewrite its letter through the outer face.
        let p = *b.petals.last().expect("every stage has a boundary circle");
        let at = outer.iter().position(|&l| l == p).unwrap();
        let rest: Vec<Letter> = outer[at + 1..].iter().chain(&outer[..at]).copied().collect();
        let subst = word::inverse(&rest);
        let pg = p as usize;
        let names: Vec<String> =
            b.names.iter().enumerate().filter(|(i, _)| i + 1 != pg).map(|(_, s)| s.clone()).collect();
        let remap = |l: Letter| -> Letter {
            let g = l.unsigned_abs() as usize;
            let ng = if g > pg { g - 1 } else { g } as Letter;
            ng * l.signum()
        };
        let convert = |w: &[Letter]| -> Vec<Letter> {
            let mut out = Vec::new();
            for &l in w {
                if l == p {
                    out.extend(&subst);
                } else if l == -p {
                    out.extend(word::inverse(&subst));
                } else {
                    out.push(l);
                }
            }
            word::canonical(&out.into_iter().map(remap).collect::<Vec<_>>())
        };
        let sigma: Vec<Letter> = b.sigma.iter().filter(|l| l.unsigned_abs() as usize != pg).map(|&l| remap(l)).collect();
        let ribbon = Ribbon::new(names, sigma);

        let mut words = BTreeMap::new();
        let mut meta = BTreeMap::new();
        for (id, m, w) in raw {
            words.insert(id.clone(), convert(&w));
            meta.insert(id, m);
        }
        // Child-side aliases of glued circles.
        for (a, c) in &ex.gluing {
            for (x, y) in [(a, c), (c, a)] {
                if words.contains_key(x) && !words.contains_key(y) {
                    let owner: u32 = y[1..y.find('.').unwrap()].parse().unwrap();
                    if ex.stage_vertices(n).contains(&owner) {
                        words.insert(y.clone(), words[x].clone());
                        meta.insert(y.clone(), meta[x].clone());
                    }
                }
            }
        }
        let rank = ribbon.rank();
        let boundary_span = ribbon.faces().iter().map(|f| word::parity(f, rank)).collect();
        StageModel { stage: n, ribbon, words, meta, chain, boundary, boundary_span }
    }

    pub fn word(&self, id: &str) -> Option<&[Letter]> {
        self.words.get(id).map(|w| w.as_slice())
    }

    pub fn meta(&self, id: &str) -> Option<&CurveMeta> {
        self.meta.get(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &String> {
        self.words.keys()
    }

    /// Interior gluing circles of this stage (parent-side labels).
    pub fn interior_circles(&self) -> Vec<String> {
        self.meta
            .iter()
            .filter(|(id, m)| {
                m.color == Color::Boundary && !self.boundary.contains(id) && {
                    let owner: u32 = id[1..id.find('.').unwrap()].parse().unwrap();
                    owner == m.piece
                }
            })
            .map(|(id, _)| id.clone())
            .filter(|id| !id.ends_with(".b0") || id.starts_with("v1."))
            .collect()
    }

    /// Mod-2 test: a simple closed curve separates iff its class lies in the
    /// span of the boundary classes.
    pub fn is_separating_word(&self, w: &[Letter]) -> bool {
        let rank = self.ribbon.rank();
        let target = word::parity(w, rank);
        in_span(&self.boundary_span, &target)
    }

    pub fn intersection(&self, a: &[Letter], b: &[Letter]) -> usize {
        self.ribbon.intersection(a, b)
    }

    pub fn twist(&self, c: &[Letter], k: i32, x: &[Letter]) -> Vec<Letter> {
        self.ribbon.twist(c, k, x)
    }
}

fn in_span(basis: &[Vec<bool>], target: &[bool]) -> bool {
    let mut rows: Vec<Vec<bool>> = basis.to_vec();
    rows.push(target.to_vec());
    let rank_with = f2_rank(rows.clone());
    rows.pop();
    f2_rank(rows) == rank_with
}

fn f2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let src = rows[rank].clone();
                for (x, s) in rows[r].iter_mut().zip(src) {
                    *x ^= s;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_blueprint, build_exhaustion};

    #[test]
    fn stage_topology() {
        for spec in ["ray", "binary", "2-rays"] {
            let ex = build_exhaustion(&build_blueprint(spec, 4).unwrap(), 4).unwrap();
            for n in 0..=4 {
                let m = StageModel::build(&ex, n);
                assert_eq!(m.ribbon.genus(), n + 1, "{spec} {n}");
                assert_eq!(m.ribbon.faces().len(), ex.boundary[n].len(), "{spec} {n}");
            }
        }
    }
}
