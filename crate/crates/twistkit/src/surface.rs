//! Tree blueprints and compact exhaustions built from genus-one pieces.
//!
//! Vertices carry heap identifiers: the root is `1`, its only child is `2`, and
//! the children of `h` are `2h` and `2h + 1`. Sorting identifiers gives the
//! enumeration order, so every vertex comes after its parent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("unsupported end specification `{0}` (expected binary, ray or <k>-rays)")]
    UnsupportedEnds(String),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("blueprint has {available} vertices, too shallow for {stages} stages")]
    TooShallow { stages: usize, available: usize },
    #[error("no branching vertex with index {0}")]
    NoBranch(usize),
    #[error("subtrees at {left} and {right} differ first at vertex {mismatch}")]
    NotIsomorphic { left: u32, right: u32, mismatch: u32 },
    #[error("stage {stage} not built (exhaustion has {built} stages)")]
    StageOutOfRange { stage: usize, built: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeBlueprint {
    pub family: String,
    pub depth: usize,
    pub root: u32,
    /// Vertex identifiers in enumeration order.
    pub vertices: Vec<u32>,
    /// `(child, parent)` links.
    pub edges: Vec<(u32, u32)>,
    /// Valence each vertex has in the infinite tree.
    pub valence: BTreeMap<u32, usize>,
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Binary,
    Rays(u32),
}

fn parse_family(spec: &str) -> Result<Family, SurfaceError> {
    match spec {
        "binary" => Ok(Family::Binary),
        "ray" => Ok(Family::Rays(1)),
        _ => spec
            .strip_suffix("-rays")
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|&k| (1..=16).contains(&k))
            .map(Family::Rays)
            .ok_or_else(|| SurfaceError::UnsupportedEnds(spec.to_string())),
    }
}

fn children(family: Family, v: u32) -> Vec<u32> {
    match family {
        Family::Binary if v == 1 => vec![2],
        Family::Binary => vec![2 * v, 2 * v + 1],
        Family::Rays(k) => {
            if v == 1 {
                return vec![2];
            }
            // Spine vertices are the powers of two; the first k - 1 of them branch.
            let spine_branch = v.is_power_of_two() && v.trailing_zeros() < k;
            if spine_branch {
                vec![2 * v, 2 * v + 1]
            } else {
                vec![2 * v]
            }
        }
    }
}

pub fn build_blueprint(end_spec: &str, depth: usize) -> Result<TreeBlueprint, SurfaceError> {
    let family = parse_family(end_spec)?;
    if depth == 0 {
        return Err(SurfaceError::ZeroDepth);
    }
    let mut vertices = vec![1u32];
    let mut edges = Vec::new();
    let mut valence = BTreeMap::new();
    let mut level = vec![1u32];
    for d in 0..=depth {
        let mut next = Vec::new();
        for &v in &level {
            let ch = children(family, v);
            valence.insert(v, ch.len() + usize::from(v != 1));
            if d < depth {
                for c in ch {
                    edges.push((c, v));
                    next.push(c);
                }
            }
        }
        vertices.extend(&next);
        level = next;
    }
    vertices.sort_unstable();
    edges.sort_unstable();
    Ok(TreeBlueprint { family: end_spec.to_string(), depth, root: 1, vertices, edges, valence })
}

impl TreeBlueprint {
    pub fn parent(&self, v: u32) -> Option<u32> {
        self.edges.iter().find(|e| e.0 == v).map(|e| e.1)
    }

    pub fn children(&self, v: u32) -> Vec<u32> {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Check the root/valence/enumeration invariants.
    pub fn validate(&self) -> Result<(), String> {
        if self.valence.get(&self.root) != Some(&1) {
            return Err("root must have valence 1".into());
        }
        for &v in &self.vertices {
            let val = self.valence[&v];
            if v != self.root && !(2..=3).contains(&val) {
                return Err(format!("vertex {v} has valence {val}"));
            }
            let inner = self.children(v).len() + usize::from(v != self.root);
            if inner > val {
                return Err(format!("vertex {v} has too many neighbours"));
            }
        }
        for &(c, p) in &self.edges {
            if c <= p {
                return Err(format!("vertex {c} does not come after its parent {p}"));
            }
        }
        Ok(())
    }

    fn subtree(&self, v: u32) -> Vec<u32> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.children(out[i]));
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Vertices of valence three in enumeration order.
    pub fn branch_vertices(&self) -> Vec<u32> {
        self.vertices.iter().copied().filter(|v| self.valence[v] == 3).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndInvolution {
    pub pivot: u32,
    pub left: u32,
    pub right: u32,
    /// Full vertex permutation (fixed vertices included).
    pub perm: BTreeMap<u32, u32>,
    pub order_two: bool,
}

impl EndInvolution {
    pub fn apply(&self, v: u32) -> u32 {
        self.perm.get(&v).copied().unwrap_or(v)
    }
}

/// Swap the two child subtrees of the `n`-th branching vertex (1-based).
pub fn blueprint_involution(bp: &TreeBlueprint, n: usize) -> Result<EndInvolution, SurfaceError> {
    let branch = bp.branch_vertices();
    let pivot = *n
        .checked_sub(1)
        .and_then(|i| branch.get(i))
        .ok_or(SurfaceError::NoBranch(n))?;
    let (left, right) = (2 * pivot, 2 * pivot + 1);
    let mirror = |v: u32, from: u32, to: u32| {
        let shift = 31 - v.leading_zeros() - (31 - from.leading_zeros());
        to * (1 << shift) + (v - (from << shift))
    };
    let ls = bp.subtree(left);
    let rs = bp.subtree(right);
    for &v in &ls {
        let w = mirror(v, left, right);
        if !bp.contains(w) || bp.valence[&v] != bp.valence[&w] {
            return Err(SurfaceError::NotIsomorphic { left, right, mismatch: v });
        }
    }
    for &w in &rs {
        if !bp.contains(mirror(w, right, left)) {
            return Err(SurfaceError::NotIsomorphic { left, right, mismatch: w });
        }
    }
    let mut perm: BTreeMap<u32, u32> = bp.vertices.iter().map(|&v| (v, v)).collect();
    for &v in &ls {
        let w = mirror(v, left, right);
        perm.insert(v, w);
        perm.insert(w, v);
    }
    let order_two = perm.iter().all(|(&v, &w)| perm[&w] == v);
    Ok(EndInvolution { pivot, left, right, perm, order_two })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceKind {
    F1,
    F2,
    F3,
}

impl PieceKind {
    pub fn boundary_count(self) -> usize {
        match self {
            PieceKind::F1 => 1,
            PieceKind::F2 => 2,
            PieceKind::F3 => 3,
        }
    }

    /// Number of blue (pants) curves in the template.
    pub fn blue_count(self) -> usize {
        self.boundary_count()
    }
}

impl fmt::Display for PieceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub vertex: u32,
    pub kind: PieceKind,
    /// Boundary labels `v{i}.b{j}`; `b0` faces the parent (the child, at the root).
    pub labels: Vec<String>,
    /// Neighbouring piece behind each label, when it exists in the blueprint.
    pub ports: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub blueprint: TreeBlueprint,
    /// Highest built stage index.
    pub stages: usize,
    /// Vertex added at each stage.
    pub order: Vec<u32>,
    pub pieces: BTreeMap<u32, Piece>,
    /// Gluing involution on labels, stored once per pair.
    pub gluing: Vec<(String, String)>,
    /// Labels of the boundary circles of each stage.
    pub boundary: Vec<Vec<String>>,
    pub genus: Vec<usize>,
}

/// Rename the piece number inside a curve or generator id (`v4.red`, `a4`,
/// `z4`, `p4.1`, `x4`) through `f`; `None` when `f` leaves it undefined.
pub fn relabel(id: &str, f: impl Fn(u32) -> Option<u32>) -> Option<String> {
    let start = id.find(|c: char| c.is_ascii_digit())?;
    let (head, rest) = id.split_at(start);
    let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let v: u32 = rest[..end].parse().ok()?;
    Some(format!("{head}{}{}", f(v)?, &rest[end..]))
}

pub fn label(v: u32, j: usize) -> String {
    format!("v{v}.b{j}")
}

pub fn build_exhaustion(bp: &TreeBlueprint, n: usize) -> Result<Exhaustion, SurfaceError> {
    if n + 1 > bp.vertices.len() {
        return Err(SurfaceError::TooShallow { stages: n, available: bp.vertices.len() });
    }
    let mut pieces = BTreeMap::new();
    for &v in &bp.vertices {
        let val = bp.valence[&v];
        let kind = match (v == bp.root, val) {
            (true, _) => PieceKind::F1,
            (false, 2) => PieceKind::F2,
            _ => PieceKind::F3,
        };
        let mut ports: Vec<Option<u32>> = if v == bp.root { vec![] } else { vec![bp.parent(v)] };
        let mut kids = bp.children(v);
        kids.sort_unstable();
        let free = kind.boundary_count() - ports.len();
        for i in 0..free {
            ports.push(kids.get(i).copied());
        }
        let labels = (0..kind.boundary_count()).map(|j| label(v, j)).collect();
        pieces.insert(v, Piece { vertex: v, kind, labels, ports });
    }
    Ok(assemble(bp.clone(), n, bp.vertices[..=n].to_vec(), pieces))
}

fn assemble(
    blueprint: TreeBlueprint,
    stages: usize,
    order: Vec<u32>,
    pieces: BTreeMap<u32, Piece>,
) -> Exhaustion {
    let mut gluing = Vec::new();
    let mut boundary = Vec::new();
    let mut genus = Vec::new();
    for k in 0..=stages {
        let present: BTreeSet<u32> = order[..=k].iter().copied().collect();
        let mut bd = Vec::new();
        for &v in &order[..=k] {
            let p = &pieces[&v];
            for (j, port) in p.ports.iter().enumerate() {
                match port {
                    Some(w) if present.contains(w) => {}
                    _ => bd.push(label(v, j)),
                }
            }
        }
        boundary.push(bd);
        genus.push(k + 1);
    }
    for &v in &order {
        let p = &pieces[&v];
        for (j, port) in p.ports.iter().enumerate() {
            if let Some(w) = port {
                if order.contains(w) && *w > v {
                    let q = &pieces[w];
                    let back = q.ports.iter().position(|x| *x == Some(v)).unwrap();
                    let pair = (label(v, j), label(*w, back));
                    if !gluing.contains(&pair) {
                        gluing.push(pair);
                    }
                }
            }
        }
    }
    Exhaustion { blueprint, stages, order, pieces, gluing, boundary, genus }
}

impl Exhaustion {
    pub fn stage_vertices(&self, n: usize) -> &[u32] {
        &self.order[..=n.min(self.stages)]
    }

    pub fn stage_of(&self, v: u32) -> Option<usize> {
        self.order.iter().position(|&w| w == v)
    }

    /// Label glued to `l`, if any.
    pub fn glued(&self, l: &str) -> Option<&str> {
        self.gluing.iter().find_map(|(a, b)| {
            if a == l {
                Some(b.as_str())
            } else if b == l {
                Some(a.as_str())
            } else {
                None
            }
        })
    }

    /// Parent-side label of the circle separating `v` from its parent.
    pub fn parent_label(&self, v: u32) -> Option<String> {
        let p = self.pieces[&v].ports.first().copied().flatten()?;
        if v == self.blueprint.root {
            return None;
        }
        let j = self.pieces[&p].ports.iter().position(|x| *x == Some(v))?;
        Some(label(p, j))
    }

    /// Relabel every vertex through a blueprint involution.
    pub fn permuted(&self, inv: &EndInvolution) -> Exhaustion {
        let order: Vec<u32> = self.order.iter().map(|&v| inv.apply(v)).collect();
        let pieces = self
            .pieces
            .values()
            .map(|p| {
                let v = inv.apply(p.vertex);
                let q = Piece {
                    vertex: v,
                    kind: p.kind,
                    labels: (0..p.kind.boundary_count()).map(|j| label(v, j)).collect(),
                    ports: p.ports.iter().map(|x| x.map(|w| inv.apply(w))).collect(),
                };
                (v, q)
            })
            .collect();
        assemble(self.blueprint.clone(), self.stages, order, pieces)
    }

    pub fn check_stage(&self, n: usize) -> Result<(), SurfaceError> {
        if n > self.stages {
            Err(SurfaceError::StageOutOfRange { stage: n, built: self.stages })
        } else {
            Ok(())
        }
    }

    /// Components left after cutting the piece tree of stage `m` along the circle `l`.
    pub fn components_after_cut(&self, l: &str, m: usize) -> usize {
        let present: BTreeSet<u32> = self.stage_vertices(m).iter().copied().collect();
        let Some(other) = self.glued(l) else { return 1 };
        let owner = |s: &str| s[1..s.find('.').unwrap()].parse::<u32>().unwrap();
        let (a, b) = (owner(l), owner(other));
        if !present.contains(&a) || !present.contains(&b) {
            return 1;
        }
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            for w in self.pieces[&v].ports.iter().flatten() {
                if present.contains(w) && !(v == a && *w == b) && !(v == b && *w == a) && seen.insert(*w) {
                    stack.push(*w);
                }
            }
        }
        if seen.contains(&b) {
            1
        } else {
            2
        }
    }
}

pub fn stage_genus(ex: &Exhaustion, n: usize) -> Result<usize, SurfaceError> {
    ex.check_stage(n)?;
    Ok(ex.genus[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blueprint_counts() {
        let ray = build_blueprint("ray", 4).unwrap();
        assert_eq!(ray.vertices, vec![1, 2, 4, 8, 16]);
        assert_eq!(ray.valence.values().copied().collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
        assert_eq!(build_blueprint("binary", 3).unwrap().vertices.len(), 8);
        let two = build_blueprint("2-rays", 2).unwrap();
        assert_eq!(two.vertices, vec![1, 2, 4, 5]);
        assert_eq!(two.valence[&2], 3);
        assert!(matches!(build_blueprint("cantor", 2), Err(SurfaceError::UnsupportedEnds(_))));
        for spec in ["ray", "binary", "2-rays", "3-rays"] {
            build_blueprint(spec, 5).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn exhaustion_kinds_and_genus() {
        let ex = build_exhaustion(&build_blueprint("ray", 3).unwrap(), 3).unwrap();
        let kinds: Vec<_> = ex.order.iter().map(|v| ex.pieces[v].kind).collect();
        assert_eq!(kinds, vec![PieceKind::F1, PieceKind::F2, PieceKind::F2, PieceKind::F2]);
        assert_eq!(ex.genus, vec![1, 2, 3, 4]);
        let ex0 = build_exhaustion(&build_blueprint("ray", 1).unwrap(), 0).unwrap();
        assert_eq!(ex0.boundary[0], vec!["v1.b0".to_string()]);
        let bin = build_exhaustion(&build_blueprint("binary", 2).unwrap(), 2).unwrap();
        assert_eq!(bin.boundary[2].len(), 3);
        assert!(matches!(
            build_exhaustion(&build_blueprint("ray", 2).unwrap(), 5),
            Err(SurfaceError::TooShallow { .. })
        ));
    }

    #[test]
    fn involutions() {
        let bin = build_blueprint("binary", 3).unwrap();
        let t = blueprint_involution(&bin, 1).unwrap();
        assert_eq!((t.left, t.right), (4, 5));
        assert!(t.order_two);
        assert_eq!(t.apply(8), 10);
        let t2 = blueprint_involution(&bin, 2).unwrap();
        assert_eq!((t2.left, t2.right), (8, 9));
        assert_eq!(t2.apply(5), 5);
        assert!(blueprint_involution(&build_blueprint("ray", 4).unwrap(), 1).is_err());
        let three = build_blueprint("3-rays", 3).unwrap();
        assert!(matches!(
            blueprint_involution(&three, 1),
            Err(SurfaceError::NotIsomorphic { mismatch: 4, .. })
        ));
    }
}
