//! Chains, chain graphs, the Alexander chain of an exhaustion, and the
//! stage-wise reconstruction of a homeomorphism from a chain bijection.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::atlas::Atlas;
use crate::curves::{intersection, Curve};
use crate::error::{Error, Result};
use crate::model::Color;
use crate::surface::{label, relabel};
use crate::word::{self, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCurve {
    pub curve: Curve,
    pub color: Color,
    pub stage: usize,
}

impl ChainCurve {
    pub fn name(&self) -> String {
        self.curve.to_string()
    }
}

/// Finite chain with its intersection table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub curves: Vec<ChainCurve>,
    pub table: Vec<Vec<u8>>,
}

impl Chain {
    /// Chain from arbitrary curves; rejects pairs meeting more than once.
    pub fn from_curves(atlas: &Atlas, curves: Vec<Curve>) -> Result<Chain> {
        let mut cs = Vec::with_capacity(curves.len());
        for c in curves {
            let stage = atlas.curve_stage(&c)?;
            let color = match &c {
                Curve::Named(id) | Curve::Image { of: id, .. } => atlas.color(id).unwrap_or(Color::Auxiliary),
                Curve::Coords(_) => Color::Auxiliary,
            };
            cs.push(ChainCurve { curve: c, color, stage });
        }
        let n = cs.len();
        let mut table = vec![vec![0u8; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let k = intersection(atlas, &cs[i].curve, &cs[j].curve)?;
                if k > 1 {
                    return Err(Error::Malformed(format!(
                        "{} and {} meet {k} times, so they do not form a chain",
                        cs[i].name(),
                        cs[j].name()
                    )));
                }
                table[i][j] = k as u8;
                table[j][i] = k as u8;
            }
        }
        Ok(Chain { curves: cs, table })
    }

    pub fn from_ids(atlas: &Atlas, ids: &[String]) -> Result<Chain> {
        Chain::from_curves(atlas, ids.iter().map(Curve::named).collect())
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.curves.iter().map(ChainCurve::name).collect()
    }

    /// The curves living in stage `n`.
    pub fn restrict(&self, n: usize) -> Chain {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.curves[i].stage <= n).collect();
        Chain {
            curves: keep.iter().map(|&i| self.curves[i].clone()).collect(),
            table: keep.iter().map(|&i| keep.iter().map(|&j| self.table[i][j]).collect()).collect(),
        }
    }

    pub fn graph(&self) -> ChainGraph {
        let mut edges = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.table[i][j] == 1 {
                    edges.push((i, j));
                }
            }
        }
        ChainGraph { names: self.names(), colors: self.curves.iter().map(|c| c.color).collect(), edges }
    }
}

/// The Alexander chain through every built stage; `restrict(n)` gives `A_n`.
pub fn alexander_chain(atlas: &Atlas) -> Result<Chain> {
    Chain::from_ids(atlas, &atlas.top().chain)
}

/// Vertices are chain curves, edges join curves meeting once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainGraph {
    pub names: Vec<String>,
    pub colors: Vec<Color>,
    pub edges: Vec<(usize, usize)>,
}

impl ChainGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph chain {\n  node [style=filled, fontcolor=white];\n");
        for (name, color) in self.names.iter().zip(&self.colors) {
            let fill = match color {
                Color::Blue => "blue",
                Color::Red => "red",
                Color::Extra => "darkgreen",
                Color::Boundary | Color::Auxiliary => "gray40",
            };
            s.push_str(&format!("  \"{name}\" [fillcolor={fill}];\n"));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("  \"{}\" -- \"{}\";\n", self.names[a], self.names[b]));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeCertificate {
    /// Parent of each curve in a spanning tree rooted at the first curve.
    Spanning(Vec<(String, Option<String>)>),
    Cycle(Vec<String>),
    Disconnected(Vec<Vec<String>>),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeLike {
    pub tree_like: bool,
    pub certificate: TreeCertificate,
}

fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

/// Parent pointers of a BFS forest, or a cycle if one is met.
fn bfs_forest(adj: &[Vec<usize>]) -> std::result::Result<Vec<Option<usize>>, Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if Some(w) == parent[v] {
                    continue;
                }
                if seen[w] {
                    return Err(cycle_through(&parent, v, w));
                }
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    Ok(parent)
}

fn cycle_through(parent: &[Option<usize>], a: usize, b: usize) -> Vec<usize> {
    let path = |mut v: usize| {
        let mut p = vec![v];
        while let Some(u) = parent[v] {
            p.push(u);
            v = u;
        }
        p
    };
    let (pa, pb) = (path(a), path(b));
    let common = pa.iter().find(|v| pb.contains(v)).copied().unwrap();
    let mut cyc: Vec<usize> = pa.iter().copied().take_while(|&v| v != common).collect();
    cyc.push(common);
    let back: Vec<usize> = pb.iter().copied().take_while(|&v| v != common).collect();
    cyc.extend(back.into_iter().rev());
    cyc
}

pub fn is_tree_like(chain: &Chain, n: usize) -> TreeLike {
    let c = chain.restrict(n);
    let g = c.graph();
    let names = &g.names;
    if names.is_empty() {
        return TreeLike { tree_like: false, certificate: TreeCertificate::Empty };
    }
    let adj = g.adjacency();
    match bfs_forest(&adj) {
        Err(cyc) => TreeLike {
            tree_like: false,
            certificate: TreeCertificate::Cycle(cyc.into_iter().map(|i| names[i].clone()).collect()),
        },
        Ok(parent) => {
            let comps = components(&adj);
            if comps.len() > 1 {
                let cs = comps.into_iter().map(|c| c.into_iter().map(|i| names[i].clone()).collect()).collect();
                return TreeLike { tree_like: false, certificate: TreeCertificate::Disconnected(cs) };
            }
            let sp = parent.iter().enumerate().map(|(i, p)| (names[i].clone(), p.map(|p| names[p].clone()))).collect();
            TreeLike { tree_like: true, certificate: TreeCertificate::Spanning(sp) }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FillingCertificate {
    /// Every piece carries its blue and red curves and every interior circle
    /// its extra curve; every non-peripheral template curve meets the chain.
    Audited { pieces: Vec<u32>, circles: Vec<String> },
    /// A piece lacks a template curve, leaving a non-disk region it would cross.
    Missing { piece: u32, curve: String },
    /// A non-peripheral template curve misses every chain curve.
    Uncrossed(String),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filling {
    pub filling: bool,
    pub certificate: FillingCertificate,
}

/// Template audit of the complement of the chain in stage `n`.
pub fn is_filling(atlas: &Atlas, chain: &Chain, n: usize) -> Result<Filling> {
    let c = chain.restrict(n);
    if c.is_empty() {
        return Ok(Filling { filling: false, certificate: FillingCertificate::Empty });
    }
    let m = atlas.model(n)?;
    let mut present = BTreeSet::new();
    for cc in &c.curves {
        match &cc.curve {
            Curve::Named(id) if m.meta(id).is_some() => {
                present.insert(id.clone());
            }
            other => return Err(Error::Unsupported(format!("filling audit of non-template curve {other}"))),
        }
    }
    let ex = atlas.exhaustion();
    let root = ex.blueprint.root;
    let fail = |piece: u32, curve: String| Ok(Filling { filling: false, certificate: FillingCertificate::Missing { piece, curve } });
    let mut circles = Vec::new();
    for &v in ex.stage_vertices(n) {
        let kind = ex.pieces[&v].kind;
        for i in 0..kind.blue_count().max(1) {
            let id = format!("v{v}.blue{i}");
            if !present.contains(&id) {
                return fail(v, id);
            }
        }
        let red = format!("v{v}.red");
        if !present.contains(&red) {
            return fail(v, red);
        }
        if v != root {
            let a = format!("a{v}");
            if !present.contains(&a) {
                return fail(v, a);
            }
            circles.push(ex.parent_label(v).unwrap());
        }
    }
    let peripheral: BTreeSet<&String> = m.boundary.iter().collect();
    let mut probes: Vec<String> = m.ids().filter(|id| !peripheral.contains(id)).cloned().collect();
    probes.retain(|id| !present.contains(id));
    for id in probes {
        let w = m.word(&id).unwrap();
        if m.boundary.iter().any(|b| m.word(b) == Some(w)) {
            continue;
        }
        if !present.iter().any(|p| m.intersection(m.word(p).unwrap(), w) > 0) {
            return Ok(Filling { filling: false, certificate: FillingCertificate::Uncrossed(id) });
        }
    }
    Ok(Filling { filling: true, certificate: FillingCertificate::Audited { pieces: ex.stage_vertices(n).to_vec(), circles } })
}

/// Maximum induced matching of a forest: matched edges share no vertex and
/// no graph edge joins two different matched edges.
pub fn induced_matching_forest(adj: &[Vec<usize>]) -> Option<usize> {
    let parent = bfs_forest(adj).ok()?;
    let n = adj.len();
    let children: Vec<Vec<usize>> =
        (0..n).map(|v| adj[v].iter().copied().filter(|&w| parent[w] == Some(v)).collect()).collect();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for r in (0..n).filter(|&v| parent[v].is_none()) {
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(&children[v]);
        }
    }
    // free[v]: v unmatched; matched[v]: v matched to one of its children.
    let mut free = vec![0usize; n];
    let mut matched = vec![None::<usize>; n];
    for &v in order.iter().rev() {
        free[v] = children[v].iter().map(|&c| free[c].max(matched[c].unwrap_or(0))).sum();
        let all_free: usize = children[v].iter().map(|&c| free[c]).sum();
        matched[v] = children[v]
            .iter()
            .map(|&u| {
                let below: usize = children[u].iter().map(|&c| free[c]).sum();
                1 + below + all_free - free[u]
            })
            .max();
    }
    Some(
        (0..n)
            .filter(|&v| parent[v].is_none())
            .map(|r| free[r].max(matched[r].unwrap_or(0)))
            .sum(),
    )
}

/// Exhaustive maximum induced matching.
pub fn induced_matching_brute(adj: &[Vec<usize>]) -> usize {
    let mut edges = Vec::new();
    for (a, ns) in adj.iter().enumerate() {
        for &b in ns {
            if a < b {
                edges.push((a, b));
            }
        }
    }
    fn go(adj: &[Vec<usize>], edges: &[(usize, usize)], i: usize, used: &mut Vec<bool>, count: usize) -> usize {
        if i == edges.len() {
            return count;
        }
        let mut best = go(adj, edges, i + 1, used, count);
        let (a, b) = edges[i];
        let clear = |v: usize| !used[v] && adj[v].iter().all(|&w| !used[w] || w == a || w == b);
        if clear(a) && clear(b) {
            used[a] = true;
            used[b] = true;
            best = best.max(go(adj, edges, i + 1, used, count + 1));
            used[a] = false;
            used[b] = false;
        }
        best
    }
    go(adj, &edges, 0, &mut vec![false; adj.len()], 0)
}

/// Largest number of curve pairs meeting once, pairs mutually disjoint.
pub fn lower_genus(chain: &Chain, n: usize) -> Result<usize> {
    let adj = chain.restrict(n).graph().adjacency();
    if let Some(k) = induced_matching_forest(&adj) {
        return Ok(k);
    }
    if adj.len() <= 16 {
        return Ok(induced_matching_brute(&adj));
    }
    Err(Error::Unsupported(format!("lower genus of a cyclic chain graph on {} curves", adj.len())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Isomorphism {
    Bijection(Vec<(String, String)>),
    NotIsomorphic(String),
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut removed = vec![false; n];
    let mut left = n;
    while left > 2 {
        left -= leaves.len();
        for &l in &leaves {
            removed[l] = true;
        }
        let mut next = Vec::new();
        for &l in &leaves {
            for &w in &adj[l] {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

fn ahu(adj: &[Vec<usize>], v: usize, p: Option<usize>) -> String {
    let mut codes: Vec<String> = adj[v].iter().filter(|&&w| Some(w) != p).map(|&w| ahu(adj, w, Some(v))).collect();
    codes.sort();
    format!("({})", codes.concat())
}

fn ahu_match(
    a: &[Vec<usize>],
    b: &[Vec<usize>],
    (u, pu): (usize, Option<usize>),
    (v, pv): (usize, Option<usize>),
    out: &mut Vec<(usize, usize)>,
) {
    out.push((u, v));
    let kids = |g: &[Vec<usize>], x: usize, px: Option<usize>| {
        let mut ks: Vec<(String, usize)> =
            g[x].iter().filter(|&&w| Some(w) != px).map(|&w| (ahu(g, w, Some(x)), w)).collect();
        ks.sort();
        ks
    };
    for ((_, x), (_, y)) in kids(a, u, pu).into_iter().zip(kids(b, v, pv)) {
        ahu_match(a, b, (x, Some(u)), (y, Some(v)), out);
    }
}

fn search_iso(a: &[Vec<usize>], b: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = a.len();
    fn go(a: &[Vec<usize>], b: &[Vec<usize>], map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || a[i].len() != b[j].len() {
                continue;
            }
            let ok = (0..i).all(|k| a[i].contains(&k) == b[j].contains(&map[k]));
            if ok {
                map.push(j);
                used[j] = true;
                if go(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut map = Vec::with_capacity(n);
    go(a, b, &mut map, &mut vec![false; n]).then_some(map)
}

/// Intersection-preserving bijection between the stage-`n` restrictions.
pub fn chain_isomorphism(c1: &Chain, c2: &Chain, n: usize) -> Result<Isomorphism> {
    let (g1, g2) = (c1.restrict(n).graph(), c2.restrict(n).graph());
    let (a, b) = (g1.adjacency(), g2.adjacency());
    if a.len() != b.len() {
        return Ok(Isomorphism::NotIsomorphic(format!("curve counts {} and {}", a.len(), b.len())));
    }
    let degs = |g: &[Vec<usize>]| {
        let mut d: Vec<usize> = g.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    };
    if degs(&a) != degs(&b) {
        return Ok(Isomorphism::NotIsomorphic(format!("degree multisets {:?} and {:?}", degs(&a), degs(&b))));
    }
    let pairs = |m: Vec<(usize, usize)>| {
        Isomorphism::Bijection(m.into_iter().map(|(x, y)| (g1.names[x].clone(), g2.names[y].clone())).collect())
    };
    let tree = |g: &[Vec<usize>]| !g.is_empty() && bfs_forest(g).is_ok() && components(g).len() == 1;
    match (tree(&a), tree(&b)) {
        (true, true) => {
            let ca = centers(&a);
            let cb = centers(&b);
            let code = |g: &[Vec<usize>], r: usize| ahu(g, r, None);
            let best_a = ca.iter().map(|&r| (code(&a, r), r)).min().unwrap();
            let best_b = cb.iter().map(|&r| (code(&b, r), r)).min().unwrap();
            if best_a.0 != best_b.0 {
                return Ok(Isomorphism::NotIsomorphic(format!("canonical codes {} and {}", best_a.0, best_b.0)));
            }
            let mut m = Vec::new();
            ahu_match(&a, &b, (best_a.1, None), (best_b.1, None), &mut m);
            m.sort_unstable();
            Ok(pairs(m))
        }
        (true, false) | (false, true) => Ok(Isomorphism::NotIsomorphic("exactly one chain graph is a tree".into())),
        (false, false) if a.len() <= 16 => Ok(match search_iso(&a, &b) {
            Some(m) => pairs(m.into_iter().enumerate().collect()),
            None => Isomorphism::NotIsomorphic("exhaustive search found no bijection".into()),
        }),
        (false, false) => Err(Error::Unsupported(format!("isomorphism of cyclic chain graphs on {} curves", a.len()))),
    }
}

/// Whether `map` is a bijection preserving every intersection number.
pub fn verify_isomorphism(c1: &Chain, c2: &Chain, map: &BTreeMap<String, String>) -> bool {
    let (n1, n2) = (c1.names(), c2.names());
    if n1.len() != n2.len() || map.len() != n1.len() {
        return false;
    }
    let idx: BTreeMap<&String, usize> = n2.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let Some(img) = n1.iter().map(|s| map.get(s).and_then(|t| idx.get(t).copied())).collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    if img.iter().collect::<BTreeSet<_>>().len() != img.len() {
        return false;
    }
    (0..n1.len()).all(|i| (0..n1.len()).all(|j| c1.table[i][j] == c2.table[img[i]][img[j]]))
}

/// Piece-level correspondence between two exhaustions up to a stage, with the
/// induced maps on template curves and on ribbon generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageMap {
    pub stage: usize,
    pub pieces: BTreeMap<u32, u32>,
    pub curves: BTreeMap<String, String>,
    /// Image of ribbon generator `g` (1-based) is `letters[g - 1]`.
    pub letters: Vec<Letter>,
}

impl StageMap {
    pub fn map_word(&self, w: &[Letter]) -> Vec<Letter> {
        let img: Vec<Letter> = w.iter().map(|&l| self.letters[l.unsigned_abs() as usize - 1] * l.signum()).collect();
        word::canonical(&img)
    }

    /// The correspondence of stage `n`, which the stage-`n+1` map extends.
    pub fn pieces_at(&self, ex_stage_vertices: &[u32]) -> BTreeMap<u32, u32> {
        ex_stage_vertices.iter().filter_map(|v| self.pieces.get(v).map(|w| (*v, *w))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomeoOutcome {
    Map(StageMap),
    Failure { stage: usize, reason: String, witness: Option<String> },
}

/// Rebuild a stage-compatible homeomorphism from a chain bijection `psi`.
pub fn induced_homeomorphism(
    psi: &BTreeMap<String, String>,
    dom: &Atlas,
    cod: &Atlas,
    big_n: usize,
) -> Result<HomeoOutcome> {
    if big_n == 0 {
        return Err(Error::StageTooSmall(0));
    }
    let fail = |stage: usize, reason: &str, witness: Option<String>| {
        Ok(HomeoOutcome::Failure { stage, reason: reason.to_string(), witness })
    };
    let (c1, c2) = (Chain::from_ids(dom, &dom.chain(big_n)?)?, Chain::from_ids(cod, &cod.chain(big_n)?)?);
    for n in 0..=big_n {
        let (r1, r2) = (c1.restrict(n), c2.restrict(n));
        let names2: BTreeSet<String> = r2.names().into_iter().collect();
        let sub: BTreeMap<String, String> =
            r1.names().into_iter().filter_map(|a| psi.get(&a).map(|b| (a, b.clone()))).collect();
        let image: BTreeSet<String> = sub.values().cloned().collect();
        if sub.len() != r1.len() || image != names2 {
            let w = r1.names().into_iter().find(|a| psi.get(a).is_none_or(|b| !names2.contains(b)));
            return fail(n, "bijection does not carry the stage chain onto the stage chain", w);
        }
        if !verify_isomorphism(&r1, &r2, &sub) {
            return fail(n, "intersection numbers are not preserved", None);
        }
        if lower_genus(&r1, n)? != lower_genus(&r2, n)? {
            return fail(n, "lower genus differs", None);
        }
    }
    let (ex1, ex2) = (dom.exhaustion(), cod.exhaustion());
    let mut pieces = BTreeMap::new();
    for &v in ex1.stage_vertices(big_n) {
        let n = ex1.stage_of(v).unwrap();
        let red = format!("v{v}.red");
        let target = psi.get(&red).cloned().unwrap_or_default();
        let w = target.strip_prefix('v').and_then(|s| s.strip_suffix(".red")).and_then(|s| s.parse::<u32>().ok());
        let Some(w) = w else {
            return fail(n, "red curve is not sent to a red curve", Some(red));
        };
        if ex2.pieces[&w].kind != ex1.pieces[&v].kind || ex2.stage_of(w) != Some(n) {
            return fail(n, "piece kinds or stages differ", Some(format!("v{v} -> v{w}")));
        }
        pieces.insert(v, w);
    }
    for (&v, &w) in &pieces {
        let (p1, p2) = (&ex1.pieces[&v].ports, &ex2.pieces[&w].ports);
        for (j, x) in p1.iter().enumerate() {
            let x = x.filter(|x| pieces.contains_key(x));
            let y = p2[j].filter(|y| pieces.values().any(|z| z == y));
            if x.map(|x| pieces[&x]) != y {
                return fail(ex1.stage_of(v).unwrap(), "gluing pattern differs", Some(label(v, j)));
            }
        }
    }
    let (m1, m2) = (dom.model(big_n)?, cod.model(big_n)?);
    let mut curves = BTreeMap::new();
    for id in m1.ids() {
        let Some(t) = relabel(id, |v| pieces.get(&v).copied()) else { continue };
        if m2.word(&t).is_some() {
            curves.insert(id.clone(), t);
        }
    }
    for (a, b) in psi.iter().filter(|(a, _)| m1.meta(a).is_some_and(|m| m.stage <= big_n)) {
        if curves.get(a) != Some(b) {
            return fail(big_n, "bijection disagrees with the piece correspondence", Some(a.clone()));
        }
    }
    let mut letters = Vec::with_capacity(m1.ribbon.rank());
    for name in m1.ribbon.names() {
        let t = relabel(name, |v| pieces.get(&v).copied()).and_then(|t| m2.ribbon.letter(&t));
        let Some(l) = t else {
            return fail(big_n, "ribbon generator has no image", Some(name.clone()));
        };
        letters.push(l);
    }
    let h = StageMap { stage: big_n, pieces, curves, letters };
    let sigma: Vec<Letter> = m1.ribbon.sigma().iter().map(|&l| h.letters[l.unsigned_abs() as usize - 1] * l.signum()).collect();
    if sigma != m2.ribbon.sigma() {
        return fail(big_n, "ribbon structures differ", None);
    }
    for (id, t) in &h.curves {
        if h.map_word(m1.word(id).unwrap()) != m2.word(t).unwrap() {
            return fail(big_n, "template curve is not carried to its image", Some(id.clone()));
        }
    }
    for a in &m1.chain {
        let (wa, wb) = (m1.word(a).unwrap(), m2.word(&psi[a]).unwrap());
        for m in dom.marking(big_n - 1)? {
            let Some(x) = m1.word(&m) else { continue };
            let lhs = m2.twist(wb, 1, &h.map_word(x));
            let rhs = h.map_word(&m1.twist(wa, 1, x));
            if lhs != rhs {
                return fail(big_n, "conjugation check failed", Some(format!("t[{a}] on {m}")));
            }
        }
    }
    Ok(HomeoOutcome::Map(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twists::MappingClass;

    fn path(n: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| {
                let mut v = Vec::new();
                if i > 0 {
                    v.push(i - 1);
                }
                if i + 1 < n {
                    v.push(i + 1);
                }
                v
            })
            .collect()
    }

    #[test]
    fn alexander_chain_counts() {
        let at = Atlas::from_spec("ray", 3).unwrap();
        let a = alexander_chain(&at).unwrap();
        assert_eq!(a.restrict(0).len(), 2);
        assert_eq!(a.restrict(0).graph().edges.len(), 1);
        assert_eq!(a.restrict(1).len(), 6);
        for n in 0..=3 {
            let direct = Chain::from_ids(&at, &at.chain(n).unwrap()).unwrap();
            let other = Atlas::from_spec("ray", n).unwrap();
            assert_eq!(Chain::from_ids(&other, &other.chain(n).unwrap()).unwrap().table, direct.table);
            assert_eq!(a.restrict(n).table, direct.table);
        }
    }

    #[test]
    fn tree_like_and_cycles() {
        let at = Atlas::from_spec("binary", 2).unwrap();
        let a = alexander_chain(&at).unwrap();
        for n in 0..=2 {
            assert!(is_tree_like(&a, n).tree_like);
        }
        let single = Chain::from_ids(&at, &["v1.red".to_string()]).unwrap();
        assert!(is_tree_like(&single, 0).tree_like);
        let tri = Chain::from_curves(
            &at,
            vec![
                Curve::named("v2.blue0"),
                Curve::named("v2.red"),
                Curve::Image { of: "v2.blue0".into(), word: MappingClass::twist("v2.red", 1) },
            ],
        )
        .unwrap();
        match is_tree_like(&tri, 2).certificate {
            TreeCertificate::Cycle(c) => assert_eq!(c.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn filling_audit() {
        let at = Atlas::from_spec("binary", 2).unwrap();
        let a = alexander_chain(&at).unwrap();
        assert!(is_filling(&at, &a, 2).unwrap().filling);
        let blues: Vec<String> = at.chain(2).unwrap().into_iter().filter(|id| id.contains("blue")).collect();
        let f = is_filling(&at, &Chain::from_ids(&at, &blues).unwrap(), 2).unwrap();
        assert!(matches!(f.certificate, FillingCertificate::Missing { ref curve, .. } if curve.ends_with(".red")));
        let empty = Chain { curves: vec![], table: vec![] };
        assert!(!is_filling(&at, &empty, 2).unwrap().filling);
    }

    #[test]
    fn matchings() {
        // The middle edge of a four-curve path joins any two pairs.
        assert_eq!(induced_matching_forest(&path(4)), Some(1));
        assert_eq!(induced_matching_brute(&path(4)), 1);
        assert_eq!(induced_matching_brute(&path(5)), 2);
        assert_eq!(induced_matching_forest(&path(5)), Some(2));
        assert_eq!(induced_matching_forest(&path(2)), Some(1));
        for fam in ["ray", "binary", "2-rays"] {
            let at = Atlas::from_spec(fam, 4).unwrap();
            let a = alexander_chain(&at).unwrap();
            for n in 0..=4 {
                assert_eq!(lower_genus(&a, n).unwrap(), n + 1, "{fam} {n}");
            }
        }
    }

    #[test]
    fn isomorphisms() {
        let at = Atlas::from_spec("binary", 3).unwrap();
        let a = alexander_chain(&at).unwrap();
        match chain_isomorphism(&a, &a, 2).unwrap() {
            Isomorphism::Bijection(m) => {
                let map: BTreeMap<String, String> = m.into_iter().collect();
                assert!(verify_isomorphism(&a.restrict(2), &a.restrict(2), &map));
            }
            other => panic!("{other:?}"),
        }
        let ray = Atlas::from_spec("ray", 2).unwrap();
        let r = alexander_chain(&ray).unwrap();
        assert!(matches!(chain_isomorphism(&r, &a, 2).unwrap(), Isomorphism::NotIsomorphic(_)));
    }

    #[test]
    fn identity_homeomorphism() {
        let at = Atlas::from_spec("binary", 3).unwrap();
        let psi: BTreeMap<String, String> = at.chain(3).unwrap().into_iter().map(|a| (a.clone(), a)).collect();
        match induced_homeomorphism(&psi, &at, &at, 3).unwrap() {
            HomeoOutcome::Map(h) => assert!(h.pieces.iter().all(|(a, b)| a == b)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dot_output() {
        let at = Atlas::from_spec("ray", 2).unwrap();
        let g = alexander_chain(&at).unwrap().restrict(2).graph();
        let dot = g.to_dot();
        assert_eq!(dot.matches(" -- ").count(), g.names.len() - 1);
        assert!(dot.contains("fillcolor=red"));
    }
}
