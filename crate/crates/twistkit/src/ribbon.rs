//! One-vertex ribbon graphs and the exact curve engine.
//!
//! A compact surface with nonempty boundary deformation retracts onto a rose
//! whose half-edges carry a cyclic (counterclockwise) order. Free homotopy
//! classes of closed curves are cyclic words; intersection numbers come from
//! counting linked pairs of lifts to the universal-cover tree, and Dehn twists
//! splice a copy of the twisting curve in at each crossing.

use std::cmp::Ordering;

use crate::word::{self, Letter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ribbon {
    names: Vec<String>,
    sigma: Vec<Letter>,
    pos: Vec<usize>,
}

fn he(l: Letter) -> usize {
    let g = l.unsigned_abs() as usize - 1;
    2 * g + usize::from(l < 0)
}

#[derive(Clone, Copy)]
struct Ray<'a> {
    w: &'a [Letter],
    start: usize,
    forward: bool,
}

impl Ray<'_> {
    fn at(&self, d: usize) -> Letter {
        let n = self.w.len();
        if self.forward {
            self.w[(self.start + 1 + d) % n]
        } else {
            -self.w[(self.start + n * (d / n + 1) - d % n) % n]
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Crossing {
    at: usize,
    lift: usize,
    forward_left: bool,
    right_forward: bool,
}

impl Ribbon {
    /// `sigma` lists every letter `±g` exactly once in counterclockwise order.
    pub fn new(names: Vec<String>, sigma: Vec<Letter>) -> Self {
        let n = names.len();
        assert_eq!(sigma.len(), 2 * n, "cyclic order must list 2 half-edges per generator");
        let mut pos = vec![usize::MAX; 2 * n];
        for (i, &l) in sigma.iter().enumerate() {
            assert!(l != 0 && (l.unsigned_abs() as usize) <= n, "letter {l} out of range");
            assert_eq!(pos[he(l)], usize::MAX, "letter {l} repeated");
            pos[he(l)] = i;
        }
        Ribbon { names, sigma, pos }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sigma(&self) -> &[Letter] {
        &self.sigma
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter + 1)
    }

    pub fn render(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|&l| {
                let n = &self.names[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    n.clone()
                } else {
                    format!("{n}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn p(&self, l: Letter) -> usize {
        self.pos[he(l)]
    }

    fn next(&self, l: Letter) -> Letter {
        self.sigma[(self.p(l) + 1) % self.sigma.len()]
    }

    /// Boundary words, one per boundary component.
    pub fn faces(&self) -> Vec<Vec<Letter>> {
        let mut seen = vec![false; self.sigma.len()];
        let mut out = Vec::new();
        for &start in &self.sigma {
            if seen[he(start)] {
                continue;
            }
            let mut face = Vec::new();
            let mut l = start;
            while !seen[he(l)] {
                seen[he(l)] = true;
                face.push(l);
                l = self.next(-l);
            }
            out.push(face);
        }
        out
    }

    pub fn genus(&self) -> usize {
        let f = self.faces().len() as i64;
        let chi = 1 - self.rank() as i64;
        ((2 - chi - f) / 2) as usize
    }

    fn cmp_rays(&self, r: Ray, s: Ray, limit: usize) -> Ordering {
        let m = self.sigma.len();
        for d in 0..limit {
            let a = r.at(d);
            let b = s.at(d);
            if a != b {
                if d == 0 {
                    return self.p(a).cmp(&self.p(b));
                }
                let base = self.p(-r.at(d - 1));
                let ka = (self.p(a) + m - base) % m;
                let kb = (self.p(b) + m - base) % m;
                return ka.cmp(&kb);
            }
        }
        Ordering::Equal
    }

    fn lifts(u: &[Letter], i: usize) -> (Ray<'_>, Ray<'_>) {
        (Ray { w: u, start: i, forward: false }, Ray { w: u, start: i, forward: true })
    }

    /// Strictly counterclockwise-between test: `p` lies on the open arc running
    /// counterclockwise from `a` to `b`.
    fn between(&self, a: Ray, p: Ray, b: Ray, limit: usize) -> Option<bool> {
        let ap = self.cmp_rays(a, p, limit);
        let pb = self.cmp_rays(p, b, limit);
        let ab = self.cmp_rays(a, b, limit);
        if ap == Ordering::Equal || pb == Ordering::Equal || ab == Ordering::Equal {
            return None;
        }
        Some(match ab {
            Ordering::Less => ap == Ordering::Less && pb == Ordering::Less,
            _ => ap == Ordering::Less || pb == Ordering::Less,
        })
    }

    fn crossings(&self, u: &[Letter], v: &[Letter]) -> Vec<Crossing> {
        let limit = 2 * (u.len() + v.len()) + 4;
        let mut out = Vec::new();
        for i in 0..u.len() {
            let (bu, fu) = Self::lifts(u, i);
            for j in 0..v.len() {
                let (bv, fv) = Self::lifts(v, j);
                let back = bu.at(0);
                if back == bv.at(0) || back == fv.at(0) {
                    continue;
                }
                let (Some(rb), Some(rf)) =
                    (self.between(bu, bv, fu, limit), self.between(bu, fv, fu, limit))
                else {
                    continue;
                };
                if rb != rf {
                    out.push(Crossing { at: i, lift: j, forward_left: !rf, right_forward: rf });
                }
            }
        }
        out
    }

    /// Geometric intersection number of two simple closed curves.
    pub fn intersection(&self, u: &[Letter], v: &[Letter]) -> usize {
        let u = word::cyclic_reduce(u);
        let v = word::cyclic_reduce(v);
        if u.is_empty() || v.is_empty() || word::canonical(&u) == word::canonical(&v) {
            return 0;
        }
        self.crossings(&u, &v).len()
    }

    /// Number of transverse double points of a minimal representative.
    pub fn self_intersection(&self, u: &[Letter]) -> usize {
        let u = word::cyclic_reduce(u);
        let n = u.len();
        if n == 0 {
            return 0;
        }
        let p = n / word::power_exponent(&u);
        let limit = 4 * n + 4;
        let mut count = 0;
        for i in 0..n {
            let (bu, fu) = Self::lifts(&u, i);
            for j in 0..n {
                if (i + n - j).is_multiple_of(p) {
                    continue;
                }
                let (bv, fv) = Self::lifts(&u, j);
                let back = bu.at(0);
                if back == bv.at(0) || back == fv.at(0) {
                    continue;
                }
                if let (Some(rb), Some(rf)) =
                    (self.between(bu, bv, fu, limit), self.between(bu, fv, fu, limit))
                {
                    if rb != rf {
                        count += 1;
                    }
                }
            }
        }
        count / 2
    }

    /// `t_c^k(x)` for simple closed curves `c`, `x`; positive powers turn left.
    pub fn twist(&self, c: &[Letter], k: i32, x: &[Letter]) -> Vec<Letter> {
        let c = word::cyclic_reduce(c);
        let x = word::cyclic_reduce(x);
        if k == 0 || c.is_empty() || x.is_empty() || word::canonical(&c) == word::canonical(&x) {
            return word::canonical(&x);
        }
        let mut cr = self.crossings(&x, &c);
        if cr.is_empty() {
            return word::canonical(&x);
        }
        let limit = 2 * (x.len() + c.len()) + 4;
        cr.sort_by(|a, b| {
            a.at.cmp(&b.at).then_with(|| {
                let (bx, _) = Self::lifts(&x, a.at);
                let end = |cr: &Crossing| {
                    let (b, f) = Self::lifts(&c, cr.lift);
                    if cr.right_forward {
                        f
                    } else {
                        b
                    }
                };
                let (pa, pb) = (end(a), end(b));
                match self.between(bx, pa, pb, limit) {
                    Some(true) => Ordering::Less,
                    Some(false) => Ordering::Greater,
                    None => Ordering::Equal,
                }
            })
        });
        let n = c.len();
        let mut out = Vec::with_capacity(x.len() + cr.len() * n * k.unsigned_abs() as usize);
        let mut q = 0;
        for (i, &l) in x.iter().enumerate() {
            out.push(l);
            while q < cr.len() && cr[q].at == i {
                let j = cr[q].lift;
                let forward = cr[q].forward_left == (k > 0);
                for _ in 0..k.unsigned_abs() {
                    for t in 0..n {
                        if forward {
                            out.push(c[(j + 1 + t) % n]);
                        } else {
                            out.push(-c[(j + n - t) % n]);
                        }
                    }
                }
                q += 1;
            }
        }
        word::canonical(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Ribbon {
        Ribbon::new(vec!["a".into(), "b".into()], vec![1, 2, -1, -2])
    }

    #[test]
    fn torus_faces() {
        let r = torus();
        assert_eq!(r.faces().len(), 1);
        assert_eq!(r.genus(), 1);
    }

    #[test]
    fn torus_basic_intersections() {
        let r = torus();
        assert_eq!(r.intersection(&[1], &[2]), 1);
        assert_eq!(r.intersection(&[1], &[1]), 0);
        assert_eq!(r.intersection(&[1, 2], &[1]), 1);
        assert_eq!(r.intersection(&[1, 2], &[1, -2]), 2);
        assert_eq!(r.self_intersection(&[1, 2]), 0);
        assert_eq!(r.self_intersection(&[1, 1, 2, 2]), 1);
    }

    #[test]
    fn torus_twists() {
        let r = torus();
        let t = r.twist(&[1], 1, &[2]);
        assert_eq!(r.self_intersection(&t), 0);
        assert_eq!(r.intersection(&t, &[2]), 1);
        assert_eq!(r.intersection(&t, &[1]), 1);
        let t3 = r.twist(&[1], 3, &[2]);
        assert_eq!(r.intersection(&t3, &[2]), 3);
        let back = r.twist(&[1], -3, &t3);
        assert_eq!(back, word::canonical(&[2]));
    }
}
