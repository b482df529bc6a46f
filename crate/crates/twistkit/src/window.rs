//! Elementary windows of the pants decomposition: the one-holed torus and the
//! four-holed sphere in slope coordinates, the annulus around a blue curve in
//! (m, t) coordinates, and brute-force oracles pinning their conventions.

use crate::ribbon::Ribbon;
use crate::word::{self, Letter};

/// Slope `(p, q)` of a curve in a window, up to sign.
pub type Slope = (i64, i64);

pub fn normalize(s: Slope) -> Slope {
    if s.0 < 0 || (s.0 == 0 && s.1 < 0) {
        (-s.0, -s.1)
    } else {
        s
    }
}

pub fn det(a: Slope, b: Slope) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Which elementary window a slope pair lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    OneHoledTorus,
    FourHoledSphere,
}

impl Window {
    fn weight(self) -> i64 {
        match self {
            Window::OneHoledTorus => 1,
            Window::FourHoledSphere => 2,
        }
    }

    pub fn intersection(self, a: Slope, b: Slope) -> u64 {
        (self.weight() * det(a, b)).unsigned_abs()
    }

    /// Left twist `t_a^k` on slopes: a transvection along `a`.
    pub fn twist(self, a: Slope, k: i64, v: Slope) -> Slope {
        let s = self.weight() * k * det(a, v);
        normalize((v.0 + s * a.0, v.1 + s * a.1))
    }
}

/// The torus oracle surface: one vertex, σ = (a, b, a⁻¹, b⁻¹).
pub fn torus() -> Ribbon {
    Ribbon::new(vec!["a".into(), "b".into()], vec![1, 2, -1, -2])
}

/// Word of a primitive slope on the oracle torus.
pub fn slope_word(s: Slope) -> Vec<Letter> {
    let (p, q) = (s.0, -s.1);
    let (n, m) = (p.unsigned_abs(), q.unsigned_abs());
    let (la, lb) = (if p < 0 { -1 } else { 1 }, if q < 0 { -2 } else { 2 });
    let total = n + m;
    let mut w = Vec::with_capacity(total as usize);
    for i in 1..=total {
        if (i * m) / total > ((i - 1) * m) / total {
            w.push(lb);
        } else {
            w.push(la);
        }
    }
    word::canonical(&w)
}

/// Slope read off a primitive torus word by abelianising.
pub fn word_slope(w: &[Letter]) -> Slope {
    let a: i64 = w.iter().map(|&l| i64::from(l == 1) - i64::from(l == -1)).sum();
    let b: i64 = w.iter().map(|&l| i64::from(l == 2) - i64::from(l == -2)).sum();
    normalize((a, -b))
}

/// Primitive slopes with entries bounded by `max`, one per unoriented class.
pub fn primitive_slopes(max: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for p in 0..=max {
        for q in -max..=max {
            if gcd(p, q) == 1 && normalize((p, q)) == (p, q) {
                out.push((p, q));
            }
        }
    }
    out
}

/// Mismatch between a window formula and the ribbon-torus oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMismatch {
    pub window: Window,
    pub a: Slope,
    pub b: Slope,
    pub what: &'static str,
}

/// Compare intersection numbers on every pair and twists about the short
/// slopes on every curve. The four-holed sphere is checked through its double
/// branched cover: intersections halve the doubled lift, twists lift to squares.
pub fn check_against_torus(max: i64) -> (usize, Vec<OracleMismatch>) {
    let t = torus();
    let slopes = primitive_slopes(max);
    let words: Vec<Vec<Letter>> = slopes.iter().map(|&s| slope_word(s)).collect();
    let mut cases = 0;
    let mut bad = Vec::new();
    for (i, &a) in slopes.iter().enumerate() {
        for (j, &b) in slopes.iter().enumerate() {
            let oracle = t.intersection(&words[i], &words[j]) as u64;
            for (win, expect) in [(Window::OneHoledTorus, oracle), (Window::FourHoledSphere, 2 * oracle)] {
                cases += 1;
                if win.intersection(a, b) != expect {
                    bad.push(OracleMismatch { window: win, a, b, what: "intersection" });
                }
            }
        }
    }
    let short = [(1, 0), (0, 1), (1, 1), (1, -1)];
    for &a in &short {
        let aw = slope_word(a);
        for (j, &v) in slopes.iter().enumerate() {
            for (win, k) in [(Window::OneHoledTorus, 1), (Window::OneHoledTorus, -1), (Window::FourHoledSphere, 1)] {
                cases += 1;
                let lifted = k * win.weight();
                let oracle = t.twist(&aw, lifted as i32, &words[j]);
                let formula = win.twist(a, k, v);
                if oracle != slope_word(formula) || word_slope(&oracle) != formula {
                    bad.push(OracleMismatch { window: win, a, b: v, what: "twist" });
                }
            }
        }
    }
    (cases, bad)
}

/// Twist rule for a curve crossing the annulus around a blue curve `m` times.
pub fn annulus_twist(m: u32, t: i64, k: i64) -> (u32, i64) {
    (m, t + k * i64::from(m))
}

/// Strand-routing oracle: route `m` strands across the annulus in the universal
/// cover, entry `i` to exit `i + t`, then shear the exit circle one slot at a
/// time through `k` full turns and read the new twisting.
pub fn annulus_oracle(m: u32, t: i64, k: i64) -> (u32, i64) {
    if m == 0 {
        return (0, t);
    }
    let mut strands: Vec<(i64, i64)> = (0..i64::from(m)).map(|i| (i, i + t)).collect();
    for _ in 0..(k.abs() * i64::from(m)) {
        for s in strands.iter_mut() {
            s.1 += k.signum();
        }
    }
    let offsets: Vec<i64> = strands.iter().map(|(a, b)| b - a).collect();
    assert!(offsets.windows(2).all(|w| w[0] == w[1]), "strands stay parallel");
    assert!(strands.windows(2).all(|w| w[0].1 < w[1].1), "strands stay embedded");
    (strands.len() as u32, offsets[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_words() {
        let t = torus();
        assert_eq!(slope_word((1, 0)), word::canonical(&[1]));
        assert_eq!(t.intersection(&slope_word((1, 0)), &slope_word((2, 1))), 1);
        assert_eq!(Window::OneHoledTorus.intersection((1, 0), (2, 1)), 1);
        for s in primitive_slopes(5) {
            assert_eq!(word_slope(&slope_word(s)), s);
        }
    }

    #[test]
    fn basic_twist() {
        assert_eq!(Window::OneHoledTorus.twist((1, 0), 1, (0, 1)), (1, 1));
        let b = (0, 1);
        for k in -4..=4 {
            let moved = Window::OneHoledTorus.twist((1, 0), k, b);
            assert_eq!(Window::OneHoledTorus.intersection(moved, b), k.unsigned_abs());
        }
    }

    #[test]
    fn oracles_agree_small() {
        let (cases, bad) = check_against_torus(4);
        assert!(cases > 100);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn annulus() {
        assert_eq!(annulus_twist(2, 0, 3), (2, 6));
        for m in 0..5 {
            for t in -5..5 {
                for k in -3..=3 {
                    assert_eq!(annulus_oracle(m, t, k), annulus_twist(m, t, k));
                }
            }
        }
    }
}
