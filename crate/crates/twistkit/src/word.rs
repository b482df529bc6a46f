//! Free-group words over a one-vertex ribbon graph.
//!
//! A letter is a nonzero `i32`: `g` traverses generator `g` (1-based) forwards,
//! `-g` traverses it backwards.

pub type Letter = i32;

pub fn inv(l: Letter) -> Letter {
    -l
}

pub fn inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&l| -l).collect()
}

/// Free reduction (cancel adjacent `x x^-1`).
pub fn reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[Letter]) -> Vec<Letter> {
    let r = reduce(w);
    let mut lo = 0;
    let mut hi = r.len();
    while hi - lo >= 2 && r[lo] == -r[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    r[lo..hi].to_vec()
}

fn min_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    let at = |k: usize, t: usize| w[(k + t) % n];
    let mut best = 0;
    for k in 1..n {
        for t in 0..n {
            match at(k, t).cmp(&at(best, t)) {
                std::cmp::Ordering::Less => {
                    best = k;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    (0..n).map(|t| at(best, t)).collect()
}

/// Canonical representative of an unoriented conjugacy class: cyclically reduce,
/// then take the least rotation of the word or its inverse.
pub fn canonical(w: &[Letter]) -> Vec<Letter> {
    let c = cyclic_reduce(w);
    let a = min_rotation(&c);
    let b = min_rotation(&inverse(&c));
    if a <= b {
        a
    } else {
        b
    }
}

/// Largest `k` with `w = r^k` for a cyclically reduced `w`.
pub fn power_exponent(w: &[Letter]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]))
        .map(|p| n / p)
        .unwrap_or(1)
}

/// Generator parity vector (mod 2 abelianisation) of a word.
pub fn parity(w: &[Letter], rank: usize) -> Vec<bool> {
    let mut v = vec![false; rank];
    for &l in w {
        let g = l.unsigned_abs() as usize - 1;
        v[g] = !v[g];
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_canonical(w: &[Letter]) -> Vec<Letter> {
        let c = cyclic_reduce(w);
        let mut best: Option<Vec<Letter>> = None;
        for src in [c.clone(), inverse(&c)] {
            for r in 0..src.len().max(1) {
                let rot: Vec<Letter> = src.iter().cycle().skip(r).take(src.len()).copied().collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        best.unwrap_or_default()
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(cyclic_reduce(&[1, -1]), Vec::<Letter>::new());
    }

    #[test]
    fn canonical_matches_naive() {
        let words: Vec<Vec<Letter>> = vec![
            vec![1, 2, -1, -2],
            vec![2, 2, 1, 2, 1],
            vec![3, -1, 3, -1, 2],
            vec![1, 1, 1],
            vec![-2, 1, -2, 1, -2, 3, 3],
        ];
        for w in words {
            assert_eq!(canonical(&w), naive_canonical(&w), "{w:?}");
        }
    }

    #[test]
    fn powers() {
        assert_eq!(power_exponent(&[1, 2, 1, 2]), 2);
        assert_eq!(power_exponent(&[1, 2, 2]), 1);
    }
}
