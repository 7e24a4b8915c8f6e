//! Eventually periodic bi-infinite points `u^∞ w v^∞`, the finite
//! representation for points and counterexample witnesses.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// A bi-infinite point with periodic left and right tails.
///
/// Coordinates: `center` occupies `[origin, origin + center.len())`, the
/// left loop repeats on `(-inf, origin)` with its last copy ending at
/// `origin - 1`, and the right loop repeats from `origin + center.len()` on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoPoint {
    #[serde(rename = "leftLoop")]
    pub left: Vec<String>,
    pub center: Vec<String>,
    #[serde(rename = "rightLoop")]
    pub right: Vec<String>,
    pub origin: i64,
}

impl LassoPoint {
    pub fn new(
        left: Vec<String>,
        center: Vec<String>,
        right: Vec<String>,
        origin: i64,
    ) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(LassoPoint {
            left,
            center,
            right,
            origin,
        })
    }

    pub fn from_names(left: &[&str], center: &[&str], right: &[&str], origin: i64) -> Result<Self> {
        Self::new(
            left.iter().map(|s| s.to_string()).collect(),
            center.iter().map(|s| s.to_string()).collect(),
            right.iter().map(|s| s.to_string()).collect(),
            origin,
        )
    }

    /// The constant point `s^∞`.
    pub fn constant(sym: &str) -> Self {
        LassoPoint {
            left: vec![sym.to_string()],
            center: Vec::new(),
            right: vec![sym.to_string()],
            origin: 0,
        }
    }

    /// First coordinate governed by the right loop.
    pub fn right_start(&self) -> i64 {
        self.origin + self.center.len() as i64
    }

    /// Symbol name at coordinate `i`.
    pub fn at(&self, i: i64) -> &str {
        if i < self.origin {
            let off = (self.origin - 1 - i) as usize % self.left.len();
            &self.left[self.left.len() - 1 - off]
        } else if i >= self.right_start() {
            let off = (i - self.right_start()) as usize % self.right.len();
            &self.right[off]
        } else {
            &self.center[(i - self.origin) as usize]
        }
    }

    pub fn window(&self, lo: i64, hi: i64) -> Vec<String> {
        (lo..hi).map(|i| self.at(i).to_string()).collect()
    }

    /// The shifted point `σ^k x`, whose coordinate `i` is `x_{i+k}`.
    pub fn shifted(&self, k: i64) -> LassoPoint {
        let mut p = self.clone();
        p.origin -= k;
        p
    }

    /// Coordinatewise equality of the two bi-infinite points. Exact: both
    /// tails are periodic, so agreement on a window one common period wide
    /// on each side settles the rest.
    pub fn same_point(&self, other: &LassoPoint) -> bool {
        let ll = lcm(self.left.len(), other.left.len()) as i64;
        let rl = lcm(self.right.len(), other.right.len()) as i64;
        let lo = self.origin.min(other.origin) - ll;
        let hi = self.right_start().max(other.right_start()) + rl;
        (lo..hi).all(|i| self.at(i) == other.at(i))
    }

    /// True iff the point is periodic with period `p`. Checking a window one
    /// loop plus one period wide on each side of the center settles the
    /// periodic tails.
    fn has_period(&self, p: usize) -> bool {
        let q = p as i64;
        let lo = self.origin - (self.left.len() + p) as i64;
        let hi = self.right_start() + (self.right.len() + p) as i64;
        (lo..hi).all(|i| self.at(i) == self.at(i + q))
    }

    /// Canonical form: primitive loops, the shortest possible center, and a
    /// normalized representation for fully periodic points. Two lassos
    /// describe the same point iff their canonical forms are identical.
    pub fn canonical(&self) -> LassoPoint {
        let pl = primitive_loop_period(&self.left);
        let pr = primitive_loop_period(&self.right);
        let q = lcm(pl, pr);
        if self.has_period(q) {
            // fully periodic: find the primitive global period and anchor at 0
            let mut p = q;
            for d in 1..=q {
                if q.is_multiple_of(d) && self.has_period(d) {
                    p = d;
                    break;
                }
            }
            let left = self.window(-(p as i64), 0);
            let right = self.window(0, p as i64);
            return LassoPoint {
                left,
                center: Vec::new(),
                right,
                origin: 0,
            };
        }
        // largest m such that x on (-inf, m) keeps the left period
        let mut m = self.origin;
        while self.at(m) == self.at(m - pl as i64) {
            m += 1;
        }
        // smallest m such that x on [m, inf) keeps the right period
        let mut r = self.right_start();
        while self.at(r - 1) == self.at(r - 1 + pr as i64) {
            r -= 1;
        }
        let (origin, rps) = (m, r.max(m));
        LassoPoint {
            left: self.window(origin - pl as i64, origin),
            center: self.window(origin, rps),
            right: self.window(rps, rps + pr as i64),
            origin,
        }
    }

    /// Translate the symbols to ids of `alphabet`; None if any symbol is
    /// foreign.
    fn ids(&self, alphabet: &Alphabet) -> Option<(Vec<u32>, Vec<u32>, Vec<u32>)> {
        let conv = |w: &[String]| -> Option<Vec<u32>> {
            w.iter().map(|s| alphabet.id(s).ok()).collect()
        };
        Some((conv(&self.left)?, conv(&self.center)?, conv(&self.right)?))
    }
}

/// Minimal period of the infinite repetition of `looped`; always a divisor
/// of the loop length.
fn primitive_loop_period(looped: &[String]) -> usize {
    let n = looped.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (0..n).all(|i| looped[i] == looped[i % d]) {
            return d;
        }
    }
    n
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Some point of the presented shift: a backward cycle feeding the first
/// state and a forward cycle leaving it, glued at the origin.
pub fn some_member(g: &Presentation) -> LassoPoint {
    let name = |sym: u32| g.alphabet().name(sym).to_string();
    // backward greedy walk from state 0 until a state repeats
    let mut nodes: Vec<u32> = vec![0];
    let mut into: Vec<(u32, u32)> = Vec::new(); // (symbol, source) entering nodes[i]
    let (left_loop, left_stem) = loop {
        let cur = *nodes.last().unwrap();
        let e = g
            .edges()
            .iter()
            .find(|e| e.dst == cur)
            .expect("essential state has a predecessor");
        if let Some(pos) = nodes.iter().position(|&v| v == e.src) {
            let mut cycle: Vec<u32> = into[pos..].iter().map(|&(s, _)| s).collect();
            cycle.push(e.sym);
            cycle.reverse();
            let stem: Vec<u32> = into[..pos].iter().rev().map(|&(s, _)| s).collect();
            break (cycle, stem);
        }
        nodes.push(e.src);
        into.push((e.sym, e.src));
    };
    // forward greedy walk from state 0
    let mut states = vec![0u32];
    let mut syms: Vec<u32> = Vec::new();
    let (right_stem, right_loop) = loop {
        let cur = *states.last().unwrap();
        let (sym, next) = g
            .alphabet()
            .ids()
            .find_map(|a| g.targets(cur, a).first().map(|&t| (a, t)))
            .expect("essential state has a successor");
        syms.push(sym);
        if let Some(pos) = states.iter().position(|&s| s == next) {
            break (syms[..pos].to_vec(), syms[pos..].to_vec());
        }
        states.push(next);
    };
    let mut center: Vec<u32> = left_stem;
    let origin = -(center.len() as i64);
    center.extend(right_stem);
    LassoPoint::new(
        left_loop.into_iter().map(name).collect(),
        center.into_iter().map(name).collect(),
        right_loop.into_iter().map(name).collect(),
        origin,
    )
    .expect("greedy cycles are nonempty")
}

/// Decide whether the point lies in the presented shift: a left-infinite
/// path reading the left loop must reach the center, read it, and continue
/// into a right-infinite path reading the right loop.
pub fn lasso_membership(p: &LassoPoint, x: &Presentation) -> bool {
    let Some((left, center, right)) = p.ids(x.alphabet()) else {
        return false;
    };
    let tails = x.loop_tail_set(&left);
    if tails.is_empty() {
        return false;
    }
    let after_center = x.step_word(&tails, &center);
    if after_center.is_empty() {
        return false;
    }
    let heads = x.loop_head_set(&right);
    after_center.intersects(&heads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn bar_run_point(n: usize) -> LassoPoint {
        // 1bar^∞ 2^n . 2 2^∞ with the lone-center 2s ending at -1
        let center = vec!["2".to_string(); n];
        LassoPoint::new(
            vec!["1bar".into()],
            center,
            vec!["2".into()],
            -(n as i64),
        )
        .unwrap()
    }

    #[test]
    fn coordinates_follow_the_layout() {
        let p = LassoPoint::from_names(&["a", "b"], &["c"], &["d", "e"], 5).unwrap();
        assert_eq!(p.at(5), "c");
        assert_eq!(p.at(4), "b");
        assert_eq!(p.at(3), "a");
        assert_eq!(p.at(2), "b");
        assert_eq!(p.at(6), "d");
        assert_eq!(p.at(7), "e");
        assert_eq!(p.at(8), "d");
    }

    #[test]
    fn shift_moves_coordinates() {
        let p = LassoPoint::from_names(&["a", "b"], &["c"], &["d"], 0).unwrap();
        let s = p.shifted(3);
        for i in -6..6 {
            assert_eq!(s.at(i), p.at(i + 3));
        }
    }

    #[test]
    fn membership_in_the_marked_run_shift() {
        let x = corpus::no_retract_shift();
        for n in 0..=8 {
            assert!(lasso_membership(&bar_run_point(n), &x), "n = {n}");
        }
        // 1bar^∞ 2 3^∞ completes a forbidden word
        let bad = LassoPoint::from_names(&["1bar"], &["2"], &["3"], 0).unwrap();
        assert!(!lasso_membership(&bad, &x));
    }

    #[test]
    fn membership_in_golden_mean() {
        let g = corpus::golden_mean();
        assert!(lasso_membership(&LassoPoint::constant("0"), &g));
        assert!(!lasso_membership(&LassoPoint::constant("1"), &g));
        let p = LassoPoint::from_names(&["0"], &["1"], &["0", "1"], 0).unwrap();
        // ...000 1 010101... contains no 11
        assert!(lasso_membership(&p, &g));
    }

    #[test]
    fn odd_zero_run_is_rejected_by_the_even_shift() {
        let even = corpus::even_shift();
        let odd = LassoPoint::from_names(&["1"], &["0", "0", "0"], &["1"], 0).unwrap();
        assert!(!lasso_membership(&odd, &even));
        let ok = LassoPoint::from_names(&["1"], &["0", "0"], &["1"], 0).unwrap();
        assert!(lasso_membership(&ok, &even));
    }

    #[test]
    fn member_windows_lie_in_the_language() {
        let x = corpus::no_retract_shift();
        let p = bar_run_point(3);
        for lo in -8i64..4 {
            let w = p.window(lo, lo + 4);
            let w: Vec<&str> = w.iter().map(|s| s.as_str()).collect();
            assert!(x.contains_named_word(&w).unwrap());
        }
    }

    #[test]
    fn canonical_reduces_loops_and_center() {
        let p = LassoPoint::from_names(&["a", "a"], &["a", "b"], &["c", "c"], 0).unwrap();
        let c = p.canonical();
        assert_eq!(c.left, vec!["a"]);
        assert_eq!(c.right, vec!["c"]);
        assert_eq!(c.center, vec!["b"]);
        assert_eq!(c.origin, 1);
        assert!(p.same_point(&c));
    }

    #[test]
    fn canonical_periodic_point() {
        let p = LassoPoint::from_names(&["a", "b"], &["a", "b"], &["a", "b"], 4).unwrap();
        let c = p.canonical();
        assert!(c.center.is_empty());
        assert_eq!(c.origin, 0);
        assert_eq!(c.left.len(), 2);
        assert!(p.same_point(&c));
    }
}
