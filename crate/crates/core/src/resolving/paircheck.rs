//! Exact lift decisions for concrete point pairs. These run directly on the
//! domain graph and a given pair of lasso points, independent of the
//! configuration machinery in the retract analyzer, so they double as
//! validators for its witnesses.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::code::SlidingBlockCode;
use crate::error::{Error, Result};
use crate::lasso::{lcm, LassoPoint};

/// Does `apply(code, x)` agree with `y` on every coordinate `<= hi`? Exact:
/// below both origins the two points are periodic, so one common period of
/// agreement settles the ray.
pub fn image_agrees_left_of(
    code: &SlidingBlockCode,
    x: &LassoPoint,
    y: &LassoPoint,
    hi: i64,
) -> Result<bool> {
    let fx = code.apply(x)?;
    let period = lcm(fx.left.len(), y.left.len()) as i64;
    let lo = fx.origin.min(y.origin) - period;
    Ok((lo..=hi).all(|i| fx.at(i) == y.at(i)))
}

/// Exact decision: is there a point of the domain equal to `x` on
/// `(-inf, -n]` whose image is exactly `y`?
///
/// Callers ensure `x` lies in the domain and the image of `x` agrees with
/// `y` on `(-inf, 0]` (so in particular on the copied ray). The decision
/// follows partial lifts through the graph: the set of reachable states is
/// advanced one image constraint at a time, and since `y` is eventually
/// periodic the evolution of that set repeats, at which point survival is
/// settled.
pub fn lift_exists(
    code: &SlidingBlockCode,
    x: &LassoPoint,
    y: &LassoPoint,
    n: usize,
) -> Result<bool> {
    code.require_one_block()?;
    let g = code.domain();
    let boundary = -(n as i64);
    // exact set of states reachable by left-infinite paths reading the tail
    let m = x.origin.min(boundary);
    let tail_loop: Vec<u32> = word_ids(g, &x.window(m - x.left.len() as i64, m))
        .ok_or(Error::NotInDomain)?;
    let tail_word = word_ids(g, &x.window(m, boundary + 1)).ok_or(Error::NotInDomain)?;
    let mut set = g.step_word(&g.loop_tail_set(&tail_loop), &tail_word);
    if set.is_empty() {
        return Err(Error::Precondition(
            "x is not in the domain of the code".into(),
        ));
    }
    // advance under the image constraints of y
    let codomain = code.codomain_alphabet();
    let mut seen: BTreeSet<(usize, BitSet)> = BTreeSet::new();
    let mut i = boundary + 1;
    loop {
        if i >= y.right_start() {
            let phase = ((i - y.right_start()) % y.right.len() as i64) as usize;
            if !seen.insert((phase, set.clone())) {
                // the constraint stream and the state set both repeat, so
                // partial lifts of every length exist
                return Ok(true);
            }
        }
        let Ok(b) = codomain.id(y.at(i)) else {
            return Ok(false);
        };
        set = step_image(code, &set, b);
        if set.is_empty() {
            return Ok(false);
        }
        i += 1;
    }
}

/// Is there a lift left-asymptotic to `x` at any distance? Monotone in the
/// agreement distance and eventually periodic once the boundary is past
/// both left loops, so one evaluation deep in the periodic zone decides it.
pub fn lift_exists_asymptotic(
    code: &SlidingBlockCode,
    x: &LassoPoint,
    y: &LassoPoint,
) -> Result<bool> {
    let period = lcm(x.left.len(), y.left.len()) as i64;
    let depth = -(x.origin.min(y.origin) - 2 * period - 2);
    lift_exists(code, x, y, depth.max(0) as usize)
}

/// One constrained step of partial lifts: all targets of edges whose label
/// maps to the image symbol `b`.
pub fn step_image(code: &SlidingBlockCode, set: &BitSet, b: u32) -> BitSet {
    let g = code.domain();
    let mut next = BitSet::empty(g.n_states());
    for e in g.edges() {
        if set.contains(e.src as usize) && code.symbol_image(e.sym) == b {
            next.insert(e.dst as usize);
        }
    }
    next
}

fn word_ids(g: &crate::presentation::Presentation, names: &[String]) -> Option<Vec<u32>> {
    names
        .iter()
        .map(|s| g.alphabet().id(s).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn identity_lifts_trivially() {
        let id = corpus::identity_code(&corpus::golden_mean());
        let x = LassoPoint::constant("0");
        let y = x.clone();
        assert!(image_agrees_left_of(&id, &x, &y, 0).unwrap());
        assert!(lift_exists(&id, &x, &y, 0).unwrap());
        assert!(lift_exists_asymptotic(&id, &x, &y).unwrap());
    }

    #[test]
    fn marked_run_pair_has_no_lift() {
        let code = corpus::no_retract_code();
        for n in 0..=8usize {
            // x = 1bar^inf 2^n . 2 2^inf, y = 1^inf 2^n . 2 3^inf
            let x = LassoPoint::new(
                vec!["1bar".into()],
                vec!["2".into(); n],
                vec!["2".into()],
                -(n as i64),
            )
            .unwrap();
            let y = LassoPoint::new(
                vec!["1".into()],
                {
                    let mut c = vec!["2".into(); n];
                    c.push("2".into());
                    c
                },
                vec!["3".into()],
                -(n as i64),
            )
            .unwrap();
            assert!(image_agrees_left_of(&code, &x, &y, 0).unwrap(), "n = {n}");
            assert!(!lift_exists(&code, &x, &y, n).unwrap(), "n = {n}");
            // yet a left-asymptotic lift exists: the code is right continuing
            assert!(lift_exists_asymptotic(&code, &x, &y).unwrap(), "n = {n}");
        }
    }
}
