//! Brute-force cross-checks over bounded lasso pairs. Sound for refutation:
//! a reported pair really is a counterexample, while absence of one only
//! rules out witnesses within the bound.

use crate::code::SlidingBlockCode;
use crate::error::Result;
use crate::lasso::{lasso_membership, LassoPoint};
use crate::presentation::Presentation;

use super::paircheck::{lift_exists_asymptotic, step_image};
use super::CodedPair;

/// Outcome of a bounded oracle run.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    /// A validated counterexample pair, if one was found within the bound.
    pub refuted: Option<CodedPair>,
    /// Number of candidate pairs whose lift search ran to completion.
    pub pairs_checked: usize,
}

impl OracleOutcome {
    pub fn holds_within_bound(&self) -> bool {
        self.refuted.is_none()
    }
}

/// All words over `k` symbols with lengths in `lo..=hi`, in length-then-lex
/// order.
fn words(k: usize, lo: usize, hi: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for len in lo..=hi {
        if len == 0 {
            out.push(Vec::new());
            continue;
        }
        let total = (k as u64).pow(len as u32);
        let mut w = vec![0u32; len];
        for _ in 0..total {
            out.push(w.clone());
            for i in (0..len).rev() {
                if w[i] + 1 < k as u32 {
                    w[i] += 1;
                    break;
                }
                w[i] = 0;
            }
        }
    }
    out
}

/// Words of length `lo..=hi` that are primitive, i.e. not a power of a
/// shorter word: enough for loop enumeration since `u^k` repeats the same
/// tail as `u`.
fn primitive_words(k: usize, lo: usize, hi: usize) -> Vec<Vec<u32>> {
    words(k, lo.max(1), hi)
        .into_iter()
        .filter(|w| {
            !(1..w.len()).any(|d| w.len() % d == 0 && (0..w.len()).all(|i| w[i] == w[i % d]))
        })
        .collect()
}

fn names(p: &Presentation, w: &[u32]) -> Vec<String> {
    w.iter()
        .map(|&s| p.alphabet().name(s).to_string())
        .collect()
}

/// Complete a valid left tail `u^inf w0` (ending at coordinate 0) into a
/// full point by a greedy forward walk from the least reachable state.
fn complete_tail(p: &Presentation, u: &[u32], w0: &[u32]) -> Option<LassoPoint> {
    let tail = p.step_word(&p.loop_tail_set(u), w0);
    let start = tail.first()?;
    let (stem, looped) = super::retract::greedy_cycle(p, start);
    let mut center = w0.to_vec();
    center.extend(stem);
    LassoPoint::new(
        names(p, u),
        names(p, &center),
        names(p, &looped),
        -(w0.len() as i64) + 1,
    )
    .ok()
}

/// Exhaustive retract check over bounded witnesses: every pair of a domain
/// tail `u^inf w0` (loop and word up to length `bound`) and an image
/// continuation `wy vy^inf` is tried, with the image forced to agree with
/// the tail's image up to coordinate 0. Each surviving pair gets the exact
/// lift check, so a returned counterexample is conclusive.
pub fn oracle_retract(
    code: &SlidingBlockCode,
    n: usize,
    bound: usize,
) -> Result<OracleOutcome> {
    code.require_one_block()?;
    let domain = code.domain();
    let image = code.image()?;
    let mut pairs_checked = 0usize;
    // forward-infinite reads of each candidate right loop, shared by tails
    let vy_candidates: Vec<(Vec<u32>, crate::bitset::BitSet)> =
        primitive_words(code.codomain_alphabet().len(), 1, bound)
            .into_iter()
            .map(|vy| {
                let heads = image.loop_head_set(&vy);
                (vy, heads)
            })
            .collect();
    let wy_candidates = words(code.codomain_alphabet().len(), 0, bound);
    for u in primitive_words(domain.alphabet().len(), 1, bound) {
        let loop_set = domain.loop_tail_set(&u);
        if loop_set.is_empty() {
            continue;
        }
        let yu: Vec<u32> = u.iter().map(|&s| code.symbol_image(s)).collect();
        let y_loop_set = image.loop_tail_set(&yu);
        for w0 in words(domain.alphabet().len(), 0, bound) {
            if domain.step_word(&loop_set, &w0).is_empty() {
                continue;
            }
            let yw0: Vec<u32> = w0.iter().map(|&s| code.symbol_image(s)).collect();
            // image-side reachability of the forced left context through 0
            let y_context = image.step_word(&y_loop_set, &yw0);
            debug_assert!(!y_context.is_empty(), "image of a valid tail is valid");
            // partial lifts: exact states of the tail at -n, advanced to 0
            // under the image constraints the tail forces on (-n, 0]
            let mut lifts;
            let mut constrained: Vec<u32> = Vec::new();
            if n >= w0.len() {
                // the boundary reaches into the loop: realign the loop
                let shift = (n - w0.len()) % u.len();
                let mut rotated = u[u.len() - shift..].to_vec();
                rotated.extend_from_slice(&u[..u.len() - shift]);
                lifts = domain.loop_tail_set(&rotated);
                for k in 0..n - w0.len() {
                    constrained.push(rotated[k % rotated.len()]);
                }
                constrained.extend_from_slice(&w0);
            } else {
                lifts = domain.step_word(&loop_set, &w0[..w0.len() - n]);
                constrained.extend_from_slice(&w0[w0.len() - n..]);
            }
            for &a in &constrained {
                lifts = step_image(code, &lifts, code.symbol_image(a));
            }
            debug_assert!(!lifts.is_empty(), "the tail itself is a partial lift");
            for (vy, heads) in &vy_candidates {
                if heads.is_empty() {
                    continue;
                }
                'wy: for wy in &wy_candidates {
                    // y = yu^inf yw0 . wy vy^inf must be a point of the image
                    let context = image.step_word(&y_context, wy);
                    if !context.intersects(heads) {
                        continue;
                    }
                    pairs_checked += 1;
                    // advance the lift set through wy, then around vy
                    let mut s = lifts.clone();
                    for &b in wy {
                        s = step_image(code, &s, b);
                        if s.is_empty() {
                            return Ok(refutation(
                                code,
                                domain,
                                &image,
                                &u,
                                &w0,
                                wy,
                                vy,
                                pairs_checked,
                            ));
                        }
                    }
                    let mut seen = std::collections::BTreeSet::new();
                    loop {
                        if !seen.insert(s.clone()) {
                            continue 'wy; // the loop evolution repeats: lift survives
                        }
                        for &b in vy.iter() {
                            s = step_image(code, &s, b);
                            if s.is_empty() {
                                return Ok(refutation(
                                    code,
                                    domain,
                                    &image,
                                    &u,
                                    &w0,
                                    wy,
                                    vy,
                                    pairs_checked,
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(OracleOutcome {
        refuted: None,
        pairs_checked,
    })
}

/// Materialize the refuting pair once the subset search has found it.
#[allow(clippy::too_many_arguments)]
fn refutation(
    code: &SlidingBlockCode,
    domain: &Presentation,
    image: &Presentation,
    u: &[u32],
    w0: &[u32],
    wy: &[u32],
    vy: &[u32],
    pairs_checked: usize,
) -> OracleOutcome {
    let x = complete_tail(domain, u, w0).expect("tail was verified valid");
    let yu: Vec<u32> = u.iter().map(|&s| code.symbol_image(s)).collect();
    let yw0: Vec<u32> = w0.iter().map(|&s| code.symbol_image(s)).collect();
    let mut center = yw0.clone();
    center.extend(wy);
    let y = LassoPoint::new(
        names(image, &yu),
        names(image, &center),
        names(image, vy),
        -(yw0.len() as i64) + 1,
    )
    .expect("loops are nonempty");
    OracleOutcome {
        refuted: Some(CodedPair { x, y }),
        pairs_checked,
    }
}

/// Bounded refutation of right continuing: search pairs where the image of
/// `x` is left asymptotic to `y` but no lift left asymptotic to `x` exists
/// at any distance. Absence of a pair within the bound proves nothing; a
/// returned pair is conclusive.
pub fn refute_right_continuing_bounded(
    code: &SlidingBlockCode,
    bound: usize,
) -> Result<Option<CodedPair>> {
    code.require_one_block()?;
    let domain = code.domain();
    let image = code.image()?;
    for u in primitive_words(domain.alphabet().len(), 1, bound) {
        let loop_set = domain.loop_tail_set(&u);
        if loop_set.is_empty() {
            continue;
        }
        for w0 in words(domain.alphabet().len(), 0, bound) {
            if domain.step_word(&loop_set, &w0).is_empty() {
                continue;
            }
            let Some(x) = complete_tail(domain, &u, &w0) else {
                continue;
            };
            let yu: Vec<u32> = u.iter().map(|&s| code.symbol_image(s)).collect();
            let yw0: Vec<u32> = w0.iter().map(|&s| code.symbol_image(s)).collect();
            for vy in primitive_words(code.codomain_alphabet().len(), 1, bound) {
                for wy in words(code.codomain_alphabet().len(), 0, bound) {
                    let mut center = yw0.clone();
                    center.extend(&wy);
                    let Ok(y) = LassoPoint::new(
                        names(&image, &yu),
                        names(&image, &center),
                        names(&image, &vy),
                        -(yw0.len() as i64) + 1,
                    ) else {
                        continue;
                    };
                    if !lasso_membership(&y, &image) {
                        continue;
                    }
                    if !lift_exists_asymptotic(code, &x, &y)? {
                        return Ok(Some(CodedPair { x, y }));
                    }
                }
            }
        }
    }
    Ok(None)
}
