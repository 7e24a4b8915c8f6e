//! Deciders for the structural properties of 1-block codes: right and left
//! eresolving, retracts, right continuing on SFT domains, and the finite
//! type bound for images of codes with a retract.

mod kbound;
mod oracle;
mod paircheck;
mod retract;

pub use kbound::{is_right_continuing_sft, verify_kbound, KBoundReport};
pub use oracle::{oracle_retract, refute_right_continuing_bounded, OracleOutcome};
pub use paircheck::{image_agrees_left_of, lift_exists, lift_exists_asymptotic};
pub use retract::{check_retract, minimal_retract, validate_retract_counterexample, Limits, RetractAnalyzer, RetractVerdict};

use crate::code::SlidingBlockCode;
use crate::error::Result;
use crate::lasso::LassoPoint;
use serde::{Deserialize, Serialize};

/// A domain point together with an image-side point. Depending on context
/// the second component is the exact image of the first or a point agreeing
/// with that image on a left ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodedPair {
    pub x: LassoPoint,
    pub y: LassoPoint,
}

/// Result of an eresolving check, with the failing symbol and image 2-word
/// when the property does not hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EresolvingVerdict {
    pub holds: bool,
    /// (domain symbol a0, image word b0 b1) with no matching a1
    pub failure: Option<(String, [String; 2])>,
}

/// A 1-block code is right eresolving when every allowed one-step extension
/// of an image symbol lifts through every preimage symbol: for `a0` in the
/// domain language and `b0 b1` in the image language with `a0` mapping to
/// `b0`, some `a1` continues `a0` and maps to `b1`.
pub fn is_right_eresolving(code: &SlidingBlockCode) -> Result<EresolvingVerdict> {
    code.require_one_block()?;
    let x = code.domain();
    let y = code.image()?;
    let b1x = x.language(1);
    let b2x: std::collections::BTreeSet<Vec<u32>> = x.language(2).into_iter().collect();
    let b2y = y.language(2);
    for a0 in &b1x {
        let b0 = code.symbol_image(a0[0]);
        for by in &b2y {
            if by[0] != b0 {
                continue;
            }
            let found = b1x.iter().any(|a1| {
                code.symbol_image(a1[0]) == by[1] && b2x.contains(&vec![a0[0], a1[0]])
            });
            if !found {
                return Ok(EresolvingVerdict {
                    holds: false,
                    failure: Some((
                        x.alphabet().name(a0[0]).to_string(),
                        [
                            y.alphabet().name(by[0]).to_string(),
                            y.alphabet().name(by[1]).to_string(),
                        ],
                    )),
                });
            }
        }
    }
    Ok(EresolvingVerdict {
        holds: true,
        failure: None,
    })
}

/// The left-handed variant: the right check applied to the reversed code on
/// the reversed presentation.
pub fn is_left_eresolving(code: &SlidingBlockCode) -> Result<EresolvingVerdict> {
    is_right_eresolving(&code.reversed())
}

/// Convenience: the 1-block code to analyze, recoding through the higher
/// block conjugacy when the window is wider than one.
pub fn as_one_block(code: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    if code.is_one_block() {
        Ok(code.clone())
    } else {
        Ok(code.recode_to_one_block()?.1)
    }
}
