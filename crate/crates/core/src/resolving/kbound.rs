//! Confirmation that the image of a code with a retract is again of finite
//! type, with the explicit step bound.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::{higher_block, SlidingBlockCode};
use crate::error::{Error, Result};
use crate::sft::{is_sft, step_of};

use super::retract::{Limits, RetractAnalyzer};
use super::as_one_block;

/// The data confirming the finite-type bound for one code: with retract `r`
/// on a 1-step domain and `d = |B_1(X)|^2 + 1`, the image is a `k`-step SFT
/// for `k = d + r + 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KBoundReport {
    #[serde(rename = "R")]
    pub retract: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "actualStep")]
    pub actual_step: Option<usize>,
    #[serde(rename = "sftConfirmed")]
    pub sft_confirmed: bool,
}

impl KBoundReport {
    pub fn bound_respected(&self) -> bool {
        self.sft_confirmed && self.actual_step.is_some_and(|s| s <= self.k)
    }

    /// Empirical slack between the proven bound and the measured step.
    pub fn gap(&self) -> Option<usize> {
        self.actual_step.map(|s| self.k - s)
    }
}

/// Recode a 1-block code whose domain is an s-step SFT onto the s-block
/// refinement, where the domain becomes 1-step and the rule reads the first
/// coordinate of each block.
fn onto_one_step_domain(code: &SlidingBlockCode, s: usize) -> Result<SlidingBlockCode> {
    let hb = higher_block(code.domain(), s)?;
    let rule: BTreeMap<Vec<u32>, u32> = hb
        .blocks
        .iter()
        .enumerate()
        .map(|(i, block)| (vec![i as u32], code.symbol_image(block[0])))
        .collect();
    SlidingBlockCode::new(
        hb.presentation,
        0,
        0,
        code.codomain_alphabet().clone(),
        rule,
    )
}

/// Normalize a code on an SFT domain to a 1-block code on a 1-step domain,
/// preserving the image.
pub(crate) fn normalize_sft_code(code: &SlidingBlockCode) -> Result<SlidingBlockCode> {
    let one = as_one_block(code)?;
    match step_of(one.domain())? {
        Some(s) if s <= 1 => Ok(one),
        Some(s) => onto_one_step_domain(&one, s),
        None => Err(Error::NotSft(
            "the domain is not of finite type".into(),
        )),
    }
}

/// Verify the finite-type bound for a code with a retract on an SFT domain:
/// computes the minimal retract of the normalized code, the bound
/// `k = |B_1|^2 + 1 + r + 1`, and checks the image against it.
pub fn verify_kbound(code: &SlidingBlockCode) -> Result<KBoundReport> {
    if !is_sft(code.domain())? {
        return Err(Error::NotSft("the domain of the code".into()));
    }
    let one = normalize_sft_code(code)?;
    let mut analyzer = RetractAnalyzer::new(one.clone(), Limits::default())?;
    let retract = analyzer.minimal()?.ok_or(Error::NoRetract)?;
    let d = one.domain().language(1).len().pow(2) + 1;
    let k = d + retract + 1;
    let image = one.image()?;
    let sft_confirmed = is_sft(&image)?;
    let actual_step = step_of(&image)?;
    Ok(KBoundReport {
        retract,
        d,
        k,
        actual_step,
        sft_confirmed,
    })
}

/// Decide right continuing for a code on an SFT domain, where it is
/// equivalent to having a retract. Refuses non-SFT domains: the equivalence
/// genuinely fails for strictly sofic ones.
pub fn is_right_continuing_sft(code: &SlidingBlockCode) -> Result<bool> {
    if !is_sft(code.domain())? {
        return Err(Error::NotSft(
            "the right continuing decision requires an SFT domain".into(),
        ));
    }
    let one = normalize_sft_code(code)?;
    Ok(RetractAnalyzer::new(one, Limits::default())?
        .minimal()?
        .is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn identity_on_the_full_shift() {
        let id = corpus::identity_code(&corpus::full_shift(&["0", "1"]));
        let r = verify_kbound(&id).unwrap();
        assert_eq!(r.retract, 0);
        assert_eq!(r.d, 5);
        assert_eq!(r.k, 6);
        assert_eq!(r.actual_step, Some(0));
        assert!(r.bound_respected());
        assert_eq!(r.gap(), Some(6));
    }

    #[test]
    fn min_code_image_respects_the_bound() {
        let r = verify_kbound(&corpus::min_code()).unwrap();
        assert!(r.bound_respected());
        assert_eq!(r.retract, 2);
        // recoded domain has the four 2-blocks as symbols
        assert_eq!(r.d, 17);
        assert_eq!(r.k, 20);
    }

    #[test]
    fn wide_step_domains_are_recoded_first() {
        // domain forbidding 101 is a 2-step SFT, so the bound runs on its
        // 2-block refinement
        let spec = crate::sft::SftSpec::from_names(
            crate::alphabet::Alphabet::new(["0", "1"]).unwrap(),
            &[&["1", "0", "1"]],
        )
        .unwrap();
        let domain = crate::sft::from_forbidden(&spec).unwrap();
        assert_eq!(crate::sft::step_of(&domain).unwrap(), Some(2));
        let code = crate::corpus::identity_code(&domain);
        let r = verify_kbound(&code).unwrap();
        assert!(r.bound_respected());
        // the block decode looks one symbol ahead, hence retract 1
        assert_eq!(r.retract, 1);
        // the recoded 1-step domain carries the four 2-blocks as symbols
        assert_eq!(r.d, 4 * 4 + 1);
        assert_eq!(r.actual_step, Some(2));
    }

    #[test]
    fn right_continuing_decisions() {
        assert!(is_right_continuing_sft(&corpus::identity_code(&corpus::golden_mean())).unwrap());
        assert!(is_right_continuing_sft(&corpus::min_code()).unwrap());
        assert!(!is_right_continuing_sft(&corpus::one_way_collapse_code()).unwrap());
        // strictly sofic domain: refused, not decided
        let err = is_right_continuing_sft(&corpus::no_retract_code()).unwrap_err();
        assert!(matches!(err, Error::NotSft(_)));
    }
}
