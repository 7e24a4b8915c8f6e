//! Bundled shifts and codes used by tests, the CLI and the experiments.

use crate::alphabet::Alphabet;
use crate::code::SlidingBlockCode;
use crate::error::Result;
use crate::presentation::Presentation;
use crate::sft::{from_forbidden, SftSpec};

/// Full shift over the given symbols: one state, one loop per symbol.
pub fn full_shift(symbols: &[&str]) -> Presentation {
    let alphabet = Alphabet::new(symbols.iter().copied()).unwrap();
    let edges: Vec<(u32, u32, u32)> = alphabet.ids().map(|s| (0, s, 0)).collect();
    Presentation::build(alphabet, vec!["q".into()], edges).unwrap()
}

/// Binary shift forbidding "11".
pub fn golden_mean() -> Presentation {
    let spec = SftSpec::from_names(Alphabet::new(["0", "1"]).unwrap(), &[&["1", "1"]]).unwrap();
    from_forbidden(&spec).unwrap()
}

/// Binary shift where maximal runs of zeros between ones have even length.
pub fn even_shift() -> Presentation {
    let alphabet = Alphabet::new(["0", "1"]).unwrap();
    Presentation::from_named(
        alphabet,
        &["even", "odd"],
        &[("even", "1", "even"), ("even", "0", "odd"), ("odd", "0", "even")],
    )
    .unwrap()
}

/// Strictly sofic shift over {1, 1bar, 2, 3} excluding every word where a
/// 1bar is followed by a run of 2s and then a 3. Two states suffice: one
/// remembers that a pending 1bar still watches the current run of 2s.
pub fn no_retract_shift() -> Presentation {
    let alphabet = Alphabet::new(["1", "1bar", "2", "3"]).unwrap();
    Presentation::from_named(
        alphabet,
        &["free", "pending"],
        &[
            ("free", "1", "free"),
            ("free", "2", "free"),
            ("free", "3", "free"),
            ("free", "1bar", "pending"),
            ("pending", "1", "free"),
            ("pending", "1bar", "pending"),
            ("pending", "2", "pending"),
        ],
    )
    .unwrap()
}

/// The 1-block code on [`no_retract_shift`] collapsing 1bar onto 1. It is
/// right continuing onto the full shift {1,2,3} but admits no retract.
pub fn no_retract_code() -> SlidingBlockCode {
    let codomain = Alphabet::new(["1", "2", "3"]).unwrap();
    SlidingBlockCode::one_block_by_name(
        no_retract_shift(),
        codomain,
        &[("1", "1"), ("1bar", "1"), ("2", "2"), ("3", "3")],
    )
    .unwrap()
}

/// Identity 1-block code on a presentation.
pub fn identity_code(p: &Presentation) -> SlidingBlockCode {
    let pairs: Vec<(String, String)> = p
        .alphabet()
        .names()
        .iter()
        .map(|s| (s.clone(), s.clone()))
        .collect();
    let by_name: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    SlidingBlockCode::one_block_by_name(p.clone(), p.alphabet().clone(), &by_name).unwrap()
}

/// Binary min code with memory 1: output at i is min(x_{i-1}, x_i).
pub fn min_code() -> SlidingBlockCode {
    let domain = full_shift(&["0", "1"]);
    let codomain = Alphabet::new(["0", "1"]).unwrap();
    SlidingBlockCode::from_rule(domain, 1, 0, codomain, |w, _| {
        if w == ["1", "1"] {
            "1".into()
        } else {
            "0".into()
        }
    })
    .unwrap()
}

/// Binary sum-mod-2 code with anticipation 1: output at i is x_i + x_{i+1}.
pub fn xor_code() -> SlidingBlockCode {
    let domain = full_shift(&["0", "1"]);
    let codomain = Alphabet::new(["0", "1"]).unwrap();
    SlidingBlockCode::from_rule(domain, 0, 1, codomain, |w, _| {
        if w[0] == w[1] {
            "0".into()
        } else {
            "1".into()
        }
    })
    .unwrap()
}

/// A 1-block code on a vertex shift that is not right continuing: the
/// domain has an isolated 0-loop next to a 1-then-2 lane, and the code
/// collapses 0 and 1. An image point may switch from u to v, but a preimage
/// sitting on the 0-loop can never follow.
pub fn one_way_collapse_code() -> SlidingBlockCode {
    let alphabet = Alphabet::new(["0", "1", "2"]).unwrap();
    let domain = Presentation::from_named(
        alphabet,
        &["z", "a", "b"],
        &[
            ("z", "0", "z"),
            ("a", "1", "a"),
            ("a", "2", "b"),
            ("b", "2", "b"),
        ],
    )
    .unwrap();
    let codomain = Alphabet::new(["u", "v"]).unwrap();
    SlidingBlockCode::one_block_by_name(
        domain,
        codomain,
        &[("0", "u"), ("1", "u"), ("2", "v")],
    )
    .unwrap()
}

/// The right-eresolving counterexample domain: a vertex shift on {0, 1, 1p}
/// where 1 may only be followed by 0, with both 1 and 1p mapping to 1.
pub fn eresolving_failure_code() -> SlidingBlockCode {
    let alphabet = Alphabet::new(["0", "1", "1p"]).unwrap();
    let domain = Presentation::from_named(
        alphabet,
        &["q0", "q1", "q1p"],
        &[
            ("q0", "0", "q0"),
            ("q0", "1", "q1"),
            ("q0", "1p", "q1p"),
            ("q1", "0", "q0"),
            ("q1p", "0", "q0"),
            ("q1p", "1", "q1"),
            ("q1p", "1p", "q1p"),
        ],
    )
    .unwrap();
    let codomain = Alphabet::new(["0", "1"]).unwrap();
    SlidingBlockCode::one_block_by_name(
        domain,
        codomain,
        &[("0", "0"), ("1", "1"), ("1p", "1")],
    )
    .unwrap()
}

/// Every named system in the bundle, for suite-wide property tests.
pub fn bundled_codes() -> Vec<(&'static str, SlidingBlockCode)> {
    let interleave = |code: &SlidingBlockCode| {
        crate::constructions::spacer_interleave(code)
            .expect("bundled codes interleave cleanly")
            .code
    };
    vec![
        ("identity-golden-mean", identity_code(&golden_mean())),
        ("identity-full-2", identity_code(&full_shift(&["0", "1"]))),
        ("no-retract", no_retract_code()),
        ("min", min_code()),
        ("xor", xor_code()),
        ("one-way-collapse", one_way_collapse_code()),
        ("eresolving-failure", eresolving_failure_code()),
        ("sqrt-no-retract", interleave(&no_retract_code())),
        (
            "sqrt-one-way-collapse",
            interleave(&one_way_collapse_code()),
        ),
    ]
}

/// Names and builders for the bundled shift documents.
pub fn bundled_shifts() -> Vec<(&'static str, Presentation)> {
    vec![
        ("golden-mean", golden_mean()),
        ("even-shift", even_shift()),
        ("full-2", full_shift(&["0", "1"])),
        ("full-3", full_shift(&["1", "2", "3"])),
        ("example-sec3-domain", no_retract_shift()),
    ]
}

pub fn bundled_code(name: &str) -> Result<SlidingBlockCode> {
    bundled_codes()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
        .ok_or_else(|| crate::error::Error::InvalidDocument(format!("no bundled code {name:?}")))
}
