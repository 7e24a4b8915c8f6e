//! Faithful builders for the worked constructions: the collapse code with
//! no retract together with its repair lifter and witness family, the
//! spacer interleaving that makes any code right eresolving, and the
//! recodings pushing retracts down to zero.

use std::collections::BTreeMap;

use crate::alphabet::{join_symbols, Alphabet};
use crate::code::SlidingBlockCode;
use crate::corpus;
use crate::error::{Error, Result};
use crate::lasso::{lasso_membership, LassoPoint};
use crate::presentation::Presentation;
use crate::resolving::{as_one_block, minimal_retract, CodedPair};

/// The bundled counterexample system: a strictly sofic domain over
/// {1, 1bar, 2, 3}, the full shift {1, 2, 3} as image, and the 1-block code
/// collapsing 1bar onto 1. The code is onto and right continuing but admits
/// no retract.
pub fn no_retract_example() -> (Presentation, Presentation, SlidingBlockCode) {
    let x = corpus::no_retract_shift();
    let y = corpus::full_shift(&["1", "2", "3"]);
    let code = corpus::no_retract_code();
    (x, y, code)
}

/// The witness pair defeating retract `n` for the collapse code:
/// `x = 1bar^inf 2^n . 2 2^inf` and `y = 1^inf 2^n . 2 3^inf`.
pub fn no_retract_witness(n: usize) -> CodedPair {
    let x = LassoPoint::new(
        vec!["1bar".into()],
        vec!["2".into(); n],
        vec!["2".into()],
        -(n as i64),
    )
    .expect("loops are nonempty");
    let mut y_center = vec!["2".to_string(); n];
    y_center.push("2".into());
    let y = LassoPoint::new(vec!["1".into()], y_center, vec!["3".into()], -(n as i64))
        .expect("loops are nonempty");
    CodedPair { x, y }
}

/// The constructive lift behind the right continuing property of the
/// collapse code: splice the left half of `x` with the right half of `y`;
/// if that spoils membership, the offending forbidden word straddles the
/// splice point and flipping its leading 1bar to 1 repairs it.
///
/// Preconditions: `x` in the domain, `y` in the full image shift, and the
/// image of `x` agreeing with `y` on `(-inf, 0]`.
pub fn repair_lift(x: &LassoPoint, y: &LassoPoint) -> Result<LassoPoint> {
    let (domain, image, code) = no_retract_example();
    if !lasso_membership(x, &domain) || !lasso_membership(y, &image) {
        return Err(Error::Precondition("repair lift needs member points".into()));
    }
    if !crate::resolving::image_agrees_left_of(&code, x, y, 0)? {
        return Err(Error::Precondition(
            "images must agree on the left ray through 0".into(),
        ));
    }
    // splice: x up to 0, then y from 1 on
    let m = x.origin.min(0);
    let left = x.window(m - x.left.len() as i64, m);
    let r = y.right_start().max(1);
    let mut center = x.window(m, 1);
    center.extend(y.window(1, r));
    let right = y.window(r, r + y.right.len() as i64);
    let splice = LassoPoint::new(left, center, right, m)?;
    if lasso_membership(&splice, &domain) {
        return Ok(splice.canonical());
    }
    // find the straddling forbidden word: the 2-run through the splice
    // point, headed by a 1bar on the left and closed by a 3 on the right
    let low_stop = m - x.left.len() as i64 - 1;
    let mut i = 0i64;
    while splice.at(i) == "2" && i > low_stop {
        i -= 1;
    }
    let high_stop = r + y.right.len() as i64 + 1;
    let mut j = 1i64;
    while splice.at(j) == "2" && j < high_stop {
        j += 1;
    }
    if splice.at(i) != "1bar" || splice.at(j) != "3" {
        return Err(Error::Precondition(
            "spliced point is invalid but carries no straddling forbidden word".into(),
        ));
    }
    // flip the 1bar at position i
    let m2 = m.min(i);
    let left = splice.window(m2 - splice.left.len() as i64, m2);
    let mut center = splice.window(m2, r);
    center[(i - m2) as usize] = "1".into();
    let repaired = LassoPoint::new(left, center, splice.window(r, r + splice.right.len() as i64), m2)?;
    if !lasso_membership(&repaired, &domain) {
        return Err(Error::Precondition(
            "repair produced a point outside the domain".into(),
        ));
    }
    Ok(repaired.canonical())
}

/// A code together with the spacer-interleaved versions of its domain,
/// image and rule. Every point of the interleaved domain carries the spacer
/// on exactly one parity class, and the interleaved code is always right
/// eresolving.
#[derive(Clone, Debug)]
pub struct InterleavedCode {
    pub domain: Presentation,
    pub image: Presentation,
    pub code: SlidingBlockCode,
    pub spacer: String,
    /// true when the preferred spacer name collided and was renamed
    pub spacer_renamed: bool,
}

fn interleave_presentation(p: &Presentation, spacer: &str) -> Result<Presentation> {
    let mut symbols: Vec<String> = p.alphabet().names().to_vec();
    symbols.push(spacer.to_string());
    let alphabet = Alphabet::new(symbols)?;
    let spacer_id = alphabet.id(spacer)?;
    let mut states: Vec<String> = p.state_names().to_vec();
    let mut edges = Vec::new();
    for (idx, e) in p.edges().iter().enumerate() {
        let mid = states.len() as u32;
        states.push(format!("m{idx}"));
        edges.push((e.src, e.sym, mid));
        edges.push((mid, spacer_id, e.dst));
    }
    Presentation::build(alphabet, states, edges)
}

/// Interleave a 1-block code with a fresh spacer symbol: every edge of both
/// presentations is split in two through a spacer-labeled midpoint, and the
/// rule fixes the spacer while acting as before elsewhere.
pub fn spacer_interleave(code: &SlidingBlockCode) -> Result<InterleavedCode> {
    code.require_one_block()?;
    let image = code.image()?;
    let preferred = "a";
    let mut spacer = preferred.to_string();
    let mut k = 0;
    let taken = |s: &str| {
        code.domain().alphabet().id(s).is_ok() || code.codomain_alphabet().id(s).is_ok()
    };
    while taken(&spacer) {
        spacer = format!("{preferred}{k}");
        k += 1;
    }
    let domain = interleave_presentation(code.domain(), &spacer)?;
    let image = interleave_presentation(&image, &spacer)?;
    let mut codomain: Vec<String> = code.codomain_alphabet().names().to_vec();
    codomain.push(spacer.clone());
    let codomain = Alphabet::new(codomain)?;
    let spacer_name = spacer.clone();
    let interleaved = SlidingBlockCode::from_rule(domain.clone(), 0, 0, codomain, |w, _| {
        if w[0] == spacer_name {
            spacer_name.clone()
        } else {
            let sym = code.domain().alphabet().id(w[0]).expect("domain symbol");
            code.codomain_alphabet()
                .name(code.symbol_image(sym))
                .to_string()
        }
    })?;
    let spacer_renamed = spacer != preferred;
    Ok(InterleavedCode {
        domain,
        image,
        code: interleaved,
        spacer,
        spacer_renamed,
    })
}

/// Result of the retract-lowering recodings: a conjugacy on the domain (and
/// on the image in the two-sided case) after which the code is 1-block with
/// retract zero.
#[derive(Clone, Debug)]
pub struct RecodedCode {
    /// conjugacy from the original domain onto `recoded_domain`
    pub conjugacy: SlidingBlockCode,
    pub recoded_domain: Presentation,
    /// the 1-block code on the recoded domain
    pub one_block: SlidingBlockCode,
    /// image-side conjugacy, present in the two-sided recoding
    pub image_conjugacy: Option<SlidingBlockCode>,
    pub recoded_image: Option<Presentation>,
}

fn pair_symbol(a: &str, images: &[&str]) -> String {
    format!("({}|{})", a, join_symbols(images.iter().copied()))
}

/// The pairing conjugacy shared by both recodings: read the window
/// `[-memory, +anticipation]`, pair the symbol at `pivot` (an offset into
/// the window) with the pointwise image of the whole window.
fn pairing_conjugacy(
    one: &SlidingBlockCode,
    memory: usize,
    anticipation: usize,
    pivot: usize,
) -> Result<(SlidingBlockCode, Presentation)> {
    let domain = one.domain();
    let width = memory + anticipation + 1;
    let mut pair_names: Vec<String> = Vec::new();
    for block in domain.language(width) {
        let a = domain.alphabet().name(block[pivot]);
        let images: Vec<&str> = block
            .iter()
            .map(|&s| one.codomain_alphabet().name(one.symbol_image(s)))
            .collect();
        pair_names.push(pair_symbol(a, &images));
    }
    pair_names.sort();
    pair_names.dedup();
    let pair_alpha = Alphabet::new(pair_names)?;
    let conjugacy = SlidingBlockCode::from_rule(
        domain.clone(),
        memory,
        anticipation,
        pair_alpha,
        |w, _| {
            let images: Vec<&str> = w
                .iter()
                .map(|&s| {
                    let sym = domain.alphabet().id(s).expect("domain symbol");
                    one.codomain_alphabet().name(one.symbol_image(sym))
                })
                .collect();
            pair_symbol(w[pivot], &images)
        },
    )?;
    let recoded_domain = conjugacy.image()?;
    Ok((conjugacy, recoded_domain))
}

/// Recode a code with a retract so the retract becomes zero: each new
/// symbol pairs the domain symbol `r` steps back with the image window read
/// since, and the new 1-block rule projects onto the window's last symbol.
pub fn retract_zero_recode(code: &SlidingBlockCode) -> Result<RecodedCode> {
    let one = as_one_block(code)?;
    let r = minimal_retract(&one)?.ok_or(Error::NoRetract)?;
    let (conjugacy, recoded_domain) = pairing_conjugacy(&one, r, 0, 0)?;
    let mut rule: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    for block in one.domain().language(r + 1) {
        let a = one.domain().alphabet().name(block[0]);
        let images: Vec<&str> = block
            .iter()
            .map(|&s| one.codomain_alphabet().name(one.symbol_image(s)))
            .collect();
        let pair_id = recoded_domain.alphabet().id(&pair_symbol(a, &images))?;
        rule.insert(vec![pair_id], one.symbol_image(block[r]));
    }
    let one_block = SlidingBlockCode::new(
        recoded_domain.clone(),
        0,
        0,
        one.codomain_alphabet().clone(),
        rule,
    )?;
    Ok(RecodedCode {
        conjugacy,
        recoded_domain,
        one_block,
        image_conjugacy: None,
        recoded_image: None,
    })
}

/// Recode a code with retracts on both sides so both become zero: new
/// domain symbols pair the current symbol with the image window reaching
/// `r` steps each way, the image is recoded through the same windows, and
/// the recoded rule is the projection onto the window component.
pub fn bicontinuing_recode(code: &SlidingBlockCode) -> Result<RecodedCode> {
    let one = as_one_block(code)?;
    let right = minimal_retract(&one)?.ok_or(Error::NoRetract)?;
    let left = minimal_retract(&one.reversed())?.ok_or(Error::NoRetract)?;
    let r = right.max(left);
    let window = 2 * r + 1;
    let (conjugacy, recoded_domain) = pairing_conjugacy(&one, r, r, r)?;

    // image-side conjugacy onto windows of width 2r + 1
    let y = one.image()?;
    let y_names: Vec<String> = y
        .language(window)
        .iter()
        .map(|w| {
            let parts: Vec<&str> = w.iter().map(|&s| y.alphabet().name(s)).collect();
            join_symbols(parts)
        })
        .collect();
    let y_alpha = Alphabet::new(y_names)?;
    let theta = SlidingBlockCode::from_rule(y.clone(), r, r, y_alpha.clone(), |w, _| {
        join_symbols(w.iter().copied())
    })?;
    let recoded_image = theta.image()?;

    let mut rule: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    for block in one.domain().language(window) {
        let a = one.domain().alphabet().name(block[r]);
        let images: Vec<&str> = block
            .iter()
            .map(|&s| one.codomain_alphabet().name(one.symbol_image(s)))
            .collect();
        let pair_id = recoded_domain.alphabet().id(&pair_symbol(a, &images))?;
        let window_sym = y_alpha.id(&join_symbols(images.iter().copied()))?;
        rule.insert(vec![pair_id], window_sym);
    }
    let one_block = SlidingBlockCode::new(recoded_domain.clone(), 0, 0, y_alpha, rule)?;
    Ok(RecodedCode {
        conjugacy,
        recoded_domain,
        one_block,
        image_conjugacy: Some(theta),
        recoded_image: Some(recoded_image),
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{is_injective, language_equal};
    use crate::gen::random_member_lasso;
    use crate::resolving::{
        check_retract, is_right_eresolving, refute_right_continuing_bounded,
        validate_retract_counterexample,
    };
    use crate::rng::SplitMix64;
    use crate::sft::is_sft;

    /// Exact test for left-asymptotic agreement of two lassos.
    fn left_asymptotic(p: &LassoPoint, q: &LassoPoint) -> bool {
        let period = crate::lasso::lcm(p.left.len(), q.left.len()) as i64;
        let m = p.origin.min(q.origin);
        (m - period..m).all(|i| p.at(i) == q.at(i))
    }

    #[test]
    fn example_language_and_type() {
        let (x, y, code) = no_retract_example();
        assert!(!x.contains_named_word(&["1bar", "2", "2", "3"]).unwrap());
        assert!(x.contains_named_word(&["1", "2", "2", "3"]).unwrap());
        for n in 0..=8usize {
            let mut w = vec!["1bar"];
            w.extend(std::iter::repeat_n("2", n));
            w.push("3");
            assert!(!x.contains_named_word(&w).unwrap());
            w[0] = "1";
            assert!(x.contains_named_word(&w).unwrap());
        }
        assert!(!is_sft(&x).unwrap());
        assert!(language_equal(&code.image().unwrap(), &y).unwrap());
    }

    #[test]
    fn witness_family_defeats_every_distance() {
        let (_, _, code) = no_retract_example();
        for n in 0..=8usize {
            let pair = no_retract_witness(n);
            assert!(validate_retract_counterexample(&code, n, &pair).unwrap());
            assert!(!check_retract(&code, n).unwrap().holds);
        }
    }

    #[test]
    fn repair_lift_on_the_witness_family() {
        let (x_pres, _, code) = no_retract_example();
        for n in 0..=6usize {
            let pair = no_retract_witness(n);
            let lifted = repair_lift(&pair.x, &pair.y).unwrap();
            assert!(lasso_membership(&lifted, &x_pres));
            assert!(left_asymptotic(&lifted, &pair.x), "n = {n}");
            let image = code.apply(&lifted).unwrap();
            assert!(image.same_point(&pair.y), "n = {n}");
        }
    }

    #[test]
    fn repair_lift_on_random_pairs() {
        let (x_pres, y_pres, code) = no_retract_example();
        let mut rng = SplitMix64::new(11);
        let mut done = 0;
        while done < 100 {
            let x = random_member_lasso(&mut rng, &x_pres);
            // y agrees with the image of x up to 0 and continues freely
            let fx = code.apply(&x).unwrap();
            let free = random_member_lasso(&mut rng, &y_pres);
            let m = fx.origin.min(0);
            let left = fx.window(m - fx.left.len() as i64, m);
            let mut center = fx.window(m, 1);
            let r = free.right_start().max(1);
            center.extend(free.window(1, r));
            let right = free.window(r, r + free.right.len() as i64);
            let y = LassoPoint::new(left, center, right, m).unwrap();
            if !lasso_membership(&y, &y_pres) {
                continue;
            }
            done += 1;
            let lifted = repair_lift(&x, &y).unwrap();
            assert!(lasso_membership(&lifted, &x_pres));
            assert!(left_asymptotic(&lifted, &x));
            assert!(code.apply(&lifted).unwrap().same_point(&y));
        }
    }

    #[test]
    fn repair_lift_without_conflict_is_the_splice() {
        // image of x continued by y = exact image: nothing to repair
        let (_, _, code) = no_retract_example();
        let x = LassoPoint::from_names(&["1bar"], &["2"], &["1"], 0).unwrap();
        let y = code.apply(&x).unwrap();
        let lifted = repair_lift(&x, &y).unwrap();
        assert!(lifted.same_point(&x));
    }

    #[test]
    fn interleaving_structure() {
        // one-symbol full shift: the interleaved domain alternates 0 and a
        let full = corpus::full_shift(&["0"]);
        let id = corpus::identity_code(&full);
        let inter = spacer_interleave(&id).unwrap();
        assert_eq!(inter.spacer, "a");
        assert!(!inter.spacer_renamed);
        assert_eq!(inter.domain.n_states(), 2);
        let two = inter.domain.language_names(2);
        assert_eq!(two, vec!["0a", "a0"]);
        // every 2-word of any interleaved domain has exactly one spacer
        for (_, code) in corpus::bundled_codes() {
            let one = as_one_block(&code).unwrap();
            let inter = spacer_interleave(&one).unwrap();
            for w in inter.domain.language(2) {
                let spacer_id = inter.domain.alphabet().id(&inter.spacer).unwrap();
                let count = w.iter().filter(|&&s| s == spacer_id).count();
                assert_eq!(count, 1);
            }
        }
    }

    #[test]
    fn interleaving_is_always_right_eresolving() {
        for (name, code) in corpus::bundled_codes() {
            let one = as_one_block(&code).unwrap();
            let inter = spacer_interleave(&one).unwrap();
            assert!(
                is_right_eresolving(&inter.code).unwrap().holds,
                "interleaving of {name}"
            );
            assert!(language_equal(&inter.code.image().unwrap(), &inter.image).unwrap());
        }
    }

    #[test]
    fn interleaved_identity_is_left_eresolving_too() {
        let id = corpus::identity_code(&corpus::full_shift(&["0", "1"]));
        let inter = spacer_interleave(&id).unwrap();
        assert!(crate::resolving::is_left_eresolving(&inter.code).unwrap().holds);
    }

    #[test]
    fn spacer_collision_is_renamed() {
        let full = corpus::full_shift(&["a", "b"]);
        let id = corpus::identity_code(&full);
        let inter = spacer_interleave(&id).unwrap();
        assert!(inter.spacer_renamed);
        assert_eq!(inter.spacer, "a0");
    }

    #[test]
    fn interleaving_preserves_missing_continuity() {
        let base = corpus::one_way_collapse_code();
        assert!(refute_right_continuing_bounded(&base, 2).unwrap().is_some());
        let inter = spacer_interleave(&base).unwrap();
        assert!(is_right_eresolving(&inter.code).unwrap().holds);
        let pair = refute_right_continuing_bounded(&inter.code, 3)
            .unwrap()
            .expect("interleaving keeps the obstruction");
        assert!(lasso_membership(&pair.x, inter.code.domain()));
    }

    #[test]
    fn retract_zero_recode_identity() {
        let id = corpus::identity_code(&corpus::golden_mean());
        let rec = retract_zero_recode(&id).unwrap();
        assert!(rec.one_block.is_one_block());
        assert!(is_injective(&rec.conjugacy).unwrap().injective);
        assert!(check_retract(&rec.one_block, 0).unwrap().holds);
        // r = 0: each symbol pairs with its own image
        assert_eq!(rec.recoded_domain.alphabet().names(), ["(0|0)", "(1|1)"]);
    }

    #[test]
    fn recodings_preserve_the_image() {
        let one = as_one_block(&corpus::min_code()).unwrap();
        let rec = retract_zero_recode(&one).unwrap();
        assert!(
            language_equal(&rec.one_block.image().unwrap(), &one.image().unwrap()).unwrap()
        );
        let rec = bicontinuing_recode(&corpus::xor_code()).unwrap();
        assert!(language_equal(
            &rec.one_block.image().unwrap(),
            rec.recoded_image.as_ref().unwrap()
        )
        .unwrap());
    }

    #[test]
    fn retract_zero_recode_min_code() {
        let rec = retract_zero_recode(&corpus::min_code()).unwrap();
        assert!(rec.one_block.is_one_block());
        assert!(is_injective(&rec.conjugacy).unwrap().injective);
        assert!(check_retract(&rec.one_block, 0).unwrap().holds);
        // composition equality on random points
        let one = as_one_block(&corpus::min_code()).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let p = random_member_lasso(&mut rng, one.domain());
            let via_recode = rec.one_block.apply(&rec.conjugacy.apply(&p).unwrap()).unwrap();
            let direct = one.apply(&p).unwrap();
            assert!(via_recode.same_point(&direct));
        }
    }

    #[test]
    fn bicontinuing_recode_identity() {
        let id = corpus::identity_code(&corpus::full_shift(&["0", "1"]));
        let rec = bicontinuing_recode(&id).unwrap();
        let chk = &rec.one_block;
        assert!(check_retract(chk, 0).unwrap().holds);
        assert!(check_retract(&chk.reversed(), 0).unwrap().holds);
        assert!(is_injective(&rec.conjugacy).unwrap().injective);
        assert!(is_injective(rec.image_conjugacy.as_ref().unwrap()).unwrap().injective);
    }

    #[test]
    fn bicontinuing_recode_xor() {
        let xor = corpus::xor_code();
        let rec = bicontinuing_recode(&xor).unwrap();
        assert!(rec.one_block.is_one_block());
        assert!(check_retract(&rec.one_block, 0).unwrap().holds);
        assert!(check_retract(&rec.one_block.reversed(), 0).unwrap().holds);
        assert!(is_injective(&rec.conjugacy).unwrap().injective);
        let theta = rec.image_conjugacy.as_ref().unwrap();
        assert!(is_injective(theta).unwrap().injective);
        // theta . phi = recoded . psi coordinatewise
        let one = as_one_block(&xor).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let p = random_member_lasso(&mut rng, one.domain());
            let lhs = theta.apply(&one.apply(&p).unwrap()).unwrap();
            let rhs = rec.one_block.apply(&rec.conjugacy.apply(&p).unwrap()).unwrap();
            assert!(lhs.same_point(&rhs));
        }
    }

    #[test]
    fn recode_without_retract_is_refused() {
        let err = retract_zero_recode(&corpus::no_retract_code()).unwrap_err();
        assert_eq!(err, Error::NoRetract);
    }
}
