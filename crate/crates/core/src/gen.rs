//! Seeded random generators for presentations, codes and points.
//!
//! The sampling scheme is fixed and documented so reports are reproducible:
//! a vertex shift on k symbols draws each of the k^2 possible transitions
//! with probability 1/2 (redrawing until the essential part is nonempty), a
//! 1-block rule maps each domain symbol uniformly onto an image alphabet,
//! and a random point follows uniformly random edges backwards and forwards
//! until a state repeats on each side.

use crate::alphabet::Alphabet;
use crate::code::SlidingBlockCode;
use crate::error::{Error, Result};
use crate::lasso::LassoPoint;
use crate::presentation::Presentation;
use crate::rng::SplitMix64;

/// Random essential vertex shift on at most `symbols` symbols: states and
/// symbols coincide and every edge is labeled by its target.
pub fn random_vertex_shift(rng: &mut SplitMix64, symbols: usize) -> Presentation {
    assert!(symbols >= 1);
    loop {
        let names: Vec<String> = (0..symbols).map(|i| i.to_string()).collect();
        let alphabet = Alphabet::new(names.clone()).expect("distinct names");
        let mut edges = Vec::new();
        for i in 0..symbols as u32 {
            for j in 0..symbols as u32 {
                if rng.coin() {
                    edges.push((i, j, j));
                }
            }
        }
        match Presentation::build(alphabet, names, edges) {
            Ok(p) => return p,
            Err(Error::EmptyShift) => continue,
            Err(e) => unreachable!("vertex shift construction cannot fail otherwise: {e}"),
        }
    }
}

/// Random 1-block rule from the domain onto an image alphabet of at most
/// `max_image_symbols` symbols named 0, 1, ...
pub fn random_one_block_code(
    rng: &mut SplitMix64,
    domain: &Presentation,
    max_image_symbols: usize,
) -> Result<SlidingBlockCode> {
    let m = 1 + rng.below(max_image_symbols);
    let image_names: Vec<String> = (0..m).map(|i| i.to_string()).collect();
    let codomain = Alphabet::new(image_names)?;
    let targets: Vec<u32> = (0..domain.alphabet().len())
        .map(|_| rng.below(m) as u32)
        .collect();
    let rule = domain
        .language(1)
        .into_iter()
        .map(|w| {
            let t = targets[w[0] as usize];
            (w, t)
        })
        .collect();
    SlidingBlockCode::new(domain.clone(), 0, 0, codomain, rule)
}

/// Random member point: a uniformly random backward walk to a repeat (the
/// left loop), glued at a random start state to a random forward walk to a
/// repeat (the right loop).
pub fn random_member_lasso(rng: &mut SplitMix64, p: &Presentation) -> LassoPoint {
    let name = |sym: u32| p.alphabet().name(sym).to_string();
    let start = rng.below(p.n_states()) as u32;
    // backward
    let mut nodes = vec![start];
    let mut into: Vec<u32> = Vec::new();
    let (left_loop, left_stem) = loop {
        let cur = *nodes.last().unwrap();
        let candidates: Vec<_> = p.edges().iter().filter(|e| e.dst == cur).collect();
        let e = candidates[rng.below(candidates.len())];
        if let Some(pos) = nodes.iter().position(|&v| v == e.src) {
            let mut cycle: Vec<u32> = into[pos..].to_vec();
            cycle.push(e.sym);
            cycle.reverse();
            let stem: Vec<u32> = into[..pos].iter().rev().copied().collect();
            break (cycle, stem);
        }
        nodes.push(e.src);
        into.push(e.sym);
    };
    // forward
    let mut states = vec![start];
    let mut syms: Vec<u32> = Vec::new();
    let (right_stem, right_loop) = loop {
        let cur = *states.last().unwrap();
        let candidates: Vec<_> = p.edges().iter().filter(|e| e.src == cur).collect();
        let e = candidates[rng.below(candidates.len())];
        syms.push(e.sym);
        if let Some(pos) = states.iter().position(|&s| s == e.dst) {
            break (syms[..pos].to_vec(), syms[pos..].to_vec());
        }
        states.push(e.dst);
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
    .expect("walk loops are nonempty")
}

/// Every deterministic essential presentation with at most 2 states over at
/// most 3 symbols, or 3 states over at most 2 symbols, one representative
/// per renaming of states and symbols. Small enough to sweep exhaustively
/// in cross-validation suites.
pub fn small_presentation_family() -> Vec<Presentation> {
    let mut family = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<(u32, u32, u32)>> =
        std::collections::BTreeSet::new();
    for (n_states, n_syms) in [
        (1usize, 1usize),
        (1, 2),
        (1, 3),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
    ] {
        let cells = n_states * n_syms;
        let options = (n_states + 1) as u64;
        for combo in 0..options.pow(cells as u32) {
            let mut idx = combo;
            let mut edges = Vec::new();
            for cell in 0..cells {
                let choice = (idx % options) as u32;
                idx /= options;
                if choice > 0 {
                    edges.push(((cell / n_syms) as u32, (cell % n_syms) as u32, choice - 1));
                }
            }
            let names: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
            let alphabet =
                Alphabet::new((0..n_syms).map(|i| format!("{i}")).collect::<Vec<_>>()).unwrap();
            let Ok(p) = Presentation::build(alphabet, names, edges.clone()) else {
                continue;
            };
            // skip anything that trims down or leaves a symbol unused;
            // smaller shapes are enumerated on their own
            if p.n_states() != n_states || p.language(1).len() != n_syms {
                continue;
            }
            if seen.insert(canonical_edge_key(&edges, n_states, n_syms)) {
                family.push(p);
            }
        }
    }
    family
}

/// A seeded sample of deterministic essential presentations with exactly 3
/// states over 3 symbols, deduplicated by renaming. Complements the
/// exhaustive family on the stratum too large to sweep.
pub fn sampled_three_by_three(rng: &mut SplitMix64, count: usize) -> Vec<Presentation> {
    let mut out = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<(u32, u32, u32)>> =
        std::collections::BTreeSet::new();
    while out.len() < count {
        let mut edges = Vec::new();
        for state in 0..3u32 {
            for sym in 0..3u32 {
                match rng.below(4) {
                    0 => {}
                    t => edges.push((state, sym, t as u32 - 1)),
                }
            }
        }
        let names: Vec<String> = (0..3).map(|i| format!("s{i}")).collect();
        let alphabet = Alphabet::new(["0", "1", "2"]).unwrap();
        let Ok(p) = Presentation::build(alphabet, names, edges.clone()) else {
            continue;
        };
        if p.n_states() != 3 || p.language(1).len() != 3 {
            continue;
        }
        if seen.insert(canonical_edge_key(&edges, 3, 3)) {
            out.push(p);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn rec(acc: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, n: usize) {
        if cur.len() == n {
            acc.push(cur.clone());
            return;
        }
        for i in 0..n as u32 {
            if !cur.contains(&i) {
                cur.push(i);
                rec(acc, cur, n);
                cur.pop();
            }
        }
    }
    let mut acc = Vec::new();
    rec(&mut acc, &mut Vec::new(), n);
    acc
}

fn canonical_edge_key(
    edges: &[(u32, u32, u32)],
    n_states: usize,
    n_syms: usize,
) -> Vec<(u32, u32, u32)> {
    let mut best: Option<Vec<(u32, u32, u32)>> = None;
    for sp in permutations(n_states) {
        for ap in permutations(n_syms) {
            let mut mapped: Vec<(u32, u32, u32)> = edges
                .iter()
                .map(|&(s, a, t)| (sp[s as usize], ap[a as usize], sp[t as usize]))
                .collect();
            mapped.sort_unstable();
            if best.as_ref().is_none_or(|b| &mapped < b) {
                best = Some(mapped);
            }
        }
    }
    best.unwrap()
}

/// All 1-block rules on the presentation up to renaming of image symbols:
/// one rule per set partition of the symbols.
pub fn one_block_rules_up_to_renaming(p: &Presentation) -> Vec<SlidingBlockCode> {
    let k = p.alphabet().len();
    // restricted growth strings enumerate the set partitions
    let mut rgs = vec![vec![0u32]];
    for _ in 1..k {
        let mut next = Vec::new();
        for s in &rgs {
            let max = *s.iter().max().unwrap();
            for v in 0..=max + 1 {
                let mut t = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        rgs = next;
    }
    rgs.into_iter()
        .map(|assignment| {
            let m = *assignment.iter().max().unwrap() as usize + 1;
            let codomain =
                Alphabet::new((0..m).map(|i| format!("y{i}")).collect::<Vec<_>>()).unwrap();
            let rule = p
                .language(1)
                .into_iter()
                .map(|w| {
                    let out = assignment[w[0] as usize];
                    (w, out)
                })
                .collect();
            SlidingBlockCode::new(p.clone(), 0, 0, codomain, rule).unwrap()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::lasso_membership;
    use crate::sft::is_sft;

    #[test]
    fn family_is_deduplicated_and_essential() {
        let family = small_presentation_family();
        assert!(family.len() > 100);
        for p in &family {
            assert!(p.is_deterministic());
            assert!(p.n_states() <= 3);
        }
    }

    #[test]
    fn generated_vertex_shifts_are_sfts() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..20 {
            let p = random_vertex_shift(&mut rng, 3);
            assert!(is_sft(&p).unwrap());
        }
    }

    #[test]
    fn generated_rules_are_total() {
        let mut rng = SplitMix64::new(2);
        let p = random_vertex_shift(&mut rng, 3);
        let code = random_one_block_code(&mut rng, &p, 3).unwrap();
        assert!(code.is_one_block());
    }

    #[test]
    fn generated_points_are_members() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..10 {
            let p = random_vertex_shift(&mut rng, 4);
            for _ in 0..10 {
                let x = random_member_lasso(&mut rng, &p);
                assert!(lasso_membership(&x, &p));
            }
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_vertex_shift(&mut SplitMix64::new(9), 5);
        let b = random_vertex_shift(&mut SplitMix64::new(9), 5);
        assert_eq!(a, b);
    }
}
