//! Follower-set determinization, minimization and exact language comparison.

use std::collections::BTreeMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// Default cap on subset-construction states.
pub const DETERMINIZE_CAP: usize = 8192;

/// Right-deterministic presentation of the same shift, by the subset
/// construction started from the set of all states. The result is trimmed,
/// which keeps exactly the subsets reachable along arbitrarily long words;
/// those present the same language.
pub fn determinize(p: &Presentation) -> Result<Presentation> {
    determinize_capped(p, DETERMINIZE_CAP)
}

pub fn determinize_capped(p: &Presentation, cap: usize) -> Result<Presentation> {
    if p.is_deterministic() {
        return Ok(p.clone());
    }
    follower_automaton_capped(p, cap)
}

/// Subset construction from the set of all states, regardless of input
/// determinism. Its states are follower sets of words, which is the
/// structure the SFT deciders rely on.
pub fn follower_automaton(p: &Presentation) -> Result<Presentation> {
    follower_automaton_capped(p, DETERMINIZE_CAP)
}

fn follower_automaton_capped(p: &Presentation, cap: usize) -> Result<Presentation> {
    let full = BitSet::full(p.n_states());
    let mut ids: BTreeMap<BitSet, u32> = BTreeMap::new();
    let mut subsets: Vec<BitSet> = Vec::new();
    let mut edges: Vec<(u32, u32, u32)> = Vec::new();
    ids.insert(full.clone(), 0);
    subsets.push(full);
    let mut next = 0usize;
    while next < subsets.len() {
        let cur = subsets[next].clone();
        let cur_id = next as u32;
        next += 1;
        for sym in p.alphabet().ids() {
            let stepped = p.step_set(&cur, sym);
            if stepped.is_empty() {
                continue;
            }
            let id = match ids.get(&stepped) {
                Some(&id) => id,
                None => {
                    let id = subsets.len() as u32;
                    if subsets.len() >= cap {
                        return Err(Error::CapExceeded {
                            context: "determinizing a presentation",
                            size: subsets.len() + 1,
                            cap,
                        });
                    }
                    ids.insert(stepped.clone(), id);
                    subsets.push(stepped);
                    id
                }
            };
            edges.push((cur_id, sym, id));
        }
    }
    let names = (0..subsets.len()).map(|i| format!("d{i}")).collect();
    Presentation::build(p.alphabet().clone(), names, edges)
}

/// Merge language-equivalent states of a deterministic presentation by
/// partition refinement. Panics if the input is nondeterministic.
pub fn minimize_deterministic(p: &Presentation) -> Presentation {
    assert!(p.is_deterministic(), "minimize needs a deterministic input");
    let n = p.n_states();
    let n_syms = p.alphabet().len();
    // initial partition: by the set of symbols with an outgoing edge
    let mut class: Vec<u32> = vec![0; n];
    let mut sigs: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
    for (s, cls) in class.iter_mut().enumerate() {
        let sig: Vec<u64> = (0..n_syms)
            .map(|a| !p.targets(s as u32, a as u32).is_empty() as u64)
            .collect();
        let next_id = sigs.len() as u32;
        *cls = *sigs.entry(sig).or_insert(next_id);
    }
    loop {
        let mut new_sigs: BTreeMap<(u32, Vec<i64>), u32> = BTreeMap::new();
        let mut new_class = vec![0u32; n];
        for (s, cls) in new_class.iter_mut().enumerate() {
            let sig: Vec<i64> = (0..n_syms)
                .map(|a| match p.targets(s as u32, a as u32).first() {
                    Some(&t) => class[t as usize] as i64,
                    None => -1,
                })
                .collect();
            let key = (class[s], sig);
            let next_id = new_sigs.len() as u32;
            *cls = *new_sigs.entry(key).or_insert(next_id);
        }
        if new_class == class {
            break;
        }
        class = new_class;
    }
    let n_classes = class.iter().map(|c| c + 1).max().unwrap_or(0) as usize;
    let mut edges = Vec::new();
    for e in p.edges() {
        edges.push((class[e.src as usize], e.sym, class[e.dst as usize]));
    }
    let names = (0..n_classes).map(|i| format!("m{i}")).collect();
    Presentation::build(p.alphabet().clone(), names, edges)
        .expect("quotient of an essential presentation stays essential")
}

/// Minimal deterministic presentation: subset construction, then merging of
/// language-equivalent states. Canonical form used by the SFT deciders.
pub fn canonical_form(p: &Presentation) -> Result<Presentation> {
    Ok(minimize_deterministic(&follower_automaton(p)?))
}

/// Exact language containment B(a) ⊆ B(b), decided on the product of the two
/// subset constructions. Requires equal alphabet sets; symbol order may
/// differ. Returns a shortest witness word on failure.
pub fn language_contained(a: &Presentation, b: &Presentation) -> Result<ContainmentVerdict> {
    if !a.alphabet().same_set(b.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            a.alphabet().names(),
            b.alphabet().names()
        )));
    }
    let sym_map: Vec<u32> = a
        .alphabet()
        .names()
        .iter()
        .map(|s| b.alphabet().id(s).expect("same_set checked"))
        .collect();
    let start = (BitSet::full(a.n_states()), BitSet::full(b.n_states()));
    let mut seen: BTreeMap<(BitSet, BitSet), ()> = BTreeMap::new();
    let mut queue: std::collections::VecDeque<((BitSet, BitSet), Vec<u32>)> =
        std::collections::VecDeque::new();
    seen.insert(start.clone(), ());
    queue.push_back((start, Vec::new()));
    while let Some(((sa, sb), word)) = queue.pop_front() {
        for sym in a.alphabet().ids() {
            let na = a.step_set(&sa, sym);
            if na.is_empty() {
                continue;
            }
            let nb = b.step_set(&sb, sym_map[sym as usize]);
            let mut w = word.clone();
            w.push(sym);
            if nb.is_empty() {
                return Ok(ContainmentVerdict::NotContained { witness: w });
            }
            let key = (na, nb);
            if !seen.contains_key(&key) {
                seen.insert(key.clone(), ());
                queue.push_back((key, w));
            }
        }
    }
    Ok(ContainmentVerdict::Contained)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContainmentVerdict {
    Contained,
    /// A word in the first language but not the second (symbol ids of the
    /// first presentation's alphabet).
    NotContained { witness: Vec<u32> },
}

impl ContainmentVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ContainmentVerdict::Contained)
    }
}

/// Exact language equality via two containment checks.
pub fn language_equal(a: &Presentation, b: &Presentation) -> Result<bool> {
    Ok(language_contained(a, b)?.holds() && language_contained(b, a)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::corpus;

    /// Even shift with a redundant second zero-path, so reading 0 from the
    /// one-state is nondeterministic.
    fn even_shift_nondet() -> Presentation {
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        Presentation::from_named(
            alphabet,
            &["s", "t", "u"],
            &[
                ("s", "1", "s"),
                ("s", "0", "t"),
                ("t", "0", "s"),
                ("s", "0", "u"),
                ("u", "0", "s"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn determinize_preserves_language() {
        let nd = even_shift_nondet();
        let d = determinize(&nd).unwrap();
        assert!(d.is_deterministic());
        for n in 0..=8 {
            assert_eq!(nd.language(n), d.language(n));
        }
        assert!(language_equal(&nd, &d).unwrap());
        assert!(language_equal(&d, &corpus::even_shift()).unwrap());
    }

    #[test]
    fn determinize_is_idempotent_on_language() {
        let p = corpus::no_retract_shift();
        let d = determinize(&p).unwrap();
        assert!(language_equal(&p, &d).unwrap());
        // the named excluded family stays excluded after determinizing
        for n in 0..=8 {
            let mut w = vec!["1bar"];
            w.extend(std::iter::repeat_n("2", n));
            w.push("3");
            assert!(!d.contains_named_word(&w).unwrap());
            let mut ok = vec!["1"];
            ok.extend(std::iter::repeat_n("2", n));
            ok.push("3");
            assert!(d.contains_named_word(&ok).unwrap());
        }
    }

    #[test]
    fn containment_distinguishes_golden_mean_from_full() {
        let g = corpus::golden_mean();
        let f = corpus::full_shift(&["0", "1"]);
        assert!(language_contained(&g, &f).unwrap().holds());
        match language_contained(&f, &g).unwrap() {
            ContainmentVerdict::NotContained { witness } => {
                assert_eq!(f.alphabet().word_name(&witness), "11");
            }
            _ => panic!("full shift should not embed in golden mean"),
        }
        assert!(!language_equal(&g, &f).unwrap());
    }

    #[test]
    fn minimize_merges_duplicate_components() {
        // two disjoint copies of the full shift over {a}
        let alphabet = Alphabet::new(["a"]).unwrap();
        let p = Presentation::from_named(
            alphabet,
            &["p", "q"],
            &[("p", "a", "p"), ("q", "a", "q")],
        )
        .unwrap();
        let c = canonical_form(&p).unwrap();
        assert_eq!(c.n_states(), 1);
    }
}
