use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A labeled edge: `src --sym--> dst`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub src: u32,
    pub sym: u32,
    pub dst: u32,
}

/// A finite labeled directed graph presenting a sofic shift: the points of
/// the shift are the bi-infinite edge label sequences.
///
/// Presentations are trimmed to their essential part on construction, so
/// every state has at least one incoming and one outgoing edge and every
/// finite path label occurs in some point. A construction whose essential
/// part is empty is rejected with [`Error::EmptyShift`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    states: Vec<String>,
    edges: Vec<Edge>,
    /// successors\[state\]\[sym\] -> sorted target list
    successors: Vec<Vec<Vec<u32>>>,
}

impl Presentation {
    /// Build from raw parts, validating ids and trimming to the essential
    /// subgraph.
    pub fn build(
        alphabet: Alphabet,
        states: Vec<String>,
        edges: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::NoStates);
        }
        let n = states.len() as u32;
        let mut set = BTreeSet::new();
        for (src, sym, dst) in edges {
            if src >= n {
                return Err(Error::UnknownState(format!("#{src}")));
            }
            if dst >= n {
                return Err(Error::UnknownState(format!("#{dst}")));
            }
            if sym >= alphabet.len() as u32 {
                return Err(Error::UnknownSymbol(format!("#{sym}")));
            }
            set.insert(Edge { src, sym, dst });
        }
        Self::trimmed(alphabet, states, set.into_iter().collect())
    }

    /// Convenience builder with named states and symbols.
    pub fn from_named(
        alphabet: Alphabet,
        states: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let state_id = |name: &str| -> Result<u32> {
            names
                .iter()
                .position(|s| s == name)
                .map(|i| i as u32)
                .ok_or_else(|| Error::UnknownState(name.to_string()))
        };
        let mut raw = Vec::new();
        for (s, a, t) in edges {
            raw.push((state_id(s)?, alphabet.id(a)?, state_id(t)?));
        }
        Self::build(alphabet, names, raw)
    }

    fn trimmed(alphabet: Alphabet, states: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut alive: Vec<bool> = vec![true; states.len()];
        loop {
            let mut has_out = vec![false; states.len()];
            let mut has_in = vec![false; states.len()];
            for e in &edges {
                if alive[e.src as usize] && alive[e.dst as usize] {
                    has_out[e.src as usize] = true;
                    has_in[e.dst as usize] = true;
                }
            }
            let mut changed = false;
            for i in 0..states.len() {
                if alive[i] && (!has_out[i] || !has_in[i]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if alive.iter().all(|a| !a) {
            return Err(Error::EmptyShift);
        }
        let mut remap = vec![u32::MAX; states.len()];
        let mut kept_states = Vec::new();
        for (i, name) in states.iter().enumerate() {
            if alive[i] {
                remap[i] = kept_states.len() as u32;
                kept_states.push(name.clone());
            }
        }
        let kept_edges: Vec<Edge> = edges
            .iter()
            .filter(|e| alive[e.src as usize] && alive[e.dst as usize])
            .map(|e| Edge {
                src: remap[e.src as usize],
                sym: e.sym,
                dst: remap[e.dst as usize],
            })
            .collect();
        let mut successors = vec![vec![Vec::new(); alphabet.len()]; kept_states.len()];
        for e in &kept_edges {
            successors[e.src as usize][e.sym as usize].push(e.dst);
        }
        for per_state in &mut successors {
            for targets in per_state {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Ok(Presentation {
            alphabet,
            states: kept_states,
            edges: kept_edges,
            successors,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, id: u32) -> &str {
        &self.states[id as usize]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn targets(&self, state: u32, sym: u32) -> &[u32] {
        &self.successors[state as usize][sym as usize]
    }

    /// At most one outgoing edge per (state, symbol).
    pub fn is_deterministic(&self) -> bool {
        self.successors
            .iter()
            .flatten()
            .all(|targets| targets.len() <= 1)
    }

    /// States reachable from `set` by one edge labeled `sym`.
    pub fn step_set(&self, set: &BitSet, sym: u32) -> BitSet {
        let mut next = BitSet::empty(self.n_states());
        for s in set.iter() {
            for &t in self.targets(s as u32, sym) {
                next.insert(t as usize);
            }
        }
        next
    }

    pub fn step_word(&self, set: &BitSet, word: &[u32]) -> BitSet {
        let mut cur = set.clone();
        for &sym in word {
            if cur.is_empty() {
                break;
            }
            cur = self.step_set(&cur, sym);
        }
        cur
    }

    /// True iff `word` labels some path, i.e. lies in the language.
    pub fn contains_word(&self, word: &[u32]) -> bool {
        !self
            .step_word(&BitSet::full(self.n_states()), word)
            .is_empty()
    }

    pub fn contains_named_word(&self, word: &[&str]) -> Result<bool> {
        let ids: Vec<u32> = word
            .iter()
            .map(|s| self.alphabet.id(s))
            .collect::<Result<_>>()?;
        Ok(self.contains_word(&ids))
    }

    /// All words of length `n` in the language, as symbol id sequences in
    /// lexicographic order of the canonical symbol order.
    pub fn language(&self, n: usize) -> Vec<Vec<u32>> {
        let mut out = BTreeSet::new();
        let full = BitSet::full(self.n_states());
        let mut stack: Vec<(BitSet, Vec<u32>)> = vec![(full, Vec::new())];
        while let Some((set, word)) = stack.pop() {
            if word.len() == n {
                out.insert(word);
                continue;
            }
            for sym in self.alphabet.ids() {
                let next = self.step_set(&set, sym);
                if !next.is_empty() {
                    let mut w = word.clone();
                    w.push(sym);
                    stack.push((next, w));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn language_names(&self, n: usize) -> Vec<String> {
        self.language(n)
            .iter()
            .map(|w| self.alphabet.word_name(w))
            .collect()
    }

    /// Presentation of the time-reversed shift: same states, every edge
    /// flipped.
    pub fn reverse(&self) -> Presentation {
        let edges: Vec<(u32, u32, u32)> = self
            .edges
            .iter()
            .map(|e| (e.dst, e.sym, e.src))
            .collect();
        Presentation::build(self.alphabet.clone(), self.states.clone(), edges)
            .expect("reversal of an essential presentation stays essential")
    }

    /// Largest set of states that end some left-infinite path reading
    /// `... u u u` (loop repeated to the left, last copy ending here).
    /// Computed as the stabilized value of reading the loop from everywhere.
    pub fn loop_tail_set(&self, looped: &[u32]) -> BitSet {
        debug_assert!(!looped.is_empty());
        let mut cur = BitSet::full(self.n_states());
        loop {
            let next = self.step_word(&cur, looped);
            if next == cur {
                return cur;
            }
            cur = next;
            if cur.is_empty() {
                return cur;
            }
        }
    }

    /// Largest set of states that start some right-infinite path reading
    /// `v v v ...`.
    pub fn loop_head_set(&self, looped: &[u32]) -> BitSet {
        debug_assert!(!looped.is_empty());
        let mut cur = BitSet::full(self.n_states());
        loop {
            // states that can read one full copy of the loop into `cur`
            let mut frontier = cur.clone();
            for &sym in looped.iter().rev() {
                let mut prev = BitSet::empty(self.n_states());
                for e in &self.edges {
                    if e.sym == sym && frontier.contains(e.dst as usize) {
                        prev.insert(e.src as usize);
                    }
                }
                frontier = prev;
                if frontier.is_empty() {
                    break;
                }
            }
            if frontier == cur {
                return cur;
            }
            cur = frontier;
            if cur.is_empty() {
                return cur;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn trims_to_essential() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        // state 1 has no way back into a cycle, state 2 is a sink
        let p = Presentation::build(
            alphabet,
            vec!["p".into(), "q".into(), "r".into()],
            [(0, 0, 0), (0, 1, 1), (1, 0, 2)],
        )
        .unwrap();
        assert_eq!(p.n_states(), 1);
        assert_eq!(p.edges().len(), 1);
    }

    #[test]
    fn empty_shift_is_an_error() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let err = Presentation::build(alphabet, vec!["p".into(), "q".into()], [(0, 0, 1)])
            .unwrap_err();
        assert_eq!(err, Error::EmptyShift);
    }

    #[test]
    fn golden_mean_language() {
        let p = corpus::golden_mean();
        assert_eq!(
            p.language_names(3),
            vec!["000", "001", "010", "100", "101"]
        );
        assert_eq!(p.language(0).len(), 1);
    }

    #[test]
    fn full_shift_language() {
        let p = corpus::full_shift(&["0", "1"]);
        assert_eq!(p.language_names(2), vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn reverse_is_involutive_on_language() {
        let p = corpus::no_retract_shift();
        let rr = p.reverse().reverse();
        for n in 0..=6 {
            assert_eq!(p.language(n), rr.language(n));
        }
    }

    #[test]
    fn reverse_language_is_the_mirrored_language() {
        let p = corpus::even_shift();
        let r = p.reverse();
        for n in 0..=6 {
            let mut mirrored: Vec<Vec<u32>> = p
                .language(n)
                .into_iter()
                .map(|mut w| {
                    w.reverse();
                    w
                })
                .collect();
            mirrored.sort();
            assert_eq!(r.language(n), mirrored);
        }
    }

    #[test]
    fn reverse_swaps_forbidden_direction() {
        // forbidding "01" reversed is forbidding "10"
        let spec = crate::sft::SftSpec::from_names(
            Alphabet::new(["0", "1"]).unwrap(),
            &[&["0", "1"]],
        )
        .unwrap();
        let p = crate::sft::from_forbidden(&spec).unwrap();
        let r = p.reverse();
        assert!(!r.contains_named_word(&["1", "0"]).unwrap());
        assert!(r.contains_named_word(&["0", "1"]).unwrap());
    }

    #[test]
    fn factorial_and_extendable_language() {
        for p in [
            corpus::golden_mean(),
            corpus::even_shift(),
            corpus::no_retract_shift(),
        ] {
            for n in 0..=6 {
                let lang_n = p.language(n);
                let lang_n1 = p.language(n + 1);
                for w in &lang_n1 {
                    assert!(lang_n.binary_search(&w[..n].to_vec()).is_ok());
                    assert!(lang_n.binary_search(&w[1..].to_vec()).is_ok());
                }
                for w in &lang_n {
                    assert!(
                        lang_n1.iter().any(|x| x[..n] == w[..]),
                        "no right extension"
                    );
                    assert!(
                        lang_n1.iter().any(|x| x[1..] == w[..]),
                        "no left extension"
                    );
                }
            }
        }
    }
}
