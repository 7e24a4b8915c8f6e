//! The retract decision.
//!
//! A 1-block code has retract `n` when every image-side point agreeing with
//! the image of a domain point on `(-inf, 0]` lifts to a preimage agreeing
//! with that domain point on `(-inf, -n]`. The decision works with
//! configurations `(T, C)`: `T` is the exact set of graph states reachable
//! by left-infinite paths reading some left ray of the domain, and `C` is
//! the class of the corresponding image ray in the determinized image
//! presentation, which governs the continuations the image side may take.
//!
//! Configurations realizable by actual left rays are computed exactly: they
//! are the forward closure of the stable loops of the rooted subset-product
//! graph (nodes reachable from the root by a word `w` with `node . w =
//! node`, which pins the limit along `... w w w`). A Ramsey argument over
//! infix classes shows every ray realizes such a configuration, so nothing
//! is missed and every configuration comes with an eventually periodic
//! realizing ray, which is what makes the counterexample witnesses finite.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::bitset::BitSet;
use crate::code::SlidingBlockCode;
use crate::determinize::determinize;
use crate::error::{Error, Result};
use crate::lasso::{lasso_membership, LassoPoint};
use crate::presentation::Presentation;
use serde::{Deserialize, Serialize};

use super::paircheck::{image_agrees_left_of, lift_exists, step_image};
use super::CodedPair;

/// Configuration nodes paired with their transition rows.
type ProductGraph = (Vec<(BitSet, BitSet)>, Vec<Vec<Option<u32>>>);

/// Size guards for the subset constructions. Exceeding a cap is an error,
/// never a silent truncation.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// reachable nodes of the subset-product graph
    pub max_nodes: usize,
    /// pair states explored while searching stable loops
    pub max_stable_work: usize,
    /// levels tried by the minimal retract search
    pub max_levels: usize,
    /// states of the continuation game
    pub max_game_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 4096,
            max_stable_work: 50_000_000,
            max_levels: 4096,
            max_game_states: 500_000,
        }
    }
}

/// Outcome of a retract check at a fixed distance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RetractVerdict {
    pub holds: bool,
    pub n: usize,
    /// On failure: a pair (x, y) with image agreement on `(-inf, 0]` and no
    /// lift agreeing with x on `(-inf, -n]`.
    pub witness: Option<CodedPair>,
}

#[derive(Clone, Debug)]
struct Realization {
    /// nonempty loop word realizing the configuration as `... w w w path`
    loop_word: Vec<u32>,
    path_word: Vec<u32>,
}

/// Precomputed decision structures for one 1-block code.
pub struct RetractAnalyzer {
    code: SlidingBlockCode,
    dy: Presentation,
    /// subset-product nodes; node 0 is the root (all states, all classes)
    nodes: Vec<(BitSet, BitSet)>,
    /// transitions on domain symbols
    trans: Vec<Vec<Option<u32>>>,
    realizable: Vec<Option<Realization>>,
    limits: Limits,
    game_memo: HashMap<(BitSet, BitSet), bool>,
}

impl RetractAnalyzer {
    pub fn new(code: SlidingBlockCode, limits: Limits) -> Result<Self> {
        code.require_one_block()?;
        let image = code.image()?;
        let dy = determinize(&image)?;
        let (nodes, trans) = build_product(&code, &dy, &limits)?;
        let realizable = realizable_configurations(&nodes, &trans, &limits)?;
        Ok(RetractAnalyzer {
            code,
            dy,
            nodes,
            trans,
            realizable,
            limits,
            game_memo: HashMap::new(),
        })
    }

    pub fn code(&self) -> &SlidingBlockCode {
        &self.code
    }

    fn image_symbol(&self, a: u32) -> u32 {
        self.code.symbol_image(a)
    }

    /// Can the image side, playing any continuation its class allows, drive
    /// the set of partial lifts to the empty set?
    fn doomed(&mut self, s: &BitSet, c: &BitSet) -> Result<bool> {
        let key = (s.clone(), c.clone());
        if let Some(&b) = self.game_memo.get(&key) {
            return Ok(b);
        }
        let mut seen: BTreeSet<(BitSet, BitSet)> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(key.clone());
        queue.push_back(key.clone());
        let mut doomed = false;
        'outer: while let Some((s, c)) = queue.pop_front() {
            for b in self.code.codomain_alphabet().ids() {
                let c2 = self.dy.step_set(&c, b);
                if c2.is_empty() {
                    continue; // not a legal image continuation
                }
                let s2 = step_image(&self.code, &s, b);
                if s2.is_empty() {
                    doomed = true;
                    break 'outer;
                }
                let next = (s2, c2);
                if seen.insert(next.clone()) {
                    if seen.len() > self.limits.max_game_states {
                        return Err(Error::CapExceeded {
                            context: "exploring the continuation game",
                            size: seen.len(),
                            cap: self.limits.max_game_states,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        if doomed {
            self.game_memo.insert(key, true);
        } else {
            // everything reachable from a safe state is safe as well
            for state in seen {
                self.game_memo.insert(state, false);
            }
        }
        Ok(doomed)
    }

    /// Shortest legal continuation word killing the lift set, first by
    /// length and then by the canonical symbol order.
    fn kill_word(&self, s: &BitSet, c: &BitSet) -> Option<Vec<u32>> {
        let mut seen: BTreeSet<(BitSet, BitSet)> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = (s.clone(), c.clone());
        seen.insert(start.clone());
        queue.push_back((start, Vec::new()));
        while let Some(((s, c), word)) = queue.pop_front() {
            for b in self.code.codomain_alphabet().ids() {
                let c2 = self.dy.step_set(&c, b);
                if c2.is_empty() {
                    continue;
                }
                let mut w = word.clone();
                w.push(b);
                let s2 = step_image(&self.code, &s, b);
                if s2.is_empty() {
                    return Some(w);
                }
                let next = (s2, c2);
                if seen.insert(next.clone()) {
                    queue.push_back((next, w));
                }
            }
        }
        None
    }

    fn init_entries(&self) -> Vec<WalkEntry> {
        let mut level: Vec<WalkEntry> = Vec::new();
        for (id, real) in self.realizable.iter().enumerate() {
            if real.is_some() {
                level.push(WalkEntry {
                    node: id as u32,
                    lifts: self.nodes[id].0.clone(),
                    parent: usize::MAX,
                    sym: u32::MAX,
                });
            }
        }
        min_reduce(level)
    }

    fn step_entries(&self, level: &[WalkEntry]) -> Vec<WalkEntry> {
        let n_syms = self.code.domain().alphabet().len() as u32;
        let mut next = Vec::new();
        for (idx, entry) in level.iter().enumerate() {
            for a in 0..n_syms {
                if let Some(node2) = self.trans[entry.node as usize][a as usize] {
                    let lifts2 = step_image(&self.code, &entry.lifts, self.image_symbol(a));
                    debug_assert!(!lifts2.is_empty(), "lift set contains the real orbit");
                    next.push(WalkEntry {
                        node: node2,
                        lifts: lifts2,
                        parent: idx,
                        sym: a,
                    });
                }
            }
        }
        min_reduce(next)
    }

    /// Decide retract `n` and produce a counterexample pair on failure.
    pub fn check(&mut self, n: usize) -> Result<RetractVerdict> {
        let mut levels: Vec<Vec<WalkEntry>> = vec![self.init_entries()];
        for _ in 0..n {
            let next = self.step_entries(levels.last().unwrap());
            levels.push(next);
        }
        let last = levels.last().unwrap().clone();
        for (idx, entry) in last.iter().enumerate() {
            let class = self.nodes[entry.node as usize].1.clone();
            if self.doomed(&entry.lifts, &class)? {
                let witness = self.build_witness(&levels, n, idx)?;
                return Ok(RetractVerdict {
                    holds: false,
                    n,
                    witness: Some(witness),
                });
            }
        }
        Ok(RetractVerdict {
            holds: true,
            n,
            witness: None,
        })
    }

    /// Least n for which the retract holds. The level sets shrink as
    /// up-closed families, so reaching a fixed point with the check still
    /// failing settles that no retract exists.
    pub fn minimal(&mut self) -> Result<Option<usize>> {
        let mut level = self.init_entries();
        for n in 0..=self.limits.max_levels {
            let mut failing = false;
            for entry in &level {
                let class = self.nodes[entry.node as usize].1.clone();
                if self.doomed(&entry.lifts, &class)? {
                    failing = true;
                    break;
                }
            }
            if !failing {
                return Ok(Some(n));
            }
            let next = self.step_entries(&level);
            if same_entries(&level, &next) {
                return Ok(None);
            }
            level = next;
        }
        Err(Error::CapExceeded {
            context: "searching for a minimal retract",
            size: self.limits.max_levels + 1,
            cap: self.limits.max_levels,
        })
    }

    fn build_witness(
        &mut self,
        levels: &[Vec<WalkEntry>],
        n: usize,
        failing: usize,
    ) -> Result<CodedPair> {
        // recover the walk word and the starting configuration
        let mut walk: Vec<u32> = Vec::new();
        let mut idx = failing;
        for lvl in (1..=n).rev() {
            let e = &levels[lvl][idx];
            walk.push(e.sym);
            idx = e.parent;
        }
        walk.reverse();
        let start = &levels[0][idx];
        let real = self.realizable[start.node as usize]
            .clone()
            .expect("level 0 entries are realizable");
        let end = &levels[n][failing];
        let class = self.nodes[end.node as usize].1.clone();
        let kill = self
            .kill_word(&end.lifts, &class)
            .expect("doomed configurations admit a kill word");

        let domain = self.code.domain().clone();
        let dom_names = |w: &[u32]| -> Vec<String> {
            w.iter()
                .map(|&s| domain.alphabet().name(s).to_string())
                .collect()
        };
        let img_names = |w: &[u32]| -> Vec<String> {
            w.iter()
                .map(|&s| self.code.codomain_alphabet().name(s).to_string())
                .collect()
        };
        let image_of = |w: &[u32]| -> Vec<u32> {
            w.iter().map(|&s| self.image_symbol(s)).collect()
        };

        // complete x forward from the states reachable after the walk
        let x_set = &self.nodes[end.node as usize].0;
        let (x_stem, x_loop) = greedy_cycle(&domain, x_set.first().unwrap());
        // complete y forward from the class after the kill word
        let mut c_after = class.clone();
        for &b in &kill {
            c_after = self.dy.step_set(&c_after, b);
        }
        let (y_stem, y_loop) = greedy_cycle(&self.dy, c_after.first().unwrap());

        let origin = 1 - real.path_word.len() as i64 - n as i64;
        let mut x_center_ids = real.path_word.clone();
        x_center_ids.extend(&walk);
        x_center_ids.extend(&x_stem);
        let x = LassoPoint::new(
            dom_names(&real.loop_word),
            dom_names(&x_center_ids),
            dom_names(&x_loop),
            origin,
        )?;

        let mut y_center = image_of(&real.path_word);
        y_center.extend(image_of(&walk));
        y_center.extend(&kill);
        y_center.extend(&y_stem);
        let y = LassoPoint::new(
            img_names(&image_of(&real.loop_word)),
            img_names(&y_center),
            img_names(&y_loop),
            origin,
        )?;
        Ok(CodedPair {
            x: x.canonical(),
            y: y.canonical(),
        })
    }
}

#[derive(Clone, Debug)]
struct WalkEntry {
    node: u32,
    lifts: BitSet,
    parent: usize,
    sym: u32,
}

/// Keep, per configuration node, only the minimal lift sets: a bigger set
/// survives every continuation a smaller one survives, so dropping it never
/// hides a failure.
fn min_reduce(mut entries: Vec<WalkEntry>) -> Vec<WalkEntry> {
    let n = entries.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        if !keep[i] {
            continue;
        }
        for j in 0..n {
            if i == j || !keep[j] || entries[i].node != entries[j].node {
                continue;
            }
            let i_below = entries[i].lifts.is_subset(&entries[j].lifts);
            let equal = i_below && entries[j].lifts.is_subset(&entries[i].lifts);
            if i_below && (!equal || i < j) {
                keep[j] = false;
            }
        }
    }
    let mut idx = 0;
    entries.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    entries
}

fn same_entries(a: &[WalkEntry], b: &[WalkEntry]) -> bool {
    let key = |es: &[WalkEntry]| -> BTreeSet<(u32, BitSet)> {
        es.iter().map(|e| (e.node, e.lifts.clone())).collect()
    };
    key(a) == key(b)
}

/// Greedy walk along the least outgoing edge until a state repeats; returns
/// the stem word and the loop word.
pub(crate) fn greedy_cycle(g: &Presentation, start: usize) -> (Vec<u32>, Vec<u32>) {
    let mut states = vec![start as u32];
    let mut syms: Vec<u32> = Vec::new();
    loop {
        let cur = *states.last().unwrap();
        let (sym, next) = g
            .alphabet()
            .ids()
            .find_map(|a| g.targets(cur, a).first().map(|&t| (a, t)))
            .expect("essential state has a successor");
        syms.push(sym);
        if let Some(pos) = states.iter().position(|&s| s == next) {
            return (syms[..pos].to_vec(), syms[pos..].to_vec());
        }
        states.push(next);
    }
}

fn build_product(
    code: &SlidingBlockCode,
    dy: &Presentation,
    limits: &Limits,
) -> Result<ProductGraph> {
    let g = code.domain();
    let root = (BitSet::full(g.n_states()), BitSet::full(dy.n_states()));
    let mut ids: BTreeMap<(BitSet, BitSet), u32> = BTreeMap::new();
    let mut nodes = vec![root.clone()];
    let mut trans: Vec<Vec<Option<u32>>> = Vec::new();
    ids.insert(root, 0);
    let mut next = 0usize;
    while next < nodes.len() {
        let (xs, ys) = nodes[next].clone();
        let mut row = vec![None; g.alphabet().len()];
        for a in g.alphabet().ids() {
            let xs2 = g.step_set(&xs, a);
            if xs2.is_empty() {
                continue;
            }
            let ys2 = dy.step_set(&ys, code.symbol_image(a));
            debug_assert!(!ys2.is_empty(), "image rays stay readable");
            let key = (xs2, ys2);
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = nodes.len() as u32;
                    if nodes.len() >= limits.max_nodes {
                        return Err(Error::CapExceeded {
                            context: "building the configuration graph",
                            size: nodes.len() + 1,
                            cap: limits.max_nodes,
                        });
                    }
                    ids.insert(key.clone(), id);
                    nodes.push(key);
                    id
                }
            };
            row[a as usize] = Some(id);
        }
        trans.push(row);
        next += 1;
    }
    Ok((nodes, trans))
}

/// For every node decide whether some left-infinite ray realizes it, and if
/// so store an eventually periodic realizing ray.
fn realizable_configurations(
    nodes: &[(BitSet, BitSet)],
    trans: &[Vec<Option<u32>>],
    limits: &Limits,
) -> Result<Vec<Option<Realization>>> {
    let n = nodes.len();
    // only nodes on cycles can carry a stabilizing loop word
    let on_cycle: Vec<bool> = (0..n)
        .map(|m| {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = trans[m]
                .iter()
                .flatten()
                .map(|&t| t as usize)
                .collect();
            while let Some(v) = stack.pop() {
                if v == m {
                    return true;
                }
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                stack.extend(trans[v].iter().flatten().map(|&t| t as usize));
            }
            false
        })
        .collect();
    let mut work = 0usize;
    let mut stable: Vec<Option<Vec<u32>>> = vec![None; n];
    for m in 0..n as u32 {
        if !on_cycle[m as usize] {
            continue;
        }
        // search a word w with root.w == m and m.w == m via the pair graph
        let start = (0u32, m);
        let mut seen = vec![false; n * n];
        let mut queue: VecDeque<((u32, u32), Vec<u32>)> = VecDeque::new();
        queue.push_back((start, Vec::new()));
        seen[(start.0 as usize) * n + start.1 as usize] = true;
        'bfs: while let Some(((p, q), word)) = queue.pop_front() {
            let (row_p, row_q) = (&trans[p as usize], &trans[q as usize]);
            for (a, (pa, qa)) in row_p.iter().zip(row_q).enumerate() {
                let (Some(p2), Some(q2)) = (*pa, *qa) else {
                    continue;
                };
                work += 1;
                if work > limits.max_stable_work {
                    return Err(Error::CapExceeded {
                        context: "searching stable configuration loops",
                        size: work,
                        cap: limits.max_stable_work,
                    });
                }
                let mut w = word.clone();
                w.push(a as u32);
                if p2 == m && q2 == m {
                    stable[m as usize] = Some(w);
                    break 'bfs;
                }
                let key = (p2 as usize) * n + q2 as usize;
                if !seen[key] {
                    seen[key] = true;
                    queue.push_back(((p2, q2), w));
                }
            }
        }
    }
    // forward closure of the stable nodes, carrying realizations
    let mut real: Vec<Option<Realization>> = vec![None; n];
    let mut queue = VecDeque::new();
    for (m, loop_word) in stable.iter().enumerate() {
        if let Some(w) = loop_word {
            real[m] = Some(Realization {
                loop_word: w.clone(),
                path_word: Vec::new(),
            });
            queue.push_back(m as u32);
        }
    }
    while let Some(node) = queue.pop_front() {
        let base = real[node as usize].clone().unwrap();
        for (a, target) in trans[node as usize].iter().enumerate() {
            let Some(next) = *target else { continue };
            if real[next as usize].is_none() {
                let mut path = base.path_word.clone();
                path.push(a as u32);
                real[next as usize] = Some(Realization {
                    loop_word: base.loop_word.clone(),
                    path_word: path,
                });
                queue.push_back(next);
            }
        }
    }
    Ok(real)
}

/// Retract check at a fixed distance for a 1-block code.
pub fn check_retract(code: &SlidingBlockCode, n: usize) -> Result<RetractVerdict> {
    RetractAnalyzer::new(code.clone(), Limits::default())?.check(n)
}

/// Least retract distance, or None when no retract exists.
pub fn minimal_retract(code: &SlidingBlockCode) -> Result<Option<usize>> {
    RetractAnalyzer::new(code.clone(), Limits::default())?.minimal()
}

/// Independent validation of a claimed counterexample to retract `n`:
/// memberships, image agreement on the left ray, and the exact per-pair
/// lift check must all confirm it.
pub fn validate_retract_counterexample(
    code: &SlidingBlockCode,
    n: usize,
    pair: &CodedPair,
) -> Result<bool> {
    code.require_one_block()?;
    if !lasso_membership(&pair.x, code.domain()) {
        return Ok(false);
    }
    let image = code.image()?;
    if !lasso_membership(&pair.y, &image) {
        return Ok(false);
    }
    if !image_agrees_left_of(code, &pair.x, &pair.y, 0)? {
        return Ok(false);
    }
    Ok(!lift_exists(code, &pair.x, &pair.y, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::resolving::as_one_block;

    #[test]
    fn identity_has_retract_zero() {
        for p in [corpus::golden_mean(), corpus::full_shift(&["a", "b"]), corpus::even_shift()] {
            let id = corpus::identity_code(&p);
            let v = check_retract(&id, 0).unwrap();
            assert!(v.holds);
            assert_eq!(minimal_retract(&id).unwrap(), Some(0));
        }
    }

    #[test]
    fn collapse_code_has_no_retract() {
        let code = corpus::no_retract_code();
        assert_eq!(minimal_retract(&code).unwrap(), None);
        for n in 0..=8 {
            let v = check_retract(&code, n).unwrap();
            assert!(!v.holds, "n = {n}");
            let w = v.witness.expect("failure carries a witness");
            assert!(
                validate_retract_counterexample(&code, n, &w).unwrap(),
                "witness for n = {n} must validate"
            );
        }
    }

    #[test]
    fn retract_is_monotone_on_suite_codes() {
        for (name, code) in corpus::bundled_codes() {
            let code = as_one_block(&code).unwrap();
            let mut analyzer = RetractAnalyzer::new(code, Limits::default()).unwrap();
            let mut prev = false;
            for n in 0..=5usize {
                let holds = analyzer.check(n).unwrap().holds;
                assert!(!prev || holds, "monotonicity broke for {name} at n = {n}");
                prev = holds;
            }
        }
    }

    #[test]
    fn min_code_retract_is_two() {
        // the window of the recoded min code reaches one step back, and a
        // left context ending in 1 can force the next two output symbols
        let code = as_one_block(&corpus::min_code()).unwrap();
        assert!(!check_retract(&code, 0).unwrap().holds);
        assert!(!check_retract(&code, 1).unwrap().holds);
        assert!(check_retract(&code, 2).unwrap().holds);
        assert_eq!(minimal_retract(&code).unwrap(), Some(2));
        // failure witnesses validate
        for n in 0..=1 {
            let w = check_retract(&code, n).unwrap().witness.unwrap();
            assert!(validate_retract_counterexample(&code, n, &w).unwrap());
        }
    }

    #[test]
    fn one_way_collapse_has_no_retract() {
        let code = corpus::one_way_collapse_code();
        assert_eq!(minimal_retract(&code).unwrap(), None);
    }

    #[test]
    fn nondeterministic_domains_are_handled() {
        // even shift with a redundant parallel zero path
        let alphabet = crate::alphabet::Alphabet::new(["0", "1"]).unwrap();
        let nondet = crate::presentation::Presentation::from_named(
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
        .unwrap();
        let id = corpus::identity_code(&nondet);
        assert_eq!(minimal_retract(&id).unwrap(), Some(0));
        // verdicts agree with the deterministic presentation of the shift
        let det = corpus::identity_code(&corpus::even_shift());
        for n in 0..=2 {
            assert_eq!(
                check_retract(&id, n).unwrap().holds,
                check_retract(&det, n).unwrap().holds
            );
        }
    }

    #[test]
    fn accepts_the_stated_counterexample_family() {
        let code = corpus::no_retract_code();
        for n in 0..=8usize {
            let x = LassoPoint::new(
                vec!["1bar".into()],
                vec!["2".into(); n],
                vec!["2".into()],
                -(n as i64),
            )
            .unwrap();
            let mut y_center = vec!["2".to_string(); n];
            y_center.push("2".into());
            let y = LassoPoint::new(vec!["1".into()], y_center, vec!["3".into()], -(n as i64))
                .unwrap();
            let pair = CodedPair { x, y };
            assert!(validate_retract_counterexample(&code, n, &pair).unwrap());
        }
    }
}
