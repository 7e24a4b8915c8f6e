//! Sliding block codes over presented shifts: construction, application to
//! lasso points, recoding to window one, images, composition and the
//! injectivity decision.

use std::collections::BTreeMap;

use crate::alphabet::{join_symbols, Alphabet};
use crate::determinize;
use crate::error::{Error, Result};
use crate::lasso::{lasso_membership, LassoPoint};
use crate::presentation::Presentation;

/// A block code given by an explicit finite rule table over the words of
/// length `memory + anticipation + 1` of its domain.
#[derive(Clone, Debug)]
pub struct SlidingBlockCode {
    domain: Presentation,
    memory: usize,
    anticipation: usize,
    /// block of domain symbol ids -> codomain symbol id
    rule: BTreeMap<Vec<u32>, u32>,
    codomain: Alphabet,
}

impl SlidingBlockCode {
    pub fn new(
        domain: Presentation,
        memory: usize,
        anticipation: usize,
        codomain: Alphabet,
        rule: BTreeMap<Vec<u32>, u32>,
    ) -> Result<Self> {
        let width = memory + anticipation + 1;
        let blocks = domain.language(width);
        for b in &blocks {
            match rule.get(b) {
                None => {
                    return Err(Error::MissingRuleEntry(domain.alphabet().word_name(b)));
                }
                Some(&out) if out >= codomain.len() as u32 => {
                    return Err(Error::RuleOutputNotInCodomain(format!("#{out}")));
                }
                _ => {}
            }
        }
        for key in rule.keys() {
            if blocks.binary_search(key).is_err() {
                return Err(Error::RuleDomainMismatch(domain.alphabet().word_name(key)));
            }
        }
        Ok(SlidingBlockCode {
            domain,
            memory,
            anticipation,
            rule,
            codomain,
        })
    }

    /// Build the rule table by evaluating a function on every block of the
    /// window language.
    pub fn from_rule(
        domain: Presentation,
        memory: usize,
        anticipation: usize,
        codomain: Alphabet,
        f: impl Fn(&[&str], &Alphabet) -> String,
    ) -> Result<Self> {
        let width = memory + anticipation + 1;
        let mut rule = BTreeMap::new();
        for block in domain.language(width) {
            let names: Vec<&str> = block
                .iter()
                .map(|&s| domain.alphabet().name(s))
                .collect();
            let out = f(&names, &codomain);
            rule.insert(block, codomain.id(&out)?);
        }
        SlidingBlockCode::new(domain, memory, anticipation, codomain, rule)
    }

    pub fn one_block_by_name(
        domain: Presentation,
        codomain: Alphabet,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let map: BTreeMap<&str, &str> = pairs.iter().copied().collect();
        SlidingBlockCode::from_rule(domain, 0, 0, codomain, |w, _| {
            map.get(w[0]).map(|s| s.to_string()).unwrap_or_default()
        })
    }

    pub fn domain(&self) -> &Presentation {
        &self.domain
    }

    pub fn codomain_alphabet(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn window_len(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn is_one_block(&self) -> bool {
        self.memory == 0 && self.anticipation == 0
    }

    pub fn rule_table(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.rule
    }

    /// Image symbol of a 1-block code on a single domain symbol.
    pub fn symbol_image(&self, sym: u32) -> u32 {
        debug_assert!(self.is_one_block());
        self.rule[&vec![sym]]
    }

    pub fn require_one_block(&self) -> Result<()> {
        if self.is_one_block() {
            Ok(())
        } else {
            Err(Error::NotOneBlock {
                memory: self.memory,
                anticipation: self.anticipation,
            })
        }
    }

    /// The same local rule read backwards, acting on the reversed domain.
    pub fn reversed(&self) -> SlidingBlockCode {
        let rule = self
            .rule
            .iter()
            .map(|(k, &v)| {
                let mut r = k.clone();
                r.reverse();
                (r, v)
            })
            .collect();
        SlidingBlockCode::new(
            self.domain.reverse(),
            self.anticipation,
            self.memory,
            self.codomain.clone(),
            rule,
        )
        .expect("reversing a total rule stays total")
    }

    /// Apply the code to a point of the domain. Output coordinate `i` is the
    /// rule applied to the window `[i - memory, i + anticipation]`.
    pub fn apply(&self, p: &LassoPoint) -> Result<LassoPoint> {
        if !lasso_membership(p, &self.domain) {
            return Err(Error::NotInDomain);
        }
        let m = self.memory as i64;
        let a = self.anticipation as i64;
        let out_at = |i: i64| -> Result<String> {
            let window = p.window(i - m, i + a + 1);
            let ids: Vec<u32> = window
                .iter()
                .map(|s| self.domain.alphabet().id(s))
                .collect::<Result<_>>()?;
            let out = self
                .rule
                .get(&ids)
                .ok_or_else(|| Error::RuleDomainMismatch(join_symbols(window.iter().map(|s| s.as_str()))))?;
            Ok(self.codomain.name(*out).to_string())
        };
        let center_start = p.origin - a;
        let center_end = p.right_start() + m;
        let mut left = Vec::new();
        for i in center_start - p.left.len() as i64..center_start {
            left.push(out_at(i)?);
        }
        let mut center = Vec::new();
        for i in center_start..center_end {
            center.push(out_at(i)?);
        }
        let mut right = Vec::new();
        for i in center_end..center_end + p.right.len() as i64 {
            right.push(out_at(i)?);
        }
        Ok(LassoPoint::new(left, center, right, center_start)?.canonical())
    }
}

/// The `n`-block refinement of a presentation together with its block map.
pub struct HigherBlock {
    /// Presentation over the alphabet of n-blocks.
    pub presentation: Presentation,
    /// Block words indexed by block symbol id.
    pub blocks: Vec<Vec<u32>>,
    /// The conjugacy onto the refinement: window `[0, n-1]`, block output.
    pub code: SlidingBlockCode,
}

/// Build the higher block presentation whose states are paths of `n - 1`
/// edges and whose edge labels are the n-blocks they read, plus the sliding
/// block conjugacy from the original shift onto it.
pub fn higher_block(p: &Presentation, n: usize) -> Result<HigherBlock> {
    assert!(n >= 1, "block width must be positive");
    let blocks = p.language(n);
    let block_names: Vec<String> = blocks.iter().map(|w| p.alphabet().word_name(w)).collect();
    let block_alphabet = Alphabet::new(block_names)?;
    let block_id: BTreeMap<&[u32], u32> = blocks
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i as u32))
        .collect();

    // states: edge paths of length n - 1, encoded by edge indices
    let mut paths: Vec<Vec<u32>> = if n == 1 {
        (0..p.n_states() as u32).map(|s| vec![s]).collect()
    } else {
        let mut acc: Vec<Vec<u32>> = (0..p.edges().len() as u32).map(|e| vec![e]).collect();
        for _ in 2..n {
            let mut next = Vec::new();
            for path in &acc {
                let last = p.edges()[*path.last().unwrap() as usize];
                for (j, e) in p.edges().iter().enumerate() {
                    if e.src == last.dst {
                        let mut np = path.clone();
                        np.push(j as u32);
                        next.push(np);
                    }
                }
            }
            acc = next;
        }
        acc
    };
    paths.sort();
    let path_id: BTreeMap<&[u32], u32> = paths
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i as u32))
        .collect();

    let path_end = |path: &[u32]| -> u32 {
        if n == 1 {
            path[0]
        } else {
            p.edges()[*path.last().unwrap() as usize].dst
        }
    };
    let path_word = |path: &[u32]| -> Vec<u32> {
        if n == 1 {
            Vec::new()
        } else {
            path.iter().map(|&e| p.edges()[e as usize].sym).collect()
        }
    };

    let mut edges = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        let end = path_end(path);
        for (j, e) in p.edges().iter().enumerate() {
            if e.src != end {
                continue;
            }
            let mut word = path_word(path);
            word.push(e.sym);
            let label = block_id[&word[..]];
            let next_path: Vec<u32> = if n == 1 {
                vec![e.dst]
            } else {
                let mut np: Vec<u32> = path[1..].to_vec();
                np.push(j as u32);
                np
            };
            edges.push((i as u32, label, path_id[&next_path[..]]));
        }
    }
    let names = (0..paths.len()).map(|i| format!("p{i}")).collect();
    let presentation = Presentation::build(block_alphabet.clone(), names, edges)?;
    let code = SlidingBlockCode::from_rule(p.clone(), 0, n - 1, block_alphabet, |w, _| {
        join_symbols(w.iter().copied())
    })?;
    Ok(HigherBlock {
        presentation,
        blocks,
        code,
    })
}

impl SlidingBlockCode {
    /// Presentation of the image shift: relabel the higher block refinement
    /// of the domain through the rule table.
    pub fn image(&self) -> Result<Presentation> {
        let n = self.window_len();
        let hb = higher_block(&self.domain, n)?;
        let edges: Vec<(u32, u32, u32)> = hb
            .presentation
            .edges()
            .iter()
            .map(|e| {
                let block = &hb.blocks[e.sym as usize];
                (e.src, self.rule[block], e.dst)
            })
            .collect();
        Presentation::build(
            self.codomain.clone(),
            hb.presentation.state_names().to_vec(),
            edges,
        )
    }

    /// Split into a higher-block conjugacy and a 1-block code with
    /// `self = one_block ∘ conjugacy` coordinatewise.
    pub fn recode_to_one_block(&self) -> Result<(SlidingBlockCode, SlidingBlockCode)> {
        let n = self.window_len();
        let hb = higher_block(&self.domain, n)?;
        // the conjugacy reads the same window as self, offset by the memory
        let conjugacy = SlidingBlockCode::from_rule(
            self.domain.clone(),
            self.memory,
            self.anticipation,
            hb.presentation.alphabet().clone(),
            |w, _| join_symbols(w.iter().copied()),
        )?;
        let rule: BTreeMap<Vec<u32>, u32> = hb
            .blocks
            .iter()
            .enumerate()
            .map(|(i, block)| (vec![i as u32], self.rule[block]))
            .collect();
        let one_block = SlidingBlockCode::new(
            hb.presentation,
            0,
            0,
            self.codomain.clone(),
            rule,
        )?;
        Ok((conjugacy, one_block))
    }

    /// Compose two codes: `second ∘ first`, defined when the image of the
    /// first is contained in the domain language of the second.
    pub fn compose(second: &SlidingBlockCode, first: &SlidingBlockCode) -> Result<SlidingBlockCode> {
        let image = first.image()?;
        if !language_contained_by_name(&image, &second.domain) {
            return Err(Error::CompositionDomainMismatch);
        }
        let memory = first.memory + second.memory;
        let anticipation = first.anticipation + second.anticipation;
        let inner_width = second.window_len();
        let mut rule = BTreeMap::new();
        for block in first.domain.language(memory + anticipation + 1) {
            let mut inner = Vec::new();
            for w in block.windows(first.window_len()) {
                let mid = first.rule[w];
                let name = first.codomain.name(mid);
                inner.push(second.domain.alphabet().id(name)?);
            }
            debug_assert_eq!(inner.len(), inner_width);
            let out = second
                .rule
                .get(&inner)
                .ok_or(Error::CompositionDomainMismatch)?;
            rule.insert(block, *out);
        }
        SlidingBlockCode::new(
            first.domain.clone(),
            memory,
            anticipation,
            second.codomain.clone(),
            rule,
        )
    }
}

/// Containment of languages where symbols are matched by name and a symbol
/// missing from `b`'s alphabet only matters if `a` can actually read it.
fn language_contained_by_name(a: &Presentation, b: &Presentation) -> bool {
    use crate::bitset::BitSet;
    let sym_map: Vec<Option<u32>> = a
        .alphabet()
        .names()
        .iter()
        .map(|s| b.alphabet().id(s).ok())
        .collect();
    let start = (BitSet::full(a.n_states()), BitSet::full(b.n_states()));
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![start];
    while let Some((sa, sb)) = stack.pop() {
        if !seen.insert((sa.clone(), sb.clone())) {
            continue;
        }
        for sym in a.alphabet().ids() {
            let na = a.step_set(&sa, sym);
            if na.is_empty() {
                continue;
            }
            let nb = match sym_map[sym as usize] {
                Some(t) => b.step_set(&sb, t),
                None => return false,
            };
            if nb.is_empty() {
                return false;
            }
            stack.push((na, nb));
        }
    }
    true
}

/// Exact language equality of two presentations over the same symbol set.
pub fn language_equal(a: &Presentation, b: &Presentation) -> Result<bool> {
    determinize::language_equal(a, b)
}

/// Outcome of the injectivity decision, with a distinct preimage pair
/// sharing an image when injectivity fails.
#[derive(Clone, Debug)]
pub struct InjectivityVerdict {
    pub injective: bool,
    pub witness: Option<(LassoPoint, LassoPoint)>,
}

/// Decide injectivity on the pair automaton of the recoded 1-block code:
/// states are ordered state pairs, transitions are synchronized edge pairs
/// with equal image labels. The code fails to be injective exactly when the
/// essential part of that automaton still contains an edge pair with
/// different domain labels.
pub fn is_injective(code: &SlidingBlockCode) -> Result<InjectivityVerdict> {
    let hb = higher_block(code.domain(), code.window_len())?;
    let rule: BTreeMap<Vec<u32>, u32> = hb
        .blocks
        .iter()
        .enumerate()
        .map(|(i, block)| (vec![i as u32], code.rule_table()[block]))
        .collect();
    let one_block = SlidingBlockCode::new(
        hb.presentation.clone(),
        0,
        0,
        code.codomain_alphabet().clone(),
        rule,
    )?;
    let verdict = one_block_injectivity(&one_block)?;
    match verdict {
        None => Ok(InjectivityVerdict {
            injective: true,
            witness: None,
        }),
        Some((a, b)) => Ok(InjectivityVerdict {
            injective: false,
            witness: Some((decode_blocks(&a, code, &hb)?, decode_blocks(&b, code, &hb)?)),
        }),
    }
}

/// Map a point over block symbols back to the original alphabet by reading
/// the memory-offset component of every block.
fn decode_blocks(
    p: &LassoPoint,
    original: &SlidingBlockCode,
    hb: &HigherBlock,
) -> Result<LassoPoint> {
    let alphabet = hb.presentation.alphabet();
    let take = |names: &[String]| -> Result<Vec<String>> {
        names
            .iter()
            .map(|block| {
                let word = &hb.blocks[alphabet.id(block)? as usize];
                Ok(original
                    .domain()
                    .alphabet()
                    .name(word[original.memory()])
                    .to_string())
            })
            .collect()
    };
    LassoPoint::new(take(&p.left)?, take(&p.center)?, take(&p.right)?, p.origin)
}

fn one_block_injectivity(
    code: &SlidingBlockCode,
) -> Result<Option<(LassoPoint, LassoPoint)>> {
    code.require_one_block()?;
    let g = code.domain();
    let n = g.n_states();
    // synchronized pair edges with equal image labels
    #[derive(Clone, Copy)]
    struct PEdge {
        from: usize,
        to: usize,
        sym_a: u32,
        sym_b: u32,
    }
    let pid = |p: usize, q: usize| p * n + q;
    let mut edges: Vec<PEdge> = Vec::new();
    for ea in g.edges() {
        for eb in g.edges() {
            if code.symbol_image(ea.sym) == code.symbol_image(eb.sym) {
                edges.push(PEdge {
                    from: pid(ea.src as usize, eb.src as usize),
                    to: pid(ea.dst as usize, eb.dst as usize),
                    sym_a: ea.sym,
                    sym_b: eb.sym,
                });
            }
        }
    }
    // trim pair nodes to the essential part
    let mut alive = vec![true; n * n];
    loop {
        let mut has_in = vec![false; n * n];
        let mut has_out = vec![false; n * n];
        for e in &edges {
            if alive[e.from] && alive[e.to] {
                has_out[e.from] = true;
                has_in[e.to] = true;
            }
        }
        let mut changed = false;
        for v in 0..n * n {
            if alive[v] && (!has_in[v] || !has_out[v]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let live_edges: Vec<PEdge> = edges
        .iter()
        .filter(|e| alive[e.from] && alive[e.to])
        .copied()
        .collect();
    let Some(&diff) = live_edges.iter().find(|e| e.sym_a != e.sym_b) else {
        return Ok(None);
    };

    // build a concrete bi-infinite pair path through the differing edge:
    // walk backwards and forwards picking the first live edge until a node
    // repeats, which closes a loop on each side
    let first_pred = |v: usize| -> PEdge {
        *live_edges
            .iter()
            .find(|e| e.to == v)
            .expect("essential node has a predecessor")
    };
    let first_succ = |v: usize| -> PEdge {
        *live_edges
            .iter()
            .find(|e| e.from == v)
            .expect("essential node has a successor")
    };
    let mut back_nodes = vec![diff.from];
    let mut back_edges: Vec<PEdge> = Vec::new();
    let (left_cycle, stem_back) = loop {
        let cur = *back_nodes.last().unwrap();
        let e = first_pred(cur);
        if let Some(pos) = back_nodes.iter().position(|&v| v == e.from) {
            // nodes[pos] .. cur closes a cycle through e
            let mut cycle: Vec<PEdge> = back_edges[pos..].to_vec();
            cycle.push(e);
            cycle.reverse();
            let stem: Vec<PEdge> = back_edges[..pos].to_vec();
            break (cycle, stem);
        }
        back_nodes.push(e.from);
        back_edges.push(e);
    };
    let mut forward_nodes = vec![diff.to];
    let mut forward_edges: Vec<PEdge> = Vec::new();
    let (right_cycle, stem_fwd) = loop {
        let cur = *forward_nodes.last().unwrap();
        let e = first_succ(cur);
        if let Some(pos) = forward_nodes.iter().position(|&v| v == e.to) {
            let mut cycle: Vec<PEdge> = forward_edges[pos..].to_vec();
            cycle.push(e);
            let stem: Vec<PEdge> = forward_edges[..pos].to_vec();
            break (cycle, stem);
        }
        forward_nodes.push(e.to);
        forward_edges.push(e);
    };
    // center: backward stem (reversed), the differing edge, forward stem
    let mut center: Vec<PEdge> = stem_back.into_iter().rev().collect();
    let center_back_len = center.len();
    center.push(diff);
    center.extend(stem_fwd);
    let name = |sym: u32| g.alphabet().name(sym).to_string();
    let build = |pick: &dyn Fn(&PEdge) -> u32| -> LassoPoint {
        LassoPoint::new(
            left_cycle.iter().map(|e| name(pick(e))).collect(),
            center.iter().map(|e| name(pick(e))).collect(),
            right_cycle.iter().map(|e| name(pick(e))).collect(),
            -(center_back_len as i64),
        )
        .expect("cycles are nonempty")
    };
    let a = build(&|e: &PEdge| e.sym_a);
    let b = build(&|e: &PEdge| e.sym_b);
    Ok(Some((a, b)))
}
