//! Run-length-encoded state histories and the history transition machinery.
//!
//! In a quasi-acyclic automaton every node's infinite state sequence is
//! eventually constant, so it compresses to a finite list of (state, count)
//! pairs ending in an infinite block. This module provides that encoding, a
//! concrete oracle that pushes a compressed history through one node of the
//! path, and a symbolic variant that keeps the counts as linear forms over
//! the input counts. The symbolic variant is what lets a counter machine
//! evaluate the history transition with finitely many states: block counts
//! at least as large as the maximum trace length all behave identically, and
//! each input count feeds at most one output count.

use crate::automaton::{max_trace_length, DaStateId, DistributedAutomaton, Pred};
use crate::{Error, Result};
use std::fmt::Debug;
use std::hash::Hash;

/// Number of repetitions of one state block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Count {
    Fin(u64),
    Inf,
}

impl Count {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Count::Fin(n) => Some(*n),
            Count::Inf => None,
        }
    }
}

/// A run-length-encoded, eventually constant infinite sequence: adjacent
/// entries hold distinct states, all finite counts are at least 1, and
/// exactly the last count is infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedSeq<S> {
    entries: Vec<(S, Count)>,
}

impl<S: Clone + Eq> CompressedSeq<S> {
    pub fn new(entries: Vec<(S, Count)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("compressed sequence must be nonempty".into()));
        }
        for (i, (state, count)) in entries.iter().enumerate() {
            let last = i + 1 == entries.len();
            match count {
                Count::Inf if !last => {
                    return Err(Error::Invalid(
                        "only the final block of a compressed sequence may be infinite".into(),
                    ))
                }
                Count::Fin(_) if last => {
                    return Err(Error::Invalid(
                        "the final block of a compressed sequence must be infinite".into(),
                    ))
                }
                Count::Fin(0) => {
                    return Err(Error::Invalid("finite block counts must be positive".into()))
                }
                _ => {}
            }
            if i > 0 && entries[i - 1].0 == *state {
                return Err(Error::Invalid(
                    "adjacent blocks of a compressed sequence must differ".into(),
                ));
            }
        }
        Ok(CompressedSeq { entries })
    }

    /// The constant sequence `s^ω`.
    pub fn constant(s: S) -> Self {
        CompressedSeq {
            entries: vec![(s, Count::Inf)],
        }
    }

    pub fn entries(&self) -> &[(S, Count)] {
        &self.entries
    }

    pub fn tail_state(&self) -> &S {
        &self.entries.last().expect("nonempty").0
    }

    /// Sum of the finite block counts.
    pub fn finite_total(&self) -> u64 {
        self.entries
            .iter()
            .filter_map(|(_, c)| c.finite())
            .sum()
    }

    /// States of the sequence in block order.
    pub fn states(&self) -> impl Iterator<Item = &S> {
        self.entries.iter().map(|(s, _)| s)
    }
}

/// The first `horizon` elements of the infinite sequence `ξ` denotes.
pub fn expand<S: Clone + Eq>(xi: &CompressedSeq<S>, horizon: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(horizon);
    for (state, count) in xi.entries() {
        let take = match count {
            Count::Fin(n) => (*n as usize).min(horizon - out.len()),
            Count::Inf => horizon - out.len(),
        };
        out.extend(std::iter::repeat(state.clone()).take(take));
        if out.len() == horizon {
            break;
        }
    }
    out
}

/// Canonical run-length encoding of `prefix · tail^ω`.
pub fn compress<S: Clone + Eq>(prefix: &[S], tail: S) -> CompressedSeq<S> {
    let mut entries: Vec<(S, Count)> = Vec::new();
    let mut cut = prefix.len();
    while cut > 0 && prefix[cut - 1] == tail {
        cut -= 1; // trailing repetitions of the tail merge into the ω-block
    }
    for s in &prefix[..cut] {
        match entries.last_mut() {
            Some((prev, Count::Fin(n))) if prev == s => *n += 1,
            _ => entries.push((s.clone(), Count::Fin(1))),
        }
    }
    entries.push((tail, Count::Inf));
    CompressedSeq { entries }
}

/// Pushes a compressed predecessor history through the next node by direct
/// simulation: once the input is constant the output follows a trace, so it
/// stabilizes within the maximum trace length.
pub fn history_transition_oracle(
    a: &DistributedAutomaton,
    xi: &CompressedSeq<Pred>,
    q: DaStateId,
) -> Result<CompressedSeq<DaStateId>> {
    let z = max_trace_length(a)?; // also enforces quasi-acyclicity
    let horizon = xi.finite_total() as usize + z + 2;
    let input = expand(xi, horizon);
    let mut states = Vec::with_capacity(horizon + 1);
    states.push(q);
    for &p in &input {
        let cur = *states.last().unwrap();
        states.push(a.step(p, cur)?);
    }
    let tail = *states.last().unwrap();
    Ok(compress(&states[..states.len() - 1], tail))
}

/// A block count of the symbolic history transition: the literal 1, the
/// infinite tail, or a contiguous sum of input counts plus a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymCount {
    One,
    Inf,
    /// `m_first + … + m_last + constant` over 0-based input block indices.
    Form {
        first: usize,
        last: usize,
        constant: i64,
    },
}

/// Output of the symbolic history transition: a maximally compressed
/// skeleton whose states are pairwise distinct and whose counts are
/// `SymCount`s over the input's finite blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicSkeleton {
    pub entries: Vec<(DaStateId, SymCount)>,
}

impl SymbolicSkeleton {
    /// Instantiates the symbolic counts at concrete input counts.
    pub fn eval(&self, input_counts: &[u64]) -> Result<CompressedSeq<DaStateId>> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (state, count) in &self.entries {
            let c = match count {
                SymCount::One => Count::Fin(1),
                SymCount::Inf => Count::Inf,
                SymCount::Form {
                    first,
                    last,
                    constant,
                } => {
                    let sum: i64 = input_counts[*first..=*last]
                        .iter()
                        .map(|&m| m as i64)
                        .sum::<i64>()
                        + constant;
                    if sum < 1 {
                        return Err(Error::Invalid(format!(
                            "symbolic count evaluated to the non-positive value {sum}"
                        )));
                    }
                    Count::Fin(sum as u64)
                }
            };
            entries.push((*state, c));
        }
        CompressedSeq::new(entries)
    }
}

/// Working representation of one output block during unrolling.
#[derive(Debug, Clone, Copy)]
enum RawCount {
    Lit(u64),
    Form { first: usize, last: usize, constant: i64 },
    Inf,
}

fn merge_counts(a: RawCount, b: RawCount) -> Result<RawCount> {
    Ok(match (a, b) {
        (_, RawCount::Inf) | (RawCount::Inf, _) => RawCount::Inf,
        (RawCount::Lit(x), RawCount::Lit(y)) => RawCount::Lit(x + y),
        (RawCount::Lit(x), RawCount::Form { first, last, constant }) => RawCount::Form {
            first,
            last,
            constant: constant + x as i64,
        },
        (RawCount::Form { first, last, constant }, RawCount::Lit(x)) => RawCount::Form {
            first,
            last,
            constant: constant + x as i64,
        },
        (
            RawCount::Form { first, last, constant },
            RawCount::Form {
                first: f2,
                last: l2,
                constant: c2,
            },
        ) => {
            if last + 1 != f2 {
                return Err(Error::Invalid(
                    "merged symbolic counts must absorb contiguous input blocks".into(),
                ));
            }
            RawCount::Form {
                first,
                last: l2,
                constant: constant + c2,
            }
        }
    })
}

/// Symbolic analogue of [`history_transition_oracle`].
///
/// `pred_states` are the input skeleton's states (the finite blocks followed
/// by the infinite one) and `stand_ins` are the concrete values, each in
/// `[1, Z]`, used to drive the unrolling in place of the symbolic counts.
/// Stand-ins equal to `Z` represent every count ≥ `Z`: the output skeleton
/// is the same for all of them.
pub fn symbolic_history_transition(
    a: &DistributedAutomaton,
    pred_states: &[Pred],
    stand_ins: &[u64],
    q: DaStateId,
) -> Result<SymbolicSkeleton> {
    let z = max_trace_length(a)? as u64;
    symbolic_history_transition_with_z(a, z, pred_states, stand_ins, q)
}

/// Variant of [`symbolic_history_transition`] for callers that already hold
/// the maximum trace length, so tight loops skip the diagram rebuild.
pub(crate) fn symbolic_history_transition_with_z(
    a: &DistributedAutomaton,
    z: u64,
    pred_states: &[Pred],
    stand_ins: &[u64],
    q: DaStateId,
) -> Result<SymbolicSkeleton> {
    if pred_states.is_empty() || stand_ins.len() + 1 != pred_states.len() {
        return Err(Error::Precondition(
            "input skeleton needs one more state than it has finite counts".into(),
        ));
    }
    if stand_ins.iter().any(|&m| m == 0 || m > z) {
        return Err(Error::Precondition(format!(
            "stand-in values must lie in [1, {z}]"
        )));
    }

    let mut raw: Vec<(DaStateId, RawCount)> = vec![(q, RawCount::Lit(1))];
    let mut cur = q;
    for (i, (&p, &m)) in pred_states.iter().zip(stand_ins).enumerate() {
        // Iterate δ(p, ·) from the current state: at most m steps, stopping
        // at the first repetition. Quasi-acyclicity makes the repetition
        // permanent for the rest of the block.
        let mut fresh = Vec::new();
        let mut s = cur;
        let mut stabilized = false;
        for _ in 0..m {
            let s2 = a.step(p, s)?;
            if s2 == s {
                stabilized = true;
                break;
            }
            fresh.push(s2);
            s = s2;
        }
        if stabilized {
            let d = fresh.len().max(1); // d = 1 when the block never moves
            for &f in fresh.iter().take(fresh.len().saturating_sub(1)) {
                raw.push((f, RawCount::Lit(1)));
            }
            let repeated = *fresh.last().unwrap_or(&cur);
            raw.push((
                repeated,
                RawCount::Form {
                    first: i,
                    last: i,
                    constant: -(d as i64 - 1),
                },
            ));
        } else {
            // All m emitted states are distinct; the stand-in is exact here
            // because stabilization within Z steps is guaranteed otherwise.
            for &f in &fresh {
                raw.push((f, RawCount::Lit(1)));
            }
        }
        cur = s;
    }
    // Infinite tail block: iterate to the guaranteed fixpoint.
    let p = *pred_states.last().unwrap();
    let mut guard = 0;
    loop {
        let s2 = a.step(p, cur)?;
        if s2 == cur {
            break;
        }
        raw.push((s2, RawCount::Lit(1)));
        cur = s2;
        guard += 1;
        if guard > z + 1 {
            return Err(Error::Invalid(
                "history failed to stabilize within the maximum trace length".into(),
            ));
        }
    }
    // The last raw entry is the fixpoint state; make its count infinite.
    let last = raw.last_mut().unwrap();
    last.1 = RawCount::Inf;

    // Maximal compression: merge adjacent equal states, summing counts.
    let mut merged: Vec<(DaStateId, RawCount)> = Vec::with_capacity(raw.len());
    for (s, c) in raw {
        match merged.last_mut() {
            Some((prev, pc)) if *prev == s => *pc = merge_counts(*pc, c)?,
            _ => merged.push((s, c)),
        }
    }

    let mut entries = Vec::with_capacity(merged.len());
    for (idx, (s, c)) in merged.iter().enumerate() {
        let count = match c {
            RawCount::Inf => {
                if idx + 1 != merged.len() {
                    return Err(Error::Invalid(
                        "infinite block must come last in the derived skeleton".into(),
                    ));
                }
                SymCount::Inf
            }
            RawCount::Lit(1) => SymCount::One,
            RawCount::Lit(n) => {
                return Err(Error::Invalid(format!(
                    "derived skeleton has a literal count {n} other than 1"
                )))
            }
            RawCount::Form { first, last, constant } => {
                if !(-(z as i64) < *constant && *constant <= 1) {
                    return Err(Error::Invalid(format!(
                        "derived count constant {constant} falls outside (-{z}, 1]"
                    )));
                }
                SymCount::Form {
                    first: *first,
                    last: *last,
                    constant: *constant,
                }
            }
        };
        entries.push((*s, count));
    }
    // Pairwise distinct states: repetition here would mean the compressed
    // form is not maximal.
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if entries[i].0 == entries[j].0 {
                return Err(Error::Invalid(
                    "derived skeleton repeats a state; compression is not maximal".into(),
                ));
            }
        }
    }
    Ok(SymbolicSkeleton { entries })
}

/// Checks the structural guarantees of the compressed transition on one
/// instance: counts are 1, ∞, or disjoint contiguous sums with constant in
/// `(-Z, 1]`; instantiating the symbolic output reproduces the concrete
/// oracle; and raising capped counts from the threshold `Z` to `Z + 7`
/// changes nothing but the evaluated linear forms.
pub fn verify_lemma_structure(
    a: &DistributedAutomaton,
    xi: &CompressedSeq<Pred>,
    q: DaStateId,
) -> Result<bool> {
    let z = max_trace_length(a)? as u64;
    let states: Vec<Pred> = xi.states().copied().collect();
    let true_counts: Vec<u64> = xi
        .entries()
        .iter()
        .filter_map(|(_, c)| c.finite())
        .collect();
    let stand_ins: Vec<u64> = true_counts.iter().map(|&m| m.min(z)).collect();

    let skeleton = symbolic_history_transition(a, &states, &stand_ins, q)?;

    // Statement 1: block ranges pairwise disjoint (contiguity and the
    // constant range were enforced during construction).
    let mut used = vec![false; stand_ins.len()];
    for (_, count) in &skeleton.entries {
        if let SymCount::Form { first, last, .. } = count {
            for slot in used.iter_mut().take(*last + 1).skip(*first) {
                if *slot {
                    return Ok(false);
                }
                *slot = true;
            }
        }
    }

    // Instantiation at the true counts must reproduce the oracle.
    if skeleton.eval(&true_counts)? != history_transition_oracle(a, xi, q)? {
        return Ok(false);
    }

    // Statement 2: counts at the threshold stand for all larger values.
    let bumped: Vec<u64> = true_counts
        .iter()
        .map(|&m| if m >= z { z + 7 } else { m })
        .collect();
    if bumped != true_counts {
        let bumped_xi = CompressedSeq::new(
            states
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    (
                        s,
                        if i < bumped.len() {
                            Count::Fin(bumped[i])
                        } else {
                            Count::Inf
                        },
                    )
                })
                .collect(),
        )?;
        if skeleton.eval(&bumped)? != history_transition_oracle(a, &bumped_xi, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{DaRule, DistributedAutomaton, PredPat, SelfPat};
    use crate::foundations::Alphabet;
    use std::collections::BTreeSet;

    #[test]
    fn expansion_unrolls_blocks() {
        let xi = CompressedSeq::new(vec![
            ('q', Count::Fin(2)),
            ('p', Count::Inf),
        ])
        .unwrap();
        assert_eq!(expand(&xi, 4), vec!['q', 'q', 'p', 'p']);
        let constant = CompressedSeq::constant('p');
        assert_eq!(expand(&constant, 3), vec!['p', 'p', 'p']);
        let abc = CompressedSeq::new(vec![
            ('a', Count::Fin(1)),
            ('b', Count::Fin(1)),
            ('c', Count::Inf),
        ])
        .unwrap();
        assert_eq!(expand(&abc, 2), vec!['a', 'b']);
    }

    #[test]
    fn compression_is_canonical() {
        let xi = compress(&['q', 'q', 'p'], 'p');
        assert_eq!(
            xi.entries(),
            &[('q', Count::Fin(2)), ('p', Count::Inf)]
        );
        assert_eq!(compress::<char>(&[], 'p').entries(), &[('p', Count::Inf)]);
        // Adjacent-distinct only; states may repeat non-adjacently.
        let aba = compress(&['a', 'b', 'a'], 'a');
        assert_eq!(
            aba.entries(),
            &[
                ('a', Count::Fin(1)),
                ('b', Count::Fin(1)),
                ('a', Count::Inf)
            ]
        );
    }

    #[test]
    fn expand_compress_round_trip() {
        let xi = CompressedSeq::new(vec![
            ('a', Count::Fin(3)),
            ('b', Count::Fin(1)),
            ('c', Count::Inf),
        ])
        .unwrap();
        let horizon = xi.finite_total() as usize + 4;
        let expanded = expand(&xi, horizon);
        assert_eq!(compress(&expanded[..horizon - 1], 'c'), xi);
    }

    #[test]
    fn rejects_malformed_sequences() {
        assert!(CompressedSeq::<char>::new(vec![]).is_err());
        assert!(CompressedSeq::new(vec![('a', Count::Fin(1))]).is_err());
        assert!(CompressedSeq::new(vec![('a', Count::Inf), ('b', Count::Inf)]).is_err());
        assert!(
            CompressedSeq::new(vec![('a', Count::Fin(0)), ('b', Count::Inf)]).is_err()
        );
        assert!(
            CompressedSeq::new(vec![('a', Count::Fin(1)), ('a', Count::Inf)]).is_err()
        );
    }

    /// A three-state chain q0 → q1 → q2 driven by the predecessor: on view
    /// `none` the node advances one step, on anything else it stays put.
    fn chain_da() -> DistributedAutomaton {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let mut rules = vec![
            DaRule {
                pred: PredPat::Is(None),
                own: SelfPat::Is(DaStateId(0)),
                to: DaStateId(1),
            },
            DaRule {
                pred: PredPat::Is(None),
                own: SelfPat::Is(DaStateId(1)),
                to: DaStateId(2),
            },
            DaRule {
                pred: PredPat::Is(None),
                own: SelfPat::Is(DaStateId(2)),
                to: DaStateId(2),
            },
        ];
        for q in 0..3 {
            rules.push(DaRule {
                pred: PredPat::Any,
                own: SelfPat::Is(DaStateId(q)),
                to: DaStateId(q),
            });
        }
        DistributedAutomaton::new(
            alphabet,
            vec!["q0".into(), "q1".into(), "q2".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            rules,
            None,
            "chain3",
        )
    }

    #[test]
    fn oracle_on_constant_input_follows_the_none_trace() {
        let a = chain_da();
        let xi = CompressedSeq::constant(None);
        let out = history_transition_oracle(&a, &xi, DaStateId(0)).unwrap();
        assert_eq!(
            out.entries(),
            &[
                (DaStateId(0), Count::Fin(1)),
                (DaStateId(1), Count::Fin(1)),
                (DaStateId(2), Count::Inf),
            ]
        );
        // Immediate fixpoint when the start state is already looping.
        let fix = history_transition_oracle(&a, &xi, DaStateId(2)).unwrap();
        assert_eq!(fix.entries(), &[(DaStateId(2), Count::Inf)]);
    }

    #[test]
    fn oracle_matches_naive_unrolling() {
        let a = chain_da();
        let xi = CompressedSeq::new(vec![
            (Some(DaStateId(0)), Count::Fin(3)),
            (None, Count::Fin(2)),
            (Some(DaStateId(1)), Count::Inf),
        ])
        .unwrap();
        let out = history_transition_oracle(&a, &xi, DaStateId(0)).unwrap();
        let horizon = 50;
        let input = expand(&xi, horizon);
        let mut naive = vec![DaStateId(0)];
        for &p in &input[..horizon - 1] {
            let cur = *naive.last().unwrap();
            naive.push(a.step(p, cur).unwrap());
        }
        assert_eq!(expand(&out, horizon), naive);
    }

    #[test]
    fn symbolic_structure_on_a_two_block_input() {
        // Input (none)^m · q0^ω into start state q0: the none-blocks walk the
        // chain, so the count of the final state is m - 1 plus the leading 1.
        let a = chain_da();
        let skeleton = symbolic_history_transition(
            &a,
            &[None, Some(DaStateId(0))],
            &[3],
            DaStateId(0),
        )
        .unwrap();
        assert_eq!(
            skeleton.entries,
            vec![
                (DaStateId(0), SymCount::One),
                (DaStateId(1), SymCount::One),
                (
                    DaStateId(2),
                    SymCount::Form {
                        first: 0,
                        last: 0,
                        constant: -1
                    }
                ),
            ]
        );
        let inst = skeleton.eval(&[3]).unwrap();
        let xi = CompressedSeq::new(vec![
            (None, Count::Fin(3)),
            (Some(DaStateId(0)), Count::Inf),
        ])
        .unwrap();
        assert_eq!(inst, history_transition_oracle(&a, &xi, DaStateId(0)).unwrap());
    }

    #[test]
    fn lemma_structure_holds_on_the_chain() {
        let a = chain_da();
        let xi = CompressedSeq::new(vec![
            (Some(DaStateId(0)), Count::Fin(4)),
            (None, Count::Fin(7)),
            (Some(DaStateId(2)), Count::Inf),
        ])
        .unwrap();
        assert!(verify_lemma_structure(&a, &xi, DaStateId(0)).unwrap());
        let trivially = CompressedSeq::constant(None);
        assert!(verify_lemma_structure(&a, &trivially, DaStateId(1)).unwrap());
    }
}
