//! Quasi-acyclic automata to copyless counter machines.
//!
//! After reading i symbols the machine's memory configuration represents
//! the compressed state history of the i-th node: the finite-state part is
//! a skeleton of at most Z pairwise-distinct automaton states whose slots
//! say where each block count lives (the literal 1 for non-looping states, a
//! counter for looping ones, ∞ for the final block), and the counters hold
//! the actual repetition counts. Each transition instantiates the skeleton
//! at the truncated counter values, pushes it through the symbolic history
//! transition, re-binds the looping states of the result to fresh counters,
//! and emits the copyless update given by the derived linear forms. Counts
//! at or above Z all produce the same skeleton, so the finite lookup is
//! exact.

use super::{DeviceFacts, TranslationCertificate};
use crate::automaton::{
    build_state_diagram, max_loops_per_trace, max_trace_length, DistributedAutomaton, Pred,
};
use crate::history::{symbolic_history_transition_with_z, SymCount};
use crate::machine::{
    CounterExpr, CounterId, CounterMachine, GuardAtom, Rule, StateId, Update,
};
use crate::{state_cap, Error, Result};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    One,
    Ctr(u32),
    Inf,
}

type Skel = Vec<(Pred, Slot)>;

struct Interner {
    skels: Vec<Skel>,
    index: HashMap<Skel, u32>,
    cap: usize,
}

impl Interner {
    fn intern(&mut self, s: Skel) -> Result<u32> {
        if let Some(&i) = self.index.get(&s) {
            return Ok(i);
        }
        if self.skels.len() >= self.cap {
            return Err(Error::ResourceExceeded {
                cap: self.cap,
                context: format!(
                    "history-skeleton closure ({} machine states so far)",
                    self.skels.len()
                ),
            });
        }
        let i = self.skels.len() as u32;
        self.skels.push(s.clone());
        self.index.insert(s, i);
        Ok(i)
    }
}

pub fn da_to_copyless(
    a: &DistributedAutomaton,
) -> Result<(CounterMachine, TranslationCertificate)> {
    let z = max_trace_length(a)?; // enforces quasi-acyclicity
    let loops = max_loops_per_trace(a)?;
    let ell = loops - 1;
    let looping = build_state_diagram(a)?.looping;
    let cap = state_cap();

    let mut interner = Interner {
        skels: Vec::new(),
        index: HashMap::new(),
        cap,
    };
    let init_id = interner.intern(vec![(None, Slot::Inf)])?;

    let mut visited: HashSet<(u32, Vec<u64>)> = HashSet::new();
    let mut queue: VecDeque<(u32, Vec<u64>)> = VecDeque::new();
    visited.insert((init_id, Vec::new()));
    queue.push_back((init_id, Vec::new()));

    let mut rules: Vec<Rule> = Vec::new();
    let mut items = 0usize;
    let item_cap = cap.saturating_mul(64);

    while let Some((skel_id, values)) = queue.pop_front() {
        items += 1;
        if items > item_cap {
            return Err(Error::ResourceExceeded {
                cap,
                context: format!(
                    "history-skeleton closure ({} machine states, {items} guard items, {} entries)",
                    interner.skels.len(),
                    rules.len()
                ),
            });
        }
        let skel = interner.skels[skel_id as usize].clone();
        let pred_states: Vec<Pred> = skel.iter().map(|(p, _)| *p).collect();

        // Stand-ins for the finite blocks and the exact guard this entry is
        // keyed on; counters not bound in this skeleton stay wildcards.
        let mut stand_ins: Vec<u64> = Vec::with_capacity(skel.len() - 1);
        let mut guard: Vec<GuardAtom> = vec![None; ell];
        {
            let mut vi = 0;
            for (_, slot) in skel.iter().take(skel.len() - 1) {
                match slot {
                    Slot::One => stand_ins.push(1),
                    Slot::Ctr(c) => {
                        let v = values[vi];
                        vi += 1;
                        stand_ins.push(v);
                        guard[*c as usize] = Some(v as i64);
                    }
                    Slot::Inf => unreachable!("only the final slot is infinite"),
                }
            }
        }

        for sym in a.alphabet.symbols() {
            let derived = symbolic_history_transition_with_z(
                a,
                z as u64,
                &pred_states,
                &stand_ins,
                a.init_state(sym),
            )?;
            let n = derived.entries.len();
            let mut used = vec![false; ell];
            let mut out_skel: Skel = Vec::with_capacity(n);
            let mut exprs = vec![CounterExpr::constant(0); ell];
            let mut value_sets: Vec<Vec<u64>> = Vec::new();
            for (j, (state, count)) in derived.entries.iter().enumerate() {
                if j + 1 == n {
                    out_skel.push((Some(*state), Slot::Inf));
                    continue;
                }
                if !looping[state.0 as usize] {
                    if !matches!(count, SymCount::One) {
                        return Err(Error::Invalid(
                            "non-looping state repeated in a derived history".into(),
                        ));
                    }
                    out_skel.push((Some(*state), Slot::One));
                    continue;
                }
                // Looping states take the lowest free counter, left to right.
                let c = (0..ell).find(|&c| !used[c]).ok_or_else(|| {
                    Error::Invalid("derived history binds more looping states than counters".into())
                })?;
                used[c] = true;
                out_skel.push((Some(*state), Slot::Ctr(c as u32)));
                match count {
                    SymCount::One => {
                        exprs[c] = CounterExpr::constant(1);
                        value_sets.push(vec![1]);
                    }
                    SymCount::Form {
                        first,
                        last,
                        constant,
                    } => {
                        let mut vars = Vec::new();
                        let mut folded = *constant;
                        let mut raw = *constant;
                        let mut capped = false;
                        for pos in *first..=*last {
                            match skel[pos].1 {
                                Slot::One => {
                                    folded += 1;
                                    raw += 1;
                                }
                                Slot::Ctr(cin) => {
                                    vars.push(CounterId(cin));
                                    raw += stand_ins[pos] as i64;
                                    if stand_ins[pos] == z as u64 {
                                        capped = true;
                                    }
                                }
                                Slot::Inf => unreachable!(),
                            }
                        }
                        exprs[c] = CounterExpr::new(vars, folded);
                        if raw < 1 {
                            return Err(Error::Invalid(
                                "derived block count evaluated to a non-positive value".into(),
                            ));
                        }
                        // The stored count is raw when every input was seen
                        // exactly; a capped input stands for all larger
                        // values, so the truncated successor ranges up to Z.
                        let lo = (raw as u64).min(z as u64);
                        let hi = if capped { z as u64 } else { lo };
                        value_sets.push((lo..=hi).collect());
                    }
                    SymCount::Inf => unreachable!("only the final block is infinite"),
                }
            }
            let to_id = interner.intern(out_skel)?;
            rules.push(Rule {
                from: StateId(skel_id),
                guard: guard.clone(),
                symbol: sym,
                to: StateId(to_id),
                update: Update::new(exprs),
            });
            // Successor work items: one per combination of stored counts.
            let mut picks = vec![0usize; value_sets.len()];
            loop {
                let combo: Vec<u64> = picks
                    .iter()
                    .zip(&value_sets)
                    .map(|(&p, set)| set[p])
                    .collect();
                if visited.insert((to_id, combo.clone())) {
                    queue.push_back((to_id, combo));
                }
                let mut i = 0;
                loop {
                    if i == picks.len() {
                        break;
                    }
                    picks[i] += 1;
                    if picks[i] < value_sets[i].len() {
                        break;
                    }
                    picks[i] = 0;
                    i += 1;
                }
                if i == picks.len() {
                    break;
                }
            }
        }
    }

    // Assemble the machine.
    let slot_name = |slot: &Slot| match slot {
        Slot::One => "1".to_string(),
        Slot::Inf => "∞".to_string(),
        Slot::Ctr(c) => format!("c{c}"),
    };
    let mut state_names: Vec<String> = interner
        .skels
        .iter()
        .map(|skel| {
            let parts: Vec<String> = skel
                .iter()
                .map(|(p, slot)| {
                    let state = match p {
                        None => "·".to_string(),
                        Some(q) => a.state_names()[q.0 as usize].clone(),
                    };
                    format!("{state}:{}", slot_name(slot))
                })
                .collect();
            format!("⟨{}⟩", parts.join(" "))
        })
        .collect();
    let accepting: BTreeSet<StateId> = interner
        .skels
        .iter()
        .enumerate()
        .filter(|(_, skel)| {
            skel.iter()
                .any(|(p, _)| p.map_or(false, |q| a.is_accepting(q)))
        })
        .map(|(i, _)| StateId(i as u32))
        .collect();
    let counters: Vec<String> = (0..ell).map(|c| format!("c{c}")).collect();
    let default = if ell > 0 {
        let dead = StateId(state_names.len() as u32);
        state_names.push("dead".into());
        Some((dead, Update::new(vec![CounterExpr::constant(0); ell])))
    } else {
        None
    };

    let mut out = CounterMachine::new(
        a.alphabet.clone(),
        state_names,
        counters,
        StateId(init_id),
        z as i64,
        accepting,
        rules,
        default,
        a.name.clone(),
    );
    out.passes = a.passes.clone();
    out.passes.push("da-to-cm".into());

    let certificate = TranslationCertificate {
        pass: "da-to-cm".into(),
        input: DeviceFacts::of_automaton(a)?,
        output: DeviceFacts::of_machine(&out),
        claims: vec![
            "copyless".into(),
            format!("counters = loops per trace - 1 = {ell}"),
            format!("access = maximum trace length = {z}"),
            "language preserved".into(),
        ],
    };
    Ok((out, certificate))
}
