//! Access reduction: an equivalent machine that reads its counters only
//! through the window [-1, 1].
//!
//! General machines distribute each counter over `r` components that always
//! stay within one of each other, with the remainder kept in finite-state
//! memory; the truncated value of the original counter is reconstructed
//! from the signs of the first and last component alone. Sumless machines
//! take a shortcut: after the sign-tracking normalization their counters
//! are never negative, so only the last component is ever read and a single
//! counter storing the value divided by `r` suffices.

use super::modular::translate_expression_mod;
use super::{make_nonnegative, DeviceFacts, TranslationCertificate};
use crate::machine::{
    is_copyless, is_sumless, validate_machine, CounterExpr, CounterId, CounterMachine, GuardAtom,
    Rule, StateId, Update,
};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// Which construction produced the 1-access machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessReductionPath {
    /// `k` counters storing the original value divided by `r`.
    Sumless,
    /// `k·r` component counters.
    General,
}

pub fn reduce_access(
    m: &CounterMachine,
) -> Result<(CounterMachine, TranslationCertificate, AccessReductionPath)> {
    let diags = validate_machine(m);
    if !diags.is_empty() {
        return Err(Error::Precondition(format!(
            "input machine is not well-formed: {}",
            diags[0]
        )));
    }
    if is_sumless(m) {
        reduce_sumless(m)
    } else {
        reduce_general(m)
    }
}

/// Interned (state, remainder map) pairs used by both constructions.
struct RemainderStates {
    states: Vec<(StateId, Vec<i64>)>,
    index: HashMap<(StateId, Vec<i64>), StateId>,
}

impl RemainderStates {
    fn new() -> Self {
        RemainderStates {
            states: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, q: StateId, rem: Vec<i64>) -> StateId {
        if let Some(&id) = self.index.get(&(q, rem.clone())) {
            return id;
        }
        let id = StateId(self.states.len() as u32);
        self.states.push((q, rem.clone()));
        self.index.insert((q, rem), id);
        id
    }

    fn names(&self, base: &CounterMachine) -> Vec<String> {
        self.states
            .iter()
            .map(|(q, rem)| {
                let digits: Vec<String> = rem.iter().map(|d| d.to_string()).collect();
                format!("{}{{{}}}", base.state_names()[q.0 as usize], digits.join(""))
            })
            .collect()
    }
}

fn reduce_sumless(
    m: &CounterMachine,
) -> Result<(CounterMachine, TranslationCertificate, AccessReductionPath)> {
    let (nn, _) = make_nonnegative(m)?;
    let k = nn.counter_count();
    let r = nn.access();

    // Component names stay the plain counter names: only the last component
    // of each distributed tuple is kept, holding ⌊value / r⌋.
    let mut interned = RemainderStates::new();
    let initial = interned.intern(nn.initial(), vec![0; k]);
    let mut rules = Vec::new();
    let mut processed = 0;

    let mut stored_patterns = Vec::new();
    {
        // Nonnegative counters: the kept component is only ever 0 or 1 when
        // truncated. Negative keys are junk and fall to the sink default.
        let mut cur = vec![0i64; k];
        loop {
            stored_patterns.push(cur.clone());
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                cur[i] += 1;
                if cur[i] <= 1 {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }

    while processed < interned.states.len() {
        let from = StateId(processed as u32);
        let (q, rem) = interned.states[processed].clone();
        processed += 1;
        let alpha = |x: CounterId| rem[x.0 as usize];
        for sym in nn.alphabet.symbols() {
            for stored in &stored_patterns {
                // Reconstruct the truncated view of the represented values.
                let key: Vec<i64> = (0..k)
                    .map(|x| if stored[x] == 1 { r } else { rem[x] })
                    .collect();
                let (to, update) = nn.resolve(q, &key, sym)?;
                let mut exprs = Vec::with_capacity(k);
                let mut rem2 = Vec::with_capacity(k);
                for x in 0..k {
                    let enc = translate_expression_mod(
                        update.expr(CounterId(x as u32)),
                        r,
                        &alpha,
                        // Components of counter y are notionally y·r + i; only
                        // index r-1 survives below, mapped back onto y itself.
                        &|y, i| CounterId(y.0 * r as u32 + i as u32),
                    )?;
                    let last = &enc.components[r as usize - 1];
                    let vars: Vec<CounterId> = last
                        .vars()
                        .iter()
                        .map(|v| {
                            debug_assert_eq!(v.0 % r as u32, r as u32 - 1);
                            CounterId(v.0 / r as u32)
                        })
                        .collect();
                    exprs.push(CounterExpr::new(vars, last.constant_part()));
                    rem2.push(enc.remainder);
                }
                let target = interned.intern(to, rem2);
                rules.push(Rule {
                    from,
                    guard: stored.iter().map(|&v| Some(v)).collect(),
                    symbol: sym,
                    to: target,
                    update: Update::new(exprs),
                });
            }
        }
    }

    let mut state_names = interned.names(&nn);
    let dead = StateId(state_names.len() as u32);
    state_names.push("dead".into());
    let accepting: BTreeSet<StateId> = interned
        .states
        .iter()
        .enumerate()
        .filter(|(_, (q, _))| nn.is_accepting(*q))
        .map(|(i, _)| StateId(i as u32))
        .collect();

    let mut out = CounterMachine::new(
        nn.alphabet.clone(),
        state_names,
        nn.counter_names().to_vec(),
        initial,
        1,
        accepting,
        rules,
        Some((dead, Update::new(vec![CounterExpr::constant(0); k]))),
        m.name.clone(),
    );
    out.passes = m.passes.clone();
    out.passes.push("reduce-access".into());

    let certificate = TranslationCertificate {
        pass: "reduce-access".into(),
        input: DeviceFacts::of_machine(m),
        output: DeviceFacts::of_machine(&out),
        claims: vec![
            "sumless fast path".into(),
            format!("counters = {k}"),
            "access = 1".into(),
            "sumless".into(),
            "language preserved".into(),
        ],
    };
    Ok((out, certificate, AccessReductionPath::Sumless))
}

fn reduce_general(
    m: &CounterMachine,
) -> Result<(CounterMachine, TranslationCertificate, AccessReductionPath)> {
    let k = m.counter_count();
    let r = m.access();
    let components = k * r as usize;
    let component_id = |x: CounterId, i: usize| CounterId(x.0 * r as u32 + i as u32);

    let mut counter_names = Vec::with_capacity(components);
    for x in 0..k {
        for i in 0..r {
            counter_names.push(format!("{}_{i}", m.counter_names()[x]));
        }
    }

    // Guard patterns reading only the first and last component of each
    // distributed counter: with remainder α(x) in state, the original
    // truncated value is one of r, α(x), α(x) - r, or -r.
    let patterns_for = |alpha_x: i64| -> Vec<(Vec<(usize, i64)>, i64)> {
        if r == 1 {
            return vec![
                (vec![(0, 1)], 1),
                (vec![(0, 0)], 0),
                (vec![(0, -1)], -1),
            ];
        }
        let last = (r - 1) as usize;
        vec![
            (vec![(last, 1)], r),
            (vec![(last, 0)], alpha_x),
            (vec![(last, -1), (0, 0)], alpha_x - r),
            (vec![(last, -1), (0, -1)], -r),
        ]
    };

    let mut interned = RemainderStates::new();
    let initial = interned.intern(m.initial(), vec![0; k]);
    let mut rules = Vec::new();
    let mut processed = 0;

    while processed < interned.states.len() {
        let from = StateId(processed as u32);
        let (q, rem) = interned.states[processed].clone();
        processed += 1;
        let alpha = |x: CounterId| rem[x.0 as usize];
        for sym in m.alphabet.symbols() {
            // Cross product of the per-counter window patterns.
            let per_counter: Vec<Vec<(Vec<(usize, i64)>, i64)>> =
                (0..k).map(|x| patterns_for(rem[x])).collect();
            let mut picks = vec![0usize; k];
            loop {
                let mut guard: Vec<GuardAtom> = vec![None; components];
                let mut key = Vec::with_capacity(k);
                for x in 0..k {
                    let (atoms, value) = &per_counter[x][picks[x]];
                    for &(i, v) in atoms {
                        guard[component_id(CounterId(x as u32), i).0 as usize] = Some(v);
                    }
                    key.push(*value);
                }
                let (to, update) = m.resolve(q, &key, sym)?;
                let mut exprs = vec![CounterExpr::constant(0); components];
                let mut rem2 = Vec::with_capacity(k);
                for x in 0..k {
                    let enc = translate_expression_mod(
                        update.expr(CounterId(x as u32)),
                        r,
                        &alpha,
                        &component_id,
                    )?;
                    for (i, e) in enc.components.iter().enumerate() {
                        exprs[component_id(CounterId(x as u32), i).0 as usize] = e.clone();
                    }
                    rem2.push(enc.remainder);
                }
                let target = interned.intern(to, rem2);
                rules.push(Rule {
                    from,
                    guard,
                    symbol: sym,
                    to: target,
                    update: Update::new(exprs),
                });
                let mut x = k;
                loop {
                    if x == 0 {
                        break;
                    }
                    x -= 1;
                    picks[x] += 1;
                    if picks[x] < per_counter[x].len() {
                        break;
                    }
                    picks[x] = 0;
                    if x == 0 {
                        break;
                    }
                }
                if picks.iter().all(|&p| p == 0) {
                    break;
                }
            }
        }
    }

    let mut state_names = interned.names(m);
    let dead = StateId(state_names.len() as u32);
    state_names.push("dead".into());
    let accepting: BTreeSet<StateId> = interned
        .states
        .iter()
        .enumerate()
        .filter(|(_, (q, _))| m.is_accepting(*q))
        .map(|(i, _)| StateId(i as u32))
        .collect();

    let mut out = CounterMachine::new(
        m.alphabet.clone(),
        state_names,
        counter_names,
        initial,
        1,
        accepting,
        rules,
        Some((
            dead,
            Update::new(vec![CounterExpr::constant(0); components]),
        )),
        m.name.clone(),
    );
    out.passes = m.passes.clone();
    out.passes.push("reduce-access".into());

    let certificate = TranslationCertificate {
        pass: "reduce-access".into(),
        input: DeviceFacts::of_machine(m),
        output: DeviceFacts::of_machine(&out),
        claims: vec![
            "general component path".into(),
            format!("counters = {components}"),
            "access = 1".into(),
            format!(
                "copyless preserved: {}",
                is_copyless(m) == is_copyless(&out) || is_copyless(&out)
            ),
            "language preserved".into(),
        ],
    };
    Ok((out, certificate, AccessReductionPath::General))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{example_cm, toy_devices};
    use crate::foundations::enumerate_words;
    use crate::machine::machine_accepts;

    #[test]
    fn sumless_path_keeps_the_counter_count() {
        let m = toy_devices().access3_cm;
        let (out, _, path) = reduce_access(&m).unwrap();
        assert_eq!(path, AccessReductionPath::Sumless);
        assert_eq!(out.counter_count(), 1);
        assert_eq!(out.access(), 1);
        assert!(is_sumless(&out));
        assert!(validate_machine(&out).is_empty());
        for w in enumerate_words(&m.alphabet, 6) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap(),
                "word {}",
                w.display(&m.alphabet)
            );
        }
    }

    #[test]
    fn general_path_keeps_copylessness() {
        let m = toy_devices().copyless_not_sumless_cm;
        let (out, _, path) = reduce_access(&m).unwrap();
        assert_eq!(path, AccessReductionPath::General);
        assert_eq!(out.counter_count(), 3);
        assert_eq!(out.access(), 1);
        assert!(is_copyless(&out));
        for w in enumerate_words(&m.alphabet, 5) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap()
            );
        }
    }

    #[test]
    fn unit_access_input_is_handled_uniformly() {
        let m = example_cm();
        let (out, _, path) = reduce_access(&m).unwrap();
        assert_eq!(path, AccessReductionPath::Sumless);
        assert_eq!(out.access(), 1);
        for w in enumerate_words(&m.alphabet, 5) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap()
            );
        }
    }

    #[test]
    fn general_path_on_wider_access() {
        // Exercise the (†) reconstruction with negative values: a machine
        // over {a, b} that adds 2 on a, subtracts 2 on b, and accepts when
        // the counter is exactly 0 or ±1 away from zero at the last step.
        use crate::foundations::Alphabet;
        use std::collections::BTreeSet;
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let x = CounterId(0);
        let near = StateId(0);
        let far = StateId(1);
        let mut rules = Vec::new();
        for from in [near, far] {
            for v in -2..=2i64 {
                for (sym, delta) in [(0u32, 2i64), (1, -2)] {
                    let after = v + delta; // truncated estimate only for target pick
                    rules.push(Rule {
                        from,
                        guard: vec![Some(v)],
                        symbol: crate::foundations::Sym(sym),
                        to: if after.abs() <= 1 { near } else { far },
                        update: Update::new(vec![
                            // x := x + x + delta makes this genuinely summing.
                            CounterExpr::new(vec![x, x], delta),
                        ]),
                    });
                }
            }
        }
        let m = CounterMachine::new(
            alphabet,
            vec!["near".into(), "far".into()],
            vec!["x".into()],
            near,
            2,
            BTreeSet::from([near]),
            rules,
            None,
            "doubling",
        );
        assert!(!is_sumless(&m));
        assert!(!is_copyless(&m));
        let (out, _, path) = reduce_access(&m).unwrap();
        assert_eq!(path, AccessReductionPath::General);
        assert_eq!(out.access(), 1);
        assert_eq!(out.counter_count(), 2);
        for w in enumerate_words(&m.alphabet, 6) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap(),
                "word {}",
                w.display(&m.alphabet)
            );
        }
    }
}
