//! Sign-tracking normalization: an equivalent sumless machine whose
//! counters only ever hold absolute values, with the signs remembered in
//! finite-state memory. Sumlessness matters because the machine never has
//! to add a positive and a negative counter.

use super::{DeviceFacts, TranslationCertificate};
use crate::machine::{
    is_sumless, validate_machine, CounterExpr, CounterId, CounterMachine, Rule, StateId, Update,
};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

pub fn make_nonnegative(m: &CounterMachine) -> Result<(CounterMachine, TranslationCertificate)> {
    if !is_sumless(m) {
        return Err(Error::Precondition(
            "sign tracking needs a sumless machine".into(),
        ));
    }
    let diags = validate_machine(m);
    if !diags.is_empty() {
        return Err(Error::Precondition(format!(
            "input machine is not well-formed: {}",
            diags[0]
        )));
    }
    let k = m.counter_count();
    if k > 20 {
        return Err(Error::ResourceExceeded {
            cap: 1 << 20,
            context: format!("2^{k} sign assignments"),
        });
    }
    let r = m.access();

    // Output states are reachable (state, sign map) pairs; a sign bit set in
    // the mask means the stored value represents a negative number.
    let sign_name = |mask: u32| -> String {
        (0..k)
            .map(|x| if mask & (1 << x) != 0 { '-' } else { '+' })
            .collect()
    };
    let mut states: Vec<(StateId, u32)> = Vec::new();
    let mut index: HashMap<(StateId, u32), StateId> = HashMap::new();
    let mut intern = |q: StateId, mask: u32, states: &mut Vec<(StateId, u32)>| -> StateId {
        *index.entry((q, mask)).or_insert_with(|| {
            states.push((q, mask));
            StateId(states.len() as u32 - 1)
        })
    };

    let initial = intern(m.initial(), 0, &mut states);
    let mut rules: Vec<Rule> = Vec::new();
    let mut processed = 0usize;

    // Enumerate the (r+1)^k nonnegative truncated valuations per state and
    // symbol; negative guard coordinates are unreachable and fall to the
    // sink through the default entry.
    let mut guard_values = Vec::new();
    {
        let mut cur = vec![0i64; k];
        loop {
            guard_values.push(cur.clone());
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                cur[i] += 1;
                if cur[i] <= r {
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

    while processed < states.len() {
        let from = StateId(processed as u32);
        let (q, mask) = states[processed];
        processed += 1;
        let sign = |x: usize| if mask & (1 << x) != 0 { -1i64 } else { 1 };
        for sym in m.alphabet.symbols() {
            for stored in &guard_values {
                // The represented truncated valuation of the input machine.
                let key: Vec<i64> = (0..k).map(|x| sign(x) * stored[x]).collect();
                let (to, update) = m.resolve(q, &key, sym)?;
                let mut mask2 = 0u32;
                let mut exprs = Vec::with_capacity(k);
                for x in 0..k {
                    let e = update.expr(CounterId(x as u32));
                    match e.vars() {
                        [] => {
                            let c = e.constant_part();
                            if c >= 0 {
                                exprs.push(CounterExpr::constant(c));
                            } else {
                                mask2 |= 1 << x;
                                exprs.push(CounterExpr::constant(-c));
                            }
                        }
                        [y] => {
                            let c = e.constant_part();
                            let sy = sign(y.0 as usize);
                            if stored[y.0 as usize] + sy * c >= 0 {
                                if sy < 0 {
                                    mask2 |= 1 << x;
                                }
                                exprs.push(CounterExpr::var_plus(*y, sy * c));
                            } else {
                                if sy > 0 {
                                    mask2 |= 1 << x;
                                }
                                exprs.push(CounterExpr::constant(c.abs() - stored[y.0 as usize]));
                            }
                        }
                        _ => unreachable!("machine is sumless"),
                    }
                }
                let target = intern(to, mask2, &mut states);
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

    let mut state_names: Vec<String> = states
        .iter()
        .map(|(q, mask)| format!("{}[{}]", m.state_names()[q.0 as usize], sign_name(*mask)))
        .collect();
    let dead = StateId(state_names.len() as u32);
    state_names.push("dead".into());
    let accepting: BTreeSet<StateId> = states
        .iter()
        .enumerate()
        .filter(|(_, (q, _))| m.is_accepting(*q))
        .map(|(i, _)| StateId(i as u32))
        .collect();

    let mut out = CounterMachine::new(
        m.alphabet.clone(),
        state_names,
        m.counter_names().to_vec(),
        initial,
        r,
        accepting,
        rules,
        Some((
            dead,
            Update::new(vec![CounterExpr::constant(0); k]),
        )),
        m.name.clone(),
    );
    out.passes = m.passes.clone();
    out.passes.push("nonnegative".into());

    let certificate = TranslationCertificate {
        pass: "nonnegative".into(),
        input: DeviceFacts::of_machine(m),
        output: DeviceFacts::of_machine(&out),
        claims: vec![
            format!("counters = {k}"),
            format!("access = {r}"),
            "sumless".into(),
            "counters never negative on any run".into(),
            "language preserved".into(),
        ],
    };
    Ok((out, certificate))
}
