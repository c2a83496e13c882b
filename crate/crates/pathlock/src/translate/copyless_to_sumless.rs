//! Copyless machines to sumless machines via subset counters.
//!
//! The output machine dedicates one counter to every subset of the input's
//! counters, holding the sum of their values. Copylessness means each input
//! counter feeds at most one update expression, so the next value of a
//! subset is always the current value of some other subset plus a constant
//! bounded by `k·r` — a sumless update. Guards of the input are recovered
//! from the singleton-subset counters.

use super::{DeviceFacts, TranslationCertificate};
use crate::machine::{
    decompose_expression, is_copyless, validate_machine, CounterExpr, CounterId, CounterMachine,
    GuardAtom, Rule, Update,
};
use crate::{Error, Result};

pub fn copyless_to_sumless(m: &CounterMachine) -> Result<(CounterMachine, TranslationCertificate)> {
    if !is_copyless(m) {
        return Err(Error::Precondition(
            "subset-counter translation needs a copyless machine".into(),
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
    if k > 16 {
        return Err(Error::ResourceExceeded {
            cap: 1 << 16,
            context: format!("2^{k} subset counters"),
        });
    }
    let r = m.access();
    let masks = 1usize << k;
    let access = (k as i64 * r).max(1);

    let subset_name = |mask: usize| {
        let members: Vec<&str> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| m.counter_names()[i].as_str())
            .collect();
        format!("{{{}}}", members.join(","))
    };
    let counters: Vec<String> = (0..masks).map(subset_name).collect();
    let singleton = |x: CounterId| CounterId(1u32 << x.0);

    // The next value of subset Y is the subset of counters feeding Y plus
    // the sum of the fed constants.
    let translate_update = |update: &Update| -> Update {
        let exprs = (0..masks)
            .map(|mask| {
                let mut union = 0usize;
                let mut constant = 0i64;
                for x in 0..k {
                    if mask & (1 << x) != 0 {
                        let (vars, c) = decompose_expression(update.expr(CounterId(x as u32)));
                        for v in vars {
                            union |= 1 << v.0;
                        }
                        constant += c;
                    }
                }
                CounterExpr::var_plus(CounterId(union as u32), constant)
            })
            .collect();
        Update::new(exprs)
    };

    // Guard atoms move to the singleton counters. A boundary value ±r of the
    // input stands for every singleton value beyond it, which the wider
    // window makes visible, so those atoms fan out over [r, k·r].
    let mut rules = Vec::new();
    for rule in m.rules() {
        let mut options: Vec<(usize, Vec<i64>)> = Vec::new();
        for (x, atom) in rule.guard.iter().enumerate() {
            if let Some(v) = atom {
                let coord = singleton(CounterId(x as u32)).0 as usize;
                let values = if v.abs() < r {
                    vec![*v]
                } else if *v == r {
                    (r..=access).collect()
                } else {
                    (-access..=-r).collect()
                };
                options.push((coord, values));
            }
        }
        let mut picks = vec![0usize; options.len()];
        loop {
            let mut guard: Vec<GuardAtom> = vec![None; masks];
            for (slot, (coord, values)) in options.iter().enumerate() {
                guard[*coord] = Some(values[picks[slot]]);
            }
            rules.push(Rule {
                from: rule.from,
                guard,
                symbol: rule.symbol,
                to: rule.to,
                update: translate_update(&rule.update),
            });
            let mut i = options.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < options[i].1.len() {
                    break;
                }
                picks[i] = 0;
                if i == 0 {
                    break;
                }
            }
            if picks.iter().all(|&p| p == 0) {
                break;
            }
        }
    }
    let default = m
        .default_entry()
        .map(|(to, update)| (*to, translate_update(update)));

    let mut out = CounterMachine::new(
        m.alphabet.clone(),
        m.state_names().to_vec(),
        counters,
        m.initial(),
        access,
        m.accepting().clone(),
        rules,
        default,
        m.name.clone(),
    );
    out.passes = m.passes.clone();
    out.passes.push("copyless-to-sumless".into());

    let certificate = TranslationCertificate {
        pass: "copyless-to-sumless".into(),
        input: DeviceFacts::of_machine(m),
        output: DeviceFacts::of_machine(&out),
        claims: vec![
            format!("counters = 2^{k} = {masks}"),
            format!("access = {access}"),
            "sumless".into(),
            "language preserved".into(),
        ],
    };
    Ok((out, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{example_cm, toy_devices};
    use crate::foundations::enumerate_words;
    use crate::machine::{is_sumless, machine_accepts};

    #[test]
    fn running_example_becomes_four_counter_sumless() {
        let m = example_cm();
        let (out, cert) = copyless_to_sumless(&m).unwrap();
        assert_eq!(out.counter_count(), 4);
        assert_eq!(out.access(), 2);
        assert!(is_sumless(&out));
        assert!(validate_machine(&out).is_empty());
        assert_eq!(cert.output.counters, Some(4));
        for w in enumerate_words(&m.alphabet, 5) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap(),
                "word {}",
                w.display(&m.alphabet)
            );
        }
    }

    #[test]
    fn single_counter_machine_gets_two_subsets() {
        let m = toy_devices().one_counter_cm;
        let (out, _) = copyless_to_sumless(&m).unwrap();
        assert_eq!(out.counter_count(), 2);
        assert_eq!(out.counter_names(), ["{}", "{x}"]);
        for w in enumerate_words(&m.alphabet, 6) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap()
            );
        }
    }

    #[test]
    fn summing_copyless_machine_is_handled() {
        let m = toy_devices().copyless_not_sumless_cm;
        let (out, _) = copyless_to_sumless(&m).unwrap();
        assert!(is_sumless(&out));
        assert_eq!(out.counter_count(), 8);
        for w in enumerate_words(&m.alphabet, 5) {
            assert_eq!(
                machine_accepts(&m, &w).unwrap(),
                machine_accepts(&out, &w).unwrap()
            );
        }
    }

    #[test]
    fn rejects_copying_machines() {
        use crate::foundations::Alphabet;
        use crate::machine::StateId;
        use std::collections::BTreeSet;
        let copying = CounterMachine::new(
            Alphabet::new(["a"]).unwrap(),
            vec!["q".into()],
            vec!["x".into(), "y".into()],
            StateId(0),
            1,
            BTreeSet::new(),
            vec![],
            Some((
                StateId(0),
                Update::new(vec![
                    CounterExpr::var_plus(CounterId(1), 0),
                    CounterExpr::var_plus(CounterId(1), 0),
                ]),
            )),
            "copying",
        );
        assert!(copyless_to_sumless(&copying).is_err());
    }
}
