//! Executable fixtures: the two running-example devices over {a, b, c} and a
//! few hand-built machines and automata used by tests and documentation.

use crate::automaton::{DaRule, DaStateId, DistributedAutomaton, PredPat, SelfPat};
use crate::foundations::Alphabet;
use crate::machine::{CounterExpr, CounterId, CounterMachine, Rule, StateId, Update};
use std::collections::BTreeSet;

/// The sumless and copyless 2-counter machine recognizing the words whose
/// prefixes all have at least as many a's as b's and at least as many b's as
/// c's. Counter `x` balances a's against b's, counter `y` balances b's
/// against c's; decrementing a zero counter falls into the rejecting sink.
pub fn example_cm() -> CounterMachine {
    let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
    let s = StateId(0);
    let r = StateId(1);
    let x = CounterId(0);
    let y = CounterId(1);
    let a = alphabet.lookup("a").unwrap();
    let b = alphabet.lookup("b").unwrap();
    let c = alphabet.lookup("c").unwrap();
    let rules = vec![
        Rule {
            from: s,
            guard: vec![None, None],
            symbol: a,
            to: s,
            update: Update::new(vec![
                CounterExpr::var_plus(x, 1),
                CounterExpr::var_plus(y, 0),
            ]),
        },
        Rule {
            from: s,
            guard: vec![Some(1), None],
            symbol: b,
            to: s,
            update: Update::new(vec![
                CounterExpr::var_plus(x, -1),
                CounterExpr::var_plus(y, 1),
            ]),
        },
        Rule {
            from: s,
            guard: vec![None, Some(1)],
            symbol: c,
            to: s,
            update: Update::new(vec![
                CounterExpr::var_plus(x, 0),
                CounterExpr::var_plus(y, -1),
            ]),
        },
    ];
    CounterMachine::new(
        alphabet,
        vec!["s".into(), "r".into()],
        vec!["x".into(), "y".into()],
        s,
        1,
        BTreeSet::from([s]),
        rules,
        Some((r, Update::identity(2))),
        "abc-prefix-machine",
    )
}

/// The message-passing automaton recognizing the same language. States are
/// expectation/communication pairs over {a, b, -} plus the absorbing accept
/// and error states ⊤ and ⊥; every transition not listed explicitly falls
/// into ⊥ through the default entry.
pub fn example_da() -> DistributedAutomaton {
    let alphabet = Alphabet::new(["a", "b", "c"]).unwrap();
    let tracks = ["-", "a", "b"];
    let mut states: Vec<String> = Vec::new();
    for x in tracks {
        for y in tracks {
            states.push(format!("{x}{y}"));
        }
    }
    states.push("⊤".into());
    states.push("⊥".into());
    let id = |name: &str| DaStateId(states.iter().position(|s| s == name).unwrap() as u32);
    let top = id("⊤");
    let bot = id("⊥");

    let mut rules = Vec::new();
    // Pair-to-pair moves: a fulfilled expectation clears the node, anything
    // else keeps the expectation and forwards the neighbor's message.
    for xp in tracks {
        for yp in tracks {
            let pred = id(&format!("{xp}{yp}"));
            for x in tracks {
                for y in tracks {
                    let own = id(&format!("{x}{y}"));
                    let to = if yp == x {
                        id("--")
                    } else {
                        id(&format!("{x}{yp}"))
                    };
                    rules.push(DaRule {
                        pred: PredPat::Is(Some(pred)),
                        own: SelfPat::Is(own),
                        to,
                    });
                }
            }
        }
    }
    // Acceptance arrives from the left (⊤ or path start) once nothing is
    // expected; otherwise it is an error.
    for pred in [PredPat::Is(Some(top)), PredPat::Is(None)] {
        for x in tracks {
            for y in tracks {
                let own = id(&format!("{x}{y}"));
                rules.push(DaRule {
                    pred,
                    own: SelfPat::Is(own),
                    to: if x == "-" { top } else { bot },
                });
            }
        }
    }
    // Errors propagate right and absorb.
    rules.push(DaRule {
        pred: PredPat::Is(Some(bot)),
        own: SelfPat::Any,
        to: bot,
    });
    for pred in [PredPat::Is(Some(top)), PredPat::Is(None)] {
        rules.push(DaRule {
            pred,
            own: SelfPat::Is(top),
            to: top,
        });
        rules.push(DaRule {
            pred,
            own: SelfPat::Is(bot),
            to: bot,
        });
    }

    let init = vec![id("-a"), id("ab"), id("b-")];
    DistributedAutomaton::new(
        alphabet,
        states.clone(),
        init,
        BTreeSet::from([top]),
        rules,
        Some(bot),
        "abc-prefix-automaton",
    )
}

/// Small hand-built devices exercising the corners of the translations.
pub struct ToyDevices {
    /// Every trace has a single looping state, so the machine translation
    /// needs no counters at all.
    pub one_loop_da: DistributedAutomaton,
    /// A 1-counter sumless machine over {a, b}: accepts while no prefix has
    /// more b's than a's.
    pub one_counter_cm: CounterMachine,
    /// Copyless but not sumless: one update computes x := y + z + 1.
    pub copyless_not_sumless_cm: CounterMachine,
    /// A sumless machine with 3-access for exercising access reduction.
    pub access3_cm: CounterMachine,
}

pub fn toy_devices() -> ToyDevices {
    ToyDevices {
        one_loop_da: one_loop_da(),
        one_counter_cm: one_counter_cm(),
        copyless_not_sumless_cm: copyless_not_sumless_cm(),
        access3_cm: access3_cm(),
    }
}

fn one_loop_da() -> DistributedAutomaton {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let q0 = DaStateId(0);
    let q1 = DaStateId(1);
    DistributedAutomaton::new(
        alphabet,
        vec!["q0".into(), "q1".into()],
        vec![q0, q1],
        BTreeSet::from([q1]),
        vec![
            DaRule {
                pred: PredPat::Any,
                own: SelfPat::Is(q0),
                to: q1,
            },
            DaRule {
                pred: PredPat::Any,
                own: SelfPat::Is(q1),
                to: q1,
            },
        ],
        None,
        "toy-one-loop-automaton",
    )
}

fn one_counter_cm() -> CounterMachine {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let p = StateId(0);
    let d = StateId(1);
    let x = CounterId(0);
    let a = alphabet.lookup("a").unwrap();
    let b = alphabet.lookup("b").unwrap();
    CounterMachine::new(
        alphabet,
        vec!["p".into(), "d".into()],
        vec!["x".into()],
        p,
        1,
        BTreeSet::from([p]),
        vec![
            Rule {
                from: p,
                guard: vec![None],
                symbol: a,
                to: p,
                update: Update::new(vec![CounterExpr::var_plus(x, 1)]),
            },
            Rule {
                from: p,
                guard: vec![Some(1)],
                symbol: b,
                to: p,
                update: Update::new(vec![CounterExpr::var_plus(x, -1)]),
            },
        ],
        Some((d, Update::identity(1))),
        "toy-one-counter-machine",
    )
}

fn copyless_not_sumless_cm() -> CounterMachine {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let p = StateId(0);
    let x = CounterId(0);
    let y = CounterId(1);
    let z = CounterId(2);
    let a = alphabet.lookup("a").unwrap();
    let b = alphabet.lookup("b").unwrap();
    CounterMachine::new(
        alphabet,
        vec!["p".into()],
        vec!["x".into(), "y".into(), "z".into()],
        p,
        1,
        BTreeSet::from([p]),
        vec![
            Rule {
                from: p,
                guard: vec![None, None, None],
                symbol: a,
                to: p,
                update: Update::new(vec![
                    CounterExpr::new(vec![y, z], 1),
                    CounterExpr::constant(0),
                    CounterExpr::constant(0),
                ]),
            },
            Rule {
                from: p,
                guard: vec![None, None, None],
                symbol: b,
                to: p,
                update: Update::new(vec![
                    CounterExpr::constant(0),
                    CounterExpr::var_plus(x, 1),
                    CounterExpr::constant(1),
                ]),
            },
        ],
        None,
        "toy-copyless-sum-machine",
    )
}

fn access3_cm() -> CounterMachine {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let pos = StateId(0);
    let npos = StateId(1);
    let x = CounterId(0);
    let a = alphabet.lookup("a").unwrap();
    let b = alphabet.lookup("b").unwrap();
    let mut rules = Vec::new();
    for from in [pos, npos] {
        for v in -3..=3 {
            let target = if v >= 1 { pos } else { npos };
            rules.push(Rule {
                from,
                guard: vec![Some(v)],
                symbol: a,
                to: target,
                update: Update::new(vec![CounterExpr::var_plus(x, 3)]),
            });
            rules.push(Rule {
                from,
                guard: vec![Some(v)],
                symbol: b,
                to: target,
                update: Update::new(vec![CounterExpr::var_plus(x, -2)]),
            });
        }
    }
    CounterMachine::new(
        alphabet,
        vec!["pos".into(), "npos".into()],
        vec!["x".into()],
        npos,
        3,
        BTreeSet::from([pos]),
        rules,
        None,
        "toy-access3-machine",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{da_accepts, is_quasi_acyclic, Acceptance};
    use crate::foundations::{enumerate_words, Word};
    use crate::machine::{is_copyless, is_sumless, machine_accepts, validate_machine};

    #[test]
    fn running_machine_examples() {
        let m = example_cm();
        assert!(machine_accepts(&m, &Word::parse(&m.alphabet, "aaabbc").unwrap()).unwrap());
        assert!(machine_accepts(&m, &Word::parse(&m.alphabet, "aabbac").unwrap()).unwrap());
        assert!(!machine_accepts(&m, &Word::parse(&m.alphabet, "abacac").unwrap()).unwrap());
        assert!(is_sumless(&m) && is_copyless(&m));
        assert!(validate_machine(&m).is_empty());
    }

    #[test]
    fn running_automaton_is_not_quasi_acyclic() {
        let a = example_da();
        assert!(!is_quasi_acyclic(&a).unwrap());
    }

    #[test]
    fn unreachable_pair_states_stay_unreachable() {
        // Receiving a letter implies not expecting it anymore, so the states
        // (a,a) and (b,b) never occur in any run on words of length ≤ 6.
        let a = example_da();
        let aa = a.state_id("aa").unwrap();
        let bb = a.state_id("bb").unwrap();
        for w in enumerate_words(&a.alphabet, 6) {
            let run = crate::automaton::da_run(&a, &w, a.state_count() * w.len() + 8).unwrap();
            for config in &run.configs {
                assert!(!config.contains(&aa) && !config.contains(&bb));
            }
        }
    }

    #[test]
    fn toy_fixture_shapes() {
        let toys = toy_devices();
        assert!(is_quasi_acyclic(&toys.one_loop_da).unwrap());
        assert!(is_sumless(&toys.one_counter_cm));
        assert!(is_copyless(&toys.copyless_not_sumless_cm));
        assert!(!is_sumless(&toys.copyless_not_sumless_cm));
        assert_eq!(toys.access3_cm.access(), 3);
        for m in [
            &toys.one_counter_cm,
            &toys.copyless_not_sumless_cm,
            &toys.access3_cm,
        ] {
            assert!(validate_machine(m).is_empty(), "{:?}", validate_machine(m));
        }
        let w = Word::parse(&toys.one_loop_da.alphabet, "ab").unwrap();
        assert_eq!(
            da_accepts(&toys.one_loop_da, &w, None).unwrap(),
            Acceptance::Accept
        );
    }
}
