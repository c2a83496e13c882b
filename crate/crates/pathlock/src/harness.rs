//! Equivalence checking, language oracles, random device generation, and
//! space–time diagram rendering.

use crate::automaton::{
    da_run, DaRule, DaStateId, DistributedAutomaton, PredPat, SelfPat,
};
use crate::foundations::{enumerate_words, Alphabet, Word};
use crate::io::Device;
use crate::machine::{
    machine_run, CounterExpr, CounterId, CounterMachine, Rule, StateId, Update,
};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Result of an exhaustive language comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Equivalent,
    Counterexample {
        word: Word,
        accepts_a: bool,
        accepts_b: bool,
    },
}

#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub outcome: Outcome,
    pub words_checked: usize,
    pub max_len: usize,
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self.outcome, Outcome::Equivalent)
    }
}

/// Compares acceptance of the two devices on every nonempty word of length
/// at most `max_len`, in length-then-lexicographic order, stopping at the
/// first disagreement. Device errors surface with the offending word.
pub fn check_equivalence(
    a: &Device,
    b: &Device,
    alphabet: &Alphabet,
    max_len: usize,
) -> Result<EquivalenceVerdict> {
    let mut words_checked = 0;
    for word in enumerate_words(alphabet, max_len) {
        let tag = |e: Error| Error::OnWord {
            word: word.display(alphabet),
            source: Box::new(e),
        };
        let accepts_a = a.accepts(&word).map_err(tag)?;
        let accepts_b = b.accepts(&word).map_err(|e| Error::OnWord {
            word: word.display(alphabet),
            source: Box::new(e),
        })?;
        words_checked += 1;
        if accepts_a != accepts_b {
            return Ok(EquivalenceVerdict {
                outcome: Outcome::Counterexample {
                    word,
                    accepts_a,
                    accepts_b,
                },
                words_checked,
                max_len,
            });
        }
    }
    Ok(EquivalenceVerdict {
        outcome: Outcome::Equivalent,
        words_checked,
        max_len,
    })
}

/// The reference language over {a, b, c}: every prefix has at least as many
/// a's as b's and at least as many b's as c's.
pub fn language_oracle_l(alphabet: &Alphabet, word: &Word) -> Result<bool> {
    let a = alphabet.lookup("a")?;
    let b = alphabet.lookup("b")?;
    let c = alphabet.lookup("c")?;
    let (mut na, mut nb, mut nc) = (0i64, 0i64, 0i64);
    for &sym in word.symbols() {
        if sym == a {
            na += 1;
        } else if sym == b {
            nb += 1;
        } else if sym == c {
            nc += 1;
        } else {
            return Err(Error::UnknownSymbol(alphabet.name(sym).to_string()));
        }
        if na < nb || nb < nc {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws a quasi-acyclic automaton: a random order on the states restricts
/// every transition to the state itself or one strictly later, so the state
/// diagram cannot cycle.
pub fn random_quasi_acyclic_da(
    seed: u64,
    num_states: usize,
    alphabet: &Alphabet,
) -> DistributedAutomaton {
    assert!(num_states >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<String> = (0..num_states).map(|i| format!("q{i}")).collect();
    let mut order: Vec<usize> = (0..num_states).collect();
    for i in (1..num_states).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut rank = vec![0usize; num_states];
    for (pos, &q) in order.iter().enumerate() {
        rank[q] = pos;
    }
    let mut rules = Vec::new();
    for q in 0..num_states {
        // Candidates: q itself or anything ranked strictly above it.
        let candidates: Vec<usize> = (0..num_states)
            .filter(|&t| t == q || rank[t] > rank[q])
            .collect();
        for pred in std::iter::once(PredPat::Is(None)).chain(
            (0..num_states).map(|p| PredPat::Is(Some(DaStateId(p as u32)))),
        ) {
            let to = candidates[rng.gen_range(0..candidates.len())];
            rules.push(DaRule {
                pred,
                own: SelfPat::Is(DaStateId(q as u32)),
                to: DaStateId(to as u32),
            });
        }
    }
    let init: Vec<DaStateId> = alphabet
        .symbols()
        .map(|_| DaStateId(rng.gen_range(0..num_states) as u32))
        .collect();
    let accepting: BTreeSet<DaStateId> = (0..num_states)
        .filter(|_| rng.gen_bool(0.5))
        .map(|q| DaStateId(q as u32))
        .collect();
    DistributedAutomaton::new(
        alphabet.clone(),
        states,
        init,
        accepting,
        rules,
        None,
        format!("random-qa-{seed}"),
    )
}

/// Draws a total sumless machine: every update is a constant or a counter
/// plus a constant, with the full guard domain enumerated.
pub fn random_sumless_cm(
    seed: u64,
    num_states: usize,
    num_counters: usize,
    access: i64,
    alphabet: &Alphabet,
) -> CounterMachine {
    assert!(num_states >= 1 && access >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<String> = (0..num_states).map(|i| format!("q{i}")).collect();
    let counters: Vec<String> = (0..num_counters).map(|i| format!("x{i}")).collect();
    let mut rules = Vec::new();
    let mut guard = vec![-access; num_counters];
    for q in 0..num_states {
        for sym in alphabet.symbols() {
            guard.iter_mut().for_each(|g| *g = -access);
            loop {
                let to = StateId(rng.gen_range(0..num_states) as u32);
                let exprs = (0..num_counters)
                    .map(|_| {
                        let c = rng.gen_range(-access..=access);
                        if num_counters > 0 && rng.gen_bool(0.6) {
                            CounterExpr::var_plus(
                                CounterId(rng.gen_range(0..num_counters) as u32),
                                c,
                            )
                        } else {
                            CounterExpr::constant(c)
                        }
                    })
                    .collect();
                rules.push(Rule {
                    from: StateId(q as u32),
                    guard: guard.iter().map(|&g| Some(g)).collect(),
                    symbol: sym,
                    to,
                    update: Update::new(exprs),
                });
                let mut i = 0;
                loop {
                    if i == num_counters {
                        break;
                    }
                    guard[i] += 1;
                    if guard[i] <= access {
                        break;
                    }
                    guard[i] = -access;
                    i += 1;
                }
                if i == num_counters {
                    break;
                }
            }
        }
    }
    let accepting: BTreeSet<StateId> = (0..num_states)
        .filter(|_| rng.gen_bool(0.5))
        .map(|q| StateId(q as u32))
        .collect();
    CounterMachine::new(
        alphabet.clone(),
        states,
        counters,
        StateId(0),
        access,
        accepting,
        rules,
        None,
        format!("random-sumless-{seed}"),
    )
}

/// Renders a run as text: one row per round for automata (columns are the
/// path's nodes), one row per step for machines.
pub fn space_time_diagram(device: &Device, word: &Word, rounds: Option<usize>) -> Result<String> {
    match device {
        Device::Automaton(a) => {
            let bound = rounds.unwrap_or(a.state_count() * word.len() + 16);
            let run = da_run(a, word, bound)?;
            let names: Vec<Vec<&str>> = run
                .configs
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|q| a.state_names()[q.0 as usize].as_str())
                        .collect()
                })
                .collect();
            let mut widths: Vec<usize> = word
                .symbols()
                .iter()
                .map(|&s| a.alphabet.name(s).chars().count())
                .collect();
            for row in &names {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.chars().count());
                }
            }
            let tcol = run.configs.len().saturating_sub(1).to_string().len().max(1);
            let mut out = String::new();
            let pad = |s: &str, w: usize| {
                let mut s = s.to_string();
                while s.chars().count() < w {
                    s.push(' ');
                }
                s
            };
            out.push_str(&pad("t", tcol));
            for (i, &sym) in word.symbols().iter().enumerate() {
                out.push_str("  ");
                out.push_str(&pad(a.alphabet.name(sym), widths[i]));
            }
            out.push('\n');
            for (t, row) in names.iter().enumerate() {
                out.push_str(&pad(&t.to_string(), tcol));
                for (i, cell) in row.iter().enumerate() {
                    out.push_str("  ");
                    out.push_str(&pad(cell, widths[i]));
                }
                out.push('\n');
            }
            if run.stabilized {
                out.push_str("stabilized\n");
            } else if let Some((start, period)) = run.cycle {
                out.push_str(&format!("cycle: start {start}, period {period}\n"));
            }
            Ok(out)
        }
        Device::Machine(m) => {
            let run = machine_run(m, word)?;
            let mut out = String::new();
            let header: Vec<String> = std::iter::once("step".to_string())
                .chain(std::iter::once("sym".to_string()))
                .chain(std::iter::once("state".to_string()))
                .chain(m.counter_names().iter().cloned())
                .collect();
            out.push_str(&header.join("\t"));
            out.push('\n');
            for (i, cfg) in run.configs.iter().enumerate() {
                let sym = if i == 0 {
                    "-".to_string()
                } else {
                    m.alphabet.name(word.symbols()[i - 1]).to_string()
                };
                let mut row = vec![
                    i.to_string(),
                    sym,
                    m.state_names()[cfg.state.0 as usize].clone(),
                ];
                row.extend(cfg.valuation.values().iter().map(|v| v.to_string()));
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{is_quasi_acyclic, max_trace_length};
    use crate::corpus::{example_cm, example_da};
    use crate::machine::{is_sumless, validate_machine};

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn oracle_on_the_running_words() {
        let al = abc();
        for (text, want) in [("aaabbc", true), ("abacac", false), ("a", true), ("b", false)] {
            let w = Word::parse(&al, text).unwrap();
            assert_eq!(language_oracle_l(&al, &w).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn running_devices_agree_with_the_oracle() {
        let al = abc();
        let m = Device::Machine(example_cm());
        let a = Device::Automaton(example_da());
        let verdict = check_equivalence(&m, &a, &al, 6).unwrap();
        assert!(verdict.is_equivalent());
        assert_eq!(verdict.words_checked, 1092);
        for w in enumerate_words(&al, 5) {
            assert_eq!(
                m.accepts(&w).unwrap(),
                language_oracle_l(&al, &w).unwrap(),
                "{}",
                w.display(&al)
            );
        }
    }

    #[test]
    fn counterexamples_are_length_lex_least() {
        let al = abc();
        let m = Device::Machine(example_cm());
        let mut no_accept = example_cm();
        no_accept = CounterMachine::new(
            no_accept.alphabet.clone(),
            no_accept.state_names().to_vec(),
            no_accept.counter_names().to_vec(),
            no_accept.initial(),
            no_accept.access(),
            BTreeSet::new(),
            no_accept.rules().to_vec(),
            no_accept.default_entry().cloned(),
            "no-accept",
        );
        let verdict = check_equivalence(&m, &Device::Machine(no_accept), &al, 3).unwrap();
        match verdict.outcome {
            Outcome::Counterexample { word, accepts_a, accepts_b } => {
                assert_eq!(word.display(&al), "a");
                assert!(accepts_a && !accepts_b);
            }
            Outcome::Equivalent => panic!("expected a counterexample"),
        }
        // Reflexivity.
        assert!(check_equivalence(&m, &m, &al, 3).unwrap().is_equivalent());
    }

    #[test]
    fn random_automata_are_quasi_acyclic_and_reproducible() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        for seed in 1..=20 {
            let a = random_quasi_acyclic_da(seed, 5, &al);
            assert!(is_quasi_acyclic(&a).unwrap(), "seed {seed}");
            assert!(max_trace_length(&a).unwrap() <= 5);
            let again = random_quasi_acyclic_da(seed, 5, &al);
            assert_eq!(a.rules(), again.rules());
            assert_eq!(a.init_map(), again.init_map());
        }
    }

    #[test]
    fn random_machines_are_sumless_total_and_reproducible() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        for seed in 1..=10 {
            let m = random_sumless_cm(seed, 3, 2, 1, &al);
            assert!(is_sumless(&m));
            assert!(validate_machine(&m).is_empty());
            let again = random_sumless_cm(seed, 3, 2, 1, &al);
            assert_eq!(m.rules(), again.rules());
        }
    }

    #[test]
    fn machine_diagram_lists_the_run() {
        let m = Device::Machine(example_cm());
        let w = Word::parse(m.alphabet(), "aaabbc").unwrap();
        let text = space_time_diagram(&m, &w, None).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 8); // header + 7 configurations
        assert!(lines[1].starts_with("0\t-\ts\t0\t0"));
        assert!(lines[7].starts_with("6\tc\ts\t1\t1"));
    }

    #[test]
    fn automaton_diagram_stabilizes_on_a_single_state() {
        let al = Alphabet::new(["a"]).unwrap();
        let a = DistributedAutomaton::new(
            al,
            vec!["q".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![DaRule {
                pred: PredPat::Any,
                own: SelfPat::Any,
                to: DaStateId(0),
            }],
            None,
            "one",
        );
        let d = Device::Automaton(a);
        let w = Word::parse(d.alphabet(), "aaa").unwrap();
        let text = space_time_diagram(&d, &w, None).unwrap();
        assert!(text.ends_with("stabilized\n"));
        assert_eq!(text.lines().count(), 3); // header + row 0 + marker
    }
}
