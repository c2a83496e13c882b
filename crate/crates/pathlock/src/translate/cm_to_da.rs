//! Sumless 1-access machines to quasi-acyclic distributed automata.
//!
//! Space and time trade places: the sequence of states traversed by the
//! i-th node encodes the memory configuration the machine reaches after
//! reading the i-th symbol. Each automaton state carries one track per
//! counter plus a transition track. A counter track spells out
//! `⊤^(d+1) · 1^value · 0 · ⊥ · ♯^ω` — the value in unary between a delay
//! prefix and two end markers — while the transition track holds the node's
//! label for `d` rounds and then the machine state together with the update
//! function that produced it. The delay grows by two per position, which is
//! exactly what lets a decremented counter drop one `1` at the front and
//! still re-synchronize on the markers.
//!
//! The transition function is defined by per-track rules and materialized
//! sparsely: exact entries for every (predecessor, state) pair that can
//! occur in some run, plus one wildcard entry per state whose image treats
//! the predecessor as quiescent. Pair enumeration drives a fresh node
//! against synthetic predecessor timelines over all counter values up to a
//! saturation cap; beyond the cap the tracks only lengthen their constant
//! runs, so no new pairs appear.

use super::{make_nonnegative, DeviceFacts, TranslationCertificate};
use crate::automaton::{DaRule, DaStateId, DistributedAutomaton, PredPat, SelfPat};
use crate::foundations::Sym;
use crate::machine::{
    is_sumless, validate_machine, CounterExpr, CounterId, CounterMachine, Rule, StateId, Update,
};
use crate::{state_cap, Error, Result};
use std::collections::{BTreeSet, HashMap};

/// Counter values explored when enumerating predecessor timelines. Track
/// interactions span at most the marker width plus the delay shift, so any
/// value beyond this cap repeats pair patterns that already occurred.
const PRED_VALUE_CAP: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum TrackSym {
    Top,
    One,
    Zero,
    End,
    Quiet,
}

impl TrackSym {
    fn glyph(self) -> char {
        match self {
            TrackSym::Top => '⊤',
            TrackSym::One => '1',
            TrackSym::Zero => '0',
            TrackSym::End => '⊥',
            TrackSym::Quiet => '♯',
        }
    }
}

/// Counter-track symbol of a value-`v` track at offset `u ≥ 1` past the
/// delay prefix.
fn track_at(u: u64, v: u64) -> TrackSym {
    if u <= v {
        TrackSym::One
    } else if u == v + 1 {
        TrackSym::Zero
    } else if u == v + 2 {
        TrackSym::End
    } else {
        TrackSym::Quiet
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Tt {
    Label(Sym),
    Decided(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct NodeState {
    tracks: Vec<TrackSym>,
    tt: Tt,
}

struct Builder {
    m: CounterMachine,
    k: usize,
    cap: usize,
    qus: Vec<(StateId, Update)>,
    qu_index: HashMap<(StateId, Update), u32>,
    states: Vec<NodeState>,
    state_index: HashMap<NodeState, DaStateId>,
    entries: Vec<(Option<DaStateId>, DaStateId, DaStateId)>,
    entry_index: HashMap<(Option<DaStateId>, DaStateId), DaStateId>,
}

impl Builder {
    fn intern_qu(&mut self, q: StateId, u: Update) -> u32 {
        if let Some(&i) = self.qu_index.get(&(q, u.clone())) {
            return i;
        }
        let i = self.qus.len() as u32;
        self.qus.push((q, u.clone()));
        self.qu_index.insert((q, u), i);
        i
    }

    fn intern_state(&mut self, s: NodeState) -> Result<DaStateId> {
        if let Some(&id) = self.state_index.get(&s) {
            return Ok(id);
        }
        if self.states.len() >= self.cap {
            return Err(Error::ResourceExceeded {
                cap: self.cap,
                context: format!(
                    "automaton materialization ({} states, {} entries so far)",
                    self.states.len(),
                    self.entries.len()
                ),
            });
        }
        let id = DaStateId(self.states.len() as u32);
        self.states.push(s.clone());
        self.state_index.insert(s, id);
        Ok(id)
    }

    fn record(&mut self, pred: Option<DaStateId>, own: DaStateId, to: DaStateId) -> Result<()> {
        match self.entry_index.get(&(pred, own)) {
            Some(&prev) if prev != to => Err(Error::Invalid(
                "pair enumeration derived two different images for one pair".into(),
            )),
            Some(_) => Ok(()),
            None => {
                self.entry_index.insert((pred, own), to);
                self.entries.push((pred, own, to));
                Ok(())
            }
        }
    }

    fn all_top(&self) -> Vec<TrackSym> {
        vec![TrackSym::Top; self.k]
    }

    /// Resolves the simulated machine and interns the resulting pair.
    fn decide(&mut self, q: StateId, key: &[i64], sym: Sym) -> Result<u32> {
        let (to, update) = {
            let (t, u) = self.m.resolve(q, key, sym)?;
            (t, u.clone())
        };
        Ok(self.intern_qu(to, update))
    }

    /// One synchronous move of a node, total over all state combinations.
    fn delta(&mut self, pred: Option<&NodeState>, own: &NodeState) -> Result<NodeState> {
        match &own.tt {
            Tt::Label(sym) => {
                if own.tracks.iter().any(|t| *t != TrackSym::Top) {
                    return Ok(own.clone()); // junk vector: hold position
                }
                match pred {
                    None => {
                        let zeros = vec![0i64; self.k];
                        let qu = self.decide(self.m.initial(), &zeros, *sym)?;
                        Ok(NodeState {
                            tracks: self.all_top(),
                            tt: Tt::Decided(qu),
                        })
                    }
                    Some(p) => {
                        let info: Option<Vec<i64>> = match &p.tt {
                            Tt::Decided(_)
                                if p.tracks
                                    .iter()
                                    .all(|t| matches!(t, TrackSym::One | TrackSym::Zero)) =>
                            {
                                Some(
                                    p.tracks
                                        .iter()
                                        .map(|t| i64::from(*t == TrackSym::One))
                                        .collect(),
                                )
                            }
                            _ => None,
                        };
                        match (info, &p.tt) {
                            (Some(key), Tt::Decided(qu)) => {
                                let q = self.qus[*qu as usize].0;
                                let next = self.decide(q, &key, *sym)?;
                                Ok(NodeState {
                                    tracks: self.all_top(),
                                    tt: Tt::Decided(next),
                                })
                            }
                            _ => Ok(own.clone()), // keep delaying
                        }
                    }
                }
            }
            Tt::Decided(qu) => {
                let update = self.qus[*qu as usize].1.clone();
                let tracks = (0..self.k)
                    .map(|x| {
                        let own_sym = own.tracks[x];
                        match own_sym {
                            TrackSym::Zero => TrackSym::End,
                            TrackSym::End | TrackSym::Quiet => TrackSym::Quiet,
                            TrackSym::Top | TrackSym::One => {
                                let e = update.expr(CounterId(x as u32));
                                match e.vars() {
                                    [] => {
                                        if e.constant_part() == 1 && own_sym == TrackSym::Top {
                                            TrackSym::One
                                        } else {
                                            TrackSym::Zero
                                        }
                                    }
                                    [y] => {
                                        let c = e.constant_part();
                                        let psym = pred
                                            .map(|p| p.tracks[y.0 as usize])
                                            .unwrap_or(TrackSym::Quiet);
                                        let one = matches!(psym, TrackSym::One)
                                            || (psym == TrackSym::Zero && c >= 0)
                                            || (psym == TrackSym::End && c == 1);
                                        if one {
                                            TrackSym::One
                                        } else {
                                            TrackSym::Zero
                                        }
                                    }
                                    _ => unreachable!("machine is sumless"),
                                }
                            }
                        }
                    })
                    .collect();
                Ok(NodeState {
                    tracks,
                    tt: own.tt.clone(),
                })
            }
        }
    }

    /// Image used by the per-state wildcard entry: the predecessor's tracks
    /// are read as quiescent, which keeps every junk view on the natural
    /// track progression.
    fn wildcard_image(&mut self, own: &NodeState) -> Result<NodeState> {
        match own.tt {
            Tt::Label(_) => Ok(own.clone()),
            Tt::Decided(_) => {
                let quiet = NodeState {
                    tracks: vec![TrackSym::Quiet; self.k],
                    tt: own.tt.clone(),
                };
                self.delta(Some(&quiet), own)
            }
        }
    }

    /// Runs a fresh node labeled `sym` against the given predecessor
    /// timeline, recording every (predecessor, state) pair it realizes.
    fn drive(
        &mut self,
        pred_at: &dyn Fn(usize) -> Option<NodeState>,
        pred_settles: usize,
        sym: Sym,
    ) -> Result<()> {
        let mut own = NodeState {
            tracks: self.all_top(),
            tt: Tt::Label(sym),
        };
        let limit = pred_settles + 4 * PRED_VALUE_CAP as usize + 32;
        for t in 0..limit {
            let pred = pred_at(t);
            let next = self.delta(pred.as_ref(), &own)?;
            let pred_id = match pred {
                Some(p) => Some(self.intern_state(p)?),
                None => None,
            };
            let own_id = self.intern_state(own.clone())?;
            let to_id = self.intern_state(next.clone())?;
            self.record(pred_id, own_id, to_id)?;
            if next == own && t >= pred_settles {
                return Ok(());
            }
            own = next;
        }
        Err(Error::Invalid(
            "node failed to settle against a settled predecessor".into(),
        ))
    }
}

/// Prepends a fresh initial state whose outgoing updates are constant-folded
/// at the all-zero valuation, so the first simulated step never reads a
/// predecessor counter.
fn fresh_initial(m: &CounterMachine) -> Result<CounterMachine> {
    let k = m.counter_count();
    let q0 = m.initial();
    let fresh = StateId(m.state_names().len() as u32);
    let mut states = m.state_names().to_vec();
    states.push(format!("{}'", m.state_names()[q0.0 as usize]));

    let mut rules = m.rules().to_vec();
    let zeros = vec![0i64; k];
    for sym in m.alphabet.symbols() {
        let (to, update) = m.resolve(q0, &zeros, sym)?;
        let folded = Update::new(
            update
                .exprs()
                .iter()
                .map(|e| CounterExpr::constant(e.constant_part()))
                .collect(),
        );
        rules.push(Rule {
            from: fresh,
            guard: vec![None; k],
            symbol: sym,
            to,
            update: folded,
        });
    }
    let mut accepting = m.accepting().clone();
    if m.is_accepting(q0) {
        accepting.insert(fresh);
    }
    let mut out = CounterMachine::new(
        m.alphabet.clone(),
        states,
        m.counter_names().to_vec(),
        fresh,
        m.access(),
        accepting,
        rules,
        m.default_entry().cloned(),
        m.name.clone(),
    );
    out.passes = m.passes.clone();
    Ok(out)
}

pub fn sumless_to_da(m: &CounterMachine) -> Result<(DistributedAutomaton, TranslationCertificate)> {
    if !is_sumless(m) || m.access() != 1 {
        return Err(Error::Precondition(
            "space-time simulation needs a sumless machine with 1-access; reduce access first"
                .into(),
        ));
    }
    let diags = validate_machine(m);
    if !diags.is_empty() {
        return Err(Error::Precondition(format!(
            "input machine is not well-formed: {}",
            diags[0]
        )));
    }
    let (nn, _) = make_nonnegative(m)?;
    let m2 = fresh_initial(&nn)?;
    let k = m2.counter_count();

    let mut b = Builder {
        m: m2,
        k,
        cap: state_cap(),
        qus: Vec::new(),
        qu_index: HashMap::new(),
        states: Vec::new(),
        state_index: HashMap::new(),
        entries: Vec::new(),
        entry_index: HashMap::new(),
    };

    let syms: Vec<Sym> = b.m.alphabet.symbols().collect();

    // Delay-phase pairs: a node whose predecessor is still labeling keeps
    // its own label, whichever the two labels are.
    for &sp in &syms {
        let pred = NodeState {
            tracks: b.all_top(),
            tt: Tt::Label(sp),
        };
        let pred_id = b.intern_state(pred)?;
        for &so in &syms {
            let own = NodeState {
                tracks: b.all_top(),
                tt: Tt::Label(so),
            };
            let own_id = b.intern_state(own)?;
            b.record(Some(pred_id), own_id, own_id)?;
        }
    }

    // First node: constant `none` predecessor.
    for &sym in &syms {
        b.drive(&|_| None, 0, sym)?;
    }

    // Every other node: drive against synthetic predecessor timelines over
    // all update pairs and counter values up to the saturation cap. The
    // predecessor uses delay 1; the relative alignment is the same for
    // every actual delay.
    let mut qi = 0;
    while qi < b.qus.len() {
        let qu = qi as u32;
        qi += 1;
        let mut values = vec![0u64; k];
        loop {
            let vmax = values.iter().copied().max().unwrap_or(0);
            let settles = (vmax + 4) as usize;
            for &sym in &syms {
                let vals = values.clone();
                let pred_at = |t: usize| -> Option<NodeState> {
                    Some(match t {
                        0 => NodeState {
                            tracks: vec![TrackSym::Top; vals.len()],
                            tt: Tt::Label(sym),
                        },
                        1 => NodeState {
                            tracks: vec![TrackSym::Top; vals.len()],
                            tt: Tt::Decided(qu),
                        },
                        t => NodeState {
                            tracks: vals.iter().map(|&v| track_at(t as u64 - 1, v)).collect(),
                            tt: Tt::Decided(qu),
                        },
                    })
                };
                b.drive(&pred_at, settles, sym)?;
            }
            // Odometer over counter values.
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                values[i] += 1;
                if values[i] <= PRED_VALUE_CAP {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }

    // Wildcard images close the table over the remaining views.
    let mut wildcards: Vec<(DaStateId, DaStateId)> = Vec::new();
    let mut si = 0;
    while si < b.states.len() {
        let own = b.states[si].clone();
        let img = b.wildcard_image(&own)?;
        let img_id = b.intern_state(img)?;
        wildcards.push((DaStateId(si as u32), img_id));
        si += 1;
    }

    // Assemble the automaton.
    let glyphs = |s: &NodeState, b: &Builder| -> String {
        let tracks: String = s.tracks.iter().map(|t| t.glyph()).collect();
        let tt = match &s.tt {
            Tt::Label(sym) => b.m.alphabet.name(*sym).to_string(),
            Tt::Decided(qu) => {
                let (q, _) = &b.qus[*qu as usize];
                format!("{}#{}", b.m.state_names()[q.0 as usize], qu)
            }
        };
        if s.tracks.is_empty() {
            tt
        } else {
            format!("{tracks}|{tt}")
        }
    };
    let names: Vec<String> = b.states.iter().map(|s| glyphs(s, &b)).collect();
    let init: Vec<DaStateId> = syms
        .iter()
        .map(|&sym| {
            b.state_index[&NodeState {
                tracks: vec![TrackSym::Top; k],
                tt: Tt::Label(sym),
            }]
        })
        .collect();
    let accepting: BTreeSet<DaStateId> = b
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| match &s.tt {
            Tt::Decided(qu) => b.m.is_accepting(b.qus[*qu as usize].0),
            Tt::Label(_) => false,
        })
        .map(|(i, _)| DaStateId(i as u32))
        .collect();
    let mut rules: Vec<DaRule> = b
        .entries
        .iter()
        .map(|&(pred, own, to)| DaRule {
            pred: PredPat::Is(pred),
            own: SelfPat::Is(own),
            to,
        })
        .collect();
    for (own, to) in wildcards {
        rules.push(DaRule {
            pred: PredPat::Any,
            own: SelfPat::Is(own),
            to,
        });
    }

    let mut out = DistributedAutomaton::new(
        m.alphabet.clone(),
        names,
        init,
        accepting,
        rules,
        None,
        m.name.clone(),
    );
    out.passes = m.passes.clone();
    out.passes.push("cm-to-da".into());

    let input_facts = DeviceFacts::of_machine(m);
    let output_facts = DeviceFacts::of_automaton(&out)?;
    let loop_bound = m.counter_count() + 2;
    let certificate = TranslationCertificate {
        pass: "cm-to-da".into(),
        input: input_facts,
        output: output_facts,
        claims: vec![
            "quasi-acyclic".into(),
            format!("loops per trace <= k + 2 = {loop_bound}"),
            "language preserved".into(),
        ],
    };
    Ok((out, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{
        da_accepts, da_run, is_quasi_acyclic, max_loops_per_trace, Acceptance,
    };
    use crate::corpus::example_cm;
    use crate::foundations::{enumerate_words, Word};
    use crate::machine::machine_accepts;

    #[test]
    fn running_example_yields_a_quasi_acyclic_simulator() {
        let m = example_cm();
        let (a, cert) = sumless_to_da(&m).unwrap();
        assert!(is_quasi_acyclic(&a).unwrap());
        assert!(max_loops_per_trace(&a).unwrap() <= 4);
        assert_eq!(cert.output.quasi_acyclic, Some(true));
        for w in enumerate_words(&m.alphabet, 4) {
            let want = machine_accepts(&m, &w).unwrap();
            let got = da_accepts(&a, &w, None).unwrap();
            assert_eq!(
                got == Acceptance::Accept,
                want,
                "word {}",
                w.display(&m.alphabet)
            );
        }
    }

    #[test]
    fn counter_tracks_spell_values_in_unary() {
        // On aaabbc the x track of node i reads ⊤^(2i) 1^(value) 0 ⊥ ♯^ω,
        // where value is the machine's x after i symbols.
        let m = example_cm();
        let (a, _) = sumless_to_da(&m).unwrap();
        let w = Word::parse(&a.alphabet, "aaabbc").unwrap();
        let rounds = 40;
        let run = da_run(&a, &w, rounds).unwrap();
        let x_values = [1u64, 2, 3, 2, 1, 1];
        for (node, &value) in x_values.iter().enumerate() {
            let i = node + 1;
            let mut track = String::new();
            for t in 0..run.configs.len().min(2 * i + value as usize + 4) {
                let name = &a.state_names()[run.configs[t][node].0 as usize];
                track.push(name.chars().next().unwrap());
            }
            let expected: String = std::iter::repeat('⊤')
                .take(2 * i)
                .chain(std::iter::repeat('1').take(value as usize))
                .chain(['0', '⊥'])
                .chain(std::iter::repeat('♯'))
                .take(track.len())
                .collect();
            assert_eq!(track, expected, "x track of node {i}");
        }
    }

    #[test]
    fn rejects_wide_access_or_summing_input() {
        let toys = crate::corpus::toy_devices();
        assert!(sumless_to_da(&toys.access3_cm).is_err());
        assert!(sumless_to_da(&toys.copyless_not_sumless_cm).is_err());
    }

    #[test]
    fn simulation_stays_exact_beyond_the_value_cap() {
        // Counter values past PRED_VALUE_CAP only lengthen constant runs of
        // the synthetic timelines; words driving a counter to 12 must still
        // be decided exactly.
        let m = crate::corpus::toy_devices().one_counter_cm;
        let (a, _) = sumless_to_da(&m).unwrap();
        for text in [
            "aaaaaaaaaaaa",
            "aaaaaaaaaaaabbbb",
            "aaaaaaaaaaaabbbbbbbbbbbb",
            "aaaaaaaaaaaabbbbbbbbbbbbb",
            "baaaaaaaaaaaa",
            "aaaaaaaaaaaabbbbbbbbbbbba",
        ] {
            let w = Word::parse(&m.alphabet, text).unwrap();
            let want = machine_accepts(&m, &w).unwrap();
            let got = da_accepts(&a, &w, None).unwrap() == Acceptance::Accept;
            assert_eq!(want, got, "word {text}");
        }
    }
}
