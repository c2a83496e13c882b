//! Distributed automata on labeled dipaths.
//!
//! Every node of the path runs the same finite-state machine. In each
//! synchronous round, node 1 moves according to `δ(none, own)` and every
//! other node according to `δ(left neighbor's state, own state)`. The word
//! is accepted when the last node visits an accepting state at some point.
//!
//! Transition tables are sparse: entries may wildcard the predecessor view,
//! the own state, or both, and an optional default state catches the rest.
//! Resolution is most-specific-first with declaration order breaking ties.

use crate::foundations::{Alphabet, Sym, Word};
use crate::machine::{Diagnostic, DiagnosticKind};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Index of an automaton state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DaStateId(pub u32);

/// What a node sees to its left: a state, or nothing for the first node.
pub type Pred = Option<DaStateId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredPat {
    Any,
    Is(Pred),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelfPat {
    Any,
    Is(DaStateId),
}

/// A sparse transition entry `δ(pred, self) = to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DaRule {
    pub pred: PredPat,
    pub own: SelfPat,
    pub to: DaStateId,
}

impl DaRule {
    fn specificity(&self) -> usize {
        let mut s = 0;
        if matches!(self.pred, PredPat::Is(_)) {
            s += 1;
        }
        if matches!(self.own, SelfPat::Is(_)) {
            s += 1;
        }
        s
    }
}

/// Distributed automaton in the dipath form `δ: Q̂ × Q → Q`.
#[derive(Debug, Clone)]
pub struct DistributedAutomaton {
    pub alphabet: Alphabet,
    states: Vec<String>,
    init: Vec<DaStateId>,
    accepting: BTreeSet<DaStateId>,
    rules: Vec<DaRule>,
    default: Option<DaStateId>,
    exact: HashMap<(Pred, DaStateId), DaStateId>,
    by_pred: HashMap<Pred, (usize, DaStateId)>,
    by_self: HashMap<DaStateId, (usize, DaStateId)>,
    full_wild: Option<(usize, DaStateId)>,
    pub name: String,
    pub passes: Vec<String>,
}

impl DistributedAutomaton {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        init: Vec<DaStateId>,
        accepting: BTreeSet<DaStateId>,
        rules: Vec<DaRule>,
        default: Option<DaStateId>,
        name: impl Into<String>,
    ) -> Self {
        assert_eq!(
            init.len(),
            alphabet.len(),
            "initialization must be total on the alphabet"
        );
        let mut exact = HashMap::new();
        let mut by_pred = HashMap::new();
        let mut by_self = HashMap::new();
        let mut full_wild = None;
        for (i, rule) in rules.iter().enumerate() {
            match (rule.pred, rule.own) {
                (PredPat::Is(p), SelfPat::Is(q)) => {
                    exact.entry((p, q)).or_insert(rule.to);
                }
                (PredPat::Is(p), SelfPat::Any) => {
                    by_pred.entry(p).or_insert((i, rule.to));
                }
                (PredPat::Any, SelfPat::Is(q)) => {
                    by_self.entry(q).or_insert((i, rule.to));
                }
                (PredPat::Any, SelfPat::Any) => {
                    if full_wild.is_none() {
                        full_wild = Some((i, rule.to));
                    }
                }
            }
        }
        DistributedAutomaton {
            alphabet,
            states,
            init,
            accepting,
            rules,
            default,
            exact,
            by_pred,
            by_self,
            full_wild,
            name: name.into(),
            passes: Vec::new(),
        }
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_id(&self, name: &str) -> Result<DaStateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| DaStateId(i as u32))
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn init_state(&self, sym: Sym) -> DaStateId {
        self.init[sym.0 as usize]
    }

    pub fn init_map(&self) -> &[DaStateId] {
        &self.init
    }

    pub fn accepting(&self) -> &BTreeSet<DaStateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: DaStateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn rules(&self) -> &[DaRule] {
        &self.rules
    }

    pub fn default_state(&self) -> Option<DaStateId> {
        self.default
    }

    /// Resolves `δ(pred, own)`.
    pub fn step(&self, pred: Pred, own: DaStateId) -> Result<DaStateId> {
        if let Some(&to) = self.exact.get(&(pred, own)) {
            return Ok(to);
        }
        let a = self.by_pred.get(&pred);
        let b = self.by_self.get(&own);
        match (a, b) {
            (Some(&(i, t)), Some(&(j, u))) => return Ok(if i < j { t } else { u }),
            (Some(&(_, t)), None) => return Ok(t),
            (None, Some(&(_, u))) => return Ok(u),
            (None, None) => {}
        }
        if let Some((_, t)) = self.full_wild {
            return Ok(t);
        }
        if let Some(t) = self.default {
            return Ok(t);
        }
        Err(Error::NonTotalAutomaton {
            pred: pred.map(|p| self.states[p.0 as usize].clone()),
            state: self.states[own.0 as usize].clone(),
        })
    }

    /// All states `δ(p, own)` can reach over every predecessor view, without
    /// enumerating the predecessor set: exact entries are read off directly
    /// and all remaining views share the best generic entry.
    pub fn successor_images(&self, own: DaStateId) -> Result<Vec<DaStateId>> {
        let mut images = BTreeSet::new();
        let mut covered: usize = 0;
        let self_rule = self.by_self.get(&own).copied();
        for (&(p, q), &to) in &self.exact {
            if q == own {
                images.insert(to);
                covered += 1;
                let _ = p;
            }
        }
        for (&p, &(i, t)) in &self.by_pred {
            if !self.exact.contains_key(&(p, own)) {
                let winner = match self_rule {
                    Some((j, u)) if j < i => u,
                    _ => t,
                };
                images.insert(winner);
                covered += 1;
            }
        }
        let total_preds = self.states.len() + 1;
        if covered < total_preds {
            let generic = self_rule
                .map(|(_, u)| u)
                .or(self.full_wild.map(|(_, t)| t))
                .or(self.default);
            match generic {
                Some(t) => {
                    images.insert(t);
                }
                None => {
                    return Err(Error::NonTotalAutomaton {
                        pred: None,
                        state: self.states[own.0 as usize].clone(),
                    })
                }
            }
        }
        Ok(images.into_iter().collect())
    }
}

/// Per-node states of the path at one instant, left to right.
pub type PathConfiguration = Vec<DaStateId>;

pub fn init_configuration(a: &DistributedAutomaton, word: &Word) -> Result<PathConfiguration> {
    if !word.fits(&a.alphabet) {
        return Err(Error::UnknownSymbol(format!("{word}")));
    }
    Ok(word.symbols().iter().map(|&s| a.init_state(s)).collect())
}

pub fn step_configuration(
    a: &DistributedAutomaton,
    config: &PathConfiguration,
) -> Result<PathConfiguration> {
    let mut next = Vec::with_capacity(config.len());
    for (i, &own) in config.iter().enumerate() {
        let pred = if i == 0 { None } else { Some(config[i - 1]) };
        next.push(a.step(pred, own)?);
    }
    Ok(next)
}

/// A finite prefix of the infinite synchronous run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRun {
    pub configs: Vec<PathConfiguration>,
    /// Set when the run reached a fixpoint configuration.
    pub stabilized: bool,
    /// `(start, period)` when a non-fixpoint configuration repeat was found.
    pub cycle: Option<(usize, usize)>,
}

/// Runs `a` on `word` for at most `max_rounds` steps, stopping early at a
/// fixpoint or on any configuration repeat.
pub fn da_run(a: &DistributedAutomaton, word: &Word, max_rounds: usize) -> Result<PathRun> {
    let mut configs = vec![init_configuration(a, word)?];
    let mut seen: HashMap<PathConfiguration, usize> = HashMap::new();
    seen.insert(configs[0].clone(), 0);
    let mut stabilized = false;
    let mut cycle = None;
    for t in 0..max_rounds {
        let next = step_configuration(a, &configs[t])?;
        if next == configs[t] {
            stabilized = true;
            break;
        }
        if let Some(&start) = seen.get(&next) {
            cycle = Some((start, t + 1 - start));
            break;
        }
        seen.insert(next.clone(), t + 1);
        configs.push(next);
    }
    Ok(PathRun {
        configs,
        stabilized,
        cycle,
    })
}

/// Outcome of the acceptance decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    Accept,
    RejectStable,
    BudgetExceeded,
}

/// Decides acceptance exactly: the run is deterministic over the finite
/// configuration space, so it is eventually periodic, and the set of states
/// the last node ever visits is closed once a configuration repeats. A
/// budget smaller than that horizon yields `BudgetExceeded`.
pub fn da_accepts(
    a: &DistributedAutomaton,
    word: &Word,
    budget: Option<usize>,
) -> Result<Acceptance> {
    let mut config = init_configuration(a, word)?;
    let mut seen: HashSet<PathConfiguration> = HashSet::new();
    let mut rounds: usize = 0;
    loop {
        if a.is_accepting(*config.last().expect("nonempty word")) {
            return Ok(Acceptance::Accept);
        }
        if !seen.insert(config.clone()) {
            return Ok(Acceptance::RejectStable);
        }
        if let Some(b) = budget {
            if rounds >= b {
                return Ok(Acceptance::BudgetExceeded);
            }
        }
        config = step_configuration(a, &config)?;
        rounds += 1;
    }
}

/// The automaton's state diagram: edges `q → q″` for `q″ = δ(p, q) ≠ q`,
/// plus the set of looping states (`δ(p, q) = q` for some view `p`).
#[derive(Debug, Clone)]
pub struct StateDiagram {
    pub edges: Vec<Vec<DaStateId>>,
    pub looping: Vec<bool>,
}

pub fn build_state_diagram(a: &DistributedAutomaton) -> Result<StateDiagram> {
    let n = a.state_count();
    let mut edges = Vec::with_capacity(n);
    let mut looping = vec![false; n];
    for q in 0..n {
        let q = DaStateId(q as u32);
        let images = a.successor_images(q)?;
        let mut out = Vec::new();
        for to in images {
            if to == q {
                looping[q.0 as usize] = true;
            } else {
                out.push(to);
            }
        }
        edges.push(out);
    }
    Ok(StateDiagram { edges, looping })
}

impl StateDiagram {
    /// Topological order of the diagram, or `None` if it has a directed
    /// cycle (self-loops excluded by construction).
    fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.edges.len();
        let mut indeg = vec![0usize; n];
        for out in &self.edges {
            for &t in out {
                indeg[t.0 as usize] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            order.push(v);
            for &t in &self.edges[v] {
                indeg[t.0 as usize] -= 1;
                if indeg[t.0 as usize] == 0 {
                    queue.push(t.0 as usize);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Structural facts about the trace set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMetrics {
    pub quasi_acyclic: bool,
    pub max_trace_length: Option<usize>,
    pub max_loops_per_trace: Option<usize>,
}

pub fn is_quasi_acyclic(a: &DistributedAutomaton) -> Result<bool> {
    Ok(build_state_diagram(a)?.topo_order().is_some())
}

/// Node count of the longest trace, by longest-path dynamic programming on
/// the acyclic state diagram.
pub fn max_trace_length(a: &DistributedAutomaton) -> Result<usize> {
    let diagram = build_state_diagram(a)?;
    let order = diagram.topo_order().ok_or(Error::NotQuasiAcyclic)?;
    let mut len = vec![1usize; diagram.edges.len()];
    for &v in order.iter().rev() {
        for &t in &diagram.edges[v] {
            len[v] = len[v].max(1 + len[t.0 as usize]);
        }
    }
    Ok(len.into_iter().max().unwrap_or(1))
}

/// Maximum number of looping states along any trace. Every trace ends in a
/// looping state, so the result is at least 1.
pub fn max_loops_per_trace(a: &DistributedAutomaton) -> Result<usize> {
    let diagram = build_state_diagram(a)?;
    let order = diagram.topo_order().ok_or(Error::NotQuasiAcyclic)?;
    let mut loops = vec![0usize; diagram.edges.len()];
    for &v in order.iter().rev() {
        let own = diagram.looping[v] as usize;
        loops[v] = own;
        for &t in &diagram.edges[v] {
            loops[v] = loops[v].max(own + loops[t.0 as usize]);
        }
    }
    Ok(loops.into_iter().max().unwrap_or(0))
}

pub fn trace_metrics(a: &DistributedAutomaton) -> Result<TraceMetrics> {
    if is_quasi_acyclic(a)? {
        Ok(TraceMetrics {
            quasi_acyclic: true,
            max_trace_length: Some(max_trace_length(a)?),
            max_loops_per_trace: Some(max_loops_per_trace(a)?),
        })
    } else {
        Ok(TraceMetrics {
            quasi_acyclic: false,
            max_trace_length: None,
            max_loops_per_trace: None,
        })
    }
}

/// For a quasi-acyclic automaton with state set `Q`, every node `i` of every
/// word of length `n` keeps its state from round `|Q|·i` on; `|Q|·n` bounds
/// the whole path.
pub fn stabilization_round_bound(a: &DistributedAutomaton, n: usize) -> Result<usize> {
    if !is_quasi_acyclic(a)? {
        return Err(Error::NotQuasiAcyclic);
    }
    Ok(a.state_count() * n)
}

/// Well-formedness diagnostics for automata, mirroring `validate_machine`.
pub fn validate_automaton(a: &DistributedAutomaton) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = a.state_count();
    let valid = |q: DaStateId| (q.0 as usize) < n;

    for (i, &q) in a.init_map().iter().enumerate() {
        if !valid(q) {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!(
                    "initialization of symbol {:?} references an unknown state",
                    a.alphabet.names()[i]
                ),
            });
        }
    }
    for &q in a.accepting() {
        if !valid(q) {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!("accepting state #{} does not exist", q.0),
            });
        }
    }
    for (i, rule) in a.rules().iter().enumerate() {
        let mut refs = vec![rule.to];
        if let PredPat::Is(Some(p)) = rule.pred {
            refs.push(p);
        }
        if let SelfPat::Is(q) = rule.own {
            refs.push(q);
        }
        if refs.into_iter().any(|q| !valid(q)) {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!("transition #{i} references an unknown state"),
            });
        }
    }
    if let Some(d) = a.default_state() {
        if !valid(d) {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: "default entry references an unknown state".into(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }

    // Ambiguity: equally specific overlapping entries that disagree. Only
    // the first entry of each exact key or wildcard slot is live, so clashes
    // are checked against those.
    for (i, rule) in a.rules().iter().enumerate() {
        if rule.specificity() != 1 {
            continue;
        }
        match (rule.pred, rule.own) {
            (PredPat::Is(_), SelfPat::Any) => {
                for (j, other) in a.rules().iter().enumerate().skip(i + 1) {
                    if matches!((other.pred, other.own), (PredPat::Any, SelfPat::Is(_)))
                        && other.to != rule.to
                    {
                        out.push(Diagnostic {
                            kind: DiagnosticKind::Ambiguous,
                            message: format!(
                                "transitions #{i} and #{j} are equally specific, overlap, and disagree"
                            ),
                        });
                    }
                }
            }
            (PredPat::Any, SelfPat::Is(_)) => {
                for (j, other) in a.rules().iter().enumerate().skip(i + 1) {
                    if matches!((other.pred, other.own), (PredPat::Is(_), SelfPat::Any))
                        && other.to != rule.to
                    {
                        out.push(Diagnostic {
                            kind: DiagnosticKind::Ambiguous,
                            message: format!(
                                "transitions #{i} and #{j} are equally specific, overlap, and disagree"
                            ),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    let mut exact_seen: HashMap<(PredPat, SelfPat), DaStateId> = HashMap::new();
    for (i, rule) in a.rules().iter().enumerate() {
        if let Some(&prev) = exact_seen.get(&(rule.pred, rule.own)) {
            if prev != rule.to {
                out.push(Diagnostic {
                    kind: DiagnosticKind::Ambiguous,
                    message: format!("transition #{i} contradicts an earlier identical pattern"),
                });
            }
        } else {
            exact_seen.insert((rule.pred, rule.own), rule.to);
        }
    }

    // Totality per own-state: some generic entry, or every view exactly.
    if a.default_state().is_none() {
        for q in 0..n {
            let q = DaStateId(q as u32);
            if a.step(None, q).is_err()
                || (0..n).any(|p| a.step(Some(DaStateId(p as u32)), q).is_err())
            {
                out.push(Diagnostic {
                    kind: DiagnosticKind::NonTotal,
                    message: format!(
                        "state {:?} lacks transitions for some predecessor views and there is no default",
                        a.state_names()[q.0 as usize]
                    ),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::example_da;
    use crate::foundations::Word;

    fn wd(a: &DistributedAutomaton, s: &str) -> Word {
        Word::parse(&a.alphabet, s).unwrap()
    }

    fn names(a: &DistributedAutomaton, config: &PathConfiguration) -> Vec<String> {
        config
            .iter()
            .map(|&q| a.state_names()[q.0 as usize].clone())
            .collect()
    }

    #[test]
    fn initialization_per_label() {
        let a = example_da();
        let c = init_configuration(&a, &wd(&a, "abc")).unwrap();
        assert_eq!(names(&a, &c), ["-a", "ab", "b-"]);
        let single = init_configuration(&a, &wd(&a, "b")).unwrap();
        assert_eq!(names(&a, &single), ["ab"]);
        let row0 = init_configuration(&a, &wd(&a, "aabbac")).unwrap();
        assert_eq!(names(&a, &row0), ["-a", "-a", "ab", "ab", "-a", "b-"]);
    }

    #[test]
    fn first_step_of_the_accepting_run() {
        let a = example_da();
        let c0 = init_configuration(&a, &wd(&a, "aabbac")).unwrap();
        let c1 = step_configuration(&a, &c0).unwrap();
        assert_eq!(names(&a, &c1), ["⊤", "-a", "--", "ab", "-b", "ba"]);
    }

    #[test]
    fn constant_automaton_is_a_fixpoint() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = DistributedAutomaton::new(
            alphabet,
            vec!["q".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![DaRule {
                pred: PredPat::Any,
                own: SelfPat::Any,
                to: DaStateId(0),
            }],
            None,
            "const",
        );
        let w = Word::parse(&a.alphabet, "aaa").unwrap();
        let run = da_run(&a, &w, 10).unwrap();
        assert!(run.stabilized);
        assert_eq!(run.configs.len(), 1);
    }

    #[test]
    fn acceptance_verdicts() {
        let a = example_da();
        assert_eq!(
            da_accepts(&a, &wd(&a, "aabbac"), None).unwrap(),
            Acceptance::Accept
        );
        assert_eq!(
            da_accepts(&a, &wd(&a, "abacac"), None).unwrap(),
            Acceptance::RejectStable
        );
        assert_eq!(
            da_accepts(&a, &wd(&a, "abacac"), Some(1)).unwrap(),
            Acceptance::BudgetExceeded
        );
    }

    #[test]
    fn reject_without_accepting_states() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = DistributedAutomaton::new(
            alphabet,
            vec!["q".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![],
            Some(DaStateId(0)),
            "noacc",
        );
        let w = Word::parse(&a.alphabet, "aa").unwrap();
        assert_eq!(da_accepts(&a, &w, None).unwrap(), Acceptance::RejectStable);
    }

    #[test]
    fn diagram_of_the_running_example() {
        let a = example_da();
        let diagram = build_state_diagram(&a).unwrap();
        let id = |s: &str| a.state_id(s).unwrap();
        // The node-level oscillation (-,-) → (-,b) → (-,-) shows up as a
        // two-cycle in the diagram.
        assert!(diagram.edges[id("--").0 as usize].contains(&id("-b")));
        assert!(diagram.edges[id("-b").0 as usize].contains(&id("--")));
        assert!(!is_quasi_acyclic(&a).unwrap());
        assert!(matches!(
            max_trace_length(&a),
            Err(Error::NotQuasiAcyclic)
        ));
    }

    #[test]
    fn chain_metrics() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        // q1 → q2 with a self-loop on q2.
        let a = DistributedAutomaton::new(
            alphabet,
            vec!["q1".into(), "q2".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![
                DaRule {
                    pred: PredPat::Any,
                    own: SelfPat::Is(DaStateId(0)),
                    to: DaStateId(1),
                },
                DaRule {
                    pred: PredPat::Any,
                    own: SelfPat::Is(DaStateId(1)),
                    to: DaStateId(1),
                },
            ],
            None,
            "chain",
        );
        let diagram = build_state_diagram(&a).unwrap();
        assert_eq!(diagram.edges[0], vec![DaStateId(1)]);
        assert!(diagram.edges[1].is_empty());
        assert_eq!(diagram.looping, vec![false, true]);
        assert!(is_quasi_acyclic(&a).unwrap());
        assert_eq!(max_trace_length(&a).unwrap(), 2);
        assert_eq!(max_loops_per_trace(&a).unwrap(), 1);
        assert_eq!(stabilization_round_bound(&a, 3).unwrap(), 6);
    }

    #[test]
    fn identity_automaton_has_no_edges() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = DistributedAutomaton::new(
            alphabet,
            vec!["p".into(), "q".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![
                DaRule {
                    pred: PredPat::Any,
                    own: SelfPat::Is(DaStateId(0)),
                    to: DaStateId(0),
                },
                DaRule {
                    pred: PredPat::Any,
                    own: SelfPat::Is(DaStateId(1)),
                    to: DaStateId(1),
                },
            ],
            None,
            "id",
        );
        let diagram = build_state_diagram(&a).unwrap();
        assert!(diagram.edges.iter().all(|e| e.is_empty()));
        assert!(diagram.looping.iter().all(|&l| l));
        assert_eq!(max_trace_length(&a).unwrap(), 1);
    }

    #[test]
    fn single_node_run_detects_cycles() {
        // A two-state flip automaton is not quasi-acyclic; on a single node
        // the run must report a cycle within |Q| + 1 steps.
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = DistributedAutomaton::new(
            alphabet,
            vec!["p".into(), "q".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![
                DaRule {
                    pred: PredPat::Any,
                    own: SelfPat::Is(DaStateId(0)),
                    to: DaStateId(1),
                },
                DaRule {
                    pred: PredPat::Any,
                    own: SelfPat::Is(DaStateId(1)),
                    to: DaStateId(0),
                },
            ],
            None,
            "flip",
        );
        let w = Word::parse(&a.alphabet, "a").unwrap();
        let run = da_run(&a, &w, 10).unwrap();
        assert_eq!(run.cycle, Some((0, 2)));
        assert!(run.configs.len() <= 3);
    }

    #[test]
    fn validation_flags_partial_tables() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = DistributedAutomaton::new(
            alphabet,
            vec!["p".into(), "q".into()],
            vec![DaStateId(0)],
            BTreeSet::new(),
            vec![DaRule {
                pred: PredPat::Any,
                own: SelfPat::Is(DaStateId(0)),
                to: DaStateId(1),
            }],
            None,
            "partial",
        );
        let diags = validate_automaton(&a);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::NonTotal);
    }
}
