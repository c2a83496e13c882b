//! Counter machines: expression-based counter updates, cutoff-windowed
//! guards, run semantics, acceptance, and the sumless/copyless classifiers.
//!
//! A machine reads a word once from left to right. Each step looks up the
//! transition table at the current state, the truncated valuation
//! `cutoff(-r, r) ∘ ν`, and the input symbol, then moves to the next state
//! and replaces every counter by the value of its update expression under
//! the old valuation. Tables are stored sparsely: guard coordinates may be
//! wildcards, resolution is most-specific-first with declaration order
//! breaking ties, and an optional default entry catches the rest.

use crate::foundations::{cutoff, Alphabet, Sym, Word};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

/// Index of a machine state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

/// Index of a counter variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CounterId(pub u32);

/// A counter expression `x_1 + … + x_m + c`, flattened to a multiset of
/// counter variables plus one constant. The multiset may repeat a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CounterExpr {
    vars: Vec<CounterId>,
    constant: i64,
}

impl CounterExpr {
    pub fn new(mut vars: Vec<CounterId>, constant: i64) -> Self {
        vars.sort();
        CounterExpr { vars, constant }
    }

    pub fn constant(c: i64) -> Self {
        CounterExpr {
            vars: Vec::new(),
            constant: c,
        }
    }

    pub fn var_plus(x: CounterId, c: i64) -> Self {
        CounterExpr {
            vars: vec![x],
            constant: c,
        }
    }

    pub fn vars(&self) -> &[CounterId] {
        &self.vars
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }
}

/// Total update function: one expression per counter, indexed by counter id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Update {
    exprs: Vec<CounterExpr>,
}

impl Update {
    pub fn new(exprs: Vec<CounterExpr>) -> Self {
        Update { exprs }
    }

    /// The identity update `x := x + 0` on `k` counters.
    pub fn identity(k: usize) -> Self {
        Update {
            exprs: (0..k)
                .map(|i| CounterExpr::var_plus(CounterId(i as u32), 0))
                .collect(),
        }
    }

    pub fn expr(&self, x: CounterId) -> &CounterExpr {
        &self.exprs[x.0 as usize]
    }

    pub fn exprs(&self) -> &[CounterExpr] {
        &self.exprs
    }
}

/// Total assignment of integer values to the machine's counters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: Vec<BigInt>,
}

impl Valuation {
    pub fn zero(k: usize) -> Self {
        Valuation {
            values: vec![BigInt::from(0); k],
        }
    }

    pub fn new(values: Vec<BigInt>) -> Self {
        Valuation { values }
    }

    pub fn get(&self, x: CounterId) -> &BigInt {
        &self.values[x.0 as usize]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A snapshot `⟨q, ν⟩` of a machine run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryConfig {
    pub state: StateId,
    pub valuation: Valuation,
}

/// One guard coordinate: an exact value or a wildcard.
pub type GuardAtom = Option<i64>;

/// A sparse transition-table entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub from: StateId,
    /// One atom per counter; `None` matches any value.
    pub guard: Vec<GuardAtom>,
    pub symbol: Sym,
    pub to: StateId,
    pub update: Update,
}

impl Rule {
    fn specificity(&self) -> usize {
        self.guard.iter().filter(|g| g.is_some()).count()
    }

    fn matches(&self, key: &[i64]) -> bool {
        self.guard
            .iter()
            .zip(key)
            .all(|(g, v)| g.map_or(true, |g| g == *v))
    }
}

/// Deterministic counter machine with `r`-access (Def. 1 shape).
#[derive(Debug, Clone)]
pub struct CounterMachine {
    pub alphabet: Alphabet,
    states: Vec<String>,
    counters: Vec<String>,
    initial: StateId,
    access: i64,
    accepting: BTreeSet<StateId>,
    rules: Vec<Rule>,
    default: Option<(StateId, Update)>,
    /// Rule indices per (state, symbol), sorted most-specific-first then by
    /// declaration order.
    buckets: HashMap<(StateId, Sym), Vec<usize>>,
    pub name: String,
    pub passes: Vec<String>,
}

impl CounterMachine {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        counters: Vec<String>,
        initial: StateId,
        access: i64,
        accepting: BTreeSet<StateId>,
        rules: Vec<Rule>,
        default: Option<(StateId, Update)>,
        name: impl Into<String>,
    ) -> Self {
        let mut buckets: HashMap<(StateId, Sym), Vec<usize>> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            buckets.entry((rule.from, rule.symbol)).or_default().push(i);
        }
        for bucket in buckets.values_mut() {
            bucket.sort_by_key(|&i| (rules[i].guard.len() - rules[i].specificity(), i));
        }
        CounterMachine {
            alphabet,
            states,
            counters,
            initial,
            access,
            accepting,
            rules,
            default,
            buckets,
            name: name.into(),
            passes: Vec::new(),
        }
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn counter_names(&self) -> &[String] {
        &self.counters
    }

    pub fn counter_count(&self) -> usize {
        self.counters.len()
    }

    pub fn access(&self) -> i64 {
        self.access
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn default_entry(&self) -> Option<&(StateId, Update)> {
        &self.default
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn counter_id(&self, name: &str) -> Result<CounterId> {
        self.counters
            .iter()
            .position(|s| s == name)
            .map(|i| CounterId(i as u32))
            .ok_or_else(|| Error::UnknownCounter(name.to_string()))
    }

    /// The truncated view `cutoff(-r, r) ∘ ν` the transition table is keyed on.
    pub fn truncate(&self, valuation: &Valuation) -> Vec<i64> {
        valuation
            .values()
            .iter()
            .map(|v| cut_big(-self.access, self.access, v))
            .collect()
    }

    /// Resolves the table at `(state, truncated valuation, symbol)`.
    pub fn resolve(&self, state: StateId, key: &[i64], symbol: Sym) -> Result<(StateId, &Update)> {
        if let Some(bucket) = self.buckets.get(&(state, symbol)) {
            for &i in bucket {
                if self.rules[i].matches(key) {
                    return Ok((self.rules[i].to, &self.rules[i].update));
                }
            }
        }
        if let Some((to, update)) = &self.default {
            return Ok((*to, update));
        }
        Err(Error::NonTotalMachine {
            state: self.states[state.0 as usize].clone(),
            guard: key.to_vec(),
            symbol: self.alphabet.name(symbol).to_string(),
        })
    }
}

fn cut_big(lo: i64, hi: i64, v: &BigInt) -> i64 {
    if *v < BigInt::from(lo) {
        lo
    } else if *v > BigInt::from(hi) {
        hi
    } else {
        v.to_i64().expect("value within [lo, hi] fits in i64")
    }
}

/// Extended-valuation semantics: the sum of the expression's variables under
/// `valuation`, plus its constant.
pub fn evaluate_expression(valuation: &Valuation, expr: &CounterExpr) -> Result<BigInt> {
    let mut acc = BigInt::from(expr.constant);
    for &x in expr.vars() {
        if (x.0 as usize) >= valuation.len() {
            return Err(Error::UnknownCounter(format!("#{}", x.0)));
        }
        acc += valuation.get(x);
    }
    Ok(acc)
}

/// The set of distinct variables of an expression together with its constant.
pub fn decompose_expression(expr: &CounterExpr) -> (BTreeSet<CounterId>, i64) {
    (
        expr.vars().iter().copied().collect(),
        expr.constant_part(),
    )
}

/// One step of the run semantics.
pub fn machine_step(m: &CounterMachine, cfg: &MemoryConfig, symbol: Sym) -> Result<MemoryConfig> {
    let key = m.truncate(&cfg.valuation);
    let (to, update) = m.resolve(cfg.state, &key, symbol)?;
    let values = (0..m.counter_count())
        .map(|i| evaluate_expression(&cfg.valuation, update.expr(CounterId(i as u32))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MemoryConfig {
        state: to,
        valuation: Valuation::new(values),
    })
}

/// The full run `⟨μ_0, …, μ_n⟩` of `m` on `w`.
#[derive(Debug, Clone)]
pub struct MachineRun {
    pub configs: Vec<MemoryConfig>,
}

impl MachineRun {
    pub fn final_config(&self) -> &MemoryConfig {
        self.configs.last().expect("runs are nonempty")
    }
}

pub fn machine_run(m: &CounterMachine, word: &Word) -> Result<MachineRun> {
    if !word.fits(&m.alphabet) {
        return Err(Error::UnknownSymbol(format!("{word}")));
    }
    let mut configs = Vec::with_capacity(word.len() + 1);
    configs.push(MemoryConfig {
        state: m.initial,
        valuation: Valuation::zero(m.counter_count()),
    });
    for &sym in word.symbols() {
        let next = machine_step(m, configs.last().unwrap(), sym)?;
        configs.push(next);
    }
    Ok(MachineRun { configs })
}

pub fn machine_accepts(m: &CounterMachine, word: &Word) -> Result<bool> {
    Ok(m.is_accepting(machine_run(m, word)?.final_config().state))
}

fn all_updates(m: &CounterMachine) -> impl Iterator<Item = &Update> {
    m.rules()
        .iter()
        .map(|r| &r.update)
        .chain(m.default_entry().map(|(_, u)| u))
}

/// True iff no update expression sums more than one counter variable
/// (copying one counter into several expressions is still allowed).
pub fn is_sumless(m: &CounterMachine) -> bool {
    all_updates(m).all(|u| u.exprs().iter().all(|e| e.vars().len() <= 1))
}

/// True iff within each update function every counter variable occurs at
/// most once across all expressions combined (sums of distinct counters are
/// still allowed).
pub fn is_copyless(m: &CounterMachine) -> bool {
    all_updates(m).all(|u| {
        let mut seen = HashSet::new();
        u.exprs()
            .iter()
            .flat_map(|e| e.vars().iter())
            .all(|&x| seen.insert(x))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    OutOfRangeConstant,
    NonTotal,
    UnknownReference,
    Ambiguous,
    TotalityUndecided,
}

/// A well-formedness finding. Diagnostics are data, not errors.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

/// Number of guard keys enumerated before the totality check gives up.
const TOTALITY_BUDGET: u128 = 1 << 21;

/// Reports totality violations, out-of-range constants, malformed entries,
/// and ambiguous resolution. An empty list means the machine is well-formed.
pub fn validate_machine(m: &CounterMachine) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let k = m.counter_count();
    let r = m.access;

    if r < 1 {
        out.push(Diagnostic {
            kind: DiagnosticKind::OutOfRangeConstant,
            message: format!("access must be at least 1, found {r}"),
        });
    }
    if (m.initial.0 as usize) >= m.states.len() {
        out.push(Diagnostic {
            kind: DiagnosticKind::UnknownReference,
            message: format!("initial state #{} does not exist", m.initial.0),
        });
    }
    for q in &m.accepting {
        if (q.0 as usize) >= m.states.len() {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!("accepting state #{} does not exist", q.0),
            });
        }
    }

    let mut check_update = |update: &Update, what: &dyn Fn() -> String| {
        if update.exprs().len() != k {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!("{} must assign exactly the {k} machine counters", what()),
            });
            return;
        }
        for (i, e) in update.exprs().iter().enumerate() {
            if e.constant_part().abs() > r {
                out.push(Diagnostic {
                    kind: DiagnosticKind::OutOfRangeConstant,
                    message: format!(
                        "{}: expression for counter {:?} has constant {} outside [-{r}, {r}]",
                        what(),
                        m.counters[i],
                        e.constant_part()
                    ),
                });
            }
            for x in e.vars() {
                if (x.0 as usize) >= k {
                    out.push(Diagnostic {
                        kind: DiagnosticKind::UnknownReference,
                        message: format!("{}: unknown counter #{}", what(), x.0),
                    });
                }
            }
        }
    };

    for (i, rule) in m.rules.iter().enumerate() {
        if (rule.from.0 as usize) >= m.states.len() || (rule.to.0 as usize) >= m.states.len() {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!("transition #{i} references an unknown state"),
            });
        }
        if rule.guard.len() != k {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: format!("transition #{i} guard must cover all {k} counters"),
            });
            continue;
        }
        for (c, g) in rule.guard.iter().enumerate() {
            if let Some(v) = g {
                if v.abs() > r {
                    out.push(Diagnostic {
                        kind: DiagnosticKind::OutOfRangeConstant,
                        message: format!(
                            "transition #{i} guards counter {:?} on {v}, outside [-{r}, {r}]",
                            m.counters[c]
                        ),
                    });
                }
            }
        }
        check_update(&rule.update, &|| format!("transition #{i}"));
    }
    if let Some((to, update)) = &m.default {
        if (to.0 as usize) >= m.states.len() {
            out.push(Diagnostic {
                kind: DiagnosticKind::UnknownReference,
                message: "default entry references an unknown state".into(),
            });
        }
        check_update(update, &|| "default entry".to_string());
    }
    if !out.is_empty() {
        return out; // structural problems first; the scans below assume shape
    }

    out.extend(ambiguity_diagnostics(m));
    out.extend(totality_diagnostics(m));
    out
}

/// Two entries are ambiguous when they are equally specific, can match the
/// same key, and disagree on the outcome. Shadowing by a more specific entry
/// is fine; silent order-dependence between peers is not.
fn ambiguity_diagnostics(m: &CounterMachine) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for bucket in m.buckets.values() {
        // Buckets are sorted by ascending wildcard count; peers are adjacent.
        let mut start = 0;
        while start < bucket.len() {
            let spec = m.rules[bucket[start]].specificity();
            let mut end = start;
            while end < bucket.len() && m.rules[bucket[end]].specificity() == spec {
                end += 1;
            }
            let class = &bucket[start..end];
            if spec == m.counter_count() {
                // Fully exact entries overlap only when their guards are equal.
                let mut seen: HashMap<&[GuardAtom], usize> = HashMap::new();
                for &i in class {
                    if let Some(&j) = seen.get(m.rules[i].guard.as_slice()) {
                        if (m.rules[i].to, &m.rules[i].update)
                            != (m.rules[j].to, &m.rules[j].update)
                        {
                            out.push(ambiguity(m, j, i));
                        }
                    } else {
                        seen.insert(m.rules[i].guard.as_slice(), i);
                    }
                }
            } else {
                for (a, &i) in class.iter().enumerate() {
                    for &j in &class[a + 1..] {
                        let compatible = m.rules[i]
                            .guard
                            .iter()
                            .zip(&m.rules[j].guard)
                            .all(|(g, h)| match (g, h) {
                                (Some(g), Some(h)) => g == h,
                                _ => true,
                            });
                        if compatible
                            && (m.rules[i].to, &m.rules[i].update)
                                != (m.rules[j].to, &m.rules[j].update)
                        {
                            out.push(ambiguity(m, i, j));
                        }
                    }
                }
            }
            start = end;
        }
    }
    out
}

fn ambiguity(m: &CounterMachine, i: usize, j: usize) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::Ambiguous,
        message: format!(
            "transitions #{i} and #{j} from state {:?} on {:?} are equally specific, overlap, and disagree",
            m.states[m.rules[i].from.0 as usize],
            m.alphabet.name(m.rules[i].symbol),
        ),
    }
}

fn totality_diagnostics(m: &CounterMachine) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if m.default.is_some() {
        return out;
    }
    let k = m.counter_count() as u32;
    let r = m.access;
    let width = (2 * r + 1) as u128;
    let keys = width.checked_pow(k).unwrap_or(u128::MAX);
    let states_syms = (m.states.len() * m.alphabet.len()) as u128;
    if keys.saturating_mul(states_syms) > TOTALITY_BUDGET {
        out.push(Diagnostic {
            kind: DiagnosticKind::TotalityUndecided,
            message: format!(
                "guard domain has {keys} keys per (state, symbol) and no default entry; \
                 totality was not checked exhaustively"
            ),
        });
        return out;
    }
    let mut key = vec![-r; k as usize];
    for q in 0..m.states.len() {
        for sym in m.alphabet.symbols() {
            key.iter_mut().for_each(|v| *v = -r);
            'keys: loop {
                let covered = m
                    .buckets
                    .get(&(StateId(q as u32), sym))
                    .map(|b| b.iter().any(|&i| m.rules[i].matches(&key)))
                    .unwrap_or(false);
                if !covered {
                    out.push(Diagnostic {
                        kind: DiagnosticKind::NonTotal,
                        message: format!(
                            "no entry for state {:?}, guard {:?}, symbol {:?} and no default",
                            m.states[q],
                            key,
                            m.alphabet.name(sym)
                        ),
                    });
                    return out; // one witness is enough
                }
                for i in 0..key.len() {
                    key[i] += 1;
                    if key[i] <= r {
                        continue 'keys;
                    }
                    key[i] = -r;
                }
                break;
            }
            if k == 0 {
                // single empty key already checked above
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::example_cm;
    use crate::foundations::enumerate_words;

    fn ids(m: &CounterMachine) -> (StateId, StateId, CounterId, CounterId) {
        (
            m.state_id("s").unwrap(),
            m.state_id("r").unwrap(),
            m.counter_id("x").unwrap(),
            m.counter_id("y").unwrap(),
        )
    }

    #[test]
    fn expression_evaluation() {
        let nu = Valuation::new(vec![BigInt::from(5), BigInt::from(-2)]);
        let e = CounterExpr::new(vec![CounterId(0), CounterId(1)], 1);
        assert_eq!(evaluate_expression(&nu, &e).unwrap(), BigInt::from(4));
        assert_eq!(
            evaluate_expression(&nu, &CounterExpr::constant(0)).unwrap(),
            BigInt::from(0)
        );
        let twice = CounterExpr::new(vec![CounterId(0), CounterId(0)], -1);
        let nu3 = Valuation::new(vec![BigInt::from(3)]);
        assert_eq!(evaluate_expression(&nu3, &twice).unwrap(), BigInt::from(5));
    }

    #[test]
    fn expression_decomposition() {
        let e = CounterExpr::new(vec![CounterId(0), CounterId(1)], 1);
        let (vars, c) = decompose_expression(&e);
        assert_eq!(vars.len(), 2);
        assert_eq!(c, 1);
        let (vars, c) = decompose_expression(&CounterExpr::constant(0));
        assert!(vars.is_empty());
        assert_eq!(c, 0);
        let (vars, c) = decompose_expression(&CounterExpr::new(vec![CounterId(0); 2], 2));
        assert_eq!(vars.len(), 1);
        assert_eq!(c, 2);
    }

    #[test]
    fn steps_follow_the_running_example() {
        let m = example_cm();
        let (s, r, _, _) = ids(&m);
        let a = m.alphabet.lookup("a").unwrap();
        let b = m.alphabet.lookup("b").unwrap();
        let zero = MemoryConfig {
            state: s,
            valuation: Valuation::zero(2),
        };
        let after_a = machine_step(&m, &zero, a).unwrap();
        assert_eq!(after_a.state, s);
        assert_eq!(after_a.valuation.values(), &[1.into(), 0.into()]);

        let after_b = machine_step(&m, &zero, b).unwrap();
        assert_eq!(after_b.state, r);
        assert_eq!(after_b.valuation.values(), &[0.into(), 0.into()]);

        let three = MemoryConfig {
            state: s,
            valuation: Valuation::new(vec![3.into(), 0.into()]),
        };
        let after = machine_step(&m, &three, b).unwrap();
        assert_eq!(after.state, s);
        assert_eq!(after.valuation.values(), &[2.into(), 1.into()]);
    }

    #[test]
    fn run_on_single_symbol() {
        let m = example_cm();
        let w = Word::parse(&m.alphabet, "a").unwrap();
        let run = machine_run(&m, &w).unwrap();
        assert_eq!(run.configs.len(), 2);
        assert_eq!(run.configs[1].valuation.values(), &[1.into(), 0.into()]);
    }

    #[test]
    fn acceptance_matches_the_running_language() {
        let m = example_cm();
        for (w, want) in [("aaabbc", true), ("aabbac", true), ("abacac", false)] {
            let w = Word::parse(&m.alphabet, w).unwrap();
            assert_eq!(machine_accepts(&m, &w).unwrap(), want);
        }
        let abacac = Word::parse(&m.alphabet, "abacac").unwrap();
        let run = machine_run(&m, &abacac).unwrap();
        assert_eq!(run.final_config().state, m.state_id("r").unwrap());
    }

    #[test]
    fn classifier_flags() {
        let m = example_cm();
        assert!(is_sumless(&m));
        assert!(is_copyless(&m));
        assert!(validate_machine(&m).is_empty());
    }

    #[test]
    fn sum_and_copy_violations() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let mk = |exprs: Vec<CounterExpr>| {
            CounterMachine::new(
                alphabet.clone(),
                vec!["q".into()],
                vec!["x".into(), "y".into(), "z".into()],
                StateId(0),
                1,
                BTreeSet::new(),
                vec![],
                Some((StateId(0), Update::new(exprs))),
                "t",
            )
        };
        // x := y + z + 0 sums two counters.
        let summing = mk(vec![
            CounterExpr::new(vec![CounterId(1), CounterId(2)], 0),
            CounterExpr::constant(0),
            CounterExpr::constant(0),
        ]);
        assert!(!is_sumless(&summing));
        assert!(is_copyless(&summing));
        // x := y, z := y copies y twice.
        let copying = mk(vec![
            CounterExpr::var_plus(CounterId(1), 1),
            CounterExpr::constant(0),
            CounterExpr::var_plus(CounterId(1), 0),
        ]);
        assert!(is_sumless(&copying));
        assert!(!is_copyless(&copying));
    }

    #[test]
    fn guard_reads_only_the_truncated_view() {
        // Raising a counter from r+5 to r+9 never changes the chosen entry.
        let m = example_cm();
        let s = m.state_id("s").unwrap();
        let b = m.alphabet.lookup("b").unwrap();
        for extra in [5, 9] {
            let cfg = MemoryConfig {
                state: s,
                valuation: Valuation::new(vec![(1 + extra).into(), 0.into()]),
            };
            let next = machine_step(&m, &cfg, b).unwrap();
            assert_eq!(next.state, s);
            assert_eq!(next.valuation.values()[0], (extra).into());
        }
    }

    #[test]
    fn validation_catches_range_and_totality() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let bad_const = CounterMachine::new(
            alphabet.clone(),
            vec!["q".into()],
            vec!["x".into()],
            StateId(0),
            1,
            BTreeSet::new(),
            vec![],
            Some((StateId(0), Update::new(vec![CounterExpr::constant(2)]))),
            "t",
        );
        let diags = validate_machine(&bad_const);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::OutOfRangeConstant);

        let partial = CounterMachine::new(
            alphabet,
            vec!["q".into()],
            vec!["x".into()],
            StateId(0),
            1,
            BTreeSet::new(),
            vec![Rule {
                from: StateId(0),
                guard: vec![Some(0)],
                symbol: Sym(0),
                to: StateId(0),
                update: Update::identity(1),
            }],
            None,
            "t",
        );
        let diags = validate_machine(&partial);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind, DiagnosticKind::NonTotal);
    }

    #[test]
    fn runs_are_deterministic() {
        let m = example_cm();
        for w in enumerate_words(&m.alphabet, 4) {
            let r1 = machine_run(&m, &w).unwrap();
            let r2 = machine_run(&m, &w).unwrap();
            assert_eq!(r1.configs, r2.configs);
        }
    }

    #[test]
    fn counter_growth_is_linear_for_sumless_machines() {
        let m = example_cm();
        for w in enumerate_words(&m.alphabet, 6) {
            let run = machine_run(&m, &w).unwrap();
            for cfg in &run.configs {
                for v in cfg.valuation.values() {
                    assert!(v.magnitude() <= &(m.access() as u64 * w.len() as u64).into());
                }
            }
        }
    }
}
