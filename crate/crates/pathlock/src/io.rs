//! The JSON device format and its parser/serializer.
//!
//! A device file carries a `kind` tag, the alphabet, states, initial data,
//! accepting set, and a sparse transition list with optional per-coordinate
//! wildcards and an optional default entry. Serialization is canonical:
//! object keys are sorted, states and counters keep declaration order, and
//! transitions are sorted by (state, guard, symbol), so re-serializing a
//! parsed document is byte-identical. Parsing validates the device and
//! rejects ill-formed tables.

use crate::automaton::{
    da_accepts, validate_automaton, Acceptance, DaRule, DaStateId, DistributedAutomaton, PredPat,
    SelfPat,
};
use crate::foundations::{Alphabet, Word};
use crate::machine::{
    machine_accepts, validate_machine, CounterExpr, CounterMachine, GuardAtom, Rule, StateId,
    Update,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Either device kind, as read from or written to a file.
#[derive(Debug, Clone)]
pub enum Device {
    Machine(CounterMachine),
    Automaton(DistributedAutomaton),
}

impl Device {
    pub fn kind(&self) -> &'static str {
        match self {
            Device::Machine(_) => "counter-machine",
            Device::Automaton(_) => "distributed-automaton",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Device::Machine(m) => &m.name,
            Device::Automaton(a) => &a.name,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Device::Machine(m) => &m.alphabet,
            Device::Automaton(a) => &a.alphabet,
        }
    }

    /// Acceptance of `word`; exact for both kinds.
    pub fn accepts(&self, word: &Word) -> Result<bool> {
        match self {
            Device::Machine(m) => machine_accepts(m, word),
            Device::Automaton(a) => match da_accepts(a, word, None)? {
                Acceptance::Accept => Ok(true),
                Acceptance::RejectStable => Ok(false),
                Acceptance::BudgetExceeded => unreachable!("no budget was supplied"),
            },
        }
    }
}

// Wire shapes. Field declaration order is alphabetical so the emitted JSON
// has sorted keys.

#[derive(Debug, Serialize, Deserialize)]
struct ExprDto {
    #[serde(rename = "const")]
    constant: i64,
    vars: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum GuardValueDto {
    Int(i64),
    Star(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct CmRuleDto {
    from: String,
    guard: BTreeMap<String, GuardValueDto>,
    symbol: String,
    to: String,
    update: BTreeMap<String, ExprDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CmDefaultDto {
    to: String,
    update: BTreeMap<String, ExprDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MachineDto {
    accepting: Vec<String>,
    access: i64,
    alphabet: Vec<String>,
    counters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<CmDefaultDto>,
    initial: String,
    kind: String,
    name: String,
    passes: Vec<String>,
    states: Vec<String>,
    transitions: Vec<CmRuleDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DaRuleDto {
    pred: String,
    #[serde(rename = "self")]
    own: String,
    to: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AutomatonDto {
    accepting: Vec<String>,
    alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
    initial: BTreeMap<String, String>,
    kind: String,
    name: String,
    passes: Vec<String>,
    states: Vec<String>,
    transitions: Vec<DaRuleDto>,
}

/// The predecessor-view spelling of the first node.
const NONE_PRED: &str = "#none";
const STAR: &str = "*";

pub fn parse_device(text: &str) -> Result<Device> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Parse("document lacks a string `kind` field".into()))?;
    match kind {
        "counter-machine" => {
            let dto: MachineDto =
                serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
            machine_from_dto(dto).map(Device::Machine)
        }
        "distributed-automaton" => {
            let dto: AutomatonDto =
                serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
            automaton_from_dto(dto).map(Device::Automaton)
        }
        other => Err(Error::Parse(format!("unknown device kind {other:?}"))),
    }
}

pub fn parse_device_file(path: &std::path::Path) -> Result<Device> {
    parse_device(&std::fs::read_to_string(path)?)
}

fn position_of(names: &[String], name: &str, what: &str) -> Result<u32> {
    names
        .iter()
        .position(|n| n == name)
        .map(|i| i as u32)
        .ok_or_else(|| Error::Parse(format!("unknown {what} {name:?}")))
}

fn expr_from_dto(counters: &[String], dto: &ExprDto) -> Result<CounterExpr> {
    let vars = dto
        .vars
        .iter()
        .map(|v| {
            position_of(counters, v, "counter").map(crate::machine::CounterId)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterExpr::new(vars, dto.constant))
}

fn update_from_dto(counters: &[String], dto: &BTreeMap<String, ExprDto>) -> Result<Update> {
    let mut exprs = Vec::with_capacity(counters.len());
    for name in counters {
        let e = dto.get(name).ok_or_else(|| {
            Error::Parse(format!("update does not assign counter {name:?}"))
        })?;
        exprs.push(expr_from_dto(counters, e)?);
    }
    for name in dto.keys() {
        if !counters.contains(name) {
            return Err(Error::Parse(format!(
                "update assigns unknown counter {name:?}"
            )));
        }
    }
    Ok(Update::new(exprs))
}

fn machine_from_dto(dto: MachineDto) -> Result<CounterMachine> {
    let alphabet = Alphabet::new(dto.alphabet.clone())?;
    let initial = StateId(position_of(&dto.states, &dto.initial, "state")?);
    let accepting = dto
        .accepting
        .iter()
        .map(|s| position_of(&dto.states, s, "state").map(StateId))
        .collect::<Result<std::collections::BTreeSet<_>>>()?;
    let mut rules = Vec::with_capacity(dto.transitions.len());
    for t in &dto.transitions {
        let mut guard: Vec<GuardAtom> = vec![None; dto.counters.len()];
        for (counter, v) in &t.guard {
            let idx = position_of(&dto.counters, counter, "counter")? as usize;
            match v {
                GuardValueDto::Int(n) => guard[idx] = Some(*n),
                GuardValueDto::Star(s) if s == STAR => guard[idx] = None,
                GuardValueDto::Star(s) => {
                    return Err(Error::Parse(format!("guard value {s:?} is not an int or \"*\"")))
                }
            }
        }
        rules.push(Rule {
            from: StateId(position_of(&dto.states, &t.from, "state")?),
            guard,
            symbol: alphabet.lookup(&t.symbol)?,
            to: StateId(position_of(&dto.states, &t.to, "state")?),
            update: update_from_dto(&dto.counters, &t.update)?,
        });
    }
    let default = dto
        .default
        .as_ref()
        .map(|d| {
            Ok::<_, Error>((
                StateId(position_of(&dto.states, &d.to, "state")?),
                update_from_dto(&dto.counters, &d.update)?,
            ))
        })
        .transpose()?;
    let mut machine = CounterMachine::new(
        alphabet,
        dto.states,
        dto.counters,
        initial,
        dto.access,
        accepting,
        rules,
        default,
        dto.name,
    );
    machine.passes = dto.passes;
    let diagnostics = validate_machine(&machine);
    if let Some(d) = diagnostics.first() {
        return Err(Error::Invalid(format!(
            "{d}{}",
            if diagnostics.len() > 1 {
                format!(" (and {} more)", diagnostics.len() - 1)
            } else {
                String::new()
            }
        )));
    }
    Ok(machine)
}

fn automaton_from_dto(dto: AutomatonDto) -> Result<DistributedAutomaton> {
    let alphabet = Alphabet::new(dto.alphabet.clone())?;
    let mut init = Vec::with_capacity(alphabet.len());
    for sym in alphabet.names() {
        let state = dto.initial.get(sym).ok_or_else(|| {
            Error::Parse(format!("initialization does not cover symbol {sym:?}"))
        })?;
        init.push(DaStateId(position_of(&dto.states, state, "state")?));
    }
    let accepting = dto
        .accepting
        .iter()
        .map(|s| position_of(&dto.states, s, "state").map(DaStateId))
        .collect::<Result<std::collections::BTreeSet<_>>>()?;
    let mut rules = Vec::with_capacity(dto.transitions.len());
    for t in &dto.transitions {
        let pred = match t.pred.as_str() {
            STAR => PredPat::Any,
            NONE_PRED => PredPat::Is(None),
            name => PredPat::Is(Some(DaStateId(position_of(&dto.states, name, "state")?))),
        };
        let own = match t.own.as_str() {
            STAR => SelfPat::Any,
            name => SelfPat::Is(DaStateId(position_of(&dto.states, name, "state")?)),
        };
        rules.push(DaRule {
            pred,
            own,
            to: DaStateId(position_of(&dto.states, &t.to, "state")?),
        });
    }
    let default = dto
        .default
        .as_ref()
        .map(|d| position_of(&dto.states, d, "state").map(DaStateId))
        .transpose()?;
    let mut automaton = DistributedAutomaton::new(
        alphabet,
        dto.states,
        init,
        accepting,
        rules,
        default,
        dto.name,
    );
    automaton.passes = dto.passes;
    let diagnostics = validate_automaton(&automaton);
    if let Some(d) = diagnostics.first() {
        return Err(Error::Invalid(d.to_string()));
    }
    Ok(automaton)
}

fn expr_to_dto(m: &CounterMachine, e: &CounterExpr) -> ExprDto {
    ExprDto {
        constant: e.constant_part(),
        vars: e
            .vars()
            .iter()
            .map(|v| m.counter_names()[v.0 as usize].clone())
            .collect(),
    }
}

fn update_to_dto(m: &CounterMachine, u: &Update) -> BTreeMap<String, ExprDto> {
    m.counter_names()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            (
                name.clone(),
                expr_to_dto(m, u.expr(crate::machine::CounterId(i as u32))),
            )
        })
        .collect()
}

pub fn serialize_device(device: &Device) -> String {
    let json = match device {
        Device::Machine(m) => {
            let mut transitions: Vec<CmRuleDto> = m
                .rules()
                .iter()
                .map(|r| CmRuleDto {
                    from: m.state_names()[r.from.0 as usize].clone(),
                    guard: r
                        .guard
                        .iter()
                        .enumerate()
                        .filter_map(|(i, g)| {
                            g.map(|v| (m.counter_names()[i].clone(), GuardValueDto::Int(v)))
                        })
                        .collect(),
                    symbol: m.alphabet.name(r.symbol).to_string(),
                    to: m.state_names()[r.to.0 as usize].clone(),
                    update: update_to_dto(m, &r.update),
                })
                .collect();
            transitions.sort_by(|x, y| {
                let gx: Vec<(&String, i64)> = x
                    .guard
                    .iter()
                    .map(|(k, v)| match v {
                        GuardValueDto::Int(n) => (k, *n),
                        GuardValueDto::Star(_) => (k, i64::MAX),
                    })
                    .collect();
                let gy: Vec<(&String, i64)> = y
                    .guard
                    .iter()
                    .map(|(k, v)| match v {
                        GuardValueDto::Int(n) => (k, *n),
                        GuardValueDto::Star(_) => (k, i64::MAX),
                    })
                    .collect();
                (&x.from, gx, &x.symbol).cmp(&(&y.from, gy, &y.symbol))
            });
            let dto = MachineDto {
                accepting: m
                    .accepting()
                    .iter()
                    .map(|q| m.state_names()[q.0 as usize].clone())
                    .collect(),
                access: m.access(),
                alphabet: m.alphabet.names().to_vec(),
                counters: m.counter_names().to_vec(),
                default: m.default_entry().map(|(to, u)| CmDefaultDto {
                    to: m.state_names()[to.0 as usize].clone(),
                    update: update_to_dto(m, u),
                }),
                initial: m.state_names()[m.initial().0 as usize].clone(),
                kind: "counter-machine".into(),
                name: m.name.clone(),
                passes: m.passes.clone(),
                states: m.state_names().to_vec(),
                transitions,
            };
            serde_json::to_string_pretty(&dto)
        }
        Device::Automaton(a) => {
            let pred_name = |p: &PredPat| match p {
                PredPat::Any => STAR.to_string(),
                PredPat::Is(None) => NONE_PRED.to_string(),
                PredPat::Is(Some(q)) => a.state_names()[q.0 as usize].clone(),
            };
            let own_name = |s: &SelfPat| match s {
                SelfPat::Any => STAR.to_string(),
                SelfPat::Is(q) => a.state_names()[q.0 as usize].clone(),
            };
            let mut transitions: Vec<DaRuleDto> = a
                .rules()
                .iter()
                .map(|r| DaRuleDto {
                    pred: pred_name(&r.pred),
                    own: own_name(&r.own),
                    to: a.state_names()[r.to.0 as usize].clone(),
                })
                .collect();
            transitions.sort_by(|x, y| (&x.own, &x.pred).cmp(&(&y.own, &y.pred)));
            let dto = AutomatonDto {
                accepting: a
                    .accepting()
                    .iter()
                    .map(|q| a.state_names()[q.0 as usize].clone())
                    .collect(),
                alphabet: a.alphabet.names().to_vec(),
                default: a
                    .default_state()
                    .map(|q| a.state_names()[q.0 as usize].clone()),
                initial: a
                    .alphabet
                    .names()
                    .iter()
                    .enumerate()
                    .map(|(i, sym)| {
                        (
                            sym.clone(),
                            a.state_names()[a.init_map()[i].0 as usize].clone(),
                        )
                    })
                    .collect(),
                kind: "distributed-automaton".into(),
                name: a.name.clone(),
                passes: a.passes.clone(),
                states: a.state_names().to_vec(),
                transitions,
            };
            serde_json::to_string_pretty(&dto)
        }
    };
    json.expect("device serialization cannot fail")
}

pub fn write_device_file(device: &Device, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, serialize_device(device))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{example_cm, example_da, toy_devices};
    use crate::foundations::Word;

    #[test]
    fn machine_round_trip_is_stable_and_faithful() {
        let device = Device::Machine(example_cm());
        let text = serialize_device(&device);
        let parsed = parse_device(&text).unwrap();
        assert_eq!(serialize_device(&parsed), text);
        let w = Word::parse(device.alphabet(), "aaabbc").unwrap();
        assert!(parsed.accepts(&w).unwrap());
    }

    #[test]
    fn automaton_round_trip_preserves_the_default() {
        let device = Device::Automaton(example_da());
        let text = serialize_device(&device);
        assert!(text.contains("\"default\": \"⊥\""));
        let parsed = parse_device(&text).unwrap();
        assert_eq!(serialize_device(&parsed), text);
    }

    #[test]
    fn toy_devices_round_trip() {
        let toys = toy_devices();
        for device in [
            Device::Machine(toys.one_counter_cm),
            Device::Machine(toys.copyless_not_sumless_cm),
            Device::Machine(toys.access3_cm),
            Device::Automaton(toys.one_loop_da),
        ] {
            let text = serialize_device(&device);
            let parsed = parse_device(&text).unwrap();
            assert_eq!(serialize_device(&parsed), text, "{}", device.name());
        }
    }

    #[test]
    fn unknown_kind_is_named_in_the_error() {
        let err = parse_device(r#"{"kind": "pushdown"}"#).unwrap_err();
        assert!(err.to_string().contains("pushdown"));
    }

    #[test]
    fn out_of_range_constants_are_rejected() {
        let mut text = serialize_device(&Device::Machine(example_cm()));
        text = text.replace("\"const\": 1,", "\"const\": 7,");
        let err = parse_device(&text).unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = parse_device("{ not json").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }
}
