//! Counter machines and distributed automata on labeled directed paths.
//!
//! The library provides two device models that recognize languages of
//! nonempty words:
//!
//! * [`machine::CounterMachine`] — a finite-state acceptor extended with
//!   integer counters that are read through a cutoff window and updated by
//!   sums of counters plus a small constant, and
//! * [`automaton::DistributedAutomaton`] — identical finite-state machines
//!   placed on every node of a labeled directed path, each synchronously
//!   reading the state of its left neighbor.
//!
//! On top of the two models sit the structure-preserving translations of
//! [`translate`] (copyless ↔ sumless, access reduction, machine ↔ automaton),
//! the equivalence-testing [`harness`], the compressed-history machinery of
//! [`history`], a JSON device format with a command-line front end in [`io`],
//! and the executable fixtures of [`corpus`].

pub mod automaton;
pub mod corpus;
pub mod foundations;
pub mod harness;
pub mod history;
pub mod io;
pub mod machine;
pub mod translate;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cutoff range: lower bound {lo} exceeds upper bound {hi}")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("symbol {0:?} is not part of the alphabet")]
    UnknownSymbol(String),
    #[error("empty words are not admitted")]
    EmptyWord,
    #[error("alphabet must be nonempty and duplicate-free (offending symbol: {0:?})")]
    BadAlphabet(String),
    #[error("malformed counter expression: unknown counter {0:?}")]
    UnknownCounter(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("machine transition table has no entry for state {state:?}, guard {guard:?}, symbol {symbol:?}")]
    NonTotalMachine {
        state: String,
        guard: Vec<i64>,
        symbol: String,
    },
    #[error("automaton transition table has no entry for predecessor view {pred:?} and state {state:?}")]
    NonTotalAutomaton { pred: Option<String>, state: String },
    #[error("operation requires a quasi-acyclic automaton")]
    NotQuasiAcyclic,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("materialized state count exceeded the cap of {cap} ({context})")]
    ResourceExceeded { cap: usize, context: String },
    #[error("device file is invalid: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("evaluation failed on word {word:?}: {source}")]
    OnWord {
        word: String,
        #[source]
        source: Box<Error>,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// State count cap for the reachability closures of the machine ↔ automaton
/// translations. Overridden by the `PATHLOCK_STATE_CAP` environment variable.
pub fn state_cap() -> usize {
    std::env::var("PATHLOCK_STATE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(200_000)
}
