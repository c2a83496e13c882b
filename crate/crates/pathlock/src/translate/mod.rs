//! The structure-preserving translations between the device models.
//!
//! Each pass consumes a device, produces an equivalent device of the target
//! shape, and returns a certificate of the structural facts it claims. All
//! certificates are re-checkable with the classifier operations; the
//! equivalence harness verifies language preservation word by word.

mod copyless_to_sumless;
mod cm_to_da;
mod da_to_cm;
mod modular;
mod nonnegative;
mod reduce_access;

pub use cm_to_da::sumless_to_da;
pub use copyless_to_sumless::copyless_to_sumless;
pub use da_to_cm::da_to_copyless;
pub use modular::{mod_add, mod_encode, translate_expression_mod, ModularEncoding};
pub use nonnegative::make_nonnegative;
pub use reduce_access::{reduce_access, AccessReductionPath};

use crate::automaton::{trace_metrics, DistributedAutomaton};
use crate::machine::{is_copyless, is_sumless, CounterMachine};
use crate::Result;

/// Classifier snapshot of one device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceFacts {
    pub kind: &'static str,
    pub states: usize,
    pub counters: Option<usize>,
    pub access: Option<i64>,
    pub sumless: Option<bool>,
    pub copyless: Option<bool>,
    pub quasi_acyclic: Option<bool>,
    pub max_trace_length: Option<usize>,
    pub max_loops_per_trace: Option<usize>,
}

impl DeviceFacts {
    pub fn of_machine(m: &CounterMachine) -> Self {
        DeviceFacts {
            kind: "counter-machine",
            states: m.state_names().len(),
            counters: Some(m.counter_count()),
            access: Some(m.access()),
            sumless: Some(is_sumless(m)),
            copyless: Some(is_copyless(m)),
            quasi_acyclic: None,
            max_trace_length: None,
            max_loops_per_trace: None,
        }
    }

    pub fn of_automaton(a: &DistributedAutomaton) -> Result<Self> {
        let metrics = trace_metrics(a)?;
        Ok(DeviceFacts {
            kind: "distributed-automaton",
            states: a.state_count(),
            counters: None,
            access: None,
            sumless: None,
            copyless: None,
            quasi_acyclic: Some(metrics.quasi_acyclic),
            max_trace_length: metrics.max_trace_length,
            max_loops_per_trace: metrics.max_loops_per_trace,
        })
    }
}

/// What a pass did and what it claims about its output.
#[derive(Debug, Clone)]
pub struct TranslationCertificate {
    pub pass: String,
    pub input: DeviceFacts,
    pub output: DeviceFacts,
    /// Human-readable claims, each verified by the test suites.
    pub claims: Vec<String>,
}
