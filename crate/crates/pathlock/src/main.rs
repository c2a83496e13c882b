//! Command-line front end: simulate, classify, translate, equiv, diagram.
//!
//! Exit codes: 0 on success, 1 on a negative verdict (a rejected word, an
//! inequivalence, an exceeded budget), 2 on usage or parse errors.

use clap::{Parser, Subcommand, ValueEnum};
use pathlock::automaton::{da_accepts, trace_metrics, Acceptance};
use pathlock::foundations::Word;
use pathlock::harness::{check_equivalence, space_time_diagram, Outcome};
use pathlock::io::{parse_device_file, serialize_device, write_device_file, Device};
use pathlock::machine::{is_copyless, is_sumless, machine_run, validate_machine};
use pathlock::translate::{
    copyless_to_sumless, da_to_copyless, make_nonnegative, reduce_access, sumless_to_da,
    TranslationCertificate,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pathlock", version, about = "Counter machines and distributed automata on labeled dipaths")]
struct Cli {
    /// Seed for randomized operations (reserved; accepted everywhere).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a device on one word and report acceptance.
    Simulate {
        #[arg(long)]
        device: PathBuf,
        #[arg(long)]
        word: String,
        /// Cap on simulated rounds for automata.
        #[arg(long)]
        rounds: Option<usize>,
        /// Also print the space-time diagram of the run.
        #[arg(long)]
        diagram: bool,
    },
    /// Print classifier facts about a device.
    Classify {
        #[arg(long)]
        device: PathBuf,
    },
    /// Apply one translation pass (or the whole chain) to a device.
    Translate {
        #[arg(long, value_enum)]
        pass: Pass,
        #[arg(long)]
        device: PathBuf,
        /// Output file; the device prints to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two devices on every word up to a length bound.
    Equiv {
        #[arg(short)]
        a: PathBuf,
        #[arg(short)]
        b: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Print the space-time diagram of a run.
    Diagram {
        #[arg(long)]
        device: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        rounds: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pass {
    CopylessToSumless,
    Nonnegative,
    ReduceAccess,
    CmToDa,
    DaToCm,
    /// copyless-to-sumless, reduce-access, cm-to-da, da-to-cm in sequence.
    Chain,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn word_of(device: &Device, text: &str) -> pathlock::Result<Word> {
    Word::parse(device.alphabet(), text)
}

fn print_certificate(cert: &TranslationCertificate) {
    println!(
        "pass {}: {} states -> {} states",
        cert.pass, cert.input.states, cert.output.states
    );
    for claim in &cert.claims {
        println!("  claim: {claim}");
    }
}

fn emit(device: &Device, output: Option<&PathBuf>) -> pathlock::Result<()> {
    match output {
        Some(path) => write_device_file(device, path),
        None => {
            println!("{}", serialize_device(device));
            Ok(())
        }
    }
}

fn machine_of(device: Device) -> pathlock::Result<pathlock::machine::CounterMachine> {
    match device {
        Device::Machine(m) => Ok(m),
        Device::Automaton(_) => Err(pathlock::Error::Precondition(
            "this pass expects a counter machine".into(),
        )),
    }
}

fn automaton_of(device: Device) -> pathlock::Result<pathlock::automaton::DistributedAutomaton> {
    match device {
        Device::Automaton(a) => Ok(a),
        Device::Machine(_) => Err(pathlock::Error::Precondition(
            "this pass expects a distributed automaton".into(),
        )),
    }
}

fn run(cli: Cli) -> pathlock::Result<ExitCode> {
    match cli.command {
        Command::Simulate {
            device,
            word,
            rounds,
            diagram,
        } => {
            let device = parse_device_file(&device)?;
            let word = word_of(&device, &word)?;
            if diagram {
                print!("{}", space_time_diagram(&device, &word, rounds)?);
            }
            let verdict = match &device {
                Device::Machine(m) => {
                    let run = machine_run(m, &word)?;
                    let last = run.final_config();
                    println!(
                        "final state: {} {:?}",
                        m.state_names()[last.state.0 as usize],
                        last.valuation.values()
                    );
                    m.is_accepting(last.state)
                }
                Device::Automaton(a) => match da_accepts(a, &word, rounds)? {
                    Acceptance::Accept => true,
                    Acceptance::RejectStable => false,
                    Acceptance::BudgetExceeded => {
                        println!("verdict: budget exceeded");
                        return Ok(ExitCode::from(1));
                    }
                },
            };
            println!("verdict: {}", if verdict { "accept" } else { "reject" });
            Ok(ExitCode::from(u8::from(!verdict)))
        }
        Command::Classify { device } => {
            let device = parse_device_file(&device)?;
            println!("kind: {}", device.kind());
            println!("name: {}", device.name());
            match &device {
                Device::Machine(m) => {
                    println!("states: {}", m.state_names().len());
                    println!("counters: {}", m.counter_count());
                    println!("access: {}", m.access());
                    println!("sumless: {}", is_sumless(m));
                    println!("copyless: {}", is_copyless(m));
                    let diags = validate_machine(m);
                    println!("diagnostics: {}", diags.len());
                    for d in diags {
                        println!("  {d}");
                    }
                }
                Device::Automaton(a) => {
                    println!("states: {}", a.state_count());
                    let metrics = trace_metrics(a)?;
                    println!("quasi-acyclic: {}", metrics.quasi_acyclic);
                    if let Some(z) = metrics.max_trace_length {
                        println!("max trace length: {z}");
                    }
                    if let Some(l) = metrics.max_loops_per_trace {
                        println!("max loops per trace: {l}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate {
            pass,
            device,
            output,
        } => {
            let device = parse_device_file(&device)?;
            let result = match pass {
                Pass::CopylessToSumless => {
                    let (m, cert) = copyless_to_sumless(&machine_of(device)?)?;
                    print_certificate(&cert);
                    Device::Machine(m)
                }
                Pass::Nonnegative => {
                    let (m, cert) = make_nonnegative(&machine_of(device)?)?;
                    print_certificate(&cert);
                    Device::Machine(m)
                }
                Pass::ReduceAccess => {
                    let (m, cert, _) = reduce_access(&machine_of(device)?)?;
                    print_certificate(&cert);
                    Device::Machine(m)
                }
                Pass::CmToDa => {
                    let (a, cert) = sumless_to_da(&machine_of(device)?)?;
                    print_certificate(&cert);
                    Device::Automaton(a)
                }
                Pass::DaToCm => {
                    let (m, cert) = da_to_copyless(&automaton_of(device)?)?;
                    print_certificate(&cert);
                    Device::Machine(m)
                }
                Pass::Chain => {
                    let m0 = machine_of(device)?;
                    let (m1, c1) = copyless_to_sumless(&m0)?;
                    print_certificate(&c1);
                    let (m2, c2, _) = reduce_access(&m1)?;
                    print_certificate(&c2);
                    let (a3, c3) = sumless_to_da(&m2)?;
                    print_certificate(&c3);
                    let (m4, c4) = da_to_copyless(&a3)?;
                    print_certificate(&c4);
                    Device::Machine(m4)
                }
            };
            emit(&result, output.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { a, b, max_len } => {
            let da = parse_device_file(&a)?;
            let db = parse_device_file(&b)?;
            if da.alphabet() != db.alphabet() {
                return Err(pathlock::Error::Precondition(
                    "devices must share an alphabet".into(),
                ));
            }
            let alphabet = da.alphabet().clone();
            let verdict = check_equivalence(&da, &db, &alphabet, max_len)?;
            match verdict.outcome {
                Outcome::Equivalent => {
                    println!(
                        "equivalent: {} words up to length {}",
                        verdict.words_checked, verdict.max_len
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Outcome::Counterexample {
                    word,
                    accepts_a,
                    accepts_b,
                } => {
                    println!(
                        "counterexample: {} (a: {accepts_a}, b: {accepts_b})",
                        word.display(&alphabet)
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Diagram {
            device,
            word,
            rounds,
        } => {
            let device = parse_device_file(&device)?;
            let word = word_of(&device, &word)?;
            print!("{}", space_time_diagram(&device, &word, rounds)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
