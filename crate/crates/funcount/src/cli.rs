//! Command-line front-end. Every command prints a [`RunReport`] as JSON on
//! stdout, and also writes it to `--out` when given.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use funcount_core::formula::{prefix_of, Quantifier};
use funcount_core::transforms::{build_dnf_structure, check_claim, cnf_to_dnf_count, count_dnf_by_logic, dnf_reduction_report, Pass};
use funcount_core::{
    apply_interpretation, candidate_count, circuit_from_prenex, circuit_vocabulary,
    parse_query, structure_to_circuit, BigCount, Circuit, CountRequest, Query, Semantics, Structure, DEFAULT_BUDGET,
};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::formats::{
    parse_circuit, parse_cnf, parse_dnf, parse_interpretation, parse_structure, print_circuit, print_structure,
};
use crate::report::{command_echo, BudgetUsage, InputDigest, RunReport};
use crate::suites::{run_suite, Suite, SuiteConfig};
use crate::{exit, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "funcount", version, about = "Exact counting for first-order formulas over finite structures")]
pub struct Cli {
    /// Worker threads for verification suites; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest number of candidate assignments a count may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count assignments satisfying a formula on a structure.
    Count {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Apply a transformation pass and report its claim.
    Transform {
        /// Not needed for `dnf2func`, whose input is fixed.
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long)]
        pass: Pass,
        /// Check the claim on this structure.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Circuit evaluation, proof-tree counting and constructions.
    Circuit {
        #[command(subcommand)]
        command: CircuitCommand,
    },
    /// Count a 3DNF or 3CNF file through its first-order encoding.
    Prop {
        #[arg(long, conflicts_with = "cnf", required_unless_present = "cnf")]
        dnf: Option<PathBuf>,
        #[arg(long)]
        cnf: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Suite,
    /// Universe sizes or variable counts, as `A..B` (inclusive).
    #[arg(long, value_parser = parse_sizes)]
    pub sizes: Option<RangeInclusive<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum CircuitCommand {
    Eval {
        #[arg(long)]
        circuit: PathBuf,
    },
    Count {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Build the circuit of a prenex sentence on a structure.
    FromFormula {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        /// Write the circuit file here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Apply an interpretation to a structure.
    Interpret {
        #[arg(long)]
        interpretation: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        /// Write the resulting structure file here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rel,
    Func,
    Skolem,
}

impl From<Mode> for Semantics {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Rel => Semantics::Relational,
            Mode::Func => Semantics::Functional,
            Mode::Skolem => Semantics::Skolem,
        }
    }
}

fn parse_sizes(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, found `{s}`"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad size `{x}`"));
    Ok(num(a)?..=num(b)?)
}

/// What a command produced, before it is wrapped into a report.
struct Outcome {
    outputs: Value,
    used: Option<BigCount>,
    /// Counterexample text for stderr; sets exit status 1.
    failure: Option<String>,
}

impl Outcome {
    fn new(outputs: Value) -> Self {
        Outcome {
            outputs,
            used: None,
            failure: None,
        }
    }
}

#[derive(Default)]
struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.0.push(InputDigest::new(path, &bytes));
        String::from_utf8(bytes).map_err(|_| Error::File {
            path: path.to_path_buf(),
            source: Box::new(Error::Usage("file is not UTF-8".into())),
        })
    }

    fn load<T>(&mut self, path: &Path, parse: impl FnOnce(&str) -> Result<T>) -> Result<T> {
        let src = self.read(path)?;
        parse(&src).map_err(|e| Error::File {
            path: path.to_path_buf(),
            source: Box::new(e),
        })
    }

    fn structure(&mut self, path: &Path) -> Result<Structure> {
        self.load(path, parse_structure)
    }

    /// Formulas are read against the vocabulary of the structure, if any, and
    /// may use every built-in the structure provides.
    fn formula(&mut self, path: &Path, a: Option<&Structure>) -> Result<Query> {
        let mut q = self.load(path, |src| Ok(parse_query(src, a.map(|a| a.vocabulary()))?))?;
        if let Some(a) = a {
            q.sig.builtins.extend(a.vocabulary().builtins().iter().copied());
        }
        Ok(q)
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Candidate tables a count in `mode` enumerates.
fn candidates(a: &Structure, q: &Query, mode: Mode) -> BigCount {
    if mode != Mode::Skolem {
        return candidate_count(&q.sig, a.size());
    }
    let n = a.size();
    let mut universals = 0;
    let mut total = BigUint::from(1u32);
    for (quant, _) in prefix_of(&q.body).0 {
        match quant {
            Quantifier::Forall => universals += 1,
            Quantifier::Exists => total *= BigUint::from(n).pow(n.pow(universals) as u32),
        }
    }
    total
}

fn count(inputs: &mut Inputs, budget: u64, structure: &Path, formula: &Path, mode: Mode) -> Result<Outcome> {
    let a = inputs.structure(structure)?;
    let q = inputs.formula(formula, Some(&a))?;
    let used = candidates(&a, &q, mode);
    let count = CountRequest::new(&a, &q, mode.into()).with_budget(budget).run()?;
    Ok(Outcome {
        used: Some(used),
        ..Outcome::new(json!({
            "mode": Semantics::from(mode).to_string(),
            "universe": a.size(),
            "formula": q.to_string(),
            "count": count.to_string(),
        }))
    })
}

fn transform(inputs: &mut Inputs, budget: u64, formula: Option<&Path>, pass: Pass, structure: Option<&Path>) -> Result<Outcome> {
    let a = structure.map(|p| inputs.structure(p)).transpose()?;
    let report = match (pass, formula) {
        (Pass::DnfToFunctions, _) => dnf_reduction_report(),
        (_, Some(f)) => {
            let q = inputs.formula(f, a.as_ref())?;
            pass.apply(&q)?
        }
        (_, None) => return Err(Error::Usage(format!("{pass} needs --formula"))),
    };
    let fresh: Vec<String> = report.fresh.iter().map(|d| format!("{}/{}", d.name, d.arity)).collect();
    let mut outputs = json!({
        "pass": pass.name(),
        "input": report.input.to_string(),
        "output": report.output.to_string(),
        "fresh": fresh,
        "claim": report.claim.to_string(),
        "min_universe": report.min_universe,
    });
    let mut outcome = Outcome::new(Value::Null);
    if let Some(a) = &a {
        let check = check_claim(&report, a, budget)?;
        outputs["check"] = json!({
            "lhs": check.lhs.to_string(),
            "rhs": check.rhs.to_string(),
            "holds": check.holds(),
        });
        if !check.holds() {
            outcome.failure = Some(format!(
                "claim `{}` fails\nstructure:\n{}formula: {}\nlhs: {}\nrhs: {}",
                report.claim,
                print_structure(a),
                report.input,
                check.lhs,
                check.rhs
            ));
        }
    }
    outcome.outputs = outputs;
    Ok(outcome)
}

fn verify(budget: u64, args: &VerifyArgs) -> Result<Outcome> {
    let cfg = SuiteConfig {
        sizes: args.sizes.clone().unwrap_or_else(|| args.suite.default_sizes()),
        seed: args.seed,
        budget,
    };
    let report = run_suite(args.suite, &cfg)?;
    let failure = report.counterexample.as_ref().map(|c| {
        let mut s = format!(
            "suite {} failed {} of {} instances; first counterexample, instance {}:\nstructure:\n{}formula:\n{}\nlhs: {}\nrhs: {}",
            report.suite, report.failed, report.checked, c.instance, c.structure, c.formula, c.lhs, c.rhs
        );
        if let Some(note) = &c.note {
            s.push_str(&format!("\nnote: {note}"));
        }
        s
    });
    Ok(Outcome {
        failure,
        ..Outcome::new(serde_json::to_value(&report).expect("suite reports serialize"))
    })
}

fn circuit_summary(c: &Circuit) -> Value {
    json!({
        "gates": c.len(),
        "depth": c.depth(),
        "value": c.evaluate(),
        "proof_trees": c.count_proof_trees().to_string(),
        "circuit": print_circuit(c),
    })
}

fn circuit(inputs: &mut Inputs, cmd: &CircuitCommand) -> Result<Outcome> {
    let outputs = match cmd {
        CircuitCommand::Eval { circuit } => {
            let c = inputs.load(circuit, parse_circuit)?;
            json!({ "value": c.evaluate() })
        }
        CircuitCommand::Count { circuit } => {
            let c = inputs.load(circuit, parse_circuit)?;
            json!({ "proof_trees": c.count_proof_trees().to_string() })
        }
        CircuitCommand::FromFormula { structure, formula, emit } => {
            let a = inputs.structure(structure)?;
            let q = inputs.formula(formula, Some(&a))?;
            let c = circuit_from_prenex(&a, &q)?;
            if let Some(path) = emit {
                write(path, &print_circuit(&c))?;
            }
            circuit_summary(&c)
        }
        CircuitCommand::Interpret {
            interpretation,
            structure,
            emit,
        } => {
            let i = inputs.load(interpretation, parse_interpretation)?;
            let a = inputs.structure(structure)?;
            let b = apply_interpretation(&i, &a)?;
            let text = print_structure(&b);
            if let Some(path) = emit {
                write(path, &text)?;
            }
            let mut out = json!({ "universe": b.size(), "structure": text });
            if b.vocabulary().symbols() == circuit_vocabulary().symbols() {
                let c = structure_to_circuit(&b)?;
                out["circuit"] = circuit_summary(&c);
            }
            out
        }
    };
    Ok(Outcome::new(outputs))
}

fn prop(inputs: &mut Inputs, budget: u64, dnf: Option<&Path>, cnf: Option<&Path>) -> Result<Outcome> {
    let (kind, truth_table, by_logic, encoded) = match (dnf, cnf) {
        (Some(p), _) => {
            let d = inputs.load(p, parse_dnf)?;
            let by_logic = count_dnf_by_logic(&d, budget)?;
            ("dnf", d.count_models(), by_logic, build_dnf_structure(&d)?)
        }
        (None, Some(p)) => {
            let c = inputs.load(p, parse_cnf)?;
            let by_logic = cnf_to_dnf_count(&c, |d| count_dnf_by_logic(d, budget))?;
            ("cnf", c.count_models(), by_logic, build_dnf_structure(&c.negate())?)
        }
        (None, None) => return Err(Error::Usage("give --dnf or --cnf".into())),
    };
    let mut outcome = Outcome::new(json!({
        "kind": kind,
        "truth_table": truth_table.to_string(),
        "first_order": by_logic.to_string(),
        "structure": print_structure(&encoded),
    }));
    if BigUint::from(truth_table) != by_logic {
        outcome.failure = Some(format!("truth table gives {truth_table}, first-order count gives {by_logic}"));
    }
    Ok(outcome)
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome> {
    let budget = cli.budget;
    match &cli.command {
        Command::Count { structure, formula, mode } => count(inputs, budget, structure, formula, *mode),
        Command::Transform {
            formula,
            pass,
            structure,
        } => transform(inputs, budget, formula.as_deref(), *pass, structure.as_deref()),
        Command::Verify(args) => {
            let threads = cli.threads.unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Usage(format!("cannot start {threads} threads: {e}")))?;
            pool.install(|| verify(budget, args))
        }
        Command::Circuit { command } => circuit(inputs, command),
        Command::Prop { dnf, cnf } => prop(inputs, budget, dnf.as_deref(), cnf.as_deref()),
    }
}

/// Runs one invocation and returns its report and exit status. Errors are
/// printed to stderr here.
pub fn execute(args: &[String]) -> (Option<RunReport>, i32) {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let _ = e.print();
            return (None, code);
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match dispatch(&cli, &mut inputs) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(required) = budget_required(&e) {
                eprintln!("hint: rerun with --budget {required}");
            }
            return (None, e.exit_code());
        }
    };
    finish(&cli, args, inputs, outcome, start)
}

fn finish(cli: &Cli, args: &[String], inputs: Inputs, outcome: Outcome, start: Instant) -> (Option<RunReport>, i32) {
    let report = RunReport {
        command: command_echo(args),
        inputs: inputs.0,
        outputs: outcome.outputs,
        budget: BudgetUsage {
            limit: cli.budget,
            used: outcome.used.map(|u| u.to_string()),
        },
        timing_ms: start.elapsed().as_millis() as u64,
    };
    let json = report.to_json();
    print!("{json}");
    if let Some(path) = &cli.out {
        if let Err(e) = write(path, &json) {
            eprintln!("error: {e}");
            return (Some(report), e.exit_code());
        }
    }
    if let Some(f) = outcome.failure {
        eprintln!("{f}");
        return (Some(report), exit::COUNTEREXAMPLE);
    }
    (Some(report), exit::OK)
}

fn budget_required(e: &Error) -> Option<&BigCount> {
    match e {
        Error::Core(funcount_core::Error::Budget { required, .. }) => Some(required),
        Error::File { source, .. } => budget_required(source),
        _ => None,
    }
}

pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    execute(&args).1
}
