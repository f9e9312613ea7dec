use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rml_core::formula::{enumerate_formulas, random_formula, Atom, FormulaShape};
use rml_core::kripke::PointedModel;
use rml_core::modelcheck::{reduce_k_sat, Checker, ConstFormula};
use rml_core::oracle::{oracle_eval, oracle_sat};
use rml_core::solver::{Solver, SolverOptions, DEFAULT_NODE_BUDGET};
use rml_core::{parse, Error, Formula};

#[derive(Parser)]
#[command(name = "rml", version, about = "Satisfiability and model checking for existential refinement modal logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Budget {
    /// Maximum number of activations, summed over all backtracking.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Wall-clock limit in milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl Budget {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            node_budget: self.node_budget,
            time_budget: self.timeout_ms.map(Duration::from_millis),
            ..SolverOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability; prints SAT or UNSAT.
    Sat {
        /// Formula text, or @path to read it from a file.
        formula: String,
        /// Write the extracted model chain as JSON.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Print rule applications to stderr.
        #[arg(long)]
        trace: bool,
        /// Print search counters to stderr as JSON.
        #[arg(long)]
        stats: bool,
        /// Also check for clashes right after saturation.
        #[arg(long)]
        eager_clash: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Model check a formula at the model's point; prints TRUE or FALSE.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Brute-force satisfiability over bounded tree models.
    OracleSat { formula: String },
    /// Brute-force model checking by enumerating refinements.
    OracleCheck {
        #[arg(long)]
        model: PathBuf,
        formula: String,
    },
    /// Compare the solver against the brute-force oracle.
    Fuzz {
        /// Largest formula size.
        #[arg(long)]
        size: usize,
        /// Number of atoms, taken from p, q, r, ...
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// `all` to enumerate every formula, or a number of random ones.
        #[arg(long, default_value = "all")]
        count: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Turn a constant K formula (T, F, &, |, <>, []) into a model and an
    /// Er formula that holds there iff the input is satisfiable.
    ReduceK { psi: String },
    /// Print a model file in Graphviz DOT.
    ExportDot {
        #[arg(long)]
        model: PathBuf,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::ResourceLimit(_)) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read_formula_text(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn read_formula(arg: &str) -> Result<Formula, Failure> {
    let text = read_formula_text(arg)?;
    parse(&text).map_err(|e| usage(format!("{e}")))
}

fn read_model(path: &Path) -> Result<PointedModel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(PointedModel::from_json(&text)?)
}

fn verdict(ok: bool, yes: &str, no: &str) -> u8 {
    println!("{}", if ok { yes } else { no });
    if ok {
        0
    } else {
        1
    }
}

fn atom_names(k: usize) -> Result<Vec<Atom>, Failure> {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    if k == 0 || k > NAMES.len() {
        return Err(usage(format!("--atoms must be between 1 and {}", NAMES.len())));
    }
    Ok(NAMES[..k].iter().map(|n| Atom::new(n).expect("valid name")).collect())
}

fn fuzz(size: usize, atoms: usize, count: &str, seed: u64) -> Result<u8, Failure> {
    let atoms = atom_names(atoms)?;
    let formulas = if count == "all" {
        enumerate_formulas(size, &atoms, FormulaShape::EXISTENTIAL)
    } else {
        let n: usize = count.parse().map_err(|_| usage(format!("--count must be `all` or a number, got `{count}`")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| random_formula(&mut rng, size, &atoms, FormulaShape::EXISTENTIAL)).collect()
    };
    let outcomes: Vec<Result<Option<String>, Error>> = formulas
        .par_iter()
        .map(|f| {
            let solver = Solver::new(SolverOptions::default()).sat(f)?.is_sat();
            let oracle = oracle_sat(f)?;
            Ok((solver != oracle).then(|| format!("divergence on `{f}`: solver={solver} oracle={oracle}")))
        })
        .collect();
    let mut divergences = 0;
    for outcome in outcomes {
        if let Some(msg) = outcome? {
            if divergences == 0 {
                println!("{msg}");
            }
            divergences += 1;
        }
    }
    println!("{} formulas, {divergences} divergences", formulas.len());
    Ok(if divergences == 0 { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Sat { formula, witness, trace, stats, eager_clash, budget } => {
            let f = read_formula(&formula)?;
            let opts = SolverOptions { trace, stats, eager_clash, ..budget.options() };
            let mut solver = Solver::new(opts);
            let result = solver.sat(&f);
            let mut err = std::io::stderr().lock();
            for line in solver.trace() {
                let _ = writeln!(err, "{line}");
            }
            if stats {
                let _ = writeln!(err, "{}", serde_json::to_string(solver.stats()).expect("stats serialize"));
            }
            let v = result?;
            if let (Some(path), Some(w)) = (&witness, v.witness()) {
                fs::write(path, w.models.to_json() + "\n")
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(verdict(v.is_sat(), "SAT", "UNSAT"))
        }
        Command::Check { model, formula, budget } => {
            let a = read_model(&model)?;
            let f = read_formula(&formula)?;
            Ok(verdict(Checker::new(budget.options()).check(&a, &f)?, "TRUE", "FALSE"))
        }
        Command::OracleSat { formula } => Ok(verdict(oracle_sat(&read_formula(&formula)?)?, "SAT", "UNSAT")),
        Command::OracleCheck { model, formula } => {
            let a = read_model(&model)?;
            Ok(verdict(oracle_eval(&a, &read_formula(&formula)?)?, "TRUE", "FALSE"))
        }
        Command::Fuzz { size, atoms, count, seed, jobs } => {
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| usage(e.to_string()))?;
            }
            fuzz(size, atoms, &count, seed)
        }
        Command::ReduceK { psi } => {
            let c = ConstFormula::parse(&read_formula_text(&psi)?)?;
            let (a, f) = reduce_k_sat(&c);
            let out = serde_json::json!({ "model": a.to_file(), "formula": f.render() });
            println!("{}", serde_json::to_string_pretty(&out).expect("json serializes"));
            Ok(0)
        }
        Command::ExportDot { model } => {
            print!("{}", read_model(&model)?.to_dot());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
