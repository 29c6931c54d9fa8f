//! `bvcalc`: command-line front-end for the BV calculus engine.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure,
//! 2 on usage or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bvcalc::bv::{laplacian, schouten, Mode};
use bvcalc::cohomology::{parse_functional, print_functional, Functional};
use bvcalc::examples::{scalar_example, yang_mills_example, ExampleReport};
use bvcalc::jetcalc::{collapse, euler_left, BvModel};
use bvcalc::modelfile::ModelFile;
use bvcalc::models::{build_yang_mills, LieAlgebraData};
use bvcalc::oracle::{evaluate, required_points_functional, SectionSpec};
use bvcalc::suites::{run_suite, scalar_model, Pair, Suite, SuiteConfig};
use bvcalc::text::{parse_expr, print_expr};

#[derive(Parser)]
#[command(name = "bvcalc", version, about = "Batalin-Vilkovisky calculus on jet spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Left Euler operator of a density with respect to one field or antifield.
    Euler {
        #[command(flatten)]
        model: ModelArg,
        /// Density in the expression grammar.
        expr: String,
        /// `q` for δ/δq, `q†` or `dag(q)` for δ/δq†.
        field: String,
    },
    /// Variational Schouten bracket ⟦F, G⟧.
    Schouten {
        #[command(flatten)]
        model: ModelArg,
        f: String,
        g: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Geometric)]
        mode: ModeArg,
        /// Collapse frozen derivatives in the result.
        #[arg(long)]
        collapse: bool,
    },
    /// BV-Laplacian ΔF.
    Laplacian {
        #[command(flatten)]
        model: ModelArg,
        f: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Geometric)]
        mode: ModeArg,
        #[arg(long)]
        collapse: bool,
    },
    /// Run a randomized identity suite.
    Check(CheckArgs),
    /// Reproduce a worked example step by step.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        #[arg(long, value_enum, default_value_t = ModeArg::Geometric)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a functional at a trigonometric section.
    Evaluate {
        #[command(flatten)]
        model: ModelArg,
        expr: String,
        /// Section file (`name = value` lines); defaults to the model file's `[sections]`.
        section: Option<PathBuf>,
        /// Quadrature points per direction; defaults to the minimum that is exact.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ModelArg {
    /// Model file, or one of the built-in models `scalar`, `ym-su2`.
    #[arg(long, short, default_value = "scalar")]
    model: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name.
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, env = "BVCALC_SEED", default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    max_order: u32,
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
    #[arg(long, default_value_t = 2)]
    min_degree: u32,
    /// Allow sin/cos factors in random densities.
    #[arg(long)]
    transcendental: bool,
    #[arg(long, value_enum, default_value_t = ModeArg::Geometric)]
    mode: ModeArg,
    /// Run the suite on a fixed pair instead of random inputs.
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Geometric,
    Naive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Geometric => Mode::Geometric,
            ModeArg::Naive => Mode::Naive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Scalar,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    #[value(name = "scalar")]
    Scalar,
    #[value(name = "ym-su2")]
    YmSu2,
}

/// A failure of the run itself, as opposed to a failed check.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

fn load_model(arg: &ModelArg) -> Result<(BvModel, Option<SectionSpec>), UsageError> {
    match arg.model.as_str() {
        "scalar" => Ok((scalar_model(), None)),
        "ym-su2" => Ok((build_yang_mills(&LieAlgebraData::su2(), 4)?.0, None)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{path}: {e}")))?;
            let file = ModelFile::parse(&text).map_err(|e| UsageError(format!("{path}: {e}")))?;
            Ok((file.model, file.section))
        }
    }
}

/// Parse diagnostics point at the offending column.
fn parse_input(model: &BvModel, src: &str) -> Result<Functional, UsageError> {
    parse_functional(model, src).map_err(|e| UsageError(format!("{e}\n  {src}\n  {}^", " ".repeat(e.pos.saturating_sub(1)))))
}

fn finish(f: Functional, collapse: bool) -> Functional {
    if collapse {
        f.collapse()
    } else {
        f
    }
}

fn cmd_euler(model: &ModelArg, expr: &str, field: &str) -> Outcome {
    let (m, _) = load_model(model)?;
    let e = parse_expr(&m, expr).map_err(|e| UsageError(format!("{e}\n  {expr}\n  {}^", " ".repeat(e.pos.saturating_sub(1)))))?;
    let target = parse_expr(&m, field)?;
    let symbol = match target.iter().next().map(|(t, _)| t.jet_occurrences()) {
        Some(occ) if target.len() == 1 && occ.len() == 1 && occ[0].1.index.is_zero() => (occ[0].1.field, occ[0].1.dagger),
        _ => return Err(UsageError(format!("`{field}` is not an undifferentiated field or antifield"))),
    };
    println!("{}", print_expr(&m, &euler_left(&collapse(&e), symbol.0, symbol.1)));
    Ok(true)
}

fn cmd_schouten(model: &ModelArg, f: &str, g: &str, mode: ModeArg, collapse: bool) -> Outcome {
    let (m, _) = load_model(model)?;
    let (f, g) = (parse_input(&m, f)?, parse_input(&m, g)?);
    let r = schouten(&m, &f, &g, mode.into())?;
    println!("{}", print_functional(&m, &finish(r, collapse)));
    Ok(true)
}

fn cmd_laplacian(model: &ModelArg, f: &str, mode: ModeArg, collapse: bool) -> Outcome {
    let (m, _) = load_model(model)?;
    let f = parse_input(&m, f)?;
    let r = laplacian(&m, &f, mode.into())?;
    println!("{}", print_functional(&m, &finish(r, collapse)));
    Ok(true)
}

fn cmd_check(a: &CheckArgs) -> Outcome {
    let cfg = SuiteConfig {
        cases: a.cases,
        seed: a.seed,
        max_order: a.max_order,
        max_degree: a.max_degree,
        min_degree: a.min_degree.min(a.max_degree),
        transcendental: a.transcendental,
        mode: a.mode.into(),
        pair: a.pair.map(|PairArg::Scalar| Pair::Scalar),
    };
    let report = run_suite(a.suite, &cfg)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for case in report.cases.iter().filter(|c| !c.passed) {
            println!("case {} (seed {}): FAIL", case.index, case.seed);
            for (name, value) in &case.inputs {
                println!("  {name} = {value}");
            }
            for f in &case.failures {
                println!("  {}", f.identity);
                println!("    LHS = {}", f.lhs);
                println!("    RHS = {}", f.rhs);
                println!("    discrepancy = {}", f.discrepancy);
            }
        }
        println!("{}", report.summary());
        println!("{}", if report.all_passed() { "PASS" } else { "FAIL" });
    }
    Ok(report.all_passed())
}

fn cmd_example(name: ExampleName, mode: ModeArg, as_json: bool) -> Outcome {
    let report: ExampleReport = match name {
        ExampleName::Scalar => scalar_example(mode.into())?,
        ExampleName::YmSu2 => yang_mills_example("ym-su2", &LieAlgebraData::su2(), 4, mode.into())?,
    };
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render());
    }
    Ok(report.passed)
}

fn read_section(m: &BvModel, path: &Path) -> Result<SectionSpec, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    if text.lines().any(|l| l.trim_start().starts_with('[')) {
        let file = ModelFile::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        return file.section.ok_or_else(|| UsageError(format!("{}: no [sections] table", path.display())));
    }
    SectionSpec::parse(m, &text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn cmd_evaluate(model: &ModelArg, expr: &str, section: Option<&Path>, points: Option<usize>, as_json: bool) -> Outcome {
    let (m, from_model) = load_model(model)?;
    let s = match (section, from_model) {
        (Some(p), _) => read_section(&m, p)?,
        (None, Some(s)) => s,
        (None, None) => return Err(UsageError("no section: pass a section file or a model file with [sections]".into())),
    };
    let f = parse_input(&m, expr)?;
    let needed = required_points_functional(&f, &s)?;
    let n = points.unwrap_or(needed);
    let value = evaluate(&m, &f, &s, n)?;
    if as_json {
        let components: Vec<_> = value.iter().map(|(mask, c)| json!({ "monomial": mask, "value": c })).collect();
        let out = json!({
            "schema": 1,
            "functional": print_functional(&m, &f),
            "points": n,
            "required_points": needed,
            "value": value.to_string(),
            "components": components,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("functional = {}", print_functional(&m, &f));
        println!("points = {n} (required {needed})");
        println!("value = {value}");
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Euler { model, expr, field } => cmd_euler(&model, &expr, &field),
        Command::Schouten { model, f, g, mode, collapse } => cmd_schouten(&model, &f, &g, mode, collapse),
        Command::Laplacian { model, f, mode, collapse } => cmd_laplacian(&model, &f, mode, collapse),
        Command::Check(a) => cmd_check(&a),
        Command::Example { name, mode, json } => cmd_example(name, mode, json),
        Command::Evaluate { model, expr, section, points, json } => cmd_evaluate(&model, &expr, section.as_deref(), points, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

