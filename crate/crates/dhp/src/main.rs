use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use dhp::certify::{self, Context, DEFAULT_LATTICE_CUTOFF, DEFAULT_MAX_WORD_LEN, DEFAULT_PAIRS};
use dhp::io::{format_vector, load_rep, load_samples, parse_complex};
use dhp::report::{CheckReport, Report, Worst};
use dhp::CliError;
use dhp_core::automorphy::standard_grid;
use dhp_core::classical::{NamedForm, QSeriesConfig};
use dhp_core::meta_group::{word_decompose, Mat2, MetaElt, Sign, Word};
use dhp_core::rep::VVForm;
use dhp_core::slash::Weight;

#[derive(Parser)]
#[command(name = "dhp", version, about = "Metaplectic cover of GL2(Z): certification and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certification suite.
    Certify {
        #[arg(long, default_value_t = DEFAULT_MAX_WORD_LEN)]
        max_word_len: usize,
        /// JSON array of "a+bi" sample points.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Overrides every numeric tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Allow word lengths above the default bound.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = DEFAULT_PAIRS)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_LATTICE_CUTOFF)]
        lattice_cutoff: u32,
    },
    /// Evaluate a cover element or a named form.
    #[command(group(ArgGroup::new("what").required(true).args(["elem", "matrix", "form"])))]
    Eval {
        /// Word in S, S^-1, T, T^-1, R separated by spaces.
        #[arg(long)]
        elem: Option<String>,
        /// Matrix as [[a,b],[c,d]].
        #[arg(long, requires = "sign")]
        matrix: Option<String>,
        #[arg(long, requires = "matrix", allow_hyphen_values = true)]
        sign: Option<String>,
        /// eta, e4, e6, eta-hat or zn:N.
        #[arg(long, requires = "z")]
        form: Option<String>,
        #[arg(long, requires = "form", allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Residual of f|x against rho(x) f for one element.
    Check {
        #[arg(long)]
        form: String,
        /// Weight as w = 2k.
        #[arg(long, allow_hyphen_values = true)]
        weight: i64,
        #[arg(long)]
        elem: String,
        /// Representation file overriding the form's own.
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn write_json(path: &Option<PathBuf>, report: &Report) -> Result<(), CliError> {
    if let Some(path) = path {
        std::fs::write(path, report.to_json() + "\n")?;
    }
    Ok(())
}

fn print_check(c: &CheckReport) {
    let verdict = if c.pass { "PASS" } else { "FAIL" };
    print!("{verdict} {} max_residual={}", c.check_id, c.max_residual);
    if let Some(at) = &c.counterexample {
        print!(" counterexample: {at}");
    }
    println!();
}

fn certify(
    max_word_len: usize,
    samples: Option<PathBuf>,
    tol: Option<f64>,
    json: Option<PathBuf>,
    force: bool,
    pairs: usize,
    lattice_cutoff: u32,
) -> Result<bool, CliError> {
    let mut ctx = Context::new(max_word_len, force)?.with_tol(tol).with_pairs(pairs).with_lattice_cutoff(lattice_cutoff);
    if let Some(path) = samples {
        ctx = ctx.with_samples(load_samples(&path)?);
    }
    let report = certify::run(&ctx);
    for c in &report.checks {
        print_check(c);
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    println!("{} checks, {failed} failed", report.checks.len());
    write_json(&json, &report)?;
    Ok(report.pass)
}

fn parse_word(s: &str) -> Result<Word, CliError> {
    Ok(s.parse::<Word>()?)
}

fn eval(
    elem: Option<String>,
    matrix: Option<String>,
    sign: Option<String>,
    form: Option<String>,
    z: Option<String>,
) -> Result<(), CliError> {
    if let Some(w) = elem {
        println!("{}", parse_word(&w)?.lift());
    } else if let (Some(m), Some(s)) = (matrix, sign) {
        let m: Mat2 = m.parse()?;
        let x = MetaElt::new(m, s.parse::<Sign>()?);
        let word = word_decompose(&m);
        println!("{x}");
        println!("word: {}", if word.is_empty() { "I".to_string() } else { word.to_string() });
    } else if let (Some(f), Some(z)) = (form, z) {
        let f: NamedForm = f.parse()?;
        let v = f.evaluate(parse_complex(&z)?, &QSeriesConfig::default())?;
        println!("{}", format_vector(&v));
    } else {
        return Err(CliError::Usage("nothing to evaluate".into()));
    }
    Ok(())
}

fn check(
    form: String,
    weight: i64,
    elem: String,
    rep: Option<PathBuf>,
    samples: Option<PathBuf>,
    tol: f64,
    json: Option<PathBuf>,
) -> Result<bool, CliError> {
    let named: NamedForm = form.parse()?;
    let k = Weight::from_twice(weight);
    match named.default_weight() {
        Some(w) if w == k => {}
        Some(w) => return Err(CliError::Usage(format!("{named} has weight w={}, not {weight}", w.twice()))),
        None => return Err(CliError::Usage(format!("{named} is not a modular form"))),
    }
    let samples = match samples {
        Some(path) => load_samples(&path)?,
        None => standard_grid(),
    };
    let word = parse_word(&elem)?;
    let x = word.lift();
    let mut f = named.form(QSeriesConfig::certification())?;
    if let Some(path) = rep {
        f = VVForm::new(f.function().clone(), k, load_rep(&path)?)?;
    }
    let residual = f.modularity_residual(&x, &samples)?;
    let mut worst = Worst::new();
    worst.add(residual, || format!("x={x}"));
    let universe = format!("{} sample points", samples.len());
    let report = CheckReport::numeric("check.slash_vs_rep", universe, worst, tol)
        .param("form", named.to_string())
        .param("weight_twice", weight)
        .param("elem", x.to_string())
        .param("rep", f.rep().group().name());
    println!("residual: {:e}", residual);
    print_check(&report);
    let report = Report::new(vec![report]);
    write_json(&json, &report)?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Certify { max_word_len, samples, tol, json, force, pairs, lattice_cutoff } => {
            certify(max_word_len, samples, tol, json, force, pairs, lattice_cutoff)
        }
        Command::Eval { elem, matrix, sign, form, z } => eval(elem, matrix, sign, form, z).map(|_| true),
        Command::Check { form, weight, elem, rep, samples, tol, json } => {
            check(form, weight, elem, rep, samples, tol, json)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
