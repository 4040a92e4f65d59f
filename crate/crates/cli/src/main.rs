use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voa_core::characters::char_from_basis;
use voa_core::checks::{self, RunConfig, RunOutput};
use voa_core::exec::Execution;
use voa_core::fusion::check_nm_products;
use voa_core::probe::{verify_eta_law, verify_s_defect};
use voa_core::{SpaceConfig, VoaError};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "voa-replicate", version, about = "Exact checks for rank-one vertex operator algebras at c = 1")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run registered checks and print their reports.
    Verify(VerifyArgs),
    /// Print graded dimensions and run the character checks.
    Char(CharArgs),
    /// Run the fusion-support checks.
    Fusion(FusionArgs),
    /// Run the modular probes on the imaginary axis.
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat inconclusive reports as failures.
    #[arg(long)]
    strict: bool,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check ids, repeatable or comma separated; `all` for every check.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    check: Vec<String>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 17)]
    cutoff: u32,
    /// q-series order; defaults to cutoff + 1.
    #[arg(long)]
    order: Option<u32>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Recompute pinned values and write the golden file first.
    #[arg(long)]
    pin: bool,
    /// Allow --pin to overwrite an existing golden file.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CharArgs {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 18)]
    order: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FusionArgs {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 17)]
    cutoff: u32,
    /// Sectors of the N^m.N^n product.
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = checks::PROBE_TERMS)]
    terms: usize,
    #[command(flatten)]
    output: Output,
}

fn exec(o: &Output) -> Execution {
    if o.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn emit(o: &Output, doc: &RunOutput, prefix: &str) -> ExitCode {
    let text = match o.format {
        Format::Json => match doc.to_json() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_IO);
            }
        },
        Format::Table => format!("{prefix}{}", doc.to_table()),
    };
    match &o.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_IO);
            }
        }
        None => print!("{text}"),
    }
    if doc.failed() || (o.strict && doc.inconclusive()) {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn error_code(e: &VoaError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        VoaError::UnknownCheck(_) | VoaError::InvalidConfig(_) => ExitCode::from(EXIT_USAGE),
        VoaError::Io(_) | VoaError::Json(_) | VoaError::Golden(_) => ExitCode::from(EXIT_IO),
        _ => ExitCode::from(EXIT_FAIL),
    }
}

fn config(checks: &[&str], k: u32, cutoff: u32, o: &Output) -> RunConfig {
    RunConfig { k, cutoff, checks: checks.iter().map(|s| s.to_string()).collect(), exec: exec(o), ..RunConfig::default() }
}

fn run_and_emit(cfg: &RunConfig, o: &Output, prefix: &str) -> ExitCode {
    match checks::run(cfg) {
        Ok(doc) => emit(o, &doc, prefix),
        Err(e) => error_code(&e),
    }
}

fn verify(a: VerifyArgs) -> ExitCode {
    let cfg = RunConfig {
        k: a.k,
        cutoff: a.cutoff,
        order: a.order,
        checks: a.check,
        samples: a.samples,
        rng_seed: a.rng_seed,
        pin: a.pin,
        force: a.force,
        golden_path: None,
        exec: exec(&a.output),
    };
    run_and_emit(&cfg, &a.output, "")
}

fn char_cmd(a: CharArgs) -> ExitCode {
    if a.order == 0 {
        return error_code(&VoaError::InvalidConfig("order must be positive".into()));
    }
    let c = a.order - 1;
    let mut spaces = vec![("M(1)".to_string(), SpaceConfig::heisenberg(c)), ("M(1)+".to_string(), SpaceConfig::heisenberg_plus(c))];
    if a.k > 0 {
        spaces.push((format!("V_L+ (k={})", a.k), SpaceConfig::lattice_plus(a.k, c)));
    }
    let mut prefix = String::new();
    for (name, cfg) in spaces {
        match char_from_basis(&cfg, a.order) {
            Ok(s) => prefix.push_str(&format!("{name}: {}\n", s.dense().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))),
            Err(e) => return error_code(&e),
        }
    }
    prefix.push('\n');
    let cfg = RunConfig { order: Some(a.order), ..config(&["char-m1plus", "theta-identity"], a.k, c, &a.output) };
    run_and_emit(&cfg, &a.output, &prefix)
}

fn fusion(a: FusionArgs) -> ExitCode {
    let cfg = config(&["fusion-eaa1", "fusion-ee7", "fusion-nm"], a.k, a.cutoff, &a.output);
    if a.m == 1 && a.n == 1 {
        return run_and_emit(&cfg, &a.output, "");
    }
    let mut doc = match checks::run(&RunConfig { checks: vec!["fusion-eaa1".into(), "fusion-ee7".into()], ..cfg.clone() }) {
        Ok(d) => d,
        Err(e) => return error_code(&e),
    };
    doc.reports.push(check_nm_products(a.k, a.m, a.n, a.cutoff, cfg.exec));
    doc.config = cfg;
    emit(&a.output, &doc, "")
}

fn probe(a: ProbeArgs) -> ExitCode {
    let cfg = config(&["eta-s-law", "s-defect-demo"], 2, 17, &a.output);
    let exec = cfg.exec;
    let reports = exec.map(&[0, 1], |&i| if i == 0 { verify_eta_law(a.terms) } else { verify_s_defect(a.terms) });
    emit(&a.output, &RunOutput { version: 1, config: cfg, reports }, "")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Char(a) => char_cmd(a),
        Cmd::Fusion(a) => fusion(a),
        Cmd::Probe(a) => probe(a),
    }
}
