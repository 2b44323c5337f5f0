//! `spets`: batch verification front end.
//!
//! Exit status is 0 when every requested verdict passes, 2 when any check
//! fails or a computation produces contradicting evidence, and 1 on usage
//! or configuration errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{run_all, run_suite, Ctx, Job, QSpec};
use report::Report;
use spets::reflgrp::{CharTableCache, GroupSpec, ReflGroup};
use spets::yokonuma::{build_model, model_dump};

#[derive(Parser, Debug)]
#[command(name = "spets", version, about = "Exact verification of principal blocks and Yokonuma-type algebras")]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a CSV verdict summary here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Character table cache directory (overrides SPETS_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads; reports do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Suppress the per-verdict summary.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Args, Debug, Clone)]
struct BlockArgs {
    /// Group names, e.g. A2, I2(5), G(3,1,2), C(4); repeat for a batch.
    #[arg(long, required = true)]
    group: Vec<String>,
    /// Primes ℓ; comma-separated for a batch.
    #[arg(long, value_delimiter = ',', required = true)]
    l: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    a: u32,
    /// `auto` for the three smallest admissible q, or a list.
    #[arg(long, default_value = "auto")]
    q: QSpec,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, degrees, classes and character table.
    Group {
        #[arg(long, required = true)]
        group: Vec<String>,
    },
    /// Orbit census and the Orlik–Solomon three-way check.
    Census {
        #[arg(long, required = true)]
        group: Vec<String>,
        /// Omit to use the three smallest admissible ℓ^a.
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Schur element tables verified against the Hecke engines.
    Schur {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long, default_value = "2,4,9")]
        q: QSpec,
    },
    /// dim(B₀) with the valuation and residue verdicts.
    Dimb0(BlockArgs),
    /// Decomposition matrix and the projective-degree verdict.
    Decomp(BlockArgs),
    /// Build the Yokonuma-type algebra and run its checks.
    Yokonuma {
        #[arg(long)]
        group: String,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// Defaults to 1 + ℓ^a.
        #[arg(long)]
        q: Option<u64>,
        /// Write the model (generator matrices, basis, trace values) here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Compare with the GL₂(q) Yokonuma algebra.
    Classical {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        l: u64,
    },
    /// Every acceptance workload in one report.
    Suite,
}

fn block_jobs(b: &BlockArgs, decomp: bool) -> Vec<Job> {
    let mut jobs = Vec::new();
    for g in &b.group {
        for &l in &b.l {
            let (group, q) = (g.clone(), b.q.clone());
            jobs.push(if decomp {
                Job::Decomp { group, l, a: b.a, q }
            } else {
                Job::Dimb0 { group, l, a: b.a, q }
            });
        }
    }
    jobs
}

fn jobs_for(cmd: &Command) -> Vec<Job> {
    match cmd {
        Command::Group { group } => group.iter().map(|g| Job::Group { group: g.clone() }).collect(),
        Command::Census { group, l, a } => group.iter().map(|g| Job::Census { group: g.clone(), l: *l, a: *a }).collect(),
        Command::Schur { group, q } => group.iter().map(|g| Job::Schur { group: g.clone(), q: q.clone() }).collect(),
        Command::Dimb0(b) => block_jobs(b, false),
        Command::Decomp(b) => block_jobs(b, true),
        Command::Yokonuma { group, l, a, q, .. } => vec![Job::Yokonuma { group: group.clone(), l: *l, a: *a, q: *q }],
        Command::Classical { q, l } => vec![Job::Classical { q: *q, l: *l }],
        Command::Suite => commands::suite_jobs(),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Group { .. } => "group",
        Command::Census { .. } => "census",
        Command::Schur { .. } => "schur",
        Command::Dimb0(_) => "dimb0",
        Command::Decomp(_) => "decomp",
        Command::Yokonuma { .. } => "yokonuma",
        Command::Classical { .. } => "classical",
        Command::Suite => "suite",
    }
}

fn write_dump(group: &str, l: u64, a: u32, q: u64, path: &std::path::Path) -> Result<(), String> {
    let w = ReflGroup::build(&GroupSpec::parse(group).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let model = build_model(&w, l, a, q).map_err(|e| e.to_string())?;
    let dump = model_dump(&model).map_err(|e| e.to_string())?;
    let mut text = serde_json::to_string_pretty(&dump).map_err(|e| e.to_string())?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {}", path.display(), e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.out.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(1);
        }
    }
    let cache = cli.out.cache_dir.clone().map(CharTableCache::new).or_else(CharTableCache::from_env);
    let ctx = Ctx { cache };
    let jobs = jobs_for(&cli.cmd);
    let runs = match cli.cmd {
        Command::Suite => run_suite(&ctx),
        _ => run_all(&ctx, &jobs),
    };
    let name = command_name(&cli.cmd);
    let report = Report::new(name, json!({ "jobs": jobs }), runs);
    if !cli.out.quiet {
        let _ = report.summary(&mut std::io::stdout().lock());
    }
    // the report is written before the exit status is decided
    let written = cli
        .out
        .out
        .as_ref()
        .map_or(Ok(()), |p| report.write_json(p))
        .and_then(|_| cli.out.csv.as_ref().map_or(Ok(()), |p| report.write_csv(p)));
    if let Err(e) = written {
        eprintln!("error: {}", e);
        return ExitCode::from(1);
    }
    if let Command::Yokonuma { group, l, a, q, dump: Some(path) } = &cli.cmd {
        if report.pass {
            if let Err(e) = write_dump(group, *l, *a, q.unwrap_or(1 + l.pow(*a)), path) {
                eprintln!("error: {}", e);
                return ExitCode::from(1);
            }
        }
    }
    if report.has_config_error() {
        for r in report.runs.iter().filter_map(|r| r.error.as_ref().filter(|e| e.kind == "config")) {
            eprintln!("error: {}", r.message);
        }
        ExitCode::from(1)
    } else if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
