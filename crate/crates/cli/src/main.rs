//! `gpsynth`: solve, validate and benchmark generalized planning problems.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gpsynth_core::bench::{
    benchmark, generate, read_suite, run_manifest_with, run_suite, seed_from_env, RowOverrides, RunReport,
    BENCHMARKS,
};
use gpsynth_core::heuristics::{extract_landmark_graph, HelpfulActionSet};
use gpsynth_core::novelty::occurrence_table;
use gpsynth_core::pddl::{load_gp_problem, load_validation, parse_program, parse_program_raw, read_text, GpManifest};
use gpsynth_core::search::SearchOutcome;
use gpsynth_core::vm::{run_observed, validate, TraceRecorder};
use gpsynth_core::{EvaluatorId, Instance, RunOptions, SearchMode};

const EXIT_UNSOLVABLE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "gpsynth", version, about = "Generalized planning as search over planning programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a program solving every instance of a manifest.
    Solve(SolveArgs),
    /// Run a program on the training and held-out instances of a manifest.
    Validate { program: PathBuf, manifest: PathBuf },
    /// Run every row of a suite and print the aggregate report.
    Bench {
        suite: PathBuf,
        /// Also write the JSON records to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the action occurrence table of a program.
    Rank { program: PathBuf },
    /// Dump landmark graphs or helpful actions of a manifest's instances.
    Inspect {
        #[arg(long, conflicts_with = "helpful", required_unless_present = "helpful")]
        landmarks: bool,
        #[arg(long)]
        helpful: bool,
        manifest: PathBuf,
    },
    /// Write the instances and manifest of a benchmark (seed from GPSYNTH_SEED).
    Generate {
        /// Benchmark name, or `all` for one subdirectory per benchmark.
        name: String,
        out: PathBuf,
    },
}

#[derive(Args)]
struct SolveArgs {
    manifest: PathBuf,
    #[arg(long)]
    mode: Option<SearchMode>,
    #[arg(long)]
    v: Option<usize>,
    /// Comma-separated evaluators, e.g. `h5,f1` or `flm,f1,fha`.
    #[arg(long, value_delimiter = ',')]
    evaluators: Option<Vec<EvaluatorId>>,
    /// Step budget per program run during search.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
    /// Limit on evaluated nodes.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Disable novelty pruning.
    #[arg(long)]
    no_pruning: bool,
    /// Print the execution trace of the solution on every training instance.
    #[arg(long)]
    trace: bool,
    /// Directory of extra held-out instances to validate the solution on.
    #[arg(long)]
    validate_extra: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Validate { program, manifest } => validate_program(&program, &manifest),
        Command::Bench { suite, report } => bench(&suite, report.as_deref()),
        Command::Rank { program } => rank(&program),
        Command::Inspect {
            landmarks,
            helpful: _,
            manifest,
        } => inspect(&manifest, landmarks),
        Command::Generate { name, out } => generate_files(&name, &out),
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let manifest = GpManifest::read(&args.manifest)?;
    let overrides = RowOverrides {
        mode: args.mode,
        v: args.v,
        evaluators: args.evaluators,
        budget: args.budget,
        time_limit: args.time_limit.map(Duration::from_secs),
        node_limit: args.node_limit,
        no_pruning: args.no_pruning,
        extra_validation: match &args.validate_extra {
            Some(dir) => instance_files(dir)?,
            None => Vec::new(),
        },
    };
    let (row, result) = run_manifest_with(&manifest, &overrides, &mut ())?;
    let report = RunReport { rows: vec![row] };
    print!("{}", report.table());
    let row = &report.rows[0];
    if let Some(text) = &row.solution {
        println!("\n{text}");
        for v in &row.validation {
            println!("{}: {}", v.instance, v.verdict);
        }
    }
    if args.trace {
        if let SearchOutcome::Solved(program) = &result.outcome {
            let problem = load_gp_problem(&manifest)?;
            for inst in &problem.instances {
                let mut rec = TraceRecorder::new(&problem.domain);
                let out = run_observed(program, &problem.domain, inst, problem.pointers, &RunOptions::default(), &mut rec);
                println!("\ntrace {}", inst.name());
                for r in &rec.rows {
                    println!("{r}");
                }
                println!("{}", out.verdict());
            }
        }
    }
    println!();
    print!("{}", report.json_lines());
    Ok(match result.outcome {
        SearchOutcome::Solved(_) => ExitCode::SUCCESS,
        SearchOutcome::Unsolvable => ExitCode::from(EXIT_UNSOLVABLE),
        SearchOutcome::ResourceLimit(_) => ExitCode::from(EXIT_LIMIT),
    })
}

/// Instance files of a directory in name order: `.pddl` problems other than
/// domain files, and `.num` register files.
fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let is_instance = match path.extension().and_then(|e| e.to_str()) {
            Some("num") => true,
            Some("pddl") => !name.starts_with("domain"),
            _ => false,
        };
        if is_instance {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn validate_program(program: &Path, manifest: &Path) -> Result<ExitCode> {
    let manifest = GpManifest::read(manifest)?;
    let problem = load_gp_problem(&manifest)?;
    let text = read_text(program)?;
    let parsed = parse_program(&text, &problem.domain, problem.pointers, problem.lines)
        .with_context(|| format!("in {}", program.display()))?;
    let mut instances = problem.instances.clone();
    instances.extend(load_validation(&manifest, &problem.domain)?);
    let names: Vec<String> = instances.iter().map(|i| i.name().to_string()).collect();
    let all = problem.with_instances(instances)?;
    let outcomes = validate(&parsed, &all, None, &RunOptions::default());
    for (name, o) in names.iter().zip(&outcomes) {
        println!("{name}: {}", o.verdict());
    }
    Ok(if outcomes.iter().all(|o| o.is_solved()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNSOLVABLE)
    })
}

fn bench(suite: &Path, report_path: Option<&Path>) -> Result<ExitCode> {
    let entries = read_suite(suite)?;
    let report = run_suite(&entries);
    print!("{}", report.table());
    for row in report.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("{}: {}", row.domain, row.error.as_deref().unwrap_or_default());
    }
    let json = report.json_lines();
    match report_path {
        Some(p) => std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?,
        None => print!("\n{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn rank(program: &Path) -> Result<ExitCode> {
    let text = read_text(program)?;
    let lines = parse_program_raw(&text).with_context(|| format!("in {}", program.display()))?;
    println!("action  occurrences  next-rank");
    for (id, count) in occurrence_table(&lines) {
        println!("{id}  {count}  {}", count + 1);
    }
    Ok(ExitCode::SUCCESS)
}

fn inspect(manifest: &Path, landmarks: bool) -> Result<ExitCode> {
    let problem = load_gp_problem(&GpManifest::read(manifest)?)?;
    let Some(domain) = problem.domain.as_strips() else {
        bail!("landmarks and helpful actions need a STRIPS domain");
    };
    let instances: Vec<_> = problem.instances.iter().filter_map(Instance::as_strips).collect();
    if landmarks {
        for inst in instances {
            println!("instance {}", inst.name);
            print!("{}", extract_landmark_graph(domain, inst).describe(domain, inst));
        }
    } else {
        print!("{}", HelpfulActionSet::for_instances(domain, instances).describe(domain));
    }
    Ok(ExitCode::SUCCESS)
}

fn generate_files(name: &str, out: &Path) -> Result<ExitCode> {
    let seed = seed_from_env()?;
    if name == "all" {
        for spec in &BENCHMARKS {
            generate(spec, seed)?.write(&out.join(spec.name))?;
        }
    } else {
        generate(benchmark(name)?, seed)?.write(out)?;
    }
    Ok(ExitCode::SUCCESS)
}
