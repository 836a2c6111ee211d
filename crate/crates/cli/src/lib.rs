//! `smod`: stability and moduli reports for rank-2 bundles on non-Kahler
//! elliptic surfaces, driven by a JSON problem config.
//!
//! Every subcommand takes `--config FILE` (or a directory of `*.json`
//! files, processed in sorted order).  Exit codes: 0 success, 1 unstable
//! verdict, 2 invalid input, 3 needs data.

pub mod build;
pub mod commands;
pub mod config;
pub mod schema;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use commands::CommandKind;
pub use schema::validate_report;

use config::OutputMode;

#[derive(Parser)]
#[command(
    name = "smod",
    version,
    about = "stability and moduli reports for rank-2 bundles on non-Kahler elliptic surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Surface invariants and the Poisson type.
    SurfaceInfo(CommonArgs),
    /// Stability verdict for the configured bundle descriptor.
    Stability(CommonArgs),
    /// Moduli-space report (emptiness, dimension, smoothness, Poisson).
    Moduli(CommonArgs),
    /// Membership of the configured graph divisor in the graph-map image.
    GraphImage(CommonArgs),
    /// Fibre of the graph map over the configured graph divisor.
    Fibre(CommonArgs),
    /// Lattice minimum m(2, c1), minimising class and unfiltrable band.
    M2(CommonArgs),
    /// Jump-fibre tower for the first configured jump descriptor.
    Psi(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Text,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem config: a JSON file, or a directory of *.json files.
    #[arg(long)]
    config: PathBuf,
    /// Override the output mode from the config.
    #[arg(long, value_enum)]
    output: Option<OutputArg>,
    /// Override the comparison tolerance from the config.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Worker threads for directory batches.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn effective_mode(cfg_mode: OutputMode, flag: Option<OutputArg>) -> OutputMode {
    match flag {
        Some(OutputArg::Json) => OutputMode::Json,
        Some(OutputArg::Text) => OutputMode::Text,
        None => cfg_mode,
    }
}

fn render(outcome: &commands::Outcome, mode: OutputMode) -> String {
    match mode {
        OutputMode::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json)
                .expect("report values serialize without errors");
            s.push('\n');
            s
        }
        OutputMode::Text => outcome.text.clone(),
    }
}

fn run_one(kind: CommandKind, path: &Path, args: &CommonArgs) -> (i32, String) {
    let mut cfg = match config::load(path) {
        Ok(c) => c,
        Err(msg) => {
            let outcome = commands::error_outcome(&smod_core::Error::model(msg));
            let mode = effective_mode(OutputMode::Json, args.output);
            return (outcome.exit, render(&outcome, mode));
        }
    };
    if let Some(eps) = args.epsilon {
        cfg.options.epsilon = eps;
    }
    let mode = effective_mode(cfg.options.output, args.output);
    if let Err(msg) = cfg.options.validate() {
        let outcome = commands::error_outcome(&smod_core::Error::model(msg));
        return (outcome.exit, render(&outcome, mode));
    }
    let outcome = commands::run_command(kind, &cfg);
    (outcome.exit, render(&outcome, mode))
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("no *.json configs in {}", dir.display()));
    }
    Ok(files)
}

fn run_batch(kind: CommandKind, dir: &Path, args: &CommonArgs) -> i32 {
    let files = match batch_files(dir) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("smod: {msg}");
            return 2;
        }
    };
    let jobs = args.jobs.max(1).min(files.len());
    let mut results: Vec<Option<(i32, String)>> = vec![None; files.len()];
    if jobs == 1 {
        for (i, f) in files.iter().enumerate() {
            results[i] = Some(run_one(kind, f, args));
        }
    } else {
        // Results land in their input slot: output order never depends on
        // scheduling.
        let slots = std::sync::Mutex::new(&mut results);
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= files.len() {
                        break;
                    }
                    let r = run_one(kind, &files[i], args);
                    slots.lock().expect("result slots")[i] = Some(r);
                });
            }
        });
    }
    let mut exit = 0;
    for (f, r) in files.iter().zip(results) {
        let (code, rendered) = r.expect("every batch slot is filled");
        let name = f
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| f.display().to_string());
        let header = json!({ "exit": code, "file": name });
        println!("{header}");
        print!("{rendered}");
        exit = exit.max(code);
    }
    exit
}

fn dispatch(kind: CommandKind, args: &CommonArgs) -> i32 {
    if args.config.is_dir() {
        return run_batch(kind, &args.config, args);
    }
    let (exit, rendered) = run_one(kind, &args.config, args);
    print!("{rendered}");
    exit
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Cmd::SurfaceInfo(a) => (CommandKind::SurfaceInfo, a),
        Cmd::Stability(a) => (CommandKind::Stability, a),
        Cmd::Moduli(a) => (CommandKind::Moduli, a),
        Cmd::GraphImage(a) => (CommandKind::GraphImage, a),
        Cmd::Fibre(a) => (CommandKind::Fibre, a),
        Cmd::M2(a) => (CommandKind::M2, a),
        Cmd::Psi(a) => (CommandKind::Psi, a),
    };
    dispatch(kind, args)
}
