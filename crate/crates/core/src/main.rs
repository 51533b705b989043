use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use svgforge::pipeline::{
    run_augment, run_classify, run_curriculum, run_normalize, run_score, run_stats, run_verify, to_jsonl,
    AugmentOptions, CommandError, CommandOutcome, ExitStatus, NormalizeOptions, PartialSettings, Settings,
};

#[derive(Parser)]
#[command(name = "svgforge", version, about = "Normalize, classify, score and augment SVG icon corpora")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Base seed for augmentation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML file with default settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize every .svg below INPUT into OUTPUT.
    Normalize {
        input: PathBuf,
        output: PathBuf,
        /// Stop at the first failing file.
        #[arg(long)]
        strict: bool,
        /// Write the aggregate normalization report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Emit one dataset record per .svg below INPUT.
    Classify {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Command-count histograms and level proportions of a record file.
    Stats {
        records: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition records into curriculum stages.
    Curriculum {
        records: PathBuf,
        /// Epochs per stage, e.g. 1,1,3,3.
        #[arg(long, value_delimiter = ',')]
        epochs: Option<Vec<u32>>,
        /// Name of an extra, unpopulated stage appended after the four levels.
        #[arg(long)]
        extension_stage: Option<String>,
        #[arg(long, default_value_t = 3)]
        extension_epochs: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score {id, generated, reference} rows.
    Score {
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// prose (default) or literal.
        #[arg(long)]
        semantics: Option<String>,
    },
    /// Emit augmented variants of each record.
    Augment {
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        n_variants: Option<usize>,
        /// Comma-separated target colors.
        #[arg(long, value_delimiter = ',')]
        palette: Option<Vec<String>>,
        /// Allow swapping paths whose bounds overlap.
        #[arg(long)]
        allow_overlap_swap: bool,
        /// swap, recolor or both.
        #[arg(long)]
        ops: Option<String>,
    },
    /// Check normalized files against their sources.
    Verify {
        raw_dir: PathBuf,
        normalized_dir: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn flag(b: bool) -> Option<bool> {
    b.then_some(true)
}

fn flags(cli: &Cli) -> PartialSettings {
    let g = &cli.global;
    let mut p = PartialSettings {
        jobs: g.jobs,
        seed: g.seed,
        quiet: flag(g.quiet),
        ..Default::default()
    };
    match &cli.command {
        Command::Normalize { strict, .. } => p.strict = flag(*strict),
        Command::Curriculum { epochs, .. } => p.epochs = epochs.clone(),
        Command::Score {
            alpha,
            beta,
            gamma,
            semantics,
            ..
        } => {
            p.alpha = *alpha;
            p.beta = *beta;
            p.gamma = *gamma;
            p.semantics = semantics.clone();
        }
        Command::Augment {
            n_variants,
            palette,
            allow_overlap_swap,
            ops,
            ..
        } => {
            p.n_variants = *n_variants;
            p.palette = palette.clone();
            p.allow_overlap_swap = flag(*allow_overlap_swap);
            p.ops = ops.clone();
        }
        Command::Verify { tolerance, .. } => p.tolerance = *tolerance,
        Command::Classify { .. } | Command::Stats { .. } => {}
    }
    p
}

fn report(outcome: CommandOutcome, quiet: bool) -> ExitStatus {
    if outcome.status == ExitStatus::Success {
        if !quiet {
            eprintln!("{}", outcome.message);
        }
    } else {
        eprintln!("{} ({} failed)", outcome.message, outcome.failed);
    }
    outcome.status
}

fn print_or_written(json: String, out: Option<&Path>) {
    if out.is_none() {
        print!("{json}");
    }
}

fn run(cli: &Cli, settings: &Settings) -> Result<ExitStatus, CommandError> {
    let jobs = settings.jobs;
    let quiet = settings.quiet;
    Ok(match &cli.command {
        Command::Normalize {
            input, output, report: report_path, ..
        } => {
            let options = NormalizeOptions {
                strict: settings.strict,
                report: report_path.clone(),
                jobs,
            };
            report(run_normalize(input, output, &options)?, quiet)
        }
        Command::Classify { input, out } => report(run_classify(input, out, jobs)?, quiet),
        Command::Stats { records, out } => {
            print_or_written(run_stats(records, out.as_deref())?, out.as_deref());
            ExitStatus::Success
        }
        Command::Curriculum {
            records,
            extension_stage,
            extension_epochs,
            out,
            ..
        } => {
            let extension = extension_stage.as_deref().map(|name| (name, *extension_epochs));
            print_or_written(run_curriculum(records, settings.epochs, extension, out.as_deref())?, out.as_deref());
            ExitStatus::Success
        }
        Command::Score { pairs, out, .. } => report(run_score(pairs, out, &settings.reward, jobs)?, quiet),
        Command::Augment { records, out, .. } => {
            let options = AugmentOptions {
                spec: settings.augment.clone(),
                ops: settings.ops,
                jobs,
            };
            report(run_augment(records, out, &options)?, quiet)
        }
        Command::Verify {
            raw_dir,
            normalized_dir,
            out,
            ..
        } => {
            let (outcome, rows) = run_verify(raw_dir, normalized_dir, settings.tolerance, out.as_deref(), jobs)?;
            if out.is_none() {
                print!("{}", to_jsonl(&rows));
            }
            report(outcome, quiet)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { ExitStatus::UsageOrIo.code() } else { 0 };
            return ExitCode::from(code);
        }
    };
    let settings = match Settings::resolve(cli.global.config.as_deref(), |k| std::env::var(k).ok(), flags(&cli))
        .context("invalid configuration")
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(ExitStatus::UsageOrIo.code());
        }
    };
    let level = if settings.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(&cli, &settings) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {:#}", anyhow::Error::from(e));
            ExitCode::from(ExitStatus::UsageOrIo.code())
        }
    }
}
