//! The `goalbench` binary. Each subcommand runs one pipeline stage against
//! the artifacts in the output directory; `run` chains all of them. Flags
//! mirror the config file fields and win over them.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use goalbench_cli::config::{
    default_matrix, parse_cassette_mode, parse_layout, BackendKind, ExperimentConfig,
    HouseholdEntry, StackingEntry,
};
use goalbench_cli::report::build_report;
use goalbench_cli::stages::{
    read_jsonl, run_experiment, stage_eval, stage_gen, stage_probe, stage_prompt, write_jsonl,
    Artifacts, ProbeRow, PromptRow, VerdictRow,
};
use goalbench_cli::stub::Backend;

use goalbench_core::blocksworld::{BwFamily, Direction, PredicateOrder};
use goalbench_core::alfred::AlfredTaskKind;
use goalbench_core::instance::TaskInstance;

#[derive(Debug, Parser)]
#[command(
    name = "goalbench",
    about = "Generate goal-translation benchmarks, run them against a model, and report the results",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate benchmark instances into instances.jsonl.
    Gen(StageArgs),
    /// Render translation prompts for generated instances.
    Prompt(StageArgs),
    /// Complete every prompt and grade the results.
    Eval(StageArgs),
    /// Sample graded instances and ask the follow-up probes.
    Probe(StageArgs),
    /// Aggregate verdicts and probes into report.csv and report.md.
    Report(StageArgs),
    /// Run every stage in order.
    Run(StageArgs),
}

/// Flags shared by every stage. Unset flags defer to the config file, which
/// defers to the built-in defaults.
#[derive(Debug, Args)]
struct StageArgs {
    /// TOML config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory artifacts are written to and read from.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Master seed; everything random derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Worked examples per prompt.
    #[arg(long)]
    shots: Option<u32>,
    /// Block count of stacking example problems (default: the instance's own size).
    #[arg(long)]
    example_size: Option<u32>,
    /// Literal order in example goals: ontable_first or clear_first.
    #[arg(long)]
    example_order: Option<String>,
    /// Domain placement in prompts: domain_per_example or domain_once.
    #[arg(long)]
    layout: Option<String>,
    /// The line that asks for the translation.
    #[arg(long)]
    goal_cue: Option<String>,
    /// Restrict the matrix to this task (repeatable).
    #[arg(long = "task")]
    tasks: Vec<String>,
    /// Block counts for the selected stacking tasks, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u32>,
    /// Instances per size (stacking) or per task (household).
    #[arg(long)]
    count: Option<u32>,
    /// Listing direction for explicit_stacks_ii: bottom_to_top or top_to_bottom.
    #[arg(long)]
    direction: Option<String>,
    /// Translator: oracle, corrupt, prose, or http.
    #[arg(long)]
    backend: Option<String>,
    /// Damage probability for the corrupt stub.
    #[arg(long)]
    corrupt_rate: Option<f64>,
    /// Request/response store for the http backend.
    #[arg(long)]
    cassette: Option<PathBuf>,
    /// Cassette mode: record, replay, or passthrough.
    #[arg(long)]
    cassette_mode: Option<String>,
    /// Completion endpoint URL.
    #[arg(long)]
    url: Option<String>,
    /// Model name sent to the endpoint (part of the request hash).
    #[arg(long)]
    model: Option<String>,
    /// Sampling temperature sent to the endpoint.
    #[arg(long)]
    temperature: Option<f64>,
    /// Environment variable the API key is read from.
    #[arg(long)]
    api_key_env: Option<String>,
    /// Fraction of each task/outcome cell that gets probed.
    #[arg(long)]
    probe_rate: Option<f64>,
    /// Minimum probed instances per cell.
    #[arg(long)]
    probe_floor: Option<usize>,
    /// JSON file of manual probe grades (probe id to 0 or 1).
    #[arg(long)]
    annotations: Option<PathBuf>,
    /// Skip probing entirely.
    #[arg(long)]
    no_probes: bool,
}

fn apply_overrides(config: &mut ExperimentConfig, args: &StageArgs) -> Result<()> {
    if let Some(dir) = &args.output_dir {
        config.output_dir = dir.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(shots) = args.shots {
        config.shots = shots;
    }
    if let Some(size) = args.example_size {
        config.example_size = Some(size);
    }
    if let Some(name) = &args.example_order {
        config.example_predicate_order = PredicateOrder::from_name(name).with_context(|| {
            format!("unknown example order `{name}` (ontable_first, clear_first)")
        })?;
    }
    if let Some(name) = &args.layout {
        config.layout = Some(parse_layout(name).with_context(|| {
            format!("unknown layout `{name}` (domain_per_example, domain_once)")
        })?);
    }
    if let Some(cue) = &args.goal_cue {
        config.goal_cue = cue.clone();
    }

    if !args.tasks.is_empty() {
        config.blocksworld.clear();
        config.alfred.clear();
        for name in &args.tasks {
            if BwFamily::from_name(name).is_some() {
                config.blocksworld.push(StackingEntry {
                    family: name.clone(),
                    direction: None,
                    sizes: args.sizes.clone(),
                    per_size: args.count,
                });
            } else if AlfredTaskKind::from_name(name).is_some() {
                config.alfred.push(HouseholdEntry {
                    task: name.clone(),
                    count: args.count,
                });
            } else {
                bail!("unknown task `{name}`");
            }
        }
    } else if !args.sizes.is_empty() || args.count.is_some() {
        // Narrow whatever matrix the config denotes; materialize the
        // default matrix first so there is something to narrow.
        if config.blocksworld.is_empty() && config.alfred.is_empty() {
            let (stacking, household) = default_matrix();
            config.blocksworld = stacking;
            config.alfred = household;
        }
        for entry in &mut config.blocksworld {
            if !args.sizes.is_empty() {
                entry.sizes = args.sizes.clone();
            }
            if let Some(count) = args.count {
                entry.per_size = Some(count);
            }
        }
        if let Some(count) = args.count {
            for entry in &mut config.alfred {
                entry.count = Some(count);
            }
        }
    }
    if let Some(name) = &args.direction {
        let direction = Direction::from_name(name).with_context(|| {
            format!("unknown direction `{name}` (bottom_to_top, top_to_bottom)")
        })?;
        let mut applied = false;
        for entry in &mut config.blocksworld {
            if entry.family == "explicit_stacks_ii" {
                entry.direction = Some(direction);
                applied = true;
            }
        }
        if !applied {
            bail!("--direction applies to explicit_stacks_ii; select it with --task explicit_stacks_ii");
        }
    }

    if let Some(name) = &args.backend {
        config.gateway.backend = BackendKind::from_name(name)
            .with_context(|| format!("unknown backend `{name}` (oracle, corrupt, prose, http)"))?;
    }
    if let Some(rate) = args.corrupt_rate {
        config.gateway.corrupt_rate = rate;
    }
    if let Some(path) = &args.cassette {
        config.gateway.cassette = path.clone();
    }
    if let Some(name) = &args.cassette_mode {
        config.gateway.mode = parse_cassette_mode(name)
            .with_context(|| format!("unknown cassette mode `{name}` (record, replay, passthrough)"))?;
    }
    if let Some(url) = &args.url {
        config.gateway.endpoint.url = url.clone();
    }
    if let Some(model) = &args.model {
        config.gateway.endpoint.model = model.clone();
    }
    if let Some(temperature) = args.temperature {
        config.gateway.endpoint.temperature = temperature;
    }
    if let Some(var) = &args.api_key_env {
        config.gateway.endpoint.api_key_env = Some(var.clone());
    }
    if let Some(rate) = args.probe_rate {
        config.probe.sampling_rate = rate;
    }
    if let Some(floor) = args.probe_floor {
        config.probe.floor = floor;
    }
    if let Some(path) = &args.annotations {
        config.probe.annotations = Some(path.clone());
    }
    if args.no_probes {
        config.probe.enabled = false;
    }
    Ok(())
}

fn load_config(args: &StageArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    apply_overrides(&mut config, args)?;
    config.validate()?;
    Ok(config)
}

fn ensure_dir(config: &ExperimentConfig) -> Result<Artifacts> {
    fs::create_dir_all(&config.output_dir).with_context(|| {
        format!(
            "cannot create output directory `{}`",
            config.output_dir.display()
        )
    })?;
    Ok(Artifacts::new(&config.output_dir))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen(args) => {
            let config = load_config(&args)?;
            let artifacts = ensure_dir(&config)?;
            let instances = stage_gen(&config)?;
            write_jsonl(&artifacts.instances(), &instances)?;
            println!(
                "generated {} instances -> {}",
                instances.len(),
                artifacts.instances().display()
            );
        }
        Command::Prompt(args) => {
            let config = load_config(&args)?;
            let artifacts = ensure_dir(&config)?;
            let backend = Backend::from_config(&config)?;
            let instances: Vec<TaskInstance> = read_jsonl(&artifacts.instances())?;
            let prompts = stage_prompt(&config, &instances, &backend)?;
            write_jsonl(&artifacts.prompts(), &prompts)?;
            println!(
                "rendered {} prompts -> {}",
                prompts.len(),
                artifacts.prompts().display()
            );
        }
        Command::Eval(args) => {
            let config = load_config(&args)?;
            let artifacts = ensure_dir(&config)?;
            let backend = Backend::from_config(&config)?;
            let instances: Vec<TaskInstance> = read_jsonl(&artifacts.instances())?;
            let prompts: Vec<PromptRow> = read_jsonl(&artifacts.prompts())?;
            let (responses, verdicts) = stage_eval(&instances, &prompts, &backend)?;
            write_jsonl(&artifacts.responses(), &responses)?;
            write_jsonl(&artifacts.verdicts(), &verdicts)?;
            let strict = verdicts.iter().filter(|v| v.verdict.strict_pass).count();
            println!(
                "graded {} instances ({} strict passes) -> {}",
                verdicts.len(),
                strict,
                artifacts.verdicts().display()
            );
        }
        Command::Probe(args) => {
            let config = load_config(&args)?;
            let artifacts = ensure_dir(&config)?;
            let backend = Backend::from_config(&config)?;
            let instances: Vec<TaskInstance> = read_jsonl(&artifacts.instances())?;
            let verdicts: Vec<VerdictRow> = read_jsonl(&artifacts.verdicts())?;
            let probes = stage_probe(&config, &instances, &verdicts, &backend)?;
            write_jsonl(&artifacts.probes(), &probes)?;
            println!(
                "asked {} probes -> {}",
                probes.len(),
                artifacts.probes().display()
            );
        }
        Command::Report(args) => {
            let config = load_config(&args)?;
            let artifacts = ensure_dir(&config)?;
            let verdicts: Vec<VerdictRow> = read_jsonl(&artifacts.verdicts())?;
            let probes: Vec<ProbeRow> = if artifacts.probes().exists() {
                read_jsonl(&artifacts.probes())?
            } else {
                Vec::new()
            };
            let report = build_report(&config, &verdicts, &probes)?;
            fs::write(artifacts.report_csv(), report.csv())
                .with_context(|| format!("writing `{}`", artifacts.report_csv().display()))?;
            fs::write(artifacts.report_md(), report.markdown())
                .with_context(|| format!("writing `{}`", artifacts.report_md().display()))?;
            println!(
                "wrote {} and {}",
                artifacts.report_csv().display(),
                artifacts.report_md().display()
            );
        }
        Command::Run(args) => {
            let config = load_config(&args)?;
            run_experiment(&config)?;
            println!("run complete -> {}", config.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
