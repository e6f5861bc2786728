//! The pipeline stages behind the harness subcommands, plus the artifact
//! files that connect them. Each stage takes plain data in and returns
//! plain data out; persistence is JSONL, one record per line, so a run can
//! be resumed stage by stage and every intermediate is auditable.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use goalbench_core::alfred::{generate_instances as household_gen, AlfredGenOptions};
use goalbench_core::blocksworld::{generate_instances as stacking_gen, BwGenOptions};
use goalbench_core::instance::{evaluate, ErrorCategory, TaskInstance, Verdict};
use goalbench_core::probe::{
    generate_probes, grade_record, sample_for_probing, ProbeQuery, ProbeRecord,
};
use goalbench_core::seed::{derive_seed, rng_from_seed};
use goalbench_gateway::{
    build_probe_prompt, build_prompt, default_layout, extract_goal, PROBE_ANSWER_CUE,
};

use crate::config::ExperimentConfig;
use crate::report::{build_report, ExperimentReport};
use crate::stub::Backend;

/// The artifact files of one experiment directory.
pub struct Artifacts {
    dir: PathBuf,
}

impl Artifacts {
    pub fn new(dir: impl Into<PathBuf>) -> Artifacts {
        Artifacts { dir: dir.into() }
    }

    pub fn instances(&self) -> PathBuf {
        self.dir.join("instances.jsonl")
    }

    pub fn prompts(&self) -> PathBuf {
        self.dir.join("prompts.jsonl")
    }

    pub fn responses(&self) -> PathBuf {
        self.dir.join("responses.jsonl")
    }

    pub fn verdicts(&self) -> PathBuf {
        self.dir.join("verdicts.jsonl")
    }

    pub fn probes(&self) -> PathBuf {
        self.dir.join("probes.jsonl")
    }

    pub fn report_csv(&self) -> PathBuf {
        self.dir.join("report.csv")
    }

    pub fn report_md(&self) -> PathBuf {
        self.dir.join("report.md")
    }
}

/// One rendered prompt, keyed by instance id and by request hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRow {
    pub id: String,
    pub hash: String,
    pub prompt: String,
}

/// One completion exactly as the backend returned it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseRow {
    pub id: String,
    pub hash: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_tokens: Option<u64>,
    pub latency_ms: u64,
}

/// A verdict together with the keys the report groups by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub task: String,
    pub size: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// A graded probe with its task key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub task: String,
    #[serde(flatten)]
    pub record: ProbeRecord,
}

/// Write one record per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file =
        File::create(path).with_context(|| format!("cannot create `{}`", path.display()))?;
    let mut out = BufWriter::new(file);
    for row in rows {
        serde_json::to_writer(&mut out, row)
            .with_context(|| format!("serializing a record of `{}`", path.display()))?;
        out.write_all(b"\n")
            .with_context(|| format!("writing `{}`", path.display()))?;
    }
    out.flush()
        .with_context(|| format!("writing `{}`", path.display()))?;
    Ok(())
}

/// Read an artifact an earlier stage wrote.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).with_context(|| {
        format!(
            "cannot open `{}` — has the stage that writes it run?",
            path.display()
        )
    })?;
    let mut rows = Vec::new();
    for (number, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading `{}`", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).with_context(|| {
            format!(
                "`{}` line {} is not a valid record",
                path.display(),
                number + 1
            )
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Apply `f` to every item on up to `workers` threads, keeping input order
/// in the output. One worker degenerates to a plain loop.
pub fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(items.len()) {
            let tx = tx.clone();
            let next = &next;
            let f = &f;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                if tx.send((i, f(&items[i]))).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut indexed: Vec<(usize, R)> = rx.into_iter().collect();
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, r)| r).collect()
}

/// How many threads a backend can keep busy. Stubs compute locally and run
/// on the calling thread; the live gateway gets its in-flight cap.
fn worker_count(backend: &Backend) -> usize {
    match backend {
        Backend::Live(gateway) => gateway.config().max_in_flight.unwrap_or(8).max(1) as usize,
        _ => 1,
    }
}

/// Generate the instance set the config describes, in matrix order:
/// stacking entries first, then household entries.
pub fn stage_gen(config: &ExperimentConfig) -> Result<Vec<TaskInstance>> {
    let matrix = config.matrix()?;
    let mut instances = Vec::new();
    for entry in &matrix.stacking {
        let options = BwGenOptions {
            shots: config.shots,
            example_size: config.example_size,
            example_order: config.example_predicate_order,
            seed: config.seed,
        };
        let batch = stacking_gen(
            entry.family,
            entry.direction,
            &entry.sizes,
            entry.per_size,
            &options,
        )
        .with_context(|| format!("generating `{}` instances", entry.family.name()))?;
        instances.extend(batch);
    }
    for entry in &matrix.household {
        let options = AlfredGenOptions {
            shots: config.shots,
            seed: config.seed,
        };
        let batch = household_gen(entry.kind, entry.count, &options)
            .with_context(|| format!("generating `{}` instances", entry.kind.name()))?;
        instances.extend(batch);
    }
    Ok(instances)
}

/// Render every translation prompt. The hash is what the cassette files the
/// response under, so the prompt log doubles as a request log.
pub fn stage_prompt(
    config: &ExperimentConfig,
    instances: &[TaskInstance],
    backend: &Backend,
) -> Result<Vec<PromptRow>> {
    let mut rows = Vec::with_capacity(instances.len());
    for instance in instances {
        let layout = config
            .layout
            .unwrap_or_else(|| default_layout(instance.task));
        let spec = build_prompt(instance, config.shots, layout)
            .with_context(|| format!("assembling the prompt for `{}`", instance.id))?;
        let prompt = spec.render(&config.goal_cue);
        rows.push(PromptRow {
            id: instance.id.clone(),
            hash: backend.hash_for(&prompt),
            prompt,
        });
    }
    Ok(rows)
}

/// Complete every prompt and grade each completion. Responses and verdicts
/// come back in instance order regardless of completion order.
pub fn stage_eval(
    instances: &[TaskInstance],
    prompts: &[PromptRow],
    backend: &Backend,
) -> Result<(Vec<ResponseRow>, Vec<VerdictRow>)> {
    let by_id: BTreeMap<&str, &PromptRow> = prompts.iter().map(|p| (p.id.as_str(), p)).collect();
    let mut work = Vec::with_capacity(instances.len());
    for instance in instances {
        let prompt = by_id.get(instance.id.as_str()).copied().with_context(|| {
            format!("the prompt log has no prompt for instance `{}`", instance.id)
        })?;
        work.push((instance, prompt));
    }

    let outcomes = parallel_map(&work, worker_count(backend), |(instance, prompt)| {
        let response = backend
            .translate(instance, &prompt.prompt)
            .with_context(|| format!("completing instance `{}`", instance.id))?;
        Ok::<_, anyhow::Error>(response)
    });

    let mut responses = Vec::with_capacity(work.len());
    let mut verdicts = Vec::with_capacity(work.len());
    for ((instance, prompt), outcome) in work.iter().zip(outcomes) {
        let response = outcome?;
        let verdict = match extract_goal(&response.text, instance.domain()) {
            Ok(goal_text) => evaluate(&goal_text, instance),
            Err(_) => Verdict::fail(
                &instance.id,
                false,
                ErrorCategory::DomainSyntax,
                "the response contains no goal expression",
            ),
        };
        verdicts.push(VerdictRow {
            task: instance.task.name().to_string(),
            size: instance.size,
            direction: instance.task.direction().map(|d| d.name().to_string()),
            verdict,
        });
        responses.push(ResponseRow {
            id: instance.id.clone(),
            hash: prompt.hash.clone(),
            text: response.text,
            total_tokens: response.total_tokens,
            latency_ms: response.latency_ms,
        });
    }
    Ok((responses, verdicts))
}

/// One probe ready to send: the query plus its rendered prompt.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedProbe {
    pub task: String,
    pub query: ProbeQuery,
    pub prompt: String,
}

/// Decide who gets probed and build their probe prompts. Sampling is
/// stratified per (task, outcome) cell under a seed derived from the master
/// seed, so re-running the stage picks the same instances.
pub fn probe_plan(
    config: &ExperimentConfig,
    instances: &[TaskInstance],
    verdicts: &[VerdictRow],
) -> Result<Vec<PlannedProbe>> {
    if !config.probe.enabled {
        return Ok(Vec::new());
    }
    let strict: BTreeMap<&str, bool> = verdicts
        .iter()
        .map(|v| (v.verdict.id.as_str(), v.verdict.strict_pass))
        .collect();
    let mut outcomes = Vec::with_capacity(instances.len());
    for instance in instances {
        let strict_pass = strict.get(instance.id.as_str()).copied().with_context(|| {
            format!(
                "the verdict log has no verdict for instance `{}`",
                instance.id
            )
        })?;
        outcomes.push((
            instance.id.clone(),
            instance.task.name().to_string(),
            strict_pass,
        ));
    }
    let mut sample_rng = rng_from_seed(derive_seed(config.seed, "probe_sample"));
    let picked = sample_for_probing(
        &outcomes,
        config.probe.sampling_rate,
        config.probe.floor,
        &mut sample_rng,
    );

    let mut planned = Vec::new();
    for instance in instances {
        if !picked.contains(&instance.id) {
            continue;
        }
        let mut rng = rng_from_seed(derive_seed(instance.seed, "probes"));
        for query in generate_probes(instance, &mut rng) {
            let prompt = build_probe_prompt(instance, &query).render(PROBE_ANSWER_CUE);
            planned.push(PlannedProbe {
                task: instance.task.name().to_string(),
                query,
                prompt,
            });
        }
    }
    Ok(planned)
}

/// Load the manual-grade file: a JSON object mapping probe id to 0/1.
fn load_annotations(path: Option<&Path>) -> Result<BTreeMap<String, u32>> {
    let Some(path) = path else {
        return Ok(BTreeMap::new());
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read annotations `{}`", path.display()))?;
    serde_json::from_str(&text).with_context(|| {
        format!(
            "annotations `{}` are not a JSON object of probe id to grade",
            path.display()
        )
    })
}

/// Ask the backend every planned probe and grade the answers.
pub fn stage_probe(
    config: &ExperimentConfig,
    instances: &[TaskInstance],
    verdicts: &[VerdictRow],
    backend: &Backend,
) -> Result<Vec<ProbeRow>> {
    let planned = probe_plan(config, instances, verdicts)?;
    let annotations = load_annotations(config.probe.annotations.as_deref())?;
    let answered = parallel_map(&planned, worker_count(backend), |probe| {
        let response = backend
            .answer_probe(&probe.query, &probe.prompt)
            .with_context(|| format!("answering probe `{}`", probe.query.id))?;
        Ok::<_, anyhow::Error>(response.text)
    });
    let mut rows = Vec::with_capacity(planned.len());
    for (probe, outcome) in planned.iter().zip(answered) {
        let answer = outcome?;
        let grade = grade_record(
            &probe.query,
            &answer,
            annotations.get(&probe.query.id).copied(),
        );
        rows.push(ProbeRow {
            task: probe.task.clone(),
            record: ProbeRecord {
                query: probe.query.clone(),
                answer,
                grade,
            },
        });
    }
    Ok(rows)
}

/// Run every stage in order, persisting each artifact as it is produced.
/// The probe log is written even when probing is disabled (as an empty
/// file), so downstream readers never have to special-case its absence.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir).with_context(|| {
        format!(
            "cannot create output directory `{}`",
            config.output_dir.display()
        )
    })?;
    let artifacts = Artifacts::new(&config.output_dir);
    let backend = Backend::from_config(config)?;

    let instances = stage_gen(config)?;
    write_jsonl(&artifacts.instances(), &instances)?;

    let prompts = stage_prompt(config, &instances, &backend)?;
    write_jsonl(&artifacts.prompts(), &prompts)?;

    let (responses, verdicts) = stage_eval(&instances, &prompts, &backend)?;
    write_jsonl(&artifacts.responses(), &responses)?;
    write_jsonl(&artifacts.verdicts(), &verdicts)?;

    let probes = stage_probe(config, &instances, &verdicts, &backend)?;
    write_jsonl(&artifacts.probes(), &probes)?;

    let report = build_report(config, &verdicts, &probes)?;
    fs::write(artifacts.report_csv(), report.csv())
        .with_context(|| format!("writing `{}`", artifacts.report_csv().display()))?;
    fs::write(artifacts.report_md(), report.markdown())
        .with_context(|| format!("writing `{}`", artifacts.report_md().display()))?;
    Ok(report)
}
