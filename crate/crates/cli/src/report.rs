//! Aggregation and rendering of the final report: per-task success and
//! error rates (per size, with a pooled average), the probe comparison
//! table, and the run settings that produced them. Rendering is pure —
//! no clocks, no hostnames — so identical runs render identical bytes.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use goalbench_core::alfred::AlfredTaskKind;
use goalbench_core::blocksworld::BwFamily;
use goalbench_core::instance::ErrorCategory;
use goalbench_core::probe::{probe_delta_report, probe_result, ProbeDeltaTable, ProbeResult};

use crate::config::{BackendKind, ExperimentConfig};
use crate::stages::{ProbeRow, VerdictRow};

/// One aggregated line: a stacking task at one size, a pooled average, or a
/// household task's single row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub task: String,
    /// A block count, `average` for a pooled multi-size summary, or `-`
    /// where no size axis exists (household tasks, zero-instance rows).
    pub size: String,
    pub count: usize,
    /// Percentages over `count`; `None` (rendered `-`) when `count` is 0.
    pub loose: Option<f64>,
    pub strict: Option<f64>,
    pub domain_syntax: Option<f64>,
    pub physical: Option<f64>,
    pub constraint_violation: Option<f64>,
}

/// Everything the report files contain, ready to render.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Run settings, in display order.
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
    pub probes: ProbeDeltaTable,
}

fn fmt_pct(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.2}"),
        None => "-".to_string(),
    }
}

fn rates(task: &str, size: String, members: &[&VerdictRow]) -> ReportRow {
    let count = members.len();
    let pct = |k: usize| Some(100.0 * k as f64 / count as f64);
    let errors =
        |cat: ErrorCategory| members.iter().filter(|v| v.verdict.error == cat).count();
    ReportRow {
        task: task.to_string(),
        size,
        count,
        loose: pct(members.iter().filter(|v| v.verdict.loose_pass).count()),
        strict: pct(members.iter().filter(|v| v.verdict.strict_pass).count()),
        domain_syntax: pct(errors(ErrorCategory::DomainSyntax)),
        physical: pct(errors(ErrorCategory::Physical)),
        constraint_violation: pct(errors(ErrorCategory::ConstraintViolation)),
    }
}

fn empty_row(task: &str) -> ReportRow {
    ReportRow {
        task: task.to_string(),
        size: "-".to_string(),
        count: 0,
        loose: None,
        strict: None,
        domain_syntax: None,
        physical: None,
        constraint_violation: None,
    }
}

/// Group verdicts into report rows. Stacking tasks get one row per block
/// count plus a pooled `average` row when more than one count is present;
/// household tasks get a single row (their scene size is a property of the
/// generated scene, not a matrix axis). Tasks in `configured` that produced
/// no verdicts still appear, as zero-count rows.
pub fn aggregate(verdicts: &[VerdictRow], configured: &[String]) -> Vec<ReportRow> {
    let mut by_task: BTreeMap<&str, Vec<&VerdictRow>> = BTreeMap::new();
    for v in verdicts {
        by_task.entry(v.task.as_str()).or_default().push(v);
    }

    // Catalog order first, then any configured name outside the catalog,
    // then anything present in the verdicts but configured nowhere.
    let mut order: Vec<String> = Vec::new();
    let catalog = BwFamily::ALL
        .iter()
        .map(|f| f.name())
        .chain(AlfredTaskKind::ALL.iter().map(|k| k.name()));
    for name in catalog {
        if by_task.contains_key(name) || configured.iter().any(|c| c == name) {
            order.push(name.to_string());
        }
    }
    for name in configured {
        if !order.contains(name) {
            order.push(name.clone());
        }
    }
    for name in by_task.keys() {
        if !order.iter().any(|o| o == name) {
            order.push(name.to_string());
        }
    }

    let mut rows = Vec::new();
    for task in &order {
        let group = by_task.get(task.as_str()).cloned().unwrap_or_default();
        if group.is_empty() {
            rows.push(empty_row(task));
            continue;
        }
        if BwFamily::from_name(task).is_some() {
            let mut sizes: Vec<u32> = group.iter().map(|v| v.size).collect();
            sizes.sort_unstable();
            sizes.dedup();
            for &size in &sizes {
                let members: Vec<&VerdictRow> =
                    group.iter().copied().filter(|v| v.size == size).collect();
                rows.push(rates(task, size.to_string(), &members));
            }
            if sizes.len() > 1 {
                rows.push(rates(task, "average".to_string(), &group));
            }
        } else {
            rows.push(rates(task, "-".to_string(), &group));
        }
    }
    rows
}

/// Join each probed instance's records with its translation outcome.
pub fn probe_results(verdicts: &[VerdictRow], probes: &[ProbeRow]) -> Vec<ProbeResult> {
    let strict: BTreeMap<&str, bool> = verdicts
        .iter()
        .map(|v| (v.verdict.id.as_str(), v.verdict.strict_pass))
        .collect();
    let mut grouped: BTreeMap<&str, (&str, Vec<&ProbeRow>)> = BTreeMap::new();
    for row in probes {
        grouped
            .entry(row.record.query.instance_id.as_str())
            .or_insert((row.task.as_str(), Vec::new()))
            .1
            .push(row);
    }
    grouped
        .into_iter()
        .map(|(instance_id, (task, rows))| {
            let records: Vec<_> = rows.into_iter().map(|r| r.record.clone()).collect();
            let success = strict.get(instance_id).copied().unwrap_or(false);
            probe_result(instance_id, task, success, &records)
        })
        .collect()
}

fn metadata_for(config: &ExperimentConfig, instance_count: usize) -> Vec<(String, String)> {
    let pair = |k: &str, v: String| (k.to_string(), v);
    let mut meta = vec![
        pair("seed", config.seed.to_string()),
        pair("shots", config.shots.to_string()),
        pair(
            "example size",
            config
                .example_size
                .map(|s| s.to_string())
                .unwrap_or_else(|| "instance size".to_string()),
        ),
        pair(
            "example order",
            config.example_predicate_order.name().to_string(),
        ),
        pair(
            "layout",
            match config.layout {
                Some(layout) => layout_name(layout).to_string(),
                None => "per-family default".to_string(),
            },
        ),
        pair("goal cue", config.goal_cue.clone()),
        pair("backend", config.gateway.backend.name().to_string()),
    ];
    match config.gateway.backend {
        BackendKind::Corrupt => {
            meta.push(pair("corrupt rate", format!("{}", config.gateway.corrupt_rate)));
        }
        BackendKind::Http => {
            meta.push(pair("model", config.gateway.endpoint.model.clone()));
            meta.push(pair("cassette mode", cassette_mode_name(config.gateway.mode).to_string()));
        }
        _ => {}
    }
    meta.push(pair("instances", instance_count.to_string()));
    meta.push(pair(
        "probes",
        if config.probe.enabled {
            format!(
                "sampling rate {}, floor {}",
                config.probe.sampling_rate, config.probe.floor
            )
        } else {
            "disabled".to_string()
        },
    ));
    meta
}

fn layout_name(layout: goalbench_gateway::PromptLayout) -> &'static str {
    match layout {
        goalbench_gateway::PromptLayout::DomainPerExample => "domain_per_example",
        goalbench_gateway::PromptLayout::DomainOnce => "domain_once",
    }
}

fn cassette_mode_name(mode: goalbench_gateway::CassetteMode) -> &'static str {
    match mode {
        goalbench_gateway::CassetteMode::Record => "record",
        goalbench_gateway::CassetteMode::Replay => "replay",
        goalbench_gateway::CassetteMode::Passthrough => "passthrough",
    }
}

/// Aggregate verdicts and probes into the final report.
pub fn build_report(
    config: &ExperimentConfig,
    verdicts: &[VerdictRow],
    probes: &[ProbeRow],
) -> Result<ExperimentReport> {
    let matrix = config.matrix()?;
    let rows = aggregate(verdicts, &matrix.task_names());
    let results = probe_results(verdicts, probes);
    let table = probe_delta_report(&results, config.probe.sampling_rate);
    Ok(ExperimentReport {
        metadata: metadata_for(config, verdicts.len()),
        rows,
        probes: table,
    })
}

impl ExperimentReport {
    /// The rate table as CSV, one line per row, percentages to two decimals.
    pub fn csv(&self) -> String {
        let mut out = String::from(
            "task,size,count,loose,strict,domain_syntax,physical,constraint_violation\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.task,
                row.size,
                row.count,
                fmt_pct(row.loose),
                fmt_pct(row.strict),
                fmt_pct(row.domain_syntax),
                fmt_pct(row.physical),
                fmt_pct(row.constraint_violation),
            ));
        }
        out
    }

    /// The full report as Markdown: run settings, the rate table, and the
    /// probe comparison.
    pub fn markdown(&self) -> String {
        let mut out = String::from("# Goal Translation Report\n\n## Run\n\n");
        out.push_str("| setting | value |\n|---|---|\n");
        for (key, value) in &self.metadata {
            out.push_str(&format!("| {key} | {value} |\n"));
        }

        out.push_str("\n## Success and error rates\n\n");
        out.push_str(
            "`count` is instances; every other column is a percentage of the row. \
             The error columns classify strict failures, so `strict + domain_syntax + \
             physical + constraint_violation` sums to 100 within rounding. Zero-count \
             rows mark configured tasks that produced no verdicts.\n\n",
        );
        out.push_str(
            "| task | size | count | loose | strict | domain_syntax | physical | constraint_violation |\n\
             |---|---|---|---|---|---|---|---|\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                row.task,
                row.size,
                row.count,
                fmt_pct(row.loose),
                fmt_pct(row.strict),
                fmt_pct(row.domain_syntax),
                fmt_pct(row.physical),
                fmt_pct(row.constraint_violation),
            ));
        }

        out.push_str("\n## Probe comparison\n\n");
        if self.probes.rows.is_empty() {
            out.push_str("No instances were probed.\n");
            return out;
        }
        out.push_str(&format!(
            "Instances were sampled per task and outcome at rate {}. `baseline` \
             columns are mean probe scores over translation successes; `delta` \
             columns are failure means minus success means, in percentage points. \
             `-` marks cells with nothing to average.\n\n",
            self.probes.sampling_rate,
        ));
        out.push_str(
            "| task | successes | failures | baseline domain | baseline inference \
             | delta domain | delta inference |\n|---|---|---|---|---|---|---|\n",
        );
        for row in &self.probes.rows {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} |\n",
                row.task,
                row.probed_successes,
                row.probed_failures,
                fmt_pct(row.baseline_domain),
                fmt_pct(row.baseline_inference),
                fmt_pct(row.delta_domain),
                fmt_pct(row.delta_inference),
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use goalbench_core::instance::Verdict;
    use goalbench_core::probe::{ExpectedAnswer, ProbeKind, ProbeQuery, ProbeRecord};

    fn verdict_row(task: &str, size: u32, verdict: Verdict) -> VerdictRow {
        VerdictRow {
            task: task.to_string(),
            size,
            direction: None,
            verdict,
        }
    }

    fn pass(id: &str) -> Verdict {
        Verdict::pass(id, true, true)
    }

    fn constraint_fail(id: &str) -> Verdict {
        Verdict::fail(id, true, ErrorCategory::ConstraintViolation, "short stack")
    }

    fn syntax_fail(id: &str) -> Verdict {
        Verdict::fail(id, false, ErrorCategory::DomainSyntax, "no goal")
    }

    #[test]
    fn stacking_tasks_get_per_size_rows_and_a_pooled_average() {
        let verdicts = vec![
            verdict_row("explicit_stacks", 4, pass("a")),
            verdict_row("explicit_stacks", 4, constraint_fail("b")),
            verdict_row("explicit_stacks", 8, pass("c")),
            verdict_row("explicit_stacks", 8, pass("d")),
        ];
        let rows = aggregate(&verdicts, &["explicit_stacks".to_string()]);
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].size.as_str(), rows[0].count), ("4", 2));
        assert_eq!(rows[0].strict, Some(50.0));
        assert_eq!(rows[0].loose, Some(100.0));
        assert_eq!((rows[1].size.as_str(), rows[1].strict), ("8", Some(100.0)));
        assert_eq!((rows[2].size.as_str(), rows[2].count), ("average", 4));
        assert_eq!(rows[2].strict, Some(75.0));
        assert_eq!(rows[2].constraint_violation, Some(25.0));
    }

    #[test]
    fn error_columns_and_strict_success_partition_each_row() {
        let verdicts = vec![
            verdict_row("k_stacks", 8, pass("a")),
            verdict_row("k_stacks", 8, syntax_fail("b")),
            verdict_row("k_stacks", 8, constraint_fail("c")),
            verdict_row(
                "k_stacks",
                8,
                Verdict::fail("d", false, ErrorCategory::Physical, "cycle"),
            ),
        ];
        for row in aggregate(&verdicts, &[]) {
            let total = row.strict.unwrap()
                + row.domain_syntax.unwrap()
                + row.physical.unwrap()
                + row.constraint_violation.unwrap();
            assert!((total - 100.0).abs() < 1e-9, "{total}");
        }
    }

    #[test]
    fn household_tasks_get_one_sizeless_row() {
        let verdicts = vec![
            verdict_row("move_synonym", 31, pass("a")),
            verdict_row("move_synonym", 48, pass("b")),
        ];
        let rows = aggregate(&verdicts, &[]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].size, "-");
        assert_eq!(rows[0].count, 2);
    }

    #[test]
    fn configured_tasks_without_verdicts_appear_as_zero_rows() {
        let rows = aggregate(&[], &["prime_stack".to_string(), "ice_cream".to_string()]);
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert_eq!(row.count, 0);
            assert_eq!(row.strict, None);
        }
        // Catalog order puts the stacking family first.
        assert_eq!(rows[0].task, "prime_stack");
        assert_eq!(rows[1].task, "ice_cream");
    }

    #[test]
    fn csv_has_one_header_and_two_decimal_cells() {
        let verdicts = vec![
            verdict_row("n_blocks", 4, pass("a")),
            verdict_row("n_blocks", 4, pass("b")),
            verdict_row("n_blocks", 4, constraint_fail("c")),
        ];
        let report = ExperimentReport {
            metadata: vec![],
            rows: aggregate(&verdicts, &[]),
            probes: probe_delta_report(&[], 0.07),
        };
        let csv = report.csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "task,size,count,loose,strict,domain_syntax,physical,constraint_violation"
        );
        assert_eq!(lines[1], "n_blocks,4,3,100.00,66.67,0.00,0.00,33.33");
    }

    #[test]
    fn probe_rows_join_verdicts_through_instance_ids() {
        let verdicts = vec![
            verdict_row("explicit_stacks", 4, pass("es-1")),
            verdict_row("explicit_stacks", 4, syntax_fail("es-2")),
        ];
        let probe = |instance: &str, suffix: &str, grade: u32| ProbeRow {
            task: "explicit_stacks".to_string(),
            record: ProbeRecord {
                query: ProbeQuery {
                    id: format!("{instance}{suffix}"),
                    instance_id: instance.to_string(),
                    kind: ProbeKind::ObjectExtraction,
                    query_text: "List the objects.".to_string(),
                    expected: ExpectedAnswer::Objects { objects: vec![] },
                },
                answer: String::new(),
                grade: Some(grade),
            },
        };
        let probes = vec![
            probe("es-1", "-du1", 1),
            probe("es-1", "-du2", 1),
            probe("es-2", "-du1", 0),
        ];
        let results = probe_results(&verdicts, &probes);
        assert_eq!(results.len(), 2);
        assert!(results[0].translation_success);
        assert_eq!(results[0].domain_score, Some(1.0));
        assert!(!results[1].translation_success);
        assert_eq!(results[1].domain_score, Some(0.0));

        let table = probe_delta_report(&results, 1.0);
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].delta_domain, Some(-100.0));
    }

    #[test]
    fn markdown_renders_every_section() {
        let config = ExperimentConfig::default();
        let verdicts = vec![verdict_row("explicit_stacks", 4, pass("a"))];
        let report = build_report(&config, &verdicts, &[]).unwrap();
        let md = report.markdown();
        assert!(md.starts_with("# Goal Translation Report"));
        assert!(md.contains("## Run"));
        assert!(md.contains("| seed | 0 |"));
        assert!(md.contains("## Success and error rates"));
        assert!(md.contains("No instances were probed."));
        // Every configured-but-ungenerated default task shows up as a zero row.
        assert!(md.contains("| move_synonym | - | 0 | - | - | - | - | - |"));
    }

    #[test]
    fn delta_cells_without_data_render_as_dashes() {
        let results = vec![ProbeResult {
            instance_id: "x".to_string(),
            task: "prepare_meal".to_string(),
            translation_success: true,
            domain_score: Some(1.0),
            inference_score: None,
        }];
        let report = ExperimentReport {
            metadata: vec![],
            rows: vec![],
            probes: probe_delta_report(&results, 0.07),
        };
        let md = report.markdown();
        assert!(md.contains("| prepare_meal | 1 | 0 | 100.00 | - | - | - |"));
    }
}
