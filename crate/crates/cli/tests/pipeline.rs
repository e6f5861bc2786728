//! End-to-end checks of the `goalbench` binary: the staged subcommands
//! chained over a shared output directory, the flags-only path with no
//! config file, and the error surfaces (missing artifacts, unknown names).

use std::path::Path;
use std::process::{Command, Output};

fn goalbench(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goalbench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary launches")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn assert_ok(output: &Output, what: &str) {
    assert!(
        output.status.success(),
        "{what} failed\nstdout: {}\nstderr: {}",
        stdout(output),
        stderr(output)
    );
}

#[test]
fn the_stages_chain_over_one_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.toml"),
        r#"
seed = 5
output_dir = "out"
shots = 1

[[blocksworld]]
family = "explicit_stacks"
sizes = [4]
per_size = 4

[[alfred]]
task = "move_synonym"
count = 3

[probe]
sampling_rate = 1.0
floor = 9
"#,
    )
    .unwrap();
    let config = ["--config", "config.toml"];

    let gen = goalbench(&[&["gen"], &config[..]].concat(), dir.path());
    assert_ok(&gen, "gen");
    assert!(stdout(&gen).contains("generated 7 instances"), "{}", stdout(&gen));

    let prompt = goalbench(&[&["prompt"], &config[..]].concat(), dir.path());
    assert_ok(&prompt, "prompt");
    assert!(stdout(&prompt).contains("rendered 7 prompts"), "{}", stdout(&prompt));

    let eval = goalbench(&[&["eval"], &config[..]].concat(), dir.path());
    assert_ok(&eval, "eval");
    assert!(
        stdout(&eval).contains("graded 7 instances (7 strict passes)"),
        "{}",
        stdout(&eval)
    );

    let probe = goalbench(&[&["probe"], &config[..]].concat(), dir.path());
    assert_ok(&probe, "probe");
    assert!(stdout(&probe).contains("asked"), "{}", stdout(&probe));

    let report = goalbench(&[&["report"], &config[..]].concat(), dir.path());
    assert_ok(&report, "report");

    let out = dir.path().join("out");
    for name in [
        "instances.jsonl",
        "prompts.jsonl",
        "responses.jsonl",
        "verdicts.jsonl",
        "probes.jsonl",
        "report.csv",
        "report.md",
    ] {
        assert!(out.join(name).exists(), "{name} missing after the chain");
    }
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("task,size,count,loose,strict,domain_syntax,physical,constraint_violation"));
    assert!(csv.contains("explicit_stacks,4,4,100.00,100.00,0.00,0.00,0.00"), "{csv}");
    assert!(csv.contains("move_synonym,-,3,100.00,100.00,0.00,0.00,0.00"), "{csv}");
    let md = std::fs::read_to_string(out.join("report.md")).unwrap();
    assert!(md.contains("# Goal Translation Report"));
    assert!(md.contains("## Probe comparison"), "probes ran, so the table must render");
}

#[test]
fn flags_alone_configure_a_whole_run() {
    let dir = tempfile::tempdir().unwrap();
    let run = goalbench(
        &[
            "run",
            "--output-dir",
            "out",
            "--seed",
            "9",
            "--task",
            "explicit_stacks",
            "--sizes",
            "4",
            "--count",
            "2",
            "--backend",
            "prose",
            "--no-probes",
        ],
        dir.path(),
    );
    assert_ok(&run, "flags-only run");
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(
        csv.contains("explicit_stacks,4,2,0.00,0.00,100.00,0.00,0.00"),
        "{csv}"
    );
}

#[test]
fn eval_before_prompt_fails_and_names_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let eval = goalbench(&["eval", "--output-dir", "out"], dir.path());
    assert!(!eval.status.success(), "eval must fail without artifacts");
    assert!(
        stderr(&eval).contains("has the stage that writes it run?"),
        "stderr: {}",
        stderr(&eval)
    );
}

#[test]
fn an_unknown_task_name_is_rejected_up_front() {
    let dir = tempfile::tempdir().unwrap();
    let gen = goalbench(&["gen", "--task", "tower_of_hanoi"], dir.path());
    assert!(!gen.status.success());
    assert!(
        stderr(&gen).contains("unknown task `tower_of_hanoi`"),
        "stderr: {}",
        stderr(&gen)
    );
}
