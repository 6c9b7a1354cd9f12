//! End-to-end runs of the `majc` binary: every subcommand once, the
//! exit-code contract, and report determinism modulo the clock.

use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn majc() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_majc"));
    // Keep the harness environment from leaking into seed defaults.
    cmd.env_remove("MAJC_SEED");
    cmd
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn parse(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| {
        panic!("expected JSON, got error {e}: {}", String::from_utf8_lossy(bytes))
    })
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process was not killed by a signal")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// The run report with its timing field stripped, for run-to-run equality.
fn stable_report(bytes: &[u8]) -> Value {
    let mut report = parse(bytes);
    let map = report.as_object_mut().expect("reports are JSON objects");
    map.remove("elapsed_ms").expect("reports carry elapsed_ms");
    report
}

fn assertion_lines(report: &Value) -> Vec<String> {
    report["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}

const P3_INSTANCE: &str = r#"{
    "graph": {"vertices": ["u", "v", "w"], "edges": [["u", "v"], ["v", "w"]]},
    "frozen": {"w": 1},
    "lists": {"u": [1, 2, 3], "v": [2, 3], "w": [1, 2]},
    "pinned": {"vertex": "u", "banned": 2}
}"#;

#[test]
fn solve_writes_the_artifact_and_reports_on_stdout() {
    let dir = TempDir::new().unwrap();
    let instance = write(dir.path(), "instance.json", P3_INSTANCE);
    let artifact_path = dir.path().join("solution.json");

    let output = majc()
        .args(["solve", "--instance"])
        .arg(&instance)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let report = parse(&output.stdout);
    assert!(report["command"].as_str().unwrap().starts_with("solve "));
    assert_eq!(
        report["outputs"].as_array().unwrap().len(),
        1,
        "one artifact file"
    );
    let hash = report["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    let lines = assertion_lines(&report);
    assert!(lines.contains(&"improving-moves: 0".to_string()), "{lines:?}");
    assert!(lines.contains(&"happy-free-vertices: 2".to_string()), "{lines:?}");

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    assert_eq!(artifact["colouring"]["w"], 1, "frozen colour kept");
    let u = artifact["colouring"]["u"].as_u64().unwrap();
    assert_ne!(u, 2, "pinned colour avoided");
    let v = artifact["colouring"]["v"].as_u64().unwrap();
    assert!(v == 2 || v == 3, "colour drawn from the list");
    assert_eq!(artifact["certificate"]["improving_moves"], 0);
}

#[test]
fn identical_runs_match_except_for_the_clock() {
    let dir = TempDir::new().unwrap();
    let instance = write(dir.path(), "instance.json", P3_INSTANCE);

    let mut artifacts = Vec::new();
    let mut reports = Vec::new();
    for run in 0..2 {
        let artifact_path = dir.path().join(format!("solution{run}.json"));
        let output = majc()
            .args(["solve", "--seed", "4", "--instance"])
            .arg(&instance)
            .arg("--out")
            .arg(&artifact_path)
            .output()
            .unwrap();
        assert_eq!(code(&output), 0);
        artifacts.push(fs::read(&artifact_path).unwrap());
        let mut report = stable_report(&output.stdout);
        // The echoed output path differs between runs by construction.
        report.as_object_mut().unwrap().remove("outputs");
        reports.push(report);
    }
    assert_eq!(artifacts[0], artifacts[1], "artifact bytes replay");
    assert_eq!(reports[0], reports[1], "reports agree up to timing");
}

#[test]
fn the_seed_flag_and_the_environment_agree() {
    let dir = TempDir::new().unwrap();
    let instance = write(dir.path(), "instance.json", P3_INSTANCE);

    let hash_of = |cmd: &mut Command| {
        let output = cmd.output().unwrap();
        assert_eq!(code(&output), 0);
        // No --out: the artifact goes to stdout, the report to stderr.
        parse(&output.stderr)["config_hash"].as_str().unwrap().to_string()
    };

    let by_flag = hash_of(majc().args(["solve", "--seed", "9", "--instance"]).arg(&instance));
    let by_env = hash_of(
        majc()
            .env("MAJC_SEED", "9")
            .args(["solve", "--instance"])
            .arg(&instance),
    );
    let other_env = hash_of(
        majc()
            .env("MAJC_SEED", "10")
            .args(["solve", "--instance"])
            .arg(&instance),
    );
    assert_eq!(by_flag, by_env, "env seed matches the flag");
    assert_ne!(by_env, other_env, "the seed is folded into the hash");
}

#[test]
fn closure_of_a_short_path_absorbs_the_middle_vertex() {
    let dir = TempDir::new().unwrap();
    let graph = write(
        dir.path(),
        "graph.json",
        r#"{"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}"#,
    );
    let set = write(dir.path(), "set.json", r#"["a", "c"]"#);
    let artifact_path = dir.path().join("closure.json");

    let output = majc()
        .args(["closure", "--graph"])
        .arg(&graph)
        .arg("--set")
        .arg(&set)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    let closed: Vec<&str> = artifact["outcome"]["closed_set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(closed, ["a", "b", "c"]);
    let order: Vec<&str> = artifact["order"]["order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(order, ["b"]);
    assert_eq!(artifact["boundary"]["all_pass"], true);

    let lines = assertion_lines(&parse(&output.stdout));
    assert!(lines.contains(&"closure-size: 3".to_string()), "{lines:?}");
    assert!(lines.contains(&"order-violation: none".to_string()), "{lines:?}");
}

#[test]
fn check_choosable_vouches_for_the_square() {
    let dir = TempDir::new().unwrap();
    let graph = write(
        dir.path(),
        "square.json",
        r#"{"vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]]}"#,
    );
    let artifact_path = dir.path().join("verdict.json");

    let output = majc()
        .args(["check-choosable", "--l", "2", "--palette", "4", "--graph"])
        .arg(&graph)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    assert_eq!(artifact["choosable"], true);
    assert_eq!(artifact["failing_system"], Value::Null);
    assert!(artifact["systems_checked"].as_u64().unwrap() > 0);
    let lines = assertion_lines(&parse(&output.stdout));
    assert!(lines.contains(&"choosable: true".to_string()), "{lines:?}");
}

#[test]
fn saturate_fills_the_gap_between_the_guard_sets() {
    let dir = TempDir::new().unwrap();
    let generator = write(dir.path(), "gen.json", r#"{"family": "path"}"#);
    let a = write(dir.path(), "a.json", r#"["v2", "v3", "v7", "v8"]"#);
    let b = write(dir.path(), "b.json", r#"["v5"]"#);
    let artifact_path = dir.path().join("saturation.json");

    let output = majc()
        .args(["saturate", "--budget", "12", "--generator"])
        .arg(&generator)
        .arg("--A")
        .arg(&a)
        .arg("--B")
        .arg(&b)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    let mut members: Vec<&str> = artifact["result"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    members.sort_unstable();
    assert_eq!(members, ["v4", "v5", "v6"], "the stretch between the guards");
    assert_eq!(artifact["result"]["complete"], true);
    let lines = assertion_lines(&parse(&output.stdout));
    assert!(lines.contains(&"saturated: true".to_string()), "{lines:?}");
}

#[test]
fn extend_colours_an_independent_fringe() {
    let dir = TempDir::new().unwrap();
    let graph = write(
        dir.path(),
        "graph.json",
        r#"{"vertices": ["a0", "a1", "a2", "a3", "w", "y0", "y1", "z0", "z1"],
            "edges": [["a0", "a1"], ["a1", "a2"], ["a2", "a3"],
                      ["y0", "a1"], ["y1", "a1"],
                      ["z0", "a2"], ["z1", "a2"],
                      ["w", "a0"], ["w", "a3"]]}"#,
    );
    let base = write(dir.path(), "base.json", r#"{"a0": 1, "a1": 1, "a2": 2, "a3": 2}"#);
    let lists = write(
        dir.path(),
        "lists.json",
        r#"{"w": [1, 2, 3], "y0": [1, 2, 3], "y1": [1, 2, 3], "z0": [1, 2, 3], "z1": [1, 2, 3]}"#,
    );
    let order = write(dir.path(), "order.json", r#"["w", "y0", "y1", "z0", "z1"]"#);
    let artifact_path = dir.path().join("extension.json");

    let output = majc()
        .args(["extend", "--graph"])
        .arg(&graph)
        .arg("--base")
        .arg(&base)
        .arg("--lists")
        .arg(&lists)
        .arg("--order")
        .arg(&order)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    assert_eq!(artifact["boundary_happy"], 5);
    let steps = artifact["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 5);
    for step in steps {
        assert!(
            step["safe"].as_array().unwrap().len() >= 2,
            "two safe colours at {}",
            step["vertex"]
        );
    }
    let lines = assertion_lines(&parse(&output.stdout));
    assert!(lines.contains(&"boundary-happy: 5".to_string()), "{lines:?}");
}

#[test]
fn prefix_certificates_replay_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let generator = write(dir.path(), "gen.json", r#"{"family": "path"}"#);

    let mut certificates = Vec::new();
    for (run, threads) in ["1", "2"].iter().enumerate() {
        let artifact_path = dir.path().join(format!("cert{run}.json"));
        let output = majc()
            .args([
                "prefix", "--x", "v0", "--cx", "1", "--horizon", "60", "--prefix", "16",
                "--seed", "5", "--threads", threads, "--generator",
            ])
            .arg(&generator)
            .arg("--out")
            .arg(&artifact_path)
            .output()
            .unwrap();
        assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
        let lines = assertion_lines(&parse(&output.stdout));
        assert!(lines.contains(&"banned-avoided: true".to_string()), "{lines:?}");
        certificates.push(fs::read(&artifact_path).unwrap());
    }
    assert_eq!(certificates[0], certificates[1], "thread count never shows");

    let cert = parse(&certificates[0]);
    for field in [
        "version",
        "config_hash",
        "colouring",
        "order",
        "verdicts",
        "root_colour",
        "banned_colour",
        "trace",
        "stabilization",
        "opposite_support",
    ] {
        assert!(cert.get(field).is_some(), "certificate carries `{field}`");
    }
    assert_eq!(cert["banned_colour"], 1);
    assert_ne!(cert["root_colour"], 1);
    let verdicts = cert["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 16);
    for verdict in verdicts {
        let status = verdict["status"].as_str().unwrap();
        assert!(status == "certified" || status == "pending", "{status}");
        let vertex = verdict["vertex"].as_str().unwrap();
        assert!(cert["colouring"].get(vertex).is_some(), "{vertex} is coloured");
    }
}

#[test]
fn disjointify_prefixes_never_collide() {
    let dir = TempDir::new().unwrap();
    let family = write(
        dir.path(),
        "family.json",
        r#"[{"kind": "naturals"},
            {"kind": "arithmetic", "start": 0, "step": 2},
            {"kind": "arithmetic", "start": 0, "step": 3}]"#,
    );
    let artifact_path = dir.path().join("refined.json");

    let output = majc()
        .args(["disjointify", "--k", "8", "--family"])
        .arg(&family)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    let prefixes = artifact["prefixes"].as_array().unwrap();
    assert_eq!(prefixes.len(), 3);
    let mut seen = std::collections::BTreeSet::new();
    for prefix in prefixes {
        let members = prefix.as_array().unwrap();
        assert_eq!(members.len(), 8);
        for value in members {
            assert!(seen.insert(value.as_str().unwrap().to_string()), "{value} repeats");
        }
    }
    let lines = assertion_lines(&parse(&output.stdout));
    assert!(lines.contains(&"pairwise-disjoint: true".to_string()), "{lines:?}");
}

#[test]
fn sublists_strike_the_banned_colour_from_the_root_list() {
    let dir = TempDir::new().unwrap();
    let generator = write(dir.path(), "star.json", r#"{"family": "star-aleph0"}"#);
    let artifact_path = dir.path().join("table.json");

    let output = majc()
        .args(["sublists", "--horizon", "40", "--x", "c", "--cx", "2", "--track", "c"])
        .arg("--generator")
        .arg(&generator)
        .arg("--out")
        .arg(&artifact_path)
        .output()
        .unwrap();
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let artifact = parse(&fs::read(&artifact_path).unwrap());
    let root_sublist: Vec<u64> = artifact["sublists"]["c"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(root_sublist, [1, 3], "the struck colour is gone");
    let lines = assertion_lines(&parse(&output.stdout));
    assert!(lines.contains(&"x-sublist-excludes-cx: true".to_string()), "{lines:?}");

    // Tracking a leaf is refused up front: its neighbour set is finite.
    let refused = majc()
        .args(["sublists", "--horizon", "40", "--x", "c", "--cx", "2", "--track", "l0"])
        .arg("--generator")
        .arg(&generator)
        .output()
        .unwrap();
    assert_eq!(code(&refused), 2);
    assert!(stderr_text(&refused).contains("infinite degree"));
}

#[test]
fn each_failure_class_gets_its_exit_code() {
    let dir = TempDir::new().unwrap();

    // 3: unreadable input file.
    let missing = majc()
        .args(["closure", "--graph", "no-such-file.json", "--set", "also-missing.json"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&missing), 3, "stderr: {}", stderr_text(&missing));

    // 2: file exists but is not JSON.
    let garbled = write(dir.path(), "garbled.json", "{");
    let set = write(dir.path(), "set.json", r#"["a"]"#);
    let malformed = majc()
        .args(["closure", "--graph"])
        .arg(&garbled)
        .arg("--set")
        .arg(&set)
        .output()
        .unwrap();
    assert_eq!(code(&malformed), 2, "stderr: {}", stderr_text(&malformed));

    // 2: clap rejects an unknown subcommand and a missing required flag.
    let unknown = majc().arg("frobnicate").output().unwrap();
    assert_eq!(code(&unknown), 2);
    let incomplete = majc().arg("solve").output().unwrap();
    assert_eq!(code(&incomplete), 2);

    // 2: a generator family nobody offers.
    let bad_family = write(dir.path(), "bad.json", r#"{"family": "moebius"}"#);
    let refused = majc()
        .args(["sublists", "--horizon", "5", "--x", "c", "--cx", "1", "--generator"])
        .arg(&bad_family)
        .output()
        .unwrap();
    assert_eq!(code(&refused), 2, "stderr: {}", stderr_text(&refused));

    // 2: a prefix longer than its horizon is a request that contradicts itself.
    let generator = write(dir.path(), "path.json", r#"{"family": "path"}"#);
    let contradictory = majc()
        .args([
            "prefix", "--x", "v0", "--cx", "1", "--horizon", "5", "--prefix", "9",
            "--generator",
        ])
        .arg(&generator)
        .output()
        .unwrap();
    assert_eq!(code(&contradictory), 2, "stderr: {}", stderr_text(&contradictory));

    // 1: inputs parse but the requested extension is unsound — the single
    // boundary vertex has a blank neighbour at its step.
    let graph = write(
        dir.path(),
        "p3.json",
        r#"{"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}"#,
    );
    let base = write(dir.path(), "base.json", r#"{"a": 1}"#);
    let lists = write(dir.path(), "lists.json", r#"{"c": [1, 2, 3]}"#);
    let order = write(dir.path(), "order.json", r#"["c"]"#);
    let unsound = majc()
        .args(["extend", "--graph"])
        .arg(&graph)
        .arg("--base")
        .arg(&base)
        .arg("--lists")
        .arg(&lists)
        .arg("--order")
        .arg(&order)
        .output()
        .unwrap();
    assert_eq!(code(&unsound), 1, "stderr: {}", stderr_text(&unsound));
    assert!(stderr_text(&unsound).contains("uncoloured neighbour"));
}
