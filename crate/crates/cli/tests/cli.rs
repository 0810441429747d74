//! Tests against the installed binary: output bytes, exit codes, and
//! stream separation (patterns on stdout, report on stderr).

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_seqtrie");

const SAMPLE: &str = "\
1 2 -1 1 -1 2 -1 -2
1 2 3 -1 3 -1 -2
1 -1 2 -1 -2
1 3 -1 1 3 -1 -2
1 2 3 -1 -2
";

/// Pattern file for the sample at a 0.6 fraction (count 3 of 5).
const SAMPLE_PATTERNS: &str = "\
1 -1 #SUP: 5
2 -1 #SUP: 4
3 -1 #SUP: 3
1 2 -1 #SUP: 3
1 3 -1 #SUP: 3
";

fn sample_file(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("sample.txt");
    std::fs::write(&path, SAMPLE).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn mine_outputs_identical_across_models_and_filter() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path());
    let input = input.to_str().unwrap();
    for model in ["oracle", "tabular", "sdtrie", "bdtrie"] {
        for filter in ["on", "off"] {
            let out = run(&[
                "mine", input, "--minsup", "0.6", "--model", model, "--filter", filter,
            ]);
            assert!(out.status.success(), "{model}/{filter}: {}", stderr(&out));
            assert_eq!(stdout(&out), SAMPLE_PATTERNS, "{model}/{filter}");
            let report = stderr(&out);
            assert!(report.contains(&format!("model={model}")), "{report}");
            assert!(report.contains("minsup=3"), "{report}");
            assert!(report.contains("patterns=5"), "{report}");
        }
    }
}

#[test]
fn mine_writes_output_file_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path());
    let out_path = dir.path().join("patterns.txt");
    let out = run(&[
        "mine",
        input.to_str().unwrap(),
        "--minsup",
        "3",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "", "patterns must go to the file, not stdout");
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), SAMPLE_PATTERNS);
}

#[test]
fn separator_flattening_only_mines_tabular() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path());
    let input = input.to_str().unwrap();

    let out = run(&[
        "mine", input, "--minsup", "0.6", "--flatten", "separator", "--model", "bdtrie",
    ]);
    assert_eq!(out.status.code(), Some(1), "tries take the sign-flattened form");
    assert!(stderr(&out).contains("error:"));

    let out = run(&[
        "mine", input, "--minsup", "0.6", "--flatten", "separator", "--model", "tabular",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), SAMPLE_PATTERNS);
}

#[test]
fn exit_codes_split_usage_from_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path());
    let input = input.to_str().unwrap();

    // Usage errors: malformed threshold, unknown flag.
    let out = run(&["mine", input, "--minsup", "1.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"));
    let out = run(&["mine", input, "--minsup", "0.5", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    // Runtime errors: unreadable input, malformed dataset.
    let missing = dir.path().join("no-such-file.txt");
    let out = run(&["mine", missing.to_str().unwrap(), "--minsup", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2 -2\n").unwrap();
    let out = run(&["mine", bad.to_str().unwrap(), "--minsup", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));

    // Help and version are not errors.
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["mine", "--help"]).status.code(), Some(0));
}

#[test]
fn convert_is_a_canonicalizing_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let messy = dir.path().join("messy.txt");
    std::fs::write(&messy, "2 1 -1 2 2 -1 -2\n3 -1 -2\n").unwrap();

    let once = dir.path().join("once.txt");
    let out = run(&[
        "convert",
        messy.to_str().unwrap(),
        "-o",
        once.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = std::fs::read_to_string(&once).unwrap();
    assert_eq!(first, "1 2 -1 2 -1 -2\n3 -1 -2\n");

    let out = run(&["convert", once.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), first, "canonical input must pass through unchanged");
}

#[test]
fn stats_reports_trie_shape() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path());
    let out = run(&["stats", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for needle in [
        "rows=5",
        "entries=17",
        "nodes=10",
        "compression=0.411765",
        "layers=1,1,3,3,3",
        "leaves=4",
        "bounds_ok=true",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn bench_emits_consistent_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path());
    let csv_path = dir.path().join("bench.csv");
    let out = run(&[
        "bench",
        input.to_str().unwrap(),
        "--minsup",
        "0.6,0.4",
        "--models",
        "tabular,sdtrie,bdtrie",
        "--repeat",
        "1",
        "-o",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "model,theta,minsup_count,patterns,wall_ms,peak_bytes,nodes,compression"
    );
    assert_eq!(lines.len(), 1 + 2 * 3);
    for chunk in lines[1..].chunks(3) {
        let counts: Vec<&str> = chunk
            .iter()
            .map(|l| l.split(',').nth(3).unwrap())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{chunk:?}");
    }
}
