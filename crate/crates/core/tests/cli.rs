use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::sample_io::read_samples;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppnrd-gbs"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

struct Fixture {
    dir: tempfile::TempDir,
    config: ExperimentConfig,
}

impl Fixture {
    fn new() -> Self {
        let config = ExperimentConfig::uniform(4, 2, ExperimentConfig::paired_sources(4, 0.6, 0.9), 0.7, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("config.toml"), config.to_toml_string()).unwrap();
        Self { dir, config }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }

    fn sample(&self, name: &str, n: usize) -> String {
        let out = self.s(name);
        ok(&[
            "sample",
            "--config",
            &self.s("config.toml"),
            "-n",
            &n.to_string(),
            "--seed",
            "3",
            "--out",
            &out,
        ]);
        out
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("{key} missing from report"))
        .to_string()
}

#[test]
fn zero_samples_write_a_header_only_file() {
    let fx = Fixture::new();
    let path = fx.sample("empty.txt", 0);
    let text = read(Path::new(&path));
    assert!(text.lines().all(|l| l.starts_with('#')));
    assert!(text.contains("# modes: 4"));
    assert!(read_samples(Path::new(&path)).unwrap().is_empty());
    let manifest: serde_json::Value = serde_json::from_str(&read(&fx.path("empty.txt.manifest.json"))).unwrap();
    assert_eq!(manifest["config_fingerprint"], fx.config.fingerprint());
    assert_eq!(manifest["subcommand"], "sample");
}

#[test]
fn sampling_is_reproducible_and_seeded() {
    let fx = Fixture::new();
    let strip = |p: &str| {
        read(Path::new(p))
            .lines()
            .filter(|l| !l.starts_with("# created:"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = fx.sample("a.txt", 500);
    let b = fx.sample("b.txt", 500);
    assert_eq!(strip(&a), strip(&b));
    let c = fx.s("c.txt");
    ok(&[
        "sample",
        "--config",
        &fx.s("config.toml"),
        "-n",
        "500",
        "--seed",
        "4",
        "--out",
        &c,
    ]);
    assert_ne!(strip(&a), strip(&c));
}

#[test]
fn usage_errors_exit_with_two() {
    let fx = Fixture::new();
    let out = run(&[
        "sample",
        "--config",
        &fx.s("config.toml"),
        "--sampler",
        "quantum",
        "-n",
        "5",
        "--out",
        &fx.s("x"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!fx.path("x").exists());
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn identical_hypotheses_score_zero() {
    let fx = Fixture::new();
    let samples = fx.sample("s.txt", 2_000);
    ok(&[
        "validate",
        "--config",
        &fx.s("config.toml"),
        "--samples",
        &samples,
        "--test",
        "bayes",
        "--hypothesis",
        "ground-truth",
        "--out",
        &fx.s("same"),
    ]);
    let table = read(&fx.path("same/bayes.tsv"));
    let row: Vec<&str> = table.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
    assert!(fx.path("same/report.txt").exists());
    assert!(fx.path("same/manifest.json").exists());
}

#[test]
fn mismatched_samples_are_rejected() {
    let fx = Fixture::new();
    let other = ExperimentConfig::uniform(6, 2, ExperimentConfig::paired_sources(6, 0.6, 0.9), 0.7, 5).unwrap();
    std::fs::write(fx.path("other.toml"), other.to_toml_string()).unwrap();
    let wide = fx.s("wide.txt");
    ok(&["sample", "--config", &fx.s("other.toml"), "-n", "50", "--out", &wide]);
    let out = run(&[
        "validate",
        "--config",
        &fx.s("config.toml"),
        "--samples",
        &wide,
        "--test",
        "hog",
        "--out",
        &fx.s("r"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!fx.path("r").exists(), "no partial output on failure");

    // Same width, different configuration: refused unless overridden.
    let shifted = ExperimentConfig::uniform(4, 2, ExperimentConfig::paired_sources(4, 0.7, 0.9), 0.7, 5).unwrap();
    std::fs::write(fx.path("shifted.toml"), shifted.to_toml_string()).unwrap();
    let samples = fx.sample("s.txt", 200);
    let args = |o: &str| {
        vec![
            "validate".to_string(),
            "--config".into(),
            fx.s("shifted.toml"),
            "--samples".into(),
            samples.clone(),
            "--test".into(),
            "hog".into(),
            "--out".into(),
            fx.s(o),
        ]
    };
    let refused = run(&args("r1").iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(refused.status.code(), Some(1));
    let mut forced = args("r2");
    forced.push("--override-fingerprint".into());
    ok(&forced.iter().map(String::as_str).collect::<Vec<_>>());
}

#[test]
fn cumulant_order_above_four_is_rejected() {
    let fx = Fixture::new();
    let samples = fx.sample("s.txt", 200);
    let out = run(&[
        "validate",
        "--config",
        &fx.s("config.toml"),
        "--samples",
        &samples,
        "--test",
        "cumulants",
        "--order",
        "5",
        "--out",
        &fx.s("c"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    ok(&[
        "validate",
        "--config",
        &fx.s("config.toml"),
        "--samples",
        &samples,
        "--test",
        "cumulants",
        "--order",
        "4",
        "--variable",
        "count",
        "--out",
        &fx.s("c4"),
    ]);
    let table = read(&fx.path("c4/cumulants.tsv"));
    assert_eq!(table.lines().count(), 2, "one 4-tuple over four modes plus the header");
}

#[test]
fn cost_on_threshold_samples_uses_only_g_two() {
    let fx = Fixture::new();
    std::fs::write(fx.path("thr.txt"), "0 1 1 0\n1 1 1 1\n0 0 0 0\n").unwrap();
    let out = ok(&["cost", "--samples", &fx.s("thr.txt"), "--out", &fx.s("cost")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("c-machine"));
    let heat = read(&fx.path("cost/heatmap.tsv"));
    for line in heat.lines().skip(1) {
        assert_eq!(line.split('\t').next().unwrap().parse::<f64>().unwrap(), 2.0);
    }
    let report = read(&fx.path("cost/report.txt"));
    assert_eq!(report_value(&report, "skipped_empty"), "1");
    let quiet = ok(&[
        "cost",
        "--samples",
        &fx.s("thr.txt"),
        "--c-machine",
        "1e-12",
        "--m",
        "1152",
        "--out",
        &fx.s("cost2"),
    ]);
    assert!(!String::from_utf8_lossy(&quiet.stderr).contains("warning"));
}

#[test]
fn empty_sample_files_are_errors_for_cost() {
    let fx = Fixture::new();
    let samples = fx.sample("none.txt", 0);
    let out = run(&[
        "cost",
        "--samples",
        &samples,
        "--c-machine",
        "1",
        "--out",
        &fx.s("cost"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn prob_and_ingest_round_trip() {
    let fx = Fixture::new();
    let cfg = fx.s("config.toml");
    ok(&[
        "prob",
        "--config",
        &cfg,
        "--pattern",
        "0,1,2,0",
        "--pattern",
        "0,0,0,0",
        "--out",
        &fx.s("p"),
    ]);
    let table = read(&fx.path("p/probabilities.tsv"));
    assert_eq!(table.lines().count(), 3);
    ok(&[
        "prob",
        "--config",
        &cfg,
        "--hypothesis",
        "squashed",
        "--out",
        &fx.s("dist"),
    ]);
    let total: f64 = read(&fx.path("dist/click_number.tsv"))
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);

    std::fs::write(fx.path("raw.txt"), "0 1 2 0\n2 2 0 1\n").unwrap();
    ok(&[
        "ingest",
        "--config",
        &cfg,
        "--input",
        &fx.s("raw.txt"),
        "--out",
        &fx.s("ingested.txt"),
    ]);
    let set = read_samples(&fx.path("ingested.txt")).unwrap();
    assert_eq!(set.len(), 2);
    assert_eq!(set.sampler_id, "external");
    assert_eq!(set.config_fingerprint, fx.config.fingerprint());
    std::fs::write(fx.path("bad.txt"), "0 1 3 0\n").unwrap();
    let bad = run(&[
        "ingest",
        "--config",
        &cfg,
        "--input",
        &fx.s("bad.txt"),
        "--out",
        &fx.s("bad-out.txt"),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!fx.path("bad-out.txt").exists());
}

#[test]
fn validate_reports_do_not_depend_on_threads() {
    let fx = Fixture::new();
    let samples = fx.sample("s.txt", 3_000);
    for test in ["bayes", "cumulants", "hog", "clickstats"] {
        let mut texts = Vec::new();
        for threads in ["1", "3"] {
            let dir = fx.s(&format!("{test}-{threads}"));
            ok(&[
                "--threads",
                threads,
                "validate",
                "--config",
                &fx.s("config.toml"),
                "--samples",
                &samples,
                "--test",
                test,
                "--out",
                &dir,
            ]);
            texts.push(read(&Path::new(&dir).join("report.txt")));
        }
        assert_eq!(texts[0], texts[1], "{test}");
    }
}
