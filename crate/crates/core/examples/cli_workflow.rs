//! The command-line workflow driven in-process: sample, score, estimate
//! cost. Outputs land in a temporary directory that is printed.
//!
//! cargo run --release --example cli_workflow

use ppnrd_gbs::cli::main_with_args;

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory").keep();
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/small.toml");
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let samples = path("exact.txt");
    let steps: Vec<Vec<String>> = vec![
        vec![
            "sample",
            "--config",
            config,
            "--sampler",
            "exact",
            "-n",
            "20000",
            "--seed",
            "1",
            "--out",
            &samples,
        ],
        vec![
            "validate",
            "--config",
            config,
            "--samples",
            &samples,
            "--test",
            "bayes",
            "--hypothesis",
            "squashed",
            "--subsystem-sizes",
            "2,4,6",
            "--n-condition",
            "2",
            "--out",
            &path("bayes"),
        ],
        vec![
            "validate",
            "--config",
            config,
            "--samples",
            &samples,
            "--test",
            "cumulants",
            "--order",
            "2",
            "--out",
            &path("cumulants"),
        ],
        vec![
            "cost",
            "--samples",
            &samples,
            "--c-machine",
            "1e-9",
            "--m",
            "144",
            "--out",
            &path("cost"),
        ],
    ]
    .into_iter()
    .map(|s| s.into_iter().map(String::from).collect())
    .collect();
    for step in steps {
        let status = main_with_args(std::iter::once("ppnrd-gbs".to_string()).chain(step.iter().cloned()));
        assert_eq!(status, 0, "{step:?}");
    }
    println!("outputs in {}", dir.display());
    print!("{}", std::fs::read_to_string(dir.join("bayes/report.txt")).unwrap());
}
