//! Command-line workflows: sample, prob, validate, cost, ingest.
//!
//! `sample` and `ingest` write one sample file plus `<file>.manifest.json`.
//! `prob`, `validate` and `cost` write tab-separated tables, a `report.txt`
//! summary and `manifest.json` into the `--out` directory. Nothing else is
//! written, and every file written by a failed run is removed again.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::components::{build_components, GaussianComponentSet, Hypothesis};
use crate::config::ExperimentConfig;
use crate::cost::{cost_heatmap, CostModel, DEFAULT_C_MACHINE, DEFAULT_G_BIN_WIDTH};
use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::probability::{click_number_distribution, ClickNumberMethod, ProbabilityEngine, EXACT_DISTRIBUTION_CAP};
use crate::sample_io::{format_samples, ingest_samples, read_samples, unix_time, write_atomic};
use crate::samplers::{sample, SampleSet, SamplerKind};
use crate::validation::{
    all_tuples, bayesian_subsystem_sweep, click_stats, click_stats_exact, compare_correlations, cumulants_empirical,
    cumulants_exact, hog_score, ClickVariable, HogScore,
};

#[derive(Debug, Parser)]
#[command(
    name = "ppnrd-gbs",
    version,
    about = "Gaussian boson sampling with fan-out click detection"
)]
pub struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw samples from the ground truth or a mockup sampler.
    Sample(SampleArgs),
    /// Exact pattern probabilities or the click-number distribution.
    Prob(ProbArgs),
    /// Score a sample file against hypotheses.
    Validate(ValidateArgs),
    /// Classical simulation-time heat map of a sample file.
    Cost(CostArgs),
    /// Check and convert an externally produced sample file.
    Ingest(IngestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Exact,
    Thermal,
    Squashed,
    Coherent,
    Distinguishable,
    #[value(name = "ips-like", alias = "ips")]
    IpsLike,
    Greedy,
}

impl From<SamplerArg> for SamplerKind {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Exact => SamplerKind::Exact,
            SamplerArg::Thermal => SamplerKind::Thermal,
            SamplerArg::Squashed => SamplerKind::Squashed,
            SamplerArg::Coherent => SamplerKind::Coherent,
            SamplerArg::Distinguishable => SamplerKind::Distinguishable,
            SamplerArg::IpsLike => SamplerKind::Ips,
            SamplerArg::Greedy => SamplerKind::Greedy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HypothesisArg {
    #[value(name = "ground-truth", alias = "gt")]
    GroundTruth,
    Thermal,
    Squashed,
    Coherent,
}

impl From<HypothesisArg> for Hypothesis {
    fn from(h: HypothesisArg) -> Self {
        match h {
            HypothesisArg::GroundTruth => Hypothesis::GroundTruth,
            HypothesisArg::Thermal => Hypothesis::Thermal,
            HypothesisArg::Squashed => Hypothesis::Squashed,
            HypothesisArg::Coherent => Hypothesis::Coherent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    Bayes,
    Cumulants,
    Hog,
    Clickstats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariableArg {
    Bin,
    ModeClick,
    Count,
}

impl From<VariableArg> for ClickVariable {
    fn from(v: VariableArg) -> Self {
        match v {
            VariableArg::Bin => ClickVariable::Bin,
            VariableArg::ModeClick => ClickVariable::ModeClick,
            VariableArg::Count => ClickVariable::Count,
        }
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub sampler: SamplerArg,
    #[arg(short = 'n', long = "num-samples")]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "ground-truth")]
    pub hypothesis: HypothesisArg,
    /// Per-mode click counts, e.g. "0,2,1,0"; repeatable. Without any, the
    /// click-number distribution is written instead.
    #[arg(long = "pattern")]
    pub patterns: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub samples: PathBuf,
    /// Alternative hypothesis H1.
    #[arg(long, value_enum, default_value = "thermal")]
    pub hypothesis: HypothesisArg,
    /// Reference hypothesis H0.
    #[arg(long, value_enum, default_value = "ground-truth")]
    pub h0: HypothesisArg,
    #[arg(long, value_enum)]
    pub test: TestArg,
    /// Cumulant order (at most 4).
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "bin")]
    pub variable: VariableArg,
    /// Comma-separated subsystem sizes; defaults to the full system.
    #[arg(long, value_delimiter = ',')]
    pub subsystem_sizes: Vec<usize>,
    /// Comma-separated click numbers to condition on; defaults to the most
    /// frequent total in the samples.
    #[arg(long, value_delimiter = ',')]
    pub n_condition: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub subsets: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Accept samples whose fingerprint differs from the config's.
    #[arg(long)]
    pub override_fingerprint: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long)]
    pub samples: PathBuf,
    /// Seconds per elementary unit; defaults to 1.0 with a warning.
    #[arg(long)]
    pub c_machine: Option<f64>,
    /// Mode count M in the cost formula; defaults to the sample width.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_G_BIN_WIDTH)]
    pub g_bin_width: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_fingerprint: Option<String>,
    pub subcommand: String,
    pub seed: Option<u64>,
    pub arguments: Vec<String>,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<PathBuf>,
}

/// Files written so far; removed again unless the run commits.
struct Outputs {
    written: Vec<PathBuf>,
    created_dir: Option<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn new() -> Self {
        Self {
            written: Vec::new(),
            created_dir: None,
            committed: false,
        }
    }

    /// Output directory for multi-file subcommands; `manifest.json` path.
    fn dir(&mut self, dir: &Path) -> Result<PathBuf> {
        if !dir.exists() {
            std::fs::create_dir_all(dir)?;
            self.created_dir = Some(dir.to_path_buf());
        }
        Ok(dir.join("manifest.json"))
    }

    fn write(&mut self, path: PathBuf, text: &str) -> Result<()> {
        write_atomic(&path, text.as_bytes())?;
        self.written.push(path);
        Ok(())
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = std::fs::remove_file(p);
            }
            if let Some(d) = &self.created_dir {
                let _ = std::fs::remove_dir(d);
            }
        }
    }
}

/// What a subcommand produced besides its files.
struct RunInfo {
    fingerprint: Option<String>,
    seed: Option<u64>,
    summary: String,
}

pub fn run(cli: &Cli, arguments: Vec<String>) -> Result<RunManifest> {
    let started = unix_time();
    let mut outputs = Outputs::new();
    let (name, manifest_path, info) = match &cli.command {
        Command::Sample(a) => ("sample", sidecar(&a.out), cmd_sample(a, &mut outputs)?),
        Command::Ingest(a) => ("ingest", sidecar(&a.out), cmd_ingest(a, &mut outputs)?),
        Command::Prob(a) => ("prob", outputs.dir(&a.out)?, cmd_prob(a, &mut outputs)?),
        Command::Validate(a) => ("validate", outputs.dir(&a.out)?, cmd_validate(a, &mut outputs)?),
        Command::Cost(a) => ("cost", outputs.dir(&a.out)?, cmd_cost(a, &mut outputs)?),
    };
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_fingerprint: info.fingerprint,
        subcommand: name.to_string(),
        seed: info.seed,
        arguments,
        started_unix: started,
        finished_unix: unix_time(),
        outputs: outputs.written.clone(),
    };
    let json =
        serde_json::to_string_pretty(&manifest).map_err(|e| Error::Config(format!("manifest serialisation: {e}")))?;
    outputs.write(manifest_path, &(json + "\n"))?;
    outputs.committed = true;
    if !info.summary.is_empty() {
        println!("{}", info.summary);
    }
    Ok(manifest)
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn cmd_sample(a: &SampleArgs, out: &mut Outputs) -> Result<RunInfo> {
    let config = ExperimentConfig::load(&a.config)?;
    let set = sample(&config, a.sampler.into(), a.n, a.seed)?;
    out.write(a.out.clone(), &format_samples(&set, Some(unix_time())))?;
    Ok(RunInfo {
        fingerprint: Some(config.fingerprint()),
        seed: Some(a.seed),
        summary: format!("wrote {} {} samples to {}", set.len(), set.sampler_id, a.out.display()),
    })
}

fn cmd_ingest(a: &IngestArgs, out: &mut Outputs) -> Result<RunInfo> {
    let config = ExperimentConfig::load(&a.config)?;
    let mut set = ingest_samples(&a.input, config.num_modes, config.fanout)?;
    // Headerless input was checked against this config; a fingerprint the
    // input already carries is kept.
    if set.config_fingerprint.is_empty() {
        set.config_fingerprint = config.fingerprint();
    }
    out.write(a.out.clone(), &format_samples(&set, Some(unix_time())))?;
    Ok(RunInfo {
        fingerprint: Some(config.fingerprint()),
        seed: None,
        summary: format!("ingested {} samples into {}", set.len(), a.out.display()),
    })
}

fn parse_pattern(text: &str) -> Result<ClickPattern> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u8>()
                .map_err(|_| Error::InvalidParameter(format!("bad click count {t:?} in pattern {text:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(ClickPattern)
}

fn cmd_prob(a: &ProbArgs, out: &mut Outputs) -> Result<RunInfo> {
    let config = ExperimentConfig::load(&a.config)?;
    let hypothesis: Hypothesis = a.hypothesis.into();
    let set = build_components(&config, hypothesis)?;
    let engine = ProbabilityEngine::new(&set);
    let mut report = header_lines(&config, &[("hypothesis", hypothesis.name().to_string())]);
    if a.patterns.is_empty() {
        if set.num_bins() > EXACT_DISTRIBUTION_CAP {
            return Err(Error::SubsetCapExceeded {
                size: set.num_bins(),
                cap: EXACT_DISTRIBUTION_CAP,
            });
        }
        let dist = click_number_distribution(&set, ClickNumberMethod::Exact)?;
        let mut table = String::from("n\tprobability\n");
        for (n, p) in dist.probabilities.iter().enumerate() {
            let _ = writeln!(table, "{n}\t{p}");
        }
        let stats = click_stats_exact(&dist)?;
        let _ = writeln!(report, "click_mean: {}\nclick_std: {}", stats.mean, stats.std_dev);
        out.write(a.out.join("click_number.tsv"), &table)?;
    } else {
        let mut table = String::from("pattern\tprobability\n");
        for text in &a.patterns {
            let p = parse_pattern(text)?;
            if p.num_modes() != config.num_modes {
                return Err(Error::DimensionMismatch {
                    expected: config.num_modes,
                    actual: p.num_modes(),
                });
            }
            let prob = engine.ppnrd_pattern_probability(&p)?;
            let _ = writeln!(table, "{p}\t{prob}");
        }
        out.write(a.out.join("probabilities.tsv"), &table)?;
    }
    out.write(a.out.join("report.txt"), &report)?;
    Ok(RunInfo {
        fingerprint: Some(config.fingerprint()),
        seed: None,
        summary: String::new(),
    })
}

fn header_lines(config: &ExperimentConfig, extra: &[(&str, String)]) -> String {
    let mut s = format!(
        "config_fingerprint: {}\nmodes: {}\nfanout: {}\n",
        config.fingerprint(),
        config.num_modes,
        config.fanout
    );
    for (k, v) in extra {
        let _ = writeln!(s, "{k}: {v}");
    }
    s
}

fn load_checked_samples(a: &ValidateArgs, config: &ExperimentConfig) -> Result<SampleSet> {
    let samples = read_samples(&a.samples)?;
    if samples.num_modes != config.num_modes {
        return Err(Error::DimensionMismatch {
            expected: config.num_modes,
            actual: samples.num_modes,
        });
    }
    if samples.fanout != config.fanout {
        return Err(Error::InvalidParameter(format!(
            "samples use fan-out {}, config uses {}",
            samples.fanout, config.fanout
        )));
    }
    let expected = config.fingerprint();
    if samples.config_fingerprint != expected && !a.override_fingerprint {
        return Err(Error::FingerprintMismatch {
            expected,
            found: samples.config_fingerprint.clone(),
        });
    }
    Ok(samples)
}

fn most_frequent_total(samples: &SampleSet) -> Result<usize> {
    let totals = samples.total_clicks();
    let max = *totals.iter().max().ok_or(Error::Empty("validation needs samples"))?;
    let mut counts = vec![0usize; max + 1];
    for t in totals {
        counts[t] += 1;
    }
    // n = 0 has a single pattern and scores zero, so it is only the fallback.
    // Ties resolve to the smallest total.
    Ok((1..=max)
        .filter(|&n| counts[n] > 0)
        .max_by_key(|&n| (counts[n], std::cmp::Reverse(n)))
        .unwrap_or(0))
}

fn cmd_validate(a: &ValidateArgs, out: &mut Outputs) -> Result<RunInfo> {
    let config = ExperimentConfig::load(&a.config)?;
    let samples = load_checked_samples(a, &config)?;
    let (h0, h1): (Hypothesis, Hypothesis) = (a.h0.into(), a.hypothesis.into());
    let set0 = build_components(&config, h0)?;
    let set1 = build_components(&config, h1)?;
    let mut report = header_lines(
        &config,
        &[
            ("samples", a.samples.display().to_string()),
            ("sampler", samples.sampler_id.clone()),
            ("n_samples", samples.len().to_string()),
            ("h0", h0.name().to_string()),
            ("h1", h1.name().to_string()),
        ],
    );
    let summary = match a.test {
        TestArg::Bayes => validate_bayes(a, &samples, &set0, &set1, &mut report, out)?,
        TestArg::Cumulants => validate_cumulants(a, &samples, &set0, &set1, &mut report, out)?,
        TestArg::Hog => {
            let e0 = ProbabilityEngine::new(&set0);
            let e1 = ProbabilityEngine::new(&set1);
            let hog = hog_score(&samples, &e0, &e1)?;
            let _ = writeln!(
                report,
                "test: hog\nhog_score: {}\nwins: {}\nties: {}\ntotal: {}\ncaveat: {}",
                hog.value(),
                hog.wins,
                hog.ties,
                hog.total,
                HogScore::CAVEAT
            );
            format!("HOG({} over {}) = {}", h0.name(), h1.name(), hog.value())
        }
        TestArg::Clickstats => validate_clickstats(&a.out, &samples, &set0, &set1, &mut report, out)?,
    };
    out.write(a.out.join("report.txt"), &report)?;
    Ok(RunInfo {
        fingerprint: Some(config.fingerprint()),
        seed: Some(a.seed),
        summary,
    })
}

fn validate_bayes(
    a: &ValidateArgs,
    samples: &SampleSet,
    set0: &GaussianComponentSet,
    set1: &GaussianComponentSet,
    report: &mut String,
    out: &mut Outputs,
) -> Result<String> {
    let m = set0.num_modes();
    let sizes = if a.subsystem_sizes.is_empty() {
        vec![m]
    } else {
        a.subsystem_sizes.clone()
    };
    let n_values = if a.n_condition.is_empty() {
        vec![most_frequent_total(samples)?]
    } else {
        a.n_condition.clone()
    };
    let sweep = bayesian_subsystem_sweep(samples, set0, set1, &sizes, &n_values, a.subsets, a.seed)?;
    let mut table = String::from("size\tn\tmean_delta_h\tstd_error\tspread\tsubsets\tsamples\n");
    for p in &sweep {
        let used: usize = p.results.iter().map(|r| r.n_samples).sum();
        let _ = writeln!(
            table,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.size,
            p.n_clicks,
            p.mean_delta_h,
            p.std_error,
            p.spread,
            p.results.len(),
            used
        );
    }
    let _ = writeln!(
        report,
        "test: bayes\nconditioning: click number of each subsystem\nsubsets_per_size: {}\nseed: {}",
        a.subsets, a.seed
    );
    out.write(a.out.join("bayes.tsv"), &table)?;
    let last = sweep.last().expect("at least one sweep point");
    let _ = writeln!(report, "delta_h: {}\nstd_error: {}", last.mean_delta_h, last.std_error);
    Ok(format!(
        "Delta H = {:.6} +/- {:.6} nats (size {}, n = {})",
        last.mean_delta_h, last.std_error, last.size, last.n_clicks
    ))
}

fn validate_cumulants(
    a: &ValidateArgs,
    samples: &SampleSet,
    set0: &GaussianComponentSet,
    set1: &GaussianComponentSet,
    report: &mut String,
    out: &mut Outputs,
) -> Result<String> {
    let variable: ClickVariable = a.variable.into();
    let tuples = all_tuples(variable.num_variables(samples.num_modes, samples.fanout), a.order);
    let empirical = cumulants_empirical(samples, variable, a.order, &tuples)?;
    let exact0 = cumulants_exact(set0, variable, a.order, &tuples)?;
    let exact1 = cumulants_exact(set1, variable, a.order, &tuples)?;
    let mut table = String::from("tuple\tempirical\tstd_error\th0_exact\th1_exact\n");
    for ((t, e), (x0, x1)) in empirical
        .entries
        .iter()
        .zip(exact0.entries.values().zip(exact1.entries.values()))
    {
        let tuple: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            table,
            "{}\t{}\t{}\t{}\t{}",
            tuple.join(","),
            e.value,
            e.std_error,
            x0.value,
            x1.value
        );
    }
    out.write(a.out.join("cumulants.tsv"), &table)?;
    let _ = writeln!(
        report,
        "test: cumulants\norder: {}\nvariable: {}\ntuples: {}",
        a.order,
        variable.name(),
        tuples.len()
    );
    let mut summary = String::new();
    for (label, table) in [("samples", &empirical), ("h1", &exact1)] {
        match compare_correlations(table, &exact0) {
            Ok(m) => {
                let _ = writeln!(report, "{label}_vs_h0_d: {}\n{label}_vs_h0_k: {}", m.d, m.k_slope);
                if label == "samples" {
                    summary = format!(
                        "D = {:.6}, K = {:.6} (order {}, {} tuples)",
                        m.d,
                        m.k_slope,
                        a.order,
                        tuples.len()
                    );
                }
            }
            Err(e) => {
                let _ = writeln!(report, "{label}_vs_h0: {e}");
            }
        }
    }
    Ok(summary)
}

fn validate_clickstats(
    dir: &Path,
    samples: &SampleSet,
    set0: &GaussianComponentSet,
    set1: &GaussianComponentSet,
    report: &mut String,
    out: &mut Outputs,
) -> Result<String> {
    let stats = click_stats(samples)?;
    let _ = writeln!(
        report,
        "test: clickstats\nsamples_mean: {}\nsamples_std: {}",
        stats.mean, stats.std_dev
    );
    let mut totals = vec![0usize; samples.num_modes * samples.fanout + 1];
    for t in samples.total_clicks() {
        totals[t] += 1;
    }
    let exact = |set: &GaussianComponentSet| -> Option<Vec<f64>> {
        (set.num_bins() <= EXACT_DISTRIBUTION_CAP)
            .then(|| click_number_distribution(set, ClickNumberMethod::Exact).ok())
            .flatten()
            .map(|d| d.probabilities)
    };
    let (d0, d1) = (exact(set0), exact(set1));
    for (label, d) in [("h0", &d0), ("h1", &d1)] {
        if let Some(p) = d {
            let s = click_stats_exact(&crate::probability::ClickNumberDistribution {
                probabilities: p.clone(),
                std_errors: None,
            })?;
            let _ = writeln!(report, "{label}_mean: {}\n{label}_std: {}", s.mean, s.std_dev);
        } else {
            let _ = writeln!(
                report,
                "{label}: exact distribution above the {EXACT_DISTRIBUTION_CAP}-bin cap"
            );
        }
    }
    let mut table = String::from("n\tfrequency\th0_probability\th1_probability\n");
    let total = samples.len() as f64;
    let fmt = |d: &Option<Vec<f64>>, n: usize| d.as_ref().map_or("nan".to_string(), |p| p[n].to_string());
    for (n, &c) in totals.iter().enumerate() {
        let _ = writeln!(table, "{n}\t{}\t{}\t{}", c as f64 / total, fmt(&d0, n), fmt(&d1, n));
    }
    out.write(dir.join("click_distribution.tsv"), &table)?;
    Ok(format!("clicks: mean {:.6}, std {:.6}", stats.mean, stats.std_dev))
}

fn cmd_cost(a: &CostArgs, out: &mut Outputs) -> Result<RunInfo> {
    let samples = read_samples(&a.samples)?;
    let c_machine = a.c_machine.unwrap_or_else(|| {
        eprintln!("warning: --c-machine not given, assuming {DEFAULT_C_MACHINE} s per unit");
        DEFAULT_C_MACHINE
    });
    let model = CostModel::new(c_machine, a.m.unwrap_or(samples.num_modes))?;
    let heat = cost_heatmap(&samples, &model, a.g_bin_width)?;
    let mut cells = String::from("g_bin_low\tn\tcount\n");
    for c in &heat.cells {
        let _ = writeln!(cells, "{}\t{}\t{}", c.g_bin_low, c.n, c.count);
    }
    let mut contours = String::from("log10_t\tn\tg\n");
    for c in &heat.contours {
        let _ = writeln!(contours, "{}\t{}\t{}", c.log10_t, c.n, c.g);
    }
    let hardest = &samples.samples()[heat.hardest_index];
    let report = format!(
        "samples: {}\nc_machine: {}\nm: {}\ng_bin_width: {}\nskipped_empty: {}\n\
         hardest_index: {}\nhardest_pattern: {}\nhardest_n: {}\nhardest_g: {}\n\
         hardest_log10_seconds: {}\nhardest_overflow: {}\nmean_seconds: {}\nmean_log10_seconds: {}\n",
        a.samples.display(),
        model.c_machine,
        model.m,
        heat.g_bin_width,
        heat.skipped_empty,
        heat.hardest_index,
        hardest,
        heat.hardest_g.n,
        heat.hardest_g.g,
        heat.hardest.log10_seconds(),
        heat.hardest.overflow,
        heat.mean_seconds,
        heat.mean_log10_seconds
    );
    out.write(a.out.join("heatmap.tsv"), &cells)?;
    out.write(a.out.join("contours.tsv"), &contours)?;
    out.write(a.out.join("report.txt"), &report)?;
    Ok(RunInfo {
        fingerprint: (!samples.config_fingerprint.is_empty()).then(|| samples.config_fingerprint.clone()),
        seed: None,
        summary: format!(
            "hardest sample: log10 T = {:.3} (c_machine = {})",
            heat.hardest.log10_seconds(),
            model.c_machine
        ),
    })
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let arguments = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(&cli, arguments)),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        None => run(&cli, arguments),
    };
    match result {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
