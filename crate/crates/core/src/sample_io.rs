//! Plain-text sample files.
//!
//! ```text
//! # ppnrd-gbs samples v1
//! # fingerprint: 3f2a9c0e4b1d7a66
//! # sampler: exact
//! # seed: 42
//! # modes: 4
//! # fanout: 2
//! # created: 1760000000
//! 0 1 2 0
//! 1 0 0 0
//! ```
//!
//! One sample per line as space-separated per-mode click counts. Header lines
//! start with `#`; the `created` line is the only one that varies between
//! otherwise identical runs.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::samplers::SampleSet;

pub const SAMPLE_FILE_MAGIC: &str = "# ppnrd-gbs samples v1";
pub const EXTERNAL_SAMPLER_ID: &str = "external";

pub fn unix_time() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Serialises a sample set; `created` adds the timestamp header line.
pub fn format_samples(set: &SampleSet, created: Option<u64>) -> String {
    let mut out = String::with_capacity(32 + set.len() * (2 * set.num_modes + 1));
    out.push_str(SAMPLE_FILE_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "# fingerprint: {}", set.config_fingerprint);
    let _ = writeln!(out, "# sampler: {}", set.sampler_id);
    let _ = writeln!(out, "# seed: {}", set.seed);
    let _ = writeln!(out, "# modes: {}", set.num_modes);
    let _ = writeln!(out, "# fanout: {}", set.fanout);
    if let Some(t) = created {
        let _ = writeln!(out, "# created: {t}");
    }
    for s in set.samples() {
        let _ = writeln!(out, "{s}");
    }
    out
}

/// Writes atomically: the target only appears once fully written.
pub fn write_samples(path: &Path, set: &SampleSet) -> Result<()> {
    write_atomic(path, format_samples(set, Some(unix_time())).as_bytes())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Debug, Default)]
struct Header {
    fingerprint: Option<String>,
    sampler: Option<String>,
    seed: Option<u64>,
    modes: Option<usize>,
    fanout: Option<usize>,
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse(path: &Path, text: &str, fanout_bound: Option<usize>) -> Result<(Header, Vec<ClickPattern>)> {
    let mut header = Header::default();
    let mut samples = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once(':') {
                let value = value.trim();
                let bad = |what: &str| parse_error(path, line_no, format!("bad {what} {value:?}"));
                match key.trim() {
                    "fingerprint" => header.fingerprint = Some(value.to_string()),
                    "sampler" => header.sampler = Some(value.to_string()),
                    "seed" => header.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                    "modes" => header.modes = Some(value.parse().map_err(|_| bad("mode count"))?),
                    "fanout" => header.fanout = Some(value.parse().map_err(|_| bad("fan-out"))?),
                    _ => {}
                }
            }
            continue;
        }
        let counts = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u8>()
                    .map_err(|_| parse_error(path, line_no, format!("invalid click count {tok:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        let expected = *width.get_or_insert(header.modes.unwrap_or(counts.len()));
        if counts.len() != expected {
            return Err(parse_error(
                path,
                line_no,
                format!("expected {expected} counts, found {}", counts.len()),
            ));
        }
        if let Some(f) = fanout_bound.or(header.fanout) {
            if let Some(&c) = counts.iter().find(|&&c| c as usize > f) {
                return Err(parse_error(path, line_no, format!("count {c} outside [0, {f}]")));
            }
        }
        samples.push(ClickPattern(counts));
    }
    Ok((header, samples))
}

/// Reads a sample file written by [`write_samples`].
pub fn read_samples(path: &Path) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path)?;
    let (header, samples) = parse(path, &text, None)?;
    let num_modes = header
        .modes
        .or_else(|| samples.first().map(|s| s.num_modes()))
        .unwrap_or(0);
    let fanout = header.fanout.unwrap_or_else(|| {
        samples
            .iter()
            .flat_map(|s| s.counts())
            .copied()
            .max()
            .unwrap_or(1)
            .max(1) as usize
    });
    SampleSet::new(
        header.fingerprint.unwrap_or_default(),
        header.sampler.unwrap_or_default(),
        header.seed.unwrap_or(0),
        num_modes,
        fanout,
        samples,
    )
}

/// Reads externally produced samples, checking every count against `fanout`.
/// The result is tagged with the `external` sampler id.
pub fn ingest_samples(path: &Path, num_modes: usize, fanout: usize) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path)?;
    let (header, samples) = parse(path, &text, Some(fanout))?;
    if let Some(m) = header.modes.filter(|&m| m != num_modes) {
        return Err(Error::DimensionMismatch {
            expected: num_modes,
            actual: m,
        });
    }
    if let Some(s) = samples.iter().find(|s| s.num_modes() != num_modes) {
        return Err(Error::DimensionMismatch {
            expected: num_modes,
            actual: s.num_modes(),
        });
    }
    SampleSet::new(
        header.fingerprint.unwrap_or_default(),
        EXTERNAL_SAMPLER_ID,
        header.seed.unwrap_or(0),
        num_modes,
        fanout,
        samples,
    )
}
