use std::fmt;
use std::io::Write;

use serde::{Serialize, Serializer};

/// Trial index of a timing row, or the geometric mean over all trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trial {
    Index(usize),
    GeoMean,
}

impl fmt::Display for Trial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trial::Index(i) => write!(f, "{i}"),
            Trial::GeoMean => f.write_str("geomean"),
        }
    }
}

impl Serialize for Trial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One CSV row. For allocator workloads `graph` names the allocator, `n` is
/// the number of blocks per round and `m` the number of rounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRecord {
    pub workload: String,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub fraction: Option<f64>,
    pub trial: Trial,
    pub seconds: f64,
    pub alloc_seconds: Option<f64>,
    pub copy_seconds: Option<f64>,
}

impl TimingRecord {
    /// The geometric-mean row summarizing `trials`, which must share
    /// workload, graph and fraction.
    pub fn summarize(trials: &[TimingRecord]) -> Option<TimingRecord> {
        let first = trials.first()?;
        let mean = |f: fn(&TimingRecord) -> Option<f64>| -> Option<f64> {
            let xs: Option<Vec<f64>> = trials.iter().map(f).collect();
            xs.map(|xs| geometric_mean(&xs))
        };
        Some(TimingRecord {
            trial: Trial::GeoMean,
            seconds: mean(|r| Some(r.seconds))?,
            alloc_seconds: mean(|r| r.alloc_seconds),
            copy_seconds: mean(|r| r.copy_seconds),
            ..first.clone()
        })
    }
}

/// Geometric mean; 0 for an empty slice. Non-positive values count as the
/// smallest positive double, and equal inputs give that value exactly.
pub fn geometric_mean(xs: &[f64]) -> f64 {
    match xs {
        [] => 0.0,
        [x, rest @ ..] if rest.iter().all(|y| y == x) => *x,
        _ => {
            let s: f64 = xs.iter().map(|&x| x.max(f64::MIN_POSITIVE).ln()).sum();
            (s / xs.len() as f64).exp()
        }
    }
}

/// Writes `records` as CSV with a header row.
pub fn write_csv<W: Write>(records: &[TimingRecord], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if records.is_empty() {
        out.write_record([
            "workload", "graph", "n", "m", "fraction", "trial", "seconds", "alloc_seconds", "copy_seconds",
        ])?;
    }
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
