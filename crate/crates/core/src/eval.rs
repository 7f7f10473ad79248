//! Horizon-sweep evaluation: per-class precision, recall and F1, macro
//! averages and confusion matrices.
//!
//! Confusion rows are truths and columns are predictions, both in
//! [`Intention::ALL`] order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bayes::{predict_frame, BayesError, TripleProbability};
use crate::discretize::{discretize_frame, ThresholdSet};
use crate::ingest::NumericFrame;
use crate::ontology::Intention;

/// Sweep used when no grid is given: 0.5 s to 4.0 s in 0.5 s steps.
pub const DEFAULT_HORIZONS: [f64; 8] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];

/// Slack on the half-frame window for accumulated rounding in timestamps.
const WINDOW_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no evaluation frames at horizon {horizon} s")]
    EmptyHorizonSet { horizon: f64 },
    #[error("{truths} truths but {predictions} predictions")]
    LengthMismatch { truths: usize, predictions: usize },
    #[error("invalid horizon grid: {0}")]
    InvalidHorizons(String),
    #[error(transparent)]
    Bayes(#[from] BayesError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl EvalError {
    pub fn name(&self) -> &'static str {
        match self {
            EvalError::EmptyHorizonSet { .. } => "EmptyHorizonSet",
            EvalError::LengthMismatch { .. } => "LengthMismatch",
            EvalError::InvalidHorizons(_) => "InvalidHorizons",
            EvalError::Bayes(e) => e.name(),
            EvalError::Io { .. } => "IoFailure",
            EvalError::Json { .. } => "MalformedInput",
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        EvalError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Parse `start:end:step` into an inclusive grid.
pub fn parse_horizons(spec: &str) -> Result<Vec<f64>, EvalError> {
    let bad = || EvalError::InvalidHorizons(spec.to_string());
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, end, step] = parts[..] else {
        return Err(bad());
    };
    horizon_grid(start, end, step)
}

/// `start, start + step, …` up to and including `end`, each point computed
/// from its index so no drift accumulates.
pub fn horizon_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, EvalError> {
    let finite = start.is_finite() && end.is_finite() && step.is_finite();
    if !finite || start <= 0.0 || end < start || step <= 0.0 {
        return Err(EvalError::InvalidHorizons(format!("{start}:{end}:{step}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Frames to classify at `horizon` seconds before the crossing.
///
/// Each lane-change episode contributes the frame whose time to crossing is
/// nearest the horizon, if it lies within half a frame period (earlier frame
/// on ties). Each vehicle without any crossing contributes its trajectory
/// midpoint, independent of the horizon. Output is ordered by
/// (recording, track, frame).
pub fn select_horizon_frames(
    frames: &[NumericFrame],
    horizon: f64,
    frame_rate: f64,
) -> Result<Vec<&NumericFrame>, EvalError> {
    let mut by_vehicle: BTreeMap<(u32, u32), Vec<&NumericFrame>> = BTreeMap::new();
    for f in frames {
        by_vehicle.entry(f.vehicle_key()).or_default().push(f);
    }
    let window = 0.5 / frame_rate + WINDOW_SLACK;
    let mut out = Vec::new();
    for (_, mut track) in by_vehicle {
        track.sort_by_key(|f| f.frame);
        if track.iter().all(|f| f.time_to_crossing.is_none()) {
            out.push(track[(track.len() - 1) / 2]);
            continue;
        }
        let mut picked = Vec::new();
        let mut best: Option<(f64, &NumericFrame)> = None;
        let mut prev_ttc: Option<f64> = None;
        for f in &track {
            let ttc = match (f.intention, f.time_to_crossing) {
                (Intention::Lk, _) | (_, None) => {
                    prev_ttc = None;
                    picked.extend(best.take().map(|b| b.1));
                    continue;
                }
                (_, Some(t)) => t,
            };
            // time to crossing strictly decreases within one episode
            if prev_ttc.is_some_and(|p| ttc >= p) {
                picked.extend(best.take().map(|b| b.1));
            }
            prev_ttc = Some(ttc);
            let dist = (ttc - horizon).abs();
            if dist <= window && best.is_none_or(|(d, _)| dist < d) {
                best = Some((dist, *f));
            }
        }
        picked.extend(best.map(|b| b.1));
        out.extend(picked);
    }
    if out.is_empty() {
        return Err(EvalError::EmptyHorizonSet { horizon });
    }
    out.sort_by_key(|f| (f.recording_id, f.track_id, f.frame));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ClassMetrics {
    /// Zero where the denominator is zero.
    fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        ClassMetrics {
            precision,
            recall,
            f1: harmonic_mean(precision, recall),
        }
    }
}

fn harmonic_mean(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub horizon: f64,
    pub per_class: BTreeMap<Intention, ClassMetrics>,
    /// Unweighted mean over the three classes.
    #[serde(rename = "macro")]
    pub macro_avg: ClassMetrics,
    pub confusion: [[u64; 3]; 3],
    pub n_samples: BTreeMap<Intention, u64>,
    /// Wall-clock figure; excluded from the deterministic report files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_latency_s: Option<f64>,
}

impl HorizonReport {
    pub fn macro_f1(&self) -> f64 {
        self.macro_avg.f1
    }

    pub fn class(&self, h: Intention) -> ClassMetrics {
        self.per_class[&h]
    }
}

/// Metrics for aligned truth and prediction sequences.
pub fn score_predictions(
    horizon: f64,
    truths: &[Intention],
    predictions: &[Intention],
) -> Result<HorizonReport, EvalError> {
    if truths.len() != predictions.len() {
        return Err(EvalError::LengthMismatch {
            truths: truths.len(),
            predictions: predictions.len(),
        });
    }
    let mut confusion = [[0u64; 3]; 3];
    for (t, p) in truths.iter().zip(predictions) {
        confusion[t.index()][p.index()] += 1;
    }
    let mut per_class = BTreeMap::new();
    let mut n_samples = BTreeMap::new();
    for h in Intention::ALL {
        let i = h.index();
        let tp = confusion[i][i];
        let support: u64 = confusion[i].iter().sum();
        let predicted: u64 = confusion.iter().map(|row| row[i]).sum();
        per_class.insert(h, ClassMetrics::from_counts(tp, predicted - tp, support - tp));
        n_samples.insert(h, support);
    }
    let mean = |f: fn(&ClassMetrics) -> f64| per_class.values().map(f).sum::<f64>() / 3.0;
    let macro_avg = ClassMetrics {
        precision: mean(|m| m.precision),
        recall: mean(|m| m.recall),
        f1: mean(|m| m.f1),
    };
    Ok(HorizonReport {
        horizon,
        per_class,
        macro_avg,
        confusion,
        n_samples,
        mean_latency_s: None,
    })
}

/// Evaluate `model` at every horizon of `horizons`. With `time_predictions`
/// each report carries the mean wall time of discretize plus predict.
pub fn horizon_sweep(
    model: &impl TripleProbability,
    thresholds: &ThresholdSet,
    test_frames: &[NumericFrame],
    frame_rate: f64,
    horizons: &[f64],
    time_predictions: bool,
) -> Result<Vec<HorizonReport>, EvalError> {
    horizons
        .iter()
        .map(|&h| {
            let selected = select_horizon_frames(test_frames, h, frame_rate)?;
            let truths: Vec<Intention> = selected.iter().map(|f| f.intention).collect();
            let start = Instant::now();
            let predictions = selected
                .iter()
                .map(|f| predict_frame(model, &discretize_frame(f, thresholds)).map(|p| p.predicted))
                .collect::<Result<Vec<_>, _>>()?;
            let elapsed = start.elapsed().as_secs_f64();
            let mut report = score_predictions(h, &truths, &predictions)?;
            if time_predictions {
                report.mean_latency_s = Some(elapsed / selected.len() as f64);
            }
            Ok(report)
        })
        .collect()
}

/// The reports without wall-clock fields.
pub fn strip_latency(reports: &[HorizonReport]) -> Vec<HorizonReport> {
    reports
        .iter()
        .cloned()
        .map(|r| HorizonReport {
            mean_latency_s: None,
            ..r
        })
        .collect()
}

/// JSON array of reports, latency removed.
pub fn write_reports_json(reports: &[HorizonReport], path: &Path) -> Result<(), EvalError> {
    write_json(&strip_latency(reports), path)
}

/// `horizon,class,precision,recall,f1,support`; the `macro` row carries the
/// total sample count.
pub fn write_reports_csv(reports: &[HorizonReport], path: &Path) -> Result<(), EvalError> {
    let io = |e| EvalError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "horizon,class,precision,recall,f1,support").map_err(io)?;
    for r in reports {
        for h in Intention::ALL {
            let m = r.class(h);
            writeln!(
                w,
                "{:?},{},{:?},{:?},{:?},{}",
                r.horizon, h, m.precision, m.recall, m.f1, r.n_samples[&h]
            )
            .map_err(io)?;
        }
        let m = r.macro_avg;
        let total: u64 = r.n_samples.values().sum();
        writeln!(
            w,
            "{:?},macro,{:?},{:?},{:?},{}",
            r.horizon, m.precision, m.recall, m.f1, total
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Long format `horizon,class,metric,value` for external plotting.
pub fn write_long_csv(reports: &[HorizonReport], path: &Path) -> Result<(), EvalError> {
    let io = |e| EvalError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "horizon,class,metric,value").map_err(io)?;
    for r in reports {
        let rows = Intention::ALL
            .iter()
            .map(|h| (h.name(), r.class(*h)))
            .chain(std::iter::once(("macro", r.macro_avg)));
        for (class, m) in rows {
            for (metric, v) in [("precision", m.precision), ("recall", m.recall), ("f1", m.f1)] {
                writeln!(w, "{:?},{class},{metric},{v:?}", r.horizon).map_err(io)?;
            }
        }
    }
    w.flush().map_err(io)
}

#[derive(Serialize)]
struct ConfusionEntry<'a> {
    horizon: f64,
    labels: [&'a str; 3],
    /// Rows are truths, columns predictions.
    matrix: [[u64; 3]; 3],
}

pub fn write_confusion_json(reports: &[HorizonReport], path: &Path) -> Result<(), EvalError> {
    let labels = Intention::ALL.map(Intention::name);
    let entries: Vec<_> = reports
        .iter()
        .map(|r| ConfusionEntry {
            horizon: r.horizon,
            labels,
            matrix: r.confusion,
        })
        .collect();
    write_json(&entries, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyRecord {
    pub horizon: f64,
    pub mean_latency_s: f64,
}

/// Wall-clock timings, kept apart from the deterministic reports.
pub fn write_latency_json(reports: &[HorizonReport], path: &Path) -> Result<(), EvalError> {
    let records: Vec<_> = reports
        .iter()
        .filter_map(|r| {
            r.mean_latency_s.map(|l| LatencyRecord {
                horizon: r.horizon,
                mean_latency_s: l,
            })
        })
        .collect();
    write_json(&records, path)
}

pub fn read_reports_json(path: &Path) -> Result<Vec<HorizonReport>, EvalError> {
    let text = std::fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| EvalError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<(), EvalError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| EvalError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| EvalError::io(path, e))
}
