use std::collections::BTreeSet;
use std::path::PathBuf;

use lanekg::ingest::highd::{self, ColumnMap};
use lanekg::ingest::synthetic::{generate_synthetic_corpus, RuleParams};
use lanekg::ingest::{extract_all, write_frames_csv, Recording, DEFAULT_LABEL_WINDOW};
use serde::{Deserialize, Serialize};

use super::{Common, DatasetInfo, DATASET, FRAMES};
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::{write_json, ManifestBuilder};

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// HighD directory with `NN_tracks.csv`, `NN_tracksMeta.csv`, `NN_recordingMeta.csv`.
    #[arg(long)]
    highd: Option<PathBuf>,
    /// JSON column-name overrides for HighD files.
    #[arg(long)]
    columns: Option<PathBuf>,
    /// Generate recordings with the rule-based simulator instead.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    synthetic: bool,
    /// Simulator seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of simulated vehicles.
    #[arg(long)]
    n: Option<usize>,
    /// Seconds before a crossing labelled as a lane change.
    #[arg(long)]
    label_window: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub highd: Option<PathBuf>,
    pub columns: Option<PathBuf>,
    pub synthetic: bool,
    pub seed: u64,
    pub n: usize,
    pub label_window: f64,
    pub rule_params: RuleParams,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            highd: None,
            columns: None,
            synthetic: false,
            seed: 0,
            n: 5000,
            label_window: DEFAULT_LABEL_WINDOW,
            rule_params: RuleParams::default(),
        }
    }
}

pub fn run(args: Args) -> Result<(), Failure> {
    let opts: Options = resolve(args.common.config.as_deref(), "ingest", &args)?;
    let common = &args.common;
    if opts.synthetic == opts.highd.is_some() {
        return Err(Failure::usage("give exactly one of --highd DIR or --synthetic".into()));
    }
    if !(opts.label_window.is_finite() && opts.label_window > 0.0) {
        return Err(Failure::usage(format!(
            "label window must be positive, got {}",
            opts.label_window
        )));
    }
    common.ensure_run_dir()?;
    let mut manifest = ManifestBuilder::start("ingest", &opts);
    let (recordings, source) = match &opts.highd {
        Some(dir) => {
            let columns = match &opts.columns {
                Some(p) => {
                    manifest.input(p);
                    ColumnMap::from_json_file(p)?
                }
                None => ColumnMap::default(),
            };
            let recs = highd::read_dir(dir, &columns)?;
            for id in highd::recording_ids(dir)? {
                for kind in ["tracks", "tracksMeta", "recordingMeta"] {
                    let p = dir.join(format!("{id:02}_{kind}.csv"));
                    if p.exists() {
                        manifest.input(&p);
                    }
                }
            }
            (recs, "highd")
        }
        None => {
            manifest.seed("synthetic", opts.seed);
            let corpus = generate_synthetic_corpus(opts.seed, opts.n, &opts.rule_params)?;
            (corpus.recordings, "synthetic")
        }
    };
    let frame_rate = common_frame_rate(&recordings)?;
    let frames = extract_all(&recordings, opts.label_window)?;
    let vehicles: BTreeSet<(u32, u32)> = frames.iter().map(|f| f.vehicle_key()).collect();
    let frames_path = common.path(FRAMES);
    write_frames_csv(&frames, &frames_path)?;
    let info = DatasetInfo {
        source: source.into(),
        frame_rate,
        label_window: opts.label_window,
        recordings: recordings.len(),
        vehicles: vehicles.len(),
        frames: frames.len(),
    };
    let info_path = common.path(DATASET);
    write_json(&info_path, &info)?;
    manifest.output(&frames_path);
    manifest.output(&info_path);
    manifest.finish(&common.manifest_path("ingest"))?;
    eprintln!(
        "ingest: {} recordings, {} vehicles, {} frames",
        info.recordings, info.vehicles, info.frames
    );
    Ok(())
}

fn common_frame_rate(recordings: &[Recording]) -> Result<f64, Failure> {
    let Some(first) = recordings.first() else {
        return Err(Failure::data("EmptyDataset", "no recordings found"));
    };
    if let Some(r) = recordings.iter().find(|r| r.frame_rate != first.frame_rate) {
        return Err(Failure::data(
            "MixedFrameRates",
            format!(
                "recording {} runs at {} Hz, recording {} at {} Hz",
                first.id, first.frame_rate, r.id, r.frame_rate
            ),
        ));
    }
    Ok(first.frame_rate)
}
