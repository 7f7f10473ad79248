use std::path::PathBuf;
use std::time::Instant;

use lanekg::bayes::{predict_frame, PredictionRecord};
use lanekg::discretize::{discretize_frame, ThresholdSet};
use lanekg::ingest::NumericFrame;
use lanekg::kge::{EmbeddingModel, Scorer};
use lanekg::ontology::{ChildId, Intention};
use serde::{Deserialize, Serialize};

use super::{model_file, parse_scorer, Common, THRESHOLDS};
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::{read_json, write_json, ManifestBuilder};

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Frame JSON: lateral velocity and acceleration plus optional TTCs.
    #[arg(long)]
    frame: Option<PathBuf>,
    /// Model checkpoint; defaults to the run directory's model for `--scorer`.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, value_parser = parse_scorer)]
    scorer: Option<Scorer>,
    /// Also write the posterior JSON here (manifest goes alongside).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub frame: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub scorer: Scorer,
    pub out: Option<PathBuf>,
}

/// Numeric features of one frame. Lateral values are negative toward the
/// left lane; absent TTCs mean no such neighbor.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameInput {
    #[serde(default)]
    child_id: u64,
    lat_velocity: f64,
    lat_acceleration: f64,
    ttc_preceding: Option<f64>,
    ttc_left_preceding: Option<f64>,
    ttc_right_preceding: Option<f64>,
    ttc_left_following: Option<f64>,
    ttc_right_following: Option<f64>,
}

impl FrameInput {
    fn into_frame(self) -> NumericFrame {
        NumericFrame {
            child_id: ChildId(self.child_id),
            recording_id: 0,
            track_id: 0,
            frame: 0,
            lat_velocity: self.lat_velocity,
            lat_acceleration: self.lat_acceleration,
            ttc_preceding: self.ttc_preceding,
            ttc_left_preceding: self.ttc_left_preceding,
            ttc_right_preceding: self.ttc_right_preceding,
            ttc_left_following: self.ttc_left_following,
            ttc_right_following: self.ttc_right_following,
            intention: Intention::Lk,
            time_to_crossing: None,
        }
    }
}

pub fn run(args: Args) -> Result<(), Failure> {
    let start = Instant::now();
    let opts: Options = resolve(args.common.config.as_deref(), "predict", &args)?;
    let common = &args.common;
    let Some(frame_path) = opts.frame.clone() else {
        return Err(Failure::usage("--frame FILE is required".into()));
    };
    let model_path = opts
        .model
        .clone()
        .unwrap_or_else(|| common.path(&model_file(opts.scorer)));
    let th_path = common.path(THRESHOLDS);
    let mut manifest = ManifestBuilder::start("predict", &opts);
    for p in [&frame_path, &model_path, &th_path] {
        manifest.input(p);
    }
    let input: FrameInput = read_json(&frame_path)?;
    let th = ThresholdSet::read_json(&th_path)?;
    let (model, _) = EmbeddingModel::load_json(&model_path)?;
    let nf = input.into_frame();
    let lf = discretize_frame(&nf, &th);
    let posterior = predict_frame(&model, &lf)?;
    let record = PredictionRecord::new(nf.child_id, &posterior, Some(start.elapsed().as_secs_f64()));
    println!("{}", serde_json::to_string(&record).expect("record serializes"));
    if let Some(out) = &opts.out {
        write_json(out, &record)?;
        manifest.output(out);
        let dir = out
            .parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(std::path::Path::new("."));
        manifest.finish(&dir.join("manifest-predict.json"))?;
    } else {
        common.ensure_run_dir()?;
        manifest.finish(&common.manifest_path("predict"))?;
    }
    Ok(())
}
