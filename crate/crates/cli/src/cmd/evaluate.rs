use std::path::PathBuf;

use lanekg::discretize::ThresholdSet;
use lanekg::eval::{
    horizon_sweep, parse_horizons, write_confusion_json, write_latency_json, write_long_csv, write_reports_csv,
    write_reports_json,
};
use lanekg::kge::{EmbeddingModel, Scorer};
use serde::{Deserialize, Serialize};

use super::{model_file, parse_scorer, read_dataset, read_frames, Common, TEST_FRAMES, THRESHOLDS};
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Horizon grid `start:end:step` in seconds.
    #[arg(long)]
    horizons: Option<String>,
    #[arg(long, value_parser = parse_scorer)]
    scorer: Option<Scorer>,
    /// Model checkpoint; defaults to the run directory's model for `--scorer`.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub horizons: String,
    pub scorer: Scorer,
    pub model: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            horizons: "0.5:4.0:0.5".into(),
            scorer: Scorer::TransE,
            model: None,
        }
    }
}

pub fn run(args: Args) -> Result<(), Failure> {
    let opts: Options = resolve(args.common.config.as_deref(), "evaluate", &args)?;
    let horizons = parse_horizons(&opts.horizons).map_err(|e| Failure::usage(e.to_string()))?;
    let common = &args.common;
    let scorer = opts.scorer;
    let mut manifest = ManifestBuilder::start("evaluate", &opts);
    let model_path = opts.model.clone().unwrap_or_else(|| common.path(&model_file(scorer)));
    let (th_path, frames_path) = (common.path(THRESHOLDS), common.path(TEST_FRAMES));
    let (info, info_path) = read_dataset(common)?;
    for p in [&model_path, &th_path, &frames_path, &info_path] {
        manifest.input(p);
    }
    let (model, _) = EmbeddingModel::load_json(&model_path)?;
    let th = ThresholdSet::read_json(&th_path)?;
    let frames = read_frames(&frames_path)?;
    let reports = horizon_sweep(&model, &th, &frames, info.frame_rate, &horizons, true)?;

    let outputs = [
        common.path(&format!("report-{scorer}.json")),
        common.path(&format!("report-{scorer}.csv")),
        common.path(&format!("report-{scorer}-long.csv")),
        common.path(&format!("confusion-{scorer}.json")),
    ];
    write_reports_json(&reports, &outputs[0])?;
    write_reports_csv(&reports, &outputs[1])?;
    write_long_csv(&reports, &outputs[2])?;
    write_confusion_json(&reports, &outputs[3])?;
    let latency_path = common.path(&format!("latency-{scorer}.json"));
    write_latency_json(&reports, &latency_path)?;
    for p in outputs.iter().chain([&latency_path]) {
        manifest.output(p);
    }
    manifest.finish(&common.manifest_path(&format!("evaluate-{scorer}")))?;
    for r in &reports {
        let n: u64 = r.n_samples.values().sum();
        eprintln!(
            "evaluate: {scorer} horizon {:.1} s macro F1 {:.4} over {n} samples",
            r.horizon,
            r.macro_f1()
        );
    }
    Ok(())
}
