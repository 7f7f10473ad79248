use lanekg::discretize::fit_thresholds;
use lanekg::kg_builder::{split_frames_by_recording, DEFAULT_TRAIN_FRACTION};
use serde::{Deserialize, Serialize};

use super::{read_frames, Common, FRAMES, THRESHOLDS};
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::ManifestBuilder;

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Leading fraction of recordings used for fitting.
    #[arg(long)]
    train_fraction: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub train_fraction: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            train_fraction: DEFAULT_TRAIN_FRACTION,
        }
    }
}

pub fn run(args: Args) -> Result<(), Failure> {
    let opts: Options = resolve(args.common.config.as_deref(), "fit-thresholds", &args)?;
    let common = &args.common;
    let mut manifest = ManifestBuilder::start("fit-thresholds", &opts);
    let frames_path = common.path(FRAMES);
    manifest.input(&frames_path);
    let frames = read_frames(&frames_path)?;
    let (train, _) = split_frames_by_recording(&frames, opts.train_fraction)?;
    let th = fit_thresholds(&train)?;
    let out = common.path(THRESHOLDS);
    th.write_json(&out)?;
    manifest.output(&out);
    manifest.finish(&common.manifest_path("fit-thresholds"))?;
    eprintln!(
        "fit-thresholds: lat_velocity {:?}, lat_acceleration {:?} from {} frames",
        th.lat_velocity,
        th.lat_acceleration,
        train.len()
    );
    Ok(())
}
