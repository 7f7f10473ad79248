use std::collections::BTreeMap;

use lanekg::discretize::{discretize_frame, ThresholdSet};
use lanekg::ingest::write_frames_csv;
use lanekg::kg_builder::{
    split_frames_by_recording, split_no_unseen, write_triples_csv, FrameSampling, TripleCorpus, DEFAULT_TRAIN_FRACTION,
    DEFAULT_VALID_SIZE,
};
use lanekg::ontology::Intention;
use serde::{Deserialize, Serialize};

use super::{read_frames, Common, FRAMES, KG_SUMMARY, TEST_FRAMES, THRESHOLDS, TRAIN_TRIPLES, VALID_TRIPLES};
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::{write_json, ManifestBuilder};

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Leading fraction of recordings used for training and validation.
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Validation triples held out without unseen entities.
    #[arg(long)]
    valid: Option<usize>,
    /// Seed of the validation hold-out.
    #[arg(long)]
    seed: Option<u64>,
    /// Keep every n-th lane-change frame of the training recordings.
    #[arg(long)]
    lane_change_stride: Option<u32>,
    /// Keep every n-th lane-keep frame of the training recordings.
    #[arg(long)]
    lane_keep_stride: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub train_fraction: f64,
    pub valid: usize,
    pub seed: u64,
    pub lane_change_stride: u32,
    pub lane_keep_stride: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            train_fraction: DEFAULT_TRAIN_FRACTION,
            valid: DEFAULT_VALID_SIZE,
            seed: 0,
            lane_change_stride: 10,
            lane_keep_stride: 50,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KgSummary {
    pub train_recording_frames: usize,
    /// Training frames kept after sampling, per intention.
    pub sampled_frames: BTreeMap<Intention, usize>,
    pub train_triples: usize,
    pub valid_triples: usize,
    pub entities: usize,
    pub test_frames: usize,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let opts: Options = resolve(args.common.config.as_deref(), "build-kg", &args)?;
    if opts.lane_change_stride == 0 || opts.lane_keep_stride == 0 {
        return Err(Failure::usage("frame strides must be positive".into()));
    }
    let common = &args.common;
    let mut manifest = ManifestBuilder::start("build-kg", &opts);
    manifest.seed("validation_split", opts.seed);
    let (frames_path, th_path) = (common.path(FRAMES), common.path(THRESHOLDS));
    manifest.input(&frames_path);
    manifest.input(&th_path);
    let frames = read_frames(&frames_path)?;
    let th = ThresholdSet::read_json(&th_path)?;
    let (train, test) = split_frames_by_recording(&frames, opts.train_fraction)?;
    drop(frames);

    let sampling = FrameSampling {
        lane_change_stride: opts.lane_change_stride,
        lane_keep_stride: opts.lane_keep_stride,
    };
    let linguistic: Vec<_> = sampling
        .apply(&train)
        .into_iter()
        .map(|f| discretize_frame(f, &th))
        .collect();
    let mut sampled_frames: BTreeMap<Intention, usize> = Intention::ALL.iter().map(|&h| (h, 0)).collect();
    for lf in &linguistic {
        *sampled_frames.get_mut(&lf.intention).expect("all intentions listed") += 1;
    }
    let corpus = TripleCorpus::from_frames(&linguistic);
    let (train_triples, valid_triples) = split_no_unseen(&corpus.triples, opts.valid, opts.seed)?;

    let outputs = [
        common.path(TRAIN_TRIPLES),
        common.path(VALID_TRIPLES),
        common.path(TEST_FRAMES),
        common.path(KG_SUMMARY),
    ];
    write_triples_csv(&train_triples, &outputs[0])?;
    write_triples_csv(&valid_triples, &outputs[1])?;
    write_frames_csv(&test, &outputs[2])?;
    let summary = KgSummary {
        train_recording_frames: train.len(),
        sampled_frames,
        train_triples: train_triples.len(),
        valid_triples: valid_triples.len(),
        entities: corpus.entities().len(),
        test_frames: test.len(),
    };
    write_json(&outputs[3], &summary)?;
    for p in &outputs {
        manifest.output(p);
    }
    manifest.finish(&common.manifest_path("build-kg"))?;
    eprintln!(
        "build-kg: {} train / {} valid triples over {} entities; {} test frames",
        summary.train_triples, summary.valid_triples, summary.entities, summary.test_frames
    );
    Ok(())
}
