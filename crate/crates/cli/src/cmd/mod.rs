//! Subcommands. Every command reads and writes under one run directory
//! using the file names below, and leaves `manifest-<command>.json` there.

pub mod evaluate;
pub mod ingest;
pub mod kg;
pub mod oracle;
pub mod predict;
pub mod thresholds;
pub mod train;

use std::path::{Path, PathBuf};

use lanekg::ingest::{read_frames_csv, NumericFrame};
use lanekg::kge::Scorer;
use serde::{Deserialize, Serialize};

use crate::error::Failure;
use crate::manifest::read_json;

pub const FRAMES: &str = "frames.csv";
pub const DATASET: &str = "dataset.json";
pub const THRESHOLDS: &str = "thresholds.json";
pub const TRAIN_TRIPLES: &str = "triples_train.csv";
pub const VALID_TRIPLES: &str = "triples_valid.csv";
pub const TEST_FRAMES: &str = "test_frames.csv";
pub const KG_SUMMARY: &str = "kg_summary.json";

pub fn model_file(scorer: Scorer) -> String {
    format!("model-{scorer}.json")
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Run directory holding inputs and outputs.
    #[arg(long, default_value = ".")]
    pub run: PathBuf,
    /// JSON file with one object per command name; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Common {
    pub fn path(&self, name: &str) -> PathBuf {
        self.run.join(name)
    }

    pub fn ensure_run_dir(&self) -> Result<(), Failure> {
        std::fs::create_dir_all(&self.run).map_err(|e| Failure::io(&self.run, e))
    }

    pub fn manifest_path(&self, command: &str) -> PathBuf {
        self.path(&format!("manifest-{command}.json"))
    }
}

/// Dataset facts recorded at ingest time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub source: String,
    pub frame_rate: f64,
    pub label_window: f64,
    pub recordings: usize,
    pub vehicles: usize,
    pub frames: usize,
}

pub fn read_dataset(common: &Common) -> Result<(DatasetInfo, PathBuf), Failure> {
    let path = common.path(DATASET);
    Ok((read_json(&path)?, path))
}

pub fn read_frames(path: &Path) -> Result<Vec<NumericFrame>, Failure> {
    Ok(read_frames_csv(path)?)
}

/// Parse a clap value into a `FromStr` type with a usage error.
pub fn parse_scorer(s: &str) -> Result<Scorer, String> {
    s.parse::<Scorer>().map_err(|e| e.to_string())
}
