use lanekg::bayes::oracle_suite;
use serde::{Deserialize, Serialize};

use super::Common;
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::{write_json, ManifestBuilder};

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Random corpora to compare on.
    #[arg(long)]
    corpora: Option<usize>,
    /// Upper bound on frames per corpus.
    #[arg(long)]
    max_frames: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest accepted `|posterior - oracle| / max(1, |oracle|)`.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub corpora: usize,
    pub max_frames: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            corpora: 100,
            max_frames: 500,
            seed: 0,
            tolerance: 1e-9,
        }
    }
}

pub fn run(args: Args) -> Result<(), Failure> {
    let opts: Options = resolve(args.common.config.as_deref(), "oracle-check", &args)?;
    let common = &args.common;
    common.ensure_run_dir()?;
    let mut manifest = ManifestBuilder::start("oracle-check", &opts);
    manifest.seed("corpora", opts.seed);
    let report = oracle_suite(opts.seed, opts.corpora, opts.max_frames, opts.tolerance)?;
    let out = common.path("oracle-check.json");
    write_json(&out, &report)?;
    manifest.output(&out);
    manifest.finish(&common.manifest_path("oracle-check"))?;
    eprintln!(
        "oracle-check: {} comparisons over {} corpora, max error {:.3e} (tolerance {:.0e})",
        report.comparisons, report.corpora, report.max_error, report.tolerance
    );
    if !report.passed {
        return Err(Failure::data(
            "OracleMismatch",
            format!("max error {:e} exceeds {:e}", report.max_error, report.tolerance),
        ));
    }
    Ok(())
}
