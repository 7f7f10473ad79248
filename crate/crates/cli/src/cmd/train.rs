use lanekg::kg_builder::{read_triples_csv, IndexedTriple, TripleCorpus};
use lanekg::kge::train::write_training_log;
use lanekg::kge::{fit_platt_on_triples, train, FilterIndex, Scorer, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{model_file, parse_scorer, Common, TRAIN_TRIPLES, VALID_TRIPLES};
use crate::config::resolve;
use crate::error::Failure;
use crate::manifest::{write_json, ManifestBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CalibrationMode {
    #[default]
    Raw,
    Platt,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct Args {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Scoring function.
    #[arg(long, value_parser = parse_scorer)]
    scorer: Option<Scorer>,
    /// Score to probability map; `platt` fits on the validation triples.
    #[arg(long, value_enum)]
    calibration: Option<CalibrationMode>,
    #[command(flatten)]
    config: ConfigFlags,
}

/// Flags mirroring [`TrainConfig`] fields.
#[derive(Debug, clap::Args, Serialize)]
struct ConfigFlags {
    /// Embedding size.
    #[arg(long)]
    k: Option<usize>,
    /// Corruptions per positive triple.
    #[arg(long = "negatives")]
    negatives_per_positive: Option<usize>,
    /// Adam learning rate.
    #[arg(long = "lr")]
    learning_rate: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    /// First epoch eligible for validation.
    #[arg(long = "burn-in")]
    validation_burn_in: Option<usize>,
    /// Validate every n epochs.
    #[arg(long)]
    validation_freq: Option<usize>,
    #[arg(long)]
    validation_batch_size: Option<usize>,
    /// Validation rounds without MRR improvement before stopping.
    #[arg(long)]
    patience: Option<usize>,
    /// Self-adversarial temperature.
    #[arg(long = "temperature")]
    adversarial_temperature: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// TransE norm order (1 or 2).
    #[arg(long)]
    norm_order: Option<u8>,
    /// L2 penalty on relation rows.
    #[arg(long)]
    relation_l2: Option<f64>,
    #[arg(long)]
    relation_init_scale: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub scorer: Scorer,
    pub calibration: CalibrationMode,
    pub config: TrainConfig,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrainSummary {
    pub scorer: Scorer,
    pub train_triples: usize,
    pub valid_triples: usize,
    pub epochs_run: usize,
    pub best_epoch: Option<usize>,
    pub best_mrr: Option<f64>,
    pub stopped_early: bool,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let opts: Options = resolve(args.common.config.as_deref(), "train", &args)?;
    opts.config.validate()?;
    let common = &args.common;
    let scorer = opts.scorer;
    let mut manifest = ManifestBuilder::start("train", &opts);
    manifest.seed("train", opts.config.seed);
    let (train_path, valid_path) = (common.path(TRAIN_TRIPLES), common.path(VALID_TRIPLES));
    manifest.input(&train_path);
    manifest.input(&valid_path);
    let train_corpus = read_triples_csv(&train_path)?;
    let valid_corpus = read_triples_csv(&valid_path)?;
    let corpus = TripleCorpus::from_triples(train_corpus.triples.iter().chain(&valid_corpus.triples).copied());
    let index = |ts: &[lanekg::ontology::Triple]| -> Vec<IndexedTriple> {
        ts.iter().map(|t| corpus.indexed(t).expect("interned")).collect()
    };
    let (train_ids, valid_ids) = (index(&train_corpus.triples), index(&valid_corpus.triples));

    let outcome = train(scorer, corpus.entities().to_vec(), &train_ids, &valid_ids, &opts.config)?;
    let mut model = outcome.model;
    if opts.calibration == CalibrationMode::Platt {
        if valid_ids.is_empty() {
            return Err(Failure::usage("platt calibration needs validation triples".into()));
        }
        let known = FilterIndex::new([train_ids.as_slice(), valid_ids.as_slice()]);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.config.seed);
        model.calibration = fit_platt_on_triples(&model, &valid_ids, &known, &mut rng)?;
    }

    let model_path = common.path(&model_file(scorer));
    let log_path = common.path(&format!("training-log-{scorer}.csv"));
    let summary_path = common.path(&format!("train-summary-{scorer}.json"));
    model.save_json(&model_path, Some(&opts.config))?;
    write_training_log(&outcome.log, &log_path)?;
    let summary = TrainSummary {
        scorer,
        train_triples: train_ids.len(),
        valid_triples: valid_ids.len(),
        epochs_run: outcome.epochs_run,
        best_epoch: outcome.best_epoch,
        best_mrr: outcome.best_mrr,
        stopped_early: outcome.stopped_early,
    };
    write_json(&summary_path, &summary)?;
    for p in [&model_path, &log_path, &summary_path] {
        manifest.output(p);
    }
    manifest.finish(&common.manifest_path(&format!("train-{scorer}")))?;
    eprintln!(
        "train: {scorer} ran {} epochs, best validation MRR {:?} at epoch {:?}",
        summary.epochs_run, summary.best_mrr, summary.best_epoch
    );
    Ok(())
}
