//! Knowledge graph embeddings: TransE and ComplEx scorers, self-adversarial
//! training with early stopping on filtered MRR, and triple probabilities.

pub mod calibrate;
pub mod loss;
pub mod rank;
pub mod scoring;
pub mod train;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg_builder::{IndexedTriple, TripleCorpus};
use crate::ontology::{Entity, Relation, Triple};

pub use calibrate::{fit_platt, fit_platt_on_triples, Calibration};
pub use loss::{loss_and_gradients, self_adversarial_loss, LossGradients, ParamRow};
pub use rank::{rank_metrics, FilterIndex, RankReport};
pub use train::{sample_negatives, train, train_with_validator, EpochLog, TrainOutcome};

#[derive(Debug, Error)]
pub enum KgeError {
    #[error("{kind} index {index} out of range for {size} rows")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        size: usize,
    },
    #[error("non-finite score encountered")]
    NonFiniteScore,
    #[error("loss diverged at epoch {epoch} (loss {loss})")]
    DivergenceDetected { epoch: usize, loss: f64 },
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("entity {0} unknown to the model")]
    UnknownEntity(String),
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("malformed checkpoint {path}: {message}")]
    MalformedCheckpoint { path: String, message: String },
    #[error("io failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl KgeError {
    pub fn name(&self) -> &'static str {
        match self {
            KgeError::IndexOutOfRange { .. } => "IndexOutOfRange",
            KgeError::NonFiniteScore => "NonFiniteScore",
            KgeError::DivergenceDetected { .. } => "DivergenceDetected",
            KgeError::EmptyCorpus => "EmptyCorpus",
            KgeError::UnknownEntity(_) => "UnknownEntity",
            KgeError::InvalidConfig(_) => "InvalidConfig",
            KgeError::MalformedCheckpoint { .. } => "MalformedCheckpoint",
            KgeError::Io { .. } => "IoFailure",
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        KgeError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scorer {
    #[default]
    TransE,
    ComplEx,
}

impl Scorer {
    pub fn name(self) -> &'static str {
        match self {
            Scorer::TransE => "transe",
            Scorer::ComplEx => "complex",
        }
    }

    /// Reals stored per row for embedding size `k`.
    pub fn row_width(self, k: usize) -> usize {
        match self {
            Scorer::TransE => k,
            Scorer::ComplEx => 2 * k,
        }
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scorer {
    type Err = KgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "transe" => Ok(Scorer::TransE),
            "complex" => Ok(Scorer::ComplEx),
            _ => Err(KgeError::InvalidConfig(format!("unknown scorer {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub k: usize,
    pub negatives_per_positive: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub validation_burn_in: usize,
    pub validation_freq: usize,
    /// Validation triples ranked per chunk; affects memory only.
    pub validation_batch_size: usize,
    pub patience: usize,
    pub adversarial_temperature: f64,
    pub margin: f64,
    pub max_epochs: usize,
    pub seed: u64,
    /// TransE norm order, 1 or 2.
    pub norm_order: u8,
    /// L2 penalty on relation rows, added once per batch.
    pub relation_l2: f64,
    /// Relation rows start uniform in `±scale·6/sqrt(k)`.
    pub relation_init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            k: 100,
            negatives_per_positive: 5,
            learning_rate: 0.0005,
            batch_size: 10_000,
            validation_burn_in: 5,
            validation_freq: 5,
            validation_batch_size: 100,
            patience: 5,
            adversarial_temperature: 1.0,
            margin: 5.0,
            max_epochs: 400,
            seed: 0,
            norm_order: 1,
            relation_l2: 0.03,
            relation_init_scale: 1.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), KgeError> {
        let counts = [
            ("k", self.k),
            ("negatives_per_positive", self.negatives_per_positive),
            ("batch_size", self.batch_size),
            ("validation_freq", self.validation_freq),
            ("validation_batch_size", self.validation_batch_size),
            ("patience", self.patience),
            ("max_epochs", self.max_epochs),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(KgeError::InvalidConfig(format!("{name} must be positive")));
        }
        let positive = [
            ("learning_rate", self.learning_rate),
            ("adversarial_temperature", self.adversarial_temperature),
            ("margin", self.margin),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(KgeError::InvalidConfig(format!("{name} must be positive, got {v}")));
        }
        for (name, v) in [
            ("relation_l2", self.relation_l2),
            ("relation_init_scale", self.relation_init_scale),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(KgeError::InvalidConfig(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !matches!(self.norm_order, 1 | 2) {
            return Err(KgeError::InvalidConfig(format!(
                "norm_order must be 1 or 2, got {}",
                self.norm_order
            )));
        }
        Ok(())
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(sigmoid(x))` without underflow for very negative `x`.
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Entity and relation embeddings for one scorer.
///
/// Rows are dense, row-major, `scorer.row_width(k)` reals each; every entry
/// finite. Relation rows follow [`Relation::ALL`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub scorer: Scorer,
    pub norm_order: u8,
    pub k: usize,
    entities: Vec<Entity>,
    entity_ids: HashMap<Entity, u32>,
    pub(crate) entity_emb: Vec<f64>,
    pub(crate) relation_emb: Vec<f64>,
    pub calibration: Calibration,
}

impl EmbeddingModel {
    /// Uniform initialization in `[-6/sqrt(k), 6/sqrt(k)]`.
    pub fn random(scorer: Scorer, entities: Vec<Entity>, k: usize, norm_order: u8, rng: &mut impl Rng) -> Self {
        Self::random_scaled(scorer, entities, k, norm_order, 1.0, rng)
    }

    /// As [`EmbeddingModel::random`] with relation rows scaled by `relation_scale`.
    pub fn random_scaled(
        scorer: Scorer,
        entities: Vec<Entity>,
        k: usize,
        norm_order: u8,
        relation_scale: f64,
        rng: &mut impl Rng,
    ) -> Self {
        let bound = 6.0 / (k as f64).sqrt();
        let w = scorer.row_width(k);
        let entity_emb = (0..entities.len() * w).map(|_| rng.gen_range(-bound..=bound)).collect();
        let relation_emb = (0..Relation::ALL.len() * w)
            .map(|_| relation_scale * rng.gen_range(-bound..=bound))
            .collect();
        Self::from_parts(scorer, norm_order, k, entities, entity_emb, relation_emb)
    }

    pub fn from_parts(
        scorer: Scorer,
        norm_order: u8,
        k: usize,
        entities: Vec<Entity>,
        entity_emb: Vec<f64>,
        relation_emb: Vec<f64>,
    ) -> Self {
        let w = scorer.row_width(k);
        assert_eq!(entity_emb.len(), entities.len() * w, "entity matrix shape");
        assert_eq!(relation_emb.len(), Relation::ALL.len() * w, "relation matrix shape");
        let entity_ids = entities.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
        EmbeddingModel {
            scorer,
            norm_order,
            k,
            entities,
            entity_ids,
            entity_emb,
            relation_emb,
            calibration: Calibration::RawSigmoid,
        }
    }

    pub fn for_corpus(scorer: Scorer, corpus: &TripleCorpus, config: &TrainConfig, rng: &mut impl Rng) -> Self {
        let e = corpus.entities().to_vec();
        Self::random_scaled(scorer, e, config.k, config.norm_order, config.relation_init_scale, rng)
    }

    pub fn width(&self) -> usize {
        self.scorer.row_width(self.k)
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn entity_index(&self, e: &Entity) -> Result<u32, KgeError> {
        self.entity_ids
            .get(e)
            .copied()
            .ok_or_else(|| KgeError::UnknownEntity(e.to_string()))
    }

    pub fn index_triple(&self, t: &Triple) -> Result<IndexedTriple, KgeError> {
        Ok([
            self.entity_index(&t.subject)?,
            TripleCorpus::relation_id(t.predicate),
            self.entity_index(&t.object)?,
        ])
    }

    pub fn entity_row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.entity_emb[i * w..(i + 1) * w]
    }

    pub fn relation_row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.relation_emb[i * w..(i + 1) * w]
    }

    pub fn entity_row_mut(&mut self, i: usize) -> &mut [f64] {
        let w = self.width();
        &mut self.entity_emb[i * w..(i + 1) * w]
    }

    pub fn relation_row_mut(&mut self, i: usize) -> &mut [f64] {
        let w = self.width();
        &mut self.relation_emb[i * w..(i + 1) * w]
    }

    fn check(&self, [h, r, t]: IndexedTriple) -> Result<(), KgeError> {
        let n = self.n_entities();
        for (kind, index, size) in [
            ("entity", h as usize, n),
            ("relation", r as usize, Relation::ALL.len()),
            ("entity", t as usize, n),
        ] {
            if index >= size {
                return Err(KgeError::IndexOutOfRange { kind, index, size });
            }
        }
        Ok(())
    }

    /// Score of indexed triple without bounds checks beyond slice indexing.
    pub(crate) fn score_unchecked(&self, [h, r, t]: IndexedTriple) -> f64 {
        let (h, r, t) = (
            self.entity_row(h as usize),
            self.relation_row(r as usize),
            self.entity_row(t as usize),
        );
        match self.scorer {
            Scorer::TransE => scoring::score_transe(h, r, t, self.norm_order),
            Scorer::ComplEx => scoring::score_complex(h, r, t),
        }
    }

    pub fn score_ids(&self, ids: IndexedTriple) -> Result<f64, KgeError> {
        self.check(ids)?;
        Ok(self.score_unchecked(ids))
    }

    pub fn score(&self, t: &Triple) -> Result<f64, KgeError> {
        self.score_ids(self.index_triple(t)?)
    }

    /// Calibrated probability, strictly increasing in the score.
    pub fn triple_probability(&self, t: &Triple) -> Result<f64, KgeError> {
        Ok(sigmoid(self.calibration.logit(self.score(t)?)))
    }

    pub fn log_triple_probability(&self, t: &Triple) -> Result<f64, KgeError> {
        Ok(log_sigmoid(self.calibration.logit(self.score(t)?)))
    }

    pub fn is_finite(&self) -> bool {
        self.entity_emb.iter().chain(&self.relation_emb).all(|v| v.is_finite())
    }

    pub fn save_json(&self, path: &Path, config: Option<&TrainConfig>) -> Result<(), KgeError> {
        let w = self.width();
        let doc = Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            scorer: self.scorer,
            norm_order: self.norm_order,
            k: self.k,
            calibration: self.calibration,
            config: config.cloned(),
            entities: self.entities.iter().map(|e| e.to_string()).collect(),
            relations: Relation::ALL.iter().map(|r| r.name().to_owned()).collect(),
            entity_embeddings: self.entity_emb.chunks(w).map(<[f64]>::to_vec).collect(),
            relation_embeddings: self.relation_emb.chunks(w).map(<[f64]>::to_vec).collect(),
        };
        let text = serde_json::to_string(&doc).expect("checkpoint serializes");
        fs::write(path, text).map_err(|e| KgeError::io(path, e))
    }

    pub fn load_json(path: &Path) -> Result<(Self, Option<TrainConfig>), KgeError> {
        let bad = |message: String| KgeError::MalformedCheckpoint {
            path: path.display().to_string(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| KgeError::io(path, e))?;
        let doc: Checkpoint = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        if doc.format != CHECKPOINT_FORMAT || doc.version != CHECKPOINT_VERSION {
            return Err(bad(format!("unsupported format {} v{}", doc.format, doc.version)));
        }
        let relations: Vec<&str> = Relation::ALL.iter().map(|r| r.name()).collect();
        if doc.relations != relations {
            return Err(bad("relation table differs from the ontology".into()));
        }
        let entities = doc
            .entities
            .iter()
            .map(|n| Entity::parse(n).map_err(|e| bad(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let w = doc.scorer.row_width(doc.k);
        let flatten = |rows: Vec<Vec<f64>>, n: usize, what: &str| -> Result<Vec<f64>, KgeError> {
            if rows.len() != n || rows.iter().any(|r| r.len() != w) {
                return Err(bad(format!("{what} matrix is not {n} x {w}")));
            }
            Ok(rows.into_iter().flatten().collect())
        };
        let ent = flatten(doc.entity_embeddings, entities.len(), "entity")?;
        let rel = flatten(doc.relation_embeddings, Relation::ALL.len(), "relation")?;
        let mut model = Self::from_parts(doc.scorer, doc.norm_order, doc.k, entities, ent, rel);
        model.calibration = doc.calibration;
        if !model.is_finite() || !model.calibration.is_valid() {
            return Err(bad("non-finite embedding entry".into()));
        }
        Ok((model, doc.config))
    }
}

const CHECKPOINT_FORMAT: &str = "lanekg-embedding";
const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    scorer: Scorer,
    norm_order: u8,
    k: usize,
    #[serde(default)]
    calibration: Calibration,
    config: Option<TrainConfig>,
    entities: Vec<String>,
    relations: Vec<String>,
    entity_embeddings: Vec<Vec<f64>>,
    relation_embeddings: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{ChildId, Intention};
    use rand::SeedableRng;

    fn model(scorer: Scorer) -> EmbeddingModel {
        let entities: Vec<Entity> = Entity::schema_entities()
            .chain((0..5).map(|i| Entity::Child(ChildId(i))))
            .collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        EmbeddingModel::random(scorer, entities, 6, 1, &mut rng)
    }

    #[test]
    fn sigmoid_values() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(-10.0) - 4.5397868702434395e-5).abs() < 1e-15);
        assert!((log_sigmoid(-10.0) - sigmoid(-10.0).ln()).abs() < 1e-12);
        assert!((log_sigmoid(3.0) - sigmoid(3.0).ln()).abs() < 1e-15);
        assert!(log_sigmoid(-800.0).is_finite());
        assert!(sigmoid(2.0) > sigmoid(1.9));
    }

    #[test]
    fn init_bounds_and_shape() {
        let m = model(Scorer::ComplEx);
        let b = 6.0 / 6f64.sqrt();
        assert_eq!(m.entity_row(0).len(), 12);
        assert!(m.entity_emb.iter().all(|v| v.abs() <= b));
        assert_eq!(m.relation_emb.len(), 9 * 12);
    }

    #[test]
    fn index_errors() {
        let m = model(Scorer::TransE);
        assert_eq!(m.score_ids([0, 9, 1]).unwrap_err().name(), "IndexOutOfRange");
        assert_eq!(m.score_ids([99, 0, 1]).unwrap_err().name(), "IndexOutOfRange");
        let t = Triple::new(ChildId(42), Relation::IntentionIs, Intention::Lk);
        assert_eq!(m.score(&t).unwrap_err().name(), "UnknownEntity");
    }

    #[test]
    fn transe_translation_invariance() {
        let mut m = model(Scorer::TransE);
        let t = Triple::new(ChildId(3), Relation::IntentionIs, Intention::Llc);
        let before = m.score(&t).unwrap();
        let shift = [0.3, -1.2, 0.7, 0.0, 2.0, -0.4];
        for i in 0..m.n_entities() {
            for (x, c) in m.entity_row_mut(i).iter_mut().zip(shift) {
                *x += c;
            }
        }
        assert!((m.score(&t).unwrap() - before).abs() < 1e-12);
    }

    #[test]
    fn checkpoint_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        for scorer in [Scorer::TransE, Scorer::ComplEx] {
            let m = model(scorer);
            let cfg = TrainConfig::default();
            m.save_json(&path, Some(&cfg)).unwrap();
            let (back, cfg_back) = EmbeddingModel::load_json(&path).unwrap();
            assert_eq!(back, m);
            assert_eq!(cfg_back, Some(cfg.clone()));
        }
        fs::write(&path, "{}").unwrap();
        assert_eq!(
            EmbeddingModel::load_json(&path).unwrap_err().name(),
            "MalformedCheckpoint"
        );
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        let bad = TrainConfig {
            k: 0,
            ..TrainConfig::default()
        };
        assert_eq!(bad.validate().unwrap_err().name(), "InvalidConfig");
        let bad = TrainConfig {
            norm_order: 3,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainConfig {
            learning_rate: -1.0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!("ComplEx".parse::<Scorer>().unwrap(), Scorer::ComplEx);
    }
}
