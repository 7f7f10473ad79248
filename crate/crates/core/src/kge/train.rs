//! Mini-batch Adam training with filtered negative sampling and early
//! stopping on validation MRR.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::loss::{self_adversarial_loss_into, triple_grad};
use super::rank::{rank_metrics, FilterIndex};
use super::{EmbeddingModel, KgeError, Scorer, TrainConfig};
use crate::kg_builder::IndexedTriple;
use crate::ontology::Entity;

/// Resampling attempts before a colliding negative is accepted.
const NEGATIVE_RETRIES: usize = 10;

/// `n` corruptions of `positive`, each replacing the subject or the object
/// with a uniformly drawn entity; known positives are redrawn a bounded
/// number of times.
pub fn sample_negatives(
    positive: IndexedTriple,
    n: usize,
    n_entities: usize,
    known: &FilterIndex,
    rng: &mut impl Rng,
) -> Vec<IndexedTriple> {
    let mut out = Vec::with_capacity(n);
    sample_negatives_into(positive, n, n_entities, known, rng, &mut out);
    out
}

fn sample_negatives_into(
    positive: IndexedTriple,
    n: usize,
    n_entities: usize,
    known: &FilterIndex,
    rng: &mut impl Rng,
    out: &mut Vec<IndexedTriple>,
) {
    out.clear();
    out.extend((0..n).map(|_| {
        let mut neg = positive;
        for _ in 0..=NEGATIVE_RETRIES {
            neg = positive;
            let e = rng.gen_range(0..n_entities as u32);
            if rng.gen_bool(0.5) {
                neg[0] = e;
            } else {
                neg[2] = e;
            }
            if !known.contains(neg) {
                break;
            }
        }
        neg
    }));
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl Adam {
    fn new(n: usize) -> Self {
        Adam {
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64, t: i32) {
        let c1 = 1.0 - BETA1.powi(t);
        let c2 = 1.0 - BETA2.powi(t);
        for (((p, g), m), v) in params.iter_mut().zip(grads).zip(&mut self.m).zip(&mut self.v) {
            *m = BETA1 * *m + (1.0 - BETA1) * g;
            *v = BETA2 * *v + (1.0 - BETA2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + ADAM_EPS);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub loss: f64,
    pub val_mrr: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Best-validation snapshot, or the final model when nothing was validated.
    pub model: EmbeddingModel,
    pub log: Vec<EpochLog>,
    pub best_epoch: Option<usize>,
    pub best_mrr: Option<f64>,
    pub epochs_run: usize,
    pub stopped_early: bool,
}

/// Train with early stopping on filtered MRR over `valid`; the filter holds
/// both `train` and `valid`. An empty `valid` trains for `max_epochs`.
pub fn train(
    scorer: Scorer,
    entities: Vec<Entity>,
    train: &[IndexedTriple],
    valid: &[IndexedTriple],
    config: &TrainConfig,
) -> Result<TrainOutcome, KgeError> {
    let filter = FilterIndex::new([train, valid]);
    if valid.is_empty() {
        return train_with_validator(scorer, entities, train, config, None);
    }
    let mut validate = |m: &EmbeddingModel| rank_metrics(m, valid, &filter).map(|r| r.mrr);
    train_with_validator(scorer, entities, train, config, Some(&mut validate))
}

pub type Validator<'a> = &'a mut dyn FnMut(&EmbeddingModel) -> Result<f64, KgeError>;

/// [`train`] with a caller-supplied validation metric (higher is better).
pub fn train_with_validator(
    scorer: Scorer,
    entities: Vec<Entity>,
    train: &[IndexedTriple],
    config: &TrainConfig,
    mut validator: Option<Validator<'_>>,
) -> Result<TrainOutcome, KgeError> {
    config.validate()?;
    if train.is_empty() {
        return Err(KgeError::EmptyCorpus);
    }
    if entities.len() < 2 {
        return Err(KgeError::InvalidConfig("need at least 2 entities".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = EmbeddingModel::random_scaled(
        scorer,
        entities,
        config.k,
        config.norm_order,
        config.relation_init_scale,
        &mut rng,
    );
    for &ids in train {
        model.score_ids(ids)?;
    }
    let known = FilterIndex::new([train]);
    let n_entities = model.n_entities();
    let w = model.width();
    let mut adam_e = Adam::new(model.entity_emb.len());
    let mut adam_r = Adam::new(model.relation_emb.len());
    let mut grad_e = vec![0.0; model.entity_emb.len()];
    let mut grad_r = vec![0.0; model.relation_emb.len()];
    let mut scratch = [vec![0.0; w], vec![0.0; w], vec![0.0; w]];
    let (mut negs, mut s_neg, mut d_neg) = (Vec::new(), Vec::new(), Vec::new());
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut step = 0i32;

    let mut log = Vec::new();
    let mut best: Option<(f64, usize, EmbeddingModel)> = None;
    let mut bad_rounds = 0;
    let mut stopped_early = false;
    let mut epochs_run = 0;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut n_batches = 0;
        for batch in order.chunks(config.batch_size) {
            grad_e.iter_mut().for_each(|g| *g = 0.0);
            grad_r.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            let mut batch_loss = 0.0;
            for &i in batch {
                let pos = train[i];
                sample_negatives_into(
                    pos,
                    config.negatives_per_positive,
                    n_entities,
                    &known,
                    &mut rng,
                    &mut negs,
                );
                let s_pos = model.score_unchecked(pos);
                s_neg.clear();
                s_neg.extend(negs.iter().map(|&n| model.score_unchecked(n)));
                let (margin, alpha) = (config.margin, config.adversarial_temperature);
                let (loss, d_pos) = match self_adversarial_loss_into(s_pos, &s_neg, margin, alpha, &mut d_neg) {
                    Ok(v) => v,
                    Err(_) => return Err(KgeError::DivergenceDetected { epoch, loss: f64::NAN }),
                };
                batch_loss += loss * scale;
                for (ids, coeff) in std::iter::once((pos, d_pos)).chain(negs.iter().copied().zip(d_neg.iter().copied()))
                {
                    triple_grad(&model, ids, coeff * scale, &mut scratch);
                    let [h, r, t] = ids.map(|x| x as usize);
                    add_row(&mut grad_e, h, w, &scratch[0]);
                    add_row(&mut grad_r, r, w, &scratch[1]);
                    add_row(&mut grad_e, t, w, &scratch[2]);
                }
            }
            if config.relation_l2 > 0.0 {
                let lambda = config.relation_l2;
                batch_loss += lambda * model.relation_emb.iter().map(|x| x * x).sum::<f64>();
                for (g, x) in grad_r.iter_mut().zip(&model.relation_emb) {
                    *g += 2.0 * lambda * x;
                }
            }
            step += 1;
            adam_e.step(&mut model.entity_emb, &grad_e, config.learning_rate, step);
            adam_r.step(&mut model.relation_emb, &grad_r, config.learning_rate, step);
            epoch_loss += batch_loss;
            n_batches += 1;
        }
        let loss = epoch_loss / n_batches as f64;
        epochs_run = epoch;
        if !loss.is_finite() || !model.is_finite() {
            return Err(KgeError::DivergenceDetected { epoch, loss });
        }

        let mut val_mrr = None;
        if let Some(v) = validator.as_mut() {
            if epoch >= config.validation_burn_in && epoch % config.validation_freq == 0 {
                let mrr = v(&model)?;
                val_mrr = Some(mrr);
                if best.as_ref().is_none_or(|(b, _, _)| mrr > *b) {
                    best = Some((mrr, epoch, model.clone()));
                    bad_rounds = 0;
                } else {
                    bad_rounds += 1;
                }
            }
        }
        log.push(EpochLog { epoch, loss, val_mrr });
        if bad_rounds >= config.patience {
            stopped_early = true;
            break;
        }
    }

    let (model, best_epoch, best_mrr) = match best {
        Some((mrr, epoch, m)) => (m, Some(epoch), Some(mrr)),
        None => (model, None, None),
    };
    Ok(TrainOutcome {
        model,
        log,
        best_epoch,
        best_mrr,
        epochs_run,
        stopped_early,
    })
}

fn add_row(dst: &mut [f64], row: usize, w: usize, src: &[f64]) {
    dst[row * w..(row + 1) * w]
        .iter_mut()
        .zip(src)
        .for_each(|(a, b)| *a += b);
}

/// `epoch,loss,val_mrr` with an empty cell when no validation ran.
pub fn write_training_log(log: &[EpochLog], path: &Path) -> Result<(), KgeError> {
    let io = |e| KgeError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "epoch,loss,val_mrr").map_err(io)?;
    for e in log {
        let mrr = e.val_mrr.map(|m| format!("{m:?}")).unwrap_or_default();
        writeln!(w, "{},{:?},{}", e.epoch, e.loss, mrr).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::ChildId;

    fn entities(n: u64) -> Vec<Entity> {
        (0..n).map(|i| Entity::Child(ChildId(i))).collect()
    }

    #[test]
    fn negatives_two_entity_universe() {
        let pos = [0, 0, 1];
        let known = FilterIndex::new([[pos].as_slice()]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let negs = sample_negatives(pos, 5, 2, &known, &mut rng);
        assert_eq!(negs.len(), 5);
        for n in negs {
            assert!(n == [1, 0, 1] || n == [0, 0, 0], "{n:?}");
        }
    }

    #[test]
    fn negatives_deterministic_and_filtered() {
        let pos = [3, 2, 7];
        let known = FilterIndex::new([[pos, [3, 2, 8]].as_slice()]);
        let a = sample_negatives(pos, 50, 20, &known, &mut ChaCha8Rng::seed_from_u64(4));
        let b = sample_negatives(pos, 50, 20, &known, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
        assert!(a.iter().all(|n| !known.contains(*n)));
        assert!(a.iter().all(|n| (n[0] == 3) != (n[2] == 7) || n == &[3, 2, 7]));
    }

    fn tiny_config() -> TrainConfig {
        TrainConfig {
            k: 4,
            batch_size: 4,
            learning_rate: 0.01,
            max_epochs: 60,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn frozen_validation_stops_after_patience() {
        let triples: Vec<IndexedTriple> = (0..8).map(|i| [i, 0, (i + 1) % 8]).collect();
        let cfg = tiny_config();
        let mut frozen = |_: &EmbeddingModel| Ok(0.5);
        let out = train_with_validator(Scorer::TransE, entities(8), &triples, &cfg, Some(&mut frozen)).unwrap();
        assert_eq!(out.best_epoch, Some(cfg.validation_burn_in));
        assert_eq!(
            out.epochs_run,
            cfg.validation_burn_in + cfg.patience * cfg.validation_freq
        );
        assert!(out.stopped_early);
    }

    #[test]
    fn best_snapshot_is_returned() {
        let triples: Vec<IndexedTriple> = (0..8).map(|i| [i, 0, (i + 1) % 8]).collect();
        let cfg = tiny_config();
        let mut round = 0;
        let mut snapshots = Vec::new();
        let mut peaked = |m: &EmbeddingModel| {
            round += 1;
            snapshots.push(m.clone());
            Ok(if round == 3 { 0.9 } else { 0.1 * round as f64 })
        };
        let out = train_with_validator(Scorer::TransE, entities(8), &triples, &cfg, Some(&mut peaked)).unwrap();
        assert_eq!(out.best_epoch, Some(15));
        assert_eq!(out.best_mrr, Some(0.9));
        assert_eq!(out.model, snapshots[2]);
    }

    #[test]
    fn empty_corpus_rejected() {
        let err = train(Scorer::TransE, entities(4), &[], &[], &tiny_config()).unwrap_err();
        assert_eq!(err.name(), "EmptyCorpus");
    }

    #[test]
    fn divergence_detected() {
        let triples: Vec<IndexedTriple> = vec![[0, 0, 1], [1, 0, 2]];
        let cfg = TrainConfig {
            learning_rate: 1e300,
            ..tiny_config()
        };
        let err = train(Scorer::ComplEx, entities(3), &triples, &[], &cfg).unwrap_err();
        assert_eq!(err.name(), "DivergenceDetected");
    }

    #[test]
    fn seeded_runs_are_identical() {
        let triples: Vec<IndexedTriple> = (0..10).map(|i| [i, 1, (i + 2) % 10]).collect();
        let valid = [triples[3]];
        let cfg = tiny_config();
        let a = train(Scorer::ComplEx, entities(10), &triples, &valid, &cfg).unwrap();
        let b = train(Scorer::ComplEx, entities(10), &triples, &valid, &cfg).unwrap();
        assert_eq!(a.log, b.log);
        assert_eq!(a.model, b.model);
        let dir = tempfile::tempdir().unwrap();
        let (pa, pb) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_training_log(&a.log, &pa).unwrap();
        write_training_log(&b.log, &pb).unwrap();
        assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    }
}
