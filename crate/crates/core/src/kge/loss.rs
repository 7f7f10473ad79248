//! Self-adversarial negative-sampling loss.
//!
//! `L = -ln σ(γ + s⁺) - Σ_i w_i ln σ(-s_i - γ)` with `w = softmax(α s)`.
//! The weights are constants for differentiation.

use std::collections::BTreeMap;

use super::{log_sigmoid, scoring, sigmoid, EmbeddingModel, KgeError, Scorer};
use crate::kg_builder::IndexedTriple;

/// Softmax of `alpha * scores`, shifted by the maximum for stability.
pub fn adversarial_weights(neg_scores: &[f64], alpha: f64) -> Vec<f64> {
    let m = neg_scores.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let e: Vec<f64> = neg_scores.iter().map(|s| (alpha * (s - m)).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|x| x / z).collect()
}

/// Loss for fixed weights.
pub fn loss_with_weights(pos_score: f64, neg_scores: &[f64], margin: f64, weights: &[f64]) -> f64 {
    -log_sigmoid(margin + pos_score)
        - neg_scores
            .iter()
            .zip(weights)
            .map(|(s, w)| w * log_sigmoid(-s - margin))
            .sum::<f64>()
}

/// Returns `(loss, dL/ds⁺, dL/ds_i)`.
pub fn self_adversarial_loss(
    pos_score: f64,
    neg_scores: &[f64],
    margin: f64,
    temperature: f64,
) -> Result<(f64, f64, Vec<f64>), KgeError> {
    let mut d_neg = Vec::with_capacity(neg_scores.len());
    let (loss, d_pos) = self_adversarial_loss_into(pos_score, neg_scores, margin, temperature, &mut d_neg)?;
    Ok((loss, d_pos, d_neg))
}

/// [`self_adversarial_loss`] writing `dL/ds_i` into `d_neg`; `d_neg` holds the
/// adversarial weights while the loss is formed.
pub(crate) fn self_adversarial_loss_into(
    pos_score: f64,
    neg_scores: &[f64],
    margin: f64,
    temperature: f64,
    d_neg: &mut Vec<f64>,
) -> Result<(f64, f64), KgeError> {
    assert!(!neg_scores.is_empty(), "at least one negative");
    if !pos_score.is_finite() || neg_scores.iter().any(|s| !s.is_finite()) {
        return Err(KgeError::NonFiniteScore);
    }
    let m = neg_scores.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    d_neg.clear();
    d_neg.extend(neg_scores.iter().map(|s| (temperature * (s - m)).exp()));
    let z: f64 = d_neg.iter().sum();
    d_neg.iter_mut().for_each(|x| *x /= z);
    let loss = loss_with_weights(pos_score, neg_scores, margin, d_neg);
    let d_pos = -sigmoid(-margin - pos_score);
    for (d, s) in d_neg.iter_mut().zip(neg_scores) {
        *d *= sigmoid(s + margin);
    }
    Ok((loss, d_pos))
}

/// Write `coeff * ds/d(row)` for the three rows of `ids` into the scratch rows.
pub(crate) fn triple_grad(model: &EmbeddingModel, [h, r, t]: IndexedTriple, coeff: f64, g: &mut [Vec<f64>; 3]) {
    let (eh, er, et) = (
        model.entity_row(h as usize),
        model.relation_row(r as usize),
        model.entity_row(t as usize),
    );
    let [gh, gr, gt] = g;
    match model.scorer {
        Scorer::TransE => scoring::transe_grad(eh, er, et, model.norm_order, coeff, gh, gr, gt),
        Scorer::ComplEx => scoring::complex_grad(eh, er, et, coeff, gh, gr, gt),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamRow {
    Entity(u32),
    Relation(u32),
}

#[derive(Debug, Clone)]
pub struct LossGradients {
    pub loss: f64,
    /// Adversarial weights at the evaluation point.
    pub weights: Vec<f64>,
    /// Gradient of every touched embedding row.
    pub rows: BTreeMap<ParamRow, Vec<f64>>,
}

/// Loss and sparse gradients for one positive and its negatives.
pub fn loss_and_gradients(
    model: &EmbeddingModel,
    positive: IndexedTriple,
    negatives: &[IndexedTriple],
    margin: f64,
    temperature: f64,
) -> Result<LossGradients, KgeError> {
    let s_pos = model.score_ids(positive)?;
    let s_neg = negatives
        .iter()
        .map(|&n| model.score_ids(n))
        .collect::<Result<Vec<_>, _>>()?;
    let (loss, d_pos, d_neg) = self_adversarial_loss(s_pos, &s_neg, margin, temperature)?;
    let w = model.width();
    let mut scratch = [vec![0.0; w], vec![0.0; w], vec![0.0; w]];
    let mut rows: BTreeMap<ParamRow, Vec<f64>> = BTreeMap::new();
    for (ids, coeff) in std::iter::once((positive, d_pos)).chain(negatives.iter().copied().zip(d_neg)) {
        triple_grad(model, ids, coeff, &mut scratch);
        let keys = [
            ParamRow::Entity(ids[0]),
            ParamRow::Relation(ids[1]),
            ParamRow::Entity(ids[2]),
        ];
        for (key, g) in keys.into_iter().zip(&scratch) {
            let acc = rows.entry(key).or_insert_with(|| vec![0.0; w]);
            acc.iter_mut().zip(g).for_each(|(a, b)| *a += b);
        }
    }
    Ok(LossGradients {
        loss,
        weights: adversarial_weights(&s_neg, temperature),
        rows,
    })
}
