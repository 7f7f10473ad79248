//! Score to probability maps.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rank::FilterIndex;
use super::train::sample_negatives;
use super::{log_sigmoid, sigmoid, EmbeddingModel, KgeError};
use crate::kg_builder::IndexedTriple;

/// `p = sigmoid(logit(s))`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Calibration {
    /// `logit(s) = s`.
    #[default]
    RawSigmoid,
    /// `logit(s) = a * s + b` with `a > 0`.
    Platt { a: f64, b: f64 },
}

impl Calibration {
    pub fn logit(self, score: f64) -> f64 {
        match self {
            Calibration::RawSigmoid => score,
            Calibration::Platt { a, b } => a * score + b,
        }
    }

    pub fn is_valid(self) -> bool {
        match self {
            Calibration::RawSigmoid => true,
            Calibration::Platt { a, b } => a.is_finite() && b.is_finite() && a > 0.0,
        }
    }
}

const NEWTON_STEPS: usize = 100;
/// Ridge on `(a, b)` keeps the Hessian invertible on separable data.
const PLATT_RIDGE: f64 = 1e-6;

/// Maximum-likelihood `(a, b)` for labelled scores by damped Newton steps;
/// errors when there is no positive slope.
pub fn fit_platt(scores: &[f64], labels: &[bool]) -> Result<Calibration, KgeError> {
    assert_eq!(scores.len(), labels.len());
    if !labels.iter().any(|&l| l) || labels.iter().all(|&l| l) {
        return Err(KgeError::InvalidConfig("Platt fit needs both classes".into()));
    }
    let nll = |a: f64, b: f64| -> f64 {
        let data: f64 = scores
            .iter()
            .zip(labels)
            .map(|(&s, &y)| {
                let z = a * s + b;
                -if y { log_sigmoid(z) } else { log_sigmoid(-z) }
            })
            .sum();
        data + 0.5 * PLATT_RIDGE * (a * a + b * b)
    };
    let (mut a, mut b) = (1.0, 0.0);
    let mut f = nll(a, b);
    for _ in 0..NEWTON_STEPS {
        let (mut ga, mut gb, mut haa, mut hab, mut hbb) =
            (PLATT_RIDGE * a, PLATT_RIDGE * b, PLATT_RIDGE, 0.0, PLATT_RIDGE);
        for (&s, &y) in scores.iter().zip(labels) {
            let p = sigmoid(a * s + b);
            let r = p - f64::from(u8::from(y));
            let w = p * (1.0 - p);
            ga += r * s;
            gb += r;
            haa += w * s * s;
            hab += w * s;
            hbb += w;
        }
        let det = haa * hbb - hab * hab;
        if det <= 0.0 || !det.is_finite() {
            break;
        }
        let (da, db) = ((hbb * ga - hab * gb) / det, (haa * gb - hab * ga) / det);
        let mut step = 1.0;
        let mut improved = false;
        while step > 1e-10 {
            let (na, nb) = (a - step * da, b - step * db);
            let nf = nll(na, nb);
            if nf <= f {
                (a, b, improved) = (na, nb, nf < f);
                f = nf;
                break;
            }
            step *= 0.5;
        }
        if !improved || (da.abs() + db.abs()) < 1e-12 {
            break;
        }
    }
    let c = Calibration::Platt { a, b };
    if !c.is_valid() {
        return Err(KgeError::InvalidConfig(format!("Platt fit gave a = {a}, b = {b}")));
    }
    Ok(c)
}

/// Fit Platt parameters on `positives` against one sampled corruption each.
pub fn fit_platt_on_triples(
    model: &EmbeddingModel,
    positives: &[IndexedTriple],
    known: &FilterIndex,
    rng: &mut impl Rng,
) -> Result<Calibration, KgeError> {
    let mut scores = Vec::with_capacity(2 * positives.len());
    let mut labels = Vec::with_capacity(2 * positives.len());
    for &p in positives {
        scores.push(model.score_ids(p)?);
        labels.push(true);
        let neg = sample_negatives(p, 1, model.n_entities(), known, rng)[0];
        scores.push(model.score_ids(neg)?);
        labels.push(false);
    }
    fit_platt(&scores, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn raw_is_identity() {
        assert_eq!(Calibration::RawSigmoid.logit(-3.5), -3.5);
        assert_eq!(Calibration::Platt { a: 2.0, b: 1.0 }.logit(-3.5), -6.0);
        assert!(!Calibration::Platt { a: -1.0, b: 0.0 }.is_valid());
    }

    #[test]
    fn recovers_generating_parameters() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let (a0, b0) = (1.7, -0.6);
        let scores: Vec<f64> = (0..20_000).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let labels: Vec<bool> = scores.iter().map(|&s| rng.gen_bool(sigmoid(a0 * s + b0))).collect();
        let Calibration::Platt { a, b } = fit_platt(&scores, &labels).unwrap() else {
            panic!()
        };
        assert!((a - a0).abs() < 0.1, "a = {a}");
        assert!((b - b0).abs() < 0.1, "b = {b}");
    }

    #[test]
    fn one_class_rejected() {
        assert!(fit_platt(&[0.0, 1.0], &[true, true]).is_err());
    }

    #[test]
    fn separable_data_stays_finite() {
        let scores = [-3.0, -2.0, 2.0, 3.0];
        let c = fit_platt(&scores, &[false, false, true, true]).unwrap();
        assert!(c.is_valid());
        assert!(sigmoid(c.logit(3.0)) > 0.99);
    }
}
