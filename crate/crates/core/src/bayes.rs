//! Posterior over lane-change intentions from reified triple probabilities.
//!
//! `P(h | e) = P(h) · Π_i P(e_i | h) / Π_i P(e_i)` where
//! `P(h) = p(<vehicle, INTENTION_IS, h>)`,
//! `P(e_i | h) = p(<e_i, INTENTION_IS, h>)` and
//! `P(e_i) = p(<vehicle, R_i, e_i>)`. Products run in log space.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discretize::LinguisticFrame;
use crate::kge::{EmbeddingModel, KgeError};
use crate::ontology::{
    reify_conditioned_evidence, reify_evidence, Category, ChildId, Entity, Intention, Relation, Triple,
};

#[derive(Debug, Error)]
pub enum BayesError {
    #[error("entity {0} unknown to the model")]
    UnknownEntity(String),
    #[error("evidence marginal is zero")]
    ZeroEvidenceMarginal,
    #[error("zero count for conditioning event {0}")]
    ZeroCount(String),
    #[error("invalid evidence set: {0}")]
    InvalidEvidence(String),
    #[error("triple {0} has no frequency interpretation")]
    UnsupportedTriple(String),
    #[error(transparent)]
    Kge(KgeError),
}

impl BayesError {
    pub fn name(&self) -> &'static str {
        match self {
            BayesError::UnknownEntity(_) => "UnknownEntity",
            BayesError::ZeroEvidenceMarginal => "ZeroEvidenceMarginal",
            BayesError::ZeroCount(_) => "ZeroCount",
            BayesError::InvalidEvidence(_) => "InvalidEvidence",
            BayesError::UnsupportedTriple(_) => "UnsupportedTriple",
            BayesError::Kge(e) => e.name(),
        }
    }
}

impl From<KgeError> for BayesError {
    fn from(e: KgeError) -> Self {
        match e {
            KgeError::UnknownEntity(n) => BayesError::UnknownEntity(n),
            other => BayesError::Kge(other),
        }
    }
}

/// Source of `ln p(t)` for reified triples.
pub trait TripleProbability {
    fn log_probability(&self, t: &Triple) -> Result<f64, BayesError>;
}

impl TripleProbability for EmbeddingModel {
    fn log_probability(&self, t: &Triple) -> Result<f64, BayesError> {
        Ok(self.log_triple_probability(t)?)
    }
}

/// At most one category per evidence concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceSet(Vec<Category>);

impl EvidenceSet {
    pub fn new(categories: Vec<Category>) -> Result<Self, BayesError> {
        let mut seen = [false; 7];
        for c in &categories {
            let i = c.slot_index();
            if seen[i] {
                return Err(BayesError::InvalidEvidence(format!(
                    "two categories for concept {}",
                    c.concept()
                )));
            }
            seen[i] = true;
        }
        Ok(EvidenceSet(categories))
    }

    pub fn from_frame(lf: &LinguisticFrame) -> Self {
        EvidenceSet(lf.categories.to_vec())
    }

    pub fn categories(&self) -> &[Category] {
        &self.0
    }
}

pub fn prior_triple(h: Intention) -> Triple {
    Triple::new(Entity::Vehicle, Relation::IntentionIs, h)
}

pub fn log_prior(model: &impl TripleProbability, h: Intention) -> Result<f64, BayesError> {
    model.log_probability(&prior_triple(h))
}

pub fn log_evidence_likelihood(
    model: &impl TripleProbability,
    e: &EvidenceSet,
    h: Intention,
) -> Result<f64, BayesError> {
    e.0.iter().try_fold(0.0, |acc, &c| {
        let t = reify_conditioned_evidence(c, Entity::Intention(h)).expect("intention hypothesis");
        Ok(acc + model.log_probability(&t)?)
    })
}

pub fn log_evidence_marginal(model: &impl TripleProbability, e: &EvidenceSet) -> Result<f64, BayesError> {
    e.0.iter().try_fold(0.0, |acc, &c| {
        let t = reify_evidence(c, Entity::Vehicle).expect("vehicle subject");
        Ok(acc + model.log_probability(&t)?)
    })
}

pub fn prior(model: &impl TripleProbability, h: Intention) -> Result<f64, BayesError> {
    log_prior(model, h).map(f64::exp)
}

pub fn evidence_likelihood(model: &impl TripleProbability, e: &EvidenceSet, h: Intention) -> Result<f64, BayesError> {
    log_evidence_likelihood(model, e, h).map(f64::exp)
}

pub fn evidence_marginal(model: &impl TripleProbability, e: &EvidenceSet) -> Result<f64, BayesError> {
    log_evidence_marginal(model, e).map(f64::exp)
}

pub fn log_posterior(model: &impl TripleProbability, e: &EvidenceSet, h: Intention) -> Result<f64, BayesError> {
    let marginal = log_evidence_marginal(model, e)?;
    if marginal == f64::NEG_INFINITY {
        return Err(BayesError::ZeroEvidenceMarginal);
    }
    Ok(log_prior(model, h)? + log_evidence_likelihood(model, e, h)? - marginal)
}

pub fn posterior(model: &impl TripleProbability, e: &EvidenceSet, h: Intention) -> Result<f64, BayesError> {
    log_posterior(model, e, h).map(f64::exp)
}

/// Hypotheses in tie-break priority order.
pub const TIE_BREAK: [Intention; 3] = [Intention::Lk, Intention::Llc, Intention::Rlc];

/// Per-hypothesis values, indexed by [`Intention::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub log_raw: [f64; 3],
    pub predicted: Intention,
}

impl Posterior {
    /// Argmax with ties resolved by [`TIE_BREAK`].
    pub fn from_log(log_raw: [f64; 3]) -> Self {
        let mut predicted = TIE_BREAK[0];
        for &h in &TIE_BREAK[1..] {
            if log_raw[h.index()] > log_raw[predicted.index()] {
                predicted = h;
            }
        }
        Posterior { log_raw, predicted }
    }

    pub fn raw(&self) -> [f64; 3] {
        self.log_raw.map(f64::exp)
    }

    /// Raw values rescaled to sum to one.
    pub fn normalized(&self) -> [f64; 3] {
        let m = self.log_raw.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if m == f64::NEG_INFINITY {
            return [1.0 / 3.0; 3];
        }
        let e = self.log_raw.map(|l| (l - m).exp());
        let z: f64 = e.iter().sum();
        e.map(|x| x / z)
    }

    pub fn get(&self, h: Intention) -> f64 {
        self.log_raw[h.index()].exp()
    }
}

pub fn predict(model: &impl TripleProbability, e: &EvidenceSet) -> Result<Posterior, BayesError> {
    let mut log_raw = [0.0; 3];
    for h in Intention::ALL {
        log_raw[h.index()] = log_posterior(model, e, h)?;
    }
    Ok(Posterior::from_log(log_raw))
}

pub fn predict_frame(model: &impl TripleProbability, lf: &LinguisticFrame) -> Result<Posterior, BayesError> {
    predict(model, &EvidenceSet::from_frame(lf))
}

/// Empirical triple probabilities from training frames: the frequency
/// reading of each reified triple.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrequencyModel {
    pub total: u64,
    /// Frames per intention.
    pub intention: [u64; 3],
    /// Frames per `(category, intention)`, category in [`Category::all`] order.
    pub joint: Vec<[u64; 3]>,
}

fn category_position(c: Category) -> usize {
    Category::all().position(|x| x == c).expect("listed category")
}

impl FrequencyModel {
    pub fn fit<'a>(frames: impl IntoIterator<Item = &'a LinguisticFrame>) -> Self {
        let mut m = FrequencyModel {
            joint: vec![[0; 3]; Category::all().count()],
            ..Default::default()
        };
        for lf in frames {
            let h = lf.intention.index();
            m.total += 1;
            m.intention[h] += 1;
            for &c in &lf.categories {
                m.joint[category_position(c)][h] += 1;
            }
        }
        m
    }

    fn category_count(&self, c: Category) -> u64 {
        self.joint[category_position(c)].iter().sum()
    }
}

fn ln_ratio(num: u64, den: u64, what: impl FnOnce() -> String) -> Result<f64, BayesError> {
    if den == 0 {
        return Err(BayesError::ZeroCount(what()));
    }
    Ok((num as f64).ln() - (den as f64).ln())
}

impl TripleProbability for FrequencyModel {
    fn log_probability(&self, t: &Triple) -> Result<f64, BayesError> {
        match (t.subject, t.predicate, t.object) {
            (Entity::Vehicle, Relation::IntentionIs, Entity::Intention(h)) => {
                ln_ratio(self.intention[h.index()], self.total, || "corpus".into())
            }
            (Entity::Category(c), Relation::IntentionIs, Entity::Intention(h)) => ln_ratio(
                self.joint[category_position(c)][h.index()],
                self.intention[h.index()],
                || h.to_string(),
            ),
            (Entity::Vehicle, r, Entity::Category(c)) if r == c.relation() => {
                ln_ratio(self.category_count(c), self.total, || "corpus".into())
            }
            _ => Err(BayesError::UnsupportedTriple(t.to_string())),
        }
    }
}

/// Naive-Bayes posterior straight from counts, without log space:
/// `(n_h / N) · Π (n_{e_i,h} / n_h) / Π (n_{e_i} / N)`.
pub fn count_oracle_posterior(frames: &[LinguisticFrame], e: &EvidenceSet, h: Intention) -> Result<f64, BayesError> {
    let n = frames.len();
    let with_h: Vec<&LinguisticFrame> = frames.iter().filter(|f| f.intention == h).collect();
    if n == 0 {
        return Err(BayesError::ZeroCount("corpus".into()));
    }
    if with_h.is_empty() {
        return Err(BayesError::ZeroCount(h.to_string()));
    }
    let has = |f: &LinguisticFrame, c: Category| f.categories[c.slot_index()] == c;
    let mut value = with_h.len() as f64 / n as f64;
    for &c in e.categories() {
        let joint = with_h.iter().filter(|f| has(f, c)).count();
        let marginal = frames.iter().filter(|f| has(f, c)).count();
        if marginal == 0 {
            return Err(BayesError::ZeroCount(c.name()));
        }
        value *= joint as f64 / with_h.len() as f64;
        value /= marginal as f64 / n as f64;
    }
    Ok(value)
}

/// One JSON line per predicted frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub child_id: ChildId,
    pub raw: IntentionValues,
    pub normalized: IntentionValues,
    pub predicted: Intention,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub latency_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntentionValues {
    #[serde(rename = "LLC")]
    pub llc: f64,
    #[serde(rename = "LK")]
    pub lk: f64,
    #[serde(rename = "RLC")]
    pub rlc: f64,
}

impl From<[f64; 3]> for IntentionValues {
    fn from(v: [f64; 3]) -> Self {
        IntentionValues {
            llc: v[Intention::Llc.index()],
            lk: v[Intention::Lk.index()],
            rlc: v[Intention::Rlc.index()],
        }
    }
}

impl PredictionRecord {
    pub fn new(child_id: ChildId, p: &Posterior, latency_s: Option<f64>) -> Self {
        PredictionRecord {
            child_id,
            raw: p.raw().into(),
            normalized: p.normalized().into(),
            predicted: p.predicted,
            latency_s,
        }
    }
}

/// Outcome of [`oracle_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSuiteReport {
    pub seed: u64,
    pub corpora: usize,
    pub comparisons: usize,
    /// Largest `|posterior - oracle| / max(1, |oracle|)`.
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Evidence sets probed per corpus.
const ORACLE_QUERIES: usize = 10;

/// Random frames in which every `(category, intention)` pair occurs, so
/// no count the posterior divides by is zero. `n_frames` is raised to the
/// 63 covering frames when smaller.
pub fn random_covering_corpus(rng: &mut impl Rng, n_frames: usize) -> Vec<LinguisticFrame> {
    let by_slot: Vec<Vec<Category>> = (0..7)
        .map(|slot| Category::all().filter(|c| c.slot_index() == slot).collect())
        .collect();
    let mut next_id = 0u64;
    let mut random_frame = |rng: &mut dyn rand::RngCore, intention: Intention| {
        let mut categories = LinguisticFrame::neutral_categories();
        for (slot, choices) in by_slot.iter().enumerate() {
            categories[slot] = choices[rng.gen_range(0..choices.len())];
        }
        next_id += 1;
        LinguisticFrame {
            child_id: ChildId(next_id),
            categories,
            intention,
        }
    };
    let mut frames = Vec::new();
    for h in Intention::ALL {
        for c in Category::all() {
            let mut f = random_frame(rng, h);
            f.categories[c.slot_index()] = c;
            frames.push(f);
        }
    }
    while frames.len() < n_frames {
        let h = Intention::ALL[rng.gen_range(0..3)];
        frames.push(random_frame(rng, h));
    }
    frames.shuffle(rng);
    frames
}

/// Compare the log-space posterior with frequency-backed factors against
/// [`count_oracle_posterior`] on `corpora` random covering corpora of at
/// most `max_frames` frames each.
pub fn oracle_suite(
    seed: u64,
    corpora: usize,
    max_frames: usize,
    tolerance: f64,
) -> Result<OracleSuiteReport, BayesError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    let mut comparisons = 0;
    for _ in 0..corpora {
        let n = rng.gen_range(63..=max_frames.max(63));
        let frames = random_covering_corpus(&mut rng, n);
        let model = FrequencyModel::fit(&frames);
        for _ in 0..ORACLE_QUERIES {
            let base = &frames[rng.gen_range(0..frames.len())];
            let cats: Vec<Category> = base.categories.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
            let e = EvidenceSet::new(cats)?;
            for h in Intention::ALL {
                let got = posterior(&model, &e, h)?;
                let want = count_oracle_posterior(&frames, &e, h)?;
                max_error = max_error.max((got - want).abs() / want.abs().max(1.0));
                comparisons += 1;
            }
        }
    }
    Ok(OracleSuiteReport {
        seed,
        corpora,
        comparisons,
        max_error,
        tolerance,
        passed: max_error <= tolerance,
    })
}
