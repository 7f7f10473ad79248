//! Filtered link-prediction ranking.

use rustc_hash::FxHashMap as HashMap;

use serde::{Deserialize, Serialize};

use super::{EmbeddingModel, KgeError, Scorer};
use crate::kg_builder::IndexedTriple;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub mrr: f64,
    pub hits_at_1: f64,
    pub hits_at_3: f64,
    pub hits_at_10: f64,
    pub mean_rank: f64,
    /// Two ranks (subject and object side) per evaluated triple.
    pub n_ranks: usize,
}

impl RankReport {
    pub fn from_ranks(ranks: &[f64]) -> Self {
        let n = ranks.len() as f64;
        let hits = |k: f64| ranks.iter().filter(|&&r| r <= k).count() as f64 / n;
        RankReport {
            mrr: ranks.iter().map(|r| 1.0 / r).sum::<f64>() / n,
            hits_at_1: hits(1.0),
            hits_at_3: hits(3.0),
            hits_at_10: hits(10.0),
            mean_rank: ranks.iter().sum::<f64>() / n,
            n_ranks: ranks.len(),
        }
    }
}

/// Known positives keyed by `(subject, relation)` and `(relation, object)`.
#[derive(Debug, Clone, Default)]
pub struct FilterIndex {
    tails: HashMap<(u32, u32), Vec<u32>>,
    heads: HashMap<(u32, u32), Vec<u32>>,
}

impl FilterIndex {
    pub fn new<'a>(sets: impl IntoIterator<Item = &'a [IndexedTriple]>) -> Self {
        let mut f = FilterIndex::default();
        for set in sets {
            for &[h, r, t] in set {
                f.tails.entry((h, r)).or_default().push(t);
                f.heads.entry((r, t)).or_default().push(h);
            }
        }
        for v in f.tails.values_mut().chain(f.heads.values_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        f
    }

    pub fn contains(&self, [h, r, t]: IndexedTriple) -> bool {
        self.tails.get(&(h, r)).is_some_and(|v| v.binary_search(&t).is_ok())
    }

    pub fn len(&self) -> usize {
        self.tails.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty()
    }
}

/// Scores of every entity in the object slot of `(h, r, ?)` (`object_side`)
/// or the subject slot of `(?, r, t)`.
pub(crate) fn score_all(model: &EmbeddingModel, [h, r, t]: IndexedTriple, object_side: bool, out: &mut Vec<f64>) {
    let w = model.width();
    let rel = model.relation_row(r as usize);
    let anchor = model.entity_row(if object_side { h } else { t } as usize);
    let mut q = vec![0.0; w];
    out.clear();
    match model.scorer {
        Scorer::TransE => {
            // object: -||(h + r) - e||, subject: -||e - (t - r)||
            for j in 0..w {
                q[j] = if object_side {
                    anchor[j] + rel[j]
                } else {
                    anchor[j] - rel[j]
                };
            }
            let p = model.norm_order;
            out.extend(model.entity_emb.chunks_exact(w).map(|e| {
                if p == 1 {
                    -q.iter().zip(e).map(|(a, b)| (a - b).abs()).sum::<f64>()
                } else {
                    -q.iter().zip(e).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
                }
            }));
        }
        Scorer::ComplEx => {
            let k = model.k;
            for j in 0..k {
                let (ar, ai, rr, ri) = (anchor[j], anchor[k + j], rel[j], rel[k + j]);
                if object_side {
                    // Re((h r) conj(e)) = Re(hr) e_re + Im(hr) e_im
                    q[j] = ar * rr - ai * ri;
                    q[k + j] = ar * ri + ai * rr;
                } else {
                    // Re(e c), c = r conj(t): e_re c_re - e_im c_im
                    q[j] = rr * ar + ri * ai;
                    q[k + j] = -(ri * ar - rr * ai);
                }
            }
            out.extend(
                model
                    .entity_emb
                    .chunks_exact(w)
                    .map(|e| q.iter().zip(e).map(|(a, b)| a * b).sum::<f64>()),
            );
        }
    }
}

/// Filtered rank with ties resolved to the mean position of the tied set.
fn filtered_rank(scores: &[f64], truth: u32, known: Option<&Vec<u32>>) -> f64 {
    let s = scores[truth as usize];
    let (mut greater, mut ties) = (0usize, 0usize);
    for (i, &x) in scores.iter().enumerate() {
        if x > s {
            greater += 1;
        } else if x == s && i != truth as usize {
            ties += 1;
        }
    }
    for &e in known.into_iter().flatten() {
        if e == truth {
            continue;
        }
        let x = scores[e as usize];
        if x > s {
            greater -= 1;
        } else if x == s {
            ties -= 1;
        }
    }
    1.0 + greater as f64 + ties as f64 / 2.0
}

/// Subject-side and object-side filtered ranks of each triple, interleaved.
pub fn filtered_ranks(
    model: &EmbeddingModel,
    triples: &[IndexedTriple],
    filter: &FilterIndex,
) -> Result<Vec<f64>, KgeError> {
    let mut ranks = Vec::with_capacity(2 * triples.len());
    let mut buf = Vec::with_capacity(model.n_entities());
    for &ids in triples {
        model.score_ids(ids)?;
        let [h, r, t] = ids;
        score_all(model, ids, false, &mut buf);
        if buf.iter().any(|x| !x.is_finite()) {
            return Err(KgeError::NonFiniteScore);
        }
        ranks.push(filtered_rank(&buf, h, filter.heads.get(&(r, t))));
        score_all(model, ids, true, &mut buf);
        ranks.push(filtered_rank(&buf, t, filter.tails.get(&(h, r))));
    }
    Ok(ranks)
}

pub fn rank_metrics(
    model: &EmbeddingModel,
    triples: &[IndexedTriple],
    filter: &FilterIndex,
) -> Result<RankReport, KgeError> {
    if triples.is_empty() {
        return Err(KgeError::EmptyCorpus);
    }
    Ok(RankReport::from_ranks(&filtered_ranks(model, triples, filter)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{ChildId, Entity};
    use rand::{Rng, SeedableRng};

    fn entities(n: u64) -> Vec<Entity> {
        (0..n).map(|i| Entity::Child(ChildId(i))).collect()
    }

    #[test]
    fn fast_scores_match_direct() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for scorer in [Scorer::TransE, Scorer::ComplEx] {
            for p in [1, 2] {
                let m = EmbeddingModel::random(scorer, entities(12), 5, p, &mut rng);
                let ids = [3, 4, 7];
                let mut buf = Vec::new();
                score_all(&m, ids, true, &mut buf);
                for e in 0..12u32 {
                    assert!((buf[e as usize] - m.score_unchecked([3, 4, e])).abs() < 1e-12);
                }
                score_all(&m, ids, false, &mut buf);
                for e in 0..12u32 {
                    assert!((buf[e as usize] - m.score_unchecked([e, 4, 7])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tie_rank_is_mean_position() {
        // truth tied with two others, one strictly better
        let scores = [0.5, 0.2, 0.2, 0.2, 0.0];
        assert_eq!(filtered_rank(&scores, 2, None), 3.0);
        // filtering the better one and one tie
        assert_eq!(filtered_rank(&scores, 2, Some(&vec![0, 1, 2])), 1.5);
        assert_eq!(filtered_rank(&[0.0; 4], 0, None), 2.5);
    }

    #[test]
    fn perfect_ranker() {
        // TransE 1-D chain: entity i at position i, relation shifts by +1
        let n = 10;
        let mut ent = vec![0.0; n];
        for (i, x) in ent.iter_mut().enumerate() {
            *x = 10.0 * i as f64;
        }
        let mut rel = vec![0.0; 9];
        rel[0] = 10.0;
        let m = EmbeddingModel::from_parts(Scorer::TransE, 1, 1, entities(n as u64), ent, rel);
        let triples: Vec<IndexedTriple> = (0..n as u32 - 1).map(|i| [i, 0, i + 1]).collect();
        let report = rank_metrics(&m, &triples, &FilterIndex::new([triples.as_slice()])).unwrap();
        assert_eq!(report.mrr, 1.0);
        assert_eq!(report.hits_at_1, 1.0);
        assert_eq!(report.mean_rank, 1.0);
    }

    #[test]
    fn random_ranker_mrr() {
        // Each rank is uniform on 1..=n, so E[MRR] = H_n / n.
        let n = 40usize;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let triples: Vec<IndexedTriple> = (0..2000)
            .map(|_| {
                [
                    rng.gen_range(0..n as u32),
                    rng.gen_range(0..9),
                    rng.gen_range(0..n as u32),
                ]
            })
            .collect();
        // independent embeddings per query keep the ranks uniform
        let mut total = 0.0;
        let mut count = 0;
        for chunk in triples.chunks(20) {
            let m = EmbeddingModel::random(Scorer::TransE, entities(n as u64), 8, 1, &mut rng);
            let r = filtered_ranks(&m, chunk, &FilterIndex::default()).unwrap();
            total += r.iter().map(|x| 1.0 / x).sum::<f64>();
            count += r.len();
        }
        let mrr = total / count as f64;
        let expected = (1..=n).map(|i| 1.0 / i as f64).sum::<f64>() / n as f64;
        // per-rank sd of 1/rank is below 0.2; 4000 ranks with query correlation
        assert!((mrr - expected).abs() < 0.03, "mrr {mrr} vs {expected}");
    }

    #[test]
    fn hits_are_ordered() {
        let r = RankReport::from_ranks(&[1.0, 2.5, 4.0, 11.0, 3.0]);
        assert!(r.hits_at_1 <= r.hits_at_3 && r.hits_at_3 <= r.hits_at_10);
        assert_eq!(r.hits_at_3, 0.6);
        assert!((r.mrr - (1.0 + 0.4 + 0.25 + 1.0 / 11.0 + 1.0 / 3.0) / 5.0).abs() < 1e-15);
    }
}
