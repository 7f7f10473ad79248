//! Reified triple emission, splits and the triples CSV.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::discretize::LinguisticFrame;
use crate::ingest::NumericFrame;
use crate::ontology::{reify_evidence, Entity, Intention, OntologyError, Relation, Triple};

pub const TRIPLES_PER_FRAME: usize = 9;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.8;
pub const DEFAULT_VALID_SIZE: usize = 2000;
/// Shuffled passes tried by [`split_no_unseen`] before giving up.
const SPLIT_ATTEMPTS: u64 = 16;

#[derive(Debug, Error)]
pub enum KgError {
    #[error("need at least 2 tracks to split, got {0}")]
    TooFewTracks(usize),
    #[error("train fraction {fraction} leaves no test tracks out of {tracks}")]
    EmptyTestSet { tracks: usize, fraction: f64 },
    #[error("train fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("cannot hold out {requested} triples without unseen entities (found {found} of {total})")]
    InfeasibleSplit {
        requested: usize,
        found: usize,
        total: usize,
    },
    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("io failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

impl KgError {
    pub fn name(&self) -> &'static str {
        match self {
            KgError::TooFewTracks(_) => "TooFewTracks",
            KgError::EmptyTestSet { .. } => "EmptyTestSet",
            KgError::InvalidFraction(_) => "InvalidFraction",
            KgError::InfeasibleSplit { .. } => "InfeasibleSplit",
            KgError::MalformedRow { .. } => "MalformedRow",
            KgError::Io { .. } => "IoFailure",
            KgError::Ontology(e) => e.name(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        KgError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// `[subject, relation, object]` dense ids.
pub type IndexedTriple = [u32; 3];

/// Triples plus gap-free dense indices.
///
/// Entity ids start with the 25 schema entities in [`Entity::schema_entities`]
/// order, followed by child ids in order of first appearance. Relation ids
/// follow [`Relation::ALL`].
#[derive(Debug, Clone, PartialEq)]
pub struct TripleCorpus {
    pub triples: Vec<Triple>,
    entities: Vec<Entity>,
    entity_ids: HashMap<Entity, u32>,
}

impl Default for TripleCorpus {
    fn default() -> Self {
        let mut c = TripleCorpus {
            triples: Vec::new(),
            entities: Vec::new(),
            entity_ids: HashMap::new(),
        };
        for e in Entity::schema_entities() {
            c.intern(e);
        }
        c
    }
}

impl TripleCorpus {
    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut c = TripleCorpus::default();
        for t in triples {
            c.push(t);
        }
        c
    }

    pub fn from_frames<'a>(frames: impl IntoIterator<Item = &'a LinguisticFrame>) -> Self {
        let mut c = TripleCorpus::default();
        for lf in frames {
            for t in emit_frame_triples(lf) {
                c.push(t);
            }
        }
        c
    }

    pub fn push(&mut self, t: Triple) {
        self.intern(t.subject);
        self.intern(t.object);
        self.triples.push(t);
    }

    fn intern(&mut self, e: Entity) -> u32 {
        if let Some(&id) = self.entity_ids.get(&e) {
            return id;
        }
        let id = self.entities.len() as u32;
        self.entities.push(e);
        self.entity_ids.insert(e, id);
        id
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn entity_id(&self, e: &Entity) -> Option<u32> {
        self.entity_ids.get(e).copied()
    }

    pub fn relation_id(r: Relation) -> u32 {
        Relation::ALL.iter().position(|&x| x == r).expect("relation listed") as u32
    }

    pub fn indexed(&self, t: &Triple) -> Option<IndexedTriple> {
        Some([
            self.entity_id(&t.subject)?,
            Self::relation_id(t.predicate),
            self.entity_id(&t.object)?,
        ])
    }

    /// All triples as dense ids.
    pub fn indexed_triples(&self) -> Vec<IndexedTriple> {
        self.triples
            .iter()
            .map(|t| self.indexed(t).expect("corpus triples are interned"))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// The nine reified triples of one frame, in fixed order.
pub fn emit_frame_triples(lf: &LinguisticFrame) -> [Triple; TRIPLES_PER_FRAME] {
    let child = Entity::Child(lf.child_id);
    let mut out = [Triple::new(Entity::Vehicle, Relation::HasChild, child); TRIPLES_PER_FRAME];
    out[1] = Triple::new(child, Relation::IntentionIs, lf.intention);
    for (i, &c) in lf.categories.iter().enumerate() {
        out[2 + i] = reify_evidence(c, child).expect("child subjects carry every evidence relation");
    }
    out
}

/// First `ceil(fraction * n)` tracks train, the rest test.
pub fn split_by_tracks<T: Clone>(tracks: &[T], train_fraction: f64) -> Result<(Vec<T>, Vec<T>), KgError> {
    if !(train_fraction > 0.0 && train_fraction <= 1.0) {
        return Err(KgError::InvalidFraction(train_fraction));
    }
    if tracks.len() < 2 {
        return Err(KgError::TooFewTracks(tracks.len()));
    }
    // guard against 0.8 * 60 = 48.000000000000007
    let n_train = ((train_fraction * tracks.len() as f64) - 1e-9).ceil() as usize;
    let n_train = n_train.clamp(1, tracks.len());
    if n_train == tracks.len() {
        return Err(KgError::EmptyTestSet {
            tracks: tracks.len(),
            fraction: train_fraction,
        });
    }
    Ok((tracks[..n_train].to_vec(), tracks[n_train..].to_vec()))
}

/// [`split_by_tracks`] over the sorted recording ids of `frames`; every
/// recording lands wholly on one side.
pub fn split_frames_by_recording(
    frames: &[NumericFrame],
    train_fraction: f64,
) -> Result<(Vec<NumericFrame>, Vec<NumericFrame>), KgError> {
    let ids: BTreeSet<u32> = frames.iter().map(|f| f.recording_id).collect();
    let ids: Vec<u32> = ids.into_iter().collect();
    let (train_ids, _) = split_by_tracks(&ids, train_fraction)?;
    let train_ids: BTreeSet<u32> = train_ids.into_iter().collect();
    Ok(frames
        .iter()
        .cloned()
        .partition(|f| train_ids.contains(&f.recording_id)))
}

/// Hold out `n_valid` triples so every entity and relation of the held-out
/// set still occurs in the remainder. Both outputs keep corpus order.
pub fn split_no_unseen(triples: &[Triple], n_valid: usize, seed: u64) -> Result<(Vec<Triple>, Vec<Triple>), KgError> {
    if n_valid == 0 {
        return Ok((triples.to_vec(), Vec::new()));
    }
    let infeasible = |found| KgError::InfeasibleSplit {
        requested: n_valid,
        found,
        total: triples.len(),
    };
    if n_valid >= triples.len() {
        return Err(infeasible(0));
    }
    let corpus = TripleCorpus::from_triples(triples.iter().copied());
    let ids = corpus.indexed_triples();
    let n_rel = Relation::ALL.len();
    let mut ent_count = vec![0usize; corpus.entities().len()];
    let mut rel_count = vec![0usize; n_rel];
    for t in &ids {
        ent_count[t[0] as usize] += 1;
        ent_count[t[2] as usize] += 1;
        rel_count[t[1] as usize] += 1;
    }

    let mut best = 0;
    for attempt in 0..SPLIT_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.shuffle(&mut rng);
        let mut ents = ent_count.clone();
        let mut rels = rel_count.clone();
        let mut chosen = vec![false; ids.len()];
        let mut found = 0;
        for i in order {
            let [s, r, o] = ids[i].map(|x| x as usize);
            // each count must stay >= 1; a self-loop holds two occurrences
            let ents_ok = if s == o {
                ents[s] >= 3
            } else {
                ents[s] >= 2 && ents[o] >= 2
            };
            if !(ents_ok && rels[r] >= 2) {
                continue;
            }
            ents[s] -= 1;
            ents[o] -= 1;
            rels[r] -= 1;
            chosen[i] = true;
            found += 1;
            if found == n_valid {
                let (mut train, mut valid) = (Vec::with_capacity(ids.len() - n_valid), Vec::with_capacity(n_valid));
                for (t, c) in triples.iter().zip(&chosen) {
                    if *c {
                        valid.push(*t);
                    } else {
                        train.push(*t);
                    }
                }
                return Ok((train, valid));
            }
        }
        best = best.max(found);
    }
    Err(infeasible(best))
}

/// Per-class frame strides used to thin the training frames fed to the KG.
///
/// A frame is kept when its frame number is a multiple of the stride of its
/// label. Lane-change windows and lane keeping are thinned separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FrameSampling {
    pub lane_change_stride: u32,
    pub lane_keep_stride: u32,
}

impl Default for FrameSampling {
    fn default() -> Self {
        FrameSampling {
            lane_change_stride: 1,
            lane_keep_stride: 1,
        }
    }
}

impl FrameSampling {
    pub fn keeps(&self, nf: &NumericFrame) -> bool {
        let stride = match nf.intention {
            Intention::Lk => self.lane_keep_stride,
            Intention::Llc | Intention::Rlc => self.lane_change_stride,
        };
        nf.frame.is_multiple_of(stride.max(1))
    }

    pub fn apply<'a>(&self, frames: &'a [NumericFrame]) -> Vec<&'a NumericFrame> {
        frames.iter().filter(|f| self.keeps(f)).collect()
    }
}

pub fn write_triples_csv(triples: &[Triple], path: &Path) -> Result<(), KgError> {
    let file = File::create(path).map_err(|e| KgError::io(path, e))?;
    let mut w = BufWriter::new(file);
    for t in triples {
        writeln!(w, "{},{},{}", t.subject, t.predicate, t.object).map_err(|e| KgError::io(path, e))?;
    }
    w.flush().map_err(|e| KgError::io(path, e))
}

pub fn read_triples_csv(path: &Path) -> Result<TripleCorpus, KgError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => KgError::io(path, io),
            other => KgError::MalformedRow {
                line: 0,
                message: format!("{other:?}"),
            },
        })?;
    let mut corpus = TripleCorpus::default();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 1;
        let record = record.map_err(|e| KgError::MalformedRow {
            line,
            message: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(KgError::MalformedRow {
                line,
                message: format!("expected 3 columns, found {}", record.len()),
            });
        }
        let t = Triple::parse(&record[0], &record[1], &record[2]).map_err(|e| KgError::MalformedRow {
            line,
            message: e.to_string(),
        })?;
        corpus.push(t);
    }
    Ok(corpus)
}
