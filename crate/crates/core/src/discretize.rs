//! Numeric features to linguistic categories.
//!
//! Lateral velocity and acceleration use a central band `μ ± 2σ` fitted on
//! lane-keeping frames; values below the band are "left", above it "right".
//! TTC uses fixed risk bins: `[0, 4]` high, `(4, 10)` medium, anything else
//! (negative, `>= 10`, absent) low.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::NumericFrame;
use crate::ontology::{Category, ChildId, Intention, Lateral, NeighborSlot, Risk};

pub const TTC_HIGH_MAX: f64 = 4.0;
pub const TTC_MEDIUM_MAX: f64 = 10.0;
/// Half-width of the central band in standard deviations.
pub const BAND_SIGMAS: f64 = 2.0;

#[derive(Debug, Error)]
pub enum DiscretizeError {
    #[error("degenerate {feature} distribution over {count} lane-keeping samples (sigma {sigma})")]
    DegenerateDistribution {
        feature: &'static str,
        count: usize,
        sigma: f64,
    },
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("io failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed threshold file {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl DiscretizeError {
    pub fn name(&self) -> &'static str {
        match self {
            DiscretizeError::DegenerateDistribution { .. } => "DegenerateDistribution",
            DiscretizeError::InvalidThresholds(_) => "InvalidThresholds",
            DiscretizeError::Io { .. } => "IoFailure",
            DiscretizeError::Json { .. } => "MalformedInput",
        }
    }
}

/// Category boundaries; serialized as the threshold sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    /// `[left_bound, right_bound]`
    pub lat_velocity: [f64; 2],
    pub lat_acceleration: [f64; 2],
    /// `[high_max, medium_max]`
    pub ttc: [f64; 2],
}

impl ThresholdSet {
    pub fn new(lat_velocity: [f64; 2], lat_acceleration: [f64; 2]) -> Result<Self, DiscretizeError> {
        let th = ThresholdSet {
            lat_velocity,
            lat_acceleration,
            ttc: [TTC_HIGH_MAX, TTC_MEDIUM_MAX],
        };
        th.validate()?;
        Ok(th)
    }

    pub fn validate(&self) -> Result<(), DiscretizeError> {
        for (name, [lo, hi]) in [
            ("lat_velocity", self.lat_velocity),
            ("lat_acceleration", self.lat_acceleration),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(DiscretizeError::InvalidThresholds(format!(
                    "{name} needs finite lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        let [high, medium] = self.ttc;
        if !(high > 0.0 && high < medium && medium.is_finite()) {
            return Err(DiscretizeError::InvalidThresholds(format!(
                "ttc needs 0 < high_max < medium_max, got [{high}, {medium}]"
            )));
        }
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<(), DiscretizeError> {
        let text = serde_json::to_string_pretty(self).expect("thresholds serialize");
        fs::write(path, text + "\n").map_err(|source| DiscretizeError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read_json(path: &Path) -> Result<Self, DiscretizeError> {
        let text = fs::read_to_string(path).map_err(|source| DiscretizeError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let th: ThresholdSet = serde_json::from_str(&text).map_err(|source| DiscretizeError::Json {
            path: path.display().to_string(),
            source,
        })?;
        th.validate()?;
        Ok(th)
    }
}

/// `(μ − 2σ, μ + 2σ)` over the lane-keeping samples, σ with Bessel's correction.
pub fn fit_kinematic_thresholds(values: &[f64], labels: &[Intention]) -> Result<(f64, f64), DiscretizeError> {
    fit_band(
        "lateral",
        values
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == Intention::Lk)
            .map(|(&v, _)| v),
    )
}

fn fit_band(feature: &'static str, lk: impl Iterator<Item = f64> + Clone) -> Result<(f64, f64), DiscretizeError> {
    let count = lk.clone().count();
    let degenerate = |sigma| DiscretizeError::DegenerateDistribution { feature, count, sigma };
    if count < 2 {
        return Err(degenerate(0.0));
    }
    let mean = lk.clone().sum::<f64>() / count as f64;
    let var = lk.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64;
    let sigma = var.sqrt();
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(degenerate(sigma));
    }
    Ok((mean - BAND_SIGMAS * sigma, mean + BAND_SIGMAS * sigma))
}

/// Fit both kinematic bands on the lane-keeping frames of a training set.
pub fn fit_thresholds(frames: &[NumericFrame]) -> Result<ThresholdSet, DiscretizeError> {
    let lk = || frames.iter().filter(|f| f.intention == Intention::Lk);
    let (vl, vh) = fit_band("lat_velocity", lk().map(|f| f.lat_velocity))?;
    let (al, ah) = fit_band("lat_acceleration", lk().map(|f| f.lat_acceleration))?;
    ThresholdSet::new([vl, vh], [al, ah])
}

pub fn bin_lateral(value: f64, [lo, hi]: [f64; 2]) -> Lateral {
    if value < lo {
        Lateral::Left
    } else if value > hi {
        Lateral::Right
    } else {
        Lateral::Straight
    }
}

pub fn bin_risk(ttc: Option<f64>, [high_max, medium_max]: [f64; 2]) -> Risk {
    match ttc {
        Some(t) if (0.0..=high_max).contains(&t) => Risk::High,
        Some(t) if t > high_max && t < medium_max => Risk::Medium,
        _ => Risk::Low,
    }
}

/// Risk category of `ttc` for one neighbor slot.
pub fn bin_ttc(ttc: Option<f64>, slot: NeighborSlot, th: &ThresholdSet) -> Category {
    Category::Ttc(slot, bin_risk(ttc, th.ttc))
}

/// A frame expressed as one category per evidence concept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinguisticFrame {
    pub child_id: ChildId,
    /// Indexed by [`Category::slot_index`].
    pub categories: [Category; 7],
    pub intention: Intention,
}

impl LinguisticFrame {
    /// Evidence categories with every slot neutral.
    pub fn neutral_categories() -> [Category; 7] {
        let mut c = [Category::LatVelocity(Lateral::Straight); 7];
        c[1] = Category::LatAcceleration(Lateral::Straight);
        for slot in NeighborSlot::ALL {
            c[2 + slot.index()] = Category::Ttc(slot, Risk::Low);
        }
        c
    }

    /// Every slot holds a category of its own concept.
    pub fn is_well_formed(&self) -> bool {
        self.categories.iter().enumerate().all(|(i, c)| c.slot_index() == i)
    }
}

pub fn discretize_categories(nf: &NumericFrame, th: &ThresholdSet) -> [Category; 7] {
    let mut c = LinguisticFrame::neutral_categories();
    c[0] = Category::LatVelocity(bin_lateral(nf.lat_velocity, th.lat_velocity));
    c[1] = Category::LatAcceleration(bin_lateral(nf.lat_acceleration, th.lat_acceleration));
    for slot in NeighborSlot::ALL {
        c[2 + slot.index()] = bin_ttc(nf.ttc(slot), slot, th);
    }
    c
}

pub fn discretize_frame(nf: &NumericFrame, th: &ThresholdSet) -> LinguisticFrame {
    LinguisticFrame {
        child_id: nf.child_id,
        categories: discretize_categories(nf, th),
        intention: nf.intention,
    }
}
