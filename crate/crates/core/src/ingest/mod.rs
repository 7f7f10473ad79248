//! Vehicle kinematics to numeric feature frames.
//!
//! Recordings come either from HighD-format CSV files ([`highd`]) or from the
//! rule-based traffic generator ([`synthetic`]). Both produce [`Recording`]s
//! in the recording's own image frame (x along the road, y pointing down,
//! HighD lane numbering); [`extract_numeric_frames`] normalizes everything to
//! the driver's point of view.

pub mod highd;
pub mod synthetic;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{ChildId, Intention, NeighborSlot};

pub const HIGHD_FRAME_RATE: f64 = 25.0;
pub const DEFAULT_LABEL_WINDOW: f64 = 4.0;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("non-positive gap {gap} m")]
    NonPositiveGap { gap: f64 },
    #[error("recording {recording}: vehicle {track_id} frame {frame} references missing {slot:?} neighbor {neighbor}")]
    DanglingNeighbor {
        recording: u32,
        track_id: u32,
        frame: u32,
        slot: NeighborSlot,
        neighbor: u32,
    },
    #[error("invalid rule parameters: {0}")]
    InvalidRuleParams(String),
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("io failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv failure on {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl IngestError {
    pub fn name(&self) -> &'static str {
        match self {
            IngestError::NonPositiveGap { .. } => "NonPositiveGap",
            IngestError::DanglingNeighbor { .. } => "DanglingNeighbor",
            IngestError::InvalidRuleParams(_) => "InvalidRuleParams",
            IngestError::Format { .. } => "MalformedInput",
            IngestError::Io { .. } => "IoFailure",
            IngestError::Csv { .. } => "MalformedInput",
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IngestError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Io when the underlying failure is a read or write error.
    pub(crate) fn csv(path: &Path, source: csv::Error) -> Self {
        if source.is_io_error() {
            if let csv::ErrorKind::Io(io) = source.into_kind() {
                return IngestError::io(path, io);
            }
            unreachable!("is_io_error implies an Io kind");
        }
        IngestError::Csv {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Driving direction in the recording frame, numbered as in HighD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DrivingDirection {
    /// HighD direction 1: upper carriageway, driving toward decreasing x.
    Negative,
    /// HighD direction 2: lower carriageway, driving toward increasing x.
    Positive,
}

impl DrivingDirection {
    pub fn from_highd(code: i64) -> Option<Self> {
        match code {
            1 => Some(DrivingDirection::Negative),
            2 => Some(DrivingDirection::Positive),
            _ => None,
        }
    }

    pub fn highd_code(self) -> u8 {
        match self {
            DrivingDirection::Negative => 1,
            DrivingDirection::Positive => 2,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            DrivingDirection::Negative => DrivingDirection::Positive,
            DrivingDirection::Positive => DrivingDirection::Negative,
        }
    }

    /// +1 when the driver moves along +x.
    pub fn longitudinal_sign(self) -> f64 {
        match self {
            DrivingDirection::Negative => -1.0,
            DrivingDirection::Positive => 1.0,
        }
    }

    /// +1 when the driver's left points along +y (y grows downward in the image).
    pub fn leftward_sign(self) -> f64 {
        match self {
            DrivingDirection::Negative => 1.0,
            DrivingDirection::Positive => -1.0,
        }
    }

    /// Lane id change of a move to the left; lane ids grow with y.
    pub fn left_lane_step(self) -> i32 {
        self.leftward_sign() as i32
    }
}

/// One vehicle in one frame, in recording coordinates.
///
/// Positions are bounding-box centers. Lateral quantities are along the
/// image y axis; use the `*_rightward` accessors for driver-relative values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub track_id: u32,
    pub frame: u32,
    pub longitudinal_position: f64,
    pub lateral_position: f64,
    pub longitudinal_velocity: f64,
    pub lateral_velocity: f64,
    pub lateral_acceleration: f64,
    pub length: f64,
    pub width: f64,
    pub lane_id: i32,
    pub direction: DrivingDirection,
    /// Indexed by [`NeighborSlot::index`].
    pub neighbors: [Option<u32>; 5],
}

impl VehicleState {
    /// Lateral velocity in the driver's frame, negative toward the left lane.
    pub fn lateral_velocity_rightward(&self) -> f64 {
        -self.lateral_velocity * self.direction.leftward_sign()
    }

    pub fn lateral_acceleration_rightward(&self) -> f64 {
        -self.lateral_acceleration * self.direction.leftward_sign()
    }

    pub fn forward_velocity(&self) -> f64 {
        self.longitudinal_velocity * self.direction.longitudinal_sign()
    }

    pub fn forward_position(&self) -> f64 {
        self.longitudinal_position * self.direction.longitudinal_sign()
    }

    pub fn neighbor(&self, slot: NeighborSlot) -> Option<u32> {
        self.neighbors[slot.index()]
    }
}

/// A HighD recording (a "track" in the dataset's location/session sense).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recording {
    pub id: u32,
    pub frame_rate: f64,
    pub states: Vec<VehicleState>,
}

impl Recording {
    pub fn vehicle_count(&self) -> usize {
        let mut ids: Vec<u32> = self.states.iter().map(|s| s.track_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Rotate the recording by 180 degrees about the road center: x and y are
    /// negated, lane numbering reversed and both driving directions swap.
    pub fn mirrored(&self) -> Recording {
        let max_lane = self.states.iter().map(|s| s.lane_id).max().unwrap_or(0);
        let min_lane = self.states.iter().map(|s| s.lane_id).min().unwrap_or(0);
        let states = self
            .states
            .iter()
            .map(|s| VehicleState {
                longitudinal_position: -s.longitudinal_position,
                lateral_position: -s.lateral_position,
                longitudinal_velocity: -s.longitudinal_velocity,
                lateral_velocity: -s.lateral_velocity,
                lateral_acceleration: -s.lateral_acceleration,
                lane_id: max_lane + min_lane - s.lane_id,
                direction: s.direction.flipped(),
                ..s.clone()
            })
            .collect();
        Recording {
            id: self.id,
            frame_rate: self.frame_rate,
            states,
        }
    }
}

/// Seven numeric features of one vehicle in one frame plus its label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericFrame {
    pub child_id: ChildId,
    pub recording_id: u32,
    pub track_id: u32,
    pub frame: u32,
    /// Driver frame, negative toward the left lane.
    pub lat_velocity: f64,
    /// Driver frame, negative toward the left lane.
    pub lat_acceleration: f64,
    pub ttc_preceding: Option<f64>,
    pub ttc_left_preceding: Option<f64>,
    pub ttc_right_preceding: Option<f64>,
    pub ttc_left_following: Option<f64>,
    pub ttc_right_following: Option<f64>,
    pub intention: Intention,
    pub time_to_crossing: Option<f64>,
}

impl NumericFrame {
    pub fn ttc(&self, slot: NeighborSlot) -> Option<f64> {
        match slot {
            NeighborSlot::Preceding => self.ttc_preceding,
            NeighborSlot::LeftPreceding => self.ttc_left_preceding,
            NeighborSlot::RightPreceding => self.ttc_right_preceding,
            NeighborSlot::LeftFollowing => self.ttc_left_following,
            NeighborSlot::RightFollowing => self.ttc_right_following,
        }
    }

    fn ttc_mut(&mut self, slot: NeighborSlot) -> &mut Option<f64> {
        match slot {
            NeighborSlot::Preceding => &mut self.ttc_preceding,
            NeighborSlot::LeftPreceding => &mut self.ttc_left_preceding,
            NeighborSlot::RightPreceding => &mut self.ttc_right_preceding,
            NeighborSlot::LeftFollowing => &mut self.ttc_left_following,
            NeighborSlot::RightFollowing => &mut self.ttc_right_following,
        }
    }

    /// (recording, vehicle) key.
    pub fn vehicle_key(&self) -> (u32, u32) {
        (self.recording_id, self.track_id)
    }
}

/// TTC with a vehicle ahead: `d / (v_target - v_preceding)`.
///
/// `None` when there is no closing or opening speed at all. Negative values
/// mean the preceding vehicle is pulling away.
pub fn compute_ttc_preceding(gap: f64, v_target: f64, v_preceding: f64) -> Result<Option<f64>, IngestError> {
    ttc(gap, v_target - v_preceding)
}

/// TTC with a vehicle behind: `d / (v_following - v_target)`.
pub fn compute_ttc_following(gap: f64, v_following: f64, v_target: f64) -> Result<Option<f64>, IngestError> {
    ttc(gap, v_following - v_target)
}

fn ttc(gap: f64, closing_speed: f64) -> Result<Option<f64>, IngestError> {
    if gap.is_nan() || gap <= 0.0 {
        return Err(IngestError::NonPositiveGap { gap });
    }
    if closing_speed == 0.0 {
        return Ok(None);
    }
    Ok(Some(gap / closing_speed))
}

/// Bumper-to-bumper distance along the driving direction between `ahead` and `behind`.
pub fn bumper_gap(ahead: &VehicleState, behind: &VehicleState) -> f64 {
    (ahead.forward_position() - behind.forward_position()) - 0.5 * (ahead.length + behind.length)
}

/// Monotone child id source shared across recordings.
#[derive(Debug, Clone, Default)]
pub struct ChildIdCounter {
    next: u64,
}

impl ChildIdCounter {
    pub fn starting_at(next: u64) -> Self {
        ChildIdCounter { next }
    }

    pub fn next_id(&mut self) -> ChildId {
        let id = ChildId(self.next);
        self.next += 1;
        id
    }
}

/// Per-frame label of one vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameLabel {
    pub intention: Intention,
    pub time_to_crossing: Option<f64>,
}

/// Label the frames of a single vehicle from its lane id sequence.
///
/// `states` must be one vehicle, sorted by frame. A lane change observed at
/// frame `T` labels the frames in `[T - window, T)`; overlapping windows go
/// to the nearest upcoming crossing.
pub fn label_intentions(states: &[VehicleState], frame_rate: f64, label_window: f64) -> Vec<FrameLabel> {
    let mut labels = vec![
        FrameLabel {
            intention: Intention::Lk,
            time_to_crossing: None,
        };
        states.len()
    ];
    let window_frames = (label_window * frame_rate).round() as i64;
    let mut crossings = Vec::new();
    for (i, pair) in states.windows(2).enumerate() {
        let delta = pair[1].lane_id - pair[0].lane_id;
        if delta == 0 {
            continue;
        }
        let left = delta.signum() == pair[1].direction.left_lane_step();
        let intention = if left { Intention::Llc } else { Intention::Rlc };
        crossings.push((i + 1, pair[1].frame as i64, intention));
    }
    // later crossings first, so an earlier (nearer) crossing overwrites overlap
    for &(idx, crossing_frame, intention) in crossings.iter().rev() {
        for j in (0..idx).rev() {
            let dt = crossing_frame - states[j].frame as i64;
            if dt > window_frames {
                break;
            }
            labels[j] = FrameLabel {
                intention,
                time_to_crossing: Some(dt as f64 / frame_rate),
            };
        }
    }
    labels
}

/// Per-vehicle frame slices of a recording, sorted by (vehicle, frame).
fn group_by_vehicle(recording: &Recording) -> BTreeMap<u32, Vec<&VehicleState>> {
    let mut by_vehicle: BTreeMap<u32, Vec<&VehicleState>> = BTreeMap::new();
    for s in &recording.states {
        by_vehicle.entry(s.track_id).or_default().push(s);
    }
    for states in by_vehicle.values_mut() {
        states.sort_by_key(|s| s.frame);
    }
    by_vehicle
}

/// One [`NumericFrame`] per vehicle and frame, ordered by (vehicle, frame).
pub fn extract_numeric_frames(
    recording: &Recording,
    label_window: f64,
    ids: &mut ChildIdCounter,
) -> Result<Vec<NumericFrame>, IngestError> {
    let lookup: HashMap<(u32, u32), &VehicleState> =
        recording.states.iter().map(|s| ((s.frame, s.track_id), s)).collect();
    let mut out = Vec::with_capacity(recording.states.len());
    for (_, states) in group_by_vehicle(recording) {
        let owned: Vec<VehicleState> = states.iter().map(|s| (*s).clone()).collect();
        let labels = label_intentions(&owned, recording.frame_rate, label_window);
        for (state, label) in owned.iter().zip(labels) {
            let mut nf = NumericFrame {
                child_id: ids.next_id(),
                recording_id: recording.id,
                track_id: state.track_id,
                frame: state.frame,
                lat_velocity: state.lateral_velocity_rightward(),
                lat_acceleration: state.lateral_acceleration_rightward(),
                ttc_preceding: None,
                ttc_left_preceding: None,
                ttc_right_preceding: None,
                ttc_left_following: None,
                ttc_right_following: None,
                intention: label.intention,
                time_to_crossing: label.time_to_crossing,
            };
            for slot in NeighborSlot::ALL {
                let Some(nid) = state.neighbor(slot) else { continue };
                let other = lookup.get(&(state.frame, nid)).ok_or(IngestError::DanglingNeighbor {
                    recording: recording.id,
                    track_id: state.track_id,
                    frame: state.frame,
                    slot,
                    neighbor: nid,
                })?;
                *nf.ttc_mut(slot) = neighbor_ttc(state, other, slot);
            }
            out.push(nf);
        }
    }
    Ok(out)
}

fn neighbor_ttc(target: &VehicleState, other: &VehicleState, slot: NeighborSlot) -> Option<f64> {
    let result = if slot.is_following() {
        compute_ttc_following(
            bumper_gap(target, other),
            other.forward_velocity(),
            target.forward_velocity(),
        )
    } else {
        compute_ttc_preceding(
            bumper_gap(other, target),
            target.forward_velocity(),
            other.forward_velocity(),
        )
    };
    // overlapping bounding boxes (side by side in the adjacent lane) count as an immediate conflict
    result.unwrap_or(Some(0.0))
}

/// Extract every recording with one shared id counter, in recording order.
pub fn extract_all(recordings: &[Recording], label_window: f64) -> Result<Vec<NumericFrame>, IngestError> {
    let mut ids = ChildIdCounter::default();
    let mut out = Vec::new();
    for r in recordings {
        out.extend(extract_numeric_frames(r, label_window, &mut ids)?);
    }
    Ok(out)
}

/// Write numeric frames as CSV (absent TTCs are empty fields).
pub fn write_frames_csv(frames: &[NumericFrame], path: &Path) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| IngestError::csv(path, e))?;
    for f in frames {
        w.serialize(f).map_err(|e| IngestError::csv(path, e))?;
    }
    w.flush().map_err(|e| IngestError::io(path, e))
}

pub fn read_frames_csv(path: &Path) -> Result<Vec<NumericFrame>, IngestError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| IngestError::csv(path, e))?;
    r.deserialize()
        .collect::<Result<Vec<NumericFrame>, _>>()
        .map_err(|e| IngestError::csv(path, e))
}


#[cfg(test)]
mod tests {
    use super::test_support::state;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ttc_examples() {
        assert_eq!(compute_ttc_preceding(20.0, 30.0, 25.0).unwrap(), Some(4.0));
        assert_eq!(compute_ttc_preceding(20.0, 25.0, 25.0).unwrap(), None);
        assert_eq!(compute_ttc_preceding(30.0, 20.0, 25.0).unwrap(), Some(-6.0));
        assert_eq!(compute_ttc_following(15.0, 35.0, 30.0).unwrap(), Some(3.0));
        assert_eq!(compute_ttc_following(10.0, 30.0, 30.0).unwrap(), None);
        assert_eq!(compute_ttc_following(10.0, 25.0, 30.0).unwrap(), Some(-2.0));
        for gap in [0.0, -1.0] {
            assert!(matches!(
                compute_ttc_preceding(gap, 30.0, 20.0),
                Err(IngestError::NonPositiveGap { .. })
            ));
            assert!(matches!(
                compute_ttc_following(gap, 30.0, 20.0),
                Err(IngestError::NonPositiveGap { .. })
            ));
        }
    }

    proptest! {
        #[test]
        fn swapping_target_negates_ttc(gap in 0.1f64..200.0, va in 0.0f64..50.0, vb in 0.0f64..50.0) {
            prop_assume!(va != vb);
            let ab = compute_ttc_preceding(gap, va, vb).unwrap().unwrap();
            let ba = compute_ttc_preceding(gap, vb, va).unwrap().unwrap();
            prop_assert!((ab + ba).abs() <= 1e-12 * ab.abs().max(1.0));
        }
    }

    #[test]
    fn no_neighbors_no_ttc() {
        let rec = Recording {
            id: 1,
            frame_rate: 25.0,
            states: vec![state(1, 0, 0.0, 30.0, 5)],
        };
        let frames = extract_numeric_frames(&rec, 4.0, &mut ChildIdCounter::default()).unwrap();
        assert_eq!(frames.len(), 1);
        assert!(NeighborSlot::ALL.iter().all(|&s| frames[0].ttc(s).is_none()));
    }

    #[test]
    fn closing_pair_ttc() {
        // 40 m bumper gap (centers 44 m apart, 4 m cars), closing at 10 m/s
        let mut target = state(1, 0, 0.0, 35.0, 5);
        target.neighbors[NeighborSlot::Preceding.index()] = Some(2);
        let ahead = state(2, 0, 44.0, 25.0, 5);
        let rec = Recording {
            id: 1,
            frame_rate: 25.0,
            states: vec![target, ahead],
        };
        let frames = extract_numeric_frames(&rec, 4.0, &mut ChildIdCounter::default()).unwrap();
        let t = frames.iter().find(|f| f.track_id == 1).unwrap();
        assert!((t.ttc_preceding.unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn negative_direction_ttc() {
        // same scene driving toward -x
        let mut target = state(1, 0, 0.0, -35.0, 3);
        target.direction = DrivingDirection::Negative;
        target.neighbors[NeighborSlot::Preceding.index()] = Some(2);
        let mut ahead = state(2, 0, -44.0, -25.0, 3);
        ahead.direction = DrivingDirection::Negative;
        let rec = Recording {
            id: 1,
            frame_rate: 25.0,
            states: vec![target, ahead],
        };
        let frames = extract_numeric_frames(&rec, 4.0, &mut ChildIdCounter::default()).unwrap();
        assert!((frames[0].ttc_preceding.unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn one_child_id_per_vehicle_frame() {
        let mut states = Vec::new();
        for frame in 0..3 {
            states.push(state(1, frame, frame as f64, 30.0, 5));
            states.push(state(2, frame, 100.0 + frame as f64, 30.0, 6));
        }
        let rec = Recording {
            id: 1,
            frame_rate: 25.0,
            states,
        };
        let frames = extract_numeric_frames(&rec, 4.0, &mut ChildIdCounter::starting_at(638)).unwrap();
        assert_eq!(frames.len(), 6);
        let ids: std::collections::HashSet<_> = frames.iter().map(|f| f.child_id).collect();
        assert_eq!(ids.len(), 6);
        // consecutive frames of the same vehicle get consecutive ids
        assert_eq!(frames[0].child_id, ChildId(638));
        assert_eq!(frames[1].child_id, ChildId(639));
        assert_eq!((frames[0].track_id, frames[1].track_id), (1, 1));
    }

    #[test]
    fn dangling_neighbor() {
        let mut s = state(1, 0, 0.0, 30.0, 5);
        s.neighbors[NeighborSlot::LeftFollowing.index()] = Some(9);
        let rec = Recording {
            id: 3,
            frame_rate: 25.0,
            states: vec![s],
        };
        let err = extract_numeric_frames(&rec, 4.0, &mut ChildIdCounter::default()).unwrap_err();
        assert_eq!(err.name(), "DanglingNeighbor");
    }

    fn lane_track(frame_rate: f64, seconds: f64, crossing_at: Option<(f64, i32)>) -> Vec<VehicleState> {
        let n = (seconds * frame_rate).round() as u32;
        (0..n)
            .map(|f| {
                let t = f as f64 / frame_rate;
                let lane = match crossing_at {
                    Some((tc, delta)) if t >= tc - 1e-9 => 5 + delta,
                    _ => 5,
                };
                state(1, f, 30.0 * t, 30.0, lane)
            })
            .collect()
    }

    #[test]
    fn labels_without_crossing_are_lk() {
        let s = lane_track(25.0, 12.0, None);
        assert!(label_intentions(&s, 25.0, 4.0)
            .iter()
            .all(|l| l.intention == Intention::Lk));
    }

    #[test]
    fn label_window_definition() {
        // positive direction: lane id decrease is a move to the left
        let s = lane_track(25.0, 12.0, Some((10.0, -1)));
        let labels = label_intentions(&s, 25.0, 4.0);
        let at = |t: f64| labels[(t * 25.0).round() as usize];
        assert_eq!(at(8.0).intention, Intention::Llc);
        assert!((at(8.0).time_to_crossing.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(at(5.0).intention, Intention::Lk);
        assert_eq!(at(10.0).intention, Intention::Lk);
        let n = labels.iter().filter(|l| l.intention == Intention::Llc).count();
        assert_eq!(n, 100);

        let s = lane_track(25.0, 12.0, Some((10.0, 1)));
        let labels = label_intentions(&s, 25.0, 4.0);
        assert_eq!(labels[200].intention, Intention::Rlc);
    }

    #[test]
    fn label_window_clipped_at_track_start() {
        let s = lane_track(25.0, 6.0, Some((2.0, -1)));
        let labels = label_intentions(&s, 25.0, 4.0);
        assert_eq!(labels.iter().filter(|l| l.intention == Intention::Llc).count(), 50);
    }

    #[test]
    fn multiple_crossings_yield_multiple_windows() {
        let mut s = lane_track(10.0, 20.0, Some((6.0, -1)));
        for st in s.iter_mut().filter(|st| st.frame >= 150) {
            st.lane_id += 1;
        }
        let labels = label_intentions(&s, 10.0, 4.0);
        assert_eq!(labels.iter().filter(|l| l.intention == Intention::Llc).count(), 40);
        assert_eq!(labels.iter().filter(|l| l.intention == Intention::Rlc).count(), 40);
        assert_eq!(labels[149].intention, Intention::Rlc);
    }

    #[test]
    fn mirroring_preserves_driver_frame_features() {
        let mut states = Vec::new();
        for f in 0..60u32 {
            let t = f as f64 / 10.0;
            let mut s = state(1, f, 30.0 * t, 30.0, if t >= 4.5 { 4 } else { 5 });
            s.lateral_velocity = -0.3 - 0.01 * f as f64;
            s.lateral_acceleration = 0.2 - 0.005 * f as f64;
            s.neighbors[NeighborSlot::Preceding.index()] = Some(2);
            states.push(s);
            states.push(state(2, f, 30.0 * t + 50.0, 27.0, 5));
        }
        let rec = Recording {
            id: 1,
            frame_rate: 10.0,
            states,
        };
        let a = extract_numeric_frames(&rec, 4.0, &mut ChildIdCounter::default()).unwrap();
        let b = extract_numeric_frames(&rec.mirrored(), 4.0, &mut ChildIdCounter::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().any(|f| f.intention == Intention::Llc));
    }

    #[test]
    fn frames_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frames.csv");
        let frames = vec![NumericFrame {
            child_id: ChildId(7),
            recording_id: 1,
            track_id: 2,
            frame: 3,
            lat_velocity: 0.1,
            lat_acceleration: -0.02,
            ttc_preceding: Some(3.5),
            ttc_left_preceding: None,
            ttc_right_preceding: Some(-12.25),
            ttc_left_following: None,
            ttc_right_following: None,
            intention: Intention::Rlc,
            time_to_crossing: Some(1.2),
        }];
        write_frames_csv(&frames, &path).unwrap();
        assert_eq!(read_frames_csv(&path).unwrap(), frames);
    }
}
