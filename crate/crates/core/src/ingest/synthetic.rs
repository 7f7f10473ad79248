//! Rule-based highway microsimulation producing HighD-shaped recordings.
//!
//! Each recording holds two opposite carriageways. Longitudinal motion follows
//! a late-braking car-following law. A car changes lane to the left
//! when the vehicle ahead is a collision risk and the left lane is safe, to the
//! right when nothing ahead is a risk and the right lane is safe. The lateral
//! maneuver ramps up to a lateral speed held until the vehicle crosses the
//! lane marking, then settles. Reported lateral velocity and acceleration carry Gaussian
//! measurement noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{DrivingDirection, IngestError, Recording, VehicleState};
use crate::ontology::{Intention, NeighborSlot};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleParams {
    pub frame_rate: f64,
    pub lanes: usize,
    pub lane_width: f64,
    pub road_length: f64,
    pub vehicles_per_recording: usize,
    /// Arrivals per second per carriageway.
    pub spawn_rate: f64,
    /// Relative inflow per lane, leftmost first; one entry per lane.
    pub lane_inflow: Vec<f64>,
    /// Share of right-lane arrivals that are trucks.
    pub truck_fraction: f64,
    pub car_speed_mean: f64,
    pub car_speed_sd: f64,
    pub truck_speed_mean: f64,
    pub truck_speed_sd: f64,
    /// Per-second probability of starting a left change while its rule holds.
    pub lane_change_probability: f64,
    /// Right-change probability relative to `lane_change_probability`.
    pub keep_right_factor: f64,
    /// TTC below which the vehicle ahead or a target-lane follower is a risk.
    pub risk_ttc: f64,
    /// Seconds a risky vehicle ahead keeps motivating a left change.
    pub overtake_memory: f64,
    /// TTC below which a target-lane preceding vehicle blocks a change.
    pub target_preceding_ttc: f64,
    /// Minimum bumper gap to target-lane vehicles.
    pub min_gap: f64,
    /// Time from maneuver start to crossing, uniform in [min, max].
    pub approach_seconds: [f64; 2],
    /// Time from maneuver start to full lateral speed.
    pub ramp_seconds: f64,
    /// Time from crossing to maneuver end, uniform in [min, max].
    pub settle_seconds: [f64; 2],
    /// Rate (1/s) at which a lane-keeping vehicle returns to its lane center.
    pub centering_rate: f64,
    /// Largest distance from the lane center at which a new change may start.
    pub centered_tolerance: f64,
    pub lateral_velocity_noise: f64,
    pub lateral_acceleration_noise: f64,
}

impl Default for RuleParams {
    fn default() -> Self {
        RuleParams {
            frame_rate: 10.0,
            lanes: 3,
            lane_width: 3.75,
            road_length: 600.0,
            vehicles_per_recording: 100,
            spawn_rate: 0.7,
            lane_inflow: vec![0.15, 0.35, 0.5],
            truck_fraction: 0.15,
            car_speed_mean: 33.0,
            car_speed_sd: 3.0,
            truck_speed_mean: 22.0,
            truck_speed_sd: 1.5,
            lane_change_probability: 1.0,
            keep_right_factor: 1.0,
            risk_ttc: 10.0,
            overtake_memory: 10.0,
            target_preceding_ttc: 1.0,
            min_gap: 2.0,
            approach_seconds: [3.6, 4.6],
            ramp_seconds: 1.5,
            settle_seconds: [1.0, 1.5],
            centering_rate: 0.2,
            centered_tolerance: 0.6,
            lateral_velocity_noise: 0.05,
            lateral_acceleration_noise: 0.05,
        }
    }
}

impl RuleParams {
    pub fn validate(&self) -> Result<(), IngestError> {
        let bad = |msg: &str| Err(IngestError::InvalidRuleParams(msg.to_owned()));
        let positive = [
            ("frame_rate", self.frame_rate),
            ("lane_width", self.lane_width),
            ("road_length", self.road_length),
            ("spawn_rate", self.spawn_rate),
            ("car_speed_mean", self.car_speed_mean),
            ("truck_speed_mean", self.truck_speed_mean),
            ("risk_ttc", self.risk_ttc),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(&format!("{name} must be positive, got {v}"));
            }
        }
        let non_negative = [
            ("car_speed_sd", self.car_speed_sd),
            ("truck_speed_sd", self.truck_speed_sd),
            ("keep_right_factor", self.keep_right_factor),
            ("min_gap", self.min_gap),
            ("overtake_memory", self.overtake_memory),
            ("target_preceding_ttc", self.target_preceding_ttc),
            ("centering_rate", self.centering_rate),
            ("centered_tolerance", self.centered_tolerance),
            ("lateral_velocity_noise", self.lateral_velocity_noise),
            ("lateral_acceleration_noise", self.lateral_acceleration_noise),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return bad(&format!("{name} must be non-negative, got {v}"));
            }
        }
        for (name, p) in [
            ("lane_change_probability", self.lane_change_probability),
            ("truck_fraction", self.truck_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(&format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.lane_change_probability * self.keep_right_factor > 1.0 {
            return bad("lane_change_probability * keep_right_factor exceeds 1");
        }
        for (name, [lo, hi]) in [
            ("approach_seconds", self.approach_seconds),
            ("settle_seconds", self.settle_seconds),
        ] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return bad(&format!("{name} must satisfy 0 < min <= max, got [{lo}, {hi}]"));
            }
        }
        if !(self.ramp_seconds > 0.0 && self.ramp_seconds <= self.approach_seconds[0]) {
            return bad("ramp_seconds must lie in (0, approach_seconds min]");
        }
        if self.lanes < 2 {
            return bad("at least two lanes are required");
        }
        if self.lane_inflow.len() != self.lanes
            || self.lane_inflow.iter().any(|w| !(w.is_finite() && *w >= 0.0))
            || self.lane_inflow.iter().sum::<f64>() <= 0.0
        {
            return bad("lane_inflow needs one non-negative weight per lane with a positive sum");
        }
        if self.vehicles_per_recording < 2 {
            return bad("vehicles_per_recording must be at least 2");
        }
        Ok(())
    }
}

/// Ground truth of one executed lane change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maneuver {
    pub recording_id: u32,
    pub track_id: u32,
    pub intention: Intention,
    /// First frame observed in the target lane.
    pub crossing_frame: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub recordings: Vec<Recording>,
    pub maneuvers: Vec<Maneuver>,
}

impl SyntheticCorpus {
    pub fn vehicle_count(&self) -> usize {
        self.recordings.iter().map(Recording::vehicle_count).sum()
    }
}

/// Deterministic for a given `(seed, n_vehicles, params)`.
pub fn generate_synthetic_corpus(
    seed: u64,
    n_vehicles: usize,
    params: &RuleParams,
) -> Result<SyntheticCorpus, IngestError> {
    params.validate()?;
    if n_vehicles == 0 {
        return Err(IngestError::InvalidRuleParams("n_vehicles must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recordings = Vec::new();
    let mut maneuvers = Vec::new();
    let mut remaining = n_vehicles;
    let mut id = 1u32;
    while remaining > 0 {
        let quota = remaining.min(params.vehicles_per_recording);
        remaining -= quota;
        let upper = quota / 2;
        let mut states = Vec::new();
        let mut next_track = 1u32;
        for (direction, count) in [
            (DrivingDirection::Negative, upper),
            (DrivingDirection::Positive, quota - upper),
        ] {
            if count == 0 {
                continue;
            }
            let sim = Carriageway::new(params, direction, next_track).run(count, &mut rng);
            next_track += count as u32;
            states.extend(sim.states);
            maneuvers.extend(
                sim.maneuvers
                    .into_iter()
                    .map(|(track_id, intention, crossing_frame)| Maneuver {
                        recording_id: id,
                        track_id,
                        intention,
                        crossing_frame,
                    }),
            );
        }
        states.sort_by_key(|s| (s.frame, s.track_id));
        recordings.push(Recording {
            id,
            frame_rate: params.frame_rate,
            states,
        });
        id += 1;
    }
    Ok(SyntheticCorpus { recordings, maneuvers })
}

#[derive(Debug, Clone)]
struct LaneChange {
    /// Simulation time at maneuver start.
    start: f64,
    /// Start to crossing.
    approach: f64,
    /// Start to full lateral speed.
    ramp: f64,
    /// Crossing to maneuver end.
    settle: f64,
    /// Plateau lateral speed, reached after `ramp` and held until the crossing.
    peak: f64,
    /// +1 toward the left (decreasing lateral offset), -1 toward the right.
    toward_left: f64,
    origin_offset: f64,
}

impl LaneChange {
    /// Plan a change that covers `distance` to the lane marking in `approach` seconds.
    fn new(
        start: f64,
        approach: f64,
        ramp: f64,
        settle: f64,
        distance: f64,
        toward_left: f64,
        origin_offset: f64,
    ) -> Self {
        LaneChange {
            start,
            approach,
            ramp,
            settle,
            peak: distance / (approach - 0.5 * ramp),
            toward_left,
            origin_offset,
        }
    }

    fn duration(&self) -> f64 {
        self.approach + self.settle
    }

    /// Leftward (displacement, velocity, acceleration) at elapsed time `tau`.
    fn profile(&self, tau: f64) -> (f64, f64, f64) {
        let v = self.peak;
        let r = self.ramp;
        let (d, vel, acc) = if tau <= r {
            let w = PI / r;
            (
                0.5 * v * (tau - (tau * w).sin() / w),
                0.5 * v * (1.0 - (tau * w).cos()),
                0.5 * v * w * (tau * w).sin(),
            )
        } else if tau <= self.approach {
            (v * (tau - 0.5 * r), v, 0.0)
        } else {
            let sg = (tau - self.approach).min(self.settle);
            let w = PI / self.settle;
            (
                v * (self.approach - 0.5 * r) + 0.5 * v * (sg + (sg * w).sin() / w),
                0.5 * v * (1.0 + (sg * w).cos()),
                -0.5 * v * w * (sg * w).sin(),
            )
        };
        (self.toward_left * d, self.toward_left * vel, self.toward_left * acc)
    }
}

#[derive(Debug, Clone)]
struct Vehicle {
    track_id: u32,
    /// Distance travelled along the carriageway, vehicle center.
    s: f64,
    /// Lateral offset from the carriageway's left edge, increasing rightward.
    offset: f64,
    v: f64,
    v_desired: f64,
    length: f64,
    width: f64,
    truck: bool,
    change: Option<LaneChange>,
    /// Time until which the vehicle keeps looking for a left change.
    urge_until: f64,
}

impl Vehicle {
    fn lane(&self, width: f64) -> i64 {
        (self.offset / width).floor() as i64
    }

    fn lane_center(&self, width: f64) -> f64 {
        (self.lane(width) as f64 + 0.5) * width
    }
}

/// Neighbor view of one vehicle: `(index, bumper gap, ttc)` per slot.
#[derive(Debug, Clone, Default)]
struct Surroundings {
    slots: [Option<(usize, f64, Option<f64>)>; 5],
    alongside_left: bool,
    alongside_right: bool,
}

struct SimOutput {
    states: Vec<VehicleState>,
    maneuvers: Vec<(u32, Intention, u32)>,
}

struct Carriageway<'a> {
    p: &'a RuleParams,
    direction: DrivingDirection,
    first_track: u32,
}

const FREE_ACCEL: f64 = 1.0;
/// Deceleration needed to match the leader's speed at which braking starts.
const BRAKE_ONSET: f64 = 1.5;
const HEADWAY: f64 = 0.8;
const JAM_GAP: f64 = 2.0;
const MAX_BRAKE: f64 = 9.0;

impl<'a> Carriageway<'a> {
    fn new(p: &'a RuleParams, direction: DrivingDirection, first_track: u32) -> Self {
        Carriageway {
            p,
            direction,
            first_track,
        }
    }

    fn lane_id(&self, lane: i64) -> i32 {
        let n = self.p.lanes as i64;
        match self.direction {
            DrivingDirection::Negative => (n + 1 - lane) as i32,
            DrivingDirection::Positive => (n + 3 + lane) as i32,
        }
    }

    fn image_y(&self, offset: f64) -> f64 {
        let median_top = 5.0 + self.p.lanes as f64 * self.p.lane_width;
        match self.direction {
            DrivingDirection::Negative => median_top - offset,
            DrivingDirection::Positive => median_top + self.p.lane_width + offset,
        }
    }

    fn image_x(&self, s: f64) -> f64 {
        match self.direction {
            DrivingDirection::Negative => self.p.road_length - s,
            DrivingDirection::Positive => s,
        }
    }

    fn run(&self, count: usize, rng: &mut ChaCha8Rng) -> SimOutput {
        let p = self.p;
        let dt = 1.0 / p.frame_rate;
        let lanes = p.lanes;
        let w = p.lane_width;
        let total_inflow: f64 = p.lane_inflow.iter().sum();
        let arrivals: Vec<Option<Exp<f64>>> = p
            .lane_inflow
            .iter()
            .map(|w| Exp::new(p.spawn_rate * w / total_inflow).ok().filter(|_| *w > 0.0))
            .collect();
        let draw = |lane: usize, rng: &mut ChaCha8Rng| arrivals[lane].map_or(f64::INFINITY, |e| e.sample(rng));
        let noise_v = Normal::new(0.0, p.lateral_velocity_noise).expect("validated");
        let noise_a = Normal::new(0.0, p.lateral_acceleration_noise).expect("validated");
        let left_step = 1.0 - (1.0 - p.lane_change_probability).powf(dt);
        let right_step = 1.0 - (1.0 - p.lane_change_probability * p.keep_right_factor).powf(dt);
        let max_approach = p.approach_seconds[1];

        let mut next_arrival: Vec<f64> = (0..lanes).map(|lane| draw(lane, rng)).collect();
        let mut spawned = 0usize;
        let mut active: Vec<Vehicle> = Vec::new();
        let mut out = SimOutput {
            states: Vec::new(),
            maneuvers: Vec::new(),
        };
        let mut frame: i64 = 0;
        // generous cap; spawning stalls only under extreme parameters
        let max_frames = ((count as f64 / p.spawn_rate + 600.0) * p.frame_rate * 20.0) as i64;

        while (spawned < count || !active.is_empty()) && frame < max_frames {
            let t = frame as f64 * dt;

            for lane in 0..lanes {
                if spawned >= count || next_arrival[lane] > t {
                    continue;
                }
                let truck = lane + 1 == lanes && rng.gen::<f64>() < p.truck_fraction;
                let (mean, sd) = if truck {
                    (p.truck_speed_mean, p.truck_speed_sd)
                } else {
                    (p.car_speed_mean, p.car_speed_sd)
                };
                let v_desired = (mean + sd * rng.sample::<f64, _>(rand_distr::StandardNormal)).max(0.5 * mean);
                let length = if truck {
                    rng.gen_range(12.0..17.0)
                } else {
                    rng.gen_range(4.0..5.2)
                };
                let width = if truck { 2.5 } else { rng.gen_range(1.7..2.0) };
                let blocker = active
                    .iter()
                    .filter(|o| o.lane(w) == lane as i64)
                    .min_by(|a, b| a.s.total_cmp(&b.s));
                let clear = blocker.is_none_or(|o| {
                    let gap = o.s - 0.5 * o.length - length;
                    gap >= 15.0_f64.max(10.0 + 3.0 * (v_desired - o.v))
                });
                if !clear {
                    continue;
                }
                active.push(Vehicle {
                    track_id: self.first_track + spawned as u32,
                    s: 0.5 * length,
                    offset: (lane as f64 + 0.5) * w,
                    v: v_desired,
                    v_desired,
                    length,
                    width,
                    truck,
                    change: None,
                    urge_until: f64::NEG_INFINITY,
                });
                spawned += 1;
                next_arrival[lane] = t + draw(lane, rng);
            }

            let around = surroundings(&active, w, lanes);

            for (veh, sur) in active.iter().zip(&around) {
                let (lat_v, lat_a) = match &veh.change {
                    Some(c) => {
                        let (_, vel, acc) = c.profile(t - c.start);
                        (vel, acc)
                    }
                    None => {
                        let rightward = p.centering_rate * (veh.lane_center(w) - veh.offset);
                        (-rightward, p.centering_rate * rightward)
                    }
                };
                let lat_v = lat_v + noise_v.sample(rng);
                let lat_a = lat_a + noise_a.sample(rng);
                let mut neighbors = [None; 5];
                for slot in NeighborSlot::ALL {
                    neighbors[slot.index()] = sur.slots[slot.index()].map(|(j, _, _)| active[j].track_id);
                }
                let sign = self.direction.leftward_sign();
                out.states.push(VehicleState {
                    track_id: veh.track_id,
                    frame: frame as u32,
                    longitudinal_position: self.image_x(veh.s),
                    lateral_position: self.image_y(veh.offset),
                    longitudinal_velocity: veh.v * self.direction.longitudinal_sign(),
                    lateral_velocity: lat_v * sign,
                    lateral_acceleration: lat_a * sign,
                    length: veh.length,
                    width: veh.width,
                    lane_id: self.lane_id(veh.lane(w)),
                    direction: self.direction,
                    neighbors,
                });
            }

            // lane-change decisions
            for i in 0..active.len() {
                let risky_ahead = matches!(around[i].slots[NeighborSlot::Preceding.index()], Some((_, _, Some(x))) if (0.0..p.risk_ttc).contains(&x));
                if risky_ahead {
                    active[i].urge_until = t + p.overtake_memory;
                }
                let veh = &active[i];
                if veh.truck || veh.change.is_some() || (veh.offset - veh.lane_center(w)).abs() > p.centered_tolerance {
                    continue;
                }
                if p.road_length - veh.s < veh.v * (max_approach + 0.5) {
                    continue;
                }
                let lane = veh.lane(w);
                let sur = &around[i];
                let safe = |slot: NeighborSlot| {
                    let horizon = if slot.is_following() {
                        p.risk_ttc
                    } else {
                        p.target_preceding_ttc
                    };
                    sur.slots[slot.index()].is_none_or(|(_, gap, ttc)| {
                        gap >= p.min_gap && !matches!(ttc, Some(x) if (0.0..horizon).contains(&x))
                    })
                };
                let urge = veh.urge_until >= t;
                let wants_left = lane > 0
                    && urge
                    && !sur.alongside_left
                    && safe(NeighborSlot::LeftPreceding)
                    && safe(NeighborSlot::LeftFollowing);
                let wants_right = (lane as usize) + 1 < lanes
                    && !urge
                    && !sur.alongside_right
                    && safe(NeighborSlot::RightPreceding)
                    && safe(NeighborSlot::RightFollowing);
                let toward_left = if wants_left && rng.gen::<f64>() < left_step {
                    1.0
                } else if wants_right && rng.gen::<f64>() < right_step {
                    -1.0
                } else {
                    continue;
                };
                let approach = rng.gen_range(p.approach_seconds[0]..=p.approach_seconds[1]);
                let settle = rng.gen_range(p.settle_seconds[0]..=p.settle_seconds[1]);
                let veh = &mut active[i];
                let boundary = if toward_left > 0.0 {
                    lane as f64 * w
                } else {
                    (lane + 1) as f64 * w
                };
                let distance = (veh.offset - boundary).abs();
                veh.change = Some(LaneChange::new(
                    t,
                    approach,
                    p.ramp_seconds,
                    settle,
                    distance,
                    toward_left,
                    veh.offset,
                ));
            }

            // longitudinal dynamics against the current leader
            let accel: Vec<f64> = active
                .iter()
                .zip(&around)
                .map(|(veh, sur)| {
                    let free = FREE_ACCEL * (1.0 - veh.v / veh.v_desired).clamp(-1.0, 1.0);
                    let Some((j, gap, _)) = sur.slots[NeighborSlot::Preceding.index()] else {
                        return free;
                    };
                    let closing = veh.v - active[j].v;
                    let room = (gap - JAM_GAP).max(0.1);
                    let needed = if closing > 0.0 {
                        closing * closing / (2.0 * room)
                    } else {
                        0.0
                    };
                    if needed > BRAKE_ONSET {
                        -needed.min(MAX_BRAKE)
                    } else if gap < JAM_GAP + veh.v * HEADWAY {
                        free.min(-FREE_ACCEL * (1.0 - gap / (JAM_GAP + veh.v * HEADWAY)))
                    } else {
                        free
                    }
                })
                .collect();
            let t_next = t + dt;
            for (veh, a) in active.iter_mut().zip(accel) {
                let v_next = (veh.v + a * dt).max(0.0);
                veh.s += 0.5 * (veh.v + v_next) * dt;
                veh.v = v_next;
                let before = veh.lane(w);
                match &veh.change {
                    Some(c) => {
                        let tau = t_next - c.start;
                        let (d, _, _) = c.profile(tau);
                        veh.offset = c.origin_offset - d;
                        if veh.lane(w) != before && veh.s <= p.road_length {
                            let intention = if c.toward_left > 0.0 {
                                Intention::Llc
                            } else {
                                Intention::Rlc
                            };
                            out.maneuvers.push((veh.track_id, intention, (frame + 1) as u32));
                        }
                        if tau >= c.duration() {
                            veh.change = None;
                        }
                    }
                    None => {
                        let center = veh.lane_center(w);
                        veh.offset = center + (veh.offset - center) * (-p.centering_rate * dt).exp();
                    }
                }
            }

            active.retain(|v| v.s <= p.road_length);
            frame += 1;
        }
        out.maneuvers.sort_by_key(|m| (m.0, m.2));
        out
    }
}

/// Resolve neighbor slots from lane membership. Vehicles that overlap
/// longitudinally in an adjacent lane are alongside and fill no slot.
fn surroundings(active: &[Vehicle], lane_width: f64, lanes: usize) -> Vec<Surroundings> {
    let mut by_lane: Vec<Vec<usize>> = vec![Vec::new(); lanes];
    for (i, v) in active.iter().enumerate() {
        let lane = v.lane(lane_width).clamp(0, lanes as i64 - 1) as usize;
        by_lane[lane].push(i);
    }
    for members in &mut by_lane {
        members.sort_by(|&a, &b| active[a].s.total_cmp(&active[b].s));
    }
    let gap = |ahead: &Vehicle, behind: &Vehicle| ahead.s - behind.s - 0.5 * (ahead.length + behind.length);
    let ttc = |gap: f64, closing: f64| (closing != 0.0).then(|| gap / closing);

    active
        .iter()
        .map(|me| {
            let mut sur = Surroundings::default();
            let lane = me.lane(lane_width);
            let scan = |target: i64| -> (
                Option<(usize, f64, Option<f64>)>,
                Option<(usize, f64, Option<f64>)>,
                bool,
            ) {
                if target < 0 || target >= lanes as i64 {
                    return (None, None, false);
                }
                let (mut ahead, mut behind, mut alongside) = (None, None, false);
                for &j in &by_lane[target as usize] {
                    let other = &active[j];
                    if std::ptr::eq(other, me) {
                        continue;
                    }
                    if other.s >= me.s {
                        let g = gap(other, me);
                        if g <= 0.0 {
                            alongside = true;
                        } else if ahead.is_none() {
                            ahead = Some((j, g, ttc(g, me.v - other.v)));
                        }
                    } else {
                        let g = gap(me, other);
                        if g <= 0.0 {
                            alongside = true;
                        } else {
                            behind = Some((j, g, ttc(g, other.v - me.v)));
                        }
                    }
                }
                (ahead, behind, alongside)
            };
            let (preceding, _, _) = scan(lane);
            let (lp, lf, la) = scan(lane - 1);
            let (rp, rf, ra) = scan(lane + 1);
            sur.slots[NeighborSlot::Preceding.index()] = preceding;
            sur.slots[NeighborSlot::LeftPreceding.index()] = lp;
            sur.slots[NeighborSlot::LeftFollowing.index()] = lf;
            sur.slots[NeighborSlot::RightPreceding.index()] = rp;
            sur.slots[NeighborSlot::RightFollowing.index()] = rf;
            sur.alongside_left = la;
            sur.alongside_right = ra;
            sur
        })
        .collect()
}
