//! HighD-format CSV recordings: `XX_tracks.csv`, `XX_tracksMeta.csv`,
//! `XX_recordingMeta.csv`.
//!
//! HighD stores the upper-left corner of each bounding box; `width` is the
//! extent along x (vehicle length) and `height` the extent along y. Neighbor
//! ids use `0` for "no vehicle".

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{DrivingDirection, IngestError, Recording, VehicleState, HIGHD_FRAME_RATE};
use crate::ontology::NeighborSlot;

/// Column names, defaulting to the published HighD headers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct ColumnMap {
    pub frame: String,
    pub id: String,
    pub x: String,
    pub y: String,
    pub width: String,
    pub height: String,
    pub x_velocity: String,
    pub y_velocity: String,
    pub y_acceleration: String,
    pub preceding_id: String,
    pub left_preceding_id: String,
    pub right_preceding_id: String,
    pub left_following_id: String,
    pub right_following_id: String,
    pub lane_id: String,
    pub driving_direction: String,
    pub frame_rate: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            frame: "frame".into(),
            id: "id".into(),
            x: "x".into(),
            y: "y".into(),
            width: "width".into(),
            height: "height".into(),
            x_velocity: "xVelocity".into(),
            y_velocity: "yVelocity".into(),
            y_acceleration: "yAcceleration".into(),
            preceding_id: "precedingId".into(),
            left_preceding_id: "leftPrecedingId".into(),
            right_preceding_id: "rightPrecedingId".into(),
            left_following_id: "leftFollowingId".into(),
            right_following_id: "rightFollowingId".into(),
            lane_id: "laneId".into(),
            driving_direction: "drivingDirection".into(),
            frame_rate: "frameRate".into(),
        }
    }
}

impl ColumnMap {
    pub fn from_json_file(path: &Path) -> Result<Self, IngestError> {
        let text = fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| IngestError::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    fn neighbor(&self, slot: NeighborSlot) -> &str {
        match slot {
            NeighborSlot::Preceding => &self.preceding_id,
            NeighborSlot::LeftPreceding => &self.left_preceding_id,
            NeighborSlot::RightPreceding => &self.right_preceding_id,
            NeighborSlot::LeftFollowing => &self.left_following_id,
            NeighborSlot::RightFollowing => &self.right_following_id,
        }
    }
}

struct Table {
    path: PathBuf,
    header: HashMap<String, usize>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn read(path: &Path) -> Result<Table, IngestError> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| IngestError::csv(path, e))?;
        let header = reader
            .headers()
            .map_err(|e| IngestError::csv(path, e))?
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_owned(), i))
            .collect();
        let rows = reader
            .records()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| IngestError::csv(path, e))?;
        Ok(Table {
            path: path.to_owned(),
            header,
            rows,
        })
    }

    fn column(&self, name: &str) -> Result<usize, IngestError> {
        self.header.get(name).copied().ok_or_else(|| IngestError::Format {
            path: self.path.display().to_string(),
            message: format!("missing column `{name}`"),
        })
    }

    fn num<T: std::str::FromStr>(&self, row: usize, col: usize) -> Result<T, IngestError> {
        let raw = self.rows[row].get(col).unwrap_or("").trim();
        raw.parse().map_err(|_| IngestError::Format {
            path: self.path.display().to_string(),
            message: format!("line {}: cannot parse `{raw}`", row + 2),
        })
    }
}

/// Recording ids found in `dir` (files named `NN_tracks.csv`), ascending.
pub fn recording_ids(dir: &Path) -> Result<Vec<u32>, IngestError> {
    let mut ids: Vec<u32> = fs::read_dir(dir)
        .map_err(|e| IngestError::io(dir, e))?
        .filter_map(|entry| {
            let name = entry.ok()?.file_name().into_string().ok()?;
            name.strip_suffix("_tracks.csv")?.parse().ok()
        })
        .collect();
    ids.sort_unstable();
    Ok(ids)
}

fn file(dir: &Path, id: u32, kind: &str) -> PathBuf {
    dir.join(format!("{id:02}_{kind}.csv"))
}

pub fn read_recording(dir: &Path, id: u32, columns: &ColumnMap) -> Result<Recording, IngestError> {
    let meta = Table::read(&file(dir, id, "recordingMeta"))?;
    let frame_rate = match meta.header.get(&columns.frame_rate) {
        Some(&col) if !meta.rows.is_empty() => meta.num::<f64>(0, col)?,
        _ => HIGHD_FRAME_RATE,
    };

    let tracks_meta = Table::read(&file(dir, id, "tracksMeta"))?;
    let (mid, mdir) = (
        tracks_meta.column(&columns.id)?,
        tracks_meta.column(&columns.driving_direction)?,
    );
    let mut directions = HashMap::new();
    for row in 0..tracks_meta.rows.len() {
        let vid: u32 = tracks_meta.num(row, mid)?;
        let code: i64 = tracks_meta.num(row, mdir)?;
        let dir = DrivingDirection::from_highd(code).ok_or_else(|| IngestError::Format {
            path: tracks_meta.path.display().to_string(),
            message: format!("line {}: driving direction {code}", row + 2),
        })?;
        directions.insert(vid, dir);
    }

    let t = Table::read(&file(dir, id, "tracks"))?;
    let c = |name: &str| t.column(name);
    let (cf, ci, cx, cy, cw, ch) = (
        c(&columns.frame)?,
        c(&columns.id)?,
        c(&columns.x)?,
        c(&columns.y)?,
        c(&columns.width)?,
        c(&columns.height)?,
    );
    let (cvx, cvy, cay, clane) = (
        c(&columns.x_velocity)?,
        c(&columns.y_velocity)?,
        c(&columns.y_acceleration)?,
        c(&columns.lane_id)?,
    );
    let mut neighbor_cols = [0usize; 5];
    for slot in NeighborSlot::ALL {
        neighbor_cols[slot.index()] = c(columns.neighbor(slot))?;
    }

    let mut states = Vec::with_capacity(t.rows.len());
    for row in 0..t.rows.len() {
        let track_id: u32 = t.num(row, ci)?;
        let direction = *directions.get(&track_id).ok_or_else(|| IngestError::Format {
            path: t.path.display().to_string(),
            message: format!("line {}: vehicle {track_id} missing from tracksMeta", row + 2),
        })?;
        let (x, y, w, h): (f64, f64, f64, f64) = (t.num(row, cx)?, t.num(row, cy)?, t.num(row, cw)?, t.num(row, ch)?);
        let mut neighbors = [None; 5];
        for (slot, &col) in neighbor_cols.iter().enumerate() {
            let nid: u32 = t.num(row, col)?;
            neighbors[slot] = (nid != 0).then_some(nid);
        }
        states.push(VehicleState {
            track_id,
            frame: t.num(row, cf)?,
            longitudinal_position: x + 0.5 * w,
            lateral_position: y + 0.5 * h,
            longitudinal_velocity: t.num(row, cvx)?,
            lateral_velocity: t.num(row, cvy)?,
            lateral_acceleration: t.num(row, cay)?,
            length: w,
            width: h,
            lane_id: t.num(row, clane)?,
            direction,
            neighbors,
        });
    }
    Ok(Recording { id, frame_rate, states })
}

/// Every recording in `dir`, in recording-id order.
pub fn read_dir(dir: &Path, columns: &ColumnMap) -> Result<Vec<Recording>, IngestError> {
    recording_ids(dir)?
        .into_iter()
        .map(|id| read_recording(dir, id, columns))
        .collect()
}

/// Write a recording with the default HighD column names.
pub fn write_recording(dir: &Path, rec: &Recording) -> Result<(), IngestError> {
    let cols = ColumnMap::default();

    let path = file(dir, rec.id, "recordingMeta");
    let mut w = csv::Writer::from_path(&path).map_err(|e| IngestError::csv(&path, e))?;
    w.write_record(["id", cols.frame_rate.as_str(), "numVehicles"])
        .map_err(|e| IngestError::csv(&path, e))?;
    w.write_record([
        rec.id.to_string(),
        rec.frame_rate.to_string(),
        rec.vehicle_count().to_string(),
    ])
    .map_err(|e| IngestError::csv(&path, e))?;
    w.flush().map_err(|e| IngestError::io(&path, e))?;

    let mut per_vehicle: std::collections::BTreeMap<u32, Vec<&VehicleState>> = Default::default();
    for s in &rec.states {
        per_vehicle.entry(s.track_id).or_default().push(s);
    }
    let path = file(dir, rec.id, "tracksMeta");
    let mut w = csv::Writer::from_path(&path).map_err(|e| IngestError::csv(&path, e))?;
    w.write_record([
        "id",
        "width",
        "height",
        "initialFrame",
        "finalFrame",
        "numFrames",
        "class",
        "drivingDirection",
    ])
    .map_err(|e| IngestError::csv(&path, e))?;
    for (id, states) in &per_vehicle {
        let first = states.iter().map(|s| s.frame).min().unwrap_or(0);
        let last = states.iter().map(|s| s.frame).max().unwrap_or(0);
        let s0 = states[0];
        let class = if s0.length > 8.0 { "Truck" } else { "Car" };
        w.write_record([
            id.to_string(),
            s0.length.to_string(),
            s0.width.to_string(),
            first.to_string(),
            last.to_string(),
            states.len().to_string(),
            class.to_owned(),
            s0.direction.highd_code().to_string(),
        ])
        .map_err(|e| IngestError::csv(&path, e))?;
    }
    w.flush().map_err(|e| IngestError::io(&path, e))?;

    let path = file(dir, rec.id, "tracks");
    let mut w = csv::Writer::from_path(&path).map_err(|e| IngestError::csv(&path, e))?;
    let mut header = vec![
        cols.frame.as_str(),
        cols.id.as_str(),
        cols.x.as_str(),
        cols.y.as_str(),
        cols.width.as_str(),
        cols.height.as_str(),
        cols.x_velocity.as_str(),
        cols.y_velocity.as_str(),
        cols.y_acceleration.as_str(),
    ];
    header.extend(NeighborSlot::ALL.iter().map(|&s| cols.neighbor(s)));
    header.push(cols.lane_id.as_str());
    w.write_record(&header).map_err(|e| IngestError::csv(&path, e))?;
    let mut sorted: Vec<&VehicleState> = rec.states.iter().collect();
    sorted.sort_by_key(|s| (s.track_id, s.frame));
    for s in sorted {
        let mut row = vec![
            s.frame.to_string(),
            s.track_id.to_string(),
            (s.longitudinal_position - 0.5 * s.length).to_string(),
            (s.lateral_position - 0.5 * s.width).to_string(),
            s.length.to_string(),
            s.width.to_string(),
            s.longitudinal_velocity.to_string(),
            s.lateral_velocity.to_string(),
            s.lateral_acceleration.to_string(),
        ];
        row.extend(s.neighbors.iter().map(|n| n.unwrap_or(0).to_string()));
        row.push(s.lane_id.to_string());
        w.write_record(&row).map_err(|e| IngestError::csv(&path, e))?;
    }
    w.flush().map_err(|e| IngestError::io(&path, e))
}
