//! Single-object tracking by background subtraction, with gap filling,
//! finite-difference kinematics and a block-matching alternative.
//!
//! Both the background estimate and the per-frame locator are strategies
//! looked up by name, see [`backgrounds`] and [`locators`].

mod background;
mod block_match;
mod csv;
mod detect;
mod gaps;
mod kinematics;

pub use background::{FirstFrame, TemporalMedian};
pub use block_match::{block_match, BlockBox};
pub use csv::{
    parse_trajectory_positions, read_trajectory_positions, trajectory_csv, write_trajectory_csv, TRAJECTORY_HEADER,
};
pub use detect::{connected_components, detect, foreground_mask, largest_blob, Blob};
pub use gaps::fill_gaps;
pub use kinematics::{kinematics, Vector};

use crate::constants::{DEFAULT_DIFF_THRESHOLD, DEFAULT_MIN_BLOB_AREA, DEFAULT_SEARCH_RADIUS};
use crate::error::{Error, Result};
use crate::frame_io::{Frame, VideoMeta};
use crate::registry::Registry;

/// Position estimate for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub frame_index: usize,
    /// `(x, y)` in pixel coordinates; `None` when nothing was found.
    pub centroid: Option<(f64, f64)>,
    pub blob_area: Option<usize>,
    /// The position was filled in from neighboring frames.
    pub interpolated: bool,
}

impl Detection {
    pub fn found(frame_index: usize, centroid: (f64, f64), area: usize) -> Self {
        Self {
            frame_index,
            centroid: Some(centroid),
            blob_area: Some(area),
            interpolated: false,
        }
    }

    pub fn missing(frame_index: usize) -> Self {
        Self {
            frame_index,
            centroid: None,
            blob_area: None,
            interpolated: false,
        }
    }

    /// Detected directly in this frame (not interpolated).
    pub fn is_found(&self) -> bool {
        self.centroid.is_some() && !self.interpolated
    }

    pub fn has_position(&self) -> bool {
        self.centroid.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerParams {
    /// Absolute intensity difference that marks a pixel as foreground.
    pub diff_threshold: f64,
    pub min_blob_area: usize,
    /// Name of a registered [`BackgroundEstimator`].
    pub background: String,
    /// Name of a registered [`Locator`].
    pub locator: String,
    /// Search half-width for the block-matching locator.
    pub search_radius: usize,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self {
            diff_threshold: DEFAULT_DIFF_THRESHOLD,
            min_blob_area: DEFAULT_MIN_BLOB_AREA,
            background: DEFAULT_BACKGROUND.to_string(),
            locator: DEFAULT_LOCATOR.to_string(),
            search_radius: DEFAULT_SEARCH_RADIUS,
        }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.diff_threshold > 0.0 && self.diff_threshold < 1.0) {
            return Err(Error::Parameter(format!(
                "diff threshold must be in (0, 1), got {}",
                self.diff_threshold
            )));
        }
        if self.min_blob_area == 0 {
            return Err(Error::Parameter("min blob area must be at least 1".into()));
        }
        backgrounds().create(&self.background)?;
        locators().create(&self.locator)?;
        Ok(())
    }
}

/// Estimate of the static scene behind the moving object.
pub trait BackgroundEstimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn estimate(&self, frames: &[Frame]) -> Result<Frame>;
}

/// Produces one raw detection per frame (before gap filling).
pub trait Locator: Send + Sync {
    fn name(&self) -> &'static str;
    fn locate(&self, frames: &[Frame], background: &Frame, params: &TrackerParams) -> Result<Vec<Detection>>;
}

/// Largest difference blob in every frame independently.
pub struct Subtraction;

impl Locator for Subtraction {
    fn name(&self) -> &'static str {
        "subtraction"
    }

    fn locate(&self, frames: &[Frame], background: &Frame, params: &TrackerParams) -> Result<Vec<Detection>> {
        frames
            .iter()
            .enumerate()
            .map(|(t, f)| {
                let mut d = detect(f, background, params)?;
                d.frame_index = t;
                Ok(d)
            })
            .collect()
    }
}

/// Seeds a block on the first difference blob, then follows it from frame
/// to frame by block matching. Falls back to subtraction whenever the
/// search window would leave the frame.
pub struct BlockMatching;

impl Locator for BlockMatching {
    fn name(&self) -> &'static str {
        "block_match"
    }

    fn locate(&self, frames: &[Frame], background: &Frame, params: &TrackerParams) -> Result<Vec<Detection>> {
        let mut out = Vec::with_capacity(frames.len());
        let mut state: Option<(BlockBox, (f64, f64), usize)> = None;
        for (t, frame) in frames.iter().enumerate() {
            if let (Some((bx, c, area)), Some(prev)) = (state, t.checked_sub(1).map(|p| &frames[p])) {
                let r = params.search_radius;
                let fits =
                    bx.x >= r && bx.y >= r && bx.x + bx.w + r <= frame.width() && bx.y + bx.h + r <= frame.height();
                if fits {
                    let (dx, dy) = block_match(prev, frame, bx, r)?;
                    let moved = BlockBox::new((bx.x as isize + dx) as usize, (bx.y as isize + dy) as usize, bx.w, bx.h);
                    let c = (c.0 + dx as f64, c.1 + dy as f64);
                    state = Some((moved, c, area));
                    out.push(Detection::found(t, c, area));
                    continue;
                }
            }
            match largest_blob(frame, background, params)? {
                Some(blob) => {
                    let (x0, y0, x1, y1) = blob.bounds;
                    let bx = BlockBox::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1);
                    state = Some((bx, blob.centroid, blob.area));
                    out.push(Detection::found(t, blob.centroid, blob.area));
                }
                None => {
                    state = None;
                    out.push(Detection::missing(t));
                }
            }
        }
        Ok(out)
    }
}

pub const DEFAULT_BACKGROUND: &str = "temporal_median";
pub const DEFAULT_LOCATOR: &str = "subtraction";

pub fn backgrounds() -> Registry<dyn BackgroundEstimator> {
    let mut reg: Registry<dyn BackgroundEstimator> = Registry::new("background mode");
    reg.register("first_frame", || Box::new(FirstFrame))
        .register("temporal_median", || Box::new(TemporalMedian));
    reg
}

pub fn locators() -> Registry<dyn Locator> {
    let mut reg: Registry<dyn Locator> = Registry::new("locator");
    reg.register("subtraction", || Box::new(Subtraction))
        .register("block_match", || Box::new(BlockMatching));
    reg
}

pub fn estimate_background(frames: &[Frame], mode: &str) -> Result<Frame> {
    backgrounds().create(mode)?.estimate(frames)
}

/// Per-frame positions with derived velocity and acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub meta: VideoMeta,
    pub points: Vec<Detection>,
    /// Pixels per second.
    pub velocity: Vec<Option<Vector>>,
    /// Pixels per second squared.
    pub acceleration: Vec<Option<Vector>>,
}

impl Trajectory {
    /// Assemble from raw detections: fill interior gaps, then differentiate.
    pub fn from_detections(meta: VideoMeta, raw: &[Detection]) -> Result<Self> {
        if raw.len() != meta.frame_count {
            return Err(Error::Parameter(format!(
                "{} detections for {} frames",
                raw.len(),
                meta.frame_count
            )));
        }
        let points = fill_gaps(raw);
        let positions: Vec<_> = points.iter().map(|d| d.centroid).collect();
        let (velocity, acceleration) = kinematics(&positions, meta.fps);
        Ok(Self {
            meta,
            points,
            velocity,
            acceleration,
        })
    }

    pub fn positions(&self) -> Vec<Option<(f64, f64)>> {
        self.points.iter().map(|d| d.centroid).collect()
    }

    pub fn interpolated_flags(&self) -> Vec<bool> {
        self.points.iter().map(|d| d.interpolated).collect()
    }

    pub fn found_count(&self) -> usize {
        self.points.iter().filter(|d| d.is_found()).count()
    }
}

/// Background estimate, per-frame location, gap filling and kinematics.
pub fn track(frames: &[Frame], meta: &VideoMeta, params: &TrackerParams) -> Result<Trajectory> {
    params.validate()?;
    if frames.len() < 3 {
        return Err(Error::Parameter(format!(
            "tracking needs at least 3 frames, got {}",
            frames.len()
        )));
    }
    if frames.len() != meta.frame_count {
        return Err(Error::Parameter(format!(
            "{} frames but metadata says {}",
            frames.len(),
            meta.frame_count
        )));
    }
    let background = estimate_background(frames, &params.background)?;
    let raw = locators()
        .create(&params.locator)?
        .locate(frames, &background, params)?;
    let found = raw.iter().filter(|d| d.is_found()).count();
    if found < 2 {
        return Err(Error::Tracking(format!(
            "insufficient detections: object found in {found} of {} frames",
            frames.len()
        )));
    }
    Trajectory::from_detections(*meta, &raw)
}
