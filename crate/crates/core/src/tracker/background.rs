use super::BackgroundEstimator;
use crate::error::{Error, Result};
use crate::frame_io::Frame;

/// The first frame stands in for the empty scene.
pub struct FirstFrame;

impl BackgroundEstimator for FirstFrame {
    fn name(&self) -> &'static str {
        "first_frame"
    }

    fn estimate(&self, frames: &[Frame]) -> Result<Frame> {
        let first = frames
            .first()
            .ok_or_else(|| Error::Parameter("background needs at least one frame".into()))?;
        for f in frames {
            first.ensure_same_shape(f)?;
        }
        Ok(first.clone().with_index(0))
    }
}

/// Per-pixel median over time (lower median for an even count).
pub struct TemporalMedian;

impl BackgroundEstimator for TemporalMedian {
    fn name(&self) -> &'static str {
        "temporal_median"
    }

    fn estimate(&self, frames: &[Frame]) -> Result<Frame> {
        if frames.len() < 3 {
            return Err(Error::Parameter(format!(
                "temporal median background needs at least 3 frames, got {}",
                frames.len()
            )));
        }
        let first = &frames[0];
        for f in frames {
            first.ensure_same_shape(f)?;
        }
        let mid = (frames.len() - 1) / 2;
        let mut column = vec![0.0; frames.len()];
        let data = (0..first.len())
            .map(|i| {
                for (c, f) in column.iter_mut().zip(frames) {
                    *c = f.data()[i];
                }
                *column.select_nth_unstable_by(mid, |a, b| a.total_cmp(b)).1
            })
            .collect();
        Frame::new(first.width(), first.height(), data)
    }
}
