//! Grayscale frames, PGM sequences on disk, and the synthetic scene
//! generator.

mod pgm;
mod scene;
mod sequence;

pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm};
pub use scene::{generate_scene, Background, SceneSpec, SceneTruth};
pub use sequence::{frame_file_name, load_sequence, read_meta, save_sequence, write_meta, SidecarFields, META_FILE};

use crate::error::{Error, Result};

/// One grayscale image with intensities in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    index: usize,
    data: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "frame dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Parameter(format!(
                "frame data has {} values, expected {}x{} = {}",
                data.len(),
                width,
                height,
                width * height
            )));
        }
        Ok(Self {
            width,
            height,
            index: 0,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0, "empty frame");
        Self {
            width,
            height,
            index: 0,
            data: vec![value; width * height],
        }
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.index = index;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Intensity at column `x`, row `y`.
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn same_shape(&self, other: &Frame) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_shape(&self, other: &Frame) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "frame dimensions differ: {}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )))
        }
    }

    pub fn clamp_unit(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    /// Round every intensity to the nearest 8-bit level, as a save/load
    /// round trip would.
    pub fn quantized(&self) -> Frame {
        let data = self.data.iter().map(|&v| quantize(v) as f64 / 255.0).collect();
        Frame { data, ..*self }
    }
}

/// Nearest 8-bit level of a `[0, 1]` intensity (values outside are clamped).
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Length and rate of a frame sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VideoMeta {
    pub frame_count: usize,
    pub fps: f64,
    pub width: usize,
    pub height: usize,
}

impl VideoMeta {
    pub fn new(frame_count: usize, fps: f64, width: usize, height: usize) -> Result<Self> {
        let meta = Self {
            frame_count,
            fps,
            width,
            height,
        };
        meta.validate()?;
        Ok(meta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.frame_count == 0 {
            return Err(Error::Parameter("frame_count must be positive".into()));
        }
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(Error::Parameter(format!(
                "fps must be finite and positive, got {}",
                self.fps
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Parameter("frame dimensions must be positive".into()));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.frame_count as f64 / self.fps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length() {
        assert!(Frame::new(2, 2, vec![0.0; 3]).is_err());
        assert!(Frame::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn quantize_levels() {
        assert_eq!(quantize(1.0), 255);
        assert_eq!(quantize(0.0), 0);
        assert_eq!(quantize(-0.2), 0);
        assert_eq!(quantize(128.0 / 255.0), 128);
    }

    #[test]
    fn meta_duration() {
        let m = VideoMeta::new(61, 24.32, 4, 4).unwrap();
        assert!((m.duration() - 61.0 / 24.32).abs() < 1e-12);
        assert!(VideoMeta::new(1, 0.0, 4, 4).is_err());
        assert!(VideoMeta::new(1, f64::INFINITY, 4, 4).is_err());
    }
}
