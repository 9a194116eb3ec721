//! Random pixel-retention masks and the row-selection half of the
//! measurement operator.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::frame_io::Frame;
use crate::rng::{mix, XorShift64Star};

/// A sorted set of retained linear pixel indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMask {
    width: usize,
    height: usize,
    percent: f64,
    seed: u64,
    indices: Vec<usize>,
}

/// Number of pixels kept at `percent` of `n`: round half away from zero,
/// never fewer than one.
pub fn retained_count(n: usize, percent: f64) -> usize {
    let m = (percent / 100.0 * n as f64).round() as usize;
    m.clamp(1, n)
}

pub fn validate_percent(percent: f64) -> Result<()> {
    if percent.is_finite() && percent > 0.0 && percent <= 100.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "retention percent must be in (0, 100], got {percent}"
        )))
    }
}

/// Mask seed for frame `t` when every frame gets its own mask.
pub fn frame_seed(master_seed: u64, frame_index: usize) -> u64 {
    mix(master_seed, frame_index as u64)
}

impl PixelMask {
    /// Draw `retained_count(w*h, percent)` distinct positions by a partial
    /// Fisher-Yates shuffle of `0..w*h`, then sort them.
    pub fn generate(width: usize, height: usize, percent: f64, seed: u64) -> Result<Self> {
        validate_percent(percent)?;
        if width == 0 || height == 0 {
            return Err(Error::Parameter("mask dimensions must be positive".into()));
        }
        let n = width * height;
        let m = retained_count(n, percent);
        let mut rng = XorShift64Star::new(seed);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..m {
            let j = i + rng.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(m);
        pool.sort_unstable();
        Ok(Self {
            width,
            height,
            percent,
            seed,
            indices: pool,
        })
    }

    /// Build a mask from explicit indices (sorted and checked).
    pub fn from_indices(width: usize, height: usize, percent: f64, seed: u64, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        let n = width * height;
        if indices.is_empty() {
            return Err(Error::Parameter("mask must retain at least one pixel".into()));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("mask indices contain duplicates".into()));
        }
        if indices[indices.len() - 1] >= n {
            return Err(Error::Parameter(format!(
                "mask index {} out of range for {width}x{height}",
                indices[indices.len() - 1]
            )));
        }
        Ok(Self {
            width,
            height,
            percent,
            seed,
            indices,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn percent(&self) -> f64 {
        self.percent
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Text form: a `width height percent seed count` header, then one index per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {}\n",
            self.width,
            self.height,
            self.percent,
            self.seed,
            self.indices.len()
        );
        for i in &self.indices {
            let _ = writeln!(s, "{i}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Format(format!("mask file: {what}"));
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty"))?.split_whitespace().collect();
        if header.len() != 5 {
            return Err(bad("header must be `width height percent seed count`"));
        }
        let width: usize = header[0].parse().map_err(|_| bad("width"))?;
        let height: usize = header[1].parse().map_err(|_| bad("height"))?;
        let percent: f64 = header[2].parse().map_err(|_| bad("percent"))?;
        let seed: u64 = header[3].parse().map_err(|_| bad("seed"))?;
        let count: usize = header[4].parse().map_err(|_| bad("count"))?;
        let indices = lines
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse().map_err(|_| bad(&format!("bad index {l:?}"))))
            .collect::<Result<Vec<usize>>>()?;
        if indices.len() != count {
            return Err(bad(&format!("header says {count} indices, found {}", indices.len())));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("indices not strictly increasing"));
        }
        Self::from_indices(width, height, percent, seed, indices).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    fn check_frame(&self, frame: &Frame) -> Result<()> {
        if frame.width() != self.width || frame.height() != self.height {
            return Err(Error::Parameter(format!(
                "mask is {}x{}, frame is {}x{}",
                self.width,
                self.height,
                frame.width(),
                frame.height()
            )));
        }
        Ok(())
    }
}

/// File name of frame `index`'s mask inside a degraded sequence directory.
pub fn mask_file_name(index: usize) -> String {
    format!("mask_{index:05}.txt")
}

/// Shorthand for [`PixelMask::generate`].
pub fn make_mask(width: usize, height: usize, percent: f64, seed: u64) -> Result<PixelMask> {
    PixelMask::generate(width, height, percent, seed)
}

/// Retained pixel values of one frame together with the mask that chose them.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub mask: PixelMask,
    pub values: Vec<f64>,
    pub frame_index: usize,
}

impl MeasurementSet {
    pub fn new(mask: PixelMask, values: Vec<f64>, frame_index: usize) -> Result<Self> {
        if values.len() != mask.len() {
            return Err(Error::Parameter(format!(
                "{} values for a mask of {} pixels",
                values.len(),
                mask.len()
            )));
        }
        Ok(Self {
            mask,
            values,
            frame_index,
        })
    }
}

/// Gather the frame's intensities at the mask positions.
pub fn sample(frame: &Frame, mask: &PixelMask) -> Result<MeasurementSet> {
    mask.check_frame(frame)?;
    let data = frame.data();
    let values = mask.indices.iter().map(|&i| data[i]).collect();
    Ok(MeasurementSet {
        mask: mask.clone(),
        values,
        frame_index: frame.index(),
    })
}

/// Scatter measurements into an otherwise zero frame.
pub fn embed(meas: &MeasurementSet) -> Frame {
    let mask = &meas.mask;
    let mut data = vec![0.0; mask.width * mask.height];
    for (&i, &v) in mask.indices.iter().zip(&meas.values) {
        data[i] = v;
    }
    Frame::new(mask.width, mask.height, data)
        .expect("mask dimensions are validated at construction")
        .with_index(meas.frame_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_retention_keeps_everything() {
        let m = make_mask(4, 4, 100.0, 123).unwrap();
        assert_eq!(m.indices(), (0..16).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn one_percent_of_512_squared() {
        let m = make_mask(512, 512, 1.0, 5).unwrap();
        assert_eq!(m.len(), 2621);
        assert!(m.indices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn floor_of_one_pixel() {
        assert_eq!(make_mask(3, 3, 0.1, 0).unwrap().len(), 1);
        // 2.5 rounds away from zero
        assert_eq!(retained_count(10, 25.0), 3);
    }

    #[test]
    fn seeded_determinism() {
        let a = make_mask(8, 8, 50.0, 7).unwrap();
        let b = make_mask(8, 8, 50.0, 7).unwrap();
        let c = make_mask(8, 8, 50.0, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.indices(), c.indices());
    }

    #[test]
    fn percent_range() {
        for p in [0.0, -1.0, 100.5, f64::NAN] {
            assert!(matches!(make_mask(4, 4, p, 0), Err(Error::Parameter(_))));
        }
    }

    #[test]
    fn sample_constant_and_indexed() {
        let f = Frame::filled(5, 5, 0.3);
        let m = make_mask(5, 5, 40.0, 1).unwrap();
        assert!(sample(&f, &m).unwrap().values.iter().all(|&v| v == 0.3));

        let f = Frame::new(2, 2, (0..4).map(|i| i as f64 / 3.0).collect()).unwrap();
        let m = PixelMask::from_indices(2, 2, 50.0, 0, vec![3, 0]).unwrap();
        assert_eq!(sample(&f, &m).unwrap().values, vec![0.0, 1.0]);
    }

    #[test]
    fn sample_dimension_mismatch() {
        let m = make_mask(4, 4, 50.0, 1).unwrap();
        assert!(matches!(
            sample(&Frame::filled(4, 5, 0.0), &m),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn embed_single_index() {
        let m = PixelMask::from_indices(3, 3, 11.0, 0, vec![5]).unwrap();
        let f = embed(&MeasurementSet::new(m, vec![0.7], 0).unwrap());
        for (i, &v) in f.data().iter().enumerate() {
            assert_eq!(v, if i == 5 { 0.7 } else { 0.0 });
        }
    }

    #[test]
    fn embed_full_mask_is_identity() {
        let f = Frame::new(3, 2, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let m = make_mask(3, 2, 100.0, 0).unwrap();
        assert_eq!(embed(&sample(&f, &m).unwrap()), f);
    }

    #[test]
    fn mask_text_format() {
        let m = PixelMask::from_indices(4, 2, 37.5, 99, vec![6, 1, 3]).unwrap();
        assert_eq!(m.to_text(), "4 2 37.5 99 3\n1\n3\n6\n");
        assert_eq!(PixelMask::from_text(&m.to_text()).unwrap(), m);
        assert!(PixelMask::from_text("4 2 37.5 99 2\n3\n1\n").is_err());
        assert!(PixelMask::from_text("4 2 37.5 99 2\n1\n").is_err());
    }
}
