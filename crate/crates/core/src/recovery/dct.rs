//! Orthonormal 2D DCT-II, applied separably (rows, then columns).
//!
//! The 1D kernels come from `rustdct`, which computes the unnormalized
//! DCT-II `X_k = sum_n x_n cos(pi k (n + 1/2) / N)` and its DCT-III
//! counterpart. Scaling by `sqrt(1/N)` (k = 0) and `sqrt(2/N)` (k > 0)
//! makes the transform orthonormal.

use std::sync::Arc;

use rustdct::{DctPlanner, TransformType2And3};

use crate::error::{Error, Result};
use crate::frame_io::Frame;

/// Transform-domain coefficients of a frame, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPlane {
    pub width: usize,
    pub height: usize,
    pub coeffs: Vec<f64>,
}

impl CoeffPlane {
    pub fn new(width: usize, height: usize, coeffs: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || coeffs.len() != width * height {
            return Err(Error::Parameter(format!(
                "coefficient plane {width}x{height} with {} values",
                coeffs.len()
            )));
        }
        Ok(Self { width, height, coeffs })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            coeffs: vec![0.0; width * height],
        }
    }

    /// Number of coefficients with magnitude above `threshold`.
    pub fn support_size(&self, threshold: f64) -> usize {
        self.coeffs.iter().filter(|c| c.abs() > threshold).count()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// 1D orthonormal DCT of one length.
struct Dct1d {
    plan: Arc<dyn TransformType2And3<f64>>,
    dc_scale: f64,
    ac_scale: f64,
}

impl Dct1d {
    fn new(planner: &mut DctPlanner<f64>, n: usize) -> Self {
        Self {
            plan: planner.plan_dct2(n),
            dc_scale: (1.0 / n as f64).sqrt(),
            ac_scale: (2.0 / n as f64).sqrt(),
        }
    }

    fn forward(&self, buf: &mut [f64]) {
        self.plan.process_dct2(buf);
        buf[0] *= self.dc_scale;
        for v in &mut buf[1..] {
            *v *= self.ac_scale;
        }
    }

    fn inverse(&self, buf: &mut [f64]) {
        buf[0] *= 2.0 * self.dc_scale;
        for v in &mut buf[1..] {
            *v *= self.ac_scale;
        }
        self.plan.process_dct3(buf);
    }
}

/// Planned 2D transform for one frame size. Reuse it across iterations.
pub struct Dct2d {
    width: usize,
    height: usize,
    rows: Dct1d,
    cols: Dct1d,
}

impl Dct2d {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = DctPlanner::new();
        let rows = Dct1d::new(&mut planner, width);
        let cols = Dct1d::new(&mut planner, height);
        Self {
            width,
            height,
            rows,
            cols,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn apply(&self, data: &mut [f64], inverse: bool) {
        assert_eq!(data.len(), self.width * self.height, "buffer size");
        for row in data.chunks_exact_mut(self.width) {
            if inverse {
                self.rows.inverse(row);
            } else {
                self.rows.forward(row);
            }
        }
        let mut col = vec![0.0; self.height];
        for x in 0..self.width {
            for (y, c) in col.iter_mut().enumerate() {
                *c = data[y * self.width + x];
            }
            if inverse {
                self.cols.inverse(&mut col);
            } else {
                self.cols.forward(&mut col);
            }
            for (y, c) in col.iter().enumerate() {
                data[y * self.width + x] = *c;
            }
        }
    }

    /// In-place forward transform of a row-major `width x height` buffer.
    pub fn forward(&self, data: &mut [f64]) {
        self.apply(data, false);
    }

    pub fn inverse(&self, data: &mut [f64]) {
        self.apply(data, true);
    }
}

pub fn dct2(frame: &Frame) -> CoeffPlane {
    let plan = Dct2d::new(frame.width(), frame.height());
    let mut coeffs = frame.data().to_vec();
    plan.forward(&mut coeffs);
    CoeffPlane {
        width: frame.width(),
        height: frame.height(),
        coeffs,
    }
}

pub fn idct2(plane: &CoeffPlane) -> Frame {
    let plan = Dct2d::new(plane.width, plane.height);
    let mut data = plane.coeffs.clone();
    plan.inverse(&mut data);
    Frame::new(plane.width, plane.height, data).expect("plane dimensions are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;
    use std::f64::consts::PI;

    fn random(w: usize, h: usize, seed: u64) -> Vec<f64> {
        let mut r = XorShift64Star::new(seed);
        (0..w * h).map(|_| r.next_f64()).collect()
    }

    /// Direct evaluation of the orthonormal DCT-II double sum.
    fn naive_dct2(data: &[f64], w: usize, h: usize) -> Vec<f64> {
        let norm = |k: usize, n: usize| {
            if k == 0 {
                (1.0 / n as f64).sqrt()
            } else {
                (2.0 / n as f64).sqrt()
            }
        };
        let mut out = vec![0.0; w * h];
        for v in 0..h {
            for u in 0..w {
                let mut acc = 0.0;
                for y in 0..h {
                    for x in 0..w {
                        acc += data[y * w + x]
                            * (PI * u as f64 * (x as f64 + 0.5) / w as f64).cos()
                            * (PI * v as f64 * (y as f64 + 0.5) / h as f64).cos();
                    }
                }
                out[v * w + u] = norm(u, w) * norm(v, h) * acc;
            }
        }
        out
    }

    #[test]
    fn matches_naive_double_sum() {
        for (w, h, seed) in [(8, 8, 1), (8, 8, 2), (5, 7, 3), (1, 4, 4)] {
            let data = random(w, h, seed);
            let fast = dct2(&Frame::new(w, h, data.clone()).unwrap());
            let slow = naive_dct2(&data, w, h);
            for (a, b) in fast.coeffs.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-9, "{w}x{h}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn constant_frame_is_dc_only() {
        let (w, h, c) = (6, 4, 0.37);
        let plane = dct2(&Frame::filled(w, h, c));
        assert!((plane.coeffs[0] - c * ((w * h) as f64).sqrt()).abs() < 1e-12);
        assert!(plane.coeffs[1..].iter().all(|v| v.abs() < 1e-12));
        let back = idct2(&plane);
        assert!(back.data().iter().all(|v| (v - c).abs() < 1e-12));
    }

    #[test]
    fn zeros_map_to_zeros() {
        let f = idct2(&CoeffPlane::zeros(4, 3));
        assert!(f.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn round_trip_and_parseval() {
        let f = Frame::new(8, 8, random(8, 8, 11)).unwrap();
        let plane = dct2(&f);
        let back = idct2(&plane);
        let err = f
            .data()
            .iter()
            .zip(back.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9);
        let fnorm = f.data().iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((plane.norm() - fnorm).abs() <= 1e-9 * fnorm);
    }

    #[test]
    fn adjoint_identity() {
        let a = CoeffPlane::new(8, 8, random(8, 8, 21)).unwrap();
        let f = Frame::new(8, 8, random(8, 8, 22)).unwrap();
        let lhs: f64 = idct2(&a).data().iter().zip(f.data()).map(|(x, y)| x * y).sum();
        let rhs: f64 = a.coeffs.iter().zip(&dct2(&f).coeffs).map(|(x, y)| x * y).sum();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
    }
}
