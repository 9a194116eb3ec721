//! Synthetic bouncing-ball videos with known ground truth.
//!
//! Pixel `(x, y)` has its center at integer coordinates `(x, y)`. A pixel
//! belongs to the ball when its center lies within `ball_radius` of the
//! ball center. The center advances one frame at a time as
//!
//! ```text
//! p(t+1) = p(t) + v(t) + g/2
//! v(t+1) = v(t) + g
//! ```
//!
//! which reproduces `p0 + v0 t + g t^2 / 2` exactly between bounces. When
//! the disk edge leaves `[0, dim - 1]` along an axis the position is
//! mirrored back about the contact line and that velocity component is
//! negated.

use super::{Frame, VideoMeta};
use crate::error::{Error, Result};
use crate::rng::{mix, XorShift64Star};

/// Texture noise is drawn uniformly from `[TEXTURE_BASE, TEXTURE_BASE + TEXTURE_SPAN)`.
pub const TEXTURE_BASE: f64 = 0.0;
pub const TEXTURE_SPAN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Background {
    /// Uniform black.
    Blank,
    /// Fixed seeded noise, smoothed once with a 3x3 box filter.
    Textured { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub ball_radius: f64,
    pub initial_position: (f64, f64),
    /// Pixels per frame.
    pub initial_velocity: (f64, f64),
    /// Pixels per frame squared.
    pub gravity: (f64, f64),
    pub background: Background,
    pub ball_intensity: f64,
    pub meta: VideoMeta,
}

/// 128x128, 30 frames at 30 fps: a radius-20 ball crossing a blank frame
/// under light gravity, bouncing off the walls. Large enough to stay
/// trackable down to a few percent of retained pixels.
impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            ball_radius: 20.0,
            initial_position: (32.0, 32.0),
            initial_velocity: (7.68, 4.48),
            gravity: (0.0, 0.2),
            background: Background::Blank,
            ball_intensity: 1.0,
            meta: VideoMeta {
                frame_count: 30,
                fps: 30.0,
                width: 128,
                height: 128,
            },
        }
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        self.meta.validate()?;
        let r = self.ball_radius;
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Parameter(format!("ball radius must be positive, got {r}")));
        }
        if !(0.0..=1.0).contains(&self.ball_intensity) {
            return Err(Error::Parameter(format!(
                "ball intensity {} outside [0, 1]",
                self.ball_intensity
            )));
        }
        let finite = |(a, b): (f64, f64)| a.is_finite() && b.is_finite();
        if !finite(self.initial_velocity) || !finite(self.gravity) {
            return Err(Error::Parameter("velocity and gravity must be finite".into()));
        }
        let (x, y) = self.initial_position;
        let max_x = self.meta.width as f64 - 1.0 - r;
        let max_y = self.meta.height as f64 - 1.0 - r;
        if !(x >= r && x <= max_x && y >= r && y <= max_y) {
            return Err(Error::Parameter(format!(
                "ball of radius {r} at ({x}, {y}) does not fit in a {}x{} frame",
                self.meta.width, self.meta.height
            )));
        }
        Ok(())
    }
}

/// Analytic ball trajectory of a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneTruth {
    pub centers: Vec<(f64, f64)>,
    /// `bounced[t]` is set when a reflection happened on the step into frame `t`.
    pub bounced: Vec<bool>,
}

impl SceneTruth {
    /// True when neither step touching frame `t` involved a reflection.
    pub fn smooth_at(&self, t: usize) -> bool {
        !self.bounced[t] && !self.bounced.get(t + 1).copied().unwrap_or(false)
    }
}

fn reflect(p: &mut f64, v: &mut f64, lo: f64, hi: f64) -> bool {
    let mut hit = false;
    // a very fast ball can cross both walls in one step
    for _ in 0..64 {
        if *p < lo {
            *p = 2.0 * lo - *p;
        } else if *p > hi {
            *p = 2.0 * hi - *p;
        } else {
            break;
        }
        *v = -*v;
        hit = true;
    }
    hit
}

impl SceneSpec {
    pub fn truth(&self) -> SceneTruth {
        let n = self.meta.frame_count;
        let r = self.ball_radius;
        let (hi_x, hi_y) = (self.meta.width as f64 - 1.0 - r, self.meta.height as f64 - 1.0 - r);
        let (mut px, mut py) = self.initial_position;
        let (mut vx, mut vy) = self.initial_velocity;
        let (gx, gy) = self.gravity;
        let mut centers = Vec::with_capacity(n);
        let mut bounced = Vec::with_capacity(n);
        centers.push((px, py));
        bounced.push(false);
        for _ in 1..n {
            px += vx + 0.5 * gx;
            py += vy + 0.5 * gy;
            vx += gx;
            vy += gy;
            let hx = reflect(&mut px, &mut vx, r, hi_x);
            let hy = reflect(&mut py, &mut vy, r, hi_y);
            centers.push((px, py));
            bounced.push(hx || hy);
        }
        SceneTruth { centers, bounced }
    }
}

fn background_image(spec: &SceneSpec, master_seed: u64) -> Vec<f64> {
    let (w, h) = (spec.meta.width, spec.meta.height);
    match spec.background {
        Background::Blank => vec![0.0; w * h],
        Background::Textured { seed } => {
            let mut rng = XorShift64Star::new(mix(master_seed, seed));
            let noise: Vec<f64> = (0..w * h)
                .map(|_| TEXTURE_BASE + TEXTURE_SPAN * rng.next_f64())
                .collect();
            box_filter_3x3(&noise, w, h)
        }
    }
}

/// 3x3 mean with edge pixels replicated outward.
fn box_filter_3x3(src: &[f64], w: usize, h: usize) -> Vec<f64> {
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for dy in -1isize..=1 {
                let yy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                for dx in -1isize..=1 {
                    let xx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                    acc += src[yy * w + xx];
                }
            }
            out[y * w + x] = acc / 9.0;
        }
    }
    out
}

/// Render every frame of the scene. Deterministic in `(spec, master_seed)`.
pub fn generate_scene(spec: &SceneSpec, master_seed: u64) -> Result<Vec<Frame>> {
    spec.validate()?;
    let (w, h) = (spec.meta.width, spec.meta.height);
    let background = background_image(spec, master_seed);
    let r2 = spec.ball_radius * spec.ball_radius;
    let frames = spec
        .truth()
        .centers
        .iter()
        .enumerate()
        .map(|(t, &(cx, cy))| {
            let mut data = background.clone();
            let x0 = (cx - spec.ball_radius).floor().max(0.0) as usize;
            let x1 = ((cx + spec.ball_radius).ceil() as usize).min(w - 1);
            let y0 = (cy - spec.ball_radius).floor().max(0.0) as usize;
            let y1 = ((cy + spec.ball_radius).ceil() as usize).min(h - 1);
            for y in y0..=y1 {
                let dy = y as f64 - cy;
                for x in x0..=x1 {
                    let dx = x as f64 - cx;
                    if dx * dx + dy * dy <= r2 {
                        data[y * w + x] = spec.ball_intensity;
                    }
                }
            }
            Frame::new(w, h, data).map(|f| f.with_index(t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: (f64, f64), g: (f64, f64), frames: usize) -> SceneSpec {
        SceneSpec {
            ball_radius: 4.0,
            initial_position: (20.0, 12.0),
            initial_velocity: v,
            gravity: g,
            background: Background::Blank,
            ball_intensity: 1.0,
            meta: VideoMeta::new(frames, 30.0, 64, 64).unwrap(),
        }
    }

    #[test]
    fn stationary_ball_gives_identical_frames() {
        let frames = generate_scene(&spec((0.0, 0.0), (0.0, 0.0), 5), 1).unwrap();
        for f in &frames[1..] {
            assert_eq!(f.data(), frames[0].data());
        }
    }

    #[test]
    fn constant_velocity_centers() {
        let truth = spec((1.0, 0.0), (0.0, 0.0), 10).truth();
        for (t, &(x, y)) in truth.centers.iter().enumerate() {
            assert_eq!(x, 20.0 + t as f64);
            assert_eq!(y, 12.0);
        }
        assert!(truth.bounced.iter().all(|b| !b));
    }

    #[test]
    fn gravity_displacements() {
        let truth = spec((0.0, 0.0), (0.0, 0.5), 5).truth();
        let dy: Vec<f64> = truth.centers.iter().map(|c| c.1 - 12.0).collect();
        assert_eq!(dy, vec![0.0, 0.25, 1.0, 2.25, 4.0]);
    }

    #[test]
    fn bounce_reflects_off_wall() {
        // right wall for the center is at 64 - 1 - 4 = 59
        let mut s = spec((3.0, 0.0), (0.0, 0.0), 15);
        s.initial_position = (55.0, 30.0);
        let truth = s.truth();
        assert_eq!(truth.centers[1].0, 58.0);
        assert_eq!(truth.centers[2].0, 2.0 * 59.0 - 61.0);
        assert!(truth.bounced[2] && !truth.bounced[1]);
        assert_eq!(truth.centers[3].0, 57.0 - 3.0);
        assert!(!truth.smooth_at(1) && !truth.smooth_at(2) && truth.smooth_at(3));
        for &(x, _) in &truth.centers {
            assert!((4.0..=59.0).contains(&x));
        }
    }

    #[test]
    fn ball_must_fit() {
        let mut s = spec((0.0, 0.0), (0.0, 0.0), 2);
        s.initial_position = (2.0, 30.0);
        assert!(generate_scene(&s, 0).is_err());
    }

    #[test]
    fn textured_is_deterministic_and_static() {
        let mut s = spec((1.0, 1.0), (0.0, 0.0), 3);
        s.background = Background::Textured { seed: 9 };
        let a = generate_scene(&s, 4).unwrap();
        let b = generate_scene(&s, 4).unwrap();
        assert_eq!(a, b);
        // far corner is never covered by the ball: identical across frames
        assert_eq!(a[0].get(63, 63), a[2].get(63, 63));
        assert!(a[0].data().iter().all(|v| (0.0..=1.0).contains(v)));
        let c = generate_scene(&s, 5).unwrap();
        assert_ne!(a[0].data(), c[0].data());
    }

    #[test]
    fn thresholded_centroid_matches_center() {
        let mut s = spec((1.3, 0.7), (0.0, 0.0), 8);
        s.ball_radius = 5.5;
        s.initial_position = (20.25, 17.6);
        let frames = generate_scene(&s, 0).unwrap();
        for (f, &(cx, cy)) in frames.iter().zip(&s.truth().centers) {
            let (mut sx, mut sy, mut n) = (0.0, 0.0, 0.0);
            for y in 0..f.height() {
                for x in 0..f.width() {
                    if f.get(x, y) > 0.5 {
                        sx += x as f64;
                        sy += y as f64;
                        n += 1.0;
                    }
                }
            }
            assert!((sx / n - cx).abs() < 0.5 && (sy / n - cy).abs() < 0.5);
        }
    }
}
