//! Finite-difference velocity and acceleration.
//!
//! Interior frames use central differences. The first and last frames use
//! the one-sided stencils `p1 - p0` and `p2 - 2 p1 + p0` (mirrored at the
//! end). A value is left undefined when any stencil position is missing.

pub type Vector = (f64, f64);

/// Per-frame velocity (px/s) and acceleration (px/s^2).
pub fn kinematics(positions: &[Option<Vector>], fps: f64) -> (Vec<Option<Vector>>, Vec<Option<Vector>>) {
    let n = positions.len();
    let p = |t: usize| positions[t];
    let lin = |a: Vector, b: Vector, s: f64| ((b.0 - a.0) * s, (b.1 - a.1) * s);
    let second = |a: Vector, b: Vector, c: Vector, s: f64| ((a.0 - 2.0 * b.0 + c.0) * s, (a.1 - 2.0 * b.1 + c.1) * s);
    let fps2 = fps * fps;

    let velocity = (0..n)
        .map(|t| {
            if n < 2 {
                None
            } else if t == 0 {
                Some(lin(p(0)?, p(1)?, fps))
            } else if t == n - 1 {
                Some(lin(p(t - 1)?, p(t)?, fps))
            } else {
                Some(lin(p(t - 1)?, p(t + 1)?, 0.5 * fps))
            }
        })
        .collect();

    let acceleration = (0..n)
        .map(|t| {
            if n < 3 {
                None
            } else if t == 0 {
                Some(second(p(2)?, p(1)?, p(0)?, fps2))
            } else if t == n - 1 {
                Some(second(p(t)?, p(t - 1)?, p(t - 2)?, fps2))
            } else {
                Some(second(p(t + 1)?, p(t)?, p(t - 1)?, fps2))
            }
        })
        .collect();

    (velocity, acceleration)
}
