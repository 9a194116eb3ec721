//! Exhaustive block matching by sum of absolute differences.

use crate::error::{Error, Result};
use crate::frame_io::Frame;

/// Axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockBox {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BlockBox {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }
}

fn sad(prev: &Frame, curr: &Frame, b: BlockBox, dx: isize, dy: isize) -> f64 {
    let mut acc = 0.0;
    for row in 0..b.h {
        let py = b.y + row;
        let cy = (py as isize + dy) as usize;
        for col in 0..b.w {
            let px = b.x + col;
            let cx = (px as isize + dx) as usize;
            acc += (prev.get(px, py) - curr.get(cx, cy)).abs();
        }
    }
    acc
}

/// Displacement `(dx, dy)` of the block `b` of `prev` within `curr`,
/// searching `|dx|, |dy| <= radius`. Ties go to the smaller `|dx| + |dy|`,
/// then to the smaller `(dy, dx)`.
pub fn block_match(prev: &Frame, curr: &Frame, b: BlockBox, radius: usize) -> Result<(isize, isize)> {
    prev.ensure_same_shape(curr)?;
    let (w, h) = (prev.width(), prev.height());
    if b.w == 0 || b.h == 0 || b.x + b.w > w || b.y + b.h > h {
        return Err(Error::Parameter(format!(
            "block {b:?} is empty or outside the {w}x{h} frame"
        )));
    }
    if b.x < radius || b.y < radius || b.x + b.w + radius > w || b.y + b.h + radius > h {
        return Err(Error::Parameter(format!(
            "search window of radius {radius} around {b:?} leaves the {w}x{h} frame"
        )));
    }
    let r = radius as isize;
    let mut best: Option<(f64, isize, isize, isize)> = None;
    for dy in -r..=r {
        for dx in -r..=r {
            let cost = sad(prev, curr, b, dx, dy);
            let key = (cost, dx.abs() + dy.abs(), dy, dx);
            let better = match best {
                None => true,
                Some(cur) => key.0 < cur.0 || (key.0 == cur.0 && (key.1, key.2, key.3) < (cur.1, cur.2, cur.3)),
            };
            if better {
                best = Some(key);
            }
        }
    }
    let (_, _, dy, dx) = best.expect("search window is never empty");
    Ok((dx, dy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;

    fn random(w: usize, h: usize, seed: u64) -> Frame {
        let mut r = XorShift64Star::new(seed);
        Frame::new(w, h, (0..w * h).map(|_| r.next_f64()).collect()).unwrap()
    }

    fn shifted(f: &Frame, dx: isize, dy: isize) -> Frame {
        let (w, h) = (f.width(), f.height());
        let mut data = vec![0.0; w * h];
        for y in 0..h as isize {
            for x in 0..w as isize {
                let (sx, sy) = (x - dx, y - dy);
                if sx >= 0 && sy >= 0 && sx < w as isize && sy < h as isize {
                    data[(y as usize) * w + x as usize] = f.get(sx as usize, sy as usize);
                }
            }
        }
        Frame::new(w, h, data).unwrap()
    }

    #[test]
    fn identical_frames() {
        let f = random(24, 24, 1);
        assert_eq!(block_match(&f, &f, BlockBox::new(8, 8, 6, 6), 4).unwrap(), (0, 0));
    }

    #[test]
    fn finds_known_shift() {
        let f = random(32, 32, 2);
        let g = shifted(&f, 3, 1);
        assert_eq!(block_match(&f, &g, BlockBox::new(10, 10, 8, 8), 5).unwrap(), (3, 1));
        let g = shifted(&f, -2, -4);
        assert_eq!(block_match(&f, &g, BlockBox::new(10, 10, 8, 8), 5).unwrap(), (-2, -4));
    }

    #[test]
    fn flat_frames_tie_to_zero() {
        let f = Frame::filled(16, 16, 0.5);
        assert_eq!(block_match(&f, &f, BlockBox::new(5, 5, 4, 4), 3).unwrap(), (0, 0));
    }

    #[test]
    fn window_out_of_bounds() {
        let f = Frame::filled(16, 16, 0.5);
        assert!(matches!(
            block_match(&f, &f, BlockBox::new(1, 5, 4, 4), 3),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            block_match(&f, &f, BlockBox::new(14, 5, 4, 4), 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn tie_order_prefers_small_then_row_major() {
        // a 1x1 bright block with bright copies at (+1, 0) and (0, -1)
        let mut p = Frame::filled(9, 9, 0.0);
        p.data_mut()[4 * 9 + 4] = 1.0;
        let mut c = Frame::filled(9, 9, 0.0);
        c.data_mut()[4 * 9 + 5] = 1.0;
        c.data_mut()[3 * 9 + 4] = 1.0;
        assert_eq!(block_match(&p, &c, BlockBox::new(4, 4, 1, 1), 2).unwrap(), (0, -1));
    }
}
