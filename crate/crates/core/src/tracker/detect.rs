//! Frame differencing and largest-blob selection.

use super::{Detection, TrackerParams};
use crate::error::Result;
use crate::frame_io::Frame;

/// A 4-connected foreground component.
#[derive(Debug, Clone, PartialEq)]
pub struct Blob {
    pub area: usize,
    /// Smallest linear pixel index in the component.
    pub first_index: usize,
    pub centroid: (f64, f64),
    /// Inclusive bounding box `(x0, y0, x1, y1)`.
    pub bounds: (usize, usize, usize, usize),
}

/// Label 4-connected components of a boolean mask, in raster order of
/// their first pixel.
pub fn connected_components(mask: &[bool], width: usize, height: usize) -> Vec<Blob> {
    let mut visited = vec![false; mask.len()];
    let mut stack = Vec::new();
    let mut blobs = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || visited[start] {
            continue;
        }
        visited[start] = true;
        stack.push(start);
        let (mut area, mut sx, mut sy) = (0usize, 0.0, 0.0);
        let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
        while let Some(i) = stack.pop() {
            let (x, y) = (i % width, i / width);
            area += 1;
            sx += x as f64;
            sy += y as f64;
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
            let mut push = |j: usize| {
                if mask[j] && !visited[j] {
                    visited[j] = true;
                    stack.push(j);
                }
            };
            if x > 0 {
                push(i - 1);
            }
            if x + 1 < width {
                push(i + 1);
            }
            if y > 0 {
                push(i - width);
            }
            if y + 1 < height {
                push(i + width);
            }
        }
        blobs.push(Blob {
            area,
            first_index: start,
            centroid: (sx / area as f64, sy / area as f64),
            bounds: (x0, y0, x1, y1),
        });
    }
    blobs
}

/// Pixels whose absolute difference from the background exceeds `threshold`.
pub fn foreground_mask(frame: &Frame, background: &Frame, threshold: f64) -> Result<Vec<bool>> {
    frame.ensure_same_shape(background)?;
    Ok(frame
        .data()
        .iter()
        .zip(background.data())
        .map(|(f, b)| (f - b).abs() > threshold)
        .collect())
}

/// Largest qualifying blob of the difference image, ties to the blob that
/// starts first in raster order.
pub fn largest_blob(frame: &Frame, background: &Frame, params: &TrackerParams) -> Result<Option<Blob>> {
    let mask = foreground_mask(frame, background, params.diff_threshold)?;
    let mut best: Option<Blob> = None;
    // components arrive in increasing first_index, so `>` keeps the earliest on ties
    for blob in connected_components(&mask, frame.width(), frame.height()) {
        if blob.area >= params.min_blob_area && best.as_ref().is_none_or(|b| blob.area > b.area) {
            best = Some(blob);
        }
    }
    Ok(best)
}

pub fn detect(frame: &Frame, background: &Frame, params: &TrackerParams) -> Result<Detection> {
    Ok(match largest_blob(frame, background, params)? {
        Some(blob) => Detection::found(frame.index(), blob.centroid, blob.area),
        None => Detection::missing(frame.index()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paint(frame: &mut Frame, x0: usize, y0: usize, w: usize, h: usize, v: f64) {
        let width = frame.width();
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                frame.data_mut()[y * width + x] = v;
            }
        }
    }

    #[test]
    fn corner_square() {
        let bg = Frame::filled(10, 10, 0.0);
        let mut f = bg.clone();
        paint(&mut f, 0, 0, 3, 3, 1.0);
        let d = detect(&f, &bg, &TrackerParams::default()).unwrap();
        assert_eq!(d.centroid, Some((1.0, 1.0)));
        assert_eq!(d.blob_area, Some(9));
        assert!(d.is_found());
    }

    #[test]
    fn no_difference_no_detection() {
        let f = Frame::filled(6, 6, 0.4);
        let d = detect(&f, &f, &TrackerParams::default()).unwrap();
        assert!(!d.is_found());
        assert_eq!(d.centroid, None);
        assert_eq!(d.blob_area, None);
    }

    #[test]
    fn larger_blob_wins() {
        let bg = Frame::filled(20, 20, 0.0);
        let mut f = bg.clone();
        paint(&mut f, 1, 1, 3, 3, 1.0);
        paint(&mut f, 10, 12, 5, 5, 1.0);
        let d = detect(&f, &bg, &TrackerParams::default()).unwrap();
        assert_eq!(d.blob_area, Some(25));
        assert_eq!(d.centroid, Some((12.0, 14.0)));
    }

    #[test]
    fn equal_blobs_tie_to_first_in_raster_order() {
        let bg = Frame::filled(20, 20, 0.0);
        let mut f = bg.clone();
        paint(&mut f, 12, 2, 2, 2, 1.0);
        paint(&mut f, 1, 10, 2, 2, 1.0);
        let d = detect(&f, &bg, &TrackerParams::default()).unwrap();
        assert_eq!(d.centroid, Some((12.5, 2.5)));
    }

    #[test]
    fn diagonal_pixels_are_separate_components() {
        let mask = [true, false, false, true];
        let blobs = connected_components(&mask, 2, 2);
        assert_eq!(blobs.len(), 2);
        assert!(blobs.iter().all(|b| b.area == 1));
    }

    #[test]
    fn small_blobs_are_ignored() {
        let bg = Frame::filled(8, 8, 0.0);
        let mut f = bg.clone();
        paint(&mut f, 2, 2, 1, 3, 1.0);
        assert!(!detect(&f, &bg, &TrackerParams::default()).unwrap().is_found());
    }

    #[test]
    fn negative_differences_count() {
        let bg = Frame::filled(8, 8, 0.8);
        let mut f = bg.clone();
        paint(&mut f, 4, 4, 2, 2, 0.1);
        let d = detect(&f, &bg, &TrackerParams::default()).unwrap();
        assert_eq!(d.centroid, Some((4.5, 4.5)));
    }
}
