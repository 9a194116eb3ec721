use super::Detection;

/// Fill interior runs of missing positions by linear interpolation in the
/// frame index between the flanking positions. Leading and trailing runs
/// stay empty. Filled entries are flagged `interpolated`.
pub fn fill_gaps(points: &[Detection]) -> Vec<Detection> {
    let mut out = points.to_vec();
    let mut last: Option<usize> = None;
    for t in 0..points.len() {
        let Some(p1) = points[t].centroid else {
            continue;
        };
        if let Some(s) = last {
            if t > s + 1 {
                let p0 = points[s].centroid.expect("flank has a position");
                let span = (t - s) as f64;
                for (k, d) in out.iter_mut().enumerate().take(t).skip(s + 1) {
                    let w = (k - s) as f64 / span;
                    d.centroid = Some((p0.0 + w * (p1.0 - p0.0), p0.1 + w * (p1.1 - p0.1)));
                    d.blob_area = None;
                    d.interpolated = true;
                }
            }
        }
        last = Some(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(t: usize, p: Option<(f64, f64)>) -> Detection {
        match p {
            Some(c) => Detection::found(t, c, 1),
            None => Detection::missing(t),
        }
    }

    #[test]
    fn no_gaps_unchanged() {
        let pts: Vec<_> = (0..4).map(|t| at(t, Some((t as f64, 0.0)))).collect();
        assert_eq!(fill_gaps(&pts), pts);
    }

    #[test]
    fn midpoint() {
        let pts = vec![at(0, Some((0.0, 0.0))), at(1, None), at(2, Some((2.0, 4.0)))];
        let out = fill_gaps(&pts);
        assert_eq!(out[1].centroid, Some((1.0, 2.0)));
        assert!(out[1].interpolated && !out[1].is_found());
        assert!(out[0].is_found() && out[2].is_found());
    }

    #[test]
    fn run_of_three() {
        let mut pts = vec![at(0, Some((0.0, 0.0)))];
        pts.extend((1..4).map(|t| at(t, None)));
        pts.push(at(4, Some((8.0, 0.0))));
        let xs: Vec<f64> = fill_gaps(&pts)[1..4].iter().map(|d| d.centroid.unwrap().0).collect();
        assert_eq!(xs, vec![2.0, 4.0, 6.0]);
    }

    #[test]
    fn edges_stay_empty() {
        let pts = vec![at(0, None), at(1, Some((1.0, 1.0))), at(2, None)];
        let out = fill_gaps(&pts);
        assert_eq!(out[0].centroid, None);
        assert_eq!(out[2].centroid, None);
        assert!(!out[0].interpolated && !out[2].interpolated);
    }
}
