//! Image quality and trajectory fidelity.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frame_io::Frame;
use crate::tracker::Trajectory;

/// Peak signal-to-noise ratio in dB with peak 1.0 on `[0, 1]` intensities.
/// Identical frames give `f64::INFINITY`.
pub fn psnr(reference: &Frame, test: &Frame) -> Result<f64> {
    reference.ensure_same_shape(test)?;
    let mse = reference
        .data()
        .iter()
        .zip(test.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / reference.len() as f64;
    Ok(if mse == 0.0 { f64::INFINITY } else { -10.0 * mse.log10() })
}

/// Per-frame PSNR of two equally long sequences.
pub fn psnr_sequence(reference: &[Frame], test: &[Frame]) -> Result<Vec<f64>> {
    if reference.len() != test.len() {
        return Err(Error::Metric(format!(
            "sequences differ in length: {} vs {}",
            reference.len(),
            test.len()
        )));
    }
    reference.iter().zip(test).map(|(r, t)| psnr(r, t)).collect()
}

/// Arithmetic mean over the finite entries; infinite entries are skipped.
/// All-infinite input yields infinity.
pub fn mean_psnr(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Metric("mean of an empty PSNR list".into()));
    }
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Ok(f64::INFINITY);
    }
    Ok(finite.iter().sum::<f64>() / finite.len() as f64)
}

/// Root-mean-square Euclidean distance between positions, over frames
/// where both sequences have one.
pub fn position_rmse(reference: &[Option<(f64, f64)>], test: &[Option<(f64, f64)>]) -> Result<f64> {
    if reference.len() != test.len() {
        return Err(Error::Metric(format!(
            "trajectories differ in length: {} vs {}",
            reference.len(),
            test.len()
        )));
    }
    let (sum, count) = reference
        .iter()
        .zip(test)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .fold((0.0, 0usize), |(s, n), (a, b)| {
            let (dx, dy) = (a.0 - b.0, a.1 - b.1);
            (s + dx * dx + dy * dy, n + 1)
        });
    if count == 0 {
        return Err(Error::Metric("no frame has a position in both trajectories".into()));
    }
    Ok((sum / count as f64).sqrt())
}

pub fn trajectory_rmse(reference: &Trajectory, test: &Trajectory) -> Result<f64> {
    if reference.meta.frame_count != test.meta.frame_count {
        return Err(Error::Metric(format!(
            "frame counts differ: {} vs {}",
            reference.meta.frame_count, test.meta.frame_count
        )));
    }
    position_rmse(&reference.positions(), &test.positions())
}

/// Quality summary for one retention level.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub percent: f64,
    pub per_frame_psnr: Vec<f64>,
    pub mean_psnr: f64,
    pub trajectory_rmse: f64,
    pub elapsed_cs_seconds: f64,
}

/// `inf` for the identical-frames sentinel, six decimals otherwise.
pub fn format_db(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

pub const METRICS_HEADER: &str = "percent,frame,psnr_db";
pub const TIMING_HEADER: &str = "percent,total_cs_seconds,frames,seconds_per_frame";
pub const QUALITY_HEADER: &str = "percent,mean_psnr_db,trajectory_rmse_px";

/// Per-frame PSNR rows followed by one `percent,mean,<value>` row per level.
pub fn metrics_csv(reports: &[QualityReport]) -> String {
    let mut out = format!("{METRICS_HEADER}\n");
    for r in reports {
        for (t, v) in r.per_frame_psnr.iter().enumerate() {
            let _ = writeln!(out, "{},{t},{}", r.percent, format_db(*v));
        }
    }
    for r in reports {
        let _ = writeln!(out, "{},mean,{}", r.percent, format_db(r.mean_psnr));
    }
    out
}

pub fn timing_csv(reports: &[QualityReport]) -> String {
    let mut out = format!("{TIMING_HEADER}\n");
    for r in reports {
        let frames = r.per_frame_psnr.len();
        let _ = writeln!(
            out,
            "{},{:.6},{frames},{:.6}",
            r.percent,
            r.elapsed_cs_seconds,
            r.elapsed_cs_seconds / frames.max(1) as f64
        );
    }
    out
}

pub fn quality_csv(reports: &[QualityReport]) -> String {
    let mut out = format!("{QUALITY_HEADER}\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{:.6}", r.percent, format_db(r.mean_psnr), r.trajectory_rmse);
    }
    out
}
