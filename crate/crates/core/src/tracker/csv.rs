//! Trajectory CSV: `frame,t,x,y,vx,vy,ax,ay,found,interpolated`.
//!
//! One row per frame, LF line endings, absent values left empty, reals
//! printed with six decimals, flags as `true`/`false`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Trajectory;
use crate::error::{Error, Result};

pub const TRAJECTORY_HEADER: &str = "frame,t,x,y,vx,vy,ax,ay,found,interpolated";

fn pair(out: &mut String, v: Option<(f64, f64)>) {
    match v {
        Some((a, b)) => {
            let _ = write!(out, ",{a:.6},{b:.6}");
        }
        None => out.push_str(",,"),
    }
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, d) in traj.points.iter().enumerate() {
        let _ = write!(out, "{t},{:.6}", t as f64 / traj.meta.fps);
        pair(&mut out, d.centroid);
        pair(&mut out, traj.velocity[t]);
        pair(&mut out, traj.acceleration[t]);
        let _ = writeln!(out, ",{},{}", d.is_found(), d.interpolated);
    }
    out
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    fs::write(path, trajectory_csv(traj)).map_err(|e| Error::io(path, e))
}

/// Per-frame positions from a trajectory CSV, `None` where `x`/`y` are empty.
pub fn parse_trajectory_positions(text: &str) -> Result<Vec<Option<(f64, f64)>>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(TRAJECTORY_HEADER) {
        return Err(Error::Format(format!(
            "trajectory CSV must start with `{TRAJECTORY_HEADER}`"
        )));
    }
    let mut out = Vec::new();
    for (row, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 10 {
            return Err(Error::Format(format!("trajectory row {row}: expected 10 columns")));
        }
        let frame: usize = cols[0]
            .parse()
            .map_err(|_| Error::Format(format!("trajectory row {row}: bad frame number")))?;
        if frame != out.len() {
            return Err(Error::Format(format!("trajectory rows out of order at frame {frame}")));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Format(format!("trajectory row {row}: bad number {s:?}")))
        };
        out.push(match (cols[2], cols[3]) {
            ("", "") => None,
            (x, y) => Some((num(x)?, num(y)?)),
        });
    }
    Ok(out)
}

pub fn read_trajectory_positions(path: &Path) -> Result<Vec<Option<(f64, f64)>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trajectory_positions(&text)
}
