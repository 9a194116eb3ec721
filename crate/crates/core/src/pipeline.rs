//! End-to-end experiment: degrade a video at several retention levels,
//! rebuild it, track the object in both versions, and write the reports.
//!
//! Output layout under `out_dir`:
//!
//! ```text
//! run_config.txt
//! original/frame_%05d.pgm        (synthetic input only)
//! p<percent>/frame_%05d.pgm
//! trajectory_original.csv
//! trajectory_p<percent>.csv
//! overlay_p<percent>.svg
//! metrics.csv  timing.csv  quality.csv
//! FAILED                         (only when a stage failed)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::constants::DEFAULT_PERCENTS;
use crate::error::{Error, Result};
use crate::frame_io::{generate_scene, load_sequence, save_sequence, Background, Frame, SceneSpec, VideoMeta};
use crate::measurement::{frame_seed, make_mask, sample, validate_percent, MeasurementSet, PixelMask};
use crate::metrics::{mean_psnr, metrics_csv, psnr_sequence, quality_csv, timing_csv, trajectory_rmse, QualityReport};
use crate::recovery::{reconstructors, SolverParams, DEFAULT_RECONSTRUCTOR};
use crate::svg::overlay_svg;
use crate::tracker::{track, write_trajectory_csv, TrackerParams, Trajectory};

pub const FAILED_MARKER: &str = "FAILED";

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    /// A directory of `frame_%05d.pgm` plus `meta.txt`.
    Directory(PathBuf),
    Synthetic(SceneSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    pub percents: Vec<f64>,
    pub master_seed: u64,
    pub solver: SolverParams,
    pub tracker: TrackerParams,
    /// Name of a registered reconstructor.
    pub reconstructor: String,
    pub out_dir: PathBuf,
    /// One mask (that of frame 0) for every frame instead of one per frame.
    pub shared_mask: bool,
    /// Reconstruction threads; 0 lets rayon decide.
    pub workers: usize,
}

impl RunConfig {
    pub fn new(input: InputSource, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            input,
            percents: DEFAULT_PERCENTS.to_vec(),
            master_seed: 0,
            solver: SolverParams::default(),
            tracker: TrackerParams::default(),
            reconstructor: DEFAULT_RECONSTRUCTOR.to_string(),
            out_dir: out_dir.into(),
            shared_mask: false,
            workers: 0,
        }
    }
}

/// Validate, sort ascending and drop duplicates.
pub fn normalize_percents(percents: &[f64]) -> Result<Vec<f64>> {
    if percents.is_empty() {
        return Err(Error::Parameter("no retention percentages given".into()));
    }
    for &p in percents {
        validate_percent(p)?;
    }
    let mut out = percents.to_vec();
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup();
    Ok(out)
}

pub fn percent_label(percent: f64) -> String {
    format!("p{percent}")
}

/// Per-frame masks for one retention level. Frame `t` uses the seed
/// `mix(master_seed, t)` regardless of the level, so a lower level keeps a
/// subset of the pixels kept at a higher one.
pub fn frame_masks(
    width: usize,
    height: usize,
    frames: usize,
    percent: f64,
    master_seed: u64,
    shared: bool,
) -> Result<Vec<PixelMask>> {
    if shared {
        let mask = make_mask(width, height, percent, frame_seed(master_seed, 0))?;
        return Ok(vec![mask; frames]);
    }
    (0..frames)
        .map(|t| make_mask(width, height, percent, frame_seed(master_seed, t)))
        .collect()
}

/// Results of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub meta: VideoMeta,
    pub original: Trajectory,
    pub levels: Vec<LevelResult>,
}

#[derive(Debug, Clone)]
pub struct LevelResult {
    pub quality: QualityReport,
    pub trajectory: Trajectory,
}

impl RunSummary {
    pub fn reports(&self) -> Vec<QualityReport> {
        self.levels.iter().map(|l| l.quality.clone()).collect()
    }
}

fn staged<T>(stage: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Stage {
        stage,
        source: Box::new(e),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn config_text(config: &RunConfig, percents: &[f64]) -> String {
    let mut s = String::new();
    match &config.input {
        InputSource::Directory(p) => {
            let _ = writeln!(s, "input=dir:{}", p.display());
        }
        InputSource::Synthetic(spec) => {
            let _ = writeln!(s, "input=synthetic");
            let _ = writeln!(s, "scene.width={}", spec.meta.width);
            let _ = writeln!(s, "scene.height={}", spec.meta.height);
            let _ = writeln!(s, "scene.frames={}", spec.meta.frame_count);
            let _ = writeln!(s, "scene.fps={}", spec.meta.fps);
            let _ = writeln!(s, "scene.radius={}", spec.ball_radius);
            let _ = writeln!(
                s,
                "scene.position={},{}",
                spec.initial_position.0, spec.initial_position.1
            );
            let _ = writeln!(
                s,
                "scene.velocity={},{}",
                spec.initial_velocity.0, spec.initial_velocity.1
            );
            let _ = writeln!(s, "scene.gravity={},{}", spec.gravity.0, spec.gravity.1);
            let _ = writeln!(s, "scene.intensity={}", spec.ball_intensity);
            match spec.background {
                Background::Blank => {
                    let _ = writeln!(s, "scene.background=blank");
                }
                Background::Textured { seed } => {
                    let _ = writeln!(s, "scene.background=textured:{seed}");
                }
            }
        }
    }
    let pcts: Vec<String> = percents.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(s, "percents={}", pcts.join(","));
    let _ = writeln!(s, "seed={}", config.master_seed);
    let _ = writeln!(s, "shared_mask={}", config.shared_mask);
    let _ = writeln!(s, "reconstructor={}", config.reconstructor);
    let _ = writeln!(s, "lambda={}", config.solver.lambda);
    let _ = writeln!(s, "iters={}", config.solver.max_iters);
    let _ = writeln!(s, "tol={}", config.solver.tol);
    let _ = writeln!(s, "data_consistency={}", config.solver.enforce_data_consistency);
    let _ = writeln!(s, "continuation={}", config.solver.continuation);
    let _ = writeln!(s, "threshold={}", config.tracker.diff_threshold);
    let _ = writeln!(s, "min_area={}", config.tracker.min_blob_area);
    let _ = writeln!(s, "background={}", config.tracker.background);
    let _ = writeln!(s, "locator={}", config.tracker.locator);
    let _ = writeln!(s, "search_radius={}", config.tracker.search_radius);
    s
}

/// Rebuild frames from their measurements, in parallel when `workers`
/// allows. Output order follows the input. Returns the frames (not yet
/// quantized) and the wall-clock seconds spent.
pub fn reconstruct_measurements(
    measurements: &[MeasurementSet],
    reconstructor: &str,
    solver: &SolverParams,
    workers: usize,
) -> Result<(Vec<Frame>, f64)> {
    let reconstructor = reconstructors().create(reconstructor)?;
    let start = Instant::now();
    let run = || {
        measurements
            .par_iter()
            .map(|m| reconstructor.reconstruct(m, solver).map(|(g, _)| g))
            .collect::<Result<Vec<Frame>>>()
    };
    let rebuilt = if workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(run)?
    } else {
        run()?
    };
    Ok((rebuilt, start.elapsed().as_secs_f64()))
}

/// Degrade and rebuild every frame at one retention level.
pub fn reconstruct_level(frames: &[Frame], percent: f64, config: &RunConfig) -> Result<(Vec<Frame>, f64)> {
    let first = frames
        .first()
        .ok_or_else(|| Error::Parameter("no frames to reconstruct".into()))?;
    let masks = frame_masks(
        first.width(),
        first.height(),
        frames.len(),
        percent,
        config.master_seed,
        config.shared_mask,
    )?;
    let measurements = frames
        .iter()
        .zip(&masks)
        .map(|(f, m)| sample(f, m))
        .collect::<Result<Vec<_>>>()?;
    reconstruct_measurements(&measurements, &config.reconstructor, &config.solver, config.workers)
}

fn execute(config: &RunConfig) -> Result<RunSummary> {
    let percents = staged("config", normalize_percents(&config.percents))?;
    staged("config", config.solver.validate())?;
    staged("config", config.tracker.validate())?;
    staged("config", reconstructors().create(&config.reconstructor).map(|_| ()))?;
    let out = &config.out_dir;
    staged("output", fs::create_dir_all(out).map_err(|e| Error::io(out, e)))?;
    let _ = fs::remove_file(out.join(FAILED_MARKER));
    staged(
        "output",
        write_file(&out.join("run_config.txt"), &config_text(config, &percents)),
    )?;

    let (meta, original) = staged(
        "input",
        match &config.input {
            InputSource::Directory(dir) => load_sequence(dir),
            InputSource::Synthetic(spec) => generate_scene(spec, config.master_seed).and_then(|frames| {
                let frames: Vec<Frame> = frames.iter().map(Frame::quantized).collect();
                save_sequence(&frames, &spec.meta, &out.join("original"))?;
                Ok((spec.meta, frames))
            }),
        },
    )?;

    let original_traj = staged("track original", track(&original, &meta, &config.tracker))?;
    staged(
        "track original",
        write_trajectory_csv(&original_traj, &out.join("trajectory_original.csv")),
    )?;

    let mut levels = Vec::with_capacity(percents.len());
    for &percent in &percents {
        let label = percent_label(percent);
        let (rebuilt, seconds) = staged("reconstruct", reconstruct_level(&original, percent, config))?;
        let rebuilt: Vec<Frame> = rebuilt.iter().map(Frame::quantized).collect();
        staged("write frames", save_sequence(&rebuilt, &meta, &out.join(&label)))?;

        let per_frame = staged("metrics", psnr_sequence(&original, &rebuilt))?;
        let mean = staged("metrics", mean_psnr(&per_frame))?;

        let traj = staged("track", track(&rebuilt, &meta, &config.tracker))?;
        staged(
            "track",
            write_trajectory_csv(&traj, &out.join(format!("trajectory_{label}.csv"))),
        )?;
        let rmse = staged("metrics", trajectory_rmse(&original_traj, &traj))?;

        let svg = overlay_svg(
            meta.width,
            meta.height,
            &original_traj.positions(),
            &traj.positions(),
            &format!("original (red) vs {percent}% retained (blue)"),
        );
        staged("plot", write_file(&out.join(format!("overlay_{label}.svg")), &svg))?;

        levels.push(LevelResult {
            quality: QualityReport {
                percent,
                per_frame_psnr: per_frame,
                mean_psnr: mean,
                trajectory_rmse: rmse,
                elapsed_cs_seconds: seconds.max(f64::MIN_POSITIVE),
            },
            trajectory: traj,
        });
    }

    let reports: Vec<QualityReport> = levels.iter().map(|l| l.quality.clone()).collect();
    staged("report", write_file(&out.join("metrics.csv"), &metrics_csv(&reports)))?;
    staged("report", write_file(&out.join("timing.csv"), &timing_csv(&reports)))?;
    staged("report", write_file(&out.join("quality.csv"), &quality_csv(&reports)))?;

    Ok(RunSummary {
        meta,
        original: original_traj,
        levels,
    })
}

/// Run the whole experiment. On failure a `FAILED` file naming the stage
/// is left next to whatever was already written.
pub fn run_pipeline(config: &RunConfig) -> Result<RunSummary> {
    let result = execute(config);
    if let Err(e) = &result {
        if fs::create_dir_all(&config.out_dir).is_ok() {
            let _ = fs::write(config.out_dir.join(FAILED_MARKER), format!("{e}\n"));
        }
    }
    result
}
