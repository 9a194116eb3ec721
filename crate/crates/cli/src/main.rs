//! `cstrack`: degrade a video to a fraction of its pixels, rebuild it by
//! sparse recovery in the DCT domain, and track a moving ball in it.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 I/O or file format error,
//! 4 numeric or solver error, 5 tracking error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cstrack::constants::{
    DEFAULT_DIFF_THRESHOLD, DEFAULT_LAMBDA, DEFAULT_MAX_ITERS, DEFAULT_MIN_BLOB_AREA, DEFAULT_SEARCH_RADIUS,
    DEFAULT_TOL,
};
use cstrack::frame_io::{generate_scene, load_sequence, save_sequence, Background, Frame, SceneSpec, VideoMeta};
use cstrack::measurement::{frame_seed, make_mask, mask_file_name, sample, PixelMask};
use cstrack::metrics::{format_db, mean_psnr, position_rmse, psnr_sequence};
use cstrack::pipeline::{percent_label, reconstruct_measurements, run_pipeline, InputSource, RunConfig};
use cstrack::recovery::{zero_fill, SolverParams, DEFAULT_RECONSTRUCTOR};
use cstrack::tracker::{
    read_trajectory_positions, track, write_trajectory_csv, TrackerParams, DEFAULT_BACKGROUND, DEFAULT_LOCATOR,
};
use cstrack::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "cstrack",
    version,
    about = "Compressive-sensing video reconstruction and ball tracking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Render a synthetic bouncing-ball video as a PGM sequence.
    Synth(SynthArgs),
    /// Keep a random fraction of each frame's pixels; write the
    /// zero-filled frames and their masks.
    Degrade(DegradeArgs),
    /// Rebuild a degraded sequence by l1 recovery in the DCT domain.
    Reconstruct(ReconstructArgs),
    /// Track the ball and write its trajectory CSV.
    Track(TrackArgs),
    /// Compare two sequences (PSNR) or two trajectory CSVs (RMSE).
    Metrics(MetricsArgs),
    /// Full experiment over a schedule of retention percentages.
    Pipeline(PipelineArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BackgroundKind {
    Blank,
    Textured,
}

#[derive(Args, Debug, Clone)]
struct SceneArgs {
    /// Frame width in pixels
    #[arg(long, default_value_t = 128)]
    width: usize,
    /// Frame height in pixels
    #[arg(long, default_value_t = 128)]
    height: usize,
    /// Number of frames
    #[arg(long, default_value_t = 30)]
    frames: usize,
    /// Frames per second
    #[arg(long, default_value_t = 30.0)]
    fps: f64,
    /// Ball radius in pixels
    #[arg(long, default_value_t = 20.0)]
    radius: f64,
    /// Initial center x
    #[arg(long, default_value_t = 32.0)]
    x: f64,
    /// Initial center y (downward)
    #[arg(long, default_value_t = 32.0)]
    y: f64,
    /// Initial x velocity, pixels per frame
    #[arg(long, default_value_t = 7.68, allow_negative_numbers = true)]
    vx: f64,
    /// Initial y velocity, pixels per frame
    #[arg(long, default_value_t = 4.48, allow_negative_numbers = true)]
    vy: f64,
    /// Horizontal acceleration, pixels per frame squared
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gx: f64,
    /// Vertical acceleration, pixels per frame squared
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    gy: f64,
    /// Scene background
    #[arg(long = "scene", value_enum, default_value_t = BackgroundKind::Blank)]
    scene_background: BackgroundKind,
    /// Seed of the textured background
    #[arg(long, default_value_t = 1)]
    texture_seed: u64,
    /// Ball intensity in [0, 1]
    #[arg(long, default_value_t = 1.0)]
    intensity: f64,
}

impl SceneArgs {
    fn spec(&self) -> SceneSpec {
        SceneSpec {
            ball_radius: self.radius,
            initial_position: (self.x, self.y),
            initial_velocity: (self.vx, self.vy),
            gravity: (self.gx, self.gy),
            background: match self.scene_background {
                BackgroundKind::Blank => Background::Blank,
                BackgroundKind::Textured => Background::Textured {
                    seed: self.texture_seed,
                },
            },
            ball_intensity: self.intensity,
            meta: VideoMeta {
                frame_count: self.frames,
                fps: self.fps,
                width: self.width,
                height: self.height,
            },
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// l1 weight of the final stage
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    lambda: f64,
    /// Iteration cap per frame
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    iters: usize,
    /// Relative-change stopping tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Do not copy the measured pixels back into the result
    #[arg(long)]
    no_data_consistency: bool,
    /// Solve at the final lambda from the start instead of decreasing it
    #[arg(long)]
    no_continuation: bool,
    /// Reconstruction method (ista, zero-fill)
    #[arg(long, default_value = DEFAULT_RECONSTRUCTOR)]
    method: String,
}

impl SolverArgs {
    fn params(&self) -> SolverParams {
        SolverParams {
            lambda: self.lambda,
            max_iters: self.iters,
            tol: self.tol,
            enforce_data_consistency: !self.no_data_consistency,
            continuation: !self.no_continuation,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct TrackerArgs {
    /// Foreground threshold on |frame - background|
    #[arg(long, default_value_t = DEFAULT_DIFF_THRESHOLD)]
    threshold: f64,
    /// Smallest blob accepted as the ball, in pixels
    #[arg(long, default_value_t = DEFAULT_MIN_BLOB_AREA)]
    min_area: usize,
    /// Background model (temporal_median, first_frame)
    #[arg(long, default_value = DEFAULT_BACKGROUND)]
    background: String,
    /// Locator (subtraction, block_match)
    #[arg(long, default_value = DEFAULT_LOCATOR)]
    locator: String,
    /// Block-matching search radius in pixels
    #[arg(long, default_value_t = DEFAULT_SEARCH_RADIUS)]
    search_radius: usize,
}

impl TrackerArgs {
    fn params(&self) -> TrackerParams {
        TrackerParams {
            diff_threshold: self.threshold,
            min_blob_area: self.min_area,
            background: self.background.clone(),
            locator: self.locator.clone(),
            search_radius: self.search_radius,
        }
    }
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DegradeArgs {
    /// Input sequence directory
    #[arg(long)]
    input: PathBuf,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Percentage of pixels kept, in (0, 100]
    #[arg(long)]
    percent: f64,
    /// Master seed; frame t uses a seed derived from (seed, t)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use frame 0's mask for every frame
    #[arg(long)]
    shared_mask: bool,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// Degraded sequence directory (frames, masks, meta.txt)
    #[arg(long)]
    input: PathBuf,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Original sequence; when given, PSNR is reported
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct TrackArgs {
    /// Sequence directory
    #[arg(long)]
    input: PathBuf,
    /// Trajectory CSV to write
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    tracker: TrackerArgs,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    /// Reference sequence directory or trajectory CSV
    #[arg(long)]
    reference: PathBuf,
    /// Test sequence directory or trajectory CSV
    #[arg(long)]
    test: PathBuf,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// Use an existing sequence instead of a synthetic scene
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    scene: SceneArgs,
    /// Comma-separated retention percentages
    #[arg(long, value_delimiter = ',', default_value = "1,5,10,20,30,45")]
    percents: Vec<f64>,
    /// Master seed for the scene and the masks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Use frame 0's mask for every frame
    #[arg(long)]
    shared_mask: bool,
    /// Output root
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Run name; results go to <out>/<name>
    #[arg(long, default_value = "run")]
    name: String,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    tracker: TrackerArgs,
}

fn synth(args: &SynthArgs) -> Result<()> {
    let spec = args.scene.spec();
    let frames: Vec<Frame> = generate_scene(&spec, args.seed)?.iter().map(Frame::quantized).collect();
    save_sequence(&frames, &spec.meta, &args.out)?;
    println!("wrote {} frames to {}", frames.len(), args.out.display());
    Ok(())
}

fn degrade(args: &DegradeArgs) -> Result<()> {
    let (meta, frames) = load_sequence(&args.input)?;
    let mut degraded = Vec::with_capacity(frames.len());
    let mut masks = Vec::with_capacity(frames.len());
    for (t, frame) in frames.iter().enumerate() {
        let seed = frame_seed(args.seed, if args.shared_mask { 0 } else { t });
        let mask = make_mask(meta.width, meta.height, args.percent, seed)?;
        degraded.push(zero_fill(&sample(frame, &mask)?));
        masks.push(mask);
    }
    save_sequence(&degraded, &meta, &args.out)?;
    for (t, mask) in masks.iter().enumerate() {
        mask.save(&args.out.join(mask_file_name(t)))?;
    }
    println!(
        "kept {} of {} pixels per frame in {} frames",
        masks[0].len(),
        meta.width * meta.height,
        frames.len()
    );
    Ok(())
}

fn reconstruct(args: &ReconstructArgs) -> Result<()> {
    let params = args.solver.params();
    params.validate()?;
    let (meta, frames) = load_sequence(&args.input)?;
    let measurements = frames
        .iter()
        .enumerate()
        .map(|(t, f)| PixelMask::load(&args.input.join(mask_file_name(t))).and_then(|m| sample(f, &m)))
        .collect::<Result<Vec<_>>>()?;
    let (rebuilt, seconds) = reconstruct_measurements(&measurements, &args.solver.method, &params, args.threads)?;
    let rebuilt: Vec<Frame> = rebuilt.iter().map(Frame::quantized).collect();
    save_sequence(&rebuilt, &meta, &args.out)?;
    println!("frames: {}", rebuilt.len());
    println!("method: {}", args.solver.method);
    println!("seconds: {seconds:.3}");
    if let Some(reference) = &args.reference {
        let (_, original) = load_sequence(reference)?;
        let per_frame = psnr_sequence(&original, &rebuilt)?;
        println!("mean_psnr_db: {}", format_db(mean_psnr(&per_frame)?));
    }
    Ok(())
}

fn track_cmd(args: &TrackArgs) -> Result<()> {
    let (meta, frames) = load_sequence(&args.input)?;
    let traj = track(&frames, &meta, &args.tracker.params())?;
    write_trajectory_csv(&traj, &args.out)?;
    println!(
        "found the ball in {} of {} frames",
        traj.found_count(),
        meta.frame_count
    );
    Ok(())
}

fn metrics_cmd(args: &MetricsArgs) -> Result<()> {
    if args.reference.is_dir() && args.test.is_dir() {
        let (_, reference) = load_sequence(&args.reference)?;
        let (_, test) = load_sequence(&args.test)?;
        let per_frame = psnr_sequence(&reference, &test)?;
        println!("frame,psnr_db");
        for (t, v) in per_frame.iter().enumerate() {
            println!("{t},{}", format_db(*v));
        }
        println!("mean_psnr_db: {}", format_db(mean_psnr(&per_frame)?));
    } else if args.reference.is_file() && args.test.is_file() {
        let reference = read_trajectory_positions(&args.reference)?;
        let test = read_trajectory_positions(&args.test)?;
        println!("trajectory_rmse_px: {:.6}", position_rmse(&reference, &test)?);
    } else {
        return Err(Error::Parameter(
            "--reference and --test must both be sequence directories or both be trajectory CSV files".into(),
        ));
    }
    Ok(())
}

fn pipeline(args: &PipelineArgs) -> Result<()> {
    let input = match &args.input {
        Some(dir) => InputSource::Directory(dir.clone()),
        None => InputSource::Synthetic(args.scene.spec()),
    };
    let out_dir = args.out.join(&args.name);
    let mut config = RunConfig::new(input, &out_dir);
    config.percents = args.percents.clone();
    config.master_seed = args.seed;
    config.solver = args.solver.params();
    config.reconstructor = args.solver.method.clone();
    config.tracker = args.tracker.params();
    config.shared_mask = args.shared_mask;
    config.workers = args.threads;
    let summary = run_pipeline(&config)?;
    println!("percent,mean_psnr_db,trajectory_rmse_px,seconds");
    for level in &summary.levels {
        let q = &level.quality;
        println!(
            "{},{},{:.6},{:.3}",
            q.percent,
            format_db(q.mean_psnr),
            q.trajectory_rmse,
            q.elapsed_cs_seconds
        );
    }
    let labels: Vec<String> = summary
        .levels
        .iter()
        .map(|l| percent_label(l.quality.percent))
        .collect();
    println!("outputs in {} ({})", out_dir.display(), labels.join(", "));
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Degrade(a) => degrade(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Track(a) => {
            ensure_parent(&a.out)?;
            track_cmd(a)
        }
        Command::Metrics(a) => metrics_cmd(a),
        Command::Pipeline(a) => pipeline(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn scene_flag_defaults_match_the_library_default() {
        let cli = Cli::try_parse_from(["cstrack", "synth", "--out", "x"]).unwrap();
        let Command::Synth(a) = cli.command else { unreachable!() };
        assert_eq!(a.scene.spec(), SceneSpec::default());
    }

    #[test]
    fn solver_and_tracker_defaults_match_the_library() {
        let cli = Cli::try_parse_from(["cstrack", "pipeline"]).unwrap();
        let Command::Pipeline(a) = cli.command else {
            unreachable!()
        };
        assert_eq!(a.solver.params(), SolverParams::default());
        assert_eq!(a.tracker.params(), TrackerParams::default());
        assert_eq!(a.percents, cstrack::constants::DEFAULT_PERCENTS.to_vec());
    }
}
