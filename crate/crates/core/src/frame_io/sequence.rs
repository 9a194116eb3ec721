//! Directories of `frame_%05d.pgm` files with a `meta.txt` sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use super::{read_pgm, write_pgm, Frame, VideoMeta};
use crate::error::{Error, Result};

pub const META_FILE: &str = "meta.txt";

pub fn frame_file_name(index: usize) -> String {
    format!("frame_{index:05}.pgm")
}

fn parse_frame_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("frame_")?.strip_suffix(".pgm")?;
    if digits.len() < 5 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Default)]
struct MetaFields {
    fps: Option<f64>,
    frames: Option<usize>,
    width: Option<usize>,
    height: Option<usize>,
}

fn parse_meta(text: &str, path: &Path) -> Result<MetaFields> {
    let bad = |line: &str| Error::Config(format!("{}: bad line {line:?}", path.display()));
    let mut fields = MetaFields::default();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (key, value) = line.split_once('=').ok_or_else(|| bad(line))?;
        let value = value.trim();
        match key.trim() {
            "fps" => fields.fps = Some(value.parse().map_err(|_| bad(line))?),
            "frames" => fields.frames = Some(value.parse().map_err(|_| bad(line))?),
            "width" => fields.width = Some(value.parse().map_err(|_| bad(line))?),
            "height" => fields.height = Some(value.parse().map_err(|_| bad(line))?),
            // unknown keys are ignored so the sidecar can carry notes
            _ => {}
        }
    }
    Ok(fields)
}

/// `(fps, declared frame count, declared (width, height))`.
pub type SidecarFields = (f64, Option<usize>, Option<(usize, usize)>);

/// Read the fps (and optional declared shape) from a sequence directory.
pub fn read_meta(dir: &Path) -> Result<SidecarFields> {
    let path = dir.join(META_FILE);
    let text = fs::read_to_string(&path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::Config(format!("missing sidecar {}", path.display()))
        } else {
            Error::io(&path, e)
        }
    })?;
    let fields = parse_meta(&text, &path)?;
    let fps = fields
        .fps
        .ok_or_else(|| Error::Config(format!("{}: no fps= line", path.display())))?;
    let shape = fields.width.zip(fields.height);
    Ok((fps, fields.frames, shape))
}

pub fn write_meta(meta: &VideoMeta, dir: &Path) -> Result<()> {
    let path = dir.join(META_FILE);
    let text = format!(
        "fps={}\nframes={}\nwidth={}\nheight={}\n",
        meta.fps, meta.frame_count, meta.width, meta.height
    );
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

/// Load every frame of a sequence directory in index order.
pub fn load_sequence(dir: &Path) -> Result<(VideoMeta, Vec<Frame>)> {
    // a missing directory is an I/O problem, a missing sidecar a config one
    fs::metadata(dir).map_err(|e| Error::io(dir, e))?;
    let (fps, declared_frames, declared_shape) = read_meta(dir)?;

    let mut indexed: Vec<(usize, PathBuf)> = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        if let Some(index) = name.to_str().and_then(parse_frame_index) {
            indexed.push((index, entry.path()));
        }
    }
    if indexed.is_empty() {
        return Err(Error::Format(format!("{}: no frame_NNNNN.pgm files", dir.display())));
    }
    indexed.sort();
    for (expected, (index, path)) in indexed.iter().enumerate() {
        if *index != expected {
            if *index < expected {
                return Err(Error::Format(format!(
                    "duplicate frame index {index} ({})",
                    path.display()
                )));
            }
            return Err(Error::Format(format!("gap at index {expected}")));
        }
    }

    let mut frames = Vec::with_capacity(indexed.len());
    for (index, path) in &indexed {
        let frame = read_pgm(path)?.with_index(*index);
        if let Some(first) = frames.first() {
            let first: &Frame = first;
            if !first.same_shape(&frame) {
                return Err(Error::Format(format!(
                    "{} is {}x{}, earlier frames are {}x{}",
                    path.display(),
                    frame.width(),
                    frame.height(),
                    first.width(),
                    first.height()
                )));
            }
        }
        frames.push(frame);
    }

    let (width, height) = (frames[0].width(), frames[0].height());
    if let Some((w, h)) = declared_shape {
        if (w, h) != (width, height) {
            return Err(Error::Format(format!(
                "meta.txt declares {w}x{h}, frames are {width}x{height}"
            )));
        }
    }
    if let Some(n) = declared_frames {
        if n != frames.len() {
            return Err(Error::Format(format!(
                "meta.txt declares {n} frames, found {}",
                frames.len()
            )));
        }
    }
    let meta = VideoMeta::new(frames.len(), fps, width, height).map_err(|e| Error::Config(e.to_string()))?;
    Ok((meta, frames))
}

/// Write frames as `frame_%05d.pgm` (numbered by position) plus `meta.txt`.
pub fn save_sequence(frames: &[Frame], meta: &VideoMeta, dir: &Path) -> Result<()> {
    let first = frames
        .first()
        .ok_or_else(|| Error::Parameter("cannot save an empty frame sequence".into()))?;
    if let Some(odd) = frames.iter().find(|f| !f.same_shape(first)) {
        return Err(Error::Parameter(format!(
            "frame {} is {}x{}, expected {}x{}",
            odd.index(),
            odd.width(),
            odd.height(),
            first.width(),
            first.height()
        )));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, frame) in frames.iter().enumerate() {
        write_pgm(frame, &dir.join(frame_file_name(i)))?;
    }
    let meta = VideoMeta {
        frame_count: frames.len(),
        width: first.width(),
        height: first.height(),
        ..*meta
    };
    write_meta(&meta, dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(n: usize, w: usize, h: usize) -> VideoMeta {
        VideoMeta::new(n, 30.0, w, h).unwrap()
    }

    #[test]
    fn three_blank_frames() {
        let dir = tempfile::tempdir().unwrap();
        let frames = vec![Frame::filled(4, 4, 0.0); 3];
        save_sequence(&frames, &meta(3, 4, 4), dir.path()).unwrap();
        let (m, loaded) = load_sequence(dir.path()).unwrap();
        assert_eq!(m, meta(3, 4, 4));
        assert_eq!(loaded.len(), 3);
        for (i, f) in loaded.iter().enumerate() {
            assert_eq!(f.index(), i);
            assert!(f.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constant_half_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        save_sequence(&[Frame::filled(5, 3, 0.5)], &meta(1, 5, 3), dir.path()).unwrap();
        let (_, loaded) = load_sequence(dir.path()).unwrap();
        assert!(loaded[0].data().iter().all(|v| (v - 0.5).abs() <= 1.0 / 510.0));
    }

    #[test]
    fn gap_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let f = Frame::filled(2, 2, 0.0);
        write_pgm(&f, &dir.path().join("frame_00000.pgm")).unwrap();
        write_pgm(&f, &dir.path().join("frame_00002.pgm")).unwrap();
        fs::write(dir.path().join(META_FILE), "fps=30\n").unwrap();
        let err = load_sequence(dir.path()).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(err.to_string().contains("gap at index 1"), "{err}");
    }

    #[test]
    fn missing_sidecar_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        write_pgm(&Frame::filled(2, 2, 0.0), &dir.path().join("frame_00000.pgm")).unwrap();
        assert!(matches!(load_sequence(dir.path()), Err(Error::Config(_))));
    }

    #[test]
    fn dimension_mismatch_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        write_pgm(&Frame::filled(2, 2, 0.0), &dir.path().join("frame_00000.pgm")).unwrap();
        write_pgm(&Frame::filled(3, 2, 0.0), &dir.path().join("frame_00001.pgm")).unwrap();
        fs::write(dir.path().join(META_FILE), "fps=30\n").unwrap();
        assert!(matches!(load_sequence(dir.path()), Err(Error::Format(_))));
    }

    #[test]
    fn empty_save_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            save_sequence(&[], &meta(1, 2, 2), dir.path()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn frame_names() {
        assert_eq!(frame_file_name(7), "frame_00007.pgm");
        assert_eq!(parse_frame_index("frame_00012.pgm"), Some(12));
        assert_eq!(parse_frame_index("frame_12.pgm"), None);
        assert_eq!(parse_frame_index("mask_00012.pgm"), None);
    }
}
