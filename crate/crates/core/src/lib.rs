//! Degrade grayscale videos by keeping a random subset of pixels, rebuild
//! each frame by l1 recovery over the 2D DCT, follow a moving object
//! through the original and rebuilt videos, and measure how much the
//! trajectory and image quality suffer.

pub mod constants;
pub mod error;
pub mod frame_io;
pub mod measurement;
pub mod metrics;
pub mod pipeline;
pub mod recovery;
pub mod registry;
pub mod rng;
pub mod svg;
pub mod tracker;

pub use error::{Error, Result};
pub use frame_io::{Frame, VideoMeta};
