pub mod cli;
pub mod dataset_file;
pub mod detector;
pub mod error;
pub mod geometry;
pub mod labeling;
pub mod ml;
pub mod model;
pub mod prep;
pub mod recommend;
pub mod synth;

pub use error::{Error, Result};
