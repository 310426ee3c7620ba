pub mod blocks;
pub mod composite;
pub mod cones;
pub mod covering;
pub mod error;
pub mod hset;
pub mod interval;
pub mod linalg;
pub mod lohner;
pub mod scenario;
pub mod systems;
pub mod time;

pub use error::{Error, Result};
pub use hset::HSet;
pub use interval::{IMatrix, IVector, Interval};
pub use lohner::{AffineSet, Doubleton, LohnerConfig, TrajectoryEnclosure};
