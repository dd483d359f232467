pub mod arith;
pub mod decidability;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod labelgraph;
pub mod rng;
pub mod rules;
pub mod stats;
pub mod tiles;
pub mod verify;

pub use error::{Error, Result};
