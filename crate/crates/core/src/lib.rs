//! Graphical small cancellation toolkit.

pub mod ball;
pub mod boundary;
pub mod cancellation;
pub mod coned;
pub mod error;
pub mod graph;
pub mod group;
pub mod input;
pub mod perm;
pub mod pipeline;
pub mod report;
pub mod word;

pub use error::{Error, Result};
