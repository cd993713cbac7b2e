#![allow(clippy::needless_range_loop)]

pub mod bitset;
pub mod descent;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod polytope;
pub mod special;
pub mod voting;

pub use error::{Error, Result};
pub use linalg::{Int, Rat};
