// `from_*` on the scalar trait builds a value in `self`'s parent structure,
// and row operations index two rows of the same matrix at once.
#![allow(clippy::wrong_self_convention, clippy::needless_range_loop)]

pub mod arith;
pub mod canonical;
pub mod error;
pub mod forms;
pub mod hyper;
pub mod json;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod precision;
pub mod series;

pub use error::{Error, Result};
