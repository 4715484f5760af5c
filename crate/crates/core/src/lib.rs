//! Fundamental-cone geometry, union bounds and Monte-Carlo simulation for
//! linear-programming decoding of binary linear codes on the AWGN channel.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod fundamental_cone;
pub mod gf2codes;
pub mod pseudogeometry;
pub mod simulate;
pub mod spanning;

pub use error::{Error, Result};
