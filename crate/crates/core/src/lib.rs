#![allow(clippy::needless_range_loop, clippy::wrong_self_convention)]

pub mod checks;
pub mod cli;
pub mod coleman;
pub mod curve;
pub mod error;
pub mod heights;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod rational;
pub mod rigidcoh;

pub use error::{Error, Result};
