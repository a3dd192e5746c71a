//! Strategic preference reporting in small two-sided matching markets:
//! deferred acceptance, the induced reporting game, evolutionary dynamics
//! over reports, and set-valued stability of matchings.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod game;
pub mod matching;
pub mod stability;
pub mod sweep;

pub use error::{Error, Result};
