//! Charged particle on a time-dependent magnetic field in the plane, in its
//! canonical, twisted, force and Euler-flow pictures, with action
//! functionals and periodic-orbit search.

pub mod action;
pub mod cli;
pub mod domain;
pub mod error;
pub mod fields;
pub mod integrate;
pub mod io;
pub mod orbits;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
