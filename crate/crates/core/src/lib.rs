//! Steady transport in the unit disk near its diffusive limit.
//!
//! The crate holds the half-space boundary-layer problem with and without
//! the curvature force, a characteristic solver for the full disk, the
//! interior elliptic problems and the composite approximations built from
//! them. Everything here is `no_std` with `alloc`; file formats and the
//! command-line driver live in the companion `kinlayer-cli` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod boundary;
pub mod discretization;
pub mod disk;
pub mod elliptic;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod linalg;
pub mod milne;
pub mod quad;

pub(crate) mod math;
pub(crate) mod path;

pub use boundary::BoundaryProfile;
pub use error::{Error, Result};
