//! Exact, finite models of surjective isometries between positive unit
//! spheres of sup-norm function spaces.
//!
//! A finite discrete point set stands in for the underlying space. Every
//! function on it is continuous, so the positive unit sphere is simply the
//! set of `[0, 1]`-valued functions attaining `1`. All arithmetic is exact
//! over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: spaces, sphere functions, the sup metric and the algebraic
//!   constructions (averages, products, affine lifts).
//! * [`setcalc`]: maximum sets, zero sets and the open unit balls `D(f)`.
//! * [`peaks`]: peak families and maximum-set intersections.
//! * [`extraction`]: table oracles, point maps, composition operators and
//!   recovery of the inducing point map from a black-box isometry.
//! * [`witness`]: the peak-lifting witness and phase-isometry checks.
//! * [`census`]: exhaustive enumeration of self-isometries of small grid
//!   spheres.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod census;
pub mod error;
pub mod extraction;
pub mod lattice;
pub mod peaks;
pub mod perm;
pub mod rational;
pub mod report;
pub mod setcalc;
pub mod witness;

pub use error::Error;
pub use lattice::{GridSpec, GridSphere, SpaceModel, SphereFn};
pub use rational::Rational;
pub use report::{Check, Evidence, Status, VerificationReport};
pub use setcalc::PointSet;

pub type Result<T, E = Error> = core::result::Result<T, E>;
