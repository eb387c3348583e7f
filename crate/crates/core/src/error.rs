use alloc::string::String;
use core::fmt;

use crate::lattice::SphereFn;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two operands live on different spaces.
    SpaceMismatch,
    /// A construction produced values that are not on the positive unit sphere.
    NotOnSphere,
    InvalidSpace(String),
    InvalidGrid,
    UnknownPoint(String),
    EmptyInput,
    /// `M(g) ⊆ M(f)`, so no function separates `D(f)` from `D(g)`.
    NoWitness,
    /// The peak-lifting construction needs `v(y0) < 1`.
    AlreadyPeaks(String),
    NotABijection(String),
    InvalidTable(String),
    InvalidSwap {
        index: usize,
        size: usize,
    },
    InstanceTooLarge {
        size: usize,
        cap: usize,
    },
    /// A function was looked up outside a table oracle's domain.
    OutsideDomain(SphereFn),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SpaceMismatch => f.write_str("space mismatch"),
            Error::NotOnSphere => f.write_str("not on sphere"),
            Error::InvalidSpace(msg) => write!(f, "invalid space: {msg}"),
            Error::InvalidGrid => f.write_str("invalid grid: resolution must be at least 1"),
            Error::UnknownPoint(p) => write!(f, "unknown point {p:?}"),
            Error::EmptyInput => f.write_str("empty input"),
            Error::NoWitness => f.write_str("M(g) ⊆ M(f): no witness exists"),
            Error::AlreadyPeaks(p) => {
                write!(f, "not applicable: v already peaks at {p}")
            }
            Error::NotABijection(msg) => write!(f, "not a bijection: {msg}"),
            Error::InvalidTable(msg) => write!(f, "invalid table: {msg}"),
            Error::InvalidSwap { index, size } => {
                write!(f, "invalid swap index {index} for table of size {size}")
            }
            Error::InstanceTooLarge { size, cap } => {
                write!(f, "instance too large: sphere size {size} exceeds cap {cap}")
            }
            Error::OutsideDomain(g) => write!(f, "function {g} outside table domain"),
            Error::Parse(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
