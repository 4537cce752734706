//! Exact counting of line segments and lines through the points of a
//! k-dimensional rectangular grid, and of two-dimensional threshold functions.
//!
//! The grid `G(n_1, …, n_k)` is `{0, …, n_1−1} × … × {0, …, n_k−1}`. For
//! `q ≥ 2` this crate counts
//!
//! * `c_q` — segments whose endpoints and exactly `q−2` interior points are
//!   gridpoints ([`closedform::c_q`]),
//! * `l_q` / `l_{≥q}` — lines through exactly / at least `q` gridpoints
//!   ([`closedform::l_exact`], [`closedform::l_geq`]),
//! * `t` — two-valued functions on a 2-D grid whose classes are separated by
//!   an affine line ([`closedform::threshold_count`]).
//!
//! All of these derive from the gcd-restricted offset sum `f_q`
//! ([`closedform::f_naive`], [`closedform::f_mobius`]). Three independent
//! computation routes cross-verify each other:
//!
//! 1. the closed forms in [`closedform`],
//! 2. totient-based recurrences over square grids in [`recurrences`],
//! 3. a brute-force geometric census in [`oracle`].
//!
//! Every count is an arbitrary-precision [`ExactInt`]; no arithmetic is ever
//! rounded or silently wrapped. The [`cli`] module exposes the whole surface
//! as a command-line tool.

use std::fmt;
use std::str::FromStr;

pub mod cli;
pub mod closedform;
pub mod numtheory;
pub mod oracle;
pub mod recurrences;

mod error;
pub use error::{Error, Result};

/// Arbitrary-precision signed integer holding every count and intermediate
/// difference. Overflow is impossible by construction.
pub type ExactInt = num_bigint::BigInt;

/// What to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    /// The gcd-restricted weighted offset sum `f_q` (twice the segment count).
    Fq,
    /// Segments through exactly `q` gridpoints, `c_q = f_{q−1}/2`.
    Cq,
    /// Lines through at least `q` gridpoints.
    LGeq,
    /// Lines through exactly `q` gridpoints.
    LExact,
    /// Two-dimensional threshold functions, `t = f_1 + 2`.
    Threshold,
}

impl Quantity {
    pub fn token(self) -> &'static str {
        match self {
            Quantity::Fq => "fq",
            Quantity::Cq => "cq",
            Quantity::LGeq => "lgeq",
            Quantity::LExact => "lexact",
            Quantity::Threshold => "threshold",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fq" => Ok(Quantity::Fq),
            "cq" => Ok(Quantity::Cq),
            "lgeq" => Ok(Quantity::LGeq),
            "lexact" => Ok(Quantity::LExact),
            "threshold" => Ok(Quantity::Threshold),
            other => Err(Error::usage(format!("unknown quantity `{other}`"))),
        }
    }
}

/// How a value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Closed-form evaluation of `f_q` (Möbius-accelerated when a sieve is
    /// available, direct offset enumeration otherwise).
    Explicit,
    /// Coupled square / near-square recurrence over square grids.
    Coupled,
    /// Self-contained single-sequence recurrence over square grids.
    Single,
    /// Brute-force geometric census.
    Oracle,
}

impl Method {
    pub fn token(self) -> &'static str {
        match self {
            Method::Explicit => "explicit",
            Method::Coupled => "coupled",
            Method::Single => "single",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Method::Explicit),
            "coupled" => Ok(Method::Coupled),
            "single" => Ok(Method::Single),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::usage(format!("unknown method `{other}`"))),
        }
    }
}
