//! Closed-form evaluation of the offset sum
//!
//! ```text
//! f_q(n_1, …, n_k) = Σ (n_1 − |i_1|) ⋯ (n_k − |i_k|)
//! ```
//!
//! over all integer offsets with `−n_j < i_j < n_j` and
//! `gcd(i_1, …, i_k) = q`, plus the counts derived from it: segments
//! `c_q = f_{q−1}/2`, lines `l_{≥q} = (f_{q−1} − f_q)/2` and
//! `l_q = (f_{q+1} − 2 f_q + f_{q−1})/2`, and the two-dimensional threshold
//! count `t = f_1 + 2`.
//!
//! Two evaluators are provided: [`f_naive`] enumerates offsets directly,
//! [`f_mobius`] rearranges the gcd constraint through Möbius inversion and
//! runs in `O(max(n_j)/q)` arithmetic operations per call. They agree on
//! every input; both stay exact.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::numtheory::SieveTable;
use crate::{Error, ExactInt, Result};

/// Extents of a rectangular grid: `k ≥ 2` extents, each ≥ 1.
///
/// Extent 1 is allowed (the offset range for that axis collapses to `{0}`);
/// this is what makes the near-square seeds of the recurrences, such as
/// `f_1(1, 2) = 2`, well-defined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridShape {
    dims: Vec<u64>,
}

impl GridShape {
    pub fn new(dims: Vec<u64>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::usage(format!(
                "grid shape needs at least 2 extents, got {}",
                dims.len()
            )));
        }
        if dims.iter().any(|&n| n == 0) {
            return Err(Error::usage("grid extents must be ≥ 1"));
        }
        Ok(GridShape { dims })
    }

    /// Convenience constructor for square 2-D grids.
    pub fn square(n: u64) -> Result<Self> {
        GridShape::new(vec![n, n])
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn max_extent(&self) -> u64 {
        *self.dims.iter().max().expect("k ≥ 2")
    }

    /// Total number of gridpoints, Π n_j.
    pub fn point_count(&self) -> ExactInt {
        self.dims
            .iter()
            .fold(ExactInt::from(1u8), |acc, &n| acc * n)
    }

    /// Π n_j as u64, or `None` if it does not fit.
    pub fn point_count_u64(&self) -> Option<u64> {
        self.dims
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
    }

    pub fn is_square(&self) -> bool {
        self.dims.iter().all(|&n| n == self.dims[0])
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in &self.dims {
            if !first {
                f.write_str("x")?;
            }
            write!(f, "{n}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for GridShape {
    type Err = Error;

    /// Parses `AxB[xC…]` with every extent ≥ 1.
    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split('x')
            .map(|part| {
                part.parse::<u64>()
                    .map_err(|_| Error::usage(format!("bad grid shape `{s}`: expected AxB[xC…]")))
            })
            .collect::<Result<Vec<u64>>>()?;
        GridShape::new(dims)
    }
}

/// Nonnegative accumulator: u128 fast path spilling into an [`ExactInt`].
struct Accumulator {
    small: u128,
    big: ExactInt,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            small: 0,
            big: ExactInt::zero(),
        }
    }

    fn add(&mut self, v: u128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += self.small;
                self.small = v;
            }
        }
    }

    fn finish(self) -> ExactInt {
        self.big + self.small
    }
}

/// `f_q` by direct offset enumeration.
///
/// Only offset vectors whose first nonzero coordinate is positive are
/// visited; each stands for the ± pair, so its weight is doubled. Subtrees
/// whose prefix gcd is not a multiple of `q` cannot reach gcd `q` and are
/// skipped.
pub fn f_naive(q: u64, shape: &GridShape) -> Result<ExactInt> {
    if q == 0 {
        return Err(Error::usage("f: q must be ≥ 1"));
    }
    if q >= shape.max_extent() {
        return Ok(ExactInt::zero());
    }
    let dims: Vec<i64> = shape
        .dims()
        .iter()
        .map(|&n| {
            i64::try_from(n)
                .map_err(|_| Error::usage(format!("extent {n} too large to enumerate")))
        })
        .collect::<Result<_>>()?;

    let mut acc = Accumulator::new();
    // Weight starts at 2 to account for the ± pairing.
    sum_offsets(&dims, q, 0, false, 0, 2, &mut acc);
    Ok(acc.finish())
}

fn sum_offsets(
    dims: &[i64],
    q: u64,
    idx: usize,
    seen_nonzero: bool,
    prefix_gcd: u64,
    weight: u128,
    acc: &mut Accumulator,
) {
    if idx == dims.len() {
        if seen_nonzero && prefix_gcd == q {
            acc.add(weight);
        }
        return;
    }
    let n = dims[idx];

    // i = 0 leaves gcd and sign structure unchanged.
    sum_offsets(
        dims,
        q,
        idx + 1,
        seen_nonzero,
        prefix_gcd,
        weight * n as u128,
        acc,
    );

    for i in 1..n {
        let g = num_integer::gcd(prefix_gcd, i as u64);
        // The final gcd divides g, so it can only equal q if q divides g.
        if g % q != 0 {
            continue;
        }
        // After the first nonzero coordinate, ±i both occur.
        let w = if seen_nonzero {
            weight * 2 * (n - i) as u128
        } else {
            weight * (n - i) as u128
        };
        sum_offsets(dims, q, idx + 1, true, g, w, acc);
    }
}

/// `W_m(n)`: Σ over multiples `i` of `m` with `|i| < n` of `(n − |i|)`.
fn multiple_weight_sum(n: u64, m: u64) -> u128 {
    let t = ((n - 1) / m) as u128;
    let n = n as u128;
    let m = m as u128;
    n + 2 * (t * n - m * (t * (t + 1) / 2))
}

/// `f_q` via Möbius inversion of the gcd constraint:
///
/// ```text
/// f_q = Σ_{d ≥ 1} μ(d) · (Π_j W_{qd}(n_j) − Π_j n_j)
/// ```
///
/// where `W_m(n)` sums the weights of all multiples of `m` in `(−n, n)`.
/// Terms with `qd ≥ max(n_j)` vanish, so `d` ranges up to
/// `⌊(max(n_j) − 1)/q⌋`, which is what the sieve must cover.
pub fn f_mobius(q: u64, shape: &GridShape, sieve: &SieveTable) -> Result<ExactInt> {
    if q == 0 {
        return Err(Error::usage("f: q must be ≥ 1"));
    }
    let max_n = shape.max_extent();
    if q >= max_n {
        return Ok(ExactInt::zero());
    }
    let d_max = (max_n - 1) / q;
    if sieve.limit() < d_max {
        return Err(Error::usage(format!(
            "f_mobius: sieve limit {} too small (need μ up to {d_max})",
            sieve.limit()
        )));
    }

    let point_product = shape.point_count();
    let mut total = ExactInt::zero();
    for d in 1..=d_max {
        let mu = sieve.mu(d);
        if mu == 0 {
            continue;
        }
        let m = q * d; // ≤ max_n − 1 by construction of d_max
        let mut weight_product = ExactInt::from(1u8);
        for &n in shape.dims() {
            weight_product *= ExactInt::from(multiple_weight_sum(n, m));
        }
        let term = weight_product - &point_product;
        if mu > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

fn f_dispatch(q: u64, shape: &GridShape, sieve: Option<&SieveTable>) -> Result<ExactInt> {
    match sieve {
        Some(s) => f_mobius(q, shape, s),
        None => f_naive(q, shape),
    }
}

/// Halve `v`, asserting the evenness the ± pairing argument guarantees.
fn half_even(v: ExactInt, what: &str) -> ExactInt {
    assert!(v.is_even(), "{what}: offset sum {v} is odd");
    v / ExactInt::from(2u8)
}

/// Number of segments whose endpoints and exactly `q − 2` interior points
/// are gridpoints: `c_q = f_{q−1} / 2`.
pub fn c_q(q: u64, shape: &GridShape, sieve: Option<&SieveTable>) -> Result<ExactInt> {
    if q < 2 {
        return Err(Error::usage("c_q: q must be ≥ 2"));
    }
    let f = f_dispatch(q - 1, shape, sieve)?;
    Ok(half_even(f, "c_q"))
}

/// Number of lines through at least `q` gridpoints:
/// `l_{≥q} = (f_{q−1} − f_q) / 2`.
pub fn l_geq(q: u64, shape: &GridShape, sieve: Option<&SieveTable>) -> Result<ExactInt> {
    if q < 2 {
        return Err(Error::usage("l_geq: q must be ≥ 2"));
    }
    let diff = f_dispatch(q - 1, shape, sieve)? - f_dispatch(q, shape, sieve)?;
    let v = half_even(diff, "l_geq");
    assert!(!v.is_negative(), "l_geq: negative count {v}");
    Ok(v)
}

/// Number of lines through exactly `q` gridpoints:
/// `l_q = (f_{q+1} − 2 f_q + f_{q−1}) / 2`.
pub fn l_exact(q: u64, shape: &GridShape, sieve: Option<&SieveTable>) -> Result<ExactInt> {
    if q < 2 {
        return Err(Error::usage("l_exact: q must be ≥ 2"));
    }
    let second_diff = f_dispatch(q + 1, shape, sieve)?
        - f_dispatch(q, shape, sieve)? * 2u32
        + f_dispatch(q - 1, shape, sieve)?;
    let v = half_even(second_diff, "l_exact");
    assert!(!v.is_negative(), "l_exact: negative count {v}");
    Ok(v)
}

/// Number of two-dimensional threshold functions on an `n1 × n2` grid:
/// `t = f_1 + 2`.
pub fn threshold_count(n1: u64, n2: u64, sieve: Option<&SieveTable>) -> Result<ExactInt> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::usage("threshold_count: both extents must be ≥ 2"));
    }
    let shape = GridShape::new(vec![n1, n2])?;
    Ok(f_dispatch(1, &shape, sieve)? + 2u32)
}
