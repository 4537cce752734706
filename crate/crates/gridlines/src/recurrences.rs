//! Whole sequences `f_q(n)`, `c_q(n)`, `l_q(n)`, `l_{≥q}(n)`, `t(n)` over
//! square grids, generated from the totient building block `e_q` instead of
//! the explicit sums.
//!
//! The coupled method advances the square value together with the
//! near-square value `x(n−1, n)`:
//!
//! ```text
//! x(n)      = 2·x(n−1, n) − x(n−1)      + A(n)
//! x(n−1, n) = 2·x(n−1)    − x(n−2, n−1) + B(n)
//! ```
//!
//! with `(A, B) = (r_q, s_q)` for `f` and `(ρ, σ)` for the line counts.
//! The single method eliminates the near-square track:
//!
//! ```text
//! x(n) = x(n−1) + 2·Σ_{i≤n} B(i) + 2·Σ_{i≤n−1} A(i) + A(n)
//! ```
//!
//! Both tracks are seeded with zeros; all later values, including the
//! near-square seed `l(q−1, q) = q−1`, then fall out of the increments.
//! Generation is iterative with O(1) carried state per track, so a million
//! rows is one linear pass after the sieve is built.

use num_traits::{Signed, Zero};

use crate::numtheory::{e, SieveTable};
use crate::{Error, ExactInt, Method, Quantity, Result};

/// Which line count a sequence tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    /// `l_{≥q}`: lines through at least q gridpoints.
    AtLeast,
    /// `l_q`: lines through exactly q gridpoints.
    Exact,
}

/// Recurrence flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceMethod {
    Coupled,
    Single,
}

impl RecurrenceMethod {
    fn as_method(self) -> Method {
        match self {
            RecurrenceMethod::Coupled => Method::Coupled,
            RecurrenceMethod::Single => Method::Single,
        }
    }
}

/// Rows `(n, value)` for one quantity, `q`, and generation method.
///
/// Rows are strictly increasing in `n` with no gaps and every value is
/// nonnegative; the constructor enforces both.
#[derive(Debug, Clone)]
pub struct SequenceTable {
    pub quantity: Quantity,
    pub q: u64,
    pub method: Method,
    rows: Vec<(u64, ExactInt)>,
}

impl SequenceTable {
    pub fn new(quantity: Quantity, q: u64, method: Method, rows: Vec<(u64, ExactInt)>) -> Self {
        for (i, (n, v)) in rows.iter().enumerate() {
            if i > 0 {
                assert_eq!(rows[i - 1].0 + 1, *n, "sequence rows must be contiguous");
            }
            assert!(!v.is_negative(), "negative count at n={n}: {v}");
        }
        SequenceTable {
            quantity,
            q,
            method,
            rows,
        }
    }

    pub fn rows(&self) -> &[(u64, ExactInt)] {
        &self.rows
    }

    pub fn value_at(&self, n: u64) -> Option<&ExactInt> {
        let first = self.rows.first()?.0;
        if n < first {
            return None;
        }
        self.rows.get((n - first) as usize).map(|(_, v)| v)
    }
}

/// Increment kind: which `e_q` combination drives a recurrence, and the two
/// coefficients in front of the running sum and the near-square correction.
#[derive(Debug, Clone, Copy)]
enum Increment {
    F { q: u64 },
    L { kind: LineKind, q: u64 },
}

impl Increment {
    /// Per-step base increment; differences of `e` may be negative.
    fn delta(self, n: u64, sieve: &SieveTable) -> Result<i128> {
        match self {
            Increment::F { q } => Ok(e(q, n, sieve)? as i128),
            Increment::L {
                kind: LineKind::AtLeast,
                q,
            } => Ok(e(q - 1, n, sieve)? as i128 - e(q, n, sieve)? as i128),
            Increment::L {
                kind: LineKind::Exact,
                q,
            } => Ok(e(q - 1, n, sieve)? as i128 - 2 * e(q, n, sieve)? as i128
                + e(q + 1, n, sieve)? as i128),
        }
    }

    /// Coefficient of the running sum A(n): 8 for f, 4 for the line counts.
    fn a_coeff(self) -> i128 {
        match self {
            Increment::F { .. } => 8,
            Increment::L { .. } => 4,
        }
    }

    /// Coefficient of the near-square correction B(n) = c·(n−1)·delta:
    /// 2 for f, 1 for the line counts.
    fn b_coeff(self) -> i128 {
        match self {
            Increment::F { .. } => 2,
            Increment::L { .. } => 1,
        }
    }
}

/// Square and near-square tracks of one coupled run: `square[i]` is the
/// value at `n = i + 1`, `near_square[i]` the value at `(n−1, n) = (i, i+1)`.
#[derive(Debug, Clone)]
pub struct CoupledTracks {
    pub square: Vec<ExactInt>,
    pub near_square: Vec<ExactInt>,
}

fn validate_run(n_max: u64, sieve: &SieveTable) -> Result<()> {
    if n_max == 0 {
        return Err(Error::usage("n_max must be ≥ 1"));
    }
    if n_max >= 2 && sieve.limit() < n_max - 1 {
        return Err(Error::usage(format!(
            "sieve limit {} too small for n_max {n_max} (need ≥ {})",
            sieve.limit(),
            n_max - 1
        )));
    }
    Ok(())
}

fn run_coupled(inc: Increment, n_max: u64, sieve: &SieveTable) -> Result<CoupledTracks> {
    validate_run(n_max, sieve)?;
    let cap = usize::try_from(n_max).expect("n_max fits usize");
    let mut square = Vec::with_capacity(cap);
    let mut near_square = Vec::with_capacity(cap);
    square.push(ExactInt::zero());
    near_square.push(ExactInt::zero());

    let mut running = ExactInt::zero(); // A(n): r_q(n) or ρ(n)
    for n in 2..=n_max {
        let d = inc.delta(n, sieve)?;
        running += inc.a_coeff() * d;
        let correction = ExactInt::from(inc.b_coeff() * (n - 1) as i128 * d);

        let prev_square = square.last().expect("seeded");
        let prev_near = near_square.last().expect("seeded");
        let near = prev_square * 2u32 - prev_near + correction;
        let sq = &near * 2u32 - prev_square + &running;
        near_square.push(near);
        square.push(sq);
    }
    Ok(CoupledTracks {
        square,
        near_square,
    })
}

fn run_single(inc: Increment, n_max: u64, sieve: &SieveTable) -> Result<Vec<ExactInt>> {
    validate_run(n_max, sieve)?;
    let cap = usize::try_from(n_max).expect("n_max fits usize");
    let mut values = Vec::with_capacity(cap);
    values.push(ExactInt::zero());

    let mut a_run = ExactInt::zero(); // A(n)
    let mut a_prefix = ExactInt::zero(); // Σ_{i ≤ n−1} A(i)
    let mut b_prefix = ExactInt::zero(); // Σ_{i ≤ n} B(i)
    for n in 2..=n_max {
        let d = inc.delta(n, sieve)?;
        a_run += inc.a_coeff() * d;
        b_prefix += inc.b_coeff() * (n - 1) as i128 * d;
        let prev = values.last().expect("seeded");
        let next = prev + &b_prefix * 2u32 + &a_prefix * 2u32 + &a_run;
        a_prefix += &a_run;
        values.push(next);
    }
    Ok(values)
}

fn to_rows(values: Vec<ExactInt>) -> Vec<(u64, ExactInt)> {
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| (i as u64 + 1, v))
        .collect()
}

/// `r_q(n) = 8·(e_q(2) + … + e_q(n))`; 0 for n ≤ 1.
pub fn r_term(q: u64, n: u64, sieve: &SieveTable) -> Result<ExactInt> {
    if n == 0 {
        return Err(Error::usage("r_term: n must be ≥ 1"));
    }
    let mut sum = ExactInt::zero();
    for i in 2..=n {
        sum += e(q, i, sieve)?;
    }
    Ok(sum * 8u32)
}

/// `s_q(n) = 2(n−1)·e_q(n)`; 0 at n = 1.
pub fn s_term(q: u64, n: u64, sieve: &SieveTable) -> Result<ExactInt> {
    if n == 0 {
        return Err(Error::usage("s_term: n must be ≥ 1"));
    }
    Ok(ExactInt::from(2 * (n - 1) as i128 * e(q, n, sieve)? as i128))
}

/// The `(ρ, σ)` pair at `(q, n)` for either line count; both may be
/// negative.
pub fn rho_sigma_terms(
    kind: LineKind,
    q: u64,
    n: u64,
    sieve: &SieveTable,
) -> Result<(ExactInt, ExactInt)> {
    if q < 2 {
        return Err(Error::usage("rho_sigma_terms: q must be ≥ 2"));
    }
    if n == 0 {
        return Err(Error::usage("rho_sigma_terms: n must be ≥ 1"));
    }
    let inc = Increment::L { kind, q };
    let mut rho = ExactInt::zero();
    for i in 2..=n {
        rho += 4 * inc.delta(i, sieve)?;
    }
    let sigma = if n == 1 {
        ExactInt::zero()
    } else {
        ExactInt::from((n - 1) as i128 * inc.delta(n, sieve)?)
    };
    Ok((rho, sigma))
}

/// `f_q(n)` for n = 1..=n_max by the coupled recurrence.
pub fn f_square_coupled(q: u64, n_max: u64, sieve: &SieveTable) -> Result<SequenceTable> {
    if q == 0 {
        return Err(Error::usage("f: q must be ≥ 1"));
    }
    let tracks = run_coupled(Increment::F { q }, n_max, sieve)?;
    Ok(SequenceTable::new(
        Quantity::Fq,
        q,
        Method::Coupled,
        to_rows(tracks.square),
    ))
}

/// Both tracks of the coupled `f_q` run, for cross-checking the carried
/// near-square values against the explicit formulas.
pub fn f_coupled_tracks(q: u64, n_max: u64, sieve: &SieveTable) -> Result<CoupledTracks> {
    if q == 0 {
        return Err(Error::usage("f: q must be ≥ 1"));
    }
    run_coupled(Increment::F { q }, n_max, sieve)
}

/// `f_q(n)` for n = 1..=n_max by the single-sequence recurrence.
pub fn f_square_single(q: u64, n_max: u64, sieve: &SieveTable) -> Result<SequenceTable> {
    if q == 0 {
        return Err(Error::usage("f: q must be ≥ 1"));
    }
    let values = run_single(Increment::F { q }, n_max, sieve)?;
    Ok(SequenceTable::new(
        Quantity::Fq,
        q,
        Method::Single,
        to_rows(values),
    ))
}

/// `l_{≥q}(n)` or `l_q(n)` for n = 1..=n_max.
pub fn l_square_sequence(
    kind: LineKind,
    q: u64,
    n_max: u64,
    sieve: &SieveTable,
    method: RecurrenceMethod,
) -> Result<SequenceTable> {
    if q < 2 {
        return Err(Error::usage("l: q must be ≥ 2"));
    }
    let quantity = match kind {
        LineKind::AtLeast => Quantity::LGeq,
        LineKind::Exact => Quantity::LExact,
    };
    let inc = Increment::L { kind, q };
    let values = match method {
        RecurrenceMethod::Coupled => run_coupled(inc, n_max, sieve)?.square,
        RecurrenceMethod::Single => run_single(inc, n_max, sieve)?,
    };
    Ok(SequenceTable::new(
        quantity,
        q,
        method.as_method(),
        to_rows(values),
    ))
}

/// Both tracks of a coupled line-count run.
pub fn l_coupled_tracks(
    kind: LineKind,
    q: u64,
    n_max: u64,
    sieve: &SieveTable,
) -> Result<CoupledTracks> {
    if q < 2 {
        return Err(Error::usage("l: q must be ≥ 2"));
    }
    run_coupled(Increment::L { kind, q }, n_max, sieve)
}

/// `c_q(n) = f_{q−1}(n)/2` for n = 1..=n_max.
pub fn c_square_sequence(
    q: u64,
    n_max: u64,
    sieve: &SieveTable,
    method: RecurrenceMethod,
) -> Result<SequenceTable> {
    if q < 2 {
        return Err(Error::usage("c: q must be ≥ 2"));
    }
    let inc = Increment::F { q: q - 1 };
    let values = match method {
        RecurrenceMethod::Coupled => run_coupled(inc, n_max, sieve)?.square,
        RecurrenceMethod::Single => run_single(inc, n_max, sieve)?,
    };
    let halved: Vec<ExactInt> = values
        .into_iter()
        .map(|v| {
            assert!(num_integer::Integer::is_even(&v), "c: odd offset sum {v}");
            v / ExactInt::from(2u8)
        })
        .collect();
    Ok(SequenceTable::new(
        Quantity::Cq,
        q,
        method.as_method(),
        to_rows(halved),
    ))
}

/// `t(n) = f_1(n) + 2` for n = 2..=n_max.
pub fn threshold_sequence(
    n_max: u64,
    sieve: &SieveTable,
    method: RecurrenceMethod,
) -> Result<SequenceTable> {
    if n_max < 2 {
        return Err(Error::usage("threshold: n_max must be ≥ 2"));
    }
    let inc = Increment::F { q: 1 };
    let values = match method {
        RecurrenceMethod::Coupled => run_coupled(inc, n_max, sieve)?.square,
        RecurrenceMethod::Single => run_single(inc, n_max, sieve)?,
    };
    let rows: Vec<(u64, ExactInt)> = values
        .into_iter()
        .enumerate()
        .skip(1) // t is defined from n = 2
        .map(|(i, v)| (i as u64 + 1, v + 2u32))
        .collect();
    Ok(SequenceTable::new(
        Quantity::Threshold,
        0,
        method.as_method(),
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{f_naive, GridShape};
    use crate::numtheory::build_sieve;

    fn big(v: i64) -> ExactInt {
        ExactInt::from(v)
    }

    fn values(table: &SequenceTable) -> Vec<ExactInt> {
        table.rows().iter().map(|(_, v)| v.clone()).collect()
    }

    #[test]
    fn r_term_examples() {
        let s = build_sieve(10).unwrap();
        assert_eq!(r_term(1, 2, &s).unwrap(), big(8));
        assert_eq!(r_term(2, 4, &s).unwrap(), big(8));
        assert_eq!(r_term(5, 3, &s).unwrap(), big(0));
        assert_eq!(r_term(1, 1, &s).unwrap(), big(0));
    }

    #[test]
    fn s_term_examples() {
        let s = build_sieve(10).unwrap();
        assert_eq!(s_term(1, 2, &s).unwrap(), big(2));
        assert_eq!(s_term(2, 5, &s).unwrap(), big(8));
        assert_eq!(s_term(2, 4, &s).unwrap(), big(0));
        assert_eq!(s_term(3, 1, &s).unwrap(), big(0));
    }

    #[test]
    fn rho_sigma_examples() {
        let s = build_sieve(10).unwrap();
        assert_eq!(
            rho_sigma_terms(LineKind::AtLeast, 2, 3, &s).unwrap(),
            (big(4), big(0))
        );
        assert_eq!(
            rho_sigma_terms(LineKind::AtLeast, 2, 2, &s).unwrap(),
            (big(4), big(1))
        );
        assert_eq!(
            rho_sigma_terms(LineKind::Exact, 3, 2, &s).unwrap(),
            (big(0), big(0))
        );
        // Second differences can be negative.
        let (rho, sigma) = rho_sigma_terms(LineKind::Exact, 3, 4, &s).unwrap();
        assert_eq!(sigma, big(-6));
        assert_eq!(rho, big(-4));
    }

    #[test]
    fn f_coupled_examples() {
        let s = build_sieve(10).unwrap();
        assert_eq!(
            values(&f_square_coupled(1, 3, &s).unwrap()),
            vec![big(0), big(12), big(56)]
        );
        assert_eq!(
            values(&f_square_coupled(2, 3, &s).unwrap()),
            vec![big(0), big(0), big(16)]
        );
        assert_eq!(
            values(&f_square_coupled(4, 4, &s).unwrap()),
            vec![big(0), big(0), big(0), big(0)]
        );
    }

    #[test]
    fn f_single_examples() {
        let s = build_sieve(10).unwrap();
        let t = f_square_single(1, 3, &s).unwrap();
        assert_eq!(t.value_at(2).unwrap(), &big(12));
        assert_eq!(t.value_at(3).unwrap(), &big(56));
        let t = f_square_single(3, 3, &s).unwrap();
        assert_eq!(t.value_at(3).unwrap(), &big(0));
    }

    #[test]
    fn l_sequence_examples() {
        let s = build_sieve(10).unwrap();
        for method in [RecurrenceMethod::Coupled, RecurrenceMethod::Single] {
            let t = l_square_sequence(LineKind::AtLeast, 2, 4, &s, method).unwrap();
            assert_eq!(values(&t), vec![big(0), big(6), big(20), big(62)]);

            let t = l_square_sequence(LineKind::Exact, 3, 3, &s, method).unwrap();
            assert_eq!(t.value_at(3).unwrap(), &big(8));

            let t = l_square_sequence(LineKind::AtLeast, 5, 4, &s, method).unwrap();
            assert_eq!(t.value_at(4).unwrap(), &big(0));
        }
    }

    #[test]
    fn c_sequence_examples() {
        let s = build_sieve(10).unwrap();
        let t = c_square_sequence(2, 3, &s, RecurrenceMethod::Single).unwrap();
        assert_eq!(values(&t), vec![big(0), big(6), big(28)]);
        let t = c_square_sequence(3, 3, &s, RecurrenceMethod::Coupled).unwrap();
        assert_eq!(t.value_at(3).unwrap(), &big(8));
        assert_eq!(t.value_at(1).unwrap(), &big(0));
    }

    #[test]
    fn threshold_sequence_examples() {
        let s = build_sieve(10).unwrap();
        for method in [RecurrenceMethod::Coupled, RecurrenceMethod::Single] {
            let t = threshold_sequence(4, &s, method).unwrap();
            assert_eq!(t.rows().first().unwrap().0, 2);
            assert_eq!(t.value_at(2).unwrap(), &big(14));
            assert_eq!(t.value_at(3).unwrap(), &big(58));
            // Fixed by the explicit formula at (4, 4).
            let expected = f_naive(1, &GridShape::square(4).unwrap()).unwrap() + 2u32;
            assert_eq!(t.value_at(4).unwrap(), &expected);
            assert_eq!(t.value_at(1), None);
        }
    }

    /// The near-square track carries honest rectangular values.
    #[test]
    fn near_square_track_matches_explicit() {
        let s = build_sieve(40).unwrap();
        for q in 1..=5u64 {
            let tracks = f_coupled_tracks(q, 40, &s).unwrap();
            for n in 2..=40u64 {
                let shape = GridShape::new(vec![n - 1, n]).unwrap();
                assert_eq!(
                    tracks.near_square[(n - 1) as usize],
                    f_naive(q, &shape).unwrap(),
                    "q={q} n={n}"
                );
            }
        }
    }

    /// Zero seeds alone reproduce l(q−1, q) = q−1 at step n = q.
    #[test]
    fn seed_reproduction_small() {
        let s = build_sieve(60).unwrap();
        for q in 2..=12u64 {
            for kind in [LineKind::AtLeast, LineKind::Exact] {
                let tracks = l_coupled_tracks(kind, q, q, &s).unwrap();
                assert_eq!(
                    tracks.near_square[(q - 1) as usize],
                    big(q as i64 - 1),
                    "q={q}"
                );
                for n in 1..q {
                    assert_eq!(tracks.square[(n - 1) as usize], big(0));
                }
            }
        }
    }

    #[test]
    fn coupled_equals_single() {
        let s = build_sieve(300).unwrap();
        for q in 1..=10u64 {
            let coupled = f_square_coupled(q, 300, &s).unwrap();
            let single = f_square_single(q, 300, &s).unwrap();
            assert_eq!(coupled.rows(), single.rows(), "f q={q}");
        }
        for q in 2..=10u64 {
            for kind in [LineKind::AtLeast, LineKind::Exact] {
                let coupled =
                    l_square_sequence(kind, q, 300, &s, RecurrenceMethod::Coupled).unwrap();
                let single =
                    l_square_sequence(kind, q, 300, &s, RecurrenceMethod::Single).unwrap();
                assert_eq!(coupled.rows(), single.rows(), "l q={q}");
            }
        }
    }

    #[test]
    fn usage_errors() {
        let s = build_sieve(10).unwrap();
        assert!(f_square_coupled(0, 5, &s).is_err());
        assert!(f_square_coupled(1, 0, &s).is_err());
        assert!(f_square_coupled(1, 100, &s).is_err()); // sieve too small
        assert!(l_square_sequence(LineKind::Exact, 1, 5, &s, RecurrenceMethod::Coupled).is_err());
        assert!(c_square_sequence(1, 5, &s, RecurrenceMethod::Single).is_err());
        assert!(threshold_sequence(1, &s, RecurrenceMethod::Coupled).is_err());
    }

    #[test]
    #[should_panic(expected = "contiguous")]
    fn sequence_table_rejects_gaps() {
        SequenceTable::new(
            Quantity::Fq,
            1,
            Method::Coupled,
            vec![(1, big(0)), (3, big(1))],
        );
    }
}
