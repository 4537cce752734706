//! The cross-verification matrix behind `gridlines verify`: every value the
//! crate can produce two or more ways is produced every way and compared
//! exactly, together with the structural identities that need no second
//! method (gcd-class sums, pair conservation, the segment-line identity).

use std::process::ExitCode;

use num_traits::Zero;

use super::VerifyArgs;
use crate::closedform::{c_q, f_mobius, f_naive, l_exact, l_geq, threshold_count, GridShape};
use crate::numtheory::{build_sieve, e, SieveTable};
use crate::oracle::{census_at_least, line_census, segment_census, threshold_census};
use crate::recurrences::{
    c_square_sequence, f_coupled_tracks, f_square_coupled, f_square_single, l_coupled_tracks,
    l_square_sequence, LineKind, RecurrenceMethod,
};
use crate::{ExactInt, Result};

use super::{EXIT_MISMATCH, EXIT_OK};

const LEMMA_N_MAX: u64 = 500;
const SEED_Q_MAX: u64 = 50;

struct Mismatch {
    quantity: String,
    q: u64,
    dims: String,
    values: Vec<(String, String)>,
}

impl Mismatch {
    fn new(quantity: impl Into<String>, q: u64, dims: impl Into<String>) -> Self {
        Mismatch {
            quantity: quantity.into(),
            q,
            dims: dims.into(),
            values: Vec::new(),
        }
    }

    fn value(mut self, method: impl Into<String>, v: impl ToString) -> Self {
        self.values.push((method.into(), v.to_string()));
        self
    }
}

type CheckOutcome = std::result::Result<u64, Box<Mismatch>>;

struct Matrix {
    shapes: Vec<GridShape>,
    squares_n_max: u64,
    q_max: u64,
    sieve: SieveTable,
    pair_cap: u64,
    func_cap: u64,
    inject_fault: bool,
}

pub(super) fn run(args: &VerifyArgs) -> Result<ExitCode> {
    let n_max = args.n_max.unwrap_or(match args.k {
        3 => 5,
        _ => 12,
    });
    if args.k != 2 && args.k != 3 {
        return Err(crate::Error::usage(format!(
            "verification matrix supports k=2 or k=3, got {}",
            args.k
        )));
    }
    if n_max == 0 || args.q_max == 0 {
        return Err(crate::Error::usage("n-max and q-max must be ≥ 1"));
    }

    let mut shapes = Vec::new();
    if args.k == 2 {
        for n1 in 1..=n_max {
            for n2 in 1..=n_max {
                shapes.push(GridShape::new(vec![n1, n2])?);
            }
        }
    } else {
        for n1 in 1..=n_max {
            for n2 in 1..=n_max {
                for n3 in 1..=n_max {
                    shapes.push(GridShape::new(vec![n1, n2, n3])?);
                }
            }
        }
    }

    let sieve_limit = n_max.max(LEMMA_N_MAX).max(SEED_Q_MAX);
    let matrix = Matrix {
        shapes,
        squares_n_max: n_max,
        q_max: args.q_max,
        sieve: build_sieve(sieve_limit)?,
        pair_cap: args.pair_cap,
        func_cap: args.func_cap,
        inject_fault: args.inject_fault,
    };

    println!(
        "verify: k={}, extents ≤ {}, q ≤ {}",
        args.k, n_max, args.q_max
    );

    let checks: Vec<(&str, Box<dyn Fn(&Matrix) -> Result<CheckOutcome>>)> = vec![
        ("gcd-class sums (direct loops)", Box::new(check_gcd_class_sums)),
        ("naive vs mobius evaluators", Box::new(check_evaluators)),
        ("segment census vs closed form", Box::new(check_segments)),
        ("line census vs closed form", Box::new(check_lines)),
        ("recurrences vs closed form", Box::new(check_recurrences)),
        ("near-square track vs closed form", Box::new(check_near_square)),
        ("seed reproduction l(q-1,q)=q-1", Box::new(check_seeds)),
        ("pair conservation", Box::new(check_conservation)),
        ("segment-line identity", Box::new(check_segment_line)),
        ("threshold census vs closed form", Box::new(check_threshold)),
    ];

    let mut total_cases = 0u64;
    for (name, check) in &checks {
        match check(&matrix)? {
            Ok(cases) => {
                total_cases += cases;
                println!("PASS  {name:<36} {cases:>10} cases");
            }
            Err(mismatch) => {
                println!("FAIL  {name}");
                println!(
                    "  quantity={} q={} dims={}",
                    mismatch.quantity, mismatch.q, mismatch.dims
                );
                for (method, value) in &mismatch.values {
                    println!("    {method:<10} = {value}");
                }
                println!("VERIFY FAIL");
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
        }
    }
    println!("VERIFY PASS ({} checks, {total_cases} cases)", checks.len());
    Ok(ExitCode::from(EXIT_OK))
}

/// Count and sum each gcd class of 1..=n directly and compare with e_q and
/// the half-sum identities.
fn check_gcd_class_sums(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for n in 2..=LEMMA_N_MAX {
        let size = n as usize + 1;
        let mut count = vec![0u64; size];
        let mut sum = vec![0u64; size];
        let mut sum_rev = vec![0u64; size];
        for i in 1..=n {
            let g = num_integer::gcd(i, n) as usize;
            count[g] += 1;
            sum[g] += i;
            sum_rev[g] += n - i;
        }
        for q in 1..=n {
            let expected = e(q, n + 1, &m.sieve)?;
            if count[q as usize] != expected {
                return Ok(Err(Box::new(
                    Mismatch::new("gcd-class count", q, format!("n={n}"))
                        .value("direct", count[q as usize])
                        .value("e_q(n+1)", expected),
                )));
            }
            cases += 1;
            if q != n && n % q == 0 {
                if 2 * sum[q as usize] != n * expected || sum[q as usize] != sum_rev[q as usize] {
                    return Ok(Err(Box::new(
                        Mismatch::new("gcd-class sum", q, format!("n={n}"))
                            .value("2*direct", 2 * sum[q as usize])
                            .value("n*e_q(n+1)", n * expected),
                    )));
                }
                cases += 1;
            }
        }
        if sum[n as usize] != n || sum_rev[n as usize] != 0 {
            return Ok(Err(Box::new(
                Mismatch::new("gcd-class top sum", n, format!("n={n}"))
                    .value("direct", sum[n as usize])
                    .value("expected", n),
            )));
        }
        cases += 1;
    }
    Ok(Ok(cases))
}

fn check_evaluators(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for shape in &m.shapes {
        for q in 1..=m.q_max {
            let naive = f_naive(q, shape)?;
            let mobius = f_mobius(q, shape, &m.sieve)?;
            if naive != mobius {
                return Ok(Err(Box::new(
                    Mismatch::new("fq", q, shape.to_string())
                        .value("naive", naive)
                        .value("mobius", mobius),
                )));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn check_segments(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for shape in &m.shapes {
        let census = segment_census(shape, m.pair_cap)?;
        for q in 2..=m.q_max {
            let explicit = c_q(q, shape, Some(&m.sieve))?;
            let counted = census.get(&q).cloned().unwrap_or_default();
            if explicit != counted {
                return Ok(Err(Box::new(
                    Mismatch::new("cq", q, shape.to_string())
                        .value("explicit", explicit)
                        .value("oracle", counted),
                )));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn check_lines(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for shape in &m.shapes {
        let census = line_census(shape, m.pair_cap)?;
        for q in 2..=m.q_max {
            let exact = l_exact(q, shape, Some(&m.sieve))?;
            let counted = census.get(&q).cloned().unwrap_or_default();
            if exact != counted {
                return Ok(Err(Box::new(
                    Mismatch::new("lexact", q, shape.to_string())
                        .value("explicit", exact)
                        .value("oracle", counted),
                )));
            }
            let geq = l_geq(q, shape, Some(&m.sieve))?;
            let counted_geq = census_at_least(&census, q);
            if geq != counted_geq {
                return Ok(Err(Box::new(
                    Mismatch::new("lgeq", q, shape.to_string())
                        .value("explicit", geq)
                        .value("oracle", counted_geq),
                )));
            }
            cases += 2;
        }
    }
    Ok(Ok(cases))
}

fn check_recurrences(m: &Matrix) -> Result<CheckOutcome> {
    let n_max = m.squares_n_max;
    let mut cases = 0u64;
    let mut fault = m.inject_fault;

    let mut compare =
        |quantity: &str,
         q: u64,
         coupled: &crate::recurrences::SequenceTable,
         single: &crate::recurrences::SequenceTable,
         explicit: &dyn Fn(u64) -> Result<ExactInt>|
         -> Result<CheckOutcome> {
            for (n, coupled_v) in coupled.rows() {
                let expected = explicit(*n)?;
                let mut single_v = single
                    .value_at(*n)
                    .cloned()
                    .expect("methods cover the same rows");
                if fault {
                    single_v += 1u32;
                    fault = false;
                }
                if coupled_v != &expected || single_v != expected {
                    return Ok(Err(Box::new(
                        Mismatch::new(quantity, q, format!("{n}x{n}"))
                            .value("explicit", expected)
                            .value("coupled", coupled_v)
                            .value("single", single_v),
                    )));
                }
            }
            Ok(Ok(coupled.rows().len() as u64 * 2))
        };

    for q in 1..=m.q_max {
        let coupled = f_square_coupled(q, n_max, &m.sieve)?;
        let single = f_square_single(q, n_max, &m.sieve)?;
        let sieve = &m.sieve;
        match compare("fq", q, &coupled, &single, &|n| {
            f_mobius(q, &GridShape::square(n)?, sieve)
        })? {
            Ok(c) => cases += c,
            Err(e) => return Ok(Err(e)),
        }
    }
    for q in 2..=m.q_max {
        let sieve = &m.sieve;
        for (kind, name) in [(LineKind::AtLeast, "lgeq"), (LineKind::Exact, "lexact")] {
            let coupled = l_square_sequence(kind, q, n_max, sieve, RecurrenceMethod::Coupled)?;
            let single = l_square_sequence(kind, q, n_max, sieve, RecurrenceMethod::Single)?;
            let explicit = |n: u64| -> Result<ExactInt> {
                let shape = GridShape::square(n)?;
                match kind {
                    LineKind::AtLeast => l_geq(q, &shape, Some(sieve)),
                    LineKind::Exact => l_exact(q, &shape, Some(sieve)),
                }
            };
            match compare(name, q, &coupled, &single, &explicit)? {
                Ok(c) => cases += c,
                Err(e) => return Ok(Err(e)),
            }
        }

        let coupled = c_square_sequence(q, n_max, sieve, RecurrenceMethod::Coupled)?;
        let single = c_square_sequence(q, n_max, sieve, RecurrenceMethod::Single)?;
        match compare("cq", q, &coupled, &single, &|n| {
            c_q(q, &GridShape::square(n)?, Some(sieve))
        })? {
            Ok(c) => cases += c,
            Err(e) => return Ok(Err(e)),
        }
    }
    if n_max >= 2 {
        let sieve = &m.sieve;
        let coupled = crate::recurrences::threshold_sequence(n_max, sieve, RecurrenceMethod::Coupled)?;
        let single = crate::recurrences::threshold_sequence(n_max, sieve, RecurrenceMethod::Single)?;
        match compare("threshold", 0, &coupled, &single, &|n| {
            threshold_count(n, n, Some(sieve))
        })? {
            Ok(c) => cases += c,
            Err(e) => return Ok(Err(e)),
        }
    }
    Ok(Ok(cases))
}

fn check_near_square(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for q in 1..=m.q_max {
        let tracks = f_coupled_tracks(q, m.squares_n_max, &m.sieve)?;
        for n in 2..=m.squares_n_max {
            let shape = GridShape::new(vec![n - 1, n])?;
            let explicit = f_mobius(q, &shape, &m.sieve)?;
            let carried = &tracks.near_square[(n - 1) as usize];
            if carried != &explicit {
                return Ok(Err(Box::new(
                    Mismatch::new("fq near-square", q, shape.to_string())
                        .value("explicit", explicit)
                        .value("coupled", carried),
                )));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn check_seeds(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for q in 2..=SEED_Q_MAX {
        for kind in [LineKind::AtLeast, LineKind::Exact] {
            let tracks = l_coupled_tracks(kind, q, q, &m.sieve)?;
            let seed = &tracks.near_square[(q - 1) as usize];
            if seed != &ExactInt::from(q - 1) {
                return Ok(Err(Box::new(
                    Mismatch::new("line seed", q, format!("{}x{}", q - 1, q))
                        .value("coupled", seed)
                        .value("expected", q - 1),
                )));
            }
            if tracks.square[..(q - 1) as usize]
                .iter()
                .any(|v| !v.is_zero())
            {
                return Ok(Err(Box::new(
                    Mismatch::new("line zeros below q", q, format!("n<{q}"))
                        .value("coupled", "nonzero")
                        .value("expected", 0),
                )));
            }
            cases += 2;
        }
    }
    Ok(Ok(cases))
}

fn check_conservation(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for shape in &m.shapes {
        let n = shape.point_count();
        let pair_total = (&n * &n - &n) / ExactInt::from(2u8);

        // Closed form: Σ_{q≥2} c_q = N(N−1)/2.
        let mut total = ExactInt::zero();
        for q in 2..=shape.max_extent() {
            total += c_q(q, shape, Some(&m.sieve))?;
        }
        if total != pair_total {
            return Ok(Err(Box::new(
                Mismatch::new("sum cq", 0, shape.to_string())
                    .value("explicit", total)
                    .value("N(N-1)/2", pair_total),
            )));
        }

        // Census: same identity with no formulas involved.
        let census = segment_census(shape, m.pair_cap)?;
        let counted: ExactInt = census.values().sum();
        if counted != pair_total {
            return Ok(Err(Box::new(
                Mismatch::new("sum census", 0, shape.to_string())
                    .value("oracle", counted)
                    .value("N(N-1)/2", pair_total),
            )));
        }
        cases += 2;
    }
    Ok(Ok(cases))
}

fn check_segment_line(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for shape in &m.shapes {
        let segments = segment_census(shape, m.pair_cap)?;
        let lines = line_census(shape, m.pair_cap)?;
        let p_top = lines.keys().max().cloned().unwrap_or(1);
        for q in 2..=p_top + 1 {
            let from_lines: ExactInt = lines
                .range(q..)
                .map(|(p, cnt)| cnt * ExactInt::from(p - q + 1))
                .sum();
            let direct = segments.get(&q).cloned().unwrap_or_default();
            if direct != from_lines {
                return Ok(Err(Box::new(
                    Mismatch::new("cq from lines", q, shape.to_string())
                        .value("segments", direct)
                        .value("(p-q+1)·lp", from_lines),
                )));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn check_threshold(m: &Matrix) -> Result<CheckOutcome> {
    let mut cases = 0u64;
    for n1 in 2..=m.func_cap / 2 {
        for n2 in 2..=m.func_cap / n1 {
            let censused = threshold_census(n1, n2, m.func_cap)?;
            let explicit = threshold_count(n1, n2, Some(&m.sieve))?;
            if censused != explicit {
                return Ok(Err(Box::new(
                    Mismatch::new("threshold", 0, format!("{n1}x{n2}"))
                        .value("oracle", censused)
                        .value("f1 + 2", explicit),
                )));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}
