//! Wall-clock comparison of the evaluation methods: the two explicit
//! evaluators against each other at growing square sizes, sequence
//! generation throughput, and the brute-force censuses at small sizes.

use std::time::Instant;

use super::output::Row;
use super::BenchArgs;
use crate::closedform::{f_mobius, f_naive, GridShape};
use crate::numtheory::build_sieve;
use crate::oracle::{census_at_least, line_census, segment_census, DEFAULT_PAIR_CAP};
use crate::recurrences::{l_square_sequence, LineKind, RecurrenceMethod};
use crate::Result;

const ORACLE_SIDES: [u64; 3] = [8, 12, 16];

fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

pub(super) fn run(args: &BenchArgs) -> Result<Vec<Row>> {
    let mut rows = Vec::new();

    // Naive vs Möbius closed-form evaluation, doubling sizes.
    let mut sizes: Vec<u64> = Vec::new();
    let mut n = 625;
    while n <= args.explicit_max {
        sizes.push(n);
        n *= 2;
    }
    if sizes.is_empty() {
        sizes.push(args.explicit_max.max(2));
    }
    let sieve = build_sieve(*sizes.iter().max().expect("nonempty"))?;
    for &n in &sizes {
        let shape = GridShape::square(n)?;

        let start = Instant::now();
        let naive = f_naive(1, &shape)?;
        let naive_secs = seconds_since(start);

        let start = Instant::now();
        let mobius = f_mobius(1, &shape, &sieve)?;
        let mobius_secs = seconds_since(start);

        assert_eq!(naive, mobius, "evaluator mismatch at {shape}");
        rows.push(Row {
            quantity: "fq",
            q: 1,
            dims: shape.to_string(),
            n,
            method: "naive",
            value: naive,
            seconds: Some(naive_secs),
        });
        rows.push(Row {
            quantity: "fq",
            q: 1,
            dims: shape.to_string(),
            n,
            method: "mobius",
            value: mobius,
            seconds: Some(mobius_secs),
        });
    }

    // Sequence generation to n_max; sieve build included in the timing, it
    // is part of the method's cost.
    for (method, token) in [
        (RecurrenceMethod::Coupled, "coupled"),
        (RecurrenceMethod::Single, "single"),
    ] {
        let start = Instant::now();
        let seq_sieve = build_sieve(args.n_max.max(1))?;
        let table = l_square_sequence(LineKind::AtLeast, 2, args.n_max, &seq_sieve, method)?;
        let secs = seconds_since(start);
        let (n, value) = table.rows().last().expect("n_max ≥ 1").clone();
        rows.push(Row {
            quantity: "lgeq",
            q: 2,
            dims: format!("{n}x{n}"),
            n,
            method: token,
            value,
            seconds: Some(secs),
        });
    }

    // Brute-force censuses at small sizes.
    for n in ORACLE_SIDES {
        let shape = GridShape::square(n)?;

        let start = Instant::now();
        let segments = segment_census(&shape, DEFAULT_PAIR_CAP)?;
        let secs = seconds_since(start);
        rows.push(Row {
            quantity: "cq",
            q: 2,
            dims: shape.to_string(),
            n,
            method: "oracle",
            value: segments.get(&2).cloned().unwrap_or_default(),
            seconds: Some(secs),
        });

        let start = Instant::now();
        let lines = line_census(&shape, DEFAULT_PAIR_CAP)?;
        let secs = seconds_since(start);
        rows.push(Row {
            quantity: "lgeq",
            q: 2,
            dims: shape.to_string(),
            n,
            method: "oracle",
            value: census_at_least(&lines, 2),
            seconds: Some(secs),
        });
    }

    Ok(rows)
}
