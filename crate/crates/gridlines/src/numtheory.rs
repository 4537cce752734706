//! Exact elementary number theory: gcd of integer vectors, sieved Euler
//! totient and Möbius tables, and the `e_q` helper feeding the square-grid
//! recurrences.

use crate::{Error, Result};

/// gcd of the absolute values of `v`. The gcd of the all-zero vector is 0.
///
/// The zero vector is therefore never classified into any `q ≥ 1` offset
/// class.
pub fn gcd_vec(v: &[i64]) -> Result<u64> {
    if v.is_empty() {
        return Err(Error::usage("gcd_vec: empty vector"));
    }
    Ok(v.iter()
        .fold(0u64, |g, &x| num_integer::gcd(g, x.unsigned_abs())))
}

/// Tables of `φ(1..=limit)` and `μ(1..=limit)` from one linear sieve pass.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    phi: Vec<u64>,
    mu: Vec<i8>,
}

/// Build φ and μ tables up to `limit` with a linear sieve.
pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    if limit == 0 {
        return Err(Error::usage("build_sieve: limit must be ≥ 1"));
    }
    if limit > u64::from(u32::MAX) {
        return Err(Error::usage(format!(
            "build_sieve: limit {limit} too large to tabulate"
        )));
    }
    let n = usize::try_from(limit)
        .map_err(|_| Error::usage(format!("build_sieve: limit {limit} does not fit memory")))?;

    // Index 0 is unused padding so that phi[m] is φ(m).
    let mut phi = vec![0u64; n + 1];
    let mut mu = vec![0i8; n + 1];
    phi[1] = 1;
    mu[1] = 1;
    let mut least_factor = vec![0u32; n + 1];
    let mut primes: Vec<usize> = Vec::new();

    for i in 2..=n {
        if least_factor[i] == 0 {
            least_factor[i] = i as u32;
            primes.push(i);
            phi[i] = i as u64 - 1;
            mu[i] = -1;
        }
        for &p in &primes {
            if p > least_factor[i] as usize || p > n / i {
                break;
            }
            let m = i * p;
            least_factor[m] = p as u32;
            if i % p == 0 {
                phi[m] = phi[i] * p as u64;
                mu[m] = 0;
            } else {
                phi[m] = phi[i] * (p as u64 - 1);
                mu[m] = -mu[i];
            }
        }
    }

    Ok(SieveTable { limit, phi, mu })
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// φ(n) for 1 ≤ n ≤ limit. Panics outside that range.
    pub fn phi(&self, n: u64) -> u64 {
        assert!(
            n >= 1 && n <= self.limit,
            "phi({n}) outside sieve range 1..={}",
            self.limit
        );
        self.phi[n as usize]
    }

    /// μ(n) for 1 ≤ n ≤ limit. Panics outside that range.
    pub fn mu(&self, n: u64) -> i8 {
        assert!(
            n >= 1 && n <= self.limit,
            "mu({n}) outside sieve range 1..={}",
            self.limit
        );
        self.mu[n as usize]
    }
}

/// `e_q(n)`: φ((n−1)/q) when q divides n−1 and n ≥ 2, else 0.
///
/// `e_q(1)` is defined as 0; it only ever appears multiplied by `n−1 = 0` or
/// inside empty sums, so this keeps every summation uniform.
pub fn e(q: u64, n: u64, sieve: &SieveTable) -> Result<u64> {
    if q == 0 {
        return Err(Error::usage("e: q must be ≥ 1"));
    }
    if n == 0 {
        return Err(Error::usage("e: n must be ≥ 1"));
    }
    if n == 1 {
        return Ok(0);
    }
    let m = n - 1;
    if sieve.limit() < m {
        return Err(Error::usage(format!(
            "e: sieve limit {} too small for n = {n} (need ≥ {m})",
            sieve.limit()
        )));
    }
    Ok(if m % q == 0 { sieve.phi(m / q) } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_vec_conventions() {
        assert_eq!(gcd_vec(&[0, 0]).unwrap(), 0);
        assert_eq!(gcd_vec(&[-4, 6]).unwrap(), 2);
        assert_eq!(gcd_vec(&[6, 10, 15]).unwrap(), 1);
        assert_eq!(gcd_vec(&[0]).unwrap(), 0);
        assert_eq!(gcd_vec(&[-5]).unwrap(), 5);
        assert_eq!(gcd_vec(&[i64::MIN, 0]).unwrap(), 1 << 63);
        assert!(matches!(gcd_vec(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn sieve_small_tables() {
        assert!(matches!(build_sieve(0), Err(Error::Usage(_))));

        let s = build_sieve(1).unwrap();
        assert_eq!((s.phi(1), s.mu(1)), (1, 1));

        let s = build_sieve(10).unwrap();
        assert_eq!(s.phi(9), 6);
        assert_eq!(s.mu(9), 0);
        assert_eq!(s.phi(10), 4);
        assert_eq!(s.mu(10), 1);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(s.phi(p), p - 1);
            assert_eq!(s.mu(p), -1);
        }
    }

    /// Σ_{d|n} φ(d) = n and Σ_{d|n} μ(d) = [n = 1].
    #[test]
    fn sieve_divisor_sum_invariants() {
        let limit = 500u64;
        let s = build_sieve(limit).unwrap();
        for n in 1..=limit {
            let mut phi_sum = 0u64;
            let mut mu_sum = 0i64;
            for d in 1..=n {
                if n % d == 0 {
                    phi_sum += s.phi(d);
                    mu_sum += i64::from(s.mu(d));
                }
            }
            assert_eq!(phi_sum, n, "phi divisor sum at {n}");
            assert_eq!(mu_sum, i64::from(n == 1), "mu divisor sum at {n}");
        }
    }

    #[test]
    fn e_examples() {
        let s = build_sieve(20).unwrap();
        assert_eq!(e(1, 3, &s).unwrap(), 1);
        assert_eq!(e(2, 7, &s).unwrap(), 2);
        assert_eq!(e(3, 5, &s).unwrap(), 0);
        assert_eq!(e(7, 1, &s).unwrap(), 0);
        assert!(matches!(e(1, 22, &s), Err(Error::Usage(_))));
        assert!(matches!(e(0, 3, &s), Err(Error::Usage(_))));
    }

    /// e(2, 7) against its direct-count oracle: i in 1..=6 with gcd(i, 6) = 2.
    #[test]
    fn e_direct_count_oracle() {
        let s = build_sieve(10).unwrap();
        let direct = (1..=6u64).filter(|&i| num_integer::gcd(i, 6) == 2).count() as u64;
        assert_eq!(direct, 2);
        assert_eq!(e(2, 7, &s).unwrap(), direct);
    }

    #[test]
    fn e_at_q1_is_phi() {
        let s = build_sieve(300).unwrap();
        for n in 2..=300 {
            assert_eq!(e(1, n, &s).unwrap(), s.phi(n - 1));
        }
    }

    /// The three gcd-class sum identities, by direct loop.
    #[test]
    fn gcd_class_sums() {
        let s = build_sieve(301).unwrap();
        for n in 2..=300u64 {
            let mut count = vec![0u64; n as usize + 1];
            let mut sum = vec![0u64; n as usize + 1];
            let mut sum_rev = vec![0u64; n as usize + 1];
            for i in 1..=n {
                let g = num_integer::gcd(i, n) as usize;
                count[g] += 1;
                sum[g] += i;
                sum_rev[g] += n - i;
            }
            for q in 1..=n {
                let eq = e(q, n + 1, &s).unwrap();
                assert_eq!(count[q as usize], eq, "count class q={q} n={n}");
                if q != n && n % q == 0 {
                    assert_eq!(2 * sum[q as usize], n * eq, "sum class q={q} n={n}");
                    assert_eq!(sum[q as usize], sum_rev[q as usize]);
                }
            }
            assert_eq!(sum[n as usize], n);
            assert_eq!(sum_rev[n as usize], 0);
        }
    }
}
