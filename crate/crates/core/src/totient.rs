//! Euler's φ and explicit prime-sum bounds: a Chebyshev-type bound on ψ, the bound on
//! Σ log p / p, the prime reciprocal sum, and the resulting lower bound on φ(n).

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_LIMIT: usize = 1_000_000;
pub const SIEVE_LIMIT_ENV: &str = "MARKOFF_SIEVE_LIMIT";
/// Absolute slack (scaled by max(1, |rhs|)) inside which a comparison is marginal.
pub const SLACK: f64 = 1e-9;

/// Sieve limit from the environment, falling back to [`DEFAULT_SIEVE_LIMIT`].
pub fn configured_limit() -> usize {
    std::env::var(SIEVE_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n >= 2)
        .unwrap_or(DEFAULT_SIEVE_LIMIT)
}

/// Shared sieve at the configured limit.
pub fn shared_sieve() -> &'static SieveTable {
    static SIEVE: OnceLock<SieveTable> = OnceLock::new();
    SIEVE.get_or_init(|| SieveTable::new(configured_limit()))
}

/// Smallest-prime-factor table on [0, limit].
#[derive(Clone, Debug)]
pub struct SieveTable {
    limit: usize,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SieveTable {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(2);
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &q in &primes {
                let m = i * q as usize;
                if q > spf[i] || m > limit {
                    break;
                }
                spf[m] = q;
            }
        }
        Self { limit, spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && n <= self.limit && self.spf[n] as usize == n
    }

    fn check_range(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Precondition("φ(0) is undefined".into()));
        }
        if n > self.limit {
            return Err(Error::Precondition(format!(
                "{n} exceeds the sieve limit {} (set {SIEVE_LIMIT_ENV})",
                self.limit
            )));
        }
        Ok(())
    }

    /// Prime factorisation as sorted (prime, exponent) pairs.
    pub fn factor(&self, n: usize) -> Result<Vec<(u64, u32)>> {
        self.check_range(n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let q = self.spf[m] as u64;
            m /= q as usize;
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
        Ok(out)
    }

    pub fn phi(&self, n: usize) -> Result<u64> {
        Ok(phi_from_factors(n as u64, &self.factor(n)?))
    }

    /// Λ(n): log q when n is a power of the prime q, else 0.
    pub fn von_mangoldt(&self, n: usize) -> f64 {
        if n < 2 || n > self.limit {
            return 0.0;
        }
        let q = self.spf[n] as usize;
        let mut m = n;
        while m % q == 0 {
            m /= q;
        }
        if m == 1 {
            (q as f64).ln()
        } else {
            0.0
        }
    }

    /// ψ(x) for every integer x ≤ limit, summed with compensation.
    pub fn psi_table(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.limit + 1);
        let mut acc = NeumaierSum::default();
        for n in 0..=self.limit {
            acc.add(self.von_mangoldt(n));
            out.push(acc.value());
        }
        out
    }

    pub fn psi(&self, x: usize) -> Result<f64> {
        if x > self.limit {
            return Err(Error::Precondition(format!("x = {x} exceeds the sieve limit {}", self.limit)));
        }
        let mut acc = NeumaierSum::default();
        for n in 2..=x {
            acc.add(self.von_mangoldt(n));
        }
        Ok(acc.value())
    }
}

/// φ(n) from a factorisation of n.
pub fn phi_from_factors(n: u64, factors: &[(u64, u32)]) -> u64 {
    factors.iter().fold(n, |acc, &(q, _)| acc / q * (q - 1))
}

/// φ(n) by Pollard factorisation, for arguments beyond any sieve.
pub fn phi_large(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("φ(0) is undefined".into()));
    }
    Ok(phi_from_factors(n, &crate::ff::factorize(n)))
}

/// φ(n) using the shared sieve.
pub fn phi(n: u64) -> Result<u64> {
    shared_sieve().phi(n as usize)
}

/// Compensated summation, accurate to a few ulps over millions of terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Pass,
    /// Within [`SLACK`] of equality; neither confirmed nor refuted in double precision.
    Marginal,
    Fail,
}

/// Grades `lhs ≤ rhs`.
pub fn check_le(lhs: f64, rhs: f64) -> Check {
    let tol = SLACK * rhs.abs().max(1.0);
    if lhs <= rhs - tol {
        Check::Pass
    } else if lhs <= rhs + tol {
        Check::Marginal
    } else {
        Check::Fail
    }
}

/// x log 4 + (log x + 2) log x / log 2.
pub fn psi_bound(x: f64) -> f64 {
    let l = x.ln();
    x * 4f64.ln() + (l + 2.0) * l / 2f64.ln()
}

pub fn psi_bound_check(sieve: &SieveTable, x: usize) -> Result<Check> {
    if x < 2 {
        return Err(Error::Precondition("ψ bound needs x ≥ 2".into()));
    }
    Ok(check_le(sieve.psi(x)?, psi_bound(x as f64)))
}

/// Integers x in [2, limit] where the ψ bound is not a clean pass.
pub fn psi_bound_scan(sieve: &SieveTable, limit: usize) -> Vec<(usize, Check)> {
    let table = sieve.psi_table();
    (2..=limit.min(sieve.limit()))
        .map(|x| (x, check_le(table[x], psi_bound(x as f64))))
        .filter(|&(_, c)| c != Check::Pass)
        .collect()
}

/// S(t) = Σ_{p ≤ t} log p / p for every integer t ≤ limit.
pub fn s_table(sieve: &SieveTable, limit: usize) -> Vec<f64> {
    let limit = limit.min(sieve.limit());
    let mut out = vec![0.0; limit + 1];
    let mut acc = NeumaierSum::default();
    for (t, slot) in out.iter_mut().enumerate() {
        if sieve.is_prime(t) {
            acc.add((t as f64).ln() / t as f64);
        }
        *slot = acc.value();
    }
    out
}

/// Integers t in [2, limit] with S(t) ≤ log t + 2 not cleanly satisfied.
pub fn s_bound_scan(sieve: &SieveTable, limit: usize) -> Vec<(usize, Check)> {
    let s = s_table(sieve, limit);
    (2..s.len())
        .map(|t| (t, check_le(s[t], (t as f64).ln() + 2.0)))
        .filter(|&(_, c)| c != Check::Pass)
        .collect()
}

/// Σ_{p ≤ L} 1/p with compensated summation.
pub fn prime_reciprocal_sum(sieve: &SieveTable, l: usize) -> f64 {
    let mut acc = NeumaierSum::default();
    for &q in sieve.primes().iter().take_while(|&&q| q as usize <= l) {
        acc.add(1.0 / q as f64);
    }
    acc.value()
}

/// Σ_{p ≤ L} 1/p ≤ log log L + 5.
pub fn prime_reciprocal_sum_bound(sieve: &SieveTable, l: usize) -> Result<Check> {
    if l < 3 || l > sieve.limit() {
        return Err(Error::Precondition(format!("L = {l} outside [3, {}]", sieve.limit())));
    }
    Ok(check_le(prime_reciprocal_sum(sieve, l), (l as f64).ln().ln() + 5.0))
}

/// Every L in [3, limit] where the reciprocal-sum bound is not a clean pass.
pub fn prime_reciprocal_scan(sieve: &SieveTable, limit: usize) -> Vec<(usize, Check)> {
    let limit = limit.min(sieve.limit());
    let mut acc = NeumaierSum::default();
    let mut out = Vec::new();
    for l in 2..=limit {
        if sieve.is_prime(l) {
            acc.add(1.0 / l as f64);
        }
        if l >= 3 {
            let c = check_le(acc.value(), (l as f64).ln().ln() + 5.0);
            if c != Check::Pass {
                out.push((l, c));
            }
        }
    }
    out
}

/// ∏_{p ≤ log n} (1 − 1/p) ≥ 1/(250 log log n). `n` may exceed the sieve; only primes up
/// to log n are needed.
pub fn mertens_product_bound(n: f64) -> Result<Check> {
    let l = n.ln();
    if !(l >= 2.0) {
        return Err(Error::Precondition(format!("log n = {l} is below 2")));
    }
    let sieve = SieveTable::new(l.floor() as usize);
    let product: f64 = sieve
        .primes()
        .iter()
        .take_while(|&&q| (q as f64) <= l)
        .map(|&q| 1.0 - 1.0 / q as f64)
        .product();
    let rhs = 1.0 / (250.0 * l.ln());
    Ok(check_le(rhs, product))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiViolation {
    pub n: u64,
    pub phi: u64,
    pub bound: f64,
    pub margin: f64,
    pub check: Check,
}

/// n/(500 log log n).
pub fn phi_lower_bound(n: f64) -> f64 {
    n / (500.0 * n.ln().ln())
}

/// Every n in [3, limit] with φ(n) > n/(500 log log n) not cleanly satisfied. n = 2 is
/// skipped because log log 2 < 0.
pub fn phi_lower_check(sieve: &SieveTable, limit: usize) -> Result<Vec<PhiViolation>> {
    if limit > sieve.limit() {
        return Err(Error::Precondition(format!(
            "limit {limit} exceeds the sieve limit {}",
            sieve.limit()
        )));
    }
    let mut out = Vec::new();
    for n in 3..=limit {
        let phi = sieve.phi(n)?;
        let bound = phi_lower_bound(n as f64);
        let check = check_le(bound, phi as f64);
        if check != Check::Pass {
            out.push(PhiViolation { n: n as u64, phi, bound, margin: phi as f64 - bound, check });
        }
    }
    Ok(out)
}

/// X log X − X + 1 ≤ Σ_{n ≤ X} log n ≤ (X + 1) log(X + 1) − X, checked for X in [1, limit].
pub fn integral_test_scan(limit: usize) -> Vec<(usize, Check)> {
    let mut acc = NeumaierSum::default();
    let mut out = Vec::new();
    for x in 1..=limit {
        acc.add((x as f64).ln());
        let xf = x as f64;
        let lower = check_le(xf * xf.ln() - xf + 1.0, acc.value());
        let upper = check_le(acc.value(), (xf + 1.0) * (xf + 1.0).ln() - xf);
        let worst = if lower == Check::Fail || upper == Check::Fail {
            Check::Fail
        } else if lower == Check::Marginal || upper == Check::Marginal {
            Check::Marginal
        } else {
            Check::Pass
        };
        if worst != Check::Pass {
            out.push((x, worst));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        let s = SieveTable::new(1000);
        assert_eq!(s.phi(8).unwrap(), 4);
        assert_eq!(s.phi(1).unwrap(), 1);
        assert_eq!(s.phi(20).unwrap(), 8);
        assert!(s.phi(0).is_err());
        assert!(s.phi(1001).is_err());
        assert_eq!(phi_large(1_000_000_007 + 1).unwrap(), s_phi_trial(1_000_000_008));
    }

    fn s_phi_trial(n: u64) -> u64 {
        let mut m = n;
        let mut r = n;
        let mut q = 2;
        while q * q <= m {
            if m % q == 0 {
                r = r / q * (q - 1);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            r = r / m * (m - 1);
        }
        r
    }

    #[test]
    fn psi_small() {
        let s = SieveTable::new(100);
        assert!((s.psi(10).unwrap() - 2520f64.ln()).abs() < 1e-12);
        assert!((s.psi(2).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(psi_bound_check(&s, 10).unwrap(), Check::Pass);
    }

    #[test]
    fn reciprocal_and_product() {
        let s = SieveTable::new(1000);
        assert!((prime_reciprocal_sum(&s, 100) - 1.8028).abs() < 1e-3);
        assert_eq!(prime_reciprocal_sum_bound(&s, 3).unwrap(), Check::Pass);
        for n in [1e6, 2f64.exp().exp(), 100.0] {
            assert_eq!(mertens_product_bound(n).unwrap(), Check::Pass, "n = {n}");
        }
        assert!(mertens_product_bound(5.0).is_err());
    }

    #[test]
    fn check_grades() {
        assert_eq!(check_le(1.0, 2.0), Check::Pass);
        assert_eq!(check_le(2.0, 2.0), Check::Marginal);
        assert_eq!(check_le(2.1, 2.0), Check::Fail);
    }
}
