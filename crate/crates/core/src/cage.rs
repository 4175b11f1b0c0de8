//! The cage: vertices with a coordinate z whose ζ (ζ + ζ⁻¹ = z) has the maximal order
//! p + 1. All of them lie in one component, which bounds that component from below by
//! roughly p·φ(p + 1).

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{factorize, legendre, zeta_of_trace, Field};
use crate::graph::MarkoffGraph;
use crate::totient::{phi_from_factors, SieveTable};

/// Traces z with ord(ζ) = p + 1, ascending. There are φ(p + 1)/2 of them.
pub fn maximal_traces(p: u64) -> Result<Vec<u64>> {
    let field = Field::new(p)?;
    if p == 2 {
        return Err(Error::Precondition("maximal traces need an odd prime".into()));
    }
    let n = p as u128 + 1;
    let primes: Vec<u128> = factorize(p + 1).into_iter().map(|(q, _)| q as u128).collect();
    let four = field.elem(4);
    Ok((0..p)
        .into_par_iter()
        .filter(|&z| {
            let z = field.elem(z);
            // a split or ramified ζ lies in 𝔽_p and has order dividing p − 1
            if legendre(z * z - four) != -1 {
                return false;
            }
            let zeta = zeta_of_trace(&field, z).expect("odd p");
            primes.iter().all(|&q| !zeta.pow(n / q).is_one())
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CageReport {
    pub p: u64,
    pub maximal_traces: Vec<u64>,
    /// Vertices with at least one maximal coordinate.
    pub cage_vertices: usize,
    /// Vertices whose z-coordinate alone is maximal.
    pub z_maximal_vertices: usize,
    pub phi_p_plus_1: u64,
    /// p·φ(p + 1).
    pub lower_bound: u64,
    pub containing_component_size: Option<usize>,
    /// Whether every cage vertex lies in one component.
    pub single_component: bool,
    /// p ≡ 1 mod 4, where the K₃,₃ construction makes the cage argument unnecessary.
    pub p_is_1_mod_4: bool,
}

pub fn cage_vertices(g: &MarkoffGraph) -> Result<CageReport> {
    let p = g.p();
    if g.k() % p != 0 {
        return Err(Error::Precondition("the cage is defined for k = 0".into()));
    }
    let traces = maximal_traces(p)?;
    let maximal: BTreeSet<u32> = traces.iter().map(|&z| z as u32).collect();
    let mut cage = 0;
    let mut z_max = 0;
    let mut first: Option<u32> = None;
    let mut single = true;
    for (i, t) in g.vertices().iter().enumerate() {
        if maximal.contains(&t.z) {
            z_max += 1;
        }
        if [t.x, t.y, t.z].iter().any(|c| maximal.contains(c)) {
            cage += 1;
            match first {
                None => first = Some(i as u32),
                Some(f) if g.component_id(f) != g.component_id(i as u32) => single = false,
                _ => {}
            }
        }
    }
    let phi = phi_from_factors(p + 1, &factorize(p + 1));
    Ok(CageReport {
        p,
        maximal_traces: traces,
        cage_vertices: cage,
        z_maximal_vertices: z_max,
        phi_p_plus_1: phi,
        lower_bound: p * phi,
        containing_component_size: first.map(|v| g.component_size_of(v)),
        single_component: single,
        p_is_1_mod_4: p % 4 == 1,
    })
}

/// p·φ(p + 1) without building the graph.
pub fn cage_lower_bound(p: u64) -> u64 {
    p * phi_from_factors(p + 1, &factorize(p + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScreenEntry {
    pub p: u64,
    pub phi_p_plus_1: u64,
    /// φ(p + 1) ≤ 17 − 71/p, under which the cage bound alone does not certify.
    pub passes_strict: bool,
}

/// Primes 3 < p ≤ limit with p ≡ 3 mod 4 and φ(p + 1) < 17.
pub fn phi_screen(limit: u64) -> Result<Vec<ScreenEntry>> {
    if limit < 2 {
        return Err(Error::Precondition("screen limit must be at least 2".into()));
    }
    let sieve = SieveTable::new(limit as usize + 1);
    let mut out = Vec::new();
    for &q in sieve.primes() {
        let p = q as u64;
        if p > limit || p <= 3 || p % 4 != 3 {
            continue;
        }
        let phi = sieve.phi(p as usize + 1)?;
        if phi < 17 {
            let strict = (phi as f64) <= 17.0 - 71.0 / p as f64;
            out.push(ScreenEntry { p, phi_p_plus_1: phi, passes_strict: strict });
        }
    }
    Ok(out)
}

fn f(x: f64) -> f64 {
    x / x.ln().ln()
}

/// Where x / log log x attains its minimum on (e, ∞): the root of log log x = 1 / log x.
pub fn threshold_minimum() -> (f64, f64) {
    let g = |x: f64| x.ln().ln() - 1.0 / x.ln();
    let (mut lo, mut hi) = (3.0f64, 100.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Solves x / log log x = target on the increasing branch with safeguarded Newton steps.
pub fn newton_threshold(target: f64) -> Result<f64> {
    let (x_min, f_min) = threshold_minimum();
    if !(target > f_min) {
        return Err(Error::TargetTooSmall(target));
    }
    let mut lo = x_min;
    let mut hi = x_min * 2.0;
    while f(hi) < target {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x) - target;
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let ll = x.ln().ln();
        let d = (ll - 1.0 / x.ln()) / (ll * ll);
        let mut next = x - fx / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-12 * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traces() {
        assert_eq!(maximal_traces(7).unwrap(), vec![3, 4]);
        assert_eq!(maximal_traces(11).unwrap(), vec![5, 6]);
        assert_eq!(maximal_traces(19).unwrap().len(), 4);
    }

    #[test]
    fn cage_p7_is_everything() {
        let g = MarkoffGraph::build(7, 0).unwrap();
        let r = cage_vertices(&g).unwrap();
        assert_eq!(r.cage_vertices, 28);
        assert_eq!(r.lower_bound, 28);
        assert!(r.single_component);
    }

    #[test]
    fn screen_and_threshold() {
        let s = phi_screen(100).unwrap();
        let ps: Vec<u64> = s.iter().map(|e| e.p).collect();
        assert_eq!(ps, vec![7, 11, 19, 23, 31, 47, 59]);
        assert_eq!(phi_screen(10).unwrap().iter().map(|e| e.p).collect::<Vec<_>>(), vec![7]);
        assert!((newton_threshold(8500.0).unwrap() - 19466.29).abs() < 0.01);
        assert!(newton_threshold(std::f64::consts::E).is_err());
        let v = newton_threshold(1e6).unwrap();
        assert!((f(v) / 1e6 - 1.0).abs() < 1e-4);
    }
}
