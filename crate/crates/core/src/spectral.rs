//! Second adjacency eigenvalue, Cheeger bounds and the separator comparison.
//!
//! Each self-edge adds 1 to the diagonal so every row sums to 3 and the constant vector on
//! each component is an eigenvector for 3. The loopless matrix is available behind
//! [`SpectralOptions::loopless`].

use std::collections::VecDeque;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MarkoffGraph, VertexId};

/// Largest n handled by the dense symmetric solver.
pub const DENSE_LIMIT: usize = 2500;
/// Tolerance for identifying the eigenvalue 3 in a dense spectrum.
pub const DENSE_TOL: f64 = 1e-8;
/// Residual target of the Lanczos iteration.
pub const ITERATIVE_TOL: f64 = 1e-6;

const KRYLOV_DIM: usize = 100;
const MAX_RESTARTS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    /// Drop self-edges instead of counting them on the diagonal.
    pub loopless: bool,
    /// Seed of the Lanczos start vector.
    pub seed: u64,
    pub tolerance: f64,
    /// Use the iterative solver even below [`DENSE_LIMIT`].
    pub force_iterative: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { loopless: false, seed: 0, tolerance: ITERATIVE_TOL, force_iterative: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralVerdict {
    SpectrallyNonplanar,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub p: u64,
    pub k: u64,
    pub n: usize,
    /// Largest |eigenvalue| once the eigenvalue 3 is removed with its multiplicity.
    pub lambda: f64,
    pub multiplicity_of_3: usize,
    pub cheeger_lower: f64,
    pub cheeger_upper: f64,
    /// `None` when the separator bound is vacuous (n ≤ 72).
    pub lt_ratio: Option<f64>,
    pub verdict: SpectralVerdict,
    pub method: SolverMethod,
    pub loopless: bool,
    /// Ritz residual for the iterative solver, 0 for the dense one.
    pub residual: f64,
}

/// 2√(2n) / (n/3 − 2√(2n)): the largest boundary-to-size ratio a separator in a planar
/// graph on n vertices allows.
pub fn lt_ratio(n: usize) -> Result<f64> {
    let sep = 2.0 * (2.0 * n as f64).sqrt();
    let denom = n as f64 / 3.0 - sep;
    if denom <= 0.0 {
        return Err(Error::VacuousLtBound(n));
    }
    Ok(sep / denom)
}

/// (3 − λ)/2 and √(6(3 − λ)).
pub fn cheeger_bounds(lambda: f64) -> (f64, f64) {
    let gap = (3.0 - lambda).max(0.0);
    (gap / 2.0, (6.0 * gap).sqrt())
}

/// Non-planar when the Cheeger lower bound beats the separator ratio.
pub fn spectral_verdict_for(lambda: f64, n: usize) -> SpectralVerdict {
    match lt_ratio(n) {
        Ok(r) if (3.0 - lambda) / 2.0 > r => SpectralVerdict::SpectrallyNonplanar,
        _ => SpectralVerdict::Inconclusive,
    }
}

pub fn spectral_verdict(report: &SpectralReport) -> SpectralVerdict {
    if report.n == 0 {
        return SpectralVerdict::Inconclusive;
    }
    spectral_verdict_for(report.lambda, report.n)
}

/// Dense adjacency matrix under the chosen convention.
pub fn adjacency_matrix(g: &MarkoffGraph, loopless: bool) -> DMatrix<f64> {
    let n = g.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in g.neighbors(i as VertexId) {
            let j = j as usize;
            if !(loopless && i == j) {
                a[(i, j)] += 1.0;
            }
        }
    }
    a
}

fn matvec(g: &MarkoffGraph, loopless: bool, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().enumerate().for_each(|(i, yi)| {
        *yi = g
            .neighbors(i as VertexId)
            .iter()
            .filter(|&&j| !(loopless && j as usize == i))
            .map(|&j| x[j as usize])
            .sum();
    });
}

pub fn adjacency_spectrum(g: &MarkoffGraph, opts: &SpectralOptions) -> Result<SpectralReport> {
    let n = g.len();
    let (lambda, multiplicity_of_3, method, residual) = if n == 0 {
        (0.0, 0, SolverMethod::Dense, 0.0)
    } else if n <= DENSE_LIMIT && !opts.force_iterative {
        let (l, m) = dense_second(g, opts.loopless);
        (l, m, SolverMethod::Dense, 0.0)
    } else {
        if opts.loopless {
            return Err(Error::Precondition(format!(
                "loopless spectrum is only computed densely (n ≤ {DENSE_LIMIT}, not forced iterative), got n = {n}"
            )));
        }
        let (l, m, r) = lanczos_second(g, opts)?;
        (l, m, SolverMethod::Lanczos, r)
    };
    let (cheeger_lower, cheeger_upper) = cheeger_bounds(lambda);
    let mut report = SpectralReport {
        p: g.p(),
        k: g.k(),
        n,
        lambda,
        multiplicity_of_3,
        cheeger_lower,
        cheeger_upper,
        lt_ratio: lt_ratio(n).ok(),
        verdict: SpectralVerdict::Inconclusive,
        method,
        loopless: opts.loopless,
        residual,
    };
    report.verdict = spectral_verdict(&report);
    Ok(report)
}

fn dense_second(g: &MarkoffGraph, loopless: bool) -> (f64, usize) {
    let mut ev: Vec<f64> = adjacency_matrix(g, loopless)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_unstable_by(|a, b| b.total_cmp(a));
    let mult = ev.iter().filter(|&&e| (e - 3.0).abs() < DENSE_TOL).count();
    // without loops the Perron value drops below 3; remove it all the same
    let skip = mult.max(1);
    let lambda = ev[skip.min(ev.len())..]
        .iter()
        .fold(0.0f64, |m, &e| m.max(e.abs()));
    (lambda, mult)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = dot(x, x).sqrt();
    if nrm > 0.0 {
        x.par_iter_mut().for_each(|v| *v /= nrm);
    }
    nrm
}

// Component indicators, orthonormal since components are disjoint.
fn component_indicators(g: &MarkoffGraph) -> Vec<Vec<f64>> {
    (0..g.component_count() as u32)
        .map(|c| {
            let members = g.component_members(c);
            let w = 1.0 / (members.len() as f64).sqrt();
            let mut v = vec![0.0; g.len()];
            for m in members {
                v[m as usize] = w;
            }
            v
        })
        .collect()
}

fn project_out(basis: &[Vec<f64>], x: &mut [f64]) {
    for b in basis {
        let c = dot(b, x);
        axpy(-c, b, x);
    }
}

/// Restarted Lanczos with full reorthogonalisation on the complement of the component
/// indicators. Returns λ, the multiplicity of 3 and the final Ritz residual.
fn lanczos_second(g: &MarkoffGraph, opts: &SpectralOptions) -> Result<(f64, usize, f64)> {
    let n = g.len();
    let deflate = component_indicators(g);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        project_out(&deflate, &mut start);
        if normalize(&mut start) == 0.0 {
            // deflated space is empty: every eigenvalue is 3
            return Ok((0.0, deflate.len(), 0.0));
        }
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];
        let mut invariant = false;
        for j in 0..KRYLOV_DIM.min(n - deflate.len()) {
            matvec(g, false, &basis[j], &mut w);
            project_out(&deflate, &mut w);
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    axpy(-c, b, &mut w);
                }
            }
            let beta = normalize(&mut w);
            if beta < 1e-12 {
                invariant = true;
                break;
            }
            betas.push(beta);
            basis.push(w.clone());
        }
        let m = alphas.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alphas[r]
            } else if r + 1 == c || c + 1 == r {
                betas[r.min(c)]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty tridiagonal");
        let last_beta = if invariant { 0.0 } else { betas.get(m - 1).copied().unwrap_or(0.0) };
        residual = last_beta * eig.eigenvectors[(m - 1, idx)].abs();
        if residual < opts.tolerance {
            let extra = usize::from((theta - 3.0).abs() < opts.tolerance);
            return Ok((theta.abs(), deflate.len() + extra, residual));
        }
        // restart from the Ritz vector
        start = vec![0.0; n];
        for (i, b) in basis.iter().take(m).enumerate() {
            axpy(eig.eigenvectors[(i, idx)], b, &mut start);
        }
    }
    Err(Error::NonConvergence { residual })
}

/// Smallest |∂A| / min(|A|, n − |A|) over `samples` breadth-first balls of random centre and
/// size. Any cut bounds h(G) from above, so this is an upper bound on the Cheeger constant.
pub fn sampled_cut_ratio(g: &MarkoffGraph, samples: usize, seed: u64) -> Option<f64> {
    let n = g.len();
    if n < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut order: Vec<VertexId> = Vec::new();
    for _ in 0..samples {
        let centre = rng.random_range(0..n) as VertexId;
        let target = rng.random_range(1..=n / 2);
        let mut inside = vec![false; n];
        let mut queue = VecDeque::from([centre]);
        inside[centre as usize] = true;
        let mut size = 1;
        while size < target {
            let Some(v) = queue.pop_front() else { break };
            order.clear();
            order.extend(g.simple_neighbors(v));
            order.shuffle(&mut rng);
            for &w in &order {
                if size < target && !inside[w as usize] {
                    inside[w as usize] = true;
                    size += 1;
                    queue.push_back(w);
                }
            }
        }
        let boundary = g
            .simple_edges()
            .iter()
            .filter(|&&(u, v, _)| inside[u as usize] != inside[v as usize])
            .count();
        let ratio = boundary as f64 / size.min(n - size) as f64;
        best = best.min(ratio);
    }
    Some(best)
}
