//! Euler-characteristic obstructions: a graph whose short cycles are scarce cannot have
//! enough faces to embed in a surface of large Euler characteristic.

use serde::{Deserialize, Serialize};

use super::certificate::{NonplanarityCertificate, Payload};
use crate::cycles::{census, count_cycles_of_length};
use crate::error::{Error, Result};
use crate::ff::{legendre, Field};
use crate::graph::{edge_count_simple, MarkoffGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feasibility {
    /// No embedding with the given χ exists.
    Violated,
    Satisfiable,
}

/// (g − 2)E − gV − Σ_{L<g} (g − L)·n_L.
pub fn euler_lhs(v: i64, e: i64, short_cycles: &[(i64, i64)], g: i64) -> i64 {
    let deficit: i64 = short_cycles
        .iter()
        .filter(|&&(l, _)| l < g)
        .map(|&(l, n)| (g - l) * n)
        .sum();
    (g - 2) * e - g * v - deficit
}

/// Tests (g − 2)E − gV − Σ (g − L)·n_L ≤ −gχ with n₄ = s, n₆ = h and no odd cycles below g.
/// Graphs with E < V (trees, for connected input) have no face-length constraint and are
/// always satisfiable.
pub fn euler_feasibility(v: u64, e: u64, s: u64, h: u64, chi: i64, g: u32) -> Feasibility {
    if e < v {
        return Feasibility::Satisfiable;
    }
    let g = g as i64;
    let lhs = euler_lhs(v as i64, e as i64, &[(4, s as i64), (6, h as i64)], g);
    if lhs <= -g * chi {
        Feasibility::Satisfiable
    } else {
        Feasibility::Violated
    }
}

/// Number of moves fixing a nonzero point, per move: p − 4 − (−1/p).
fn self_edges_per_move(p: u64) -> i64 {
    let f = Field::new(p).expect("prime");
    p as i64 - 4 - legendre(f.from_i64(-1)) as i64
}

/// Largest component size compatible with a planar embedding at g = 7, by residue of p
/// mod 12: 26p − 118, 26p − 110, 17p − 79, 17p − 71 for p ≡ 1, 5, 7, 11.
pub fn euler_residue_bound(p: u64) -> Result<i64> {
    let p_i = p as i64;
    match p % 12 {
        1 => Ok(26 * p_i - 118),
        5 => Ok(26 * p_i - 110),
        7 => Ok(17 * p_i - 79),
        11 => Ok(17 * p_i - 71),
        _ => Err(Error::Precondition(format!(
            "Euler residue bound needs p > 3 with p ≢ 0 mod 3, got {p}"
        ))),
    }
}

/// Inputs and outcome of the planar Euler inequality for one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerPayload {
    pub g: u32,
    pub vertices: u64,
    /// 3V − S with S the total number of self-edges; at most twice the component's edges.
    pub twice_edges_lower: i64,
    pub squares: u64,
    pub hexagons: u64,
    pub chi: i64,
    /// 2·((g − 2)E − gV − Σ deficits), evaluated at the edge lower bound.
    pub twice_lhs: i64,
    /// −2gχ.
    pub twice_rhs: i64,
    pub residue_bound: i64,
}

impl EulerPayload {
    /// Recomputes every derived field from p and V alone.
    pub fn derive(p: u64, v: u64) -> Result<Self> {
        let residue_bound = euler_residue_bound(p)?;
        let g = 7i64;
        let s = crate::cycles::expected_squares(p) as i64;
        let h = crate::cycles::expected_hexagons(p) as i64;
        let twice_e = 3 * v as i64 - 3 * self_edges_per_move(p);
        let twice_lhs = (g - 2) * twice_e - 2 * g * v as i64 - 2 * ((g - 4) * s + (g - 6) * h);
        Ok(Self {
            g: g as u32,
            vertices: v,
            twice_edges_lower: twice_e,
            squares: s as u64,
            hexagons: h as u64,
            chi: 2,
            twice_lhs,
            twice_rhs: -2 * g * 2,
            residue_bound,
        })
    }

    pub fn violated(&self) -> bool {
        self.twice_lhs > self.twice_rhs
    }
}

/// Outcome of the Euler test for a component of size `v_component`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EulerOutcome {
    NonPlanar(EulerPayload),
    Inconclusive(EulerPayload),
}

/// Applies the residue-class bound: a component larger than it cannot be planar.
pub fn euler_outcome(p: u64, v_component: u64) -> Result<EulerOutcome> {
    let payload = EulerPayload::derive(p, v_component)?;
    debug_assert_eq!(payload.violated(), v_component as i64 > payload.residue_bound);
    Ok(if payload.violated() {
        EulerOutcome::NonPlanar(payload)
    } else {
        EulerOutcome::Inconclusive(payload)
    })
}

/// Euler certificate when `v_component` exceeds the residue-class bound, otherwise an
/// inconclusive certificate carrying the comparison.
pub fn certify_euler(p: u64, v_component: u64) -> Result<NonplanarityCertificate> {
    Ok(match euler_outcome(p, v_component)? {
        EulerOutcome::NonPlanar(payload) => {
            NonplanarityCertificate::new(p, 0, Payload::Euler(payload)).with_parameter("g", 7)
        }
        EulerOutcome::Inconclusive(payload) => NonplanarityCertificate::inconclusive(
            p,
            0,
            format!("V = {v_component} ≤ {}", payload.residue_bound),
            vec!["euler".into()],
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthCandidate {
    pub g: u32,
    pub allowed: bool,
    /// ⌈((g − 2)E − gV − Σ deficits) / g⌉, a lower bound on −χ.
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBound {
    /// Lower bound on −χ, maximised over the allowed g.
    pub neg_chi_lower: i64,
    pub g: u32,
    pub candidates: Vec<GirthCandidate>,
    pub vertices: u64,
    pub edges: u64,
    pub squares: u64,
    pub hexagons: u64,
    pub seven_cycles: u64,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// −χ ≥ ⌈((g−2)E − gV − Σ (g−L)n_L) / g⌉ over g ∈ {7, 8}; g = 8 only when there are no
/// 7-cycles.
pub fn genus_lower_bound_from_counts(v: u64, e: u64, s: u64, h: u64, seven_cycles: u64) -> GenusBound {
    let candidates: Vec<GirthCandidate> = [7i64, 8]
        .into_iter()
        .map(|g| {
            let lhs = euler_lhs(v as i64, e as i64, &[(4, s as i64), (6, h as i64)], g);
            GirthCandidate {
                g: g as u32,
                allowed: g == 7 || seven_cycles == 0,
                bound: ceil_div(lhs, g),
            }
        })
        .collect();
    let best = candidates
        .iter()
        .filter(|c| c.allowed)
        .max_by_key(|c| c.bound)
        .expect("g = 7 is always allowed");
    GenusBound {
        neg_chi_lower: best.bound,
        g: best.g,
        candidates: candidates.clone(),
        vertices: v,
        edges: e,
        squares: s,
        hexagons: h,
        seven_cycles,
    }
}

/// Genus bound for a connected graph from its exact census and 7-cycle count.
pub fn genus_lower_bound(g: &MarkoffGraph) -> Result<GenusBound> {
    if g.component_count() != 1 {
        return Err(Error::Precondition(format!(
            "genus bound needs a connected graph, p = {} has {} components",
            g.p(),
            g.component_count()
        )));
    }
    let c = census(g)?;
    let e = edge_count_simple(g)?;
    let seven = count_cycles_of_length(g, 7) as u64;
    Ok(genus_lower_bound_from_counts(
        g.len() as u64,
        e,
        c.s() as u64,
        c.h() as u64,
        seven,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_examples() {
        assert_eq!(euler_feasibility(40, 60, 6, 6, 2, 7), Feasibility::Violated);
        assert_eq!(euler_feasibility(28, 36, 0, 4, 2, 7), Feasibility::Satisfiable);
        assert_eq!(euler_feasibility(4, 3, 0, 0, 2, 7), Feasibility::Satisfiable);
    }

    #[test]
    fn residue_bounds() {
        assert_eq!(euler_residue_bound(37).unwrap(), 844);
        assert_eq!(euler_residue_bound(19).unwrap(), 244);
        assert_eq!(euler_residue_bound(13).unwrap(), 220);
        assert_eq!(euler_residue_bound(7).unwrap(), 40);
        assert!(euler_residue_bound(3).is_err());
        assert!(euler_residue_bound(2).is_err());
    }

    #[test]
    fn certificates() {
        use crate::planarity::CertificateKind;
        assert_eq!(certify_euler(37, 1480).unwrap().kind, CertificateKind::Euler);
        assert_eq!(certify_euler(19, 304).unwrap().kind, CertificateKind::Euler);
        assert_eq!(certify_euler(13, 208).unwrap().kind, CertificateKind::Inconclusive);
        assert_eq!(certify_euler(7, 28).unwrap().kind, CertificateKind::Inconclusive);
        assert!(certify_euler(3, 0).is_err());
        assert!(certify_euler(19, 304).unwrap().validate().valid);
    }

    #[test]
    fn residue_bound_matches_inequality() {
        // the closed-form bound is exactly where the inequality flips
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 103] {
            let b = euler_residue_bound(p).unwrap();
            assert!(!EulerPayload::derive(p, b as u64).unwrap().violated(), "p={p}");
            assert!(EulerPayload::derive(p, b as u64 + 1).unwrap().violated(), "p={p}");
        }
    }

    #[test]
    fn genus_from_counts() {
        let b = genus_lower_bound_from_counts(28, 36, 0, 4, 0);
        assert_eq!(b.candidates[0].bound, -2);
        let b = genus_lower_bound_from_counts(40, 60, 6, 6, 0);
        assert_eq!((b.neg_chi_lower, b.g), (1, 8));
        let b = genus_lower_bound_from_counts(40, 60, 6, 6, 24);
        assert_eq!((b.neg_chi_lower, b.g), (0, 7));
    }
}
