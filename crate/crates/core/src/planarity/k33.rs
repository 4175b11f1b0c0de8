//! Explicit K₃,₃ subdivisions: one for p ≡ 1 mod 4 built from orbits of m₁m₂-type words,
//! one with twelve vertices whenever 4k − 7 is a nonzero square, and a stored
//! configuration for p = 19.

use serde::Deserialize;

use super::certificate::{K33Payload, NonplanarityCertificate, Payload};
use super::subdivision::subdivision_report;
use crate::error::{Error, Result};
use crate::ff::{legendre, sqrt_mod, Field};
use crate::graph::{apply_move, ImplicitSurface, Move};
use crate::surface::Triple;

/// Arranges nine paths so that path 3i + j joins `a[i]` and `b[j]`.
fn order_paths(a: &[Triple; 3], b: &[Triple; 3], paths: Vec<Vec<Triple>>) -> Result<Vec<Vec<Triple>>> {
    let mut slots: Vec<Option<Vec<Triple>>> = vec![None; 9];
    for path in paths {
        let (Some(&s), Some(&t)) = (path.first(), path.last()) else {
            return Err(Error::Consistency("empty path".into()));
        };
        let find = |side: &[Triple; 3], v: Triple| side.iter().position(|&x| x == v);
        let (i, j) = match (find(a, s), find(b, t), find(a, t), find(b, s)) {
            (Some(i), Some(j), _, _) | (_, _, Some(i), Some(j)) => (i, j),
            _ => return Err(Error::Consistency(format!("path {s} to {t} does not join opposite sides"))),
        };
        if slots[3 * i + j].replace(path).is_some() {
            return Err(Error::Consistency(format!("two paths join {} and {}", a[i], b[j])));
        }
    }
    slots
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::Consistency("a K3,3 pair has no path".into())))
        .collect()
}

fn finish(p: u64, k: u64, a: [Triple; 3], b: [Triple; 3], paths: Vec<Vec<Triple>>) -> Result<NonplanarityCertificate> {
    let paths = order_paths(&a, &b, paths)?;
    let view = ImplicitSurface { p, k };
    let branch = [a[0], a[1], a[2], b[0], b[1], b[2]];
    subdivision_report(&view, &branch, &paths).map_err(Error::Consistency)?;
    Ok(NonplanarityCertificate::new(
        p,
        k,
        Payload::K33(K33Payload { branch_a: a, branch_b: b, paths }),
    ))
}

fn with_coordinate(base: u64, j: usize, value: u64) -> Triple {
    let mut c = [base as u32; 3];
    c[j] = value as u32;
    c.into()
}

// Alternates `second` then `first`, n times each, recording every vertex.
fn alternating_walk(start: Triple, first: Move, second: Move, n: u64, p: u64) -> Vec<Triple> {
    let mut walk = vec![start];
    let mut v = start;
    for _ in 0..n {
        for j in [second, first] {
            v = apply_move(v, j, p);
            walk.push(v);
        }
    }
    walk
}

/// Branch vertices are the permutations of (2 ± 2i, 2, 2) with i² = −1. Matching pairs are
/// one move apart; the other six pairs are joined by (p − 1)/2 double steps of an
/// alternating word.
pub fn k33_mod4(p: u64) -> Result<NonplanarityCertificate> {
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("k33_mod4 needs p ≡ 1 mod 4, got {p}")));
    }
    let f = Field::new(p)?;
    let (i, _) = sqrt_mod(f.from_i64(-1)).expect("−1 is a square when p ≡ 1 mod 4");
    let plus = (f.elem(2) + f.elem(2) * i).value();
    let minus = (f.elem(2) - f.elem(2) * i).value();
    let a = [0, 1, 2].map(|j| with_coordinate(2, j, plus));
    let b = [0, 1, 2].map(|j| with_coordinate(2, j, minus));
    let n = (p - 1) / 2;
    let [m1, m2, m3] = Move::ALL;
    let mut paths: Vec<Vec<Triple>> = (0..3).map(|j| vec![a[j], b[j]]).collect();
    paths.push(alternating_walk(a[0], m1, m2, n, p));
    paths.push(alternating_walk(a[0], m1, m3, n, p));
    paths.push(alternating_walk(b[0], m1, m2, n, p));
    paths.push(alternating_walk(b[0], m1, m3, n, p));
    paths.push(alternating_walk(a[1], m2, m3, n, p));
    paths.push(alternating_walk(b[1], m2, m3, n, p));
    Ok(finish(p, 0, a, b, paths)?.with_parameter("i", i.value()))
}

/// Twelve-vertex subdivision from the two roots x, 1 − x of x² − x + 2 = k. Branch
/// vertices put x (resp. 1 − x) in one coordinate and −1 in the others.
pub fn k33_sqrt_neg7(p: u64, k: u64) -> Result<NonplanarityCertificate> {
    if p == 2 {
        return Err(Error::Precondition("k33_sqrt_neg7 needs p odd".into()));
    }
    let f = Field::new(p)?;
    let k = k % p;
    let d = f.elem(4) * f.elem(k) - f.elem(7);
    match legendre(d) {
        1 => {}
        0 => {
            return Err(Error::Precondition(format!(
                "4k − 7 ≡ 0 mod {p}: x² − x + 2 = k has a single solution"
            )))
        }
        _ => return Err(Error::Precondition(format!("4k − 7 is not a square mod {p}"))),
    }
    let (r, _) = sqrt_mod(d).expect("residue");
    let x = (f.one() + r) / f.elem(2);
    let y = f.one() - x;
    let minus_one = p - 1;
    let a = [0, 1, 2].map(|j| with_coordinate(minus_one, j, x.value()));
    let b = [0, 1, 2].map(|l| with_coordinate(minus_one, l, y.value()));
    let mut paths = Vec::with_capacity(9);
    for j in 0..3 {
        for l in 0..3 {
            if j == l {
                paths.push(vec![a[j], b[j]]);
            } else {
                let mid = apply_move(a[j], Move::from_coordinate(l), p);
                paths.push(vec![a[j], mid, b[l]]);
            }
        }
    }
    Ok(finish(p, k, a, b, paths)?.with_parameter("x", x.value()))
}

#[derive(Deserialize)]
struct Fixture {
    p: u64,
    k: u64,
    branch_a: [Triple; 3],
    branch_b: [Triple; 3],
    paths: Vec<Vec<Triple>>,
}

const P19_FIXTURE: &str = include_str!("../../fixtures/k33_p19.json");

/// The hand-found configuration for p = 19, where neither construction above applies.
pub fn p19_fixture() -> Result<NonplanarityCertificate> {
    let fx: Fixture = serde_json::from_str(P19_FIXTURE)?;
    Ok(finish(fx.p, fx.k, fx.branch_a, fx.branch_b, fx.paths)?.with_parameter("source", "fixture"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let c = k33_mod4(5).unwrap();
        assert!(c.validate().valid);
        let i = c.parameters["i"].as_u64().unwrap();
        assert!(i == 2 || i == 3);
        let c = k33_mod4(17).unwrap();
        let Payload::K33(k) = &c.payload else { panic!() };
        assert_eq!(k.paths[1].len() - 1, 2 * 8);
        assert!(k33_mod4(7).is_err());
    }

    #[test]
    fn sqrt_neg7_cases() {
        let c = k33_sqrt_neg7(11, 0).unwrap();
        let x = c.parameters["x"].as_u64().unwrap();
        assert!(x == 5 || x == 7);
        assert!(c.validate().valid);
        assert!(k33_sqrt_neg7(23, 0).is_ok());
        assert!(k33_sqrt_neg7(19, 0).is_err());
        assert!(k33_sqrt_neg7(7, 0).is_err());
    }

    #[test]
    fn fixture_validates() {
        let c = p19_fixture().unwrap();
        assert_eq!(c.p, 19);
        assert!(c.validate().valid);
    }
}
