//! Closed-form fixed point sets of the short words.

use crate::error::{Error, Result};
use crate::ff::{sqrt_mod, zeta_of_trace, Field, Fp};
use crate::graph::{apply_move, ImplicitSurface, Move, SurfaceView};
use crate::surface::{sqrt_table, Triple};

use super::words::{Method, Word, WordFixedPoints};

fn odd_field(p: u64) -> Result<Field> {
    let f = Field::new(p)?;
    if p == 2 {
        return Err(Error::Precondition("closed forms need an odd prime".into()));
    }
    Ok(f)
}

// All vertices (x, y, z) with the given z.
fn level_vertices(z: u64, k: u64, p: u64, sq: &[u32]) -> Vec<Triple> {
    let surface = ImplicitSurface { p, k };
    let half = (p + 1) / 2;
    let mut out = Vec::new();
    for x in 0..p {
        // y² − (xz) y + (x² + z² − k) = 0
        let a = x * z % p;
        let c = (x * x + z * z + p - k % p) % p;
        let disc = (a * a + 4 * (p - c)) % p;
        let r = sq[disc as usize];
        if r == u32::MAX {
            continue;
        }
        let r = r as u64;
        for y in [(a + p - r) % p * half % p, (a + r) % p * half % p] {
            let t = Triple::new(x as u32, y as u32, z as u32);
            if surface.is_vertex(t) {
                out.push(t);
            }
        }
    }
    out
}

/// Fixed points of (m₂ m₁)^L. On the level z = ζ + ζ⁻¹ the word acts on (x, y) by the
/// L-th power of [[−1, z], [−z, z² − 1]], whose eigenvalues are ζ^{±2}:
///
/// * z ≠ ±2: the whole level is fixed iff ζ^{2L} = 1, otherwise only (0, 0, z), which is a
///   vertex only when z² = k;
/// * z = ±2: the matrix is unipotent, so the whole level is fixed iff p | L, otherwise only
///   the line x = ±y, which meets the level only when k = 4.
pub fn fixed_points_alternating(l: usize, p: u64, k: u64) -> Result<WordFixedPoints> {
    if l == 0 {
        return Err(Error::Precondition("L must be positive".into()));
    }
    let f = odd_field(p)?;
    let k = k % p;
    let surface = ImplicitSurface { p, k };
    let sq = sqrt_table(p);
    let mut solutions = Vec::new();
    for z in 0..p {
        let zf = f.elem(z);
        let whole_level = if z == 2 || z == p - 2 {
            l as u64 % p == 0
        } else {
            zeta_of_trace(&f, zf)?.pow(2 * l as u128).is_one()
        };
        if whole_level {
            solutions.extend(level_vertices(z, k, p, &sq));
        } else if z == 2 || z == p - 2 {
            for x in 0..p as u32 {
                let y = if z == 2 { x } else { (p as u32 - x) % p as u32 };
                let t = Triple::new(x, y, z as u32);
                if surface.is_vertex(t) {
                    solutions.push(t);
                }
            }
        } else {
            let t = Triple::new(0, 0, z as u32);
            if surface.is_vertex(t) {
                solutions.push(t);
            }
        }
    }
    Ok(WordFixedPoints::new(Word::alternating(l), solutions, Method::ClosedForm))
}

/// Fixed points of 323121 on k = 0: roots of x⁴ − 5x² + 8 with z = ±x and
/// y = xz / (x² − 2). Both m₁- and m₃-neighbours of each solution carry an m₂ self-edge;
/// this is checked before returning.
pub fn fixed_points_323121(p: u64) -> Result<WordFixedPoints> {
    let f = odd_field(p)?;
    let word: Word = "323121".parse().expect("valid word");
    let mut solutions = Vec::new();
    if p != 3 && p != 7 {
        // x² = (5 ± √−7) / 2
        if let Some((r, s)) = sqrt_mod(f.from_i64(-7)) {
            let half = f.elem(2).inv().expect("p odd");
            for root in [r, s] {
                let u = (f.elem(5) + root) * half;
                let Some((x1, x2)) = sqrt_mod(u) else { continue };
                for x in [x1, x2] {
                    let denom = x * x - f.elem(2);
                    let Some(dinv) = denom.inv() else {
                        return Err(Error::Consistency(format!("x² = 2 at p = {p}")));
                    };
                    for z in [x, -x] {
                        let y = x * z * dinv;
                        solutions.push(triple(x, y, z));
                    }
                }
            }
        }
    } else if p == 7 {
        // −7 ≡ 0: the biquadratic is (x² − 6)², and 6 is a non-residue mod 7
        debug_assert!(sqrt_mod(f.elem(6)).is_none());
    }
    for &t in &solutions {
        for j in [Move::M1, Move::M3] {
            let nb = apply_move(t, j, p);
            if apply_move(nb, Move::M2, p) != nb {
                return Err(Error::Consistency(format!(
                    "{t}: {j}-neighbour {nb} lacks an m2 self-edge"
                )));
            }
        }
    }
    Ok(WordFixedPoints::new(word, solutions, Method::ClosedForm))
}

/// Fixed points of 321321 on k = 0: y² + 3y + 3 = 0 with x = ±y/(y+1), z = −x, or
/// y² − 3y + 3 = 0 with x = ±y/(y−1), z = x. Non-empty iff −3 is a square.
pub fn fixed_points_321321(p: u64) -> Result<WordFixedPoints> {
    let f = odd_field(p)?;
    let word: Word = "321321".parse().expect("valid word");
    let mut solutions = Vec::new();
    if p != 3 {
        if let Some((r, s)) = sqrt_mod(f.from_i64(-3)) {
            let half = f.elem(2).inv().expect("p odd");
            for (sign, three) in [(1i64, f.elem(3)), (-1, -f.elem(3))] {
                // roots of y² + 3·sign·y + 3
                for root in [r, s] {
                    let y = (-three + root) * half;
                    let shift = y + f.from_i64(sign);
                    let base = y / shift;
                    for x in [base, -base] {
                        let z = if sign == 1 { -x } else { x };
                        solutions.push(triple(x, y, z));
                    }
                }
            }
        }
    }
    Ok(WordFixedPoints::new(word, solutions, Method::ClosedForm))
}

/// The six triples on the level z = 1 whose ⟨m₁, m₂⟩-orbit runs through a self-edge
/// instead of closing into a hexagon: (x, 2x, 1) with x² = −1/3 and its images. Empty
/// unless −3 is a square.
pub fn discarded_hexagon_triples(p: u64) -> Result<Vec<Triple>> {
    let f = odd_field(p)?;
    let mut out = Vec::new();
    if p == 3 {
        return Ok(out);
    }
    let target = -(f.elem(3).inv().expect("p != 3"));
    if let Some((a, b)) = sqrt_mod(target) {
        for x in [a, b] {
            let mut t = triple(x, x + x, f.one());
            for step in 0..6 {
                out.push(t);
                t = apply_move(t, if step % 2 == 0 { Move::M1 } else { Move::M2 }, p);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn triple(x: Fp, y: Fp, z: Fp) -> Triple {
    Triple::new(x.value() as u32, y.value() as u32, z.value() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_examples() {
        assert!(fixed_points_alternating(2, 7, 0).unwrap().solutions.is_empty());
        let fp = fixed_points_alternating(2, 5, 0).unwrap();
        assert_eq!(fp.solutions.len(), 8);
        assert!(fp.solutions.iter().all(|t| t.z == 0));
        let fp = fixed_points_alternating(3, 5, 0).unwrap();
        assert_eq!(fp.solutions.len(), 12);
        assert!(fp.solutions.iter().all(|t| t.z == 1 || t.z == 4));
        assert!(fp.verify(5));
    }

    #[test]
    fn word_examples() {
        let fp = fixed_points_323121(11).unwrap();
        assert!(fp.solutions.contains(&Triple::new(3, 6, 3)));
        assert!(fp.verify(11));
        assert!(fixed_points_323121(7).unwrap().solutions.is_empty());

        let fp = fixed_points_321321(7).unwrap();
        assert!(fp.solutions.contains(&Triple::new(4, 1, 3)));
        assert!(fp.verify(7));
        assert!(fixed_points_321321(5).unwrap().solutions.is_empty());
        assert_eq!(fixed_points_321321(13).unwrap().solutions.len(), 8);
    }

    #[test]
    fn discarded_triples_are_self_edged() {
        let d = discarded_hexagon_triples(13).unwrap();
        assert_eq!(d.len(), 6);
        for &t in &d {
            assert_eq!(t.z, 1);
            assert_eq!(t.level(13), 0);
        }
        // each orbit is a path of three with a self-edge at both ends
        let ends = d
            .iter()
            .filter(|&&t| Move::ALL.iter().any(|&j| apply_move(t, j, 13) == t))
            .count();
        assert_eq!(ends, 4);
        assert!(discarded_hexagon_triples(11).unwrap().is_empty());
    }
}
