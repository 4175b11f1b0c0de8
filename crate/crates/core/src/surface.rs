//! Solutions of x² + y² + z² = xyz + k over 𝔽_p.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{legendre, Field, Fp};

/// A point (x, y, z) with coordinates reduced mod p. Ordering is lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct Triple {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Triple {
    pub const fn new(x: u32, y: u32, z: u32) -> Self {
        Self { x, y, z }
    }

    /// Reduces signed coordinates mod p.
    pub fn from_signed(c: [i64; 3], p: u64) -> Self {
        let r = |v: i64| v.rem_euclid(p as i64) as u32;
        Self::new(r(c[0]), r(c[1]), r(c[2]))
    }

    pub fn coords(self) -> [u64; 3] {
        [self.x as u64, self.y as u64, self.z as u64]
    }

    pub fn get(self, i: usize) -> u32 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("coordinate index {i} out of range"),
        }
    }

    /// x² + y² + z² − xyz mod p.
    pub fn level(self, p: u64) -> u64 {
        let [x, y, z] = self.coords();
        let m = p as u128;
        let (x, y, z) = (x as u128, y as u128, z as u128);
        let sq = (x * x + y * y + z * z) % m;
        let prod = x * y % m * z % m;
        ((sq + m - prod) % m) as u64
    }

    /// Moves coordinate i to position `sigma[i]`.
    pub fn permuted(self, sigma: [usize; 3]) -> Self {
        let mut out = [0u32; 3];
        for (i, &s) in sigma.iter().enumerate() {
            out[s] = self.get(i);
        }
        out.into()
    }

    /// Label of the form `x,y,z` used in exports.
    pub fn label(self) -> String {
        format!("{},{},{}", self.x, self.y, self.z)
    }
}

impl From<[u32; 3]> for Triple {
    fn from(c: [u32; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }
}

impl From<Triple> for [u32; 3] {
    fn from(t: Triple) -> Self {
        [t.x, t.y, t.z]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl FromStr for Triple {
    type Err = Error;

    /// Accepts `x,y,z` with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad triple label {s:?}")));
        }
        let mut c = [0u32; 3];
        for (slot, part) in c.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate {part:?} in {s:?}")))?;
        }
        Ok(c.into())
    }
}

/// Which branch of the level-count formula applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    Generic,
    ZSquaredFour,
    ZSquaredK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub z: u64,
    pub count: u64,
    pub case_tag: CaseTag,
}

/// Number of pairs (x, y) with x² + y² + z² = xyz + k. Requires p odd.
pub fn count_level(z: Fp, k: Fp) -> LevelCount {
    let p = z.modulus();
    debug_assert!(p % 2 == 1, "count_level needs an odd prime");
    let four = Fp::from_raw(4, p);
    let zz = z * z;
    let (count, case_tag) = if zz == four {
        ((1 + legendre(k - four)) as u64 * p, CaseTag::ZSquaredFour)
    } else if zz == k {
        let c = p as i64 + legendre(k - four) as i64 * (p as i64 - 1);
        (c as u64, CaseTag::ZSquaredK)
    } else {
        ((p as i64 - legendre(zz - four) as i64) as u64, CaseTag::Generic)
    };
    LevelCount { z: z.value(), count, case_tag }
}

/// Total number of solutions, including any that are later excluded as vertices.
pub fn total_count(k: Fp) -> u64 {
    let p = k.modulus();
    let four = Fp::from_raw(4, p);
    let t = (p * p) as i64 + (legendre(k - four) * (3 + legendre(k))) as i64 * p as i64 + 1;
    t as u64
}

/// p² + 3p·(−1)^((p−1)/2); zero for p = 3.
pub fn carlitz_count(p: u64) -> u64 {
    if p % 4 == 1 {
        p * p + 3 * p
    } else {
        p * p - 3 * p
    }
}

/// True for the level k ≡ 4 mod p (p odd), where lines of solutions coalesce and the
/// graph contains fixed lines such as (x, x, 2).
pub fn is_degenerate_level(k: u64, p: u64) -> bool {
    p % 2 == 1 && k % p == 4 % p
}

// Smallest square root of every residue, u32::MAX for non-residues.
pub(crate) fn sqrt_table(p: u64) -> Vec<u32> {
    let mut t = vec![u32::MAX; p as usize];
    for r in (0..p).rev() {
        t[(r * r % p) as usize] = r as u32;
    }
    t
}

fn fixed_by_all_moves(t: Triple, p: u64) -> bool {
    let [x, y, z] = t.coords();
    (2 * x) % p == y * z % p && (2 * y) % p == x * z % p && (2 * z) % p == x * y % p
}

/// All vertices of the level-k surface in lexicographic order. Triples fixed by all three
/// moves are excluded; for k = 0 this is exactly the origin.
pub fn enumerate_vertices(k: u64, p: u64) -> Result<Vec<Triple>> {
    Field::new(p)?;
    if p > u32::MAX as u64 {
        return Err(Error::Precondition(format!("p = {p} too large to enumerate")));
    }
    let k = k % p;
    if p == 2 {
        let mut out = Vec::new();
        for x in 0..2u32 {
            for y in 0..2u32 {
                for z in 0..2u32 {
                    let t = Triple::new(x, y, z);
                    if t.level(2) == k && !fixed_by_all_moves(t, 2) {
                        out.push(t);
                    }
                }
            }
        }
        return Ok(out);
    }
    let sq = sqrt_table(p);
    let half = (p + 1) / 2;
    let rows: Vec<Vec<Triple>> = (0..p)
        .into_par_iter()
        .map(|x| {
            let mut row = Vec::new();
            for y in 0..p {
                // z² − (xy) z + (x² + y² − k) = 0
                let a = x * y % p;
                let c = (x * x + y * y + p - k) % p;
                let disc = (a * a + 4 * (p - c)) % p;
                let r = sq[disc as usize];
                if r == u32::MAX {
                    continue;
                }
                let r = r as u64;
                let z1 = (a + p - r) % p * half % p;
                let z2 = (a + r) % p * half % p;
                let (lo, hi) = if z1 <= z2 { (z1, z2) } else { (z2, z1) };
                for z in if lo == hi { vec![lo] } else { vec![lo, hi] } {
                    let t = Triple::new(x as u32, y as u32, z as u32);
                    if !fixed_by_all_moves(t, p) {
                        row.push(t);
                    }
                }
            }
            row
        })
        .collect();
    Ok(rows.concat())
}

/// Solutions of x² + y² + z² = a·xyz other than the origin, in lexicographic order.
pub fn rescaled_enumerate(a: Fp) -> Result<Vec<Triple>> {
    let p = a.modulus();
    let field = Field::new(p)?;
    if let Some(inv) = a.inv() {
        let mut out: Vec<Triple> = enumerate_vertices(0, p)?
            .into_iter()
            .map(|t| {
                let [x, y, z] = t.coords().map(|c| (field.elem(c) * inv).value() as u32);
                Triple::new(x, y, z)
            })
            .collect();
        out.sort_unstable();
        return Ok(out);
    }
    // a ≡ 0: the cone x² + y² + z² = 0.
    let sq = sqrt_table(p);
    let mut out = Vec::new();
    for x in 0..p {
        for y in 0..p {
            let need = (2 * p * p - x * x - y * y) % p;
            let r = sq[need as usize];
            if r == u32::MAX {
                continue;
            }
            let r = r as u64;
            let mut zs = vec![r, (p - r) % p];
            zs.sort_unstable();
            zs.dedup();
            for z in zs {
                if x != 0 || y != 0 || z != 0 {
                    out.push(Triple::new(x as u32, y as u32, z as u32));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_examples() {
        let f5 = Field::new(5).unwrap();
        let lc = count_level(f5.elem(0), f5.elem(0));
        assert_eq!((lc.count, lc.case_tag), (9, CaseTag::ZSquaredK));
        let lc = count_level(f5.elem(1), f5.elem(0));
        assert_eq!((lc.count, lc.case_tag), (6, CaseTag::Generic));
        let f7 = Field::new(7).unwrap();
        let lc = count_level(f7.elem(2), f7.elem(0));
        assert_eq!((lc.count, lc.case_tag), (0, CaseTag::ZSquaredFour));
    }

    #[test]
    fn totals() {
        for (p, want) in [(7, 29), (5, 41), (3, 1)] {
            let f = Field::new(p).unwrap();
            assert_eq!(total_count(f.elem(0)), want);
        }
        assert_eq!(carlitz_count(7), 28);
        assert_eq!(carlitz_count(11), 88);
        assert_eq!(carlitz_count(5), 40);
        assert_eq!(carlitz_count(3), 0);
    }

    #[test]
    fn vertex_lists() {
        let v7 = enumerate_vertices(0, 7).unwrap();
        assert_eq!(v7.len(), 28);
        assert!(v7.contains(&Triple::new(3, 3, 3)));
        assert!(v7.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_vertices(0, 13).unwrap().len(), 208);
        assert_eq!(enumerate_vertices(0, 19).unwrap().len(), 304);
        assert!(enumerate_vertices(0, 3).unwrap().is_empty());
        assert_eq!(enumerate_vertices(0, 2).unwrap().len(), 4);
        assert!(matches!(enumerate_vertices(0, 9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn rescaled() {
        let f3 = Field::new(3).unwrap();
        let cube = rescaled_enumerate(f3.elem(3)).unwrap();
        assert_eq!(cube.len(), 8);
        assert!(cube.iter().all(|t| t.coords().iter().all(|&c| c == 1 || c == 2)));
        let f7 = Field::new(7).unwrap();
        assert_eq!(rescaled_enumerate(f7.elem(1)).unwrap(), enumerate_vertices(0, 7).unwrap());
        let scaled = rescaled_enumerate(f7.elem(3)).unwrap();
        let mut back: Vec<Triple> = scaled
            .iter()
            .map(|t| Triple::from_signed(t.coords().map(|c| 3 * c as i64), 7))
            .collect();
        back.sort_unstable();
        assert_eq!(back, enumerate_vertices(0, 7).unwrap());
    }

    #[test]
    fn labels_round_trip() {
        let t = Triple::new(4, 0, 12);
        assert_eq!(t.label().parse::<Triple>().unwrap(), t);
        assert_eq!("(1, 2,3)".parse::<Triple>().unwrap(), Triple::new(1, 2, 3));
        assert!("1,2".parse::<Triple>().is_err());
        assert_eq!(Triple::new(1, 2, 3).permuted([1, 2, 0]), Triple::new(3, 1, 2));
    }
}
