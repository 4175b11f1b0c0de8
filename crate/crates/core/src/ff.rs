//! Arithmetic in prime fields and their quadratic extensions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 63;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorisation as sorted `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    fn split(n: u64, out: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime(n) {
            out.push(n);
            return;
        }
        for q in [2u64, 3, 5, 7, 11, 13] {
            if n % q == 0 {
                out.push(q);
                split(n / q, out);
                return;
            }
        }
        let d = pollard_rho(n);
        split(d, out);
        split(n / d, out);
    }
    assert!(n > 0, "factorize(0)");
    let mut primes = Vec::new();
    split(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// A prime field context: the modulus plus the fixed non-residue used for `Fp2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
    nonresidue: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let nonresidue = if p == 2 {
            0
        } else {
            (2..p)
                .find(|&d| pow_mod(d, (p - 1) / 2, p) == p - 1)
                .expect("odd prime has a non-residue")
        };
        Ok(Self { p, nonresidue })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Smallest positive quadratic non-residue (0 when p = 2).
    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp { value: v % self.p, p: self.p }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        Fp {
            value: v.rem_euclid(self.p as i64) as u64,
            p: self.p,
        }
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| self.elem(v))
    }
}

/// An element of 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub(crate) fn from_raw(value: u64, p: u64) -> Fp {
        Fp { value: value % p, p }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Fp {
        Fp { value: pow_mod(self.value, e, self.p), p: self.p }
    }

    pub fn square(self) -> Fp {
        self * self
    }

    pub fn inv(self) -> Option<Fp> {
        (!self.is_zero()).then(|| self.pow(self.p - 2))
    }

    /// Representative in (-p/2, p/2].
    pub fn signed(self) -> i64 {
        if self.value > self.p / 2 {
            self.value as i64 - self.p as i64
        } else {
            self.value as i64
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let s = self.value as u128 + o.value as u128;
        Fp { value: (s % self.p as u128) as u64, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self + (-o)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        let value = if self.value == 0 { 0 } else { self.p - self.value };
        Fp { value, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { value: mul_mod(self.value, o.value, self.p), p: self.p }
    }
}

impl Div for Fp {
    type Output = Fp;
    /// Panics on division by zero.
    fn div(self, o: Fp) -> Fp {
        self * o.inv().expect("division by zero in Fp")
    }
}

/// Legendre symbol via Euler's criterion. For p = 2 every unit is a square.
pub fn legendre(a: Fp) -> i32 {
    if a.is_zero() {
        return 0;
    }
    if a.p == 2 {
        return 1;
    }
    if a.pow((a.p - 1) / 2).value == 1 {
        1
    } else {
        -1
    }
}

/// Both square roots of `a`, smaller representative first; `None` for non-residues.
pub fn sqrt_mod(a: Fp) -> Option<(Fp, Fp)> {
    let p = a.p;
    if a.is_zero() || p == 2 {
        return Some((a, a));
    }
    if legendre(a) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        a.pow((p + 1) / 4)
    } else {
        tonelli_shanks(a)
    };
    let s = -r;
    Some(if r.value <= s.value { (r, s) } else { (s, r) })
}

fn tonelli_shanks(a: Fp) -> Fp {
    let p = a.p;
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let field = Field::new(p).expect("modulus already validated");
    let mut m = s;
    let mut c = field.elem(field.nonresidue).pow(q);
    let mut t = a.pow(q);
    let mut r = a.pow((q + 1) / 2);
    while t.value != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2.value != 1 {
            t2 = t2 * t2;
            i += 1;
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    r
}

/// An element a + b·ω of 𝔽_{p²}, where ω² is the field's smallest non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub a: Fp,
    pub b: Fp,
    d: u64,
}

impl Fp2 {
    pub fn new(field: &Field, a: Fp, b: Fp) -> Self {
        Self { a, b, d: field.nonresidue }
    }

    pub fn from_base(field: &Field, a: Fp) -> Self {
        Self::new(field, a, field.zero())
    }

    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(self) -> bool {
        self.a.value == 1 && self.b.is_zero()
    }

    pub fn in_base_field(self) -> bool {
        self.b.is_zero()
    }

    /// Integer a + b·p used to order elements canonically.
    pub fn encoding(self) -> u128 {
        self.a.value as u128 + self.b.value as u128 * self.a.p as u128
    }

    fn omega_sq(self) -> Fp {
        Fp { value: self.d % self.a.p, p: self.a.p }
    }

    pub fn norm(self) -> Fp {
        self.a * self.a - self.omega_sq() * self.b * self.b
    }

    pub fn inv(self) -> Option<Fp2> {
        let n = self.norm().inv()?;
        Some(Fp2 { a: self.a * n, b: -self.b * n, d: self.d })
    }

    pub fn pow(self, mut e: u128) -> Fp2 {
        let mut acc = Fp2 {
            a: Fp { value: 1 % self.a.p, p: self.a.p },
            b: Fp { value: 0, p: self.a.p },
            d: self.d,
        };
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, o: Fp2) -> Fp2 {
        Fp2 { a: self.a + o.a, b: self.b + o.b, d: self.d }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, o: Fp2) -> Fp2 {
        Fp2 { a: self.a - o.a, b: self.b - o.b, d: self.d }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, o: Fp2) -> Fp2 {
        let w = self.omega_sq();
        Fp2 {
            a: self.a * o.a + w * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
            d: self.d,
        }
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

/// A root ζ of ζ² − zζ + 1, so that ζ + ζ⁻¹ = z. Of the two roots the one with the
/// smaller encoding is returned.
pub fn zeta_of_trace(field: &Field, z: Fp) -> Result<Fp2> {
    if field.p == 2 {
        return Err(Error::Precondition("zeta_of_trace needs an odd prime".into()));
    }
    let two_inv = field.elem(2).inv().expect("p odd");
    let disc = z * z - field.elem(4);
    let roots = if legendre(disc) >= 0 {
        let (r, _) = sqrt_mod(disc).expect("residue");
        [
            Fp2::from_base(field, (z + r) * two_inv),
            Fp2::from_base(field, (z - r) * two_inv),
        ]
    } else {
        let d = field.elem(field.nonresidue);
        let (s, _) = sqrt_mod(disc / d).expect("disc/d is a residue");
        [
            Fp2::new(field, z * two_inv, s * two_inv),
            Fp2::new(field, z * two_inv, -s * two_inv),
        ]
    };
    Ok(if roots[0].encoding() <= roots[1].encoding() {
        roots[0]
    } else {
        roots[1]
    })
}

/// Multiplicative order in 𝔽_{p²}^×, found by stripping prime factors of p² − 1.
pub fn mult_order(zeta: Fp2) -> Result<u128> {
    if zeta.is_zero() {
        return Err(Error::ZeroHasNoOrder);
    }
    let p = zeta.a.p;
    if p == 2 {
        return Ok(1);
    }
    let mut factors = factorize(p - 1);
    factors.extend(factorize(p + 1));
    factors.sort_unstable();
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for (q, e) in factors {
        match merged.last_mut() {
            Some((last, k)) if *last == q => *k += e,
            _ => merged.push((q, e)),
        }
    }
    let mut m = (p as u128 - 1) * (p as u128 + 1);
    for (q, e) in merged {
        for _ in 0..e {
            if zeta.pow(m / q as u128).is_one() {
                m /= q as u128;
            } else {
                break;
            }
        }
    }
    Ok(m)
}
