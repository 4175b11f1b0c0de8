use markoff_core::ff::{is_prime, legendre, sqrt_mod, Field};
use proptest::prelude::*;

const PRIMES: [u64; 8] = [3, 5, 13, 97, 193, 7681, 65_537, 1_000_000_007];

proptest! {
    #[test]
    fn legendre_is_multiplicative(pi in 0usize..PRIMES.len(), a in any::<u64>(), b in any::<u64>()) {
        let f = Field::new(PRIMES[pi]).unwrap();
        let (a, b) = (f.elem(a), f.elem(b));
        prop_assert_eq!(legendre(a * b), legendre(a) * legendre(b));
    }

    #[test]
    fn sqrt_round_trips(pi in 0usize..PRIMES.len(), a in any::<u64>()) {
        let f = Field::new(PRIMES[pi]).unwrap();
        let sq = f.elem(a) * f.elem(a);
        let (r, s) = sqrt_mod(sq).unwrap();
        prop_assert_eq!(r * r, sq);
        prop_assert_eq!(s * s, sq);
        prop_assert!(r.value() <= s.value());
    }

    #[test]
    fn field_arithmetic_is_associative(pi in 0usize..PRIMES.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = Field::new(PRIMES[pi]).unwrap();
        let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a - b + b, a);
    }

    #[test]
    fn fp2_is_a_commutative_ring(pi in 0usize..PRIMES.len(), v in proptest::array::uniform6(any::<u64>())) {
        use markoff_core::ff::Fp2;
        let f = Field::new(PRIMES[pi]).unwrap();
        let e = |i: usize| Fp2::new(&f, f.elem(v[2 * i]), f.elem(v[2 * i + 1]));
        let (x, y, z) = (e(0), e(1), e(2));
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * (y + z), x * y + x * z);
        if !x.is_zero() {
            prop_assert!((x * x.inv().unwrap()).is_one());
        }
    }
}

#[test]
fn legendre_matches_exhaustive_squares() {
    for p in (3..150u64).filter(|&p| is_prime(p)) {
        let f = Field::new(p).unwrap();
        let squares: std::collections::BTreeSet<u64> = (1..p).map(|r| r * r % p).collect();
        for a in 0..p {
            let want = if a == 0 { 0 } else if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(legendre(f.elem(a)), want, "p={p} a={a}");
            assert_eq!(sqrt_mod(f.elem(a)).is_some(), want >= 0);
        }
    }
}

#[test]
fn nonresidue_is_smallest() {
    for p in (3..500u64).filter(|&p| is_prime(p)) {
        let f = Field::new(p).unwrap();
        let d = f.nonresidue();
        assert_eq!(legendre(f.elem(d)), -1);
        assert!((1..d).all(|a| legendre(f.elem(a)) == 1));
    }
}
