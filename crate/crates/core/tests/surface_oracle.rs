use markoff_core::ff::{is_prime, legendre, Field};
use markoff_core::surface::{carlitz_count, count_level, enumerate_vertices, total_count, Triple};

fn odd_primes(max: u64) -> impl Iterator<Item = u64> {
    (3..=max).filter(|&p| is_prime(p))
}

fn brute_level(z: u64, k: u64, p: u64) -> u64 {
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            if (x * x + y * y + z * z) % p == (x * y % p * z + k) % p {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn level_counts_match_brute_force() {
    for p in odd_primes(31) {
        let f = Field::new(p).unwrap();
        for k in 0..p {
            for z in 0..p {
                let lc = count_level(f.elem(z), f.elem(k));
                assert_eq!(lc.count, brute_level(z, k, p), "p={p} k={k} z={z}");
            }
        }
    }
}

#[test]
fn level_counts_sum_to_total() {
    for p in odd_primes(50) {
        let f = Field::new(p).unwrap();
        for k in 0..p {
            let sum: u64 = (0..p).map(|z| count_level(f.elem(z), f.elem(k)).count).sum();
            assert_eq!(sum, total_count(f.elem(k)), "p={p} k={k}");
        }
    }
}

#[test]
fn vertex_lists_match_cubic_scan() {
    for p in odd_primes(31) {
        for k in [0, 1, 4 % p, p - 1] {
            let mut want = Vec::new();
            for x in 0..p as u32 {
                for y in 0..p as u32 {
                    for z in 0..p as u32 {
                        let t = Triple::new(x, y, z);
                        let [a, b, c] = t.coords();
                        let fixed = (2 * a) % p == b * c % p
                            && (2 * b) % p == a * c % p
                            && (2 * c) % p == a * b % p;
                        if t.level(p) == k && !fixed {
                            want.push(t);
                        }
                    }
                }
            }
            assert_eq!(enumerate_vertices(k, p).unwrap(), want, "p={p} k={k}");
        }
    }
}

#[test]
fn carlitz_matches_enumeration() {
    for p in odd_primes(200).filter(|&p| p != 3) {
        assert_eq!(enumerate_vertices(0, p).unwrap().len() as u64, carlitz_count(p), "p={p}");
    }
}

#[test]
fn shifted_squares_sum() {
    for p in odd_primes(100) {
        let f = Field::new(p).unwrap();
        for c in 1..p {
            let s: i32 = (0..p).map(|x| legendre(f.elem(x * x) - f.elem(c))).sum();
            assert_eq!(s, -1, "p={p} c={c}");
        }
    }
}
