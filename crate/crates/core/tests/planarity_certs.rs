use markoff_core::ff::{is_prime, legendre, Field};
use markoff_core::graph::{components, ImplicitSurface, MarkoffGraph};
use markoff_core::planarity::{
    certificate, certify_euler, euler_feasibility, genus_lower_bound, k33_mod4, k33_sqrt_neg7,
    kuratowski_subgraph, p19_fixture, planarity_test, subdivision_check, CertificateKind,
    Feasibility, Kuratowski, NonplanarityCertificate, Payload, PlanarityResult, SimpleGraph,
};
use proptest::prelude::*;

fn odd_primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&p| p % 2 == 1 && is_prime(p))
}

fn leg(a: i64, p: u64) -> i32 {
    let f = Field::new(p).unwrap();
    legendre(f.from_i64(a))
}

// Checks a Kuratowski answer against the graph it came from.
fn kuratowski_is_valid(g: &SimpleGraph, k: &Kuratowski) -> bool {
    let (branch, paths, pairs): (Vec<usize>, &Vec<Vec<usize>>, usize) = match k {
        Kuratowski::K33 { a, b, paths } => (a.iter().chain(b).copied().collect(), paths, 9),
        Kuratowski::K5 { branch, paths } => (branch.to_vec(), paths, 10),
    };
    if paths.len() != pairs {
        return false;
    }
    let mut interior = std::collections::HashSet::new();
    for p in paths {
        if !branch.contains(&p[0]) || !branch.contains(p.last().unwrap()) || p[0] == *p.last().unwrap() {
            return false;
        }
        if !p.windows(2).all(|w| g.has_edge(w[0], w[1])) {
            return false;
        }
        for v in &p[1..p.len() - 1] {
            if branch.contains(v) || !interior.insert(*v) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn planarity_answers_carry_witnesses(
        n in 1usize..12,
        raw in proptest::collection::vec((0usize..12, 0usize..12), 0..40),
    ) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        let g = SimpleGraph::from_edges(n, edges);
        match planarity_test(&g).unwrap() {
            PlanarityResult::Planar(emb) => {
                let c = emb.euler_count(&g).unwrap();
                prop_assert!(c.is_planar(), "{:?}", c);
                prop_assert_eq!(kuratowski_subgraph(&g).unwrap(), None);
            }
            PlanarityResult::NonPlanar => {
                let k = kuratowski_subgraph(&g).unwrap().expect("non-planar has a Kuratowski subgraph");
                prop_assert!(kuratowski_is_valid(&g, &k));
            }
        }
    }
}

#[test]
fn exceptional_primes() {
    for (p, planar) in [(2u64, true), (5, false), (7, true), (11, false), (13, false)] {
        let g = MarkoffGraph::build(p, 0).unwrap();
        let s = SimpleGraph::from_markoff(&g);
        let r = planarity_test(&s).unwrap();
        assert_eq!(r.is_planar(), planar, "p = {p}");
        if let PlanarityResult::Planar(emb) = r {
            let c = emb.euler_count(&s).unwrap();
            assert!(c.is_planar());
            if p == 7 {
                assert_eq!((c.vertices, c.edges, c.faces), (28, 36, 10));
            }
        }
    }
}

#[test]
fn euler_certificates_are_sound() {
    for p in odd_primes(5, 31).filter(|p| p % 3 != 0) {
        let g = MarkoffGraph::build(p, 0).unwrap();
        let largest = components(&g).sizes[0] as u64;
        let cert = certify_euler(p, largest).unwrap();
        if cert.kind == CertificateKind::Euler {
            assert!(cert.validate().valid);
            let r = planarity_test(&SimpleGraph::from_markoff(&g)).unwrap();
            assert!(!r.is_planar(), "p = {p}: Euler certificate for a planar graph");
        }
    }
}

#[test]
fn k33_constructions_up_to_1000() {
    for p in odd_primes(5, 1000) {
        if p % 4 == 1 {
            let c = k33_mod4(p).unwrap();
            assert!(c.validate().valid, "mod4 p = {p}");
        }
        let sqrt7 = k33_sqrt_neg7(p, 0);
        if p != 7 && leg(-7, p) == 1 {
            assert!(sqrt7.unwrap().validate().valid, "sqrt(-7) p = {p}");
        } else {
            assert!(sqrt7.is_err(), "p = {p}");
        }
    }
}

#[test]
fn construction_coverage_by_residue_mod_28() {
    for p in odd_primes(5, 1000).filter(|&p| p != 7) {
        let covered = k33_mod4(p).is_ok() || k33_sqrt_neg7(p, 0).is_ok();
        assert_eq!(covered, ![3, 19, 27].contains(&(p % 28)), "p = {p}");
    }
}

#[test]
fn general_level_constructions() {
    for p in odd_primes(5, 60) {
        for k in 0..p {
            let d = (4 * k + 7 * p - 7) % p;
            let expect = leg(d as i64, p) == 1 && k != 4 % p;
            match k33_sqrt_neg7(p, k) {
                Ok(c) => assert!(c.validate().valid, "p = {p}, k = {k}"),
                Err(_) => assert!(!expect, "p = {p}, k = {k}"),
            }
        }
    }
}

#[test]
fn fixture_and_tampering() {
    let c = p19_fixture().unwrap();
    assert!(c.validate().valid);
    let Payload::K33(k) = &c.payload else { panic!() };
    let view = ImplicitSurface { p: 19, k: 0 };
    let branch = [k.branch_a[0], k.branch_a[1], k.branch_a[2], k.branch_b[0], k.branch_b[1], k.branch_b[2]];
    assert!(subdivision_check(&view, &branch, &k.paths));
    // a path sharing another path's interior vertex
    let mut paths = k.paths.clone();
    let long = paths.iter().position(|p| p.len() > 3).unwrap();
    let other = paths.iter().rposition(|p| p.len() > 3).unwrap();
    let stolen = paths[other][1];
    paths[long].insert(1, stolen);
    assert!(!subdivision_check(&view, &branch, &paths));
    // the same configuration is not a subdivision at another level
    let wrong = ImplicitSurface { p: 19, k: 1 };
    assert!(!subdivision_check(&wrong, &branch, &k.paths));
}

#[test]
fn certificates_round_trip_and_reject_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let certs = [
        k33_mod4(13).unwrap(),
        k33_sqrt_neg7(11, 0).unwrap(),
        certify_euler(37, 1480).unwrap(),
        certify_euler(13, 208).unwrap(),
    ];
    for c in &certs {
        let json = c.to_json();
        let back = NonplanarityCertificate::from_json(&json).unwrap();
        assert_eq!(&back, c);
        let path = certificate::store(c, dir.path()).unwrap();
        assert_eq!(certificate::store(c, dir.path()).unwrap(), path);
        assert_eq!(&certificate::load(&path).unwrap(), c);
        assert!(back.validate().valid);
    }
    let mut forged = certify_euler(37, 1480).unwrap();
    if let Payload::Euler(e) = &mut forged.payload {
        e.vertices = 2000;
        e.twice_lhs += 1;
    }
    assert!(!forged.validate().valid);
    let mut wrong_kind = k33_mod4(13).unwrap();
    wrong_kind.kind = CertificateKind::Spectral;
    assert!(!wrong_kind.validate().valid);
    let mut moved = k33_mod4(13).unwrap();
    moved.p = 17;
    assert!(!moved.validate().valid);
}

#[test]
fn feasibility_and_genus() {
    assert_eq!(euler_feasibility(40, 60, 6, 6, 2, 7), Feasibility::Violated);
    let g7 = MarkoffGraph::build(7, 0).unwrap();
    let b = genus_lower_bound(&g7).unwrap();
    assert_eq!(b.neg_chi_lower, -2);
    let g5 = MarkoffGraph::build(5, 0).unwrap();
    let b = genus_lower_bound(&g5).unwrap();
    assert_eq!(b.seven_cycles, 24);
    assert!(!b.candidates[1].allowed);
}
