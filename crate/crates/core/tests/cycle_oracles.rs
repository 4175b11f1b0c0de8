use std::collections::BTreeSet;

use markoff_core::cycles::{
    brute_force_cycles, census, discarded_hexagon_triples, expected_hexagons, expected_squares,
    fixed_points_321321, fixed_points_323121, fixed_points_alternating, reduced_words_upto,
    word_fixed_points_brute, Word,
};
use markoff_core::ff::is_prime;
use markoff_core::graph::{apply_move, MarkoffGraph, Move};
use markoff_core::surface::Triple;

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn odd_primes(max: u64) -> impl Iterator<Item = u64> {
    (5..=max).filter(|&p| is_prime(p))
}

#[test]
fn census_equals_brute_force_cycle_sets() {
    for p in odd_primes(31) {
        let g = MarkoffGraph::build(p, 0).unwrap();
        let c = census(&g).unwrap();
        let brute = brute_force_cycles(&g, 6).unwrap();
        assert_eq!(brute.count(3), 0, "p={p}");
        assert_eq!(brute.count(5), 0, "p={p}");
        assert_eq!(c.s(), expected_squares(p), "p={p}");
        assert_eq!(c.h(), expected_hexagons(p), "p={p}");
        let sq: BTreeSet<_> = c.squares.iter().cloned().collect();
        let hex: BTreeSet<_> = c.hexagons.iter().cloned().collect();
        assert_eq!(sq, brute.by_length.get(&4).cloned().unwrap_or_default().into_iter().collect());
        assert_eq!(hex, brute.by_length[&6].iter().cloned().collect());
        assert_eq!(c.girth_ignoring_self_edges, Some(if p % 4 == 1 { 4 } else { 6 }));
    }
}

#[test]
fn hexagon_reconciliation_for_p_1_mod_3() {
    for p in [7u64, 13, 19, 31, 37, 43] {
        let c = census(&MarkoffGraph::build(p, 0).unwrap()).unwrap();
        assert_eq!(c.level_hexagons, p as usize - 7, "p={p}");
        assert_eq!(c.word_hexagons, 4, "p={p}");
    }
}

#[test]
fn level_one_leftovers_are_the_discarded_triples() {
    for p in [7u64, 13, 19, 31] {
        let g = MarkoffGraph::build(p, 0).unwrap();
        let c = census(&g).unwrap();
        // vertices of hexagons lying inside the level z = 1
        let on_hexagon: BTreeSet<u32> = c
            .hexagons
            .iter()
            .filter(|h| h.iter().all(|&v| g.vertex(v).z == 1))
            .flatten()
            .copied()
            .collect();
        let leftovers: Vec<Triple> = (0..g.len() as u32)
            .filter(|&v| g.vertex(v).z == 1 && !on_hexagon.contains(&v))
            .map(|v| g.vertex(v))
            .collect();
        assert_eq!(leftovers, discarded_hexagon_triples(p).unwrap(), "p={p}");
    }
}

#[test]
fn p5_has_seven_cycles() {
    // Counter-example to "no cycles of length 7" at p = 5, checked move by move.
    let p = 5;
    let walk = [
        Triple::new(0, 1, 2),
        Triple::new(0, 1, 3),
        Triple::new(0, 4, 3),
        Triple::new(2, 4, 3),
        Triple::new(2, 4, 0),
        Triple::new(2, 1, 0),
        Triple::new(2, 1, 2),
    ];
    let moves = [Move::M3, Move::M2, Move::M1, Move::M3, Move::M2, Move::M3, Move::M1];
    for i in 0..7 {
        assert_eq!(apply_move(walk[i], moves[i], p), walk[(i + 1) % 7]);
    }
    let g = MarkoffGraph::build(p, 0).unwrap();
    assert_eq!(brute_force_cycles(&g, 7).unwrap().count(7), 24);
}

#[test]
fn closed_forms_equal_brute_force() {
    for p in (3..=50).filter(|&p| is_prime(p)) {
        let g = MarkoffGraph::build(p, 0).unwrap();
        let mut closed = vec![fixed_points_321321(p).unwrap(), fixed_points_323121(p).unwrap()];
        for l in 1..=6 {
            closed.push(fixed_points_alternating(l, p, 0).unwrap());
        }
        for fp in &closed {
            for sigma in PERMS {
                let want = fp.permuted(sigma);
                let got = word_fixed_points_brute(&g, &want.word).unwrap();
                assert_eq!(got.solutions, want.solutions, "p={p} word={}", want.word);
            }
        }
    }
}

#[test]
fn alternating_closed_form_on_other_levels() {
    for p in (3..=23).filter(|&p| is_prime(p)) {
        for k in 0..p {
            let g = MarkoffGraph::build(p, k).unwrap();
            for l in 1..=6 {
                let fp = fixed_points_alternating(l, p, k).unwrap();
                let got = word_fixed_points_brute(&g, &fp.word).unwrap();
                assert_eq!(got.solutions, fp.solutions, "p={p} k={k} L={l}");
            }
        }
    }
}

#[test]
fn whole_level_when_p_divides_l() {
    // L = p puts the levels z = ±2 inside the fixed set
    let p = 5;
    let fp = fixed_points_alternating(5, p, 0).unwrap();
    let g = MarkoffGraph::build(p, 0).unwrap();
    assert_eq!(fp.solutions, word_fixed_points_brute(&g, &fp.word).unwrap().solutions);
}

#[test]
fn fixed_point_counts_stay_linear_in_p() {
    let words: Vec<Word> = reduced_words_upto(8)
        .unwrap()
        .into_iter()
        .map(|c| c.representative)
        .collect();
    for p in (3..=31).filter(|&p| is_prime(p)) {
        let g = MarkoffGraph::build(p, 0).unwrap();
        for w in &words {
            let n = word_fixed_points_brute(&g, w).unwrap().solutions.len() as f64;
            let bound = 2f64.powi(16 * w.len() as i32 + 10) * p as f64;
            assert!(n <= bound);
        }
    }
}
