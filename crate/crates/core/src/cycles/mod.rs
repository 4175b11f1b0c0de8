//! Short cycles of the Markoff graph and fixed points of move words.

mod fixed;
mod words;

pub use fixed::{
    discarded_hexagon_triples, fixed_points_321321, fixed_points_323121, fixed_points_alternating,
};
pub use words::{
    reduced_words_upto, word_fixed_points_brute, Method, Word, WordCategory, WordClass,
    WordFixedPoints, MAX_BRUTE_WORD, MAX_CLASSIFIED_LENGTH,
};

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{MarkoffGraph, Move, VertexId};

/// Largest graph accepted by [`brute_force_cycles`].
pub const BRUTE_FORCE_GUARD: usize = 10_000;
pub const MAX_CYCLE_LENGTH: usize = 8;

/// Vertex sequence rotated to start at its smallest entry, oriented so the second entry
/// is smaller than the last.
pub fn canonical_cycle(cycle: &[VertexId]) -> Vec<VertexId> {
    let n = cycle.len();
    let start = (0..n).min_by_key(|&i| cycle[i]).unwrap_or(0);
    let fwd: Vec<VertexId> = (0..n).map(|i| cycle[(start + i) % n]).collect();
    let bwd: Vec<VertexId> = (0..n).map(|i| cycle[(start + n - i) % n]).collect();
    fwd.min(bwd)
}

// Depth-first search for cycles through `start` using only larger vertices, each found in
// one orientation.
fn cycles_from(
    g: &MarkoffGraph,
    start: VertexId,
    max_len: usize,
    visit: &mut dyn FnMut(&[VertexId]),
) {
    fn dfs(
        g: &MarkoffGraph,
        path: &mut Vec<VertexId>,
        max_len: usize,
        visit: &mut dyn FnMut(&[VertexId]),
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        for w in g.simple_neighbors(last) {
            if w == start && path.len() >= 3 && path[1] < last {
                visit(path);
            } else if w > start && path.len() < max_len && !path.contains(&w) {
                path.push(w);
                dfs(g, path, max_len, visit);
                path.pop();
            }
        }
    }
    let mut path = vec![start];
    dfs(g, &mut path, max_len, visit);
}

/// Every simple cycle of length ≤ `max_len`, keyed by length, canonicalised and sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleSet {
    pub by_length: BTreeMap<usize, Vec<Vec<VertexId>>>,
}

impl CycleSet {
    pub fn count(&self, len: usize) -> usize {
        self.by_length.get(&len).map_or(0, Vec::len)
    }
}

/// Exhaustive cycle search; self-edges are ignored.
pub fn brute_force_cycles(g: &MarkoffGraph, max_len: usize) -> Result<CycleSet> {
    if g.len() > BRUTE_FORCE_GUARD {
        return Err(Error::GuardExceeded {
            what: "brute-force cycle search",
            limit: BRUTE_FORCE_GUARD,
            actual: g.len(),
        });
    }
    if max_len > MAX_CYCLE_LENGTH {
        return Err(Error::GuardExceeded {
            what: "cycle length",
            limit: MAX_CYCLE_LENGTH,
            actual: max_len,
        });
    }
    let found: Vec<Vec<Vec<VertexId>>> = (0..g.len() as VertexId)
        .into_par_iter()
        .map(|s| {
            let mut local = Vec::new();
            cycles_from(g, s, max_len, &mut |c| local.push(c.to_vec()));
            local
        })
        .collect();
    let mut set = CycleSet::default();
    for c in found.into_iter().flatten() {
        set.by_length.entry(c.len()).or_default().push(c);
    }
    for cycles in set.by_length.values_mut() {
        cycles.sort_unstable();
    }
    Ok(set)
}

/// Number of simple cycles of exactly `len` edges, ignoring self-edges.
pub fn count_cycles_of_length(g: &MarkoffGraph, len: usize) -> usize {
    (0..g.len() as VertexId)
        .into_par_iter()
        .map(|s| {
            let mut n = 0;
            cycles_from(g, s, len, &mut |c| n += (c.len() == len) as usize);
            n
        })
        .sum()
}

/// Squares, hexagons and odd short cycles of one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub p: u64,
    pub k: u64,
    /// Canonical 4-cycles, one per coordinate-zero orbit.
    pub squares: Vec<Vec<VertexId>>,
    /// Canonical 6-cycles from the levels ±1 followed by those through 321321 fixed points.
    pub hexagons: Vec<Vec<VertexId>>,
    pub level_hexagons: usize,
    pub word_hexagons: usize,
    pub triangle_count: usize,
    pub pentagon_count: usize,
    /// Shortest cycle length ≤ 6, `None` when there is none that short.
    pub girth_ignoring_self_edges: Option<usize>,
}

impl CycleCensus {
    pub fn s(&self) -> usize {
        self.squares.len()
    }

    pub fn h(&self) -> usize {
        self.hexagons.len()
    }
}

// Closes the walk v, b(v), a(b(v)), ... under the two moves other than `fixed`, returning
// the cycle if it has exactly `len` distinct vertices and no self-edges.
fn alternating_cycle(g: &MarkoffGraph, v: VertexId, fixed: Move, len: usize) -> Option<Vec<VertexId>> {
    let others: Vec<Move> = Move::ALL.into_iter().filter(|&m| m != fixed).collect();
    let mut cycle = vec![v];
    let mut cur = v;
    for step in 0..len {
        let next = g.neighbor(cur, others[step % 2]);
        if next == cur {
            return None;
        }
        cur = next;
        if step + 1 < len {
            if cycle.contains(&cur) {
                return None;
            }
            cycle.push(cur);
        }
    }
    (cur == v).then_some(cycle)
}

/// Short-cycle census. Squares come from the coordinate-zero levels, hexagons from the
/// coordinate ±1 levels and, when −3 is a square and k = 0, from 321321 fixed points.
/// For k = 0 the counts are 3(p−1)/2 squares when p ≡ 1 mod 4 (else none) and p − 3 or
/// p + 1 hexagons as p ≡ 1 or 2 mod 3; other levels get the same construction without any
/// formula guarantee.
pub fn census(g: &MarkoffGraph) -> Result<CycleCensus> {
    let p = g.p();
    let mut squares = BTreeSet::new();
    let mut level_hex = BTreeSet::new();
    let mut word_hex = BTreeSet::new();
    if p > 3 {
        let minus_one = (p - 1) as u32;
        for v in 0..g.len() as VertexId {
            let t = g.vertex(v);
            for (c, fixed) in Move::ALL.into_iter().enumerate() {
                let value = t.get(c);
                if value == 0 {
                    if let Some(cyc) = alternating_cycle(g, v, fixed, 4) {
                        squares.insert(canonical_cycle(&cyc));
                    }
                } else if value == 1 || value == minus_one {
                    if let Some(cyc) = alternating_cycle(g, v, fixed, 6) {
                        level_hex.insert(canonical_cycle(&cyc));
                    }
                }
            }
        }
        if g.k() == 0 {
            let word: Word = "321321".parse().expect("valid word");
            for t in fixed_points_321321(p)?.solutions {
                let traj = word.trajectory(t, p);
                let ids: Option<Vec<VertexId>> = traj[..6].iter().map(|&u| g.index_of(u)).collect();
                let ids = ids.ok_or_else(|| Error::Consistency(format!("{t} is not a vertex")))?;
                let distinct: BTreeSet<_> = ids.iter().collect();
                if distinct.len() == 6 {
                    let c = canonical_cycle(&ids);
                    if !level_hex.contains(&c) {
                        word_hex.insert(c);
                    }
                }
            }
        }
    }
    let triangle_count = count_cycles_of_length(g, 3);
    let pentagon_count = count_cycles_of_length(g, 5);
    let level_hexagons = level_hex.len();
    let word_hexagons = word_hex.len();
    let squares: Vec<_> = squares.into_iter().collect();
    let hexagons: Vec<_> = level_hex.into_iter().chain(word_hex).collect();
    let girth_ignoring_self_edges = [
        (3, triangle_count),
        (4, squares.len()),
        (5, pentagon_count),
        (6, hexagons.len()),
    ]
    .into_iter()
    .find(|&(_, n)| n > 0)
    .map(|(l, _)| l);
    Ok(CycleCensus {
        p,
        k: g.k(),
        squares,
        hexagons,
        level_hexagons,
        word_hexagons,
        triangle_count,
        pentagon_count,
        girth_ignoring_self_edges,
    })
}

/// Closed-form square count for k = 0.
pub fn expected_squares(p: u64) -> usize {
    if p % 4 == 1 {
        3 * (p as usize - 1) / 2
    } else {
        0
    }
}

/// Closed-form hexagon count for k = 0, p > 3.
pub fn expected_hexagons(p: u64) -> usize {
    if p % 3 == 1 {
        p as usize - 3
    } else {
        p as usize + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_examples() {
        for (p, s, h) in [(5, 6, 6), (7, 0, 4), (13, 18, 10)] {
            let c = census(&MarkoffGraph::build(p, 0).unwrap()).unwrap();
            assert_eq!((c.s(), c.h()), (s, h), "p={p}");
            assert_eq!((c.triangle_count, c.pentagon_count), (0, 0));
        }
    }

    #[test]
    fn brute_force_examples() {
        let g7 = MarkoffGraph::build(7, 0).unwrap();
        let set = brute_force_cycles(&g7, 6).unwrap();
        assert_eq!(set.by_length.keys().copied().collect::<Vec<_>>(), vec![6]);
        assert_eq!(set.count(6), 4);
        let g5 = MarkoffGraph::build(5, 0).unwrap();
        assert_eq!(brute_force_cycles(&g5, 4).unwrap().count(4), 6);
        assert!(brute_force_cycles(&g5, 9).is_err());
    }

    #[test]
    fn canonical_form() {
        assert_eq!(canonical_cycle(&[5, 2, 9, 4]), vec![2, 5, 4, 9]);
        assert_eq!(canonical_cycle(&[2, 5, 4, 9]), vec![2, 5, 4, 9]);
    }
}
