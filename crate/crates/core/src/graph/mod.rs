//! The Markoff graph: vertices of one level set joined by the three Vieta moves.

mod export;

pub use export::{export, import, ExportFormat, ImportedGraph};

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{enumerate_vertices, is_degenerate_level, Triple};

pub type VertexId = u32;

/// One of the three involutions m₁, m₂, m₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Move {
    M1,
    M2,
    M3,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::M1, Move::M2, Move::M3];

    /// 1, 2 or 3.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    /// The coordinate this move rewrites.
    pub fn coordinate(self) -> usize {
        self as usize
    }

    pub fn from_number(j: u8) -> Result<Move> {
        match j {
            1 => Ok(Move::M1),
            2 => Ok(Move::M2),
            3 => Ok(Move::M3),
            _ => Err(Error::Precondition(format!("move index {j} not in 1..=3"))),
        }
    }

    pub fn from_coordinate(i: usize) -> Move {
        Move::ALL[i]
    }
}

impl From<Move> for u8 {
    fn from(m: Move) -> u8 {
        m.number()
    }
}

impl TryFrom<u8> for Move {
    type Error = Error;
    fn try_from(j: u8) -> Result<Move> {
        Move::from_number(j)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.number())
    }
}

/// Replaces one coordinate by (product of the other two) minus itself.
pub fn apply_move(v: Triple, j: Move, p: u64) -> Triple {
    let [x, y, z] = v.coords();
    let vieta = |a: u64, b: u64, c: u64| ((a as u128 * b as u128 % p as u128) as u64 + p - c) % p;
    match j {
        Move::M1 => Triple::new(vieta(y, z, x) as u32, v.y, v.z),
        Move::M2 => Triple::new(v.x, vieta(x, z, y) as u32, v.z),
        Move::M3 => Triple::new(v.x, v.y, vieta(x, y, z) as u32),
    }
}

/// Read access to a vertex set closed under the moves. Lets path validators run either
/// on a built graph or directly on the level equation without materialising the graph.
pub trait SurfaceView {
    fn modulus(&self) -> u64;
    fn level(&self) -> u64;
    fn is_vertex(&self, t: Triple) -> bool;

    /// The move joining two distinct vertices, if any.
    fn edge_move(&self, a: Triple, b: Triple) -> Option<Move> {
        if a == b || !self.is_vertex(a) || !self.is_vertex(b) {
            return None;
        }
        Move::ALL
            .into_iter()
            .find(|&j| apply_move(a, j, self.modulus()) == b)
    }
}

/// The level set described by its equation alone.
#[derive(Clone, Copy, Debug)]
pub struct ImplicitSurface {
    pub p: u64,
    pub k: u64,
}

impl SurfaceView for ImplicitSurface {
    fn modulus(&self) -> u64 {
        self.p
    }

    fn level(&self) -> u64 {
        self.k
    }

    fn is_vertex(&self, t: Triple) -> bool {
        let p = self.p;
        let in_range = t.coords().iter().all(|&c| c < p);
        let fixed_by_all = Move::ALL.iter().all(|&j| apply_move(t, j, p) == t);
        in_range && t.level(p) == self.k % p && !fixed_by_all
    }
}

/// Immutable adjacency structure for one (p, k).
#[derive(Clone, Debug)]
pub struct MarkoffGraph {
    p: u64,
    k: u64,
    vertices: Vec<Triple>,
    adjacency: Vec<[VertexId; 3]>,
    self_edges: Vec<(VertexId, Move)>,
    component_id: Vec<u32>,
    component_sizes: Vec<usize>,
    // vertices with first coordinate x occupy row_start[x]..row_start[x + 1]
    row_start: Vec<u32>,
}

/// Component sizes in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub count: usize,
    pub sizes: Vec<usize>,
    /// Components whose size is not a multiple of p (k = 0 only); always empty unless
    /// something is broken.
    pub divisibility_violations: Vec<usize>,
}

impl MarkoffGraph {
    pub fn build(p: u64, k: u64) -> Result<Self> {
        let vertices = enumerate_vertices(k, p)?;
        let k = k % p;
        if vertices.len() >= u32::MAX as usize {
            return Err(Error::GuardExceeded {
                what: "vertex count",
                limit: u32::MAX as usize - 1,
                actual: vertices.len(),
            });
        }
        let mut row_start = vec![0u32; p as usize + 1];
        for t in &vertices {
            row_start[t.x as usize + 1] += 1;
        }
        for x in 0..p as usize {
            row_start[x + 1] += row_start[x];
        }
        let mut g = MarkoffGraph {
            p,
            k,
            vertices,
            adjacency: Vec::new(),
            self_edges: Vec::new(),
            component_id: Vec::new(),
            component_sizes: Vec::new(),
            row_start,
        };
        let adjacency: Vec<[VertexId; 3]> = g
            .vertices
            .par_iter()
            .map(|&v| {
                Move::ALL.map(|j| {
                    g.index_of(apply_move(v, j, p))
                        .expect("moves preserve the level set")
                })
            })
            .collect();
        g.adjacency = adjacency;
        g.self_edges = g
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| {
                Move::ALL
                    .into_iter()
                    .filter(move |&j| nbrs[j.coordinate()] as usize == i)
                    .map(move |j| (i as VertexId, j))
            })
            .collect();
        g.label_components();
        Ok(g)
    }

    fn label_components(&mut self) {
        let n = self.vertices.len();
        let mut id = vec![u32::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if id[s] != u32::MAX {
                continue;
            }
            let c = sizes.len() as u32;
            id[s] = c;
            queue.push_back(s);
            let mut size = 0;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in &self.adjacency[v] {
                    let w = w as usize;
                    if id[w] == u32::MAX {
                        id[w] = c;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        self.component_id = id;
        self.component_sizes = sizes;
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True at k ≡ 4, where the vertex-exclusion policy is not settled.
    pub fn is_degenerate(&self) -> bool {
        is_degenerate_level(self.k, self.p)
    }

    pub fn vertices(&self) -> &[Triple] {
        &self.vertices
    }

    pub fn vertex(&self, i: VertexId) -> Triple {
        self.vertices[i as usize]
    }

    /// Move results indexed by move (slot 0 is m₁).
    pub fn neighbors(&self, i: VertexId) -> [VertexId; 3] {
        self.adjacency[i as usize]
    }

    pub fn neighbor(&self, i: VertexId, j: Move) -> VertexId {
        self.adjacency[i as usize][j.coordinate()]
    }

    /// Distinct neighbours other than `i` itself.
    pub fn simple_neighbors(&self, i: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let nb = self.adjacency[i as usize];
        (0..3).filter_map(move |s| {
            let w = nb[s];
            (w != i && !nb[..s].contains(&w)).then_some(w)
        })
    }

    /// Every (vertex, move) pair with m_j(v) = v.
    pub fn self_edges(&self) -> &[(VertexId, Move)] {
        &self.self_edges
    }

    /// Number of distinct vertices carrying at least one self-edge.
    pub fn self_edge_vertex_count(&self) -> usize {
        let mut vs: Vec<VertexId> = self.self_edges.iter().map(|&(v, _)| v).collect();
        vs.dedup();
        vs.len()
    }

    /// Undirected edges (u, v, move) with u < v, loops excluded, sorted.
    pub fn simple_edges(&self) -> Vec<(VertexId, VertexId, Move)> {
        let mut out = Vec::new();
        for (u, nb) in self.adjacency.iter().enumerate() {
            for j in Move::ALL {
                let v = nb[j.coordinate()];
                if (u as VertexId) < v {
                    out.push((u as VertexId, v, j));
                }
            }
        }
        out
    }

    pub fn index_of(&self, t: Triple) -> Option<VertexId> {
        if t.x as u64 >= self.p {
            return None;
        }
        let lo = self.row_start[t.x as usize] as usize;
        let hi = self.row_start[t.x as usize + 1] as usize;
        self.vertices[lo..hi]
            .binary_search_by(|v| (v.y, v.z).cmp(&(t.y, t.z)))
            .ok()
            .map(|off| (lo + off) as VertexId)
    }

    pub fn component_id(&self, i: VertexId) -> u32 {
        self.component_id[i as usize]
    }

    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }

    /// Size of the component containing `i`.
    pub fn component_size_of(&self, i: VertexId) -> usize {
        self.component_sizes[self.component_id[i as usize] as usize]
    }

    /// Members of one component in index order.
    pub fn component_members(&self, c: u32) -> Vec<VertexId> {
        (0..self.len() as VertexId)
            .filter(|&v| self.component_id[v as usize] == c)
            .collect()
    }
}

impl SurfaceView for MarkoffGraph {
    fn modulus(&self) -> u64 {
        self.p
    }

    fn level(&self) -> u64 {
        self.k
    }

    fn is_vertex(&self, t: Triple) -> bool {
        self.index_of(t).is_some()
    }
}

/// Number of undirected edges once self-edges are deleted: (3V − S) / 2.
pub fn edge_count_simple(g: &MarkoffGraph) -> Result<u64> {
    let twice = 3 * g.len() as u64 - g.self_edges().len() as u64;
    if twice % 2 == 1 {
        return Err(Error::Consistency(format!(
            "3V - S = {twice} is odd for p = {}",
            g.p()
        )));
    }
    Ok(twice / 2)
}

/// Component sizes, largest first. For k = 0 every size should be a multiple of p; a
/// violation is logged as a warning and reported.
pub fn components(g: &MarkoffGraph) -> ComponentReport {
    let mut sizes = g.component_sizes.clone();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let divisibility_violations: Vec<usize> = if g.k() == 0 && g.p() > 3 {
        sizes
            .iter()
            .copied()
            .filter(|&s| s as u64 % g.p() != 0)
            .collect()
    } else {
        Vec::new()
    };
    for s in &divisibility_violations {
        log::warn!("component of size {s} not divisible by p = {}", g.p());
    }
    ComponentReport {
        count: sizes.len(),
        sizes,
        divisibility_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn move_examples() {
        assert_eq!(apply_move(Triple::new(1, 6, 3), Move::M3, 7), Triple::new(1, 6, 3));
        assert_eq!(apply_move(Triple::new(3, 3, 3), Move::M1, 7), Triple::new(6, 3, 3));
        // (2+2i, 2, 2) with i = 2 mod 5: (1,2,2) -> (1, 2+4i, 2) = (1, 0, 2)
        assert_eq!(apply_move(Triple::new(1, 2, 2), Move::M2, 5), Triple::new(1, 0, 2));
    }

    #[test]
    fn small_builds() {
        let g7 = MarkoffGraph::build(7, 0).unwrap();
        assert_eq!(g7.len(), 28);
        assert_eq!(g7.self_edge_vertex_count(), 12);
        assert_eq!(edge_count_simple(&g7).unwrap(), 36);
        assert_eq!(g7.simple_edges().len(), 36);
        assert_eq!(components(&g7).sizes, vec![28]);

        let g5 = MarkoffGraph::build(5, 0).unwrap();
        assert_eq!((g5.len(), g5.self_edges().len()), (40, 0));
        assert_eq!(edge_count_simple(&g5).unwrap(), 60);

        let g13 = MarkoffGraph::build(13, 0).unwrap();
        assert_eq!(g13.self_edge_vertex_count(), 24);

        let g19 = MarkoffGraph::build(19, 0).unwrap();
        assert_eq!(edge_count_simple(&g19).unwrap(), 432);
        assert_eq!(g19.simple_edges().len(), 432);

        let g11 = MarkoffGraph::build(11, 0).unwrap();
        assert_eq!(components(&g11).sizes, vec![88]);

        let g3 = MarkoffGraph::build(3, 0).unwrap();
        assert!(g3.is_empty());
        assert_eq!(components(&g3).count, 0);

        assert!(matches!(MarkoffGraph::build(9, 0), Err(Error::NotPrime(9))));
    }

    #[test]
    fn mod_two_graph() {
        let g = MarkoffGraph::build(2, 0).unwrap();
        let labels: Vec<String> = g.vertices().iter().map(|t| t.label()).collect();
        assert_eq!(labels, ["0,1,1", "1,0,1", "1,1,0", "1,1,1"]);
        assert_eq!(g.self_edges().len(), 6);
        assert_eq!(g.simple_edges().len(), 3);
    }

    #[test]
    fn implicit_view_agrees_with_graph() {
        let g = MarkoffGraph::build(13, 0).unwrap();
        let s = ImplicitSurface { p: 13, k: 0 };
        for x in 0..13 {
            for y in 0..13 {
                for z in 0..13 {
                    let t = Triple::new(x, y, z);
                    assert_eq!(g.is_vertex(t), s.is_vertex(t));
                }
            }
        }
        let (a, b) = (g.vertex(0), g.vertex(g.neighbor(0, Move::M2)));
        if a != b {
            assert_eq!(s.edge_move(a, b), Some(Move::M2));
            assert_eq!(g.edge_move(a, b), Some(Move::M2));
        }
    }
}
