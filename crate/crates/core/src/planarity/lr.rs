//! Left-right planarity test (Brandes' formulation of de Fraysseix-Rosenstiehl) with
//! construction of a combinatorial embedding.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MarkoffGraph;

/// Largest graph accepted by [`planarity_test`].
pub const PLANARITY_GUARD: usize = 10_000;

/// Undirected simple graph on 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Loops are dropped and parallel edges merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Self { adj }
    }

    /// The Markoff graph with self-edges deleted.
    pub fn from_markoff(g: &MarkoffGraph) -> Self {
        let edges = g
            .simple_edges()
            .into_iter()
            .map(|(u, v, _)| (u as usize, v as usize));
        Self::from_edges(g.len(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn component_count(&self) -> usize {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }
}

/// A rotation system: for each vertex its neighbours in clockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub rotation: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCount {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
}

impl EulerCount {
    /// V − E + F.
    pub fn characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    /// True when every component is embedded in its own sphere.
    pub fn is_planar(&self) -> bool {
        self.characteristic() == 2 * self.components as i64
    }
}

impl Embedding {
    /// Checks the rotation against `g` and traces faces. An isolated vertex contributes one
    /// face of its own.
    pub fn euler_count(&self, g: &SimpleGraph) -> Result<EulerCount> {
        let n = g.vertex_count();
        if self.rotation.len() != n {
            return Err(Error::Consistency("rotation system has wrong vertex count".into()));
        }
        // position of each neighbour in each rotation
        let mut pos: Vec<HashMap<usize, usize>> = Vec::with_capacity(n);
        for (v, rot) in self.rotation.iter().enumerate() {
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(v) {
                return Err(Error::Consistency(format!(
                    "rotation at {v} is not a permutation of its neighbours"
                )));
            }
            pos.push(rot.iter().enumerate().map(|(i, &w)| (w, i)).collect());
        }
        let mut visited: HashMap<(usize, usize), bool> = HashMap::new();
        let mut faces = 0;
        for v in 0..n {
            if self.rotation[v].is_empty() {
                faces += 1;
                continue;
            }
            for &w in &self.rotation[v] {
                if visited.contains_key(&(v, w)) {
                    continue;
                }
                faces += 1;
                let (mut a, mut b) = (v, w);
                while visited.insert((a, b), true).is_none() {
                    // next half-edge leaves b just after a in b's rotation
                    let rot = &self.rotation[b];
                    let i = pos[b][&a];
                    let c = rot[(i + 1) % rot.len()];
                    (a, b) = (b, c);
                }
            }
        }
        Ok(EulerCount {
            vertices: n,
            edges: g.edge_count(),
            faces,
            components: g.component_count(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanarityResult {
    Planar(Embedding),
    NonPlanar,
}

impl PlanarityResult {
    pub fn is_planar(&self) -> bool {
        matches!(self, Self::Planar(_))
    }
}

/// Decides planarity; a planar answer comes with a rotation system. The search recurses
/// once per tree vertex, so it runs on a dedicated thread with a large stack.
pub fn planarity_test(g: &SimpleGraph) -> Result<PlanarityResult> {
    let n = g.vertex_count();
    if n > PLANARITY_GUARD {
        return Err(Error::GuardExceeded {
            what: "planarity test",
            limit: PLANARITY_GUARD,
            actual: n,
        });
    }
    let g = g.clone();
    with_large_stack(move || lr_decide(&g))
}

/// Runs `f` on a thread whose stack is deep enough for the recursive search at guard size.
pub(super) fn with_large_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T> {
    std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(f)
        .map_err(Error::Io)?
        .join()
        .map_err(|_| Error::Consistency("planarity worker panicked".into()))
}

/// The test itself, without guard or thread; callers must provide the stack.
pub(super) fn lr_decide(g: &SimpleGraph) -> PlanarityResult {
    let n = g.vertex_count();
    if n > 2 && g.edge_count() > 3 * n - 6 {
        return PlanarityResult::NonPlanar;
    }
    LrState::new(g).run()
}

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState<'a> {
    g: &'a SimpleGraph,
    // undirected edge list; once oriented, tail -> head
    tail: Vec<usize>,
    head: Vec<usize>,
    oriented: Vec<bool>,
    edge_id: HashMap<(usize, usize), usize>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<i64>,
    out_edges: Vec<Vec<usize>>,
    roots: Vec<usize>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    lowpt_edge: Vec<Option<usize>>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
    // embedding as circular lists keyed by half-edge
    cw: HashMap<(usize, usize), usize>,
    ccw: HashMap<(usize, usize), usize>,
    first: Vec<Option<usize>>,
    left_ref: Vec<usize>,
    right_ref: Vec<usize>,
}

impl<'a> LrState<'a> {
    fn new(g: &'a SimpleGraph) -> Self {
        let n = g.vertex_count();
        let mut tail = Vec::new();
        let mut head = Vec::new();
        let mut edge_id = HashMap::new();
        for v in 0..n {
            for &w in g.neighbors(v) {
                if v < w {
                    edge_id.insert((v, w), tail.len());
                    tail.push(v);
                    head.push(w);
                }
            }
        }
        let m = tail.len();
        Self {
            g,
            tail,
            head,
            oriented: vec![false; m],
            edge_id,
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting_depth: vec![0; m],
            out_edges: vec![Vec::new(); n],
            roots: Vec::new(),
            refs: vec![None; m],
            side: vec![1; m],
            lowpt_edge: vec![None; m],
            stack_bottom: vec![0; m],
            stack: Vec::new(),
            cw: HashMap::new(),
            ccw: HashMap::new(),
            first: vec![None; n],
            left_ref: vec![NONE; n],
            right_ref: vec![NONE; n],
        }
    }

    fn edge(&self, u: usize, v: usize) -> usize {
        self.edge_id[&(u.min(v), u.max(v))]
    }

    fn run(mut self) -> PlanarityResult {
        let n = self.g.vertex_count();
        for v in 0..n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                self.roots.push(v);
                self.dfs_orientation(v);
            }
        }
        for v in 0..n {
            self.sort_out_edges(v);
        }
        for r in self.roots.clone() {
            if !self.dfs_testing(r) {
                return PlanarityResult::NonPlanar;
            }
        }
        for e in 0..self.tail.len() {
            self.nesting_depth[e] *= self.sign(e);
        }
        for v in 0..n {
            self.sort_out_edges(v);
            let mut previous = None;
            for e in self.out_edges[v].clone() {
                let w = self.head[e];
                self.add_half_edge_cw(v, w, previous);
                previous = Some(w);
            }
        }
        for r in self.roots.clone() {
            self.dfs_embedding(r);
        }
        let rotation = (0..n)
            .map(|v| {
                let mut rot = Vec::new();
                if let Some(f) = self.first[v] {
                    let mut w = f;
                    loop {
                        rot.push(w);
                        w = self.cw[&(v, w)];
                        if w == f {
                            break;
                        }
                    }
                }
                rot
            })
            .collect();
        PlanarityResult::Planar(Embedding { rotation })
    }

    fn sort_out_edges(&mut self, v: usize) {
        let nd = &self.nesting_depth;
        self.out_edges[v].sort_by_key(|&e| nd[e]);
    }

    fn dfs_orientation(&mut self, v: usize) {
        let e = self.parent_edge[v];
        let g = self.g;
        for &w in g.neighbors(v) {
            let vw = self.edge(v, w);
            if self.oriented[vw] {
                continue;
            }
            self.oriented[vw] = true;
            self.tail[vw] = v;
            self.head[vw] = w;
            self.out_edges[v].push(vw);
            self.lowpt[vw] = self.height[v];
            self.lowpt2[vw] = self.height[v];
            if self.height[w] == NONE {
                self.parent_edge[w] = Some(vw);
                self.height[w] = self.height[v] + 1;
                self.dfs_orientation(w);
            } else {
                self.lowpt[vw] = self.height[w];
            }
            self.nesting_depth[vw] = 2 * self.lowpt[vw] as i64;
            if self.lowpt2[vw] < self.height[v] {
                self.nesting_depth[vw] += 1;
            }
            if let Some(e) = e {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        match i.high {
            Some(h) if !i.is_empty() => self.lowpt[h] > self.lowpt[b],
            _ => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            return self.lowpt[p.right.low.expect("non-empty pair")];
        }
        if p.right.is_empty() {
            return self.lowpt[p.left.low.expect("non-empty pair")];
        }
        self.lowpt[p.left.low.unwrap()].min(self.lowpt[p.right.low.unwrap()])
    }

    fn dfs_testing(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let edges = self.out_edges[v].clone();
        for (idx, &ei) in edges.iter().enumerate() {
            let w = self.head[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.dfs_testing(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = Some(ei);
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval { low: Some(ei), high: Some(ei) },
                });
            }
            if self.lowpt[ei] < self.height[v] {
                let e = e.expect("a root has no return edges");
                if idx == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = e {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let Some(mut q) = self.stack.pop() else {
                return false;
            };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let qrl = q.right.low.expect("non-empty right interval");
            if self.lowpt[qrl] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.refs[p.right.low.unwrap()] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[qrl] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(prl) = p.right.low {
                self.refs[prl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pll) = p.left.low {
                self.refs[pll] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.tail[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.head[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.head[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.refs[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }

    // Resolves the side of `e` through its chain of references.
    fn sign(&mut self, e: usize) -> i64 {
        let mut chain = vec![e];
        while let Some(r) = self.refs[*chain.last().unwrap()] {
            chain.push(r);
        }
        for i in (0..chain.len() - 1).rev() {
            let (a, b) = (chain[i], chain[i + 1]);
            self.side[a] *= self.side[b];
            self.refs[a] = None;
        }
        self.side[e]
    }

    fn add_half_edge_cw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.cw.insert((v, w), w);
                self.ccw.insert((v, w), w);
                self.first[v] = Some(w);
            }
            Some(r) => {
                let cw_ref = self.cw[&(v, r)];
                self.cw.insert((v, r), w);
                self.cw.insert((v, w), cw_ref);
                self.ccw.insert((v, cw_ref), w);
                self.ccw.insert((v, w), r);
            }
        }
    }

    fn add_half_edge_ccw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        match reference {
            None => self.add_half_edge_cw(v, w, None),
            Some(r) => {
                let ccw_ref = self.ccw[&(v, r)];
                self.add_half_edge_cw(v, w, Some(ccw_ref));
                if self.first[v] == Some(r) {
                    self.first[v] = Some(w);
                }
            }
        }
    }

    fn add_half_edge_first(&mut self, v: usize, w: usize) {
        let reference = self.first[v];
        self.add_half_edge_ccw(v, w, reference);
    }

    fn dfs_embedding(&mut self, v: usize) {
        for ei in self.out_edges[v].clone() {
            let w = self.head[ei];
            if self.parent_edge[w] == Some(ei) {
                self.add_half_edge_first(w, v);
                self.left_ref[v] = w;
                self.right_ref[v] = w;
                self.dfs_embedding(w);
            } else if self.side[ei] == 1 {
                let r = self.right_ref[w];
                self.add_half_edge_cw(w, v, Some(r));
            } else {
                let r = self.left_ref[w];
                self.add_half_edge_ccw(w, v, Some(r));
                self.left_ref[w] = v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    fn k33() -> SimpleGraph {
        SimpleGraph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))))
    }

    fn check_planar(g: &SimpleGraph) {
        match planarity_test(g).unwrap() {
            PlanarityResult::Planar(emb) => {
                let c = emb.euler_count(g).unwrap();
                assert!(c.is_planar(), "{c:?}");
            }
            PlanarityResult::NonPlanar => panic!("expected planar"),
        }
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(!planarity_test(&complete(5)).unwrap().is_planar());
        assert!(!planarity_test(&k33()).unwrap().is_planar());
        check_planar(&complete(4));
        let mut e: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
        e.pop();
        check_planar(&SimpleGraph::from_edges(6, e));
    }

    #[test]
    fn petersen_is_not_planar() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = SimpleGraph::from_edges(10, outer.chain(spokes).chain(inner));
        assert!(!planarity_test(&g).unwrap().is_planar());
    }

    #[test]
    fn icosahedron_is_planar() {
        // maximal planar: E = 3V − 6
        let edges = [
            (0, 1), (0, 5), (0, 7), (0, 8), (0, 11), (1, 2), (1, 5), (1, 6), (1, 8), (2, 3),
            (2, 6), (2, 8), (2, 9), (3, 4), (3, 6), (3, 9), (3, 10), (4, 5), (4, 6), (4, 10),
            (4, 11), (5, 6), (5, 11), (7, 8), (7, 9), (7, 10), (7, 11), (8, 9), (9, 10), (10, 11),
        ];
        let g = SimpleGraph::from_edges(12, edges);
        check_planar(&g);
        // one more edge breaks it
        let mut more = edges.to_vec();
        more.push((0, 3));
        assert!(!planarity_test(&SimpleGraph::from_edges(12, more)).unwrap().is_planar());
    }

    #[test]
    fn disconnected_and_degenerate() {
        check_planar(&SimpleGraph::from_edges(0, []));
        check_planar(&SimpleGraph::from_edges(3, []));
        check_planar(&SimpleGraph::from_edges(7, [(0, 1), (1, 2), (2, 0), (4, 5), (5, 5), (4, 5)]));
        let mut e: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        e.extend([(5, 6), (6, 7)]);
        assert!(!planarity_test(&SimpleGraph::from_edges(8, e)).unwrap().is_planar());
    }

    #[test]
    fn wrong_rotation_is_rejected() {
        let g = complete(4);
        let bad = Embedding { rotation: vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]] };
        let c = bad.euler_count(&g).unwrap();
        assert!(!c.is_planar());
        let broken = Embedding { rotation: vec![vec![1, 2], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]] };
        assert!(broken.euler_count(&g).is_err());
    }
}
