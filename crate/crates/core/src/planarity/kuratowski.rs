//! Extraction of a Kuratowski subgraph from a non-planar graph by greedy edge deletion.
//! Every edge that survives is needed for non-planarity, so what remains is a subdivision
//! of K₃,₃ or K₅.

use super::lr::{lr_decide, with_large_stack, SimpleGraph, PLANARITY_GUARD};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kuratowski {
    /// Path 3i + j joins `a[i]` to `b[j]`.
    K33 {
        a: [usize; 3],
        b: [usize; 3],
        paths: Vec<Vec<usize>>,
    },
    K5 {
        branch: [usize; 5],
        paths: Vec<Vec<usize>>,
    },
}

fn is_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    lr_decide(&SimpleGraph::from_edges(n, edges.iter().copied())).is_planar()
}

/// `None` for a planar graph; otherwise a Kuratowski subdivision contained in `g`.
pub fn kuratowski_subgraph(g: &SimpleGraph) -> Result<Option<Kuratowski>> {
    let n = g.vertex_count();
    if n > PLANARITY_GUARD {
        return Err(Error::GuardExceeded {
            what: "Kuratowski extraction",
            limit: PLANARITY_GUARD,
            actual: n,
        });
    }
    let g = g.clone();
    with_large_stack(move || extract(&g))?
}

fn extract(g: &SimpleGraph) -> Result<Option<Kuratowski>> {
    let n = g.vertex_count();
    let mut keep: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| g.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    if is_planar(n, &keep) {
        return Ok(None);
    }
    // Try to drop a block of `chunk` edges starting at i; grow on success, shrink on
    // failure. An edge that is essential stays essential after later deletions.
    let mut i = 0;
    let mut chunk = (keep.len() / 2).max(1);
    while i < keep.len() {
        let c = chunk.min(keep.len() - i);
        let mut trial = Vec::with_capacity(keep.len() - c);
        trial.extend_from_slice(&keep[..i]);
        trial.extend_from_slice(&keep[i + c..]);
        if !is_planar(n, &trial) {
            keep = trial;
            chunk = c * 2;
        } else if c > 1 {
            chunk = c / 2;
        } else {
            i += 1;
        }
    }
    classify(n, &keep).map(Some)
}

fn classify(n: usize, edges: &[(usize, usize)]) -> Result<Kuratowski> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    let bad = |what: &str| Error::Consistency(format!("minimal non-planar subgraph {what}"));
    if adj.iter().any(|a| a.len() == 1) {
        return Err(bad("has a leaf"));
    }
    // follow each branch edge through degree-2 vertices
    let trace = |start: usize, first: usize| -> Vec<usize> {
        let mut path = vec![start, first];
        let (mut prev, mut cur) = (start, first);
        while adj[cur].len() == 2 {
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            path.push(next);
            (prev, cur) = (cur, next);
        }
        path
    };
    let mut paths = Vec::new();
    for &s in &branch {
        for &w in &adj[s] {
            let path = trace(s, w);
            if s < *path.last().unwrap() {
                paths.push(path);
            }
        }
    }
    let joined = |x: usize, y: usize| {
        paths
            .iter()
            .find(|p| (p[0] == x && p[p.len() - 1] == y) || (p[0] == y && p[p.len() - 1] == x))
            .cloned()
    };
    match branch.len() {
        6 if branch.iter().all(|&v| adj[v].len() == 3) && paths.len() == 9 => {
            let a0 = branch[0];
            let b: Vec<usize> = branch.iter().copied().filter(|&v| joined(a0, v).is_some()).collect();
            let a: Vec<usize> = branch.iter().copied().filter(|v| !b.contains(v)).collect();
            if a.len() != 3 || b.len() != 3 {
                return Err(bad("has six branch vertices but is not bipartite"));
            }
            let mut ordered = Vec::with_capacity(9);
            for &x in &a {
                for &y in &b {
                    ordered.push(joined(x, y).ok_or_else(|| bad("misses a K3,3 pair"))?);
                }
            }
            Ok(Kuratowski::K33 { a: [a[0], a[1], a[2]], b: [b[0], b[1], b[2]], paths: ordered })
        }
        5 if branch.iter().all(|&v| adj[v].len() == 4) && paths.len() == 10 => Ok(Kuratowski::K5 {
            branch: [branch[0], branch[1], branch[2], branch[3], branch[4]],
            paths,
        }),
        m => Err(bad(&format!("has {m} branch vertices"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn k5_and_k33_come_back() {
        match kuratowski_subgraph(&complete(5)).unwrap() {
            Some(Kuratowski::K5 { paths, .. }) => assert_eq!(paths.len(), 10),
            other => panic!("{other:?}"),
        }
        let k33 = SimpleGraph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))));
        assert!(matches!(kuratowski_subgraph(&k33).unwrap(), Some(Kuratowski::K33 { .. })));
        assert_eq!(kuratowski_subgraph(&complete(4)).unwrap(), None);
    }

    #[test]
    fn petersen_contains_subdivided_k33() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = SimpleGraph::from_edges(10, e);
        let Some(Kuratowski::K33 { paths, .. }) = kuratowski_subgraph(&g).unwrap() else {
            panic!("cubic graphs only contain K3,3 subdivisions");
        };
        for p in &paths {
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
        }
    }
}
