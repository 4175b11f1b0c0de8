//! Checks that a configuration of six branch vertices and nine paths is a subdivision of
//! K₃,₃ inside a Markoff graph.

use std::collections::HashSet;

use crate::graph::SurfaceView;
use crate::surface::Triple;

/// `branch[0..3]` is one side and `branch[3..6]` the other. Path `3i + j` must join
/// `branch[i]` to `branch[3 + j]`, in either direction.
pub fn subdivision_check<S: SurfaceView + ?Sized>(
    view: &S,
    branch: &[Triple; 6],
    paths: &[Vec<Triple>],
) -> bool {
    subdivision_report(view, branch, paths).is_ok()
}

/// Like [`subdivision_check`] but explains the first failure.
pub fn subdivision_report<S: SurfaceView + ?Sized>(
    view: &S,
    branch: &[Triple; 6],
    paths: &[Vec<Triple>],
) -> Result<(), String> {
    let branch_set: HashSet<Triple> = branch.iter().copied().collect();
    if branch_set.len() != 6 {
        return Err("branch vertices are not distinct".into());
    }
    for &b in branch {
        if !view.is_vertex(b) {
            return Err(format!("branch {b} is not a vertex"));
        }
    }
    if paths.len() != 9 {
        return Err(format!("expected 9 paths, got {}", paths.len()));
    }
    let mut interior_seen = HashSet::new();
    for (idx, path) in paths.iter().enumerate() {
        let (a, b) = (branch[idx / 3], branch[3 + idx % 3]);
        let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
            return Err(format!("path {idx} is empty"));
        };
        if !((first == a && last == b) || (first == b && last == a)) {
            return Err(format!("path {idx} runs {first} to {last}, expected {a} and {b}"));
        }
        for w in path.windows(2) {
            if view.edge_move(w[0], w[1]).is_none() {
                return Err(format!("path {idx}: {} and {} are not adjacent", w[0], w[1]));
            }
        }
        for &t in &path[1..path.len() - 1] {
            if branch_set.contains(&t) {
                return Err(format!("path {idx} passes through branch vertex {t}"));
            }
            if !interior_seen.insert(t) {
                return Err(format!("interior vertex {t} is used twice"));
            }
        }
    }
    Ok(())
}
