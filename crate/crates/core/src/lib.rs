//! Markoff-type graphs over prime fields.
//!
//! Vertices are the solutions of x² + y² + z² = xyz + k over 𝔽_p, edges come from the
//! three Vieta involutions. The crate counts vertices, self-edges and short cycles,
//! solves for fixed points of move words, and produces non-planarity certificates that
//! can be re-validated from raw graph data.

pub mod cage;
pub mod cycles;
pub mod error;
pub mod ff;
pub mod graph;
pub mod planarity;
pub mod spectral;
pub mod strategy;
pub mod surface;
pub mod survey;
pub mod totient;

pub use error::{Error, Result};
pub use graph::MarkoffGraph;
pub use surface::Triple;

/// Sizes the global worker pool. Must run before any parallel work.
pub fn configure_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))
}
