//! Planarity decisions and non-planarity certificates.

pub mod certificate;
pub mod euler;
pub mod k33;
mod kuratowski;
mod lr;
pub mod subdivision;

pub use certificate::{CertificateKind, NonplanarityCertificate, Payload, Validation};
pub use euler::{
    certify_euler, euler_feasibility, euler_residue_bound, genus_lower_bound,
    genus_lower_bound_from_counts, Feasibility, GenusBound,
};
pub use k33::{k33_mod4, k33_sqrt_neg7, p19_fixture};
pub use kuratowski::{kuratowski_subgraph, Kuratowski};
pub use lr::{planarity_test, Embedding, EulerCount, PlanarityResult, SimpleGraph, PLANARITY_GUARD};
pub use subdivision::{subdivision_check, subdivision_report};
