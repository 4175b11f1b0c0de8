//! Self-contained JSON certificates. Validation rebuilds whatever it needs from (p, k) and
//! never trusts derived fields in the document.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::euler::EulerPayload;
use super::lr::{Embedding, SimpleGraph};
use super::subdivision::subdivision_report;
use crate::error::{Error, Result};
use crate::graph::{ImplicitSurface, MarkoffGraph};
use crate::spectral::{self, SpectralOptions};
use crate::surface::Triple;

pub const VALIDATOR_VERSION: u32 = 1;

/// Graphs above this many vertices are not rebuilt during validation.
pub const VALIDATION_BUILD_LIMIT: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Euler,
    K33Subdivision,
    Spectral,
    PlanarWitness,
    Inconclusive,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Euler => "euler",
            Self::K33Subdivision => "k33-subdivision",
            Self::Spectral => "spectral",
            Self::PlanarWitness => "planar-witness",
            Self::Inconclusive => "inconclusive",
        }
    }

    /// True for kinds that prove non-planarity.
    pub fn is_nonplanar(self) -> bool {
        matches!(self, Self::Euler | Self::K33Subdivision | Self::Spectral)
    }
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct K33Payload {
    /// One side of the bipartition.
    pub branch_a: [Triple; 3],
    pub branch_b: [Triple; 3],
    /// Nine vertex sequences; path 3i + j joins `branch_a[i]` to `branch_b[j]`.
    pub paths: Vec<Vec<Triple>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralPayload {
    pub lambda: f64,
    pub n: u64,
    pub lt_ratio: f64,
    pub cheeger_lower: f64,
    /// Allowed disagreement between the recorded and a recomputed λ.
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationEntry {
    pub vertex: Triple,
    /// Neighbours in cyclic order around `vertex`.
    pub rotation: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarWitnessPayload {
    pub vertices: u64,
    pub edges: u64,
    pub faces: u64,
    pub components: u64,
    pub embedding: Vec<RotationEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InconclusivePayload {
    pub reason: String,
    pub attempts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Euler(EulerPayload),
    K33(K33Payload),
    Spectral(SpectralPayload),
    PlanarWitness(PlanarWitnessPayload),
    Inconclusive(InconclusivePayload),
}

impl Payload {
    fn kind(&self) -> CertificateKind {
        match self {
            Self::Euler(_) => CertificateKind::Euler,
            Self::K33(_) => CertificateKind::K33Subdivision,
            Self::Spectral(_) => CertificateKind::Spectral,
            Self::PlanarWitness(_) => CertificateKind::PlanarWitness,
            Self::Inconclusive(_) => CertificateKind::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonplanarityCertificate {
    pub kind: CertificateKind,
    pub p: u64,
    pub k: u64,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub payload: Payload,
    pub validator_version: u32,
}

/// Result of re-checking a certificate. `valid` means the claim holds; an inconclusive
/// certificate is valid when it is well-formed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub detail: String,
}

impl Validation {
    fn ok(detail: impl Into<String>) -> Self {
        Self { valid: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Self { valid: false, detail: detail.into() }
    }
}

impl NonplanarityCertificate {
    pub fn new(p: u64, k: u64, payload: Payload) -> Self {
        Self {
            kind: payload.kind(),
            p,
            k,
            parameters: BTreeMap::new(),
            payload,
            validator_version: VALIDATOR_VERSION,
        }
    }

    pub fn inconclusive(p: u64, k: u64, reason: impl Into<String>, attempts: Vec<String>) -> Self {
        Self::new(
            p,
            k,
            Payload::Inconclusive(InconclusivePayload { reason: reason.into(), attempts }),
        )
    }

    pub fn with_parameter(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Hex sha256 of the JSON encoding.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn validate(&self) -> Validation {
        if self.validator_version != VALIDATOR_VERSION {
            return Validation::fail(format!("unsupported validator version {}", self.validator_version));
        }
        if self.kind != self.payload.kind() {
            return Validation::fail(format!(
                "kind {} does not match a {} payload",
                self.kind,
                self.payload.kind()
            ));
        }
        if crate::ff::Field::new(self.p).is_err() {
            return Validation::fail(format!("{} is not a supported prime", self.p));
        }
        match &self.payload {
            Payload::Euler(e) => self.validate_euler(e),
            Payload::K33(c) => {
                let view = ImplicitSurface { p: self.p, k: self.k % self.p };
                let branch = [c.branch_a[0], c.branch_a[1], c.branch_a[2], c.branch_b[0], c.branch_b[1], c.branch_b[2]];
                match subdivision_report(&view, &branch, &c.paths) {
                    Ok(()) => Validation::ok("K3,3 subdivision verified edge by edge"),
                    Err(why) => Validation::fail(why),
                }
            }
            Payload::Spectral(s) => self.validate_spectral(s),
            Payload::PlanarWitness(w) => self.validate_planar(w),
            Payload::Inconclusive(_) => Validation::ok("inconclusive; nothing to verify"),
        }
    }

    fn build_checked(&self, what: &str) -> std::result::Result<MarkoffGraph, Validation> {
        let approx = self.p.saturating_mul(self.p);
        if approx > VALIDATION_BUILD_LIMIT {
            return Err(Validation::fail(format!("{what}: p = {} too large to rebuild", self.p)));
        }
        MarkoffGraph::build(self.p, self.k).map_err(|e| Validation::fail(format!("{what}: {e}")))
    }

    fn validate_euler(&self, e: &EulerPayload) -> Validation {
        if self.k % self.p != 0 {
            return Validation::fail("Euler certificates are defined for k = 0 only");
        }
        let fresh = match EulerPayload::derive(self.p, e.vertices) {
            Ok(f) => f,
            Err(err) => return Validation::fail(err.to_string()),
        };
        if &fresh != e {
            return Validation::fail("recomputed inequality data differ from the payload");
        }
        if !fresh.violated() {
            return Validation::fail(format!(
                "V = {} does not exceed the bound {}",
                e.vertices, fresh.residue_bound
            ));
        }
        // Confirm some component is at least as large as claimed.
        if self.p.saturating_mul(self.p) > VALIDATION_BUILD_LIMIT {
            let cage = crate::cage::cage_lower_bound(self.p);
            let from_cage = self.parameters.get("component_source").and_then(|v| v.as_str()) == Some("cage");
            return if from_cage && e.vertices <= cage {
                Validation::ok(format!(
                    "V = {} ≤ pφ(p + 1) = {cage}, the cage component bound; exceeds {}",
                    e.vertices, fresh.residue_bound
                ))
            } else {
                Validation::fail(format!("p = {} too large to rebuild and no cage bound applies", self.p))
            };
        }
        let g = match self.build_checked("euler") {
            Ok(g) => g,
            Err(v) => return v,
        };
        let largest = crate::graph::components(&g).sizes.first().copied().unwrap_or(0) as u64;
        if largest < e.vertices {
            return Validation::fail(format!(
                "largest component has {largest} vertices, payload claims {}",
                e.vertices
            ));
        }
        Validation::ok(format!(
            "component of size {} exceeds {}",
            e.vertices, fresh.residue_bound
        ))
    }

    fn validate_spectral(&self, s: &SpectralPayload) -> Validation {
        let g = match self.build_checked("spectral") {
            Ok(g) => g,
            Err(v) => return v,
        };
        if g.len() as u64 != s.n {
            return Validation::fail(format!("graph has {} vertices, payload says {}", g.len(), s.n));
        }
        let report = match spectral::adjacency_spectrum(&g, &SpectralOptions::default()) {
            Ok(r) => r,
            Err(e) => return Validation::fail(e.to_string()),
        };
        if (report.lambda - s.lambda).abs() > s.tolerance.max(1e-6) {
            return Validation::fail(format!("recomputed λ = {} differs from {}", report.lambda, s.lambda));
        }
        let ratio = match spectral::lt_ratio(g.len()) {
            Ok(r) => r,
            Err(e) => return Validation::fail(e.to_string()),
        };
        // use the pessimistic end of the tolerance window
        let worst_gap = (3.0 - report.lambda - s.tolerance) / 2.0;
        if worst_gap > ratio {
            Validation::ok(format!("(3 − λ)/2 ≥ {worst_gap:.6} > {ratio:.6}"))
        } else {
            Validation::fail(format!("(3 − λ)/2 = {worst_gap:.6} does not exceed {ratio:.6}"))
        }
    }

    fn validate_planar(&self, w: &PlanarWitnessPayload) -> Validation {
        let g = match self.build_checked("planar witness") {
            Ok(g) => g,
            Err(v) => return v,
        };
        let simple = SimpleGraph::from_markoff(&g);
        if w.embedding.len() != g.len() {
            return Validation::fail(format!(
                "embedding lists {} vertices, graph has {}",
                w.embedding.len(),
                g.len()
            ));
        }
        let mut rotation = vec![None; g.len()];
        for entry in &w.embedding {
            let Some(v) = g.index_of(entry.vertex) else {
                return Validation::fail(format!("{} is not a vertex", entry.vertex));
            };
            let mut rot = Vec::with_capacity(entry.rotation.len());
            for &t in &entry.rotation {
                match g.index_of(t) {
                    Some(u) => rot.push(u as usize),
                    None => return Validation::fail(format!("{t} is not a vertex")),
                }
            }
            if rotation[v as usize].replace(rot).is_some() {
                return Validation::fail(format!("{} listed twice", entry.vertex));
            }
        }
        let embedding = Embedding {
            rotation: rotation.into_iter().map(|r| r.unwrap_or_default()).collect(),
        };
        let count = match embedding.euler_count(&simple) {
            Ok(c) => c,
            Err(e) => return Validation::fail(e.to_string()),
        };
        let claimed = (w.vertices, w.edges, w.faces, w.components);
        let actual = (
            count.vertices as u64,
            count.edges as u64,
            count.faces as u64,
            count.components as u64,
        );
        if claimed != actual {
            return Validation::fail(format!("claimed (V, E, F, C) = {claimed:?}, traced {actual:?}"));
        }
        if !count.is_planar() {
            return Validation::fail(format!("V − E + F = {} for {} components", count.characteristic(), count.components));
        }
        Validation::ok(format!(
            "V − E + F = {} − {} + {} = {}",
            count.vertices,
            count.edges,
            count.faces,
            count.characteristic()
        ))
    }
}

/// Writes the certificate to `dir/<sha256>.json` and returns the path. Existing files
/// are left untouched since equal names imply equal content.
pub fn store(cert: &NonplanarityCertificate, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", cert.digest()));
    if !path.exists() {
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, cert.to_json())?;
        fs::rename(&tmp, &path)?;
    }
    Ok(path)
}

pub fn load(path: &Path) -> Result<NonplanarityCertificate> {
    let text = fs::read_to_string(path)?;
    let cert = NonplanarityCertificate::from_json(&text)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    if stem.len() == 64 && stem != cert.digest() {
        return Err(Error::Consistency(format!("{} does not match its content hash", path.display())));
    }
    Ok(cert)
}
