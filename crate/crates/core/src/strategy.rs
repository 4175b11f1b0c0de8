//! Certificate strategies behind one trait, selectable by name at run time.

use log::debug;

use crate::cage::cage_lower_bound;
use crate::error::{Error, Result};
use crate::graph::{components, MarkoffGraph};
use crate::planarity::certificate::{Payload, PlanarWitnessPayload, RotationEntry, SpectralPayload};
use crate::planarity::{
    certify_euler, k33_mod4, k33_sqrt_neg7, kuratowski_subgraph, p19_fixture, planarity_test,
    CertificateKind, Kuratowski, NonplanarityCertificate, PlanarityResult, SimpleGraph,
    PLANARITY_GUARD,
};
use crate::planarity::certificate::K33Payload;
use crate::spectral::{adjacency_spectrum, SpectralOptions, SpectralVerdict};

/// Graphs with more than this many (approximate) vertices are never materialised here.
pub const BUILD_LIMIT: u64 = 4_000_000;

/// Shared state for one certification run; the graph is built at most once.
pub struct CertifyContext {
    pub p: u64,
    pub k: u64,
    pub seed: u64,
    graph: Option<MarkoffGraph>,
    /// One line per strategy tried, for inconclusive reports.
    pub attempts: Vec<String>,
}

impl CertifyContext {
    pub fn new(p: u64, k: u64, seed: u64) -> Self {
        Self { p, k: k % p.max(1), seed, graph: None, attempts: Vec::new() }
    }

    /// Whether the graph is small enough to build.
    pub fn can_build(&self) -> bool {
        self.p.saturating_mul(self.p) <= BUILD_LIMIT
    }

    pub fn graph(&mut self) -> Result<&MarkoffGraph> {
        if self.graph.is_none() {
            if !self.can_build() {
                return Err(Error::GuardExceeded {
                    what: "graph build",
                    limit: BUILD_LIMIT as usize,
                    actual: self.p.saturating_mul(self.p) as usize,
                });
            }
            self.graph = Some(MarkoffGraph::build(self.p, self.k)?);
        }
        Ok(self.graph.as_ref().expect("just built"))
    }

    fn note(&mut self, name: &str, outcome: impl std::fmt::Display) {
        debug!("{name}: {outcome}");
        self.attempts.push(format!("{name}: {outcome}"));
    }
}

pub trait CertificateStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    /// `Ok(None)` when the strategy does not settle this (p, k).
    fn certify(&self, ctx: &mut CertifyContext) -> Result<Option<NonplanarityCertificate>>;
}

// Precondition and guard failures mean "not applicable"; anything else is a real error.
fn soft<T>(ctx: &mut CertifyContext, name: &str, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::Precondition(_) | Error::GuardExceeded { .. })) => {
            ctx.note(name, e);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub struct K33Strategy;

impl CertificateStrategy for K33Strategy {
    fn name(&self) -> &'static str {
        "k33"
    }

    fn describe(&self) -> &'static str {
        "explicit K3,3 subdivision: p ≡ 1 mod 4, then 4k − 7 a square, then the stored p = 19 configuration"
    }

    fn certify(&self, ctx: &mut CertifyContext) -> Result<Option<NonplanarityCertificate>> {
        if ctx.k == 0 {
            let r = k33_mod4(ctx.p);
            if let Some(c) = soft(ctx, "k33_mod4", r)? {
                return Ok(Some(c));
            }
        }
        let r = k33_sqrt_neg7(ctx.p, ctx.k);
        if let Some(c) = soft(ctx, "k33_sqrt_neg7", r)? {
            return Ok(Some(c));
        }
        if ctx.p == 19 && ctx.k == 0 {
            return p19_fixture().map(Some);
        }
        Ok(None)
    }
}

pub struct EulerStrategy;

impl CertificateStrategy for EulerStrategy {
    fn name(&self) -> &'static str {
        "euler"
    }

    fn describe(&self) -> &'static str {
        "residue-class Euler bound on the largest component (BFS when buildable, cage bound otherwise)"
    }

    fn certify(&self, ctx: &mut CertifyContext) -> Result<Option<NonplanarityCertificate>> {
        if ctx.k != 0 {
            ctx.note("euler", "needs k = 0");
            return Ok(None);
        }
        if crate::planarity::euler_residue_bound(ctx.p).is_err() {
            ctx.note("euler", "needs p > 3 and p ≢ 0 mod 3");
            return Ok(None);
        }
        let (v, source) = if ctx.can_build() {
            let g = ctx.graph()?;
            (components(g).sizes.first().copied().unwrap_or(0) as u64, "bfs")
        } else {
            (cage_lower_bound(ctx.p), "cage")
        };
        let cert = certify_euler(ctx.p, v)?;
        if cert.kind == CertificateKind::Euler {
            Ok(Some(cert.with_parameter("component_source", source)))
        } else {
            ctx.note("euler", format!("component size {v} within the bound"));
            Ok(None)
        }
    }
}

pub struct SpectralStrategy;

impl CertificateStrategy for SpectralStrategy {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn describe(&self) -> &'static str {
        "Cheeger lower bound against the planar separator ratio"
    }

    fn certify(&self, ctx: &mut CertifyContext) -> Result<Option<NonplanarityCertificate>> {
        let seed = ctx.seed;
        let r = ctx.graph().and_then(|g| {
            adjacency_spectrum(g, &SpectralOptions { seed, ..SpectralOptions::default() })
        });
        let Some(report) = soft(ctx, "spectral", r)? else {
            return Ok(None);
        };
        match (report.verdict, report.lt_ratio) {
            (SpectralVerdict::SpectrallyNonplanar, Some(lt_ratio)) => {
                let tolerance = report.residual.max(1e-6);
                Ok(Some(
                    NonplanarityCertificate::new(
                        ctx.p,
                        ctx.k,
                        Payload::Spectral(SpectralPayload {
                            lambda: report.lambda,
                            n: report.n as u64,
                            lt_ratio,
                            cheeger_lower: report.cheeger_lower,
                            tolerance,
                        }),
                    )
                    .with_parameter("seed", seed),
                ))
            }
            _ => {
                ctx.note("spectral", format!("λ = {:.6}, n = {}", report.lambda, report.n));
                Ok(None)
            }
        }
    }
}

pub struct PlanarityStrategy;

impl CertificateStrategy for PlanarityStrategy {
    fn name(&self) -> &'static str {
        "planarity"
    }

    fn describe(&self) -> &'static str {
        "left-right planarity test: rotation system if planar, extracted K3,3 otherwise"
    }

    fn certify(&self, ctx: &mut CertifyContext) -> Result<Option<NonplanarityCertificate>> {
        let (p, k) = (ctx.p, ctx.k);
        let built = ctx.graph().map(|g| (g.clone(), SimpleGraph::from_markoff(g)));
        let Some((g, simple)) = soft(ctx, "planarity", built)? else {
            return Ok(None);
        };
        if simple.vertex_count() > PLANARITY_GUARD {
            ctx.note("planarity", format!("{} vertices exceed the guard", simple.vertex_count()));
            return Ok(None);
        }
        match planarity_test(&simple)? {
            PlanarityResult::Planar(emb) => {
                let count = emb.euler_count(&simple)?;
                let embedding = emb
                    .rotation
                    .iter()
                    .enumerate()
                    .map(|(v, rot)| RotationEntry {
                        vertex: g.vertex(v as u32),
                        rotation: rot.iter().map(|&w| g.vertex(w as u32)).collect(),
                    })
                    .collect();
                Ok(Some(NonplanarityCertificate::new(
                    p,
                    k,
                    Payload::PlanarWitness(PlanarWitnessPayload {
                        vertices: count.vertices as u64,
                        edges: count.edges as u64,
                        faces: count.faces as u64,
                        components: count.components as u64,
                        embedding,
                    }),
                )))
            }
            PlanarityResult::NonPlanar => match kuratowski_subgraph(&simple)? {
                Some(Kuratowski::K33 { a, b, paths }) => {
                    let t = |v: usize| g.vertex(v as u32);
                    let payload = K33Payload {
                        branch_a: a.map(t),
                        branch_b: b.map(t),
                        paths: paths.iter().map(|p| p.iter().map(|&v| t(v)).collect()).collect(),
                    };
                    Ok(Some(
                        NonplanarityCertificate::new(p, k, Payload::K33(payload))
                            .with_parameter("source", "kuratowski-extraction"),
                    ))
                }
                Some(Kuratowski::K5 { .. }) => Err(Error::Consistency(
                    "K5 subdivision in a graph of maximum degree 3".into(),
                )),
                None => Err(Error::Consistency("planarity test and extraction disagree".into())),
            },
        }
    }
}

/// Tries k33, euler and planarity in that order.
pub struct AutoStrategy;

impl CertificateStrategy for AutoStrategy {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn describe(&self) -> &'static str {
        "k33, then euler, then planarity"
    }

    fn certify(&self, ctx: &mut CertifyContext) -> Result<Option<NonplanarityCertificate>> {
        let chain: [&dyn CertificateStrategy; 3] = [&K33Strategy, &EulerStrategy, &PlanarityStrategy];
        for s in chain {
            if let Some(c) = s.certify(ctx)? {
                return Ok(Some(c.with_parameter("strategy", s.name())));
            }
        }
        Ok(None)
    }
}

/// All registered strategies, `auto` first.
pub fn registry() -> Vec<Box<dyn CertificateStrategy>> {
    vec![
        Box::new(AutoStrategy),
        Box::new(EulerStrategy),
        Box::new(K33Strategy),
        Box::new(SpectralStrategy),
        Box::new(PlanarityStrategy),
    ]
}

pub fn strategy_names() -> Vec<&'static str> {
    registry().iter().map(|s| s.name()).collect()
}

pub fn lookup(name: &str) -> Result<Box<dyn CertificateStrategy>> {
    registry()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "unknown strategy {name:?} (expected one of {})",
                strategy_names().join(", ")
            ))
        })
}

/// Runs the named strategy; an unsettled run yields an inconclusive certificate.
pub fn certify(p: u64, k: u64, strategy: &str, seed: u64) -> Result<NonplanarityCertificate> {
    crate::ff::Field::new(p)?;
    let s = lookup(strategy)?;
    let mut ctx = CertifyContext::new(p, k, seed);
    Ok(match s.certify(&mut ctx)? {
        Some(c) => c,
        None => NonplanarityCertificate::inconclusive(
            p,
            ctx.k,
            format!("strategy {strategy} did not settle planarity"),
            ctx.attempts,
        ),
    })
}
