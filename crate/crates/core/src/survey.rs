//! One CSV row per prime: counts, census, cage size, certificate kind and λ.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cage::cage_vertices;
use crate::cycles::census;
use crate::error::{Error, Result};
use crate::ff::is_prime;
use crate::graph::{edge_count_simple, MarkoffGraph};
use crate::spectral::{adjacency_spectrum, SpectralOptions};
use crate::strategy::certify;

/// λ is only computed up to this many vertices.
pub const SURVEY_SPECTRAL_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub p: u64,
    pub k: u64,
    #[serde(rename = "V")]
    pub vertices: u64,
    #[serde(rename = "E")]
    pub edges: u64,
    pub self_edges: u64,
    pub s: u64,
    pub h: u64,
    pub components: u64,
    pub cage_size: Option<u64>,
    pub certificate: String,
    pub lambda: Option<f64>,
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SurveyOptions {
    pub k: u64,
    pub jobs: usize,
    pub seed: u64,
    /// Fill `runtime_ms`; off by default so output is byte-reproducible.
    pub timing: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        Self { k: 0, jobs: 1, seed: 0, timing: false }
    }
}

pub fn survey_row(p: u64, opts: &SurveyOptions) -> Result<SurveyRow> {
    let start = Instant::now();
    let g = MarkoffGraph::build(p, opts.k)?;
    let (s, h) = if p > 2 && g.k() == 0 {
        let c = census(&g)?;
        (c.s() as u64, c.h() as u64)
    } else {
        (0, 0)
    };
    let cage_size = if p > 2 && g.k() == 0 {
        Some(cage_vertices(&g)?.cage_vertices as u64)
    } else {
        None
    };
    let lambda = if !g.is_empty() && g.len() <= SURVEY_SPECTRAL_LIMIT {
        let r = adjacency_spectrum(&g, &SpectralOptions { seed: opts.seed, ..Default::default() })?;
        Some((r.lambda * 1e6).round() / 1e6)
    } else {
        None
    };
    let cert = certify(p, opts.k, "auto", opts.seed)?;
    Ok(SurveyRow {
        p,
        k: g.k(),
        vertices: g.len() as u64,
        edges: edge_count_simple(&g)?,
        self_edges: g.self_edges().len() as u64,
        s,
        h,
        components: g.component_count() as u64,
        cage_size,
        certificate: cert.kind.to_string(),
        lambda,
        runtime_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Rows for every prime in [p_min, p_max], ordered by p whatever the job count. A prime
/// whose pipeline fails is logged and skipped.
pub fn survey(p_min: u64, p_max: u64, opts: &SurveyOptions, skip: &[u64]) -> Result<Vec<SurveyRow>> {
    if p_min > p_max {
        return Err(Error::Precondition(format!("empty range {p_min}..{p_max}")));
    }
    let primes: Vec<u64> = (p_min..=p_max)
        .filter(|&p| is_prime(p) && !skip.contains(&p))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let rows: Vec<Option<SurveyRow>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| match survey_row(p, opts) {
                Ok(r) => Some(r),
                Err(e) => {
                    warn!("p = {p}: {e}");
                    None
                }
            })
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: std::io::Write>(rows: &[SurveyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(HEADER).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub const HEADER: [&str; 12] = [
    "p", "k", "V", "E", "self_edges", "s", "h", "components", "cage_size", "certificate", "lambda",
    "runtime_ms",
];

pub fn read_csv(path: &Path) -> Result<Vec<SurveyRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Parse(e.to_string()))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// Surveys into `path`, reusing rows already present for the same k, and rewrites the
/// file sorted by p.
pub fn survey_to_file(p_min: u64, p_max: u64, opts: &SurveyOptions, path: &Path) -> Result<Vec<SurveyRow>> {
    let mut by_p: BTreeMap<u64, SurveyRow> = BTreeMap::new();
    if path.exists() {
        for row in read_csv(path)? {
            by_p.insert(row.p, row);
        }
    }
    let done: Vec<u64> = by_p
        .values()
        .filter(|r| r.k == opts.k && (p_min..=p_max).contains(&r.p))
        .map(|r| r.p)
        .collect();
    for row in survey(p_min, p_max, opts, &done)? {
        by_p.insert(row.p, row);
    }
    let rows: Vec<SurveyRow> = by_p.into_values().collect();
    let tmp = path.with_extension("csv.tmp");
    write_csv(&rows, fs::File::create(&tmp)?)?;
    fs::rename(&tmp, path)?;
    Ok(rows)
}
