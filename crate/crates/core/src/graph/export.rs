//! Deterministic DOT, GraphML and CSV edge-list serialisation, plus re-import.

use std::fmt::Write as _;
use std::str::FromStr;

use quick_xml::events::Event;
use quick_xml::Reader;

use super::{MarkoffGraph, Move, VertexId};
use crate::error::{Error, Result};
use crate::surface::Triple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    GraphMl,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Self::Dot),
            "graphml" => Ok(Self::GraphMl),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Dot => "dot",
            Self::GraphMl => "graphml",
            Self::Csv => "csv",
        }
    }
}

// Each undirected edge once (u < v), each loop once, in vertex then move order.
fn edge_list(g: &MarkoffGraph) -> Vec<(VertexId, VertexId, Move)> {
    let mut out = Vec::new();
    for u in 0..g.len() as VertexId {
        for j in Move::ALL {
            let v = g.neighbor(u, j);
            if u <= v {
                out.push((u, v, j));
            }
        }
    }
    out
}

pub fn export(g: &MarkoffGraph, format: ExportFormat) -> Result<Vec<u8>> {
    let label = |i: VertexId| g.vertex(i).label();
    let edges = edge_list(g);
    match format {
        ExportFormat::Dot => {
            let mut s = String::new();
            writeln!(s, "graph markoff {{").unwrap();
            writeln!(s, "  graph [p={}, k={}];", g.p(), g.k()).unwrap();
            for i in 0..g.len() as VertexId {
                writeln!(s, "  \"{}\";", label(i)).unwrap();
            }
            for (u, v, j) in edges {
                writeln!(s, "  \"{}\" -- \"{}\" [move={}];", label(u), label(v), j.number()).unwrap();
            }
            s.push_str("}\n");
            Ok(s.into_bytes())
        }
        ExportFormat::GraphMl => {
            let mut s = String::new();
            s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
            s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
            s.push_str("  <key id=\"move\" for=\"edge\" attr.name=\"move\" attr.type=\"int\"/>\n");
            s.push_str("  <key id=\"p\" for=\"graph\" attr.name=\"p\" attr.type=\"long\"/>\n");
            s.push_str("  <key id=\"k\" for=\"graph\" attr.name=\"k\" attr.type=\"long\"/>\n");
            writeln!(s, "  <graph id=\"markoff\" edgedefault=\"undirected\">").unwrap();
            writeln!(s, "    <data key=\"p\">{}</data>", g.p()).unwrap();
            writeln!(s, "    <data key=\"k\">{}</data>", g.k()).unwrap();
            for i in 0..g.len() as VertexId {
                writeln!(s, "    <node id=\"{}\"/>", label(i)).unwrap();
            }
            for (u, v, j) in edges {
                writeln!(
                    s,
                    "    <edge source=\"{}\" target=\"{}\"><data key=\"move\">{}</data></edge>",
                    label(u),
                    label(v),
                    j.number()
                )
                .unwrap();
            }
            s.push_str("  </graph>\n</graphml>\n");
            Ok(s.into_bytes())
        }
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["source", "target", "move"])
                .map_err(|e| Error::Parse(e.to_string()))?;
            for (u, v, j) in edges {
                w.write_record([label(u), label(v), j.number().to_string()])
                    .map_err(|e| Error::Parse(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

/// A labelled graph read back from an export. Vertices and edges are sorted, and each
/// edge is stored with its smaller endpoint first; loops appear as (v, v, move).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImportedGraph {
    pub vertices: Vec<Triple>,
    pub edges: Vec<(Triple, Triple, Move)>,
}

impl ImportedGraph {
    pub fn from_graph(g: &MarkoffGraph) -> Self {
        let edges = edge_list(g)
            .into_iter()
            .map(|(u, v, j)| (g.vertex(u), g.vertex(v), j))
            .collect();
        Self::normalized(g.vertices().to_vec(), edges)
    }

    fn normalized(mut vertices: Vec<Triple>, edges: Vec<(Triple, Triple, Move)>) -> Self {
        let mut edges: Vec<_> = edges
            .into_iter()
            .map(|(a, b, j)| if a <= b { (a, b, j) } else { (b, a, j) })
            .collect();
        for &(a, b, _) in &edges {
            vertices.push(a);
            vertices.push(b);
        }
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        Self { vertices, edges }
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b, _)| a == b).count()
    }
}

fn parse_move(s: &str) -> Result<Move> {
    let j: u8 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad move {s:?}")))?;
    Move::from_number(j)
}

/// Reads output of [`export`] back.
pub fn import(bytes: &[u8], format: ExportFormat) -> Result<ImportedGraph> {
    match format {
        ExportFormat::Dot => import_dot(bytes),
        ExportFormat::GraphMl => import_graphml(bytes),
        ExportFormat::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            let mut edges = Vec::new();
            for rec in r.records() {
                let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
                if rec.len() != 3 {
                    return Err(Error::Parse(format!("expected 3 fields, got {}", rec.len())));
                }
                edges.push((rec[0].parse()?, rec[1].parse()?, parse_move(&rec[2])?));
            }
            Ok(ImportedGraph::normalized(Vec::new(), edges))
        }
    }
}

fn import_dot(bytes: &[u8]) -> Result<ImportedGraph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for line in text.lines().map(str::trim) {
        if !line.starts_with('"') {
            continue;
        }
        let quoted: Vec<&str> = line.split('"').collect();
        // `"a";` splits into ["", a, ";"], an edge line into ["", a, " -- ", b, " [move=j];"]
        match quoted.len() {
            3 => vertices.push(quoted[1].parse()?),
            5 => {
                let attrs = quoted[4];
                let j = attrs
                    .split("move=")
                    .nth(1)
                    .and_then(|r| r.split(']').next())
                    .ok_or_else(|| Error::Parse(format!("edge without move: {line:?}")))?;
                edges.push((quoted[1].parse()?, quoted[3].parse()?, parse_move(j)?));
            }
            _ => return Err(Error::Parse(format!("unrecognised DOT line {line:?}"))),
        }
    }
    Ok(ImportedGraph::normalized(vertices, edges))
}

fn import_graphml(bytes: &[u8]) -> Result<ImportedGraph> {
    let xml_err = |e: &dyn std::fmt::Display| Error::Parse(format!("GraphML: {e}"));
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().trim_text(true);
    let mut buf = Vec::new();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut pending: Option<(Triple, Triple)> = None;
    let mut in_move_data = false;
    loop {
        match reader.read_event_into(&mut buf).map_err(|e| xml_err(&e))? {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) => {
                let attr = |name: &[u8]| -> Result<Option<String>> {
                    for a in e.attributes() {
                        let a = a.map_err(|e| xml_err(&e))?;
                        if a.key.as_ref() == name {
                            let v = a.unescape_value().map_err(|e| xml_err(&e))?;
                            return Ok(Some(v.into_owned()));
                        }
                    }
                    Ok(None)
                };
                match e.name().as_ref() {
                    b"node" => {
                        let id = attr(b"id")?.ok_or_else(|| Error::Parse("node without id".into()))?;
                        vertices.push(id.parse()?);
                    }
                    b"edge" => {
                        let s = attr(b"source")?.ok_or_else(|| Error::Parse("edge without source".into()))?;
                        let t = attr(b"target")?.ok_or_else(|| Error::Parse("edge without target".into()))?;
                        pending = Some((s.parse()?, t.parse()?));
                    }
                    b"data" => in_move_data = pending.is_some() && attr(b"key")?.as_deref() == Some("move"),
                    _ => {}
                }
            }
            Event::Text(t) if in_move_data => {
                let text = t.unescape().map_err(|e| xml_err(&e))?;
                let (a, b) = pending.take().expect("move data inside an edge");
                edges.push((a, b, parse_move(&text)?));
                in_move_data = false;
            }
            _ => {}
        }
        buf.clear();
    }
    Ok(ImportedGraph::normalized(vertices, edges))
}
