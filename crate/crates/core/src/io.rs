//! Readers and writers for the on-disk formats.
//!
//! * observation CSV: a header of variable names, then one row per observation
//! * similarity CSV: a `p x p` numeric square with an optional header row
//! * sparse triplets: `row,col,value` lines, zero-based, implicit zeros
//! * label CSV: `node_id,name,label,is_center`
//!
//! Graphs can also be exported as DOT or GraphML with the weight as an edge
//! attribute and the cluster label as a node attribute.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::evaluation::{GroundTruth, InternalScores};
use crate::graph::{CoreClusterSet, LabelArray, WeightedGraph};
use crate::similarity::{ObservationMatrix, SimilarityMatrix};
use crate::synthgen::ScenarioRow;

fn parse_number(field: &str, line: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("'{field}' is not a number"),
    })
}

fn record_line(record: &csv::StringRecord, fallback: usize) -> usize {
    record.position().map_or(fallback, |p| p.line() as usize)
}

pub fn read_observation_csv(reader: impl Read) -> Result<ObservationMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if names.is_empty() || names.iter().all(String::is_empty) {
        return Err(Error::input("observation CSV has no header"));
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record_line(&record, i + 2);
        if record.len() != names.len() {
            return Err(Error::Parse {
                line,
                message: format!("{} fields, expected {}", record.len(), names.len()),
            });
        }
        let row = record
            .iter()
            .map(|f| parse_number(f, line))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    ObservationMatrix::from_rows(&rows)
        .or_else(|_| {
            // zero data rows: keep the variables, no observations
            ObservationMatrix::from_columns(&vec![Vec::new(); names.len()])
        })?
        .with_names(names)
}

pub fn read_similarity_csv(reader: impl Read) -> Result<SimilarityMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut names = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record_line(&record, i + 1);
        if i == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
            names = Some(record.iter().map(str::to_string).collect::<Vec<_>>());
            continue;
        }
        rows.push(
            record
                .iter()
                .map(|f| parse_number(f, line))
                .collect::<Result<_>>()?,
        );
    }
    let p = rows.len();
    if p == 0 {
        return Err(Error::input("similarity CSV has no rows"));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != p) {
        return Err(Error::input(format!(
            "similarity matrix is not square: row {i} has {} values for {p} rows",
            r.len()
        )));
    }
    let sim = SimilarityMatrix::from_dense(p, rows.concat())?;
    match names {
        Some(n) => sim.with_names(n),
        None => Ok(sim),
    }
}

/// Reads `row,col,value` lines; dimensions are the largest indices plus one.
pub fn read_sparse_triplets(reader: impl Read) -> Result<ObservationMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut triplets = Vec::new();
    let (mut n, mut p) = (0, 0);
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record_line(&record, i + 1);
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected row,col,value, got {} fields", record.len()),
            });
        }
        let index = |f: &str| {
            f.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("'{f}' is not a zero-based index"),
            })
        };
        let r = index(&record[0])?;
        let c = index(&record[1])?;
        let x = parse_number(&record[2], line)?;
        n = n.max(r + 1);
        p = p.max(c + 1);
        triplets.push((r, c, x));
    }
    ObservationMatrix::from_triplets(n, p, triplets)
}

pub fn write_labels(
    writer: impl Write,
    labels: &LabelArray,
    clusters: &CoreClusterSet,
    names: Option<&[String]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node_id", "name", "label", "is_center"])?;
    for (node, &label) in labels.as_slice().iter().enumerate() {
        let name = names.map_or("", |n| n[node].as_str());
        let center = if clusters.is_center(node) { "1" } else { "0" };
        w.write_record([&node.to_string(), name, &label.to_string(), center])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the `label` column of a CSV with a `node_id` column; rows must
/// cover node ids `0..p` exactly once, in any order.
fn read_label_column(reader: impl Read) -> Result<(Vec<usize>, Vec<String>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let id_col = col("node_id").ok_or_else(|| Error::input("label CSV lacks a node_id column"))?;
    let label_col = col("label").ok_or_else(|| Error::input("label CSV lacks a label column"))?;
    let name_col = col("name");
    let mut entries = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record_line(&record, i + 2);
        let field = |c: usize| {
            record.get(c).ok_or(Error::Parse {
                line,
                message: "missing field".into(),
            })
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("'{s}' is not a non-negative integer"),
            })
        };
        let id = parse(field(id_col)?)?;
        let label = parse(field(label_col)?)?;
        let name = name_col
            .and_then(|c| record.get(c))
            .unwrap_or("")
            .to_string();
        entries.push((id, label, name));
    }
    entries.sort_by_key(|e| e.0);
    if let Some((pos, e)) = entries.iter().enumerate().find(|(pos, e)| e.0 != *pos) {
        return Err(Error::input(format!(
            "label CSV node ids must be 0..{} without gaps; found {} at position {pos}",
            entries.len(),
            e.0
        )));
    }
    Ok(entries.into_iter().map(|(_, l, n)| (l, n)).unzip())
}

pub fn read_labels(reader: impl Read) -> Result<LabelArray> {
    let (labels, _) = read_label_column(reader)?;
    LabelArray::new(labels)
}

pub fn read_truth(reader: impl Read) -> Result<GroundTruth> {
    let (labels, _) = read_label_column(reader)?;
    GroundTruth::new(labels)
}

pub fn write_truth(
    writer: impl Write,
    truth: &GroundTruth,
    names: Option<&[String]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node_id", "name", "label"])?;
    for (node, &label) in truth.assignment().iter().enumerate() {
        let name = names.map_or("", |n| n[node].as_str());
        w.write_record([&node.to_string(), name, &label.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_observation_csv(writer: impl Write, obs: &ObservationMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let names: Vec<String> = match obs.variable_names() {
        Some(n) => n.to_vec(),
        None => (0..obs.n_vars()).map(|j| format!("v{j}")).collect(),
    };
    w.write_record(&names)?;
    for i in 0..obs.n_obs() {
        w.write_record((0..obs.n_vars()).map(|j| obs.get(i, j).to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_similarity_csv(writer: impl Write, sim: &SimilarityMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if let Some(names) = sim.names() {
        w.write_record(names)?;
    }
    for i in 0..sim.size() {
        w.write_record(sim.row(i).iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

/// `cluster_id,size,center,center_name,ic` with empty fields where unknown.
pub fn write_cluster_report(
    writer: impl Write,
    clusters: &CoreClusterSet,
    names: Option<&[String]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["cluster_id", "size", "center", "center_name", "ic"])?;
    for c in clusters.iter() {
        let center = c.center.map(|n| n.to_string()).unwrap_or_default();
        let center_name = match (c.center, names) {
            (Some(n), Some(names)) => names[n].clone(),
            _ => String::new(),
        };
        let ic = c.ic_score.map(|s| s.to_string()).unwrap_or_default();
        w.write_record([
            c.id.to_string(),
            c.size().to_string(),
            center,
            center_name,
            ic,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub clusters: usize,
    pub external_score: Option<f64>,
    pub mean_ic: Option<f64>,
}

/// Header `clusters,S,mean_ic` and one row.
pub fn write_summary(writer: impl Write, summary: &Summary) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["clusters", "S", "mean_ic"])?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    w.write_record([
        summary.clusters.to_string(),
        opt(summary.external_score),
        opt(summary.mean_ic),
    ])?;
    w.flush()?;
    Ok(())
}

/// `cluster_id,size,ic` rows.
pub fn write_internal_scores(
    writer: impl Write,
    labels: &LabelArray,
    scores: &InternalScores,
) -> Result<()> {
    let sizes = labels.cluster_sizes();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["cluster_id", "size", "ic"])?;
    for &(id, ic) in &scores.per_cluster {
        w.write_record([id.to_string(), sizes[id - 1].to_string(), ic.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `scenario,variant,rep,parameter,S,wall_time_ms`.
pub fn write_scenario_rows(writer: impl Write, rows: &[ScenarioRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "scenario",
        "variant",
        "rep",
        "parameter",
        "S",
        "wall_time_ms",
    ])?;
    for r in rows {
        w.write_record([
            r.scenario.to_string(),
            r.variant.name().to_string(),
            r.rep.to_string(),
            r.parameter.to_string(),
            r.score.to_string(),
            r.wall_time_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn node_label(graph: &WeightedGraph, node: usize) -> String {
    graph
        .node_names()
        .map_or_else(|| node.to_string(), |n| n[node].clone())
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn write_dot(mut out: impl Write, graph: &WeightedGraph, labels: &LabelArray) -> Result<()> {
    writeln!(out, "graph coreclust {{")?;
    for node in 0..graph.node_count() {
        let name = node_label(graph, node)
            .replace('\\', "\\\\")
            .replace('"', "\\\"");
        writeln!(
            out,
            "  {node} [label=\"{name}\", cluster={}];",
            labels.get(node)
        )?;
    }
    for e in graph.edges() {
        writeln!(out, "  {} -- {} [weight={}];", e.u, e.v, e.weight)?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

pub fn write_graphml(
    mut out: impl Write,
    graph: &WeightedGraph,
    labels: &LabelArray,
) -> Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    writeln!(
        out,
        r#"  <key id="name" for="node" attr.name="name" attr.type="string"/>"#
    )?;
    writeln!(
        out,
        r#"  <key id="cluster" for="node" attr.name="cluster" attr.type="int"/>"#
    )?;
    writeln!(
        out,
        r#"  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>"#
    )?;
    writeln!(out, r#"  <graph id="G" edgedefault="undirected">"#)?;
    for node in 0..graph.node_count() {
        writeln!(
            out,
            r#"    <node id="n{node}"><data key="name">{}</data><data key="cluster">{}</data></node>"#,
            escape_xml(&node_label(graph, node)),
            labels.get(node)
        )?;
    }
    for e in graph.edges() {
        writeln!(
            out,
            r#"    <edge source="n{}" target="n{}"><data key="weight">{}</data></edge>"#,
            e.u, e.v, e.weight
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")?;
    Ok(())
}
