// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! A curated knowledge-graph subset used as the surrogate source.
//!
//! Nodes carry a label, a category and a few category-specific attributes.
//! Edges are membership relations (instance of, subclass of, part of)
//! pointing from the specific node to the more general one.

mod surrogate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::EntityCategory;
use crate::text;

pub use surrogate::{
    candidate_set, filter_candidates, find_leaf, sample_replacement, surrogate_for, NoSurrogate, SurrogateError,
};

/// Membership property of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MembershipProp {
    /// instance of
    P31,
    /// subclass of
    P279,
    /// part of
    P361,
}

impl FromStr for MembershipProp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P31" => Ok(Self::P31),
            "P279" => Ok(Self::P279),
            "P361" => Ok(Self::P361),
            other => Err(format!("unknown membership property {other:?}")),
        }
    }
}

/// Attribute keys a node of `category` may carry, in filter priority order.
pub fn attribute_keys(category: EntityCategory) -> [&'static str; 2] {
    match category {
        EntityCategory::Person => ["gender", "language_of_origin"],
        EntityCategory::Organization => ["industry", "country"],
        EntityCategory::Location => ["location_type", "country"],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KgNode {
    pub id: String,
    pub label: String,
    pub category: EntityCategory,
    #[serde(default)]
    pub attrs: BTreeMap<String, String>,
}

impl KgNode {
    pub fn new(id: impl Into<String>, label: impl Into<String>, category: EntityCategory) -> Self {
        Self { id: id.into(), label: label.into(), category, attrs: BTreeMap::new() }
    }

    pub fn with_attr(mut self, key: &str, value: &str) -> Self {
        self.attrs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KgEdge {
    pub src: String,
    pub dst: String,
    pub prop: MembershipProp,
}

impl KgEdge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, prop: MembershipProp) -> Self {
        Self { src: src.into(), dst: dst.into(), prop }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum KgLine {
    Node(KgNode),
    Edge(KgEdge),
}

/// Load failure. `line` is the 1-based file line, or the item position for
/// in-memory construction.
#[derive(Debug, thiserror::Error)]
pub enum KgError {
    #[error("line {line}: invalid record: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: duplicate node id {id:?}")]
    DuplicateNode { line: usize, id: String },
    #[error("line {line}: edge {src:?} -> {dst:?} references unknown node {missing:?}")]
    DanglingEdge { line: usize, src: String, dst: String, missing: String },
    #[error("line {line}: {message}")]
    BadEdge { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

/// An immutable, validated graph.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    nodes: BTreeMap<String, KgNode>,
    label_index: HashMap<String, Vec<String>>,
    parents: HashMap<String, BTreeSet<String>>,
    children: HashMap<String, BTreeSet<String>>,
    edges: BTreeSet<KgEdge>,
}

fn check_node(node: &KgNode, line: usize) -> Result<(), KgError> {
    if node.id.is_empty() {
        return Err(KgError::Schema { line, message: "node id is empty".into() });
    }
    if node.label.is_empty() {
        return Err(KgError::Schema { line, message: format!("node {:?} has an empty label", node.id) });
    }
    let allowed = attribute_keys(node.category);
    if let Some(key) = node.attrs.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(KgError::Schema {
            line,
            message: format!(
                "node {:?}: attribute {key:?} not allowed for {} (allowed: {})",
                node.id,
                node.category,
                allowed.join(", ")
            ),
        });
    }
    Ok(())
}

impl KnowledgeGraph {
    /// Build from nodes and edges, each tagged with the line it came from.
    fn build(nodes: Vec<(usize, KgNode)>, edges: Vec<(usize, KgEdge)>) -> Result<Self, KgError> {
        let mut graph = KnowledgeGraph::default();
        for (line, node) in nodes {
            check_node(&node, line)?;
            if graph.nodes.contains_key(&node.id) {
                return Err(KgError::DuplicateNode { line, id: node.id });
            }
            graph.label_index.entry(text::fold(&node.label)).or_default().push(node.id.clone());
            graph.nodes.insert(node.id.clone(), node);
        }
        for ids in graph.label_index.values_mut() {
            ids.sort();
        }
        for (line, edge) in edges {
            if edge.src == edge.dst {
                return Err(KgError::BadEdge { line, message: format!("self-loop on {:?}", edge.src) });
            }
            for end in [&edge.src, &edge.dst] {
                if !graph.nodes.contains_key(end) {
                    return Err(KgError::DanglingEdge {
                        line,
                        src: edge.src.clone(),
                        dst: edge.dst.clone(),
                        missing: end.clone(),
                    });
                }
            }
            graph.parents.entry(edge.src.clone()).or_default().insert(edge.dst.clone());
            graph.children.entry(edge.dst.clone()).or_default().insert(edge.src.clone());
            if !graph.edges.insert(edge.clone()) {
                return Err(KgError::BadEdge {
                    line,
                    message: format!("duplicate edge {:?} -{:?}-> {:?}", edge.src, edge.prop, edge.dst),
                });
            }
        }
        Ok(graph)
    }

    pub fn from_parts(nodes: Vec<KgNode>, edges: Vec<KgEdge>) -> Result<Self, KgError> {
        let n = nodes.len();
        Self::build(
            nodes.into_iter().enumerate().map(|(i, n)| (i + 1, n)).collect(),
            edges.into_iter().enumerate().map(|(i, e)| (n + i + 1, e)).collect(),
        )
    }

    /// Read the KG JSONL format. Nodes and edges may come in any order; edges
    /// are checked once every node is known.
    pub fn load<R: BufRead>(reader: R) -> Result<Self, KgError> {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<KgLine>(&line).map_err(|source| KgError::Json { line: line_no, source })? {
                KgLine::Node(node) => nodes.push((line_no, node)),
                KgLine::Edge(edge) => edges.push((line_no, edge)),
            }
        }
        Self::build(nodes, edges)
    }

    pub fn load_path(path: impl AsRef<std::path::Path>) -> Result<Self, KgError> {
        let file = std::fs::File::open(path)?;
        Self::load(io::BufReader::new(file))
    }

    /// Write nodes sorted by id, then edges sorted by (src, dst, prop).
    pub fn dump<W: Write>(&self, mut writer: W) -> io::Result<()> {
        for node in self.nodes.values() {
            serde_json::to_writer(&mut writer, &KgLine::Node(node.clone()))?;
            writer.write_all(b"\n")?;
        }
        for edge in &self.edges {
            serde_json::to_writer(&mut writer, &KgLine::Edge(edge.clone()))?;
            writer.write_all(b"\n")?;
        }
        writer.flush()
    }

    pub fn node(&self, id: &str) -> Option<&KgNode> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &KgNode> {
        self.nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &KgEdge> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Ids of nodes whose case-folded label equals the folded `surface`, sorted.
    pub fn ids_for_label(&self, surface: &str) -> &[String] {
        self.label_index.get(&text::fold(surface)).map_or(&[], Vec::as_slice)
    }

    /// Direct membership parents of `id` over any property, sorted.
    pub fn parents_of(&self, id: &str) -> impl Iterator<Item = &str> {
        self.parents.get(id).into_iter().flatten().map(String::as_str)
    }

    pub fn children_of(&self, id: &str) -> impl Iterator<Item = &str> {
        self.children.get(id).into_iter().flatten().map(String::as_str)
    }

    /// True when some node of `category` carries this label (case-folded).
    pub fn has_label(&self, label: &str, category: EntityCategory) -> bool {
        self.ids_for_label(label).iter().any(|id| self.nodes[id].category == category)
    }
}
