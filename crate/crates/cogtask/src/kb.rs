//! Semantic memory: a labeled graph of concept/lemma/synset/feature nodes
//! connected by typed, weighted relations.
//!
//! The store is loaded once from a TSV triple file and is immutable
//! afterwards, so it can be shared read-only across concurrent queriers.
//! Neighbor queries traverse edges in either direction; the extracted
//! neighborhoods are the raw material for semantic signatures.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Normalizes a raw label: trim, lowercase, internal whitespace collapsed to
/// a single underscore. Guarantees that "Tea" and "tea " unify.
pub fn normalize_label(raw: &str) -> String {
    raw.trim()
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
}

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Synset,
    Lemma,
    Concept,
    Feature,
}

impl NodeKind {
    fn parse(s: &str) -> Option<NodeKind> {
        match s {
            "synset" => Some(NodeKind::Synset),
            "lemma" => Some(NodeKind::Lemma),
            "concept" => Some(NodeKind::Concept),
            "feature" => Some(NodeKind::Feature),
            _ => None,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            NodeKind::Synset => "synset",
            NodeKind::Lemma => "lemma",
            NodeKind::Concept => "concept",
            NodeKind::Feature => "feature",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeNode {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub source: NodeId,
    pub category: String,
    pub target: NodeId,
    pub weight: f64,
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error("failed to read knowledge base file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: weight {value} outside (0, 1]")]
    InvalidWeight { line: usize, value: f64 },
    #[error("line {line}: duplicate triple ({source}, {category}, {target})")]
    DuplicateTriple {
        line: usize,
        source: String,
        category: String,
        target: String,
    },
    #[error("line {line}: duplicate kind declaration for label '{label}'")]
    DuplicateKindDeclaration { label: String, line: usize },
    #[error("line {line}: dangling kind declaration: label '{label}' never appears in a triple")]
    DanglingKindDeclaration { label: String, line: usize },
}

/// The semantic-memory graph. Immutable after load.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    nodes: Vec<KnowledgeNode>,
    edges: Vec<Relation>,
    /// label -> ids of nodes carrying that label
    label_index: HashMap<String, Vec<NodeId>>,
    /// node id -> (neighbor id, edge index), both directions
    adjacency: Vec<Vec<(NodeId, usize)>>,
    categories: BTreeSet<String>,
}

impl KnowledgeBase {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    pub fn categories(&self) -> &BTreeSet<String> {
        &self.categories
    }

    pub fn nodes(&self) -> &[KnowledgeNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Relation] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &KnowledgeNode {
        &self.nodes[id as usize]
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.label_index.contains_key(&normalize_label(label))
    }

    /// All labels reachable from any node with the given label within
    /// `radius` hops, traversing edges in either direction. The query label
    /// itself is excluded. An unknown label yields the empty set: unknown
    /// words legitimately score zero downstream.
    pub fn neighbors(&self, label: &str, radius: usize) -> BTreeSet<String> {
        self.neighbors_excluding(label, radius, &HashSet::new())
    }

    /// `neighbors`, but edges whose category is in `excluded` are not
    /// traversed. The paper-scale store keeps all 54 categories; callers can
    /// trim noisy ones here.
    pub fn neighbors_excluding(
        &self,
        label: &str,
        radius: usize,
        excluded: &HashSet<String>,
    ) -> BTreeSet<String> {
        assert!(radius >= 1, "radius must be >= 1");
        let query = normalize_label(label);
        let Some(start) = self.label_index.get(&query) else {
            return BTreeSet::new();
        };

        let mut seen: HashSet<NodeId> = start.iter().copied().collect();
        let mut frontier: VecDeque<(NodeId, usize)> =
            start.iter().map(|&id| (id, 0usize)).collect();
        let mut result = BTreeSet::new();

        while let Some((id, depth)) = frontier.pop_front() {
            if depth == radius {
                continue;
            }
            for &(next, edge_idx) in &self.adjacency[id as usize] {
                if excluded.contains(&self.edges[edge_idx].category) {
                    continue;
                }
                if seen.insert(next) {
                    let label = &self.nodes[next as usize].label;
                    if *label != query {
                        result.insert(label.clone());
                    }
                    frontier.push_back((next, depth + 1));
                }
            }
        }
        result
    }

    /// Serializes back to the TSV triple format. Kind declarations are
    /// emitted for every node, so a reload reconstructs the same node and
    /// edge multisets.
    pub fn to_tsv_string(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            out.push_str(&format!("@kind\t{}\t{}\n", node.label, node.kind));
        }
        for edge in &self.edges {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                self.nodes[edge.source as usize].label,
                edge.category,
                self.nodes[edge.target as usize].label,
                edge.weight
            ));
        }
        out
    }

    fn intern(&mut self, label: String, declared: Option<NodeKind>) -> NodeId {
        if let Some(ids) = self.label_index.get(&label) {
            return ids[0];
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(KnowledgeNode {
            id,
            label: label.clone(),
            kind: declared.unwrap_or(NodeKind::Concept),
        });
        self.adjacency.push(Vec::new());
        self.label_index.insert(label, vec![id]);
        id
    }
}

/// Loads a knowledge base from a TSV file. See [`parse_kb`] for the format.
pub fn load_kb(path: impl AsRef<Path>) -> Result<KnowledgeBase, KbError> {
    let text = std::fs::read_to_string(path)?;
    parse_kb(&text)
}

/// Parses the TSV triple format:
///
/// ```text
/// source<TAB>category<TAB>target<TAB>weight
/// @kind<TAB>label<TAB>{synset|lemma|concept|feature}
/// # comment
/// ```
///
/// Nodes are auto-created on first mention, with the declared kind or
/// `concept` by default. A kind declaration whose label never appears in a
/// triple is rejected as dangling.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, KbError> {
    let mut kinds: HashMap<String, (NodeKind, usize)> = HashMap::new();
    let mut triples: Vec<(String, String, String, f64, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields[0] == "@kind" {
            if fields.len() != 3 {
                return Err(KbError::MalformedLine {
                    line: line_no,
                    reason: format!("@kind expects 3 fields, found {}", fields.len()),
                });
            }
            let label = normalize_label(fields[1]);
            if label.is_empty() {
                return Err(KbError::MalformedLine {
                    line: line_no,
                    reason: "empty label in @kind declaration".into(),
                });
            }
            let kind = NodeKind::parse(fields[2].trim()).ok_or(KbError::MalformedLine {
                line: line_no,
                reason: format!("unknown node kind '{}'", fields[2]),
            })?;
            if kinds.insert(label.clone(), (kind, line_no)).is_some() {
                return Err(KbError::DuplicateKindDeclaration {
                    label,
                    line: line_no,
                });
            }
            continue;
        }

        if fields.len() != 4 {
            return Err(KbError::MalformedLine {
                line: line_no,
                reason: format!("expected 4 tab-separated fields, found {}", fields.len()),
            });
        }
        let source = normalize_label(fields[0]);
        let category = fields[1].trim().to_string();
        let target = normalize_label(fields[2]);
        if source.is_empty() || category.is_empty() || target.is_empty() {
            return Err(KbError::MalformedLine {
                line: line_no,
                reason: "empty field".into(),
            });
        }
        let weight: f64 = fields[3].trim().parse().map_err(|_| KbError::MalformedLine {
            line: line_no,
            reason: format!("unparseable weight '{}'", fields[3]),
        })?;
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(KbError::InvalidWeight {
                line: line_no,
                value: weight,
            });
        }
        triples.push((source, category, target, weight, line_no));
    }

    let mut kb = KnowledgeBase::default();
    let mut seen_triples: HashSet<(NodeId, String, NodeId)> = HashSet::new();
    let mut used_labels: HashSet<String> = HashSet::new();

    for (source, category, target, weight, line_no) in triples {
        used_labels.insert(source.clone());
        used_labels.insert(target.clone());
        let src_kind = kinds.get(&source).map(|&(k, _)| k);
        let tgt_kind = kinds.get(&target).map(|&(k, _)| k);
        let src = kb.intern(source.clone(), src_kind);
        let tgt = kb.intern(target.clone(), tgt_kind);
        if !seen_triples.insert((src, category.clone(), tgt)) {
            return Err(KbError::DuplicateTriple {
                line: line_no,
                source,
                category,
                target,
            });
        }
        let edge_idx = kb.edges.len();
        kb.edges.push(Relation {
            source: src,
            category: category.clone(),
            target: tgt,
            weight,
        });
        kb.adjacency[src as usize].push((tgt, edge_idx));
        kb.adjacency[tgt as usize].push((src, edge_idx));
        kb.categories.insert(category);
    }

    for (label, &(_, line)) in &kinds {
        if !used_labels.contains(label) {
            return Err(KbError::DanglingKindDeclaration {
                label: label.clone(),
                line,
            });
        }
    }

    Ok(kb)
}
