// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Sanitization and pseudonymization of detected spans.
//!
//! Mentions are keyed by (case-folded surface, category). Every mention of a
//! key gets the same replacement within the link scope, which is one
//! document by default and the whole corpus with [`LinkScope::Corpus`].

mod batch;
mod parallel;
mod splice;

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, EntityCategory, EntitySpan, SpanError};
use crate::kg::{surrogate_for, KnowledgeGraph};
use crate::seed;
use crate::text;

pub use batch::{rewrite_corpus, BatchOptions, DocFailure};
pub use parallel::{escape_tsv_field, generate_parallel_corpus, unescape_tsv_field, write_parallel_tsv, ParallelCorpus};
pub use splice::apply_replacements;
pub(crate) use splice::splice_ranges;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewriteMode {
    Sanitize,
    Pseudonymize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkScope {
    #[default]
    Doc,
    Corpus,
}

#[derive(Debug, thiserror::Error)]
pub enum RewriteError {
    #[error("invalid spans: {0}")]
    Spans(#[from] SpanError),
    #[error("pseudonymization requires a knowledge graph")]
    MissingKg,
}

pub type LinkKey = (String, EntityCategory);

fn link_key(surface: &str, category: EntityCategory) -> LinkKey {
    (text::fold(surface), category)
}

/// Sanitization placeholder, e.g. `PERSON_2`.
pub fn placeholder(category: EntityCategory, index: usize) -> String {
    format!("{}_{index}", category.placeholder_word())
}

/// Key → replacement table plus per-category counters for placeholder numbering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyMap {
    entries: HashMap<LinkKey, String>,
    order: Vec<LinkKey>,
    counters: [usize; 3],
}

fn category_slot(category: EntityCategory) -> usize {
    match category {
        EntityCategory::Person => 0,
        EntityCategory::Location => 1,
        EntityCategory::Organization => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub surface: String,
    pub category: EntityCategory,
    pub surrogate: String,
}

impl ConsistencyMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, surface: &str, category: EntityCategory) -> Option<&str> {
        self.entries.get(&link_key(surface, category)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Existing replacement for the key, or a new one made by `make` from the
    /// key's 1-based first-appearance index within its category.
    fn resolve(&mut self, surface: &str, category: EntityCategory, make: impl FnOnce(usize) -> String) -> String {
        let key = link_key(surface, category);
        if let Some(existing) = self.entries.get(&key) {
            return existing.clone();
        }
        let slot = category_slot(category);
        self.counters[slot] += 1;
        let value = make(self.counters[slot]);
        self.entries.insert(key.clone(), value.clone());
        self.order.push(key);
        value
    }

    /// Entries in first-appearance order (folded surfaces).
    pub fn entries(&self) -> Vec<LinkEntry> {
        self.order
            .iter()
            .map(|key| LinkEntry { surface: key.0.clone(), category: key.1, surrogate: self.entries[key].clone() })
            .collect()
    }
}

/// Replacements decided for one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementPlan {
    pub assignments: Vec<(EntitySpan, String)>,
    /// Keys of this document only, even under corpus scope.
    pub consistency_map: HashMap<LinkKey, String>,
    pub mode: RewriteMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewrittenDocument {
    pub id: String,
    pub text: String,
    pub plan: ReplacementPlan,
    pub new_spans: Vec<EntitySpan>,
}

impl RewrittenDocument {
    /// Document whose `entities` locate the replacements in the new text.
    pub fn to_document(&self) -> Document {
        Document { id: self.id.clone(), text: self.text.clone(), gold_spans: Some(self.new_spans.clone()) }
    }
}

/// Rewrite `doc` using `links` as the consistency table.
///
/// Pseudonymization draws from a generator derived from `(seed, doc.id)`;
/// keys without a KG leaf or without a distinct surrogate get the
/// placeholder sanitization would have given them.
pub fn rewrite_with_links(
    doc: &Document,
    spans: &[EntitySpan],
    mode: RewriteMode,
    kg: Option<&KnowledgeGraph>,
    seed: u64,
    links: &mut ConsistencyMap,
) -> Result<RewrittenDocument, RewriteError> {
    crate::corpus::validate_spans(&doc.text, spans)?;
    let kg = match mode {
        RewriteMode::Pseudonymize => Some(kg.ok_or(RewriteError::MissingKg)?),
        RewriteMode::Sanitize => None,
    };
    let mut rng = seed::doc_rng(seed, &doc.id);
    let mut local = HashMap::new();
    let mut assignments = Vec::with_capacity(spans.len());
    for span in spans {
        let surrogate = links.resolve(&span.surface, span.category, |index| match kg {
            Some(kg) => surrogate_for(kg, &span.surface, span.category, &mut rng)
                .unwrap_or_else(|_| placeholder(span.category, index)),
            None => placeholder(span.category, index),
        });
        local.insert(link_key(&span.surface, span.category), surrogate.clone());
        assignments.push((span.clone(), surrogate));
    }
    let (text, new_spans) = apply_replacements(&doc.text, &assignments)?;
    Ok(RewrittenDocument {
        id: doc.id.clone(),
        text,
        plan: ReplacementPlan { assignments, consistency_map: local, mode, seed },
        new_spans,
    })
}

/// Replace every span with an enumerated category placeholder.
pub fn sanitize(doc: &Document, spans: &[EntitySpan]) -> Result<RewrittenDocument, RewriteError> {
    rewrite_with_links(doc, spans, RewriteMode::Sanitize, None, 0, &mut ConsistencyMap::new())
}

/// Replace every span with a knowledge-graph surrogate of the same kind.
pub fn pseudonymize(
    doc: &Document,
    spans: &[EntitySpan],
    kg: &KnowledgeGraph,
    seed: u64,
) -> Result<RewrittenDocument, RewriteError> {
    rewrite_with_links(doc, spans, RewriteMode::Pseudonymize, Some(kg), seed, &mut ConsistencyMap::new())
}

/// A consistency table shared by concurrent workers (corpus link scope).
///
/// Output is only reproducible with a single worker, since the first worker
/// to reach a key decides its replacement.
#[derive(Debug, Default)]
pub struct SharedLinks(Mutex<ConsistencyMap>);

impl SharedLinks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rewrite(
        &self,
        doc: &Document,
        spans: &[EntitySpan],
        mode: RewriteMode,
        kg: Option<&KnowledgeGraph>,
        seed: u64,
    ) -> Result<RewrittenDocument, RewriteError> {
        let mut links = self.0.lock().unwrap_or_else(|e| e.into_inner());
        rewrite_with_links(doc, spans, mode, kg, seed, &mut links)
    }

    pub fn snapshot(&self) -> ConsistencyMap {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }
}
