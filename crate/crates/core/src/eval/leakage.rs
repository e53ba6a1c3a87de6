// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, EntityCategory};
use crate::par;
use crate::text;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LeakageOptions {
    /// Also count a leak when the surface reappears with different casing.
    pub fold_case: bool,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LeakageError {
    #[error("document ids differ: only in gold [{}]; only in rewritten [{}]", .only_gold.join(", "), .only_rewritten.join(", "))]
    IdMismatch { only_gold: Vec<String>, only_rewritten: Vec<String> },
    #[error("gold document {0:?} has no entities field")]
    MissingGold(String),
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryLeakage {
    pub leaked: usize,
    pub total: usize,
    /// Percent; 0 when `total` is 0.
    pub rate: f64,
}

impl CategoryLeakage {
    fn from_counts(leaked: usize, total: usize) -> Self {
        let rate = if total == 0 { 0.0 } else { 100.0 * leaked as f64 / total as f64 };
        Self { leaked, total, rate }
    }
}

/// Per-category and aggregate leak rates for one system.
///
/// `macro_mean` averages only categories that have at least one gold entity.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport {
    pub system: String,
    pub per_category: BTreeMap<EntityCategory, CategoryLeakage>,
    pub micro_mean: f64,
    pub macro_mean: f64,
}

/// The JSON layout: one row per system, rates as columns, counts alongside.
#[derive(Serialize, Deserialize)]
struct Row {
    system: String,
    #[serde(rename = "PER")]
    per: f64,
    #[serde(rename = "ORG")]
    org: f64,
    #[serde(rename = "LOC")]
    loc: f64,
    micro: f64,
    #[serde(rename = "macro")]
    macro_: f64,
    counts: BTreeMap<EntityCategory, Counts>,
}

#[derive(Serialize, Deserialize)]
struct Counts {
    leaked: usize,
    total: usize,
}

impl Serialize for LeakageReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rate = |c| self.category(c).rate;
        Row {
            system: self.system.clone(),
            per: rate(EntityCategory::Person),
            org: rate(EntityCategory::Organization),
            loc: rate(EntityCategory::Location),
            micro: self.micro_mean,
            macro_: self.macro_mean,
            counts: self
                .per_category
                .iter()
                .map(|(&c, l)| (c, Counts { leaked: l.leaked, total: l.total }))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LeakageReport {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let row = Row::deserialize(deserializer)?;
        let counts = EntityCategory::ALL.map(|c| row.counts.get(&c).map_or((0, 0), |n| (n.leaked, n.total)));
        Ok(LeakageReport::from_counts(row.system, counts))
    }
}

/// Rows of reports, one per system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageTable {
    pub rows: Vec<LeakageReport>,
}

impl LeakageReport {
    /// Build from (leaked, total) per category, indexed like `EntityCategory::ALL`.
    pub fn from_counts(system: impl Into<String>, counts: [(usize, usize); 3]) -> Self {
        let per_category: BTreeMap<_, _> = EntityCategory::ALL
            .iter()
            .zip(counts)
            .map(|(&c, (leaked, total))| (c, CategoryLeakage::from_counts(leaked, total)))
            .collect();
        let leaked: usize = counts.iter().map(|c| c.0).sum();
        let total: usize = counts.iter().map(|c| c.1).sum();
        let micro_mean = if total == 0 { 0.0 } else { 100.0 * leaked as f64 / total as f64 };
        let present: Vec<f64> = per_category.values().filter(|c| c.total > 0).map(|c| c.rate).collect();
        let macro_mean = if present.is_empty() { 0.0 } else { present.iter().sum::<f64>() / present.len() as f64 };
        Self { system: system.into(), per_category, micro_mean, macro_mean }
    }

    pub fn category(&self, category: EntityCategory) -> CategoryLeakage {
        self.per_category.get(&category).copied().unwrap_or_default()
    }

    pub fn total(&self) -> usize {
        self.per_category.values().map(|c| c.total).sum()
    }

    pub fn leaked(&self) -> usize {
        self.per_category.values().map(|c| c.leaked).sum()
    }
}

fn category_index(category: EntityCategory) -> usize {
    EntityCategory::ALL.iter().position(|&c| c == category).expect("listed")
}

fn count_document(gold: &Document, rewritten: &str, fold_case: bool) -> [(usize, usize); 3] {
    let mut counts = [(0, 0); 3];
    let mut memo: HashMap<&str, bool> = HashMap::new();
    for span in gold.gold_spans.iter().flatten() {
        let leaked =
            *memo.entry(&span.surface).or_insert_with(|| text::contains_word_bounded(rewritten, &span.surface, fold_case));
        let slot = &mut counts[category_index(span.category)];
        slot.1 += 1;
        slot.0 += usize::from(leaked);
    }
    counts
}

/// Count gold spans whose surface still occurs, word-bounded, in the
/// rewritten text of the same document id.
///
/// Every gold span counts, so repeated mentions weigh once each.
pub fn leakage_report(
    system: &str,
    gold_docs: &[Document],
    rewritten_docs: &[Document],
    options: LeakageOptions,
) -> Result<LeakageReport, LeakageError> {
    let mut rewritten: HashMap<&str, &str> = HashMap::with_capacity(rewritten_docs.len());
    for doc in rewritten_docs {
        if rewritten.insert(&doc.id, &doc.text).is_some() {
            return Err(LeakageError::DuplicateId(doc.id.clone()));
        }
    }
    let mut seen: HashMap<&str, ()> = HashMap::with_capacity(gold_docs.len());
    let mut only_gold = Vec::new();
    for doc in gold_docs {
        if seen.insert(&doc.id, ()).is_some() {
            return Err(LeakageError::DuplicateId(doc.id.clone()));
        }
        if !rewritten.contains_key(doc.id.as_str()) {
            only_gold.push(doc.id.clone());
        }
    }
    let mut only_rewritten: Vec<String> =
        rewritten_docs.iter().filter(|d| !seen.contains_key(d.id.as_str())).map(|d| d.id.clone()).collect();
    if !only_gold.is_empty() || !only_rewritten.is_empty() {
        only_gold.sort();
        only_rewritten.sort();
        return Err(LeakageError::IdMismatch { only_gold, only_rewritten });
    }
    if let Some(doc) = gold_docs.iter().find(|d| d.gold_spans.is_none()) {
        return Err(LeakageError::MissingGold(doc.id.clone()));
    }

    let per_doc = par::map_ordered(gold_docs, options.workers, |doc| {
        count_document(doc, rewritten[doc.id.as_str()], options.fold_case)
    });
    let counts = per_doc.into_iter().fold([(0, 0); 3], |mut acc, doc| {
        for (a, d) in acc.iter_mut().zip(doc) {
            a.0 += d.0;
            a.1 += d.1;
        }
        acc
    });
    Ok(LeakageReport::from_counts(system, counts))
}
