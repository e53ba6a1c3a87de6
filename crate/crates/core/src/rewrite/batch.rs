// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::detect::Detector;
use crate::kg::KnowledgeGraph;
use crate::par;

use super::{rewrite_with_links, ConsistencyMap, LinkScope, RewriteMode, RewrittenDocument, SharedLinks};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchOptions {
    pub seed: u64,
    pub scope: LinkScope,
    pub workers: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        Self { seed: 0, scope: LinkScope::Doc, workers: 1 }
    }
}

/// A document that could not be processed, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocFailure {
    pub id: String,
    pub error: String,
}

impl DocFailure {
    pub fn new(id: &str, error: impl ToString) -> Self {
        Self { id: id.to_string(), error: error.to_string() }
    }
}

/// Detect and rewrite every document, in input order.
///
/// Under [`LinkScope::Corpus`] the final consistency table is returned too.
pub fn rewrite_corpus(
    docs: &[Document],
    detector: &Detector,
    mode: RewriteMode,
    kg: Option<&KnowledgeGraph>,
    options: BatchOptions,
) -> (Vec<Result<RewrittenDocument, DocFailure>>, Option<ConsistencyMap>) {
    let shared = SharedLinks::new();
    let results = par::map_ordered(docs, options.workers, |doc| {
        let spans = detector.detect(doc).map_err(|e| DocFailure::new(&doc.id, e))?;
        let rewritten = match options.scope {
            LinkScope::Doc => {
                rewrite_with_links(doc, &spans, mode, kg, options.seed, &mut ConsistencyMap::new())
            }
            LinkScope::Corpus => shared.rewrite(doc, &spans, mode, kg, options.seed),
        };
        rewritten.map_err(|e| DocFailure::new(&doc.id, e))
    });
    let links = (options.scope == LinkScope::Corpus).then(|| shared.snapshot());
    (results, links)
}
