// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Entity detection behind one contract.
//!
//! Three detectors are available: [`Detector::Oracle`] replays a document's
//! gold spans, [`Detector::Gazetteer`] does lexicon matching, and
//! [`Detector::External`] talks to a child process over line-delimited JSON
//! so that any statistical NER can be plugged in.

mod external;
mod gazetteer;

use crate::corpus::{Document, EntitySpan};

pub use external::{serve_gazetteer, ExternalDetector, ExternalError, PROTOCOL_VERSION};
pub use gazetteer::{gazetteer_match, Gazetteer, GazetteerError, MatchPolicy};

#[derive(Debug, thiserror::Error)]
pub enum DetectError {
    #[error("document {0:?} has no gold spans for the oracle detector")]
    MissingGold(String),
    #[error(transparent)]
    External(#[from] ExternalError),
}

#[derive(Debug)]
pub enum Detector {
    Oracle,
    Gazetteer(Gazetteer),
    External(ExternalDetector),
}

impl Detector {
    /// Spans for `doc`, sorted and non-overlapping.
    pub fn detect(&self, doc: &Document) -> Result<Vec<EntitySpan>, DetectError> {
        match self {
            Detector::Oracle => doc.gold_spans.clone().ok_or_else(|| DetectError::MissingGold(doc.id.clone())),
            Detector::Gazetteer(gazetteer) => Ok(gazetteer_match(&doc.text, gazetteer)),
            Detector::External(external) => {
                if doc.text.is_empty() {
                    return Ok(Vec::new());
                }
                Ok(resolve_overlaps(external.detect(doc)?))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Detector::Oracle => "oracle",
            Detector::Gazetteer(_) => "gazetteer",
            Detector::External(_) => "external",
        }
    }
}

/// Drop conflicting spans so the rest are sorted and pairwise disjoint.
///
/// Longer spans win; among equal lengths the earlier start wins, then the
/// category order PER < LOC < ORG.
pub fn resolve_overlaps(mut spans: Vec<EntitySpan>) -> Vec<EntitySpan> {
    spans.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then(a.start.cmp(&b.start))
            .then(a.category.cmp(&b.category))
    });
    let mut kept: Vec<EntitySpan> = Vec::with_capacity(spans.len());
    for span in spans {
        if span.is_empty() || kept.iter().any(|k| k.overlaps(&span)) {
            continue;
        }
        kept.push(span);
    }
    kept.sort_by_key(|s| s.start);
    kept
}
