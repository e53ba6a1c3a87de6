// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Documents, entity spans and the corpus file formats.

mod conll;
mod jsonl;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text;

pub use conll::{parse_conll, write_conll, ConllError};
pub use jsonl::{read_jsonl, write_jsonl, JsonlError};

/// The three entity categories that get rewritten.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityCategory {
    #[serde(rename = "PER")]
    Person,
    #[serde(rename = "LOC")]
    Location,
    #[serde(rename = "ORG")]
    Organization,
}

impl EntityCategory {
    pub const ALL: [EntityCategory; 3] =
        [EntityCategory::Person, EntityCategory::Location, EntityCategory::Organization];

    /// Short tag used in files and on the wire: `PER`, `LOC`, `ORG`.
    pub fn tag(self) -> &'static str {
        match self {
            EntityCategory::Person => "PER",
            EntityCategory::Location => "LOC",
            EntityCategory::Organization => "ORG",
        }
    }

    /// Word used in sanitization placeholders (`PERSON_1`).
    pub fn placeholder_word(self) -> &'static str {
        match self {
            EntityCategory::Person => "PERSON",
            EntityCategory::Location => "LOCATION",
            EntityCategory::Organization => "ORGANIZATION",
        }
    }
}

impl fmt::Display for EntityCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown entity category {0:?} (expected PER, LOC or ORG)")]
pub struct UnknownCategory(pub String);

impl FromStr for EntityCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PER" => Ok(EntityCategory::Person),
            "LOC" => Ok(EntityCategory::Location),
            "ORG" => Ok(EntityCategory::Organization),
            other => Err(UnknownCategory(other.to_string())),
        }
    }
}

/// A categorized character range `[start, end)` of a document's text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub category: EntityCategory,
    pub surface: String,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, category: EntityCategory, surface: impl Into<String>) -> Self {
        Self { start, end, category, surface: surface.into() }
    }

    /// Build a span by slicing `text`; `None` if the range is out of bounds or empty.
    pub fn from_text(text: &str, start: usize, end: usize, category: EntityCategory) -> Option<Self> {
        if start >= end {
            return None;
        }
        text::char_slice(text, start, end).map(|s| Self::new(start, end, category, s))
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn overlaps(&self, other: &EntitySpan) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Why a span list is not valid for a given text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpanError {
    #[error("span {index} has empty or inverted range [{start}, {end})")]
    EmptyRange { index: usize, start: usize, end: usize },
    #[error("span {index} ends at {end}, past the text length {len}")]
    OutOfRange { index: usize, end: usize, len: usize },
    #[error("span {index} surface {surface:?} does not match text {actual:?}")]
    SurfaceMismatch { index: usize, surface: String, actual: String },
    #[error("span {index} overlaps or precedes the previous span")]
    Unordered { index: usize },
}

/// Check that `spans` are in range, match the text, sorted and non-overlapping.
pub fn validate_spans(text: &str, spans: &[EntitySpan]) -> Result<(), SpanError> {
    let bounds = text::char_boundaries(text);
    let len = bounds.len() - 1;
    let mut prev_end = 0;
    for (index, span) in spans.iter().enumerate() {
        if span.start >= span.end {
            return Err(SpanError::EmptyRange { index, start: span.start, end: span.end });
        }
        if span.end > len {
            return Err(SpanError::OutOfRange { index, end: span.end, len });
        }
        let actual = &text[bounds[span.start]..bounds[span.end]];
        if actual != span.surface {
            return Err(SpanError::SurfaceMismatch {
                index,
                surface: span.surface.clone(),
                actual: actual.to_string(),
            });
        }
        if index > 0 && span.start < prev_end {
            return Err(SpanError::Unordered { index });
        }
        prev_end = span.end;
    }
    Ok(())
}

/// A unit of text flowing through the pipelines, optionally with gold spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub gold_spans: Option<Vec<EntitySpan>>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into(), gold_spans: None }
    }

    pub fn with_gold(mut self, spans: Vec<EntitySpan>) -> Self {
        self.gold_spans = Some(spans);
        self
    }

    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.id.is_empty() {
            return Err(DocumentError::EmptyId);
        }
        if let Some(spans) = &self.gold_spans {
            validate_spans(&self.text, spans)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("document id is empty")]
    EmptyId,
    #[error(transparent)]
    Span(#[from] SpanError),
}
