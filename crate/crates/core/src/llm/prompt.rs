// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! One-shot prompt templates and response parsing for both stages.

use serde::{Deserialize, Serialize};

use super::LlmError;

pub const NER_INSTRUCTION: &str =
    "Find all the locations, names and organizations in the following text. Write them separated by commas:";
pub const NER_EXAMPLE_TEXT: &str = "Daniel worked in Google for five years before moving from America to France. \
Daniel is now working with Emma in Danone and living in Paris.";
pub const NER_EXAMPLE_ANSWER: &str = "Daniel, Google, America, France, Emma, Danone, Paris.";

pub const REPLACE_INSTRUCTION: &str = "Change following named entities using different named entities of the same type.";
pub const REPLACE_EXAMPLE_INPUT: &str = "Africa, James Potter, Google, Poland, Lily Jameson, Danone";
pub const REPLACE_EXAMPLE_OUTPUT: &str = "Asia, John Lennon, Microsoft, Germany, Anna Smith, Starbucks";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn new(role: Role, content: impl Into<String>) -> Self {
        Self { role, content: content.into() }
    }
}

/// Ordered entity surfaces as returned by a model; never contains empty items.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityList(Vec<String>);

impl EntityList {
    /// `None` if any item is empty.
    pub fn new(items: Vec<String>) -> Option<Self> {
        items.iter().all(|s| !s.is_empty()).then_some(Self(items))
    }

    pub fn items(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn join(&self) -> String {
        self.0.join(", ")
    }
}

/// Stage-1 completion prompt for `text`.
pub fn build_ner_prompt(text: &str) -> String {
    format!("{NER_INSTRUCTION}\nText: {NER_EXAMPLE_TEXT}\nAnswer: {NER_EXAMPLE_ANSWER}\nText: {text}\nAnswer:")
}

/// Split a comma-separated answer into surfaces.
///
/// Items are trimmed, the final item loses one trailing period, empty items
/// are dropped; order and duplicates are kept.
pub fn parse_entity_list(response: &str) -> Result<EntityList, LlmError> {
    let mut pieces: Vec<&str> = response.split(',').map(str::trim).collect();
    if let Some(last) = pieces.last_mut() {
        if let Some(stripped) = last.strip_suffix('.') {
            *last = stripped.trim_end();
        }
    }
    let items: Vec<String> = pieces.into_iter().filter(|s| !s.is_empty()).map(str::to_string).collect();
    if items.is_empty() {
        return Err(LlmError::EmptyExtraction);
    }
    Ok(EntityList(items))
}

/// Stage-2 chat: instruction, one worked exemplar, then the entities to change.
pub fn build_replacement_messages(entities: &EntityList) -> Vec<ChatMessage> {
    vec![
        ChatMessage::new(Role::System, REPLACE_INSTRUCTION),
        ChatMessage::new(Role::User, REPLACE_EXAMPLE_INPUT),
        ChatMessage::new(Role::Assistant, REPLACE_EXAMPLE_OUTPUT),
        ChatMessage::new(Role::User, entities.join()),
    ]
}

/// Positional mapping between extracted and replaced surfaces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    /// (source, surrogate), first occurrence of each source wins.
    pub pairs: Vec<(String, String)>,
    /// Sources whose surrogate equals them ignoring case.
    pub self_replacements: Vec<String>,
    /// Lower-case-initial sources, which are probably not named entities
    /// (e.g. "family" -> "relatives").
    pub non_entity: Vec<String>,
}

impl Alignment {
    pub fn surrogate(&self, source: &str) -> Option<&str> {
        self.pairs.iter().find(|(s, _)| s == source).map(|(_, t)| t.as_str())
    }
}

pub fn align_replacements(extracted: &EntityList, replaced: &EntityList) -> Result<Alignment, LlmError> {
    if extracted.len() != replaced.len() {
        return Err(LlmError::Alignment { extracted: extracted.clone(), replaced: replaced.clone() });
    }
    let mut alignment = Alignment::default();
    for (source, target) in extracted.items().iter().zip(replaced.items()) {
        if alignment.pairs.iter().any(|(s, _)| s == source) {
            continue;
        }
        if crate::text::fold(source) == crate::text::fold(target) {
            alignment.self_replacements.push(source.clone());
        }
        if source.chars().next().is_some_and(char::is_lowercase) {
            alignment.non_entity.push(source.clone());
        }
        alignment.pairs.push((source.clone(), target.clone()));
    }
    Ok(alignment)
}
