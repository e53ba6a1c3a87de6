// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! LLM-based pseudonymization: a one-shot extraction prompt chained into a
//! one-shot replacement chat, against any chat-completions endpoint.

mod chain;
mod client;
pub mod mock;
mod prompt;

pub use chain::{
    llm_pseudonymize, llm_pseudonymize_corpus, LlmChain, LlmDiagnostics, LlmFailure, LlmReplacement, LlmRewrite,
    DEFAULT_EXTRACT_MODEL, DEFAULT_REPLACE_MODEL,
};
pub use client::{ChatEndpoint, ChatRequest, HttpEndpoint, LlmEndpoint, TransportError};
pub use mock::{MockEndpoint, MockFixture, MockRule};
pub use prompt::{
    align_replacements, build_ner_prompt, build_replacement_messages, parse_entity_list, Alignment, ChatMessage,
    EntityList, Role, NER_EXAMPLE_ANSWER, NER_EXAMPLE_TEXT, NER_INSTRUCTION, REPLACE_EXAMPLE_INPUT,
    REPLACE_EXAMPLE_OUTPUT, REPLACE_INSTRUCTION,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LlmError {
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("extraction returned no entities")]
    EmptyExtraction,
    #[error("replacement returned {} items for {} extracted: [{}] vs [{}]", .replaced.len(), .extracted.len(), .extracted.join(), .replaced.join())]
    Alignment { extracted: EntityList, replaced: EntityList },
    #[error("surrogate output still contains extracted surface {surface:?}")]
    SurrogateCollision { surface: String },
}
