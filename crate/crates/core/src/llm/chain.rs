// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! The two-stage chain: extract surfaces with a completion prompt, rewrite
//! them with a chat prompt, then splice the surrogates back by string search.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::par;
use crate::rewrite::{splice_ranges, DocFailure};
use crate::text;

use super::client::{ChatEndpoint, ChatRequest};
use super::prompt::{
    align_replacements, build_ner_prompt, build_replacement_messages, parse_entity_list, Alignment, ChatMessage,
    Role,
};
use super::LlmError;

pub const DEFAULT_EXTRACT_MODEL: &str = "text-curie-001";
pub const DEFAULT_REPLACE_MODEL: &str = "gpt-3.5-turbo";

/// Endpoints and models for both stages.
#[derive(Clone)]
pub struct LlmChain {
    pub extractor: Arc<dyn ChatEndpoint>,
    pub extract_model: String,
    pub replacer: Arc<dyn ChatEndpoint>,
    pub replace_model: String,
    pub temperature: f64,
    /// Extra stage-2 attempts after an alignment mismatch.
    pub alignment_retries: u32,
}

impl LlmChain {
    /// Both stages on one endpoint with the default models.
    pub fn single(endpoint: Arc<dyn ChatEndpoint>) -> Self {
        Self {
            extractor: Arc::clone(&endpoint),
            extract_model: DEFAULT_EXTRACT_MODEL.into(),
            replacer: endpoint,
            replace_model: DEFAULT_REPLACE_MODEL.into(),
            temperature: 0.0,
            alignment_retries: 0,
        }
    }
}

/// One surrogate spliced into the output, located in the rewritten text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmReplacement {
    pub start: usize,
    pub end: usize,
    pub original: String,
    pub surrogate: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmDiagnostics {
    pub extracted: Vec<String>,
    pub replaced: Vec<String>,
    pub self_replacements: Vec<String>,
    pub non_entity: Vec<String>,
    /// Extracted surfaces that never occur in the text.
    pub unmatched: Vec<String>,
    pub stage2_attempts: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlmRewrite {
    pub id: String,
    pub text: String,
    pub replacements: Vec<LlmReplacement>,
    pub diagnostics: LlmDiagnostics,
}

impl LlmRewrite {
    /// Surfaces come back without categories, so no `entities` are attached.
    pub fn to_document(&self) -> Document {
        Document::new(self.id.clone(), self.text.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlmFailure {
    pub id: String,
    pub error: LlmError,
    pub diagnostics: LlmDiagnostics,
}

impl From<LlmFailure> for DocFailure {
    fn from(failure: LlmFailure) -> Self {
        DocFailure::new(&failure.id, failure.error)
    }
}

/// Non-overlapping occurrences of each surface, longest surfaces first, as
/// (start, end, surface index) sorted by start.
fn locate(text: &str, surfaces: &[&str]) -> (Vec<(usize, usize, usize)>, Vec<usize>) {
    let mut order: Vec<usize> = (0..surfaces.len()).collect();
    order.sort_by(|&a, &b| {
        text::char_len(surfaces[b]).cmp(&text::char_len(surfaces[a])).then(surfaces[a].cmp(surfaces[b]))
    });
    let mut claimed: Vec<(usize, usize, usize)> = Vec::new();
    let mut unmatched = Vec::new();
    for idx in order {
        let hits = text::find_word_bounded(text, surfaces[idx], false);
        if hits.is_empty() {
            unmatched.push(idx);
        }
        for (start, end) in hits {
            if claimed.iter().all(|&(s, e, _)| end <= s || e <= start) {
                claimed.push((start, end, idx));
            }
        }
    }
    claimed.sort_unstable();
    unmatched.sort_unstable();
    (claimed, unmatched)
}

fn fail(doc: &Document, error: LlmError, diagnostics: LlmDiagnostics) -> LlmFailure {
    LlmFailure { id: doc.id.clone(), error, diagnostics }
}

/// Run the chain on one document.
///
/// A blank stage-1 answer means "no entities" and leaves the text as is.
/// The output is rejected if a surrogate reintroduces an extracted surface
/// that had a distinct replacement.
pub fn llm_pseudonymize(doc: &Document, chain: &LlmChain) -> Result<LlmRewrite, LlmFailure> {
    let mut diagnostics = LlmDiagnostics::default();
    let extract_request = ChatRequest {
        model: chain.extract_model.clone(),
        messages: vec![ChatMessage::new(Role::User, build_ner_prompt(&doc.text))],
        temperature: chain.temperature,
    };
    let answer = chain.extractor.complete(&extract_request).map_err(|e| fail(doc, e.into(), diagnostics.clone()))?;
    if answer.trim().is_empty() {
        return Ok(LlmRewrite { id: doc.id.clone(), text: doc.text.clone(), replacements: vec![], diagnostics });
    }
    let extracted = parse_entity_list(&answer).map_err(|e| fail(doc, e, diagnostics.clone()))?;
    diagnostics.extracted = extracted.items().to_vec();

    let replace_request = ChatRequest {
        model: chain.replace_model.clone(),
        messages: build_replacement_messages(&extracted),
        temperature: chain.temperature,
    };
    let alignment: Alignment = loop {
        diagnostics.stage2_attempts += 1;
        let reply = chain.replacer.complete(&replace_request).map_err(|e| fail(doc, e.into(), diagnostics.clone()))?;
        let replaced = parse_entity_list(&reply).unwrap_or_default();
        diagnostics.replaced = replaced.items().to_vec();
        match align_replacements(&extracted, &replaced) {
            Ok(alignment) => break alignment,
            Err(err) if diagnostics.stage2_attempts > chain.alignment_retries => {
                return Err(fail(doc, err, diagnostics));
            }
            Err(_) => continue,
        }
    };
    diagnostics.self_replacements = alignment.self_replacements.clone();
    diagnostics.non_entity = alignment.non_entity.clone();

    let surfaces: Vec<&str> = alignment.pairs.iter().map(|(s, _)| s.as_str()).collect();
    let (hits, unmatched) = locate(&doc.text, &surfaces);
    diagnostics.unmatched = unmatched.into_iter().map(|i| surfaces[i].to_string()).collect();

    let ranges: Vec<(usize, usize, &str)> =
        hits.iter().map(|&(s, e, i)| (s, e, alignment.pairs[i].1.as_str())).collect();
    let (new_text, located) = splice_ranges(&doc.text, &ranges);

    for (source, target) in &alignment.pairs {
        if text::fold(source) != text::fold(target) && text::contains_word_bounded(&new_text, source, false) {
            return Err(fail(doc, LlmError::SurrogateCollision { surface: source.clone() }, diagnostics));
        }
    }

    let replacements = hits
        .iter()
        .zip(located)
        .map(|(&(_, _, i), (start, end))| LlmReplacement {
            start,
            end,
            original: alignment.pairs[i].0.clone(),
            surrogate: alignment.pairs[i].1.clone(),
        })
        .collect();
    Ok(LlmRewrite { id: doc.id.clone(), text: new_text, replacements, diagnostics })
}

/// Run the chain over a batch in input order; failures do not stop the batch.
pub fn llm_pseudonymize_corpus(docs: &[Document], chain: &LlmChain, workers: usize) -> Vec<Result<LlmRewrite, LlmFailure>> {
    par::map_ordered(docs, workers, |doc| llm_pseudonymize(doc, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::mock::MockEndpoint;
    use crate::llm::prompt::{NER_EXAMPLE_ANSWER, NER_EXAMPLE_TEXT};

    fn chain(yaml: &str) -> LlmChain {
        LlmChain::single(Arc::new(MockEndpoint::from_yaml(yaml).unwrap()))
    }

    const TABLE5: &str = r#"
rules:
  - match: "Find all the locations"
    response: "Daniel, Google, America, France, Emma, Danone, Paris."
  - match: "Daniel, Google"
    response: "Lukas, Microsoft, Canada, Spain, Olivia, Nestle, Madrid"
"#;

    #[test]
    fn replaces_every_mention_consistently() {
        let doc = Document::new("t5", NER_EXAMPLE_TEXT);
        let out = llm_pseudonymize(&doc, &chain(TABLE5)).unwrap();
        assert_eq!(
            out.text,
            "Lukas worked in Microsoft for five years before moving from Canada to Spain. \
Lukas is now working with Olivia in Nestle and living in Madrid."
        );
        assert_eq!(out.replacements.len(), 8);
        assert_eq!(out.diagnostics.extracted.len(), 7);
        for r in &out.replacements {
            assert_eq!(text::char_slice(&out.text, r.start, r.end), Some(r.surrogate.as_str()));
        }
    }

    #[test]
    fn blank_extraction_leaves_text_alone() {
        let doc = Document::new("x", "the weather is nice");
        let out = llm_pseudonymize(&doc, &chain("default: \"\"\n")).unwrap();
        assert_eq!(out.text, doc.text);
        assert!(out.replacements.is_empty());
    }

    #[test]
    fn hallucinated_surface_is_logged_not_spliced() {
        let yaml = r#"
rules:
  - match: "Find all"
    response: "Emma, Atlantis."
  - match: "Emma"
    response: "Sophie, Lemuria"
"#;
        let doc = Document::new("h", "Emma went home.");
        let out = llm_pseudonymize(&doc, &chain(yaml)).unwrap();
        assert_eq!(out.text, "Sophie went home.");
        assert_eq!(out.diagnostics.unmatched, vec!["Atlantis".to_string()]);
    }

    #[test]
    fn longest_surface_is_spliced_first() {
        let yaml = r#"
rules:
  - match: "Find all"
    response: "York, New York."
  - match: "York, New York"
    response: "Leeds, Boston"
"#;
        let doc = Document::new("ny", "New York is not York.");
        let out = llm_pseudonymize(&doc, &chain(yaml)).unwrap();
        assert_eq!(out.text, "Boston is not Leeds.");
    }

    #[test]
    fn mismatch_retries_then_fails() {
        let yaml = r#"
rules:
  - match: "Find all"
    response: "A1, B2."
  - match: "A1"
    response: "X"
"#;
        let mock = Arc::new(MockEndpoint::from_yaml(yaml).unwrap());
        let mut chain = LlmChain::single(mock.clone());
        chain.alignment_retries = 2;
        let err = llm_pseudonymize(&Document::new("m", "A1 and B2"), &chain).unwrap_err();
        assert!(matches!(err.error, LlmError::Alignment { .. }));
        assert_eq!(err.diagnostics.stage2_attempts, 3);
        assert_eq!(mock.calls(), 4);
    }

    #[test]
    fn surrogate_reintroducing_a_source_is_rejected() {
        let yaml = r#"
rules:
  - match: "Find all"
    response: "Daniel, Emma."
  - match: "Daniel, Emma"
    response: "Emma, Sophie"
"#;
        let err = llm_pseudonymize(&Document::new("c", "Daniel met Emma."), &chain(yaml)).unwrap_err();
        assert_eq!(err.error, LlmError::SurrogateCollision { surface: "Emma".into() });
    }

    #[test]
    fn identity_mock_is_a_no_op() {
        let yaml = format!(
            "rules:\n  - match: \"Find all\"\n    response: \"{NER_EXAMPLE_ANSWER}\"\n  - match: \"\"\n    echo: true\n"
        );
        let doc = Document::new("id", NER_EXAMPLE_TEXT);
        let out = llm_pseudonymize(&doc, &chain(&yaml)).unwrap();
        assert_eq!(out.text, doc.text);
        assert_eq!(out.diagnostics.self_replacements.len(), 7);
    }

    #[test]
    fn transport_failure_marks_document_failed() {
        let err = llm_pseudonymize(&Document::new("t", "x"), &chain("rules: []\n")).unwrap_err();
        assert!(matches!(err.error, LlmError::Transport(_)));
    }
}
