// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Document, DocumentError, EntitySpan, SpanError};

/// On-disk shape of a document line.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRecord {
    id: String,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entities: Option<Vec<EntitySpan>>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonlError {
    #[error("line {line}: invalid JSON: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: field `{field}`: {message}")]
    Schema { line: usize, field: String, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

fn schema_error(line: usize, err: DocumentError) -> JsonlError {
    let (field, message) = match &err {
        DocumentError::EmptyId => ("id".to_string(), err.to_string()),
        DocumentError::Span(span) => {
            let (index, field) = match span {
                SpanError::EmptyRange { index, .. } => (index, "start"),
                SpanError::OutOfRange { index, .. } => (index, "end"),
                SpanError::SurfaceMismatch { index, .. } => (index, "surface"),
                SpanError::Unordered { index } => (index, "start"),
            };
            (format!("entities[{index}].{field}"), span.to_string())
        }
    };
    JsonlError::Schema { line, field, message }
}

/// Read one document per line. Blank lines are skipped; line numbers are 1-based.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<Document>, JsonlError> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: DocumentRecord =
            serde_json::from_str(&line).map_err(|source| JsonlError::Json { line: line_no, source })?;
        let doc = Document { id: record.id, text: record.text, gold_spans: record.entities };
        doc.validate().map_err(|e| schema_error(line_no, e))?;
        if !seen.insert(doc.id.clone()) {
            return Err(JsonlError::Schema {
                line: line_no,
                field: "id".into(),
                message: format!("duplicate document id {:?}", doc.id),
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

/// Write documents in normalized field order (`id`, `text`, `entities`).
pub fn write_jsonl<W: Write>(docs: &[Document], mut writer: W) -> io::Result<()> {
    for doc in docs {
        let record = DocumentRecord {
            id: doc.id.clone(),
            text: doc.text.clone(),
            entities: doc.gold_spans.clone(),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::EntityCategory;

    #[test]
    fn reads_minimal_document() {
        let docs = read_jsonl(r#"{"id":"d1","text":"hi"}"#.as_bytes()).unwrap();
        assert_eq!(docs, vec![Document::new("d1", "hi")]);
    }

    #[test]
    fn surface_mismatch_names_line_and_field() {
        let raw = concat!(
            "{\"id\":\"a\",\"text\":\"ok\"}\n",
            "{\"id\":\"b\",\"text\":\"Sarah runs\",\"entities\":[{\"start\":0,\"end\":5,\"category\":\"PER\",\"surface\":\"Sally\"}]}\n"
        );
        match read_jsonl(raw.as_bytes()) {
            Err(JsonlError::Schema { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "entities[0].surface");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_json_and_unknown_fields_are_rejected() {
        assert!(matches!(read_jsonl("{\"id\":".as_bytes()), Err(JsonlError::Json { line: 1, .. })));
        let raw = r#"{"id":"a","text":"x","extra":1}"#;
        assert!(matches!(read_jsonl(raw.as_bytes()), Err(JsonlError::Json { line: 1, .. })));
        let raw = r#"{"id":"a","text":"x","entities":[{"start":0,"end":1,"category":"MISC","surface":"x"}]}"#;
        assert!(read_jsonl(raw.as_bytes()).is_err());
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let raw = "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n";
        assert!(matches!(read_jsonl(raw.as_bytes()), Err(JsonlError::Schema { line: 2, .. })));
    }

    #[test]
    fn three_document_fixture_roundtrips_byte_identically() {
        // Field order and whitespace vary in the input; the normalized form is stable.
        let raw = concat!(
            "{\"text\": \"Sarah works at The Times.\", \"id\": \"t1\", \"entities\": [",
            "{\"surface\": \"Sarah\", \"start\": 0, \"end\": 5, \"category\": \"PER\"},",
            "{\"category\": \"ORG\", \"start\": 15, \"end\": 24, \"surface\": \"The Times\"}]}\n",
            "\n",
            "{\"id\": \"t2\", \"text\": \"no entities here\"}\n",
            "{\"id\": \"t3\", \"text\": \"Köln \\t tab\", \"entities\": []}\n",
        );
        let docs = read_jsonl(raw.as_bytes()).unwrap();
        assert_eq!(docs.len(), 3);
        assert_eq!(docs[0].gold_spans.as_ref().unwrap()[1].category, EntityCategory::Organization);

        let mut once = Vec::new();
        write_jsonl(&docs, &mut once).unwrap();
        let reread = read_jsonl(once.as_slice()).unwrap();
        assert_eq!(reread, docs);
        let mut twice = Vec::new();
        write_jsonl(&reread, &mut twice).unwrap();
        assert_eq!(once, twice);
        assert!(String::from_utf8(once).unwrap().starts_with(
            "{\"id\":\"t1\",\"text\":\"Sarah works at The Times.\",\"entities\":[{\"start\":0,\"end\":5,"
        ));
    }
}
