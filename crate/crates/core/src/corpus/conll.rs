// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! CoNLL-2003 reader and BIO2 writer.
//!
//! Tokens are joined with single spaces and sentences with `\n`; the original
//! whitespace of the source is not preserved. IOB1 and BIO2 inputs both
//! decode to the same spans. MISC entities are dropped.

use std::io::{self, BufRead, Write};

use super::{Document, EntityCategory, EntitySpan};

const DOCSTART: &str = "-DOCSTART-";

#[derive(Debug, thiserror::Error)]
pub enum ConllError {
    #[error("line {line}: expected 4 whitespace-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: unknown NE tag {tag:?}")]
    UnknownTag { line: usize, tag: String },
    #[error("document {id:?}: span {start}..{end} is not aligned to token boundaries")]
    Unaligned { id: String, start: usize, end: usize },
    #[error("document {id:?}: text contains an empty token")]
    EmptyToken { id: String },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

/// Entity type of a tag; `None` stands for MISC, which is parsed but dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NeType {
    Kept(EntityCategory),
    Misc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Outside,
    Begin(NeType),
    Inside(NeType),
}

fn parse_tag(raw: &str) -> Option<Tag> {
    if raw == "O" {
        return Some(Tag::Outside);
    }
    let (prefix, ty) = raw.split_once('-')?;
    let ty = match ty {
        "PER" => NeType::Kept(EntityCategory::Person),
        "LOC" => NeType::Kept(EntityCategory::Location),
        "ORG" => NeType::Kept(EntityCategory::Organization),
        "MISC" => NeType::Misc,
        _ => return None,
    };
    match prefix {
        "B" => Some(Tag::Begin(ty)),
        "I" => Some(Tag::Inside(ty)),
        _ => None,
    }
}

#[derive(Default)]
struct DocBuilder {
    text: String,
    chars: usize,
    spans: Vec<EntitySpan>,
    sentence_open: bool,
    tokens: usize,
    // (type, start char) of the run being accumulated
    run: Option<(NeType, usize)>,
    run_end: usize,
}

impl DocBuilder {
    fn close_run(&mut self) {
        if let Some((NeType::Kept(category), start)) = self.run.take() {
            let surface: String = self.text.chars().skip(start).take(self.run_end - start).collect();
            self.spans.push(EntitySpan::new(start, self.run_end, category, surface));
        }
        self.run = None;
    }

    fn end_sentence(&mut self) {
        self.close_run();
        self.sentence_open = false;
    }

    fn push_token(&mut self, token: &str, tag: Tag) {
        if self.sentence_open {
            self.text.push(' ');
            self.chars += 1;
        } else if self.tokens > 0 {
            self.text.push('\n');
            self.chars += 1;
        }
        self.sentence_open = true;
        let start = self.chars;
        self.text.push_str(token);
        self.chars += token.chars().count();
        self.tokens += 1;

        // One rule covers both schemes: I-X continues a run of X, anything
        // else closes it; B-X, or I-X after a different type, opens a new one.
        match tag {
            Tag::Outside => self.close_run(),
            Tag::Begin(ty) => {
                self.close_run();
                self.run = Some((ty, start));
            }
            Tag::Inside(ty) => match self.run {
                Some((current, _)) if current == ty => {}
                _ => {
                    self.close_run();
                    self.run = Some((ty, start));
                }
            },
        }
        self.run_end = self.chars;
    }

    fn finish(mut self, id: String) -> Option<Document> {
        self.end_sentence();
        (self.tokens > 0).then_some(Document { id, text: self.text, gold_spans: Some(self.spans) })
    }
}

/// Parse a CoNLL-2003 stream into documents with gold PER/LOC/ORG spans.
///
/// Documents are split at `-DOCSTART-` lines and named `conll-<n>` (1-based,
/// counting only non-empty documents). Without any `-DOCSTART-` the whole
/// stream is one document.
pub fn parse_conll<R: BufRead>(reader: R) -> Result<Vec<Document>, ConllError> {
    let mut docs = Vec::new();
    let mut current = DocBuilder::default();
    let flush = |builder: DocBuilder, docs: &mut Vec<Document>| {
        if let Some(doc) = builder.finish(format!("conll-{}", docs.len() + 1)) {
            docs.push(doc);
        }
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            current.end_sentence();
            continue;
        }
        if cols[0] == DOCSTART {
            flush(std::mem::take(&mut current), &mut docs);
            continue;
        }
        if cols.len() != 4 {
            return Err(ConllError::Columns { line: line_no, found: cols.len() });
        }
        let tag = parse_tag(cols[3])
            .ok_or_else(|| ConllError::UnknownTag { line: line_no, tag: cols[3].to_string() })?;
        current.push_token(cols[0], tag);
    }
    flush(current, &mut docs);
    Ok(docs)
}

fn unaligned(doc: &Document, span: &EntitySpan) -> ConllError {
    ConllError::Unaligned { id: doc.id.clone(), start: span.start, end: span.end }
}

/// Char offsets where a token starts or ends.
fn token_edges(text: &str) -> std::collections::HashSet<usize> {
    let mut edges = std::collections::HashSet::new();
    let mut start = 0;
    for (i, c) in text.chars().chain(std::iter::once('\n')).enumerate() {
        if c == ' ' || c == '\n' {
            edges.insert(start);
            edges.insert(i);
            start = i + 1;
        }
    }
    edges
}

/// Write documents as 4-column CoNLL with BIO2 tags.
///
/// POS and chunk columns are written as `_`. Every gold span must cover whole
/// tokens of the space/newline-tokenized text.
pub fn write_conll<W: Write>(docs: &[Document], mut writer: W) -> Result<(), ConllError> {
    for doc in docs {
        writeln!(writer, "{DOCSTART} -X- -X- O")?;
        writeln!(writer)?;
        let spans = doc.gold_spans.as_deref().unwrap_or_default();
        let mut next = 0usize;
        let mut pos = 0usize;
        for sentence in doc.text.split('\n') {
            for token in sentence.split(' ') {
                if token.is_empty() {
                    return Err(ConllError::EmptyToken { id: doc.id.clone() });
                }
                let start = pos;
                let end = start + token.chars().count();
                pos = end + 1;
                while next < spans.len() && spans[next].end <= start {
                    next += 1;
                }
                let tag = match spans.get(next) {
                    Some(span) if span.start < end => {
                        if span.start > start || span.end < end {
                            return Err(unaligned(doc, span));
                        }
                        let prefix = if span.start == start { "B" } else { "I" };
                        format!("{prefix}-{}", span.category.tag())
                    }
                    _ => "O".to_string(),
                };
                writeln!(writer, "{token} _ _ {tag}")?;
            }
            writeln!(writer)?;
        }
        // A span must start and end on token edges, never on a separator.
        let bounds: std::collections::HashSet<usize> = token_edges(&doc.text);
        if let Some(span) = spans.iter().find(|s| !bounds.contains(&s.start) || !bounds.contains(&s.end)) {
            return Err(unaligned(doc, span));
        }
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::EntityCategory::*;

    fn parse(raw: &str) -> Vec<Document> {
        parse_conll(raw.as_bytes()).unwrap()
    }

    #[test]
    fn single_entity_sentence() {
        let docs = parse("John NNP B-NP B-PER\nruns VBZ B-VP O\n");
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].text, "John runs");
        assert_eq!(docs[0].gold_spans, Some(vec![EntitySpan::new(0, 4, Person, "John")]));
    }

    #[test]
    fn multi_token_org_after_docstart() {
        let raw = "-DOCSTART- -X- -X- O\n\nIt PRP B-NP O\nworks VBZ B-VP O\n\nAcme NNP B-NP B-ORG\nCorp NNP I-NP I-ORG\nhires VBZ B-VP O\n";
        let docs = parse(raw);
        assert_eq!(docs[0].text, "It works\nAcme Corp hires");
        assert_eq!(docs[0].gold_spans, Some(vec![EntitySpan::new(9, 18, Organization, "Acme Corp")]));
    }

    #[test]
    fn misc_runs_are_dropped() {
        let docs = parse("German JJ B-NP B-MISC\ncall NN I-NP O\n");
        assert_eq!(docs[0].gold_spans, Some(vec![]));
    }

    #[test]
    fn iob1_and_bio2_agree() {
        // IOB1 uses B- only between adjacent same-type entities.
        let iob1 = "Paris NNP B-NP I-LOC\nBerlin NNP I-NP B-LOC\nand CC O O\nRome NNP B-NP I-LOC\n";
        let bio2 = "Paris NNP B-NP B-LOC\nBerlin NNP I-NP B-LOC\nand CC O O\nRome NNP B-NP B-LOC\n";
        assert_eq!(parse(iob1), parse(bio2));
        assert_eq!(parse(iob1)[0].gold_spans.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn type_change_inside_run_starts_new_entity() {
        let docs = parse("Acme NNP B-NP I-ORG\nLondon NNP I-NP I-LOC\n");
        let spans = docs[0].gold_spans.clone().unwrap();
        assert_eq!(spans, vec![
            EntitySpan::new(0, 4, Organization, "Acme"),
            EntitySpan::new(5, 11, Location, "London"),
        ]);
    }

    #[test]
    fn entities_do_not_cross_sentences() {
        let docs = parse("Acme NNP B-NP I-ORG\n\nCorp NNP I-NP I-ORG\n");
        assert_eq!(docs[0].gold_spans.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_conll("ok NN O O\nbad line\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ConllError::Columns { line: 2, found: 2 }));
        let err = parse_conll("x NN O B-FOO\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ConllError::UnknownTag { line: 1, .. }));
        let err = parse_conll("x NN O E-PER\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ConllError::UnknownTag { .. }));
    }

    #[test]
    fn empty_documents_are_skipped() {
        let raw = "-DOCSTART- -X- -X- O\n\n-DOCSTART- -X- -X- O\n\nA DT O O\n";
        let docs = parse(raw);
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].id, "conll-1");
    }

    #[test]
    fn writer_rejects_unaligned_spans() {
        let doc = Document::new("d", "New York").with_gold(vec![EntitySpan::new(0, 2, Location, "Ne")]);
        assert!(matches!(write_conll(&[doc], Vec::new()), Err(ConllError::Unaligned { .. })));
    }
}
