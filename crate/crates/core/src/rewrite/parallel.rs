// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Aligned (original, pseudonymized) pairs for training sequence-to-sequence
//! pseudonymizers.

use std::io::{self, Write};

use crate::corpus::Document;
use crate::detect::Detector;
use crate::kg::KnowledgeGraph;

use super::batch::{rewrite_corpus, BatchOptions, DocFailure};
use super::RewriteMode;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pub pairs: Vec<(String, String)>,
    pub failures: Vec<DocFailure>,
}

#[derive(Debug, thiserror::Error)]
#[error("all {} documents failed; first: {}", .0.len(), .0.first().map(|f| f.error.as_str()).unwrap_or(""))]
pub struct AllFailed(pub Vec<DocFailure>);

/// One pair per document that could be processed, in input order.
///
/// Per-document failures are collected and skipped; the call fails only if
/// every document failed.
pub fn generate_parallel_corpus(
    docs: &[Document],
    detector: &Detector,
    kg: &KnowledgeGraph,
    seed: u64,
    workers: usize,
) -> Result<ParallelCorpus, AllFailed> {
    let options = BatchOptions { seed, workers, ..BatchOptions::default() };
    let (results, _) = rewrite_corpus(docs, detector, RewriteMode::Pseudonymize, Some(kg), options);
    let mut corpus = ParallelCorpus::default();
    for (doc, result) in docs.iter().zip(results) {
        match result {
            Ok(rewritten) => corpus.pairs.push((doc.text.clone(), rewritten.text)),
            Err(failure) => corpus.failures.push(failure),
        }
    }
    if !docs.is_empty() && corpus.pairs.is_empty() {
        return Err(AllFailed(corpus.failures));
    }
    Ok(corpus)
}

/// Escape backslash, tab, newline and carriage return for a TSV field.
pub fn escape_tsv_field(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_tsv_field(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// `original<TAB>pseudonymized`, one pair per line.
pub fn write_parallel_tsv<W: Write>(pairs: &[(String, String)], mut writer: W) -> io::Result<()> {
    for (source, target) in pairs {
        writeln!(writer, "{}\t{}", escape_tsv_field(source), escape_tsv_field(target))?;
    }
    writer.flush()
}
