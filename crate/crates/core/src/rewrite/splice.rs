// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::corpus::{validate_spans, EntitySpan, SpanError};
use crate::text;

/// Splice each surrogate over its span.
///
/// Text outside the spans is copied unchanged. The returned spans locate the
/// surrogates in the new text, shifted by the cumulative length change of
/// the replacements before them.
pub fn apply_replacements(
    source: &str,
    assignments: &[(EntitySpan, String)],
) -> Result<(String, Vec<EntitySpan>), SpanError> {
    let spans: Vec<EntitySpan> = assignments.iter().map(|(s, _)| s.clone()).collect();
    validate_spans(source, &spans)?;

    let ranges: Vec<(usize, usize, &str)> =
        assignments.iter().map(|(s, t)| (s.start, s.end, t.as_str())).collect();
    let (out, located) = splice_ranges(source, &ranges);
    let new_spans = assignments
        .iter()
        .zip(located)
        .map(|((span, surrogate), (start, end))| EntitySpan::new(start, end, span.category, surrogate.clone()))
        .collect();
    Ok((out, new_spans))
}

/// Splice over char ranges that are already known to be sorted, disjoint and
/// in bounds. Returns the new text and each replacement's new char range.
pub(crate) fn splice_ranges(source: &str, ranges: &[(usize, usize, &str)]) -> (String, Vec<(usize, usize)>) {
    let bounds = text::char_boundaries(source);
    let mut out = String::with_capacity(source.len());
    let mut located = Vec::with_capacity(ranges.len());
    let mut cursor = 0usize;
    let mut delta: isize = 0;
    for &(start, end, replacement) in ranges {
        out.push_str(&source[bounds[cursor]..bounds[start]]);
        out.push_str(replacement);
        let replacement_len = text::char_len(replacement);
        let new_start = (start as isize + delta) as usize;
        located.push((new_start, new_start + replacement_len));
        delta += replacement_len as isize - (end - start) as isize;
        cursor = end;
    }
    out.push_str(&source[bounds[cursor]..]);
    (out, located)
}
