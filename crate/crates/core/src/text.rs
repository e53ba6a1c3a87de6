// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Character-offset helpers shared by the span-handling modules.

/// Byte offset of every char boundary in `text`, plus `text.len()` at the end.
///
/// `offsets[i]` is the byte position of the `i`-th Unicode scalar value, so a
/// char range `[start, end)` maps to `&text[offsets[start]..offsets[end]]`.
pub fn char_boundaries(text: &str) -> Vec<usize> {
    let mut offsets: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
    offsets.push(text.len());
    offsets
}

/// Number of Unicode scalar values in `text`.
pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Slice `text` by char offsets. Returns `None` when the range is invalid.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut iter = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
    let from = iter.nth(start)?;
    let to = if end == start { from } else { iter.nth(end - start - 1)? };
    Some(&text[from..to])
}

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Simple per-character case fold that never changes the char count.
///
/// Multi-char lowercase expansions keep only their first char, so offsets
/// computed on folded text are valid on the original.
pub fn fold_char(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

pub fn fold(text: &str) -> String {
    text.chars().map(fold_char).collect()
}

/// True when the char range `[start, end)` of `chars` is not glued to a word
/// character on either side.
pub fn at_word_boundary(chars: &[char], start: usize, end: usize) -> bool {
    let left_ok = start == 0 || !is_word_char(chars[start - 1]);
    let right_ok = end >= chars.len() || !is_word_char(chars[end]);
    left_ok && right_ok
}

/// Every word-bounded occurrence of `needle` in `haystack`, as char ranges.
///
/// Occurrences may overlap each other. An empty needle never matches.
pub fn find_word_bounded(haystack: &str, needle: &str, fold_case: bool) -> Vec<(usize, usize)> {
    if needle.is_empty() {
        return Vec::new();
    }
    let (hay, pat): (Vec<char>, Vec<char>) = if fold_case {
        (haystack.chars().map(fold_char).collect(), needle.chars().map(fold_char).collect())
    } else {
        (haystack.chars().collect(), needle.chars().collect())
    };
    if pat.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - pat.len())
        .filter(|&i| hay[i..i + pat.len()] == pat[..])
        .filter(|&i| at_word_boundary(&hay, i, i + pat.len()))
        .map(|i| (i, i + pat.len()))
        .collect()
}

/// True when `needle` occurs in `haystack` as a word-bounded substring.
pub fn contains_word_bounded(haystack: &str, needle: &str, fold_case: bool) -> bool {
    if needle.is_empty() {
        return false;
    }
    if fold_case {
        return !find_word_bounded(haystack, needle, true).is_empty();
    }
    // Fast path: byte search, then boundary check on the neighbouring chars.
    let mut from = 0;
    while let Some(pos) = haystack[from..].find(needle) {
        let at = from + pos;
        let end = at + needle.len();
        let left_ok = haystack[..at].chars().next_back().is_none_or(|c| !is_word_char(c));
        let right_ok = haystack[end..].chars().next().is_none_or(|c| !is_word_char(c));
        if left_ok && right_ok {
            return true;
        }
        from = at + haystack[at..].chars().next().map_or(1, char::len_utf8);
    }
    false
}
