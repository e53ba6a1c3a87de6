// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::io::BufRead;

use aho_corasick::{AhoCorasick, MatchKind};

use crate::corpus::{EntityCategory, EntitySpan};
use crate::text;

use super::resolve_overlaps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchPolicy {
    pub case_sensitive: bool,
    pub word_boundary: bool,
}

impl Default for MatchPolicy {
    fn default() -> Self {
        Self { case_sensitive: true, word_boundary: true }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GazetteerError {
    #[error("line {line}: empty surface")]
    EmptySurface { line: usize },
    #[error("line {line}: {surface:?} is listed as both {first} and {second}")]
    Conflict { line: usize, surface: String, first: EntityCategory, second: EntityCategory },
    #[error("line {line}: expected `surface<TAB>CATEGORY`")]
    Format { line: usize },
    #[error("line {line}: {source}")]
    Category { line: usize, source: crate::corpus::UnknownCategory },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to build matcher: {0}")]
    Build(#[from] aho_corasick::BuildError),
}

/// A surface → category lexicon with a compiled multi-pattern matcher.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    entries: BTreeMap<String, EntityCategory>,
    policy: MatchPolicy,
    // pattern i of the automaton is the i-th key of `keys`
    keys: Vec<(String, EntityCategory)>,
    automaton: AhoCorasick,
}

impl Gazetteer {
    /// Build from `(surface, category)` pairs; `line` in errors is the 1-based
    /// position of the pair in the input.
    pub fn new<I, S>(entries: I, policy: MatchPolicy) -> Result<Self, GazetteerError>
    where
        I: IntoIterator<Item = (S, EntityCategory)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        let mut folded: BTreeMap<String, EntityCategory> = BTreeMap::new();
        for (idx, (surface, category)) in entries.into_iter().enumerate() {
            let surface = surface.into();
            Self::insert(&mut map, &mut folded, policy, idx + 1, surface, category)?;
        }
        Self::compile(map, folded, policy)
    }

    fn insert(
        map: &mut BTreeMap<String, EntityCategory>,
        folded: &mut BTreeMap<String, EntityCategory>,
        policy: MatchPolicy,
        line: usize,
        surface: String,
        category: EntityCategory,
    ) -> Result<(), GazetteerError> {
        if surface.is_empty() {
            return Err(GazetteerError::EmptySurface { line });
        }
        let key = if policy.case_sensitive { surface.clone() } else { text::fold(&surface) };
        if let Some(&first) = folded.get(&key) {
            if first != category {
                return Err(GazetteerError::Conflict { line, surface, first, second: category });
            }
        }
        folded.insert(key, category);
        map.insert(surface, category);
        Ok(())
    }

    fn compile(
        entries: BTreeMap<String, EntityCategory>,
        folded: BTreeMap<String, EntityCategory>,
        policy: MatchPolicy,
    ) -> Result<Self, GazetteerError> {
        let keys: Vec<(String, EntityCategory)> = folded.into_iter().collect();
        let automaton = AhoCorasick::builder()
            .match_kind(MatchKind::Standard)
            .build(keys.iter().map(|(k, _)| k.as_str()))?;
        Ok(Self { entries, policy, keys, automaton })
    }

    /// Read a lexicon: one `surface<TAB>CATEGORY` per line; blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_tsv<R: BufRead>(reader: R, policy: MatchPolicy) -> Result<Self, GazetteerError> {
        let mut map = BTreeMap::new();
        let mut folded = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (surface, category) = line.rsplit_once('\t').ok_or(GazetteerError::Format { line: line_no })?;
            let category = category
                .trim()
                .parse()
                .map_err(|source| GazetteerError::Category { line: line_no, source })?;
            Self::insert(&mut map, &mut folded, policy, line_no, surface.to_string(), category)?;
        }
        Self::compile(map, folded, policy)
    }

    pub fn entries(&self) -> &BTreeMap<String, EntityCategory> {
        &self.entries
    }

    pub fn policy(&self) -> MatchPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All occurrences of lexicon surfaces in `text` honouring the match policy.
///
/// Overlapping hits are resolved with [`resolve_overlaps`], so a longer entry
/// shadows any shorter one it overlaps.
pub fn gazetteer_match(text: &str, gazetteer: &Gazetteer) -> Vec<EntitySpan> {
    if text.is_empty() || gazetteer.keys.is_empty() {
        return Vec::new();
    }
    let searched = if gazetteer.policy.case_sensitive { text.to_string() } else { text::fold(text) };
    let mut byte_to_char = vec![0usize; searched.len() + 1];
    let mut n_chars = 0;
    for (ci, (bi, _)) in searched.char_indices().enumerate() {
        byte_to_char[bi] = ci;
        n_chars = ci + 1;
    }
    byte_to_char[searched.len()] = n_chars;
    let chars: Vec<char> = text.chars().collect();

    let hits = gazetteer.automaton.find_overlapping_iter(&searched).filter_map(|m| {
        let start = byte_to_char[m.start()];
        let end = byte_to_char[m.end()];
        if gazetteer.policy.word_boundary && !text::at_word_boundary(&chars, start, end) {
            return None;
        }
        let category = gazetteer.keys[m.pattern().as_usize()].1;
        let surface: String = chars[start..end].iter().collect();
        Some(EntitySpan::new(start, end, category, surface))
    });
    resolve_overlaps(hits.collect())
}
