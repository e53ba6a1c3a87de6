// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Surrogate selection: leaf match, sibling traversal, attribute filtering
//! with a relaxation ladder, then uniform sampling.

use std::collections::BTreeSet;

use rand::Rng;

use crate::corpus::EntityCategory;
use crate::text;

use super::{attribute_keys, KgNode, KnowledgeGraph};

/// Every eligible candidate had the original's own label.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no surrogate distinct from {original:?}")]
pub struct NoSurrogate {
    pub original: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurrogateError {
    #[error("no {category} node labelled {surface:?}")]
    NoLeaf { surface: String, category: EntityCategory },
    #[error(transparent)]
    NoSurrogate(#[from] NoSurrogate),
}

/// The node matching `surface` (case-folded) in `category`.
///
/// Ties go to the node with the most membership parents, then the smallest id.
pub fn find_leaf<'g>(kg: &'g KnowledgeGraph, surface: &str, category: EntityCategory) -> Option<&'g KgNode> {
    if surface.is_empty() {
        return None;
    }
    kg.ids_for_label(surface)
        .iter()
        .filter_map(|id| kg.node(id))
        .filter(|n| n.category == category)
        .max_by(|a, b| {
            let pa = kg.parents_of(&a.id).count();
            let pb = kg.parents_of(&b.id).count();
            // ids ascending, so reverse the id comparison inside max_by
            pa.cmp(&pb).then_with(|| b.id.cmp(&a.id))
        })
}

/// Same-category nodes sharing at least one membership parent with `leaf`,
/// sorted by id. One hop up, one hop down.
pub fn candidate_set<'g>(kg: &'g KnowledgeGraph, leaf: &KgNode) -> Vec<&'g KgNode> {
    let ids: BTreeSet<&str> = kg
        .parents_of(&leaf.id)
        .flat_map(|parent| kg.children_of(parent))
        .filter(|&id| id != leaf.id)
        .collect();
    ids.into_iter().filter_map(|id| kg.node(id)).filter(|n| n.category == leaf.category).collect()
}

fn matches_on(candidate: &KgNode, leaf: &KgNode, keys: &[&str]) -> bool {
    keys.iter().all(|key| match (candidate.attr(key), leaf.attr(key)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    })
}

/// Keep candidates whose category attributes equal the leaf's.
///
/// If nothing survives, the second key is dropped, then all filtering, so the
/// result is empty only when `candidates` is.
pub fn filter_candidates<'g>(candidates: &[&'g KgNode], leaf: &KgNode) -> Vec<&'g KgNode> {
    let keys = attribute_keys(leaf.category);
    for depth in (0..=keys.len()).rev() {
        let active = &keys[..depth];
        let kept: Vec<&KgNode> = candidates.iter().copied().filter(|c| matches_on(c, leaf, active)).collect();
        if !kept.is_empty() || depth == 0 {
            return kept;
        }
    }
    unreachable!("depth 0 always returns")
}

/// Label of a uniformly drawn node, never equal (case-insensitively) to the original.
pub fn sample_replacement<R: Rng + ?Sized>(
    filtered: &[&KgNode],
    original_surface: &str,
    rng: &mut R,
) -> Result<String, NoSurrogate> {
    let original = text::fold(original_surface);
    let pool: Vec<&KgNode> = filtered.iter().copied().filter(|n| text::fold(&n.label) != original).collect();
    if pool.is_empty() {
        return Err(NoSurrogate { original: original_surface.to_string() });
    }
    Ok(pool[rng.gen_range(0..pool.len())].label.clone())
}

/// The whole chain for one mention.
pub fn surrogate_for<R: Rng + ?Sized>(
    kg: &KnowledgeGraph,
    surface: &str,
    category: EntityCategory,
    rng: &mut R,
) -> Result<String, SurrogateError> {
    let leaf = find_leaf(kg, surface, category)
        .ok_or_else(|| SurrogateError::NoLeaf { surface: surface.to_string(), category })?;
    let candidates = candidate_set(kg, leaf);
    let filtered = filter_candidates(&candidates, leaf);
    Ok(sample_replacement(&filtered, surface, rng)?)
}
