// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Synthetic annotated documents built from sentence templates whose slots
//! are filled with leaf labels of a knowledge graph.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Document, EntityCategory, EntitySpan};
use crate::kg::{KgNode, KnowledgeGraph};

const TEMPLATES: &[&str] = &[
    "{PER} works at {ORG} in {LOC}.",
    "{PER} met {PER} at an {ORG} office in {LOC} last week.",
    "After leaving {ORG}, {PER} moved to {LOC}.",
    "{ORG} opened a new branch in {LOC}, according to {PER}.",
    "{PER} and {PER} travelled from {LOC} to {LOC}.",
    "A spokesperson for {ORG} said {PER} would visit {LOC} in the spring.",
    "{PER} has lived in {LOC} since joining {ORG}.",
    "Reporters from {ORG} interviewed {PER} about the floods in {LOC}.",
    "{PER} called {PER} from {LOC} to discuss a merger with {ORG}.",
    "The weather in {LOC} delayed the flight {PER} had booked.",
    "{ORG} and {ORG} signed an agreement in {LOC}.",
    "{PER} thanked {ORG} for its support during the year in {LOC}.",
    "Nobody in {LOC} expected {PER} to win.",
    "The board of {ORG} appointed {PER} as chair.",
];

fn slot(token: &str) -> Option<(EntityCategory, usize)> {
    [("{PER}", EntityCategory::Person), ("{LOC}", EntityCategory::Location), ("{ORG}", EntityCategory::Organization)]
        .into_iter()
        .find(|(tag, _)| token.starts_with(tag))
        .map(|(tag, cat)| (cat, tag.len()))
}

/// Leaf nodes (at least one parent, no children) of each category, sorted by id.
pub fn leaves(kg: &KnowledgeGraph, category: EntityCategory) -> Vec<&KgNode> {
    kg.nodes()
        .filter(|n| n.category == category)
        .filter(|n| kg.parents_of(&n.id).next().is_some() && kg.children_of(&n.id).next().is_none())
        .collect()
}

/// `n_docs` documents of two or three template sentences with exact gold spans.
///
/// Ids are `fx-<i>`. Panics if the KG has no leaf for some category.
pub fn template_corpus(kg: &KnowledgeGraph, n_docs: usize, seed: u64) -> Vec<Document> {
    let pools: Vec<Vec<&str>> = EntityCategory::ALL
        .iter()
        .map(|&c| {
            let labels: Vec<&str> = leaves(kg, c).into_iter().map(|n| n.label.as_str()).collect();
            assert!(!labels.is_empty(), "knowledge graph has no {c} leaves");
            labels
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_docs)
        .map(|i| {
            let mut text = String::new();
            let mut len = 0;
            let mut spans = Vec::new();
            for s in 0..rng.gen_range(2..=3) {
                if s > 0 {
                    text.push(' ');
                    len += 1;
                }
                let mut rest = *TEMPLATES.choose(&mut rng).expect("templates");
                while let Some(at) = rest.find('{') {
                    let head = &rest[..at];
                    text.push_str(head);
                    len += head.chars().count();
                    let (category, width) = slot(&rest[at..]).expect("known slot");
                    let pool = &pools[EntityCategory::ALL.iter().position(|&c| c == category).expect("listed")];
                    let label = pool[rng.gen_range(0..pool.len())];
                    let n = label.chars().count();
                    spans.push(EntitySpan::new(len, len + n, category, label));
                    text.push_str(label);
                    len += n;
                    rest = &rest[at + width..];
                }
                text.push_str(rest);
                len += rest.chars().count();
            }
            Document::new(format!("fx-{i}"), text).with_gold(spans)
        })
        .collect()
}
