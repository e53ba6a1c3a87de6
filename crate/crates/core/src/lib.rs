// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! # pseudokit
//!
//! Rewrites text corpora by detecting person, location and organization
//! mentions and replacing them, either with realistic surrogates drawn from a
//! knowledge graph (pseudonymization) or with enumerated placeholders such as
//! `PERSON_1` (sanitization).
//!
//! - [`corpus`]: documents, entity spans, JSONL and CoNLL-2003 I/O
//! - [`detect`]: oracle, gazetteer and external-process detectors
//! - [`kg`]: knowledge-graph loading and surrogate candidate generation
//! - [`rewrite`]: sanitize / pseudonymize, offset-tracked splicing, parallel corpora
//! - [`llm`]: two-stage prompt chain against a chat-completions endpoint or a mock
//! - [`eval`]: leakage (false negative rate) and syntheticity detection
//! - [`cli`]: the `pseudokit` command line
//!
//! All character offsets count Unicode scalar values, not bytes.

pub mod cli;
pub mod corpus;
pub mod detect;
pub mod eval;
pub mod fixture;
pub mod kg;
pub mod llm;
mod par;
pub mod rewrite;
pub mod seed;
pub mod text;







pub use corpus::{Document, EntityCategory, EntitySpan};
pub use detect::{Detector, Gazetteer};
pub use eval::{LeakageReport, SyntheticityModel};
pub use kg::KnowledgeGraph;
pub use rewrite::{RewriteMode, RewrittenDocument};
