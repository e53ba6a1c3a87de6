// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic stand-in for a chat endpoint, driven by a YAML fixture.
//!
//! ```yaml
//! rules:
//!   - match: "Find all the locations"
//!     response: "Daniel, Google, America, France, Emma, Danone, Paris."
//!   - match: ""
//!     echo: true          # answer with the request's last message
//! default: ""
//! ```
//!
//! Rules are tried in order against the content of the request's last
//! message; the first whose `match` substring occurs wins.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::client::{ChatEndpoint, ChatRequest, TransportError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockRule {
    #[serde(rename = "match")]
    pub pattern: String,
    #[serde(default)]
    pub response: Option<String>,
    #[serde(default)]
    pub echo: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockFixture {
    #[serde(default)]
    pub rules: Vec<MockRule>,
    #[serde(default)]
    pub default: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum MockError {
    #[error("invalid mock fixture: {0}")]
    Yaml(#[from] serde_yaml::Error),
    #[error("rule {index}: exactly one of `response` or `echo: true` is required")]
    Rule { index: usize },
    #[error("cannot read mock fixture: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Default)]
pub struct MockEndpoint {
    fixture: MockFixture,
    calls: AtomicUsize,
}

impl MockEndpoint {
    pub fn new(fixture: MockFixture) -> Result<Self, MockError> {
        for (index, rule) in fixture.rules.iter().enumerate() {
            if rule.echo == rule.response.is_some() {
                return Err(MockError::Rule { index });
            }
        }
        Ok(Self { fixture, calls: AtomicUsize::new(0) })
    }

    pub fn from_yaml(raw: &str) -> Result<Self, MockError> {
        Self::new(serde_yaml::from_str(raw)?)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, MockError> {
        Self::from_yaml(&std::fs::read_to_string(path)?)
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl ChatEndpoint for MockEndpoint {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let last = request.messages.last().map(|m| m.content.as_str()).unwrap_or("");
        for rule in &self.fixture.rules {
            if last.contains(&rule.pattern) {
                return Ok(match &rule.response {
                    Some(response) => response.clone(),
                    None => last.to_string(),
                });
            }
        }
        self.fixture.default.clone().ok_or(TransportError::NoMockMatch)
    }
}
