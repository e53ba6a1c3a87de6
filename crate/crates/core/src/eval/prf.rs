// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::SynthLabel;

/// Precision, recall and F-score for the `rewritten` class, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    /// Set when a denominator was zero and the affected value defaulted to 0.
    pub degenerate: bool,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{predictions} predictions for {gold} gold labels")]
pub struct PrfError {
    pub predictions: usize,
    pub gold: usize,
}

pub fn prf(predictions: &[SynthLabel], gold: &[SynthLabel]) -> Result<Prf, PrfError> {
    if predictions.len() != gold.len() {
        return Err(PrfError { predictions: predictions.len(), gold: gold.len() });
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&p, &g) in predictions.iter().zip(gold) {
        match (p, g) {
            (SynthLabel::Rewritten, SynthLabel::Rewritten) => tp += 1,
            (SynthLabel::Rewritten, SynthLabel::Original) => fp += 1,
            (SynthLabel::Original, SynthLabel::Rewritten) => fn_ += 1,
            (SynthLabel::Original, SynthLabel::Original) => {}
        }
    }
    let mut degenerate = false;
    let mut ratio = |num: usize, den: usize| {
        if den == 0 {
            degenerate = true;
            0.0
        } else {
            100.0 * num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f_score = if precision + recall == 0.0 {
        degenerate = true;
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Prf { precision, recall, f_score, degenerate, tp, fp, fn_ })
}
