// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::par;

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthLabel {
    Original,
    Rewritten,
}

impl SynthLabel {
    fn target(self) -> f64 {
        match self {
            SynthLabel::Original => 0.0,
            SynthLabel::Rewritten => 1.0,
        }
    }
}

impl fmt::Display for SynthLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynthLabel::Original => "original",
            SynthLabel::Rewritten => "rewritten",
        })
    }
}

/// One line of a labeled corpus. `pair` ties an original to its rewrite so
/// a split never separates them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledText {
    pub text: String,
    pub label: SynthLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
}

impl LabeledText {
    pub fn new(text: impl Into<String>, label: SynthLabel) -> Self {
        Self { text: text.into(), label, pair: None }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LabeledError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

pub fn read_labeled<R: BufRead>(reader: R) -> Result<Vec<LabeledText>, LabeledError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| LabeledError::Json { line: idx + 1, source })?);
    }
    Ok(out)
}

pub fn write_labeled<W: Write>(samples: &[LabeledText], mut writer: W) -> io::Result<()> {
    for sample in samples {
        serde_json::to_writer(&mut writer, sample)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

/// Training hyperparameters. The learning rate decays as `lr / sqrt(epoch)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    /// Feature width is `2^hash_bits`.
    pub hash_bits: u32,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Threads for feature extraction only; SGD itself is sequential.
    #[serde(default = "one", skip_serializing)]
    pub workers: usize,
}

fn one() -> usize {
    1
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { hash_bits: 18, ngram_min: 2, ngram_max: 4, learning_rate: 0.1, epochs: 20, batch_size: 1, workers: 1 }
    }
}

impl SynthConfig {
    pub fn width(&self) -> usize {
        1 << self.hash_bits
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::Config(m.to_string()));
        if !(1..=28).contains(&self.hash_bits) {
            return bad("hash_bits must be in 1..=28");
        }
        if self.ngram_min == 0 || self.ngram_min > self.ngram_max {
            return bad("need 1 <= ngram_min <= ngram_max");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return bad("epochs and batch_size must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("training data has no {0} samples")]
    SingleClass(SynthLabel),
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file version {found}, expected {MODEL_VERSION}")]
    Version { found: u32 },
    #[error("model file: {0}")]
    Shape(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// L2-normalized counts of hashed character n-grams, sorted by index.
pub fn hashed_features(text: &str, config: &SynthConfig) -> Vec<(u32, f64)> {
    let mask = (config.width() - 1) as u64;
    let bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).chain([text.len()]).collect();
    let n_chars = bounds.len() - 1;
    let mut idx: Vec<u32> = Vec::new();
    for n in config.ngram_min..=config.ngram_max {
        for start in 0..n_chars.saturating_sub(n - 1) {
            let gram = &text.as_bytes()[bounds[start]..bounds[start + n]];
            idx.push((fnv1a(gram) & mask) as u32);
        }
    }
    idx.sort_unstable();
    let mut out: Vec<(u32, f64)> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some((last, count)) if *last == i => *count += 1.0,
            _ => out.push((i, 1.0)),
        }
    }
    let norm = out.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
    for (_, c) in &mut out {
        *c /= norm;
    }
    out
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Logistic regression over hashed n-grams.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticityModel {
    pub config: SynthConfig,
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Mean log-loss over the training set after each epoch.
    pub loss_history: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: u32,
    config: SynthConfig,
    bias: f64,
    loss_history: Vec<f64>,
    /// Non-zero weights only, as (index, value).
    weights: Vec<(u32, f64)>,
}

impl SyntheticityModel {
    pub fn zeros(config: SynthConfig) -> Self {
        Self { weights: vec![0.0; config.width()], config, bias: 0.0, loss_history: Vec::new() }
    }

    pub fn final_loss(&self) -> Option<f64> {
        self.loss_history.last().copied()
    }

    fn score(&self, features: &[(u32, f64)]) -> f64 {
        sigmoid(self.bias + features.iter().map(|&(i, x)| self.weights[i as usize] * x).sum::<f64>())
    }

    pub fn probability(&self, text: &str) -> f64 {
        self.score(&hashed_features(text, &self.config))
    }

    pub fn save<W: Write>(&self, mut writer: W) -> Result<(), SynthError> {
        let file = ModelFile {
            version: MODEL_VERSION,
            config: self.config,
            bias: self.bias,
            loss_history: self.loss_history.clone(),
            weights: self.weights.iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(i, &w)| (i as u32, w)).collect(),
        };
        serde_json::to_writer(&mut writer, &file)?;
        writer.write_all(b"\n")?;
        Ok(writer.flush()?)
    }

    pub fn load<R: io::Read>(reader: R) -> Result<Self, SynthError> {
        let file: ModelFile = serde_json::from_reader(reader)?;
        if file.version != MODEL_VERSION {
            return Err(SynthError::Version { found: file.version });
        }
        file.config.validate()?;
        let mut model = Self::zeros(file.config);
        for (i, w) in file.weights {
            let slot = model
                .weights
                .get_mut(i as usize)
                .ok_or_else(|| SynthError::Shape(format!("weight index {i} outside width {}", file.config.width())))?;
            *slot = w;
        }
        model.bias = file.bias;
        model.loss_history = file.loss_history;
        Ok(model)
    }
}

fn log_loss(p: f64, y: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
}

/// Fit by mini-batch SGD. The sample order is reshuffled every epoch from
/// `seed`, so the result is a pure function of (samples, config, seed).
pub fn train_syntheticity(
    samples: &[LabeledText],
    config: &SynthConfig,
    seed: u64,
) -> Result<SyntheticityModel, SynthError> {
    config.validate()?;
    for label in [SynthLabel::Original, SynthLabel::Rewritten] {
        if !samples.iter().any(|s| s.label == label) {
            return Err(SynthError::SingleClass(label));
        }
    }
    let features = par::map_ordered(samples, config.workers, |s| hashed_features(&s.text, config));
    let targets: Vec<f64> = samples.iter().map(|s| s.label.target()).collect();

    let mut model = SyntheticityModel::zeros(*config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut residuals = Vec::with_capacity(config.batch_size);
    for epoch in 1..=config.epochs {
        let lr = config.learning_rate / (epoch as f64).sqrt();
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            residuals.clear();
            residuals.extend(batch.iter().map(|&i| model.score(&features[i]) - targets[i]));
            let step = lr / batch.len() as f64;
            for (&i, &r) in batch.iter().zip(&residuals) {
                for &(j, x) in &features[i] {
                    model.weights[j as usize] -= step * r * x;
                }
                model.bias -= step * r;
            }
        }
        let loss = features.iter().zip(&targets).map(|(f, &y)| log_loss(model.score(f), y)).sum::<f64>()
            / samples.len() as f64;
        model.loss_history.push(loss);
    }
    Ok(model)
}

/// Label is `rewritten` iff the probability exceeds 0.5.
pub fn classify_syntheticity(model: &SyntheticityModel, text: &str) -> (SynthLabel, f64) {
    let p = model.probability(text);
    (if p > 0.5 { SynthLabel::Rewritten } else { SynthLabel::Original }, p)
}

/// Label both sides of each (original, rewritten) pair, tagging them with
/// the pair's position so a split keeps them together.
pub fn labeled_pairs(pairs: &[(String, String)]) -> Vec<LabeledText> {
    pairs
        .iter()
        .enumerate()
        .flat_map(|(i, (original, rewritten))| {
            [(original, SynthLabel::Original), (rewritten, SynthLabel::Rewritten)].map(|(text, label)| LabeledText {
                text: text.clone(),
                label,
                pair: Some(i.to_string()),
            })
        })
        .collect()
}

/// Split sample indices into (train, test), keeping samples that share a
/// `pair` on the same side. About `test_fraction` of the groups go to test.
pub fn split_groups(samples: &[LabeledText], test_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_pair: HashMap<&str, usize> = HashMap::new();
    for (i, s) in samples.iter().enumerate() {
        match s.pair.as_deref() {
            Some(p) => {
                let g = *by_pair.entry(p).or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
                groups[g].push(i);
            }
            None => groups.push(vec![i]),
        }
    }
    groups.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_test = (groups.len() as f64 * test_fraction.clamp(0.0, 1.0)).round() as usize;
    let mut test: Vec<usize> = groups[..n_test].concat();
    let mut train: Vec<usize> = groups[n_test..].concat();
    test.sort_unstable();
    train.sort_unstable();
    (train, test)
}
