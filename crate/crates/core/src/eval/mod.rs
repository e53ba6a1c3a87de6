// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Evaluators: entity leakage (false-negative rate of the rewrite) and a
//! hashed n-gram classifier that tries to tell rewritten text from originals.

mod leakage;
mod prf;
mod synth;

pub use leakage::{leakage_report, CategoryLeakage, LeakageError, LeakageOptions, LeakageReport, LeakageTable};
pub use prf::{prf, Prf, PrfError};
pub use synth::{
    classify_syntheticity, hashed_features, labeled_pairs, read_labeled, split_groups, train_syntheticity, write_labeled,
    LabeledError, LabeledText, SynthConfig, SynthError, SynthLabel, SyntheticityModel, MODEL_VERSION,
};
