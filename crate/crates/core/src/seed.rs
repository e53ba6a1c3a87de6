// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Per-document RNG derivation.
//!
//! Each document gets its own generator seeded from `sha256(seed_le || id)`,
//! so corpus output does not depend on which worker handles which document.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type DocRng = ChaCha8Rng;

pub fn derive_seed(global_seed: u64, key: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(global_seed.to_le_bytes());
    hasher.update(key.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn doc_rng(global_seed: u64, doc_id: &str) -> DocRng {
    ChaCha8Rng::seed_from_u64(derive_seed(global_seed, doc_id))
}
