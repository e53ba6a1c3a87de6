// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(pseudokit::cli::run(std::env::args_os()));
}
