// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(gausswit::cli::main_with_args(std::env::args_os()));
}
