//! Two-stage LLM rewriting (extract, then replace) against a scripted mock.
//!
//! Swap `MockEndpoint` for `HttpEndpoint` to talk to a real
//! chat-completions server.
//!
//!     cargo run --example llm_mock_chain

use std::sync::Arc;

use pseudokit::corpus::Document;
use pseudokit::llm::{llm_pseudonymize, LlmChain, MockEndpoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mock = MockEndpoint::from_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/mock_table5.yaml"))?;
    let chain = LlmChain::single(Arc::new(mock));
    let doc = Document::new(
        "daniel",
        "Daniel worked in Google for five years before moving from America to France. \
         Daniel is now working with Emma in Danone and living in Paris.",
    );
    match llm_pseudonymize(&doc, &chain) {
        Ok(out) => {
            println!("{}", out.text);
            for r in &out.replacements {
                println!("  {:>3}..{:<3} {} -> {}", r.start, r.end, r.original, r.surrogate);
            }
            println!("stage-2 attempts: {}", out.diagnostics.stage2_attempts);
        }
        Err(failure) => println!("{} failed: {}", failure.id, failure.error),
    }
    Ok(())
}
