//! Replace every entity with a numbered placeholder.
//!
//!     cargo run --example sanitize

use pseudokit::corpus::read_jsonl;
use pseudokit::detect::Detector;
use pseudokit::rewrite;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/data/table1.jsonl"))?;
    for doc in read_jsonl(raw.as_slice())? {
        let spans = Detector::Oracle.detect(&doc)?;
        let out = rewrite::sanitize(&doc, &spans)?;
        println!("{}\n  -> {}", doc.text, out.text);
        for span in &out.new_spans {
            println!("     {:>2}..{:<2} {} {}", span.start, span.end, span.category.tag(), span.surface);
        }
    }
    Ok(())
}
