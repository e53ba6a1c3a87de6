//! Swap entities for knowledge-graph siblings of the same kind.
//!
//! A surface that repeats in a document keeps one surrogate; different
//! seeds give different but reproducible choices.
//!
//!     cargo run --example pseudonymize

use pseudokit::corpus::{Document, EntityCategory, EntitySpan};
use pseudokit::kg::KnowledgeGraph;
use pseudokit::rewrite;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = KnowledgeGraph::load_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/kg_fixture.jsonl"))?;
    let text = "Diego moved to Lyon. Later Diego joined Renault in Lyon.";
    let spans = ["Diego", "Lyon", "Diego", "Renault", "Lyon"];
    let cats = [EntityCategory::Person, EntityCategory::Location, EntityCategory::Person, EntityCategory::Organization, EntityCategory::Location];
    let mut gold = Vec::new();
    let mut from = 0;
    for (surface, category) in spans.iter().zip(cats) {
        let byte = from + text[from..].find(surface).unwrap();
        let start = text[..byte].chars().count();
        gold.push(EntitySpan::new(start, start + surface.chars().count(), category, *surface));
        from = byte + surface.len();
    }
    let doc = Document::new("demo", text).with_gold(gold.clone());
    println!("original: {text}");
    for seed in [0, 1, 2] {
        let out = rewrite::pseudonymize(&doc, &gold, &kg, seed)?;
        println!("seed {seed}:   {}", out.text);
    }
    Ok(())
}
