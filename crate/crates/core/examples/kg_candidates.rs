//! Inspect how a surrogate is chosen: leaf lookup, one hop up and down,
//! attribute filtering, then a seeded uniform draw.
//!
//!     cargo run --example kg_candidates [surface] [PER|LOC|ORG]

use pseudokit::corpus::EntityCategory;
use pseudokit::kg::{candidate_set, filter_candidates, find_leaf, sample_replacement, KnowledgeGraph};
use pseudokit::seed::doc_rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let surface = args.next().unwrap_or_else(|| "Lyon".into());
    let category: EntityCategory = args.next().as_deref().unwrap_or("LOC").parse()?;
    let kg = KnowledgeGraph::load_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/kg_fixture.jsonl"))?;

    let Some(leaf) = find_leaf(&kg, &surface, category) else {
        println!("{surface} ({}) is not a leaf in the graph; it would get a placeholder", category.tag());
        return Ok(());
    };
    println!("leaf {} {:?} attrs {:?}", leaf.id, leaf.label, leaf.attrs);
    let parents: Vec<_> = kg.parents_of(&leaf.id).collect();
    println!("parents {parents:?}");
    let candidates = candidate_set(&kg, leaf);
    println!("candidates {:?}", candidates.iter().map(|n| &n.label).collect::<Vec<_>>());
    let filtered = filter_candidates(&candidates, leaf);
    println!("after attribute filter {:?}", filtered.iter().map(|n| &n.label).collect::<Vec<_>>());
    for doc in ["doc-1", "doc-2", "doc-3"] {
        let pick = sample_replacement(&filtered, &surface, &mut doc_rng(0, doc))?;
        println!("{doc}: {surface} -> {pick}");
    }
    Ok(())
}
