//! Build original/pseudonymized pairs and write them as TSV.
//!
//!     cargo run --example parallel_corpus

use pseudokit::detect::Detector;
use pseudokit::kg::KnowledgeGraph;
use pseudokit::rewrite::{generate_parallel_corpus, write_parallel_tsv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = KnowledgeGraph::load_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/kg_fixture.jsonl"))?;
    let docs = pseudokit::fixture::template_corpus(&kg, 5, 42);
    let corpus = generate_parallel_corpus(&docs, &Detector::Oracle, &kg, 42, 2)?;
    write_parallel_tsv(&corpus.pairs, std::io::stdout().lock())?;
    eprintln!("{} pairs, {} failures", corpus.pairs.len(), corpus.failures.len());
    Ok(())
}
