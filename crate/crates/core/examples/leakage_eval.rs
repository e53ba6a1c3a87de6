//! Measure how many gold entity surfaces survive each rewriting strategy.
//!
//!     cargo run --example leakage_eval

use pseudokit::corpus::read_jsonl;
use pseudokit::detect::Detector;
use pseudokit::eval::{leakage_report, LeakageOptions, LeakageTable};
use pseudokit::kg::KnowledgeGraph;
use pseudokit::rewrite::{rewrite_corpus, BatchOptions, RewriteMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = env!("CARGO_MANIFEST_DIR");
    let kg = KnowledgeGraph::load_path(format!("{dir}/data/kg_fixture.jsonl"))?;
    let gold = pseudokit::fixture::template_corpus(&kg, 200, 3);

    let mut rows = vec![leakage_report("identity", &gold, &gold, LeakageOptions::default())?];
    for (name, mode) in [("sanitize", RewriteMode::Sanitize), ("pseudonymize", RewriteMode::Pseudonymize)] {
        let (results, _) = rewrite_corpus(&gold, &Detector::Oracle, mode, Some(&kg), BatchOptions::default());
        let rewritten: Vec<_> = results.into_iter().filter_map(Result::ok).map(|r| r.to_document()).collect();
        rows.push(leakage_report(name, &gold, &rewritten, LeakageOptions::default())?);
    }

    // A rewrite that forgot one name.
    let sloppy = read_jsonl(r#"{"id":"table1","text":"Sophie works at The Times in Manchester with Rachel and Tom."}"#.as_bytes())?;
    let table1 = read_jsonl(std::fs::read(format!("{dir}/data/table1.jsonl"))?.as_slice())?;
    rows.push(leakage_report("sloppy", &table1, &sloppy, LeakageOptions::default())?);

    println!("{:<14}{:>8}{:>8}{:>8}{:>8}{:>8}", "system", "PER", "LOC", "ORG", "micro", "macro");
    for row in &rows {
        let r = |c| row.category(c).rate;
        use pseudokit::corpus::EntityCategory::*;
        println!(
            "{:<14}{:>8.1}{:>8.1}{:>8.1}{:>8.1}{:>8.1}",
            row.system, r(Person), r(Location), r(Organization), row.micro_mean, row.macro_mean
        );
    }
    println!("{}", serde_json::to_string(&LeakageTable { rows: rows[3..].to_vec() })?);
    Ok(())
}
