//! Run detection in a pool of child processes speaking line-delimited JSON.
//!
//! The example re-executes itself with `--serve` to play the detector, so it
//! needs nothing besides the crate. Any program that implements the same
//! protocol can be plugged in with `--detector external:<command>`.
//!
//!     cargo run --example external_detector

use std::io::{self, BufReader};

use pseudokit::corpus::{Document, EntityCategory};
use pseudokit::detect::{serve_gazetteer, Detector, ExternalDetector, Gazetteer, MatchPolicy};

fn serve() -> io::Result<()> {
    let lexicon = Gazetteer::new(
        [("Grace Hopper", EntityCategory::Person), ("Arlington", EntityCategory::Location), ("Navy", EntityCategory::Organization)],
        MatchPolicy::default(),
    )
    .expect("valid lexicon");
    serve_gazetteer(&lexicon, BufReader::new(io::stdin()), io::stdout())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    if std::env::args().any(|a| a == "--serve") {
        return Ok(serve()?);
    }
    let exe = std::env::current_exe()?;
    let command = format!("{} --serve", shlex::try_quote(exe.to_str().unwrap())?);
    let detector = Detector::External(ExternalDetector::spawn(&command, 2)?);
    let docs = [
        Document::new("a", "Grace Hopper joined the Navy."),
        Document::new("b", "She is buried in Arlington."),
    ];
    for doc in &docs {
        let spans = detector.detect(doc)?;
        let found: Vec<_> = spans.iter().map(|s| format!("{}={}", s.category.tag(), s.surface)).collect();
        println!("{}: {}", doc.id, found.join(", "));
    }
    Ok(())
}
