//! Detect entities with a lexicon instead of gold annotations.
//!
//!     cargo run --example gazetteer

use pseudokit::corpus::EntityCategory;
use pseudokit::detect::{gazetteer_match, Gazetteer, MatchPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lexicon = Gazetteer::new(
        [
            ("New York", EntityCategory::Location),
            ("York", EntityCategory::Location),
            ("New York Times", EntityCategory::Organization),
            ("Ada Lovelace", EntityCategory::Person),
        ],
        MatchPolicy::default(),
    )?;
    let text = "Ada Lovelace never read the New York Times in York or New York.";
    println!("{text}");
    for span in gazetteer_match(text, &lexicon) {
        println!("  {:>2}..{:<2} {} {:?}", span.start, span.end, span.category.tag(), span.surface);
    }

    let shipped = std::fs::File::open(concat!(env!("CARGO_MANIFEST_DIR"), "/data/lexicon.tsv"))?;
    let shipped = Gazetteer::from_tsv(std::io::BufReader::new(shipped), MatchPolicy::default())?;
    println!("shipped lexicon: {} entries", shipped.len());
    Ok(())
}
