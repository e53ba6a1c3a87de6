//! Read CoNLL-2003 columns into documents with character-offset spans.
//!
//!     cargo run --example conll_import

use pseudokit::corpus::{parse_conll, write_conll};

const SAMPLE: &str = "\
-DOCSTART- -X- -X- O

EU NNP B-NP I-ORG
rejects VBZ B-VP O
German JJ B-NP I-MISC
call NN I-NP O
to TO B-VP O
boycott VB I-VP O
British JJ B-NP I-MISC
lamb NN I-NP O
. . O O

Peter NNP B-NP I-PER
Blackburn NNP I-NP I-PER

BRUSSELS NNP B-NP I-LOC
1996-08-22 CD I-NP O
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let docs = parse_conll(SAMPLE.as_bytes())?;
    for doc in &docs {
        println!("{}:\n{}", doc.id, doc.text);
        for span in doc.gold_spans.as_deref().unwrap_or_default() {
            println!("  {:>2}..{:<2} {} {}", span.start, span.end, span.category.tag(), span.surface);
        }
    }
    let mut out = Vec::new();
    write_conll(&docs, &mut out)?;
    print!("\nre-exported (MISC dropped):\n{}", String::from_utf8(out)?);
    Ok(())
}
