//! Train a classifier to tell original text from its rewrite.
//!
//! Placeholders are easy to spot; knowledge-graph surrogates much less so.
//!
//!     cargo run --release --example syntheticity

use pseudokit::detect::Detector;
use pseudokit::eval::{classify_syntheticity, labeled_pairs, prf, split_groups, train_syntheticity, SynthConfig};
use pseudokit::kg::KnowledgeGraph;
use pseudokit::rewrite::{rewrite_corpus, BatchOptions, RewriteMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = KnowledgeGraph::load_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/kg_fixture.jsonl"))?;
    let docs = pseudokit::fixture::template_corpus(&kg, 1000, 1);
    for mode in [RewriteMode::Sanitize, RewriteMode::Pseudonymize] {
        let options = BatchOptions { seed: 7, workers: 4, ..BatchOptions::default() };
        let (results, _) = rewrite_corpus(&docs, &Detector::Oracle, mode, Some(&kg), options);
        let pairs: Vec<(String, String)> =
            docs.iter().zip(results).filter_map(|(d, r)| Some((d.text.clone(), r.ok()?.text))).collect();
        let samples = labeled_pairs(&pairs);
        let (train, test) = split_groups(&samples, 0.1, 0);
        let train: Vec<_> = train.iter().map(|&i| samples[i].clone()).collect();
        let model = train_syntheticity(&train, &SynthConfig::default(), 0)?;
        let predicted: Vec<_> = test.iter().map(|&i| classify_syntheticity(&model, &samples[i].text).0).collect();
        let gold: Vec<_> = test.iter().map(|&i| samples[i].label).collect();
        let score = prf(&predicted, &gold)?;
        println!(
            "{mode:?}: P {:.1} R {:.1} F {:.1} (final loss {:.3})",
            score.precision,
            score.recall,
            score.f_score,
            model.final_loss().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
