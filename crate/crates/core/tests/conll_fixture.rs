use pseudokit::corpus::{parse_conll, read_jsonl, write_conll};

const CONLL: &str = include_str!("data/conll50.txt");
const EXPECTED: &str = include_str!("data/conll50.expected.jsonl");

#[test]
fn fifty_sentences_parse_to_expected_spans() {
    let docs = parse_conll(CONLL.as_bytes()).unwrap();
    let expected = read_jsonl(EXPECTED.as_bytes()).unwrap();
    assert_eq!(docs.len(), 3);
    let sentences: usize = docs.iter().map(|d| d.text.lines().count()).sum();
    assert_eq!(sentences, 50);
    for (got, want) in docs.iter().zip(&expected) {
        assert_eq!(got.id, want.id);
        assert_eq!(got.text, want.text);
        assert_eq!(got.gold_spans, want.gold_spans, "spans of {}", got.id);
    }
    let surfaces: Vec<&str> = docs.iter().flat_map(|d| d.gold_spans.as_ref().unwrap()).map(|s| s.surface.as_str()).collect();
    for misc in ["German", "World Cup", "French", "Canadian", "Christmas"] {
        assert!(!surfaces.contains(&misc), "{misc} should have been dropped");
    }
}

#[test]
fn write_then_parse_is_idempotent() {
    let docs = parse_conll(CONLL.as_bytes()).unwrap();
    let mut first = Vec::new();
    write_conll(&docs, &mut first).unwrap();
    let again = parse_conll(first.as_slice()).unwrap();
    assert_eq!(again, docs);
    let mut second = Vec::new();
    write_conll(&again, &mut second).unwrap();
    assert_eq!(first, second);
}
