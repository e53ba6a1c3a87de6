use pseudokit::corpus::EntityCategory::{self, *};
use pseudokit::detect::{gazetteer_match, Gazetteer, MatchPolicy};
use pseudokit::kg::{candidate_set, filter_candidates, find_leaf, KnowledgeGraph};

const KG: &str = include_str!("../data/kg_fixture.jsonl");
const LEXICON: &str = include_str!("../data/lexicon.tsv");

fn pool(kg: &KnowledgeGraph, surface: &str, category: EntityCategory) -> Vec<String> {
    let leaf = find_leaf(kg, surface, category).unwrap();
    let candidates = candidate_set(kg, leaf);
    filter_candidates(&candidates, leaf).into_iter().map(|n| n.label.clone()).collect()
}

#[test]
fn shipped_graph_gives_singleton_pools_for_the_example_sentence() {
    let kg = KnowledgeGraph::load(KG.as_bytes()).unwrap();
    assert!(kg.len() > 200);
    assert_eq!(pool(&kg, "Sarah", Person), ["Sophie"]);
    assert_eq!(pool(&kg, "The Times", Organization), ["Manchester Evening News"]);
    assert_eq!(pool(&kg, "London", Location), ["Manchester"]);
    assert_eq!(pool(&kg, "Rachel", Person), ["Emma"]);
    assert_eq!(pool(&kg, "David", Person), ["Tom"]);
}

#[test]
fn shipped_graph_is_in_dump_order() {
    let kg = KnowledgeGraph::load(KG.as_bytes()).unwrap();
    let mut out = Vec::new();
    kg.dump(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), KG);
}

#[test]
fn country_pools_relax_to_the_location_type() {
    let kg = KnowledgeGraph::load(KG.as_bytes()).unwrap();
    let countries = pool(&kg, "France", Location);
    assert!(countries.len() > 10);
    assert!(countries.iter().all(|c| kg.ids_for_label(c).iter().any(|id| kg.node(id).unwrap().attr("location_type") == Some("country"))));
}

#[test]
fn shipped_lexicon_tags_the_example_sentence() {
    let g = Gazetteer::from_tsv(LEXICON.as_bytes(), MatchPolicy::default()).unwrap();
    let spans = gazetteer_match("Sarah works at The Times in London with Rachel and David.", &g);
    let got: Vec<_> = spans.iter().map(|s| (s.start, s.end, s.category)).collect();
    assert_eq!(got, [(0, 5, Person), (15, 24, Organization), (28, 34, Location), (40, 46, Person), (51, 56, Person)]);
}
