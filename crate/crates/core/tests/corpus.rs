use std::collections::BTreeMap;
use std::path::PathBuf;

use okh::algebra::Ring;
use okh::bracket::{bracket_state_sum, jones_via_kauffman};
use okh::complex::ChainComplex;
use okh::corpus::{self, CorpusEntry};
use okh::homology::{homology, lee_canonical_classes, lee_homology, spectral_report};

fn shipped() -> Vec<CorpusEntry> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/corpus.json");
    corpus::load(&path).expect("corpus file")
}

#[test]
fn shipped_corpus_is_regenerable() {
    assert_eq!(shipped(), corpus::generate(corpus::DEFAULT_SEED));
}

#[test]
fn corpus_properties() {
    let mut tables = BTreeMap::new();
    for e in shipped() {
        let d = e.diagram().unwrap();
        let bracket = bracket_state_sum(&d);
        assert_eq!(bracket, jones_via_kauffman(&d), "{}", e.name);
        let k = ChainComplex::build(&d, Ring::Graded);
        assert!(k.verify_d_squared(&d).ok, "{}", e.name);
        assert_eq!(k.euler_characteristic(), bracket, "{}", e.name);
        let kh = homology(&k).unwrap();
        assert_eq!(kh.euler_characteristic(), bracket, "{}", e.name);
        let kl = ChainComplex::build(&d, Ring::Lee);
        assert!(kl.verify_d_squared(&d).ok, "{}", e.name);
        let lee = lee_homology(&kl).unwrap();
        assert_eq!(lee.total_rank(), 1 << d.component_count(), "{}", e.name);
        assert!(!lee.has_torsion(), "{}", e.name);
        assert!(spectral_report(&kh, &lee).ok, "{}", e.name);
        if d.crossing_count() <= 6 {
            let r = lee_canonical_classes(&d, &kl).unwrap();
            assert!(r.all_cycles && r.independent && r.spans, "{}", e.name);
        }
        let prev = tables.entry(e.link.clone()).or_insert_with(|| kh.clone());
        assert_eq!(*prev, kh, "{} differs from its link family", e.name);
    }
}
