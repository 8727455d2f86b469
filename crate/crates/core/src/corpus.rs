//! The shipped diagram corpus: named knots and links plus diagrams generated
//! by seeded random Reidemeister moves.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{parse_pd, random_moves, ArcId, DiagramError, LinkDiagram, Move, R1Side};
use crate::Sign;

pub const DEFAULT_SEED: u64 = 20240611;
pub const GENERATED: usize = 20;
/// Crossing cap for generated diagrams.
pub const CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// Diagrams with the same `link` present the same oriented link.
    pub link: String,
    pub pd: Vec<[ArcId; 4]>,
    #[serde(default)]
    pub free_loops: usize,
}

impl CorpusEntry {
    pub fn new(name: &str, link: &str, d: &LinkDiagram) -> Self {
        CorpusEntry { name: name.into(), link: link.into(), pd: d.crossings().to_vec(), free_loops: d.free_loops() }
    }

    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        LinkDiagram::new(self.pd.clone(), self.free_loops)
    }

    pub fn components(&self) -> usize {
        self.diagram().map_or(0, |d| d.component_count())
    }
}

const NAMED: &[(&str, &str, &str)] = &[
    ("unknot-0", "unknot", "O"),
    ("unknot-curl-pos", "unknot", "X[1,1,2,2]"),
    ("unknot-curl-neg", "unknot", "X[1,2,2,1]"),
    ("trefoil-left", "trefoil-left", "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"),
    ("figure-eight", "figure-eight", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"),
    ("hopf-pos", "hopf-pos", "X[1,3,2,4] X[3,1,4,2]"),
    ("5_1", "5_1", "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]"),
    ("5_2", "5_2", "X[1,5,2,4] X[3,9,4,8] X[5,1,6,10] X[7,3,8,2] X[9,7,10,6]"),
    ("6_1", "6_1", "X[1,7,2,6] X[3,10,4,11] X[5,3,6,2] X[7,1,8,12] X[9,4,10,5] X[11,9,12,8]"),
];

/// Named diagrams, including mirrors and small unknot presentations built by
/// fixed moves.
pub fn named() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = NAMED
        .iter()
        .map(|(name, link, pd)| CorpusEntry::new(name, link, &parse_pd(pd).expect("valid named code")))
        .collect();
    let find = |out: &[CorpusEntry], name: &str| out.iter().find(|e| e.name == name).unwrap().diagram().unwrap();
    let trefoil = find(&out, "trefoil-left");
    out.push(CorpusEntry::new("trefoil-right", "trefoil-right", &trefoil.mirror()));
    let hopf = find(&out, "hopf-pos");
    out.push(CorpusEntry::new("hopf-neg", "hopf-neg", &hopf.mirror()));
    let curl = find(&out, "unknot-curl-pos");
    let two = Move::R1Add { arc: Some(2), sign: Sign::Negative, side: R1Side::Left }.apply(&curl).unwrap();
    out.push(CorpusEntry::new("unknot-2", "unknot", &two));
    let three = Move::R1Add { arc: Some(4), sign: Sign::Positive, side: R1Side::Right }.apply(&two).unwrap();
    out.push(CorpusEntry::new("unknot-3", "unknot", &three));
    out
}

/// Named diagrams followed by `GENERATED` move-sequence descendants.
pub fn generate(seed: u64) -> Vec<CorpusEntry> {
    let mut out = named();
    let bases: Vec<CorpusEntry> = out.iter().filter(|e| e.pd.len() <= 4).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..GENERATED {
        let base = &bases[i % bases.len()];
        let (d, _) = random_moves(&base.diagram().unwrap(), 6, CAP, &mut rng);
        out.push(CorpusEntry::new(&format!("gen-{i:02}-{}", base.name), &base.link, &d));
    }
    out
}

pub fn to_json(entries: &[CorpusEntry]) -> String {
    let lines: Vec<String> = entries.iter().map(|e| serde_json::to_string(e).unwrap()).collect();
    format!("[\n  {}\n]\n", lines.join(",\n  "))
}

pub fn from_json(text: &str) -> Result<Vec<CorpusEntry>, DiagramError> {
    serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))
}

pub fn load(path: &Path) -> std::io::Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}
