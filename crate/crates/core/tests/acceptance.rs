//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use common::{determinantal_factors, table_of};
use okh::algebra::{
    self, check_relations, conjugation, counit, idempotents, mult, pairing_matrix, saddle_table,
    solve_saddle_coefficients, surgery, swap, unit, AlgebraElement, LinMap, Ring,
};
use okh::bracket::{bracket_state_sum, jones_via_kauffman, skein_triple, verify_skein};
use okh::complex::{check_squares, r1_chain_maps, ChainComplex};
use okh::corpus::{self, CorpusEntry};
use okh::diagram::{random_moves, LinkDiagram, Move, R1Side};
use okh::homology::{homology, lee_canonical_classes, lee_homology};
use okh::matrix::{smith_normal_form, DenseMatrix};
use okh::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock budget for criterion 1, in seconds.
const D_SQUARED_BUDGET: f64 = 60.0;
const SKEIN_TRIPLES: usize = 50;
const DIAGRAMS_PER_LINK: usize = 3;
const SNF_SAMPLES: usize = 500;

fn corpus() -> Vec<(CorpusEntry, LinkDiagram)> {
    corpus::generate(corpus::DEFAULT_SEED)
        .into_iter()
        .map(|e| {
            let d = e.diagram().unwrap();
            (e, d)
        })
        .collect()
}

fn d_squared(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    let t = Instant::now();
    let mut composites = 0;
    for (e, d) in c {
        for ring in [Ring::Graded, Ring::Lee] {
            let r = ChainComplex::build(d, ring).verify_d_squared(d);
            if !r.ok {
                return (false, format!("{} ({ring:?}): {:?}", e.name, r.failure));
            }
            composites += r.checked;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    (secs < D_SQUARED_BUDGET, format!("{} diagrams, {composites} composites, {secs:.1}s", c.len()))
}

fn euler(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    for (e, d) in c {
        let b = bracket_state_sum(d);
        let k = ChainComplex::build(d, Ring::Graded);
        if k.euler_characteristic() != b || homology(&k).unwrap().euler_characteristic() != b {
            return (false, e.name.clone());
        }
    }
    (true, format!("{} diagrams, complex and homology level", c.len()))
}

fn bracket_oracle(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    for (e, d) in c {
        if bracket_state_sum(d) != jones_via_kauffman(d) {
            return (false, format!("oracle mismatch on {}", e.name));
        }
    }
    let mut triples = 0;
    for (e, d) in c {
        for x in 0..d.crossing_count() {
            let (p, n, z) = skein_triple(d, x);
            if !verify_skein(&p, &n, &z) {
                return (false, format!("skein fails on {} at crossing {x}", e.name));
            }
            triples += 1;
        }
    }
    (triples >= SKEIN_TRIPLES, format!("{} diagrams, {triples} skein triples", c.len()))
}

fn reidemeister(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    let mut families: BTreeMap<&str, Vec<LinkDiagram>> = BTreeMap::new();
    for (e, d) in c {
        families.entry(&e.link).or_default().push(d.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(corpus::DEFAULT_SEED ^ 0x5eed);
    let mut compared = 0;
    for (link, ds) in families.iter_mut() {
        let base = ds[0].clone();
        while ds.len() < DIAGRAMS_PER_LINK + 2 {
            let cap = base.crossing_count().max(corpus::CAP - 2) + 2;
            ds.push(random_moves(&base, 8, cap, &mut rng).0);
        }
        let tables: Vec<_> = ds.iter().map(|d| table_of(&homology(&ChainComplex::build(d, Ring::Graded)).unwrap())).collect();
        if tables.iter().any(|t| *t != tables[0]) {
            return (false, format!("tables differ for {link}"));
        }
        compared += ds.len();
    }
    (true, format!("{} links, {compared} diagrams", families.len()))
}

fn lee_rank(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    let mut classes = 0;
    for (e, d) in c {
        let k = ChainComplex::build(d, Ring::Lee);
        let h = lee_homology(&k).unwrap();
        if h.total_rank() != 1 << d.component_count() || h.has_torsion() {
            return (false, format!("{}: rank {}", e.name, h.total_rank()));
        }
        let r = lee_canonical_classes(d, &k).unwrap();
        if !(r.all_cycles && r.independent && r.spans) {
            return (false, format!("{}: classes {:?}", e.name, (r.all_cycles, r.independent, r.spans)));
        }
        classes += r.classes.len();
    }
    (true, format!("{} diagrams, {classes} canonical classes", c.len()))
}

fn r1(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    let mut checked = 0;
    for (e, d) in c.iter().filter(|(_, d)| d.crossing_count() <= 7) {
        let arc = d.arcs().next().map(|(a, _)| a);
        for sign in [Sign::Positive, Sign::Negative] {
            for side in [R1Side::Left, R1Side::Right] {
                let curl = Move::R1Add { arc, sign, side }.apply(d).unwrap();
                let r = r1_chain_maps(&curl).unwrap();
                if !r.all() {
                    return (false, format!("{} {sign:?} {side:?}: {r:?}", e.name));
                }
                checked += 1;
            }
        }
    }
    (true, format!("{checked} curls, both signs"))
}

fn solver(c: &[(CorpusEntry, LinkDiagram)]) -> (bool, String) {
    let mut notes = Vec::new();
    for ring in [Ring::Graded, Ring::Lee] {
        let r = solve_saddle_coefficients(ring);
        let ok = r.range == 2
            && r.classes.len() == 1
            && r.normalized() == Some(saddle_table(ring))
            && check_relations(saddle_table(ring)).all();
        if !ok {
            return (false, format!("{ring:?}: range {}, {} classes", r.range, r.classes.len()));
        }
        notes.push(format!("{ring:?} {} solutions in 1 class", r.solutions.len()));
    }
    let mut squares = 0;
    for (e, d) in c.iter().filter(|(_, d)| d.crossing_count() <= 7) {
        for ring in [Ring::Graded, Ring::Lee] {
            let s = check_squares(d, ring);
            if !(s.untwisted_commute && s.twisted_anticommute) {
                return (false, format!("{} ({ring:?}): {:?}", e.name, s.failure));
            }
            squares += s.squares;
        }
    }
    (true, format!("{}, {squares} twisted squares anticommute", notes.join(", ")))
}

fn snf() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..SNF_SAMPLES {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = DenseMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect::<Vec<_>>());
        let s = smith_normal_form(&m, true).unwrap();
        let (u, d, v) = s.transforms.clone().unwrap();
        let ok = s.factors == determinantal_factors(&rows)
            && u.determinant().abs() == 1
            && v.determinant().abs() == 1
            && u.mul(&m).mul(&v) == d;
        if !ok {
            return (false, format!("sample {i}: {rows:?}"));
        }
    }
    (true, format!("{SNF_SAMPLES} matrices up to 6x6, entries in [-9, 9]"))
}

fn local_relations() -> (bool, String) {
    let i1 = LinMap::identity(1);
    for ring in [Ring::Graded, Ring::Lee] {
        let m = mult(ring);
        let d = algebra::comult(ring);
        let c = conjugation(ring);
        let [p1, p2] = idempotents(ring);
        let checks = [
            ("surgery", surgery(ring) == i1),
            ("unit", m.compose(&unit(ring).tensor(&i1)) == i1 && m.compose(&i1.tensor(&unit(ring))) == i1),
            ("counit", counit(ring).tensor(&i1).compose(&d) == i1 && i1.tensor(&counit(ring)).compose(&d) == i1),
            ("commutative", m.compose(&swap()) == m && swap().compose(&d) == d),
            ("associative", m.compose(&m.tensor(&i1)) == m.compose(&i1.tensor(&m))),
            ("coassociative", d.tensor(&i1).compose(&d) == i1.tensor(&d).compose(&d)),
            ("frobenius", d.compose(&m) == m.tensor(&i1).compose(&i1.tensor(&d))),
            ("conjugation", c.compose(&c) == i1 && c.compose(&m) == m.compose(&c.tensor(&c))),
            ("pairing", pairing_matrix(ring).determinant2().abs() == 1),
            ("idempotents", p1.compose(&p1) == p1 && p2.compose(&p2) == p2 && p1.compose(&p2) == LinMap::zero(1, 1) && p1.add(&p2) == i1),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return (false, format!("{ring:?}: {name}"));
        }
    }
    // 2π± = 1 ± X are orthogonal and idempotent up to the factor 2
    let lee = Ring::Lee;
    let (a, b) = (AlgebraElement::new(lee, 1, 1), AlgebraElement::new(lee, 1, -1));
    let pi_ok = a * a == a + a && b * b == b + b && (a * b).coords() == [0, 0];
    (pi_ok, "both rings, plus Lee idempotents (1 ± X)/2".into())
}

fn main() -> ExitCode {
    let c = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> (bool, String)>)> = vec![
        ("1 d^2 = 0 in both rings", Box::new(|| d_squared(&c))),
        ("2 Euler characteristic = bracket", Box::new(|| euler(&c))),
        ("3 bracket = Kauffman oracle, skein relation", Box::new(|| bracket_oracle(&c))),
        ("4 Reidemeister invariance of homology", Box::new(|| reidemeister(&c))),
        ("5 Lee rank 2^m and canonical classes", Box::new(|| lee_rank(&c))),
        ("6 R1 chain identities", Box::new(|| r1(&c))),
        ("7 saddle solver and twisted squares", Box::new(|| solver(&c))),
        ("8 Smith normal form against minors", Box::new(snf)),
        ("9 local relation suite", Box::new(local_relations)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let (ok, detail) = f();
        failed += usize::from(!ok);
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
