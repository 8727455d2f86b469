//! Homology of the chain complex: bigraded integral tables, Lee homology over
//! Z[1/2], the canonical Lee classes and the rank report comparing the two.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{saddle_table, Ring};
use crate::bracket::LaurentPoly;
use crate::complex::ChainComplex;
use crate::diagram::{End, LinkDiagram};
use crate::matrix::{invariant_factors, MatrixError, SparseMatrix};
use crate::resolution::{self, cube_edge, EdgeKind, Resolver, Smoothing, State};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("d^2 is nonzero leaving height {height}")]
    DSquaredNonzero { height: i32 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("no consistent Lee labelling at crossing {crossing}")]
    LeeLabels { crossing: usize },
    #[error("Lee labels admit no two-colouring")]
    LeeColouring,
}

/// A finitely generated abelian group Z^free ⊕ ⨁ Z/t.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    pub free: usize,
    /// Torsion invariant factors, all > 1, ascending.
    pub torsion: Vec<i128>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub height: i32,
    /// Quantum degree; absent for Lee homology, which is only filtered.
    pub q: Option<i32>,
    pub group: Group,
}

/// Nonzero homology groups ordered by height, then q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homology {
    pub ring: Ring,
    pub entries: Vec<Entry>,
}

impl Homology {
    pub fn get(&self, h: i32, q: Option<i32>) -> Group {
        self.entries
            .iter()
            .find(|e| e.height == h && e.q == q)
            .map(|e| e.group.clone())
            .unwrap_or_default()
    }

    pub fn total_rank(&self) -> usize {
        self.entries.iter().map(|e| e.group.free).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.iter().any(|e| !e.group.torsion.is_empty())
    }

    /// Σ (-1)^h q^k rank; entries without a q-degree count at q^0.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for e in &self.entries {
            let sign = if e.height.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(sign * e.group.free as i64, e.q.unwrap_or(0));
        }
        p
    }

    /// `t^h q^k` monomials, then torsion on a separate line if present.
    pub fn poincare(&self) -> String {
        let mut terms = Vec::new();
        let mut torsion = Vec::new();
        for e in &self.entries {
            let mono = match e.q {
                Some(q) => format!("t^{} q^{}", e.height, q),
                None => format!("t^{}", e.height),
            };
            match e.group.free {
                0 => {}
                1 => terms.push(mono.clone()),
                n => terms.push(format!("{n}*{mono}")),
            }
            for t in &e.group.torsion {
                torsion.push(format!("Z/{t} at {mono}"));
            }
        }
        let mut out = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if !torsion.is_empty() {
            out.push_str("\ntorsion: ");
            out.push_str(&torsion.join(", "));
        }
        out
    }

    /// One line per nonzero group: height, q, group.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match e.q {
                Some(q) => out.push_str(&format!("{:>4} {:>4}  {}\n", e.height, q, e.group)),
                None => out.push_str(&format!("{:>4}     {}\n", e.height, e.group)),
            }
        }
        out
    }
}

/// Per-block data: dimension, rank of the outgoing differential, nonzero
/// invariant factors of the incoming one.
struct Block {
    dim: usize,
    out_rank: usize,
    in_factors: Vec<i128>,
}

fn check_d_squared(k: &ChainComplex) -> Result<(), HomologyError> {
    for h in k.heights() {
        let (Some(a), Some(b)) = (k.differential(h), k.differential(h + 1)) else {
            continue;
        };
        if b.rows > 0 && !b.mul(a)?.is_zero() {
            return Err(HomologyError::DSquaredNonzero { height: h });
        }
    }
    Ok(())
}

/// Split every chain group by `key` of the q-degree and compute block data.
fn blocks(k: &ChainComplex, key: impl Fn(i32) -> i32 + Sync) -> Result<BTreeMap<(i32, i32), Block>, HomologyError> {
    let mut index: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for h in k.heights() {
        for (i, q) in k.qdegrees(h).into_iter().enumerate() {
            index.entry((h, key(q))).or_default().push(i);
        }
    }
    let empty = Vec::new();
    // factors of d_h restricted to each key
    let jobs: Vec<(i32, i32)> = index.keys().copied().collect();
    let factors: Vec<((i32, i32), Vec<i128>)> = jobs
        .par_iter()
        .map(|&(h, g)| {
            let cols = &index[&(h, g)];
            let rows = index.get(&(h + 1, g)).unwrap_or(&empty);
            let f = match k.differential(h) {
                Some(m) if !rows.is_empty() => invariant_factors(&m.submatrix(rows, cols))?,
                _ => Vec::new(),
            };
            Ok(((h, g), f))
        })
        .collect::<Result<_, MatrixError>>()?;
    let factors: BTreeMap<(i32, i32), Vec<i128>> = factors.into_iter().collect();
    Ok(index
        .iter()
        .map(|(&(h, g), idx)| {
            let block = Block {
                dim: idx.len(),
                out_rank: factors[&(h, g)].len(),
                in_factors: factors.get(&(h - 1, g)).cloned().unwrap_or_default(),
            };
            ((h, g), block)
        })
        .collect())
}

fn group_of(b: &Block, keep: impl Fn(i128) -> i128) -> Group {
    let mut torsion: Vec<i128> = b.in_factors.iter().map(|&t| keep(t.abs())).filter(|&t| t > 1).collect();
    torsion.sort_unstable();
    Group { free: b.dim - b.out_rank - b.in_factors.len(), torsion }
}

/// Integral homology of a graded complex, one group per (height, q).
pub fn homology(k: &ChainComplex) -> Result<Homology, HomologyError> {
    check_d_squared(k)?;
    let entries = blocks(k, |q| q)?
        .iter()
        .map(|(&(h, q), b)| Entry { height: h, q: Some(q), group: group_of(b, |t| t) })
        .filter(|e| !e.group.is_zero())
        .collect();
    Ok(Homology { ring: k.ring, entries })
}

fn odd_part(mut t: i128) -> i128 {
    while t != 0 && t % 2 == 0 {
        t /= 2;
    }
    t
}

/// Homology over Z[1/2] of a Lee complex, one group per height. The
/// differential shifts q by 0 or -4, so blocks split by q mod 4.
pub fn lee_homology(k: &ChainComplex) -> Result<Homology, HomologyError> {
    check_d_squared(k)?;
    let mut by_height: BTreeMap<i32, Group> = BTreeMap::new();
    for ((h, _), b) in blocks(k, |q| q.rem_euclid(4))? {
        let g = group_of(&b, odd_part);
        let e = by_height.entry(h).or_default();
        e.free += g.free;
        e.torsion.extend(g.torsion);
        e.torsion.sort_unstable();
    }
    let entries = by_height
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(h, group)| Entry { height: h, q: None, group })
        .collect();
    Ok(Homology { ring: k.ring, entries })
}

pub fn khovanov(d: &LinkDiagram) -> Result<Homology, HomologyError> {
    homology(&ChainComplex::build(d, Ring::Graded))
}

pub fn lee(d: &LinkDiagram) -> Result<Homology, HomologyError> {
    lee_homology(&ChainComplex::build(d, Ring::Lee))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    /// (h, q, rank of Kh ⊗ Z[1/2])
    pub kh_ranks: Vec<(i32, i32, usize)>,
    /// Same ranks at E_2^{i,j} with i = h + q, j = q.
    pub e2: Vec<(i32, i32, usize)>,
    pub e2_total: usize,
    pub e_inf_total: usize,
    pub deficit: i64,
    /// deficit is even and nonnegative
    pub ok: bool,
}

pub fn spectral_report(kh: &Homology, lee: &Homology) -> SpectralReport {
    let kh_ranks: Vec<(i32, i32, usize)> = kh
        .entries
        .iter()
        .filter(|e| e.group.free > 0)
        .map(|e| (e.height, e.q.unwrap_or(0), e.group.free))
        .collect();
    let mut e2: Vec<(i32, i32, usize)> = kh_ranks.iter().map(|&(h, q, r)| (h + q, q, r)).collect();
    e2.sort_unstable();
    let e2_total = kh.total_rank();
    let e_inf_total = lee.total_rank();
    let deficit = e2_total as i64 - e_inf_total as i64;
    SpectralReport { kh_ranks, e2, e2_total, e_inf_total, deficit, ok: deficit >= 0 && deficit % 2 == 0 }
}

/// The chain of a sign assignment on components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeeClass {
    pub epsilon: Vec<i8>,
    pub state: State,
    pub height: i32,
    /// Nonzero coefficients as (generator index at `height`, value).
    pub chain: Vec<(usize, i64)>,
    pub cycle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeeClassReport {
    pub classes: Vec<LeeClass>,
    pub all_cycles: bool,
    /// Classes at each height are independent modulo boundaries.
    pub independent: bool,
    /// Classes and boundaries generate all cycles after inverting 2.
    pub spans: bool,
}

/// Label pairs (0 = 1 + X, 1 = 1 - X) allowed on the two circles meeting at
/// a crossing: killed by the outgoing merge, or missed by the incoming split.
fn allowed_pairs(d: &LinkDiagram, resolver: &Resolver, s: State, c: usize) -> Option<(usize, usize, bool)> {
    let table = saddle_table(Ring::Lee);
    let here = resolver.resolve(s);
    let label = |l: usize| -> [i64; 2] { [1, if l == 0 { 1 } else { -1 }] };
    let mut allowed = [[false; 2]; 2];
    let (i, j);
    if !resolution::bit(s, c) {
        let tgt = resolver.resolve(s | 1 << c);
        let e = cube_edge(d, &here, &tgt, c);
        let EdgeKind::Merge { first, second, into } = e.kind else { return None };
        (i, j) = (first, second);
        let (ei, ej, ek) = (here.circles[i].parity, here.circles[j].parity, tgt.circles[into].parity);
        for li in 0..2 {
            for lj in 0..2 {
                let mut out = [0i64; 2];
                for (xi, ci) in label(li).into_iter().enumerate() {
                    for (xj, cj) in label(lj).into_iter().enumerate() {
                        let m = table.merge(xi, xj, ei, ej, ek);
                        out[0] += ci * cj * m[0];
                        out[1] += ci * cj * m[1];
                    }
                }
                allowed[li][lj] = out == [0, 0];
            }
        }
    } else {
        let src = resolver.resolve(s & !(1 << c));
        let e = cube_edge(d, &src, &here, c);
        let EdgeKind::Split { from, first, second } = e.kind else { return None };
        (i, j) = (first, second);
        let (ek, ei, ej) = (src.circles[from].parity, here.circles[i].parity, here.circles[j].parity);
        allowed = [[true; 2]; 2];
        for l in 0..2 {
            let mut v = [[0i64; 2]; 2];
            for (x, cx) in label(l).into_iter().enumerate() {
                let m = table.split(x, ek, ei, ej);
                for a in 0..2 {
                    for b in 0..2 {
                        v[a][b] += cx * m[a][b];
                    }
                }
            }
            // v is a multiple of label(li) ⊗ label(lj): read the pair off
            // the signs of the X coefficients
            let li = usize::from(v[1][0] != v[0][0]);
            let lj = usize::from(v[0][1] != v[0][0]);
            if v[0][0] == 0 || v[1][1] != v[1][0] * v[0][1] / v[0][0] {
                return None;
            }
            allowed[li][lj] = false;
        }
    }
    match allowed {
        [[true, false], [false, true]] => Some((i, j, true)),
        [[false, true], [true, false]] => Some((i, j, false)),
        _ => None,
    }
}

/// Resolution state determined by a sign assignment: oriented where both
/// strands carry the same sign, double otherwise.
pub fn lee_state(d: &LinkDiagram, epsilon: &[i8]) -> State {
    let mut s: State = 0;
    for c in 0..d.crossing_count() {
        let under = d.component_of(d.label(End::new(c, 0)));
        let over = d.component_of(d.label(End::new(c, 1)));
        let want = if epsilon[under] == epsilon[over] { Smoothing::Oriented } else { Smoothing::Double };
        if resolution::smoothing(d.sign(c), true) == want {
            s |= 1 << c;
        }
    }
    s
}

/// Labels (0 = 1 + X, 1 = 1 - X) per circle for a sign assignment.
fn lee_labels(d: &LinkDiagram, epsilon: &[i8]) -> Result<(State, Vec<usize>), HomologyError> {
    let s = lee_state(d, epsilon);
    let resolver = Resolver::new(d);
    let res = resolver.resolve(s);
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); res.len()];
    for c in 0..d.crossing_count() {
        let (i, j, equal) = allowed_pairs(d, &resolver, s, c).ok_or(HomologyError::LeeLabels { crossing: c })?;
        adj[i].push((j, equal));
        adj[j].push((i, equal));
    }
    // seed each connected piece at its smallest arc, labelled by that arc's sign
    let mut seeds: Vec<(usize, usize)> = Vec::new();
    for (i, circ) in res.circles.iter().enumerate() {
        let comp = match circ.arcs.first() {
            Some(&a) => d.component_of(a),
            None => d.arc_components().len() + i - (res.len() - d.free_loops()),
        };
        seeds.push((i, usize::from(epsilon[comp] < 0)));
    }
    seeds.sort_by_key(|&(i, _)| res.circles[i].arcs.first().copied().unwrap_or(u32::MAX));
    let mut labels: Vec<Option<usize>> = vec![None; res.len()];
    for (seed, l) in seeds {
        if labels[seed].is_some() {
            continue;
        }
        labels[seed] = Some(l);
        let mut queue = VecDeque::from([seed]);
        while let Some(i) = queue.pop_front() {
            let li = labels[i].unwrap();
            for &(j, equal) in &adj[i] {
                let lj = if equal { li } else { 1 - li };
                match labels[j] {
                    None => {
                        labels[j] = Some(lj);
                        queue.push_back(j);
                    }
                    Some(x) if x != lj => return Err(HomologyError::LeeColouring),
                    Some(_) => {}
                }
            }
        }
    }
    Ok((s, labels.into_iter().map(Option::unwrap).collect()))
}

/// The 2^m canonical Lee chains, with cycle, independence and spanning checks.
pub fn lee_canonical_classes(d: &LinkDiagram, k: &ChainComplex) -> Result<LeeClassReport, HomologyError> {
    let m = d.component_count();
    let mut classes = Vec::with_capacity(1 << m);
    for bits in 0..1usize << m {
        let epsilon: Vec<i8> = (0..m).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
        let (s, labels) = lee_labels(d, &epsilon)?;
        let mut chain = Vec::with_capacity(1 << labels.len());
        let mut height = 0;
        for mask in 0..1usize << labels.len() {
            let neg = (0..labels.len()).filter(|&i| mask >> i & 1 == 1 && labels[i] == 1).count();
            let (h, idx) = k.index_of(s, mask);
            height = h;
            chain.push((idx, if neg % 2 == 0 { 1 } else { -1 }));
        }
        let dim_next = k.dim(height + 1);
        let cycle = match k.differential(height) {
            Some(dh) if dim_next > 0 => {
                let mut v = vec![0; k.dim(height)];
                for &(i, x) in &chain {
                    v[i] = x;
                }
                dh.apply(&v).iter().all(|&x| x == 0)
            }
            _ => true,
        };
        classes.push(LeeClass { epsilon, state: s, height, chain, cycle });
    }
    let all_cycles = classes.iter().all(|c| c.cycle);
    let mut independent = true;
    let mut spans = true;
    for h in k.heights() {
        let here: Vec<&LeeClass> = classes.iter().filter(|c| c.height == h).collect();
        let dim = k.dim(h);
        // boundaries from below as columns, then the classes
        let mut cols: Vec<Vec<(usize, i64)>> = match k.differential(h - 1) {
            Some(prev) => (0..prev.cols).map(|c| prev.column(c).to_vec()).collect(),
            None => Vec::new(),
        };
        let boundary_rank = invariant_factors(&SparseMatrix::from_columns(dim, cols.clone()))?.len();
        cols.extend(here.iter().map(|c| c.chain.clone()));
        let factors = invariant_factors(&SparseMatrix::from_columns(dim, cols))?;
        independent &= factors.len() == boundary_rank + here.len();
        let out_rank = match k.differential(h) {
            Some(dh) if dh.rows > 0 => invariant_factors(dh)?.len(),
            _ => 0,
        };
        spans &= factors.len() == dim - out_rank && factors.iter().all(|&t| odd_part(t).abs() == 1);
    }
    Ok(LeeClassReport { classes, all_cycles, independent, spans })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const RIGHT_TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn unknot_homology() {
        let h = khovanov(&parse_pd("O").unwrap()).unwrap();
        assert_eq!(h.poincare(), "t^0 q^-1 + t^0 q^1");
        let curl = khovanov(&parse_pd("X[1,1,2,2]").unwrap()).unwrap();
        assert_eq!(curl, h);
        assert_eq!(h.euler_characteristic(), LaurentPoly::loop_value());
    }

    #[test]
    fn right_trefoil() {
        let d = parse_pd(RIGHT_TREFOIL).unwrap().mirror();
        let h = khovanov(&d).unwrap();
        assert_eq!(h.total_rank(), 4);
        assert_eq!(h.get(3, Some(-7)).torsion, vec![2]);
        for (a, b) in [(0, -1), (0, -3), (2, -5), (3, -9)] {
            assert_eq!(h.get(a, Some(b)).free, 1, "({a},{b})");
        }
        let l = lee(&d).unwrap();
        assert_eq!(l.total_rank(), 2);
        assert!(!l.has_torsion());
        let r = spectral_report(&h, &l);
        assert_eq!((r.e2_total, r.e_inf_total, r.deficit), (4, 2, 2));
    }

    #[test]
    fn lee_classes_small() {
        for s in ["O", RIGHT_TREFOIL, "X[1,3,2,4] X[3,1,4,2]", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", "O O"] {
            let d = parse_pd(s).unwrap();
            let k = ChainComplex::build(&d, Ring::Lee);
            let r = lee_canonical_classes(&d, &k).unwrap();
            assert_eq!(r.classes.len(), 1 << d.component_count());
            assert!(r.all_cycles && r.independent && r.spans, "{s}: {r:?}");
            assert_eq!(lee_homology(&k).unwrap().total_rank(), r.classes.len());
        }
    }
}
