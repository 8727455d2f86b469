//! The bigraded chain complex of a diagram.
//!
//! The summand of a state is A^{⊗k} over its circles, shifted in q by
//! -(w + s), tensored with the top exterior power of its double-edge
//! crossings. Generators of a summand are label masks: bit i set means circle
//! i carries X.

mod r1;

pub use r1::{r1_chain_maps, R1Maps, R1Report};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{saddle_table, Ring, SaddleTable};
use crate::bracket::LaurentPoly;
use crate::diagram::LinkDiagram;
use crate::matrix::SparseMatrix;
use crate::resolution::{self, cube_edge, EdgeKind, EdgeTransition, Resolution, Resolver, State};

#[derive(Debug, Clone, Serialize)]
pub struct Summand {
    pub state: State,
    pub height: i32,
    pub q_shift: i32,
    pub circles: usize,
    /// Crossings with a double edge, ascending.
    pub twist_basis: Vec<usize>,
    /// Index of the first generator within its height.
    pub offset: usize,
}

impl Summand {
    pub fn rank(&self) -> usize {
        1 << self.circles
    }

    pub fn qdeg(&self, mask: usize) -> i32 {
        self.circles as i32 - 2 * mask.count_ones() as i32 + self.q_shift
    }
}

/// Deliberate corruption used as a negative control for the verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Drop the exterior-algebra sign on every edge.
    DropTwistSigns,
}

#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub ring: Ring,
    pub min_height: i32,
    /// Summands per height, in ascending state order.
    pub groups: Vec<Vec<Summand>>,
    /// d_h from height h to h + 1, indexed like `groups`; the last is empty.
    pub differentials: Vec<SparseMatrix>,
    /// Resolution of every state.
    pub resolutions: Vec<Resolution>,
    /// (height index, summand index) of every state.
    pub locate: Vec<(usize, usize)>,
}

/// Sign of the wedge or contraction at crossing `c` from state `s`:
/// (-1) to the number of double-edge crossings above `c`.
pub fn twist_sign(d: &LinkDiagram, s: State, c: usize) -> i64 {
    let above = (c + 1..d.crossing_count())
        .filter(|&c2| resolution::smoothing(d.sign(c2), resolution::bit(s, c2)) == resolution::Smoothing::Double)
        .count();
    if above % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Image of label mask `x` under the untwisted saddle of an edge.
pub fn saddle_image(
    table: &SaddleTable,
    src: &Resolution,
    tgt: &Resolution,
    t: &EdgeTransition,
    x: usize,
) -> Vec<(usize, i64)> {
    let mut base = 0usize;
    for (i, &j) in t.circle_map.iter().enumerate() {
        let touched = match t.kind {
            EdgeKind::Merge { first, second, .. } => i == first || i == second,
            EdgeKind::Split { from, .. } => i == from,
        };
        if !touched && x >> i & 1 == 1 {
            base |= 1 << j;
        }
    }
    let par = |r: &Resolution, i: usize| r.circles[i].parity;
    let mut out = Vec::with_capacity(4);
    match t.kind {
        EdgeKind::Merge { first, second, into } => {
            let v = table.merge(
                x >> first & 1,
                x >> second & 1,
                par(src, first),
                par(src, second),
                par(tgt, into),
            );
            for (y, &c) in v.iter().enumerate() {
                if c != 0 {
                    out.push((base | y << into, c));
                }
            }
        }
        EdgeKind::Split { from, first, second } => {
            let v = table.split(x >> from & 1, par(src, from), par(tgt, first), par(tgt, second));
            for (yi, row) in v.iter().enumerate() {
                for (yj, &c) in row.iter().enumerate() {
                    if c != 0 {
                        out.push((base | yi << first | yj << second, c));
                    }
                }
            }
        }
    }
    out
}

impl ChainComplex {
    pub fn build(d: &LinkDiagram, ring: Ring) -> ChainComplex {
        Self::build_with(d, ring, Fault::None)
    }

    pub fn build_with(d: &LinkDiagram, ring: Ring, fault: Fault) -> ChainComplex {
        let table = saddle_table(ring);
        let n = d.crossing_count();
        let resolver = Resolver::new(d);
        let states: Vec<State> = resolution::enumerate_states(d).collect();
        let resolutions: Vec<Resolution> = states.par_iter().map(|&s| resolver.resolve(s)).collect();
        let min_height = -(d.negative_count() as i32);
        let mut groups: Vec<Vec<Summand>> = vec![Vec::new(); n + 1];
        let mut locate = vec![(0, 0); states.len()];
        for &s in &states {
            let h = resolution::height(d, s);
            let hi = (h - min_height) as usize;
            let offset = groups[hi].last().map_or(0, |m: &Summand| m.offset + m.rank());
            locate[s as usize] = (hi, groups[hi].len());
            groups[hi].push(Summand {
                state: s,
                height: h,
                q_shift: resolution::q_shift(d, s),
                circles: resolutions[s as usize].len(),
                twist_basis: resolution::double_crossings(d, s),
                offset,
            });
        }
        let dims: Vec<usize> = groups.iter().map(|g| g.last().map_or(0, |m| m.offset + m.rank())).collect();
        let differentials = (0..groups.len())
            .into_par_iter()
            .map(|hi| {
                if hi + 1 >= groups.len() {
                    return SparseMatrix::zero(0, dims[hi]);
                }
                let cols: Vec<Vec<(usize, i64)>> = groups[hi]
                    .par_iter()
                    .flat_map_iter(|sm| {
                        let src = &resolutions[sm.state as usize];
                        let edges: Vec<(i64, &Resolution, EdgeTransition, usize)> = (0..n)
                            .filter(|&c| !resolution::bit(sm.state, c))
                            .map(|c| {
                                let t_state = sm.state | 1 << c;
                                let tgt = &resolutions[t_state as usize];
                                let sign = match fault {
                                    Fault::None => twist_sign(d, sm.state, c),
                                    Fault::DropTwistSigns => 1,
                                };
                                let (_, ti) = locate[t_state as usize];
                                let off = groups[hi + 1][ti].offset;
                                (sign, tgt, cube_edge(d, src, tgt, c), off)
                            })
                            .collect();
                        (0..sm.rank()).map(move |x| {
                            let mut col = Vec::new();
                            for (sign, tgt, t, off) in &edges {
                                for (y, v) in saddle_image(table, src, tgt, t, x) {
                                    col.push((off + y, sign * v));
                                }
                            }
                            col
                        })
                    })
                    .collect();
                SparseMatrix::from_columns(dims[hi + 1], cols)
            })
            .collect();
        ChainComplex { ring, min_height, groups, differentials, resolutions, locate }
    }

    pub fn max_height(&self) -> i32 {
        self.min_height + self.groups.len() as i32 - 1
    }

    pub fn heights(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.groups.len()).map(|i| self.min_height + i as i32)
    }

    pub fn dim(&self, h: i32) -> usize {
        self.group(h).map_or(0, |g| g.last().map_or(0, |m| m.offset + m.rank()))
    }

    pub fn group(&self, h: i32) -> Option<&[Summand]> {
        let i = h - self.min_height;
        (i >= 0 && (i as usize) < self.groups.len()).then(|| self.groups[i as usize].as_slice())
    }

    /// d_h : C^h -> C^{h+1}; `None` outside the height range.
    pub fn differential(&self, h: i32) -> Option<&SparseMatrix> {
        let i = h - self.min_height;
        (i >= 0 && (i as usize) < self.groups.len()).then(|| &self.differentials[i as usize])
    }

    pub fn total_rank(&self) -> usize {
        self.heights().map(|h| self.dim(h)).sum()
    }

    /// q-degree of every generator at height h.
    pub fn qdegrees(&self, h: i32) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.dim(h));
        for sm in self.group(h).unwrap_or(&[]) {
            for x in 0..sm.rank() {
                out.push(sm.qdeg(x));
            }
        }
        out
    }

    /// Generator index at height h of (state, mask).
    pub fn index_of(&self, s: State, mask: usize) -> (i32, usize) {
        let (hi, si) = self.locate[s as usize];
        (self.min_height + hi as i32, self.groups[hi][si].offset + mask)
    }

    /// (state, mask) of a generator at height h.
    pub fn generator(&self, h: i32, idx: usize) -> (State, usize) {
        let g = self.group(h).expect("height in range");
        let k = g.partition_point(|sm| sm.offset <= idx) - 1;
        (g[k].state, idx - g[k].offset)
    }

    /// Σ (-1)^h q^{qdeg} over generators.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for h in self.heights() {
            let sign = if h.rem_euclid(2) == 0 { 1 } else { -1 };
            for sm in self.group(h).unwrap() {
                for x in 0..sm.rank() {
                    p.add_term(sign, sm.qdeg(x));
                }
            }
        }
        p
    }

    /// Check d_{h+1} d_h = 0 everywhere, reporting the first offending square.
    pub fn verify_d_squared(&self, d: &LinkDiagram) -> DSquaredReport {
        let mut checked = 0;
        for h in self.heights() {
            let (Some(a), Some(b)) = (self.differential(h), self.differential(h + 1)) else {
                continue;
            };
            if b.rows == 0 {
                continue;
            }
            let prod = b.mul(a).expect("compatible differentials");
            checked += 1;
            let first = prod.triplets().next();
            if let Some((r, c, v)) = first {
                let (s, _) = self.generator(h, c);
                let (t, _) = self.generator(h + 2, r);
                let flipped: Vec<usize> = (0..d.crossing_count()).filter(|&i| (s ^ t) >> i & 1 == 1).collect();
                return DSquaredReport {
                    ok: false,
                    checked,
                    failure: Some(SquareFailure { height: h, state: s, crossings: flipped, entry: v }),
                };
            }
        }
        DSquaredReport { ok: true, checked, failure: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareFailure {
    pub height: i32,
    pub state: State,
    pub crossings: Vec<usize>,
    pub entry: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DSquaredReport {
    pub ok: bool,
    /// Number of consecutive pairs composed.
    pub checked: usize,
    pub failure: Option<SquareFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub squares: usize,
    pub untwisted_commute: bool,
    pub twisted_anticommute: bool,
    pub failure: Option<SquareFailure>,
}

/// Check every face of the cube: the two untwisted composites agree and the
/// twisted ones are negatives of each other.
pub fn check_squares(d: &LinkDiagram, ring: Ring) -> SquareReport {
    let table = saddle_table(ring);
    let n = d.crossing_count();
    let resolver = Resolver::new(d);
    let res: Vec<Resolution> = resolution::enumerate_states(d).map(|s| resolver.resolve(s)).collect();
    let mut report = SquareReport { squares: 0, untwisted_commute: true, twisted_anticommute: true, failure: None };
    let path = |s: State, a: usize, b: usize, x: usize, twisted: bool| -> Vec<(usize, i64)> {
        let s1 = s | 1 << a;
        let s2 = s1 | 1 << b;
        let e1 = cube_edge(d, &res[s as usize], &res[s1 as usize], a);
        let e2 = cube_edge(d, &res[s1 as usize], &res[s2 as usize], b);
        let (t1, t2) = if twisted { (twist_sign(d, s, a), twist_sign(d, s1, b)) } else { (1, 1) };
        let mut acc = std::collections::BTreeMap::new();
        for (y, v) in saddle_image(table, &res[s as usize], &res[s1 as usize], &e1, x) {
            for (z, w) in saddle_image(table, &res[s1 as usize], &res[s2 as usize], &e2, y) {
                *acc.entry(z).or_insert(0) += t1 * t2 * v * w;
            }
        }
        acc.into_iter().filter(|e| e.1 != 0).collect()
    };
    for s in resolution::enumerate_states(d) {
        for a in 0..n {
            for b in a + 1..n {
                if resolution::bit(s, a) || resolution::bit(s, b) {
                    continue;
                }
                report.squares += 1;
                for x in 0..1usize << res[s as usize].len() {
                    let u1 = path(s, a, b, x, false);
                    let u2 = path(s, b, a, x, false);
                    let w1 = path(s, a, b, x, true);
                    let w2: Vec<(usize, i64)> = path(s, b, a, x, true).into_iter().map(|(z, v)| (z, -v)).collect();
                    let ok_u = u1 == u2;
                    let ok_t = w1 == w2;
                    if (!ok_u || !ok_t) && report.failure.is_none() {
                        report.failure = Some(SquareFailure {
                            height: resolution::height(d, s),
                            state: s,
                            crossings: vec![a, b],
                            entry: x as i64,
                        });
                    }
                    report.untwisted_commute &= ok_u;
                    report.twisted_anticommute &= ok_t;
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn unknot_summand() {
        let d = parse_pd("O").unwrap();
        let k = ChainComplex::build(&d, Ring::Graded);
        assert_eq!(k.groups.len(), 1);
        assert_eq!(k.dim(0), 2);
        assert_eq!(k.groups[0][0].q_shift, 0);
        assert!(k.differential(0).unwrap().is_zero());
    }

    #[test]
    fn curl_ranks_and_shifts() {
        let d = parse_pd("X[1,1,2,2]").unwrap();
        let k = ChainComplex::build(&d, Ring::Graded);
        assert_eq!((k.dim(0), k.dim(1)), (4, 2));
        assert_eq!((k.groups[0][0].q_shift, k.groups[1][0].q_shift), (-1, -2));
        let d = parse_pd("X[1,2,2,1]").unwrap();
        let k = ChainComplex::build(&d, Ring::Graded);
        assert_eq!(k.min_height, -1);
        assert_eq!((k.groups[0][0].q_shift, k.groups[1][0].q_shift), (2, 1));
    }

    #[test]
    fn twist_sign_examples() {
        // two positive crossings: state 0b10 has crossing 1 doubled
        let d = parse_pd("X[1,3,2,4] X[3,1,4,2]").unwrap();
        assert_eq!(twist_sign(&d, 0, 0), 1);
        assert_eq!(twist_sign(&d, 0b10, 0), -1);
    }

    #[test]
    fn d_squared_small() {
        for s in ["X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"] {
            let d = parse_pd(s).unwrap();
            for ring in [Ring::Graded, Ring::Lee] {
                let k = ChainComplex::build(&d, ring);
                assert!(k.verify_d_squared(&d).ok);
                let sq = check_squares(&d, ring);
                assert!(sq.untwisted_commute && sq.twisted_anticommute, "{sq:?}");
            }
            assert_eq!(
                ChainComplex::build(&d, Ring::Graded).euler_characteristic(),
                crate::bracket::bracket_state_sum(&d)
            );
        }
    }

    #[test]
    fn fault_breaks_d_squared() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let k = ChainComplex::build_with(&d, Ring::Graded, Fault::DropTwistSigns);
        let r = k.verify_d_squared(&d);
        assert!(!r.ok);
        assert_eq!(r.failure.unwrap().crossings.len(), 2);
    }
}
