//! Laurent polynomials in q and the decategorified invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::diagram::LinkDiagram;
use crate::resolution::{self, Resolver};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    /// exponent -> nonzero coefficient
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    /// q + q^-1
    pub fn loop_value() -> Self {
        Self::monomial(1, 1) + Self::monomial(1, -1)
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (exponent, coefficient) pairs in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc * self.clone())
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Substitute q -> q^-1.
    pub fn invert(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, *c)).collect() }
    }

    pub fn scale_exp(&self, shift: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + shift, *c)).collect() }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (e, c) in rhs.terms {
            self.add_term(c, e);
        }
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

/// Terms in descending exponent order, e.g. `q^1 + q^-1` or `1 - 2*q^-4`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (neg, a) = (*c < 0, c.unsigned_abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (*e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "q^{e}")?,
                _ => write!(f, "{a}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Sum over states of (-1)^{d_s} q^{-(w+s)} (q + q^-1)^{circles}.
pub fn bracket_state_sum(d: &LinkDiagram) -> LaurentPoly {
    let r = Resolver::new(d);
    // collect by (sign, exponent shift, circle count) before expanding
    let mut counts: BTreeMap<(i32, u32), i64> = BTreeMap::new();
    for s in resolution::enumerate_states(d) {
        let ds = resolution::double_crossings(d, s).len();
        let k = r.resolve(s).len() as u32;
        let sign = if ds % 2 == 0 { 1 } else { -1 };
        *counts.entry((resolution::q_shift(d, s), k)).or_insert(0) += sign;
    }
    let lv = LaurentPoly::loop_value();
    counts
        .into_iter()
        .fold(LaurentPoly::zero(), |acc, ((shift, k), c)| {
            acc + LaurentPoly::monomial(c, shift) * lv.pow(k)
        })
}

/// Jones polynomial from the unoriented Kauffman bracket, in the variable q
/// with A^2 = -q, multiplied by q + q^-1.
pub fn jones_via_kauffman(d: &LinkDiagram) -> LaurentPoly {
    let n = d.crossing_count();
    if n == 0 && d.free_loops() == 0 {
        return LaurentPoly::one();
    }
    // unoriented states: A-smoothing joins (0,1),(2,3), B-smoothing (0,3),(1,2);
    // exponents are in the variable A
    let labels: Vec<u32> = d.arcs().map(|(a, _)| a).collect();
    let index = |a: u32| labels.binary_search(&a).unwrap();
    let mut bracket = LaurentPoly::zero();
    let delta = -(LaurentPoly::monomial(1, 2) + LaurentPoly::monomial(1, -2));
    for s in 0u64..(1 << n) {
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for (c, e) in d.crossings().iter().enumerate() {
            let pairs = if s >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
            for (p, q) in pairs {
                let a = root(&mut parent, index(e[p]));
                let b = root(&mut parent, index(e[q]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let loops = (0..labels.len()).filter(|&i| parent[i] == i).count() + d.free_loops();
        let b_count = s.count_ones() as i32;
        let a_count = n as i32 - b_count;
        bracket = bracket + LaurentPoly::monomial(1, a_count - b_count) * delta.pow(loops as u32 - 1);
    }
    // writhe normalisation (-A^3)^{-w}
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let f = bracket * LaurentPoly::monomial(sign, -3 * w);
    let mut jones = LaurentPoly::zero();
    for (e, c) in f.terms() {
        assert!(e % 2 == 0, "odd power of A in a normalised bracket");
        let j = e / 2;
        jones.add_term(if j % 2 == 0 { c } else { -c }, j);
    }
    jones * LaurentPoly::loop_value()
}

/// q^2 <D+> - q^-2 <D-> = (q - q^-1) <D0>
pub fn verify_skein(dplus: &LinkDiagram, dminus: &LinkDiagram, dzero: &LinkDiagram) -> bool {
    let lhs = LaurentPoly::monomial(1, 2) * bracket_state_sum(dplus)
        - LaurentPoly::monomial(1, -2) * bracket_state_sum(dminus);
    let rhs = (LaurentPoly::monomial(1, 1) - LaurentPoly::monomial(1, -1)) * bracket_state_sum(dzero);
    lhs == rhs
}

/// The skein triple at crossing `c`: (positive version, negative version, smoothing).
pub fn skein_triple(d: &LinkDiagram, c: usize) -> (LinkDiagram, LinkDiagram, LinkDiagram) {
    let other = d.switch(c);
    let zero = d.smooth(c);
    match d.sign(c) {
        crate::Sign::Positive => (d.clone(), other, zero),
        crate::Sign::Negative => (other, d.clone(), zero),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn display() {
        assert_eq!(LaurentPoly::loop_value().to_string(), "q^1 + q^-1");
        let p = LaurentPoly::one() - LaurentPoly::monomial(2, -4);
        assert_eq!(p.to_string(), "1 - 2*q^-4");
        assert_eq!(LaurentPoly::monomial(-1, 3).to_string(), "-q^3");
    }

    #[test]
    fn small_brackets() {
        assert_eq!(bracket_state_sum(&parse_pd("").unwrap()), LaurentPoly::one());
        assert_eq!(bracket_state_sum(&parse_pd("O").unwrap()), LaurentPoly::loop_value());
        assert_eq!(bracket_state_sum(&parse_pd("X[1,1,2,2]").unwrap()), LaurentPoly::loop_value());
        let hopf = bracket_state_sum(&parse_pd("X[1,3,2,4] X[3,1,4,2]").unwrap());
        assert_eq!(hopf.to_string(), "1 + q^-2 + q^-4 + q^-6");
    }

    #[test]
    fn oracle_matches_on_trefoils() {
        let t = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        for d in [t.clone(), t.mirror()] {
            assert_eq!(bracket_state_sum(&d), jones_via_kauffman(&d));
        }
        assert_eq!(bracket_state_sum(&t).invert(), bracket_state_sum(&t.mirror()));
        assert_ne!(bracket_state_sum(&t), bracket_state_sum(&t.mirror()));
    }
}
