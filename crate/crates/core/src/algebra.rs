//! The Frobenius algebras A = Z[X]/X^2 and A' = Z[X]/(X^2 - 1), their
//! structure maps as integer matrices, and the degree +1 saddle maps.
//!
//! Basis index 0 is `1`, index 1 is `X`. A basis word of length k is indexed
//! with the first tensor factor as the most significant bit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Graded,
    Lee,
}

impl Ring {
    /// Value of X^2 as a multiple of 1.
    fn x_squared(self) -> i64 {
        match self {
            Ring::Graded => 0,
            Ring::Lee => 1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("ring mismatch")]
    RingMismatch,
}

/// a*1 + b*X
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub ring: Ring,
    pub a: i64,
    pub b: i64,
}

impl AlgebraElement {
    pub fn new(ring: Ring, a: i64, b: i64) -> Self {
        AlgebraElement { ring, a, b }
    }

    pub fn one(ring: Ring) -> Self {
        Self::new(ring, 1, 0)
    }

    pub fn x(ring: Ring) -> Self {
        Self::new(ring, 0, 1)
    }

    pub fn basis(ring: Ring, i: usize) -> Self {
        if i == 0 {
            Self::one(ring)
        } else {
            Self::x(ring)
        }
    }

    pub fn coords(self) -> [i64; 2] {
        [self.a, self.b]
    }

    pub fn try_mul(self, o: Self) -> Result<Self, AlgebraError> {
        if self.ring != o.ring {
            return Err(AlgebraError::RingMismatch);
        }
        let x2 = self.ring.x_squared();
        Ok(Self::new(self.ring, self.a * o.a + x2 * self.b * o.b, self.a * o.b + self.b * o.a))
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.ring, self.a, -self.b)
    }

    pub fn counit(self) -> i64 {
        self.b
    }

    /// Multiplication by X, the marked point.
    pub fn point(self) -> Self {
        Self::x(self.ring) * self
    }

    /// Degree in the graded ring, if homogeneous.
    pub fn degree(self) -> Option<i32> {
        match (self.a, self.b) {
            (0, 0) => None,
            (_, 0) => Some(1),
            (0, _) => Some(-1),
            _ => None,
        }
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, o: Self) -> Self {
        self.try_mul(o).expect("ring mismatch")
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        Self::new(self.ring, self.a + o.a, self.b + o.b)
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        Self::new(self.ring, -self.a, -self.b)
    }
}

/// ε(x · conj(y))
pub fn pairing(x: AlgebraElement, y: AlgebraElement) -> Result<i64, AlgebraError> {
    Ok(x.try_mul(y.conjugate())?.counit())
}

/// Integer matrix of a map between tensor powers of A.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinMap {
    pub arity_in: u32,
    pub arity_out: u32,
    /// row-major, rows indexed by output words
    pub data: Vec<i64>,
}

impl LinMap {
    pub fn zero(arity_in: u32, arity_out: u32) -> Self {
        LinMap { arity_in, arity_out, data: vec![0; (1 << arity_in) * (1 << arity_out)] }
    }

    pub fn identity(k: u32) -> Self {
        let mut m = Self::zero(k, k);
        for i in 0..1 << k {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        1 << self.arity_out
    }

    pub fn cols(&self) -> usize {
        1 << self.arity_in
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        let cols = self.cols();
        self.data[r * cols + c] = v;
    }

    pub fn compose(&self, inner: &LinMap) -> LinMap {
        assert_eq!(self.arity_in, inner.arity_out);
        let mut m = LinMap::zero(inner.arity_in, self.arity_out);
        for r in 0..self.rows() {
            for k in 0..self.cols() {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..inner.cols() {
                    let v = m.get(r, c) + a * inner.get(k, c);
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    pub fn tensor(&self, o: &LinMap) -> LinMap {
        let mut m = LinMap::zero(self.arity_in + o.arity_in, self.arity_out + o.arity_out);
        for r1 in 0..self.rows() {
            for c1 in 0..self.cols() {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..o.rows() {
                    for c2 in 0..o.cols() {
                        m.set(r1 * o.rows() + r2, c1 * o.cols() + c2, a * o.get(r2, c2));
                    }
                }
            }
        }
        m
    }

    pub fn scale(&self, k: i64) -> LinMap {
        LinMap { data: self.data.iter().map(|v| v * k).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &LinMap) -> LinMap {
        assert_eq!((self.arity_in, self.arity_out), (o.arity_in, o.arity_out));
        LinMap { data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &LinMap) -> LinMap {
        self.add(&o.scale(-1))
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Whether every nonzero entry shifts the graded degree by `degree`.
    pub fn is_homogeneous(&self, degree: i32) -> bool {
        (0..self.rows()).all(|r| {
            (0..self.cols()).all(|c| {
                self.get(r, c) == 0
                    || word_degree(r, self.arity_out) - word_degree(c, self.arity_in) == degree
            })
        })
    }

    pub fn determinant2(&self) -> i64 {
        assert_eq!((self.rows(), self.cols()), (2, 2));
        self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)
    }
}

/// #1's - #X's in a basis word.
pub fn word_degree(w: usize, k: u32) -> i32 {
    k as i32 - 2 * w.count_ones() as i32
}

fn from_elements(arity_in: u32, cols: &[AlgebraElement]) -> LinMap {
    let mut m = LinMap::zero(arity_in, 1);
    for (c, e) in cols.iter().enumerate() {
        m.set(0, c, e.a);
        m.set(1, c, e.b);
    }
    m
}

pub fn unit(_ring: Ring) -> LinMap {
    let mut m = LinMap::zero(0, 1);
    m.set(0, 0, 1);
    m
}

pub fn counit(ring: Ring) -> LinMap {
    let mut m = LinMap::zero(1, 0);
    for i in 0..2 {
        m.set(0, i, AlgebraElement::basis(ring, i).counit());
    }
    m
}

pub fn mult(ring: Ring) -> LinMap {
    let cols: Vec<AlgebraElement> = (0..4)
        .map(|w| AlgebraElement::basis(ring, w >> 1) * AlgebraElement::basis(ring, w & 1))
        .collect();
    from_elements(2, &cols)
}

/// Comultiplication dual to the pairing ε(ab): Δ(1) = Σ G^{-1}_{ij} e_i ⊗ e_j
/// and Δ(x) = (x ⊗ 1)Δ(1).
pub fn comult(ring: Ring) -> LinMap {
    let inv = gram_inverse(ring);
    let m = mult(ring);
    let mut d1 = [0i64; 4];
    for i in 0..2 {
        for j in 0..2 {
            d1[i * 2 + j] = inv[i][j];
        }
    }
    let mut out = LinMap::zero(1, 2);
    for x in 0..2 {
        // (x ⊗ 1) acting on the first factor
        let left = {
            let mut l = LinMap::zero(1, 1);
            for c in 0..2 {
                l.set(0, c, m.get(0, x * 2 + c));
                l.set(1, c, m.get(1, x * 2 + c));
            }
            l
        };
        let v = left.tensor(&LinMap::identity(1)).apply(&d1);
        for (r, val) in v.into_iter().enumerate() {
            out.set(r, x, val);
        }
    }
    out
}

/// Inverse of the Gram matrix ε(e_i e_j), which is unimodular for both rings.
fn gram_inverse(ring: Ring) -> [[i64; 2]; 2] {
    let g = |i, j| (AlgebraElement::basis(ring, i) * AlgebraElement::basis(ring, j)).counit();
    let (a, b, c, d) = (g(0, 0), g(0, 1), g(1, 0), g(1, 1));
    let det = a * d - b * c;
    assert!(det == 1 || det == -1, "Frobenius form is not unimodular");
    [[d * det, -b * det], [-c * det, a * det]]
}

pub fn conjugation(ring: Ring) -> LinMap {
    let cols: Vec<AlgebraElement> = (0..2).map(|i| AlgebraElement::basis(ring, i).conjugate()).collect();
    from_elements(1, &cols)
}

pub fn point(ring: Ring) -> LinMap {
    let cols: Vec<AlgebraElement> = (0..2).map(|i| AlgebraElement::basis(ring, i).point()).collect();
    from_elements(1, &cols)
}

pub fn pairing_matrix(ring: Ring) -> LinMap {
    let mut m = LinMap::zero(1, 1);
    for i in 0..2 {
        for j in 0..2 {
            let v = pairing(AlgebraElement::basis(ring, i), AlgebraElement::basis(ring, j)).unwrap();
            m.set(i, j, v);
        }
    }
    m
}

/// The two orthogonal idempotents x ↦ ε(Xx)·1 and x ↦ ε(x)·X.
pub fn idempotents(ring: Ring) -> [LinMap; 2] {
    let p1: Vec<AlgebraElement> = (0..2)
        .map(|i| AlgebraElement::new(ring, AlgebraElement::basis(ring, i).point().counit(), 0))
        .collect();
    let p2: Vec<AlgebraElement> = (0..2)
        .map(|i| AlgebraElement::new(ring, 0, AlgebraElement::basis(ring, i).counit()))
        .collect();
    [from_elements(1, &p1), from_elements(1, &p2)]
}

/// Neck cutting x = Σ ε(x e_i) e_i^∨ with the dual basis of the Frobenius form.
pub fn surgery(ring: Ring) -> LinMap {
    let inv = gram_inverse(ring);
    let mut m = LinMap::zero(1, 1);
    for x in 0..2 {
        let xe = AlgebraElement::basis(ring, x);
        for i in 0..2 {
            let e = (xe * AlgebraElement::basis(ring, i)).counit();
            // dual of e_i is Σ_j inv[i][j] e_j
            for j in 0..2 {
                let v = m.get(j, x) + e * inv[i][j];
                m.set(j, x, v);
            }
        }
    }
    m
}

/// The flip of tensor factors on A ⊗ A.
pub fn swap() -> LinMap {
    let mut m = LinMap::zero(2, 2);
    for w in 0..4 {
        m.set(((w & 1) << 1) | (w >> 1), w, 1);
    }
    m
}

/// The marked point transported to the degree +1 frame by exchanging 1 and X:
/// X ↦ 1 and 1 ↦ X^2.
pub fn dot(ring: Ring) -> LinMap {
    let mut m = LinMap::zero(1, 1);
    m.set(0, 1, 1);
    m.set(1, 0, ring.x_squared());
    m
}

/// Multiplication and comultiplication with the roles of 1 and X exchanged,
/// so that X is the unit. These are degree +1 maps.
pub fn exchanged_structure(ring: Ring) -> (LinMap, LinMap) {
    let mut s = LinMap::zero(1, 1);
    s.set(0, 1, 1);
    s.set(1, 0, 1);
    let ss = s.tensor(&s);
    (s.compose(&mult(ring)).compose(&ss), ss.compose(&comult(ring)).compose(&s))
}

/// Coefficients of the merge μ: A⊗A → A and split σ: A → A⊗A.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SaddleTable {
    pub ring: Ring,
    pub mu: LinMap,
    pub sigma: LinMap,
}

impl SaddleTable {
    /// μ(1⊗1) = κX, μ(1⊗X) = α, μ(X⊗1) = β, μ(X⊗X) = γX,
    /// σ(1) = a 1⊗1 + d X⊗X, σ(X) = b 1⊗X + c X⊗1.
    pub fn from_coefficients(ring: Ring, p: [i64; 8]) -> Self {
        let [alpha, beta, gamma, a, b, c, kappa, d] = p;
        let mut mu = LinMap::zero(2, 1);
        mu.set(1, 0, kappa);
        mu.set(0, 1, alpha);
        mu.set(0, 2, beta);
        mu.set(1, 3, gamma);
        let mut sigma = LinMap::zero(1, 2);
        sigma.set(0, 0, a);
        sigma.set(3, 0, d);
        sigma.set(1, 1, b);
        sigma.set(2, 1, c);
        SaddleTable { ring, mu, sigma }
    }

    pub fn neg(&self) -> Self {
        SaddleTable { ring: self.ring, mu: self.mu.scale(-1), sigma: self.sigma.scale(-1) }
    }

    /// Exchange the roles of the two strands.
    pub fn swapped(&self) -> Self {
        SaddleTable { ring: self.ring, mu: self.mu.compose(&swap()), sigma: swap().compose(&self.sigma) }
    }

    /// μ ∘ (id ⊗ conj) and (id ⊗ conj) ∘ σ.
    pub fn conjugated(&self) -> (LinMap, LinMap) {
        let ic = LinMap::identity(1).tensor(&conjugation(self.ring));
        (self.mu.compose(&ic), ic.compose(&self.sigma))
    }

    /// Coefficients [of 1, of X] of the merge of labels `xi` (first strand)
    /// and `xj`, with circle parities `e`.
    pub fn merge(&self, xi: usize, xj: usize, ei: bool, ej: bool, ek: bool) -> [i64; 2] {
        let s_in = parity_sign(ei, xi) * parity_sign(!ej, xj);
        let col = xi * 2 + xj;
        [
            s_in * self.mu.get(0, col),
            s_in * parity_sign(ek, 1) * self.mu.get(1, col),
        ]
    }

    /// Coefficients indexed [yi][yj] of the split of label `x`.
    pub fn split(&self, x: usize, ek: bool, ei: bool, ej: bool) -> [[i64; 2]; 2] {
        let s_in = parity_sign(ek, x);
        let mut out = [[0; 2]; 2];
        for yi in 0..2 {
            for yj in 0..2 {
                out[yi][yj] = s_in
                    * parity_sign(ei, yi)
                    * parity_sign(!ej, yj)
                    * self.sigma.get(yi * 2 + yj, x);
            }
        }
        out
    }
}

/// Sign of conj^e on basis element `x`.
fn parity_sign(e: bool, x: usize) -> i64 {
    if e && x == 1 {
        -1
    } else {
        1
    }
}

impl fmt::Display for SaddleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = ["1", "X"];
        let elem = |a: i64, b: i64| -> String {
            let mut parts = Vec::new();
            if a != 0 {
                parts.push(format!("{a}"));
            }
            if b != 0 {
                parts.push(format!("{b}X"));
            }
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        for w in 0..4 {
            let col = w;
            writeln!(
                f,
                "mu({}⊗{}) = {}",
                name[w >> 1],
                name[w & 1],
                elem(self.mu.get(0, col), self.mu.get(1, col))
            )?;
        }
        for x in 0..2 {
            let terms: Vec<String> = (0..4)
                .filter(|&w| self.sigma.get(w, x) != 0)
                .map(|w| format!("{}·{}⊗{}", self.sigma.get(w, x), name[w >> 1], name[w & 1]))
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            writeln!(f, "sigma({}) = {}", name[x], rhs)?;
        }
        Ok(())
    }
}

/// Which determining relations a candidate satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelationCheck {
    /// σ∘μ = dot⊗id - id⊗dot
    pub bigon: bool,
    /// μ∘σ = 2·dot
    pub four_terms: bool,
    /// the conjugated maps make all squares commute
    pub squares: bool,
    /// moving a dot across the membrane changes sign
    pub point_sign: bool,
}

impl RelationCheck {
    pub fn all(&self) -> bool {
        self.bigon && self.four_terms && self.squares && self.point_sign
    }
}

pub fn check_relations(t: &SaddleTable) -> RelationCheck {
    let ring = t.ring;
    let i1 = LinMap::identity(1);
    let p = dot(ring);
    let bigon = t.sigma.compose(&t.mu) == p.tensor(&i1).sub(&i1.tensor(&p));
    let four_terms = t.mu.compose(&t.sigma) == p.scale(2);
    let point_sign = t.mu.compose(&p.tensor(&i1)) == t.mu.compose(&i1.tensor(&p)).scale(-1)
        && p.tensor(&i1).compose(&t.sigma) == i1.tensor(&p).compose(&t.sigma).scale(-1);
    let (m, s) = t.conjugated();
    let sw = swap();
    let squares = m.compose(&sw) == m
        && sw.compose(&s) == s
        && m.compose(&m.tensor(&i1)) == m.compose(&i1.tensor(&m))
        && s.tensor(&i1).compose(&s) == i1.tensor(&s).compose(&s)
        && m.tensor(&i1).compose(&i1.tensor(&s)) == s.compose(&m)
        && i1.tensor(&m).compose(&s.tensor(&i1)) == s.compose(&m);
    RelationCheck { bigon, four_terms, squares, point_sign }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub ring: Ring,
    pub range: i64,
    pub candidates: u64,
    pub solutions: Vec<SaddleTable>,
    /// Solutions grouped into orbits under global sign and strand swap.
    pub classes: Vec<Vec<usize>>,
}

impl SolveReport {
    /// The representative with σ(1) having coefficient +1 on 1⊗1.
    pub fn normalized(&self) -> Option<&SaddleTable> {
        self.solutions.iter().find(|t| t.sigma.get(0, 0) > 0)
    }
}

/// Exhaustive search over coefficients in `-range..=range`, widening the
/// range until a solution appears (up to 4).
pub fn solve_saddle_coefficients(ring: Ring) -> SolveReport {
    let mut range = 2;
    loop {
        let r = solve_in_range(ring, range);
        if !r.solutions.is_empty() || range >= 4 {
            return r;
        }
        range += 1;
    }
}

pub fn solve_in_range(ring: Ring, range: i64) -> SolveReport {
    // the graded ring forces κ = d = 0 by degree
    let free = match ring {
        Ring::Graded => 6,
        Ring::Lee => 8,
    };
    let span = (2 * range + 1) as u64;
    let total = span.pow(free);
    let mut solutions = Vec::new();
    for idx in 0..total {
        let mut p = [0i64; 8];
        let mut k = idx;
        for slot in p.iter_mut().take(free as usize) {
            *slot = (k % span) as i64 - range;
            k /= span;
        }
        let t = SaddleTable::from_coefficients(ring, p);
        // cheap necessary condition first
        if t.mu.compose(&t.sigma) != dot(ring).scale(2) {
            continue;
        }
        if check_relations(&t).all() {
            solutions.push(t);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; solutions.len()];
    for i in 0..solutions.len() {
        if assigned[i] {
            continue;
        }
        let s = &solutions[i];
        let orbit = [s.clone(), s.neg(), s.swapped(), s.swapped().neg()];
        let members: Vec<usize> = (0..solutions.len())
            .filter(|&j| orbit.contains(&solutions[j]))
            .collect();
        for &j in &members {
            assigned[j] = true;
        }
        classes.push(members);
    }
    SolveReport { ring, range, candidates: total, solutions, classes }
}

/// The solved and normalized saddle table for a ring, computed once.
pub fn saddle_table(ring: Ring) -> &'static SaddleTable {
    use std::sync::OnceLock;
    static GRADED: OnceLock<SaddleTable> = OnceLock::new();
    static LEE: OnceLock<SaddleTable> = OnceLock::new();
    let cell = match ring {
        Ring::Graded => &GRADED,
        Ring::Lee => &LEE,
    };
    cell.get_or_init(|| {
        solve_saddle_coefficients(ring)
            .normalized()
            .cloned()
            .expect("saddle relations have a solution")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_examples() {
        let g = Ring::Graded;
        assert_eq!(AlgebraElement::x(g) * AlgebraElement::x(g), AlgebraElement::new(g, 0, 0));
        let l = Ring::Lee;
        assert_eq!(AlgebraElement::x(l) * AlgebraElement::x(l), AlgebraElement::one(l));
        assert_eq!(
            AlgebraElement::x(g).try_mul(AlgebraElement::x(l)),
            Err(AlgebraError::RingMismatch)
        );
    }

    #[test]
    fn comult_values() {
        let d = comult(Ring::Graded);
        // Δ(1) = 1⊗X + X⊗1, Δ(X) = X⊗X
        assert_eq!((0..4).map(|r| d.get(r, 0)).collect::<Vec<_>>(), vec![0, 1, 1, 0]);
        assert_eq!((0..4).map(|r| d.get(r, 1)).collect::<Vec<_>>(), vec![0, 0, 0, 1]);
        let d = comult(Ring::Lee);
        assert_eq!((0..4).map(|r| d.get(r, 1)).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn pairing_values() {
        let g = Ring::Graded;
        let (one, x) = (AlgebraElement::one(g), AlgebraElement::x(g));
        assert_eq!(pairing(one, x), Ok(-1));
        assert_eq!(pairing(x, one), Ok(1));
        assert_eq!(pairing(one, one), Ok(0));
        assert_eq!(pairing(x, x), Ok(0));
    }

    #[test]
    fn graded_solution() {
        let t = saddle_table(Ring::Graded);
        assert_eq!(t.mu.get(0, 1), -1);
        assert_eq!(t.mu.get(0, 2), 1);
        assert_eq!(t.mu.get(1, 3), -1);
        assert!(t.mu.is_homogeneous(1));
        assert!(t.sigma.is_homogeneous(1));
        let (m, s) = t.conjugated();
        assert_eq!((m, s), exchanged_structure(Ring::Graded));
    }
}
