//! Chain maps for a first Reidemeister move.
//!
//! Let D carry a curl at its last crossing c and let D' be D with the curl
//! removed. The layer of K(D) where the curl's loop is a separate circle is
//! matched with K(D'); the other layer is contractible against it. All maps are
//! linear over the strand circle: they act on the strand circle S and the loop
//! circle L through the exchanged multiplication m' (X is its unit) and
//! leave other circles alone. Parity conjugation is applied on both sides.

use serde::Serialize;

use super::ChainComplex;
use crate::algebra::{exchanged_structure, LinMap, Ring};
use crate::diagram::{DiagramError, LinkDiagram, Move, Sign};
use crate::matrix::SparseMatrix;
use crate::resolution::{Resolution, State};

/// Local maps on the strand and loop circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1Maps {
    pub sign: Sign,
    /// (S ⊗ L) -> S'
    pub f: LinMap,
    /// S' -> (S ⊗ L)
    pub g: LinMap,
    /// positive: M -> (S ⊗ L); negative: (S ⊗ L) -> M
    pub h: LinMap,
    /// Number of solutions found in the search range.
    pub solutions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct R1Report {
    pub positive: bool,
    /// f∘g = Id
    pub fg_identity: bool,
    /// δ∘g = 0 (positive) or f∘δ = 0 (negative)
    pub kills_saddle: bool,
    /// Id - g∘f = D∘δ (positive) or δ∘D (negative), on the loop layer
    pub homotopy_local: bool,
    /// δ∘D = Id (positive) or D∘δ = Id (negative), on the merged layer
    pub saddle_inverse: bool,
    /// f and g commute with the differentials
    pub chain_maps: bool,
    /// Id - g∘f = dD + Dd on all of K(D)
    pub homotopy_full: bool,
}

impl R1Report {
    pub fn all(&self) -> bool {
        self.fg_identity
            && self.kills_saddle
            && self.homotopy_local
            && self.saddle_inverse
            && self.chain_maps
            && self.homotopy_full
    }
}

fn params(range: i64, k: usize) -> impl Iterator<Item = Vec<i64>> {
    let span = (2 * range + 1) as u64;
    (0..span.pow(k as u32)).map(move |mut i| {
        (0..k)
            .map(|_| {
                let v = (i % span) as i64 - range;
                i /= span;
                v
            })
            .collect()
    })
}

fn homogeneous_nonzero(m: &LinMap, degree: i32) -> bool {
    m.data.iter().any(|&v| v != 0) && m.is_homogeneous(degree)
}

/// x ⊗ w ↦ m'(x ⊗ F w)
fn via_endo(mp: &LinMap, p: &[i64]) -> LinMap {
    let mut f = LinMap::zero(1, 1);
    for (i, v) in p.iter().enumerate() {
        f.set(i >> 1, i & 1, *v);
    }
    mp.compose(&LinMap::identity(1).tensor(&f))
}

/// x ↦ Σ p_uv m'(x ⊗ u) ⊗ v
fn via_element(mp: &LinMap, p: &[i64]) -> LinMap {
    let mut e = LinMap::zero(0, 2);
    for (i, v) in p.iter().enumerate() {
        e.set(i, 0, *v);
    }
    mp.tensor(&LinMap::identity(1)).compose(&LinMap::identity(1).tensor(&e))
}

/// Search for the local maps of a curl of the given sign.
pub fn solve_r1(sign: Sign) -> Option<R1Maps> {
    let (mp, dp) = exchanged_structure(Ring::Graded);
    let i1 = LinMap::identity(1);
    let i2 = LinMap::identity(2);
    let range = 2;
    let mut found: Vec<(LinMap, LinMap, LinMap)> = Vec::new();
    match sign {
        Sign::Positive => {
            let hs: Vec<LinMap> = params(range, 4)
                .map(|p| via_element(&mp, &p))
                .filter(|h| homogeneous_nonzero(h, -1) && mp.compose(h) == i1)
                .collect();
            let gs: Vec<LinMap> = params(range, 4)
                .map(|p| via_element(&mp, &p))
                .filter(|g| homogeneous_nonzero(g, 1) && mp.compose(g).data.iter().all(|&v| v == 0))
                .collect();
            let fs: Vec<LinMap> = params(range, 4)
                .map(|p| via_endo(&mp, &p))
                .filter(|f| homogeneous_nonzero(f, -1))
                .collect();
            for g in &gs {
                for f in fs.iter().filter(|f| f.compose(g) == i1) {
                    for h in &hs {
                        if i2.sub(&g.compose(f)) == h.compose(&mp) {
                            found.push((f.clone(), g.clone(), h.clone()));
                        }
                    }
                }
            }
        }
        Sign::Negative => {
            let hs: Vec<LinMap> = params(range, 4)
                .map(|p| via_endo(&mp, &p))
                .filter(|h| homogeneous_nonzero(h, -1) && h.compose(&dp) == i1)
                .collect();
            let fs: Vec<LinMap> = params(range, 4)
                .map(|p| via_endo(&mp, &p))
                .filter(|f| homogeneous_nonzero(f, 1) && f.compose(&dp).data.iter().all(|&v| v == 0))
                .collect();
            let gs: Vec<LinMap> = params(range, 4)
                .map(|p| via_element(&mp, &p))
                .filter(|g| homogeneous_nonzero(g, -1))
                .collect();
            for f in &fs {
                for g in gs.iter().filter(|g| f.compose(g) == i1) {
                    for h in &hs {
                        if i2.sub(&g.compose(f)) == dp.compose(h) {
                            found.push((f.clone(), g.clone(), h.clone()));
                        }
                    }
                }
            }
        }
    }
    let solutions = found.len();
    // prefer the solution whose f has a positive leading entry
    found.sort_by_key(|(f, _, _)| std::cmp::Reverse(f.data.iter().find(|&&v| v != 0).copied()));
    found.into_iter().next().map(|(f, g, h)| R1Maps { sign, f, g, h, solutions })
}

fn parity_sign(r: &Resolution, mask: usize) -> i64 {
    let flips = r
        .circles
        .iter()
        .enumerate()
        .filter(|(i, c)| c.parity && mask >> i & 1 == 1)
        .count();
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Circle correspondence between a resolution of D and one of D'.
struct Corr {
    /// D circle -> D' circle, for circles other than the loop
    map: Vec<Option<usize>>,
}

fn correspond(
    d: &LinkDiagram,
    dp: &LinkDiagram,
    r: &Resolution,
    rp: &Resolution,
    skip: usize,
    strand_target: usize,
) -> Corr {
    let arc_circles = r.len() - d.free_loops();
    let arc_circles_p = rp.len() - dp.free_loops();
    let map = (0..r.len())
        .map(|i| {
            if i == skip {
                return None;
            }
            if i >= arc_circles {
                return Some(arc_circles_p + (i - arc_circles));
            }
            let hit = r.circles[i].arcs.iter().find_map(|&a| dp.arc(a).map(|_| a));
            Some(match hit {
                Some(a) => rp.circle_of_arc(a).unwrap(),
                None => strand_target,
            })
        })
        .collect();
    Corr { map }
}

/// Carry the bits of `mask` on untouched circles from a D resolution to D'.
fn carry(c: &Corr, mask: usize, touched: &[usize]) -> usize {
    let mut out = 0;
    for (i, t) in c.map.iter().enumerate() {
        if let Some(t) = t {
            if !touched.contains(&i) && mask >> i & 1 == 1 {
                out |= 1 << t;
            }
        }
    }
    out
}

fn carry_back(c: &Corr, mask: usize, touched: &[usize]) -> usize {
    let mut out = 0;
    for (i, t) in c.map.iter().enumerate() {
        if let Some(t) = t {
            if !touched.contains(&i) && mask >> t & 1 == 1 {
                out |= 1 << i;
            }
        }
    }
    out
}

struct Built {
    /// per height of D: f_h, g_h, h_h (h_h: K^h -> K^{h-1})
    f: Vec<SparseMatrix>,
    g: Vec<SparseMatrix>,
    h: Vec<SparseMatrix>,
    /// the part of d_K along crossing c
    delta: Vec<SparseMatrix>,
}

/// Build the local maps for the curl at the last crossing of `d` and verify
/// the chain-level identities on K(D) and K(D').
pub fn r1_chain_maps(d: &LinkDiagram) -> Result<R1Report, DiagramError> {
    let n = d.crossing_count();
    if n == 0 {
        return Err(DiagramError::InvalidMove("no crossings".into()));
    }
    let c = n - 1;
    let e = d.crossings()[c];
    let p = (0..4)
        .find(|&p| e[p] == e[(p + 1) % 4])
        .ok_or_else(|| DiagramError::InvalidMove(format!("crossing {c} is not a curl")))?;
    let loop_arc = e[p];
    let dprime = Move::R1Remove { crossing: c }.apply(d)?;
    let sign = d.sign(c);
    let maps = solve_r1(sign).ok_or_else(|| DiagramError::InvalidMove("no R1 maps in range".into()))?;
    let k = ChainComplex::build(d, Ring::Graded);
    let kp = ChainComplex::build(&dprime, Ring::Graded);
    let built = assemble(d, &dprime, &k, &kp, &maps, loop_arc);
    Ok(verify(&k, &kp, &built, sign, c))
}

fn assemble(
    d: &LinkDiagram,
    dprime: &LinkDiagram,
    k: &ChainComplex,
    kp: &ChainComplex,
    maps: &R1Maps,
    loop_arc: u32,
) -> Built {
    let n = d.crossing_count();
    let c = n - 1;
    let positive = maps.sign == Sign::Positive;
    let heights: Vec<i32> = k.heights().collect();
    let mut f_t: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); heights.len()];
    let mut g_t = f_t.clone();
    let mut h_t = f_t.clone();
    let hidx = |h: i32| (h - k.min_height) as usize;
    for sp in 0..(1 as State) << (n - 1) {
        let (sl, sm) = if positive { (sp, sp | 1 << c) } else { (sp | 1 << c, sp) };
        let rl = &k.resolutions[sl as usize];
        let rm = &k.resolutions[sm as usize];
        let rp = &kp.resolutions[sp as usize];
        let l = rl.circle_of_arc(loop_arc).unwrap();
        let strand_p = rp.len() - 1;
        let cl = correspond(d, dprime, rl, rp, l, strand_p);
        let cm = correspond(d, dprime, rm, rp, usize::MAX, strand_p);
        // strand circle: the non-loop circle at the curl crossing
        let s = (0..4)
            .map(|q| rl.circle_at(crate::diagram::End::new(c, q)))
            .find(|&i| i != l)
            .unwrap();
        let sp_idx = cl.map[s].unwrap();
        let m = cm.map.iter().position(|t| *t == Some(sp_idx)).unwrap();
        let (hl, il) = k.index_of(sl, 0);
        let (hm, im) = k.index_of(sm, 0);
        let (hp, ip) = kp.index_of(sp, 0);
        debug_assert_eq!(hl, hp);
        // f: loop layer -> D'
        for x in 0..1usize << rl.len() {
            let rest = carry(&cl, x, &[s, l]);
            let col = (x >> s & 1) << 1 | (x >> l & 1);
            let sx = parity_sign(rl, x);
            for y in 0..2 {
                let v = maps.f.get(y, col);
                if v != 0 {
                    let out = rest | y << sp_idx;
                    f_t[hidx(hl)].push((ip + out, il + x, sx * v * parity_sign(rp, out)));
                }
            }
        }
        // g: D' -> loop layer
        for x in 0..1usize << rp.len() {
            let rest = carry_back(&cl, x, &[s, l]);
            let col = x >> sp_idx & 1;
            let sx = parity_sign(rp, x);
            for w in 0..4 {
                let v = maps.g.get(w, col);
                if v != 0 {
                    let out = rest | (w >> 1) << s | (w & 1) << l;
                    g_t[hidx(hp)].push((il + out, ip + x, sx * v * parity_sign(rl, out)));
                }
            }
        }
        // homotopy
        if positive {
            // merged layer (height hm) -> loop layer (height hl = hm - 1)
            for x in 0..1usize << rm.len() {
                let rest = carry_back(&cl, carry(&cm, x, &[m]), &[s, l]);
                let col = x >> m & 1;
                let sx = parity_sign(rm, x);
                for w in 0..4 {
                    let v = maps.h.get(w, col);
                    if v != 0 {
                        let out = rest | (w >> 1) << s | (w & 1) << l;
                        h_t[hidx(hm)].push((il + out, im + x, sx * v * parity_sign(rl, out)));
                    }
                }
            }
        } else {
            // loop layer (height hl) -> merged layer (height hm = hl - 1)
            for x in 0..1usize << rl.len() {
                let rest_p = carry(&cl, x, &[s, l]);
                let rest = carry_back(&cm, rest_p, &[m]);
                let col = (x >> s & 1) << 1 | (x >> l & 1);
                let sx = parity_sign(rl, x);
                for y in 0..2 {
                    let v = maps.h.get(y, col);
                    if v != 0 {
                        let out = rest | y << m;
                        h_t[hidx(hl)].push((im + out, il + x, sx * v * parity_sign(rm, out)));
                    }
                }
            }
        }
    }
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    let mut delta = Vec::new();
    for (i, &ht) in heights.iter().enumerate() {
        f.push(SparseMatrix::from_triplets(kp.dim(ht), k.dim(ht), f_t[i].drain(..)));
        g.push(SparseMatrix::from_triplets(k.dim(ht), kp.dim(ht), g_t[i].drain(..)));
        h.push(SparseMatrix::from_triplets(k.dim(ht - 1), k.dim(ht), h_t[i].drain(..)));
        let dk = k.differential(ht).unwrap();
        let part = dk.triplets().filter(|&(r, col, _)| {
            let (s1, _) = k.generator(ht, col);
            let (s2, _) = k.generator(ht + 1, r);
            (s1 ^ s2) >> c & 1 == 1
        });
        delta.push(SparseMatrix::from_triplets(dk.rows, dk.cols, part.collect::<Vec<_>>()));
    }
    Built { f, g, h, delta }
}

/// Identity restricted to the generators of `k` at height h whose state has
/// bit c equal to `layer`.
fn layer_identity(k: &ChainComplex, h: i32, c: usize, layer: bool) -> SparseMatrix {
    let dim = k.dim(h);
    let t = (0..dim).filter_map(|i| {
        let (s, _) = k.generator(h, i);
        ((s >> c & 1 == 1) == layer).then_some((i, i, 1))
    });
    SparseMatrix::from_triplets(dim, dim, t.collect::<Vec<_>>())
}

fn verify(k: &ChainComplex, kp: &ChainComplex, b: &Built, sign: Sign, c: usize) -> R1Report {
    let positive = sign == Sign::Positive;
    let heights: Vec<i32> = k.heights().collect();
    let idx = |h: i32| (h - k.min_height) as usize;
    let get = |v: &Vec<SparseMatrix>, h: i32| -> Option<SparseMatrix> {
        (h >= k.min_height && h <= k.max_height()).then(|| v[idx(h)].clone())
    };
    let dk = |h: i32| -> SparseMatrix {
        k.differential(h).cloned().unwrap_or_else(|| SparseMatrix::zero(k.dim(h + 1), k.dim(h)))
    };
    let dkp = |h: i32| -> SparseMatrix {
        kp.differential(h).cloned().unwrap_or_else(|| SparseMatrix::zero(kp.dim(h + 1), kp.dim(h)))
    };
    let zero_h = |h: i32, rows: usize| SparseMatrix::zero(rows, k.dim(h));
    let mut rep = R1Report {
        positive,
        fg_identity: true,
        kills_saddle: true,
        homotopy_local: true,
        saddle_inverse: true,
        chain_maps: true,
        homotopy_full: true,
    };
    let loop_layer = !positive;
    for &h in &heights {
        let f = &b.f[idx(h)];
        let g = &b.g[idx(h)];
        let hh = &b.h[idx(h)];
        let delta = &b.delta[idx(h)];
        // f∘g = Id on K(D')
        rep.fg_identity &= f.mul(g).unwrap() == SparseMatrix::identity(kp.dim(h));
        let gf = g.mul(f).unwrap();
        let id = SparseMatrix::identity(k.dim(h));
        let h_up = get(&b.h, h + 1).unwrap_or_else(|| zero_h(h + 1, k.dim(h)));
        let delta_prev = get(&b.delta, h - 1).unwrap_or_else(|| SparseMatrix::zero(k.dim(h), k.dim(h - 1)));
        let on_loop = layer_identity(k, h, c, loop_layer);
        let on_merged = layer_identity(k, h, c, !loop_layer);
        if positive {
            rep.kills_saddle &= delta.mul(g).unwrap().is_zero();
            // on the loop layer: Id - gf = D∘δ
            let lhs = id.sub(&gf).mul(&on_loop).unwrap();
            rep.homotopy_local &= lhs == h_up.mul(delta).unwrap().mul(&on_loop).unwrap();
            // on the merged layer: δ∘D = Id
            rep.saddle_inverse &= delta_prev.mul(hh).unwrap().mul(&on_merged).unwrap() == on_merged;
        } else {
            rep.kills_saddle &= f.mul(&delta_prev).unwrap().is_zero();
            let lhs = id.sub(&gf).mul(&on_loop).unwrap();
            rep.homotopy_local &= lhs == delta_prev.mul(hh).unwrap().mul(&on_loop).unwrap();
            rep.saddle_inverse &= h_up.mul(delta).unwrap().mul(&on_merged).unwrap() == on_merged;
        }
        // chain maps: f_{h+1} d = d' f_h, g_{h+1} d' = d g_h
        let f_next = get(&b.f, h + 1).unwrap_or_else(|| SparseMatrix::zero(kp.dim(h + 1), k.dim(h + 1)));
        let g_next = get(&b.g, h + 1).unwrap_or_else(|| SparseMatrix::zero(k.dim(h + 1), kp.dim(h + 1)));
        rep.chain_maps &= f_next.mul(&dk(h)).unwrap() == dkp(h).mul(f).unwrap();
        rep.chain_maps &= g_next.mul(&dkp(h)).unwrap() == dk(h).mul(g).unwrap();
        // Id - gf = d_{h-1} D_h + D_{h+1} d_h
        let dprev = if h > k.min_height { dk(h - 1) } else { SparseMatrix::zero(k.dim(h), 0) };
        let hd = h_up.mul(&dk(h)).unwrap();
        let dh = if h > k.min_height { dprev.mul(hh).unwrap() } else { SparseMatrix::zero(k.dim(h), k.dim(h)) };
        rep.homotopy_full &= id.sub(&gf) == dh.add(&hd);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_pd, R1Side};

    #[test]
    fn local_solutions_exist() {
        for sign in [Sign::Positive, Sign::Negative] {
            let m = solve_r1(sign).unwrap();
            assert_eq!(m.solutions, 2);
        }
    }

    #[test]
    fn curls_on_unknot() {
        let u = LinkDiagram::unknot();
        for sign in [Sign::Positive, Sign::Negative] {
            for side in [R1Side::Left, R1Side::Right] {
                let d = Move::R1Add { arc: None, sign, side }.apply(&u).unwrap();
                let r = r1_chain_maps(&d).unwrap();
                assert!(r.all(), "{sign:?} {side:?} {r:?}");
            }
        }
    }

    #[test]
    fn curl_on_trefoil() {
        let t = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        for sign in [Sign::Positive, Sign::Negative] {
            let d = Move::R1Add { arc: Some(3), sign, side: R1Side::Left }.apply(&t).unwrap();
            let r = r1_chain_maps(&d).unwrap();
            assert!(r.all(), "{sign:?} {r:?}");
        }
    }
}
