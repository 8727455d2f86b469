//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's complex, homology or matrix code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use okh::diagram::LinkDiagram;
use okh::homology::Homology;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smith normal form by plain row and column operations.
pub fn naive_snf(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // any nonzero entry of least magnitude
        let mut best = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(_, _, v): (usize, usize, i128)| m[i][j].abs() < v) {
                    best = Some((i, j, m[i][j].abs()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap(t, pi);
        for r in m.iter_mut() {
            r.swap(t, pj);
        }
        let p = m[t][t];
        let mut dirty = false;
        for i in t + 1..rows {
            let f = m[i][t] / p;
            for j in t..cols {
                m[i][j] -= f * m[t][j];
            }
            dirty |= m[i][t] != 0;
        }
        for j in t + 1..cols {
            let f = m[t][j] / p;
            for i in t..rows {
                m[i][j] -= f * m[i][t];
            }
            dirty |= m[t][j] != 0;
        }
        if dirty {
            continue;
        }
        // make p divide the rest by adding a bad row into row t
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0)) {
            for j in t..cols {
                m[t][j] += m[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    // Laplace expansion along the first row
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * determinant(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|b| b.count_ones() as usize == k).map(|b| (0..n).filter(|&i| b >> i & 1 == 1).collect()).collect()
}

/// Invariant factors as quotients of successive gcds of k x k minors.
pub fn determinantal_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
                g = gcd(g, determinant(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// (free rank, torsion) per (height, q).
pub type Table = BTreeMap<(i32, i32), (usize, Vec<i128>)>;

pub fn table_of(h: &Homology) -> Table {
    h.entries.iter().map(|e| ((e.height, e.q.unwrap_or(0)), (e.group.free, e.group.torsion.clone()))).collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }
}

/// Circles of the unoriented smoothing `s`: bit 0 joins positions (0,1),(2,3),
/// bit 1 joins (0,3),(1,2). Returns the circle of every arc label and the count.
fn circles(d: &LinkDiagram, s: u64, labels: &[u32]) -> (Vec<usize>, usize) {
    let idx = |a: u32| labels.binary_search(&a).unwrap();
    let mut dsu = Dsu((0..labels.len()).collect());
    for (c, e) in d.crossings().iter().enumerate() {
        let pairs = if s >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (p, q) in pairs {
            let (a, b) = (dsu.find(idx(e[p])), dsu.find(idx(e[q])));
            dsu.0[a] = b;
        }
    }
    let mut ids = BTreeMap::new();
    let of: Vec<usize> = (0..labels.len())
        .map(|i| {
            let r = dsu.find(i);
            let k = ids.len();
            *ids.entry(r).or_insert(k)
        })
        .collect();
    let n = ids.len() + d.free_loops();
    (of, n)
}

/// Khovanov homology from the textbook unoriented cube with the standard
/// algebra (v+ unit, v-^2 = 0) and signs from the 1-bits before the changed
/// crossing.
pub fn standard_khovanov(d: &LinkDiagram) -> Table {
    let n = d.crossing_count();
    let labels: Vec<u32> = d.arcs().map(|(a, _)| a).collect();
    let (np, nm) = (d.positive_count() as i32, d.negative_count() as i32);
    let states: Vec<(Vec<usize>, usize)> = (0..1u64 << n).map(|s| circles(d, s, &labels)).collect();
    // generator list per height: (state, mask), mask bit = v-
    let mut gens: BTreeMap<i32, Vec<(u64, usize)>> = BTreeMap::new();
    let mut index: BTreeMap<(u64, usize), usize> = BTreeMap::new();
    for s in 0..1u64 << n {
        let r = s.count_ones() as i32;
        for mask in 0..1usize << states[s as usize].1 {
            let g = gens.entry(r - nm).or_default();
            index.insert((s, mask), g.len());
            g.push((s, mask));
        }
    }
    let qdeg = |s: u64, mask: usize| {
        let k = states[s as usize].1 as i32;
        let minus = mask.count_ones() as i32;
        (k - 2 * minus) + s.count_ones() as i32 + np - 2 * nm
    };
    // image of a generator under d, as (index at height + 1, coefficient)
    let image = |s: u64, mask: usize| -> Vec<(usize, i128)> {
        let mut out = Vec::new();
        let (of, k) = &states[s as usize];
        for c in (0..n).filter(|&c| s >> c & 1 == 0) {
            let t = s | 1 << c;
            let sign = if (s & ((1 << c) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            let (of2, k2) = &states[t as usize];
            // carry circles of s to t through arcs; free loops keep their place
            let mut map = vec![usize::MAX; *k];
            for (i, &ci) in of.iter().enumerate() {
                map[ci] = of2[i];
            }
            let free = d.free_loops();
            for j in 0..free {
                map[k - free + j] = k2 - free + j;
            }
            let e = d.crossings()[c];
            let idx = |a: u32| labels.binary_search(&a).unwrap();
            let a = of[idx(e[0])];
            let b = of[idx(e[2])];
            let carried = |m: usize, skip: &[usize]| {
                let mut y = 0;
                for i in 0..*k {
                    if !skip.contains(&i) && m >> i & 1 == 1 {
                        y |= 1 << map[i];
                    }
                }
                y
            };
            if k2 < k {
                let into = map[a];
                let base = carried(mask, &[a, b]);
                match (mask >> a & 1, mask >> b & 1) {
                    (0, 0) => out.push((index[&(t, base)], sign)),
                    (1, 0) | (0, 1) => out.push((index[&(t, base | 1 << into)], sign)),
                    _ => {}
                }
            } else {
                // split of circle a into the circles of positions 0 and 1 in t
                let (c1, c2) = (of2[idx(e[0])], of2[idx(e[1])]);
                let base = carried(mask, &[a]);
                if mask >> a & 1 == 0 {
                    out.push((index[&(t, base | 1 << c2)], sign));
                    out.push((index[&(t, base | 1 << c1)], sign));
                } else {
                    out.push((index[&(t, base | 1 << c1 | 1 << c2)], sign));
                }
            }
        }
        out
    };
    let mut table = Table::new();
    let heights: Vec<i32> = gens.keys().copied().collect();
    // rank and factors of d_h restricted to q, per (h, q)
    let mut factors: BTreeMap<(i32, i32), Vec<i128>> = BTreeMap::new();
    let mut dims: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for &h in &heights {
        let here = &gens[&h];
        let mut by_q: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, &(s, m)) in here.iter().enumerate() {
            by_q.entry(qdeg(s, m)).or_default().push(i);
        }
        let next: Vec<(u64, usize)> = gens.get(&(h + 1)).cloned().unwrap_or_default();
        for (q, cols) in by_q {
            dims.insert((h, q), cols.len());
            let rows: Vec<usize> = (0..next.len()).filter(|&j| qdeg(next[j].0, next[j].1) == q).collect();
            let mut m = vec![vec![0i128; cols.len()]; rows.len()];
            for (ci, &g) in cols.iter().enumerate() {
                let (s, mask) = here[g];
                for (j, v) in image(s, mask) {
                    let ri = rows.binary_search(&j).expect("differential preserves q");
                    m[ri][ci] += v;
                }
            }
            factors.insert((h, q), naive_snf(m));
        }
    }
    for (&(h, q), &dim) in &dims {
        let out = factors[&(h, q)].len();
        let inc = factors.get(&(h - 1, q)).cloned().unwrap_or_default();
        let free = dim - out - inc.len();
        let torsion: Vec<i128> = inc.into_iter().filter(|&t| t > 1).collect();
        if free > 0 || !torsion.is_empty() {
            table.insert((h, q), (free, torsion));
        }
    }
    table
}

/// Flip q in a table.
pub fn flip_q(t: &Table) -> Table {
    t.iter().map(|(&(h, q), v)| ((h, -q), v.clone())).collect()
}
