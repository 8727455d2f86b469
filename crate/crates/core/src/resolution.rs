//! States of the cube of resolutions and the circles of each resolved diagram.
//!
//! A state is a bit mask over crossings. Bit `c` clear means the lower value
//! at `c` (0 at a positive crossing, -1 at a negative one), bit set the higher
//! value. A positive crossing with value 0 and a negative crossing with value 0
//! take the oriented smoothing; the other value is the double-edge smoothing.

use std::collections::BTreeMap;

use crate::diagram::{ArcId, End, LinkDiagram, Sign};

pub type State = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    Oriented,
    Double,
}

pub fn bit(s: State, c: usize) -> bool {
    s >> c & 1 == 1
}

pub fn smoothing(sign: Sign, high: bool) -> Smoothing {
    match (sign, high) {
        (Sign::Positive, false) | (Sign::Negative, true) => Smoothing::Oriented,
        _ => Smoothing::Double,
    }
}

/// Value s(c) in {0, 1} at positive and {-1, 0} at negative crossings.
pub fn value(sign: Sign, high: bool) -> i32 {
    match sign {
        Sign::Positive => high as i32,
        Sign::Negative => high as i32 - 1,
    }
}

/// Position pairs joined by the smoothing selected by `high`.
pub fn pairing(high: bool) -> [(usize, usize); 2] {
    if high {
        [(0, 3), (1, 2)]
    } else {
        [(0, 1), (2, 3)]
    }
}

/// Position on the distinguished strand of a smoothing: the right strand of
/// the oriented smoothing or the incoming side of the double edge.
pub fn first_position(sign: Sign, sm: Smoothing) -> usize {
    match (sign, sm) {
        (Sign::Negative, Smoothing::Oriented) => 2,
        _ => 0,
    }
}

/// All states in ascending order.
pub fn enumerate_states(d: &LinkDiagram) -> impl Iterator<Item = State> {
    let n = d.crossing_count();
    assert!(n < 64, "too many crossings");
    0..(1u64 << n)
}

pub fn height(d: &LinkDiagram, s: State) -> i32 {
    s.count_ones() as i32 - d.negative_count() as i32
}

/// Crossings resolved by a double edge, ascending.
pub fn double_crossings(d: &LinkDiagram, s: State) -> Vec<usize> {
    (0..d.crossing_count())
        .filter(|&c| smoothing(d.sign(c), bit(s, c)) == Smoothing::Double)
        .collect()
}

/// q-shift -(w(D) + s(D)).
pub fn q_shift(d: &LinkDiagram, s: State) -> i32 {
    -(d.writhe() + height(d, s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    /// Arcs on the circle, ascending; empty for a free loop.
    pub arcs: Vec<ArcId>,
    /// Whether the face left of the smallest arc is white.
    pub parity: bool,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub state: State,
    pub circles: Vec<Circle>,
    end_circle: Vec<[usize; 4]>,
}

impl Resolution {
    pub fn circle_at(&self, e: End) -> usize {
        self.end_circle[e.crossing][e.position]
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn circle_of_arc(&self, a: ArcId) -> Option<usize> {
        self.circles.iter().position(|c| c.arcs.binary_search(&a).is_ok())
    }

    /// Text dump: one line per circle listing its arcs.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.circles.iter().enumerate() {
            let arcs: Vec<String> = c.arcs.iter().map(|a| a.to_string()).collect();
            let arcs = if arcs.is_empty() { "loop".to_string() } else { arcs.join(" ") };
            out.push_str(&format!("{i}: {arcs} (parity {})\n", c.parity as u8));
        }
        out
    }
}

/// Precomputed per-diagram data for resolving states.
#[derive(Debug, Clone)]
pub struct Resolver<'a> {
    pub diagram: &'a LinkDiagram,
    arc_index: BTreeMap<ArcId, usize>,
    arc_labels: Vec<ArcId>,
    arc_parity: Vec<bool>,
}

impl<'a> Resolver<'a> {
    pub fn new(d: &'a LinkDiagram) -> Self {
        let colors = d.face_colors();
        let corner = d.corner_faces();
        let arc_labels: Vec<ArcId> = d.arcs().map(|(a, _)| a).collect();
        let arc_index = arc_labels.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let arc_parity = d
            .arcs()
            .map(|(_, info)| {
                // the dart at the tail traverses the arc along the orientation
                let o = info.head;
                let face = corner[&(o.crossing, (o.position + 3) % 4)];
                !colors[face]
            })
            .collect();
        Resolver { diagram: d, arc_index, arc_labels, arc_parity }
    }

    pub fn resolve(&self, s: State) -> Resolution {
        let d = self.diagram;
        let n = self.arc_labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (c, e) in d.crossings().iter().enumerate() {
            for (p, q) in pairing(bit(s, c)) {
                let a = find(&mut parent, self.arc_index[&e[p]]);
                let b = find(&mut parent, self.arc_index[&e[q]]);
                parent[a] = b;
            }
        }
        // arc indices are in ascending label order, so first sight gives the minimum
        let mut root_circle = vec![usize::MAX; n];
        let mut circles = Vec::new();
        let mut arc_circle = vec![0; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if root_circle[r] == usize::MAX {
                root_circle[r] = circles.len();
                circles.push(Circle { arcs: Vec::new(), parity: self.arc_parity[i] });
            }
            let k = root_circle[r];
            circles[k].arcs.push(self.arc_labels[i]);
            arc_circle[i] = k;
        }
        for _ in 0..d.free_loops() {
            circles.push(Circle { arcs: Vec::new(), parity: false });
        }
        let end_circle = d
            .crossings()
            .iter()
            .map(|e| e.map(|a| arc_circle[self.arc_index[&a]]))
            .collect();
        Resolution { state: s, circles, end_circle }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Merge { first: usize, second: usize, into: usize },
    Split { from: usize, first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTransition {
    pub crossing: usize,
    pub kind: EdgeKind,
    /// Target index of every source circle (merged circles map to the merge).
    pub circle_map: Vec<usize>,
}

/// Describe the edge raising crossing `c` from `src` to `tgt`.
pub fn cube_edge(d: &LinkDiagram, src: &Resolution, tgt: &Resolution, c: usize) -> EdgeTransition {
    debug_assert!(!bit(src.state, c) && tgt.state == src.state | 1 << c);
    let sign = d.sign(c);
    let mut circle_map = Vec::with_capacity(src.len());
    for circ in &src.circles {
        let t = match circ.arcs.first() {
            Some(&a) => tgt.circle_of_arc(a).expect("arc survives"),
            None => {
                // free loops keep their order at the end
                let k = src.len() - circle_map.len();
                tgt.len() - k
            }
        };
        circle_map.push(t);
    }
    let sp = first_position(sign, smoothing(sign, false));
    let tp = first_position(sign, smoothing(sign, true));
    let s1 = src.circle_at(End::new(c, sp));
    let s2 = src.circle_at(End::new(c, (sp + 2) % 4));
    let kind = if s1 != s2 {
        EdgeKind::Merge { first: s1, second: s2, into: circle_map[s1] }
    } else {
        let t1 = tgt.circle_at(End::new(c, tp));
        let t2 = tgt.circle_at(End::new(c, (tp + 2) % 4));
        debug_assert_ne!(t1, t2);
        EdgeKind::Split { from: s1, first: t1, second: t2 }
    };
    EdgeTransition { crossing: c, kind, circle_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn curl_circles() {
        let d = parse_pd("X[1,1,2,2]").unwrap();
        let r = Resolver::new(&d);
        assert_eq!(r.resolve(0).len(), 2);
        assert_eq!(r.resolve(1).len(), 1);
        let e = cube_edge(&d, &r.resolve(0), &r.resolve(1), 0);
        assert!(matches!(e.kind, EdgeKind::Merge { .. }));
    }

    #[test]
    fn trefoil_extremes() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap().mirror();
        let r = Resolver::new(&d);
        assert_eq!(r.resolve(0).len(), 2);
        assert_eq!(r.resolve(7).len(), 3);
    }

    #[test]
    fn hopf_edges() {
        let d = parse_pd("X[1,3,2,4] X[3,1,4,2]").unwrap();
        let r = Resolver::new(&d);
        let e = cube_edge(&d, &r.resolve(0), &r.resolve(1), 0);
        assert!(matches!(e.kind, EdgeKind::Merge { .. }));
        let e = cube_edge(&d, &r.resolve(1), &r.resolve(3), 1);
        assert!(matches!(e.kind, EdgeKind::Split { .. }));
    }

    #[test]
    fn heights_and_shifts() {
        let d = parse_pd("X[1,2,2,1]").unwrap();
        assert_eq!(d.writhe(), -1);
        assert_eq!(height(&d, 0), -1);
        assert_eq!(q_shift(&d, 0), 2);
        assert_eq!(q_shift(&d, 1), 1);
        assert_eq!(double_crossings(&d, 0), vec![0]);
    }
}
