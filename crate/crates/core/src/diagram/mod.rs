//! Oriented link diagrams given by planar diagram codes.
//!
//! A crossing is `X[i,j,k,l]` with positions 0..3 counterclockwise, starting
//! at the incoming under-strand. The under-strand runs 0 -> 2. The over-strand
//! runs 3 -> 1 at a positive crossing and 1 -> 3 at a negative one.

mod faces;
mod moves;
mod pd;

pub use faces::Face;
pub use moves::{random_moves, Move, R1Side};
pub use pd::{parse_pd, DiagramJson};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ArcId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed token `{token}` at byte {offset}")]
    Malformed { token: String, offset: usize },
    #[error("arc {arc} occurs {count} times, expected exactly 2")]
    ArcCount { arc: ArcId, count: usize },
    #[error("arc {arc} occurs twice at the same crossing position")]
    RepeatedEnd { arc: ArcId },
    #[error("component through arc {arc} is entered at both ends of an under-passage")]
    InconsistentOrientation { arc: ArcId },
    #[error("diagram is not planar (V - E + F = {euler} on a projection component)")]
    NonPlanar { euler: i64 },
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// One end of an arc: a crossing index and a position 0..3 at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub crossing: usize,
    pub position: usize,
}

impl End {
    pub fn new(crossing: usize, position: usize) -> Self {
        End { crossing, position }
    }

    /// The end across the crossing on the same strand.
    pub fn across(self) -> End {
        End::new(self.crossing, (self.position + 2) % 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcInfo {
    /// End where the arc leaves a crossing.
    pub tail: End,
    /// End where the arc enters a crossing.
    pub head: End,
    pub component: usize,
}

#[derive(Debug, Clone)]
pub struct LinkDiagram {
    ends: Vec<[ArcId; 4]>,
    free_loops: usize,
    signs: Vec<Sign>,
    arcs: BTreeMap<ArcId, ArcInfo>,
    /// Arc components, each listed in traversal order from its smallest arc.
    components: Vec<Vec<ArcId>>,
}

impl PartialEq for LinkDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.ends == other.ends && self.free_loops == other.free_loops
    }
}

impl Eq for LinkDiagram {}

impl LinkDiagram {
    pub fn new(ends: Vec<[ArcId; 4]>, free_loops: usize) -> Result<Self, DiagramError> {
        let mut occ: BTreeMap<ArcId, Vec<End>> = BTreeMap::new();
        for (c, e) in ends.iter().enumerate() {
            for (p, &a) in e.iter().enumerate() {
                occ.entry(a).or_default().push(End::new(c, p));
            }
        }
        for (&a, v) in &occ {
            if v.len() != 2 {
                return Err(DiagramError::ArcCount { arc: a, count: v.len() });
            }
        }
        let other = |a: ArcId, e: End| -> End {
            let v = &occ[&a];
            if v[0] == e {
                v[1]
            } else {
                v[0]
            }
        };

        // Walk each strand cycle once in an arbitrary direction, then fix the
        // direction from the under-passages.
        let mut seen = vec![[false; 4]; ends.len()];
        let mut arcs = BTreeMap::new();
        let mut components = Vec::new();
        for c0 in 0..ends.len() {
            for p0 in 0..4 {
                if seen[c0][p0] {
                    continue;
                }
                // entering ends along the walk
                let mut entries = Vec::new();
                let mut e = End::new(c0, p0);
                loop {
                    seen[e.crossing][e.position] = true;
                    let out = e.across();
                    seen[out.crossing][out.position] = true;
                    entries.push(e);
                    let a = ends[out.crossing][out.position];
                    e = other(a, out);
                    if e == End::new(c0, p0) {
                        break;
                    }
                }
                let fwd = entries.iter().any(|e| e.position == 0);
                let bwd = entries.iter().any(|e| e.position == 2);
                let forward = match (fwd, bwd) {
                    (true, true) => {
                        return Err(DiagramError::InconsistentOrientation {
                            arc: ends[c0][p0],
                        })
                    }
                    (true, false) => true,
                    (false, true) => false,
                    (false, false) => over_only_forward(&ends, &entries),
                };
                let entries: Vec<End> = if forward {
                    entries
                } else {
                    let mut r: Vec<End> = entries.iter().map(|e| e.across()).collect();
                    r.reverse();
                    r
                };
                // arcs in order: each arc runs from the exit of one entry to the next entry
                let k = components.len();
                let n = entries.len();
                let mut comp = Vec::with_capacity(n);
                for i in 0..n {
                    let tail = entries[i].across();
                    let head = entries[(i + 1) % n];
                    let a = ends[tail.crossing][tail.position];
                    if ends[head.crossing][head.position] != a {
                        return Err(DiagramError::RepeatedEnd { arc: a });
                    }
                    arcs.insert(a, ArcInfo { tail, head, component: k });
                    comp.push(a);
                }
                let m = comp.iter().enumerate().min_by_key(|(_, a)| **a).unwrap().0;
                comp.rotate_left(m);
                components.push(comp);
            }
        }
        // order components by smallest arc
        components.sort_by_key(|c| c[0]);
        for (k, comp) in components.iter().enumerate() {
            for a in comp {
                arcs.get_mut(a).unwrap().component = k;
            }
        }

        let mut signs = Vec::with_capacity(ends.len());
        for c in 0..ends.len() {
            let over_in = [1, 3]
                .into_iter()
                .find(|&p| arcs[&ends[c][p]].head == End::new(c, p))
                .expect("over strand enters once");
            signs.push(if over_in == 3 { Sign::Positive } else { Sign::Negative });
        }

        let d = LinkDiagram { ends, free_loops, signs, arcs, components };
        d.check_planar()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        LinkDiagram::new(Vec::new(), 1).unwrap()
    }

    pub fn crossings(&self) -> &[[ArcId; 4]] {
        &self.ends
    }

    pub fn crossing_count(&self) -> usize {
        self.ends.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn sign(&self, c: usize) -> Sign {
        self.signs[c]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn writhe(&self) -> i32 {
        self.signs.iter().map(|s| s.value()).sum()
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == Sign::Positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.ends.len() - self.positive_count()
    }

    pub fn arc(&self, a: ArcId) -> Option<&ArcInfo> {
        self.arcs.get(&a)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (ArcId, &ArcInfo)> {
        self.arcs.iter().map(|(a, i)| (*a, i))
    }

    pub fn label(&self, e: End) -> ArcId {
        self.ends[e.crossing][e.position]
    }

    /// Arc components in traversal order; free loops are not included.
    pub fn arc_components(&self) -> &[Vec<ArcId>] {
        &self.components
    }

    /// Number of link components, free loops included.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops
    }

    pub fn component_of(&self, a: ArcId) -> usize {
        self.arcs[&a].component
    }

    /// Whether the arc at this end enters the crossing.
    pub fn is_incoming(&self, e: End) -> bool {
        self.arcs[&self.label(e)].head == e
    }

    /// Position of the incoming over end at crossing `c`.
    pub fn over_in(&self, c: usize) -> usize {
        match self.signs[c] {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    pub fn max_label(&self) -> ArcId {
        self.arcs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn mirror(&self) -> LinkDiagram {
        let ends = self
            .ends
            .iter()
            .zip(&self.signs)
            .map(|(e, s)| match s {
                Sign::Positive => [e[3], e[0], e[1], e[2]],
                Sign::Negative => [e[1], e[2], e[3], e[0]],
            })
            .collect();
        LinkDiagram::new(ends, self.free_loops).expect("mirror of a valid diagram")
    }

    /// Relabel arcs by order of first appearance, starting at 1.
    pub fn canonical(&self) -> LinkDiagram {
        let mut map = BTreeMap::new();
        let mut next = 1;
        let ends = self
            .ends
            .iter()
            .map(|e| {
                e.map(|a| {
                    *map.entry(a).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
            })
            .collect();
        LinkDiagram::new(ends, self.free_loops).expect("relabeling of a valid diagram")
    }

    /// Reverse the orientation of one arc component.
    pub fn reverse_component(&self, k: usize) -> Result<LinkDiagram, DiagramError> {
        let comp = self
            .components
            .get(k)
            .ok_or_else(|| DiagramError::InvalidMove(format!("no component {k}")))?;
        let mut ends = self.ends.clone();
        for e in ends.iter_mut() {
            if comp.contains(&e[0]) {
                *e = [e[2], e[3], e[0], e[1]];
            }
        }
        LinkDiagram::new(ends, self.free_loops)
    }

    /// The diagram with crossing `c` switched.
    pub fn switch(&self, c: usize) -> LinkDiagram {
        let mut ends = self.ends.clone();
        let e = ends[c];
        ends[c] = match self.signs[c] {
            Sign::Positive => [e[3], e[0], e[1], e[2]],
            Sign::Negative => [e[1], e[2], e[3], e[0]],
        };
        LinkDiagram::new(ends, self.free_loops).expect("switch of a valid diagram")
    }

    /// The diagram with crossing `c` replaced by its oriented smoothing.
    pub fn smooth(&self, c: usize) -> LinkDiagram {
        let e = self.ends[c];
        let over_in = self.over_in(c);
        let over_out = (over_in + 2) % 4;
        // incoming under joins outgoing over, incoming over joins outgoing under
        let joins = [(e[0], e[over_out]), (e[over_in], e[2])];
        self.splice(&[c], &joins)
    }

    /// Remove crossings and join arcs through the given (incoming, outgoing) pairs.
    /// Every passage through a removed crossing must appear in `joins`.
    fn splice(&self, removed: &[usize], joins: &[(ArcId, ArcId)]) -> LinkDiagram {
        let next: BTreeMap<ArcId, ArcId> = joins.iter().copied().collect();
        let outs: std::collections::BTreeSet<ArcId> = joins.iter().map(|j| j.1).collect();
        let mut rename = BTreeMap::new();
        for &(root, _) in joins.iter().filter(|j| !outs.contains(&j.0)) {
            let mut a = root;
            while let Some(&b) = next.get(&a) {
                rename.insert(b, root);
                a = b;
            }
        }
        // whatever is left closes up inside the removed crossings
        let mut loops = 0;
        let mut seen = std::collections::BTreeSet::new();
        for &(a, _) in joins {
            if rename.contains_key(&a) || !outs.contains(&a) || seen.contains(&a) {
                continue;
            }
            loops += 1;
            let mut b = a;
            while seen.insert(b) {
                b = next[&b];
            }
        }
        let ends = self
            .ends
            .iter()
            .enumerate()
            .filter(|(c, _)| !removed.contains(c))
            .map(|(_, e)| e.map(|a| rename.get(&a).copied().unwrap_or(a)))
            .collect();
        LinkDiagram::new(ends, self.free_loops + loops).expect("splice of a valid diagram")
    }
}

/// Direction for a component with no under-passage: labels increase along the
/// orientation, wrapping from the largest label to the smallest.
fn over_only_forward(ends: &[[ArcId; 4]], entries: &[End]) -> bool {
    let e = entries[0];
    let a_in = ends[e.crossing][e.position];
    let out = e.across();
    let a_out = ends[out.crossing][out.position];
    if a_out == a_in.wrapping_add(1) {
        true
    } else if a_in == a_out.wrapping_add(1) {
        false
    } else {
        a_in > a_out
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.ends {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "X[{},{},{},{}]", e[0], e[1], e[2], e[3])?;
        }
        for _ in 0..self.free_loops {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "O")?;
        }
        Ok(())
    }
}
