use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ArcId, DiagramError, End, LinkDiagram, Sign};

/// Which side of the strand, relative to its direction, a new curl sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum R1Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// Add a curl on an arc, or on a free loop when `arc` is `None`.
    R1Add { arc: Option<ArcId>, sign: Sign, side: R1Side },
    /// Remove the curl at a crossing with a monogon.
    R1Remove { crossing: usize },
    /// Push two arcs bounding a face across each other. `x` and `y` index
    /// darts of the face.
    R2Add { face: usize, x: usize, y: usize, x_over: bool },
    /// Remove two crossings bounding a bigon.
    R2Remove { crossings: [usize; 2] },
    /// Slide a strand across the triangle with these side arcs.
    R3 { arcs: [ArcId; 3] },
}

fn invalid(msg: impl Into<String>) -> DiagramError {
    DiagramError::InvalidMove(msg.into())
}

impl Move {
    pub fn apply(&self, d: &LinkDiagram) -> Result<LinkDiagram, DiagramError> {
        match *self {
            Move::R1Add { arc, sign, side } => r1_add(d, arc, sign, side),
            Move::R1Remove { crossing } => r1_remove(d, crossing),
            Move::R2Add { face, x, y, x_over } => r2_add(d, face, x, y, x_over),
            Move::R2Remove { crossings } => r2_remove(d, crossings),
            Move::R3 { arcs } => r3(d, arcs),
        }
    }

    /// The move undoing `self` on the diagram it produced, for adding moves
    /// and third moves.
    pub fn inverse(&self, before: &LinkDiagram) -> Option<Move> {
        let n = before.crossing_count();
        match self {
            Move::R1Add { .. } => Some(Move::R1Remove { crossing: n }),
            Move::R2Add { .. } => Some(Move::R2Remove { crossings: [n, n + 1] }),
            Move::R3 { arcs } => Some(Move::R3 { arcs: *arcs }),
            _ => None,
        }
    }

    pub fn is_r1(&self) -> bool {
        matches!(self, Move::R1Add { .. } | Move::R1Remove { .. })
    }

    /// All moves applicable to `d` that keep at most `cap` crossings, grouped
    /// by kind.
    pub fn candidates(d: &LinkDiagram, cap: usize) -> Vec<Vec<Move>> {
        let n = d.crossing_count();
        let mut groups = Vec::new();
        if n < cap {
            let mut g = Vec::new();
            let arcs: Vec<Option<ArcId>> = d
                .arcs()
                .map(|(a, _)| Some(a))
                .chain((d.free_loops() > 0).then_some(None))
                .collect();
            for arc in arcs {
                for sign in [Sign::Positive, Sign::Negative] {
                    for side in [R1Side::Left, R1Side::Right] {
                        g.push(Move::R1Add { arc, sign, side });
                    }
                }
            }
            groups.push(g);
        }
        groups.push(
            (0..n)
                .filter(|&c| monogon(d, c).is_some())
                .map(|crossing| Move::R1Remove { crossing })
                .collect(),
        );
        if n + 2 <= cap {
            let mut g = Vec::new();
            for (fi, f) in d.faces().iter().enumerate() {
                for x in 0..f.darts.len() {
                    for y in 0..f.darts.len() {
                        if x != y && d.label(f.darts[x]) != d.label(f.darts[y]) {
                            g.push(Move::R2Add { face: fi, x, y, x_over: true });
                            g.push(Move::R2Add { face: fi, x, y, x_over: false });
                        }
                    }
                }
            }
            groups.push(g);
        }
        let faces = d.faces();
        groups.push(
            faces
                .iter()
                .filter_map(|f| bigon(d, &f.darts).ok())
                .map(|crossings| Move::R2Remove { crossings })
                .collect(),
        );
        groups.push(
            faces
                .iter()
                .filter(|f| triangle(d, &f.darts).is_ok())
                .map(|f| {
                    let mut arcs = [0; 3];
                    for (i, e) in f.darts.iter().enumerate() {
                        arcs[i] = d.label(*e);
                    }
                    arcs.sort();
                    Move::R3 { arcs }
                })
                .collect(),
        );
        groups.retain(|g| !g.is_empty());
        groups
    }
}

/// Apply `count` random moves, choosing a kind uniformly among those
/// available and then a move of that kind uniformly.
pub fn random_moves<R: Rng>(
    d: &LinkDiagram,
    count: usize,
    cap: usize,
    rng: &mut R,
) -> (LinkDiagram, Vec<Move>) {
    let mut cur = d.clone();
    let mut done = Vec::with_capacity(count);
    for _ in 0..count {
        let groups = Move::candidates(&cur, cap);
        if groups.is_empty() {
            break;
        }
        let g = &groups[rng.gen_range(0..groups.len())];
        let m = g[rng.gen_range(0..g.len())].clone();
        cur = m.apply(&cur).expect("candidate moves apply");
        done.push(m);
    }
    (cur, done)
}

fn passages(d: &LinkDiagram, c: usize) -> [(ArcId, ArcId); 2] {
    let e = d.crossings()[c];
    let oi = d.over_in(c);
    [(e[0], e[2]), (e[oi], e[(oi + 2) % 4])]
}

fn monogon(d: &LinkDiagram, c: usize) -> Option<usize> {
    let e = d.crossings()[c];
    (0..4).find(|&p| e[p] == e[(p + 1) % 4])
}

fn r1_add(
    d: &LinkDiagram,
    arc: Option<ArcId>,
    sign: Sign,
    side: R1Side,
) -> Result<LinkDiagram, DiagramError> {
    let mut ends = d.crossings().to_vec();
    let top = d.max_label();
    let mut loops = d.free_loops();
    let (a, l, b) = match arc {
        Some(x) => {
            let info = d.arc(x).ok_or_else(|| invalid(format!("no arc {x}")))?;
            let h = info.head;
            ends[h.crossing][h.position] = top + 2;
            (x, top + 1, top + 2)
        }
        None => {
            if loops == 0 {
                return Err(invalid("no free loop"));
            }
            loops -= 1;
            (top + 1, top + 2, top + 1)
        }
    };
    ends.push(match (sign, side) {
        (Sign::Positive, R1Side::Left) => [a, b, l, l],
        (Sign::Positive, R1Side::Right) => [l, l, b, a],
        (Sign::Negative, R1Side::Right) => [a, l, l, b],
        (Sign::Negative, R1Side::Left) => [l, a, b, l],
    });
    LinkDiagram::new(ends, loops)
}

fn r1_remove(d: &LinkDiagram, c: usize) -> Result<LinkDiagram, DiagramError> {
    if c >= d.crossing_count() || monogon(d, c).is_none() {
        return Err(invalid(format!("crossing {c} has no monogon")));
    }
    Ok(d.splice(&[c], &passages(d, c)))
}

fn r2_add(
    d: &LinkDiagram,
    face: usize,
    xi: usize,
    yi: usize,
    x_over: bool,
) -> Result<LinkDiagram, DiagramError> {
    let faces = d.faces();
    let f = faces.get(face).ok_or_else(|| invalid(format!("no face {face}")))?;
    let (&dx, &dy) = match (f.darts.get(xi), f.darts.get(yi)) {
        (Some(a), Some(b)) if xi != yi => (a, b),
        _ => return Err(invalid("bad darts")),
    };
    let (x, y) = (d.label(dx), d.label(dy));
    if x == y {
        return Err(invalid("darts lie on the same arc"));
    }
    let n = d.crossing_count();
    let mut next = d.max_label() + 1;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut ends = d.crossings().to_vec();

    // pieces in face direction: [a, middle, c], relabelled in link direction
    let mut pieces = |arc: ArcId, dart: End| -> (bool, [ArcId; 3]) {
        let info = *d.arc(arc).unwrap();
        let agrees = info.tail == dart;
        let (m, last) = (fresh(), fresh());
        ends[info.head.crossing][info.head.position] = last;
        let p = if agrees { [arc, m, last] } else { [last, m, arc] };
        (agrees, p)
    };
    let (xa, [x_a, x_1, x_c]) = pieces(x, dx);
    let (ya, [y_a, y_1, y_c]) = pieces(y, dy);

    // (label, angle in degrees, incoming)
    let c1 = [(y_1, 0, ya), (x_1, 45, !xa), (y_c, 180, !ya), (x_a, 225, xa)];
    let c2 = [(y_a, 0, ya), (x_1, 135, xa), (y_1, 180, !ya), (x_c, 315, !xa)];
    let under_is_x = !x_over;
    for c in [c1, c2] {
        // the x entries sit at 45/135 and 225/315 degrees
        let start = c
            .iter()
            .position(|&(_, ang, inc)| inc && ((ang / 45) % 2 == 1) == under_is_x)
            .unwrap();
        let mut t = [0; 4];
        for k in 0..4 {
            t[k] = c[(start + k) % 4].0;
        }
        ends.push(t);
    }
    debug_assert_eq!(ends.len(), n + 2);
    LinkDiagram::new(ends, d.free_loops())
}

/// The two crossings of a bigon face whose strands pass over and under consistently.
fn bigon(d: &LinkDiagram, darts: &[End]) -> Result<[usize; 2], DiagramError> {
    if darts.len() != 2 {
        return Err(invalid("not a bigon"));
    }
    let (c1, c2) = (darts[0].crossing, darts[1].crossing);
    if c1 == c2 || d.label(darts[0]) == d.label(darts[1]) {
        return Err(invalid("degenerate bigon"));
    }
    let o = d.other_end(darts[0]);
    if darts[0].position % 2 != o.position % 2 {
        return Err(invalid("bigon strands alternate"));
    }
    Ok([c1.min(c2), c1.max(c2)])
}

fn r2_remove(d: &LinkDiagram, crossings: [usize; 2]) -> Result<LinkDiagram, DiagramError> {
    let ok = d
        .faces()
        .iter()
        .any(|f| bigon(d, &f.darts).map(|b| b == crossings).unwrap_or(false));
    if !ok {
        return Err(invalid(format!("no removable bigon at {crossings:?}")));
    }
    let mut joins = passages(d, crossings[0]).to_vec();
    joins.extend(passages(d, crossings[1]));
    Ok(d.splice(&crossings, &joins))
}

fn triangle(d: &LinkDiagram, darts: &[End]) -> Result<(), DiagramError> {
    if darts.len() != 3 {
        return Err(invalid("not a triangle"));
    }
    let cs: BTreeSet<usize> = darts.iter().map(|e| e.crossing).collect();
    let sides: BTreeSet<ArcId> = darts.iter().map(|e| d.label(*e)).collect();
    if cs.len() != 3 || sides.len() != 3 {
        return Err(invalid("degenerate triangle"));
    }
    let mut over_both = false;
    for &e in darts {
        let o = d.other_end(e);
        if e.position % 2 != o.position % 2 {
            return Err(invalid("triangle side changes level"));
        }
        over_both |= e.position % 2 == 1;
        for x in [e.across(), o.across()] {
            if sides.contains(&d.label(x)) {
                return Err(invalid("triangle side continues into the triangle"));
            }
        }
    }
    if !over_both {
        return Err(invalid("no strand passes over the triangle"));
    }
    Ok(())
}

fn r3(d: &LinkDiagram, arcs: [ArcId; 3]) -> Result<LinkDiagram, DiagramError> {
    let mut want = arcs;
    want.sort();
    let faces = d.faces();
    let f = faces
        .iter()
        .find(|f| {
            let mut s: Vec<ArcId> = f.darts.iter().map(|e| d.label(*e)).collect();
            s.sort();
            s == want
        })
        .ok_or_else(|| invalid(format!("no triangle with sides {arcs:?}")))?;
    triangle(d, &f.darts)?;
    let old = d.crossings();
    let mut ends = old.to_vec();
    for &e in &f.darts {
        let o = d.other_end(e);
        let s = d.label(e);
        let ext_e = d.label(e.across());
        let ext_o = d.label(o.across());
        ends[e.crossing][e.position] = ext_o;
        ends[e.crossing][(e.position + 2) % 4] = s;
        ends[o.crossing][o.position] = ext_e;
        ends[o.crossing][(o.position + 2) % 4] = s;
    }
    LinkDiagram::new(ends, d.free_loops())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn r1_variants_have_requested_sign() {
        let u = LinkDiagram::unknot();
        for sign in [Sign::Positive, Sign::Negative] {
            for side in [R1Side::Left, R1Side::Right] {
                let c = Move::R1Add { arc: None, sign, side }.apply(&u).unwrap();
                assert_eq!(c.signs(), &[sign]);
                assert_eq!(c.component_count(), 1);
                let back = Move::R1Remove { crossing: 0 }.apply(&c).unwrap();
                assert_eq!(back, u);
            }
        }
    }

    #[test]
    fn r2_on_trefoil_and_back() {
        let t = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let mut tried = 0;
        for g in Move::candidates(&t, 10) {
            for m in g {
                if let Move::R2Add { .. } = m {
                    let t2 = m.apply(&t).unwrap();
                    assert_eq!(t2.writhe(), t.writhe());
                    let inv = m.inverse(&t).unwrap();
                    assert_eq!(inv.apply(&t2).unwrap(), t);
                    tried += 1;
                }
            }
        }
        assert!(tried > 0);
    }
}
