use std::collections::BTreeMap;

use super::{DiagramError, End, LinkDiagram};

/// A face of the projection, as the cycle of darts bounding it. A dart is an
/// end `(c, p)` and traverses the arc at that end away from `c`; the face lies
/// to its left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<End>,
}

impl LinkDiagram {
    /// The dart after `e` on its face.
    pub fn next_dart(&self, e: End) -> End {
        let o = self.other_end(e);
        End::new(o.crossing, (o.position + 3) % 4)
    }

    /// The other end of the arc at `e`.
    pub fn other_end(&self, e: End) -> End {
        let info = &self.arcs[&self.label(e)];
        if info.tail == e {
            info.head
        } else {
            info.tail
        }
    }

    /// Faces ordered by their smallest dart; each dart list starts there.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen = vec![[false; 4]; self.ends.len()];
        let mut out = Vec::new();
        for c in 0..self.ends.len() {
            for p in 0..4 {
                if seen[c][p] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut e = End::new(c, p);
                while !seen[e.crossing][e.position] {
                    seen[e.crossing][e.position] = true;
                    darts.push(e);
                    e = self.next_dart(e);
                }
                out.push(Face { darts });
            }
        }
        out
    }

    /// Face index of the corner at crossing `c` between positions `p` and `p+1`.
    pub fn corner_faces(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for (i, f) in self.faces().iter().enumerate() {
            for d in &f.darts {
                let o = self.other_end(*d);
                // the face turns at `o` from position o.position back to o.position-1
                m.insert((o.crossing, (o.position + 3) % 4), i);
            }
        }
        m
    }

    /// Checkerboard colouring of faces: `true` for black. On each connected
    /// projection component the face at corner (first crossing, 0..1) is black.
    pub fn face_colors(&self) -> Vec<bool> {
        let faces = self.faces();
        let corners = self.corner_faces();
        let n = faces.len();
        // faces adjacent across each arc: the faces left of its two darts
        let mut dart_face = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            for d in &f.darts {
                dart_face.insert(*d, i);
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (i, f) in faces.iter().enumerate() {
            for d in &f.darts {
                let j = dart_face[&self.other_end(*d)];
                adj[i].push(j);
            }
        }
        let mut color: Vec<Option<bool>> = vec![None; n];
        for c in 0..self.ends.len() {
            let f0 = corners[&(c, 0)];
            if color[f0].is_some() {
                continue;
            }
            color[f0] = Some(true);
            let mut stack = vec![f0];
            while let Some(f) = stack.pop() {
                let col = color[f].unwrap();
                for &g in &adj[f] {
                    if color[g].is_none() {
                        color[g] = Some(!col);
                        stack.push(g);
                    }
                }
            }
        }
        color.into_iter().map(|c| c.unwrap_or(true)).collect()
    }

    pub(super) fn check_planar(&self) -> Result<(), DiagramError> {
        let n = self.ends.len();
        if n == 0 {
            return Ok(());
        }
        // projection components via union-find over crossings
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for info in self.arcs.values() {
            let a = find(&mut parent, info.tail.crossing);
            let b = find(&mut parent, info.head.crossing);
            parent[a] = b;
        }
        let mut v = BTreeMap::<usize, i64>::new();
        let mut e = BTreeMap::<usize, i64>::new();
        let mut f = BTreeMap::<usize, i64>::new();
        for c in 0..n {
            *v.entry(find(&mut parent, c)).or_default() += 1;
        }
        for info in self.arcs.values() {
            *e.entry(find(&mut parent, info.tail.crossing)).or_default() += 1;
        }
        for face in self.faces() {
            *f.entry(find(&mut parent, face.darts[0].crossing)).or_default() += 1;
        }
        for (root, vv) in v {
            let euler = vv - e.get(&root).copied().unwrap_or(0) + f.get(&root).copied().unwrap_or(0);
            if euler != 2 {
                return Err(DiagramError::NonPlanar { euler });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::diagram::{parse_pd, DiagramError};

    #[test]
    fn face_counts() {
        let t = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        assert_eq!(t.faces().len(), 5);
        let c = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(c.faces().len(), 3);
    }

    #[test]
    fn coloring_is_proper() {
        let t = parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]").unwrap();
        let col = t.face_colors();
        let corners = t.corner_faces();
        for c in 0..t.crossing_count() {
            for p in 0..4 {
                assert_ne!(col[corners[&(c, p)]], col[corners[&(c, (p + 1) % 4)]]);
            }
        }
    }

    #[test]
    fn non_planar_rejected() {
        // arc 4 leaves and re-enters crossing 1 at opposite corners
        let r = parse_pd("X[1,1,2,3] X[2,4,3,4]");
        assert_eq!(r.unwrap_err(), DiagramError::NonPlanar { euler: 0 });
    }
}
