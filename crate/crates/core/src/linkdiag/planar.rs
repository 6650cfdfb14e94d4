//! Mutable planar view of one connected piece of a diagram: faces, Seifert
//! circles and Reidemeister II moves.

use super::{roles, LinkDiagram, Role};
use crate::error::{Error, Result};

/// Crossing with 0-based edge ids in counterclockwise slot order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PCrossing {
    pub edges: [usize; 4],
    pub positive: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Planar {
    pub crossings: Vec<PCrossing>,
    pub tail: Vec<(usize, usize)>,
    pub head: Vec<(usize, usize)>,
    /// Original arc label of each edge (new edges inherit their parent's).
    pub origin: Vec<usize>,
}

/// A face as the edges met walking its boundary with the face on the left;
/// `true` means the edge is walked along its orientation.
pub(crate) type Face = Vec<(usize, bool)>;

impl Planar {
    /// Planar view of the given crossings (indices into `l`).
    pub fn from_piece(l: &LinkDiagram, crossings: &[usize]) -> Planar {
        let mut ids = std::collections::BTreeMap::new();
        let mut origin = Vec::new();
        let mut cs = Vec::new();
        for &x in crossings {
            let c = l.crossings()[x];
            let edges = c.arcs.map(|a| {
                *ids.entry(a).or_insert_with(|| {
                    origin.push(a);
                    origin.len() - 1
                })
            });
            cs.push(PCrossing { edges, positive: c.positive });
        }
        let mut p = Planar { crossings: cs, tail: vec![], head: vec![], origin };
        p.reindex();
        p
    }

    fn reindex(&mut self) {
        let n = self.origin.len();
        self.tail = vec![(usize::MAX, 0); n];
        self.head = vec![(usize::MAX, 0); n];
        for (x, c) in self.crossings.iter().enumerate() {
            let r = roles(c.positive);
            for s in 0..4 {
                let e = c.edges[s];
                match r[s] {
                    Role::In => self.head[e] = (x, s),
                    Role::Out => self.tail[e] = (x, s),
                }
            }
        }
    }

    pub fn num_edges(&self) -> usize {
        self.origin.len()
    }

    fn out_slot(&self, x: usize, s: usize) -> bool {
        roles(self.crossings[x].positive)[s] == Role::Out
    }

    pub fn faces(&self) -> Vec<Face> {
        let n = self.num_edges();
        let mut seen = vec![[false; 2]; n];
        let mut faces = Vec::new();
        for e0 in 0..n {
            for d0 in [true, false] {
                if seen[e0][d0 as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut e, mut d) = (e0, d0);
                while !seen[e][d as usize] {
                    seen[e][d as usize] = true;
                    face.push((e, d));
                    let (y, j) = if d { self.head[e] } else { self.tail[e] };
                    let s = (j + 3) % 4;
                    e = self.crossings[y].edges[s];
                    d = self.out_slot(y, s);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Edge following `e` on its Seifert circle.
    pub fn seifert_next(&self, e: usize) -> usize {
        let (x, s) = self.head[e];
        let c = self.crossings[x];
        let out = match (c.positive, s) {
            (true, 0) => 1,
            (true, 3) => 2,
            (false, 0) => 3,
            (false, 1) => 2,
            _ => unreachable!("incoming slot"),
        };
        c.edges[out]
    }

    /// Seifert circles as edge cycles, and the circle of each edge.
    pub fn seifert_circles(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.num_edges();
        let mut circle_of = vec![usize::MAX; n];
        let mut circles = Vec::new();
        for e0 in 0..n {
            if circle_of[e0] != usize::MAX {
                continue;
            }
            let mut cyc = Vec::new();
            let mut e = e0;
            while circle_of[e] == usize::MAX {
                circle_of[e] = circles.len();
                cyc.push(e);
                e = self.seifert_next(e);
            }
            circles.push(cyc);
        }
        (circles, circle_of)
    }

    /// A face holding edges of two different Seifert circles walked in the
    /// same sense, if any.
    pub fn find_defect(&self) -> Option<((usize, bool), (usize, bool))> {
        let (_, circle_of) = self.seifert_circles();
        for face in self.faces() {
            for (i, &(e1, d1)) in face.iter().enumerate() {
                for &(e2, d2) in &face[i + 1..] {
                    if d1 == d2 && circle_of[e1] != circle_of[e2] {
                        return Some(((e1, d1), (e2, d2)));
                    }
                }
            }
        }
        None
    }

    /// Pushes a finger of `e1` over `e2` across their common face, creating
    /// two crossings. `d1`, `d2` are the walking senses in that face.
    pub fn r2_over(&mut self, (e1, d1): (usize, bool), (e2, d2): (usize, bool)) {
        // Picture: the face is a strip, e1 along its bottom walked east, e2
        // along its top walked west. The finger rises from e1 at XL, passes
        // over e2, and comes back down at XR.
        let e1_east = d1;
        let e2_west = d2;
        // geometric pieces west to east
        let p = self.split(e1, e1_east);
        let q = self.split(e2, !e2_west);
        // compass slots [E, N, W, S]
        let left = [q[1], p[1], q[0], p[0]];
        let right = [q[2], p[1], q[1], p[2]];
        for (compass, over_north) in [(left, e1_east), (right, !e1_east)] {
            // under strand e2 enters from E when walking west
            let arcs = if e2_west { compass } else { [compass[2], compass[3], compass[0], compass[1]] };
            // over enters at the south slot when heading north
            let over_in_south = over_north;
            let south_slot = if e2_west { 3 } else { 1 };
            let over_in_slot = if over_in_south { south_slot } else { 4 - south_slot };
            self.crossings.push(PCrossing { edges: arcs, positive: over_in_slot == 3 });
        }
        self.reindex();
    }

    /// Splits edge `e` into three pieces and returns them in geometric
    /// west-to-east order, where `east` says whether `e` points east. The
    /// piece starting at the old tail keeps the id `e`.
    fn split(&mut self, e: usize, east: bool) -> [usize; 3] {
        let a = self.origin.len();
        self.origin.push(self.origin[e]);
        self.origin.push(self.origin[e]);
        // orientation order: e, a, a+1; the head slot now receives a+1
        let (hx, hs) = self.head[e];
        self.crossings[hx].edges[hs] = a + 1;
        if east {
            [e, a, a + 1]
        } else {
            [a + 1, a, e]
        }
    }

    /// Diagram input with edge `e` labelled `e + 1`.
    #[cfg(test)]
    pub fn to_raw(&self) -> super::RawDiagram {
        super::RawDiagram {
            quads: self.crossings.iter().map(|c| c.edges.map(|e| e as u64 + 1)).collect(),
            positive: self.crossings.iter().map(|c| Some(c.positive)).collect(),
            ..Default::default()
        }
    }

    /// Applies Vogel moves until no defect face remains.
    pub fn vogel(&mut self, limit: usize) -> Result<usize> {
        let mut moves = 0;
        while let Some((a, b)) = self.find_defect() {
            if moves == limit {
                return Err(Error::Invariant(format!("braiding did not finish within {limit} moves")));
            }
            self.r2_over(a, b);
            moves += 1;
        }
        Ok(moves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{q, Matrix};
    use crate::linkdiag::{braid_closure, link_signature, linking_matrix, seifert_matrix, BraidLetter};
    use num_traits::Signed;

    /// Knot determinant from the Fox coloring matrix.
    fn coloring_det(l: &LinkDiagram) -> crate::Rational {
        let n = l.num_arcs();
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for c in l.crossings() {
            let (a, b) = (find(&mut parent, c.arcs[1]), find(&mut parent, c.arcs[3]));
            parent[a] = b;
        }
        let mut ids = std::collections::BTreeMap::new();
        for a in 1..=n {
            let r = find(&mut parent, a);
            let k = ids.len();
            ids.entry(r).or_insert(k);
        }
        let m = l.crossings().len();
        let mut rows = vec![vec![0i64; ids.len()]; m];
        for (x, c) in l.crossings().iter().enumerate() {
            let id = |a: usize, p: &mut Vec<usize>| ids[&find(p, a)];
            rows[x][id(c.arcs[1], &mut parent)] += 2;
            rows[x][id(c.arcs[0], &mut parent)] -= 1;
            rows[x][id(c.arcs[2], &mut parent)] -= 1;
        }
        let minor: Vec<Vec<i64>> = rows[1..].iter().map(|r| r[1..].to_vec()).collect();
        if minor.is_empty() { q(1) } else { Matrix::from_i64(&minor).det().unwrap().abs() }
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, n: usize) -> usize {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 33) % n as u64) as usize
        }
    }

    fn random_braid(r: &mut Lcg) -> (usize, Vec<BraidLetter>) {
        let strands = 2 + r.next(3);
        let mut w: Vec<BraidLetter> = (1..strands).map(|g| BraidLetter::new(g, r.next(2) == 0)).collect();
        for _ in 0..r.next(8) {
            w.push(BraidLetter::new(1 + r.next(strands - 1), r.next(2) == 0));
        }
        (strands, w)
    }

    #[test]
    fn random_r2_moves_keep_invariants() {
        let mut r = Lcg(7);
        let mut knots = 0;
        for _ in 0..150 {
            let (s, w) = random_braid(&mut r);
            let l = braid_closure(s, &w).unwrap();
            let sig = link_signature(&l).unwrap();
            let lk = linking_matrix(&l);
            let xs: Vec<usize> = (0..l.crossings().len()).collect();
            let mut p = Planar::from_piece(&l, &xs);
            for _ in 0..1 + r.next(4) {
                let faces = p.faces();
                assert_eq!(faces.len(), p.crossings.len() + 2);
                let f = &faces[r.next(faces.len())];
                let pairs: Vec<_> = (0..f.len())
                    .flat_map(|i| (0..f.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| f[i].0 != f[j].0)
                    .collect();
                if pairs.is_empty() {
                    continue;
                }
                let (i, j) = pairs[r.next(pairs.len())];
                p.r2_over(f[i], f[j]);
            }
            let m = LinkDiagram::from_raw(&p.to_raw()).unwrap();
            assert_eq!(m.crossings().len(), p.crossings.len());
            assert_eq!(link_signature(&m).unwrap(), sig, "{w:?}");
            if m.num_components() == 1 && !m.crossings().is_empty() {
                knots += 1;
                let v = seifert_matrix(&m).unwrap().v;
                let n = v.len();
                let s: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| v[i][j] + v[j][i]).collect()).collect();
                let d = if n == 0 { q(1) } else { Matrix::from_i64(&s).det().unwrap().abs() };
                assert_eq!(d, coloring_det(&m), "{w:?}");
            }
            let mut a: Vec<i64> = linking_matrix(&m).concat();
            let mut b: Vec<i64> = lk.concat();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        assert!(knots > 30, "{knots}");
    }

    #[test]
    fn random_r2_moves_keep_triple_linking() {
        let mut r = Lcg(11);
        let p = [1i64, -2, 1, -2, 1, -2];
        for round in 0..24 {
            let k = 1 + round % 3;
            let w: Vec<BraidLetter> = p.repeat(k).iter().map(|&g| BraidLetter::from_signed(if round % 2 == 0 { g } else { -g })).collect();
            let l = braid_closure(3, &w).unwrap();
            let mu = crate::milnor::mu123(&l).unwrap();
            let xs: Vec<usize> = (0..l.crossings().len()).collect();
            let mut pl = Planar::from_piece(&l, &xs);
            for _ in 0..3 {
                let faces = pl.faces();
                let f = &faces[r.next(faces.len())];
                let pairs: Vec<_> = (0..f.len())
                    .flat_map(|i| (0..f.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| f[i].0 != f[j].0)
                    .collect();
                if let Some(&(i, j)) = pairs.get(r.next(pairs.len().max(1))) {
                    pl.r2_over(f[i], f[j]);
                }
            }
            let mut raw = pl.to_raw();
            // keep the component order of the closure
            raw.components = Some(
                l.components().iter().map(|c| vec![(0..pl.num_edges()).find(|&e| pl.origin[e] == c[0]).unwrap() as u64 + 1]).collect(),
            );
            let m = LinkDiagram::from_raw(&raw).unwrap();
            assert_eq!(crate::milnor::mu123(&m).unwrap(), mu, "round {round}");
        }
    }
}
