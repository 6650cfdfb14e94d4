//! Seifert matrices via braid form.
//!
//! Each connected piece of the diagram is first brought to braid form by
//! Vogel moves (Reidemeister II moves that keep the number of Seifert
//! circles and remove incoherent faces). The closed-braid Seifert surface
//! is then a stack of disks joined by half-twisted bands, whose Seifert
//! matrix has a closed form in the braid word.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::braid::BraidLetter;
use super::planar::Planar;
use super::LinkDiagram;
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, SymmetricForm};

/// Upper bound on Vogel moves per crossing of the input.
const VOGEL_MOVES_PER_CROSSING: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceSeifert {
    /// Components (0-based) in this piece.
    pub components: Vec<usize>,
    pub crossings: usize,
    pub vogel_moves: usize,
    pub strands: usize,
    pub braid: Vec<BraidLetter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    /// Seifert circles of the input diagram as arc-label cycles.
    pub seifert_circles: Vec<Vec<usize>>,
    pub pieces: Vec<PieceSeifert>,
    /// Size of the surface basis (first Betti number of the surface).
    pub basis_size: usize,
    #[serde(rename = "V")]
    pub v: Vec<Vec<i64>>,
}

pub fn seifert_matrix(l: &LinkDiagram) -> Result<SeifertData> {
    let mut circles = Vec::new();
    let mut pieces = Vec::new();
    let mut blocks = Vec::new();
    for (xs, comps) in l.pieces() {
        if xs.is_empty() {
            for &c in &comps {
                circles.push(l.components()[c].clone());
            }
            pieces.push(PieceSeifert { components: comps, crossings: 0, vogel_moves: 0, strands: 0, braid: vec![] });
            continue;
        }
        let mut p = Planar::from_piece(l, &xs);
        let (cs, _) = p.seifert_circles();
        circles.extend(cs.iter().map(|c| c.iter().map(|&e| p.origin[e]).collect::<Vec<_>>()));
        let moves = p.vogel(VOGEL_MOVES_PER_CROSSING * xs.len())?;
        let (strands, braid) = read_braid(&p)?;
        blocks.push(braid_seifert_matrix(&braid));
        pieces.push(PieceSeifert { components: comps, crossings: xs.len(), vogel_moves: moves, strands, braid });
    }
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut v = vec![vec![0i64; n]; n];
    let mut off = 0;
    for b in &blocks {
        for (i, row) in b.iter().enumerate() {
            v[off + i][off..off + b.len()].copy_from_slice(row);
        }
        off += b.len();
    }
    Ok(SeifertData { seifert_circles: circles, pieces, basis_size: n, v })
}

/// Signature of `V + Vᵀ`.
pub fn link_signature(l: &LinkDiagram) -> Result<i64> {
    let d = seifert_matrix(l)?;
    Ok(symmetrized(&d.v).signature())
}

pub(crate) fn symmetrized(v: &[Vec<i64>]) -> SymmetricForm {
    let n = v.len();
    let s: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| v[i][j] + v[j][i]).collect()).collect();
    SymmetricForm::new(Matrix::from_i64(&s)).expect("V + Vᵀ is symmetric")
}

/// Reads the braid word of a piece in braid form.
fn read_braid(p: &Planar) -> Result<(usize, Vec<BraidLetter>)> {
    let faces = p.faces();
    let (circles, circle_of) = p.seifert_circles();
    let n = circles.len();
    let mut face_of = vec![[0usize; 2]; p.num_edges()];
    for (f, face) in faces.iter().enumerate() {
        for &(e, d) in face {
            face_of[e][d as usize] = f;
        }
    }
    // the two circles meeting at each crossing
    let meets: Vec<(usize, usize)> = p
        .crossings
        .iter()
        .map(|c| {
            let a = circle_of[c.edges[0]];
            let b = circle_of[c.edges[if c.positive { 3 } else { 1 }]];
            (a.min(b), a.max(b))
        })
        .collect();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(a, b) in &meets {
        if a == b {
            return Err(Error::Invariant("Seifert circle meets itself at a crossing".into()));
        }
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let pairs: usize = adj.iter().map(BTreeSet::len).sum::<usize>() / 2;
    if adj.iter().any(|s| s.len() > 2 || s.is_empty()) || pairs + 1 != n {
        return Err(Error::Invariant("Seifert graph is not a path after braiding".into()));
    }
    let cap = faces
        .iter()
        .find(|f| f.iter().all(|&(e, d)| d && circle_of[e] == circle_of[f[0].0]))
        .map(|f| circle_of[f[0].0])
        .filter(|&c| adj[c].len() == 1)
        .ok_or_else(|| Error::Invariant("no innermost Seifert circle found".into()))?;
    let mut order = vec![cap];
    while order.len() < n {
        let last = *order.last().expect("nonempty");
        let nxt = adj[last]
            .iter()
            .copied()
            .find(|c| !order.contains(c))
            .ok_or_else(|| Error::Invariant("Seifert path broken".into()))?;
        order.push(nxt);
    }
    let mut pos = vec![0; n];
    for (i, &c) in order.iter().enumerate() {
        pos[c] = i;
    }
    // cut from the innermost circle outward
    let mut cut = vec![circles[cap][0]];
    for i in 1..n {
        let f = face_of[cut[i - 1]][0];
        let e = faces[f]
            .iter()
            .find(|&&(e, _)| pos[circle_of[e]] == i)
            .map(|&(e, _)| e)
            .ok_or_else(|| Error::Invariant(format!("cut face misses circle {}", i + 1)))?;
        cut.push(e);
    }
    // crossings along each circle from the cut, chained into a partial order
    let m = p.crossings.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    let mut indeg = vec![0usize; m];
    for &start in &cut {
        let mut seq = Vec::new();
        let mut e = start;
        loop {
            seq.push(p.head[e].0);
            e = p.seifert_next(e);
            if e == start {
                break;
            }
        }
        for w in seq.windows(2) {
            if succ[w[0]].insert(w[1]) {
                indeg[w[1]] += 1;
            }
        }
    }
    let gap = |x: usize| pos[meets[x].0].min(pos[meets[x].1]);
    let mut ready: BTreeSet<(usize, usize)> = (0..m).filter(|&x| indeg[x] == 0).map(|x| (gap(x), x)).collect();
    let mut word = Vec::with_capacity(m);
    while let Some((g, x)) = ready.pop_first() {
        if pos[meets[x].0].abs_diff(pos[meets[x].1]) != 1 {
            return Err(Error::Invariant("crossing joins non-adjacent circles".into()));
        }
        word.push(BraidLetter::new(g + 1, p.crossings[x].positive));
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert((gap(y), y));
            }
        }
    }
    if word.len() != m {
        return Err(Error::Invariant("crossing order along circles is cyclic".into()));
    }
    Ok((n, word))
}

/// Seifert matrix of the canonical surface of a closed braid.
///
/// Generators are loops through consecutive bands `(k, l)` of one gap.
pub fn braid_seifert_matrix(word: &[BraidLetter]) -> Vec<Vec<i64>> {
    let eps = |k: usize| if word[k].positive { 1i64 } else { -1 };
    let mut gaps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, l) in word.iter().enumerate() {
        gaps.entry(l.gap).or_default().push(k);
    }
    let mut gens: Vec<(usize, usize, usize)> = Vec::new();
    for (&g, occ) in &gaps {
        for w in occ.windows(2) {
            gens.push((g, w[0], w[1]));
        }
    }
    let n = gens.len();
    let mut v = vec![vec![0i64; n]; n];
    for (a, &(g, k, l)) in gens.iter().enumerate() {
        v[a][a] = -(eps(k) + eps(l)) / 2;
        for (b, &(h, p, q)) in gens.iter().enumerate() {
            if h == g && p == l {
                if eps(l) > 0 {
                    v[b][a] = 1;
                } else {
                    v[a][b] = -1;
                }
            }
            if h == g + 1 {
                if k < p && p < l && l < q {
                    v[a][b] = 1;
                } else if p < k && k < q && q < l {
                    v[a][b] = -1;
                }
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{braid_closure, parse_pd};

    fn word(gs: &[i64]) -> Vec<BraidLetter> {
        gs.iter().map(|&g| BraidLetter::from_signed(g)).collect()
    }

    #[test]
    fn hopf_matrix() {
        assert_eq!(braid_seifert_matrix(&word(&[1, 1])), vec![vec![-1]]);
    }

    #[test]
    fn torus_knot_signatures() {
        for (strands, gs, sig) in [
            (2, vec![1, 1, 1], -2),
            (3, [1, 2].repeat(4), -6),
            (3, [1, 2].repeat(5), -8),
            (3, [1, 2].repeat(7), -8),
        ] {
            let v = braid_seifert_matrix(&word(&gs));
            assert_eq!(symmetrized(&v).signature(), sig, "{gs:?}");
            let l = braid_closure(strands, &word(&gs)).unwrap();
            assert_eq!(link_signature(&l).unwrap(), sig);
        }
    }

    #[test]
    fn unknot_kink_is_empty() {
        let d = seifert_matrix(&parse_pd("X(1,2,2,1)").unwrap()).unwrap();
        assert!(d.v.is_empty());
        assert_eq!(d.seifert_circles.len(), 2);
    }
}
