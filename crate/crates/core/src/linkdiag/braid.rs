use serde::Serialize;

use super::{LinkDiagram, RawDiagram};
use crate::error::{Error, Result};

/// Artin generator `σ_gap^{±1}`; `gap` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BraidLetter {
    pub gap: usize,
    pub positive: bool,
}

impl BraidLetter {
    pub fn new(gap: usize, positive: bool) -> Self {
        BraidLetter { gap, positive }
    }

    /// Parses a signed generator index: `2` is `σ₂`, `-2` its inverse.
    pub fn from_signed(g: i64) -> Self {
        BraidLetter { gap: g.unsigned_abs() as usize, positive: g > 0 }
    }
}

/// Closure of a braid on `strands` strands.
///
/// Strands run upward with position 1 leftmost. A positive letter sends the
/// over-strand from position `i` to `i+1`.
pub fn braid_closure(strands: usize, word: &[BraidLetter]) -> Result<LinkDiagram> {
    if let Some(l) = word.iter().find(|l| l.gap == 0 || l.gap >= strands) {
        return Err(Error::Precondition(format!("generator {} out of range for {strands} strands", l.gap)));
    }
    let mut next_label = strands as u64;
    let mut cur: Vec<u64> = (1..=strands as u64).collect();
    let mut quads = Vec::new();
    let mut positive = Vec::new();
    for l in word {
        let i = l.gap - 1;
        let (sw, se) = (cur[i], cur[i + 1]);
        let (nw, ne) = (next_label + 1, next_label + 2);
        next_label += 2;
        if l.positive {
            // under SE -> NW, over SW -> NE
            quads.push([se, ne, nw, sw]);
        } else {
            // under SW -> NE, over SE -> NW
            quads.push([sw, se, ne, nw]);
        }
        positive.push(Some(l.positive));
        cur[i] = nw;
        cur[i + 1] = ne;
    }
    // identify each final label with the initial one at its position
    for q in quads.iter_mut() {
        for x in q.iter_mut() {
            if let Some(p) = cur.iter().position(|f| f == x) {
                *x = p as u64 + 1;
            }
        }
    }
    // components: follow positions through the permutation
    let mut perm: Vec<usize> = (0..strands).collect();
    for l in word {
        perm.swap(l.gap - 1, l.gap);
    }
    // perm[p] = strand now at position p; strand s ends where perm[p] == s
    let mut end_of = vec![0; strands];
    for (p, &s) in perm.iter().enumerate() {
        end_of[s] = p;
    }
    let mut seen = vec![false; strands];
    let mut components = Vec::new();
    for s in 0..strands {
        if seen[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut t = s;
        while !seen[t] {
            seen[t] = true;
            comp.push(t as u64 + 1);
            t = end_of[t];
        }
        components.push(comp);
    }
    // one label per component pins the order; unused positions become free loops
    let header: Vec<Vec<u64>> = components.into_iter().map(|c| vec![c[0]]).collect();
    let raw = RawDiagram { quads, positive, components: Some(header), locations: Vec::new() };
    LinkDiagram::from_raw(&raw)
}
