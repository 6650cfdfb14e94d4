//! Oriented link diagrams in PD notation.
//!
//! A crossing `X(a,b,c,d)` lists its four arcs counterclockwise starting at
//! the incoming under-strand, so the under-strand runs `a → c`. The crossing
//! is positive when the over-strand runs `d → b`:
//!
//! ```text
//!        c               c
//!        ^               ^
//!   d ---|--> b     d <--|--- b
//!        |               |
//!        a               a
//!     sign +1         sign -1
//! ```
//!
//! Orientation of the over-strand is not part of the notation; it is
//! inferred from the arcs' roles at other crossings. Components that never
//! pass under anything follow the convention that labels increase along the
//! over-strand. Parsing relabels arcs canonically: components in header
//! order (otherwise by smallest input label), each numbered consecutively
//! along its orientation starting from its smallest input label.

mod braid;
mod planar;
mod seifert;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub use braid::{braid_closure, BraidLetter};
pub use seifert::{link_signature, seifert_matrix, SeifertData};

/// Role of a crossing slot for the arc attached there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    In,
    Out,
}

/// Roles of slots 0..4 given the crossing sign.
pub(crate) fn roles(positive: bool) -> [Role; 4] {
    use Role::*;
    if positive {
        [In, Out, Out, In]
    } else {
        [In, In, Out, Out]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// Arc labels, counterclockwise from the incoming under-strand.
    pub arcs: [usize; 4],
    pub positive: bool,
}

impl Crossing {
    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    /// Incoming and outgoing over-strand arcs.
    pub fn over(&self) -> (usize, usize) {
        if self.positive {
            (self.arcs[3], self.arcs[1])
        } else {
            (self.arcs[1], self.arcs[3])
        }
    }

    pub fn under(&self) -> (usize, usize) {
        (self.arcs[0], self.arcs[2])
    }
}

/// A parsed, canonically labelled oriented link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    /// Arc labels of each component in orientation order.
    components: Vec<Vec<usize>>,
    /// Component of arc `a` at index `a - 1`.
    comp_of: Vec<usize>,
}

/// Input to canonicalisation: labels are arbitrary positive integers.
#[derive(Debug, Clone, Default)]
pub struct RawDiagram {
    pub quads: Vec<[u64; 4]>,
    /// Known crossing signs; `None` entries are inferred.
    pub positive: Vec<Option<bool>>,
    /// Optional component pinning: one label list per component.
    pub components: Option<Vec<Vec<u64>>>,
    /// Location string of each quad, for error messages.
    pub locations: Vec<String>,
}

impl RawDiagram {
    fn loc(&self, x: usize) -> String {
        self.locations.get(x).cloned().unwrap_or_else(|| format!("crossing {}", x + 1))
    }
}

/// Parses PD text: terms `X(a,b,c,d)` (or `X[a,b,c,d]`) separated by
/// whitespace or commas, `#` comments, and an optional header line
/// `components: [[...],[...]]`.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    LinkDiagram::from_raw(&parse_raw(text)?)
}

fn parse_raw(text: &str) -> Result<RawDiagram> {
    let mut raw = RawDiagram::default();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("components:") {
            if raw.components.is_some() {
                return Err(Error::parse(format!("line {}", ln + 1), "duplicate components header"));
            }
            let lists: Vec<Vec<u64>> = serde_json::from_str(rest.trim())
                .map_err(|e| Error::parse(format!("line {}", ln + 1), format!("bad components header: {e}")))?;
            raw.components = Some(lists);
            continue;
        }
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_whitespace() || c == ',' {
                i += 1;
                continue;
            }
            let loc = format!("line {}, column {}", ln + 1, i + 1);
            if c != 'X' {
                return Err(Error::parse(loc, format!("unexpected character {c:?}")));
            }
            let open = bytes.get(i + 1).map(|&b| b as char);
            let close = match open {
                Some('(') => ')',
                Some('[') => ']',
                _ => return Err(Error::parse(loc, "expected '(' or '[' after X")),
            };
            let Some(len) = line[i + 2..].find(close) else {
                return Err(Error::parse(loc, format!("unterminated term, missing {close:?}")));
            };
            let body = &line[i + 2..i + 2 + len];
            let nums: Vec<&str> = body.split(',').map(str::trim).collect();
            if nums.len() != 4 {
                return Err(Error::parse(loc, format!("crossing has {} entries, expected 4", nums.len())));
            }
            let mut quad = [0u64; 4];
            for (k, s) in nums.iter().enumerate() {
                quad[k] = match s.parse::<u64>() {
                    Ok(v) if v > 0 => v,
                    _ => return Err(Error::parse(loc, format!("arc label {s:?} is not a positive integer"))),
                };
            }
            raw.quads.push(quad);
            raw.positive.push(None);
            raw.locations.push(loc);
            i += 2 + len + 1;
        }
    }
    Ok(raw)
}

/// Every connected piece with `c` crossings must have `c + 2` faces.
fn check_planar(raw: &RawDiagram, occ: &BTreeMap<u64, Vec<(usize, usize)>>) -> Result<()> {
    let n = raw.quads.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for o in occ.values() {
        let (a, b) = (find(&mut parent, o[0].0), find(&mut parent, o[1].0));
        parent[a.max(b)] = a.min(b);
    }
    let pieces = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    let other = |x: usize, s: usize| {
        let o = &occ[&raw.quads[x][s]];
        if o[0] == (x, s) { o[1] } else { o[0] }
    };
    let mut seen = vec![[false; 4]; n];
    let mut faces = 0;
    for x in 0..n {
        for s in 0..4 {
            if seen[x][s] {
                continue;
            }
            faces += 1;
            let (mut y, mut t) = (x, s);
            while !seen[y][t] {
                seen[y][t] = true;
                let (z, u) = other(y, t);
                (y, t) = (z, (u + 3) % 4);
            }
        }
    }
    if faces != n + 2 * pieces {
        return Err(Error::parse(
            "diagram",
            format!("not planar: {faces} faces where a planar diagram has {}", n + 2 * pieces),
        ));
    }
    Ok(())
}

impl LinkDiagram {
    /// Canonicalises raw crossing data: infers orientations, splits into
    /// components and relabels.
    pub fn from_raw(raw: &RawDiagram) -> Result<LinkDiagram> {
        let n = raw.quads.len();
        let mut occ: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, q) in raw.quads.iter().enumerate() {
            for (s, &l) in q.iter().enumerate() {
                occ.entry(l).or_default().push((x, s));
            }
        }
        for (&l, o) in &occ {
            if o.len() != 2 {
                return Err(Error::parse(
                    raw.loc(o[0].0),
                    format!("dangling arc: label {l} occurs {} time(s), expected 2", o.len()),
                ));
            }
        }
        check_planar(raw, &occ)?;
        let mut free: Vec<u64> = Vec::new();
        if let Some(lists) = &raw.components {
            let mut seen = BTreeSet::new();
            for list in lists {
                if list.is_empty() {
                    return Err(Error::parse("components header", "empty component list"));
                }
                for &l in list {
                    if !seen.insert(l) {
                        return Err(Error::parse("components header", format!("label {l} listed twice")));
                    }
                    if !occ.contains_key(&l) {
                        if list.len() != 1 {
                            return Err(Error::parse(
                                "components header",
                                format!("label {l} is in no crossing, so it must be a component of its own"),
                            ));
                        }
                        free.push(l);
                    }
                }
            }
        }

        let mut sign: Vec<Option<bool>> = raw.positive.clone();
        sign.resize(n, None);
        let role = |sign: &[Option<bool>], (x, s): (usize, usize)| -> Option<Role> {
            match s {
                0 => Some(Role::In),
                2 => Some(Role::Out),
                _ => sign[x].map(|p| roles(p)[s]),
            }
        };
        let opposite = |r: Role| if r == Role::In { Role::Out } else { Role::In };
        loop {
            let mut changed = true;
            while changed {
                changed = false;
                for (&l, o) in &occ {
                    let (p, q) = (o[0], o[1]);
                    match (role(&sign, p), role(&sign, q)) {
                        (Some(a), Some(b)) if a == b => {
                            return Err(Error::parse(
                                raw.loc(p.0),
                                format!("inconsistent orientation: arc {l} is {:?} at both ends", a),
                            ));
                        }
                        (Some(a), None) => {
                            sign[q.0] = Some(sign_for(q.1, opposite(a)));
                            changed = true;
                        }
                        (None, Some(b)) => {
                            sign[p.0] = Some(sign_for(p.1, opposite(b)));
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            let Some(x) = sign.iter().position(Option::is_none) else { break };
            let q = raw.quads[x];
            sign[x] = Some(!(q[3] == q[1] + 1 && q[1] != q[3] + 1));
        }
        let sign: Vec<bool> = sign.into_iter().map(|s| s.expect("all signs resolved")).collect();

        // successor of each label along its component
        let mut next: BTreeMap<u64, u64> = BTreeMap::new();
        for (x, q) in raw.quads.iter().enumerate() {
            let r = roles(sign[x]);
            let ins: Vec<usize> = (0..4).filter(|&s| r[s] == Role::In).collect();
            for s in ins {
                let out = if s == 0 { 2 } else { 4 - s };
                next.insert(q[s], q[out]);
            }
        }
        for &l in &free {
            next.insert(l, l);
        }
        let mut cycles: Vec<Vec<u64>> = Vec::new();
        let mut assigned: BTreeMap<u64, usize> = BTreeMap::new();
        for &start in next.keys() {
            if assigned.contains_key(&start) {
                continue;
            }
            let mut cyc = vec![start];
            assigned.insert(start, cycles.len());
            let mut cur = next[&start];
            while cur != start {
                if assigned.insert(cur, cycles.len()).is_some() {
                    return Err(Error::parse("diagram", format!("arc {cur} lies on two strands")));
                }
                cyc.push(cur);
                cur = next[&cur];
            }
            cycles.push(cyc);
        }
        let order: Vec<usize> = match &raw.components {
            Some(lists) => {
                let mut order = Vec::new();
                for list in lists {
                    let c = assigned[&list[0]];
                    if list.iter().any(|l| assigned[l] != c) {
                        return Err(Error::parse("components header", format!("list {list:?} spans several components")));
                    }
                    if order.contains(&c) {
                        return Err(Error::parse("components header", format!("component of {} listed twice", list[0])));
                    }
                    order.push(c);
                }
                if order.len() != cycles.len() {
                    return Err(Error::parse(
                        "components header",
                        format!("header lists {} components, diagram has {}", order.len(), cycles.len()),
                    ));
                }
                order
            }
            None => {
                let mut idx: Vec<usize> = (0..cycles.len()).collect();
                idx.sort_by_key(|&c| cycles[c].iter().min().copied());
                idx
            }
        };
        let mut relabel: BTreeMap<u64, usize> = BTreeMap::new();
        let mut components = Vec::new();
        let mut comp_of = Vec::new();
        for (ci, &c) in order.iter().enumerate() {
            let cyc = &cycles[c];
            let start = cyc.iter().enumerate().min_by_key(|(_, l)| **l).map(|(i, _)| i).unwrap_or(0);
            let mut labels = Vec::new();
            for k in 0..cyc.len() {
                let l = cyc[(start + k) % cyc.len()];
                let new = relabel.len() + 1;
                relabel.insert(l, new);
                labels.push(new);
                comp_of.push(ci);
            }
            components.push(labels);
        }
        let crossings = raw
            .quads
            .iter()
            .zip(&sign)
            .map(|(q, &p)| Crossing { arcs: q.map(|l| relabel[&l]), positive: p })
            .collect();
        Ok(LinkDiagram { crossings, components, comp_of })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.comp_of.len()
    }

    /// Component index (0-based) of an arc label.
    pub fn component_of(&self, arc: usize) -> usize {
        self.comp_of[arc - 1]
    }

    /// Next arc along the orientation.
    pub fn next_arc(&self, arc: usize) -> usize {
        let comp = &self.components[self.component_of(arc)];
        let i = comp.iter().position(|&a| a == arc).expect("arc in its component");
        comp[(i + 1) % comp.len()]
    }

    pub fn signs(&self) -> Vec<i64> {
        self.crossings.iter().map(Crossing::sign).collect()
    }

    /// Same diagram with every crossing switched.
    pub fn mirror(&self) -> LinkDiagram {
        let quads = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.arcs;
                if c.positive {
                    [d, a, b, cc]
                } else {
                    [b, cc, d, a]
                }
            })
            .collect();
        let positive = self.crossings.iter().map(|c| Some(!c.positive)).collect();
        self.rebuild(quads, positive, self.components.clone())
    }

    /// Reverses the orientation of component `k` (0-based).
    pub fn reverse_component(&self, k: usize) -> LinkDiagram {
        let mut quads = Vec::new();
        let mut positive = Vec::new();
        for c in &self.crossings {
            let under_rev = self.component_of(c.arcs[0]) == k;
            let over_rev = self.component_of(c.arcs[1]) == k;
            let [a, b, cc, d] = c.arcs;
            quads.push(if under_rev { [cc, d, a, b] } else { [a, b, cc, d] });
            positive.push(Some(c.positive ^ under_rev ^ over_rev));
        }
        let mut comps = self.components.clone();
        comps[k].reverse();
        self.rebuild(quads, positive, comps)
    }

    /// Reorders components: new component `i` is old component `perm[i]`.
    pub fn permute_components(&self, perm: &[usize]) -> Result<LinkDiagram> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.num_components()).collect::<Vec<_>>() {
            return Err(Error::Precondition(format!("{perm:?} is not a permutation of the components")));
        }
        let quads = self.crossings.iter().map(|c| c.arcs).collect();
        let positive = self.crossings.iter().map(|c| Some(c.positive)).collect();
        let comps = perm.iter().map(|&i| self.components[i].clone()).collect();
        Ok(self.rebuild(quads, positive, comps))
    }

    fn rebuild(&self, quads: Vec<[usize; 4]>, positive: Vec<Option<bool>>, comps: Vec<Vec<usize>>) -> LinkDiagram {
        let raw = RawDiagram {
            quads: quads.into_iter().map(|q| q.map(|l| l as u64)).collect(),
            positive,
            components: Some(comps.into_iter().map(|c| c.into_iter().map(|l| l as u64).collect()).collect()),
            locations: Vec::new(),
        };
        LinkDiagram::from_raw(&raw).expect("transformed diagram stays valid")
    }

    /// Splits into connected pieces of the projection: each is a list of
    /// crossing indices and a list of component indices, ordered by first
    /// component. Crossingless components form pieces of their own.
    pub fn pieces(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let k = self.num_components();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for c in &self.crossings {
            let a = find(&mut parent, self.component_of(c.arcs[0]));
            let b = find(&mut parent, self.component_of(c.arcs[1]));
            parent[a.max(b)] = a.min(b);
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for comp in 0..k {
            let r = find(&mut parent, comp);
            groups.entry(r).or_default().1.push(comp);
        }
        for (x, c) in self.crossings.iter().enumerate() {
            let r = find(&mut parent, self.component_of(c.arcs[0]));
            groups.get_mut(&r).expect("root present").0.push(x);
        }
        groups.into_values().collect()
    }

    /// PD text that parses back to this diagram (up to the orientation
    /// convention for components that never pass under).
    pub fn to_pd_text(&self) -> String {
        let mut s = String::new();
        if self.num_components() > 1 || self.crossings.is_empty() {
            let lists: Vec<String> = self
                .components
                .iter()
                .map(|c| format!("[{}]", c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            let _ = writeln!(s, "components: [{}]", lists.join(","));
        }
        let terms: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3]))
            .collect();
        s.push_str(&terms.join(" "));
        s.push('\n');
        s
    }

    /// Writhe of each component (sum of signs of its self-crossings).
    pub fn self_writhe(&self) -> Vec<i64> {
        let mut w = vec![0; self.num_components()];
        for c in &self.crossings {
            let (i, j) = (self.component_of(c.arcs[0]), self.component_of(c.arcs[1]));
            if i == j {
                w[i] += c.sign();
            }
        }
        w
    }
}

/// Slot sign making `slot` (1 or 3) have role `r`.
fn sign_for(slot: usize, r: Role) -> bool {
    roles(true)[slot] == r
}

/// Symmetric matrix of pairwise linking numbers; zero diagonal.
pub fn linking_matrix(l: &LinkDiagram) -> Vec<Vec<i64>> {
    let k = l.num_components();
    let mut m = vec![vec![0i64; k]; k];
    for c in l.crossings() {
        let (i, j) = (l.component_of(c.arcs[0]), l.component_of(c.arcs[1]));
        if i != j {
            m[i][j] += c.sign();
            m[j][i] += c.sign();
        }
    }
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v /= 2;
        }
    }
    m
}

pub fn is_algebraically_split(l: &LinkDiagram) -> bool {
    linking_matrix(l).iter().flatten().all(|&v| v == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";

    #[test]
    fn hopf_signs_and_linking() {
        let l = parse_pd(HOPF).unwrap();
        assert_eq!(l.num_components(), 2);
        assert_eq!(l.signs(), vec![1, 1]);
        assert_eq!(linking_matrix(&l), vec![vec![0, 1], vec![1, 0]]);
        assert!(!is_algebraically_split(&l));
        let m = l.mirror();
        assert_eq!(m.signs(), vec![-1, -1]);
        assert_eq!(linking_matrix(&m), vec![vec![0, -1], vec![-1, 0]]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pd("X(1,2,0,1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pd("Y(1,2,2,1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pd("X(1,2,2,1"), Err(Error::Parse { .. })));
        // arc 1 enters at both ends
        assert!(matches!(parse_pd("X(1,3,2,4) X(1,4,2,3)"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_pd("X(6,1,7,2) X(12,8,9,7) X(4,12,1,11) X(10,5,11,6) X(8,4,5,3) X(2,10,3,9)"),
            Err(Error::Parse { .. })
        ));
        let e = parse_pd("X(1,2,3)").unwrap_err().to_string();
        assert!(e.contains("line 1, column 1"), "{e}");
    }

    #[test]
    fn unlink_header_only() {
        let l = parse_pd("components: [[1],[2],[3]]").unwrap();
        assert_eq!(l.num_components(), 3);
        assert_eq!(linking_matrix(&l), vec![vec![0; 3]; 3]);
        assert!(is_algebraically_split(&l));
        assert!(parse_pd("components: [[1,2]]").is_err());
    }

    #[test]
    fn kinks_parse() {
        for t in ["X(1,2,2,1)", "X(1,1,2,2)"] {
            let l = parse_pd(t).unwrap();
            assert_eq!(l.num_components(), 1);
            assert_eq!(l.num_arcs(), 2);
        }
        assert_ne!(parse_pd("X(1,2,2,1)").unwrap().signs(), parse_pd("X(1,1,2,2)").unwrap().signs());
    }

    #[test]
    fn canonical_relabel_is_stable() {
        let l = parse_pd("X(10,30,20,40) X(30,10,40,20)").unwrap();
        assert_eq!(l, parse_pd(HOPF).unwrap());
        let back = parse_pd(&l.to_pd_text()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn reversal_flips_row() {
        let l = parse_pd(HOPF).unwrap();
        let r = l.reverse_component(1);
        assert_eq!(linking_matrix(&r), vec![vec![0, -1], vec![-1, 0]]);
        assert_eq!(r.reverse_component(1), l);
    }

    #[test]
    fn header_pins_order() {
        let a = parse_pd("components: [[3,4],[1,2]]\nX(1,3,2,4) X(3,1,4,2)").unwrap();
        assert_eq!(a.num_components(), 2);
        assert!(parse_pd("components: [[1,3]]\nX(1,3,2,4) X(3,1,4,2)").is_err());
        assert!(parse_pd("components: [[1]]\nX(1,3,2,4) X(3,1,4,2)").is_err());
    }
}
