//! Milnor's triple linking number of algebraically split 3-component links.
//!
//! Every arc of the diagram gets a meridian. Walking component `i` from its
//! base arc, passing under a crossing of sign `ε` whose over-arc has
//! meridian `m_o` conjugates the running meridian: `m_c = g⁻¹ m_a g` with
//! `g = m_o^ε`. The conjugator `w_a` of arc `a` is the product of the letters
//! `g` met so far, so `m_a = w_a⁻¹ m_base w_a`, and the longitude is the
//! full product corrected to the untwisted framing. Under the Magnus map
//! `m_base(i) ↦ 1 + x_i` the coefficient of `x₁x₂` in the third longitude is
//! the triple linking number.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cohomring::{CohomModel, Coeffs, ModelSpec, ProductEntry, RingElement};
use crate::emanifold::{sigma_quasi, QuasiEData};
use crate::error::{Error, Result};
use crate::exactlin::{q, Rational, Q};
use crate::linkdiag::{is_algebraically_split, LinkDiagram};

/// Element of `Q⟨x₁..x_k⟩` truncated above total degree 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedMagnus {
    pub constant: Rational,
    pub linear: Vec<Rational>,
    /// `quadratic[i][j]` is the coefficient of `x_i x_j`.
    pub quadratic: Vec<Vec<Rational>>,
}

impl TruncatedMagnus {
    pub fn zero(k: usize) -> Self {
        TruncatedMagnus {
            constant: Rational::zero(),
            linear: vec![Rational::zero(); k],
            quadratic: vec![vec![Rational::zero(); k]; k],
        }
    }

    pub fn one(k: usize) -> Self {
        TruncatedMagnus { constant: Rational::one(), ..Self::zero(k) }
    }

    /// `1 + x_i`, the image of the `i`-th meridian (0-based).
    pub fn generator(k: usize, i: usize) -> Self {
        let mut g = Self::one(k);
        g.linear[i] = Rational::one();
        g
    }

    pub fn symbols(&self) -> usize {
        self.linear.len()
    }

    pub fn coeff2(&self, i: usize, j: usize) -> &Rational {
        &self.quadratic[i][j]
    }

    /// Raises a group element to an integer power.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { magnus_inv(self)? } else { self.clone() };
        let mut r = Self::one(self.symbols());
        for _ in 0..e.unsigned_abs() {
            r = magnus_mul(&r, &base)?;
        }
        Ok(r)
    }
}

impl Serialize for TruncatedMagnus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            constant: Q,
            linear: Vec<Q>,
            quadratic: Vec<Vec<Q>>,
        }
        Repr {
            constant: Q(self.constant.clone()),
            linear: self.linear.iter().cloned().map(Q).collect(),
            quadratic: self.quadratic.iter().map(|r| r.iter().cloned().map(Q).collect()).collect(),
        }
        .serialize(s)
    }
}

pub fn magnus_mul(u: &TruncatedMagnus, v: &TruncatedMagnus) -> Result<TruncatedMagnus> {
    let k = u.symbols();
    if v.symbols() != k {
        return Err(Error::Dimension(format!("Magnus symbol sets differ: {k} vs {}", v.symbols())));
    }
    let (a, b) = (&u.constant, &v.constant);
    Ok(TruncatedMagnus {
        constant: a * b,
        linear: (0..k).map(|i| a * &v.linear[i] + &u.linear[i] * b).collect(),
        quadratic: (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| a * &v.quadratic[i][j] + &u.quadratic[i][j] * b + &u.linear[i] * &v.linear[j])
                    .collect()
            })
            .collect(),
    })
}

/// `1 − ℓ + ℓ² − q` for `u = 1 + ℓ + q`.
pub fn magnus_inv(u: &TruncatedMagnus) -> Result<TruncatedMagnus> {
    if !u.constant.is_one() {
        return Err(Error::Precondition("Magnus inverse needs constant term 1".into()));
    }
    let k = u.symbols();
    Ok(TruncatedMagnus {
        constant: Rational::one(),
        linear: u.linear.iter().map(|c| -c).collect(),
        quadratic: (0..k)
            .map(|i| (0..k).map(|j| &u.linear[i] * &u.linear[j] - &u.quadratic[i][j]).collect())
            .collect(),
    })
}

/// One under-passing: the strand enters on `in_under`, leaves on
/// `out_under`, below the arc `over`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub out_under: usize,
    pub in_under: usize,
    pub over: usize,
    pub sign: i64,
}

/// Degree-2 Wirtinger data. Arc-indexed vectors use index `arc − 1`.
#[derive(Debug, Clone, Serialize)]
pub struct WirtingerData {
    pub arcs: Vec<usize>,
    pub relations: Vec<Relation>,
    pub base_arc: Vec<usize>,
    pub conjugators: Vec<TruncatedMagnus>,
    /// `w_a⁻¹ (1 + x_{c(a)}) w_a`
    pub expansions: Vec<TruncatedMagnus>,
    pub longitudes: Vec<TruncatedMagnus>,
}

impl WirtingerData {
    /// Uses the first arc of each component as base unless `base` is given.
    pub fn new(l: &LinkDiagram, base: Option<&[usize]>) -> Result<WirtingerData> {
        let k = l.num_components();
        let n = l.num_arcs();
        let base_arc: Vec<usize> = match base {
            Some(b) => {
                if b.len() != k || b.iter().enumerate().any(|(c, &a)| a == 0 || a > n || l.component_of(a) != c) {
                    return Err(Error::Precondition(format!("base arcs {b:?} do not pick one arc per component")));
                }
                b.to_vec()
            }
            None => l.components().iter().map(|c| c[0]).collect(),
        };
        let arcs: Vec<usize> = (1..=n).map(|a| l.component_of(a)).collect();
        // crossing under-passed when leaving each arc
        let mut under_at: BTreeMap<usize, Relation> = BTreeMap::new();
        let mut relations = Vec::new();
        for c in l.crossings() {
            let (a, out) = c.under();
            let r = Relation { out_under: out, in_under: a, over: c.over().0, sign: c.sign() };
            under_at.insert(a, r);
            relations.push(r);
        }
        let walk = |c: usize| -> Vec<usize> {
            let start = base_arc[c];
            let mut seq = vec![start];
            let mut a = l.next_arc(start);
            while a != start {
                seq.push(a);
                a = l.next_arc(a);
            }
            seq
        };
        let walks: Vec<Vec<usize>> = (0..k).map(walk).collect();
        if walks.iter().map(Vec::len).sum::<usize>() != n {
            return Err(Error::Invariant("arcs unreachable from the base arcs".into()));
        }

        // pass 1: linear parts of the conjugators
        let mut lin: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k]; n];
        for w in &walks {
            for pair in w.windows(2) {
                let mut v = lin[pair[0] - 1].clone();
                if let Some(r) = under_at.get(&pair[0]) {
                    v[arcs[r.over - 1]] += q(r.sign);
                }
                lin[pair[1] - 1] = v;
            }
        }
        // pass 2: arc expansions x + xℓ − ℓx
        let expansions: Vec<TruncatedMagnus> = (0..n)
            .map(|a| {
                let i = arcs[a];
                let mut m = TruncatedMagnus::generator(k, i);
                for j in 0..k {
                    m.quadratic[i][j] += &lin[a][j];
                    m.quadratic[j][i] -= &lin[a][j];
                }
                m
            })
            .collect();
        // conjugators and longitudes to degree 2
        let mut conjugators = vec![TruncatedMagnus::one(k); n];
        let mut longitudes = Vec::with_capacity(k);
        for (i, w) in walks.iter().enumerate() {
            let mut cur = TruncatedMagnus::one(k);
            for &a in w {
                conjugators[a - 1] = cur.clone();
                if let Some(r) = under_at.get(&a) {
                    cur = magnus_mul(&cur, &expansions[r.over - 1].pow(r.sign)?)?;
                }
            }
            let e = cur.linear[i].to_i64().ok_or_else(|| Error::Invariant("non-integral writhe".into()))?;
            longitudes.push(magnus_mul(&cur, &TruncatedMagnus::generator(k, i).pow(-e)?)?);
        }
        Ok(WirtingerData { arcs, relations, base_arc, conjugators, expansions, longitudes })
    }
}

/// Longitude of component `i` (0-based) in the untwisted framing.
pub fn longitude_expansion(l: &LinkDiagram, i: usize) -> Result<TruncatedMagnus> {
    if i >= l.num_components() {
        return Err(Error::Precondition(format!("no component {}", i + 1)));
    }
    Ok(WirtingerData::new(l, None)?.longitudes.swap_remove(i))
}

fn check_mu_input(l: &LinkDiagram) -> Result<()> {
    if l.num_components() != 3 {
        return Err(Error::Precondition(format!(
            "triple linking number requires 3 components, diagram has {}",
            l.num_components()
        )));
    }
    if !is_algebraically_split(l) {
        return Err(Error::Precondition("link is not algebraically split".into()));
    }
    Ok(())
}

/// `μ̄(123)` read from the given Wirtinger data.
pub fn mu123_from(w: &WirtingerData) -> Result<i64> {
    let c = w.longitudes[2].coeff2(0, 1);
    if !c.is_integer() {
        return Err(Error::Invariant(format!("non-integral triple linking coefficient {c}")));
    }
    c.to_integer().to_i64().ok_or_else(|| Error::Invariant("triple linking number out of range".into()))
}

pub fn mu123(l: &LinkDiagram) -> Result<i64> {
    check_mu_input(l)?;
    mu123_from(&WirtingerData::new(l, None)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorSigma {
    pub mu123: i64,
    pub sigma: Q,
}

/// Quasi e-data on `X₁ ⊔ X₂ ⊔ X₃` with `γ = γ₁₂ + γ₁₃ + γ₂₃`, where the
/// only nonzero product is `γ₁₂γ₁₃ = μ·[X₁]`.
pub fn milnor_sigma_model(mu: i64) -> Result<(QuasiEData, Rational)> {
    let part = |name: &str, gens: &[&str], top: &str, prods: Vec<ProductEntry>| -> Result<Arc<CohomModel>> {
        let mut basis = BTreeMap::new();
        basis.insert("0".to_string(), vec!["1".to_string()]);
        if !gens.is_empty() {
            basis.insert("2".to_string(), gens.iter().map(|g| g.to_string()).collect());
        }
        basis.insert("4".to_string(), vec![top.to_string()]);
        let spec = ModelSpec {
            name: name.into(),
            dim: 4,
            basis,
            products: prods,
            integral: Coeffs::from([(top.to_string(), Q(q(1)))]),
            tangent_p1: None,
        };
        CohomModel::from_spec(&spec, false)
    };
    let entry = |a: &str, b: &str, v: &str, c: i64| ProductEntry {
        a: a.into(),
        b: b.into(),
        value: if c == 0 { Coeffs::new() } else { Coeffs::from([(v.to_string(), Q(q(c)))]) },
    };
    let x1 = part("X1", &["g12", "g13"], "v1", vec![entry("g12", "g13", "v1", mu)])?;
    let x2 = part("X2", &["g23"], "v2", vec![])?;
    let x3 = part("X3", &[], "v3", vec![])?;
    let x = Arc::new(CohomModel::disjoint_union(
        "milnor",
        &[("X1", x1.as_ref()), ("X2", x2.as_ref()), ("X3", x3.as_ref())],
    )?);
    let gamma = RingElement::from_coeffs(
        &x,
        2,
        &["X1:g12", "X1:g13", "X2:g23"].iter().map(|l| (l.to_string(), Q(q(1)))).collect(),
    )?;
    let d = QuasiEData::new(x, gamma, 0, 1)?;
    let sigma = sigma_quasi(&d)?;
    if sigma != q(-8 * mu) {
        return Err(Error::Invariant(format!("milnor model gives σ = {sigma} for μ = {mu}")));
    }
    Ok((d, sigma))
}

pub fn sigma_of_link(l: &LinkDiagram) -> Result<MilnorSigma> {
    let mu = mu123(l)?;
    let (_, sigma) = milnor_sigma_model(mu)?;
    Ok(MilnorSigma { mu123: mu, sigma: Q(sigma) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emanifold::check_sign_eq_4lambda;
    use crate::fixtures::link;
    use crate::linkdiag::parse_pd;

    #[test]
    fn magnus_arithmetic() {
        let x1 = TruncatedMagnus::generator(2, 0);
        let x2 = TruncatedMagnus::generator(2, 1);
        let p = magnus_mul(&x1, &x2).unwrap();
        assert_eq!(p.linear, vec![q(1), q(1)]);
        assert_eq!(p.quadratic, vec![vec![q(0), q(1)], vec![q(0), q(0)]]);
        let sq = magnus_mul(&x1, &x1).unwrap();
        assert_eq!(sq.linear[0], q(2));
        assert_eq!(sq.quadratic[0][0], q(1));
        let inv = magnus_inv(&x1).unwrap();
        assert_eq!(inv.linear, vec![q(-1), q(0)]);
        assert_eq!(inv.quadratic[0][0], q(1));
        assert_eq!(magnus_mul(&p, &magnus_inv(&p).unwrap()).unwrap(), TruncatedMagnus::one(2));
        assert!(magnus_mul(&x1, &TruncatedMagnus::one(3)).is_err());
        assert!(magnus_inv(&TruncatedMagnus::zero(2)).is_err());
    }

    #[test]
    fn hopf_longitude_sees_linking() {
        let l = link("hopf").unwrap();
        let lam = longitude_expansion(&l, 0).unwrap();
        assert_eq!(lam.linear, vec![q(0), q(1)]);
        let u = parse_pd("components: [[1],[2],[3]]").unwrap();
        for i in 0..3 {
            assert_eq!(longitude_expansion(&u, i).unwrap(), TruncatedMagnus::one(3));
        }
    }

    #[test]
    fn borromean_values() {
        let b = link("borromean").unwrap();
        assert_eq!(longitude_expansion(&b, 2).unwrap().linear, vec![q(0); 3]);
        assert_eq!(mu123(&b).unwrap(), 1);
        // reflection fixes degree-2 Magnus terms
        assert_eq!(mu123(&link("borromean_mirror").unwrap()).unwrap(), 1);
        assert_eq!(mu123(&link("unlink3").unwrap()).unwrap(), 0);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(mu123(&link("hopf").unwrap()), Err(Error::Precondition(_))));
        assert!(matches!(mu123(&link("hopf_unknot").unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn sigma_model() {
        for mu in -3..=3 {
            let (d, s) = milnor_sigma_model(mu).unwrap();
            assert_eq!(s, q(-8 * mu));
            let doubled = d.disjoint_union(&d.reversed().unwrap()).unwrap();
            let v = check_sign_eq_4lambda(&doubled.x, &doubled.gamma, doubled.sign_x).unwrap();
            assert!(v.pass);
        }
    }
}
