//! Sphere bundles of oriented rank-3 bundles over 4-dimensional models and
//! the characteristic numbers built from them.
//!
//! The total space `S(E)` of the unit sphere bundle is modelled
//! multiplicatively over `H*(X)`: its cohomology is free on `{1, e_F}` with
//! `e_F² = ρ*p₁(E)`, and integration over the fiber sends `e_F` to 2.
//! Pullback labels keep their base names; the fiber part of `ρ*b` is
//! labelled `b*eF` (`eF` alone for the unit).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::cohomring::{validate_model, CohomModel, Coeffs, ModelSpec, ProductEntry, RingElement};
use crate::error::{Error, Result};
use crate::exactlin::{lcm_denominators, mod_z, q, qf, Rational, Q};

/// An oriented rank-3 bundle over a closed 4-dimensional model.
#[derive(Debug, Clone)]
pub struct Bundle3Data {
    pub base: Arc<CohomModel>,
    pub p1e: RingElement,
    pub sign_x: i64,
}

impl Bundle3Data {
    /// Checks degrees and, when the base carries `tangent_p1`, Hirzebruch
    /// consistency of `sign_x`.
    pub fn new(base: Arc<CohomModel>, p1e: RingElement, sign_x: i64) -> Result<Self> {
        if base.dim() != 4 {
            return Err(Error::Dimension(format!("bundle base has dimension {}, expected 4", base.dim())));
        }
        if p1e.degree() != 4 {
            return Err(Error::Dimension(format!("p1E has degree {}, expected 4", p1e.degree())));
        }
        let p1e = p1e.rebind(&base)?;
        if base.tangent_p1().is_some() {
            let h = hirzebruch_signature(&base)?;
            if h != q(sign_x) {
                return Err(Error::Validation(vec![format!(
                    "signX = {sign_x} but (1/3) of the tangent p1 integral is {}",
                    crate::exactlin::fmt_rational(&h)
                )]));
            }
        }
        Ok(Bundle3Data { base, p1e, sign_x })
    }
}

#[derive(Debug, Clone)]
pub struct SphereBundleModel {
    pub data: Bundle3Data,
    pub total: Arc<CohomModel>,
    pub ef: RingElement,
    /// total label -> (base label, carries e_F)
    origin: BTreeMap<String, (String, bool)>,
}

fn fiber_label(b: &str) -> String {
    if b == "1" {
        "eF".to_string()
    } else {
        format!("{b}*eF")
    }
}

/// Builds `S(E)` with its vertical Euler class.
pub fn build_sphere_bundle(data: &Bundle3Data) -> Result<SphereBundleModel> {
    let base = &data.base;
    let report = validate_model(base, false);
    if !report.is_ok() {
        return Err(Error::Validation(report.violations.iter().map(|v| v.to_string()).collect()));
    }
    let n = base.dim();
    let dim = n + 2;
    let mut basis: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut origin = BTreeMap::new();
    // generators in total degree order: pullbacks first, then fiber classes
    let mut gens: Vec<(String, String, bool)> = Vec::new();
    for d in 0..=dim {
        let mut labels = Vec::new();
        for b in base.basis(d) {
            labels.push(b.clone());
            gens.push((b.clone(), b.clone(), false));
        }
        if d >= 2 {
            for b in base.basis(d - 2) {
                let l = fiber_label(b);
                labels.push(l.clone());
                gens.push((l, b.clone(), true));
            }
        }
        if !labels.is_empty() {
            basis.insert(d.to_string(), labels);
        }
    }
    for (l, b, f) in &gens {
        if origin.insert(l.clone(), (b.clone(), *f)).is_some() {
            return Err(Error::Validation(vec![format!("label clash on {l:?} in the total space")]));
        }
    }
    let to_total = |x: &RingElement, fiber: bool| -> Coeffs {
        x.to_coeffs()
            .into_iter()
            .map(|(l, c)| (if fiber { fiber_label(&l) } else { l }, c))
            .collect()
    };
    let mut products = Vec::new();
    for (la, ba, fa) in &gens {
        for (lb, bb, fb) in &gens {
            let a = RingElement::basis(base, ba)?;
            let b = RingElement::basis(base, bb)?;
            let ab = a.multiply(&b)?;
            let (value, fiber) = match (fa, fb) {
                (false, false) => (ab, false),
                (true, true) => (ab.multiply(&data.p1e)?, false),
                _ => (ab, true),
            };
            let deg = value.degree() + if fiber { 2 } else { 0 };
            if deg > dim || value.is_zero() {
                continue;
            }
            products.push(ProductEntry { a: la.clone(), b: lb.clone(), value: to_total(&value, fiber) });
        }
    }
    let integral: Coeffs = RingElement::from_vec(base, n, base.integral_coeffs().to_vec())?
        .to_coeffs()
        .into_iter()
        .map(|(l, c)| (fiber_label(&l), Q(&c.0 * q(2))))
        .collect();
    let tangent_p1 = match base.tangent_p1() {
        Some(t) => Some(to_total(&t.add(&data.p1e)?, false)),
        None => None,
    };
    let spec = ModelSpec {
        name: format!("S(E) over {}", base.name()),
        dim,
        basis,
        products,
        integral,
        tangent_p1,
    };
    let total = CohomModel::from_spec(&spec, false)?;
    let ef = if base.basis(0) == ["1"] {
        RingElement::basis(&total, "eF")?
    } else {
        // sum of the fiber classes of the component idempotents
        let mut c = Coeffs::new();
        for b in base.basis(0) {
            c.insert(fiber_label(b), Q(q(1)));
        }
        RingElement::from_coeffs(&total, 2, &c)?
    };
    Ok(SphereBundleModel { data: data.clone(), total, ef, origin })
}

impl SphereBundleModel {
    fn split(&self, a: &RingElement) -> Result<(Coeffs, Coeffs)> {
        if !Arc::ptr_eq(a.model(), &self.total) && **a.model() != *self.total {
            return Err(Error::Precondition("element is not in the total space".into()));
        }
        let mut pulled = Coeffs::new();
        let mut fiber = Coeffs::new();
        for (l, c) in a.to_coeffs() {
            let (b, f) = &self.origin[&l];
            if *f { fiber.insert(b.clone(), c) } else { pulled.insert(b.clone(), c) };
        }
        Ok((pulled, fiber))
    }

    /// `ρ*` on a base element.
    pub fn pullback(&self, b: &RingElement) -> Result<RingElement> {
        let b = b.rebind(&self.data.base)?;
        RingElement::from_coeffs(&self.total, b.degree(), &b.to_coeffs())
    }

    /// Integration along the fiber: `ρ*b ↦ 0`, `ρ*b·e_F ↦ 2b`.
    pub fn gysin(&self, a: &RingElement) -> Result<RingElement> {
        let (_, fiber) = self.split(a)?;
        if a.degree() < 2 {
            return Ok(RingElement::zero(&self.data.base, 0));
        }
        let doubled: Coeffs = fiber.into_iter().map(|(l, c)| (l, Q(c.0 * q(2)))).collect();
        RingElement::from_coeffs(&self.data.base, a.degree() - 2, &doubled)
    }

    /// The fiberwise antipodal involution: fixes pullbacks, negates `e_F`.
    pub fn tau(&self, a: &RingElement) -> Result<RingElement> {
        let mut c = a.to_coeffs();
        for (l, x) in c.iter_mut() {
            if self.origin[l].1 {
                x.0 = -x.0.clone();
            }
        }
        RingElement::from_coeffs(&self.total, a.degree(), &c)
    }
}

fn check_six(w: &Arc<CohomModel>, e: &RingElement) -> Result<(RingElement, RingElement)> {
    if w.dim() != 6 {
        return Err(Error::Dimension(format!("characteristic numbers need dimension 6, got {}", w.dim())));
    }
    if e.degree() != 2 {
        return Err(Error::Dimension(format!("e has degree {}, expected 2", e.degree())));
    }
    let p1 = w
        .tangent_p1()
        .ok_or_else(|| Error::Precondition(format!("model {:?} has no tangent_p1", w.name())))?;
    Ok((p1, e.rebind(w)?))
}

/// `(1/6 ∫ p₁(TW)e − e³, 1/2 ∫ e³)`.
pub fn chi(w: &Arc<CohomModel>, e: &RingElement) -> Result<(Rational, Rational)> {
    let (p1, e) = check_six(w, e)?;
    let e3 = e.pow(3)?.integrate()?;
    let p1e = p1.multiply(&e)?.integrate()?;
    Ok(((p1e - &e3) * qf(1, 6), e3 * qf(1, 2)))
}

/// `(Sign X, ∫ p₁(E))`.
pub fn xi(data: &Bundle3Data) -> Result<(i64, Rational)> {
    Ok((data.sign_x, data.p1e.integrate()?))
}

pub fn phi(w: &Arc<CohomModel>, e: &RingElement) -> Result<(Rational, Rational)> {
    let (a, b) = chi(w, e)?;
    Ok((mod_z(&a), mod_z(&b)))
}

/// Order of `phi` in `(Q/Z)²`.
pub fn cobordism_order(w: &Arc<CohomModel>, e: &RingElement) -> Result<BigInt> {
    let (a, b) = chi(w, e)?;
    Ok(lcm_denominators(&[a, b]))
}

/// `(1/3) ∫ p₁(TX)` on a 4-dimensional model.
pub fn hirzebruch_signature(x: &Arc<CohomModel>) -> Result<Rational> {
    if x.dim() != 4 {
        return Err(Error::Dimension(format!("signature formula needs dimension 4, got {}", x.dim())));
    }
    let p1 = x
        .tangent_p1()
        .ok_or_else(|| Error::Precondition(format!("model {:?} has no tangent_p1", x.name())))?;
    Ok(p1.integrate()? * qf(1, 3))
}

/// Rank-one 4-dimensional model `{1, v}`, `∫v = 1`, with `p₁ = t·v`.
pub fn witness_base(tangent: i64) -> Result<Arc<CohomModel>> {
    let spec = ModelSpec {
        name: format!("witness({tangent})"),
        dim: 4,
        basis: [("0", "1"), ("4", "v")]
            .into_iter()
            .map(|(d, l)| (d.to_string(), vec![l.to_string()]))
            .collect(),
        products: vec![],
        integral: [("v".to_string(), Q(q(1)))].into_iter().collect(),
        tangent_p1: Some([("v".to_string(), Q(q(tangent)))].into_iter().collect()),
    };
    CohomModel::from_spec(&spec, false)
}

/// χ of the normal sphere bundle of a null-homologous 4-dimensional
/// submanifold of signature `sign_x`, computed on a witness model.
pub fn normal_sphere_chi(sign_x: i64) -> Result<(Rational, Rational)> {
    let base = witness_base(3 * sign_x)?;
    let v = RingElement::basis(&base, "v")?;
    let data = Bundle3Data::new(base, v.scale(&q(-3 * sign_x)), sign_x)?;
    let s = build_sphere_bundle(&data)?;
    let got = chi(&s.total, &s.ef)?;
    if got != (q(sign_x), q(-3 * sign_x)) {
        return Err(Error::Invariant(format!(
            "normal sphere bundle of signature {sign_x} gave chi = ({}, {})",
            crate::exactlin::fmt_rational(&got.0),
            crate::exactlin::fmt_rational(&got.1)
        )));
    }
    Ok(got)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn bundle(base: &str, k: i64) -> Bundle3Data {
        let m = fixtures::model(base).unwrap();
        let top = m.basis(4)[0].clone();
        let p = RingElement::basis(&m, &top).unwrap().scale(&q(k));
        let s = hirzebruch_signature(&m).unwrap();
        Bundle3Data::new(m, p, s.to_integer().try_into().unwrap()).unwrap()
    }

    #[test]
    fn cp2_sphere_bundles() {
        for k in [0, 1] {
            let s = build_sphere_bundle(&bundle("cp2", k)).unwrap();
            assert!(validate_model(&s.total, true).is_ok());
            assert_eq!(s.ef.pow(3).unwrap().integrate().unwrap(), q(2 * k));
            assert_eq!(chi(&s.total, &s.ef).unwrap(), (q(1), q(k)));
            assert_eq!(xi(&s.data).unwrap(), (1, q(k)));
        }
    }

    #[test]
    fn gysin_and_tau() {
        let s = build_sphere_bundle(&bundle("cp2", 1)).unwrap();
        let base = &s.data.base;
        let h = RingElement::basis(base, "h").unwrap();
        let one = RingElement::unit(base);
        assert_eq!(s.gysin(&s.ef).unwrap(), one.scale(&q(2)));
        let ph = s.pullback(&h).unwrap();
        assert!(s.gysin(&ph).unwrap().is_zero());
        assert_eq!(s.gysin(&ph.multiply(&s.ef).unwrap()).unwrap(), h.scale(&q(2)));
        assert_eq!(s.tau(&s.ef).unwrap(), s.ef.scale(&q(-1)));
        assert_eq!(s.tau(&ph).unwrap(), ph);
        let x = ph.multiply(&s.ef).unwrap().add(&s.pullback(&h.multiply(&h).unwrap()).unwrap()).unwrap();
        assert_eq!(s.tau(&s.tau(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn hirzebruch_values() {
        assert_eq!(hirzebruch_signature(&fixtures::model("cp2").unwrap()).unwrap(), q(1));
        assert_eq!(hirzebruch_signature(&fixtures::model("s4").unwrap()).unwrap(), q(0));
        assert_eq!(hirzebruch_signature(&fixtures::model("k3_like").unwrap()).unwrap(), q(-16));
        assert!(hirzebruch_signature(&fixtures::model("t3").unwrap()).is_err());
    }

    #[test]
    fn inconsistent_signature_rejected() {
        let m = fixtures::model("cp2").unwrap();
        let z = RingElement::zero(&m, 4);
        assert!(Bundle3Data::new(m, z, 0).is_err());
    }

    #[test]
    fn normal_sphere_values() {
        assert_eq!(normal_sphere_chi(1).unwrap(), (q(1), q(-3)));
        assert_eq!(normal_sphere_chi(0).unwrap(), (q(0), q(0)));
        assert_eq!(normal_sphere_chi(-16).unwrap(), (q(-16), q(48)));
    }

    #[test]
    fn zero_class_and_orders() {
        let s = build_sphere_bundle(&bundle("cp2", 0)).unwrap();
        let z = RingElement::zero(&s.total, 2);
        assert_eq!(chi(&s.total, &z).unwrap(), (q(0), q(0)));
        assert_eq!(phi(&s.total, &s.ef).unwrap(), (q(0), q(0)));
        assert_eq!(cobordism_order(&s.total, &s.ef).unwrap(), BigInt::from(1));
        // chi is cubic in e, so e = eF/2 gives fractional values
        let half = s.ef.scale(&qf(1, 2));
        let c = chi(&s.total, &half).unwrap();
        assert_eq!(c, (qf(1, 2), q(0)));
        assert_eq!(cobordism_order(&s.total, &half).unwrap(), BigInt::from(2));
    }

    #[test]
    fn chi_needs_tangent_class() {
        let m = fixtures::model("t3xs3").unwrap();
        let bare = Arc::new(m.with_tangent_p1(None).unwrap());
        assert!(chi(&bare, &RingElement::zero(&bare, 2)).is_err());
        assert!(chi(&m, &RingElement::zero(&m, 2)).is_ok());
    }
}
