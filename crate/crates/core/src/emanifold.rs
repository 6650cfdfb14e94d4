//! The invariant σ of 6-dimensional e-manifolds.
//!
//! Inputs are algebraic shadows: the 4-dimensional submanifold `X` as a
//! cohomology model, its self-linking class `γ`, signatures supplied as
//! integers, and boundary multiplicities.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::charclass::{build_sphere_bundle, chi, Bundle3Data, SphereBundleModel};
use crate::cohomring::{CohomModel, Coeffs, RingElement};
use crate::error::{Error, Result};
use crate::exactlin::{fmt_rational, q, qf, Matrix, Rational, SymmetricForm, Q};

/// Restriction of a class `e` to the normal sphere bundle of `X`, written
/// `ρ*a + c·e_F` with one coefficient `c` per component of `X`.
#[derive(Debug, Clone)]
pub struct RestrictionData {
    pub x: Arc<CohomModel>,
    pub pullback_part: RingElement,
    pub fiber_coeff: Vec<Rational>,
    pub boundary_ok: bool,
}

impl RestrictionData {
    pub fn new(
        x: Arc<CohomModel>,
        pullback_part: RingElement,
        fiber_coeff: Vec<Rational>,
        boundary_ok: bool,
    ) -> Result<Self> {
        if x.dim() != 4 {
            return Err(Error::Dimension(format!("X has dimension {}, expected 4", x.dim())));
        }
        if pullback_part.degree() != 2 {
            return Err(Error::Dimension("pullback part must have degree 2".into()));
        }
        if fiber_coeff.len() != x.components() {
            return Err(Error::Dimension(format!(
                "{} fiber coefficients for {} components",
                fiber_coeff.len(),
                x.components()
            )));
        }
        let pullback_part = pullback_part.rebind(&x)?;
        Ok(RestrictionData { x, pullback_part, fiber_coeff, boundary_ok })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    EClass,
    QuasiEClass { gamma: RingElement },
    NotEClass { reason: String },
}

pub fn classify_restriction(r: &RestrictionData) -> Classification {
    let several = r.fiber_coeff.len() > 1;
    for (i, c) in r.fiber_coeff.iter().enumerate() {
        if !c.is_one() {
            let mut reason = format!("fiber pairing is {}, requires 2", fmt_rational(&(c * q(2))));
            if several {
                reason.push_str(&format!(" (component {})", i + 1));
            }
            return Classification::NotEClass { reason };
        }
    }
    if r.pullback_part.is_zero() {
        Classification::EClass
    } else if r.boundary_ok {
        Classification::QuasiEClass { gamma: r.pullback_part.scale(&qf(1, 2)) }
    } else {
        Classification::NotEClass { reason: "boundary condition fails".into() }
    }
}

/// `Λ = ∫ γ²`.
pub fn self_linking(x: &Arc<CohomModel>, gamma: &RingElement) -> Result<Rational> {
    if x.dim() != 4 || gamma.degree() != 2 {
        return Err(Error::Dimension(format!(
            "self-linking needs a degree-2 class on a 4-dimensional model (got degree {} on dimension {})",
            gamma.degree(),
            x.dim()
        )));
    }
    let g = gamma.rebind(x)?;
    g.multiply(&g)?.integrate()
}

/// Shadow of a 7-dimensional quasi e-manifold with boundary `m` copies.
#[derive(Debug, Clone)]
pub struct QuasiEData {
    pub x: Arc<CohomModel>,
    pub gamma: RingElement,
    pub sign_x: i64,
    pub m: u64,
}

impl QuasiEData {
    pub fn new(x: Arc<CohomModel>, gamma: RingElement, sign_x: i64, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Validation(vec!["multiplicity m must be at least 1".into()]));
        }
        if x.dim() != 4 || gamma.degree() != 2 {
            return Err(Error::Dimension("QuasiEData needs a 4-dimensional X and degree-2 gamma".into()));
        }
        let gamma = gamma.rebind(&x)?;
        Ok(QuasiEData { x, gamma, sign_x, m })
    }

    /// Opposite orientation: integral and signature negate.
    pub fn reversed(&self) -> Result<QuasiEData> {
        let x = Arc::new(self.x.reversed());
        QuasiEData::new(x.clone(), self.gamma.rebind(&x)?, -self.sign_x, self.m)
    }

    /// `k` disjoint copies bounding `k·m` copies of the boundary.
    pub fn copies(&self, k: usize) -> Result<QuasiEData> {
        let tags: Vec<String> = (1..=k).map(|i| format!("c{i}")).collect();
        let parts: Vec<(&str, &QuasiEData)> = tags.iter().map(|t| (t.as_str(), self)).collect();
        let (x, gamma) = union_classes(&parts)?;
        QuasiEData::new(x, gamma, self.sign_x * k as i64, self.m * k as u64)
    }

    /// Disjoint union of the two boundaries, realised with a common
    /// multiplicity `lcm(m, m')`.
    pub fn disjoint_union(&self, other: &QuasiEData) -> Result<QuasiEData> {
        let l = self.m.lcm(&other.m);
        let a = self.copies((l / self.m) as usize)?;
        let b = other.copies((l / other.m) as usize)?;
        let (x, gamma) = union_classes(&[("a", &a), ("b", &b)])?;
        QuasiEData::new(x, gamma, a.sign_x + b.sign_x, l)
    }

    pub fn self_linking(&self) -> Result<Rational> {
        self_linking(&self.x, &self.gamma)
    }
}

fn union_classes(parts: &[(&str, &QuasiEData)]) -> Result<(Arc<CohomModel>, RingElement)> {
    let models: Vec<(&str, &CohomModel)> = parts.iter().map(|(t, d)| (*t, d.x.as_ref())).collect();
    let name = parts.iter().map(|(_, d)| d.x.name()).collect::<Vec<_>>().join("+");
    let x = Arc::new(CohomModel::disjoint_union(&name, &models)?);
    let mut c = Coeffs::new();
    for (t, d) in parts {
        for (l, v) in d.gamma.to_coeffs() {
            c.insert(format!("{t}:{l}"), v);
        }
    }
    let gamma = RingElement::from_coeffs(&x, 2, &c)?;
    Ok((x, gamma))
}

/// `(Sign X − 4∫γ²) / m`.
pub fn sigma_quasi(d: &QuasiEData) -> Result<Rational> {
    let lambda = d.self_linking()?;
    Ok((q(d.sign_x) - lambda * q(4)) / q(d.m as i64))
}

#[derive(Debug, Clone)]
pub struct SeifertGeometricData {
    pub s: Arc<CohomModel>,
    pub sign_s: i64,
    pub normal_euler: RingElement,
}

/// `Sign S − ∫ e(ν_S)²`.
pub fn sigma_geometric(d: &SeifertGeometricData) -> Result<Rational> {
    Ok(q(d.sign_s) - self_linking(&d.s, &d.normal_euler)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub lhs: Q,
    pub rhs: Q,
}

/// `Sign X = 4Λ`, required of closed quasi e-manifolds.
pub fn check_sign_eq_4lambda(x: &Arc<CohomModel>, gamma: &RingElement, sign_x: i64) -> Result<Verdict> {
    let rhs = self_linking(x, gamma)? * q(4);
    let lhs = q(sign_x);
    Ok(Verdict { pass: lhs == rhs, lhs: Q(lhs), rhs: Q(rhs) })
}

/// Stokes obstruction on the normal sphere bundle `X̂` of a closed quasi
/// e-manifold, computed in the bundle ring with `p₁(ν) = −p₁(TX)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalCube {
    /// `∫_X̂ (e_F + 2ρ*γ)³`; zero exactly when the data can close up.
    pub cube: Q,
    /// `χ₂(X̂, e_F)`
    pub chi2: Q,
    pub lambda: Q,
}

pub fn normal_sphere_cube(d: &QuasiEData) -> Result<NormalCube> {
    NormalSphereBundle::new(&d.x, d.sign_x)?.cube(&d.gamma)
}

/// The normal sphere bundle of `X`, reusable across classes `γ`.
#[derive(Debug, Clone)]
pub struct NormalSphereBundle {
    bundle: SphereBundleModel,
    chi2: Rational,
}

impl NormalSphereBundle {
    pub fn new(x: &Arc<CohomModel>, sign_x: i64) -> Result<Self> {
        let p1 = x.tangent_p1().ok_or_else(|| Error::Precondition("X needs tangent_p1".into()))?;
        let data = Bundle3Data::new(x.clone(), p1.scale(&q(-1)), sign_x)?;
        let bundle = build_sphere_bundle(&data)?;
        let (_, chi2) = chi(&bundle.total, &bundle.ef)?;
        Ok(NormalSphereBundle { bundle, chi2 })
    }

    pub fn cube(&self, gamma: &RingElement) -> Result<NormalCube> {
        let s = &self.bundle;
        let e = s.ef.add(&s.pullback(gamma)?.scale(&q(2)))?;
        let cube = e.pow(3)?.integrate()?;
        let lambda = self_linking(&s.data.base, gamma)?;
        Ok(NormalCube { cube: Q(cube), chi2: Q(self.chi2.clone()), lambda: Q(lambda) })
    }
}

#[derive(Debug, Clone)]
pub struct FramedHaefligerData {
    pub q: SymmetricForm,
    pub lambda_pd: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HaefligerResult {
    #[serde(rename = "H")]
    pub h: Q,
    pub sigma: Q,
    pub integral: bool,
}

/// `H = ½ vᵀQv` and `σ = −8H`.
pub fn haefliger(d: &FramedHaefligerData) -> Result<HaefligerResult> {
    if d.lambda_pd.len() != d.q.size() {
        return Err(Error::Dimension(format!(
            "lambda_pd has length {}, form has size {}",
            d.lambda_pd.len(),
            d.q.size()
        )));
    }
    let s = d.q.signature();
    if s != 0 {
        return Err(Error::Precondition(format!("form has signature {s}, requires 0")));
    }
    let h = d.q.eval(&d.lambda_pd)? * qf(1, 2);
    let sigma = &h * q(-8);
    Ok(HaefligerResult { integral: h.is_integer(), h: Q(h), sigma: Q(sigma) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EClassSolution {
    Empty,
    Affine {
        point: Vec<Q>,
        kernel_basis: Vec<Vec<Q>>,
        simple: bool,
        /// Agreement of the kernel dimension with a supplied `ker_iX_dim`.
        #[serde(skip_serializing_if = "Option::is_none")]
        ker_dim_matches: Option<bool>,
    },
}

/// Solves `R·e = target`; the solution set is `point + span(kernel_basis)`.
pub fn eclass_solve(r: &Matrix, target: &[Rational], ker_ix_dim: Option<usize>) -> Result<EClassSolution> {
    let Some((point, kernel)) = r.solve_affine(target)? else {
        return Ok(EClassSolution::Empty);
    };
    let wrap = |v: Vec<Rational>| v.into_iter().map(Q).collect::<Vec<_>>();
    Ok(EClassSolution::Affine {
        simple: kernel.is_empty(),
        ker_dim_matches: ker_ix_dim.map(|k| k == kernel.len()),
        point: wrap(point),
        kernel_basis: kernel.into_iter().map(wrap).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cp2() -> Arc<CohomModel> {
        fixtures::model("cp2").unwrap()
    }

    fn h(m: &Arc<CohomModel>) -> RingElement {
        RingElement::basis(m, "h").unwrap()
    }

    #[test]
    fn classification() {
        let m = cp2();
        let zero = RingElement::zero(&m, 2);
        let r = RestrictionData::new(m.clone(), zero.clone(), vec![q(1)], false).unwrap();
        assert_eq!(classify_restriction(&r), Classification::EClass);
        let r = RestrictionData::new(m.clone(), h(&m).scale(&q(2)), vec![q(1)], true).unwrap();
        assert_eq!(classify_restriction(&r), Classification::QuasiEClass { gamma: h(&m) });
        let r = RestrictionData::new(m.clone(), zero, vec![q(0)], true).unwrap();
        assert_eq!(
            classify_restriction(&r),
            Classification::NotEClass { reason: "fiber pairing is 0, requires 2".into() }
        );
        let r = RestrictionData::new(m.clone(), h(&m), vec![q(1)], false).unwrap();
        assert!(matches!(classify_restriction(&r), Classification::NotEClass { .. }));
        assert!(RestrictionData::new(m.clone(), h(&m), vec![q(1), q(1)], true).is_err());
    }

    #[test]
    fn self_linking_values() {
        let m = cp2();
        assert_eq!(self_linking(&m, &RingElement::zero(&m, 2)).unwrap(), q(0));
        assert_eq!(self_linking(&m, &h(&m)).unwrap(), q(1));
        assert_eq!(self_linking(&m, &h(&m).scale(&qf(1, 2))).unwrap(), qf(1, 4));
        assert!(self_linking(&m, &RingElement::zero(&m, 4)).is_err());
    }

    #[test]
    fn sigma_forms() {
        let m = cp2();
        let d = QuasiEData::new(m.clone(), RingElement::zero(&m, 2), 4, 2).unwrap();
        assert_eq!(sigma_quasi(&d).unwrap(), q(2));
        let s = fixtures::model("s2xs2").unwrap();
        let a = RingElement::basis(&s, "a").unwrap();
        let b = RingElement::basis(&s, "b").unwrap();
        let g = QuasiEData::new(s.clone(), a.add(&b).unwrap(), 0, 1).unwrap();
        assert_eq!(sigma_quasi(&g).unwrap(), q(-8));
        let e = a.add(&b).unwrap().scale(&q(2));
        let geo = SeifertGeometricData { s: s.clone(), sign_s: 0, normal_euler: e };
        assert_eq!(sigma_geometric(&geo).unwrap(), q(-8));
        let geo = SeifertGeometricData { s: m.clone(), sign_s: 1, normal_euler: RingElement::zero(&m, 2) };
        assert_eq!(sigma_geometric(&geo).unwrap(), q(1));
    }

    #[test]
    fn sign_4lambda_verdicts() {
        let m = cp2();
        assert!(check_sign_eq_4lambda(&m, &h(&m), 4).unwrap().pass);
        assert!(!check_sign_eq_4lambda(&m, &h(&m), 1).unwrap().pass);
        assert!(check_sign_eq_4lambda(&m, &RingElement::zero(&m, 2), 0).unwrap().pass);
    }

    #[test]
    fn normal_cube_matches_verdict() {
        let m = cp2();
        // CP² with γ = h/2: Λ = 1/4, so signature 1 closes up
        let d = QuasiEData::new(m.clone(), h(&m).scale(&qf(1, 2)), 1, 1).unwrap();
        let c = normal_sphere_cube(&d).unwrap();
        assert_eq!(c.cube.0, q(0));
        assert_eq!(c.chi2.0, q(-3));
        let d = QuasiEData::new(m.clone(), RingElement::zero(&m, 2), 1, 1).unwrap();
        assert_eq!(normal_sphere_cube(&d).unwrap().cube.0, q(-6));
    }

    #[test]
    fn haefliger_values() {
        let hyp = crate::exactlin::hyperbolic_form();
        let run = |v: [i64; 2]| {
            haefliger(&FramedHaefligerData { q: hyp.clone(), lambda_pd: v.iter().map(|&x| q(x)).collect() })
                .unwrap()
        };
        let r = run([0, 0]);
        assert_eq!((r.h.0, r.sigma.0), (q(0), q(0)));
        let r = run([1, 1]);
        assert_eq!((r.h.0, r.sigma.0, r.integral), (q(1), q(-8), true));
        let r = run([1, -1]);
        assert_eq!((r.h.0, r.sigma.0), (q(-1), q(8)));
        let bad = FramedHaefligerData { q: SymmetricForm::from_i64(&[vec![1]]).unwrap(), lambda_pd: vec![q(1)] };
        assert!(matches!(haefliger(&bad), Err(Error::Precondition(_))));
        let odd = FramedHaefligerData {
            q: SymmetricForm::from_i64(&[vec![1, 0], vec![0, -1]]).unwrap(),
            lambda_pd: vec![q(1), q(0)],
        };
        assert!(!haefliger(&odd).unwrap().integral);
    }

    #[test]
    fn solver_cases() {
        let id = Matrix::identity(2);
        match eclass_solve(&id, &[q(3), qf(-1, 2)], None).unwrap() {
            EClassSolution::Affine { point, kernel_basis, simple, .. } => {
                assert_eq!(point, vec![Q(q(3)), Q(qf(-1, 2))]);
                assert!(kernel_basis.is_empty() && simple);
            }
            e => panic!("{e:?}"),
        }
        let zero = Matrix::zeros(1, 1);
        assert_eq!(eclass_solve(&zero, &[q(1)], None).unwrap(), EClassSolution::Empty);
        let r = Matrix::from_i64(&[vec![1, 0], vec![0, 0]]);
        match eclass_solve(&r, &[q(1), q(0)], Some(1)).unwrap() {
            EClassSolution::Affine { kernel_basis, simple, ker_dim_matches, .. } => {
                assert_eq!(kernel_basis.len(), 1);
                assert!(!simple);
                assert_eq!(ker_dim_matches, Some(true));
            }
            e => panic!("{e:?}"),
        }
        assert!(eclass_solve(&r, &[q(1)], None).is_err());
    }

    #[test]
    fn union_and_reversal() {
        let m = cp2();
        let a = QuasiEData::new(m.clone(), h(&m), 3, 1).unwrap();
        let b = QuasiEData::new(m.clone(), h(&m).scale(&qf(1, 3)), 1, 2).unwrap();
        let ab = a.disjoint_union(&b).unwrap();
        assert_eq!(ab.m, 2);
        assert_eq!(sigma_quasi(&ab).unwrap(), sigma_quasi(&a).unwrap() + sigma_quasi(&b).unwrap());
        assert_eq!(sigma_quasi(&a.reversed().unwrap()).unwrap(), -sigma_quasi(&a).unwrap());
        assert_eq!(sigma_quasi(&b.copies(3).unwrap()).unwrap(), sigma_quasi(&b).unwrap());
    }
}
