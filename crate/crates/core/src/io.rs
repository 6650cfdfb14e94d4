//! JSON documents accepted and produced by the command-line front end.
//!
//! Model fields take a registry name (`"cp2"`), a path to a model file
//! (anything containing `/` or ending in `.json`, resolved against the
//! directory of the enclosing document), or an inline model object.
//! Closed models (bundle bases, 6-dimensional totals) load strictly; models
//! of manifolds with boundary (`X`, `S`) skip the Poincaré-pairing check.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::charclass::{hirzebruch_signature, Bundle3Data};
use crate::cohomring::{CohomModel, Coeffs, ModelSpec, RingElement};
use crate::emanifold::{FramedHaefligerData, QuasiEData, SeifertGeometricData};
use crate::error::{Error, Result};
use crate::exactlin::{fmt_rational, Matrix, Rational, SymmetricForm, Q};
use crate::fixtures;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelRef {
    Name(String),
    Inline(ModelSpec),
}

/// Where relative model paths are resolved.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub dir: Option<PathBuf>,
}

impl Context {
    pub fn for_file(path: &Path) -> Self {
        Context { dir: path.parent().map(Path::to_path_buf) }
    }

    pub fn model(&self, r: &ModelRef, strict: bool) -> Result<Arc<CohomModel>> {
        match r {
            ModelRef::Inline(spec) => CohomModel::from_spec(spec, strict),
            ModelRef::Name(n) if n.contains('/') || n.ends_with(".json") => {
                let p = match &self.dir {
                    Some(d) => d.join(n),
                    None => PathBuf::from(n),
                };
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| Error::Schema(format!("cannot read model {}: {e}", p.display())))?;
                CohomModel::from_json(&text, strict)
            }
            ModelRef::Name(n) => fixtures::model(n),
        }
    }
}

/// Parses a document, mapping serde failures to schema errors.
pub fn from_value<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn integer(x: &Q, field: &str) -> Result<i64> {
    if !x.0.is_integer() {
        return Err(Error::Schema(format!("{field} must be an integer, got {x}")));
    }
    i64::try_from(x.0.to_integer()).map_err(|_| Error::Schema(format!("{field} is out of range")))
}

fn element(m: &Arc<CohomModel>, degree: usize, c: &Coeffs, field: &str) -> Result<RingElement> {
    RingElement::from_coeffs(m, degree, c).map_err(|e| match e {
        Error::Validation(msgs) => Error::Schema(format!("{field}: {}", msgs.join("; "))),
        other => other,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleInput {
    pub base: ModelRef,
    #[serde(rename = "p1E", default)]
    pub p1e: Coeffs,
    /// Computed from `tangent_p1` when absent.
    #[serde(rename = "signX", default, skip_serializing_if = "Option::is_none")]
    pub sign_x: Option<Q>,
}

impl BundleInput {
    pub fn build(&self, cx: &Context) -> Result<Bundle3Data> {
        let base = cx.model(&self.base, true)?;
        let p1e = element(&base, 4, &self.p1e, "p1E")?;
        let sign_x = match &self.sign_x {
            Some(s) => integer(s, "signX")?,
            None => {
                let h = hirzebruch_signature(&base)?;
                if !h.is_integer() {
                    return Err(Error::Precondition(format!("signature {} is not an integer", fmt_rational(&h))));
                }
                i64::try_from(h.to_integer()).map_err(|_| Error::Precondition("signature out of range".into()))?
            }
        };
        Bundle3Data::new(base, p1e, sign_x)
    }

    pub fn of(d: &Bundle3Data) -> Self {
        BundleInput {
            base: ModelRef::Inline(d.base.to_spec()),
            p1e: d.p1e.to_coeffs(),
            sign_x: Some(Q(crate::exactlin::q(d.sign_x))),
        }
    }
}

/// A 6-dimensional model with a degree-2 class.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TotalInput {
    pub model: ModelRef,
    pub e: Coeffs,
}

impl TotalInput {
    pub fn build(&self, cx: &Context) -> Result<(Arc<CohomModel>, RingElement)> {
        let w = cx.model(&self.model, true)?;
        let e = element(&w, 2, &self.e, "e")?;
        Ok((w, e))
    }
}

/// Input of χ, Φ and the order: either a total space with its class, or
/// bundle data whose sphere bundle and vertical Euler class are used.
pub fn six_input(v: Value, cx: &Context) -> Result<(Arc<CohomModel>, RingElement)> {
    if v.get("model").is_some() {
        from_value::<TotalInput>(v)?.build(cx)
    } else if v.get("base").is_some() {
        let d = from_value::<BundleInput>(v)?.build(cx)?;
        let s = crate::charclass::build_sphere_bundle(&d)?;
        Ok((s.total, s.ef))
    } else {
        Err(Error::Schema("expected a document with \"model\" and \"e\", or bundle data with \"base\"".into()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiInput {
    #[serde(rename = "X")]
    pub x: ModelRef,
    #[serde(default)]
    pub gamma: Coeffs,
    #[serde(rename = "signX")]
    pub sign_x: Q,
    pub m: u64,
}

impl QuasiInput {
    pub fn build(&self, cx: &Context) -> Result<QuasiEData> {
        let x = cx.model(&self.x, false)?;
        let gamma = element(&x, 2, &self.gamma, "gamma")?;
        QuasiEData::new(x, gamma, integer(&self.sign_x, "signX")?, self.m)
    }

    pub fn of(d: &QuasiEData) -> Self {
        QuasiInput {
            x: ModelRef::Inline(d.x.to_spec()),
            gamma: d.gamma.to_coeffs(),
            sign_x: Q(crate::exactlin::q(d.sign_x)),
            m: d.m,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricInput {
    #[serde(rename = "S")]
    pub s: ModelRef,
    #[serde(rename = "signS")]
    pub sign_s: Q,
    #[serde(default)]
    pub normal_euler: Coeffs,
}

impl GeometricInput {
    pub fn build(&self, cx: &Context) -> Result<SeifertGeometricData> {
        let s = cx.model(&self.s, false)?;
        if s.dim() != 4 {
            return Err(Error::Dimension(format!("S has dimension {}, expected 4", s.dim())));
        }
        let normal_euler = element(&s, 2, &self.normal_euler, "normal_euler")?;
        Ok(SeifertGeometricData { s, sign_s: integer(&self.sign_s, "signS")?, normal_euler })
    }
}

fn rows(m: &[Vec<Q>]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

fn matrix(m: &[Vec<Q>], cols: usize, field: &str) -> Result<Matrix> {
    Matrix::from_rows(rows(m), cols).map_err(|e| Error::Schema(format!("{field}: {e}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaefligerInput {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<Q>>,
    pub lambda_pd: Vec<Q>,
}

impl HaefligerInput {
    pub fn build(&self) -> Result<FramedHaefligerData> {
        let m = matrix(&self.q, self.q.len(), "Q")?;
        let q = SymmetricForm::new(m).map_err(|e| Error::Schema(format!("Q: {e}")))?;
        Ok(FramedHaefligerData { q, lambda_pd: self.lambda_pd.iter().map(|x| x.0.clone()).collect() })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EClassInput {
    #[serde(rename = "R")]
    pub r: Vec<Vec<Q>>,
    pub target: Vec<Q>,
    #[serde(rename = "ker_iX_dim", default, skip_serializing_if = "Option::is_none")]
    pub ker_ix_dim: Option<usize>,
}

impl EClassInput {
    pub fn build(&self) -> Result<(Matrix, Vec<Rational>)> {
        let cols = self.r.first().map_or(0, Vec::len);
        let r = matrix(&self.r, cols, "R")?;
        if self.target.len() != r.rows() {
            return Err(Error::Schema(format!("target has length {}, R has {} rows", self.target.len(), r.rows())));
        }
        Ok((r, self.target.iter().map(|x| x.0.clone()).collect()))
    }
}

/// Rational pair as a two-element array of strings.
pub fn pair(a: &Rational, b: &Rational) -> [Q; 2] {
    [Q(a.clone()), Q(b.clone())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q;

    #[test]
    fn fixture_documents() {
        let cx = Context::default();
        let u0: BundleInput = from_value(parse_json(fixtures::data_text("u0").unwrap()).unwrap()).unwrap();
        let d = u0.build(&cx).unwrap();
        assert_eq!(d.sign_x, 1);
        let v = parse_json(fixtures::data_text("u1_total").unwrap()).unwrap();
        let (w, e) = six_input(v, &cx).unwrap();
        assert_eq!(w.dim(), 6);
        assert_eq!(e.degree(), 2);
        let h: HaefligerInput = from_value(parse_json(fixtures::data_text("hyperbolic_v11").unwrap()).unwrap()).unwrap();
        assert_eq!(h.build().unwrap().lambda_pd, vec![q(1), q(1)]);
    }

    #[test]
    fn schema_errors_are_input_errors() {
        let cx = Context::default();
        for text in [
            r#"{"base":"cp2","p1E":{},"signX":"1","extra":1}"#,
            r#"{"base":"nowhere","p1E":{}}"#,
            r#"{"base":"cp2","p1E":{"zz":"1"},"signX":"1"}"#,
            r#"{"base":"cp2","p1E":{},"signX":"1/2"}"#,
        ] {
            let r = from_value::<BundleInput>(parse_json(text).unwrap()).and_then(|b| b.build(&cx));
            assert!(r.unwrap_err().is_input_error(), "{text}");
        }
        assert!(six_input(parse_json("{}").unwrap(), &cx).unwrap_err().is_input_error());
    }

    #[test]
    fn quasi_round_trip() {
        let cx = Context::default();
        let text = fixtures::data_text("quasi_cp2_h").unwrap();
        let d = from_value::<QuasiInput>(parse_json(text).unwrap()).unwrap().build(&cx).unwrap();
        let again = QuasiInput::of(&d).build(&cx).unwrap();
        assert_eq!(again.sign_x, d.sign_x);
        assert_eq!(again.self_linking().unwrap(), d.self_linking().unwrap());
    }
}
