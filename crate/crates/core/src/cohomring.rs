//! Finite presentations of rational cohomology rings with an integration
//! functional.
//!
//! A model is assembled from a [`ModelSpec`] (the JSON shape). Assembly
//! fills in unit products when degree 0 is the single label `"1"`, completes
//! the table by graded commutativity, and then validates. Disjoint unions
//! carry one idempotent per component in degree 0; the unit is their sum.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{fmt_rational, Matrix, Rational, Q};

pub type Coeffs = BTreeMap<String, Q>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub a: String,
    pub b: String,
    pub value: Coeffs,
}

/// Serialized form of a model. Basis keys are decimal degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: String,
    pub dim: usize,
    pub basis: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    pub integral: Coeffs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_p1: Option<Coeffs>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Basis,
    UnknownLabel,
    DegreeBound,
    Degree,
    Commutativity,
    Unit,
    Associativity,
    NonDegenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { kind, detail });
    }
}

/// Basis element address: degree and position within that degree.
type Slot = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct CohomModel {
    name: String,
    dim: usize,
    basis: Vec<Vec<String>>,
    index: BTreeMap<String, Slot>,
    table: HashMap<(Slot, Slot), Vec<Rational>>,
    integral: Vec<Rational>,
    tangent_p1: Option<Vec<Rational>>,
}

/// Graded element of a model.
#[derive(Debug, Clone)]
pub struct RingElement {
    model: Arc<CohomModel>,
    degree: usize,
    coeffs: Vec<Rational>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.coeffs == other.coeffs
            && same_model(&self.model, &other.model)
    }
}

fn same_model(a: &Arc<CohomModel>, b: &Arc<CohomModel>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn sign(p: usize, q: usize) -> Rational {
    if p * q % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

impl CohomModel {
    /// Assembles and validates; fails listing every violation.
    pub fn from_spec(spec: &ModelSpec, strict: bool) -> Result<Arc<CohomModel>> {
        let (model, mut report) = assemble(spec);
        if let Some(m) = &model {
            report.violations.extend(m.check(strict).violations);
        }
        match model {
            Some(m) if report.is_ok() => Ok(Arc::new(m)),
            _ => Err(Error::Validation(report.violations.iter().map(|v| v.to_string()).collect())),
        }
    }

    pub fn from_json(text: &str, strict: bool) -> Result<Arc<CohomModel>> {
        let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_spec(&spec, strict)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self, degree: usize) -> &[String] {
        self.basis.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    pub fn label_degree(&self, label: &str) -> Option<usize> {
        self.index.get(label).map(|s| s.0)
    }

    /// Number of connected components (rank of degree 0).
    pub fn components(&self) -> usize {
        self.rank(0)
    }

    fn product_slots(&self, x: Slot, y: Slot) -> Option<&Vec<Rational>> {
        self.table.get(&(x, y))
    }

    pub fn integral_coeffs(&self) -> &[Rational] {
        &self.integral
    }

    /// Same ring with the integral negated.
    pub fn reversed(&self) -> CohomModel {
        let mut m = self.clone();
        m.name = format!("-{}", self.name);
        for c in &mut m.integral {
            *c = -c.clone();
        }
        m
    }

    pub fn renamed(&self, name: &str) -> CohomModel {
        CohomModel { name: name.to_string(), ..self.clone() }
    }

    /// Serializes back to the JSON shape, listing each unordered product once.
    pub fn to_spec(&self) -> ModelSpec {
        let basis = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_empty())
            .map(|(d, b)| (d.to_string(), b.clone()))
            .collect();
        let coeffs = |deg: usize, v: &[Rational]| -> Coeffs {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.basis[deg][i].clone(), Q(c.clone())))
                .collect()
        };
        let mut slots: Vec<Slot> = self.index.values().copied().collect();
        slots.sort();
        let implicit_unit = self.basis[0] == ["1"];
        let mut products = Vec::new();
        for (i, &x) in slots.iter().enumerate() {
            for &y in &slots[i..] {
                if implicit_unit && (x.0 == 0 || y.0 == 0) {
                    continue;
                }
                if let Some(v) = self.table.get(&(x, y)) {
                    if v.iter().any(|c| !c.is_zero()) {
                        products.push(ProductEntry {
                            a: self.basis[x.0][x.1].clone(),
                            b: self.basis[y.0][y.1].clone(),
                            value: coeffs(x.0 + y.0, v),
                        });
                    }
                }
            }
        }
        ModelSpec {
            name: self.name.clone(),
            dim: self.dim,
            basis,
            products,
            integral: coeffs(self.dim, &self.integral),
            tangent_p1: self.tangent_p1.as_ref().map(|t| coeffs(4, t)),
        }
    }

    /// Structural checks on an assembled table.
    fn check(&self, strict: bool) -> ValidationReport {
        let mut r = ValidationReport::default();
        let slots: Vec<Slot> = {
            let mut s: Vec<Slot> = self.index.values().copied().collect();
            s.sort();
            s
        };
        let name = |s: Slot| self.basis[s.0][s.1].as_str();
        let unit: Vec<Rational> = vec![Rational::one(); self.rank(0)];
        for &x in &slots {
            let e = self.from_slot(x);
            let u = self.raw_mul(0, &unit, x.0, &e);
            let v = self.raw_mul(x.0, &e, 0, &unit);
            if u != e || v != e {
                r.push(ViolationKind::Unit, format!("unit does not fix {}", name(x)));
            }
        }
        for &x in &slots {
            for &y in &slots {
                let xy = self.raw_mul(x.0, &self.from_slot(x), y.0, &self.from_slot(y));
                let yx = self.raw_mul(y.0, &self.from_slot(y), x.0, &self.from_slot(x));
                let s = sign(x.0, y.0);
                if xy.iter().zip(&yx).any(|(a, b)| *a != &s * b) {
                    r.push(
                        ViolationKind::Commutativity,
                        format!("{}*{} disagrees with graded swap", name(x), name(y)),
                    );
                }
            }
        }
        'assoc: for &x in &slots {
            for &y in &slots {
                if x.0 + y.0 > self.dim {
                    continue;
                }
                let xy = self.raw_mul(x.0, &self.from_slot(x), y.0, &self.from_slot(y));
                for &z in &slots {
                    if x.0 + y.0 + z.0 > self.dim {
                        continue;
                    }
                    let yz = self.raw_mul(y.0, &self.from_slot(y), z.0, &self.from_slot(z));
                    let l = self.raw_mul(x.0 + y.0, &xy, z.0, &self.from_slot(z));
                    let rr = self.raw_mul(x.0, &self.from_slot(x), y.0 + z.0, &yz);
                    if l != rr {
                        r.push(
                            ViolationKind::Associativity,
                            format!("({0}*{1})*{2} != {0}*({1}*{2})", name(x), name(y), name(z)),
                        );
                        if r.violations.len() > 64 {
                            break 'assoc;
                        }
                    }
                }
            }
        }
        if strict && self.dim % 2 == 0 {
            let mid = self.dim / 2;
            let n = self.rank(mid);
            let mut pairing = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let p = self.raw_mul(mid, &unit_vec(n, i), mid, &unit_vec(n, j));
                    let v: Rational = p.iter().zip(&self.integral).map(|(a, b)| a * b).sum();
                    pairing.set(i, j, v);
                }
            }
            if pairing.rank() < n {
                r.push(
                    ViolationKind::NonDegenerate,
                    format!("pairing on degree {mid} has rank {} < {n}", pairing.rank()),
                );
            }
        }
        r
    }

    fn from_slot(&self, s: Slot) -> Vec<Rational> {
        unit_vec(self.rank(s.0), s.1)
    }

    /// Product of coefficient vectors in degrees `p` and `q`.
    fn raw_mul(&self, p: usize, a: &[Rational], q: usize, b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rank(p + q)];
        if p + q > self.dim {
            return out;
        }
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                if let Some(v) = self.product_slots((p, i), (q, j)) {
                    let xy = x * y;
                    for (o, c) in out.iter_mut().zip(v) {
                        if !c.is_zero() {
                            *o += &xy * c;
                        }
                    }
                }
            }
        }
        out
    }

    /// Disjoint union; labels become `prefix:label`. All parts share `dim`.
    pub fn disjoint_union(name: &str, parts: &[(&str, &CohomModel)]) -> Result<CohomModel> {
        let dim = parts.first().map_or(0, |p| p.1.dim);
        if parts.iter().any(|p| p.1.dim != dim) {
            return Err(Error::Dimension("disjoint union of models of different dimension".into()));
        }
        let mut basis = vec![Vec::new(); dim + 1];
        let mut offsets = Vec::new();
        for (prefix, m) in parts {
            offsets.push((0..=dim).map(|d| basis[d].len()).collect::<Vec<_>>());
            for d in 0..=dim {
                basis[d].extend(m.basis(d).iter().map(|l| format!("{prefix}:{l}")));
            }
        }
        let index = index_of(&basis);
        let mut table = HashMap::new();
        let mut integral = vec![Rational::zero(); basis[dim].len()];
        let all_p1 = parts.iter().all(|p| p.1.tangent_p1.is_some());
        let mut tangent = if all_p1 && dim >= 4 { Some(vec![Rational::zero(); basis[4].len()]) } else { None };
        for ((_, m), off) in parts.iter().zip(&offsets) {
            for (&((p, i), (q, j)), v) in &m.table {
                let mut w = vec![Rational::zero(); basis[p + q].len()];
                for (k, c) in v.iter().enumerate() {
                    w[off[p + q] + k] = c.clone();
                }
                table.insert(((p, off[p] + i), (q, off[q] + j)), w);
            }
            for (k, c) in m.integral.iter().enumerate() {
                integral[off[dim] + k] = c.clone();
            }
            if let (Some(t), Some(src)) = (tangent.as_mut(), m.tangent_p1.as_ref()) {
                for (k, c) in src.iter().enumerate() {
                    t[off[4] + k] = c.clone();
                }
            }
        }
        table.retain(|_, v: &mut Vec<Rational>| v.iter().any(|c| !c.is_zero()));
        Ok(CohomModel { name: name.into(), dim, basis, index, table, integral, tangent_p1: tangent })
    }

    /// `k` disjoint copies, prefixed `c1`, `c2`, ...
    pub fn copies(&self, k: usize) -> Result<CohomModel> {
        let names: Vec<String> = (1..=k).map(|i| format!("c{i}")).collect();
        let parts: Vec<(&str, &CohomModel)> = names.iter().map(|n| (n.as_str(), self)).collect();
        Self::disjoint_union(&format!("{}x{k}", self.name), &parts)
    }

    pub fn with_tangent_p1(&self, p1: Option<&RingElement>) -> Result<CohomModel> {
        let mut m = self.clone();
        m.tangent_p1 = match p1 {
            None => None,
            Some(e) if e.degree == 4 && e.coeffs.len() == self.rank(4) => Some(e.coeffs.clone()),
            Some(_) => return Err(Error::Dimension("tangent_p1 must have degree 4".into())),
        };
        Ok(m)
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn index_of(basis: &[Vec<String>]) -> BTreeMap<String, Slot> {
    let mut index = BTreeMap::new();
    for (d, labels) in basis.iter().enumerate() {
        for (i, l) in labels.iter().enumerate() {
            index.insert(l.clone(), (d, i));
        }
    }
    index
}

/// Builds the table from a spec, collecting violations that make entries
/// unusable. Returns `None` only when the basis itself is malformed.
fn assemble(spec: &ModelSpec) -> (Option<CohomModel>, ValidationReport) {
    let mut r = ValidationReport::default();
    let dim = spec.dim;
    let mut basis = vec![Vec::new(); dim + 1];
    for (key, labels) in &spec.basis {
        match key.parse::<usize>() {
            Ok(d) if d <= dim => basis[d] = labels.clone(),
            _ => r.push(ViolationKind::Basis, format!("basis degree {key:?} outside 0..={dim}")),
        }
    }
    let index = index_of(&basis);
    let total: usize = basis.iter().map(Vec::len).sum();
    if index.len() != total {
        r.push(ViolationKind::Basis, "duplicate basis label".into());
    }
    if basis[0].is_empty() {
        r.push(ViolationKind::Basis, "degree 0 is empty".into());
    }
    if !r.is_ok() {
        return (None, r);
    }

    let vector = |deg: usize, c: &Coeffs, what: &str, r: &mut ValidationReport| -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); basis.get(deg).map_or(0, Vec::len)];
        let mut ok = true;
        for (label, x) in c {
            match index.get(label) {
                None => {
                    r.push(ViolationKind::UnknownLabel, format!("{what}: unknown label {label:?}"));
                    ok = false;
                }
                Some(&(d, i)) if d == deg => v[i] += &x.0,
                Some(&(d, _)) => {
                    r.push(
                        ViolationKind::Degree,
                        format!("{what}: label {label:?} has degree {d}, expected {deg}"),
                    );
                    ok = false;
                }
            }
        }
        ok.then_some(v)
    };

    let mut given: HashMap<(Slot, Slot), Vec<Rational>> = HashMap::new();
    for (n, e) in spec.products.iter().enumerate() {
        let what = format!("product {n} ({}*{})", e.a, e.b);
        let (Some(&x), Some(&y)) = (index.get(&e.a), index.get(&e.b)) else {
            r.push(ViolationKind::UnknownLabel, format!("{what}: unknown factor"));
            continue;
        };
        if x.0 + y.0 > dim {
            if e.value.values().any(|c| !c.0.is_zero()) {
                r.push(
                    ViolationKind::DegreeBound,
                    format!("{what}: degree {} exceeds dimension {dim} but value is nonzero", x.0 + y.0),
                );
            }
            continue;
        }
        let Some(v) = vector(x.0 + y.0, &e.value, &what, &mut r) else { continue };
        if let Some(old) = given.get(&(x, y)) {
            if *old != v {
                r.push(ViolationKind::Commutativity, format!("{what}: conflicting duplicate entry"));
            }
            continue;
        }
        given.insert((x, y), v);
    }

    let mut table = given.clone();
    if basis[0] == ["1"] {
        let one = (0, 0);
        for &s in index.values() {
            let e = unit_vec(basis[s.0].len(), s.1);
            for key in [(one, s), (s, one)] {
                match given.get(&key) {
                    Some(v) if *v != e => r.push(
                        ViolationKind::Unit,
                        format!("1*{} is not {}", basis[s.0][s.1], basis[s.0][s.1]),
                    ),
                    Some(_) => {}
                    None => {
                        table.insert(key, e.clone());
                    }
                }
            }
        }
    }
    for (&(x, y), v) in &given {
        let s = sign(x.0, y.0);
        let swapped: Vec<Rational> = v.iter().map(|c| &s * c).collect();
        match given.get(&(y, x)) {
            Some(w) if *w != swapped && x <= y => r.push(
                ViolationKind::Commutativity,
                format!(
                    "{}*{} and {}*{} violate graded commutativity",
                    basis[x.0][x.1], basis[y.0][y.1], basis[y.0][y.1], basis[x.0][x.1]
                ),
            ),
            Some(_) => {}
            None => {
                table.insert((y, x), swapped);
            }
        }
    }
    table.retain(|_, v| v.iter().any(|c| !c.is_zero()));

    let integral = vector(dim, &spec.integral, "integral", &mut r).unwrap_or_else(|| vec![Rational::zero(); basis[dim].len()]);
    let tangent_p1 = match &spec.tangent_p1 {
        None => None,
        Some(_) if dim < 4 => {
            r.push(ViolationKind::Degree, "tangent_p1 given on a model of dimension < 4".into());
            None
        }
        Some(c) => vector(4, c, "tangent_p1", &mut r),
    };
    let model = CohomModel { name: spec.name.clone(), dim, basis, index, table, integral, tangent_p1 };
    (Some(model), r)
}

/// Lists every violated invariant of a spec after completion.
pub fn validate_spec(spec: &ModelSpec, strict: bool) -> ValidationReport {
    let (model, mut r) = assemble(spec);
    if let Some(m) = model {
        r.violations.extend(m.check(strict).violations);
    }
    r
}

/// Lists every violated invariant of an assembled model.
pub fn validate_model(m: &CohomModel, strict: bool) -> ValidationReport {
    m.check(strict)
}

impl RingElement {
    pub fn zero(model: &Arc<CohomModel>, degree: usize) -> RingElement {
        RingElement { model: model.clone(), degree, coeffs: vec![Rational::zero(); model.rank(degree)] }
    }

    pub fn basis(model: &Arc<CohomModel>, label: &str) -> Result<RingElement> {
        let &(d, i) = model
            .index
            .get(label)
            .ok_or_else(|| Error::Validation(vec![format!("unknown label {label:?}")]))?;
        Ok(RingElement { model: model.clone(), degree: d, coeffs: unit_vec(model.rank(d), i) })
    }

    /// Sum of the degree-0 idempotents.
    pub fn unit(model: &Arc<CohomModel>) -> RingElement {
        RingElement { model: model.clone(), degree: 0, coeffs: vec![Rational::one(); model.rank(0)] }
    }

    pub fn from_vec(model: &Arc<CohomModel>, degree: usize, coeffs: Vec<Rational>) -> Result<RingElement> {
        if coeffs.len() != model.rank(degree) {
            return Err(Error::Dimension(format!(
                "{} coefficients for degree {degree} of rank {}",
                coeffs.len(),
                model.rank(degree)
            )));
        }
        Ok(RingElement { model: model.clone(), degree, coeffs })
    }

    /// From a label map; every label must have degree `degree`.
    pub fn from_coeffs(model: &Arc<CohomModel>, degree: usize, c: &Coeffs) -> Result<RingElement> {
        let mut v = vec![Rational::zero(); model.rank(degree)];
        for (label, x) in c {
            match model.index.get(label) {
                Some(&(d, i)) if d == degree => v[i] += &x.0,
                Some(&(d, _)) => {
                    return Err(Error::Validation(vec![format!(
                        "label {label:?} has degree {d}, expected {degree}"
                    )]))
                }
                None => return Err(Error::Validation(vec![format!("unknown label {label:?}")])),
            }
        }
        Ok(RingElement { model: model.clone(), degree, coeffs: v })
    }

    pub fn to_coeffs(&self) -> Coeffs {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.model.basis[self.degree][i].clone(), Q(c.clone())))
            .collect()
    }

    pub fn model(&self) -> &Arc<CohomModel> {
        &self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, label: &str) -> Rational {
        match self.model.index.get(label) {
            Some(&(d, i)) if d == self.degree => self.coeffs[i].clone(),
            _ => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same(&self, other: &RingElement) -> Result<()> {
        if same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "elements of different models {:?} and {:?}",
                self.model.name, other.model.name
            )))
        }
    }

    pub fn multiply(&self, other: &RingElement) -> Result<RingElement> {
        self.same(other)?;
        let coeffs = self.model.raw_mul(self.degree, &self.coeffs, other.degree, &other.coeffs);
        Ok(RingElement { model: self.model.clone(), degree: self.degree + other.degree, coeffs })
    }

    pub fn pow(&self, k: usize) -> Result<RingElement> {
        let mut acc = RingElement::unit(&self.model);
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same(other)?;
        if self.degree != other.degree {
            return Err(Error::Dimension(format!(
                "adding degree {} to degree {}",
                self.degree, other.degree
            )));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(RingElement { model: self.model.clone(), degree: self.degree, coeffs })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> RingElement {
        RingElement {
            model: self.model.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Pairing with the fundamental class.
    pub fn integrate(&self) -> Result<Rational> {
        if self.degree != self.model.dim {
            return Err(Error::Dimension(format!(
                "integrating degree {} on a {}-dimensional model",
                self.degree, self.model.dim
            )));
        }
        Ok(self.coeffs.iter().zip(&self.model.integral).map(|(a, b)| a * b).sum())
    }

    /// Rebinds to a structurally equal model.
    pub fn rebind(&self, model: &Arc<CohomModel>) -> Result<RingElement> {
        let labels = self.to_coeffs();
        RingElement::from_coeffs(model, self.degree, &labels)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .to_coeffs()
            .iter()
            .map(|(l, c)| format!("{}*{l}", fmt_rational(&c.0)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Free functions mirroring the method forms.
pub fn multiply(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    a.multiply(b)
}

pub fn integrate(a: &RingElement) -> Result<Rational> {
    a.integrate()
}

impl CohomModel {
    pub fn tangent_p1(self: &Arc<Self>) -> Option<RingElement> {
        self.tangent_p1
            .as_ref()
            .map(|t| RingElement { model: self.clone(), degree: 4, coeffs: t.clone() })
    }

    /// Degree-0 idempotent of component `c`.
    pub fn component_unit(self: &Arc<Self>, c: usize) -> RingElement {
        let mut v = vec![Rational::zero(); self.rank(0)];
        v[c] = Rational::one();
        RingElement { model: self.clone(), degree: 0, coeffs: v }
    }

    /// Restriction of `a` to component `c` (multiplication by its idempotent).
    pub fn restrict(self: &Arc<Self>, a: &RingElement, c: usize) -> Result<RingElement> {
        self.component_unit(c).multiply(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q;
    use crate::fixtures;

    fn cp2() -> Arc<CohomModel> {
        fixtures::model("cp2").unwrap()
    }

    #[test]
    fn cp2_products() {
        let m = cp2();
        let h = RingElement::basis(&m, "h").unwrap();
        let h2 = h.multiply(&h).unwrap();
        assert_eq!(h2, RingElement::basis(&m, "h2").unwrap());
        let h3 = h2.multiply(&h).unwrap();
        assert_eq!(h3.degree(), 6);
        assert!(h3.is_zero());
        assert_eq!(h2.integrate().unwrap(), q(1));
        assert_eq!(h2.scale(&q(3)).add(&RingElement::zero(&m, 4)).unwrap().integrate().unwrap(), q(3));
        assert!(h.integrate().is_err());
    }

    #[test]
    fn odd_classes_anticommute() {
        let m = fixtures::model("t3").unwrap();
        let t1 = RingElement::basis(&m, "t1").unwrap();
        let t2 = RingElement::basis(&m, "t2").unwrap();
        let a = t1.multiply(&t2).unwrap();
        let b = t2.multiply(&t1).unwrap();
        assert_eq!(a, b.scale(&q(-1)));
    }

    #[test]
    fn degree_bound_noise_reported() {
        let mut spec = cp2().to_spec();
        spec.products.push(ProductEntry {
            a: "h2".into(),
            b: "h".into(),
            value: [("h2".to_string(), Q(q(1)))].into_iter().collect(),
        });
        let r = validate_spec(&spec, false);
        assert!(r.has(ViolationKind::DegreeBound), "{r:?}");
        assert!(CohomModel::from_spec(&spec, false).is_err());
    }

    #[test]
    fn singular_pairing_is_strict_only() {
        let spec = ModelSpec {
            name: "degenerate".into(),
            dim: 4,
            basis: [("0", vec!["1"]), ("2", vec!["a", "b"]), ("4", vec!["v"])]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.into_iter().map(String::from).collect()))
                .collect(),
            products: vec![ProductEntry {
                a: "a".into(),
                b: "a".into(),
                value: [("v".to_string(), Q(q(1)))].into_iter().collect(),
            }],
            integral: [("v".to_string(), Q(q(1)))].into_iter().collect(),
            tangent_p1: None,
        };
        assert!(validate_spec(&spec, false).is_ok());
        assert!(validate_spec(&spec, true).has(ViolationKind::NonDegenerate));
    }

    #[test]
    fn inconsistent_reverse_entry() {
        let mut spec = fixtures::model("t3").unwrap().to_spec();
        let t12 = spec.products.iter().find(|p| p.a == "t1" && p.b == "t2").unwrap().clone();
        spec.products.push(ProductEntry { a: "t2".into(), b: "t1".into(), value: t12.value });
        assert!(validate_spec(&spec, false).has(ViolationKind::Commutativity));
    }

    #[test]
    fn reversal_negates_integral() {
        let m = cp2();
        let r = Arc::new(m.reversed());
        let h2 = RingElement::basis(&r, "h2").unwrap();
        assert_eq!(h2.integrate().unwrap(), q(-1));
    }

    #[test]
    fn disjoint_union_unit_and_integral() {
        let m = cp2();
        let u = Arc::new(CohomModel::disjoint_union("u", &[("A", &m), ("B", &m)]).unwrap());
        assert!(validate_model(&u, true).is_ok());
        assert_eq!(u.components(), 2);
        let a = RingElement::basis(&u, "A:h2").unwrap();
        let b = RingElement::basis(&u, "B:h2").unwrap();
        assert_eq!(a.add(&b).unwrap().integrate().unwrap(), q(2));
        let ah = RingElement::basis(&u, "A:h").unwrap();
        let bh = RingElement::basis(&u, "B:h").unwrap();
        assert!(ah.multiply(&bh).unwrap().is_zero());
    }

    #[test]
    fn spec_round_trip() {
        for name in fixtures::MODEL_NAMES {
            let m = fixtures::model(name).unwrap();
            let back = CohomModel::from_spec(&m.to_spec(), true).unwrap();
            assert_eq!(*back, *m, "{name}");
        }
    }
}
