//! Batch verification suites.
//!
//! Each suite evaluates one identity over the shipped fixtures and a stream
//! of random instances drawn from [`Lcg`] seeded with the suite seed. A
//! suite run on its own and the same suite inside [`run_all`] see identical
//! instances. Reports hold only ordered maps and vectors, so equal seeds
//! give byte-identical JSON.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::charclass::{build_sphere_bundle, chi, hirzebruch_signature, normal_sphere_chi, witness_base, xi, Bundle3Data};
use crate::cohomring::{CohomModel, RingElement};
use crate::emanifold::{
    check_sign_eq_4lambda, eclass_solve, haefliger, sigma_quasi, EClassSolution, FramedHaefligerData,
    NormalSphereBundle, QuasiEData,
};
use crate::error::{Error, Result};
use crate::exactlin::{hyperbolic_form, q, qf, Matrix, Rational, SymmetricForm, Q};
use crate::fixtures;
use crate::io::{self, BundleInput, Context, QuasiInput};
use crate::linkdiag::{braid_closure, is_algebraically_split, link_signature, linking_matrix, BraidLetter, LinkDiagram};
use crate::milnor::{milnor_sigma_model, mu123, sigma_of_link};
use crate::rng::Lcg;

pub const SUITES: &[&str] = &[
    "chi-upsilon-xi",
    "normal-sphere",
    "sign-4lambda",
    "milnor-identity",
    "additivity",
    "haefliger",
    "eclass",
    "link-diagrams",
];

/// Random instances per randomized category.
pub const RANDOM_INSTANCES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    /// Instances checked, per category.
    pub instances: BTreeMap<String, usize>,
    pub counterexamples: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

#[derive(Default)]
struct Tally {
    instances: BTreeMap<String, usize>,
    bad: Vec<Value>,
}

impl Tally {
    /// Counts one instance; `check` returns `Some(detail)` on failure.
    fn run(&mut self, category: &str, instance: impl FnOnce() -> Value, check: impl FnOnce() -> Result<Option<Value>>) {
        *self.instances.entry(category.to_string()).or_default() += 1;
        let detail = match check() {
            Ok(None) => return,
            Ok(Some(d)) => json!({ "failed": d }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        let mut cx = json!({ "category": category, "instance": instance() });
        if let (Value::Object(a), Value::Object(b)) = (&mut cx, detail) {
            a.extend(b);
        }
        self.bad.push(cx);
    }

    fn report(self, suite: &str, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            pass: self.bad.is_empty(),
            instances: self.instances,
            counterexamples: self.bad,
        }
    }
}

fn expect<T: PartialEq + Serialize>(what: &str, got: T, want: T) -> Option<Value> {
    (got != want).then(|| json!({ "check": what, "got": got, "expected": want }))
}

fn first(checks: impl IntoIterator<Item = Option<Value>>) -> Option<Value> {
    checks.into_iter().flatten().next()
}

fn qs(x: &Rational) -> Q {
    Q(x.clone())
}

pub fn run(suite: &str, seed: u64) -> Result<SuiteReport> {
    let mut t = Tally::default();
    let mut r = Lcg::new(seed);
    match suite {
        "chi-upsilon-xi" => chi_upsilon_xi(&mut t, &mut r),
        "normal-sphere" => normal_sphere(&mut t),
        "sign-4lambda" => sign_4lambda(&mut t, &mut r),
        "milnor-identity" => milnor_identity(&mut t),
        "additivity" => additivity(&mut t, &mut r),
        "haefliger" => haefliger_suite(&mut t, &mut r),
        "eclass" => eclass_suite(&mut t, &mut r),
        "link-diagrams" => link_diagrams(&mut t),
        other => return Err(Error::Schema(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
    Ok(t.report(suite, seed))
}

pub fn run_all(seed: u64) -> AllReport {
    let suites: Vec<SuiteReport> = SUITES.iter().map(|s| run(s, seed).expect("registered suite")).collect();
    AllReport { seed, pass: suites.iter().all(|s| s.pass), suites }
}

fn rational(r: &mut Lcg, bound: i64, dens: &[i64]) -> Rational {
    qf(r.range(-bound, bound), *r.pick(dens))
}

fn random_element(r: &mut Lcg, m: &Arc<CohomModel>, degree: usize, bound: i64, dens: &[i64]) -> RingElement {
    let c: Vec<Rational> = (0..m.rank(degree)).map(|_| rational(r, bound, dens)).collect();
    RingElement::from_vec(m, degree, c).expect("rank-sized vector")
}

fn model(name: &str) -> Arc<CohomModel> {
    fixtures::model(name).expect("shipped fixture model")
}

fn signature_of(m: &Arc<CohomModel>) -> i64 {
    let h = hirzebruch_signature(m).expect("4-dimensional model with tangent_p1");
    i64::try_from(h.to_integer()).expect("small signature")
}

/// Bundle over a shipped base or a rank-one witness, with random `p₁(E)`.
pub fn random_bundle(r: &mut Lcg) -> Result<Bundle3Data> {
    const BASES: &[&str] = &["cp2", "cp2bar", "s2xs2", "s4", "k3_like", "cp2+cp2bar", "cp2+cp2"];
    let (base, sign) = if r.below(4) == 0 {
        let t = r.range(-16, 16);
        (witness_base(3 * t)?, t)
    } else {
        let m = model(r.pick(BASES));
        let s = signature_of(&m);
        (m, s)
    };
    let p1e = random_element(r, &base, 4, 12, &[1, 1, 1, 2, 3]);
    Bundle3Data::new(base, p1e, sign)
}

fn chi_upsilon_xi(t: &mut Tally, r: &mut Lcg) {
    let cx = Context::default();
    let one = |t: &mut Tally, cat: &str, d: &Bundle3Data| {
        t.run(
            cat,
            || serde_json::to_value(BundleInput::of(d)).expect("serializable"),
            || {
                let s = build_sphere_bundle(d)?;
                let (a, b) = chi(&s.total, &s.ef)?;
                let (sx, p) = xi(d)?;
                Ok(expect("chi(upsilon) = xi", io::pair(&a, &b), io::pair(&q(sx), &p)))
            },
        )
    };
    for name in ["u0", "u1", "trivial_s4"] {
        let d = io::parse_json(fixtures::data_text(name).expect("data fixture"))
            .and_then(io::from_value::<BundleInput>)
            .and_then(|b| b.build(&cx))
            .expect("bundle fixture");
        one(t, "fixtures", &d);
    }
    // the stored totals agree with the constructed ones
    for (bundle, total) in [("u0", "u0_total"), ("u1", "u1_total")] {
        t.run(
            "fixture_totals",
            || json!(total),
            || {
                let d = io::from_value::<BundleInput>(io::parse_json(fixtures::data_text(bundle).expect("fixture"))?)?
                    .build(&cx)?;
                let (w, e) = io::six_input(io::parse_json(fixtures::data_text(total).expect("fixture"))?, &cx)?;
                let (a, b) = chi(&w, &e)?;
                let (sx, p) = xi(&d)?;
                Ok(expect("chi(total) = xi(bundle)", io::pair(&a, &b), io::pair(&q(sx), &p)))
            },
        );
    }
    for _ in 0..RANDOM_INSTANCES {
        match random_bundle(r) {
            Ok(d) => one(t, "random", &d),
            Err(e) => t.run("random", || json!(null), || Err(e)),
        }
    }
}

fn normal_sphere(t: &mut Tally) {
    for s in -16..=16 {
        t.run(
            "signatures",
            || json!({ "signX": s }),
            || {
                let (a, b) = normal_sphere_chi(s)?;
                Ok(expect("chi", io::pair(&a, &b), io::pair(&q(s), &q(-3 * s))))
            },
        );
    }
}

/// Closed 4-dimensional model built from CP², its reverse and S²×S², with
/// a class `γ` satisfying `Sign X = 4∫γ²`.
pub fn closed_model(r: &mut Lcg) -> Result<(QuasiEData, Vec<String>)> {
    const PARTS: &[&str] = &["cp2", "cp2bar", "s2xs2"];
    let n = r.range(1, 3) as usize;
    let names: Vec<String> = (0..n).map(|_| r.pick(PARTS).to_string()).collect();
    let models: Vec<Arc<CohomModel>> = names.iter().map(|p| model(p)).collect();
    let tags: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
    let refs: Vec<(&str, &CohomModel)> = tags.iter().zip(&models).map(|(t, m)| (t.as_str(), m.as_ref())).collect();
    let x = Arc::new(CohomModel::disjoint_union(&names.join("+"), &refs)?);
    let mut c = crate::cohomring::Coeffs::new();
    for (tag, name) in tags.iter().zip(&names) {
        if name == "s2xs2" {
            let g = if r.coin() { "a" } else { "b" };
            c.insert(format!("{tag}:{g}"), Q(q(r.range(-3, 3))));
        } else {
            c.insert(format!("{tag}:h"), Q(qf(r.nonzero(1), 2)));
        }
    }
    let gamma = RingElement::from_coeffs(&x, 2, &c)?;
    let sign = signature_of(&x);
    Ok((QuasiEData::new(x, gamma, sign, 1)?, names))
}

fn verdict_and_cube(d: &QuasiEData, bundle: &NormalSphereBundle) -> Result<Option<Value>> {
    let v = check_sign_eq_4lambda(&d.x, &d.gamma, d.sign_x)?;
    let c = bundle.cube(&d.gamma)?;
    let lambda = d.self_linking()?;
    Ok(first([
        expect("lhs", v.lhs.clone(), Q(q(d.sign_x))),
        expect("rhs", v.rhs.clone(), Q(&lambda * q(4))),
        expect("cube = 24 lambda - 6 signX", c.cube.clone(), Q(&lambda * q(24) - q(6 * d.sign_x))),
        expect("verdict iff cube vanishes", v.pass, c.cube.0 == q(0)),
    ]))
}

fn quasi_json(d: &QuasiEData) -> Value {
    serde_json::to_value(QuasiInput::of(d)).expect("serializable")
}

fn sign_4lambda(t: &mut Tally, r: &mut Lcg) {
    let cp2 = model("cp2");
    let h = RingElement::basis(&cp2, "h").expect("cp2 generator");
    let s4 = model("s4");
    let examples = [
        (cp2.clone(), h.clone(), 4, true),
        (cp2.clone(), h.clone(), 1, false),
        (s4.clone(), RingElement::zero(&s4, 2), 0, true),
        (cp2.clone(), h.scale(&qf(1, 2)), 1, true),
    ];
    for (x, g, s, pass) in examples {
        t.run(
            "examples",
            || json!({ "X": x.name(), "gamma": g.to_coeffs(), "signX": s }),
            || Ok(expect("pass", check_sign_eq_4lambda(&x, &g, s)?.pass, pass)),
        );
    }
    for _ in 0..RANDOM_INSTANCES {
        let built = closed_model(r);
        let perturb = r.coin();
        let (slot, step) = (r.below(8) as usize, rational(r, 2, &[1, 2]));
        let (d, bundle) = match built.and_then(|(d, _)| Ok((NormalSphereBundle::new(&d.x, d.sign_x)?, d))) {
            Ok((b, d)) => (d, b),
            Err(e) => {
                t.run("closed", || json!(null), || Err(e));
                continue;
            }
        };
        t.run("closed", || quasi_json(&d), || {
            let v = check_sign_eq_4lambda(&d.x, &d.gamma, d.sign_x)?;
            Ok(first([expect("closed verdict", v.pass, true), verdict_and_cube(&d, &bundle)?]))
        });
        // γ = 0 passes exactly when the signature vanishes
        let z = QuasiEData::new(d.x.clone(), RingElement::zero(&d.x, 2), d.sign_x, 1);
        t.run("gamma_zero", || json!({ "X": d.x.name(), "signX": d.sign_x }), || {
            let z = z?;
            let v = check_sign_eq_4lambda(&z.x, &z.gamma, z.sign_x)?;
            Ok(first([expect("verdict", v.pass, z.sign_x == 0), verdict_and_cube(&z, &bundle)?]))
        });
        if perturb {
            let label = d.x.basis(2)[slot % d.x.rank(2)].clone();
            let moved = RingElement::basis(&d.x, &label)
                .and_then(|b| d.gamma.add(&b.scale(&step)))
                .and_then(|g| QuasiEData::new(d.x.clone(), g, d.sign_x, 1));
            let shown = moved.as_ref().map(quasi_json).unwrap_or(Value::Null);
            t.run("perturbed", || shown, || verdict_and_cube(&moved?, &bundle));
        }
        // X ⊔ −X closes up for every γ
        let doubled = d.reversed().and_then(|rev| d.disjoint_union(&rev));
        t.run("doubled", || quasi_json(&d), || {
            let dd = doubled?;
            let v = check_sign_eq_4lambda(&dd.x, &dd.gamma, dd.sign_x)?;
            Ok(first([expect("doubled verdict", v.pass, true), expect("signature", dd.sign_x, 0)]))
        });
    }
}

/// Pure 3-braid whose closure is the Borromean rings.
const BORROMEAN_PURE: [i64; 6] = [1, -2, 1, -2, 1, -2];

/// Closure of the `k`-th power of [`BORROMEAN_PURE`].
pub fn borromean_power(k: i64) -> Result<LinkDiagram> {
    let letters: Vec<i64> = if k >= 0 {
        BORROMEAN_PURE.repeat(k as usize)
    } else {
        BORROMEAN_PURE.iter().rev().map(|g| -g).collect::<Vec<_>>().repeat(k.unsigned_abs() as usize)
    };
    let word: Vec<BraidLetter> = letters.into_iter().map(BraidLetter::from_signed).collect();
    braid_closure(3, &word)
}

fn link_identity(l: &LinkDiagram) -> Result<Option<Value>> {
    let s = sigma_of_link(l)?;
    let mu = s.mu123;
    let mut checks = vec![expect("sigma = -8 mu", s.sigma.clone(), Q(q(-8 * mu)))];
    for perm in [[1, 2, 0], [2, 0, 1]] {
        checks.push(expect("cyclic permutation", mu123(&l.permute_components(&perm)?)?, mu));
    }
    for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
        checks.push(expect("transposition", mu123(&l.permute_components(&perm)?)?, -mu));
    }
    for k in 0..3 {
        checks.push(expect("reversing one component", mu123(&l.reverse_component(k))?, -mu));
    }
    let all = l.mirror().reverse_component(0).reverse_component(1).reverse_component(2);
    checks.push(expect("mirror with all components reversed", mu123(&all)?, -mu));
    Ok(first(checks))
}

fn milnor_identity(t: &mut Tally) {
    for mu in -3..=3 {
        t.run("models", || json!({ "mu123": mu }), || {
            let (d, sigma) = milnor_sigma_model(mu)?;
            let doubled = d.disjoint_union(&d.reversed()?)?;
            let v = check_sign_eq_4lambda(&doubled.x, &doubled.gamma, doubled.sign_x)?;
            Ok(first([
                expect("sigma = -8 mu", Q(sigma), Q(q(-8 * mu))),
                expect("sigma_quasi", Q(sigma_quasi(&d)?), Q(q(-8 * mu))),
                expect("doubled verdict", v.pass, true),
            ]))
        });
    }
    let calibrated: BTreeMap<&str, i64> = [("borromean", 1), ("borromean_mirror", 1), ("unlink3", 0)].into();
    for name in fixtures::LINK_NAMES {
        let l = fixtures::link(name).expect("link fixture");
        if l.num_components() == 3 && is_algebraically_split(&l) {
            t.run("link_fixtures", || json!(name), || {
                let mut c = vec![link_identity(&l)?];
                if let Some(&want) = calibrated.get(name) {
                    c.push(expect("calibrated value", mu123(&l)?, want));
                }
                Ok(first(c))
            });
        } else {
            t.run("rejected_fixtures", || json!(name), || match mu123(&l) {
                Err(Error::Precondition(_)) => Ok(None),
                Err(e) => Err(e),
                Ok(mu) => Ok(Some(json!({ "check": "precondition error", "got": mu }))),
            });
        }
    }
    let unit = borromean_power(1).and_then(|l| mu123(&l));
    for k in -3..=3 {
        t.run("braid_powers", || json!({ "power": k }), || {
            let l = borromean_power(k)?;
            let base = unit.clone()?;
            Ok(first([expect("additive in the power", mu123(&l)?, k * base), link_identity(&l)?]))
        });
    }
}

/// Random quasi e-data on a shipped 4-dimensional model.
pub fn random_quasi(r: &mut Lcg) -> Result<QuasiEData> {
    const XS: &[&str] = &["cp2", "cp2bar", "s2xs2", "s4", "k3_like", "cp2+cp2bar"];
    let x = model(r.pick(XS));
    let gamma = random_element(r, &x, 2, 4, &[1, 2, 3]);
    let sign = r.range(-12, 12);
    let m = r.range(1, 4) as u64;
    QuasiEData::new(x, gamma, sign, m)
}

fn additivity(t: &mut Tally, r: &mut Lcg) {
    for _ in 0..RANDOM_INSTANCES {
        let pair = random_quasi(r).and_then(|a| Ok((a, random_quasi(r)?)));
        let k = r.range(2, 3) as usize;
        let label = |p: &Result<(QuasiEData, QuasiEData)>| match p {
            Ok((a, b)) => json!([quasi_json(a), quasi_json(b)]),
            Err(_) => json!(null),
        };
        let l = label(&pair);
        t.run("pairs", || l, || {
            let (a, b) = pair?;
            let sa = sigma_quasi(&a)?;
            let sb = sigma_quasi(&b)?;
            Ok(first([
                expect("union", qs(&sigma_quasi(&a.disjoint_union(&b)?)?), Q(&sa + &sb)),
                expect("reversal", qs(&sigma_quasi(&a.reversed()?)?), Q(-&sa)),
                expect("reversal", qs(&sigma_quasi(&b.reversed()?)?), Q(-&sb)),
                expect("copies", qs(&sigma_quasi(&a.copies(k)?)?), Q(sa.clone())),
                expect("union with reverse", qs(&sigma_quasi(&a.disjoint_union(&a.reversed()?)?)?), Q(q(0))),
            ]))
        });
    }
}

/// `Pᵀ Q P` for a product of random integer elementary matrices `P`.
fn scramble(r: &mut Lcg, f: &SymmetricForm) -> Result<SymmetricForm> {
    let n = f.size();
    let mut p = Matrix::identity(n);
    for _ in 0..2 * n + 2 {
        let i = r.below(n as u64) as usize;
        let j = (i + 1 + r.below(n as u64 - 1) as usize) % n;
        let mut e = Matrix::identity(n);
        e.set(i, j, q(r.nonzero(2)));
        p = p.mul(&e)?;
    }
    f.congruent(&p)
}

fn hyperbolic_sum(k: usize) -> SymmetricForm {
    (1..k).fold(hyperbolic_form(), |acc, _| acc.direct_sum(&hyperbolic_form()))
}

fn haefliger_suite(t: &mut Tally, r: &mut Lcg) {
    for (name, h) in [("hyperbolic_v11", 1), ("hyperbolic_v1m1", -1)] {
        t.run("fixtures", || json!(name), || {
            let d = io::from_value::<io::HaefligerInput>(io::parse_json(fixtures::data_text(name).expect("fixture"))?)?
                .build()?;
            let res = haefliger(&d)?;
            Ok(first([expect("H", res.h, Q(q(h))), expect("sigma", res.sigma, Q(q(-8 * h))), expect("integral", res.integral, true)]))
        });
    }
    let form_json = |f: &SymmetricForm, v: &[Rational]| {
        let rows: Vec<Vec<Q>> = f.matrix().row_slices().iter().map(|r| r.iter().map(qs).collect()).collect();
        json!({ "Q": rows, "lambda_pd": v.iter().map(qs).collect::<Vec<_>>() })
    };
    for _ in 0..RANDOM_INSTANCES {
        let k = r.range(1, 3) as usize;
        let f = scramble(r, &hyperbolic_sum(k));
        let v: Vec<Rational> = (0..2 * k).map(|_| q(r.range(-3, 3))).collect();
        let shown = f.as_ref().map(|f| form_json(f, &v)).unwrap_or(Value::Null);
        t.run("even_forms", || shown, || {
            let f = f?;
            let res = haefliger(&FramedHaefligerData { q: f.clone(), lambda_pd: v.clone() })?;
            let h = f.eval(&v)? * qf(1, 2);
            Ok(first([
                expect("integral", res.integral, true),
                expect("H", res.h.clone(), Q(h)),
                expect("sigma = -8H", res.sigma, Q(res.h.0 * q(-8))),
            ]))
        });
    }
    // odd unimodular forms of signature 0: H is a half-integer exactly when vᵀQv is odd
    for _ in 0..RANDOM_INSTANCES / 4 {
        let k = r.range(0, 2) as usize;
        let odd = SymmetricForm::from_i64(&[vec![1, 0], vec![0, -1]]).expect("diagonal form");
        let base = if k == 0 { odd } else { odd.direct_sum(&hyperbolic_sum(k)) };
        let f = scramble(r, &base);
        let v: Vec<Rational> = (0..base.size()).map(|_| q(r.range(-3, 3))).collect();
        let shown = f.as_ref().map(|f| form_json(f, &v)).unwrap_or(Value::Null);
        t.run("odd_controls", || shown, || {
            let f = f?;
            let res = haefliger(&FramedHaefligerData { q: f.clone(), lambda_pd: v.clone() })?;
            let even = (f.eval(&v)? * qf(1, 2)).is_integer();
            Ok(expect("integral iff vQv even", res.integral, even))
        });
    }
}

fn integer_matrix(r: &mut Lcg, rows: usize, cols: usize, bound: i64) -> Matrix {
    let m: Vec<Vec<Rational>> = (0..rows).map(|_| (0..cols).map(|_| q(r.range(-bound, bound))).collect()).collect();
    Matrix::from_rows(m, cols).expect("rectangular")
}

fn eclass_check(m: &Matrix, target: &[Rational], ker: Option<usize>) -> Result<Option<Value>> {
    let rank = m.rank();
    let sol = eclass_solve(m, target, ker)?;
    match sol {
        EClassSolution::Empty => {
            let mut rows: Vec<Vec<Rational>> = m.row_slices().to_vec();
            for (row, t) in rows.iter_mut().zip(target) {
                row.push(t.clone());
            }
            let aug = Matrix::from_rows(rows, m.cols() + 1)?;
            Ok(expect("empty only when inconsistent", aug.rank(), rank + 1))
        }
        EClassSolution::Affine { point, kernel_basis, simple, ker_dim_matches } => {
            let p: Vec<Rational> = point.into_iter().map(|x| x.0).collect();
            let ks: Vec<Vec<Rational>> = kernel_basis.into_iter().map(|v| v.into_iter().map(|x| x.0).collect()).collect();
            let mut checks = vec![
                expect("R point = target", m.mul_vec(&p)?.iter().map(qs).collect::<Vec<_>>(), target.iter().map(qs).collect()),
                expect("kernel dimension", ks.len(), m.cols() - rank),
                expect("simple iff unique", simple, rank == m.cols()),
                expect("ker_iX_dim cross-check", ker_dim_matches, ker.map(|k| k == m.cols() - rank)),
            ];
            for v in &ks {
                checks.push(expect("kernel vector", m.mul_vec(v)?.iter().all(|x| *x == q(0)), true));
            }
            if !ks.is_empty() {
                checks.push(expect("kernel basis independent", Matrix::from_rows(ks.clone(), m.cols())?.rank(), ks.len()));
            }
            Ok(first(checks))
        }
    }
}

fn eclass_suite(t: &mut Tally, r: &mut Lcg) {
    for name in ["eclass_identity", "eclass_kernel1", "eclass_empty"] {
        t.run("fixtures", || json!(name), || {
            let input: io::EClassInput = io::from_value(io::parse_json(fixtures::data_text(name).expect("fixture"))?)?;
            let (m, target) = input.build()?;
            eclass_check(&m, &target, input.ker_ix_dim)
        });
    }
    for _ in 0..RANDOM_INSTANCES {
        let rows = r.range(1, 4) as usize;
        let cols = r.range(1, 4) as usize;
        let inner = r.range(0, rows.min(cols) as i64) as usize;
        let m = integer_matrix(r, rows, inner, 2).mul(&integer_matrix(r, inner, cols, 2)).expect("conformable");
        let target: Vec<Rational> = if r.below(4) == 0 {
            (0..rows).map(|_| q(r.range(-3, 3))).collect()
        } else {
            let x: Vec<Rational> = (0..cols).map(|_| rational(r, 3, &[1, 2])).collect();
            m.mul_vec(&x).expect("conformable")
        };
        let ker = r.coin().then(|| cols - m.rank());
        let shown = || {
            let rows: Vec<Vec<Q>> = m.row_slices().iter().map(|r| r.iter().map(qs).collect()).collect();
            json!({ "R": rows, "target": target.iter().map(qs).collect::<Vec<_>>(), "ker_iX_dim": ker })
        };
        t.run("random_systems", shown, || eclass_check(&m, &target, ker));
    }
}

fn negated(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

fn link_diagrams(t: &mut Tally) {
    let get = |n: &str| fixtures::link(n);
    t.run("values", || json!("hopf"), || Ok(expect("lk", linking_matrix(&get("hopf")?), vec![vec![0, 1], vec![1, 0]])));
    for (name, sig) in [("unknot", 0), ("trefoil_right", -2), ("trefoil_left", 2), ("figure_eight", 0)] {
        t.run("values", || json!(name), || Ok(expect("signature", link_signature(&get(name)?)?, sig)));
    }
    for (a, b) in [("hopf", "hopf4"), ("trefoil_right", "trefoil5")] {
        t.run("diagram_pairs", || json!([a, b]), || {
            let (x, y) = (get(a)?, get(b)?);
            Ok(first([
                expect("lk", linking_matrix(&x), linking_matrix(&y)),
                expect("signature", link_signature(&x)?, link_signature(&y)?),
            ]))
        });
    }
    for name in fixtures::LINK_NAMES {
        t.run("mirror", || json!(name), || {
            let l = get(name)?;
            let m = l.mirror();
            Ok(first([
                expect("lk", linking_matrix(&m), negated(&linking_matrix(&l))),
                expect("signature", link_signature(&m)?, -link_signature(&l)?),
            ]))
        });
        t.run("reversal", || json!(name), || {
            let l = get(name)?;
            let mut want = linking_matrix(&l);
            for j in 0..want.len() {
                want[0][j] = -want[0][j];
                want[j][0] = -want[j][0];
            }
            Ok(expect("lk row negated", linking_matrix(&l.reverse_component(0)), want))
        });
    }
}
