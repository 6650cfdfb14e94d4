//! Built-in fixtures, compiled in from the repository's `fixtures/` directory.

use std::sync::Arc;

use crate::cohomring::CohomModel;
use crate::error::{Error, Result};
use crate::linkdiag::{parse_pd, LinkDiagram};

macro_rules! fixture {
    ($file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/", $file))
    };
}

pub const MODEL_NAMES: &[&str] =
    &["point", "s4", "cp2", "cp2bar", "s2xs2", "t3", "t3xs3", "k3_like"];

/// Names resolvable by [`model`] that are built rather than stored.
pub const DERIVED_MODEL_NAMES: &[&str] = &["cp2+cp2bar", "cp2+cp2"];

pub fn model_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "point" => fixture!("point.json"),
        "s4" => fixture!("s4.json"),
        "cp2" => fixture!("cp2.json"),
        "cp2bar" => fixture!("cp2bar.json"),
        "s2xs2" => fixture!("s2xs2.json"),
        "t3" => fixture!("t3.json"),
        "t3xs3" => fixture!("t3xs3.json"),
        "k3_like" => fixture!("k3_like.json"),
        _ => return None,
    })
}

/// Looks up a fixture model by registry name; all pass strict validation.
pub fn model(name: &str) -> Result<Arc<CohomModel>> {
    if let Some(text) = model_text(name) {
        return CohomModel::from_json(text, true);
    }
    let parts: Vec<&str> = name.split('+').collect();
    if parts.len() > 1 && DERIVED_MODEL_NAMES.contains(&name) {
        let models = parts.iter().map(|p| model(p)).collect::<Result<Vec<_>>>()?;
        let tags: Vec<String> = (0..parts.len()).map(|i| format!("c{}", i + 1)).collect();
        let refs: Vec<(&str, &CohomModel)> =
            tags.iter().zip(&models).map(|(t, m)| (t.as_str(), m.as_ref())).collect();
        return Ok(Arc::new(CohomModel::disjoint_union(name, &refs)?));
    }
    Err(Error::Schema(format!("unknown fixture model {name:?}")))
}

pub const DATA_NAMES: &[&str] = &[
    "u0",
    "u1",
    "trivial_s4",
    "u0_total",
    "u1_total",
    "hyperbolic_v11",
    "hyperbolic_v1m1",
    "quasi_axiomatic",
    "quasi_cp2_h",
    "geometric_s2xs2",
    "eclass_identity",
    "eclass_kernel1",
    "eclass_empty",
];

/// Raw JSON of a non-model data fixture.
pub fn data_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "u0" => fixture!("u0.json"),
        "u1" => fixture!("u1.json"),
        "trivial_s4" => fixture!("trivial_s4.json"),
        "u0_total" => fixture!("u0_total.json"),
        "u1_total" => fixture!("u1_total.json"),
        "hyperbolic_v11" => fixture!("hyperbolic_v11.json"),
        "hyperbolic_v1m1" => fixture!("hyperbolic_v1m1.json"),
        "quasi_axiomatic" => fixture!("quasi_axiomatic.json"),
        "quasi_cp2_h" => fixture!("quasi_cp2_h.json"),
        "geometric_s2xs2" => fixture!("geometric_s2xs2.json"),
        "eclass_identity" => fixture!("eclass_identity.json"),
        "eclass_kernel1" => fixture!("eclass_kernel1.json"),
        "eclass_empty" => fixture!("eclass_empty.json"),
        _ => return None,
    })
}

pub const LINK_NAMES: &[&str] = &[
    "unknot",
    "unlink3",
    "hopf",
    "hopf_neg",
    "hopf4",
    "hopf_unknot",
    "trefoil_right",
    "trefoil_left",
    "trefoil5",
    "figure_eight",
    "whitehead",
    "borromean",
    "borromean_mirror",
];

/// PD text of a link fixture.
pub fn link_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "unknot" => fixture!("unknot.pd"),
        "unlink3" => fixture!("unlink3.pd"),
        "hopf" => fixture!("hopf.pd"),
        "hopf_neg" => fixture!("hopf_neg.pd"),
        "hopf4" => fixture!("hopf4.pd"),
        "hopf_unknot" => fixture!("hopf_unknot.pd"),
        "trefoil_right" => fixture!("trefoil_right.pd"),
        "trefoil_left" => fixture!("trefoil_left.pd"),
        "trefoil5" => fixture!("trefoil5.pd"),
        "figure_eight" => fixture!("figure_eight.pd"),
        "whitehead" => fixture!("whitehead.pd"),
        "borromean" => fixture!("borromean.pd"),
        "borromean_mirror" => fixture!("borromean_mirror.pd"),
        _ => return None,
    })
}

pub fn link(name: &str) -> Result<LinkDiagram> {
    parse_pd(link_text(name).ok_or_else(|| Error::Schema(format!("unknown fixture link {name:?}")))?)
}
