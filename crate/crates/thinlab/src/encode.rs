//! JSON views of the core result types. Field order is fixed by
//! construction order.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use thinlab_core::closure::{ClosureCertificate, FormMatrix, FormSpace};
use thinlab_core::image::ImageVerdict;
use thinlab_core::linalg::Signature;
use thinlab_core::packing::{InversiveCircle, PackingOrbit};
use thinlab_core::probes::{Classification, CosetEvidence, MinusIdentity, NotThinReason, Verdict};
use thinlab_core::spectral::SpectralReport;
use thinlab_core::GeneratorSet;

use crate::json::{int, rational};

/// Finite `f64`s as numbers; NaN and infinities as `null`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn form(q: &FormMatrix) -> Value {
    Value::Array(q.iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

fn form_space(s: &FormSpace) -> Value {
    json!({
        "symmetry": s.symmetry.as_str(),
        "dimension": s.dimension(),
        "basis": s.basis.iter().map(form).collect::<Vec<_>>(),
        "nondegenerate": s.nondegenerate_element().as_ref().map(form),
    })
}

fn signature(s: &Signature) -> Value {
    json!({ "positive": s.positive, "negative": s.negative, "zero": s.zero })
}

fn poly(c: &[BigInt]) -> Value {
    Value::Array(c.iter().map(int).collect())
}

pub fn image_verdict(v: &ImageVerdict) -> Value {
    json!({
        "prime": v.prime,
        "order": v.image_order,
        "target_order": v.target_order.to_string(),
        "complete": v.complete,
        "surjective": format!("{:?}", v.surjective).to_lowercase(),
        "reason": v.reason.map(|r| r.as_str()),
    })
}

pub fn spectrum(r: &SpectralReport) -> Value {
    json!({
        "prime": r.prime,
        "vertices": r.vertices,
        "psl": r.psl,
        "method": r.method.as_str(),
        "lambda1": float(r.lambda1),
        "lambda_max": r.lambda_max().map(float),
        "residual": float(r.residual),
        "iterations": r.iterations,
        "seconds": float(r.seconds),
        "eigenvalues": r.eigenvalues.iter().copied().map(float).collect::<Vec<_>>(),
    })
}

pub fn closure(c: &ClosureCertificate) -> Value {
    let e = &c.evidence;
    json!({
        "class": c.class.as_str(),
        "n": c.n,
        "evidence": {
            "density": e.density.as_ref().map(|d| json!({
                "prime": d.prime,
                "image_order": d.image_order,
                "target_order": d.target_order.to_string(),
            })),
            "spanning_dimension": e.spanning_dimension,
            "symmetric_forms": e.symmetric_forms.as_ref().map(form_space),
            "antisymmetric_forms": e.antisymmetric_forms.as_ref().map(form_space),
            "symmetric_signature": e.symmetric_signature.as_ref().map(signature),
            "commutative": e.commutative,
            "unipotent": e.unipotent,
            "char_polys": e.char_polys.iter().map(|p| poly(p)).collect::<Vec<_>>(),
            "discriminant": e.discriminant.as_ref().map(int),
            "discriminant_squarefree": e.discriminant_squarefree.as_ref().map(int),
            "common_eigenvector": e.common_eigenvector.as_ref().map(|v| poly(v)),
        },
    })
}

fn minus_identity(gens: &GeneratorSet, m: &MinusIdentity) -> Value {
    match m {
        MinusIdentity::Present { word } => json!({ "status": "present", "word": gens.render(word) }),
        MinusIdentity::Excluded { modulus } => json!({ "status": "excluded", "modulus": modulus }),
        MinusIdentity::Undecided => json!({ "status": "undecided" }),
    }
}

pub fn verdict(gens: &GeneratorSet, v: &Verdict) -> Value {
    let mut c = Map::new();
    c.insert("verdict".into(), Value::from(v.classification.name()));
    match &v.classification {
        Classification::ProvenNotThin(NotThinReason::Index {
            psl_index,
            sl2_index,
            minus_identity: m,
        }) => {
            c.insert("reason".into(), Value::from("finite index"));
            c.insert("psl2_index".into(), Value::from(*psl_index));
            c.insert("index".into(), sl2_index.map_or(Value::Null, Value::from));
            if sl2_index.is_none() {
                c.insert("index_candidates".into(), json!([psl_index, 2 * psl_index]));
            }
            c.insert("minus_identity".into(), minus_identity(gens, m));
        }
        Classification::ProvenNotThin(NotThinReason::ProperClosure { class, citation }) => {
            c.insert("reason".into(), Value::from("finite index in a proper closure"));
            c.insert("closure".into(), Value::from(class.as_str()));
            c.insert("citation".into(), Value::from(*citation));
        }
        Classification::ProvenThinByCatalog { entry, citation } => {
            c.insert("catalog_entry".into(), Value::from(*entry));
            c.insert("citation".into(), Value::from(*citation));
        }
        Classification::ThinEvidence | Classification::Unknown => {}
    }
    let coset = v.coset.as_ref().map(|e| match e {
        CosetEvidence::Closed(t) => json!({
            "status": "closed",
            "index": t.index(),
            "defined": t.defined,
            "verified": t.verify().is_ok(),
            "s": t.s_perm,
            "t": t.t_perm,
        }),
        CosetEvidence::Exceeded { cap, live } => json!({ "status": "exceeded", "cap": cap, "live": live }),
    });
    json!({
        "classification": Value::Object(c),
        "catalog_entry": v.catalog_entry,
        "closure": closure(&v.closure),
        "coset": coset,
        "notes": v.notes,
    })
}

fn inversive(c: &InversiveCircle) -> Value {
    json!({
        "b": rational(&c.b),
        "b_hat": rational(&c.b_hat),
        "s": [rational(&c.s[0]), rational(&c.s[1])],
        "weights": [int(&c.weights[0]), int(&c.weights[1])],
        "f": int(&c.f),
    })
}

/// Exact circle data for every orbit circle plus the mirrors.
pub fn circles(orbit: &PackingOrbit) -> Value {
    let chart = &orbit.chart;
    let mirrors: Vec<Value> = orbit
        .mirrors
        .iter()
        .map(|m| {
            json!({
                "generator": m.generator,
                "normal": poly(&m.normal),
                "inversive": inversive(&m.circle),
                "center": m.circle.center_f64().map(|c| [float(c[0]), float(c[1])]),
                "radius": m.circle.radius_f64().map(float),
            })
        })
        .collect();
    let circles: Vec<Value> = orbit
        .circles
        .iter()
        .map(|c| {
            json!({
                "depth": c.depth,
                "seed": c.seed,
                "word": orbit.gens.render(&c.word),
                "curvature": orbit.integer_curvature(c).as_ref().map(int),
                "vector": c.vector.iter().map(rational).collect::<Vec<_>>(),
                "inversive": inversive(&c.circle),
                "center": c.circle.center_f64().map(|x| [float(x[0]), float(x[1])]),
                "radius": c.circle.radius_f64().map(float),
            })
        })
        .collect();
    json!({
        "form": form(&orbit.form),
        "chart": {
            "negated": chart.negated,
            "null": chart.null.iter().map(rational).collect::<Vec<_>>(),
            "conull": chart.conull.iter().map(rational).collect::<Vec<_>>(),
            "weights": [int(&chart.weights[0]), int(&chart.weights[1])],
        },
        "depth": orbit.depth,
        "scale": rational(&orbit.scale),
        "count": orbit.len(),
        "mirrors": mirrors,
        "circles": circles,
    })
}
