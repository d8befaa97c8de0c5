//! The computations behind each subcommand, returning JSON.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigUint;
use serde_json::{json, Value};
use thinlab_core::closure::{form_signature, invariant_forms, FormMatrix, Symmetry};
use thinlab_core::image::{
    contains_mod, is_prime, lift_to_integers, sl_order, surjectivity_of, Membership,
};
use thinlab_core::packing::{orbit_circles, PackingOrbit};
use thinlab_core::probes::{thinness_verdict, ProbeConfig};
use thinlab_core::{enumerate_image, reduce_mod, GeneratorSet, ModMatrix};

use crate::config::RunConfig;
use crate::report::Report;
use crate::svg::{render_svg, SvgOptions};
use crate::{encode, json, scan};

/// Image mod `m`; the surjectivity fields are filled only for primes.
pub fn image(gens: &GeneratorSet, m: u64, cfg: &RunConfig) -> Result<Value> {
    let img = enumerate_image(gens, m, cfg.element_cap)?;
    if is_prime(m) {
        let v = surjectivity_of(&img, sl_order(gens.n(), m)?);
        let mut out = encode::image_verdict(&v);
        out["modulus"] = json!(m);
        Ok(out)
    } else {
        Ok(json!({
            "prime": null,
            "order": img.order(),
            "target_order": null,
            "complete": img.is_complete(),
            "surjective": null,
            "reason": "surjectivity is decided for prime moduli only",
            "modulus": m,
        }))
    }
}

/// Membership of `target` mod `m`, with a lift to the integers when `m` is
/// prime and the target is reached.
pub fn membership(gens: &GeneratorSet, m: u64, target: &ModMatrix, cfg: &RunConfig) -> Result<Value> {
    Ok(match contains_mod(gens, m, target, cfg.element_cap)? {
        Membership::Yes { witness } => {
            let lifted = thinlab_core::eval_word(gens, &witness)?;
            let reduced = reduce_mod(&lifted, m)? == *target;
            if is_prime(m) {
                let (l, _) = lift_to_integers(gens, m, target, cfg.element_cap)?;
                debug_assert_eq!(l, lifted);
            }
            json!({
                "target": json::mod_matrix(target),
                "member": true,
                "witness": gens.render(&witness),
                "witness_length": witness.len(),
                "lift": json::matrix(&lifted),
                "det": json::int(&lifted.det()),
                "verified": reduced,
            })
        }
        Membership::No(r) => json!({
            "target": json::mod_matrix(target),
            "member": false,
            "reason": r.as_str(),
        }),
        Membership::Capped => json!({
            "target": json::mod_matrix(target),
            "member": null,
            "reason": "element cap reached",
        }),
    })
}

pub fn probe_config(cfg: &RunConfig) -> ProbeConfig {
    ProbeConfig {
        element_cap: cfg.element_cap,
        coset_cap: cfg.coset_cap,
        ..ProbeConfig::default()
    }
}

/// A nondegenerate invariant symmetric form of signature (3,1) or (1,3).
pub fn packing_form(gens: &GeneratorSet) -> Result<FormMatrix> {
    if gens.n() != 4 {
        bail!("circle packings need 4x4 generators, got {}x{}", gens.n(), gens.n());
    }
    let q = invariant_forms(gens, Symmetry::Symmetric)
        .nondegenerate_element()
        .ok_or_else(|| anyhow!("no nondegenerate invariant symmetric form"))?;
    let s = form_signature(&q);
    if s.zero != 0 || s.positive.min(s.negative) != 1 {
        bail!(
            "invariant form has signature ({}, {}), not (3, 1)",
            s.positive,
            s.negative
        );
    }
    Ok(q)
}

pub fn pack(gens: &GeneratorSet, depth: usize) -> Result<PackingOrbit> {
    let q = packing_form(gens)?;
    Ok(orbit_circles(gens, &q, depth)?)
}

/// Circle counts by depth and the distinct integer curvatures.
pub fn pack_summary(orbit: &PackingOrbit) -> Value {
    let by_depth: Vec<usize> = (0..=orbit.depth).map(|d| orbit.circles.iter().filter(|c| c.depth == d).count()).collect();
    let mut curvatures: Vec<_> = orbit.circles.iter().filter_map(|c| orbit.integer_curvature(c)).collect();
    curvatures.sort();
    curvatures.dedup();
    let s = form_signature(&orbit.form);
    json!({
        "form": encode::form(&orbit.form),
        "signature": [s.positive, s.negative],
        "involutions": orbit.gens.generators().iter().all(|g| g.mul(g).is_ok_and(|x| x.is_identity())),
        "depth": orbit.depth,
        "circles": orbit.len(),
        "by_depth": by_depth,
        "integral": orbit.non_integral().is_empty(),
        "scale": json::rational(&orbit.scale),
        "curvatures": curvatures.iter().map(json::int).collect::<Vec<_>>(),
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes the optional SVG and circles file and returns the manifest entries.
pub fn write_pack_artifacts(
    orbit: &PackingOrbit,
    svg: Option<&Path>,
    circles: Option<&Path>,
    opts: SvgOptions,
) -> Result<Vec<(&'static str, String)>> {
    let mut out = Vec::new();
    if let Some(p) = svg {
        write_file(p, &render_svg(orbit, opts))?;
        out.push(("packing.svg", p.display().to_string()));
    }
    if let Some(p) = circles {
        let mut text = serde_json::to_string_pretty(&encode::circles(orbit))?;
        text.push('\n');
        write_file(p, &text)?;
        out.push(("circles.json", p.display().to_string()));
    }
    Ok(out)
}

/// Primes in the configured range whose target group is small enough to
/// enumerate within both the element cap and `limit`.
fn affordable_primes(gens: &GeneratorSet, cfg: &RunConfig, limit: usize) -> Result<Vec<u64>> {
    let bound = BigUint::from(cfg.element_cap.min(limit));
    let mut out = Vec::new();
    for &p in &cfg.primes {
        if sl_order(gens.n(), p)? <= bound {
            out.push(p);
        }
    }
    Ok(out)
}

/// Largest target order the report enumerates per prime.
pub const REPORT_IMAGE_LIMIT: usize = 1 << 20;
/// Largest Cayley graph the report solves; `scan` covers the rest.
pub const REPORT_SPECTRUM_LIMIT: usize = 2000;

/// Closure, verdict, small congruence images, small spectra (2×2 only) and,
/// for reflection groups in dimension 4, the packing.
pub fn full_report(gens: &GeneratorSet, cfg: &RunConfig, artifacts: Option<&Path>) -> Result<Report> {
    let mut r = Report::new();
    r.generators = Some(json::generator_set(gens));
    if let Some(e) = thinlab_core::catalog::matching(gens) {
        r.insert("catalog", catalog_entry(e));
    }
    let verdict = thinness_verdict(gens, &probe_config(cfg))?;
    r.insert("closure", encode::closure(&verdict.closure));
    r.insert("verdict", encode::verdict(gens, &verdict));

    let primes = affordable_primes(gens, cfg, REPORT_IMAGE_LIMIT)?;
    let images = scan::with_pool(cfg, || {
        use rayon::prelude::*;
        primes.par_iter().map(|&p| image(gens, p, cfg)).collect::<Result<Vec<_>>>()
    })??;
    r.insert("images", Value::Array(images));

    if gens.n() == 2 {
        let small = affordable_primes(gens, cfg, REPORT_SPECTRUM_LIMIT)?;
        let sub = RunConfig {
            primes: small,
            ..cfg.clone()
        };
        let rows = scan::spectral_scan(gens, &sub)?;
        r.insert(
            "spectra",
            Value::Array(rows.iter().map(|row| encode::spectrum(&row.report)).collect()),
        );
    }

    let involutions = gens.generators().iter().all(|g| g.mul(g).is_ok_and(|x| x.is_identity()));
    if gens.n() == 4 && involutions && packing_form(gens).is_ok() {
        let orbit = pack(gens, cfg.depth)?;
        r.insert("packing", pack_summary(&orbit));
        if let Some(dir) = artifacts {
            let opts = SvgOptions {
                labels: true,
                timestamp: cfg.timestamp,
                mirrors: true,
            };
            for (name, path) in
                write_pack_artifacts(&orbit, Some(&dir.join("packing.svg")), Some(&dir.join("circles.json")), opts)?
            {
                r.artifact(name, &path);
            }
        }
    }
    Ok(r)
}

pub fn catalog_entry(e: &thinlab_core::catalog::CatalogEntry) -> Value {
    json!({
        "id": e.id,
        "n": e.n(),
        "generators": e.generator_set().generators().iter().map(json::rows).collect::<Vec<_>>(),
        "summary": e.summary,
        "closure": e.closure.map(|c| c.as_str()),
        "thinness": format!("{:?}", e.thinness),
        "sl2_index": e.sl2_index,
        "citation": e.citation,
    })
}
