//! Per-prime spectra and the scan table.

use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use thinlab_core::image::{sl_order, surjectivity_of, ImageVerdict};
use thinlab_core::spectral::{laplacian_spectrum_dense, lambda1_iterative_with, SpectralReport, DENSE_LIMIT};
use thinlab_core::{build_cayley, enumerate_image, GeneratorSet, GroupImage, ModMatrix};

use crate::config::{thread_count, PslMode, RunConfig};

/// One scan row: the spectrum together with the image it came from.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub image: ImageVerdict,
    pub report: SpectralReport,
}

fn use_psl(image: &GroupImage, mode: PslMode) -> bool {
    match mode {
        PslMode::On => true,
        PslMode::Off => false,
        PslMode::Auto => {
            image.modulus() > 2 && image.contains(&ModMatrix::minus_identity(image.n(), image.modulus()))
        }
    }
}

/// λ₁ (and the full spectrum when small) of the Cayley graph mod `p`.
pub fn spectrum_of_image(image: &GroupImage, psl: PslMode, cfg: &RunConfig) -> Result<SpectralReport> {
    let start = Instant::now();
    let g = build_cayley(image, use_psl(image, psl))?;
    let mut r = if g.vertex_count() <= DENSE_LIMIT {
        laplacian_spectrum_dense(&g)?
    } else {
        lambda1_iterative_with(&g, cfg.lanczos())
            .with_context(|| format!("eigensolver on {} vertices mod {}", g.vertex_count(), image.modulus()))?
    };
    r.prime = Some(image.modulus());
    r.seconds = if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 };
    Ok(r)
}

pub fn spectrum(gens: &GeneratorSet, p: u64, psl: PslMode, cfg: &RunConfig) -> Result<ScanRow> {
    let start = Instant::now();
    let image = enumerate_image(gens, p, cfg.element_cap)?;
    let verdict = surjectivity_of(&image, sl_order(gens.n(), p)?);
    let mut report = spectrum_of_image(&image, psl, cfg)?;
    if cfg.timing {
        report.seconds = start.elapsed().as_secs_f64();
    }
    Ok(ScanRow { image: verdict, report })
}

/// Runs `f` on a pool bounded by `THINLAB_THREADS` or the configured count.
pub fn with_pool<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(cfg)? {
        b = b.num_threads(n);
    }
    Ok(b.build()?.install(f))
}

/// One row per configured prime, in ascending order.
pub fn spectral_scan(gens: &GeneratorSet, cfg: &RunConfig) -> Result<Vec<ScanRow>> {
    with_pool(cfg, || {
        cfg.primes
            .par_iter()
            .map(|&p| spectrum(gens, p, cfg.psl, cfg).with_context(|| format!("p = {p}")))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Method column: the solver, with `incomplete` appended when the image hit
/// the element cap.
fn method(row: &ScanRow) -> String {
    let m = row.report.method.as_str();
    if row.image.complete {
        m.to_owned()
    } else {
        format!("{m} incomplete")
    }
}

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "V", "lambda1", "method", "seconds"])?;
    for row in rows {
        let r = &row.report;
        w.write_record([
            row.image.prime.to_string(),
            r.vertices.to_string(),
            format!("{:.12}", r.lambda1),
            method(row),
            format!("{:.3}", r.seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Scatter of λ₁ against p.
pub fn scan_svg(rows: &[ScanRow]) -> String {
    let (w, h, m) = (640.0, 400.0, 50.0);
    let pmax = rows.iter().map(|r| r.image.prime).max().unwrap_or(1).max(1) as f64;
    let lmax = rows.iter().map(|r| r.report.lambda1).fold(0.0f64, f64::max).max(1e-9) * 1.1;
    let x = |p: f64| m + (w - 2.0 * m) * p / pmax;
    let y = |l: f64| h - m - (h - 2.0 * m) * l / lmax;
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    s.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        h - m,
        w - m
    ));
    s.push_str(&format!("<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{}\" stroke=\"black\"/>\n", h - m));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">p</text>\n",
        w / 2.0,
        h - 12.0
    ));
    s.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-size=\"14\">\u{3bb}\u{2081}</text>\n",
        h / 2.0
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{:.3}</text>\n",
        m - 4.0,
        m + 4.0,
        lmax
    ));
    for r in rows {
        let p = r.image.prime as f64;
        s.push_str(&format!(
            "<circle class=\"point\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"><title>p={} \u{3bb}\u{2081}={:.6}</title></circle>\n",
            x(p),
            y(r.report.lambda1),
            r.image.prime,
            r.report.lambda1
        ));
    }
    s.push_str("</svg>\n");
    s
}
