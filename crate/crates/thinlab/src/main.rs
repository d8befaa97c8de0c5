use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use thinlab::config::{parse_primes, PslMode, RunConfig};
use thinlab::pipeline::{self, write_file};
use thinlab::report::Report;
use thinlab::svg::SvgOptions;
use thinlab::{encode, json, scan};
use thinlab_core::catalog;
use thinlab_core::closure::certify_closure;
use thinlab_core::probes::thinness_verdict;

/// Thin-group lab: congruence images, Cayley-graph spectra, Zariski-closure
/// evidence, finite-index probes and circle packings for integer matrix groups.
#[derive(Parser)]
#[command(name = "thinlab", version)]
struct Cli {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Report zero for every wall time so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Element cap for group enumerations.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Gens {
    /// Catalog id (ex1 … ex11, gl2-demo) or a generator-set JSON file.
    #[arg(long)]
    gens: String,
}

#[derive(Subcommand)]
enum Command {
    /// Congruence image mod m; optionally test membership of a matrix.
    Image {
        #[command(flatten)]
        gens: Gens,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        /// Matrix rows as JSON, e.g. '[[2,0],[1,3]]'.
        #[arg(long)]
        target: Option<String>,
    },
    /// Laplacian spectrum of the Cayley graph mod a prime.
    Spectrum {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        prime: u64,
        /// Identify γ with −γ: on, off or auto.
        #[arg(long)]
        psl: Option<PslMode>,
        /// Eigensolver residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// λ₁ for every prime in a range, as CSV.
    Scan {
        #[command(flatten)]
        gens: Gens,
        /// `3..50`, `3..=50` or a list `3,5,7`.
        #[arg(long)]
        primes: Option<String>,
        /// Identify γ with −γ: on, off or auto.
        #[arg(long)]
        psl: Option<PslMode>,
        /// Eigensolver residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scatter plot of λ₁ against p.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Zariski-closure certificate.
    Closure {
        #[command(flatten)]
        gens: Gens,
        /// Also write the certificate here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Thinness verdict with its evidence chain.
    Probe {
        #[command(flatten)]
        gens: Gens,
        /// Cosets allowed before the enumeration gives up.
        #[arg(long)]
        coset_cap: Option<usize>,
    },
    /// Circle-packing orbit of a reflection group.
    Pack {
        #[command(flatten)]
        gens: Gens,
        /// Longest word applied to the seed circles.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Curvature labels in the SVG.
        #[arg(long)]
        labels: bool,
        /// Leave the mirrors out of the SVG.
        #[arg(long)]
        no_mirrors: bool,
        /// Exact circle data; defaults to circles.json beside the SVG.
        #[arg(long)]
        circles: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// The built-in example generator sets.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Full pipeline as one JSON document.
    Report {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for packing.svg and circles.json, when they apply.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
}

/// Errors in the configuration rather than in a computation.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| UsageError(e).into())
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => usage(RunConfig::from_file(p))?,
        None => RunConfig::default(),
    };
    if cli.no_timing {
        cfg.timing = false;
    }
    if let Some(c) = cli.cap {
        cfg.element_cap = c;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = config(&cli)?;
    let load = |g: &Gens| usage(json::load_generators(&g.gens));
    match &cli.command {
        Command::Image { gens, modulus, target } => {
            let g = load(gens)?;
            let mut v = pipeline::image(&g, *modulus, &cfg)?;
            if let Some(t) = target {
                let t = usage(json::parse_mod_matrix(t, *modulus))?;
                v["membership"] = pipeline::membership(&g, *modulus, &t, &cfg)?;
            }
            print_json(&v)
        }
        Command::Spectrum { gens, prime, psl, tol } => {
            let g = load(gens)?;
            if let Some(t) = tol {
                cfg.tolerance = *t;
            }
            usage(cfg.validate())?;
            let row = scan::spectrum(&g, *prime, psl.unwrap_or(cfg.psl), &cfg)?;
            let mut v = encode::spectrum(&row.report);
            v["image"] = encode::image_verdict(&row.image);
            print_json(&v)
        }
        Command::Scan {
            gens,
            primes,
            psl,
            tol,
            out,
            svg,
        } => {
            let g = load(gens)?;
            if let Some(p) = primes {
                cfg.primes = usage(parse_primes(p))?;
            }
            if let Some(p) = psl {
                cfg.psl = *p;
            }
            if let Some(t) = tol {
                cfg.tolerance = *t;
            }
            usage(cfg.validate())?;
            let rows = scan::spectral_scan(&g, &cfg)?;
            match out {
                Some(p) => {
                    let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    scan::write_csv(&rows, BufWriter::new(f))?;
                }
                None => scan::write_csv(&rows, io::stdout().lock())?,
            }
            if let Some(p) = svg {
                write_file(p, &scan::scan_svg(&rows))?;
            }
            Ok(())
        }
        Command::Closure { gens, report } => {
            let g = load(gens)?;
            let v = encode::closure(&certify_closure(&g, cfg.element_cap)?);
            if let Some(p) = report {
                write_file(p, &format!("{}\n", serde_json::to_string_pretty(&v)?))?;
            }
            print_json(&v)
        }
        Command::Probe { gens, coset_cap } => {
            let g = load(gens)?;
            if let Some(c) = coset_cap {
                cfg.coset_cap = *c;
            }
            usage(cfg.validate())?;
            let v = thinness_verdict(&g, &pipeline::probe_config(&cfg))?;
            print_json(&encode::verdict(&g, &v))
        }
        Command::Pack {
            gens,
            depth,
            svg,
            labels,
            no_mirrors,
            circles,
            no_timestamp,
        } => {
            let g = load(gens)?;
            let orbit = pipeline::pack(&g, depth.unwrap_or(cfg.depth))?;
            let circles = circles.clone().or_else(|| {
                svg.as_deref()
                    .map(|s| s.parent().unwrap_or(Path::new("")).join("circles.json"))
            });
            let opts = SvgOptions {
                labels: *labels,
                timestamp: cfg.timestamp && !no_timestamp,
                mirrors: !no_mirrors,
            };
            let mut r = Report::new();
            r.generators = Some(json::generator_set(&g));
            r.insert("packing", pipeline::pack_summary(&orbit));
            for (name, path) in pipeline::write_pack_artifacts(&orbit, svg.as_deref(), circles.as_deref(), opts)? {
                r.artifact(name, &path);
            }
            print_json(&r.to_value())
        }
        Command::Catalog { json } => {
            if *json {
                let v: Vec<Value> = catalog::ENTRIES.iter().map(pipeline::catalog_entry).collect();
                return print_json(&Value::Array(v));
            }
            let mut out = io::stdout().lock();
            for e in catalog::ENTRIES {
                writeln!(
                    out,
                    "{:<9} n={}  {:<15} {:<8} {}\n          {}",
                    e.id,
                    e.n(),
                    e.closure.map_or("-", |c| c.as_str()),
                    format!("{:?}", e.thinness),
                    e.summary,
                    e.citation
                )?;
            }
            Ok(())
        }
        Command::Report { gens, out, artifacts } => {
            let g = load(gens)?;
            let r = pipeline::full_report(&g, &cfg, artifacts.as_deref())?;
            let text = r.to_json();
            match out {
                Some(p) => write_file(p, &text),
                None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
            }
        }
    }
}

/// A reader such as `head` went away; not worth reporting.
fn closed_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let io = c.downcast_ref::<io::Error>().map(io::Error::kind);
        let json = c.downcast_ref::<serde_json::Error>().and_then(serde_json::Error::io_error_kind);
        let csv = c.downcast_ref::<csv::Error>().and_then(|e| match e.kind() {
            csv::ErrorKind::Io(e) => Some(e.kind()),
            _ => None,
        });
        [io, json, csv].contains(&Some(io::ErrorKind::BrokenPipe))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if closed_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thinlab: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
