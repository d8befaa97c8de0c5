//! Run configuration: defaults, a flat `key = value` file, command-line
//! overrides.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use thinlab_core::image::DEFAULT_ELEMENT_CAP;
use thinlab_core::probes::DEFAULT_COSET_CAP;
use thinlab_core::spectral::{LanczosOptions, DEFAULT_TOLERANCE};

/// How `±γ` are treated when building Cayley graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PslMode {
    On,
    Off,
    /// Identify `γ` with `−γ` whenever `−I` lies in the image and differs
    /// from `I`.
    Auto,
}

impl FromStr for PslMode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "on" | "true" | "yes" => Ok(PslMode::On),
            "off" | "false" | "no" => Ok(PslMode::Off),
            "auto" => Ok(PslMode::Auto),
            _ => bail!("psl must be on, off or auto, not {s:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub element_cap: usize,
    pub coset_cap: usize,
    /// Operator applications allowed to the iterative eigensolver.
    pub max_matvecs: usize,
    pub tolerance: f64,
    pub primes: Vec<u64>,
    pub psl: PslMode,
    pub depth: usize,
    /// Record wall times; off gives byte-identical reruns.
    pub timing: bool,
    /// Stamp SVG output with the generation time.
    pub timestamp: bool,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            element_cap: DEFAULT_ELEMENT_CAP,
            coset_cap: DEFAULT_COSET_CAP,
            max_matvecs: LanczosOptions::default().max_matvecs,
            tolerance: DEFAULT_TOLERANCE,
            primes: parse_primes("3..50").expect("valid range"),
            psl: PslMode::Off,
            depth: 6,
            timing: true,
            timestamp: true,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text).with_context(|| format!("in {}", path.display()))?;
        Ok(cfg)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            self.set(k.trim(), v.trim()).with_context(|| format!("line {}", i + 1))?;
        }
        self.validate()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.replace('_', "").parse().map_err(|_| anyhow!("{key}: cannot parse {v:?}"))
        }
        match key {
            "element_cap" | "cap" => self.element_cap = num(key, value)?,
            "coset_cap" => self.coset_cap = num(key, value)?,
            "max_matvecs" | "iterations" => self.max_matvecs = num(key, value)?,
            "tolerance" | "tol" => self.tolerance = num(key, value)?,
            "primes" => self.primes = parse_primes(value)?,
            "psl" => self.psl = value.parse()?,
            "depth" => self.depth = num(key, value)?,
            "timing" => self.timing = parse_bool(key, value)?,
            "timestamp" => self.timestamp = parse_bool(key, value)?,
            "threads" => self.threads = Some(num(key, value)?),
            _ => bail!("unknown key {key:?}"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.element_cap == 0 || self.coset_cap == 0 || self.max_matvecs == 0 {
            bail!("caps must be positive");
        }
        if self.threads == Some(0) {
            bail!("threads must be positive");
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            bail!("tolerance must lie in (0, 1), got {}", self.tolerance);
        }
        Ok(())
    }

    pub fn lanczos(&self) -> LanczosOptions {
        LanczosOptions {
            tolerance: self.tolerance,
            max_matvecs: self.max_matvecs,
            ..LanczosOptions::default()
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => bail!("{key}: expected true or false, got {v:?}"),
    }
}

/// Primes in `a..b` (inclusive of both ends), `a..=b`, or an explicit
/// comma-separated list.
pub fn parse_primes(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    let bad = || anyhow!("cannot parse prime range {text:?}");
    let mut out: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        (a..=b).filter(|&p| thinlab_core::image::is_prime(p)).collect()
    } else {
        let list = text
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&q) = list.iter().find(|&&p| !thinlab_core::image::is_prime(p)) {
            bail!("{q} is not prime");
        }
        list
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `THINLAB_THREADS`, then the configured value, then rayon's default.
pub fn thread_count(cfg: &RunConfig) -> Result<Option<usize>> {
    match std::env::var("THINLAB_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| anyhow!("THINLAB_THREADS must be a positive integer"))?;
            if n == 0 {
                bail!("THINLAB_THREADS must be a positive integer");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(cfg.threads),
    }
}
