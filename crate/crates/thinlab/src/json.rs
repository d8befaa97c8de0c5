//! JSON encodings of matrices, generator sets and exact numbers.
//!
//! Integers within `±2⁵³` are JSON numbers; anything larger is a decimal
//! string so that no consumer silently rounds it. Both forms are accepted
//! on input.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};
use thinlab_core::{catalog, GeneratorSet, IntMatrix, ModMatrix};

const SAFE_INTEGER: i64 = 1 << 53;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE_INTEGER => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                bail!("expected an integer, found {n}")
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| anyhow!("not an integer: {s:?}")),
        other => bail!("expected an integer, found {other}"),
    }
}

/// `p/q` as a string, or an integer when `q = 1`.
pub fn rational(x: &BigRational) -> Value {
    if x.denom().is_one() {
        int(x.numer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn rows(m: &IntMatrix) -> Value {
    Value::Array(m.rows().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    json!({ "n": m.n(), "rows": rows(m) })
}

pub fn mod_matrix(m: &ModMatrix) -> Value {
    let n = m.n();
    let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    json!({ "n": n, "modulus": m.modulus(), "rows": rows })
}

/// Accepts `{"n": 2, "rows": [[1,4],[0,1]]}` or a bare list of rows.
pub fn parse_matrix(v: &Value) -> Result<IntMatrix> {
    let (rows, n) = match v {
        Value::Object(o) => {
            let rows = o.get("rows").ok_or_else(|| anyhow!("matrix object without \"rows\""))?;
            let n = o.get("n").map(|n| n.as_u64().ok_or_else(|| anyhow!("\"n\" must be a positive integer")));
            (rows, n.transpose()?)
        }
        Value::Array(_) => (v, None),
        other => bail!("expected a matrix, found {other}"),
    };
    let rows = rows.as_array().ok_or_else(|| anyhow!("\"rows\" must be an array"))?;
    if let Some(n) = n {
        if n as usize != rows.len() {
            bail!("\"n\" is {n} but there are {} rows", rows.len());
        }
    }
    let mut entries = Vec::new();
    for r in rows {
        let r = r.as_array().ok_or_else(|| anyhow!("matrix rows must be arrays"))?;
        if r.len() != rows.len() {
            bail!("matrix is not square");
        }
        for x in r {
            entries.push(parse_int(x)?);
        }
    }
    Ok(IntMatrix::new(rows.len(), entries)?)
}

pub fn generator_set(g: &GeneratorSet) -> Value {
    json!({
        "name": g.name(),
        "names": g.names(),
        "generators": g.generators().iter().map(matrix).collect::<Vec<_>>(),
    })
}

/// Accepts `{"name": …, "generators": [matrix, …], "names": [...]}`.
pub fn parse_generator_set(v: &Value) -> Result<GeneratorSet> {
    let name = v.get("name").and_then(Value::as_str).unwrap_or("input");
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("generator set needs a \"generators\" array"))?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m).with_context(|| format!("generator {i}")))
        .collect::<Result<Vec<_>>>()?;
    match v.get("names").and_then(Value::as_array) {
        Some(names) => {
            let names = names
                .iter()
                .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| anyhow!("generator names must be strings")))
                .collect::<Result<Vec<_>>>()?;
            Ok(GeneratorSet::with_names(name, names, gens)?)
        }
        None => Ok(GeneratorSet::new(name, gens)?),
    }
}

/// A catalog id (`ex5`) or the path of a generator-set JSON file.
pub fn load_generators(spec: &str) -> Result<GeneratorSet> {
    if let Some(e) = catalog::entry(spec) {
        return Ok(e.generator_set());
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("{spec:?} is neither a catalog id ({}) nor a file", catalog::ids().join(", "));
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    parse_generator_set(&v).with_context(|| format!("in {}", path.display()))
}

/// Rows as compact JSON text (`[[2,0],[1,3]]`), reduced mod `m`.
pub fn parse_mod_matrix(text: &str, m: u64) -> Result<ModMatrix> {
    let v: Value = serde_json::from_str(text).with_context(|| format!("parsing matrix {text:?}"))?;
    let a = parse_matrix(&v)?;
    let rows: Vec<Vec<i64>> = a
        .rows()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let mm = BigInt::from(m);
                    let r = ((x % &mm) + &mm) % &mm;
                    r.to_i64().expect("residue fits")
                })
                .collect()
        })
        .collect();
    Ok(ModMatrix::from_rows(&rows, m)?)
}
