//! On-disk JSON cache of constructed modules.
//!
//! One file per `(type, lambda)`. Each file carries a format version and a
//! sha256 digest of its payload; entries that fail either check, or whose
//! weight multiplicities disagree with Freudenthal, are ignored and rebuilt.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fraction::Rational;
use crate::linalg::SparseMatrix;
use crate::qmodule::IrrModule;
use crate::qseries::{LaurentPoly, RatFunc};
use crate::rootdata::{RootDatum, Weight};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct ModuleCache {
    dir: PathBuf,
}

impl ModuleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ModuleCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, d: &RootDatum, lambda: &[i64]) -> PathBuf {
        let w: Vec<String> = lambda.iter().map(|x| x.to_string()).collect();
        self.dir.join(format!("{}_{}.json", d.lie_type, w.join("_")))
    }

    /// Returns the cached module, or `None` if it is missing or fails validation.
    pub fn load(&self, d: &RootDatum, lambda: &[i64]) -> Option<IrrModule> {
        let text = fs::read_to_string(self.path_for(d, lambda)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        module_from_json(d, lambda, &v).ok()
    }

    /// Writes the module atomically (temporary file, then rename).
    pub fn store(&self, m: &IrrModule) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&m.datum, &m.lambda);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&module_to_json(m))?.as_bytes())?;
        tmp.flush()?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(path)
    }
}

fn poly_to_json(p: &LaurentPoly) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!([e, c.to_string()])).collect())
}

fn poly_from_json(v: &Value) -> Result<LaurentPoly> {
    let bad = || Error::Parse("malformed polynomial".into());
    let mut terms = Vec::new();
    for t in v.as_array().ok_or_else(bad)? {
        let e = t.get(0).and_then(Value::as_i64).ok_or_else(bad)?;
        let c: BigInt = t.get(1).and_then(Value::as_str).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        terms.push((e, Rational::from_integer(c)));
    }
    Ok(LaurentPoly::from_terms(terms))
}

pub fn ratfunc_to_json(x: &RatFunc) -> Value {
    json!({ "num": poly_to_json(&x.numer()), "den": poly_to_json(&x.denom()) })
}

pub fn ratfunc_from_json(v: &Value) -> Result<RatFunc> {
    let num = poly_from_json(v.get("num").ok_or_else(|| Error::Parse("missing num".into()))?)?;
    let den = poly_from_json(v.get("den").ok_or_else(|| Error::Parse("missing den".into()))?)?;
    RatFunc::new(&num, &den)
}

pub fn matrix_to_json(m: &SparseMatrix<RatFunc>) -> Value {
    let entries: Vec<Value> = m.triplets().map(|(r, c, x)| json!([r, c, ratfunc_to_json(x)])).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn matrix_from_json(v: &Value) -> Result<SparseMatrix<RatFunc>> {
    let bad = || Error::Parse("malformed matrix".into());
    let rows = v.get("rows").and_then(Value::as_u64).ok_or_else(bad)? as usize;
    let cols = v.get("cols").and_then(Value::as_u64).ok_or_else(bad)? as usize;
    let mut trip = Vec::new();
    for t in v.get("entries").and_then(Value::as_array).ok_or_else(bad)? {
        let r = t.get(0).and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let c = t.get(1).and_then(Value::as_u64).ok_or_else(bad)? as usize;
        if r >= rows || c >= cols {
            return Err(bad());
        }
        trip.push((r, c, ratfunc_from_json(t.get(2).ok_or_else(bad)?)?));
    }
    Ok(SparseMatrix::from_triplets(rows, cols, trip))
}

fn digest(payload: &Value) -> String {
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

pub fn module_to_json(m: &IrrModule) -> Value {
    let mats = |v: &[SparseMatrix<RatFunc>]| Value::Array(v.iter().map(matrix_to_json).collect());
    let mut payload = json!({
        "format_version": FORMAT_VERSION,
        "type": m.datum.lie_type.to_string(),
        "lambda": m.lambda,
        "basis_weights": m.basis_weights,
        "e": mats(&m.e),
        "f": mats(&m.f),
        "k": mats(&m.k),
    });
    let dg = digest(&payload);
    payload["digest"] = Value::String(dg);
    payload
}

pub fn module_from_json(d: &RootDatum, lambda: &[i64], v: &Value) -> Result<IrrModule> {
    let bad = |what: &str| Error::Parse(format!("cache entry: {what}"));
    let mut payload = v.clone();
    let stored = payload
        .as_object_mut()
        .and_then(|o| o.remove("digest"))
        .and_then(|x| x.as_str().map(str::to_owned))
        .ok_or_else(|| bad("missing digest"))?;
    if stored != digest(&payload) {
        return Err(bad("digest mismatch"));
    }
    if payload["format_version"].as_u64() != Some(FORMAT_VERSION) {
        return Err(bad("format version"));
    }
    if payload["type"].as_str() != Some(&d.lie_type.to_string()) {
        return Err(bad("type"));
    }
    let stored_lambda: Weight = serde_json::from_value(payload["lambda"].clone())?;
    if stored_lambda != lambda {
        return Err(bad("lambda"));
    }
    let basis_weights: Vec<Weight> = serde_json::from_value(payload["basis_weights"].clone())?;
    let mats = |key: &str| -> Result<Vec<SparseMatrix<RatFunc>>> {
        payload[key].as_array().ok_or_else(|| bad(key))?.iter().map(matrix_from_json).collect()
    };
    let (e, f, k) = (mats("e")?, mats("f")?, mats("k")?);
    let m = IrrModule::from_parts(d, stored_lambda, basis_weights, e, f)?;
    if m.k != k {
        return Err(bad("torus matrices"));
    }
    if m.multiplicities() != d.freudenthal_multiplicities(lambda)? || !m.top_is_singular() || !m.generated_by_f() {
        return Err(bad("module invariants"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmodule::build_module;

    #[test]
    fn round_trip() {
        let d = RootDatum::parse("B2").unwrap();
        let m = build_module(&d, &[1, 1], 100).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let c = ModuleCache::new(dir.path());
        let p = c.store(&m).unwrap();
        let back = c.load(&d, &[1, 1]).unwrap();
        assert_eq!(back.e, m.e);
        assert_eq!(back.f, m.f);
        assert_eq!(back.basis_weights, m.basis_weights);

        let text = fs::read_to_string(&p).unwrap().replacen("\"1\"", "\"2\"", 1);
        fs::write(&p, text).unwrap();
        assert!(c.load(&d, &[1, 1]).is_none());
    }
}
