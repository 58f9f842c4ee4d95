//! Invariant suite over a fixed set of small modules.

use rayon::prelude::*;

use etatrace::braid;
use etatrace::fraction::int;
use etatrace::identities::{theta_report, Engine};
use etatrace::rootdata::{fmt_weight, RootDatum, Weight};
use etatrace::Error;

pub enum Outcome {
    Failed(String),
    Error(Error),
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::Error(e)
    }
}

const DEFAULT_TYPES: &str = "A1,A2,B2,G2";

/// Largest module dimension exercised, and the cutoff for the identities.
fn matrix_for(d: &RootDatum) -> (u64, i64) {
    match (d.rank(), d.h) {
        (1, _) => (12, 10),
        (2, 3) => (27, 4),
        (2, _) => (20, 3),
        _ => (15, 2),
    }
}

fn module_checks(e: &Engine, d: &RootDatum, w: &Weight) -> Result<Vec<(String, bool)>, Error> {
    let name = format!("{} V({})", d.lie_type, fmt_weight(w));
    let m = e.module(d, w)?;
    let mut out = Vec::new();
    let rel = m.verify_relations()?;
    out.push((format!("{name}: defining relations"), rel.all_pass()));
    out.push((
        format!("{name}: weight multiplicities"),
        m.multiplicities() == d.freudenthal_multiplicities(w)? && m.top_is_singular(),
    ));
    let ops = braid::all_s_operators(&m)?;
    for (i, s) in ops.iter().enumerate() {
        let oracle = braid::s_operator_via_exponentials(&m, i)?;
        out.push((format!("{name}: S{} equals exponential product", i + 1), oracle.matrix == s.matrix));
        let ts = braid::verify_ts_conjugation_with(&m, i, s)?;
        out.push((format!("{name}: S{} conjugation matches T{}", i + 1, i + 1), ts.all_pass()));
    }
    if d.rank() > 1 {
        let br = braid::verify_braid_relations_with(&m, &ops)?;
        out.push((format!("{name}: braid relations"), br.all_pass()));
    }
    let pi = braid::compose(&ops)?;
    let th = theta_report(d, &m, &pi)?;
    out.push((format!("{name}: theta scalars"), th.pass()));
    let traced = match e.trace_detail_with(d, &m, &pi) {
        Ok(_) => true,
        Err(Error::Internal(_)) => false,
        Err(other) => return Err(other),
    };
    out.push((format!("{name}: trace is epsilon q^exponent"), traced));
    Ok(out)
}

pub fn run(e: &Engine, types: Option<&str>) -> Result<(), Outcome> {
    let mut datums = Vec::new();
    for t in types.unwrap_or(DEFAULT_TYPES).split(',') {
        datums.push(RootDatum::parse(t.trim())?);
    }
    for d in &datums {
        let (max_dim, cutoff) = matrix_for(d);
        let weights = d.dominant_weights_up_to_dim(max_dim.min(e.size_limit))?;
        let per_weight: Vec<Vec<(String, bool)>> =
            weights.par_iter().map(|w| module_checks(e, d, w)).collect::<Result<_, _>>()?;
        let mut checks: Vec<(String, bool)> = per_weight.into_iter().flatten().collect();
        let main = e.verify_main_identity(d, &int(cutoff))?;
        checks.push((format!("{}: main identity below {cutoff}", d.lie_type), main.matches));
        let kostant = e.verify_kostant_classical(d, &int(cutoff))?;
        checks.push((format!("{}: classical identity below {cutoff}", d.lie_type), kostant.matches));
        for (name, pass) in checks {
            if !pass {
                return Err(Outcome::Failed(name));
            }
            println!("ok  {name}");
        }
    }
    println!("selftest passed");
    Ok(())
}
