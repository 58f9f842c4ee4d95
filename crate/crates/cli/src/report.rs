use std::fmt::Write as _;

use serde_json::{json, Value};

use etatrace::braid::BraidOperator;
use etatrace::cache::ratfunc_to_json;
use etatrace::fraction::fmt_ratio;
use etatrace::identities::{contributing, IdentityReport, ThetaReport, TraceDetail};
use etatrace::qmodule::IrrModule;
use etatrace::qseries::RatFunc;
use etatrace::rootdata::{fmt_weight, RootDatum};

fn sign_str(s: Option<i8>) -> &'static str {
    match s {
        Some(1) => "+",
        Some(-1) => "-",
        _ => "?",
    }
}

fn scalar_text(s: &Option<RatFunc>) -> String {
    s.as_ref().map_or_else(|| "not a scalar".to_string(), |x| x.to_string())
}

pub fn identity_text(r: &IdentityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "identity {}  type {}  cutoff {}", r.identity, r.lie_type, fmt_ratio(&r.cutoff));
    let _ = writeln!(s, "lhs: {}", r.lhs);
    let _ = writeln!(s, "rhs: {}", r.rhs);
    let _ = writeln!(s, "weights examined: {}", r.terms.len());
    for t in contributing(&r.terms) {
        let _ = writeln!(
            s,
            "  V({})  dim {}  eps {:+}  exponent {}  c {}",
            fmt_weight(&t.lambda),
            t.dim,
            t.epsilon,
            fmt_ratio(&t.exponent),
            fmt_ratio(&t.c_lambda)
        );
    }
    match &r.first_discrepancy {
        None => {
            let _ = writeln!(s, "result: MATCH ({} ms)", r.wall_time_ms);
        }
        Some(d) => {
            let at = match &d.q_exponent {
                Some(qe) => format!("t^{} q^{}", fmt_ratio(&d.exponent), fmt_ratio(qe)),
                None => format!("x^{}", fmt_ratio(&d.exponent)),
            };
            let _ = writeln!(s, "result: MISMATCH at {at}: lhs {}, rhs {}", fmt_ratio(&d.lhs), fmt_ratio(&d.rhs));
        }
    }
    s
}

fn theta_fields(r: &ThetaReport) -> Value {
    json!({
        "top_sign": r.top_sign.map(|x| x.to_string()),
        "top_exponent": fmt_ratio(&r.top_exponent),
        "zero_sign": r.zero_sign.map(|x| x.to_string()),
        "zero_exponent": fmt_ratio(&r.zero_exponent),
        "has_zero_space": r.has_zero_space,
        "pass": r.pass(),
        "weight_spaces_match": r.weight_spaces_match(),
    })
}

pub fn trace_json(d: &RootDatum, t: &TraceDetail, theta: &ThetaReport) -> Value {
    json!({
        "type": d.lie_type.to_string(),
        "lambda": t.term.lambda,
        "dim": t.term.dim.to_string(),
        "epsilon": t.term.epsilon.to_string(),
        "epsilon_classical": t.epsilon_classical.to_string(),
        "exponent": fmt_ratio(&t.term.exponent),
        "c_lambda": fmt_ratio(&t.term.c_lambda),
        "trace": ratfunc_to_json(&t.trace),
        "trace_text": t.trace.to_string(),
        "theta": theta_fields(theta),
    })
}

pub fn trace_text(d: &RootDatum, t: &TraceDetail, theta: &ThetaReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} V({})  dim {}", d.lie_type, fmt_weight(&t.term.lambda), t.term.dim);
    let _ = writeln!(s, "trace of Pi: {}", t.trace);
    let _ = writeln!(s, "epsilon: {:+} (classical {:+})", t.epsilon_quantum, t.epsilon_classical);
    let _ = writeln!(s, "exponent (lambda,lambda+2rho)/h: {}", fmt_ratio(&t.term.exponent));
    let _ = writeln!(s, "theta on v_lambda: {}q^{}", sign_str(theta.top_sign), fmt_ratio(&theta.top_exponent));
    if theta.has_zero_space {
        let _ = writeln!(s, "theta on zero space: {}q^{}", sign_str(theta.zero_sign), fmt_ratio(&theta.zero_exponent));
    }
    s
}

pub fn theta_json(d: &RootDatum, r: &ThetaReport) -> Value {
    let spaces: Vec<Value> = r
        .spaces
        .iter()
        .map(|sp| {
            json!({
                "weight": sp.weight,
                "scalar": sp.scalar.as_ref().map(ratfunc_to_json),
                "expected_exponent": fmt_ratio(&sp.expected_exponent),
            })
        })
        .collect();
    let mut v = theta_fields(r);
    v["type"] = json!(d.lie_type.to_string());
    v["lambda"] = json!(r.lambda);
    v["diagonal"] = json!(r.theta_diagonal);
    v["spaces"] = Value::Array(spaces);
    v
}

pub fn theta_text(d: &RootDatum, r: &ThetaReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "theta on {} V({})", d.lie_type, fmt_weight(&r.lambda));
    let _ = writeln!(s, "v_lambda: {}q^{}", sign_str(r.top_sign), fmt_ratio(&r.top_exponent));
    if r.has_zero_space {
        let _ = writeln!(s, "zero space: {}q^{}", sign_str(r.zero_sign), fmt_ratio(&r.zero_exponent));
    }
    for sp in &r.spaces {
        let _ = writeln!(
            s,
            "  mu = ({}): {}   expected ±q^{}",
            fmt_weight(&sp.weight),
            scalar_text(&sp.scalar),
            fmt_ratio(&sp.expected_exponent)
        );
    }
    let _ = writeln!(s, "result: {}", if r.pass() { "PASS" } else { "FAIL" });
    s
}

pub fn module_text(m: &IrrModule) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} V({})  dim {}", m.datum.lie_type, fmt_weight(&m.lambda), m.dim());
    for (mu, mult) in m.multiplicities() {
        let _ = writeln!(s, "  ({})  x{}", fmt_weight(&mu), mult);
    }
    s
}

pub fn module_summary_json(m: &IrrModule) -> Value {
    let mult: Vec<Value> = m.multiplicities().into_iter().map(|(mu, k)| json!([mu, k.to_string()])).collect();
    json!({
        "type": m.datum.lie_type.to_string(),
        "lambda": m.lambda,
        "dim": m.dim().to_string(),
        "multiplicities": mult,
    })
}

fn matrix_text(s: &mut String, name: &str, m: &etatrace::linalg::SparseMatrix<RatFunc>) {
    let _ = writeln!(s, "{name}:");
    for (r, c, x) in m.triplets() {
        let _ = writeln!(s, "  [{r},{c}] {x}");
    }
}

pub fn module_matrices_text(m: &IrrModule) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "basis weights:");
    for (i, w) in m.basis_weights.iter().enumerate() {
        let _ = writeln!(s, "  {i}: ({})", fmt_weight(w));
    }
    for i in 0..m.rank() {
        matrix_text(&mut s, &format!("E{}", i + 1), &m.e[i]);
        matrix_text(&mut s, &format!("F{}", i + 1), &m.f[i]);
    }
    s
}

pub fn operator_text(m: &IrrModule, op: &BraidOperator) -> String {
    let word: Vec<String> = op.word.iter().map(|i| format!("S{}", i + 1)).collect();
    let mut s = String::new();
    let _ = writeln!(s, "{} on {} V({})", word.join(" "), m.datum.lie_type, fmt_weight(&m.lambda));
    matrix_text(&mut s, "matrix", &op.matrix);
    s
}

pub fn roots_text(d: &RootDatum) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "type {}  rank {}  dim {}", d.lie_type, d.rank(), d.dim_g());
    let _ = writeln!(s, "h = {}  k = {}  r_g = {}", d.h, fmt_ratio(&d.k), fmt_ratio(&d.rg));
    let _ = writeln!(s, "d = {:?}", d.d);
    let _ = writeln!(s, "cartan:");
    for row in &d.cartan {
        let _ = writeln!(s, "  {row:?}");
    }
    let _ = writeln!(s, "positive roots ({}):", d.positive_roots.len());
    for r in &d.positive_roots {
        let _ = writeln!(s, "  {r:?}");
    }
    s
}
