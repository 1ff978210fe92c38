//! JSON documents: polytopes, spectra and moment configurations.
//!
//! Parsing collects every problem it finds, each tagged with a JSON pointer,
//! instead of stopping at the first. Rationals are accepted as `"p/q"`
//! strings or JSON integers and always written back as strings.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::extremal::AffineFunction;
use crate::indicial::{ModelCoefficients, SpectralPair};
use crate::lattice;
use crate::linalg::Matrix;
use crate::obstruction::MomentConfiguration;
use crate::polytope::{DelzantPolytope, Facet};
use crate::rational::{format_rational, parse_rational, Rational};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

pub type Validated<T> = std::result::Result<T, Vec<ValidationError>>;

#[derive(Default)]
struct Collector {
    errors: Vec<ValidationError>,
}

impl Collector {
    fn push(&mut self, pointer: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ValidationError { pointer: pointer.into(), message: message.into() });
    }

    fn finish<T>(self, value: T) -> Validated<T> {
        if self.errors.is_empty() {
            Ok(value)
        } else {
            Err(self.errors)
        }
    }

    fn rational(&mut self, v: &Value, ptr: &str) -> Option<Rational> {
        let parsed = match v {
            Value::String(s) => parse_rational(s).ok(),
            Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()).ok(),
            _ => None,
        };
        if parsed.is_none() {
            self.push(ptr, "invalid rational");
        }
        parsed
    }

    fn rational_vec(&mut self, v: &Value, ptr: &str) -> Option<Vec<Rational>> {
        let Some(items) = v.as_array() else {
            self.push(ptr, "expected an array");
            return None;
        };
        let out: Vec<Option<Rational>> = items
            .iter()
            .enumerate()
            .map(|(i, x)| self.rational(x, &format!("{ptr}/{i}")))
            .collect();
        out.into_iter().collect()
    }

    fn rational_rows(&mut self, v: &Value, ptr: &str) -> Option<Vec<Vec<Rational>>> {
        let Some(items) = v.as_array() else {
            self.push(ptr, "expected an array");
            return None;
        };
        let out: Vec<Option<Vec<Rational>>> = items
            .iter()
            .enumerate()
            .map(|(i, x)| self.rational_vec(x, &format!("{ptr}/{i}")))
            .collect();
        out.into_iter().collect()
    }

    fn object<'a>(&mut self, v: &'a Value, ptr: &str) -> Option<&'a Map<String, Value>> {
        let o = v.as_object();
        if o.is_none() {
            self.push(ptr, "expected an object");
        }
        o
    }
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|r| vector_json(r)).collect())
}

pub fn affine_json(a: &AffineFunction) -> Value {
    json!({ "constant": rational_json(&a.constant), "gradient": vector_json(&a.gradient) })
}

fn geometry_error(e: &Error) -> ValidationError {
    let (pointer, message) = match e {
        Error::NotPrimitive { facet, .. } => (format!("/facets/{facet}/normal"), "normal not primitive".to_string()),
        Error::ZeroNormal { facet } => (format!("/facets/{facet}/normal"), "normal is zero".to_string()),
        Error::RedundantFacet { facet } => (format!("/facets/{facet}"), e.to_string()),
        other => (String::new(), other.to_string()),
    };
    ValidationError { pointer, message }
}

pub fn parse_polytope(doc: &Value) -> Validated<DelzantPolytope> {
    let mut c = Collector::default();
    let Some(obj) = c.object(doc, "") else {
        return c.finish(unreachable_polytope());
    };
    let dim = match obj.get("dim").and_then(Value::as_u64) {
        Some(d) if d > 0 => Some(d as usize),
        _ => {
            c.push("/dim", "expected a positive integer");
            None
        }
    };
    let mut facets = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    match obj.get("facets").and_then(Value::as_array) {
        None => c.push("/facets", "expected an array"),
        Some(items) => {
            for (i, item) in items.iter().enumerate() {
                let ptr = format!("/facets/{i}");
                let Some(f) = c.object(item, &ptr) else { continue };
                let normal: Option<Vec<i64>> = match f.get("normal").and_then(Value::as_array) {
                    Some(xs) => {
                        let ints: Option<Vec<i64>> = xs.iter().map(Value::as_i64).collect();
                        if ints.is_none() {
                            c.push(format!("{ptr}/normal"), "entries must be integers");
                        }
                        ints
                    }
                    None => {
                        c.push(format!("{ptr}/normal"), "expected an array of integers");
                        None
                    }
                };
                if let (Some(n), Some(d)) = (&normal, dim) {
                    if n.len() != d {
                        c.push(format!("{ptr}/normal"), format!("expected {d} entries, got {}", n.len()));
                    } else if n.iter().all(|&x| x == 0) {
                        c.push(format!("{ptr}/normal"), "normal is zero");
                    } else if !lattice::is_primitive(n) {
                        c.push(format!("{ptr}/normal"), "normal not primitive");
                    }
                }
                let offset = match f.get("offset") {
                    Some(v) => c.rational(v, &format!("{ptr}/offset")),
                    None => {
                        c.push(format!("{ptr}/offset"), "missing offset");
                        None
                    }
                };
                let label = match f.get("label") {
                    None | Some(Value::Null) => None,
                    Some(Value::String(s)) => {
                        if labels.contains(s) {
                            c.push(format!("{ptr}/label"), format!("duplicate label {s:?}"));
                        }
                        labels.push(s.clone());
                        Some(s.clone())
                    }
                    Some(_) => {
                        c.push(format!("{ptr}/label"), "expected a string");
                        None
                    }
                };
                if let (Some(normal), Some(offset)) = (normal, offset) {
                    facets.push(Facet { normal, offset, label });
                }
            }
        }
    }
    if !c.errors.is_empty() {
        return c.finish(unreachable_polytope());
    }
    DelzantPolytope::new(dim.unwrap_or(0), facets).map_err(|e| vec![geometry_error(&e)])
}

// Placeholder for error paths; `finish` never returns it.
fn unreachable_polytope() -> DelzantPolytope {
    crate::polytope::standard_simplex(1)
}

pub fn polytope_json(p: &DelzantPolytope) -> Value {
    let facets: Vec<Value> = p
        .facets()
        .iter()
        .map(|f| {
            let mut o = Map::new();
            o.insert("normal".into(), json!(f.normal));
            o.insert("offset".into(), rational_json(&f.offset));
            if let Some(l) = &f.label {
                o.insert("label".into(), json!(l));
            }
            Value::Object(o)
        })
        .collect();
    json!({ "dim": p.dim(), "facets": facets })
}

/// Parsed spectral input.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<SpectralPair>,
    pub scale: f64,
    pub coefficients: ModelCoefficients,
    /// Whether `coefficients` were given explicitly.
    pub explicit_coefficients: bool,
}

pub fn parse_spectrum(doc: &Value) -> Validated<Spectrum> {
    let mut c = Collector::default();
    let empty = Spectrum {
        pairs: Vec::new(),
        scale: 1.0,
        coefficients: ModelCoefficients::default(),
        explicit_coefficients: false,
    };
    let Some(obj) = c.object(doc, "") else { return c.finish(empty) };
    let scale = match obj.get("scale") {
        None => 1.0,
        Some(v) => match v.as_f64() {
            Some(s) if s > 0.0 && s.is_finite() => s,
            _ => {
                c.push("/scale", "expected a positive number");
                1.0
            }
        },
    };
    let mut coefficients = ModelCoefficients::default();
    let explicit_coefficients = obj.get("coefficients").is_some();
    if let Some(v) = obj.get("coefficients") {
        if let Some(co) = c.object(v, "/coefficients") {
            for (key, slot) in [
                ("quartic", &mut coefficients.quartic),
                ("mixed", &mut coefficients.mixed),
                ("linear", &mut coefficients.linear),
            ] {
                match co.get(key).map(Value::as_f64) {
                    None => {}
                    Some(Some(x)) if x.is_finite() => *slot = x,
                    Some(_) => c.push(format!("/coefficients/{key}"), "expected a number"),
                }
            }
            if coefficients.quartic == 0.0 {
                c.push("/coefficients/quartic", "must be nonzero");
            }
        }
    }
    let mut pairs = Vec::new();
    match obj.get("pairs").and_then(Value::as_array) {
        None => c.push("/pairs", "expected an array"),
        Some(items) => {
            for (i, item) in items.iter().enumerate() {
                let ptr = format!("/pairs/{i}");
                let Some(p) = c.object(item, &ptr) else { continue };
                let mut num = |key: &str| -> Option<f64> {
                    match p.get(key).and_then(Value::as_f64) {
                        Some(x) if x.is_finite() && x >= 0.0 => Some(x),
                        _ => {
                            c.push(format!("{ptr}/{key}"), "expected a nonnegative number");
                            None
                        }
                    }
                };
                let lambda = num("lambda");
                let mu = num("mu");
                let mult = match p.get("mult") {
                    None => Some(1),
                    Some(v) => match v.as_u64() {
                        Some(m) if m > 0 && m <= u32::MAX as u64 => Some(m as u32),
                        _ => {
                            c.push(format!("{ptr}/mult"), "expected a positive integer");
                            None
                        }
                    },
                };
                if let (Some(lambda), Some(mu), Some(multiplicity)) = (lambda, mu, mult) {
                    pairs.push(SpectralPair { lambda, mu, multiplicity, scale });
                }
            }
        }
    }
    c.finish(Spectrum { pairs, scale, coefficients, explicit_coefficients })
}

pub fn spectrum_json(s: &Spectrum) -> Value {
    let pairs: Vec<Value> = s
        .pairs
        .iter()
        .map(|p| json!({ "lambda": p.lambda, "mu": p.mu, "mult": p.multiplicity }))
        .collect();
    let mut o = json!({ "pairs": pairs, "scale": s.scale });
    if s.explicit_coefficients {
        o["coefficients"] = json!({
            "quartic": s.coefficients.quartic,
            "mixed": s.coefficients.mixed,
            "linear": s.coefficients.linear,
        });
    }
    o
}

pub fn parse_configuration(doc: &Value) -> Validated<MomentConfiguration> {
    let mut c = Collector::default();
    let placeholder = MomentConfiguration {
        n: 1,
        h_dim: 0,
        points: vec![],
        weights: vec![],
        t_basis: vec![],
        eval_matrix: None,
    };
    let Some(obj) = c.object(doc, "") else { return c.finish(placeholder) };
    let n = match obj.get("n").and_then(Value::as_u64) {
        Some(n) if n > 0 => n as usize,
        _ => {
            c.push("/n", "expected a positive integer");
            1
        }
    };
    let mut rows = |key: &str, required: bool| -> Option<Vec<Vec<Rational>>> {
        match obj.get(key) {
            None | Some(Value::Null) => {
                if required {
                    c.push(format!("/{key}"), "missing");
                }
                None
            }
            Some(v) => c.rational_rows(v, &format!("/{key}")),
        }
    };
    let points = rows("points", true).unwrap_or_default();
    let t_basis = rows("t_basis", true).unwrap_or_default();
    let eval_matrix = rows("eval_matrix", false);
    let weights = match obj.get("weights") {
        Some(v) => c.rational_vec(v, "/weights").unwrap_or_default(),
        None => {
            c.push("/weights", "missing");
            vec![]
        }
    };
    let h_dim = match obj.get("h_dim") {
        Some(v) => match v.as_u64() {
            Some(d) => d as usize,
            None => {
                c.push("/h_dim", "expected a nonnegative integer");
                0
            }
        },
        None => match points.first().or(t_basis.first()) {
            Some(v) => v.len(),
            None => {
                c.push("/h_dim", "cannot infer dim h without points or t_basis");
                0
            }
        },
    };
    if !c.errors.is_empty() {
        return c.finish(placeholder);
    }
    let cfg = MomentConfiguration { n, h_dim, points, weights, t_basis, eval_matrix };
    cfg.validate()
        .map(|_| cfg)
        .map_err(|e| vec![ValidationError { pointer: String::new(), message: e.to_string() }])
}

pub fn configuration_json(cfg: &MomentConfiguration) -> Value {
    let mut o = json!({
        "n": cfg.n,
        "h_dim": cfg.h_dim,
        "points": matrix_json(&cfg.points),
        "weights": vector_json(&cfg.weights),
        "t_basis": matrix_json(&cfg.t_basis),
    });
    if let Some(e) = &cfg.eval_matrix {
        o["eval_matrix"] = matrix_json(e);
    }
    o
}
