//! Structured reports with a fixed key order and exact integers.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::divisor::{CartierData, ClassGroup, DivisorClass, GorensteinReport, MultisectionClassGroup};
use crate::error::Error;
use crate::fan::Fan;
use crate::frobenius::{FfrtClassSet, FrobeniusDecomposition};
use crate::graded::{
    DiagonalAction, IdealHeight, QuasiGorenstein, Smallness, SurjectivityReport, VeroneseReport,
};
use crate::lattice::{FgAbelianGroup, GroupElement, IntegerMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Option<Value>,
    pub error: Option<Error>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn success(command: &str, inputs: Value, results: Value, warnings: Vec<String>) -> Self {
        Self {
            command: command.to_owned(),
            inputs,
            results: Some(results),
            error: None,
            warnings,
        }
    }

    pub fn failure(command: &str, inputs: Value, error: Error) -> Self {
        Self {
            command: command.to_owned(),
            inputs,
            results: None,
            error: Some(error),
            warnings: Vec::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs".into(), self.inputs.clone());
        m.insert("results".into(), self.results.clone().unwrap_or(Value::Null));
        if let Some(e) = &self.error {
            m.insert("error".into(), json!({ "kind": e.kind(), "message": e.to_string() }));
        }
        m.insert("warnings".into(), json!(self.warnings));
        Value::Object(m)
    }

    /// Pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }

    /// Indented `key: value` listing of the report.
    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        if let Some(r) = &self.results {
            write_text(&mut out, r, 0);
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn write_text(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar_like(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write_text(out, x, depth + 1);
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_scalar_like(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    write_text(out, x, depth + 1);
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", inline(x))),
    }
}

fn is_scalar_like(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn int(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn group(g: &FgAbelianGroup) -> Value {
    json!({
        "rank": g.rank(),
        "torsion": ints(g.torsion()),
        "display": g.to_string(),
    })
}

pub fn element(x: &GroupElement) -> Value {
    json!({ "free": ints(&x.free), "torsion": ints(&x.torsion) })
}

pub fn class(c: &DivisorClass) -> Value {
    element(&c.0)
}

/// Columns of the matrix, each as an integer array.
pub fn columns(m: &IntegerMatrix) -> Value {
    Value::Array((0..m.cols()).map(|j| ints(&m.column(j))).collect())
}

pub fn fan_summary(fan: &Fan) -> Value {
    json!({
        "rank": fan.rank(),
        "rays": fan.rays(),
        "max_cones": fan.max_cones(),
    })
}

pub fn class_group(fan: &Fan, cg: &ClassGroup) -> Value {
    let smooth = fan.is_smooth();
    json!({
        "class_group": group(&cg.group),
        "ray_classes": cg.ray_classes.iter().map(class).collect::<Vec<_>>(),
        "smooth": smooth.smooth,
        "smooth_cones": smooth.per_cone,
        "rays_span_lattice": fan.rays_span_dual(),
    })
}

pub fn canonical(fan: &Fan, g: &GorensteinReport) -> Value {
    json!({
        "divisor": vec![-1; fan.ray_count()],
        "class": class(&g.canonical_class),
        "principal": g.canonical_is_principal,
        "principal_witness": g.principal_witness.as_deref().map(ints),
        "cartier": g.canonical_is_cartier,
        "quasi_gorenstein_charts": g.quasi_gorenstein_affine_charts,
    })
}

pub fn cartier(divisor: &[BigInt], c: &DivisorClass, principal: bool, data: &CartierData) -> Value {
    json!({
        "divisor": ints(divisor),
        "class": class(c),
        "principal": principal,
        "cartier": data.cartier,
        "local_equations": data
            .per_cone
            .iter()
            .map(|m| m.as_deref().map(ints))
            .collect::<Vec<_>>(),
    })
}

pub fn frobenius(d: &FrobeniusDecomposition) -> Value {
    let summands: Vec<Value> = d
        .summands
        .iter()
        .map(|(c, m)| json!({ "class": ints(&c.0.free), "multiplicity": m }))
        .collect();
    json!({
        "p": d.p,
        "e": d.e,
        "source": ints(&d.source.0.free),
        "total_rank": Value::Number(Number::from_str(&d.total_rank().to_string()).expect("integer")),
        "summands": summands,
    })
}

pub fn ffrt(set: &FfrtClassSet) -> Value {
    json!({
        "count": set.classes.len(),
        "classes": set.classes.iter().map(|c| ints(&c.0.free)).collect::<Vec<_>>(),
    })
}

pub fn multisection(cl_y: &FgAbelianGroup, m: &MultisectionClassGroup) -> Value {
    json!({
        "cl_y": group(cl_y),
        "images": m.images.iter().map(class).collect::<Vec<_>>(),
        "unit_characters": {
            "rank": m.kernel.rank(),
            "basis": columns(&m.kernel_basis),
        },
        "class_group": group(&m.cl_x),
    })
}

pub fn action(a: &DiagonalAction) -> Value {
    json!({
        "group": group(a.group()),
        "weights": a.weights().iter().map(element).collect::<Vec<_>>(),
        "weight_sum": element(&a.weight_sum()),
        "faithful": a.is_faithful(),
    })
}

pub fn smallness(s: &Smallness) -> Value {
    json!({
        "level": s.level,
        "non_free_codim": s.non_free_codim,
        "small": s.small,
    })
}

pub fn quasi_gorenstein(q: &QuasiGorenstein) -> Value {
    json!({
        "quasi_gorenstein": q.quasi_gorenstein,
        "a_invariant": q.a_invariant,
    })
}

pub fn veronese(v: &VeroneseReport) -> Value {
    json!({
        "n": v.n,
        "d": v.d,
        "class_group": group(&v.class_group),
        "quasi_gorenstein": v.quasi_gorenstein,
        "a_invariant": v.a_invariant,
    })
}

pub fn height(h: &IdealHeight) -> Value {
    json!({
        "height": h.height,
        "zero_ideal": h.zero_ideal,
        "hitting_set": h.hitting_set.iter().map(|i| i + 1).collect::<Vec<_>>(),
    })
}

pub fn surjectivity(r: &SurjectivityReport) -> Value {
    json!({
        "surjective": r.surjective,
        "bound": r.bound,
        "degree_cap": r.degree_cap,
        "degrees_sampled": r.sample_size,
        "pairs_checked": r.pairs_checked,
        "witness": r.witness.as_ref().map(|w| json!({
            "lambda": w.lambda,
            "lambda_prime": w.lambda_prime,
            "monomial": w.monomial,
        })),
    })
}
