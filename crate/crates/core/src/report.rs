//! Machine-readable report schema: top-level {command, input, options,
//! result, diagnostics}, with zeta functions as sorted [{d, nu}] arrays and
//! rationals rendered as exact strings. Field order is fixed by the struct
//! declarations, so byte-identical inputs produce byte-identical reports.

use serde::Serialize;
use serde_json::{json, Value};

use crate::blowup::Pullback;
use crate::certify::{BlowAdeReport, PointOutcome, SameType};
use crate::curve::AdeType;
use crate::deform::{MuStarTriple, StabilityVerdict};
use crate::error::Error;
use crate::zeta::ZetaFunction;

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub options: ReportOptions,
    pub result: Value,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Serialize, Default)]
pub struct ReportOptions {
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_blow_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub points: Vec<String>,
    pub format: String,
}

#[derive(Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
}

impl Diagnostic {
    pub fn from_error(e: &Error) -> Self {
        Diagnostic { kind: e.kind().to_string(), message: e.to_string() }
    }

    pub fn note(message: impl Into<String>) -> Self {
        Diagnostic { kind: "note".into(), message: message.into() }
    }
}

pub fn zeta_value(z: &ZetaFunction) -> Value {
    Value::Array(
        z.factors()
            .map(|(d, nu)| json!({"d": d, "nu": nu}))
            .collect(),
    )
}

pub fn ade_value(t: &AdeType) -> Value {
    match t.index() {
        Some(n) => json!({"family": t.family_str(), "index": n}),
        None => json!({"family": t.family_str()}),
    }
}

fn point_value(o: &PointOutcome) -> Value {
    let coords: Vec<String> = o.report.point.coords.iter().map(|c| c.to_string()).collect();
    let mut v = serde_json::Map::new();
    v.insert("coords".into(), json!(coords));
    v.insert("chart".into(), json!(o.report.chart));
    if let Some(t) = &o.report.ade {
        v.insert("type".into(), ade_value(t));
    }
    if let Some(m) = o.report.milnor {
        v.insert("milnor".into(), json!(m));
    }
    if let Some(p) = &o.principal {
        v.insert("m".into(), json!(p.m));
        v.insert("c".into(), json!(p.c.to_string()));
        v.insert("h".into(), json!(p.h.to_string_with(["x1", "x2", "x3"])));
    }
    if let Some(z) = &o.local_zeta {
        v.insert("local_zeta".into(), zeta_value(z));
    }
    if let Some(e) = &o.failure {
        v.insert("failure".into(), json!({"kind": e.kind(), "message": e.to_string()}));
    }
    Value::Object(v)
}

pub fn blow_ade_value(r: &BlowAdeReport) -> Value {
    json!({
        "is_blow_ade": r.is_blow_ade,
        "blow_order": r.blow_order,
        "d": r.d,
        "k0": r.k0,
        "mu_tot": r.mu_tot,
        "subtype": {
            "pure_blow_A1": r.subtype.pure_blow_a1,
            "blow_A": r.subtype.blow_a,
            "even_blow_A": r.subtype.even_blow_a,
            "general_ADE": r.subtype.general_ade,
        },
        "le_yomdin": r.le_yomdin,
        "zeta": r.global_zeta.as_ref().map(zeta_value),
        "points": r.points.iter().map(point_value).collect::<Vec<_>>(),
        "failures": r.failures,
        "user_points_supplied": r.user_points_supplied,
    })
}

pub fn mu_star_value(m: &MuStarTriple) -> Value {
    json!({
        "mu3": m.mu3,
        "mu2": m.mu2,
        "mu1": m.mu1,
        "mu2_note": m.mu2_note,
        "seed": m.seed,
        "trials": m.trials,
    })
}

pub fn pullback_value(p: &Pullback) -> Value {
    json!({
        "chart": p.chart.index,
        "order": p.order,
        "pullback": p.total.to_string_with(["y1", "y2", "y3"]),
        "strict_transform": p.strict.to_string_with(["y1", "y2", "y3"]),
    })
}

pub fn same_type_value(s: &SameType) -> Value {
    json!({
        "same_type": s.equal,
        "matching": s.matching,
    })
}

pub fn verdict_value(v: &StabilityVerdict) -> Value {
    let samples: Vec<Value> = v
        .samples
        .iter()
        .map(|o| {
            let mut m = serde_json::Map::new();
            m.insert("s".into(), json!(o.s.to_string()));
            match &o.report {
                Ok(r) => {
                    m.insert("report".into(), blow_ade_value(r));
                }
                Err(e) => {
                    m.insert(
                        "error".into(),
                        json!({"kind": e.kind(), "message": e.to_string()}),
                    );
                }
            }
            if let Some(ms) = &o.mu_star {
                m.insert("mu_star".into(), mu_star_value(ms));
            } else {
                m.insert("mu_star".into(), json!("skipped"));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "constant_flags": {
            "reduced": v.flags.reduced,
            "mu_tot": v.flags.mu_tot,
            "k0": v.flags.k0,
            "signature": v.flags.signature,
            "zeta": v.flags.zeta,
            "mu_star": v.flags.mu_star.map(|b| json!(b)).unwrap_or(json!("skipped")),
        },
        "first_violation": v.first_violation.as_ref().map(|(s, flag)| {
            json!({"s": s.to_string(), "flag": flag})
        }),
        "samples": samples,
        "seed": v.seed,
        "trials": v.trials,
    })
}

/// Human-readable rendering of a certification report.
pub fn blow_ade_text(r: &BlowAdeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "blow-ADE: {}\n",
        if r.is_blow_ade { "certified" } else { "not certified" }
    ));
    out.push_str(&format!("order d = {}, k0 = {} singular points\n", r.d, r.k0));
    if let Some(m) = r.blow_order {
        out.push_str(&format!("blow-order m = {}\n", m));
    }
    if let Some(mu) = r.mu_tot {
        out.push_str(&format!("total Milnor number = {}\n", mu));
    }
    out.push_str(&format!(
        "subtype: pure_blow_A1={} blow_A={} even_blow_A={} general_ADE={}\n",
        r.subtype.pure_blow_a1, r.subtype.blow_a, r.subtype.even_blow_a, r.subtype.general_ade
    ));
    if let Some(ly) = r.le_yomdin {
        out.push_str(&format!("Le-Yomdin: {}\n", ly));
    }
    if let Some(z) = &r.global_zeta {
        out.push_str(&format!("zeta: {}\n", z));
    }
    for p in &r.points {
        let t = p
            .report
            .ade
            .as_ref()
            .map(|t| t.to_string())
            .unwrap_or_else(|| "?".into());
        let extra = match &p.principal {
            Some(pr) => format!(" m={} c={}", pr.m, pr.c),
            None => String::new(),
        };
        out.push_str(&format!(
            "  point {} (chart {}): {}{}\n",
            p.report.point, p.report.chart, t, extra
        ));
        if let Some(e) = &p.failure {
            out.push_str(&format!("    failure: {}\n", e));
        }
    }
    for f in &r.failures {
        out.push_str(&format!("  ! {}\n", f));
    }
    out
}
