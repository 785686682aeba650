//! Machine-readable analysis reports: the decision verdict, the boundary
//! classification, optional numerical oracle runs, and a conflict flag that
//! is raised whenever the oracle contradicts the symbolic verdict.
//!
//! JSON encoding notes: exact rationals are encoded as "p/q" strings, and
//! infinite oracle errors (no return observed) as null.

use std::time::Instant;

use serde_json::{json, Value};

use crate::branches::{boundedness_direction, BranchContext, Boundedness};
use crate::criteria::{
    decide_global_center, CondStatus, LienardSystem, ToleranceOptions, Verdict, VerdictKind,
};
use crate::flow::{
    closure_test, escape_probe, time_reversed, ClosureReport, EscapeReport, FlowError,
    IntegratorConfig,
};
use crate::infinity::{classify_infinity, normalize, InfinityClass, NormalizedIndices};

pub const SCHEMA: &str = "liencenter-report/1";

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub seeds: Vec<f64>,
    pub closure: ClosureReport,
    /// Escape probes run only when a boundedness direction was computed.
    pub escape_forward: Option<EscapeReport>,
    pub escape_backward: Option<EscapeReport>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub indices: NormalizedIndices,
    pub infinity: InfinityClass,
    pub boundedness: Option<Boundedness>,
    pub oracle: Option<OracleOutcome>,
    pub oracle_conflict: bool,
    pub decide_ms: f64,
    pub oracle_ms: f64,
    f_str: String,
    g_str: String,
    r: usize,
    s: usize,
}

/// Run the symbolic pipeline: verdict, boundary classification, and (when
/// conditions (i) through (iii) hold) the boundedness direction.
pub fn analyze(sys: &LienardSystem, opts: &ToleranceOptions) -> Report {
    let t0 = Instant::now();
    let verdict = decide_global_center(sys, opts);
    let indices = normalize(sys);
    let infinity = classify_infinity(&indices).expect("nonzero f, g always classify");
    // (ii) and (ii*) are mutually exclusive: exactly one passes for any
    // local-center candidate.
    let early_pass = verdict.report.cond_i.status == CondStatus::Pass
        && (verdict.report.cond_ii.status == CondStatus::Pass
            || verdict.report.cond_ii_star.status == CondStatus::Pass)
        && verdict.report.cond_iii.status == CondStatus::Pass;
    let boundedness = if early_pass {
        let ctx = BranchContext::new(sys.clone()).expect("condition (i) verified");
        boundedness_direction(&ctx).ok()
    } else {
        None
    };
    let decide_ms = t0.elapsed().as_secs_f64() * 1e3;
    Report {
        verdict,
        indices,
        infinity,
        boundedness,
        oracle: None,
        oracle_conflict: false,
        decide_ms,
        oracle_ms: 0.0,
        f_str: sys.f().to_string(),
        g_str: sys.g().to_string(),
        r: sys.r(),
        s: sys.s(),
    }
}

/// Like analyze, then cross-validate with the return-map oracle: closure at
/// each seed amplitude, plus forward/backward escape probes when a
/// boundedness direction is on record. Sets oracle_conflict when the orbits
/// contradict the verdict.
pub fn analyze_with_oracle(
    sys: &LienardSystem,
    opts: &ToleranceOptions,
    seeds: &[f64],
    cfg: &IntegratorConfig,
    n_crossings: usize,
) -> Result<Report, FlowError> {
    let mut rep = analyze(sys, opts);
    let t0 = Instant::now();
    let closure = closure_test(sys, seeds, cfg)?;
    let (mut fwd, mut bwd) = (None, None);
    if rep.boundedness.is_some() {
        if let Some(&y0) = seeds.last() {
            fwd = Some(escape_probe(sys, y0, n_crossings, cfg)?);
            bwd = Some(escape_probe(&time_reversed(sys), y0, n_crossings, cfg)?);
        }
    }
    rep.oracle_conflict = oracle_conflicts(&rep.verdict.kind, &closure, rep.boundedness, &fwd, &bwd);
    rep.oracle = Some(OracleOutcome {
        seeds: seeds.to_vec(),
        closure,
        escape_forward: fwd,
        escape_backward: bwd,
    });
    rep.oracle_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

/// A conflict is an oracle observation that disproves the verdict, not a mere
/// absence of confirmation: a global-center verdict with a non-closing orbit,
/// or an escape probe on the wrong side of the recorded boundedness
/// direction. Sampled closure of a NotGlobalCenter system is not a conflict
/// (the sampled amplitudes may all sit inside a local center).
fn oracle_conflicts(
    kind: &VerdictKind,
    closure: &ClosureReport,
    boundedness: Option<Boundedness>,
    fwd: &Option<EscapeReport>,
    bwd: &Option<EscapeReport>,
) -> bool {
    if matches!(kind, VerdictKind::GlobalCenterLinear | VerdictKind::GlobalCenterNilpotent)
        && !closure.closed
    {
        return true;
    }
    if let Some(dir) = boundedness {
        let expect = match dir {
            Boundedness::AllBounded => (true, true),
            Boundedness::PositivelyBounded => (true, false),
            Boundedness::NegativelyBounded => (false, true),
        };
        if let Some(f) = fwd {
            if f.bounded != expect.0 {
                return true;
            }
        }
        if let Some(b) = bwd {
            if b.bounded != expect.1 {
                return true;
            }
        }
    }
    false
}

fn float_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn escape_json(e: &EscapeReport) -> Value {
    json!({ "bounded": e.bounded, "radii": e.radii })
}

impl Report {
    pub fn to_json(&self) -> Value {
        let oracle = self.oracle.as_ref().map(|o| {
            json!({
                "seeds": o.seeds,
                "closure": {
                    "closed": o.closure.closed,
                    "max_error": float_or_null(o.closure.max_error),
                    "errors": o.closure.errors.iter().map(|&e| float_or_null(e)).collect::<Vec<_>>(),
                },
                "escape_forward": o.escape_forward.as_ref().map(escape_json),
                "escape_backward": o.escape_backward.as_ref().map(escape_json),
            })
        });
        json!({
            "schema": SCHEMA,
            "system": {
                "f": self.f_str,
                "g": self.g_str,
                "indices": {
                    "r": self.r,
                    "s": self.s,
                    "m": self.indices.m,
                    "n": self.indices.n,
                },
            },
            "verdict": {
                "kind": self.verdict.kind.as_str(),
                "reasons": self.verdict.reasons,
                "conditions": self.verdict.report.to_json(),
            },
            "infinity": {
                "regime": self.indices.regime.as_str(),
                "epsilon": self.indices.epsilon.to_string(),
                "figure_ref": self.infinity.figure_ref,
                "connection_at_infinity": self.infinity.connection_at_infinity,
                "equilibria": self.infinity.equilibria.iter().map(|e| json!({
                    "name": e.name,
                    "kind": e.kind,
                    "sectors": e.sectors,
                })).collect::<Vec<_>>(),
            },
            "boundedness": self.boundedness.map(|b| b.as_str()),
            "oracle": oracle,
            "oracle_conflict": self.oracle_conflict,
            "timings_ms": { "decide": self.decide_ms, "oracle": self.oracle_ms },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("system: x' = y, y' = -g(x) - f(x) y\n"));
        out.push_str(&format!("  g(x) = {}\n", self.g_str));
        out.push_str(&format!("  f(x) = {}\n", self.f_str));
        out.push_str(&format!("verdict: {}\n", self.verdict.kind.as_str()));
        for r in &self.verdict.reasons {
            out.push_str(&format!("  - {r}\n"));
        }
        let rep = &self.verdict.report;
        out.push_str("conditions:\n");
        for (name, e) in [
            ("i", &rep.cond_i),
            ("ii", &rep.cond_ii),
            ("ii*", &rep.cond_ii_star),
            ("iii", &rep.cond_iii),
            ("iv", &rep.cond_iv),
        ] {
            out.push_str(&format!("  ({name}) {}", e.status.as_str()));
            if let Some(w) = &e.witness {
                out.push_str(&format!("  [{w}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "infinity: {} (regime {}, epsilon = {}), connection_at_infinity = {}\n",
            self.infinity.figure_ref,
            self.indices.regime.as_str(),
            self.indices.epsilon,
            self.infinity.connection_at_infinity
        ));
        for e in &self.infinity.equilibria {
            out.push_str(&format!("  {}: {}\n", e.name, describe_equilibrium(e)));
        }
        if let Some(b) = self.boundedness {
            out.push_str(&format!("boundedness: {}\n", b.as_str()));
        }
        if let Some(o) = &self.oracle {
            out.push_str(&format!(
                "oracle: closure {} (max error {})\n",
                if o.closure.closed { "CLOSED" } else { "NOT CLOSED" },
                fmt17(o.closure.max_error)
            ));
            for (s, e) in o.seeds.iter().zip(&o.closure.errors) {
                out.push_str(&format!("  y0 = {}: |return - y0| = {}\n", fmt17(*s), fmt17(*e)));
            }
            if let Some(f) = &o.escape_forward {
                out.push_str(&format!(
                    "  forward escape probe: {}\n",
                    if f.bounded { "bounded" } else { "unbounded" }
                ));
            }
            if let Some(b) = &o.escape_backward {
                out.push_str(&format!(
                    "  backward escape probe: {}\n",
                    if b.bounded { "bounded" } else { "unbounded" }
                ));
            }
            out.push_str(&format!(
                "oracle_conflict: {}\n",
                if self.oracle_conflict { "YES" } else { "no" }
            ));
        }
        out.push_str(&format!(
            "timings: decide {:.3} ms, oracle {:.3} ms\n",
            self.decide_ms, self.oracle_ms
        ));
        out
    }
}

fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "inf".to_string()
    }
}

/// One-line description of a boundary equilibrium from whichever of the
/// kind / sector fields are populated.
pub fn describe_equilibrium(e: &crate::infinity::EquilibriumInfo) -> String {
    match (e.kind.is_empty(), e.sectors.is_empty()) {
        (false, false) => format!("{} ({})", e.kind, e.sectors),
        (false, true) => e.kind.clone(),
        (true, false) => e.sectors.clone(),
        (true, true) => "equilibrium".to_string(),
    }
}
