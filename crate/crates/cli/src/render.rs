//! JSON shapes and text renderings shared by the subcommands.

use serde_json::{json, Value};

use filiform::algebra::AlgebraRecord;
use filiform::strata::{Deferral, InvariantVector, NoReason, Verdict};
use filiform::verify::VerifyReport;

pub fn unsupported_json(region: &str, n: usize, deferral: Deferral) -> Value {
    json!({
        "unsupported": true,
        "stratum": region,
        "n": n,
        "reason": deferral.reason(),
    })
}

pub fn unsupported_text(v: &Value) -> String {
    format!(
        "unsupported: {} at n = {}: {}",
        v["stratum"].as_str().unwrap_or("?"),
        v["n"],
        v["reason"].as_str().unwrap_or("")
    )
}

fn joined<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

pub fn record_text(r: &AlgebraRecord) -> String {
    match r {
        AlgebraRecord::First(p) => format!("n={} first alpha=({}) theta={}", p.n(), joined(p.alphas()), p.theta()),
        AlgebraRecord::Second(p) => format!("n={} second beta=({}) gamma={}", p.n(), joined(p.betas()), p.gamma()),
    }
}

pub fn invariants_text(v: &InvariantVector) -> String {
    let mut lines = vec![format!("stratum {} n={}", v.stratum, v.n)];
    for (k, c) in v.components.iter().enumerate() {
        lines.push(format!("rho_{} = {c}", v.first_index + k));
    }
    lines.join("\n")
}

pub fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Yes { witness } => format!("yes: witness A={} B={}", witness.a(), witness.b()),
        Verdict::No(NoReason::InvariantMismatch { index, left, right }) => {
            format!("no: rho_{index} differs ({left} vs {right})")
        }
        Verdict::No(NoReason::DifferentStrata { left, right }) => {
            format!("no: different strata ({left} vs {right})")
        }
        Verdict::Unsupported { region, deferral } => format!("unsupported: {region}: {}", deferral.reason()),
    }
}

pub fn report_text(r: &VerifyReport) -> String {
    let mut lines = vec![format!("seed {} trials {} nmax {}", r.seed, r.trials, r.nmax)];
    for s in &r.suites {
        let status = if s.passed() { "ok" } else { "FAILED" };
        lines.push(format!("{:<16} {:>7} checks {:>4} failed  {status}", s.name, s.checks, s.failed));
        for f in &s.failures {
            lines.push(format!("    {f}"));
        }
    }
    lines.push(if r.passed() { "all suites passed".into() } else { "some suites failed".into() });
    lines.join("\n")
}
