//! Library side of the `jetbound` command: report documents, the case
//! runner and the text renderings. `main.rs` only parses arguments.

use std::fmt::Write as _;

use jetbound::boundengine::BoundReport;
use jetbound::catalog::{run_spec, CaseSpec, CatalogError, Confidence, Pipeline};
use jetbound::exactmath::Factored;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Documentation of the case-file format, printed by `jetbound schema`.
pub const CASE_SCHEMA: &str = include_str!("../../../docs/case-schema.md");

/// Machine-readable output of `run`, `table` and `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub schema_version: u32,
    pub cases: Vec<BoundReport>,
}

impl ReportDocument {
    /// Builds a document with reports sorted by case id.
    pub fn new(mut cases: Vec<BoundReport>) -> Self {
        cases.sort_by(|a, b| a.case_id.cmp(&b.case_id));
        ReportDocument { schema_version: SCHEMA_VERSION, cases }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Outcome of one case.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub spec: CaseSpec,
    pub result: Result<BoundReport, CatalogError>,
}

/// Runs cases on `workers` threads (1 runs inline). The result is sorted
/// by case id whatever the worker count.
pub fn run_cases(specs: &[CaseSpec], workers: usize) -> Vec<CaseOutcome> {
    let run = |s: &CaseSpec| CaseOutcome { spec: s.clone(), result: run_spec(s) };
    let mut out: Vec<CaseOutcome> = if workers > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(|| specs.par_iter().map(run).collect()),
            Err(_) => specs.iter().map(run).collect(),
        }
    } else {
        specs.iter().map(run).collect()
    };
    out.sort_by(|a, b| a.spec.id.cmp(&b.spec.id));
    out
}

/// Verdict of `verify` for one case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// A cited case that does not match, accepted by --allow-cited-mismatch.
    Waived,
    Fail,
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Waived => "WAIVED",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Waived)
    }
}

pub fn verdict(outcome: &CaseOutcome, allow_cited_mismatch: bool) -> Verdict {
    match &outcome.result {
        Err(_) => Verdict::Error,
        Ok(r) if r.matches => Verdict::Pass,
        Ok(_) if allow_cited_mismatch && outcome.spec.confidence == Confidence::Cited => Verdict::Waived,
        Ok(_) => Verdict::Fail,
    }
}

/// `2^11·3^4·7 (1161216)`.
pub fn factored_with_value(f: &Factored) -> String {
    format!("{f} ({})", f.value())
}

fn bound_text(r: &BoundReport) -> String {
    match &r.final_bound {
        Some(f) => factored_with_value(f),
        None => "infinite".to_string(),
    }
}

/// Names the first intermediate that disagrees with the case's pinned
/// values, or the final value when nothing pinned disagrees.
pub fn diagnose(spec: &CaseSpec, r: &BoundReport) -> String {
    if let Some(want) = spec.pinned.as_ref().and_then(|p| p.cokernels.as_ref()) {
        if want.len() != r.per_degree.len() {
            return format!("expected {} degrees with cokernels {want:?}, computed {}", want.len(), r.per_degree.len());
        }
        for (d, w) in r.per_degree.iter().zip(want) {
            let got = d.cokernel.to_string();
            if got != w.to_string() {
                return format!(
                    "first failing intermediate: l = {}, matrix {:?}, divisors {:?}, i_l = {got}, expected {w}",
                    d.l,
                    d.matrix.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    d.divisors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                );
            }
        }
    }
    if let (Some(want), Some(got)) = (spec.pinned.as_ref().and_then(|p| p.chern), &r.chern_factor) {
        let got = got.0.magnitude().to_string();
        if got != want.to_string() {
            return format!("first failing intermediate: Chern number {got}, expected {want}");
        }
    }
    if !r.finite {
        return "bound is infinite: some f_l is not of full rank".to_string();
    }
    format!("final bound {}, expected {}", bound_text(r), factored_with_value(&r.expected))
}

/// Lines printed by `verify`, plus whether every case is acceptable.
pub fn verify_lines(outcomes: &[CaseOutcome], allow_cited_mismatch: bool) -> (Vec<String>, bool) {
    let mut lines = Vec::new();
    let mut ok = true;
    for o in outcomes {
        let v = verdict(o, allow_cited_mismatch);
        ok &= v.is_ok();
        let detail = match &o.result {
            Err(e) => e.to_string(),
            Ok(r) if v == Verdict::Pass => bound_text(r),
            Ok(r) => diagnose(&o.spec, r),
        };
        lines.push(format!("{:<6} {:<24} {detail}", v.label(), o.spec.id));
    }
    let passed = outcomes.iter().filter(|o| verdict(o, allow_cited_mismatch) == Verdict::Pass).count();
    lines.push(format!("{passed}/{} cases pass", outcomes.len()));
    (lines, ok)
}

/// One line per case for `list`.
pub fn list_lines(specs: &[CaseSpec]) -> Vec<String> {
    specs
        .iter()
        .map(|s| {
            let pipeline = match s.pipeline {
                Pipeline::Homogeneous => "homogeneous",
                Pipeline::Cone => "cone",
                Pipeline::Explicit => "explicit",
                Pipeline::Formula => "formula",
            };
            let conf = match s.confidence {
                Confidence::Derived => "",
                Confidence::Cited => " [cited]",
            };
            format!("{:<24} {:<12} {}{conf}  {}", s.id, pipeline, s.expected, s.description)
        })
        .collect()
}

/// Two-column table of theorem items and their computed bounds.
pub fn table_text(outcomes: &[CaseOutcome]) -> String {
    let rows: Vec<(String, String)> = outcomes
        .iter()
        .filter(|o| o.spec.id.starts_with("thm"))
        .map(|o| {
            let value = match &o.result {
                Ok(r) if r.matches => bound_text(r),
                Ok(r) => format!("{}  [expected {}]", bound_text(r), r.expected),
                Err(e) => format!("error: {e}"),
            };
            (o.spec.id.clone(), value)
        })
        .collect();
    let w = rows.iter().map(|(a, _)| a.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(out, "{:<w$}  bound", "case");
    let _ = writeln!(out, "{}  {}", "-".repeat(w), "-".repeat(5));
    for (a, b) in rows {
        let _ = writeln!(out, "{a:<w$}  {b}");
    }
    out
}

/// Human-readable rendering of one report for `run`.
pub fn report_text(spec: &CaseSpec, r: &BoundReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case      {}", r.case_id);
    if !spec.description.is_empty() {
        let _ = writeln!(out, "          {}", spec.description);
    }
    for d in &r.per_degree {
        let rows: Vec<String> = d
            .matrix
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let divs: Vec<String> = d.divisors.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "l = {:<3}  f_l = [{}]  divisors [{}]  i_l = {}", d.l, rows.join(", "), divs.join(", "), d.cokernel);
    }
    if let Some(p) = &r.cokernel_product {
        let _ = writeln!(out, "product   {p}");
    }
    if let Some(b) = &r.base_value {
        let _ = writeln!(out, "start     {}", factored_with_value(b));
    }
    if let Some(c) = &r.chern_factor {
        let _ = writeln!(out, "chern     {}", c.0);
    }
    for t in &r.transforms {
        let _ = writeln!(out, "{:<9} {:<6} -> {}", t.transform.to_string(), t.effect, factored_with_value(&t.value));
    }
    let _ = writeln!(out, "final     {}", bound_text(r));
    let _ = writeln!(out, "expected  {}", factored_with_value(&r.expected));
    let _ = writeln!(out, "match     {}", r.matches);
    for n in &r.notes {
        let _ = writeln!(out, "note      {n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetbound::catalog::{find_case, list_cases};

    #[test]
    fn document_sorts_by_case_id() {
        let specs: Vec<CaseSpec> =
            ["thmA-d3", "thmA-d2"].iter().map(|id| find_case(jetbound::catalog::builtin_cases(), id).unwrap().clone()).collect();
        let outcomes = run_cases(&specs, 1);
        let doc = ReportDocument::new(outcomes.into_iter().map(|o| o.result.unwrap()).collect());
        let ids: Vec<&str> = doc.cases.iter().map(|c| c.case_id.as_str()).collect();
        assert_eq!(ids, ["thmA-d2", "thmA-d3"]);
    }

    #[test]
    fn cited_mismatch_is_waived_only_on_request() {
        let spec = list_cases().into_iter().find(|c| c.confidence == Confidence::Cited).unwrap();
        let mut report = run_spec(&find_case(jetbound::catalog::builtin_cases(), "thmA-d3").unwrap().clone()).unwrap();
        report.matches = false;
        let o = CaseOutcome { spec, result: Ok(report) };
        assert_eq!(verdict(&o, false), Verdict::Fail);
        assert_eq!(verdict(&o, true), Verdict::Waived);
    }

    #[test]
    fn factored_text_carries_the_plain_value() {
        assert_eq!(factored_with_value(&"2^11·3^4·7".parse().unwrap()), "2^11·3^4·7 (1161216)");
    }
}
