//! Reports and batch runs behind the `detpure` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use detpure::hseries::{self, HVector};
use detpure::level;
use detpure::pure_osequence::{self, PurityVerdict, SearchLimits};
use detpure::{enumerate, DegreeMatrix, Result};

/// Everything computed for one degree matrix. Quantities of the scheme are
/// taken from the zero-reduced matrix, which defines the same scheme.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub matrix: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Vec<Vec<i64>>>,
    pub t: usize,
    pub c: usize,
    pub h: HVector,
    pub tau: i64,
    pub last_entry: u128,
    pub r: usize,
    pub equal_rows: bool,
    pub level: bool,
    pub socle_shifts: Vec<i64>,
    pub log_concave: bool,
    pub flawless: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flawless_violation: Option<usize>,
    pub o_sequence: bool,
    pub purity: PurityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

pub fn analyze(a: &DegreeMatrix, limits: &SearchLimits) -> Result<AnalysisReport> {
    let start = Instant::now();
    let reduced = a.reduce_zeros();
    let h = hseries::h_recursive(&reduced)?;
    let violation = hseries::is_flawless(&h);
    let report = AnalysisReport {
        matrix: a.to_rows(),
        reduced: (reduced != *a).then(|| reduced.to_rows()),
        t: reduced.t(),
        c: reduced.c(),
        tau: hseries::tau(&reduced),
        last_entry: hseries::last_entry(&reduced),
        r: reduced.max_equal_rows(),
        equal_rows: reduced.has_equal_rows(),
        level: level::is_level(&reduced),
        socle_shifts: level::socle_shifts(&reduced).as_slice().to_vec(),
        log_concave: hseries::is_log_concave(&h),
        flawless: violation.is_none(),
        flawless_violation: violation,
        o_sequence: hseries::is_osequence(&h),
        purity: pure_osequence::purity_of_matrix(&reduced, limits)?,
        h,
        elapsed_ms: Some((start.elapsed().as_secs_f64() * 1e6).round() / 1e3),
    };
    Ok(report)
}

impl AnalysisReport {
    /// Cross-checks between independently computed fields.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let mut problems = Vec::new();
        if self.tau != self.h.degree() as i64 {
            problems.push(format!("tau {} but degree {}", self.tau, self.h.degree()));
        }
        if self.last_entry != self.h.last() as u128 {
            problems.push(format!(
                "last entry {} but h ends in {}",
                self.last_entry,
                self.h.last()
            ));
        }
        if self.c >= 2 && self.level != self.equal_rows {
            problems.push("level flag differs from equal-rows flag".into());
        }
        if self.socle_shifts.first().copied() != Some(self.tau + self.c as i64) {
            problems.push("largest socle shift is not tau + c".into());
        }
        if !self.o_sequence {
            problems.push("h-vector is not an O-sequence".into());
        }
        if self.equal_rows && !(self.log_concave && self.flawless && self.purity.is_pure()) {
            problems.push("equal rows without a log-concave, flawless, pure h-vector".into());
        }
        if let PurityVerdict::Pure { witness, .. } = &self.purity {
            if !pure_osequence::verify_witness(&self.h, witness) {
                problems.push("purity witness does not generate h".into());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems.join("; "))
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let rows = |m: &[Vec<i64>]| {
            m.iter()
                .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" / ")
        };
        let _ = writeln!(out, "matrix        {}", rows(&self.matrix));
        if let Some(reduced) = &self.reduced {
            let _ = writeln!(out, "reduced       {}", rows(reduced));
        }
        let _ = writeln!(out, "size          t={} c={}", self.t, self.c);
        let _ = writeln!(out, "h-vector      {}", self.h);
        let _ = writeln!(out, "socle degree  {}", self.tau);
        let _ = writeln!(out, "last entry    {}", self.last_entry);
        let _ = writeln!(out, "equal rows    {} (r={})", self.equal_rows, self.r);
        let _ = writeln!(
            out,
            "level         {} shifts {:?}",
            self.level, self.socle_shifts
        );
        let _ = writeln!(out, "log-concave   {}", self.log_concave);
        match self.flawless_violation {
            None => {
                let _ = writeln!(out, "flawless      true");
            }
            Some(i) => {
                let _ = writeln!(
                    out,
                    "flawless      false (h_{i} > h_{})",
                    self.h.degree() - i
                );
            }
        }
        let _ = writeln!(out, "O-sequence    {}", self.o_sequence);
        let _ = writeln!(out, "purity        {}", self.purity.label());
        if let PurityVerdict::Pure { witness, .. } = &self.purity {
            let gens: Vec<String> = witness.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "witness       {}", gens.join(", "));
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed       {ms:.3} ms");
        }
        out
    }
}

/// Flat CSV row. Column order is part of the output format.
#[derive(Debug, Serialize)]
pub struct CsvRow {
    pub matrix: String,
    pub t: usize,
    pub c: usize,
    pub h: String,
    pub tau: i64,
    pub last_entry: u128,
    pub r: usize,
    pub equal_rows: bool,
    pub level: bool,
    pub socle_shifts: String,
    pub log_concave: bool,
    pub flawless: bool,
    pub flawless_violation: Option<usize>,
    pub o_sequence: bool,
    pub purity: String,
    pub witness: String,
}

impl From<&AnalysisReport> for CsvRow {
    fn from(r: &AnalysisReport) -> Self {
        let join =
            |v: &[i64], sep: &str| v.iter().map(i64::to_string).collect::<Vec<_>>().join(sep);
        let witness = match &r.purity {
            PurityVerdict::Pure { witness, .. } => witness
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
            _ => String::new(),
        };
        CsvRow {
            matrix: r
                .matrix
                .iter()
                .map(|row| join(row, " "))
                .collect::<Vec<_>>()
                .join(";"),
            t: r.t,
            c: r.c,
            h: r.h
                .as_slice()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" "),
            tau: r.tau,
            last_entry: r.last_entry,
            r: r.r,
            equal_rows: r.equal_rows,
            level: r.level,
            socle_shifts: join(&r.socle_shifts, " "),
            log_concave: r.log_concave,
            flawless: r.flawless,
            flawless_violation: r.flawless_violation,
            o_sequence: r.o_sequence,
            purity: r.purity.label(),
            witness,
        }
    }
}

pub fn to_csv<'a>(reports: impl IntoIterator<Item = &'a AnalysisReport>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow::from(r))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureParams {
    pub t: usize,
    pub c: usize,
    pub max_entry: i64,
    pub zero_free: bool,
    pub budget_nodes: u64,
    pub budget_seconds: Option<u64>,
    pub cross_check: bool,
}

impl ConjectureParams {
    pub fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_nodes: self.budget_nodes,
            max_duration: self.budget_seconds.map(std::time::Duration::from_secs),
        }
    }
}

/// Result of one enumerated matrix.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixOutcome {
    pub report: AnalysisReport,
    /// Exhaustive search on the h-vector alone, when cross-checking a
    /// verdict that came from a structural rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<PurityVerdict>,
}

impl MatrixOutcome {
    /// Why this matrix contradicts the conjectured equivalence, if it does.
    pub fn contradiction(&self) -> Option<&'static str> {
        let r = &self.report;
        if r.c >= 2 {
            if r.purity.is_pure() && !r.equal_rows {
                return Some("pure with unequal rows");
            }
            if r.equal_rows && r.purity.is_not_pure() {
                return Some("equal rows but not pure");
            }
        }
        if let Some(search) = &self.search {
            let disagree = (search.is_pure() && r.purity.is_not_pure())
                || (search.is_not_pure() && r.purity.is_pure());
            if disagree {
                return Some("rule verdict disagrees with exhaustive search");
            }
        }
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Contradiction {
    pub matrix: Vec<Vec<i64>>,
    pub h: HVector,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<String>,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckSummary {
    pub checked: usize,
    pub by_search: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRunSummary {
    pub params: ConjectureParams,
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    pub contradictions: Vec<Contradiction>,
    pub inconclusive: Vec<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheckSummary>,
}

impl ConjectureRunSummary {
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "t={} c={} max-entry={} zero-free={}: {} matrices",
            p.t, p.c, p.max_entry, p.zero_free, self.total
        );
        for (label, n) in &self.counts {
            let _ = writeln!(out, "  {label:<28} {n}");
        }
        if let Some(cc) = &self.cross_check {
            let _ = writeln!(out, "cross-checked {} rule verdicts by search:", cc.checked);
            for (label, n) in &cc.by_search {
                let _ = writeln!(out, "  {label:<28} {n}");
            }
        }
        let _ = writeln!(out, "inconclusive: {}", self.inconclusive.len());
        let _ = writeln!(out, "contradictions: {}", self.contradictions.len());
        for c in &self.contradictions {
            let _ = writeln!(
                out,
                "  {:?} h={} {} ({})",
                c.matrix, c.h, c.verdict, c.reason
            );
        }
        out
    }
}

/// Analyzes every enumerated matrix on `threads` workers. Outcomes come back
/// in enumeration order whatever the thread count.
pub fn run_conjecture(
    params: &ConjectureParams,
    threads: Option<usize>,
) -> anyhow::Result<(ConjectureRunSummary, Vec<MatrixOutcome>)> {
    let matrices: Vec<DegreeMatrix> =
        enumerate(params.t, params.c, params.max_entry, params.zero_free).collect();
    let limits = params.limits();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    let outcomes: Vec<MatrixOutcome> = pool.install(|| {
        matrices
            .par_iter()
            .map(|a| outcome(a, &limits, params.cross_check))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok((summarize(params, &outcomes), outcomes))
}

fn outcome(a: &DegreeMatrix, limits: &SearchLimits, cross_check: bool) -> Result<MatrixOutcome> {
    let mut report = analyze(a, limits)?;
    report.elapsed_ms = None;
    let from_rule = match &report.purity {
        PurityVerdict::Pure { rule, .. } => *rule != pure_osequence::PureRule::Search,
        PurityVerdict::NotPure { reason } => reason.is_shortcut(),
        PurityVerdict::Inconclusive { .. } => false,
    };
    let search =
        (cross_check && from_rule).then(|| pure_osequence::exhaustive_search(&report.h, limits));
    Ok(MatrixOutcome { report, search })
}

fn summarize(params: &ConjectureParams, outcomes: &[MatrixOutcome]) -> ConjectureRunSummary {
    let mut counts = BTreeMap::new();
    let mut contradictions = Vec::new();
    let mut inconclusive = Vec::new();
    let mut by_search = BTreeMap::new();
    let mut checked = 0;
    for o in outcomes {
        *counts.entry(o.report.purity.label()).or_insert(0) += 1;
        if o.report.purity.is_inconclusive() {
            inconclusive.push(o.report.matrix.clone());
        }
        if let Some(search) = &o.search {
            checked += 1;
            *by_search.entry(search.label()).or_insert(0) += 1;
        }
        if let Some(reason) = o.contradiction() {
            contradictions.push(Contradiction {
                matrix: o.report.matrix.clone(),
                h: o.report.h.clone(),
                verdict: o.report.purity.label(),
                search: o.search.as_ref().map(PurityVerdict::label),
                reason,
            });
        }
    }
    ConjectureRunSummary {
        params: params.clone(),
        total: outcomes.len(),
        counts,
        contradictions,
        inconclusive,
        cross_check: params
            .cross_check
            .then_some(CrossCheckSummary { checked, by_search }),
    }
}
