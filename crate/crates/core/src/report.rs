//! Table generation, verification suites and output rendering behind the
//! `qutrit-mermin` binary.
//!
//! Every command takes a [`RunConfig`] and returns a [`Report`]: the
//! rendered output, an exit [`Status`] and diagnostics for stderr. Work is
//! spread over `(N, k)` jobs; results are collected in `(N, k)` order before
//! rendering, so output does not depend on the number of threads.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ghz::{ghz_state, GhzError, SparseState};
use crate::hv::{
    asymptotics, best_ks, hv_max_brute_limited, hv_max_symmetric, hv_max_theorem,
    ratio_value, theorem_k_set, HvError, HvOutcome, Method, RatioAssignment, MAX_BRUTE_N,
};
use crate::mermin::{
    closed_form_check, concurrent_set, failing_terms, mermin_operator, qubit_comparison,
    quantum_value, table_quantum_value, MerminError, MerminOperator, QubitComparison,
    MAX_OPERATOR_N, MAX_QUBIT_N,
};
use crate::pauli::{all_words, LocalBases, WVariant};

pub const DEFAULT_MAX_BRUTE_N: usize = 12;

/// Environment variable read by the binary for `--max-brute-n`.
pub const MAX_BRUTE_N_ENV: &str = "QUTRIT_MERMIN_MAX_BRUTE_N";

/// Largest N for which `verify` applies the whole operator to the state.
pub const MAX_FULL_APPLY_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum KSelection {
    /// All k for search methods, the theorem's k set for `theorem`.
    #[default]
    Auto,
    Explicit(Vec<u8>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MethodChoice {
    Brute,
    Symmetric,
    Theorem,
    #[default]
    All,
}

impl MethodChoice {
    fn includes(self, method: Method) -> bool {
        match self {
            MethodChoice::All => true,
            MethodChoice::Brute => method == Method::Brute,
            MethodChoice::Symmetric => method == Method::Symmetric,
            MethodChoice::Theorem => method == Method::Theorem,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodChoice::Brute => "brute",
            MethodChoice::Symmetric => "symmetric",
            MethodChoice::Theorem => "theorem",
            MethodChoice::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub k: KSelection,
    pub method: MethodChoice,
    pub format: OutputFormat,
    /// Leave floating-point columns out of the output.
    pub exact_only: bool,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    pub max_brute_n: usize,
    pub w_variant: WVariant,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_min: 4,
            n_max: 13,
            k: KSelection::Auto,
            method: MethodChoice::All,
            format: OutputFormat::Markdown,
            exact_only: false,
            jobs: None,
            max_brute_n: DEFAULT_MAX_BRUTE_N,
            w_variant: WVariant::Conjugation,
        }
    }
}

impl RunConfig {
    pub fn with_range(n_min: usize, n_max: usize) -> Self {
        Self { n_min, n_max, ..Self::default() }
    }

    fn ns(&self) -> RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    fn validate(&self) -> Result<(), ReportError> {
        if let KSelection::Explicit(ks) = &self.k {
            if ks.is_empty() {
                return Err(ReportError::Input("empty k selection".into()));
            }
            if let Some(k) = ks.iter().find(|&&k| k > 2) {
                return Err(ReportError::Input(format!("k must be 0, 1 or 2, got {k}")));
            }
        }
        if self.max_brute_n > MAX_BRUTE_N {
            return Err(ReportError::Guard(format!(
                "max brute N {} exceeds the hard limit {MAX_BRUTE_N}",
                self.max_brute_n
            )));
        }
        if self.jobs == Some(0) {
            return Err(ReportError::Input("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// The k values to evaluate at `n`.
    fn ks(&self, n: usize) -> Result<Vec<u8>, ReportError> {
        let theorem_only = self.method == MethodChoice::Theorem && n >= 4;
        match &self.k {
            KSelection::Auto if theorem_only => Ok(theorem_k_set(n)),
            KSelection::Auto => Ok(vec![0, 1, 2]),
            KSelection::Explicit(ks) => {
                let mut ks = ks.clone();
                ks.sort_unstable();
                ks.dedup();
                if theorem_only {
                    let valid = theorem_k_set(n);
                    if let Some(k) = ks.iter().find(|k| !valid.contains(k)) {
                        return Err(ReportError::Input(format!(
                            "theorem method does not cover k = {k} at N = {n} (valid: {valid:?})"
                        )));
                    }
                }
                Ok(ks)
            }
        }
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, ReportError> {
        match self.jobs {
            None => Ok(f()),
            Some(jobs) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| ReportError::Internal(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Errors that stop a command before any output is produced.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("size guard violated: {0}")]
    Guard(String),
    #[error("methods disagree: {0}")]
    Disagreement(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ReportError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Internal(_) => 1,
            ReportError::Input(_) => 2,
            ReportError::Guard(_) => 3,
            ReportError::Disagreement(_) => 5,
        }
    }
}

impl From<HvError> for ReportError {
    fn from(e: HvError) -> Self {
        match e {
            HvError::SizeGuard { .. } => ReportError::Guard(e.to_string()),
            HvError::Mermin(m) => m.into(),
            HvError::Inconsistent(_) => ReportError::Disagreement(e.to_string()),
            HvError::Arithmetic(_) => ReportError::Internal(e.to_string()),
            _ => ReportError::Input(e.to_string()),
        }
    }
}

impl From<MerminError> for ReportError {
    fn from(e: MerminError) -> Self {
        match e {
            MerminError::SizeGuard { .. } => ReportError::Guard(e.to_string()),
            MerminError::TooFewQutrits { .. } | MerminError::InvalidK(_) => {
                ReportError::Input(e.to_string())
            }
            MerminError::Ghz(_) | MerminError::Arithmetic(_) => {
                ReportError::Internal(e.to_string())
            }
        }
    }
}

impl From<GhzError> for ReportError {
    fn from(e: GhzError) -> Self {
        ReportError::Internal(e.to_string())
    }
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailure,
    MethodDisagreement,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::VerificationFailure => 4,
            Status::MethodDisagreement => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub output: String,
    pub status: Status,
    /// Human-readable notes, meant for stderr.
    pub diagnostics: Vec<String>,
}

/// `m` if `m` is a perfect square, else `sqrt(m)`.
pub fn surd(m: i128) -> String {
    let root = (m.max(0) as u128).isqrt() as i128;
    if root * root == m {
        root.to_string()
    } else {
        format!("sqrt({m})")
    }
}

fn join_ks(ks: &[u8]) -> String {
    ks.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

fn to_csv<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn markdown(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = format!("| {} |\n|", header.join(" | "));
    for _ in header {
        s.push_str("---|");
    }
    s.push('\n');
    for row in rows {
        let _ = writeln!(s, "| {} |", row.join(" | "));
    }
    s
}

/// One cross-check between methods or against the theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(n: usize, k: Option<u8>, name: &str, passed: bool, detail: String) -> Self {
        Self { n, k, name: name.to_string(), passed, detail }
    }
}

/// All outcomes computed for one `(N, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KAnalysis {
    pub n: usize,
    pub k: u8,
    pub brute: Option<HvOutcome>,
    pub symmetric: Option<HvOutcome>,
    pub theorem: Option<HvOutcome>,
}

impl KAnalysis {
    /// The outcome reported in tables: symmetric, then brute, then theorem.
    pub fn primary(&self) -> &HvOutcome {
        self.symmetric
            .as_ref()
            .or(self.brute.as_ref())
            .or(self.theorem.as_ref())
            .expect("at least one method ran")
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &HvOutcome> {
        [&self.brute, &self.symmetric, &self.theorem].into_iter().flatten()
    }

    fn checks(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        let reference = self.primary();
        for other in self.outcomes() {
            if std::ptr::eq(other, reference) {
                continue;
            }
            let agree = other.max_magnitude_squared == reference.max_magnitude_squared;
            checks.push(Check::new(
                self.n,
                Some(self.k),
                &format!("{}={}", other.method, reference.method),
                agree,
                format!(
                    "{} vs {}",
                    surd(other.max_squared_int().unwrap_or(-1)),
                    surd(reference.max_squared_int().unwrap_or(-1))
                ),
            ));
        }
        checks
    }
}

fn analyze(config: &RunConfig, n: usize, k: u8) -> Result<KAnalysis, ReportError> {
    let method = config.method;
    let all = method == MethodChoice::All;
    let brute = if n == 3 || method.includes(Method::Brute) {
        if n > config.max_brute_n && !all {
            return Err(ReportError::Guard(format!(
                "brute force is limited to N <= {}, got N = {n}",
                config.max_brute_n
            )));
        }
        (n <= config.max_brute_n)
            .then(|| hv_max_brute_limited(n, k, config.max_brute_n))
            .transpose()?
    } else {
        None
    };
    let symmetric = (n >= 4 && method.includes(Method::Symmetric))
        .then(|| hv_max_symmetric(n, k))
        .transpose()?;
    let theorem = (n >= 4 && method.includes(Method::Theorem) && theorem_k_set(n).contains(&k))
        .then(|| hv_max_theorem(n, k))
        .transpose()?;
    Ok(KAnalysis { n, k, brute, symmetric, theorem })
}

/// Runs every selected method for each `(N, k)` in the configured range.
pub fn analyze_range(config: &RunConfig) -> Result<Vec<Vec<KAnalysis>>, ReportError> {
    config.validate()?;
    if config.n_min < 3 && config.n_min <= config.n_max {
        return Err(ReportError::Input(format!("N must be at least 3, got {}", config.n_min)));
    }
    if config.n_max > MAX_OPERATOR_N && config.n_min <= config.n_max {
        return Err(ReportError::Guard(format!(
            "N is limited to {MAX_OPERATOR_N}, got {}",
            config.n_max
        )));
    }
    let mut jobs = Vec::new();
    for n in config.ns() {
        for k in config.ks(n)? {
            jobs.push((n, k));
        }
    }
    let results: Vec<KAnalysis> = config.run(|| {
        jobs.par_iter()
            .map(|&(n, k)| analyze(config, n, k))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let mut grouped: Vec<Vec<KAnalysis>> = Vec::new();
    for a in results {
        match grouped.last_mut() {
            Some(group) if group[0].n == a.n => group.push(a),
            _ => grouped.push(vec![a]),
        }
    }
    Ok(grouped)
}

/// One row of the table: the k values maximizing `𝒜` and their values.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TableRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub k_set: Vec<u8>,
    #[serde(rename = "mQ")]
    pub m_q: u64,
    #[serde(rename = "mHvmSquared")]
    pub m_hvm_squared: i128,
    /// Exact form: an integer or `sqrt(m)`.
    #[serde(rename = "mHvm")]
    pub m_hvm: String,
    #[serde(rename = "mHvmFloat")]
    pub m_hvm_float: f64,
    #[serde(rename = "ratioA")]
    pub ratio_a: f64,
}

impl TableRow {
    pub fn from_analyses(group: &[KAnalysis]) -> Self {
        let outcomes: Vec<HvOutcome> = group.iter().map(|a| a.primary().clone()).collect();
        let k_set = best_ks(&outcomes);
        let best = outcomes.iter().find(|o| o.k == k_set[0]).expect("k in set");
        let m = best.max_squared_int().expect("integer maxima");
        Self {
            n: best.n,
            k_set,
            m_q: best.quantum_value,
            m_hvm_squared: m,
            m_hvm: surd(m),
            m_hvm_float: best.max_magnitude,
            ratio_a: best.ratio_a,
        }
    }

    /// `ratioA` as shown in tables.
    pub fn ratio_a_rounded(&self) -> String {
        format!("{:.2}", self.ratio_a)
    }
}

pub const TABLE_CSV_HEADER: [&str; 6] =
    ["N", "k_set", "M_Q", "M_HVM_squared", "M_HVM_float", "ratio_A"];

/// Table rows plus the cross-checks run to produce them.
#[derive(Clone, Debug, PartialEq)]
pub struct TableResult {
    pub rows: Vec<TableRow>,
    pub checks: Vec<Check>,
    /// Everything computed per `(N, k)`, grouped by N.
    pub analyses: Vec<Vec<KAnalysis>>,
}

impl TableResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn table_rows(config: &RunConfig) -> Result<TableResult, ReportError> {
    let groups = analyze_range(config)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for group in &groups {
        let row = TableRow::from_analyses(group);
        if config.method == MethodChoice::All {
            for a in group {
                checks.extend(a.checks());
            }
            if row.n >= 4 && config.k == KSelection::Auto {
                let expected = theorem_k_set(row.n);
                checks.push(Check::new(
                    row.n,
                    None,
                    "optimal k = theorem k set",
                    row.k_set == expected,
                    format!("{} vs {}", join_ks(&row.k_set), join_ks(&expected)),
                ));
                let formula = table_quantum_value(row.n);
                checks.push(Check::new(
                    row.n,
                    None,
                    "M_Q = closed formula",
                    row.m_q == formula,
                    format!("{} vs {formula}", row.m_q),
                ));
            }
        }
        rows.push(row);
    }
    Ok(TableResult { rows, checks, analyses: groups })
}

fn failed_notes(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| match c.k {
            Some(k) => format!("FAILED {} at N = {}, k = {k}: {}", c.name, c.n, c.detail),
            None => format!("FAILED {} at N = {}: {}", c.name, c.n, c.detail),
        })
        .collect()
}

/// Reproduces the table of quantum and hidden-variable values.
pub fn table(config: &RunConfig) -> Result<Report, ReportError> {
    let result = table_rows(config)?;
    let exact = config.exact_only;
    let output = match config.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct RowJson<'a> {
                #[serde(rename = "N")]
                n: usize,
                k_set: &'a [u8],
                #[serde(rename = "mQ")]
                m_q: u64,
                #[serde(rename = "mHvmSquared")]
                m_hvm_squared: i128,
                #[serde(rename = "mHvm")]
                m_hvm: &'a str,
                #[serde(rename = "mHvmFloat", skip_serializing_if = "Option::is_none")]
                m_hvm_float: Option<f64>,
                #[serde(rename = "ratioA", skip_serializing_if = "Option::is_none")]
                ratio_a: Option<f64>,
            }
            #[derive(Serialize)]
            struct Json<'a> {
                command: &'static str,
                method: &'static str,
                rows: Vec<RowJson<'a>>,
                checks: &'a [Check],
            }
            to_json(&Json {
                command: "table",
                method: config.method.name(),
                rows: result
                    .rows
                    .iter()
                    .map(|r| RowJson {
                        n: r.n,
                        k_set: &r.k_set,
                        m_q: r.m_q,
                        m_hvm_squared: r.m_hvm_squared,
                        m_hvm: &r.m_hvm,
                        m_hvm_float: (!exact).then_some(r.m_hvm_float),
                        ratio_a: (!exact).then_some(r.ratio_a),
                    })
                    .collect(),
                checks: &result.checks,
            })
        }
        OutputFormat::Csv => {
            let header: &[&str] = if exact { &TABLE_CSV_HEADER[..4] } else { &TABLE_CSV_HEADER };
            to_csv(
                header,
                result.rows.iter().map(|r| {
                    let mut v = vec![
                        r.n.to_string(),
                        join_ks(&r.k_set),
                        r.m_q.to_string(),
                        r.m_hvm_squared.to_string(),
                    ];
                    if !exact {
                        v.push(format!("{:.6}", r.m_hvm_float));
                        v.push(r.ratio_a_rounded());
                    }
                    v
                }),
            )
        }
        OutputFormat::Markdown => {
            let header: &[&str] = if exact {
                &["N", "k", "M_Q", "M_HVM"]
            } else {
                &["N", "k", "M_Q", "M_HVM", "A"]
            };
            let mut s = markdown(
                header,
                result.rows.iter().map(|r| {
                    let mut v = vec![r.n.to_string(), join_ks(&r.k_set), r.m_q.to_string(), r.m_hvm.clone()];
                    if !exact {
                        v.push(r.ratio_a_rounded());
                    }
                    v
                }),
            );
            if !result.checks.is_empty() {
                let passed = result.checks.iter().filter(|c| c.passed).count();
                let _ = writeln!(
                    s,
                    "\nCross-checks: {passed} passed, {} failed",
                    result.checks.len() - passed
                );
            }
            s
        }
    };
    let status = if result.passed() { Status::Success } else { Status::MethodDisagreement };
    Ok(Report { output, status, diagnostics: failed_notes(&result.checks) })
}

/// Per-`(N, k)` outcomes from each selected method, with agreement checks
/// when `method` is `all`.
pub fn hvmax(config: &RunConfig) -> Result<Report, ReportError> {
    let groups = analyze_range(config)?;
    let analyses: Vec<&KAnalysis> = groups.iter().flatten().collect();
    let outcomes: Vec<&HvOutcome> = analyses.iter().flat_map(|a| a.outcomes()).collect();
    let checks: Vec<Check> = if config.method == MethodChoice::All {
        analyses.iter().flat_map(|a| a.checks()).collect()
    } else {
        Vec::new()
    };
    let exact = config.exact_only;
    let cells = |o: &HvOutcome| {
        let mut v = vec![
            o.n.to_string(),
            o.k.to_string(),
            o.method.to_string(),
            o.quantum_value.to_string(),
            o.max_squared_int().unwrap_or(-1).to_string(),
        ];
        if !exact {
            v.push(format!("{:.6}", o.max_magnitude));
            v.push(format!("{:.2}", o.ratio_a));
        }
        v.push(o.argmax_count.to_string());
        v.push(
            o.argmax
                .iter()
                .map(|a| a.exponents().iter().map(u8::to_string).collect::<String>())
                .collect::<Vec<_>>()
                .join(" "),
        );
        v
    };
    let header: Vec<&str> = ["N", "k", "method", "M_Q", "M_HVM_squared"]
        .into_iter()
        .chain(if exact { vec![] } else { vec!["M_HVM_float", "ratio_A"] })
        .chain(["argmax_count", "argmax"])
        .collect();
    let output = match config.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Json<'a> {
                command: &'static str,
                method: &'static str,
                outcomes: &'a [&'a HvOutcome],
                checks: &'a [Check],
            }
            to_json(&Json {
                command: "hvmax",
                method: config.method.name(),
                outcomes: &outcomes,
                checks: &checks,
            })
        }
        OutputFormat::Csv => to_csv(&header, outcomes.iter().map(|o| cells(o))),
        OutputFormat::Markdown => markdown(&header, outcomes.iter().map(|o| cells(o))),
    };
    let status = if checks.iter().all(|c| c.passed) {
        Status::Success
    } else {
        Status::MethodDisagreement
    };
    Ok(Report { output, status, diagnostics: failed_notes(&checks) })
}

/// Result of one property in the verification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    pub property: &'static str,
    /// `None` when the property does not apply at this size.
    pub passed: Option<bool>,
    pub detail: String,
}

fn verify_k(n: usize, k: u8, bases: &LocalBases) -> Result<Vec<Verification>, ReportError> {
    let op = mermin_operator(n, k)?;
    let state = ghz_state(n, k)?;
    let mut out = Vec::new();

    let bad = failing_terms(&op, bases, &state)?;
    out.push(Verification {
        n,
        k: Some(k),
        property: "eigenstate",
        passed: Some(bad.is_empty()),
        detail: match bad.first() {
            None => format!("{} weighted terms fix GHZ_{k} with eigenvalue 1", op.terms().len()),
            Some(w) => format!("{} of {} terms fail, first {w}", bad.len(), op.terms().len()),
        },
    });

    out.push(if n <= MAX_FULL_APPLY_N {
        let ghz = state.to_sparse();
        let image = op.apply(bases, &ghz)?;
        let expected = scaled_state(&ghz, &op)?;
        let relation = if image == expected { "=" } else { "!=" };
        Verification {
            n,
            k: Some(k),
            property: "full operator",
            passed: Some(image == expected),
            detail: format!("M_{k} GHZ_{k} {relation} {} GHZ_{k}", op.quantum_value()),
        }
    } else {
        Verification {
            n,
            k: Some(k),
            property: "full operator",
            passed: None,
            detail: format!("skipped above N = {MAX_FULL_APPLY_N}"),
        }
    });

    out.push(if n >= 4 {
        let report = closed_form_check(n, k)?;
        let bad = report.classes.iter().filter(|c| !c.ok).count();
        Verification {
            n,
            k: Some(k),
            property: "closed form",
            passed: Some(report.passed),
            detail: format!("{} Y-count classes, {bad} mismatched", report.classes.len()),
        }
    } else {
        Verification {
            n,
            k: Some(k),
            property: "closed form",
            passed: None,
            detail: "three-basis operator has no two-basis closed form".into(),
        }
    });
    Ok(out)
}

fn scaled_state(ghz: &SparseState, op: &MerminOperator) -> Result<SparseState, ReportError> {
    let q = crate::cyclo::Cyclotomic::from_int(op.quantum_value() as i128);
    let mut s = ghz.scaled(q).map_err(|e| ReportError::Internal(e.to_string()))?;
    s.prune();
    Ok(s)
}

fn verify_partition(n: usize) -> Result<Verification, ReportError> {
    let sets: Vec<_> = (0..3).map(|k| concurrent_set(n, k)).collect::<Result<_, _>>()?;
    let mut union: Vec<_> = sets.iter().flatten().cloned().collect();
    union.sort();
    let mut expected = all_words(n, crate::mermin::alphabet(n));
    expected.sort();
    let mut ok = union == expected;
    for (k, set) in sets.iter().enumerate() {
        ok &= quantum_value(n, k as u8)? == set.len() as u64;
    }
    let sizes: Vec<String> = sets.iter().map(|s| s.len().to_string()).collect();
    Ok(Verification {
        n,
        k: None,
        property: "partition",
        passed: Some(ok),
        detail: format!("{} words split as {}", expected.len(), sizes.join("+")),
    })
}

pub fn verifications(config: &RunConfig) -> Result<Vec<Verification>, ReportError> {
    config.validate()?;
    if config.n_min > config.n_max {
        return Ok(Vec::new());
    }
    if config.n_min < 3 {
        return Err(ReportError::Input(format!(
            "verification needs N >= 3, got {}",
            config.n_min
        )));
    }
    if config.n_max > MAX_OPERATOR_N {
        return Err(ReportError::Guard(format!(
            "N is limited to {MAX_OPERATOR_N}, got {}",
            config.n_max
        )));
    }
    let bases = LocalBases::new(config.w_variant);
    let mut jobs = Vec::new();
    for n in config.ns() {
        jobs.push((n, None));
        let ks = match &config.k {
            KSelection::Auto => vec![0, 1, 2],
            KSelection::Explicit(ks) => ks.clone(),
        };
        jobs.extend(ks.into_iter().map(|k| (n, Some(k))));
    }
    let results = config.run(|| {
        jobs.par_iter()
            .map(|&(n, k)| match k {
                None => verify_partition(n).map(|v| vec![v]),
                Some(k) => verify_k(n, k, &bases),
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(results.into_iter().flatten().collect())
}

/// Runs the eigenstate, closed-form, partition and full-operator checks.
pub fn verify(config: &RunConfig) -> Result<Report, ReportError> {
    let results = verifications(config)?;
    let passed = results.iter().all(|v| v.passed != Some(false));
    let result_cell = |v: &Verification| match v.passed {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "skip",
    };
    let cells = |v: &Verification| {
        vec![
            v.n.to_string(),
            v.k.map_or(String::new(), |k| k.to_string()),
            v.property.to_string(),
            result_cell(v).to_string(),
            v.detail.clone(),
        ]
    };
    let header = ["N", "k", "property", "result", "detail"];
    let output = match config.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct Json<'a> {
                command: &'static str,
                w_variant: WVariant,
                passed: bool,
                results: &'a [Verification],
            }
            to_json(&Json { command: "verify", w_variant: config.w_variant, passed, results: &results })
        }
        OutputFormat::Csv => to_csv(&header, results.iter().map(cells)),
        OutputFormat::Markdown => markdown(&header, results.iter().map(cells)),
    };
    let diagnostics = results
        .iter()
        .filter(|v| v.passed == Some(false))
        .map(|v| match v.k {
            Some(k) => format!("FAILED {} at N = {}, k = {k}: {}", v.property, v.n, v.detail),
            None => format!("FAILED {} at N = {}: {}", v.property, v.n, v.detail),
        })
        .collect();
    let status = if passed { Status::Success } else { Status::VerificationFailure };
    Ok(Report { output, status, diagnostics })
}

/// The maximizers stated for the three-qutrit operators, as `(R, S)` digit
/// tuples of ω-powers.
pub fn stated_three_qutrit_maximizer(k: u8) -> RatioAssignment {
    let mut a = RatioAssignment::uniform(3);
    let w = crate::cyclo::PhaseExponent::OMEGA;
    match k {
        1 => {
            a.r[0] = w;
            a.s.as_mut().expect("three-basis ratios")[0] = w;
        }
        2 => a.s.as_mut().expect("three-basis ratios")[0] = w,
        _ => {}
    }
    a
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThreeQutritDetail {
    pub k: u8,
    pub outcome: HvOutcome,
    pub eigenstate_passed: bool,
    pub stated_maximizer: RatioAssignment,
    pub stated_maximizer_squared: i128,
    pub stated_maximizer_attains: bool,
    pub operator: MerminOperator,
}

pub fn three_qutrit_details(config: &RunConfig) -> Result<Vec<ThreeQutritDetail>, ReportError> {
    config.validate()?;
    let bases = LocalBases::new(config.w_variant);
    let ks = match &config.k {
        KSelection::Auto => vec![0, 1, 2],
        KSelection::Explicit(ks) => ks.clone(),
    };
    let details = config.run(|| {
        ks.par_iter()
            .map(|&k| -> Result<ThreeQutritDetail, ReportError> {
                let op = mermin_operator(3, k)?;
                let outcome = hv_max_brute_limited(3, k, MAX_BRUTE_N)?;
                let eigenstate_passed = failing_terms(&op, &bases, &ghz_state(3, k)?)?.is_empty();
                let stated = stated_three_qutrit_maximizer(k);
                let value = ratio_value(&op, &stated)?
                    .norm_squared()
                    .to_integer()
                    .ok_or_else(|| ReportError::Internal("non-integer |v|²".into()))?;
                Ok(ThreeQutritDetail {
                    k,
                    stated_maximizer_attains: Some(value) == outcome.max_squared_int(),
                    outcome,
                    eigenstate_passed,
                    stated_maximizer: stated,
                    stated_maximizer_squared: value,
                    operator: op,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(details)
}

/// Three-qutrit detail: the three-basis operators, their HV maxima over all
/// 729 `(R, S)` tuples and the stated maximizers.
pub fn n3(config: &RunConfig) -> Result<Report, ReportError> {
    let details = three_qutrit_details(config)?;
    let cells = |d: &ThreeQutritDetail| {
        vec![
            d.k.to_string(),
            d.outcome.quantum_value.to_string(),
            surd(d.outcome.max_squared_int().unwrap_or(-1)),
            format!("{:.2}", d.outcome.ratio_a),
            d.outcome.argmax_count.to_string(),
            if d.eigenstate_passed { "pass" } else { "FAIL" }.to_string(),
            d.stated_maximizer.exponents().iter().map(u8::to_string).collect(),
            surd(d.stated_maximizer_squared),
        ]
    };
    let header = ["k", "M_Q", "M_HVM", "A", "maximizers", "eigenstate", "stated (R,S)", "stated |v|"];
    let output = match config.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct Json<'a> {
                command: &'static str,
                #[serde(rename = "N")]
                n: usize,
                w_variant: WVariant,
                convention: &'static str,
                per_k: &'a [ThreeQutritDetail],
            }
            to_json(&Json {
                command: "n3",
                n: 3,
                w_variant: config.w_variant,
                convention: "R=v(X)/v(Y),S=v(W)/v(Y)",
                per_k: &details,
            })
        }
        OutputFormat::Csv => to_csv(&header, details.iter().map(cells)),
        OutputFormat::Markdown => {
            let mut s = markdown(&header, details.iter().map(cells));
            for d in &details {
                let _ = write!(s, "\nM_{} =", d.k);
                for t in d.operator.terms() {
                    let _ = write!(s, " {}·{}", t.weight, t.word);
                }
                s.push('\n');
            }
            s
        }
    };
    let mut diagnostics = Vec::new();
    for d in &details {
        if !d.eigenstate_passed {
            diagnostics.push(format!("FAILED eigenstate at N = 3, k = {}", d.k));
        }
        if !d.stated_maximizer_attains {
            diagnostics.push(format!(
                "note: stated maximizer for k = {} reaches |v|² = {}, maximum is {}",
                d.k,
                d.stated_maximizer_squared,
                d.outcome.max_squared_int().unwrap_or(-1)
            ));
        }
    }
    let status = if details.iter().all(|d| d.eigenstate_passed) {
        Status::Success
    } else {
        Status::VerificationFailure
    };
    Ok(Report { output, status, diagnostics })
}

/// Qubit against qutrit ratios at one N.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QubitRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub qubit: QubitComparison,
    pub qutrit_k_set: Vec<u8>,
    pub qutrit_ratio: f64,
}

pub fn qubit_rows(config: &RunConfig) -> Result<Vec<QubitRow>, ReportError> {
    config.validate()?;
    if config.n_min > config.n_max {
        return Ok(Vec::new());
    }
    if config.n_min < 3 {
        return Err(ReportError::Input(format!("N must be at least 3, got {}", config.n_min)));
    }
    if config.n_max > MAX_QUBIT_N {
        return Err(ReportError::Guard(format!(
            "qubit comparison is limited to N <= {MAX_QUBIT_N}, got {}",
            config.n_max
        )));
    }
    let ns: Vec<usize> = config.ns().collect();
    config.run(|| {
        ns.par_iter()
            .map(|&n| -> Result<QubitRow, ReportError> {
                let qubit = [qubit_comparison(n, 0)?, qubit_comparison(n, 1)?]
                    .into_iter()
                    .reduce(|a, b| if b.ratio > a.ratio { b } else { a })
                    .expect("two candidates");
                let outcomes = (0..3)
                    .map(|k| if n == 3 { hv_max_brute_limited(n, k, MAX_BRUTE_N) } else { hv_max_symmetric(n, k) })
                    .collect::<Result<Vec<_>, _>>()?;
                let ks = best_ks(&outcomes);
                let ratio = outcomes[ks[0] as usize].ratio_a;
                Ok(QubitRow { n, qubit, qutrit_k_set: ks, qutrit_ratio: ratio })
            })
            .collect()
    })?
}

/// Qubit (d = 2) ratios next to the qutrit ratios, with both growth bases.
pub fn qubit(config: &RunConfig) -> Result<Report, ReportError> {
    let rows = qubit_rows(config)?;
    let d2_base = std::f64::consts::SQRT_2;
    let d3_base = asymptotics(4).ratio_growth_base;
    let cells = |r: &QubitRow| {
        vec![
            r.n.to_string(),
            r.qubit.quantum_value.to_string(),
            r.qubit.hv_max.to_string(),
            format!("{}", r.qubit.ratio),
            format!("{}", r.qubit.formula_ratio),
            format!("{:.2}", r.qutrit_ratio),
        ]
    };
    let header = ["N", "d2_M_Q", "d2_M_HVM", "d2_ratio", "d2_formula_ratio", "d3_ratio"];
    let output = match config.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct Json<'a> {
                command: &'static str,
                growth_base_d2: f64,
                growth_base_d3: f64,
                rows: &'a [QubitRow],
            }
            to_json(&Json { command: "qubit", growth_base_d2: d2_base, growth_base_d3: d3_base, rows: &rows })
        }
        OutputFormat::Csv => to_csv(&header, rows.iter().map(cells)),
        OutputFormat::Markdown => {
            let mut s = markdown(&header, rows.iter().map(cells));
            let _ = writeln!(s, "\nGrowth bases: d=2 {d2_base:.4}, d=3 {d3_base:.4}");
            s
        }
    };
    let diagnostics = rows
        .iter()
        .filter(|r| r.qubit.ratio != r.qubit.formula_ratio)
        .map(|r| {
            format!(
                "note: d=2 ratio at N = {} is {}, formula gives {}",
                r.n, r.qubit.ratio, r.qubit.formula_ratio
            )
        })
        .collect();
    Ok(Report { output, status: Status::Success, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n_min: usize, n_max: usize, method: MethodChoice) -> RunConfig {
        RunConfig { method, ..RunConfig::with_range(n_min, n_max) }
    }

    #[test]
    fn surd_rendering() {
        assert_eq!(surd(13), "sqrt(13)");
        assert_eq!(surd(49), "7");
        assert_eq!(surd(29791), "sqrt(29791)");
        assert_eq!(surd(1_279_161), "1131");
        assert_eq!(surd(0), "0");
    }

    #[test]
    fn small_table_all_methods() {
        let result = table_rows(&config(4, 8, MethodChoice::All)).unwrap();
        assert!(result.passed(), "{:?}", failed_notes(&result.checks));
        let summary: Vec<(usize, Vec<u8>, u64, i128)> = result
            .rows
            .iter()
            .map(|r| (r.n, r.k_set.clone(), r.m_q, r.m_hvm_squared))
            .collect();
        assert_eq!(
            summary,
            vec![
                (4, vec![0, 1], 5, 13),
                (5, vec![1], 10, 49),
                (6, vec![1, 2], 21, 171),
                (7, vec![2], 42, 576),
                (8, vec![0, 2], 85, 2269),
            ]
        );
        let ratios: Vec<String> = result.rows.iter().map(TableRow::ratio_a_rounded).collect();
        assert_eq!(ratios, ["1.39", "1.43", "1.61", "1.75", "1.78"]);
    }

    #[test]
    fn three_qutrit_row() {
        for method in [MethodChoice::All, MethodChoice::Brute, MethodChoice::Symmetric] {
            let rows = table_rows(&config(3, 3, method)).unwrap().rows;
            assert_eq!(rows.len(), 1);
            assert_eq!(rows[0].k_set, vec![0, 1, 2]);
            assert_eq!((rows[0].m_q, rows[0].m_hvm.as_str()), (9, "6"));
            assert_eq!(rows[0].ratio_a_rounded(), "1.50");
        }
    }

    #[test]
    fn empty_range() {
        let report = table(&config(7, 6, MethodChoice::All)).unwrap();
        assert_eq!(report.status, Status::Success);
        assert_eq!(report.output.lines().count(), 2);
        let report = verify(&config(7, 6, MethodChoice::All)).unwrap();
        assert_eq!(report.status.exit_code(), 0);
    }

    #[test]
    fn guards_and_inputs() {
        let mut c = config(13, 13, MethodChoice::Brute);
        assert_eq!(table(&c).unwrap_err().exit_code(), 3);
        c.max_brute_n = MAX_BRUTE_N + 1;
        assert_eq!(table(&c).unwrap_err().exit_code(), 3);
        assert_eq!(verify(&config(2, 4, MethodChoice::All)).unwrap_err().exit_code(), 2);
        let mut c = config(4, 4, MethodChoice::Theorem);
        c.k = KSelection::Explicit(vec![2]);
        assert_eq!(table(&c).unwrap_err().exit_code(), 2);
        c.k = KSelection::Explicit(vec![3]);
        assert_eq!(table(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn theorem_method_rows() {
        let rows = table_rows(&config(9, 13, MethodChoice::Theorem)).unwrap().rows;
        let m: Vec<i128> = rows.iter().map(|r| r.m_hvm_squared).collect();
        assert_eq!(m, [6889, 29791, 94864, 385947, 1279161]);
    }

    #[test]
    fn verify_passes_and_detects_displayed_w() {
        let report = verify(&config(3, 6, MethodChoice::All)).unwrap();
        assert_eq!(report.status, Status::Success, "{:?}", report.diagnostics);
        let mut c = config(3, 3, MethodChoice::All);
        c.w_variant = WVariant::Displayed;
        let report = verify(&c).unwrap();
        assert_eq!(report.status.exit_code(), 4);
        assert!(report.diagnostics.iter().any(|d| d.contains("eigenstate")));
    }

    #[test]
    fn hvmax_examples() {
        let mut c = config(4, 4, MethodChoice::All);
        c.k = KSelection::Explicit(vec![1]);
        let groups = analyze_range(&c).unwrap();
        let brute = groups[0][0].brute.as_ref().unwrap();
        assert!(brute.argmax.contains(&RatioAssignment::uniform(4)));
        assert!(brute
            .argmax
            .contains(&RatioAssignment::single_departure(4, 3, crate::cyclo::PhaseExponent::OMEGA)));

        let mut c = config(10, 10, MethodChoice::Symmetric);
        c.k = KSelection::Explicit(vec![0]);
        let report = hvmax(&c).unwrap();
        assert!(report.output.contains("29791"));

        let mut c = config(9, 9, MethodChoice::All);
        c.k = KSelection::Explicit(vec![0]);
        let groups = analyze_range(&c).unwrap();
        let theorem = groups[0][0].theorem.as_ref().unwrap();
        assert_eq!(
            theorem.argmax,
            vec![RatioAssignment::single_departure(9, 8, crate::cyclo::PhaseExponent::OMEGA)]
        );
    }

    #[test]
    fn n3_detail() {
        let details = three_qutrit_details(&RunConfig::default()).unwrap();
        let attains: Vec<bool> = details.iter().map(|d| d.stated_maximizer_attains).collect();
        assert_eq!(attains, [true, false, true]);
        assert!(details.iter().all(|d| d.outcome.max_squared_int() == Some(36)));
        assert_eq!(n3(&RunConfig::default()).unwrap().status, Status::Success);
    }

    #[test]
    fn qubit_rows_small() {
        let rows = qubit_rows(&config(3, 6, MethodChoice::All)).unwrap();
        let d2: Vec<f64> = rows.iter().map(|r| r.qubit.ratio).collect();
        assert_eq!(d2, [2.0, 2.0, 4.0, 4.0]);
        assert_eq!(format!("{:.2}", rows[0].qutrit_ratio), "1.50");
        assert_eq!(format!("{:.2}", rows[1].qutrit_ratio), "1.39");
    }

    #[test]
    fn csv_layout() {
        let c = RunConfig { format: OutputFormat::Csv, ..config(4, 5, MethodChoice::Symmetric) };
        let out = table(&c).unwrap().output;
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "N,k_set,M_Q,M_HVM_squared,M_HVM_float,ratio_A");
        assert_eq!(lines[1], "4,\"0,1\",5,13,3.605551,1.39");
        assert_eq!(lines[2], "5,1,10,49,7.000000,1.43");
    }
}
