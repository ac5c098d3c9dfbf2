//! Per-(check, prime) results and the json / csv / text renderings of a run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::modring::Residue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckClass {
    Theorem,
    Lemma,
    Derived,
    Conjecture,
    /// User-supplied statement evaluated through the expression language.
    Expression,
}

impl CheckClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckClass::Theorem => "theorem",
            CheckClass::Lemma => "lemma",
            CheckClass::Derived => "derived",
            CheckClass::Conjecture => "conjecture",
            CheckClass::Expression => "expression",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check_id: String,
    pub class: CheckClass,
    pub prime: u64,
    pub modulus_exponent: u32,
    /// Instance parameters, e.g. `r` and `x`.
    pub params: BTreeMap<String, String>,
    /// Index reported by checks quantified over all `k`: the first
    /// disagreeing `k`, or the last `k` tested when everything agreed.
    pub witness: Option<u64>,
    pub lhs: Option<Residue>,
    pub rhs: Option<Residue>,
    pub pass: bool,
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn evaluated(
        check_id: &str,
        class: CheckClass,
        params: BTreeMap<String, String>,
        lhs: Residue,
        rhs: Residue,
        witness: Option<u64>,
    ) -> Self {
        let ring = lhs.ring();
        CheckResult {
            check_id: check_id.to_string(),
            class,
            prime: ring.p(),
            modulus_exponent: ring.exponent(),
            params,
            witness,
            pass: lhs == rhs,
            lhs: Some(lhs),
            rhs: Some(rhs),
            error: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn errored(
        check_id: &str,
        class: CheckClass,
        params: BTreeMap<String, String>,
        prime: u64,
        modulus_exponent: u32,
        error: String,
    ) -> Self {
        CheckResult {
            check_id: check_id.to_string(),
            class,
            prime,
            modulus_exponent,
            params,
            witness: None,
            lhs: None,
            rhs: None,
            pass: false,
            error: Some(error),
            elapsed: Duration::ZERO,
        }
    }

    /// `id` or `id:key=value,...`.
    pub fn label(&self) -> String {
        instance_label(&self.check_id, &self.params)
    }

    pub fn lhs_string(&self) -> String {
        self.lhs.map(|r| r.value().to_string()).unwrap_or_default()
    }

    pub fn rhs_string(&self) -> String {
        self.rhs.map(|r| r.value().to_string()).unwrap_or_default()
    }

    /// Params as written to reports: instance params plus the witness `k`.
    pub fn report_params(&self) -> BTreeMap<String, String> {
        let mut params = self.params.clone();
        if let Some(k) = self.witness {
            params.insert("k".to_string(), k.to_string());
        }
        params
    }

    fn row(&self) -> JsonRow<'_> {
        JsonRow {
            check_id: &self.check_id,
            class: self.class.as_str(),
            prime: self.prime,
            modulus_exponent: self.modulus_exponent,
            params: self.report_params(),
            lhs: self.lhs_string(),
            rhs: self.rhs_string(),
            pass: self.pass,
            error: self.error.as_deref(),
        }
    }
}

pub fn instance_label(id: &str, params: &BTreeMap<String, String>) -> String {
    if params.is_empty() {
        return id.to_string();
    }
    let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{id}:{}", body.join(","))
}

#[derive(Serialize)]
struct JsonRow<'a> {
    check_id: &'a str,
    class: &'a str,
    prime: u64,
    modulus_exponent: u32,
    params: BTreeMap<String, String>,
    lhs: String,
    rhs: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

/// A `(check, prime)` cell that was not evaluated, e.g. `r = 7/5` at `p = 5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub label: String,
    pub prime: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format `{other}` (text, json, csv)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub rows: Vec<CheckResult>,
    pub skipped: Vec<Skipped>,
}

impl Report {
    pub fn new(rows: Vec<CheckResult>, skipped: Vec<Skipped>) -> Self {
        Report { rows, skipped }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &CheckResult> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// Evaluated rows whose sides disagree.
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.rows.iter().filter(|r| !r.pass && r.error.is_none())
    }

    pub fn conjecture_counterexamples(&self) -> impl Iterator<Item = &CheckResult> {
        self.failures().filter(|r| r.class == CheckClass::Conjecture)
    }

    /// True iff no row errored and every failure is a conjecture (unless strict).
    pub fn succeeded(&self, strict_conjectures: bool) -> bool {
        self.errors().next().is_none()
            && self
                .failures()
                .all(|r| r.class == CheckClass::Conjecture && !strict_conjectures)
    }

    pub fn exit_code(&self, strict_conjectures: bool) -> i32 {
        if self.succeeded(strict_conjectures) {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<JsonRow<'_>> = self.rows.iter().map(CheckResult::row).collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check_id", "class", "prime", "modulus_exponent", "params", "lhs", "rhs", "pass", "error"])
            .expect("in-memory write");
        for r in &self.rows {
            let params: Vec<String> = r.report_params().iter().map(|(k, v)| format!("{k}={v}")).collect();
            w.write_record([
                r.check_id.clone(),
                r.class.as_str().to_string(),
                r.prime.to_string(),
                r.modulus_exponent.to_string(),
                params.join(";"),
                r.lhs_string(),
                r.rhs_string(),
                r.pass.to_string(),
                r.error.clone().unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// One summary line per check instance, then every failing row in full.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut order: Vec<String> = Vec::new();
        let mut groups: BTreeMap<String, (usize, usize, usize, Option<&CheckResult>)> = BTreeMap::new();
        for r in &self.rows {
            let label = r.label();
            let entry = groups.entry(label.clone()).or_insert_with(|| {
                order.push(label);
                (0, 0, 0, None)
            });
            if r.error.is_some() {
                entry.2 += 1;
            } else if r.pass {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
            if !r.pass && entry.3.is_none() {
                entry.3 = Some(r);
            }
        }
        for label in &order {
            let (pass, fail, err, first) = &groups[label];
            let class = first.map(|r| r.class).or_else(|| {
                self.rows.iter().find(|r| &r.label() == label).map(|r| r.class)
            });
            let status = match (fail, err, first) {
                (0, 0, _) => "ok".to_string(),
                (_, _, Some(r)) if r.error.is_some() => format!("error at p={}", r.prime),
                (_, _, Some(r)) if class == Some(CheckClass::Conjecture) => {
                    format!("CONJECTURE COUNTEREXAMPLE at p={}", r.prime)
                }
                (_, _, Some(r)) => format!("FAIL first at p={}", r.prime),
                _ => String::new(),
            };
            let _ = writeln!(out, "{label:<28} pass {pass:>4}  fail {fail:>4}  error {err:>3}  {status}");
        }
        let bad: Vec<&CheckResult> = self.rows.iter().filter(|r| !r.pass).collect();
        if !bad.is_empty() {
            out.push_str("\nfailures:\n");
            for r in bad {
                let witness = r.witness.map(|k| format!(" k={k}")).unwrap_or_default();
                match &r.error {
                    Some(e) => {
                        let _ = writeln!(out, "  {} p={}{}: error: {e}", r.label(), r.prime, witness);
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "  {} [{}] p={} mod p^{}{}: lhs {} != rhs {}",
                            r.label(),
                            r.class.as_str(),
                            r.prime,
                            r.modulus_exponent,
                            witness,
                            r.lhs_string(),
                            r.rhs_string()
                        );
                    }
                }
            }
        }
        let total = self.rows.len();
        let failed = self.failures().count();
        let errors = self.errors().count();
        let _ = writeln!(out, "\n{total} rows, {} passed, {failed} failed, {errors} errors", total - failed - errors);
        if !self.skipped.is_empty() {
            let _ = writeln!(out, "{} cells skipped (parameter not a p-adic integer)", self.skipped.len());
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.to_text(),
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}
