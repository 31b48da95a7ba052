//! Per-check records and machine-readable reports.
//!
//! The machine format is one line per check:
//! `check <suite> <tag> status=<pass|fail|skip> residual=<r> flags=<f> :: <detail>`
//! and is byte-deterministic for a fixed configuration (no timing inside).
//! Wall times appear only in the human summary.

use crate::harness::config::SuiteConfig;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skip(String),
}

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub tag: &'static str,
    pub status: Status,
    pub residual: f64,
    pub truncated: bool,
    pub detail: String,
}

impl CheckRecord {
    pub fn pass(tag: &'static str, residual: f64, detail: impl Into<String>) -> Self {
        CheckRecord {
            tag,
            status: Status::Pass,
            residual,
            truncated: false,
            detail: detail.into(),
        }
    }

    pub fn from_residual(
        tag: &'static str,
        residual: f64,
        tol: f64,
        detail: impl Into<String>,
    ) -> Self {
        CheckRecord {
            tag,
            status: if residual <= tol {
                Status::Pass
            } else {
                Status::Fail
            },
            residual,
            truncated: false,
            detail: detail.into(),
        }
    }

    pub fn exact(tag: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        CheckRecord {
            tag,
            status: if ok { Status::Pass } else { Status::Fail },
            residual: if ok { 0.0 } else { f64::NAN },
            truncated: false,
            detail: detail.into(),
        }
    }

    pub fn skip(tag: &'static str, why: impl Into<String>) -> Self {
        let why = why.into();
        CheckRecord {
            tag,
            status: Status::Skip(why.clone()),
            residual: 0.0,
            truncated: false,
            detail: why,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: &'static str,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: &'static str) -> Self {
        Report {
            suite,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn all_passed(&self) -> bool {
        self.records
            .iter()
            .all(|r| !matches!(r.status, Status::Fail))
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skip = 0;
        for r in &self.records {
            match r.status {
                Status::Pass => pass += 1,
                Status::Fail => fail += 1,
                Status::Skip(_) => skip += 1,
            }
        }
        (pass, fail, skip)
    }
}

fn fmt_residual(r: f64) -> String {
    if r == 0.0 {
        "0".to_string()
    } else if r.is_nan() {
        "nonzero".to_string()
    } else {
        format!("{r:.6e}")
    }
}

/// The machine-readable report: deterministic for a fixed config.
pub fn render_machine(cfg: &SuiteConfig, reports: &[Report]) -> String {
    let mut out = String::new();
    out.push_str(&format!("config {cfg}\n"));
    for rep in reports {
        for r in &rep.records {
            let status = match &r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip(_) => "skip",
            };
            out.push_str(&format!(
                "check {} {} status={} residual={} flags={} :: {}\n",
                rep.suite,
                r.tag,
                status,
                fmt_residual(r.residual),
                if r.truncated { "truncated" } else { "-" },
                r.detail.replace('\n', " ")
            ));
        }
    }
    let total_fail: usize = reports.iter().map(|r| r.counts().1).sum();
    out.push_str(&format!(
        "summary suites={} checks={} failures={}\n",
        reports.len(),
        reports.iter().map(|r| r.records.len()).sum::<usize>(),
        total_fail
    ));
    out
}

/// Human summary, one line per suite plus failures spelled out.
pub fn render_human(reports: &[Report], wall: &[(String, f64)]) -> String {
    let mut out = String::new();
    for rep in reports {
        let (pass, fail, skip) = rep.counts();
        let time = wall
            .iter()
            .find(|(name, _)| name == rep.suite)
            .map(|(_, t)| format!(" [{t:.2}s]"))
            .unwrap_or_default();
        out.push_str(&format!(
            "suite {:<12} pass {:>3}  fail {:>3}  skip {:>3}{}\n",
            rep.suite, pass, fail, skip, time
        ));
        for r in &rep.records {
            if matches!(r.status, Status::Fail) {
                out.push_str(&format!(
                    "  FAIL {} residual={} :: {}\n",
                    r.tag,
                    fmt_residual(r.residual),
                    r.detail
                ));
            }
        }
    }
    out
}
