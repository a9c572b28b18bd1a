//! Machine-readable reports. The JSON layout is the primary schema;
//! CSV is a flat projection of the verdict list, and text is for humans.
//! All three render deterministically: verdicts are pre-sorted and witness
//! keys live in ordered maps.

use eisver_core::torsion::{ScanOutcome, Status, Verdict};
use serde::Serialize;
use std::collections::BTreeMap;

pub const REPORT_VERSION: &str = "1";

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub version: String,
    pub parameters: BTreeMap<String, String>,
    pub verdicts: Vec<VerdictRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<ErrorRecord>,
}

#[derive(Serialize, Clone, Debug)]
pub struct VerdictRecord {
    pub p: u64,
    pub q: u64,
    pub ell: u64,
    pub claim: String,
    pub status: String,
    pub cusp_structure: Option<String>,
    pub upper_bound: Option<String>,
    pub witnesses: BTreeMap<String, String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ErrorRecord {
    pub level: u64,
    pub message: String,
}

impl From<&Verdict> for VerdictRecord {
    fn from(v: &Verdict) -> VerdictRecord {
        VerdictRecord {
            p: v.p,
            q: v.q,
            ell: v.ell,
            claim: v.claim.to_string(),
            status: v.status.as_str().to_string(),
            cusp_structure: v.cusp_structure.clone(),
            upper_bound: v.upper_bound.clone(),
            witnesses: v.witness.clone(),
        }
    }
}

impl Report {
    pub fn new(parameters: BTreeMap<String, String>, verdicts: &[Verdict]) -> Report {
        Report {
            version: REPORT_VERSION.to_string(),
            parameters,
            verdicts: verdicts.iter().map(VerdictRecord::from).collect(),
            errors: Vec::new(),
        }
    }

    pub fn from_scan(parameters: BTreeMap<String, String>, outcome: &ScanOutcome) -> Report {
        let mut r = Report::new(parameters, &outcome.verdicts);
        r.errors = outcome
            .errors
            .iter()
            .map(|e| ErrorRecord {
                level: e.level,
                message: e.message.clone(),
            })
            .collect();
        r
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,ell,claim,status,cusp_structure,upper_bound\n");
        for v in &self.verdicts {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                v.p,
                v.q,
                v.ell,
                v.claim,
                v.status,
                v.cusp_structure.as_deref().unwrap_or(""),
                v.upper_bound.as_deref().unwrap_or("")
            ));
        }
        out
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.parameters {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in &self.verdicts {
            *counts.entry(v.status.as_str()).or_default() += 1;
            let ell = if v.ell == 0 {
                "-".to_string()
            } else {
                v.ell.to_string()
            };
            out.push_str(&format!(
                "(p={}, q={}, ell={}) {}: {}",
                v.p, v.q, ell, v.claim, v.status
            ));
            if let Some(c) = &v.cusp_structure {
                out.push_str(&format!("  cuspidal={c}"));
            }
            if let Some(u) = &v.upper_bound {
                out.push_str(&format!("  upper={u}"));
            }
            out.push('\n');
            if verbose {
                for (k, val) in &v.witnesses {
                    out.push_str(&format!("    {k}: {val}\n"));
                }
            }
        }
        for e in &self.errors {
            out.push_str(&format!("error at level {}: {}\n", e.level, e.message));
        }
        out.push_str("summary:");
        if self.verdicts.is_empty() {
            out.push_str(" no verdicts");
        }
        for (status, count) in &counts {
            out.push_str(&format!(" {status}={count}"));
        }
        out.push('\n');
        out
    }

    /// Worst status across verdicts, for exit codes.
    pub fn worst_status(&self) -> Option<Status> {
        let rank = |s: &str| match s {
            "Verified" => Some(Status::Verified),
            "HypothesisNotMet" => Some(Status::HypothesisNotMet),
            "UpperBoundNotTight" => Some(Status::UpperBoundNotTight),
            "Refuted-Flag" => Some(Status::RefutedFlag),
            _ => None,
        };
        self.verdicts
            .iter()
            .filter_map(|v| rank(&v.status))
            .max()
    }
}
