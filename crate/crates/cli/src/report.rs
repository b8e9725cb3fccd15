//! Deterministic classification reports.
//!
//! Report bytes are a pure function of (scenario bytes, command, budget):
//! identical across runs and worker counts. Timing is deliberately not part
//! of the report; the runner prints it to stderr instead.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub scenario_sha256: String,
    pub command: String,
    pub budget: u64,
    pub computations: Vec<Computation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Computation {
    pub index: usize,
    pub kind: String,
    pub target: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
    /// Canonical orbit representatives as explicit value tuples, so
    /// downstream tools never re-derive orbit choices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Size of the exhausted search space; deterministic budget usage.
    pub search_space: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
}

impl Report {
    pub fn new(scenario_sha256: String, command: String, budget: u64) -> Self {
        Report {
            schema: "torsorforge-report/1",
            scenario_sha256,
            command,
            budget,
            computations: Vec::new(),
        }
    }

    pub fn has_mismatch(&self) -> bool {
        self.computations.iter().any(|c| c.status == Status::Mismatch)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("torsorforge v1 report\n");
        out.push_str(&format!("scenario-sha256 {}\n", self.scenario_sha256));
        out.push_str(&format!("command {}\n", self.command));
        out.push_str(&format!("budget {}\n", self.budget));
        if self.computations.is_empty() {
            out.push_str("no computations\n");
            return out;
        }
        for c in &self.computations {
            out.push_str(&format!("computation {} {} {}\n", c.index, c.kind, c.target));
            out.push_str(&format!(
                "status {}\n",
                match c.status {
                    Status::Ok => "ok",
                    Status::Mismatch => "mismatch",
                }
            ));
            if let Some(n) = c.classes {
                out.push_str(&format!("classes {n}\n"));
            }
            if let Some(reps) = &c.representatives {
                for r in reps {
                    let vals: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                    out.push_str(&format!("representative [{}]\n", vals.join(" ")));
                }
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!("detail {d}\n"));
            }
            out.push_str(&format!("search-space {}\n", c.search_space));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}
