//! Run reports shared by the text and JSON outputs.

use std::fmt::Write;
use std::time::Duration;

use rmc::automata::Alphabet;
use rmc::verdict::Verdict;

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub model: String,
    /// `ind1`, `indb:B`, `certificate` or `oracle:L`.
    pub method: String,
    /// SAFE, INCONCLUSIVE, BUDGET or ERROR.
    pub verdict: String,
    pub witness: Option<String>,
    /// The certificate condition that failed, if any.
    pub failed: Option<String>,
    pub explored: usize,
    pub sizes: Vec<(String, usize)>,
    pub time_ms: f64,
}

impl RunReport {
    pub fn new(model: &str, method: &str, sigma: &Alphabet, v: &Verdict, time: Duration) -> Self {
        RunReport {
            model: model.to_string(),
            method: method.to_string(),
            verdict: v.status.to_string(),
            witness: v.witness.as_ref().map(|w| w.describe(sigma)),
            failed: v.failed.map(|c| c.to_string()),
            explored: v.explored,
            sizes: v.sizes.iter().map(|&(n, k)| (n.to_string(), k)).collect(),
            time_ms: time.as_secs_f64() * 1e3,
        }
    }

    pub fn error(model: &str, method: &str, message: &str, time: Duration) -> Self {
        RunReport {
            model: model.to_string(),
            method: method.to_string(),
            verdict: "ERROR".into(),
            witness: None,
            failed: Some(message.to_string()),
            explored: 0,
            sizes: Vec::new(),
            time_ms: time.as_secs_f64() * 1e3,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "SAFE" => 0,
            "INCONCLUSIVE" => 1,
            _ => 2,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {}", self.model);
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(out, "verdict: {}", self.verdict);
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness: \"{w}\"");
        }
        if let Some(f) = &self.failed {
            let _ = writeln!(out, "failed: {f}");
        }
        let _ = writeln!(out, "explored: {}", self.explored);
        for (name, n) in &self.sizes {
            let _ = writeln!(out, "{name}: {n}");
        }
        let _ = writeln!(out, "time_ms: {:.3}", self.time_ms);
        out
    }

    pub fn to_json(&self) -> String {
        let mut sizes = serde_json::Map::new();
        for (name, n) in &self.sizes {
            sizes.insert(name.clone(), (*n).into());
        }
        let value = serde_json::json!({
            "model": self.model,
            "method": self.method,
            "verdict": self.verdict,
            "witness": self.witness,
            "failed": self.failed,
            "explored": self.explored,
            "sizes": sizes,
            "time_ms": self.time_ms,
        });
        serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
    }
}
