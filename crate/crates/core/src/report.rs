//! Uniform pass/fail records for every verified identity.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The first coefficient at which the two sides disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// z-degree (or point) of the failing comparison.
    pub coefficient: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub identity: String,
    pub params: BTreeMap<String, String>,
    pub modulus: String,
    pub degree_checked: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl TheoremReport {
    pub fn new(identity: impl Into<String>, modulus: impl ToString, degree_checked: u64) -> Self {
        Self {
            identity: identity.into(),
            params: BTreeMap::new(),
            modulus: modulus.to_string(),
            degree_checked,
            verdict: Verdict::Pass,
            witness: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Record a failure; only the first one is kept.
    pub fn fail(&mut self, coefficient: impl ToString, lhs: impl ToString, rhs: impl ToString) {
        if self.witness.is_none() {
            self.verdict = Verdict::Fail;
            self.witness = Some(Witness {
                coefficient: coefficient.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut line = format!(
            "{} [{}] mod {} up to degree {}: {}",
            self.identity,
            params.join(", "),
            self.modulus,
            self.degree_checked,
            if self.passed() { "pass" } else { "FAIL" }
        );
        if let Some(w) = &self.witness {
            line.push_str(&format!(" at {}: {} != {}", w.coefficient, w.lhs, w.rhs));
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_wins() {
        let mut r = TheoremReport::new("dwork", 9, 4).param("p", 3);
        assert!(r.passed());
        r.fail(2, 1, 4);
        r.fail(3, 0, 1);
        assert!(!r.passed());
        assert_eq!(r.witness.as_ref().unwrap().coefficient, "2");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"], "fail");
        assert_eq!(json["params"]["p"], "3");
        assert!(r.summary().contains("FAIL at 2: 1 != 4"));
    }

    #[test]
    fn pass_has_no_witness_field() {
        let r = TheoremReport::new("x", 1, 0);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("witness").is_none());
    }
}
