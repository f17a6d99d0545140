//! Structured verdicts for the principle checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Which principle a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principle {
    MaxPrinciple,
    MinPrinciple,
    BoundaryEquality,
    Uniqueness,
    Comparison,
    CauchySup,
    SemilinearComparison,
    Convergence,
}

/// How `measured` relates to `threshold` in a passing report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdDirection {
    /// Violation-style metric: the check passes iff `measured <= threshold`.
    MeasuredAtMostThreshold,
    /// Attainment-style metric: the check passes iff `measured >= threshold`.
    MeasuredAtLeastThreshold,
}

/// A grid node together with its coordinates and the field value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeLocation {
    pub i: usize,
    pub n: usize,
    pub x: f64,
    pub t: f64,
    pub value: f64,
}

/// Structured verdict for one principle check.
///
/// `verdict` always equals the stated comparison of `measured` against
/// `threshold`; `direction` records which comparison applies. Extremum
/// locations and free-form diagnostics ride along in ordered maps so that
/// serialization is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub principle: Principle,
    pub verdict: bool,
    pub measured: f64,
    pub threshold: f64,
    pub direction: ThresholdDirection,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub locations: BTreeMap<String, NodeLocation>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub fingerprint: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
}

impl VerificationReport {
    /// Violation-style report: passes iff `measured <= threshold`.
    pub fn violation(principle: Principle, measured: f64, threshold: f64) -> Self {
        VerificationReport {
            principle,
            verdict: measured <= threshold,
            measured,
            threshold,
            direction: ThresholdDirection::MeasuredAtMostThreshold,
            locations: BTreeMap::new(),
            fingerprint: String::new(),
            details: BTreeMap::new(),
        }
    }

    /// Attainment-style report: passes iff `measured >= threshold`.
    pub fn attainment(principle: Principle, measured: f64, threshold: f64) -> Self {
        VerificationReport {
            principle,
            verdict: measured >= threshold,
            measured,
            threshold,
            direction: ThresholdDirection::MeasuredAtLeastThreshold,
            locations: BTreeMap::new(),
            fingerprint: String::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn with_location(mut self, key: &str, loc: NodeLocation) -> Self {
        self.locations.insert(key.to_string(), loc);
        self
    }

    pub fn with_fingerprint(mut self, fp: String) -> Self {
        self.fingerprint = fp;
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    /// Re-derives the verdict after mutating `measured`/`threshold` by hand.
    pub fn refresh_verdict(&mut self) {
        self.verdict = match self.direction {
            ThresholdDirection::MeasuredAtMostThreshold => self.measured <= self.threshold,
            ThresholdDirection::MeasuredAtLeastThreshold => self.measured >= self.threshold,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_matches_direction() {
        let r = VerificationReport::violation(Principle::MaxPrinciple, 1e-12, 1e-10);
        assert!(r.verdict);
        let r = VerificationReport::violation(Principle::MaxPrinciple, 0.5, 1e-10);
        assert!(!r.verdict);
        let r = VerificationReport::attainment(Principle::Convergence, 1.45, 1.3);
        assert!(r.verdict);
    }

    #[test]
    fn serializes_with_snake_case_tags() {
        let r = VerificationReport::violation(Principle::CauchySup, 0.0, 1e-10)
            .with_detail("note", "ok")
            .with_location(
                "grid_max",
                NodeLocation { i: 1, n: 2, x: 0.5, t: 0.25, value: 1.0 },
            );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"cauchy_sup\""));
        assert!(json.contains("\"measured_at_most_threshold\""));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
