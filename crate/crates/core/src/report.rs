//! Inequality reports. Library checks never assert; they record both sides
//! and a verdict, and the caller decides what a failure means.

use serde::Serialize;

/// Relative slack applied to every inequality check unless overridden.
pub const DEFAULT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs`
    Le,
    /// `lhs = rhs`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub label: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Absolute allowance that was granted.
    pub allowance: f64,
    pub pass: bool,
    /// Offending position for entrywise checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub slack: f64,
    pub entries: Vec<CheckEntry>,
}

impl Default for Report {
    fn default() -> Self {
        Self::new(DEFAULT_SLACK)
    }
}

impl Report {
    pub fn new(slack: f64) -> Self {
        Self {
            slack,
            entries: Vec::new(),
        }
    }

    /// Records `lhs ≤ rhs` with allowance `slack · max(|rhs|, scale)`.
    pub fn le(&mut self, label: impl Into<String>, lhs: f64, rhs: f64, scale: f64) -> bool {
        let allowance = self.slack * rhs.abs().max(scale.abs());
        let pass = lhs <= rhs + allowance;
        self.entries.push(CheckEntry {
            label: label.into(),
            relation: Relation::Le,
            lhs,
            rhs,
            allowance,
            pass,
            index: None,
        });
        pass
    }

    /// Records `|lhs − rhs| ≤ tol` for an explicit absolute tolerance.
    pub fn eq_abs(&mut self, label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> bool {
        let pass = (lhs - rhs).abs() <= tol;
        self.entries.push(CheckEntry {
            label: label.into(),
            relation: Relation::Eq,
            lhs,
            rhs,
            allowance: tol,
            pass,
            index: None,
        });
        pass
    }

    /// Records `lhs ≤ tol` for a residual that should vanish.
    pub fn small(&mut self, label: impl Into<String>, residual: f64, tol: f64) -> bool {
        let pass = residual <= tol;
        self.entries.push(CheckEntry {
            label: label.into(),
            relation: Relation::Le,
            lhs: residual,
            rhs: tol,
            allowance: 0.0,
            pass,
            index: None,
        });
        pass
    }

    /// Entrywise `lhs[k] ≤ rhs[k]`; the entry stores the worst index (first
    /// violation if any, otherwise the tightest margin). Missing `rhs` values
    /// count as zero.
    pub fn le_seq(
        &mut self,
        label: impl Into<String>,
        lhs: &[f64],
        rhs: &[f64],
        scale: f64,
    ) -> bool {
        let allowance = self.slack * scale.abs();
        let mut worst: Option<(usize, f64)> = None;
        let mut violation = None;
        for (k, &l) in lhs.iter().enumerate() {
            let r = rhs.get(k).copied().unwrap_or(0.0);
            let margin = r + allowance - l;
            if margin < 0.0 && violation.is_none() {
                violation = Some(k);
            }
            if worst.is_none_or(|(_, m)| margin < m) {
                worst = Some((k, margin));
            }
        }
        let idx = violation.or(worst.map(|(k, _)| k));
        let (l, r) = idx.map_or((0.0, 0.0), |k| (lhs[k], rhs.get(k).copied().unwrap_or(0.0)));
        let pass = violation.is_none();
        self.entries.push(CheckEntry {
            label: label.into(),
            relation: Relation::Le,
            lhs: l,
            rhs: r,
            allowance,
            pass,
            index: idx,
        });
        pass
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn get(&self, label: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// `num / den` with the degenerate cases made explicit: `0/0 → 0`, and a
/// nonzero numerator over a vanishing denominator yields `None`.
pub fn guarded_ratio(num: f64, den: f64, num_floor: f64, den_floor: f64) -> Option<f64> {
    if den > den_floor {
        Some(num / den)
    } else if num <= num_floor {
        Some(0.0)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_relative_to_the_larger_of_rhs_and_scale() {
        let mut r = Report::new(1e-9);
        assert!(r.le("a", 1.0 + 5e-10, 1.0, 0.0));
        assert!(!r.le("b", 1.0 + 5e-9, 1.0, 0.0));
        assert!(r.le("c", 1e-12, 0.0, 1.0));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn sequence_check_reports_first_violation() {
        let mut r = Report::new(0.0);
        assert!(!r.le_seq("s", &[1.0, 3.0, 5.0], &[2.0, 2.0, 2.0], 1.0));
        assert_eq!(r.entries[0].index, Some(1));
        assert!(r.le_seq("t", &[1.0, 1.9], &[2.0, 2.0], 1.0));
        assert_eq!(r.entries[1].index, Some(1));
    }

    #[test]
    fn ratio_policy() {
        assert_eq!(guarded_ratio(1.0, 2.0, 0.0, 0.0), Some(0.5));
        assert_eq!(guarded_ratio(0.0, 0.0, 1e-12, 1e-14), Some(0.0));
        assert_eq!(guarded_ratio(1.0, 0.0, 1e-12, 1e-14), None);
    }
}
