//! Generic linear-program container shared by the problem builders and
//! the solver.

use thiserror::Error;

use crate::model::NodeId;

/// Constraint relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Maps an LP column back to its domain meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarLabel {
    /// Path activation time `x_p` (index into the builder's path set).
    PathUse(usize),
    /// Information flow on the link `tx -> rx`.
    Flow { tx: NodeId, rx: NodeId },
    /// Activation time of the link `tx -> rx`.
    Activation { tx: NodeId, rx: NodeId },
}

impl std::fmt::Display for VarLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarLabel::PathUse(i) => write!(f, "x_p{i}"),
            VarLabel::Flow { tx, rx } => write!(f, "F_{tx}_{rx}"),
            VarLabel::Activation { tx, rx } => write!(f, "lam_{tx}_{rx}"),
        }
    }
}

/// One constraint row; `coeffs` has the same width as the objective.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub name: String,
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LpRow {
    pub fn new(name: impl Into<String>, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            name: name.into(),
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A maximization LP with per-variable bounds `lo <= x <= hi`, `lo >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    /// Per-variable `[lo, hi]`; `hi` may be `f64::INFINITY`.
    pub bounds: Vec<(f64, f64)>,
    pub labels: Vec<VarLabel>,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LpError {
    #[error("malformed problem: {reason}")]
    Malformed { reason: String },
    #[error("solver made no progress after {iterations} iterations")]
    IterationLimit { iterations: usize },
    #[error("numerical failure: {reason}")]
    NumericalFailure { reason: String },
}

impl LpProblem {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    /// Structural sanity: consistent widths, finite coefficients, and
    /// usable bounds.
    pub fn check(&self) -> Result<(), LpError> {
        let n = self.n_vars();
        let err = |reason: String| Err(LpError::Malformed { reason });
        if self.bounds.len() != n || self.labels.len() != n {
            return err(format!(
                "objective width {n} does not match bounds ({}) or labels ({})",
                self.bounds.len(),
                self.labels.len()
            ));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return err("non-finite objective coefficient".into());
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return err(format!("row {i} has width {}, expected {n}", row.coeffs.len()));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return err(format!("row {i} has a non-finite coefficient"));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || lo < 0.0 || hi < lo || hi.is_nan() {
                return err(format!("variable {j} has invalid bounds [{lo}, {hi}]"));
            }
        }
        Ok(())
    }

    /// Human-readable dump in the conventional text LP layout.
    pub fn to_lp_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let term = |c: f64, j: usize, first: bool| -> String {
            let sign = if c < 0.0 {
                "- "
            } else if first {
                ""
            } else {
                "+ "
            };
            format!("{sign}{} {}", c.abs(), self.labels[j])
        };
        s.push_str("Maximize\n obj:");
        let mut first = true;
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                let t = term(c, j, first);
                write!(s, " {t}").unwrap();
                first = false;
            }
        }
        if first {
            s.push_str(" 0");
        }
        s.push_str("\nSubject To\n");
        for row in &self.rows {
            write!(s, " {}:", row.name).unwrap();
            let mut first = true;
            for (j, &c) in row.coeffs.iter().enumerate() {
                if c != 0.0 {
                    let t = term(c, j, first);
                    write!(s, " {t}").unwrap();
                    first = false;
                }
            }
            if first {
                s.push_str(" 0");
            }
            writeln!(s, " {} {}", row.relation, row.rhs).unwrap();
        }
        s.push_str("Bounds\n");
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if hi.is_finite() {
                writeln!(s, " {lo} <= {} <= {hi}", self.labels[j]).unwrap();
            } else {
                writeln!(s, " {} >= {lo}", self.labels[j]).unwrap();
            }
        }
        s.push_str("End\n");
        s
    }
}

/// Solver verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solve result; `value` and `point` are meaningful only when `status`
/// is [`LpStatus::Optimal`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_catches_width_mismatch() {
        let prob = LpProblem {
            objective: vec![1.0, 2.0],
            rows: vec![LpRow {
                name: "r0".into(),
                coeffs: vec![1.0],
                relation: Relation::Le,
                rhs: 1.0,
            }],
            bounds: vec![(0.0, f64::INFINITY); 2],
            labels: vec![VarLabel::PathUse(0), VarLabel::PathUse(1)],
        };
        assert!(matches!(prob.check(), Err(LpError::Malformed { .. })));
    }

    #[test]
    fn check_catches_nan() {
        let prob = LpProblem {
            objective: vec![f64::NAN],
            rows: vec![],
            bounds: vec![(0.0, 1.0)],
            labels: vec![VarLabel::PathUse(0)],
        };
        assert!(prob.check().is_err());
    }

    #[test]
    fn lp_text_layout() {
        let prob = LpProblem {
            objective: vec![2.0, -1.0],
            rows: vec![LpRow {
                name: "cap".into(),
                coeffs: vec![1.0, 1.0],
                relation: Relation::Le,
                rhs: 3.0,
            }],
            bounds: vec![(0.0, f64::INFINITY), (0.0, 1.0)],
            labels: vec![
                VarLabel::Flow { tx: 0, rx: 1 },
                VarLabel::Activation { tx: 0, rx: 1 },
            ],
        };
        let text = prob.to_lp_text();
        assert!(text.contains("Maximize"));
        assert!(text.contains("2 F_0_1 - 1 lam_0_1"));
        assert!(text.contains("cap: 1 F_0_1 + 1 lam_0_1 <= 3"));
        assert!(text.contains("0 <= lam_0_1 <= 1"));
        assert!(text.contains("F_0_1 >= 0"));
    }
}
