//! Bounded-variable primal simplex.
//!
//! Dense revised simplex with an explicit basis inverse. Nonbasic
//! variables rest at their lower or upper bound; the ratio test allows
//! bound flips. Pricing is Dantzig (most favorable reduced cost, lowest
//! index on ties) and switches permanently to Bland's rule after a run of
//! degenerate steps, which guarantees termination. Two phases: phase 1
//! drives artificial variables to zero when the slack basis is not
//! feasible on its own; phase 2 optimizes the caller's objective.
//!
//! The solver certifies its own answer: before returning, the point is
//! checked against every row and bound, and a violation reports a
//! numerical failure instead of a silently wrong result.

// Dense kernels below index rows and columns on purpose; zip chains hide
// the pivot/row structure the algorithm is written around.
#![allow(clippy::needless_range_loop)]

use crate::lp::{LpError, LpProblem, LpSolution, LpStatus, Relation};
use crate::FEAS_EPS;

/// Reduced-cost tolerance for optimality.
const COST_EPS: f64 = 1e-10;
/// Minimum acceptable pivot magnitude.
const PIVOT_EPS: f64 = 1e-9;
/// Ratio-test tie tolerance.
const RATIO_TIE_EPS: f64 = 1e-10;
/// A step below this counts as degenerate.
const DEGENERATE_STEP: f64 = 1e-11;
/// Rebuild the basis inverse this often.
const REFACTOR_PERIOD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    m: usize,
    n_total: usize,
    n_structural: usize,
    /// Column-major constraint matrix, each column of length `m`.
    cols: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    state: Vec<VarState>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    /// Dense basis inverse, row-major `m x m`.
    binv: Vec<f64>,
    /// Current values of all variables.
    x: Vec<f64>,
    /// First artificial column, `n_total` if none.
    first_artificial: usize,
    bland: bool,
    degenerate_run: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

/// Solves `prob` to proven optimality, infeasibility, or unboundedness.
pub fn solve(prob: &LpProblem) -> Result<LpSolution, LpError> {
    prob.check()?;
    let mut t = Tableau::build(prob);

    if t.first_artificial < t.n_total {
        // Phase 1: maximize minus the sum of artificials.
        let mut phase1 = vec![0.0; t.n_total];
        for c in phase1.iter_mut().skip(t.first_artificial) {
            *c = -1.0;
        }
        match t.iterate(&phase1)? {
            Step::Optimal => {}
            Step::Unbounded => {
                return Err(LpError::NumericalFailure {
                    reason: "phase 1 reported unbounded".into(),
                })
            }
        }
        let infeasibility: f64 = t.x[t.first_artificial..].iter().sum();
        let scale = 1.0 + t.rhs.iter().map(|b| b.abs()).fold(0.0, f64::max);
        if infeasibility > FEAS_EPS * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                value: 0.0,
                point: vec![],
            });
        }
        // Pin artificials at zero for phase 2.
        for j in t.first_artificial..t.n_total {
            t.upper[j] = 0.0;
            t.x[j] = 0.0;
        }
    }

    let mut phase2 = vec![0.0; t.n_total];
    phase2[..t.n_structural].copy_from_slice(&prob.objective);
    t.degenerate_run = 0;
    match t.iterate(&phase2)? {
        Step::Optimal => {}
        Step::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: f64::INFINITY,
                point: vec![],
            });
        }
    }

    t.certify(prob)?;
    let point: Vec<f64> = t.x[..t.n_structural].to_vec();
    let value = prob
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        point,
    })
}

impl Tableau {
    fn build(prob: &LpProblem) -> Self {
        let m = prob.rows.len();
        let n_structural = prob.n_vars();

        let mut cols: Vec<Vec<f64>> = (0..n_structural)
            .map(|j| prob.rows.iter().map(|r| r.coeffs[j]).collect())
            .collect();
        let mut lower: Vec<f64> = prob.bounds.iter().map(|b| b.0).collect();
        let mut upper: Vec<f64> = prob.bounds.iter().map(|b| b.1).collect();
        let mut x: Vec<f64> = lower.clone();
        let mut state = vec![VarState::AtLower; n_structural];

        // Residual of each row at the all-at-lower-bound point.
        let mut residual: Vec<f64> = prob.rows.iter().map(|r| r.rhs).collect();
        for (j, col) in cols.iter().enumerate() {
            if x[j] != 0.0 {
                for (i, a) in col.iter().enumerate() {
                    residual[i] -= a * x[j];
                }
            }
        }

        let mut basis = vec![usize::MAX; m];
        let push_unit_col = |cols: &mut Vec<Vec<f64>>, row: usize, sign: f64| -> usize {
            let mut col = vec![0.0; m];
            col[row] = sign;
            cols.push(col);
            cols.len() - 1
        };

        // Slacks; where the slack value would be negative, remember that
        // the row still needs an artificial.
        let mut needs_artificial: Vec<Option<f64>> = vec![None; m];
        for (i, row) in prob.rows.iter().enumerate() {
            match row.relation {
                Relation::Le => {
                    let j = push_unit_col(&mut cols, i, 1.0);
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                    if residual[i] >= 0.0 {
                        basis[i] = j;
                        state.push(VarState::Basic);
                        x.push(residual[i]);
                    } else {
                        state.push(VarState::AtLower);
                        x.push(0.0);
                        needs_artificial[i] = Some(residual[i]);
                    }
                }
                Relation::Ge => {
                    let j = push_unit_col(&mut cols, i, -1.0);
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                    if residual[i] <= 0.0 {
                        basis[i] = j;
                        state.push(VarState::Basic);
                        x.push(-residual[i]);
                    } else {
                        state.push(VarState::AtLower);
                        x.push(0.0);
                        needs_artificial[i] = Some(residual[i]);
                    }
                }
                Relation::Eq => {
                    needs_artificial[i] = Some(residual[i]);
                }
            }
        }

        let first_artificial = cols.len();
        for (i, r) in needs_artificial.iter().enumerate() {
            if let Some(r) = r {
                let sign = if *r >= 0.0 { 1.0 } else { -1.0 };
                let j = push_unit_col(&mut cols, i, sign);
                lower.push(0.0);
                upper.push(f64::INFINITY);
                basis[i] = j;
                state.push(VarState::Basic);
                x.push(r.abs());
            }
        }

        let n_total = cols.len();
        let mut t = Self {
            m,
            n_total,
            n_structural,
            cols,
            rhs: prob.rows.iter().map(|r| r.rhs).collect(),
            lower,
            upper,
            state,
            basis,
            binv: Vec::new(),
            x,
            first_artificial,
            bland: false,
            degenerate_run: 0,
        };
        t.refactor().expect("initial basis is triangular");
        t
    }

    /// Rebuilds `binv` from the basis columns and recomputes basic values.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        if m == 0 {
            return Ok(());
        }
        // Gauss-Jordan with partial pivoting on [B | I].
        let mut a = vec![0.0; m * m];
        for (r, &bv) in self.basis.iter().enumerate() {
            debug_assert_ne!(bv, usize::MAX);
            for i in 0..m {
                a[i * m + r] = self.cols[bv][i];
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * m + col].abs();
            for r in (col + 1)..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                return Err(LpError::NumericalFailure {
                    reason: "singular basis during refactorization".into(),
                });
            }
            if piv != col {
                for j in 0..m {
                    a.swap(col * m + j, piv * m + j);
                    inv.swap(col * m + j, piv * m + j);
                }
            }
            let d = a[col * m + col];
            for j in 0..m {
                a[col * m + j] /= d;
                inv[col * m + j] /= d;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r * m + col];
                    if f != 0.0 {
                        for j in 0..m {
                            a[r * m + j] -= f * a[col * m + j];
                            inv[r * m + j] -= f * inv[col * m + j];
                        }
                    }
                }
            }
        }
        self.binv = inv;

        // x_B = Binv (b - sum over nonbasic of A_j x_j).
        let mut r = self.rhs.clone();
        for j in 0..self.n_total {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                for i in 0..m {
                    r[i] -= self.cols[j][i] * self.x[j];
                }
            }
        }
        for i in 0..m {
            let mut v = 0.0;
            for k in 0..m {
                v += self.binv[i * m + k] * r[k];
            }
            self.x[self.basis[i]] = v;
        }
        Ok(())
    }

    fn iterate(&mut self, costs: &[f64]) -> Result<Step, LpError> {
        let max_iter = 200 * (self.m + self.n_total) + 2000;
        for iter in 0..max_iter {
            if iter > 0 && iter % REFACTOR_PERIOD == 0 {
                self.refactor()?;
            }
            // y = c_B^T Binv
            let m = self.m;
            let mut y = vec![0.0; m];
            for (r, &bv) in self.basis.iter().enumerate() {
                let cb = costs[bv];
                if cb != 0.0 {
                    for k in 0..m {
                        y[k] += cb * self.binv[r * m + k];
                    }
                }
            }

            let entering = self.price(costs, &y);
            let Some(e) = entering else {
                return Ok(Step::Optimal);
            };

            // w = Binv A_e
            let mut w = vec![0.0; m];
            for i in 0..m {
                let mut v = 0.0;
                for k in 0..m {
                    v += self.binv[i * m + k] * self.cols[e][k];
                }
                w[i] = v;
            }
            let dir = if self.state[e] == VarState::AtLower {
                1.0
            } else {
                -1.0
            };

            // Ratio test: smallest blocking step. Ties prefer the larger
            // pivot magnitude (stability), then the smaller variable
            // index; in Bland mode strictly the smallest variable index.
            let flip_limit = self.upper[e] - self.lower[e];
            let mut t_best = flip_limit; // may be infinite
            let mut leaving: Option<(usize, VarState, f64)> = None;
            for i in 0..m {
                let g = -dir * w[i]; // d(x_basic_i)/dt
                let bv = self.basis[i];
                let candidate = if g > PIVOT_EPS {
                    self.upper[bv]
                        .is_finite()
                        .then(|| (((self.upper[bv] - self.x[bv]) / g).max(0.0), VarState::AtUpper))
                } else if g < -PIVOT_EPS {
                    Some((((self.lower[bv] - self.x[bv]) / g).max(0.0), VarState::AtLower))
                } else {
                    None
                };
                let Some((ti, hit)) = candidate else { continue };
                let better = if ti < t_best - RATIO_TIE_EPS {
                    true
                } else if ti < t_best + RATIO_TIE_EPS {
                    match &leaving {
                        None => true,
                        Some((cur_row, _, cur_mag)) => {
                            if self.bland {
                                bv < self.basis[*cur_row]
                            } else if w[i].abs() > *cur_mag + RATIO_TIE_EPS {
                                true
                            } else if (w[i].abs() - *cur_mag).abs() <= RATIO_TIE_EPS {
                                bv < self.basis[*cur_row]
                            } else {
                                false
                            }
                        }
                    }
                } else {
                    false
                };
                if better {
                    t_best = ti.min(t_best);
                    leaving = Some((i, hit, w[i].abs()));
                }
            }

            if !t_best.is_finite() && leaving.is_none() {
                return Ok(Step::Unbounded);
            }

            self.degenerate_run = if t_best <= DEGENERATE_STEP {
                self.degenerate_run + 1
            } else {
                0
            };
            if self.degenerate_run > 4 * (self.m + self.n_total) {
                self.bland = true;
            }

            let leaving = leaving.map(|(row, st, _)| (row, st));
            match leaving {
                None => {
                    // Bound flip: entering jumps to its opposite bound.
                    let t = flip_limit;
                    for i in 0..m {
                        let g = -dir * w[i];
                        if g != 0.0 {
                            let bv = self.basis[i];
                            self.x[bv] += g * t;
                        }
                    }
                    self.state[e] = if dir > 0.0 {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                    self.x[e] = if dir > 0.0 {
                        self.upper[e]
                    } else {
                        self.lower[e]
                    };
                }
                Some((row, leave_state)) => {
                    if w[row].abs() < PIVOT_EPS {
                        // The chosen pivot is numerically unusable; rebuild
                        // and fail if the basis really is that ill.
                        self.refactor()?;
                        return Err(LpError::NumericalFailure {
                            reason: format!("pivot {:.3e} too small", w[row]),
                        });
                    }
                    let t = t_best;
                    for i in 0..m {
                        let g = -dir * w[i];
                        if g != 0.0 {
                            let bv = self.basis[i];
                            self.x[bv] += g * t;
                        }
                    }
                    let leave_var = self.basis[row];
                    // Snap the leaving variable onto its bound exactly.
                    self.x[leave_var] = match leave_state {
                        VarState::AtLower => self.lower[leave_var],
                        VarState::AtUpper => self.upper[leave_var],
                        VarState::Basic => unreachable!(),
                    };
                    self.state[leave_var] = leave_state;
                    self.x[e] += dir * t;
                    self.state[e] = VarState::Basic;
                    self.basis[row] = e;
                    self.update_binv(row, &w)?;
                }
            }
        }
        Err(LpError::IterationLimit {
            iterations: max_iter,
        })
    }

    /// Rank-one update of the basis inverse after pivoting `row`.
    fn update_binv(&mut self, row: usize, w: &[f64]) -> Result<(), LpError> {
        let m = self.m;
        let piv = w[row];
        if piv.abs() < PIVOT_EPS {
            return Err(LpError::NumericalFailure {
                reason: "vanishing pivot in basis update".into(),
            });
        }
        for j in 0..m {
            self.binv[row * m + j] /= piv;
        }
        for i in 0..m {
            if i != row && w[i] != 0.0 {
                let f = w[i];
                for j in 0..m {
                    self.binv[i * m + j] -= f * self.binv[row * m + j];
                }
            }
        }
        Ok(())
    }

    /// Chooses the entering variable, or `None` at optimality.
    fn price(&self, costs: &[f64], y: &[f64]) -> Option<usize> {
        let m = self.m;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n_total {
            let st = self.state[j];
            if st == VarState::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let mut d = costs[j];
            for i in 0..m {
                let a = self.cols[j][i];
                if a != 0.0 {
                    d -= y[i] * a;
                }
            }
            let eligible = match st {
                VarState::AtLower => d > COST_EPS,
                VarState::AtUpper => d < -COST_EPS,
                VarState::Basic => false,
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            let score = d.abs();
            match best {
                Some((_, s)) if s >= score => {}
                _ => best = Some((j, score)),
            }
        }
        best.map(|(j, _)| j)
    }

    /// Final certification: the returned point must satisfy every row and
    /// bound within tolerance.
    fn certify(&self, prob: &LpProblem) -> Result<(), LpError> {
        let scale = 1.0
            + prob
                .rows
                .iter()
                .map(|r| r.rhs.abs())
                .fold(0.0, f64::max);
        for (j, &(lo, hi)) in prob.bounds.iter().enumerate() {
            let v = self.x[j];
            if v < lo - FEAS_EPS * scale || v > hi + FEAS_EPS * scale {
                return Err(LpError::NumericalFailure {
                    reason: format!("variable {j} = {v} violates bounds [{lo}, {hi}]"),
                });
            }
        }
        for (i, row) in prob.rows.iter().enumerate() {
            let lhs: f64 = row
                .coeffs
                .iter()
                .zip(&self.x[..self.n_structural])
                .map(|(a, x)| a * x)
                .sum();
            let ok = match row.relation {
                Relation::Le => lhs <= row.rhs + FEAS_EPS * scale,
                Relation::Ge => lhs >= row.rhs - FEAS_EPS * scale,
                Relation::Eq => (lhs - row.rhs).abs() <= FEAS_EPS * scale,
            };
            if !ok {
                return Err(LpError::NumericalFailure {
                    reason: format!(
                        "row {} ({}) violated: lhs {lhs}, rhs {}",
                        i, row.name, row.rhs
                    ),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LpRow, VarLabel};

    fn row(name: &str, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> LpRow {
        LpRow::new(name, coeffs, relation, rhs)
    }

    fn prob(
        objective: Vec<f64>,
        rows: Vec<LpRow>,
        bounds: Vec<(f64, f64)>,
    ) -> LpProblem {
        let labels = (0..objective.len()).map(VarLabel::PathUse).collect();
        LpProblem {
            objective,
            rows,
            bounds,
            labels,
        }
    }

    #[test]
    fn one_dimensional() {
        let p = prob(
            vec![1.0],
            vec![row("c", vec![1.0], Relation::Le, 3.0)],
            vec![(0.0, f64::INFINITY)],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_optimum_face() {
        let p = prob(
            vec![1.0, 1.0],
            vec![row("c", vec![1.0, 1.0], Relation::Le, 1.0)],
            vec![(0.0, f64::INFINITY); 2],
        );
        let s = solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let p = prob(
            vec![1.0],
            vec![row("c", vec![1.0], Relation::Le, -1.0)],
            vec![(0.0, f64::INFINITY)],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let p = prob(vec![1.0], vec![], vec![(0.0, f64::INFINITY)]);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn upper_bound_binds_without_rows() {
        let p = prob(vec![2.0], vec![], vec![(0.0, 1.5)]);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 3.0).abs() < 1e-9);
        assert!((s.point[0] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn equality_row_uses_phase_one() {
        // max x + 2y subject to x + y = 1.
        let p = prob(
            vec![1.0, 2.0],
            vec![row("eq", vec![1.0, 1.0], Relation::Eq, 1.0)],
            vec![(0.0, f64::INFINITY); 2],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 2.0).abs() < 1e-9);
        assert!((s.point[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ge_row_uses_phase_one() {
        // max -x subject to x >= 2.
        let p = prob(
            vec![-1.0],
            vec![row("ge", vec![1.0], Relation::Ge, 2.0)],
            vec![(0.0, f64::INFINITY)],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value + 2.0).abs() < 1e-9);
    }

    #[test]
    fn bound_flip_reaches_optimum() {
        // max x + y with x - y <= 0.25, both in [0, 1]; optimum (1, 1).
        let p = prob(
            vec![1.0, 1.0],
            vec![row("c", vec![1.0, -1.0], Relation::Le, 0.25)],
            vec![(0.0, 1.0); 2],
        );
        let s = solve(&p).unwrap();
        assert!((s.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_relations() {
        // max 3x + 2y - z
        //   x + y + z <= 10
        //   x - y >= -4
        //   z = 2
        let p = prob(
            vec![3.0, 2.0, -1.0],
            vec![
                row("r0", vec![1.0, 1.0, 1.0], Relation::Le, 10.0),
                row("r1", vec![1.0, -1.0, 0.0], Relation::Ge, -4.0),
                row("r2", vec![0.0, 0.0, 1.0], Relation::Eq, 2.0),
            ],
            vec![(0.0, f64::INFINITY); 3],
        );
        let s = solve(&p).unwrap();
        // z fixed at 2 leaves x + y <= 8; x pays more, so (8, 0, 2) -> 22.
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 22.0).abs() < 1e-8, "value {}", s.value);
        assert!((s.point[0] - 8.0).abs() < 1e-8);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Classic cycling instance for textbook pivoting rules; the Bland
        // fallback must terminate at value 0.05.
        let p = prob(
            vec![0.75, -150.0, 0.02, -6.0],
            vec![
                row(
                    "r0",
                    vec![0.25, -60.0, -1.0 / 25.0, 9.0],
                    Relation::Le,
                    0.0,
                ),
                row("r1", vec![0.5, -90.0, -1.0 / 50.0, 3.0], Relation::Le, 0.0),
                row("r2", vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0),
            ],
            vec![(0.0, f64::INFINITY); 4],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 0.05).abs() < 1e-9, "value {}", s.value);
    }

    #[test]
    fn fixed_variables_stay_fixed() {
        let p = prob(
            vec![1.0, 1.0],
            vec![row("c", vec![1.0, 1.0], Relation::Le, 5.0)],
            vec![(2.0, 2.0), (0.0, f64::INFINITY)],
        );
        let s = solve(&p).unwrap();
        assert!((s.point[0] - 2.0).abs() < 1e-9);
        assert!((s.value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_from_equalities() {
        let p = prob(
            vec![0.0, 0.0],
            vec![
                row("a", vec![1.0, 1.0], Relation::Eq, 1.0),
                row("b", vec![1.0, 1.0], Relation::Eq, 2.0),
            ],
            vec![(0.0, f64::INFINITY); 2],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    /// Brute-force oracle for two-variable LPs: enumerate all constraint
    /// and bound intersections and take the best feasible point.
    fn oracle_2d(p: &LpProblem) -> Option<f64> {
        let mut lines: Vec<(f64, f64, f64)> = Vec::new(); // a x + b y = c
        for r in &p.rows {
            lines.push((r.coeffs[0], r.coeffs[1], r.rhs));
        }
        for (j, &(lo, hi)) in p.bounds.iter().enumerate() {
            let (a, b) = if j == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
            lines.push((a, b, lo));
            if hi.is_finite() {
                lines.push((a, b, hi));
            }
        }
        let feasible = |x: f64, y: f64| -> bool {
            if !(x.is_finite() && y.is_finite()) {
                return false;
            }
            let e = 1e-7;
            let (b0, b1) = (p.bounds[0], p.bounds[1]);
            if x < b0.0 - e || x > b0.1 + e || y < b1.0 - e || y > b1.1 + e {
                return false;
            }
            p.rows.iter().all(|r| {
                let lhs = r.coeffs[0] * x + r.coeffs[1] * y;
                match r.relation {
                    Relation::Le => lhs <= r.rhs + e,
                    Relation::Ge => lhs >= r.rhs - e,
                    Relation::Eq => (lhs - r.rhs).abs() <= e,
                }
            })
        };
        let mut best: Option<f64> = None;
        let mut consider = |x: f64, y: f64| {
            if feasible(x, y) {
                let v = p.objective[0] * x + p.objective[1] * y;
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        };
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                let (a1, b1, c1) = lines[i];
                let (a2, b2, c2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.abs() > 1e-12 {
                    consider((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
                }
            }
        }
        best
    }

    #[test]
    fn random_2d_instances_match_vertex_enumeration() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for case in 0..200 {
            let n_rows = rng.random_range(1..5usize);
            let rows: Vec<LpRow> = (0..n_rows)
                .map(|i| {
                    let rel = match rng.random_range(0..3u8) {
                        0 => Relation::Le,
                        1 => Relation::Ge,
                        _ => Relation::Eq,
                    };
                    row(
                        &format!("r{i}"),
                        vec![
                            rng.random_range(-3.0..3.0f64),
                            rng.random_range(-3.0..3.0f64),
                        ],
                        rel,
                        rng.random_range(-2.0..4.0f64),
                    )
                })
                .collect();
            let bounds = vec![(0.0, 4.0), (0.0, 4.0)];
            let p = prob(
                vec![
                    rng.random_range(-2.0..2.0f64),
                    rng.random_range(-2.0..2.0f64),
                ],
                rows,
                bounds,
            );
            let got = solve(&p).unwrap();
            let want = oracle_2d(&p);
            match (got.status, want) {
                (LpStatus::Optimal, Some(v)) => {
                    assert!(
                        (got.value - v).abs() <= 1e-6 * (1.0 + v.abs()),
                        "case {case}: got {} want {v}",
                        got.value
                    );
                }
                (LpStatus::Infeasible, None) => {}
                (st, want) => {
                    panic!("case {case}: solver said {st:?}, oracle said {want:?}")
                }
            }
        }
    }
}
