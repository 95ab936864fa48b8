//! Exact linear programming.
//!
//! Problems are solved by a two-phase primal simplex with Bland's rule over
//! an exact scalar type, so optimal values and points carry no rounding
//! error. Every optimal outcome comes with a dual certificate that can be
//! checked independently of the tableau.

mod relax;
mod simplex;

use thiserror::Error;

use crate::model::RowSense;
use crate::scalar::Scalar;

pub use relax::{maximize_violation, relaxation, Violation};
pub use simplex::solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Column with `lo <= x <= hi`; `hi = None` means unbounded above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpColumn<T> {
    pub name: String,
    pub lo: T,
    pub hi: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow<T> {
    pub coeffs: Vec<(usize, T)>,
    pub sense: RowSense,
    pub rhs: T,
}

impl<T: Scalar> LpRow<T> {
    pub fn activity(&self, point: &[T]) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (c, a)| acc + a.clone() * point[*c].clone())
    }

    pub fn is_satisfied(&self, point: &[T]) -> bool {
        self.sense.holds(&self.activity(point), &self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem<T> {
    pub direction: Direction,
    pub columns: Vec<LpColumn<T>>,
    pub rows: Vec<LpRow<T>>,
    pub objective: Vec<(usize, T)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("row {row} references column {col}, but there are only {ncols} columns")]
    UnknownColumn { row: usize, col: usize, ncols: usize },
    #[error("column {0} has lo > hi")]
    EmptyBounds(usize),
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(direction: Direction) -> Self {
        LpProblem { direction, columns: Vec::new(), rows: Vec::new(), objective: Vec::new() }
    }

    pub fn add_column(&mut self, name: impl Into<String>, lo: T, hi: Option<T>) -> usize {
        self.columns.push(LpColumn { name: name.into(), lo, hi });
        self.columns.len() - 1
    }

    /// Column in `[0, 1]`.
    pub fn add_unit_column(&mut self, name: impl Into<String>) -> usize {
        self.add_column(name, T::zero(), Some(T::one()))
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, sense: RowSense, rhs: T) -> usize {
        self.rows.push(LpRow { coeffs, sense, rhs });
        self.rows.len() - 1
    }

    pub fn set_objective(&mut self, direction: Direction, coeffs: Vec<(usize, T)>) {
        self.direction = direction;
        self.objective = coeffs;
    }

    pub fn fix_column(&mut self, col: usize, value: T) {
        self.columns[col].lo = value.clone();
        self.columns[col].hi = Some(value);
    }

    pub fn check(&self) -> Result<(), LpError> {
        let ncols = self.columns.len();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, _) in &row.coeffs {
                if *c >= ncols {
                    return Err(LpError::UnknownColumn { row: r, col: *c, ncols });
                }
            }
        }
        for (c, _) in &self.objective {
            if *c >= ncols {
                return Err(LpError::UnknownColumn { row: usize::MAX, col: *c, ncols });
            }
        }
        for (j, col) in self.columns.iter().enumerate() {
            if let Some(hi) = &col.hi {
                if hi < &col.lo {
                    return Err(LpError::EmptyBounds(j));
                }
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, point: &[T]) -> T {
        self.objective.iter().fold(T::zero(), |acc, (c, a)| acc + a.clone() * point[*c].clone())
    }

    /// Every row and bound holds exactly at `point`.
    pub fn is_feasible(&self, point: &[T]) -> bool {
        point.len() == self.columns.len()
            && self.columns.iter().zip(point).all(|(col, v)| v >= &col.lo && col.hi.as_ref().is_none_or(|hi| v <= hi))
            && self.rows.iter().all(|row| row.is_satisfied(point))
    }

    /// Objective coefficients of the equivalent minimization, dense.
    fn min_costs(&self) -> Vec<T> {
        let mut c = vec![T::zero(); self.columns.len()];
        for (j, a) in &self.objective {
            c[*j] = c[*j].clone() + a.clone();
        }
        if self.direction == Direction::Maximize {
            for v in c.iter_mut() {
                *v = -v.clone();
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimal(self) -> Option<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution<T> {
    pub value: T,
    pub point: Vec<T>,
    pub certificate: DualCertificate<T>,
    pub pivots: usize,
}

/// Row multipliers for the minimization form of the problem (objective
/// negated when maximizing). `>=` rows carry nonnegative multipliers, `<=`
/// rows nonpositive ones, equations are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate<T> {
    pub row_duals: Vec<T>,
}

impl<T: Scalar> DualCertificate<T> {
    /// Lower bound on the minimization-form objective implied by the
    /// multipliers, or `None` if they have the wrong signs or the bound is
    /// `-inf` (a negative reduced cost on a column without upper bound).
    pub fn min_form_bound(&self, problem: &LpProblem<T>) -> Option<T> {
        if self.row_duals.len() != problem.rows.len() {
            return None;
        }
        let mut reduced = problem.min_costs();
        let mut bound = T::zero();
        for (row, y) in problem.rows.iter().zip(&self.row_duals) {
            let sign_ok = match row.sense {
                RowSense::Ge => !y.is_negative(),
                RowSense::Le => !y.is_positive(),
                RowSense::Eq => true,
            };
            if !sign_ok {
                return None;
            }
            if y.is_zero() {
                continue;
            }
            bound = bound + y.clone() * row.rhs.clone();
            for (j, a) in &row.coeffs {
                reduced[*j] = reduced[*j].clone() - y.clone() * a.clone();
            }
        }
        for (col, r) in problem.columns.iter().zip(reduced) {
            if r.is_negative() {
                bound = bound + r * col.hi.clone()?;
            } else if r.is_positive() {
                bound = bound + r * col.lo.clone();
            }
        }
        Some(bound)
    }

    /// The certificate proves `value` optimal for `problem`.
    pub fn certifies(&self, problem: &LpProblem<T>, value: &T) -> bool {
        let target = match problem.direction {
            Direction::Minimize => value.clone(),
            Direction::Maximize => -value.clone(),
        };
        self.min_form_bound(problem).as_ref() == Some(&target)
    }
}

/// The point is feasible, attains the reported value, and the dual
/// certificate matches it.
pub fn verify_optimal<T: Scalar>(problem: &LpProblem<T>, solution: &LpSolution<T>) -> bool {
    problem.is_feasible(&solution.point)
        && problem.objective_at(&solution.point) == solution.value
        && solution.certificate.certifies(problem, &solution.value)
}
