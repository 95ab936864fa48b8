//! Two-phase primal simplex over a sparse exact tableau with Bland's rule.

use std::cmp::Ordering;

use super::{DualCertificate, LpError, LpOutcome, LpProblem, LpSolution};
use crate::model::RowSense;
use crate::scalar::Scalar;

type SparseRow<T> = Vec<(usize, T)>;

fn lookup<T>(row: &SparseRow<T>, col: usize) -> Option<&T> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|idx| &row[idx].1)
}

/// `target - factor * source`, both sorted by column.
fn axpy<T: Scalar>(target: &SparseRow<T>, factor: &T, source: &SparseRow<T>) -> SparseRow<T> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (target.iter().peekable(), source.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some((ca, va)), Some((cb, vb))) => match ca.cmp(cb) {
                Ordering::Less => {
                    out.push((*ca, va.clone()));
                    a.next();
                }
                Ordering::Greater => {
                    out.push((*cb, -(factor.clone() * vb.clone())));
                    b.next();
                }
                Ordering::Equal => {
                    let v = va.clone() - factor.clone() * vb.clone();
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    a.next();
                    b.next();
                }
            },
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                a.next();
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, -(factor.clone() * vb.clone())));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

struct Tableau<T> {
    rows: Vec<SparseRow<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Reduced costs; `z = sum_j obj_j x_j - obj_rhs`.
    obj: SparseRow<T>,
    obj_rhs: T,
    /// Columns at or beyond this index are artificial.
    artificial_start: usize,
    pivots: usize,
}

enum Phase {
    One,
    Two,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, e: usize) {
        let piv = lookup(&self.rows[r], e).cloned().expect("pivot on zero entry");
        if !piv.is_one() {
            for (_, v) in self.rows[r].iter_mut() {
                *v = v.clone() / piv.clone();
            }
            self.rhs[r] = self.rhs[r].clone() / piv;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            if let Some(a) = lookup(&self.rows[i], e).cloned() {
                self.rows[i] = axpy(&self.rows[i], &a, &prow);
                self.rhs[i] = self.rhs[i].clone() - a * prhs.clone();
            }
        }
        if let Some(d) = lookup(&self.obj, e).cloned() {
            self.obj = axpy(&self.obj, &d, &prow);
            self.obj_rhs = self.obj_rhs.clone() - d * prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Replaces the objective row by `costs` expressed in nonbasic columns.
    fn load_costs(&mut self, costs: &SparseRow<T>) {
        self.obj = costs.clone();
        self.obj_rhs = T::zero();
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if let Some(cb) = lookup(costs, b).cloned() {
                self.obj = axpy(&self.obj, &cb, &self.rows[r]);
                self.obj_rhs = self.obj_rhs.clone() - cb * self.rhs[r].clone();
            }
        }
    }

    fn run(&mut self, phase: Phase) -> Step {
        loop {
            // Bland: lowest-index improving column.
            let entering = self.obj.iter().find(|(j, d)| {
                d.is_negative()
                    && match phase {
                        Phase::One => true,
                        Phase::Two => *j < self.artificial_start,
                    }
            });
            let Some((e, _)) = entering else {
                return Step::Optimal;
            };
            let e = *e;
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let Some(a) = lookup(&self.rows[r], e) else { continue };
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => match ratio.cmp(lratio) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[r] < self.basis[*lr],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return Step::Unbounded,
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }
}

/// Kind of the unit column attached to an internal row.
enum RowOrigin {
    /// Original row `i`, multiplied by `sign` to make the right-hand side nonnegative.
    Original {
        sign_flipped: bool,
    },
    Bound,
}

/// Solves `problem` exactly.
pub fn solve<T: Scalar>(problem: &LpProblem<T>) -> Result<LpOutcome<T>, LpError> {
    problem.check()?;
    let n = problem.columns.len();
    let fixed: Vec<bool> = problem.columns.iter().map(|c| c.hi.as_ref() == Some(&c.lo)).collect();

    // Shift columns to x' = x - lo >= 0 and gather internal rows.
    let mut internal: Vec<(SparseRow<T>, RowSense, T, RowOrigin)> = Vec::new();
    for row in &problem.rows {
        let mut coeffs: SparseRow<T> = Vec::with_capacity(row.coeffs.len());
        let mut sorted = row.coeffs.clone();
        sorted.sort_by_key(|(c, _)| *c);
        for (c, a) in sorted {
            match coeffs.last_mut() {
                Some((lc, la)) if *lc == c => *la = la.clone() + a,
                _ => coeffs.push((c, a)),
            }
        }
        coeffs.retain(|(_, a)| !a.is_zero());
        // Fixed columns only contribute through the shift.
        let shift = coeffs.iter().fold(T::zero(), |acc, (c, a)| acc + a.clone() * problem.columns[*c].lo.clone());
        let rhs = row.rhs.clone() - shift;
        coeffs.retain(|(c, _)| !fixed[*c]);
        internal.push((coeffs, row.sense, rhs, RowOrigin::Original { sign_flipped: false }));
    }
    for (j, col) in problem.columns.iter().enumerate() {
        if let Some(hi) = col.hi.as_ref().filter(|_| !fixed[j]) {
            internal.push((vec![(j, T::one())], RowSense::Le, hi.clone() - col.lo.clone(), RowOrigin::Bound));
        }
    }
    for (coeffs, sense, rhs, origin) in internal.iter_mut() {
        // Negate rows with negative right-hand side, and `>= 0` rows so their
        // slack can start in the basis.
        if rhs.is_negative() || (rhs.is_zero() && *sense == RowSense::Ge) {
            for (_, a) in coeffs.iter_mut() {
                *a = -a.clone();
            }
            *rhs = -rhs.clone();
            *sense = match *sense {
                RowSense::Le => RowSense::Ge,
                RowSense::Ge => RowSense::Le,
                RowSense::Eq => RowSense::Eq,
            };
            if let RowOrigin::Original { sign_flipped } = origin {
                *sign_flipped = true;
            }
        }
    }

    // Column layout: structural, then slack/surplus, then artificial.
    let m = internal.len();
    let slack_count = internal.iter().filter(|(_, s, _, _)| *s != RowSense::Eq).count();
    let artificial_start = n + slack_count;
    let mut next_slack = n;
    let mut next_art = artificial_start;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut unit_col = Vec::with_capacity(m);
    for (coeffs, sense, b, _) in &internal {
        let mut row = coeffs.clone();
        match sense {
            RowSense::Le => {
                row.push((next_slack, T::one()));
                basis.push(next_slack);
                unit_col.push(next_slack);
                next_slack += 1;
            }
            RowSense::Ge => {
                row.push((next_slack, -T::one()));
                row.push((next_art, T::one()));
                basis.push(next_art);
                unit_col.push(next_art);
                next_slack += 1;
                next_art += 1;
            }
            RowSense::Eq => {
                row.push((next_art, T::one()));
                basis.push(next_art);
                unit_col.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
        rhs.push(b.clone());
    }

    let mut tab = Tableau { rows, rhs, basis, obj: Vec::new(), obj_rhs: T::zero(), artificial_start, pivots: 0 };

    if next_art > artificial_start {
        let phase1: SparseRow<T> = (artificial_start..next_art).map(|j| (j, T::one())).collect();
        tab.load_costs(&phase1);
        tab.run(Phase::One);
        if (-tab.obj_rhs.clone()).is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if tab.basis[r] >= artificial_start {
                let replacement =
                    tab.rows[r].iter().find(|(j, a)| *j < artificial_start && !a.is_zero()).map(|(j, _)| *j);
                if let Some(j) = replacement {
                    tab.pivot(r, j);
                }
            }
        }
    }

    let costs: SparseRow<T> = problem.min_costs().into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    tab.load_costs(&costs);
    if let Step::Unbounded = tab.run(Phase::Two) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point: Vec<T> = problem.columns.iter().map(|c| c.lo.clone()).collect();
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = point[b].clone() + tab.rhs[r].clone();
        }
    }

    let mut row_duals = Vec::with_capacity(problem.rows.len());
    for (r, (_, _, _, origin)) in internal.iter().enumerate() {
        if let RowOrigin::Original { sign_flipped } = origin {
            let d = lookup(&tab.obj, unit_col[r]).cloned().unwrap_or_else(T::zero);
            let pi = -d;
            row_duals.push(if *sign_flipped { -pi } else { pi });
        }
    }

    let value = problem.objective_at(&point);
    let solution = LpSolution { value, point, certificate: DualCertificate { row_duals }, pivots: tab.pivots };
    debug_assert!(super::verify_optimal(problem, &solution), "simplex produced an uncertified optimum");
    Ok(LpOutcome::Optimal(solution))
}

#[cfg(test)]
mod tests {
    use super::super::{verify_optimal, Direction, LpStatus};
    use super::*;
    use crate::Rational;
    use num_rational::Rational64;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn crossing_point_of_tent() {
        // max y s.t. y <= x, y <= 1 - x
        let mut p = LpProblem::new(Direction::Maximize);
        let x = p.add_unit_column("x");
        let y = p.add_unit_column("y");
        p.add_row(vec![(y, q(1, 1)), (x, q(-1, 1))], RowSense::Le, q(0, 1));
        p.add_row(vec![(y, q(1, 1)), (x, q(1, 1))], RowSense::Le, q(1, 1));
        p.set_objective(Direction::Maximize, vec![(y, q(1, 1))]);
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert_eq!(sol.value, q(1, 2));
        assert_eq!(sol.point, vec![q(1, 2), q(1, 2)]);
        assert!(verify_optimal(&p, &sol));
    }

    #[test]
    fn simple_packing() {
        let mut p = LpProblem::new(Direction::Maximize);
        let a = p.add_unit_column("a");
        let b = p.add_unit_column("b");
        p.add_row(vec![(a, q(1, 1)), (b, q(1, 1))], RowSense::Le, q(1, 1));
        p.set_objective(Direction::Maximize, vec![(a, q(1, 1)), (b, q(1, 1))]);
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert_eq!(sol.value, q(1, 1));
        assert!(verify_optimal(&p, &sol));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut p = LpProblem::<Rational>::new(Direction::Minimize);
        let a = p.add_unit_column("a");
        p.add_row(vec![(a, q(1, 1))], RowSense::Ge, q(2, 1));
        assert_eq!(solve(&p).unwrap().status(), LpStatus::Infeasible);

        let mut p = LpProblem::<Rational>::new(Direction::Maximize);
        let a = p.add_column("a", q(0, 1), None);
        let b = p.add_column("b", q(-3, 1), None);
        p.add_row(vec![(a, q(1, 1)), (b, q(-1, 1))], RowSense::Le, q(1, 1));
        p.set_objective(Direction::Maximize, vec![(a, q(1, 1))]);
        assert_eq!(solve(&p).unwrap().status(), LpStatus::Unbounded);
    }

    #[test]
    fn equalities_negative_rhs_and_shifted_bounds() {
        // min a + 2b s.t. a - b = -1, a in [-2, 5], b in [1, 3]
        let mut p = LpProblem::new(Direction::Minimize);
        let a = p.add_column("a", q(-2, 1), Some(q(5, 1)));
        let b = p.add_column("b", q(1, 1), Some(q(3, 1)));
        p.add_row(vec![(a, q(1, 1)), (b, q(-1, 1))], RowSense::Eq, q(-1, 1));
        p.set_objective(Direction::Minimize, vec![(a, q(1, 1)), (b, q(2, 1))]);
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert_eq!(sol.point, vec![q(0, 1), q(1, 1)]);
        assert_eq!(sol.value, q(2, 1));
        assert!(verify_optimal(&p, &sol));
    }

    #[test]
    fn redundant_equations_are_tolerated() {
        let mut p = LpProblem::new(Direction::Maximize);
        let a = p.add_unit_column("a");
        let b = p.add_unit_column("b");
        p.add_row(vec![(a, q(1, 1)), (b, q(1, 1))], RowSense::Eq, q(1, 1));
        p.add_row(vec![(a, q(2, 1)), (b, q(2, 1))], RowSense::Eq, q(2, 1));
        p.add_row(vec![], RowSense::Eq, q(0, 1));
        p.set_objective(Direction::Maximize, vec![(a, q(3, 1)), (b, q(1, 1))]);
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert_eq!(sol.value, q(3, 1));
        assert!(verify_optimal(&p, &sol));
    }

    #[test]
    fn works_over_rational64() {
        let mut p = LpProblem::new(Direction::Maximize);
        let x = p.add_unit_column("x");
        let y = p.add_unit_column("y");
        p.add_row(
            vec![(x, Rational64::from_int(3)), (y, Rational64::from_int(2))],
            RowSense::Le,
            Rational64::from_int(4),
        );
        p.set_objective(Direction::Maximize, vec![(x, Rational64::from_int(1)), (y, Rational64::from_int(1))]);
        let sol = solve(&p).unwrap().optimal().unwrap();
        assert_eq!(sol.value, Rational64::from_ratio(5, 3));
        assert!(verify_optimal(&p, &sol));
    }

    #[test]
    fn malformed_problem_is_rejected() {
        let mut p = LpProblem::<Rational>::new(Direction::Minimize);
        p.add_column("a", q(1, 1), Some(q(0, 1)));
        assert_eq!(solve(&p), Err(LpError::EmptyBounds(0)));
        let mut p = LpProblem::<Rational>::new(Direction::Minimize);
        p.add_row(vec![(3, q(1, 1))], RowSense::Le, q(1, 1));
        assert!(matches!(solve(&p), Err(LpError::UnknownColumn { .. })));
    }
}
