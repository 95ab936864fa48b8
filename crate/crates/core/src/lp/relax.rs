use crate::linearize::{Column, LinearizedModel};
use crate::lp::{solve, Direction, LpError, LpOutcome, LpProblem};
use crate::scalar::Scalar;

/// LP relaxation of a linearized model: every column in `[0, 1]`, columns
/// ordered as in [`LinearizedModel::columns`], one LP row per model row.
/// The objective is left empty.
pub fn relaxation<T: Scalar>(model: &LinearizedModel<T>) -> LpProblem<T> {
    let mut lp = LpProblem::new(Direction::Minimize);
    for col in model.columns() {
        lp.add_unit_column(col.name());
    }
    for row in &model.rows {
        let coeffs = row
            .terms
            .iter()
            .map(|(c, a)| (model.column_index(c).expect("row uses a model column"), a.clone()))
            .collect();
        lp.add_row(coeffs, row.sense, row.rhs.clone());
    }
    lp
}

/// Result of maximizing a linear expression over a relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<T> {
    /// Maximum value and a point attaining it (in column order).
    Max { value: T, point: Vec<T> },
    /// The relaxation is empty.
    Infeasible,
}

impl<T: Scalar> Violation<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Violation::Max { value, .. } => Some(value),
            Violation::Infeasible => None,
        }
    }
}

/// Maximizes `constant + sum a * col` over the relaxation of `model`.
pub fn maximize_violation<T: Scalar>(
    model: &LinearizedModel<T>,
    terms: &[(Column, T)],
    constant: T,
) -> Result<Violation<T>, LpError> {
    let mut lp = relaxation(model);
    let mut objective = Vec::with_capacity(terms.len());
    for (c, a) in terms {
        let idx = model.column_index(c).ok_or(LpError::UnknownColumn {
            row: usize::MAX,
            col: usize::MAX,
            ncols: lp.columns.len(),
        })?;
        objective.push((idx, a.clone()));
    }
    lp.set_objective(Direction::Maximize, objective);
    Ok(match solve(&lp)? {
        LpOutcome::Optimal(sol) => Violation::Max { value: sol.value + constant, point: sol.point },
        LpOutcome::Infeasible => Violation::Infeasible,
        // All columns are bounded.
        LpOutcome::Unbounded => unreachable!("bounded relaxation reported unbounded"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Membership, MultiplierAssignment, MultiplierKind};
    use crate::linearize::{compact_linearize, glover_woolsey};
    use crate::model::{BqpInstance, ConstraintSense, ProductPair, SideConstraint, VarId};
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn assignment_instance() -> BqpInstance<Rational> {
        BqpInstance::new(2)
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
            .with_product(1, 2)
    }

    #[test]
    fn compact_rows_pin_product_to_zero() {
        let inst = assignment_instance();
        let design = MultiplierAssignment::from_memberships(
            1,
            [1, 2].map(|j| Membership { k: 1, kind: MultiplierKind::Equation, j: VarId(j) }),
        );
        let model = compact_linearize(&inst, &design).unwrap();
        let y = Column::Y(ProductPair::from_indices(1, 2));
        let x1 = Column::X(VarId(1));
        let v = maximize_violation(&model, &[(y, r(1)), (x1, r(-1))], r(0)).unwrap();
        assert_eq!(v.value(), Some(&r(0)));
        let v = maximize_violation(&model, &[(y, r(1))], r(0)).unwrap();
        assert_eq!(v.value(), Some(&r(0)));
    }

    #[test]
    fn gw_lower_bound_is_tight() {
        let inst = assignment_instance();
        let model = glover_woolsey(&inst);
        let y = Column::Y(ProductPair::from_indices(1, 2));
        let terms = [(Column::X(VarId(1)), r(1)), (Column::X(VarId(2)), r(1)), (y, r(-1))];
        let v = maximize_violation(&model, &terms, r(-1)).unwrap();
        assert_eq!(v.value(), Some(&r(0)));
    }

    #[test]
    fn empty_row_set_allows_full_violation() {
        let model = glover_woolsey(&assignment_instance()).filtered(|_| false);
        let y = Column::Y(ProductPair::from_indices(1, 2));
        let v = maximize_violation(&model, &[(y, r(1)), (Column::X(VarId(1)), r(-1))], r(0)).unwrap();
        assert_eq!(v.value(), Some(&r(1)));
    }
}
