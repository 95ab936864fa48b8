use std::fmt;

use crate::cover::MultiplierAssignment;
use crate::linearize::{check_conditions, compact_linearize_unchecked, induce_products, Column, RowTag};
use crate::lp::{maximize_violation, Violation};
use crate::model::{BqpInstance, ProductPair};
use crate::scalar::Scalar;

use super::VerifyError;

/// Constraint structures for which the compact relaxation is known to imply
/// the Glover–Woolsey inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceCase {
    /// Equations with unit coefficients and right-hand side 1.
    Assignment,
    /// Inequalities with unit coefficients and right-hand side 1, consistent design.
    Knapsack,
    /// Equations with unit coefficients, right-hand side 2 and `B_k = A_k`.
    DoubleSelection,
}

impl fmt::Display for DominanceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DominanceCase::Assignment => "assignment",
            DominanceCase::Knapsack => "knapsack",
            DominanceCase::DoubleSelection => "double-selection",
        })
    }
}

/// One Glover–Woolsey inequality, written as `expression <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GwInequality {
    /// `y_ij - x_i <= 0`.
    UpperFirst,
    /// `y_ij - x_j <= 0`.
    UpperSecond,
    /// `x_i + x_j - 1 - y_ij <= 0`.
    Lower,
}

impl GwInequality {
    pub const ALL: [GwInequality; 3] = [GwInequality::UpperFirst, GwInequality::UpperSecond, GwInequality::Lower];

    /// Terms and constant of the expression that must stay `<= 0`.
    pub fn expression<T: Scalar>(self, pair: ProductPair) -> (Vec<(Column, T)>, T) {
        let (y, xi, xj) = (Column::Y(pair), Column::X(pair.i), Column::X(pair.j));
        let (one, neg) = (T::one(), -T::one());
        match self {
            GwInequality::UpperFirst => (vec![(y, one), (xi, neg)], T::zero()),
            GwInequality::UpperSecond => (vec![(y, one), (xj, neg)], T::zero()),
            GwInequality::Lower => (vec![(xi, one.clone()), (xj, one), (y, neg.clone())], neg),
        }
    }

    pub fn describe(self, pair: ProductPair) -> String {
        let (i, j) = (pair.i, pair.j);
        match self {
            GwInequality::UpperFirst => format!("y{i}_{j} <= x{i}"),
            GwInequality::UpperSecond => format!("y{i}_{j} <= x{j}"),
            GwInequality::Lower => format!("y{i}_{j} >= x{i} + x{j} - 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwCheck<T> {
    pub pair: ProductPair,
    pub inequality: GwInequality,
    pub result: Violation<T>,
}

impl<T: Scalar> GwCheck<T> {
    /// Implied: the maximum violation is at most zero (or the relaxation is empty).
    pub fn holds(&self) -> bool {
        self.result.value().is_none_or(|v| !v.is_positive())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceReport<T> {
    pub case: Option<DominanceCase>,
    pub checks: Vec<GwCheck<T>>,
}

impl<T: Scalar> DominanceReport<T> {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(GwCheck::holds)
    }

    pub fn first_violation(&self) -> Option<&GwCheck<T>> {
        self.checks.iter().find(|c| !c.holds())
    }
}

fn all_unit_with_rhs<T: Scalar>(inst: &BqpInstance<T>, eq: bool, rhs: i64) -> Result<(), String> {
    for (k, c) in inst.indexed_constraints() {
        if c.is_equation() != eq {
            return Err(format!("constraint {k} is {}", if eq { "an inequality" } else { "an equation" }));
        }
        if !c.has_unit_coefficients() {
            return Err(format!("constraint {k} has a non-unit coefficient"));
        }
        if c.rhs != T::from_int(rhs) {
            return Err(format!("constraint {k} has right-hand side {}, expected {rhs}", c.rhs));
        }
    }
    Ok(())
}

/// Checks the hypotheses of `case`.
pub fn check_hypotheses<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
    case: DominanceCase,
) -> Result<(), String> {
    design.check_against(inst).map_err(|e| e.to_string())?;
    match case {
        DominanceCase::Assignment | DominanceCase::Knapsack => {
            all_unit_with_rhs(inst, case == DominanceCase::Assignment, 1)?;
            let q = induce_products(inst, design);
            if let Some((pair, cond)) = check_conditions(inst, design, &q).violations().into_iter().next() {
                return Err(format!("{cond} fails for {pair}"));
            }
            Ok(())
        }
        DominanceCase::DoubleSelection => {
            all_unit_with_rhs(inst, true, 2)?;
            for (k, c) in inst.indexed_constraints() {
                if !c.support().eq(design.of(k).equation.iter().copied()) {
                    return Err(format!("B_{k} differs from A_{k}"));
                }
            }
            Ok(())
        }
    }
}

/// The first case whose hypotheses hold.
pub fn detect_case<T: Scalar>(inst: &BqpInstance<T>, design: &MultiplierAssignment) -> Option<DominanceCase> {
    [DominanceCase::Assignment, DominanceCase::Knapsack, DominanceCase::DoubleSelection]
        .into_iter()
        .find(|c| check_hypotheses(inst, design, *c).is_ok())
}

/// Maximizes the violation of each Glover–Woolsey inequality for every
/// off-diagonal induced pair over the compact relaxation (side constraints and
/// compact rows, `x, y in [0, 1]`).
pub fn verify_dominance<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
    case: DominanceCase,
) -> Result<DominanceReport<T>, VerifyError> {
    check_hypotheses(inst, design, case).map_err(VerifyError::HypothesisMismatch)?;
    let mut report = verify_dominance_unchecked(inst, design)?;
    report.case = Some(case);
    Ok(report)
}

/// [`verify_dominance`] without the hypothesis check.
pub fn verify_dominance_unchecked<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
) -> Result<DominanceReport<T>, VerifyError> {
    let model = compact_linearize_unchecked(inst, design)?.filtered(|tag| !matches!(tag, RowTag::Passthrough { .. }));
    let q = induce_products(inst, design);
    let mut checks = Vec::new();
    for pair in q.off_diagonal() {
        for inequality in GwInequality::ALL {
            let (terms, constant) = inequality.expression(pair);
            let result = maximize_violation(&model, &terms, constant)?;
            checks.push(GwCheck { pair, inequality, result });
        }
    }
    Ok(DominanceReport { case: None, checks })
}
