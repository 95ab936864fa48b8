use std::collections::BTreeMap;

use crate::linearize::{Column, LinearizedModel};
use crate::lp::{solve, Direction, LpOutcome, LpProblem, LpSolution};
use crate::model::{BqpInstance, ProductPair};
use crate::scalar::Scalar;

use super::VerifyError;

/// Outcome of fixing one feasible `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XStatus<T> {
    /// Every product column is forced to `x_i x_j`.
    UniqueAndCorrect,
    /// The product column can take several values.
    Ambiguous { pair: ProductPair, lo: T, hi: T },
    /// The product column is forced to a value other than `x_i x_j`.
    Wrong { pair: ProductPair, value: T },
    /// The linearization rows exclude this `x` altogether.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XCheck<T> {
    pub x: Vec<bool>,
    pub status: XStatus<T>,
    /// A feasible `y` that differs from the products, when one exists.
    pub witness: Option<BTreeMap<ProductPair, T>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport<T> {
    /// One entry per `x in {0,1}^n` satisfying the side constraints.
    pub entries: Vec<XCheck<T>>,
}

impl<T: Scalar> ConsistencyReport<T> {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.status == XStatus::UniqueAndCorrect)
    }

    pub fn failures(&self) -> impl Iterator<Item = &XCheck<T>> {
        self.entries.iter().filter(|e| e.status != XStatus::UniqueAndCorrect)
    }

    pub fn first_failure(&self) -> Option<&XCheck<T>> {
        self.failures().next()
    }
}

/// All `x in {0,1}^n` that satisfy the side constraints, in increasing
/// binary order with `x_1` as the lowest bit.
pub fn feasible_points<T: Scalar>(inst: &BqpInstance<T>) -> Vec<Vec<bool>> {
    (0u64..1 << inst.n)
        .map(|mask| (0..inst.n).map(|b| mask >> b & 1 == 1).collect::<Vec<bool>>())
        .filter(|x| inst.is_feasible(x))
        .collect()
}

/// The linearization rows with `x` substituted, as an LP over the product
/// columns. `None` if a row without product terms is violated.
fn fixed_x_lp<T: Scalar>(model: &LinearizedModel<T>, x: &[bool]) -> Option<LpProblem<T>> {
    let mut lp = LpProblem::new(Direction::Minimize);
    for p in &model.y_columns {
        lp.add_unit_column(Column::Y(*p).name());
    }
    for row in model.rows.iter().filter(|r| r.tag.is_linearization()) {
        let mut rhs = row.rhs.clone();
        let mut coeffs = Vec::new();
        for (col, a) in &row.terms {
            match col {
                Column::X(v) => {
                    if x[v.slot()] {
                        rhs = rhs - a.clone();
                    }
                }
                Column::Y(p) => {
                    let idx = model.y_columns.binary_search(p).expect("row uses a model column");
                    coeffs.push((idx, a.clone()));
                }
            }
        }
        if coeffs.is_empty() {
            if !row.sense.holds(&T::zero(), &rhs) {
                return None;
            }
        } else {
            lp.add_row(coeffs, row.sense, rhs);
        }
    }
    Some(lp)
}

fn optimize<T: Scalar>(
    lp: &mut LpProblem<T>,
    direction: Direction,
    objective: Vec<(usize, T)>,
) -> Option<LpSolution<T>> {
    lp.set_objective(direction, objective);
    match solve(lp).expect("well-formed fixed-x LP") {
        LpOutcome::Optimal(sol) => Some(sol),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("product columns are bounded"),
    }
}

fn check_point<T: Scalar>(model: &LinearizedModel<T>, x: &[bool]) -> XCheck<T> {
    let infeasible = XCheck { x: x.to_vec(), status: XStatus::Infeasible, witness: None };
    let Some(mut lp) = fixed_x_lp(model, x) else {
        return infeasible;
    };
    let product: Vec<bool> = model.y_columns.iter().map(|p| x[p.i.slot()] && x[p.j.slot()]).collect();
    let zeros: Vec<(usize, T)> = (0..product.len()).filter(|c| !product[*c]).map(|c| (c, T::one())).collect();
    let ones: Vec<(usize, T)> = (0..product.len()).filter(|c| product[*c]).map(|c| (c, T::one())).collect();

    // Largest total on columns that should be 0, smallest on those that should be 1.
    let Some(high) = optimize(&mut lp, Direction::Maximize, zeros) else {
        return infeasible;
    };
    let mut offending = if high.value.is_positive() { Some(high) } else { None };
    if offending.is_none() && !ones.is_empty() {
        let target = T::from_int(ones.len() as i64);
        let low = optimize(&mut lp, Direction::Minimize, ones).expect("feasibility already established");
        if low.value < target {
            offending = Some(low);
        }
    }
    let Some(sol) = offending else {
        return XCheck { x: x.to_vec(), status: XStatus::UniqueAndCorrect, witness: None };
    };

    let col = (0..product.len())
        .find(|&c| sol.point[c] != if product[c] { T::one() } else { T::zero() })
        .expect("offending point differs from the products");
    let pair = model.y_columns[col];
    let lo = optimize(&mut lp, Direction::Minimize, vec![(col, T::one())]).unwrap().value;
    let hi = optimize(&mut lp, Direction::Maximize, vec![(col, T::one())]).unwrap().value;
    let status = if lo == hi { XStatus::Wrong { pair, value: lo } } else { XStatus::Ambiguous { pair, lo, hi } };
    let witness = model.y_columns.iter().copied().zip(sol.point).collect();
    XCheck { x: x.to_vec(), status, witness: Some(witness) }
}

/// For every `x` feasible for the side constraints, decides whether the
/// linearization rows (compact and Glover–Woolsey; original and pass-through
/// rows are ignored) force every product column to `x_i x_j`.
pub fn verify_integer_consistency<T: Scalar>(
    inst: &BqpInstance<T>,
    model: &LinearizedModel<T>,
    cap: usize,
) -> Result<ConsistencyReport<T>, VerifyError> {
    if inst.n > cap || inst.n >= 64 {
        return Err(VerifyError::CapExceeded { n: inst.n, cap });
    }
    let entries = feasible_points(inst).iter().map(|x| check_point(model, x)).collect();
    Ok(ConsistencyReport { entries })
}
