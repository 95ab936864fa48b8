use std::collections::{BTreeMap, BTreeSet};

use crate::cover::MultiplierAssignment;
use crate::linearize::{compact_linearize, glover_woolsey, induce_products, Column, RowTag};
use crate::lp::{maximize_violation, relaxation, Violation};
use crate::model::{BqpInstance, ProductPair, RowSense};
use crate::scalar::Scalar;

use super::VerifyError;

/// A point of the Glover–Woolsey relaxation that a compact row cuts off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictWitness<T> {
    /// Name of the violated compact row.
    pub row: String,
    pub x: Vec<T>,
    pub y: BTreeMap<ProductPair, T>,
    /// Amount by which the row is violated.
    pub violation: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrictOutcome<T> {
    NotApplicable(String),
    /// Every compact row is implied by the Glover–Woolsey relaxation.
    NoWitness,
    Witness(StrictWitness<T>),
}

/// Searches for a point satisfying the side constraints and Glover–Woolsey
/// rows (relaxed) that violates a compact row. Applies to equation-only
/// designs whose off-diagonal induced pairs are exactly the demanded ones.
/// Pass-through rows are left out of both polytopes.
pub fn find_strict_dominance_witness<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
) -> Result<StrictOutcome<T>, VerifyError> {
    if !design.is_equation_based() {
        return Ok(StrictOutcome::NotApplicable("design multiplies inequalities".into()));
    }
    let q: BTreeSet<ProductPair> = induce_products(inst, design).off_diagonal().collect();
    let p: BTreeSet<ProductPair> = inst.products.iter().map(|p| p.canonical()).filter(|p| !p.is_square()).collect();
    if q != p {
        return Ok(StrictOutcome::NotApplicable("induced products differ from demanded products".into()));
    }
    let compact = compact_linearize(inst, design)?;
    let gw = glover_woolsey(inst).filtered(|tag| !matches!(tag, RowTag::Passthrough { .. }));
    debug_assert_eq!(compact.y_columns, gw.y_columns);
    let gw_lp = relaxation(&gw);

    for row in compact.rows.iter().filter(|r| r.tag.is_compact()) {
        // Violation of `a.v (sense) b`: a.v - b for <=, b - a.v for >=, both for =.
        let signs: &[i64] = match row.sense {
            RowSense::Le => &[1],
            RowSense::Ge => &[-1],
            RowSense::Eq => &[1, -1],
        };
        for &s in signs {
            let sign = T::from_int(s);
            let terms: Vec<(Column, T)> = row.terms.iter().map(|(c, a)| (*c, sign.clone() * a.clone())).collect();
            let constant = -(sign * row.rhs.clone());
            let Violation::Max { value, point } = maximize_violation(&gw, &terms, constant)? else {
                return Ok(StrictOutcome::NotApplicable("relaxation is empty".into()));
            };
            if !value.is_positive() {
                continue;
            }
            // Re-check by substitution.
            assert!(gw_lp.is_feasible(&point), "witness must satisfy the relaxation");
            let at = |c: &Column| point[gw.column_index(c).unwrap()].clone();
            let lhs = row.terms.iter().fold(T::zero(), |acc, (c, a)| acc + a.clone() * at(c));
            assert!(!row.sense.holds(&lhs, &row.rhs), "witness must violate the row");
            let x = point[..inst.n].to_vec();
            let y = gw.y_columns.iter().copied().zip(point[inst.n..].iter().cloned()).collect();
            return Ok(StrictOutcome::Witness(StrictWitness { row: row.name.clone(), x, y, violation: value }));
        }
    }
    Ok(StrictOutcome::NoWitness)
}
