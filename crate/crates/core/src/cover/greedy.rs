//! Greedy repair heuristic for the cover program.
//!
//! Starting from no multipliers, repeatedly take the first uncovered
//! condition (pairs in order, then Conditions 1, 2, 3) and add the candidate
//! membership that is cheapest: its weight plus `w_Q` times the number of
//! products it newly induces. Ties go to the first candidate in canonical
//! order. When the sets `A_k` are disjoint and only equations occur, every
//! step is forced and the result is optimal.

use super::model::{CoverError, CoverModel, CoverRowKind, CoverWeights};
use super::{build_cover_model, MultiplierAssignment};
use crate::model::BqpInstance;
use crate::scalar::Scalar;

pub fn solve_cover_greedy<T: Scalar>(
    inst: &BqpInstance<T>,
    weights: &CoverWeights<T>,
) -> Result<MultiplierAssignment, CoverError> {
    solve_cover_greedy_model(&build_cover_model(inst, weights)?)
}

pub fn solve_cover_greedy_model<T: Scalar>(model: &CoverModel<T>) -> Result<MultiplierAssignment, CoverError> {
    let nz = model.z.len();
    // f columns each z induces.
    let mut induces: Vec<Vec<usize>> = vec![Vec::new(); nz];
    let mut f_on = vec![false; model.f.len()];
    for row in &model.rows {
        match row.kind {
            CoverRowKind::Fix(p) => f_on[model.f_column(&p).unwrap() - nz] = true,
            CoverRowKind::Induce { pair, .. } => {
                let z = row.terms.iter().find(|(c, _)| *c < nz).unwrap().0;
                induces[z].push(model.f_column(&pair).unwrap() - nz);
            }
            CoverRowKind::Cover { .. } => {}
        }
    }
    let covers: Vec<_> = model
        .rows
        .iter()
        .filter_map(|row| match row.kind {
            CoverRowKind::Cover { pair, .. } => {
                let f = model.f_column(&pair).unwrap() - nz;
                let zs: Vec<usize> = row.terms.iter().map(|(c, _)| *c).filter(|c| *c < nz).collect();
                Some((f, zs))
            }
            _ => None,
        })
        .collect();

    let mut z = vec![false; nz];
    while let Some((_, candidates)) = covers.iter().find(|(f, zs)| f_on[*f] && !zs.iter().any(|c| z[*c])) {
        let best = candidates
            .iter()
            .map(|&c| {
                let fresh = induces[c].iter().filter(|f| !f_on[**f]).count();
                let cost = model.weights.of(model.z[c].kind).clone()
                    + model.weights.product.clone() * T::from_int(fresh as i64);
                (c, cost)
            })
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .ok_or(CoverError::Infeasible)?
            .0;
        z[best] = true;
        for f in &induces[best] {
            f_on[*f] = true;
        }
    }
    debug_assert!(model.evaluate(&z).is_some());
    Ok(model.assignment(&z))
}
