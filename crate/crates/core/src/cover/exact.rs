//! Branch and bound over the membership indicators.
//!
//! Once every `z` is fixed the cheapest `f` is the largest of its lower
//! bounds, so branching happens on `z` only. Bounds come from the exact LP
//! relaxation. Among optimal covers the lexicographically smallest `z`
//! vector is returned.

use std::collections::BTreeSet;

use super::greedy::solve_cover_greedy_model;
use super::model::{CoverError, CoverModel};
use super::MultiplierAssignment;
use crate::lp::{solve, LpOutcome};
use crate::model::ProductPair;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes whose LP relaxation was solved.
    pub nodes: usize,
    /// Nodes that were split in two.
    pub branches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution<T> {
    pub assignment: MultiplierAssignment,
    pub objective: T,
    /// Induced products, squares included.
    pub induced: BTreeSet<ProductPair>,
    pub z: Vec<bool>,
    pub stats: SearchStats,
}

struct Incumbent<T> {
    value: T,
    z: Vec<bool>,
}

struct Node<T> {
    fixed: Vec<Option<bool>>,
    bound: T,
}

/// Minimizes over `z` with `fixed` entries held. With `accept_equal`, a
/// solution of value equal to `incumbent` replaces it; used to look for an
/// alternative optimum.
fn branch_and_bound<T: Scalar>(
    model: &CoverModel<T>,
    root: Vec<Option<bool>>,
    incumbent: &mut Option<Incumbent<T>>,
    accept_equal: bool,
    stats: &mut SearchStats,
) -> Result<bool, CoverError> {
    let improves = |v: &T, inc: &Option<Incumbent<T>>| match inc {
        None => true,
        Some(i) => v < &i.value || (accept_equal && v == &i.value),
    };
    let mut improved = false;
    let mut open: Vec<Node<T>> = vec![Node { fixed: root, bound: T::zero() }];
    // Depth-first dive; when a dive ends, restart from the best open bound.
    let mut dive: Option<Node<T>> = None;
    loop {
        let node = match dive.take() {
            Some(n) => n,
            None => {
                if open.is_empty() {
                    break;
                }
                let best = (0..open.len()).min_by(|&a, &b| open[a].bound.cmp(&open[b].bound).then(b.cmp(&a))).unwrap();
                open.swap_remove(best)
            }
        };
        if !improves(&node.bound, incumbent) {
            continue;
        }
        let (lp, back) = model.relaxation(&node.fixed);
        stats.nodes += 1;
        let sol = match solve(&lp)? {
            LpOutcome::Optimal(sol) => sol,
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => unreachable!("cover relaxation is bounded"),
        };
        if !improves(&sol.value, incumbent) {
            continue;
        }
        let mut z_value = vec![T::zero(); model.z.len()];
        for (lp_col, &col) in back.iter().enumerate() {
            if col < model.z.len() {
                z_value[col] = sol.point[lp_col].clone();
            }
        }
        // Most fractional z, ties to the first in canonical order.
        let half = T::from_ratio(1, 2);
        let mut pick: Option<(usize, T)> = None;
        for (idx, v) in z_value.iter().enumerate() {
            if v.is_integer() {
                continue;
            }
            let dist = (v.clone() - half.clone()).abs();
            if pick.as_ref().is_none_or(|(_, d)| &dist < d) {
                pick = Some((idx, dist));
            }
        }
        match pick {
            None => {
                let z: Vec<bool> = z_value.iter().map(|v| v.is_one()).collect();
                let (value, _) = model.evaluate(&z).expect("integral LP point is feasible");
                debug_assert_eq!(value, sol.value);
                if improves(&value, incumbent) {
                    *incumbent = Some(Incumbent { value, z });
                    improved = true;
                }
            }
            Some((idx, _)) => {
                stats.branches += 1;
                let up_first = z_value[idx] >= half;
                let mut children = [false, true].map(|v| {
                    let mut fixed = node.fixed.clone();
                    fixed[idx] = Some(v);
                    Node { fixed, bound: sol.value.clone() }
                });
                if up_first {
                    children.swap(0, 1);
                }
                let [first, second] = children;
                open.push(second);
                dive = Some(first);
            }
        }
    }
    Ok(improved)
}

/// Solves the cover program to optimality.
pub fn solve_cover_exact<T: Scalar>(model: &CoverModel<T>) -> Result<CoverSolution<T>, CoverError> {
    let mut stats = SearchStats::default();
    let mut incumbent = solve_cover_greedy_model(model).ok().map(|a| {
        let z = model.indicator(&a);
        let (value, _) = model.evaluate(&z).expect("greedy cover is feasible");
        Incumbent { value, z }
    });
    let free = vec![None; model.z.len()];
    branch_and_bound(model, free, &mut incumbent, false, &mut stats)?;
    let Some(mut best) = incumbent else {
        return Err(CoverError::Infeasible);
    };

    // Lexicographic tie-break: try to turn each selected z off in order.
    let mut prefix: Vec<Option<bool>> = vec![None; model.z.len()];
    for t in 0..model.z.len() {
        if best.z[t] {
            let mut root = prefix.clone();
            root[t] = Some(false);
            let mut alt = Some(Incumbent { value: best.value.clone(), z: best.z.clone() });
            let mut probe = SearchStats::default();
            if branch_and_bound(model, root, &mut alt, true, &mut probe)? {
                let alt = alt.expect("improved implies a solution");
                if !alt.z[t] {
                    best = alt;
                }
            }
        }
        prefix[t] = Some(best.z[t]);
    }

    let (objective, induced) = model.evaluate(&best.z).expect("incumbent is feasible");
    Ok(CoverSolution { assignment: model.assignment(&best.z), objective, induced, z: best.z, stats })
}
