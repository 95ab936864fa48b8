mod common;

use common::*;
use compactlin::cover::{build_cover_model, solve_cover_exact, CoverWeights};
use compactlin::generate::{gen_qtsp, QtspSpec};
use compactlin::linearize::{compact_linearize, compact_linearize_unchecked, glover_woolsey, Column, RowTag};
use compactlin::lp::{relaxation, solve, Direction, LpOutcome, Violation};
use compactlin::model::BqpInstance;
use compactlin::verify::{
    detect_case, find_strict_dominance_witness, verify_dominance, verify_dominance_unchecked, DominanceCase,
    StrictOutcome,
};
use compactlin::{Model, Rational};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn value_at(model: &Model, point: &[Rational], col: Column) -> Rational {
    point[model.column_index(&col).unwrap()].clone()
}

fn gw_holds(model: &Model, point: &[Rational]) -> bool {
    model.y_columns.iter().all(|p| {
        let (xi, xj) = (value_at(model, point, Column::X(p.i)), value_at(model, point, Column::X(p.j)));
        let y = value_at(model, point, Column::Y(*p));
        y <= xi && y <= xj && y >= xi + xj - r(1)
    })
}

fn designed(inst: &BqpInstance<Rational>) -> compactlin::cover::MultiplierAssignment {
    solve_cover_exact(&build_cover_model(inst, &CoverWeights::default_for(inst)).unwrap()).unwrap().assignment
}

/// When dominance is reported, vertices of the compact relaxation in random
/// directions satisfy every Glover–Woolsey inequality.
#[test]
fn dominance_reports_hold_at_sampled_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for seed in 0..30 {
        let eq = seed % 2 == 0;
        let inst = unit_instance(seed, eq, 1, (4, 7), (1, 3));
        let design = designed(&inst);
        let case = if eq { DominanceCase::Assignment } else { DominanceCase::Knapsack };
        let report = verify_dominance(&inst, &design, case).unwrap();
        assert!(report.passes(), "seed {seed}: {:?}", report.first_violation());
        let model = compact_linearize(&inst, &design).unwrap().filtered(|t| !matches!(t, RowTag::Passthrough { .. }));
        let mut lp = relaxation(&model);
        for _ in 0..10 {
            let obj = (0..model.column_count()).map(|c| (c, r(rng.gen_range(-5..=5)))).collect();
            lp.set_objective(Direction::Maximize, obj);
            if let LpOutcome::Optimal(sol) = solve(&lp).unwrap() {
                assert!(gw_holds(&model, &sol.point), "seed {seed}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn qtsp_double_selection_dominates() {
    for nodes in 4..=6 {
        let (inst, design) = gen_qtsp::<Rational>(&QtspSpec { nodes, include_subtour: false }, nodes as u64);
        assert_eq!(detect_case(&inst, &design), Some(DominanceCase::DoubleSelection));
        assert!(verify_dominance(&inst, &design, DominanceCase::DoubleSelection).unwrap().passes());
    }
}

#[test]
fn triple_selection_breaks_dominance() {
    let (mut inst, design) = gen_qtsp::<Rational>(&QtspSpec { nodes: 6, include_subtour: false }, 1);
    for c in &mut inst.constraints {
        c.rhs = r(3);
    }
    assert_eq!(detect_case(&inst, &design), None);
    assert!(verify_dominance(&inst, &design, DominanceCase::DoubleSelection).is_err());
    let report = verify_dominance_unchecked(&inst, &design).unwrap();
    let bad = report.first_violation().expect("some Glover-Woolsey inequality is cut");
    let Violation::Max { value, point } = &bad.result else { panic!() };
    assert!(*value > Rational::zero());
    // The point lies in the compact relaxation and violates the inequality by `value`.
    let model = compact_linearize_unchecked(&inst, &design).unwrap();
    assert!(relaxation(&model).is_feasible(point));
    let (terms, constant) = bad.inequality.expression::<Rational>(bad.pair);
    let lhs = terms.iter().fold(constant, |s, (c, a)| s + a * value_at(&model, point, *c));
    assert_eq!(&lhs, value);
}

#[test]
fn strict_witness_is_cut_by_a_compact_row() {
    let (inst, design) = gen_qtsp::<Rational>(&QtspSpec { nodes: 5, include_subtour: false }, 2);
    let StrictOutcome::Witness(w) = find_strict_dominance_witness(&inst, &design).unwrap() else {
        panic!("expected a witness")
    };
    let gw = glover_woolsey(&inst);
    let mut point = w.x.clone();
    point.extend(gw.y_columns.iter().map(|p| w.y[p].clone()));
    assert!(relaxation(&gw).is_feasible(&point));
    assert!(point.iter().any(|v| !v.is_integer()));
    let compact = compact_linearize(&inst, &design).unwrap();
    let row = compact.rows.iter().find(|r| r.name == w.row).unwrap();
    let lhs = row.terms.iter().fold(Rational::zero(), |s, (c, a)| s + a * value_at(&compact, &point, *c));
    assert!(!row.sense.holds(&lhs, &row.rhs));
    assert_eq!((lhs - &row.rhs).abs(), w.violation);
}
