mod common;

use std::collections::BTreeSet;

use common::*;
use compactlin::cover::{
    build_cover_model, solve_cover_exact, CoverWeights, Membership, MultiplierAssignment, MultiplierKind,
};
use compactlin::generate::{gen_qap, gen_qtsp, gen_random, QapPreset, QapSpec, QtspSpec, RandomSpec};
use compactlin::io::{instance_to_json, parse_instance};
use compactlin::linearize::{
    check_conditions, compact_linearize, compact_linearize_unchecked, glover_woolsey, induce_products, Column,
    Condition, RowTag,
};
use compactlin::model::{canonicalize, BqpInstance, ConstraintSense, SideConstraint, VarId};
use compactlin::verify::verify_integer_consistency;
use compactlin::Rational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(seed: u64) -> BqpInstance<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=7);
    let spec = RandomSpec::new(n, rng.gen_range(0..=2), rng.gen_range(0..=2).max(1), 0.5);
    gen_random(&spec, seed)
}

fn random_design(inst: &BqpInstance<Rational>, seed: u64, p: f64) -> MultiplierAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut design = MultiplierAssignment::for_instance(inst);
    for (k, c) in inst.indexed_constraints() {
        let kinds: &[MultiplierKind] =
            if c.is_equation() { &[MultiplierKind::Equation] } else { &[MultiplierKind::Plus, MultiplierKind::Minus] };
        for &kind in kinds {
            for j in 1..=inst.n {
                if rng.gen_bool(p) {
                    design.insert(Membership { k, kind, j: VarId(j) });
                }
            }
        }
    }
    design
}

fn activity(terms: &[(Column, Rational)], x: &[bool]) -> Rational {
    terms.iter().fold(Rational::zero(), |s, (c, a)| {
        let on = match c {
            Column::X(v) => x[v.0 - 1],
            Column::Y(p) => x[p.i.0 - 1] && x[p.j.0 - 1],
        };
        if on {
            s + a
        } else {
            s
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compact_rows_are_products_of_constraints(seed in 0u64..10_000) {
        let inst = random_instance(seed);
        let design = random_design(&inst, seed, 0.4);
        let model = compact_linearize_unchecked(&inst, &design).unwrap();
        for bits in 0..1u64 << inst.n {
            let x = x_at(bits, inst.n);
            for row in model.rows.iter().filter(|r| r.tag.is_compact()) {
                let (k, j, complement) = match row.tag {
                    RowTag::CompactE { k, j } | RowTag::CompactPlus { k, j } => (k, j, false),
                    RowTag::CompactMinus { k, j } => (k, j, true),
                    _ => unreachable!(),
                };
                let c = &inst.constraints[k - 1];
                let slack = c.terms.iter().filter(|(v, _)| x[v.0 - 1]).fold(Rational::zero(), |s, (_, a)| s + a) - &c.rhs;
                let factor = x[j.0 - 1] != complement;
                let expected = if factor { slack } else { Rational::zero() };
                prop_assert_eq!(activity(&row.terms, &x) - &row.rhs, expected, "{}", row.name);
            }
        }
    }

    #[test]
    fn induced_products_match_expansion(seed in 0u64..10_000) {
        let inst = random_instance(seed);
        let design = random_design(&inst, seed, 0.3);
        let q = induce_products(&inst, &design);
        let mine: BTreeSet<(usize, usize)> = q.iter().map(|p| (p.i.0, p.j.0)).collect();
        prop_assert_eq!(&mine, &oracle_q(&inst, &design));
        let report = check_conditions(&inst, &design, &q);
        prop_assert_eq!(report.violations_including_squares().is_empty(), oracle_conditions(&inst, &design, &mine));
    }

    #[test]
    fn sufficiency_on_random_programs(seed in 0u64..10_000) {
        let inst = random_instance(seed);
        let sol = solve_cover_exact(&build_cover_model(&inst, &CoverWeights::default_for(&inst)).unwrap()).unwrap();
        let model = compact_linearize(&inst, &sol.assignment).unwrap();
        let report = verify_integer_consistency(&inst, &model, 16).unwrap();
        prop_assert!(report.passes(), "{:?}", report.first_failure());
        // Validity: the true products satisfy every row at every feasible point.
        for bits in 0..1u64 << inst.n {
            let x = x_at(bits, inst.n);
            if satisfies(&inst, &x) {
                for row in &model.rows {
                    prop_assert!(row.sense.holds(&activity(&row.terms, &x), &row.rhs), "{}", row.name);
                }
            }
        }
    }

    #[test]
    fn canonical_json_is_a_fixed_point(seed in 0u64..10_000, flip in any::<bool>()) {
        let mut inst = random_instance(seed);
        if flip {
            inst.constraints.reverse();
            inst.products.reverse();
        }
        let text = instance_to_json(&canonicalize(&parse_instance::<Rational>(&instance_to_json(&inst)).unwrap()));
        let again = instance_to_json(&canonicalize(&parse_instance::<Rational>(&text).unwrap()));
        prop_assert_eq!(&text, &again);
        let canon = canonicalize(&inst);
        prop_assert_eq!(canonicalize(&canon), canon);
    }
}

#[test]
fn lost_condition_can_leave_products_pinned() {
    // x1 + x2 = 1, B^E = {1}: Condition 1 fails for (1,2), yet the single
    // compact row y12 + x1 = x1 pins y12 = 0 = x1 x2 on both feasible points.
    let inst = BqpInstance::new(2)
        .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
        .with_product(1, 2);
    let design = MultiplierAssignment::from_memberships(1, [membership(1, MultiplierKind::Equation, 1)]);
    let q = induce_products(&inst, &design);
    let report = check_conditions(&inst, &design, &q);
    assert_eq!(report.violations().len(), 1);
    assert_eq!(report.violations()[0].1, Condition::One);
    let model = compact_linearize_unchecked(&inst, &design).unwrap();
    assert!(verify_integer_consistency(&inst, &model, 16).unwrap().passes());
}

#[test]
fn glover_woolsey_has_three_rows_per_product() {
    for seed in 0..20 {
        let inst = random_instance(seed);
        let model = glover_woolsey(&inst);
        let off: Vec<_> = inst.products.iter().filter(|p| !p.is_square()).collect();
        assert_eq!(model.gw_row_count(), 3 * off.len());
        for p in off {
            for prefix in ["GW1", "GW2", "GW3"] {
                let name = format!("{prefix}_i{}_j{}", p.i, p.j);
                assert!(model.rows.iter().any(|r| r.name == name), "{name}");
            }
        }
    }
}

#[test]
fn qap_row_counts() {
    for n in 2..=5 {
        let (inst, design) = gen_qap::<Rational>(&QapSpec { n, preset: QapPreset::MostCompact }, n as u64);
        let model = compact_linearize(&inst, &design.unwrap()).unwrap();
        assert_eq!(model.count_rows(|t| matches!(t, RowTag::CompactE { .. })), n * n * n - n * n);
        let half = (n * n - n) * (n * n - n) / 2;
        assert_eq!(glover_woolsey(&inst).gw_row_count(), 3 * half);
        if n <= 3 {
            assert!(verify_integer_consistency(&inst, &model, 16).unwrap().passes());
        }
    }
}

#[test]
fn frieze_yadegar_covers_each_pair_twice() {
    let (inst, design) = gen_qap::<Rational>(&QapSpec { n: 3, preset: QapPreset::FriezeYadegar }, 1);
    let design = design.unwrap();
    let q = induce_products(&inst, &design);
    let report = check_conditions(&inst, &design, &q);
    for p in &inst.products {
        let pc = report.get(p).unwrap();
        assert!(pc.witnesses(Condition::One).len() >= 2, "{p}");
        assert!(pc.witnesses(Condition::Two).len() >= 2, "{p}");
    }
}

#[test]
fn qtsp_rows_collapse_to_selection_sums() {
    let (inst, design) = gen_qtsp::<Rational>(&QtspSpec { nodes: 6, include_subtour: false }, 4);
    let model = compact_linearize(&inst, &design).unwrap();
    assert_eq!(model.compact_row_count(), 6 * 5);
    for row in model.rows.iter().filter(|r| r.tag.is_compact()) {
        let xs: Vec<_> = row.terms.iter().filter(|(c, _)| matches!(c, Column::X(_))).collect();
        assert_eq!(xs.len(), 1);
        assert_eq!(xs[0].1, r(-1));
        assert!(row.terms.iter().filter(|(c, _)| matches!(c, Column::Y(_))).all(|(_, a)| *a == r(1)));
        assert_eq!(row.terms.len(), 5);
    }
}
