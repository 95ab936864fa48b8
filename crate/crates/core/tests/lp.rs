mod common;

use common::r;
use compactlin::lp::{solve, verify_optimal, Direction, LpOutcome, LpProblem};
use compactlin::model::RowSense;
use compactlin::Rational;
use num_traits::Zero;
use proptest::prelude::*;

/// `a x <= b` for every row, bounds and equations included.
fn inequalities(lp: &LpProblem<Rational>) -> Vec<(Vec<Rational>, Rational)> {
    let n = lp.columns.len();
    let dense = |coeffs: &[(usize, Rational)]| {
        let mut v = vec![Rational::zero(); n];
        for (c, a) in coeffs {
            v[*c] += a;
        }
        v
    };
    let mut out = Vec::new();
    for row in &lp.rows {
        let a = dense(&row.coeffs);
        if row.sense != RowSense::Ge {
            out.push((a.clone(), row.rhs.clone()));
        }
        if row.sense != RowSense::Le {
            out.push((a.iter().map(|v| -v).collect(), -row.rhs.clone()));
        }
    }
    for (c, col) in lp.columns.iter().enumerate() {
        let mut unit = vec![Rational::zero(); n];
        unit[c] = r(1);
        out.push((unit.iter().map(|v| -v).collect(), -col.lo.clone()));
        out.push((unit, col.hi.clone().expect("bounded test problems")));
    }
    out
}

/// Solves the square system, `None` if singular.
fn gauss(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = &a[row][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (dst, src) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                    *dst -= &f * src;
                }
                let v = &f * &b[col];
                b[row] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(total: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if total < size {
        return vec![];
    }
    let mut out = subsets(total - 1, size);
    for mut s in subsets(total - 1, size - 1) {
        s.push(total - 1);
        out.push(s);
    }
    out
}

/// Best objective over all basic feasible points.
fn vertex_optimum(lp: &LpProblem<Rational>) -> Option<Rational> {
    let n = lp.columns.len();
    let ineq = inequalities(lp);
    let mut best: Option<Rational> = None;
    for set in subsets(ineq.len(), n) {
        let a = set.iter().map(|&i| ineq[i].0.clone()).collect();
        let b = set.iter().map(|&i| ineq[i].1.clone()).collect();
        let Some(x) = gauss(a, b) else { continue };
        let feasible = ineq.iter().all(|(a, b)| a.iter().zip(&x).fold(Rational::zero(), |s, (p, q)| s + p * q) <= *b);
        if feasible {
            let v = lp.objective_at(&x);
            let better = match (&best, lp.direction) {
                (None, _) => true,
                (Some(b), Direction::Minimize) => v < *b,
                (Some(b), Direction::Maximize) => v > *b,
            };
            if better {
                best = Some(v);
            }
        }
    }
    best
}

fn build(ncols: usize, rows: Vec<(Vec<i64>, u8, i64)>, obj: Vec<i64>, max: bool, den: i64) -> LpProblem<Rational> {
    let dir = if max { Direction::Maximize } else { Direction::Minimize };
    let mut lp = LpProblem::new(dir);
    for c in 0..ncols {
        lp.add_column(format!("c{c}"), r(0), Some(Rational::new((c as i64 % 3 + 1).into(), den.into())));
    }
    for (coeffs, sense, rhs) in rows {
        let sense = [RowSense::Le, RowSense::Ge, RowSense::Eq][sense as usize % 3];
        let terms = coeffs.into_iter().enumerate().filter(|(_, a)| *a != 0).map(|(c, a)| (c, r(a))).collect();
        lp.add_row(terms, sense, Rational::new(rhs.into(), den.into()));
    }
    lp.set_objective(dir, obj.into_iter().enumerate().map(|(c, a)| (c, r(a))).collect());
    lp
}

fn problem() -> impl Strategy<Value = LpProblem<Rational>> {
    (1usize..=6).prop_flat_map(|n| {
        let row = (prop::collection::vec(-3i64..=3, n), 0u8..3, -2i64..=5);
        (Just(n), prop::collection::vec(row, 0..=3), prop::collection::vec(-4i64..=4, n), any::<bool>(), 1i64..=3)
            .prop_map(|(n, rows, obj, max, den)| build(n, rows, obj, max, den))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_matches_vertex_enumeration(lp in problem()) {
        let oracle = vertex_optimum(&lp);
        match solve(&lp).unwrap() {
            LpOutcome::Optimal(sol) => {
                prop_assert_eq!(Some(sol.value.clone()), oracle);
                prop_assert!(lp.is_feasible(&sol.point));
                prop_assert_eq!(lp.objective_at(&sol.point), sol.value.clone());
                prop_assert!(verify_optimal(&lp, &sol));
            }
            LpOutcome::Infeasible => prop_assert_eq!(oracle, None),
            LpOutcome::Unbounded => prop_assert!(false, "bounded problem reported unbounded"),
        }
    }
}

#[test]
fn certificate_rejects_a_wrong_value() {
    let lp = build(2, vec![(vec![1, 1], 0, 1)], vec![1, 1], true, 1);
    let LpOutcome::Optimal(mut sol) = solve(&lp).unwrap() else { panic!() };
    assert_eq!(sol.value, r(1));
    assert!(verify_optimal(&lp, &sol));
    sol.value = Rational::new(3.into(), 2.into());
    assert!(!verify_optimal(&lp, &sol));
}
