//! Independent reference computations for integration tests. These work on
//! plain index sets and never call the library's derived-set logic.
#![allow(dead_code)]

use std::collections::BTreeSet;

use compactlin::cover::{Membership, MultiplierAssignment, MultiplierKind};
use compactlin::model::{BqpInstance, ConstraintSense, ProductPair, SideConstraint, VarId};
use compactlin::Rational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn supports(inst: &BqpInstance<Rational>) -> Vec<BTreeSet<usize>> {
    inst.constraints.iter().map(|c| c.terms.keys().map(|v| v.0).collect()).collect()
}

/// `(k, kind, j)` triples with `k` 0-based.
pub fn triples(design: &MultiplierAssignment) -> Vec<(usize, MultiplierKind, usize)> {
    design.memberships().map(|m| (m.k - 1, m.kind, m.j.0)).collect()
}

/// Products `x_h x_j` created by multiplying constraint `k` by `x_j`, as ordered pairs.
pub fn oracle_q(inst: &BqpInstance<Rational>, design: &MultiplierAssignment) -> BTreeSet<(usize, usize)> {
    let a = supports(inst);
    let mut q = BTreeSet::new();
    for (k, _, j) in triples(design) {
        for &h in &a[k] {
            q.insert((h.min(j), h.max(j)));
        }
    }
    q
}

/// The three conditions read literally, for every pair of `q` (squares included).
pub fn oracle_conditions(
    inst: &BqpInstance<Rational>,
    design: &MultiplierAssignment,
    q: &BTreeSet<(usize, usize)>,
) -> bool {
    let a = supports(inst);
    let t = triples(design);
    let in_upper =
        |k: usize, j: usize| t.iter().any(|&(kk, kind, jj)| kk == k && jj == j && kind != MultiplierKind::Minus);
    let in_lower =
        |k: usize, j: usize| t.iter().any(|&(kk, kind, jj)| kk == k && jj == j && kind != MultiplierKind::Plus);
    let m = a.len();
    q.iter().all(|&(i, j)| {
        let c1 = (0..m).any(|k| a[k].contains(&i) && in_upper(k, j));
        let c2 = (0..m).any(|l| a[l].contains(&j) && in_upper(l, i));
        let c3 =
            (0..m).any(|k| a[k].contains(&i) && in_lower(k, j)) || (0..m).any(|l| a[l].contains(&j) && in_lower(l, i));
        c1 && c2 && c3
    })
}

/// Product demand met and all conditions hold.
pub fn oracle_feasible(inst: &BqpInstance<Rational>, design: &MultiplierAssignment) -> bool {
    let q = oracle_q(inst, design);
    inst.products.iter().all(|p| p.i == p.j || q.contains(&(p.i.0, p.j.0))) && oracle_conditions(inst, design, &q)
}

pub fn x_at(bits: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| bits >> i & 1 == 1).collect()
}

pub fn satisfies(inst: &BqpInstance<Rational>, x: &[bool]) -> bool {
    inst.constraints.iter().all(|c| {
        let lhs = c.terms.iter().filter(|(v, _)| x[v.0 - 1]).fold(Rational::zero(), |s, (_, a)| s + a);
        match c.sense {
            ConstraintSense::Eq => lhs == c.rhs,
            ConstraintSense::Le => lhs <= c.rhs,
        }
    })
}

/// Unit-coefficient constraints with right-hand side `rhs` over random supports.
pub fn unit_instance(
    seed: u64,
    eq: bool,
    rhs: i64,
    n_range: (usize, usize),
    m_range: (usize, usize),
) -> BqpInstance<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(n_range.0..=n_range.1);
    let m = rng.gen_range(m_range.0..=m_range.1);
    let sense = if eq { ConstraintSense::Eq } else { ConstraintSense::Le };
    let mut inst = BqpInstance::new(n);
    for _ in 0..m {
        let size = rng.gen_range((rhs as usize + 1).min(n)..=n.min(5));
        let mut vars: Vec<usize> = (1..=n).collect();
        vars.shuffle(&mut rng);
        vars.truncate(size);
        vars.sort();
        inst.constraints.push(SideConstraint::unit(sense, &vars, r(rhs)).unwrap());
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let pair = ProductPair::from_indices(i, j);
            if inst.prerequisite_met(pair) && rng.gen_bool(0.5) {
                inst.products.push(pair);
                inst.objective.quadratic.insert(pair, r(rng.gen_range(-4..=4)));
            }
        }
    }
    inst.objective.quadratic.retain(|_, d| !d.is_zero());
    if inst.products.is_empty() {
        // Keep at least one demanded product.
        let c = inst.constraints[0].terms.keys().copied().collect::<Vec<VarId>>();
        if c.len() >= 2 {
            inst.products.push(ProductPair::new(c[0], c[1]));
        }
    }
    inst
}

pub fn membership(k: usize, kind: MultiplierKind, j: usize) -> Membership {
    Membership { k, kind, j: VarId(j) }
}

pub fn one() -> Rational {
    Rational::one()
}
