//! Instance generators: quadratic assignment, symmetric quadratic TSP with
//! degree equations, and random programs for property tests.
//!
//! All generators are deterministic in their seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{Membership, MultiplierAssignment, MultiplierKind};
use crate::model::{BqpInstance, ConstraintSense, PassthroughRow, ProductPair, RowSense, SideConstraint, VarId};
use crate::scalar::Scalar;

/// Multiplier design shipped with a QAP instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QapPreset {
    /// Both assignment families multiplied by every variable: all four
    /// linearization families, each pair covered twice.
    FriezeYadegar,
    /// Each column equation `p` multiplied by every `x_jq` with `q != p`:
    /// a single family of `n^3 - n^2` equations.
    MostCompact,
    /// No design; linearize with Glover–Woolsey rows.
    GwBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QapSpec {
    pub n: usize,
    pub preset: QapPreset,
}

/// Variable of `x_ip` (facility `i`, location `p`, both 1-based).
pub fn qap_var(n: usize, i: usize, p: usize) -> VarId {
    VarId((i - 1) * n + p)
}

/// QAP over `x_ip` with column equations `sum_i x_ip = 1` (constraints
/// `1..=n`) and row equations `sum_p x_ip = 1` (constraints `n+1..=2n`).
/// Demanded products are `x_ip x_jq` for `i < j`, `p != q`; costs are uniform
/// integers (`d` in 1..=9, `c` in 0..=9).
pub fn gen_qap<T: Scalar>(spec: &QapSpec, seed: u64) -> (BqpInstance<T>, Option<MultiplierAssignment>) {
    let n = spec.n;
    assert!(n >= 2, "QAP needs n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = BqpInstance::new(n * n);
    for p in 1..=n {
        let vars: Vec<usize> = (1..=n).map(|i| qap_var(n, i, p).0).collect();
        inst.constraints.push(SideConstraint::unit(ConstraintSense::Eq, &vars, T::one()).unwrap());
    }
    for i in 1..=n {
        let vars: Vec<usize> = (1..=n).map(|p| qap_var(n, i, p).0).collect();
        inst.constraints.push(SideConstraint::unit(ConstraintSense::Eq, &vars, T::one()).unwrap());
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for p in 1..=n {
                for q in (1..=n).filter(|&q| q != p) {
                    let pair = ProductPair::new(qap_var(n, i, p), qap_var(n, j, q));
                    inst.products.push(pair);
                    inst.objective.quadratic.insert(pair, T::from_int(rng.gen_range(1..=9)));
                }
            }
        }
    }
    for v in 1..=n * n {
        inst.objective.linear.insert(VarId(v), T::from_int(rng.gen_range(0..=9)));
    }

    let design = match spec.preset {
        QapPreset::GwBaseline => None,
        QapPreset::MostCompact => {
            let members = (1..=n).flat_map(|p| {
                (1..=n).flat_map(move |j| {
                    (1..=n).filter(move |&q| q != p).map(move |q| Membership {
                        k: p,
                        kind: MultiplierKind::Equation,
                        j: qap_var(n, j, q),
                    })
                })
            });
            Some(MultiplierAssignment::from_memberships(2 * n, members))
        }
        QapPreset::FriezeYadegar => {
            let members = (1..=2 * n)
                .flat_map(|k| (1..=n * n).map(move |v| Membership { k, kind: MultiplierKind::Equation, j: VarId(v) }));
            Some(MultiplierAssignment::from_memberships(2 * n, members))
        }
    };
    (inst, design)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QtspSpec {
    pub nodes: usize,
    /// Add subtour elimination rows as pass-through rows (only for up to 10 nodes).
    pub include_subtour: bool,
}

/// Edges `{a, b}`, `a < b`, in lexicographic order; edge `e` is variable `e + 1`.
pub fn qtsp_edges(nodes: usize) -> Vec<(usize, usize)> {
    (1..=nodes).flat_map(|a| (a + 1..=nodes).map(move |b| (a, b))).collect()
}

/// Symmetric quadratic TSP: one degree equation `sum x_e = 2` per node,
/// products of edges sharing a node, costs uniform in 1..=9, and the design
/// `B_k = A_k`.
pub fn gen_qtsp<T: Scalar>(spec: &QtspSpec, seed: u64) -> (BqpInstance<T>, MultiplierAssignment) {
    let nodes = spec.nodes;
    assert!(nodes >= 4, "QTSP needs at least 4 nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = qtsp_edges(nodes);
    let var: BTreeMap<(usize, usize), VarId> = edges.iter().enumerate().map(|(idx, e)| (*e, VarId(idx + 1))).collect();
    let edge_var = |a: usize, b: usize| var[&(a.min(b), a.max(b))];

    let mut inst = BqpInstance::new(edges.len());
    let mut design = MultiplierAssignment::empty(nodes);
    for v in 1..=nodes {
        let incident: Vec<usize> = (1..=nodes).filter(|&u| u != v).map(|u| edge_var(u, v).0).collect();
        inst.constraints.push(SideConstraint::unit(ConstraintSense::Eq, &incident, T::from_int(2)).unwrap());
        for e in incident {
            design.insert(Membership { k: v, kind: MultiplierKind::Equation, j: VarId(e) });
        }
    }
    for j in 1..=nodes {
        for i in (1..=nodes).filter(|&i| i != j) {
            for k in (i + 1..=nodes).filter(|&k| k != j) {
                let pair = ProductPair::new(edge_var(i, j), edge_var(j, k));
                inst.products.push(pair);
                inst.objective.quadratic.insert(pair, T::from_int(rng.gen_range(1..=9)));
            }
        }
    }
    inst.products.sort();
    if spec.include_subtour && nodes <= 10 {
        for mask in 0u32..1 << nodes {
            let size = mask.count_ones() as usize;
            if size < 2 || size > nodes - 2 {
                continue;
            }
            let members: Vec<usize> = (1..=nodes).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            let x_terms = edges
                .iter()
                .filter(|(a, b)| members.contains(a) && members.contains(b))
                .map(|&(a, b)| (edge_var(a, b), T::one()))
                .collect();
            let label: Vec<String> = members.iter().map(|v| v.to_string()).collect();
            inst.passthrough.push(PassthroughRow {
                name: Some(format!("SUBTOUR_{}", label.join("_"))),
                x_terms,
                y_terms: BTreeMap::new(),
                sense: RowSense::Le,
                rhs: T::from_int(size as i64 - 1),
            });
        }
    }
    (inst, design)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Coefficients `a/b` with `a` in 1..=4, `b` in 1..=3.
    Rational,
    /// All coefficients 1.
    Unit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub num_eq: usize,
    pub num_ineq: usize,
    /// Probability of demanding each product whose factors are covered.
    pub density: f64,
    pub coefficients: CoefficientMode,
    /// Constraint supports are pairwise disjoint.
    pub disjoint: bool,
    /// Largest constraint support.
    pub max_support: usize,
}

impl RandomSpec {
    pub fn new(n: usize, num_eq: usize, num_ineq: usize, density: f64) -> Self {
        RandomSpec {
            n,
            num_eq,
            num_ineq,
            density,
            coefficients: CoefficientMode::Rational,
            disjoint: false,
            max_support: 4,
        }
    }
}

fn random_coefficient<T: Scalar>(rng: &mut ChaCha8Rng, mode: CoefficientMode) -> T {
    match mode {
        CoefficientMode::Unit => T::one(),
        CoefficientMode::Rational => T::from_ratio(rng.gen_range(1..=4), rng.gen_range(1..=3)),
    }
}

/// Random program: supports drawn at random (or as disjoint blocks), right-hand
/// sides chosen so that a random binary point is feasible, equations listed
/// first.
pub fn gen_random<T: Scalar>(spec: &RandomSpec, seed: u64) -> BqpInstance<T> {
    let m = spec.num_eq + spec.num_ineq;
    assert!(spec.n >= 1 && m >= 1, "need variables and constraints");
    assert!(spec.density > 0.0 && spec.density <= 1.0, "density must lie in (0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_support = spec.max_support.clamp(1, spec.n);

    let supports: Vec<Vec<usize>> = if spec.disjoint {
        assert!(m <= spec.n, "disjoint supports need n >= number of constraints");
        let mut vars: Vec<usize> = (1..=spec.n).collect();
        vars.shuffle(&mut rng);
        let mut supports: Vec<Vec<usize>> = vars[..m].iter().map(|v| vec![*v]).collect();
        for &v in &vars[m..] {
            let open: Vec<usize> = (0..m).filter(|&k| supports[k].len() < max_support).collect();
            // Leave some variables outside every constraint now and then.
            if open.is_empty() || rng.gen_bool(0.15) {
                continue;
            }
            supports[*open.choose(&mut rng).unwrap()].push(v);
        }
        supports
    } else {
        (0..m)
            .map(|_| {
                let size = rng.gen_range(1..=max_support);
                let mut vars: Vec<usize> = (1..=spec.n).collect();
                vars.shuffle(&mut rng);
                vars.truncate(size);
                vars
            })
            .collect()
    };

    let mut point: Vec<bool> = (0..spec.n).map(|_| rng.gen_bool(0.5)).collect();
    for support in &supports[..spec.num_eq] {
        if !support.iter().any(|v| point[v - 1]) {
            point[support.choose(&mut rng).unwrap() - 1] = true;
        }
    }

    let mut inst = BqpInstance::new(spec.n);
    for (idx, support) in supports.iter().enumerate() {
        let eq = idx < spec.num_eq;
        let mut terms: Vec<(VarId, T)> =
            support.iter().map(|&v| (VarId(v), random_coefficient(&mut rng, spec.coefficients))).collect();
        terms.sort_by_key(|(v, _)| *v);
        let mut rhs = terms.iter().filter(|(v, _)| point[v.slot()]).fold(T::zero(), |acc, (_, a)| acc + a.clone());
        if !eq {
            rhs = rhs + T::from_int(rng.gen_range(0..=2));
            if rhs.is_zero() {
                rhs = T::one();
            }
        }
        let sense = if eq { ConstraintSense::Eq } else { ConstraintSense::Le };
        inst.constraints.push(SideConstraint::new(sense, terms, rhs).expect("positive by construction"));
    }

    for i in 1..=spec.n {
        inst.objective.linear.insert(VarId(i), T::from_int(rng.gen_range(-5..=5)));
    }
    for i in 1..=spec.n {
        for j in i + 1..=spec.n {
            let pair = ProductPair::from_indices(i, j);
            if inst.prerequisite_met(pair) && rng.gen_bool(spec.density) {
                inst.products.push(pair);
                inst.objective.quadratic.insert(pair, T::from_int(rng.gen_range(-5..=5)));
            }
        }
    }
    inst.objective.linear.retain(|_, c| !c.is_zero());
    inst.objective.quadratic.retain(|_, d| !d.is_zero());
    inst
}
