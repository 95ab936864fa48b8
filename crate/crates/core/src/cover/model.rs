use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Membership, MultiplierAssignment, MultiplierKind};
use crate::linearize::Condition;
use crate::lp::{Direction, LpError, LpProblem};
use crate::model::{BqpInstance, ProductPair, RowSense, VarId};
use crate::scalar::Scalar;

/// Objective weights of the cover program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWeights<T> {
    pub equation: T,
    pub plus: T,
    pub minus: T,
    pub product: T,
}

impl<T: Scalar> CoverWeights<T> {
    /// `w_Q = 1` and `w_E = w_{I+} = w_{I-} = max_k |A_k| + 1`.
    pub fn default_for(inst: &BqpInstance<T>) -> Self {
        let w = T::from_int(inst.max_support() as i64 + 1);
        CoverWeights { equation: w.clone(), plus: w.clone(), minus: w, product: T::one() }
    }

    pub fn of(&self, kind: MultiplierKind) -> &T {
        match kind {
            MultiplierKind::Equation => &self.equation,
            MultiplierKind::Plus => &self.plus,
            MultiplierKind::Minus => &self.minus,
        }
    }

    pub fn all_positive(&self) -> bool {
        [&self.equation, &self.plus, &self.minus, &self.product].iter().all(|w| w.is_positive())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("product {0} has a factor outside every side constraint")]
    Unlinearizable(ProductPair),
    #[error("cover weights must be positive")]
    NonPositiveWeight,
    #[error("cover program is infeasible")]
    Infeasible,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// What a row of the cover program expresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoverRowKind {
    /// `f_ij = 1` for a demanded product.
    Fix(ProductPair),
    /// `f >= z`: selecting the membership induces the pair.
    Induce { pair: ProductPair, by: Membership },
    /// Coverage of one condition: `sum z >= f_ij`.
    Cover { pair: ProductPair, condition: Condition },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRow<T> {
    pub kind: CoverRowKind,
    /// Column indices into `z` followed by `f`.
    pub terms: Vec<(usize, T)>,
    pub sense: RowSense,
    pub rhs: T,
}

/// The auxiliary mixed-integer program choosing multiplier sets.
///
/// Columns are the binary membership indicators `z` in canonical order
/// (constraint, kind, variable) followed by `f_ij in [0, 1]` for all
/// `1 <= i <= j <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverModel<T> {
    pub n: usize,
    pub constraint_count: usize,
    pub z: Vec<Membership>,
    pub f: Vec<ProductPair>,
    pub rows: Vec<CoverRow<T>>,
    pub weights: CoverWeights<T>,
    pub products: BTreeSet<ProductPair>,
    /// Demanded products left out because a factor is in no constraint.
    pub excluded: Vec<ProductPair>,
    f_index: BTreeMap<ProductPair, usize>,
}

fn f_pairs(n: usize) -> Vec<ProductPair> {
    (1..=n).flat_map(|i| (i..=n).map(move |j| ProductPair::from_indices(i, j))).collect()
}

/// Builds the cover program; fails on demanded products that cannot be
/// linearized compactly.
pub fn build_cover_model<T: Scalar>(
    inst: &BqpInstance<T>,
    weights: &CoverWeights<T>,
) -> Result<CoverModel<T>, CoverError> {
    if let Some(p) = inst.unlinearizable_products().into_iter().next() {
        return Err(CoverError::Unlinearizable(p));
    }
    build(inst, weights, Vec::new())
}

/// Like [`build_cover_model`] but drops unlinearizable products and lists them
/// in [`CoverModel::excluded`].
pub fn build_cover_model_excluding<T: Scalar>(
    inst: &BqpInstance<T>,
    weights: &CoverWeights<T>,
) -> Result<CoverModel<T>, CoverError> {
    build(inst, weights, inst.unlinearizable_products().into_iter().collect())
}

fn build<T: Scalar>(
    inst: &BqpInstance<T>,
    weights: &CoverWeights<T>,
    excluded: Vec<ProductPair>,
) -> Result<CoverModel<T>, CoverError> {
    if !weights.all_positive() {
        return Err(CoverError::NonPositiveWeight);
    }
    let n = inst.n;
    let mut z = Vec::new();
    for (k, c) in inst.indexed_constraints() {
        let kinds: &[MultiplierKind] =
            if c.is_equation() { &[MultiplierKind::Equation] } else { &[MultiplierKind::Plus, MultiplierKind::Minus] };
        for &kind in kinds {
            z.extend((1..=n).map(|j| Membership { k, kind, j: VarId(j) }));
        }
    }
    let f = f_pairs(n);
    let f_index: BTreeMap<ProductPair, usize> = f.iter().enumerate().map(|(idx, p)| (*p, z.len() + idx)).collect();
    let z_index: BTreeMap<Membership, usize> = z.iter().enumerate().map(|(idx, m)| (*m, idx)).collect();
    let products = inst.linearizable_products();

    let one = T::one();
    let mut rows = Vec::new();
    for p in &products {
        rows.push(CoverRow {
            kind: CoverRowKind::Fix(*p),
            terms: vec![(f_index[p], one.clone())],
            sense: RowSense::Eq,
            rhs: one.clone(),
        });
    }
    for (idx, m) in z.iter().enumerate() {
        for i in inst.constraint(m.k).support() {
            let pair = ProductPair::new(i, m.j);
            rows.push(CoverRow {
                kind: CoverRowKind::Induce { pair, by: *m },
                terms: vec![(f_index[&pair], one.clone()), (idx, -one.clone())],
                sense: RowSense::Ge,
                rhs: T::zero(),
            });
        }
    }
    for pair in &f {
        let (i, j) = (pair.i, pair.j);
        let mut cover = |condition: Condition, members: Vec<Membership>| {
            let mut terms: Vec<(usize, T)> = members.iter().map(|m| (z_index[m], one.clone())).collect();
            terms.sort_by_key(|(c, _)| *c);
            terms.dedup_by_key(|(c, _)| *c);
            terms.push((f_index[pair], -one.clone()));
            rows.push(CoverRow {
                kind: CoverRowKind::Cover { pair: *pair, condition },
                terms,
                sense: RowSense::Ge,
                rhs: T::zero(),
            });
        };
        let with = |factor: VarId, multiplier: VarId, kinds: &[MultiplierKind]| -> Vec<Membership> {
            inst.indexed_constraints()
                .filter(|(_, c)| c.contains(factor))
                .flat_map(|(k, _)| kinds.iter().map(move |&kind| Membership { k, kind, j: multiplier }))
                .filter(|m| z_index.contains_key(m))
                .collect()
        };
        use MultiplierKind::{Equation, Minus, Plus};
        cover(Condition::One, with(i, j, &[Equation, Plus]));
        cover(Condition::Two, with(j, i, &[Equation, Plus]));
        let mut three = with(j, i, &[Equation, Minus]);
        three.extend(with(i, j, &[Equation, Minus]));
        cover(Condition::Three, three);
    }

    Ok(CoverModel {
        n,
        constraint_count: inst.constraints.len(),
        z,
        f,
        rows,
        weights: weights.clone(),
        products,
        excluded,
        f_index,
    })
}

impl<T: Scalar> CoverModel<T> {
    pub fn column_count(&self) -> usize {
        self.z.len() + self.f.len()
    }

    pub fn f_column(&self, pair: &ProductPair) -> Option<usize> {
        self.f_index.get(pair).copied()
    }

    /// Objective coefficient of every column.
    pub fn costs(&self) -> Vec<T> {
        self.z
            .iter()
            .map(|m| self.weights.of(m.kind).clone())
            .chain(self.f.iter().map(|_| self.weights.product.clone()))
            .collect()
    }

    /// LP relaxation with some `z` fixed. `f` columns that no membership can
    /// induce and that are not demanded are dropped together with their
    /// coverage rows: such `f` is zero in every optimal solution. Returns the
    /// LP and, for each LP column, the model column it stands for.
    pub fn relaxation(&self, fixed: &[Option<bool>]) -> (LpProblem<T>, Vec<usize>) {
        let mut live = vec![true; self.column_count()];
        let mut reachable = vec![false; self.f.len()];
        for row in &self.rows {
            match row.kind {
                CoverRowKind::Fix(p) | CoverRowKind::Induce { pair: p, .. } => {
                    reachable[self.f_index[&p] - self.z.len()] = true;
                }
                CoverRowKind::Cover { .. } => {}
            }
        }
        for (idx, r) in reachable.iter().enumerate() {
            live[self.z.len() + idx] = *r;
        }
        let mut map = vec![usize::MAX; self.column_count()];
        let mut back = Vec::new();
        let mut lp = LpProblem::new(Direction::Minimize);
        let costs = self.costs();
        let mut objective = Vec::new();
        for col in 0..self.column_count() {
            if !live[col] {
                continue;
            }
            let (name, lo, hi) = if col < self.z.len() {
                let m = &self.z[col];
                let name = format!("z{}_k{}_j{}", m.kind, m.k, m.j);
                match fixed.get(col).copied().flatten() {
                    Some(v) => {
                        let b = if v { T::one() } else { T::zero() };
                        (name, b.clone(), b)
                    }
                    None => (name, T::zero(), T::one()),
                }
            } else {
                let p = &self.f[col - self.z.len()];
                (format!("f{}_{}", p.i, p.j), T::zero(), T::one())
            };
            map[col] = lp.add_column(name, lo, Some(hi));
            back.push(col);
            objective.push((map[col], costs[col].clone()));
        }
        lp.set_objective(Direction::Minimize, objective);
        for row in &self.rows {
            if row.terms.iter().any(|(c, _)| !live[*c]) {
                continue;
            }
            let coeffs = row.terms.iter().map(|(c, a)| (map[*c], a.clone())).collect();
            lp.add_row(coeffs, row.sense, row.rhs.clone());
        }
        (lp, back)
    }

    /// For binary `z`, sets each `f` to the largest of its lower bounds and
    /// checks every row. Returns the objective value and the induced set if
    /// feasible.
    pub fn evaluate(&self, z: &[bool]) -> Option<(T, BTreeSet<ProductPair>)> {
        assert_eq!(z.len(), self.z.len());
        let mut point: Vec<T> = z.iter().map(|&b| if b { T::one() } else { T::zero() }).collect();
        point.extend(self.f.iter().map(|_| T::zero()));
        for row in &self.rows {
            match row.kind {
                CoverRowKind::Fix(p) => point[self.f_index[&p]] = T::one(),
                CoverRowKind::Induce { pair, by } => {
                    let zi = self.z_position(&by);
                    if z[zi] {
                        point[self.f_index[&pair]] = T::one();
                    }
                }
                CoverRowKind::Cover { .. } => {}
            }
        }
        for row in &self.rows {
            let lhs = row.terms.iter().fold(T::zero(), |acc, (c, a)| acc + a.clone() * point[*c].clone());
            if !row.sense.holds(&lhs, &row.rhs) {
                return None;
            }
        }
        let value = self.costs().into_iter().zip(&point).fold(T::zero(), |acc, (c, v)| acc + c * v.clone());
        let q =
            self.f.iter().enumerate().filter(|(idx, _)| point[self.z.len() + idx].is_one()).map(|(_, p)| *p).collect();
        Some((value, q))
    }

    fn z_position(&self, m: &Membership) -> usize {
        // z is sorted by (k, kind, j).
        self.z.binary_search(m).expect("membership is a model column")
    }

    pub fn assignment(&self, z: &[bool]) -> MultiplierAssignment {
        MultiplierAssignment::from_memberships(
            self.constraint_count,
            self.z.iter().zip(z).filter(|(_, on)| **on).map(|(m, _)| *m),
        )
    }

    pub fn indicator(&self, design: &MultiplierAssignment) -> Vec<bool> {
        self.z.iter().map(|m| design.contains(m)).collect()
    }

    pub fn is_equation_only(&self) -> bool {
        self.z.iter().all(|m| m.kind == MultiplierKind::Equation)
    }
}
