//! Compact and Glover–Woolsey linearizations.
//!
//! A design multiplies constraint `k` by `x_j` (equations and `I+`
//! inequalities) or by `1 - x_j` (`I-` inequalities). Every product created
//! this way becomes a continuous variable `y_ij` with `i <= j`; the set of
//! such pairs is the induced set `Q`. Squares `y_jj` never become columns:
//! they are replaced by `x_j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::cover::{DesignError, Membership, MultiplierAssignment, MultiplierKind};
use crate::model::{BqpInstance, ProductPair, RowSense, VarId};
use crate::scalar::Scalar;

/// One way a pair entered `Q`: constraint `k`, multiplied by `multiplier`,
/// contributed its term in `factor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Induction {
    pub k: usize,
    pub kind: MultiplierKind,
    pub multiplier: VarId,
    pub factor: VarId,
}

/// The induced set `Q` with provenance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InducedProducts {
    pub pairs: BTreeMap<ProductPair, Vec<Induction>>,
}

impl InducedProducts {
    pub fn contains(&self, pair: &ProductPair) -> bool {
        self.pairs.contains_key(pair)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ProductPair> + '_ {
        self.pairs.keys().copied()
    }

    pub fn squares(&self) -> impl Iterator<Item = ProductPair> + '_ {
        self.iter().filter(ProductPair::is_square)
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = ProductPair> + '_ {
        self.iter().filter(|p| !p.is_square())
    }

    pub fn pair_set(&self) -> BTreeSet<ProductPair> {
        self.iter().collect()
    }
}

/// `Q = {(i,j) : i <= j, exists k with i in A_k and j in B_k, or j in A_k and i in B_k}`.
pub fn induce_products<T: Scalar>(inst: &BqpInstance<T>, design: &MultiplierAssignment) -> InducedProducts {
    let mut pairs: BTreeMap<ProductPair, Vec<Induction>> = BTreeMap::new();
    for m in design.memberships() {
        for factor in inst.constraint(m.k).support() {
            pairs.entry(ProductPair::new(factor, m.j)).or_default().push(Induction {
                k: m.k,
                kind: m.kind,
                multiplier: m.j,
                factor,
            });
        }
    }
    InducedProducts { pairs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Some `k` with `i in A_k`, `j in B^E_k ∪ B^{I+}_k`.
    One,
    /// Some `l` with `j in A_l`, `i in B^E_l ∪ B^{I+}_l`.
    Two,
    /// Some `k` with `i in A_k`, `j in B^E_k ∪ B^{I-}_k`, or the mirror image.
    Three,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::One => f.write_str("Condition 1"),
            Condition::Two => f.write_str("Condition 2"),
            Condition::Three => f.write_str("Condition 3"),
        }
    }
}

/// A membership that establishes a condition for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub k: usize,
    pub kind: MultiplierKind,
    /// The factor of the pair that is used as multiplier.
    pub multiplier: VarId,
}

impl Witness {
    pub fn membership(&self) -> Membership {
        Membership { k: self.k, kind: self.kind, j: self.multiplier }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairConditions {
    pub one: Vec<Witness>,
    pub two: Vec<Witness>,
    pub three: Vec<Witness>,
}

impl PairConditions {
    pub fn witnesses(&self, c: Condition) -> &[Witness] {
        match c {
            Condition::One => &self.one,
            Condition::Two => &self.two,
            Condition::Three => &self.three,
        }
    }

    pub fn missing(&self) -> Vec<Condition> {
        [Condition::One, Condition::Two, Condition::Three]
            .into_iter()
            .filter(|c| self.witnesses(*c).is_empty())
            .collect()
    }
}

/// Per-pair condition witnesses. Squares are listed too, but since `y_jj`
/// is always replaced by `x_j` they do not need the conditions for
/// consistency; the auxiliary cover program nevertheless demands them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionReport {
    pub pairs: BTreeMap<ProductPair, PairConditions>,
}

impl ConditionReport {
    /// Missing conditions on off-diagonal pairs.
    pub fn violations(&self) -> Vec<(ProductPair, Condition)> {
        self.collect_violations(false)
    }

    /// Missing conditions on all pairs of `Q`, squares included.
    pub fn violations_including_squares(&self) -> Vec<(ProductPair, Condition)> {
        self.collect_violations(true)
    }

    fn collect_violations(&self, squares: bool) -> Vec<(ProductPair, Condition)> {
        self.pairs
            .iter()
            .filter(|(p, _)| squares || !p.is_square())
            .flat_map(|(p, c)| c.missing().into_iter().map(move |cond| (*p, cond)))
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn get(&self, pair: &ProductPair) -> Option<&PairConditions> {
        self.pairs.get(pair)
    }
}

/// Evaluates Conditions 1–3 for every pair of `q`.
pub fn check_conditions<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
    q: &InducedProducts,
) -> ConditionReport {
    let mut pairs = BTreeMap::new();
    for pair in q.iter() {
        let (i, j) = (pair.i, pair.j);
        let mut pc = PairConditions::default();
        for (k, c) in inst.indexed_constraints() {
            let sets = design.of(k);
            for kind in [MultiplierKind::Equation, MultiplierKind::Plus, MultiplierKind::Minus] {
                let set = sets.set(kind);
                // factor i, multiplier j
                if c.contains(i) && set.contains(&j) {
                    let w = Witness { k, kind, multiplier: j };
                    if kind.bounds_above() {
                        pc.one.push(w);
                    }
                    if kind.bounds_below() {
                        pc.three.push(w);
                    }
                }
                // factor j, multiplier i
                if c.contains(j) && set.contains(&i) {
                    let w = Witness { k, kind, multiplier: i };
                    if kind.bounds_above() {
                        pc.two.push(w);
                    }
                    if kind.bounds_below() && !(i == j && pc.three.contains(&w)) {
                        pc.three.push(w);
                    }
                }
            }
        }
        pairs.insert(pair, pc);
    }
    ConditionReport { pairs }
}

/// A column of a linearized model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    X(VarId),
    Y(ProductPair),
}

impl Column {
    pub fn name(&self) -> String {
        match self {
            Column::X(v) => format!("x{v}"),
            Column::Y(p) => format!("y{}_{}", p.i, p.j),
        }
    }
}

/// Origin of a model row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowTag {
    Original {
        k: usize,
    },
    /// Equation `k` times `x_j`.
    CompactE {
        k: usize,
        j: VarId,
    },
    /// Inequality `k` times `x_j`.
    CompactPlus {
        k: usize,
        j: VarId,
    },
    /// Inequality `k` times `1 - x_j`.
    CompactMinus {
        k: usize,
        j: VarId,
    },
    /// `y_ij <= x_i`.
    Gw1(ProductPair),
    /// `y_ij <= x_j`.
    Gw2(ProductPair),
    /// `y_ij >= x_i + x_j - 1`.
    Gw3(ProductPair),
    Passthrough {
        index: usize,
    },
}

impl RowTag {
    pub fn default_name(&self) -> String {
        match self {
            RowTag::Original { k } => format!("ORIG_k{k}"),
            RowTag::CompactE { k, j } => format!("CL_E_k{k}_j{j}"),
            RowTag::CompactPlus { k, j } => format!("CL_Ip_k{k}_j{j}"),
            RowTag::CompactMinus { k, j } => format!("CL_Im_k{k}_j{j}"),
            RowTag::Gw1(p) => format!("GW1_i{}_j{}", p.i, p.j),
            RowTag::Gw2(p) => format!("GW2_i{}_j{}", p.i, p.j),
            RowTag::Gw3(p) => format!("GW3_i{}_j{}", p.i, p.j),
            RowTag::Passthrough { index } => format!("PT_{index}"),
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, RowTag::CompactE { .. } | RowTag::CompactPlus { .. } | RowTag::CompactMinus { .. })
    }

    pub fn is_gw(&self) -> bool {
        matches!(self, RowTag::Gw1(_) | RowTag::Gw2(_) | RowTag::Gw3(_))
    }

    /// Rows that define the product variables (compact or Glover–Woolsey).
    pub fn is_linearization(&self) -> bool {
        self.is_compact() || self.is_gw()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRow<T> {
    pub name: String,
    pub tag: RowTag,
    pub terms: Vec<(Column, T)>,
    pub sense: RowSense,
    pub rhs: T,
}

impl<T: Scalar> ModelRow<T> {
    /// Row activity at binary `x` with every `y_ij = x_i x_j`.
    pub fn activity_at_products(&self, x: &[bool]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (col, a)| {
            let on = match col {
                Column::X(v) => x[v.slot()],
                Column::Y(p) => x[p.i.slot()] && x[p.j.slot()],
            };
            if on {
                acc + a.clone()
            } else {
                acc
            }
        })
    }

    pub fn coefficient(&self, col: &Column) -> Option<&T> {
        self.terms.iter().find(|(c, _)| c == col).map(|(_, a)| a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Compact,
    GloverWoolsey,
}

/// A MILP over binary `x` and continuous `y in [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedModel<T> {
    pub method: Method,
    pub n: usize,
    /// Off-diagonal product columns, sorted.
    pub y_columns: Vec<ProductPair>,
    pub rows: Vec<ModelRow<T>>,
    pub objective: Vec<(Column, T)>,
}

impl<T: Scalar> LinearizedModel<T> {
    pub fn columns(&self) -> impl Iterator<Item = Column> + '_ {
        (1..=self.n).map(|i| Column::X(VarId(i))).chain(self.y_columns.iter().map(|p| Column::Y(*p)))
    }

    pub fn column_count(&self) -> usize {
        self.n + self.y_columns.len()
    }

    /// Position of a column in [`Self::columns`].
    pub fn column_index(&self, col: &Column) -> Option<usize> {
        match col {
            Column::X(v) => (v.0 >= 1 && v.0 <= self.n).then(|| v.slot()),
            Column::Y(p) => self.y_columns.binary_search(p).ok().map(|idx| self.n + idx),
        }
    }

    pub fn count_rows(&self, pred: impl Fn(&RowTag) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.tag)).count()
    }

    pub fn compact_row_count(&self) -> usize {
        self.count_rows(RowTag::is_compact)
    }

    pub fn gw_row_count(&self) -> usize {
        self.count_rows(RowTag::is_gw)
    }

    /// Drops rows not matching `keep`.
    pub fn filtered(&self, keep: impl Fn(&RowTag) -> bool) -> Self {
        LinearizedModel {
            method: self.method,
            n: self.n,
            y_columns: self.y_columns.clone(),
            rows: self.rows.iter().filter(|r| keep(&r.tag)).cloned().collect(),
            objective: self.objective.clone(),
        }
    }

    pub fn row(&self, tag: &RowTag) -> Option<&ModelRow<T>> {
        self.rows.iter().find(|r| &r.tag == tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearizeError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("demanded product {0} is not induced by the design")]
    MissingProduct(ProductPair),
    #[error("{condition} fails for product {pair}")]
    ConditionViolation { pair: ProductPair, condition: Condition },
}

/// Adds `coeff * col` to a term list, merging duplicates.
fn add_term<T: Scalar>(terms: &mut BTreeMap<Column, T>, col: Column, coeff: T) {
    let slot = terms.entry(col).or_insert_with(T::zero);
    *slot = slot.clone() + coeff;
}

fn finish_row<T: Scalar>(tag: RowTag, terms: BTreeMap<Column, T>, sense: RowSense, rhs: T) -> Option<ModelRow<T>> {
    let terms: Vec<(Column, T)> = terms.into_iter().filter(|(_, a)| !a.is_zero()).collect();
    if terms.is_empty() && sense.holds(&T::zero(), &rhs) {
        return None;
    }
    Some(ModelRow { name: tag.default_name(), tag, terms, sense, rhs })
}

/// The column standing for `x_a x_b`.
fn product_column(a: VarId, b: VarId) -> Column {
    if a == b {
        Column::X(a)
    } else {
        Column::Y(ProductPair::new(a, b))
    }
}

fn original_rows<T: Scalar>(inst: &BqpInstance<T>) -> Vec<ModelRow<T>> {
    inst.indexed_constraints()
        .map(|(k, c)| {
            let tag = RowTag::Original { k };
            ModelRow {
                name: tag.default_name(),
                tag,
                terms: c.terms.iter().map(|(v, a)| (Column::X(*v), a.clone())).collect(),
                sense: c.sense.into(),
                rhs: c.rhs.clone(),
            }
        })
        .collect()
}

fn gw_rows<T: Scalar>(pair: ProductPair) -> Vec<ModelRow<T>> {
    let y = Column::Y(pair);
    let (xi, xj) = (Column::X(pair.i), Column::X(pair.j));
    let one = T::one();
    let row = |tag: RowTag, terms: Vec<(Column, T)>, sense, rhs| ModelRow {
        name: tag.default_name(),
        tag,
        terms,
        sense,
        rhs,
    };
    vec![
        row(RowTag::Gw1(pair), vec![(y, one.clone()), (xi, -one.clone())], RowSense::Le, T::zero()),
        row(RowTag::Gw2(pair), vec![(y, one.clone()), (xj, -one.clone())], RowSense::Le, T::zero()),
        row(RowTag::Gw3(pair), vec![(y, one.clone()), (xi, -one.clone()), (xj, -one.clone())], RowSense::Ge, -one),
    ]
}

fn passthrough_rows<T: Scalar>(inst: &BqpInstance<T>) -> Vec<ModelRow<T>> {
    inst.passthrough
        .iter()
        .enumerate()
        .map(|(idx, pt)| {
            let tag = RowTag::Passthrough { index: idx + 1 };
            let mut terms = BTreeMap::new();
            for (v, a) in &pt.x_terms {
                add_term(&mut terms, Column::X(*v), a.clone());
            }
            for (p, a) in &pt.y_terms {
                add_term(&mut terms, product_column(p.i, p.j), a.clone());
            }
            ModelRow {
                name: pt.name.clone().unwrap_or_else(|| tag.default_name()),
                tag,
                terms: terms.into_iter().filter(|(_, a)| !a.is_zero()).collect(),
                sense: pt.sense,
                rhs: pt.rhs.clone(),
            }
        })
        .collect()
}

/// Objective with bilinear terms rewired onto `y`; squares go to `x_i`.
fn rewired_objective<T: Scalar>(inst: &BqpInstance<T>) -> Vec<(Column, T)> {
    let mut terms = BTreeMap::new();
    for (v, c) in &inst.objective.linear {
        add_term(&mut terms, Column::X(*v), c.clone());
    }
    for (p, d) in &inst.objective.quadratic {
        add_term(&mut terms, product_column(p.i, p.j), d.clone());
    }
    terms.into_iter().filter(|(_, a)| !a.is_zero()).collect()
}

/// Compact rows for the design, square terms eliminated.
fn compact_rows<T: Scalar>(inst: &BqpInstance<T>, design: &MultiplierAssignment) -> Vec<ModelRow<T>> {
    let mut rows = Vec::new();
    for m in design.memberships() {
        let c = inst.constraint(m.k);
        let j = m.j;
        let mut terms = BTreeMap::new();
        let (tag, sense, rhs) = match m.kind {
            MultiplierKind::Equation | MultiplierKind::Plus => {
                // sum_h a_h y_hj - beta x_j (=|<=) 0; y_jj = x_j moves onto x_j.
                add_term(&mut terms, Column::X(j), -c.rhs.clone());
                for (h, a) in &c.terms {
                    add_term(&mut terms, product_column(*h, j), a.clone());
                }
                let (tag, sense) = if m.kind == MultiplierKind::Equation {
                    (RowTag::CompactE { k: m.k, j }, RowSense::Eq)
                } else {
                    (RowTag::CompactPlus { k: m.k, j }, RowSense::Le)
                };
                (tag, sense, T::zero())
            }
            MultiplierKind::Minus => {
                // sum_h a_h (x_h - y_hj) + beta x_j <= beta; the h = j term vanishes.
                add_term(&mut terms, Column::X(j), c.rhs.clone());
                for (h, a) in &c.terms {
                    if *h != j {
                        add_term(&mut terms, Column::X(*h), a.clone());
                        add_term(&mut terms, product_column(*h, j), -a.clone());
                    }
                }
                (RowTag::CompactMinus { k: m.k, j }, RowSense::Le, c.rhs.clone())
            }
        };
        rows.extend(finish_row(tag, terms, sense, rhs));
    }
    rows
}

/// Checks the design and builds the compact linearization.
pub fn compact_linearize<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
) -> Result<LinearizedModel<T>, LinearizeError> {
    design.check_against(inst)?;
    let q = induce_products(inst, design);
    for p in inst.linearizable_products() {
        if !p.is_square() && !q.contains(&p) {
            return Err(LinearizeError::MissingProduct(p));
        }
    }
    let report = check_conditions(inst, design, &q);
    if let Some((pair, condition)) = report.violations().into_iter().next() {
        return Err(LinearizeError::ConditionViolation { pair, condition });
    }
    Ok(build_compact(inst, design, &q))
}

/// Builds the compact model without checking the conditions. Used to
/// examine inconsistent designs.
pub fn compact_linearize_unchecked<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
) -> Result<LinearizedModel<T>, LinearizeError> {
    design.check_against(inst)?;
    let q = induce_products(inst, design);
    Ok(build_compact(inst, design, &q))
}

fn build_compact<T: Scalar>(
    inst: &BqpInstance<T>,
    design: &MultiplierAssignment,
    q: &InducedProducts,
) -> LinearizedModel<T> {
    let unlinearizable: BTreeSet<ProductPair> =
        inst.unlinearizable_products().into_iter().filter(|p| !p.is_square()).collect();
    // Demanded products that the design did not induce still need a column
    // (only possible for unchecked designs); they get no defining rows.
    let uninduced = inst.linearizable_products().into_iter().filter(|p| !p.is_square() && !q.contains(p));
    let y_columns: BTreeSet<ProductPair> =
        q.off_diagonal().chain(unlinearizable.iter().copied()).chain(uninduced).collect();

    let mut rows = original_rows(inst);
    rows.extend(compact_rows(inst, design));
    for p in &unlinearizable {
        rows.extend(gw_rows(*p));
    }
    rows.extend(passthrough_rows(inst));

    LinearizedModel {
        method: Method::Compact,
        n: inst.n,
        y_columns: y_columns.into_iter().collect(),
        rows,
        objective: rewired_objective(inst),
    }
}

/// Three rows per off-diagonal demanded product; squares map to `x_i`.
pub fn glover_woolsey<T: Scalar>(inst: &BqpInstance<T>) -> LinearizedModel<T> {
    let pairs: BTreeSet<ProductPair> = inst.products.iter().map(|p| p.canonical()).filter(|p| !p.is_square()).collect();
    let mut rows = original_rows(inst);
    for p in &pairs {
        rows.extend(gw_rows(*p));
    }
    rows.extend(passthrough_rows(inst));
    LinearizedModel {
        method: Method::GloverWoolsey,
        n: inst.n,
        y_columns: pairs.into_iter().collect(),
        rows,
        objective: rewired_objective(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConstraintSense, SideConstraint};
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn pair(i: usize, j: usize) -> ProductPair {
        ProductPair::from_indices(i, j)
    }

    fn assignment() -> (BqpInstance<Rational>, MultiplierAssignment) {
        let inst = BqpInstance::new(2)
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
            .with_product(1, 2);
        let design = MultiplierAssignment::from_memberships(
            1,
            [1, 2].map(|j| Membership { k: 1, kind: MultiplierKind::Equation, j: VarId(j) }),
        );
        (inst, design)
    }

    fn knapsack(plus: &[usize], minus: &[usize]) -> (BqpInstance<Rational>, MultiplierAssignment) {
        let inst = BqpInstance::new(3)
            .with_constraint(SideConstraint::unit(ConstraintSense::Le, &[1, 2, 3], r(1)).unwrap())
            .with_product(1, 2);
        let mut design = MultiplierAssignment::for_instance(&inst);
        for &j in plus {
            design.insert(Membership { k: 1, kind: MultiplierKind::Plus, j: VarId(j) });
        }
        for &j in minus {
            design.insert(Membership { k: 1, kind: MultiplierKind::Minus, j: VarId(j) });
        }
        (inst, design)
    }

    #[test]
    fn assignment_induces_three_pairs() {
        let (inst, design) = assignment();
        let q = induce_products(&inst, &design);
        assert_eq!(q.pair_set(), [pair(1, 1), pair(1, 2), pair(2, 2)].into_iter().collect());
        assert!(induce_products(&inst, &MultiplierAssignment::for_instance(&inst)).is_empty());
    }

    #[test]
    fn knapsack_induces_five_pairs() {
        let (inst, design) = knapsack(&[1, 2], &[]);
        let q = induce_products(&inst, &design);
        // Independent expansion: every (h, j) with h in A_1, j in {1, 2}.
        let mut expected = BTreeSet::new();
        for h in 1..=3 {
            for j in 1..=2 {
                expected.insert(pair(h, j));
            }
        }
        assert_eq!(q.pair_set(), expected);
        assert_eq!(q.len(), 5);
    }

    #[test]
    fn assignment_conditions_hold_with_single_constraint() {
        let (inst, design) = assignment();
        let q = induce_products(&inst, &design);
        let report = check_conditions(&inst, &design, &q);
        assert!(report.passes());
        let pc = report.get(&pair(1, 2)).unwrap();
        assert_eq!(pc.one[0].k, 1);
        assert_eq!(pc.two[0].k, 1);
        assert!(!pc.three.is_empty());
    }

    #[test]
    fn knapsack_without_minus_fails_condition_three() {
        let (inst, design) = knapsack(&[1, 2], &[]);
        let q = induce_products(&inst, &design);
        let report = check_conditions(&inst, &design, &q);
        assert!(report.violations().contains(&(pair(1, 2), Condition::Three)));
    }

    #[test]
    fn assignment_rows_force_zero_product() {
        let (inst, design) = assignment();
        let model = compact_linearize(&inst, &design).unwrap();
        assert_eq!(model.y_columns, vec![pair(1, 2)]);
        assert_eq!(model.compact_row_count(), 2);
        // Row for j = 1: x1 + y12 = x1, i.e. y12 = 0 after moving the square.
        let row = model.row(&RowTag::CompactE { k: 1, j: VarId(1) }).unwrap();
        assert_eq!(row.name, "CL_E_k1_j1");
        assert_eq!(row.terms, vec![(Column::Y(pair(1, 2)), r(1))]);
        assert_eq!(row.rhs, r(0));
        assert_eq!(row.sense, RowSense::Eq);
    }

    #[test]
    fn minus_row_drops_square_term() {
        let (inst, design) = knapsack(&[1, 2, 3], &[1, 2, 3]);
        let model = compact_linearize(&inst, &design).unwrap();
        let row = model.row(&RowTag::CompactMinus { k: 1, j: VarId(1) }).unwrap();
        // x2 + x3 - y12 - y13 + x1 <= 1
        let expected: Vec<(Column, Rational)> = vec![
            (Column::X(VarId(1)), r(1)),
            (Column::X(VarId(2)), r(1)),
            (Column::X(VarId(3)), r(1)),
            (Column::Y(pair(1, 2)), r(-1)),
            (Column::Y(pair(1, 3)), r(-1)),
        ];
        assert_eq!(row.terms, expected);
        assert_eq!(row.rhs, r(1));
    }

    #[test]
    fn inconsistent_design_is_rejected() {
        let (inst, design) = knapsack(&[1, 2], &[]);
        let err = compact_linearize(&inst, &design).unwrap_err();
        assert!(matches!(err, LinearizeError::ConditionViolation { .. }));

        let (inst, _) = assignment();
        let err = compact_linearize(&inst, &MultiplierAssignment::for_instance(&inst)).unwrap_err();
        assert_eq!(err, LinearizeError::MissingProduct(pair(1, 2)));
    }

    #[test]
    fn singleton_equation_rows() {
        // 2 x1 = 2 times x1: 2 x1 = 2 x1 vanishes; 2 x1 = 3 times x1 forces x1 = 0.
        for (beta, kept) in [(2, false), (3, true)] {
            let inst = BqpInstance::new(1)
                .with_constraint(SideConstraint::new(ConstraintSense::Eq, vec![(VarId(1), r(2))], r(beta)).unwrap());
            let design = MultiplierAssignment::from_memberships(
                1,
                [Membership { k: 1, kind: MultiplierKind::Equation, j: VarId(1) }],
            );
            let model = compact_linearize(&inst, &design).unwrap();
            assert_eq!(model.compact_row_count() == 1, kept);
        }
    }

    #[test]
    fn glover_woolsey_counts() {
        let (inst, _) = assignment();
        let gw = glover_woolsey(&inst);
        assert_eq!(gw.gw_row_count(), 3);
        let names: Vec<&str> = gw.rows.iter().filter(|r| r.tag.is_gw()).map(|r| r.name.as_str()).collect();
        assert_eq!(names, vec!["GW1_i1_j2", "GW2_i1_j2", "GW3_i1_j2"]);

        let mut sq = BqpInstance::new(2)
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
            .with_product(1, 1);
        sq.objective.quadratic.insert(pair(1, 1), r(5));
        let gw = glover_woolsey(&sq);
        assert_eq!(gw.gw_row_count(), 0);
        assert!(gw.y_columns.is_empty());
        assert_eq!(gw.objective, vec![(Column::X(VarId(1)), r(5))]);
    }

    #[test]
    fn unlinearizable_products_get_gw_rows_in_compact_model() {
        let (mut inst, design) = assignment();
        inst.n = 3;
        inst.products.push(pair(1, 3));
        let model = compact_linearize(&inst, &design).unwrap();
        assert_eq!(model.gw_row_count(), 3);
        assert!(model.y_columns.contains(&pair(1, 3)));
    }
}
