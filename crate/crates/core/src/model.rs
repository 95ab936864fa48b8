//! Binary quadratic programs with positive-coefficient side constraints.
//!
//! An instance consists of binary variables `x_1..x_n`, a family of side
//! constraints `sum_{i in A_k} alpha_i^k x_i (= | <=) beta^k` with positive
//! data, a set of demanded products `x_i x_j` (stored as ordered pairs
//! `i <= j`), a linear-plus-bilinear objective, and pass-through rows that are
//! already linear in `x` and the product variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// 1-based index of a binary variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }

    /// Position in a 0-based vector.
    pub fn slot(self) -> usize {
        self.0 - 1
    }

    pub fn from_slot(slot: usize) -> Self {
        VarId(slot + 1)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A product `x_i x_j`. Canonical pairs have `i <= j`; squares are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductPair {
    pub i: VarId,
    pub j: VarId,
}

impl ProductPair {
    /// Orders the two factors.
    pub fn new(a: VarId, b: VarId) -> Self {
        if a <= b {
            ProductPair { i: a, j: b }
        } else {
            ProductPair { i: b, j: a }
        }
    }

    pub fn from_indices(a: usize, b: usize) -> Self {
        Self::new(VarId(a), VarId(b))
    }

    /// Keeps the factors as given, even if `i > j`.
    pub fn raw(i: VarId, j: VarId) -> Self {
        ProductPair { i, j }
    }

    pub fn is_ordered(&self) -> bool {
        self.i <= self.j
    }

    pub fn is_square(&self) -> bool {
        self.i == self.j
    }

    pub fn canonical(self) -> Self {
        Self::new(self.i, self.j)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.i == v || self.j == v
    }
}

impl fmt::Display for ProductPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintSense {
    Eq,
    Le,
}

/// Sense of a general linear row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

impl RowSense {
    pub fn holds<T: Scalar>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            RowSense::Le => lhs <= rhs,
            RowSense::Ge => lhs >= rhs,
            RowSense::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        }
    }
}

impl From<ConstraintSense> for RowSense {
    fn from(s: ConstraintSense) -> Self {
        match s {
            ConstraintSense::Eq => RowSense::Eq,
            ConstraintSense::Le => RowSense::Le,
        }
    }
}

/// `sum_{i in A_k} alpha_i x_i (= | <=) beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideConstraint<T> {
    pub sense: ConstraintSense,
    pub terms: BTreeMap<VarId, T>,
    pub rhs: T,
}

impl<T: Scalar> SideConstraint<T> {
    /// Checked constructor: coefficients and right-hand side must be positive
    /// and the support nonempty.
    pub fn new(
        sense: ConstraintSense,
        terms: impl IntoIterator<Item = (VarId, T)>,
        rhs: T,
    ) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for (v, a) in terms {
            if !a.is_positive() {
                return Err(ModelError::NonPositive(format!("coefficient of x{v} is {a}")));
            }
            if map.insert(v, a).is_some() {
                return Err(ModelError::DuplicateTerm(v));
            }
        }
        if map.is_empty() {
            return Err(ModelError::EmptyConstraint);
        }
        if !rhs.is_positive() {
            return Err(ModelError::NonPositive(format!("right-hand side is {rhs}")));
        }
        Ok(SideConstraint { sense, terms: map, rhs })
    }

    /// Unit coefficients on `vars`.
    pub fn unit(sense: ConstraintSense, vars: &[usize], rhs: T) -> Result<Self, ModelError> {
        Self::new(sense, vars.iter().map(|&v| (VarId(v), T::one())), rhs)
    }

    pub fn is_equation(&self) -> bool {
        self.sense == ConstraintSense::Eq
    }

    /// The support `A_k`.
    pub fn support(&self) -> impl Iterator<Item = VarId> + '_ {
        self.terms.keys().copied()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.terms.contains_key(&v)
    }

    pub fn coeff(&self, v: VarId) -> Option<&T> {
        self.terms.get(&v)
    }

    pub fn lhs_at(&self, x: &[bool]) -> T {
        self.terms.iter().filter(|(v, _)| x[v.slot()]).fold(T::zero(), |acc, (_, a)| acc + a.clone())
    }

    pub fn is_satisfied(&self, x: &[bool]) -> bool {
        let lhs = self.lhs_at(x);
        match self.sense {
            ConstraintSense::Eq => lhs == self.rhs,
            ConstraintSense::Le => lhs <= self.rhs,
        }
    }

    pub fn has_unit_coefficients(&self) -> bool {
        self.terms.values().all(|a| a.is_one())
    }
}

/// `c^T x + d^T y` (minimized).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective<T> {
    pub linear: BTreeMap<VarId, T>,
    pub quadratic: BTreeMap<ProductPair, T>,
}

impl<T> Default for Objective<T> {
    fn default() -> Self {
        Objective { linear: BTreeMap::new(), quadratic: BTreeMap::new() }
    }
}

/// An already-linear row over `x` and the product variables, re-emitted verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassthroughRow<T> {
    pub name: Option<String>,
    pub x_terms: BTreeMap<VarId, T>,
    pub y_terms: BTreeMap<ProductPair, T>,
    pub sense: RowSense,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BqpInstance<T> {
    pub n: usize,
    pub constraints: Vec<SideConstraint<T>>,
    pub products: Vec<ProductPair>,
    pub objective: Objective<T>,
    pub passthrough: Vec<PassthroughRow<T>>,
}

/// Structural problems that make an instance unusable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance has no variables")]
    NoVariables,
    #[error("variable x{var} referenced in {place} is outside 1..={n}")]
    DanglingVar { var: usize, n: usize, place: String },
    #[error("non-positive data: {0}")]
    NonPositive(String),
    #[error("variable x{0} appears twice in one constraint")]
    DuplicateTerm(VarId),
    #[error("constraint has no terms")]
    EmptyConstraint,
    #[error("constraint index {0} does not exist")]
    UnknownConstraint(usize),
}

impl<T: Scalar> BqpInstance<T> {
    pub fn new(n: usize) -> Self {
        BqpInstance {
            n,
            constraints: Vec::new(),
            products: Vec::new(),
            objective: Objective::default(),
            passthrough: Vec::new(),
        }
    }

    pub fn with_constraint(mut self, c: SideConstraint<T>) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_product(mut self, i: usize, j: usize) -> Self {
        self.products.push(ProductPair::from_indices(i, j));
        self
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (1..=self.n).map(VarId)
    }

    /// Constraint `k` (1-based).
    pub fn constraint(&self, k: usize) -> &SideConstraint<T> {
        &self.constraints[k - 1]
    }

    /// `(k, constraint)` with 1-based `k`.
    pub fn indexed_constraints(&self) -> impl Iterator<Item = (usize, &SideConstraint<T>)> {
        self.constraints.iter().enumerate().map(|(idx, c)| (idx + 1, c))
    }

    pub fn equations(&self) -> impl Iterator<Item = (usize, &SideConstraint<T>)> {
        self.indexed_constraints().filter(|(_, c)| c.is_equation())
    }

    pub fn inequalities(&self) -> impl Iterator<Item = (usize, &SideConstraint<T>)> {
        self.indexed_constraints().filter(|(_, c)| !c.is_equation())
    }

    pub fn has_inequalities(&self) -> bool {
        self.constraints.iter().any(|c| !c.is_equation())
    }

    /// `max_k |A_k|`.
    pub fn max_support(&self) -> usize {
        self.constraints.iter().map(|c| c.terms.len()).max().unwrap_or(0)
    }

    /// Whether some side constraint involves `v`.
    pub fn is_covered(&self, v: VarId) -> bool {
        self.constraints.iter().any(|c| c.contains(v))
    }

    /// Both factors appear in some side constraint.
    pub fn prerequisite_met(&self, pair: ProductPair) -> bool {
        self.is_covered(pair.i) && self.is_covered(pair.j)
    }

    /// Demanded products the compact technique can handle, canonicalized.
    pub fn linearizable_products(&self) -> BTreeSet<ProductPair> {
        self.products.iter().map(|p| p.canonical()).filter(|p| self.prerequisite_met(*p)).collect()
    }

    pub fn unlinearizable_products(&self) -> BTreeSet<ProductPair> {
        self.products.iter().map(|p| p.canonical()).filter(|p| !self.prerequisite_met(*p)).collect()
    }

    /// `x` satisfies every side constraint.
    pub fn is_feasible(&self, x: &[bool]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// Keeps only the listed side constraints (1-based) for linearization; the
    /// others become pass-through rows so the MILP still enforces them.
    pub fn restrict_to(&self, keep: &[usize]) -> Result<Self, ModelError> {
        for &k in keep {
            if k == 0 || k > self.constraints.len() {
                return Err(ModelError::UnknownConstraint(k));
            }
        }
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        let mut out = self.clone();
        out.constraints.clear();
        let mut demoted = Vec::new();
        for (k, c) in self.indexed_constraints() {
            if keep.contains(&k) {
                out.constraints.push(c.clone());
            } else {
                demoted.push(PassthroughRow {
                    name: Some(format!("SIDE_k{k}")),
                    x_terms: c.terms.clone(),
                    y_terms: BTreeMap::new(),
                    sense: c.sense.into(),
                    rhs: c.rhs.clone(),
                });
            }
        }
        out.passthrough.splice(0..0, demoted);
        Ok(out)
    }
}

/// One finding of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Issue {
    NonPositiveCoefficient {
        k: usize,
        var: VarId,
    },
    NonPositiveRhs {
        k: usize,
    },
    EmptyConstraint {
        k: usize,
    },
    UnorderedProduct(ProductPair),
    DuplicateProduct(ProductPair),
    ObjectiveTermNotInP(ProductPair),
    PassthroughTermNotInP {
        row: usize,
        pair: ProductPair,
    },
    /// Some factor of the product appears in no side constraint.
    Unlinearizable(ProductPair),
}

impl Issue {
    /// Everything except unlinearizable products blocks downstream processing.
    pub fn is_blocking(&self) -> bool {
        !matches!(self, Issue::Unlinearizable(_))
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NonPositiveCoefficient { k, var } => {
                write!(f, "constraint {k}: coefficient of x{var} is not positive")
            }
            Issue::NonPositiveRhs { k } => write!(f, "constraint {k}: right-hand side is not positive"),
            Issue::EmptyConstraint { k } => write!(f, "constraint {k}: no terms"),
            Issue::UnorderedProduct(p) => write!(f, "product {p} is not ordered (i > j)"),
            Issue::DuplicateProduct(p) => write!(f, "product {p} listed more than once"),
            Issue::ObjectiveTermNotInP(p) => write!(f, "objective term {p} is not a demanded product"),
            Issue::PassthroughTermNotInP { row, pair } => {
                write!(f, "pass-through row {row}: term {pair} is not a demanded product")
            }
            Issue::Unlinearizable(p) => {
                write!(f, "product {p} has a factor in no side constraint; it cannot be linearized compactly")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_clear(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has_blocking(&self) -> bool {
        self.issues.iter().any(Issue::is_blocking)
    }

    pub fn unlinearizable(&self) -> impl Iterator<Item = ProductPair> + '_ {
        self.issues.iter().filter_map(|i| match i {
            Issue::Unlinearizable(p) => Some(*p),
            _ => None,
        })
    }
}

fn check_var(v: VarId, n: usize, place: impl FnOnce() -> String) -> Result<(), ModelError> {
    if v.0 == 0 || v.0 > n {
        Err(ModelError::DanglingVar { var: v.0, n, place: place() })
    } else {
        Ok(())
    }
}

/// Reports positivity, ordering and prerequisite problems. Dangling variable
/// references are structural errors.
pub fn validate<T: Scalar>(inst: &BqpInstance<T>) -> Result<ValidationReport, ModelError> {
    let n = inst.n;
    if n == 0 {
        return Err(ModelError::NoVariables);
    }
    for (k, c) in inst.indexed_constraints() {
        for v in c.terms.keys() {
            check_var(*v, n, || format!("constraint {k}"))?;
        }
    }
    for p in &inst.products {
        check_var(p.i, n, || format!("product {p}"))?;
        check_var(p.j, n, || format!("product {p}"))?;
    }
    for v in inst.objective.linear.keys() {
        check_var(*v, n, || "objective".to_string())?;
    }
    for p in inst.objective.quadratic.keys() {
        check_var(p.i, n, || "objective".to_string())?;
        check_var(p.j, n, || "objective".to_string())?;
    }
    for (r, row) in inst.passthrough.iter().enumerate() {
        for v in row.x_terms.keys() {
            check_var(*v, n, || format!("pass-through row {}", r + 1))?;
        }
        for p in row.y_terms.keys() {
            check_var(p.i, n, || format!("pass-through row {}", r + 1))?;
            check_var(p.j, n, || format!("pass-through row {}", r + 1))?;
        }
    }

    let mut issues = Vec::new();
    for (k, c) in inst.indexed_constraints() {
        if c.terms.is_empty() {
            issues.push(Issue::EmptyConstraint { k });
        }
        for (v, a) in &c.terms {
            if !a.is_positive() {
                issues.push(Issue::NonPositiveCoefficient { k, var: *v });
            }
        }
        if !c.rhs.is_positive() {
            issues.push(Issue::NonPositiveRhs { k });
        }
    }

    let mut seen = BTreeSet::new();
    for p in &inst.products {
        if !p.is_ordered() {
            issues.push(Issue::UnorderedProduct(*p));
        }
        if !seen.insert(p.canonical()) {
            issues.push(Issue::DuplicateProduct(*p));
        }
    }
    for p in inst.objective.quadratic.keys() {
        if !seen.contains(&p.canonical()) {
            issues.push(Issue::ObjectiveTermNotInP(*p));
        }
    }
    for (r, row) in inst.passthrough.iter().enumerate() {
        for p in row.y_terms.keys() {
            if !seen.contains(&p.canonical()) {
                issues.push(Issue::PassthroughTermNotInP { row: r + 1, pair: *p });
            }
        }
    }
    for p in &seen {
        if !inst.prerequisite_met(*p) {
            issues.push(Issue::Unlinearizable(*p));
        }
    }
    Ok(ValidationReport { issues })
}

/// Deterministic form: equations before inequalities (stable), products
/// ordered, sorted and deduplicated, bilinear keys ordered. Idempotent.
pub fn canonicalize<T: Scalar>(inst: &BqpInstance<T>) -> BqpInstance<T> {
    let mut constraints: Vec<SideConstraint<T>> =
        inst.constraints.iter().filter(|c| c.is_equation()).cloned().collect();
    constraints.extend(inst.constraints.iter().filter(|c| !c.is_equation()).cloned());

    let products: BTreeSet<ProductPair> = inst.products.iter().map(|p| p.canonical()).collect();

    let objective =
        Objective { linear: inst.objective.linear.clone(), quadratic: merge_pairs(&inst.objective.quadratic) };
    let passthrough = inst
        .passthrough
        .iter()
        .map(|row| PassthroughRow {
            name: row.name.clone(),
            x_terms: row.x_terms.clone(),
            y_terms: merge_pairs(&row.y_terms),
            sense: row.sense,
            rhs: row.rhs.clone(),
        })
        .collect();

    BqpInstance { n: inst.n, constraints, products: products.into_iter().collect(), objective, passthrough }
}

fn merge_pairs<T: Scalar>(terms: &BTreeMap<ProductPair, T>) -> BTreeMap<ProductPair, T> {
    let mut out: BTreeMap<ProductPair, T> = BTreeMap::new();
    for (p, v) in terms {
        let slot = out.entry(p.canonical()).or_insert_with(T::zero);
        *slot = slot.clone() + v.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn assignment() -> BqpInstance<Rational> {
        BqpInstance::new(2)
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
            .with_product(1, 2)
    }

    #[test]
    fn assignment_instance_is_clear() {
        let report = validate(&assignment()).unwrap();
        assert!(report.is_clear(), "{:?}", report);
    }

    #[test]
    fn negative_coefficient_is_reported() {
        let mut inst = assignment();
        inst.constraints[0].terms.insert(VarId(1), r(-1));
        let report = validate(&inst).unwrap();
        assert_eq!(report.issues, vec![Issue::NonPositiveCoefficient { k: 1, var: VarId(1) }]);
        assert!(report.has_blocking());
    }

    #[test]
    fn uncovered_factor_is_reported_softly() {
        let inst = BqpInstance::new(3)
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
            .with_product(1, 3);
        let report = validate(&inst).unwrap();
        assert_eq!(report.issues, vec![Issue::Unlinearizable(ProductPair::from_indices(1, 3))]);
        assert!(!report.has_blocking());
    }

    #[test]
    fn dangling_variable_is_hard_error() {
        let inst = assignment().with_product(1, 5);
        assert!(matches!(validate(&inst), Err(ModelError::DanglingVar { var: 5, .. })));
    }

    #[test]
    fn unordered_and_duplicate_products() {
        let mut inst = assignment();
        inst.products.push(ProductPair::raw(VarId(2), VarId(1)));
        let report = validate(&inst).unwrap();
        assert!(report.issues.contains(&Issue::UnorderedProduct(ProductPair::raw(VarId(2), VarId(1)))));
        assert!(report.issues.iter().any(|i| matches!(i, Issue::DuplicateProduct(_))));
    }

    #[test]
    fn checked_constructor_rejects_bad_data() {
        assert!(SideConstraint::new(ConstraintSense::Le, vec![(VarId(1), r(0))], r(1)).is_err());
        assert!(SideConstraint::<Rational>::new(ConstraintSense::Le, vec![], r(1)).is_err());
        assert!(SideConstraint::unit(ConstraintSense::Le, &[1], r(0)).is_err());
        assert!(SideConstraint::unit(ConstraintSense::Le, &[1, 1], r(1)).is_err());
    }

    #[test]
    fn validate_is_pure() {
        let inst = assignment().with_product(1, 1);
        assert_eq!(validate(&inst).unwrap(), validate(&inst).unwrap());
    }

    #[test]
    fn canonicalize_orders_constraints_and_products() {
        let inst = BqpInstance::new(3)
            .with_constraint(SideConstraint::unit(ConstraintSense::Le, &[1, 3], r(1)).unwrap())
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[2, 1], r(1)).unwrap())
            .with_product(2, 3)
            .with_product(1, 2);
        let canon = canonicalize(&inst);
        assert!(canon.constraints[0].is_equation());
        assert_eq!(canon.products, vec![ProductPair::from_indices(1, 2), ProductPair::from_indices(2, 3)]);
        assert_eq!(canonicalize(&canon), canon);
    }

    #[test]
    fn restrict_demotes_unselected_constraints() {
        let inst = BqpInstance::new(3)
            .with_constraint(SideConstraint::unit(ConstraintSense::Eq, &[1, 2], r(1)).unwrap())
            .with_constraint(SideConstraint::unit(ConstraintSense::Le, &[2, 3], r(1)).unwrap())
            .with_product(1, 2);
        let sub = inst.restrict_to(&[1]).unwrap();
        assert_eq!(sub.constraints.len(), 1);
        assert_eq!(sub.passthrough.len(), 1);
        assert_eq!(sub.passthrough[0].name.as_deref(), Some("SIDE_k2"));
        assert!(inst.restrict_to(&[3]).is_err());
    }
}
