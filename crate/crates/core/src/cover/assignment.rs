use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{BqpInstance, VarId};
use crate::scalar::Scalar;

/// How a constraint is multiplied by `x_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MultiplierKind {
    /// Equation times `x_j`.
    Equation,
    /// Inequality times `x_j`.
    Plus,
    /// Inequality times `1 - x_j`.
    Minus,
}

impl MultiplierKind {
    pub fn short(self) -> &'static str {
        match self {
            MultiplierKind::Equation => "E",
            MultiplierKind::Plus => "I+",
            MultiplierKind::Minus => "I-",
        }
    }

    /// Rows of this kind bound products from above (`x_j = 0` forces them to zero).
    pub fn bounds_above(self) -> bool {
        matches!(self, MultiplierKind::Equation | MultiplierKind::Plus)
    }

    /// Rows of this kind bound products from below.
    pub fn bounds_below(self) -> bool {
        matches!(self, MultiplierKind::Equation | MultiplierKind::Minus)
    }
}

impl fmt::Display for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// `j` belongs to one of the multiplier sets of constraint `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Membership {
    pub k: usize,
    pub kind: MultiplierKind,
    pub j: VarId,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{} in B{}_{}", self.j, self.kind, self.k)
    }
}

/// Multiplier sets of one constraint. Equations use only `equation`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintMultipliers {
    pub equation: BTreeSet<VarId>,
    pub plus: BTreeSet<VarId>,
    pub minus: BTreeSet<VarId>,
}

impl ConstraintMultipliers {
    pub fn set(&self, kind: MultiplierKind) -> &BTreeSet<VarId> {
        match kind {
            MultiplierKind::Equation => &self.equation,
            MultiplierKind::Plus => &self.plus,
            MultiplierKind::Minus => &self.minus,
        }
    }

    fn set_mut(&mut self, kind: MultiplierKind) -> &mut BTreeSet<VarId> {
        match kind {
            MultiplierKind::Equation => &mut self.equation,
            MultiplierKind::Plus => &mut self.plus,
            MultiplierKind::Minus => &mut self.minus,
        }
    }

    /// `B_k`.
    pub fn union(&self) -> BTreeSet<VarId> {
        self.equation.iter().chain(&self.plus).chain(&self.minus).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.equation.len() + self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The multiplier sets `B^E_k`, `B^{I+}_k`, `B^{I-}_k` for every constraint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiplierAssignment {
    sets: Vec<ConstraintMultipliers>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("design has {found} constraints, instance has {expected}")]
    ConstraintCount { found: usize, expected: usize },
    #[error("constraint {k}: {kind} multipliers do not fit its sense")]
    WrongKind { k: usize, kind: MultiplierKind },
    #[error("constraint {k}: multiplier x{var} is outside 1..={n}")]
    UnknownVar { k: usize, var: usize, n: usize },
}

impl MultiplierAssignment {
    pub fn empty(constraints: usize) -> Self {
        MultiplierAssignment { sets: vec![ConstraintMultipliers::default(); constraints] }
    }

    pub fn for_instance<T: Scalar>(inst: &BqpInstance<T>) -> Self {
        Self::empty(inst.constraints.len())
    }

    pub fn from_memberships(constraints: usize, members: impl IntoIterator<Item = Membership>) -> Self {
        let mut out = Self::empty(constraints);
        for m in members {
            out.insert(m);
        }
        out
    }

    pub fn constraint_count(&self) -> usize {
        self.sets.len()
    }

    /// Sets of constraint `k` (1-based).
    pub fn of(&self, k: usize) -> &ConstraintMultipliers {
        &self.sets[k - 1]
    }

    pub fn insert(&mut self, m: Membership) -> bool {
        self.sets[m.k - 1].set_mut(m.kind).insert(m.j)
    }

    pub fn remove(&mut self, m: &Membership) -> bool {
        self.sets[m.k - 1].set_mut(m.kind).remove(&m.j)
    }

    pub fn contains(&self, m: &Membership) -> bool {
        self.sets.get(m.k.wrapping_sub(1)).is_some_and(|s| s.set(m.kind).contains(&m.j))
    }

    /// All memberships ordered by constraint, kind, variable.
    pub fn memberships(&self) -> impl Iterator<Item = Membership> + '_ {
        self.sets.iter().enumerate().flat_map(|(idx, s)| {
            let k = idx + 1;
            [MultiplierKind::Equation, MultiplierKind::Plus, MultiplierKind::Minus]
                .into_iter()
                .flat_map(move |kind| s.set(kind).iter().map(move |&j| Membership { k, kind, j }))
        })
    }

    /// Number of multiplications (induced rows).
    pub fn len(&self) -> usize {
        self.sets.iter().map(ConstraintMultipliers::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Uses only equation multipliers.
    pub fn is_equation_based(&self) -> bool {
        self.sets.iter().all(|s| s.plus.is_empty() && s.minus.is_empty())
    }

    /// Checks that the design matches the instance's constraint senses and variables.
    pub fn check_against<T: Scalar>(&self, inst: &BqpInstance<T>) -> Result<(), DesignError> {
        if self.sets.len() != inst.constraints.len() {
            return Err(DesignError::ConstraintCount { found: self.sets.len(), expected: inst.constraints.len() });
        }
        for m in self.memberships() {
            let eq = inst.constraint(m.k).is_equation();
            if eq != (m.kind == MultiplierKind::Equation) {
                return Err(DesignError::WrongKind { k: m.k, kind: m.kind });
            }
            if m.j.0 == 0 || m.j.0 > inst.n {
                return Err(DesignError::UnknownVar { k: m.k, var: m.j.0, n: inst.n });
            }
        }
        Ok(())
    }
}
