//! JSON encodings of instances and designs.
//!
//! Rationals are written as `[num, den]`; numerators and denominators are
//! JSON integers, or decimal strings when they exceed 64 bits. Variables are
//! 1-based.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::IoError;
use crate::cover::{Membership, MultiplierAssignment, MultiplierKind};
use crate::model::{
    BqpInstance, ConstraintSense, Objective, PassthroughRow, ProductPair, RowSense, SideConstraint, VarId,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawInt {
    Int(i64),
    Text(String),
}

impl RawInt {
    fn to_big(&self) -> Result<BigInt, IoError> {
        match self {
            RawInt::Int(v) => Ok(BigInt::from(*v)),
            RawInt::Text(s) => s.trim().parse().map_err(|_| IoError::Number(s.clone())),
        }
    }
}

fn scalar<T: Scalar>(num: &RawInt, den: &RawInt) -> Result<T, IoError> {
    let (n, d) = (num.to_big()?, den.to_big()?);
    let text = format!("{n}/{d}");
    T::from_big_ratio(n, d).ok_or(IoError::Number(text))
}

fn int_value(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

/// `[num, den]`.
pub fn ratio_value<T: Scalar>(value: &T) -> Value {
    let (n, d) = value.numer_denom();
    json!([int_value(&n), int_value(&d)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    sense: String,
    terms: Vec<(usize, RawInt, RawInt)>,
    rhs: (RawInt, RawInt),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObjective {
    #[serde(default)]
    linear: Vec<(usize, RawInt, RawInt)>,
    #[serde(default)]
    quadratic: Vec<(usize, usize, RawInt, RawInt)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPassthrough {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    x: Vec<(usize, RawInt, RawInt)>,
    #[serde(default)]
    y: Vec<(usize, usize, RawInt, RawInt)>,
    sense: String,
    rhs: (RawInt, RawInt),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: usize,
    constraints: Vec<RawConstraint>,
    #[serde(default)]
    products: Vec<(usize, usize)>,
    #[serde(default)]
    objective: RawObjective,
    #[serde(default)]
    passthrough: Vec<RawPassthrough>,
}

fn linear_terms<T: Scalar>(raw: &[(usize, RawInt, RawInt)], place: &str) -> Result<BTreeMap<VarId, T>, IoError> {
    let mut out = BTreeMap::new();
    for (v, num, den) in raw {
        if out.insert(VarId(*v), scalar(num, den)?).is_some() {
            return Err(IoError::Duplicate(format!("{place}: variable x{v}")));
        }
    }
    Ok(out)
}

fn pair_terms<T: Scalar>(
    raw: &[(usize, usize, RawInt, RawInt)],
    place: &str,
) -> Result<BTreeMap<ProductPair, T>, IoError> {
    let mut out = BTreeMap::new();
    for (i, j, num, den) in raw {
        let pair = ProductPair::raw(VarId(*i), VarId(*j));
        if out.insert(pair, scalar(num, den)?).is_some() {
            return Err(IoError::Duplicate(format!("{place}: product {pair}")));
        }
    }
    Ok(out)
}

fn row_sense(text: &str) -> Result<RowSense, IoError> {
    match text {
        "le" => Ok(RowSense::Le),
        "ge" => Ok(RowSense::Ge),
        "eq" => Ok(RowSense::Eq),
        other => Err(IoError::Sense(other.to_string())),
    }
}

/// Parses an instance. Values are taken as given: sign and ordering problems
/// are left for validation; repeated terms are rejected here.
pub fn parse_instance<T: Scalar>(text: &str) -> Result<BqpInstance<T>, IoError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let mut constraints = Vec::with_capacity(raw.constraints.len());
    for (idx, c) in raw.constraints.iter().enumerate() {
        let sense = match c.sense.as_str() {
            "eq" => ConstraintSense::Eq,
            "le" => ConstraintSense::Le,
            other => return Err(IoError::Sense(other.to_string())),
        };
        constraints.push(SideConstraint {
            sense,
            terms: linear_terms(&c.terms, &format!("constraint {}", idx + 1))?,
            rhs: scalar(&c.rhs.0, &c.rhs.1)?,
        });
    }
    let products = raw.products.iter().map(|&(i, j)| ProductPair::raw(VarId(i), VarId(j))).collect();
    let objective = Objective {
        linear: linear_terms(&raw.objective.linear, "objective")?,
        quadratic: pair_terms(&raw.objective.quadratic, "objective")?,
    };
    let mut passthrough = Vec::with_capacity(raw.passthrough.len());
    for (idx, row) in raw.passthrough.iter().enumerate() {
        let place = format!("pass-through row {}", idx + 1);
        passthrough.push(PassthroughRow {
            name: row.name.clone(),
            x_terms: linear_terms(&row.x, &place)?,
            y_terms: pair_terms(&row.y, &place)?,
            sense: row_sense(&row.sense)?,
            rhs: scalar(&row.rhs.0, &row.rhs.1)?,
        });
    }
    Ok(BqpInstance { n: raw.n, constraints, products, objective, passthrough })
}

fn linear_value<T: Scalar>(terms: &BTreeMap<VarId, T>) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|(v, a)| {
                let (n, d) = a.numer_denom();
                json!([v.0, int_value(&n), int_value(&d)])
            })
            .collect(),
    )
}

fn pair_value<T: Scalar>(terms: &BTreeMap<ProductPair, T>) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|(p, a)| {
                let (n, d) = a.numer_denom();
                json!([p.i.0, p.j.0, int_value(&n), int_value(&d)])
            })
            .collect(),
    )
}

pub fn instance_value<T: Scalar>(inst: &BqpInstance<T>) -> Value {
    let constraints: Vec<Value> = inst
        .constraints
        .iter()
        .map(|c| {
            json!({
                "sense": if c.is_equation() { "eq" } else { "le" },
                "terms": linear_value(&c.terms),
                "rhs": ratio_value(&c.rhs),
            })
        })
        .collect();
    let products: Vec<Value> = inst.products.iter().map(|p| json!([p.i.0, p.j.0])).collect();
    let passthrough: Vec<Value> = inst
        .passthrough
        .iter()
        .map(|row| {
            let mut v = json!({
                "x": linear_value(&row.x_terms),
                "y": pair_value(&row.y_terms),
                "sense": match row.sense { RowSense::Le => "le", RowSense::Ge => "ge", RowSense::Eq => "eq" },
                "rhs": ratio_value(&row.rhs),
            });
            if let Some(name) = &row.name {
                v["name"] = json!(name);
            }
            v
        })
        .collect();
    json!({
        "n": inst.n,
        "constraints": constraints,
        "products": products,
        "objective": {
            "linear": linear_value(&inst.objective.linear),
            "quadratic": pair_value(&inst.objective.quadratic),
        },
        "passthrough": passthrough,
    })
}

/// Pretty-printed instance JSON with a trailing newline.
pub fn instance_to_json<T: Scalar>(inst: &BqpInstance<T>) -> String {
    let mut text = serde_json::to_string_pretty(&instance_value(inst)).expect("serializable");
    text.push('\n');
    text
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesignEntry {
    k: usize,
    #[serde(rename = "BE", default)]
    equation: Vec<usize>,
    #[serde(rename = "BI+", default)]
    plus: Vec<usize>,
    #[serde(rename = "BI-", default)]
    minus: Vec<usize>,
}

/// Parses `[{"k": 1, "BE": [...], "BI+": [...], "BI-": [...]}, ...]`.
/// Constraints without an entry get empty sets.
pub fn parse_design(text: &str, constraints: usize) -> Result<MultiplierAssignment, IoError> {
    let raw: Vec<RawDesignEntry> = serde_json::from_str(text)?;
    let mut design = MultiplierAssignment::empty(constraints);
    let mut seen = vec![false; constraints];
    for entry in raw {
        if entry.k == 0 || entry.k > constraints {
            return Err(IoError::UnknownConstraint { k: entry.k, constraints });
        }
        if std::mem::replace(&mut seen[entry.k - 1], true) {
            return Err(IoError::Duplicate(format!("design entry for constraint {}", entry.k)));
        }
        for (kind, vars) in [
            (MultiplierKind::Equation, &entry.equation),
            (MultiplierKind::Plus, &entry.plus),
            (MultiplierKind::Minus, &entry.minus),
        ] {
            for &v in vars {
                if !design.insert(Membership { k: entry.k, kind, j: VarId(v) }) {
                    return Err(IoError::Duplicate(format!("x{v} in B{kind}_{}", entry.k)));
                }
            }
        }
    }
    Ok(design)
}

pub fn design_to_json(design: &MultiplierAssignment) -> String {
    let entries: Vec<RawDesignEntry> = (1..=design.constraint_count())
        .map(|k| {
            let sets = design.of(k);
            let ids = |kind| sets.set(kind).iter().map(|v: &VarId| v.0).collect();
            RawDesignEntry {
                k,
                equation: ids(MultiplierKind::Equation),
                plus: ids(MultiplierKind::Plus),
                minus: ids(MultiplierKind::Minus),
            }
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&entries).expect("serializable");
    text.push('\n');
    text
}
