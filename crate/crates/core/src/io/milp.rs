//! LP-format and free-MPS text for linearized models.
//!
//! Terminating rationals are printed exactly. Others are rounded to
//! [`APPROX_DIGITS`] significant digits; the file then starts with a warning
//! and each affected line is preceded by a comment holding the exact values.

use std::fmt::Write as _;

use crate::linearize::{Column, LinearizedModel};
use crate::model::RowSense;
use crate::scalar::{to_decimal, Decimal, Scalar};

pub const APPROX_DIGITS: usize = 12;
const WIDTH: usize = 78;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpFormat {
    Lp,
    Mps,
}

impl MilpFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MilpFormat::Lp => "lp",
            MilpFormat::Mps => "mps",
        }
    }
}

pub fn write_milp<T: Scalar>(model: &LinearizedModel<T>, format: MilpFormat) -> String {
    match format {
        MilpFormat::Lp => write_lp(model),
        MilpFormat::Mps => write_mps(model),
    }
}

fn fraction<T: Scalar>(value: &T) -> String {
    let (n, d) = value.numer_denom();
    if d == num_bigint::BigInt::from(1) {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// Tracks whether any value had to be rounded.
#[derive(Default)]
struct Numbers {
    approximated: bool,
}

impl Numbers {
    fn text<T: Scalar>(&mut self, value: &T) -> (String, bool) {
        match to_decimal(value, APPROX_DIGITS) {
            Decimal::Exact(s) => (s, true),
            Decimal::Approx(s) => {
                self.approximated = true;
                (s, false)
            }
        }
    }
}

fn warning(comment: &str) -> String {
    format!(
        "{comment} WARNING: some coefficients are not terminating decimals; they are rounded to \
         {APPROX_DIGITS} significant digits\n{comment} and the exact values are given in the \
         preceding `exact:` comments.\n"
    )
}

/// `name: terms` as one logical LP line plus an optional exact comment.
fn lp_expression<T: Scalar>(nums: &mut Numbers, terms: &[(Column, T)]) -> (Vec<String>, Vec<String>, bool) {
    let mut body = Vec::with_capacity(terms.len());
    let mut exact = Vec::with_capacity(terms.len());
    let mut all_exact = true;
    for (idx, (col, a)) in terms.iter().enumerate() {
        let (text, ok) = nums.text(&a.abs());
        all_exact &= ok;
        let sign = if a.is_negative() {
            "- "
        } else if idx == 0 {
            ""
        } else {
            "+ "
        };
        let name = col.name();
        body.push(if text == "1" { format!("{sign}{name}") } else { format!("{sign}{text} {name}") });
        let frac = fraction(&a.abs());
        exact.push(if frac == "1" { format!("{sign}{name}") } else { format!("{sign}{frac} {name}") });
    }
    (body, exact, all_exact)
}

fn wrap(out: &mut String, head: &str, tokens: &[String]) {
    let mut line = String::from(head);
    for tok in tokens {
        if line.len() + 1 + tok.len() > WIDTH && line != head {
            out.push_str(line.trim_end());
            out.push('\n');
            line = String::from("   ");
        }
        if !line.ends_with(' ') {
            line.push(' ');
        }
        line.push_str(tok);
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

fn sense_symbol(sense: RowSense) -> &'static str {
    match sense {
        RowSense::Le => "<=",
        RowSense::Ge => ">=",
        RowSense::Eq => "=",
    }
}

fn write_lp<T: Scalar>(model: &LinearizedModel<T>) -> String {
    let mut nums = Numbers::default();
    let mut body = String::new();

    body.push_str("Minimize\n");
    let (mut tokens, exact, ok) = lp_expression(&mut nums, &model.objective);
    if tokens.is_empty() {
        tokens.push("0 x1".to_string());
    }
    if !ok {
        wrap(&mut body, "\\ exact: obj:", &exact);
    }
    wrap(&mut body, " obj:", &tokens);

    body.push_str("Subject To\n");
    for row in &model.rows {
        let (mut tokens, mut exact, ok) = lp_expression(&mut nums, &row.terms);
        if tokens.is_empty() {
            tokens.push("0 x1".to_string());
        }
        let (rhs, rhs_ok) = nums.text(&row.rhs);
        let sym = sense_symbol(row.sense);
        if !(ok && rhs_ok) {
            exact.push(format!("{sym} {}", fraction(&row.rhs)));
            wrap(&mut body, &format!("\\ exact: {}:", row.name), &exact);
        }
        tokens.push(format!("{sym} {rhs}"));
        wrap(&mut body, &format!(" {}:", row.name), &tokens);
    }

    body.push_str("Bounds\n");
    for p in &model.y_columns {
        let _ = writeln!(body, " 0 <= {} <= 1", Column::Y(*p).name());
    }
    body.push_str("Binaries\n");
    let xs: Vec<String> = (1..=model.n).map(|i| format!("x{i}")).collect();
    wrap(&mut body, "", &xs);
    body.push_str("End\n");

    let mut out = String::new();
    if nums.approximated {
        out.push_str(&warning("\\"));
    }
    out.push_str(&body);
    out
}

fn write_mps<T: Scalar>(model: &LinearizedModel<T>) -> String {
    let mut nums = Numbers::default();
    let mut body = String::new();
    body.push_str("NAME compactlin\nROWS\n N obj\n");
    for row in &model.rows {
        let code = match row.sense {
            RowSense::Le => "L",
            RowSense::Ge => "G",
            RowSense::Eq => "E",
        };
        let _ = writeln!(body, " {code} {}", row.name);
    }

    // Column-major entries.
    let ncols = model.column_count();
    let mut entries: Vec<Vec<(&str, &T)>> = vec![Vec::new(); ncols];
    for (col, a) in &model.objective {
        if let Some(c) = model.column_index(col) {
            entries[c].push(("obj", a));
        }
    }
    for row in &model.rows {
        for (col, a) in &row.terms {
            if let Some(c) = model.column_index(col) {
                entries[c].push((&row.name, a));
            }
        }
    }
    let mut put = |body: &mut String, name: &str, row: &str, value: &T| {
        let (text, ok) = nums.text(value);
        if !ok {
            let _ = writeln!(body, "* exact: {name} {row} {}", fraction(value));
        }
        let _ = writeln!(body, "    {name} {row} {text}");
    };

    body.push_str("COLUMNS\n");
    let columns: Vec<Column> = model.columns().collect();
    for (idx, col) in columns.iter().enumerate() {
        if idx == 0 && model.n > 0 {
            body.push_str("    MARKER 'MARKER' 'INTORG'\n");
        }
        let name = col.name();
        if entries[idx].is_empty() {
            let _ = writeln!(body, "    {name} obj 0");
        }
        for (row, value) in &entries[idx] {
            put(&mut body, &name, row, value);
        }
        if idx + 1 == model.n {
            body.push_str("    MARKER 'MARKER' 'INTEND'\n");
        }
    }

    body.push_str("RHS\n");
    for row in &model.rows {
        if !row.rhs.is_zero() {
            put(&mut body, "RHS", &row.name, &row.rhs);
        }
    }

    body.push_str("BOUNDS\n");
    for col in &columns {
        match col {
            Column::X(_) => {
                let _ = writeln!(body, " BV BND {}", col.name());
            }
            Column::Y(_) => {
                let _ = writeln!(body, " UP BND {} 1", col.name());
            }
        }
    }
    body.push_str("ENDATA\n");

    let mut out = String::new();
    if nums.approximated {
        out.push_str(&warning("*"));
    }
    out.push_str(&body);
    out
}
