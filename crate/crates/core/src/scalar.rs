//! Exact ordered-field scalars.
//!
//! Every algorithm in this crate compares values for equality and sign
//! without tolerances, so the scalar type must be an exact field. The two
//! provided implementations are arbitrary-precision rationals
//! ([`num_rational::BigRational`]) and machine-word rationals
//! ([`num_rational::Rational64`], which panics on overflow).

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed};

/// An exact ordered field usable as a coefficient type.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialOrd + Ord + Num + Signed + Send + Sync + 'static {
    /// Builds `numer / denom`. Panics if `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    /// Builds `numer / denom` from big integers; `None` if `denom == 0` or the
    /// value does not fit the type.
    fn from_big_ratio(numer: BigInt, denom: BigInt) -> Option<Self>;

    /// Reduced numerator and positive denominator.
    fn numer_denom(&self) -> (BigInt, BigInt);

    /// Reduced `(numer, denom)` when both fit in an `i64`.
    fn to_i64_ratio(&self) -> Option<(i64, i64)> {
        let (n, d) = self.numer_denom();
        Some((i64::try_from(n).ok()?, i64::try_from(d).ok()?))
    }

    fn is_integer(&self) -> bool {
        let (_, d) = self.numer_denom();
        d == BigInt::from(1)
    }
}

impl Scalar for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_big_ratio(numer: BigInt, denom: BigInt) -> Option<Self> {
        (denom != BigInt::from(0)).then(|| BigRational::new(numer, denom))
    }

    fn numer_denom(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

impl Scalar for Rational64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational64::new(numer, denom)
    }

    fn from_big_ratio(numer: BigInt, denom: BigInt) -> Option<Self> {
        let value = BigRational::from_big_ratio(numer, denom)?;
        let (n, d) = value.to_i64_ratio()?;
        Some(Rational64::new(n, d))
    }

    fn numer_denom(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Rendering of a scalar as decimal text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decimal {
    /// The decimal expansion terminates; the text is exact.
    Exact(String),
    /// Non-terminating; the text is rounded to the requested significant digits.
    Approx(String),
}

impl Decimal {
    pub fn text(&self) -> &str {
        match self {
            Decimal::Exact(s) | Decimal::Approx(s) => s,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Decimal::Exact(_))
    }
}

/// Decimal text of `value`; exact when the denominator has only factors 2 and 5,
/// otherwise rounded to `sig_digits` significant digits.
pub fn to_decimal<T: Scalar>(value: &T, sig_digits: usize) -> Decimal {
    let (numer, denom) = value.numer_denom();
    let negative = numer < BigInt::from(0);
    let numer = if negative { -numer } else { numer };

    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let zero = BigInt::from(0);
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while &rest % &two == zero {
        rest /= &two;
        twos += 1;
    }
    while &rest % &five == zero {
        rest /= &five;
        fives += 1;
    }

    let sign = if negative { "-" } else { "" };
    if rest == BigInt::from(1) {
        let places = twos.max(fives);
        let scaled = &numer * BigInt::from(10).pow(places as u32) / &denom;
        return Decimal::Exact(format!("{sign}{}", place_point(&scaled.to_string(), places)));
    }

    // Round numer/denom to sig_digits significant digits.
    let int_part = &numer / &denom;
    let int_digits = if int_part == zero { 0 } else { int_part.to_string().len() };
    let places = if int_digits > 0 {
        sig_digits.saturating_sub(int_digits)
    } else {
        // Count leading zeros after the point.
        let mut lead = 0usize;
        let mut probe = numer.clone() * BigInt::from(10);
        while probe < denom {
            probe *= BigInt::from(10);
            lead += 1;
        }
        lead + sig_digits
    };
    let scale = BigInt::from(10).pow(places as u32);
    let scaled = &numer * &scale;
    let mut q = &scaled / &denom;
    let r = &scaled % &denom;
    if r * BigInt::from(2) >= denom {
        q += 1;
    }
    let text = place_point(&q.to_string(), places);
    Decimal::Approx(format!("{sign}{}", trim_zeros(text)))
}

fn place_point(digits: &str, places: usize) -> String {
    if places == 0 {
        return digits.to_string();
    }
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits.to_string()
    };
    let split = padded.len() - places;
    let text = format!("{}.{}", &padded[..split], &padded[split..]);
    trim_zeros(text)
}

fn trim_zeros(text: String) -> String {
    if !text.contains('.') {
        return text;
    }
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn terminating_decimals_are_exact() {
        assert_eq!(to_decimal(&q(1, 2), 12), Decimal::Exact("0.5".into()));
        assert_eq!(to_decimal(&q(3, 1), 12), Decimal::Exact("3".into()));
        assert_eq!(to_decimal(&q(-7, 4), 12), Decimal::Exact("-1.75".into()));
        assert_eq!(to_decimal(&q(1, 40), 12), Decimal::Exact("0.025".into()));
        assert_eq!(to_decimal(&q(0, 1), 12), Decimal::Exact("0".into()));
    }

    #[test]
    fn repeating_decimals_are_rounded() {
        assert_eq!(to_decimal(&q(1, 3), 12), Decimal::Approx("0.333333333333".into()));
        assert_eq!(to_decimal(&q(2, 3), 12), Decimal::Approx("0.666666666667".into()));
        assert_eq!(to_decimal(&q(-10, 3), 12), Decimal::Approx("-3.33333333333".into()));
        assert_eq!(to_decimal(&q(1, 300), 4), Decimal::Approx("0.003333".into()));
    }

    #[test]
    fn rational64_agrees_with_bigrational() {
        let a = Rational64::from_ratio(6, -4);
        assert_eq!(a.to_i64_ratio(), Some((-3, 2)));
        assert_eq!(q(6, -4).to_i64_ratio(), Some((-3, 2)));
        assert!(!a.is_integer());
        assert!(Rational64::from_int(5).is_integer());
    }
}
