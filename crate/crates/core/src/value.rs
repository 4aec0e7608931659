//! Exact output values.
//!
//! Equality on [`OutputValue`] is structural and exact. Rationals are kept in
//! lowest terms and integral rationals collapse to [`OutputValue::Int`], so
//! `4/1` and `4` are the same value.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The atom returned by lookup tables for unmatched queries.
pub const NULL_ATOM: &str = "NULL";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputValue {
    Int(BigInt),
    /// Always has a denominator greater than one.
    Rational(BigRational),
    Atom(String),
    /// Classifier output: quantized score and the winning indicator.
    Pair(BigRational, String),
}

impl OutputValue {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Self::Int(v.into())
    }

    /// Canonical value for a rational; integral rationals become `Int`.
    pub fn rational(r: BigRational) -> Self {
        if r.is_integer() {
            Self::Int(r.to_integer())
        } else {
            Self::Rational(r)
        }
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Self::Atom(name.into())
    }

    pub fn null() -> Self {
        Self::Atom(NULL_ATOM.to_owned())
    }

    pub fn pair(score: BigRational, indicator: impl Into<String>) -> Self {
        Self::Pair(score, indicator.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Self::Atom(a) if a == NULL_ATOM)
    }
}

impl fmt::Display for OutputValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(i) => write!(f, "{i}"),
            Self::Rational(r) => write!(f, "{r}"),
            Self::Atom(a) => write!(f, "{a}"),
            Self::Pair(r, a) => write!(f, "({r}, {a})"),
        }
    }
}

/// Why a rational literal was rejected. `hint` carries the canonical spelling
/// when the literal denotes a valid number written non-canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError {
    pub message: String,
    pub hint: Option<String>,
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)?;
        if let Some(h) = &self.hint {
            write!(f, " (hint: write {h})")?;
        }
        Ok(())
    }
}

impl std::error::Error for LiteralError {}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `"p"` or `"p/q"`, accepting only the canonical form: no leading
/// zeros, no `-0`, positive denominator above one, numerator and denominator
/// coprime.
pub fn parse_rational(text: &str) -> Result<BigRational, LiteralError> {
    let malformed = || LiteralError {
        message: format!("`{text}` is not a rational literal of the form p or p/q"),
        hint: None,
    };
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let unsigned = num_text.strip_prefix('-').unwrap_or(num_text);
    if !is_digits(unsigned) {
        return Err(malformed());
    }
    if let Some(d) = den_text {
        if !is_digits(d) {
            return Err(malformed());
        }
    }
    let num: BigInt = num_text.parse().map_err(|_| malformed())?;
    let den: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| malformed())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(LiteralError {
            message: format!("`{text}` has a zero denominator"),
            hint: None,
        });
    }
    let value = BigRational::new(num.clone(), den.clone());
    let canonical = format_rational(&value);
    let has_leading_zero = |s: &str| s.len() > 1 && s.starts_with('0');
    let non_canonical = canonical != text
        || has_leading_zero(unsigned)
        || den_text.is_some_and(has_leading_zero)
        || (num.is_zero() && num_text.starts_with('-'))
        || !num.gcd(&den).is_one();
    if non_canonical {
        return Err(LiteralError {
            message: format!("`{text}` is not in canonical lowest-terms form"),
            hint: Some(canonical),
        });
    }
    Ok(value)
}

/// Canonical text of a rational: `p` when integral, otherwise `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn integral_rationals_collapse() {
        assert_eq!(OutputValue::rational(q(8, 2)), OutputValue::int(4));
        assert_eq!(OutputValue::rational(q(2, 4)), OutputValue::Rational(q(1, 2)));
        assert_ne!(OutputValue::int(0), OutputValue::null());
    }

    #[test]
    fn canonical_literals() {
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational("-7/2").unwrap(), q(-7, 2));
        assert_eq!(parse_rational("0").unwrap(), q(0, 1));
        assert_eq!(parse_rational("9999/10000").unwrap(), q(9999, 10000));
    }

    #[test]
    fn non_canonical_literals_get_hints() {
        let hint = |s: &str| parse_rational(s).unwrap_err().hint;
        assert_eq!(hint("2/4").as_deref(), Some("1/2"));
        assert_eq!(hint("6/3").as_deref(), Some("2"));
        assert_eq!(hint("5/1").as_deref(), Some("5"));
        assert_eq!(hint("007").as_deref(), Some("7"));
        assert_eq!(hint("-0").as_deref(), Some("0"));
        assert_eq!(hint("1/-2"), None);
        assert_eq!(hint("abc"), None);
        assert_eq!(hint("1/0"), None);
        assert_eq!(hint(""), None);
        assert_eq!(hint("1.5"), None);
    }

    #[test]
    fn display() {
        assert_eq!(OutputValue::int(4).to_string(), "4");
        assert_eq!(OutputValue::rational(q(1, 3)).to_string(), "1/3");
        assert_eq!(OutputValue::null().to_string(), "NULL");
        assert_eq!(OutputValue::pair(q(9999, 10000), "human").to_string(), "(9999/10000, human)");
    }
}
