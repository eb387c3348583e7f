//! Exact rationals and their canonical `"p/q"` text form.

use alloc::format;
use alloc::string::String;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Exact rational scalar. `Ratio` keeps values reduced with a positive
/// denominator after every operation.
pub type Rational = Ratio<i128>;

/// Largest magnitude accepted for a parsed numerator or denominator.
///
/// Parsed components are limited to 32 bits so that every product, sum and
/// dyadic rescaling performed by the library stays inside `i128`.
pub const MAX_PARSED_COMPONENT: i128 = u32::MAX as i128;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n as i128)
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n as i128, d as i128)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// `1 / 2^n` exactly.
pub fn inv_pow2(n: u32) -> Rational {
    Rational::new(1, 1i128 << n)
}

/// Canonical text form: lowest terms, positive denominator, always with a
/// slash (`"0/1"`, `"1/1"`, `"-3/4"`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`. Non-reduced input is accepted and
/// normalised.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: i128 = num.parse().map_err(|_| bad())?;
    let den: i128 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    if num.abs() > MAX_PARSED_COMPONENT || den.abs() > MAX_PARSED_COMPONENT {
        return Err(Error::Parse(format!("rational {text:?} exceeds the 32-bit component limit")));
    }
    Ok(Rational::new(num, den))
}
