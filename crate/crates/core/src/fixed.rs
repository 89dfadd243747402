//! Exact fixed-point arithmetic with two fractional digits.
//!
//! Every quantity in the problem is a multiple of 0.01: sampled travel times
//! are `d * eta / 100` with integer `d` and `eta`, prizes are hundredths in
//! `[0.01, 1.00]`, penalties are integers, and window bounds and the budget
//! are integers. Computing in hundredths keeps every comparison against a
//! window bound or the budget exact and makes Monte-Carlo sums independent of
//! summation order.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A time or reward value stored as an integer count of hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Centi(pub i64);

impl Centi {
    pub const ZERO: Centi = Centi(0);

    /// Converts a whole-unit integer (window bound, budget, penalty).
    pub const fn from_units(units: i64) -> Self {
        Centi(units * 100)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub const fn raw(self) -> i64 {
        self.0
    }

    pub fn max(self, other: Self) -> Self {
        Centi(self.0.max(other.0))
    }
}

impl Add for Centi {
    type Output = Centi;
    fn add(self, rhs: Centi) -> Centi {
        Centi(self.0 + rhs.0)
    }
}

impl Sub for Centi {
    type Output = Centi;
    fn sub(self, rhs: Centi) -> Centi {
        Centi(self.0 - rhs.0)
    }
}

impl Neg for Centi {
    type Output = Centi;
    fn neg(self) -> Centi {
        Centi(-self.0)
    }
}

impl AddAssign for Centi {
    fn add_assign(&mut self, rhs: Centi) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Centi {
    fn sub_assign(&mut self, rhs: Centi) {
        self.0 -= rhs.0;
    }
}

impl Mul<i64> for Centi {
    type Output = Centi;
    fn mul(self, rhs: i64) -> Centi {
        Centi(self.0 * rhs)
    }
}

impl Sum for Centi {
    fn sum<I: Iterator<Item = Centi>>(iter: I) -> Centi {
        Centi(iter.map(|c| c.0).sum())
    }
}

impl fmt::Display for Centi {
    /// Renders with exactly two decimals, e.g. `-1.00`, `0.19`, `256.00`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

/// Parses a decimal literal with at most two fractional digits into [`Centi`].
///
/// Used by the instance and submission parsers; rejects anything that is not
/// exactly representable in hundredths so file round-trips stay lossless.
pub fn parse_centi(text: &str) -> Option<Centi> {
    let text = text.trim();
    let (sign, rest) = match text.strip_prefix('-') {
        Some(r) => (-1i64, r),
        None => (1i64, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if frac_part.len() > 2 {
        return None;
    }
    let int: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().ok()?
    };
    let mut frac: i64 = 0;
    if !frac_part.is_empty() {
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        frac = frac_part.parse().ok()?;
        if frac_part.len() == 1 {
            frac *= 10;
        }
    }
    Some(Centi(sign * (int * 100 + frac)))
}
