//! Fixed-point currency amounts with two fractional digits.
//!
//! Amounts are held as an integer count of cents so that sums are exact and
//! independent of evaluation order. Textual form is always `"<units>.<cc>"`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const CENTS_PER_UNIT: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoneyError {
    #[error("empty amount")]
    Empty,
    #[error("malformed amount {0:?}: expected digits with at most two fractional digits")]
    Malformed(String),
    #[error("negative amount {0:?} where a non-negative value is required")]
    Negative(String),
    #[error("amount {0:?} is out of range")]
    Overflow(String),
}

/// A non-negative amount of money, stored as cents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    /// Builds an amount from a cent count. Returns `None` for negative input.
    pub const fn from_cents(cents: i64) -> Option<Money> {
        if cents < 0 {
            None
        } else {
            Some(Money(cents))
        }
    }

    /// Whole units plus a cent remainder, e.g. `Money::new(12, 50)` is 12.50.
    ///
    /// # Panics
    ///
    /// If `cents >= 100` or the value overflows.
    pub const fn new(units: i64, cents: i64) -> Money {
        assert!(units >= 0 && cents >= 0 && cents < CENTS_PER_UNIT);
        Money(units * CENTS_PER_UNIT + cents)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, rhs: Money) -> Option<Money> {
        self.0.checked_add(rhs.0).map(Money)
    }

    /// Signed difference `self - rhs`.
    pub fn diff(self, rhs: Money) -> SignedMoney {
        SignedMoney(self.0 - rhs.0)
    }
}

impl Add for Money {
    type Output = Money;

    fn add(self, rhs: Money) -> Money {
        self.checked_add(rhs).expect("money overflow")
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        *self = *self + rhs;
    }
}

impl Mul<u32> for Money {
    type Output = Money;

    fn mul(self, rhs: u32) -> Money {
        Money(self.0.checked_mul(i64::from(rhs)).expect("money overflow"))
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cents(f, self.0)
    }
}

impl FromStr for Money {
    type Err = MoneyError;

    fn from_str(s: &str) -> Result<Money, MoneyError> {
        let cents = parse_cents(s)?;
        Money::from_cents(cents).ok_or_else(|| MoneyError::Negative(s.to_owned()))
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Money, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A signed amount; only produced as the difference of two [`Money`] values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedMoney(i64);

impl SignedMoney {
    pub const ZERO: SignedMoney = SignedMoney(0);

    pub const fn from_cents(cents: i64) -> SignedMoney {
        SignedMoney(cents)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub const fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub const fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for SignedMoney {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cents(f, self.0)
    }
}

impl FromStr for SignedMoney {
    type Err = MoneyError;

    fn from_str(s: &str) -> Result<SignedMoney, MoneyError> {
        parse_cents(s).map(SignedMoney)
    }
}

impl Serialize for SignedMoney {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedMoney {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<SignedMoney, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn write_cents(f: &mut fmt::Formatter<'_>, cents: i64) -> fmt::Result {
    let sign = if cents < 0 { "-" } else { "" };
    let abs = cents.unsigned_abs();
    let units = abs / CENTS_PER_UNIT as u64;
    let rem = abs % CENTS_PER_UNIT as u64;
    f.pad(&format!("{sign}{units}.{rem:02}"))
}

/// Parses `[-]digits[.d[d]]` into cents. Rejects exponents, extra fractional
/// digits and anything else that cannot be represented exactly.
fn parse_cents(s: &str) -> Result<i64, MoneyError> {
    if s.is_empty() {
        return Err(MoneyError::Empty);
    }
    let malformed = || MoneyError::Malformed(s.to_owned());
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() || frac.len() > 2 || body.ends_with('.') {
        return Err(malformed());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let overflow = || MoneyError::Overflow(s.to_owned());
    let units: i64 = whole.parse().map_err(|_| overflow())?;
    let mut frac_cents: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| malformed())? };
    if frac.len() == 1 {
        frac_cents *= 10;
    }
    let magnitude = units
        .checked_mul(CENTS_PER_UNIT)
        .and_then(|c| c.checked_add(frac_cents))
        .ok_or_else(overflow)?;
    Ok(if negative { -magnitude } else { magnitude })
}
