//! Fixed-point decimals backed by big integers, and natural logarithms of
//! exact integers.
//!
//! A [`HighPrecision`] stores `raw / 10^scale` together with the number of
//! fractional digits it is meant to be accurate to. Every value produced by
//! this module carries ten guard digits beyond that, so a short chain of
//! arithmetic keeps the absolute error below `10^-digits`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Digits carried beyond the requested accuracy.
pub const GUARD_DIGITS: u32 = 10;

/// Default accuracy in fractional decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// `round(n / d)` with ties away from zero; `d > 0`.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    if (r.abs() * 2u32) >= *d {
        if n.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

#[derive(Clone, Debug)]
pub struct HighPrecision {
    raw: BigInt,
    scale: u32,
    digits: u32,
}

impl HighPrecision {
    fn with_raw(raw: BigInt, digits: u32) -> Self {
        Self {
            raw,
            scale: digits + GUARD_DIGITS,
            digits,
        }
    }

    pub fn zero(digits: u32) -> Self {
        Self::with_raw(BigInt::zero(), digits)
    }

    pub fn from_integer(n: impl Into<BigInt>, digits: u32) -> Self {
        Self::with_raw(n.into() * pow10(digits + GUARD_DIGITS), digits)
    }

    /// `p / q`, correctly rounded at the working scale.
    pub fn from_ratio(p: impl Into<BigInt>, q: impl Into<BigInt>, digits: u32) -> Result<Self> {
        let q = q.into();
        if q.is_zero() {
            return Err(Error::ContractViolation("division by zero".into()));
        }
        let (p, q) = if q.is_negative() { (-p.into(), -q) } else { (p.into(), q) };
        Ok(Self::with_raw(div_round(&(p * pow10(digits + GUARD_DIGITS)), &q), digits))
    }

    /// Parses a decimal such as `-1.25`, `3` or `7.19e-11`.
    pub fn parse(text: &str, digits: u32) -> Result<Self> {
        let t = text.trim();
        let (t, exp10) = match t.split_once(['e', 'E']) {
            Some((m, e)) => (
                m,
                e.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?,
            ),
            None => (t, 0),
        };
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
        if (int.is_empty() && frac.is_empty()) || !ok(int) || !ok(frac) {
            return Err(Error::Parse(format!("not a decimal number: {text:?}")));
        }
        let joined = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
        let mut n: BigInt = joined.parse().map_err(|_| Error::Parse(format!("bad decimal {text:?}")))?;
        if neg {
            n = -n;
        }
        let mut den = pow10(frac.len() as u32);
        if exp10 >= 0 {
            n *= pow10(exp10 as u32);
        } else {
            den *= pow10(exp10.unsigned_abs());
        }
        Self::from_ratio(n, den, digits)
    }

    /// Guaranteed fractional digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn rescaled(&self, scale: u32) -> BigInt {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.raw.clone(),
            Ordering::Greater => &self.raw * pow10(scale - self.scale),
            Ordering::Less => div_round(&self.raw, &pow10(self.scale - scale)),
        }
    }

    fn binary(&self, other: &Self, f: impl Fn(BigInt, BigInt) -> BigInt) -> Self {
        let digits = self.digits.min(other.digits);
        let scale = digits + GUARD_DIGITS;
        Self::with_raw(f(self.rescaled(scale), other.rescaled(scale)), digits)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let digits = self.digits.min(other.digits);
        let scale = digits + GUARD_DIGITS;
        let prod = self.rescaled(scale) * other.rescaled(scale);
        Self::with_raw(div_round(&prod, &pow10(scale)), digits)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.raw.is_zero() {
            return Err(Error::ContractViolation("division by zero".into()));
        }
        let digits = self.digits.min(other.digits);
        let scale = digits + GUARD_DIGITS;
        let (n, mut d) = (self.rescaled(scale) * pow10(scale), other.rescaled(scale));
        let n = if d.is_negative() {
            d = -d;
            -n
        } else {
            n
        };
        Ok(Self::with_raw(div_round(&n, &d), digits))
    }

    /// `self * p / q`, rounded once.
    pub fn mul_ratio(&self, p: &BigInt, q: &BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ContractViolation("division by zero".into()));
        }
        let (p, q) = if q.is_negative() { (-p, -q) } else { (p.clone(), q.clone()) };
        Ok(Self::with_raw(div_round(&(&self.raw * p), &q), self.digits))
    }

    pub fn neg(&self) -> Self {
        Self::with_raw(-&self.raw, self.digits)
    }

    pub fn abs(&self) -> Self {
        Self::with_raw(self.raw.abs(), self.digits)
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.raw.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.raw.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep about 20 significant digits before converting.
        let digits_len = self.raw.abs().to_string().len() as i64;
        let drop = (digits_len - 20).max(0) as u32;
        let mantissa = div_round(&self.raw, &pow10(drop)).to_f64().unwrap_or(f64::NAN);
        mantissa * 10f64.powi(drop as i32 - self.scale as i32)
    }

    /// Rounded to `decimals` fractional digits.
    pub fn to_fixed(&self, decimals: u32) -> String {
        let q = self.rescaled(decimals);
        let neg = q.is_negative();
        let s = q.abs().to_string();
        let d = decimals as usize;
        let s = if s.len() <= d { format!("{}{s}", "0".repeat(d + 1 - s.len())) } else { s };
        let (int, frac) = s.split_at(s.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Rounded to `sig` significant digits, plain notation for moderate
    /// magnitudes and `d.ddde-N` below `1e-4`.
    pub fn to_significant(&self, sig: u32) -> String {
        assert!(sig > 0);
        if self.raw.is_zero() {
            return "0".into();
        }
        let exp = self.decimal_exponent();
        if exp < -4 {
            // scientific: shift so exactly `sig` integer digits remain
            let shift = (sig as i64 - 1 - exp) as u32;
            let scaled = self.rescaled_signed(shift as i64);
            let digits = scaled.abs().to_string();
            // rounding may carry into an extra digit
            let (digits, exp) = if digits.len() > sig as usize {
                (digits[..sig as usize].to_string(), exp + 1)
            } else {
                (digits, exp)
            };
            let sign = if scaled.is_negative() { "-" } else { "" };
            let (head, tail) = digits.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{exp}")
            } else {
                format!("{sign}{head}.{tail}e{exp}")
            };
        }
        let decimals = (sig as i64 - 1 - exp).max(0) as u32;
        // carry can add a digit, e.g. 9.99 -> 10.0
        let carried = self.rescaled(decimals).abs().to_string().len() > sig as usize;
        if carried && decimals > 0 {
            self.to_fixed(decimals - 1)
        } else {
            self.to_fixed(decimals)
        }
    }

    /// Value times `10^shift` as a rounded integer.
    fn rescaled_signed(&self, shift: i64) -> BigInt {
        if shift >= 0 {
            let target = shift as u32;
            // raw / 10^scale * 10^target
            if target >= self.scale {
                &self.raw * pow10(target - self.scale)
            } else {
                div_round(&self.raw, &pow10(self.scale - target))
            }
        } else {
            div_round(&self.raw, &pow10(self.scale + (-shift) as u32))
        }
    }

    /// `floor(log10 |x|)` for non-zero `x`.
    pub fn decimal_exponent(&self) -> i64 {
        let len = self.raw.abs().to_string().len() as i64;
        len - 1 - self.scale as i64
    }

    /// `|self - expected| <= 10^(e - sig + 1)`, where `e` is the decimal
    /// exponent of `expected`: agreement to `sig` significant digits with
    /// one unit of slack in the last place.
    pub fn agrees_with(&self, expected: &str, sig: u32) -> Result<bool> {
        let e = HighPrecision::parse(expected, self.digits.max(sig + 10))?;
        if e.is_zero() {
            return Ok(self.abs().decimal_exponent_or_min() < -(sig as i64));
        }
        let unit_exp = e.decimal_exponent() - sig as i64 + 1;
        let diff = self.sub(&e).abs();
        Ok(diff.is_zero() || diff.cmp_pow10(unit_exp) != Ordering::Greater)
    }

    fn decimal_exponent_or_min(&self) -> i64 {
        if self.raw.is_zero() {
            i64::MIN
        } else {
            self.decimal_exponent()
        }
    }

    /// Compares `|self|` with `10^k`.
    pub fn cmp_pow10(&self, k: i64) -> Ordering {
        let lhs = self.raw.abs();
        // |raw| / 10^scale vs 10^k  <=>  |raw| vs 10^(k + scale)
        let e = k + self.scale as i64;
        if e < 0 {
            // 10^e < 1 <= |raw| unless raw == 0
            return if lhs.is_zero() { Ordering::Less } else { Ordering::Greater };
        }
        lhs.cmp(&pow10(e as u32))
    }
}

impl PartialEq for HighPrecision {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HighPrecision {}

impl PartialOrd for HighPrecision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HighPrecision {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.rescaled(scale).cmp(&other.rescaled(scale))
    }
}

impl fmt::Display for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_fixed(p as u32)),
            None => f.write_str(&self.to_fixed(self.digits)),
        }
    }
}

/// `atanh(t)` at `scale`, for `0 <= t <= 1/3` given as `raw / 10^scale`.
fn atanh_fixed(t: &BigInt, one: &BigInt) -> BigInt {
    let t2 = (t * t) / one;
    let mut power = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !power.is_zero() {
        sum += &power / k;
        power = (&power * &t2) / one;
        k += 2;
    }
    sum
}

/// `ln 2` to `digits` fractional digits.
pub fn ln2(digits: u32) -> HighPrecision {
    let scale = digits + GUARD_DIGITS + 5;
    let one = pow10(scale);
    let raw = atanh_fixed(&(&one / 3), &one) * 2;
    HighPrecision {
        raw,
        scale,
        digits,
    }
    .normalized()
}

impl HighPrecision {
    fn normalized(self) -> Self {
        let scale = self.digits + GUARD_DIGITS;
        let raw = self.rescaled(scale);
        Self {
            raw,
            scale,
            digits: self.digits,
        }
    }
}

/// Natural logarithm of a positive integer, accurate to `digits` fractional
/// digits.
///
/// Writes `n = m * 2^k` with `m` in `[1, 2)` held at the working scale, then
/// `ln n = 2 atanh((m-1)/(m+1)) + 2k atanh(1/3)`. Extra working digits
/// absorb the factor `k` multiplying the error of `ln 2`.
pub fn ln_big(n: &BigUint, digits: u32) -> Result<HighPrecision> {
    if n.is_zero() {
        return Err(Error::ContractViolation("logarithm of zero".into()));
    }
    let k = n.bits() - 1;
    let extra = (k + 1).to_string().len() as u32 + 5;
    let scale = digits + GUARD_DIGITS + extra;
    let one = pow10(scale);
    let m = (BigInt::from(n.clone()) * &one) >> k;
    let t = ((&m - &one) * &one) / (&m + &one);
    let ln_m = atanh_fixed(&t, &one) * 2;
    let ln_2 = atanh_fixed(&(&one / 3), &one) * 2;
    let raw = ln_m + ln_2 * BigInt::from(k);
    Ok(HighPrecision {
        raw,
        scale,
        digits,
    }
    .normalized())
}

/// `ln(p / q)` for positive integers.
pub fn ln_ratio(p: &BigUint, q: &BigUint, digits: u32) -> Result<HighPrecision> {
    Ok(ln_big(p, digits)?.sub(&ln_big(q, digits)?))
}

/// `10^-k` as a value.
pub fn pow10_neg(k: u32, digits: u32) -> HighPrecision {
    let scale = digits + GUARD_DIGITS;
    if k > scale {
        return HighPrecision::zero(digits);
    }
    HighPrecision::with_raw(pow10(scale - k), digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn hp(s: &str) -> HighPrecision {
        HighPrecision::parse(s, 40).unwrap()
    }

    #[test]
    fn ln_of_one_is_zero() {
        assert!(ln_big(&BigUint::one(), 30).unwrap().is_zero());
        assert!(ln_big(&BigUint::zero(), 30).is_err());
    }

    #[test]
    fn ln_small_values_against_known_digits() {
        // reference digits from an independent arbitrary-precision library
        let cases = [
            (2u32, "0.69314718055994530941723212145817656807550013436026"),
            (6, "1.79175946922805500081247735838070227272299069218300"),
            (10, "2.30258509299404568401799145468436420760110148862877"),
            (162, "5.08759633523238407499821306914827938666546236565125"),
        ];
        for (n, expected) in cases {
            let v = ln_big(&BigUint::from(n), 45).unwrap();
            assert!(v.agrees_with(expected, 45).unwrap(), "ln {n} = {v}");
        }
    }

    #[test]
    fn ln_is_additive_for_large_integers() {
        let a: BigUint = "67294670068124357202".parse().unwrap();
        let b: BigUint = BigUint::from(3u32).pow(500) + 17u32;
        let lhs = ln_big(&(&a * &b), 60).unwrap();
        let rhs = ln_big(&a, 60).unwrap().add(&ln_big(&b, 60).unwrap());
        assert!(lhs.sub(&rhs).abs().cmp_pow10(-60) == Ordering::Less);
    }

    #[test]
    fn ln_of_power_of_two() {
        let k = 100_000u32;
        let v = ln_big(&(BigUint::one() << k), 50).unwrap();
        let expected = ln2(60).mul(&HighPrecision::from_integer(k, 60));
        assert!(v.sub(&expected).abs().cmp_pow10(-50) == Ordering::Less);
    }

    #[test]
    fn ln_against_f64() {
        for n in [3u64, 7, 1000, 123_456_789, u64::MAX] {
            let v = ln_big(&BigUint::from(n), 20).unwrap().to_f64();
            assert!((v - (n as f64).ln()).abs() < 1e-12, "{n}");
        }
    }

    #[test]
    fn arithmetic_and_formatting() {
        let x = hp("1.5");
        let y = hp("-0.25");
        assert_eq!(x.add(&y).to_fixed(3), "1.250");
        assert_eq!(x.mul(&y).to_fixed(4), "-0.3750");
        assert_eq!(x.div(&y).unwrap().to_fixed(2), "-6.00");
        assert_eq!(
            HighPrecision::from_ratio(2, 3, 20).unwrap().to_fixed(5),
            "0.66667"
        );
        assert_eq!(hp("1.127299070536616123").to_significant(16), "1.127299070536616");
        assert_eq!(hp("9.9996").to_significant(3), "10.0");
        assert_eq!(hp("0.0999").to_significant(2), "0.10");
        assert_eq!(hp("0.99999999999999849").to_significant(16), "0.9999999999999985");
        assert_eq!(hp("123.4").to_significant(2), "123");
        assert_eq!(hp("0.0000123456").to_significant(3), "1.23e-5");
        assert_eq!(hp("0.000123456").to_significant(3), "0.000123");
        assert_eq!(hp("7.19e-11").to_significant(3), "7.19e-11");
        assert_eq!(hp("0.00009996").to_significant(3), "1.00e-4");
        assert_eq!(hp("-2").to_fixed(0), "-2");
        assert_eq!(format!("{:.3}", hp("0.0004")), "0.000");
        assert!(hp("1") > hp("0.999999999"));
        assert!(HighPrecision::parse("1.2.3", 10).is_err());
        assert!(HighPrecision::parse("abc", 10).is_err());
        assert!(x.div(&HighPrecision::zero(10)).is_err());
    }

    #[test]
    fn agreement_tolerance() {
        let z = hp("1.1272990705366161");
        assert!(z.agrees_with("1.127299070536616", 15).unwrap());
        assert!(z.agrees_with("1.127299070536617", 16).unwrap());
        assert!(!z.agrees_with("1.127299070536630", 15).unwrap());
        let r = hp("0.99999999999999999999");
        assert!(r.agrees_with("0.9999999999999999", 15).unwrap());
        assert!(hp("7.2e0").agrees_with("7.3", 2).unwrap());
        assert!(!hp("7.1").agrees_with("7.3", 2).unwrap());
    }

    #[test]
    fn cmp_pow10_edges() {
        assert_eq!(hp("0.001").cmp_pow10(-3), Ordering::Equal);
        assert_eq!(hp("0.0011").cmp_pow10(-3), Ordering::Greater);
        assert_eq!(hp("0").cmp_pow10(-60), Ordering::Less);
        assert_eq!(pow10_neg(5, 20).cmp_pow10(-5), Ordering::Equal);
    }
}
