//! Exact arithmetic in the quadratic field Q(√5).
//!
//! Every position, time and ratio produced by the simulator is a [`Scalar`],
//! i.e. a value `a + b·√5` with arbitrary-precision rational `a` and `b`.
//! Comparisons are decided by [`Scalar::signum`], which never rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical arbitrary-precision rational (`gcd(num, den) = 1`, `den > 0`).
pub type Rational = BigRational;

/// Builds the rational `num/den`.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Greatest integer not exceeding `v`.
pub fn floor_rational(v: &Rational) -> BigInt {
    v.floor().to_integer()
}

/// An element `a + b·√5` of Q(√5).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: Rational,
    b: Rational,
}

/// Binary field operation selector used by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies `op` exactly. Division by zero is reported, not panicked.
pub fn arith(lhs: &Scalar, op: ArithOp, rhs: &Scalar) -> Result<Scalar> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.checked_div(rhs)?,
    })
}

/// The golden ratio (1 + √5)/2.
pub fn phi() -> Scalar {
    Scalar::new(ratio(1, 2), ratio(1, 2))
}

impl Scalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(ratio(num, den))
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar { a, b: Rational::zero() }
    }

    /// √5 itself.
    pub fn sqrt5() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of √5.
    pub fn sqrt5_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `Some(a)` when the value lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    /// Conjugate `a − b·√5`.
    pub fn conjugate(&self) -> Scalar {
        Scalar::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 5b²` (product with the conjugate).
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(5)) * &self.b * &self.b
    }

    /// Exact sign of `a + b·√5` as −1, 0 or +1.
    pub fn signum(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: the term with the larger square wins
        let a2 = &self.a * &self.a;
        let b2 = Rational::from_integer(BigInt::from(5)) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // unreachable for rational a, b: √5 is irrational
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse via the conjugate.
    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Scalar::from_rational(self.a.recip()));
        }
        let n = self.norm();
        Ok(Scalar::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_rational() {
            if rhs.a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar::new(&self.a / &rhs.a, &self.b / &rhs.a));
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn half(&self) -> Scalar {
        let two = Rational::from_integer(BigInt::from(2));
        Scalar::new(&self.a / &two, &self.b / &two)
    }

    /// Multiplies by a rational factor.
    pub fn scale(&self, k: &Rational) -> Scalar {
        Scalar::new(&self.a * k, &self.b * k)
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 5f64.sqrt()
    }

    /// Decimal rendering with `digits` significant digits, rounded half away
    /// from zero. Advisory only; comparisons never go through it.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let sign = self.signum();
        if sign == 0 {
            return format!("{:.*}", digits - 1, 0.0);
        }
        let mut precision = digits as u32 + 12;
        loop {
            let scaled = self.abs().floor_scaled(precision);
            let text = scaled.to_string();
            if scaled.is_zero() || text.len() < digits + 6 {
                precision += 16;
                if precision > 4096 {
                    return format!("{:.*}", digits - 1, 0.0);
                }
                continue;
            }
            return render_significant(&text, precision as i64, digits, sign < 0);
        }
    }

    /// Decimal rendering at the report precision of twelve significant digits.
    pub fn to_report_decimal(&self) -> String {
        self.to_decimal(12)
    }

    /// ⌊|v|·10^p⌋ up to an error of at most 2 units (each term is floored
    /// independently). `self` must be non-negative.
    fn floor_scaled(&self, p: u32) -> BigInt {
        let ten_p = BigInt::from(10u32).pow(p);
        let a_part = (&self.a * Rational::from_integer(ten_p.clone())).floor().to_integer();
        if self.b.is_zero() {
            return a_part;
        }
        let num = self.b.numer().abs();
        let den = self.b.denom().clone();
        let radicand = BigInt::from(5) * &ten_p * &ten_p * &num * &num;
        let root = radicand.sqrt();
        let b_mag = root / den;
        if self.b.is_negative() {
            a_part - b_mag - 1
        } else {
            a_part + b_mag
        }
    }
}

fn rational_sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Rounds the integer string `text` (value `text·10^-precision`) to
/// `digits` significant digits, half away from zero, in positional notation.
fn render_significant(text: &str, precision: i64, digits: usize, negative: bool) -> String {
    let bytes: Vec<u8> = text.bytes().map(|c| c - b'0').collect();
    let mut kept: Vec<u8> = bytes[..digits].to_vec();
    // exponent of the leading digit
    let mut lead_exp = bytes.len() as i64 - 1 - precision;
    if bytes[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                lead_exp += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let digit_char = |d: u8| char::from(b'0' + d);
    if lead_exp >= 0 {
        let int_len = lead_exp as usize + 1;
        for i in 0..int_len.max(digits) {
            if i == int_len {
                out.push('.');
            }
            out.push(kept.get(i).copied().map(digit_char).unwrap_or('0'));
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-lead_exp - 1) {
            out.push('0');
        }
        kept.iter().for_each(|&d| out.push(digit_char(d)));
    }
    out
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.is_rational() && other.is_rational() {
            return self.a.cmp(&other.a);
        }
        (self - other).signum().cmp(&0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_rational() && rhs.is_rational() {
            return Scalar::from_rational(&self.a * &rhs.a);
        }
        let five = Rational::from_integer(BigInt::from(5));
        Scalar::new(
            &self.a * &rhs.a + five * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] where the divisor
/// may vanish.
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("Scalar division by zero")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a, -self.b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a.clone(), -self.b.clone())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::from_rational(v)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational, force_den: bool) -> fmt::Result {
    if r.is_integer() && !force_den {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form: `A` or `A+(B)*r5`, where each rational is `n` or
/// `n/d`, and the √5 coefficient always carries its denominator.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.a, false)?;
        if !self.b.is_zero() {
            f.write_str("+(")?;
            write_rational(f, &self.b, true)?;
            f.write_str(")*r5")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{})", self, self.to_f64())
    }
}

/// Formats in the canonical grammar accepted by [`parse_scalar`].
pub fn format_scalar(v: &Scalar) -> String {
    v.to_string()
}

/// Parses `INT`, `INT/INT`, optionally followed by `+(INT/INT)*r5`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let a = p.rational()?;
    let b = if p.peek() == Some(b'+') {
        p.pos += 1;
        p.expect(b'(')?;
        let b = p.rational()?;
        p.expect(b')')?;
        p.expect_str("*r5")?;
        b
    } else {
        Rational::zero()
    };
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(Scalar::new(a, b))
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<()> {
        for c in s.bytes() {
            self.expect(c)?;
        }
        Ok(())
    }

    fn integer(&mut self, signed: bool) -> Result<BigInt> {
        let start = self.pos;
        if signed && self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected digit"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<BigInt>().expect("validated integer literal"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.integer(true)?;
        if self.peek() != Some(b'/') {
            return Ok(Rational::from_integer(num));
        }
        self.pos += 1;
        let den_pos = self.pos;
        let den = self.integer(false)?;
        if den.is_zero() {
            return Err(Error::Parse { position: den_pos, message: "zero denominator".into() });
        }
        Ok(Rational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: (i64, i64), b: (i64, i64)) -> Scalar {
        Scalar::new(ratio(a.0, a.1), ratio(b.0, b.1))
    }

    #[test]
    fn golden_ratio_squares_to_itself_plus_one() {
        let p = phi();
        assert_eq!(&p * &p, s((3, 2), (1, 2)));
        assert!((&p * &p - &p - Scalar::one()).is_zero());
    }

    #[test]
    fn division_rationalizes_with_conjugate() {
        let q = arith(&Scalar::one(), ArithOp::Div, &Scalar::sqrt5()).unwrap();
        assert_eq!(q, s((0, 1), (1, 5)));
        assert_eq!(
            arith(&Scalar::one(), ArithOp::Div, &Scalar::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn rational_addition() {
        let r = arith(&Scalar::from_ratio(1, 3), ArithOp::Add, &Scalar::from_ratio(1, 6)).unwrap();
        assert_eq!(r, Scalar::from_ratio(1, 2));
    }

    #[test]
    fn signs_of_mixed_terms() {
        assert_eq!(s((-2, 1), (1, 1)).signum(), 1);
        assert_eq!(s((7, 3), (-1, 1)).signum(), 1);
        assert_eq!(s((-3, 1), (1, 1)).signum(), -1);
        assert_eq!(Scalar::zero().signum(), 0);
        assert_eq!((phi() - Scalar::from_ratio(8, 5)).signum(), 1);
    }

    #[test]
    fn floor_of_rationals() {
        // k = ⌊9/6 − 2/3⌋; oracle: integer long division of 5 by 6
        let k = floor_rational(&(ratio(9, 6) - ratio(2, 3)));
        assert_eq!(k, BigInt::from(5 / 6));
        assert_eq!(floor_rational(&ratio(-1, 2)), BigInt::from(-1));
        assert_eq!(floor_rational(&ratio(7, 2)), BigInt::from(3));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("3/2").unwrap(), Scalar::from_ratio(3, 2));
        assert_eq!(parse_scalar("-2+(1/1)*r5").unwrap(), s((-2, 1), (1, 1)));
        assert_eq!(format_scalar(&phi()), "1/2+(1/2)*r5");
        assert_eq!(format_scalar(&s((3, 2), (1, 2))), "3/2+(1/2)*r5");
        assert_eq!(format_scalar(&s((-2, 1), (1, 1))), "-2+(1/1)*r5");
        assert_eq!(format_scalar(&Scalar::from_ratio(-31, 11)), "-31/11");
        assert_eq!(parse_scalar("4/8").unwrap(), Scalar::from_ratio(1, 2));
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_scalar("1/2+(x)*r5") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_scalar("1/0"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_scalar(""), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_scalar("1 "), Err(Error::Parse { position: 1, .. })));
        assert!(parse_scalar("1+(1/2)*r6").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Scalar::from_ratio(31, 11).to_report_decimal(), "2.81818181818");
        assert_eq!(Scalar::from_int(2).to_report_decimal(), "2.00000000000");
        assert_eq!((Scalar::one() + phi()).to_report_decimal(), "2.61803398875");
        assert_eq!(s((3, 2), (-1, 2)).to_decimal(4), "0.3820");
        assert_eq!(s((-2, 1), (1, 1)).to_decimal(4), "0.2361");
        assert_eq!(Scalar::from_ratio(-1, 3).to_decimal(3), "-0.333");
        assert_eq!(Scalar::from_ratio(999_999, 1).to_decimal(3), "1000000");
        assert_eq!(Scalar::from_ratio(1, 1000).to_decimal(2), "0.0010");
        assert_eq!(Scalar::zero().to_decimal(3), "0.00");
    }

    #[test]
    fn ordering_matches_sign_of_difference() {
        let a = s((1, 2), (1, 2));
        let b = Scalar::from_ratio(13, 8);
        assert!(a < b);
        assert_eq!(a.clone().max(b.clone()), b);
    }
}
