//! Exact arithmetic in Z[sqrt(D)] and its fraction field.
//!
//! `QuadElement` is the universal value type of the crate: `x + y sqrt(D)`
//! with big-integer coordinates. Sign and order decisions are made by
//! integer casework and squaring only; no decision path touches an
//! approximation.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::IntervalReal;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// True if `n` is a perfect square (negative numbers are not).
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Validate a radicand: an integer >= 2 that is not a perfect square.
pub fn check_radicand(d: &BigInt) -> Result<()> {
    if d < &BigInt::from(2) || is_square(d) {
        return Err(Error::InvalidRadicand(d.to_string()));
    }
    Ok(())
}

/// `x + y sqrt(d)` with exact integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElement {
    x: BigInt,
    y: BigInt,
    d: BigInt,
}

impl QuadElement {
    pub fn new<X, Y, D>(x: X, y: Y, d: D) -> Result<QuadElement>
    where
        X: Into<BigInt>,
        Y: Into<BigInt>,
        D: Into<BigInt>,
    {
        let d = d.into();
        check_radicand(&d)?;
        Ok(QuadElement { x: x.into(), y: y.into(), d })
    }

    /// The rational element `x + 0 sqrt(d)`.
    pub fn from_int<X: Into<BigInt>>(x: X, d: &BigInt) -> Result<QuadElement> {
        QuadElement::new(x.into(), BigInt::zero(), d.clone())
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    fn check_same_field(&self, other: &QuadElement) -> Result<()> {
        if self.d != other.d {
            return Err(Error::MismatchedFields(self.d.to_string(), other.d.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadElement) -> Result<QuadElement> {
        self.check_same_field(other)?;
        Ok(QuadElement { x: &self.x + &other.x, y: &self.y + &other.y, d: self.d.clone() })
    }

    pub fn sub(&self, other: &QuadElement) -> Result<QuadElement> {
        self.check_same_field(other)?;
        Ok(QuadElement { x: &self.x - &other.x, y: &self.y - &other.y, d: self.d.clone() })
    }

    pub fn mul(&self, other: &QuadElement) -> Result<QuadElement> {
        self.check_same_field(other)?;
        Ok(QuadElement {
            x: &self.x * &other.x + &self.y * &other.y * &self.d,
            y: &self.x * &other.y + &self.y * &other.x,
            d: self.d.clone(),
        })
    }

    pub fn mul_int(&self, k: &BigInt) -> QuadElement {
        QuadElement { x: &self.x * k, y: &self.y * k, d: self.d.clone() }
    }

    pub fn neg(&self) -> QuadElement {
        QuadElement { x: -&self.x, y: -&self.y, d: self.d.clone() }
    }

    /// Galois conjugate: sqrt(d) -> -sqrt(d).
    pub fn conj(&self) -> QuadElement {
        QuadElement { x: self.x.clone(), y: -&self.y, d: self.d.clone() }
    }

    /// Field norm `x^2 - d y^2`, exactly.
    pub fn norm(&self) -> BigInt {
        &self.x * &self.x - &self.d * &self.y * &self.y
    }

    pub fn pow(&self, mut n: u64) -> QuadElement {
        let mut result = QuadElement { x: BigInt::one(), y: BigInt::zero(), d: self.d.clone() };
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same field");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        result
    }

    /// Exact division when the quotient lies in Z[sqrt(d)] again.
    pub fn div_exact(&self, other: &QuadElement) -> Result<Option<QuadElement>> {
        self.check_same_field(other)?;
        let n = other.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let prod = self.mul(&other.conj())?;
        let (qx, rx) = prod.x.div_rem(&n);
        let (qy, ry) = prod.y.div_rem(&n);
        if rx.is_zero() && ry.is_zero() {
            Ok(Some(QuadElement { x: qx, y: qy, d: self.d.clone() }))
        } else {
            Ok(None)
        }
    }

    /// Sign of `x + y sqrt(d)`, decided by integer casework: compare the
    /// signs of the parts, resolving mixed signs by comparing `x^2` with
    /// `d y^2`.
    pub fn signum(&self) -> i8 {
        let sx = self.x.sign();
        let sy = self.y.sign();
        use num_bigint::Sign::*;
        match (sx, sy) {
            (NoSign, NoSign) => 0,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => 1,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => -1,
            (Plus, Minus) | (Minus, Plus) => {
                // sign equals sign(x) iff x^2 > d y^2
                let x2 = &self.x * &self.x;
                let dy2 = &self.d * &self.y * &self.y;
                let cmp = x2.cmp(&dy2);
                let sx: i8 = if sx == Plus { 1 } else { -1 };
                match cmp {
                    Ordering::Greater => sx,
                    Ordering::Less => -sx,
                    Ordering::Equal => unreachable!("sqrt(d) is irrational"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Exact total order on elements of the same field.
    pub fn compare(&self, other: &QuadElement) -> Result<Ordering> {
        self.check_same_field(other)?;
        let diff = self.sub(other)?;
        Ok(match diff.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// `|x + y sqrt(d)|` as an element (the absolute value is again in the
    /// ring, up to sign).
    pub fn abs(&self) -> QuadElement {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Enclosure of the real value at `bits` precision. The width is at
    /// most `2^-(bits+2)` in absolute terms.
    pub fn to_interval(&self, bits: u32) -> IntervalReal {
        if self.y.is_zero() {
            return IntervalReal::point(Dyadic::from_int(self.x.clone()), bits);
        }
        let ybits = self.y.bits() as u32;
        let p = bits + ybits + 4;
        // floor sqrt of d * 4^p gives sqrt(d) in [s, s+1] / 2^p
        let scaled = self.d.magnitude() << (2 * p as u64);
        let s = scaled.sqrt();
        let lo_root = Dyadic::new(BigInt::from(s.clone()), -(p as i64));
        let hi_root = Dyadic::new(BigInt::from(s + 1u32), -(p as i64));
        let root = IntervalReal::new(lo_root, hi_root, p);
        root.mul_int(&self.y)
            .add(&IntervalReal::from_int(self.x.clone(), p))
            .with_bits(bits.max(32))
    }
}

/// Exact comparison of `p + q sqrt(a)` against `r + s sqrt(b)` across two
/// different quadratic fields. Decided by sign casework and at most two
/// squarings; requires `a*b` nonsquare whenever both irrational parts are
/// present (otherwise the values could coincide and no amount of squaring
/// separates them).
pub fn compare_cross(e1: &QuadElement, e2: &QuadElement) -> Result<Ordering> {
    if e1.radicand() == e2.radicand() {
        return e1.compare(e2);
    }
    let a = e1.radicand();
    let b = e2.radicand();
    let q = e1.y();
    let s = e2.y();
    let g = e1.x() - e2.x(); // E = q sqrt(a) - s sqrt(b) + g

    // sign of F = q sqrt(a) - s sqrt(b)
    let f_sign: i8 = match (q.sign(), s.sign()) {
        (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => 0,
        (num_bigint::Sign::NoSign, ssign) => {
            if ssign == num_bigint::Sign::Plus {
                -1
            } else {
                1
            }
        }
        (qsign, num_bigint::Sign::NoSign) => {
            if qsign == num_bigint::Sign::Plus {
                1
            } else {
                -1
            }
        }
        (num_bigint::Sign::Plus, num_bigint::Sign::Minus) => 1,
        (num_bigint::Sign::Minus, num_bigint::Sign::Plus) => -1,
        (qsign, _) => {
            // same nonzero sign: |F| sign from q^2 a vs s^2 b
            let qa = q * q * a;
            let sb = s * s * b;
            let mag = match qa.cmp(&sb) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => {
                    return Err(Error::InvalidArgument(
                        "cross-field comparison needs ab nonsquare".into(),
                    ))
                }
            };
            if qsign == num_bigint::Sign::Plus {
                mag
            } else {
                -mag
            }
        }
    };

    let g_sign: i8 = match g.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Minus => -1,
    };

    let e_sign: i8 = if f_sign == 0 {
        g_sign
    } else if g_sign == 0 || g_sign == f_sign {
        f_sign
    } else {
        // opposite signs: compare F^2 against g^2.
        // F^2 - g^2 = (q^2 a + s^2 b - g^2) - 2 q s sqrt(ab)
        let k = q * q * a + s * s * b - &g * &g;
        let r2 = BigInt::from(2) * q * s;
        let cmp_sq = if r2.is_zero() {
            // single-surd case: F^2 is the integer q^2 a + s^2 b
            match k.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Minus => -1,
            }
        } else {
            QuadElement::new(k, -r2, a * b)?.signum()
        };
        match cmp_sq {
            0 => 0, // |F| = |g|: impossible for irrational F, caught below
            1 => f_sign,
            _ => g_sign,
        }
    };

    if e_sign == 0 && !(q.is_zero() && s.is_zero()) {
        return Err(Error::InvariantViolation(
            "cross-field values coincide despite irrational parts".into(),
        ));
    }
    Ok(match e_sign {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    })
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let sign = if self.y.is_negative() { "-" } else { "+" };
        let ymag = self.y.magnitude();
        let coeff = if *ymag == BigUint::one() { String::new() } else { ymag.to_string() };
        if self.x.is_zero() {
            if self.y.is_negative() {
                write!(f, "-{}√{}", coeff, self.d)
            } else {
                write!(f, "{}√{}", coeff, self.d)
            }
        } else {
            write!(f, "{}{}{}√{}", self.x, sign, coeff, self.d)
        }
    }
}

impl Serialize for QuadElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadElement", 3)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.serialize_field("D", &self.d.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QuadElement {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            x: String,
            y: String,
            #[serde(rename = "D")]
            d: String,
        }
        let raw = Raw::deserialize(de)?;
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| D::Error::custom(e.to_string()));
        QuadElement::new(parse(&raw.x)?, parse(&raw.y)?, parse(&raw.d)?)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A quadratic integer divided by a positive integer denominator; the
/// fraction-field companion of `QuadElement` used for inverses and heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRational {
    pub num: QuadElement,
    pub den: BigInt,
}

impl Serialize for QuadRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadRational", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den.to_string())?;
        st.end()
    }
}

impl QuadRational {
    pub fn new(num: QuadElement, den: BigInt) -> Result<QuadRational> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if den.is_negative() { (num.neg(), -den) } else { (num, den) };
        Ok(QuadRational { num, den }.reduce())
    }

    pub fn from_element(num: QuadElement) -> QuadRational {
        QuadRational { num, den: BigInt::one() }
    }

    fn reduce(mut self) -> QuadRational {
        let g = self.num.x.gcd(&self.num.y).gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.num.x /= &g;
            self.num.y /= &g;
            self.den /= &g;
        }
        self
    }

    /// Multiplicative inverse of a nonzero element of the field.
    pub fn inverse_of(e: &QuadElement) -> Result<QuadRational> {
        if e.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = e.norm();
        // 1/e = conj(e) / norm(e)
        QuadRational::new(e.conj(), n)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn signum(&self) -> i8 {
        self.num.signum()
    }

    pub fn to_interval(&self, bits: u32) -> Result<IntervalReal> {
        self.num
            .to_interval(bits + self.den.bits() as u32 + 2)
            .div(&IntervalReal::from_int(self.den.clone(), bits))
            .map(|iv| iv.with_bits(bits))
    }
}
