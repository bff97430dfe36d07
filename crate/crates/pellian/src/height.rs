//! Logarithmic Weil heights of rational and real quadratic numbers.
//!
//! For a quadratic `e` with primitive minimal polynomial
//! `A x^2 + B x + C`, `h(e) = (1/2) (log A + sum over conjugates of
//! log^+ |conjugate|)`. Which conjugates exceed 1 in absolute value is
//! decided exactly by squaring; only the logarithms themselves are
//! intervals.

use crate::error::{Error, Result};
use crate::interval::IntervalReal;
use crate::quad::{QuadElement, QuadRational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use std::cmp::Ordering;

/// Weil height of an exact quadratic (or rational) number given as a
/// quadratic integer over a positive denominator.
pub fn weil_height_quad(value: &QuadRational, bits: u32) -> Result<IntervalReal> {
    if value.is_zero() {
        return Err(Error::ZeroValue("height of zero".into()));
    }
    if value.num.is_rational() {
        // reduced rational p/q: h = log max(|p|, q)
        let g = value.num.x().gcd(&value.den);
        let p = (value.num.x() / &g).abs();
        let q = &value.den / &g;
        let m = p.max(q);
        return IntervalReal::from_int(m, bits).ln();
    }

    // minimal polynomial of (x + y sqrt d)/den: den^2 X^2 - 2 x den X + (x^2 - d y^2),
    // divided by its content.
    let x = value.num.x();
    let den = &value.den;
    let a = den * den;
    let b = BigInt::from(-2) * x * den;
    let c = value.num.norm();
    let content = a.gcd(&b).gcd(&c);
    let lead = &a / &content;

    // |conjugate| > 1 iff |x +- y sqrt d| > den, decided by exact squaring
    let mut h = IntervalReal::from_int(lead, bits + 8).ln()?;
    for conj in [value.num.clone(), value.num.conj()] {
        if abs_exceeds(&conj, den)? == Ordering::Greater {
            let mag = conj.abs().to_interval(bits + 8);
            let term = mag.div(&IntervalReal::from_int(den.clone(), bits + 8))?.ln()?;
            h = h.add(&term);
        }
    }
    Ok(h.scale2(-1).with_bits(bits))
}

/// Compare `|e|` with the positive integer `den` exactly.
fn abs_exceeds(e: &QuadElement, den: &BigInt) -> Result<Ordering> {
    let abs = e.abs();
    let d = QuadElement::from_int(den.clone(), e.radicand())?;
    let ord = abs.compare(&d)?;
    if ord == Ordering::Equal && !e.is_rational() {
        // |x + y sqrt d| = den with y != 0 would make sqrt d rational
        return Err(Error::InvariantViolation("irrational with rational magnitude".into()));
    }
    Ok(ord)
}

/// Height of a quadratic integer (denominator 1).
pub fn weil_height_element(e: &QuadElement, bits: u32) -> Result<IntervalReal> {
    weil_height_quad(&QuadRational::from_element(e.clone()), bits)
}
