//! Fundamental units of the orders Z[sqrt(D)] and their regulators.

use crate::cf::sqrt_cf;
use crate::error::{Error, Result};
use crate::interval::{IntervalReal, Precision};
use crate::quad::{check_radicand, QuadElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

/// A unit of Z[sqrt(D)] greater than 1, together with its norm and an
/// enclosure of its logarithm.
#[derive(Debug, Clone, Serialize)]
pub struct Unit {
    pub element: QuadElement,
    /// Norm, +1 or -1.
    pub norm: i8,
    /// Enclosure of ln(element).
    pub regulator: IntervalReal,
    /// True when both the element and its conjugate are positive
    /// (equivalently, norm +1 here).
    pub totally_positive: bool,
}

impl Unit {
    fn build(element: QuadElement, bits: u32) -> Result<Unit> {
        let n = element.norm();
        let norm = if n.is_one() {
            1
        } else if (-&n).is_one() {
            -1
        } else {
            return Err(Error::InvariantViolation(format!("unit candidate has norm {n}")));
        };
        if element.signum() <= 0
            || element.compare(&QuadElement::from_int(1, element.radicand())?)? != std::cmp::Ordering::Greater
        {
            return Err(Error::InvariantViolation("unit must exceed 1".into()));
        }
        let totally_positive = norm == 1;
        // Totally positive units are at least (1 + sqrt 5)/2. With
        // element = x + y sqrt(D), x,y >= 1, this reduces to the integer
        // facts 2x - 1 >= 0 and (2y)^2 D >= 5.
        if totally_positive {
            let two_x_minus_1 = element.x() * BigInt::from(2) - BigInt::one();
            let four_y2_d = element.y() * element.y() * BigInt::from(4) * element.radicand();
            if two_x_minus_1.is_negative() || four_y2_d < BigInt::from(5) {
                return Err(Error::InvariantViolation(
                    "totally positive unit below (1+sqrt 5)/2".into(),
                ));
            }
        }
        let regulator = element.to_interval(bits + 8).ln()?.with_bits(bits);
        Ok(Unit { element, norm, regulator, totally_positive })
    }

    /// Recompute the regulator enclosure at a higher precision; never
    /// widens.
    pub fn regulator_at(&self, bits: u32) -> Result<IntervalReal> {
        let fresh = self.element.to_interval(bits + 8).ln()?.with_bits(bits);
        if bits >= self.regulator.bits() {
            fresh.refined_with(&self.regulator)
        } else {
            Ok(fresh)
        }
    }
}

/// Fundamental unit of Z[sqrt(D)]: the minimal solution of
/// `x^2 - D y^2 = +-1` with `x, y >= 1`, read off the convergent at the
/// end of one period of the continued fraction of sqrt(D).
pub fn fundamental_unit(d: &BigInt) -> Result<Unit> {
    fundamental_unit_prec(d, Precision::default().start)
}

pub fn fundamental_unit_prec(d: &BigInt, bits: u32) -> Result<Unit> {
    let cf = sqrt_cf(d)?;
    let (x, y) = cf.period_end_convergent();
    Unit::build(QuadElement::new(x, y, d.clone())?, bits)
}

/// Fundamental totally positive unit of Z[sqrt(D)]: the fundamental unit
/// itself when its norm is +1, otherwise its square.
pub fn totally_positive_unit(d: &BigInt) -> Result<Unit> {
    totally_positive_unit_prec(d, Precision::default().start)
}

pub fn totally_positive_unit_prec(d: &BigInt, bits: u32) -> Result<Unit> {
    let f = fundamental_unit_prec(d, bits)?;
    if f.norm == 1 {
        Ok(f)
    } else {
        Unit::build(f.element.mul(&f.element)?, bits)
    }
}

/// True if `d` has no repeated prime factor. Only supports values small
/// enough for trial division (below 2^62), which covers every desk-scale
/// radicand this crate targets.
pub fn is_squarefree(d: &BigInt) -> Result<bool> {
    let v = d
        .to_string()
        .parse::<u64>()
        .map_err(|_| Error::InvalidArgument(format!("squarefree test out of range: {d}")))?;
    if v >= (1 << 62) {
        return Err(Error::InvalidArgument(format!("squarefree test out of range: {d}")));
    }
    let mut n = v;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(false);
            }
        }
        p += 1;
    }
    Ok(true)
}

/// Result of the regulator bound check `R_D < sqrt(D) (1 + log sqrt D)`.
#[derive(Debug, Clone, Serialize)]
pub struct RegulatorCheck {
    pub regulator: IntervalReal,
    pub bound: IntervalReal,
}

/// Compute the regulator of Z[sqrt(D)] for squarefree D congruent to 2 or
/// 3 mod 4 (where Z[sqrt(D)] is the maximal order) and assert the
/// classical bound against it. A violation would mean an arithmetic bug,
/// since the bound is a theorem.
pub fn regulator_check(d: &BigInt) -> Result<RegulatorCheck> {
    regulator_check_prec(d, Precision::default())
}

pub fn regulator_check_prec(d: &BigInt, prec: Precision) -> Result<RegulatorCheck> {
    check_radicand(d)?;
    if !is_squarefree(d)? {
        return Err(Error::InvalidArgument(format!("{d} is not squarefree")));
    }
    let residue = d.mod_floor(&BigInt::from(4));
    if residue != BigInt::from(2) && residue != BigInt::from(3) {
        return Err(Error::InvalidArgument(format!(
            "{d} = 1 mod 4: Z[sqrt(D)] is not the maximal order there"
        )));
    }
    let unit = fundamental_unit(d)?;
    for bits in prec.steps() {
        let reg = unit.regulator_at(bits)?;
        // bound = sqrt(D) * (1 + ln sqrt(D)) = sqrt(D) + sqrt(D) ln(D)/2
        let sd = IntervalReal::sqrt_int(d, bits)?;
        let lnd = IntervalReal::from_int(d.clone(), bits).ln()?;
        let bound = sd.add(&sd.mul(&lnd).scale2(-1));
        if reg.certainly_lt(&bound) {
            return Ok(RegulatorCheck { regulator: reg, bound });
        }
        if bound.certainly_lt(&reg) {
            return Err(Error::InvariantViolation(format!(
                "regulator bound violated for D={d}: this is a theorem, so the arithmetic is wrong"
            )));
        }
    }
    Err(prec.exhausted(&format!("regulator bound comparison for D={d}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn fundamental_units_small() {
        let u = fundamental_unit(&big(2)).unwrap();
        assert_eq!((u.element.x().to_i64(), u.element.y().to_i64(), u.norm), (Some(1), Some(1), -1));
        let u = fundamental_unit(&big(3)).unwrap();
        assert_eq!((u.element.x().to_i64(), u.element.y().to_i64(), u.norm), (Some(2), Some(1), 1));
        // order Z[sqrt 5]: minimal is (2, 1) with norm -1
        let u = fundamental_unit(&big(5)).unwrap();
        assert_eq!((u.element.x().to_i64(), u.element.y().to_i64(), u.norm), (Some(2), Some(1), -1));
    }

    #[test]
    fn totally_positive_units_small() {
        let u = totally_positive_unit(&big(2)).unwrap();
        assert_eq!((u.element.x().to_i64(), u.element.y().to_i64()), (Some(3), Some(2)));
        assert!(u.totally_positive && u.norm == 1);
        let u = totally_positive_unit(&big(3)).unwrap();
        assert_eq!((u.element.x().to_i64(), u.element.y().to_i64()), (Some(2), Some(1)));
        let u = totally_positive_unit(&big(5)).unwrap();
        assert_eq!((u.element.x().to_i64(), u.element.y().to_i64()), (Some(9), Some(4)));
    }

    #[test]
    fn unit_matches_chakravala_to_200() {
        for d in 2i64..=200 {
            if crate::quad::is_square(&big(d)) {
                continue;
            }
            let u = fundamental_unit(&big(d)).unwrap();
            let (cx, cy, cn) = pell_oracles::chakravala(d as u64);
            assert_eq!(u.element.x().magnitude(), &cx, "d={d}");
            assert_eq!(u.element.y().magnitude(), &cy, "d={d}");
            assert_eq!(u.norm, cn, "d={d}");
        }
    }

    #[test]
    fn regulator_of_sqrt2() {
        let u = fundamental_unit(&big(2)).unwrap();
        // ln(1 + sqrt 2) = 0.88137358701954302523260932497979230902816032826164...
        let num = BigInt::from(88137358701954302523i128);
        let den = BigInt::from(10i64).pow(20);
        assert!(u.regulator.lo().cmp_ratio(&(&num - 1), &den).is_ge());
        assert!(u.regulator.hi().cmp_ratio(&(&num + 1), &den).is_le());
        let check = regulator_check(&big(2)).unwrap();
        assert!(check.regulator.certainly_lt(&check.bound));
    }

    #[test]
    fn regulator_check_validation() {
        assert!(matches!(regulator_check(&big(4)), Err(Error::InvalidRadicand(_))));
        assert!(matches!(regulator_check(&big(8)), Err(Error::InvalidArgument(_)))); // not squarefree
        assert!(matches!(regulator_check(&big(5)), Err(Error::InvalidArgument(_)))); // 1 mod 4
        assert!(regulator_check(&big(3)).is_ok());
    }

    #[test]
    fn regulator_bound_holds_on_squarefree_2_3_mod_4() {
        for d in 2i64..=200 {
            let b = big(d);
            if crate::quad::is_square(&b) || !is_squarefree(&b).unwrap() {
                continue;
            }
            let r = d % 4;
            if r != 2 && r != 3 {
                continue;
            }
            let check = regulator_check(&b).unwrap();
            assert!(check.regulator.certainly_lt(&check.bound), "d={d}");
        }
    }

    #[test]
    fn totally_positive_floor_is_golden_ratio() {
        // every totally positive unit exceeds (1 + sqrt 5)/2; checked
        // exactly in the constructor, cross-checked here on an interval
        let phi = IntervalReal::golden_ratio(96);
        for d in [2i64, 3, 5, 6, 7, 10, 13, 61] {
            let u = totally_positive_unit(&big(d)).unwrap();
            let iv = u.element.to_interval(96);
            assert!(phi.certainly_lt(&iv) || phi.intersect(&iv).is_some(), "d={d}");
            assert!(!iv.certainly_lt(&phi), "d={d}");
        }
    }
}
