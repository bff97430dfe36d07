//! Outward-rounded real intervals over dyadic endpoints.
//!
//! Every operation keeps the true real inside `[lo, hi]`. Elementary
//! functions (ln, sqrt, e) are computed in fixed point with explicit ulp
//! error accounting, then widened outward. Nothing here ever consults
//! hardware floating point.

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

/// Working-precision policy: operations start at `start` bits and double
/// until their consumer is satisfied or `ceiling` is reached. Reaching the
/// ceiling is an explicit error, never a silent wide interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub start: u32,
    pub ceiling: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: 128, ceiling: 8192 }
    }
}

impl Precision {
    pub fn new(start: u32, ceiling: u32) -> Result<Precision> {
        if start == 0 || start > ceiling {
            return Err(Error::InvalidArgument(format!(
                "precision start {start} must be in 1..=ceiling {ceiling}"
            )));
        }
        Ok(Precision { start, ceiling })
    }

    /// Doubling schedule `start, 2*start, ..., ceiling`.
    pub fn steps(&self) -> impl Iterator<Item = u32> {
        let start = self.start;
        let ceiling = self.ceiling;
        let mut cur = Some(start);
        std::iter::from_fn(move || {
            let bits = cur?;
            cur = if bits >= ceiling {
                None
            } else {
                Some((bits.saturating_mul(2)).min(ceiling))
            };
            Some(bits)
        })
    }

    pub fn exhausted(&self, context: &str) -> Error {
        Error::PrecisionCeiling { ceiling: self.ceiling, context: context.to_owned() }
    }
}

/// A closed interval `[lo, hi]` guaranteed to contain the real it stands
/// for, with endpoints rounded outward at `bits` significant bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl IntervalReal {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> IntervalReal {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        IntervalReal { lo, hi, bits }
    }

    pub fn point(d: Dyadic, bits: u32) -> IntervalReal {
        IntervalReal { lo: d.clone(), hi: d, bits }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, bits: u32) -> IntervalReal {
        IntervalReal::point(Dyadic::from_int(v), bits)
    }

    /// Enclosure of `num/den`, `den != 0`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Result<IntervalReal> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = Dyadic::from_int(num.clone());
        let d = Dyadic::from_int(den.clone());
        let (n, d) = if d.is_negative() { (n.neg(), d.neg()) } else { (n, d) };
        Ok(IntervalReal {
            lo: n.div_dir(&d, bits, Round::Down),
            hi: n.div_dir(&d, bits, Round::Up),
            bits,
        })
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    fn out(lo: Dyadic, hi: Dyadic, bits: u32) -> IntervalReal {
        IntervalReal::new(lo.round_dir(bits, Round::Down), hi.round_dir(bits, Round::Up), bits)
    }

    pub fn with_bits(&self, bits: u32) -> IntervalReal {
        IntervalReal::out(self.lo.clone(), self.hi.clone(), bits)
    }

    pub fn neg(&self) -> IntervalReal {
        IntervalReal { lo: self.hi.neg(), hi: self.lo.neg(), bits: self.bits }
    }

    pub fn abs(&self) -> IntervalReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = self.lo.neg().max(self.hi.clone());
            IntervalReal { lo: Dyadic::zero(), hi: m, bits: self.bits }
        }
    }

    pub fn add(&self, other: &IntervalReal) -> IntervalReal {
        let bits = self.bits.max(other.bits);
        IntervalReal::out(self.lo.add(&other.lo), self.hi.add(&other.hi), bits)
    }

    pub fn sub(&self, other: &IntervalReal) -> IntervalReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntervalReal) -> IntervalReal {
        let bits = self.bits.max(other.bits);
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        IntervalReal::out(lo, hi, bits)
    }

    pub fn mul_int(&self, k: &BigInt) -> IntervalReal {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        IntervalReal::out(lo, hi, self.bits)
    }

    pub fn scale2(&self, k: i64) -> IntervalReal {
        IntervalReal { lo: self.lo.scale2(k), hi: self.hi.scale2(k), bits: self.bits }
    }

    pub fn div(&self, other: &IntervalReal) -> Result<IntervalReal> {
        if !other.is_strictly_positive() && !other.is_strictly_negative() {
            return Err(Error::DivisionByZero);
        }
        let bits = self.bits.max(other.bits);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let d = a.div_dir(b, bits + 2, Round::Down);
                let u = a.div_dir(b, bits + 2, Round::Up);
                lo = Some(match lo {
                    None => d,
                    Some(x) => x.min(d),
                });
                hi = Some(match hi {
                    None => u,
                    Some(x) => x.max(u),
                });
            }
        }
        Ok(IntervalReal::out(lo.unwrap(), hi.unwrap(), bits))
    }

    pub fn recip(&self) -> Result<IntervalReal> {
        IntervalReal::from_int(1, self.bits).div(self)
    }

    /// Integer power by repeated interval multiplication.
    pub fn pow_u32(&self, n: u32) -> IntervalReal {
        let mut result = IntervalReal::from_int(1, self.bits);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Interval image of `max(x, y)`.
    pub fn max_i(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            bits: self.bits.max(other.bits),
        }
    }

    /// Interval image of `min(x, y)`.
    pub fn min_i(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            bits: self.bits.max(other.bits),
        }
    }

    pub fn intersect(&self, other: &IntervalReal) -> Option<IntervalReal> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(IntervalReal { lo, hi, bits: self.bits.max(other.bits) })
        } else {
            None
        }
    }

    /// Narrow `self` by a coarser enclosure of the same real. Both contain
    /// the truth, so the intersection does too; this is how re-evaluation
    /// at higher precision is guaranteed never to widen.
    pub fn refined_with(&self, coarser: &IntervalReal) -> Result<IntervalReal> {
        self.intersect(coarser).ok_or_else(|| {
            Error::InvariantViolation("refinement produced a disjoint enclosure".into())
        })
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn certainly_lt(&self, other: &IntervalReal) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &IntervalReal) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_gt(&self, other: &IntervalReal) -> bool {
        self.lo > other.hi
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    pub fn contains_ratio(&self, num: &BigInt, den: &BigInt) -> bool {
        use std::cmp::Ordering::*;
        self.lo.cmp_ratio(num, den) != Greater && self.hi.cmp_ratio(num, den) != Less
    }

    /// Enclosure of `sqrt(n)` for a nonnegative integer `n`.
    pub fn sqrt_int(n: &BigInt, bits: u32) -> Result<IntervalReal> {
        if n.is_negative() {
            return Err(Error::NegativeSqrt);
        }
        IntervalReal::point(Dyadic::from_int(n.clone()), bits).sqrt()
    }

    pub fn sqrt(&self) -> Result<IntervalReal> {
        if self.lo.is_negative() {
            return Err(Error::NegativeSqrt);
        }
        Ok(IntervalReal::new(
            sqrt_dyadic_dir(&self.lo, self.bits, Round::Down),
            sqrt_dyadic_dir(&self.hi, self.bits, Round::Up),
            self.bits,
        ))
    }

    pub fn ln(&self) -> Result<IntervalReal> {
        if !self.lo.is_positive() {
            return Err(Error::NonPositiveLog);
        }
        Ok(IntervalReal::new(
            ln_dyadic_dir(&self.lo, self.bits, Round::Down),
            ln_dyadic_dir(&self.hi, self.bits, Round::Up),
            self.bits,
        ))
    }

    /// Enclosure of Euler's number e.
    pub fn euler(bits: u32) -> IntervalReal {
        let w = bits + 32;
        let (v, err) = e_fixed(w);
        let lo = Dyadic::new(BigInt::from(&v - err), -(w as i64));
        let hi = Dyadic::new(BigInt::from(&v + err), -(w as i64));
        IntervalReal::out(lo, hi, bits)
    }

    /// Enclosure of ln 2.
    pub fn ln2(bits: u32) -> IntervalReal {
        let w = bits + 32;
        let (v, err) = ln2_fixed(w);
        let lo = Dyadic::new(BigInt::from(&v - err), -(w as i64));
        let hi = Dyadic::new(BigInt::from(&v + err), -(w as i64));
        IntervalReal::out(lo, hi, bits)
    }

    /// Enclosure of the golden ratio (1 + sqrt 5)/2.
    pub fn golden_ratio(bits: u32) -> IntervalReal {
        let five = IntervalReal::sqrt_int(&BigInt::from(5), bits + 4).expect("sqrt 5");
        five.add(&IntervalReal::from_int(1, bits + 4)).scale2(-1).with_bits(bits)
    }
}

impl Serialize for IntervalReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IntervalReal", 3)?;
        st.serialize_field("lo", &self.lo.to_decimal())?;
        st.serialize_field("hi", &self.hi.to_decimal())?;
        st.serialize_field("bits", &self.bits)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntervalReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: String,
            hi: String,
            bits: u32,
        }
        let raw = Raw::deserialize(d)?;
        let lo = Dyadic::from_decimal(&raw.lo)
            .ok_or_else(|| D::Error::custom(format!("not an exact dyadic decimal: {}", raw.lo)))?;
        let hi = Dyadic::from_decimal(&raw.hi)
            .ok_or_else(|| D::Error::custom(format!("not an exact dyadic decimal: {}", raw.hi)))?;
        if lo > hi {
            return Err(D::Error::custom("interval endpoints out of order"));
        }
        Ok(IntervalReal { lo, hi, bits: raw.bits })
    }
}

/// Directed square root of a nonnegative dyadic.
fn sqrt_dyadic_dir(x: &Dyadic, bits: u32, dir: Round) -> Dyadic {
    assert!(!x.is_negative());
    if x.is_zero() {
        return Dyadic::zero();
    }
    let mut m = x.mant().magnitude().clone();
    let mut e = x.exp();
    if e.rem_euclid(2) == 1 {
        m <<= 1u32;
        e -= 1;
    }
    let nb = m.bits();
    let target = 2 * (bits as u64 + 2);
    let mut s = if target > nb { target - nb } else { 0 };
    if s % 2 == 1 {
        s += 1;
    }
    m <<= s;
    let r = m.sqrt();
    let rexp = (e - s as i64) / 2;
    match dir {
        Round::Down => Dyadic::new(BigInt::from(r), rexp).round_dir(bits, Round::Down),
        Round::Up => {
            let exact = &r * &r == m;
            let r = if exact { r } else { r + BigUint::one() };
            Dyadic::new(BigInt::from(r), rexp).round_dir(bits, Round::Up)
        }
    }
}

/// Directed natural logarithm of a positive dyadic.
fn ln_dyadic_dir(x: &Dyadic, bits: u32, dir: Round) -> Dyadic {
    assert!(x.is_positive());
    // Pre-round the argument in the safe direction (ln is increasing).
    let x = x.round_dir(bits + 16, dir);
    let nb = x.mant().bits();
    let k = x.exp() + nb as i64 - 1; // x = m * 2^k with m in [1, 2)
    let klen = 64 - (k.unsigned_abs().leading_zeros() as u64).min(63);
    let w = bits + 48 + klen as u32;
    let shift = w as i64 - (nb as i64 - 1);
    debug_assert!(shift >= 0);
    let m_fix = x.mant().magnitude() << shift as u64;
    let one_fix = BigUint::one() << w;
    let (sum, err_m) = if m_fix == one_fix {
        (BigUint::zero(), 0u64)
    } else {
        ln_mantissa_fixed(&m_fix, w)
    };
    let (ln2, err_2) = ln2_fixed(w);
    let v = BigInt::from(sum) + BigInt::from(ln2) * k;
    let err = BigInt::from(err_m) + BigInt::from(err_2) * k.unsigned_abs() + 1;
    let d = match dir {
        Round::Down => Dyadic::new(&v - &err, -(w as i64)),
        Round::Up => Dyadic::new(&v + &err, -(w as i64)),
    };
    d.round_dir(bits, dir)
}

/// atanh series for ln m, m in (1, 2), given m_fix = m * 2^w.
/// Returns (value_fix, error_ulps).
fn ln_mantissa_fixed(m_fix: &BigUint, w: u32) -> (BigUint, u64) {
    let one = BigUint::one() << w;
    let num = m_fix - &one;
    let den = m_fix + &one;
    // t = (m-1)/(m+1) in (0, 1/3)
    let t = (&num << w) / &den;
    atanh_series_fixed(&t, w)
}

/// 2 * atanh(t) for fixed-point t in (0, 1/2), with ulp error accounting.
fn atanh_series_fixed(t: &BigUint, w: u32) -> (BigUint, u64) {
    let mut sum = t.clone();
    let mut term = t.clone();
    let s = (t * t) >> w;
    let mut i = 1u64;
    let mut n_terms = 1u64;
    while !term.is_zero() {
        term = (&term * &s) >> w;
        if term.is_zero() {
            break;
        }
        sum += &term / (2 * i + 1);
        i += 1;
        n_terms += 1;
        debug_assert!(n_terms < (w as u64) * 2 + 64);
    }
    // Per-term floor errors stay below 6 ulps each (the series ratio is
    // below 1/9, so propagated error contracts); the truncated tail is
    // below 8 ulps. Doubling for 2*atanh.
    let err = 12 * n_terms + 16;
    (sum << 1u32, err)
}

fn ln2_cache() -> &'static Mutex<BTreeMap<u32, (BigUint, u64)>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, (BigUint, u64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// ln 2 = 2 atanh(1/3) in fixed point at w bits.
fn ln2_fixed(w: u32) -> (BigUint, u64) {
    if let Some(hit) = ln2_cache().lock().unwrap().get(&w) {
        return hit.clone();
    }
    let t = (BigUint::one() << w) / BigUint::from(3u32);
    let (v, err) = atanh_series_fixed(&t, w);
    // one extra ulp for the floor in t itself (amplified by atanh' <= 9/8, doubled)
    let out = (v, err + 3);
    ln2_cache().lock().unwrap().insert(w, out.clone());
    out
}

/// e = sum 1/k! in fixed point at w bits.
fn e_fixed(w: u32) -> (BigUint, u64) {
    let one = BigUint::one() << w;
    let mut sum = &one << 1u32; // k = 0, 1
    let mut term = one;
    let mut k = 2u64;
    let mut n = 0u64;
    while !term.is_zero() {
        term /= k;
        sum += &term;
        k += 1;
        n += 1;
    }
    (sum, 2 * n + 6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    /// The decimal is the true value rounded to its printed digits, so the
    /// truth lies within one last-digit ulp. A correct tight enclosure must
    /// sit inside that bracket.
    fn assert_contains_decimal(iv: &IntervalReal, dec: &str) {
        let (int_part, frac_part) = dec.split_once('.').unwrap_or((dec, ""));
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches('-'), frac_part);
        let mut p = BigInt::from_str(&digits).unwrap();
        if neg {
            p = -p;
        }
        let q = BigInt::from(10u32).pow(frac_part.len() as u32);
        use std::cmp::Ordering::*;
        let inside = iv.lo().cmp_ratio(&(&p - 1), &q) != Less && iv.hi().cmp_ratio(&(&p + 1), &q) != Greater;
        assert!(
            inside,
            "interval [{}, {}] not within 1 ulp of {dec}",
            iv.lo().to_decimal(),
            iv.hi().to_decimal()
        );
    }

    #[test]
    fn sqrt_two() {
        let iv = IntervalReal::sqrt_int(&BigInt::from(2), 256).unwrap();
        assert_contains_decimal(&iv, "1.41421356237309504880168872420969807856967187537694");
        assert!(iv.width() <= Dyadic::new(BigInt::one(), -248));
    }

    #[test]
    fn ln_known_values() {
        let two = IntervalReal::from_int(2, 256);
        let ln2 = two.ln().unwrap();
        assert_contains_decimal(&ln2, "0.69314718055994530941723212145817656807550013436026");
        assert!(ln2.width() <= Dyadic::new(BigInt::one(), -248));

        let ten = IntervalReal::from_int(10, 256);
        let ln10 = ten.ln().unwrap();
        assert_contains_decimal(&ln10, "2.30258509299404568401799145468436420760110148862877");

        let twelve = IntervalReal::from_int(12, 256);
        let ln12 = twelve.ln().unwrap();
        assert_contains_decimal(&ln12, "2.4849066497880003102297094798388788407984908265432");

        // small argument: ln(1/4) = -2 ln 2
        let quarter = IntervalReal::from_ratio(&BigInt::one(), &BigInt::from(4), 256).unwrap();
        let l = quarter.ln().unwrap();
        let want = ln2.mul_int(&BigInt::from(-2));
        assert!(l.intersect(&want).is_some());
    }

    #[test]
    fn ln_constant_matches_method() {
        let a = IntervalReal::ln2(192);
        let b = IntervalReal::from_int(2, 192).ln().unwrap();
        assert!(a.intersect(&b).is_some());
    }

    #[test]
    fn euler_value() {
        let e = IntervalReal::euler(256);
        assert_contains_decimal(&e, "2.71828182845904523536028747135266249775724709369995");
    }

    #[test]
    fn golden_ratio_value() {
        let phi = IntervalReal::golden_ratio(256);
        assert_contains_decimal(&phi, "1.61803398874989484820458683436563811772030917980576");
    }

    #[test]
    fn ln_product_identity() {
        // ln(6) = ln(2) + ln(3), as overlapping enclosures
        let l6 = IntervalReal::from_int(6, 128).ln().unwrap();
        let l2 = IntervalReal::from_int(2, 128).ln().unwrap();
        let l3 = IntervalReal::from_int(3, 128).ln().unwrap();
        assert!(l6.intersect(&l2.add(&l3)).is_some());
    }

    #[test]
    fn division_and_pow() {
        let third = IntervalReal::from_ratio(&BigInt::one(), &BigInt::from(3), 96).unwrap();
        let nine = third.pow_u32(2).recip().unwrap();
        assert_contains_decimal(&nine, "9");
        let x = IntervalReal::from_int(7, 96);
        let y = x.div(&IntervalReal::from_int(2, 96)).unwrap();
        assert_contains_decimal(&y, "3.5");
        assert!(IntervalReal::from_int(0, 32).recip().is_err());
    }

    #[test]
    fn refinement_narrows() {
        for n in [2u32, 3, 5, 7, 97] {
            let coarse = IntervalReal::sqrt_int(&BigInt::from(n), 64).unwrap();
            let fine = IntervalReal::sqrt_int(&BigInt::from(n), 128).unwrap();
            let refined = fine.refined_with(&coarse).unwrap();
            assert!(refined.width() <= coarse.width());
            assert!(refined.lo() >= coarse.lo() && refined.hi() <= coarse.hi());
        }
    }

    #[test]
    fn ln_negative_rejected() {
        assert_eq!(IntervalReal::from_int(-1, 32).ln(), Err(Error::NonPositiveLog));
        assert_eq!(IntervalReal::from_int(0, 32).ln(), Err(Error::NonPositiveLog));
    }

    #[test]
    fn precision_steps() {
        let p = Precision::new(128, 1024).unwrap();
        let steps: Vec<u32> = p.steps().collect();
        assert_eq!(steps, vec![128, 256, 512, 1024]);
        let q = Precision::new(100, 640).unwrap();
        let steps: Vec<u32> = q.steps().collect();
        assert_eq!(steps, vec![100, 200, 400, 640]);
    }

    #[test]
    fn serde_round_trip() {
        let iv = IntervalReal::sqrt_int(&BigInt::from(2), 80).unwrap();
        let json = serde_json::to_string(&iv).unwrap();
        let back: IntervalReal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, iv);
    }
}
