//! Arbitrary-precision dyadic numbers `mant * 2^exp`.
//!
//! Addition, subtraction and multiplication are exact; division and
//! rounding are directed. These are the endpoints of every interval in the
//! crate, so directed operations must never round toward the true value.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction for endpoint arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward minus infinity.
    Down,
    /// Toward plus infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant * 2^exp`, normalized so that `mant` is odd or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        Dyadic { mant, exp }.normalize()
    }

    fn normalize(mut self) -> Dyadic {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Exponent of the leading bit: `2^msb <= |v| < 2^(msb+1)`.
    pub fn msb(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact sum.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    /// Exact difference.
    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Exact product by 2^k.
    pub fn scale2(&self, k: i64) -> Dyadic {
        if self.mant.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// Keep at most `bits` significant bits, rounding in direction `dir`.
    pub fn round_dir(&self, bits: u32, dir: Round) -> Dyadic {
        let bits = bits.max(1) as u64;
        if self.mant.is_zero() {
            return self.clone();
        }
        let nb = self.mant.bits();
        if nb <= bits {
            return self.clone();
        }
        let shift = nb - bits;
        // BigInt shr rounds toward minus infinity.
        let m = match dir {
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Directed quotient `self / den` with `bits` significant bits.
    pub fn div_dir(&self, den: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let pos = self.is_positive() == den.is_positive();
        let na = self.mant.magnitude();
        let nb = den.mant.magnitude();
        let la = na.bits() as i64;
        let lb = nb.bits() as i64;
        let k = (bits as i64 + 2 + lb - la).max(0) as u64;
        let (q, r) = (na << k).div_rem(nb);
        let exact = r.is_zero();
        let e = self.exp - den.exp - k as i64;
        let mag = match (dir, pos) {
            (Round::Down, true) | (Round::Up, false) => q,
            (Round::Down, false) | (Round::Up, true) => {
                if exact {
                    q
                } else {
                    q + BigUint::one()
                }
            }
        };
        let m = BigInt::from_biguint(if pos { Sign::Plus } else { Sign::Minus }, mag);
        Dyadic::new(m, e).round_dir(bits, dir)
    }

    /// Largest integer <= value.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Compare against the rational `num/den` (`den > 0`) exactly.
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Ordering {
        assert!(den.is_positive());
        let lhs;
        let rhs;
        if self.exp >= 0 {
            lhs = (&self.mant * den) << self.exp as u64;
            rhs = num.clone();
        } else {
            lhs = &self.mant * den;
            rhs = num << (-self.exp) as u64;
        }
        lhs.cmp(&rhs)
    }

    /// Exact decimal representation. Dyadics are always finite decimals.
    pub fn to_decimal(&self) -> String {
        if self.mant.is_zero() {
            return "0".to_owned();
        }
        let neg = self.mant.is_negative();
        let body = if self.exp >= 0 {
            (self.mant.magnitude() << self.exp as u64).to_string()
        } else {
            let k = (-self.exp) as usize;
            let scaled = self.mant.magnitude() * BigUint::from(5u32).pow(k as u32);
            let mut s = scaled.to_string();
            if s.len() <= k {
                let pad = k + 1 - s.len();
                s = format!("{}{}", "0".repeat(pad), s);
            }
            let cut = s.len() - k;
            let (int_part, frac_part) = s.split_at(cut);
            let frac_part = frac_part.trim_end_matches('0');
            if frac_part.is_empty() {
                int_part.to_owned()
            } else {
                format!("{int_part}.{frac_part}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Parse an exact plain decimal (as produced by `to_decimal`).
    pub fn from_decimal(s: &str) -> Option<Dyadic> {
        let s = s.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigUint = format!("{int_part}{frac_part}").parse().ok()?;
        let f = frac_part.len();
        let p5 = BigUint::from(5u32).pow(f as u32);
        let (q, r) = digits.div_rem(&p5);
        if !r.is_zero() {
            return None; // not an exact dyadic
        }
        let m = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q);
        Some(Dyadic::new(m, -(f as i64)))
    }

    /// Decimal string with at most `sig` significant digits, rounded in
    /// direction `dir`. Scientific notation for very large or small values.
    pub fn to_decimal_round(&self, sig: usize, dir: Round) -> String {
        if self.mant.is_zero() {
            return "0".to_owned();
        }
        let sig = sig.max(1);
        let exact = self.to_decimal();
        let neg = exact.starts_with('-');
        let body = exact.trim_start_matches('-');
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i.to_owned(), f.to_owned()),
            None => (body.to_owned(), String::new()),
        };
        // digits with exponent of the first significant digit
        let all: String = format!("{int_part}{frac_part}");
        let first_sig = all.find(|c| c != '0').unwrap();
        let digits: String = all[first_sig..].to_owned();
        let dec_exp = int_part.len() as i64 - first_sig as i64 - 1;
        let (mut kept, rest) = if digits.len() <= sig {
            (digits.clone(), "")
        } else {
            (digits[..sig].to_owned(), digits[sig..].trim_end_matches('0'))
        };
        let mut dec_exp = dec_exp;
        let round_away = !rest.is_empty()
            && match dir {
                Round::Up => !neg,
                Round::Down => neg,
            };
        if round_away {
            // increment the kept digit string
            let mut v: BigUint = kept.parse().unwrap();
            v += 1u32;
            let s = v.to_string();
            if s.len() > kept.len() {
                dec_exp += 1;
                kept = s[..s.len() - 1].to_owned();
            } else {
                kept = s;
            }
        }
        let kept = kept.trim_end_matches('0');
        let kept = if kept.is_empty() { "1" } else { kept };
        let sign = if neg { "-" } else { "" };
        if (-4..=20).contains(&dec_exp) {
            // plain notation
            let e = dec_exp;
            if e >= kept.len() as i64 - 1 {
                let zeros = e - (kept.len() as i64 - 1);
                format!("{sign}{kept}{}", "0".repeat(zeros as usize))
            } else if e >= 0 {
                let (i, f) = kept.split_at((e + 1) as usize);
                format!("{sign}{i}.{f}")
            } else {
                format!("{sign}0.{}{kept}", "0".repeat((-e - 1) as usize))
            }
        } else if kept.len() == 1 {
            format!("{sign}{kept}e{dec_exp}")
        } else {
            let (h, t) = kept.split_at(1);
            format!("{sign}{h}.{t}e{dec_exp}")
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a < b => return Ordering::Less,
            (a, b) if a > b => return Ordering::Greater,
            (0, 0) => return Ordering::Equal,
            _ => {}
        }
        self.sub(other).mant.sign().cmp(&Sign::NoSign)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}
