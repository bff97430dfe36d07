//! Brute-force reference computations for the test suites.
//!
//! Everything here is deliberately naive: double loops, digit-by-digit
//! scans, and textbook recurrences that share no code with the main
//! library. The test suites compare the library's output against these.

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Floor square root for `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    n.sqrt()
}

/// All solutions of `x^2 - d y^2 = n` with `0 <= y <= y_cap`, `x >= 0`,
/// found by scanning every `y` and testing whether `n + d y^2` is a square.
/// Returned sorted by `(y, x)`.
pub fn naive_pell(d: u64, n: i64, y_cap: u64) -> Vec<(u128, u128)> {
    let mut out = Vec::new();
    for y in 0..=y_cap {
        let rhs = (n as i128) + (d as i128) * (y as i128) * (y as i128);
        if rhs < 0 {
            continue;
        }
        let r = isqrt_u128(rhs as u128);
        if r * r == rhs as u128 {
            out.push((r, y as u128));
        }
    }
    out.sort();
    out.sort_by_key(|&(x, y)| (y, x));
    out
}

/// All positive solutions of the simultaneous system
/// `x^2 - a y^2 = u`, `z^2 - b y^2 = v` with `1 <= y <= y_cap`,
/// by scanning `y` and testing both right-hand sides.
pub fn naive_system(a: u64, b: u64, u: i64, v: i64, y_cap: u64) -> Vec<(u128, u128, u128)> {
    let mut out = Vec::new();
    for y in 1..=y_cap {
        let yy = (y as i128) * (y as i128);
        let r1 = (u as i128) + (a as i128) * yy;
        let r2 = (v as i128) + (b as i128) * yy;
        if r1 <= 0 || r2 <= 0 {
            continue;
        }
        let x = isqrt_u128(r1 as u128);
        let z = isqrt_u128(r2 as u128);
        if x >= 1 && z >= 1 && x * x == r1 as u128 && z * z == r2 as u128 {
            out.push((x, y as u128, z));
        }
    }
    out
}

/// Smallest solution of `x^2 - d y^2 = +-1` with `y` in `1..=y_limit`,
/// scanning `y` upward. Returns `(x, y, norm)`.
pub fn minimal_unit_scan(d: u64, y_limit: u64) -> Option<(u128, u128, i8)> {
    for y in 1..=y_limit {
        let dy2 = (d as u128) * (y as u128) * (y as u128);
        // norm +1: x^2 = dy^2 + 1
        let x = isqrt_u128(dy2 + 1);
        if x * x == dy2 + 1 {
            return Some((x, y as u128, 1));
        }
        // norm -1: x^2 = dy^2 - 1
        if dy2 >= 1 {
            let x = isqrt_u128(dy2 - 1);
            if x * x == dy2 - 1 {
                return Some((x, y as u128, -1));
            }
        }
    }
    None
}

/// Fundamental solution of `x^2 - d y^2 = +-1` by the chakravala method.
///
/// Starting from `(p, q, k) = (a0, 1, a0^2 - d)` the method composes with
/// `(m, 1, m^2 - d)` where `m` is chosen with `p + q m ≡ 0 (mod |k|)`
/// minimizing `|m^2 - d|`. It terminates at `k = +-1` with the minimal
/// solution. Completely independent of continued fractions.
pub fn chakravala(d: u64) -> (BigUint, BigUint, i8) {
    let d_big = BigInt::from(d);
    let a0 = BigInt::from(isqrt_u128(d as u128));
    assert!(&a0 * &a0 != d_big, "d must be nonsquare");

    let mut p = a0.clone();
    let mut q = BigInt::one();
    let mut k = &p * &p - &d_big;
    loop {
        if k.is_one() {
            return (p.magnitude().clone(), q.magnitude().clone(), 1);
        }
        if (-&k).is_one() {
            return (p.magnitude().clone(), q.magnitude().clone(), -1);
        }
        let ka = k.abs();
        // m ≡ -p * q^{-1} (mod |k|); q and k are coprime in the method.
        let inv = mod_inverse(&q.mod_floor(&ka), &ka);
        let m0 = (&inv * (-&p)).mod_floor(&ka);
        // pick m ≡ m0 (mod |k|) minimizing |m^2 - d|
        let mut m = m0.clone();
        if m.is_zero() {
            m = ka.clone();
        }
        loop {
            let cand_next = &m + &ka;
            let here = (&m * &m - &d_big).abs();
            let next = (&cand_next * &cand_next - &d_big).abs();
            if next < here {
                m = cand_next;
            } else {
                break;
            }
        }
        let new_p = (&p * &m + &d_big * &q) / &ka;
        let new_q = (&p + &q * &m) / &ka;
        let new_k = (&m * &m - &d_big) / &k;
        p = new_p.abs();
        q = new_q.abs();
        k = new_k;
    }
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    let e = a.extended_gcd(modulus);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(modulus)
}

/// Partial quotients of `sqrt(d)` computed by iterating the continued
/// fraction map on a rational enclosure of the root. Emits terms while the
/// enclosure determines them unambiguously. No surd recurrence involved.
pub fn naive_sqrt_cf(d: u64, terms: usize) -> Vec<BigUint> {
    let prec: u32 = 4096;
    let scaled = BigUint::from(d) << (2 * prec as usize);
    let s = scaled.sqrt();
    // sqrt(d) in [s, s+1] / 2^prec
    let den = BigUint::one() << (prec as usize);
    let mut lo_n = BigInt::from(s.clone());
    let mut lo_d = BigInt::from(den.clone());
    let mut hi_n = BigInt::from(s + 1u32);
    let mut hi_d = BigInt::from(den);
    let mut out = Vec::new();
    for _ in 0..terms {
        let fl_lo = lo_n.div_floor(&lo_d);
        let fl_hi = hi_n.div_floor(&hi_d);
        if fl_lo != fl_hi {
            break; // enclosure too coarse to determine the next term
        }
        out.push(fl_lo.magnitude().clone());
        // x <- 1 / (x - a): new_lo = 1/(hi - a), new_hi = 1/(lo - a)
        let a = fl_lo;
        let rl_n = &hi_n - &a * &hi_d;
        let rh_n = &lo_n - &a * &lo_d;
        if rl_n.is_zero() || rh_n.is_zero() {
            break;
        }
        let (nlo_n, nlo_d) = (hi_d.clone(), rl_n);
        let (nhi_n, nhi_d) = (lo_d.clone(), rh_n);
        lo_n = nlo_n;
        lo_d = nlo_d;
        hi_n = nhi_n;
        hi_d = nhi_d;
    }
    out
}

/// `||q * sqrt(a)||` squared comparison oracle: returns the nearest integer
/// to `q * sqrt(a)` using only integer arithmetic.
pub fn nearest_int_to_q_sqrt(q: u64, a: u64) -> u128 {
    let t = (a as u128) * (q as u128) * (q as u128);
    let f = isqrt_u128(t);
    // nearest is f or f+1: compare 4t against (2f+1)^2
    let lhs = 4 * t;
    let rhs = (2 * f + 1) * (2 * f + 1);
    if lhs < rhs {
        f
    } else {
        f + 1
    }
}

/// f64 estimate of `||q * sqrt(a)||`, for loose cross-checks only.
pub fn dist_estimate(q: u64, a: u64) -> f64 {
    let v = (q as f64) * (a as f64).sqrt();
    (v - v.round()).abs()
}

/// Nearest-integer distance of `q*sqrt(a)` as an exact rational enclosure
/// numerator over `2^prec`, via big integer square roots.
pub fn dist_enclosure_2adic(q: u64, a: u64, prec: u32) -> (BigUint, BigUint) {
    let scaled = (BigUint::from(a) * BigUint::from(q) * BigUint::from(q)) << (2 * prec as usize);
    let s = scaled.sqrt();
    // q*sqrt(a) in [s, s+1]/2^prec
    let near = nearest_int_to_q_sqrt(q, a);
    let near_scaled = BigUint::from(near) << (prec as usize);
    let lo = if s.clone() >= near_scaled {
        &s - &near_scaled
    } else {
        &near_scaled - (&s + 1u32)
    };
    let hi = if s >= near_scaled {
        &s + 1u32 - &near_scaled
    } else {
        &near_scaled - &s
    };
    (lo, hi)
}

/// Convert a `BigUint` to f64 scaled by `2^-prec` (saturating).
pub fn scaled_to_f64(n: &BigUint, prec: u32) -> f64 {
    n.to_f64().map(|v| v / 2f64.powi(prec as i32)).unwrap_or(f64::INFINITY)
}
