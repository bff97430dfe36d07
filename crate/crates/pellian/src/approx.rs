//! Exact empirical verification of simultaneous approximation
//! inequalities and effective irrationality exponent reports.
//!
//! Distances to the nearest integer are represented by their integer
//! square-root certificate `f = floor(sqrt(a q^2))` and compared by
//! squaring; the power inequality `dist > c q^{1-mu}` is decided first on
//! intervals and, if those straddle, by an exact integer-power
//! comparison, so no decision ever depends on precision luck.

use crate::bounds::log_star;
use crate::error::{Error, Result};
use crate::interval::IntervalReal;
use crate::quad::{check_radicand, compare_cross, is_square, QuadElement};
use crate::system::{thm21_route_constants, thm22_route_constant, BoundRoute, SymbolicFactor};
use crate::unit::{is_squarefree, regulator_check, totally_positive_unit_prec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;

/// Which of `f`, `f + 1` is the nearest integer to `q sqrt(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// nearest integer is `f`: distance `q sqrt(a) - f`
    Low,
    /// nearest integer is `f + 1`: distance `(f + 1) - q sqrt(a)`
    High,
}

/// `|| q sqrt(a) ||` held exactly: the certificate
/// `f^2 <= a q^2 < (f+1)^2` plus the side of the nearest integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestDistance {
    pub q: BigInt,
    pub radicand: BigInt,
    pub floor_sqrt: BigInt,
    pub side: Side,
}

impl Serialize for NearestDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NearestDistance", 4)?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("a", &self.radicand.to_string())?;
        st.serialize_field("floor_sqrt", &self.floor_sqrt.to_string())?;
        st.serialize_field("side", &self.side)?;
        st.end()
    }
}

/// Distance from `q sqrt(a)` to the nearest integer, exactly.
pub fn dist_nearest(q: &BigInt, a: &BigInt) -> Result<NearestDistance> {
    check_radicand(a)?;
    if q < &BigInt::one() {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let t = a * q * q;
    let f = t.sqrt();
    debug_assert!(&f * &f <= t && t < (&f + 1) * (&f + 1));
    // nearest is f iff 4 a q^2 < (2f + 1)^2 (equality impossible by parity)
    let side = if BigInt::from(4) * &t < (&f * 2 + 1) * (&f * 2 + 1) { Side::Low } else { Side::High };
    Ok(NearestDistance { q: q.clone(), radicand: a.clone(), floor_sqrt: f, side })
}

impl NearestDistance {
    /// The distance as a positive element of Z[sqrt(a)].
    pub fn as_element(&self) -> QuadElement {
        match self.side {
            Side::Low => QuadElement::new(-&self.floor_sqrt, self.q.clone(), self.radicand.clone()),
            Side::High => {
                QuadElement::new(&self.floor_sqrt + 1, -&self.q, self.radicand.clone())
            }
        }
        .expect("radicand validated at construction")
    }

    pub fn value_interval(&self, bits: u32) -> IntervalReal {
        self.as_element().to_interval(bits)
    }

    /// Exact comparison with a positive rational `num/den`.
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Ordering> {
        let e = self.as_element();
        let shifted = QuadElement::new(e.x() * den - num, e.y() * den, e.radicand().clone())?;
        Ok(match shifted.signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    /// Exact comparison with another distance (possibly over the other
    /// radicand; requires the product of radicands nonsquare then).
    pub fn cmp_dist(&self, other: &NearestDistance) -> Result<Ordering> {
        compare_cross(&self.as_element(), &other.as_element())
    }
}

fn validate_pair(a: &BigInt, b: &BigInt) -> Result<()> {
    check_radicand(a)?;
    check_radicand(b)?;
    if is_square(&(a * b)) {
        return Err(Error::InvalidArgument(format!("ab = {} is a perfect square", a * b)));
    }
    Ok(())
}

/// Scan-local precomputed data for the threshold decision
/// `dist^r q^(p-r) > c^r`.
struct ThresholdCheck {
    r_u32: u32,
    delta_u32: u32,
    c_pow_num: BigInt,
    c_pow_den: BigInt,
    /// `c^r < 2^(rhs_msb_hi + 1)` and `c^r >= 2^rhs_msb_lo`
    rhs_msb_lo: i64,
    rhs_msb_hi: i64,
}

impl ThresholdCheck {
    fn new(c: &(BigInt, BigInt), mu: &(BigInt, BigInt)) -> Result<ThresholdCheck> {
        let (p, r) = mu;
        let delta = p - r; // mu > 1 so delta >= 1
        let r_u32: u32 = r
            .to_string()
            .parse()
            .map_err(|_| Error::InvalidArgument("mu denominator too large".into()))?;
        let delta_u32: u32 = delta
            .to_string()
            .parse()
            .map_err(|_| Error::InvalidArgument("mu numerator too large".into()))?;
        let c_pow_num = c.0.pow(r_u32);
        let c_pow_den = c.1.pow(r_u32);
        // 2^(bn-1) <= num < 2^bn, likewise den: num/den in (2^(bn-bd-1), 2^(bn-bd+1))
        let bn = c_pow_num.bits() as i64;
        let bd = c_pow_den.bits() as i64;
        Ok(ThresholdCheck {
            r_u32,
            delta_u32,
            c_pow_num,
            c_pow_den,
            rhs_msb_lo: bn - bd - 1,
            rhs_msb_hi: bn - bd + 1,
        })
    }

    /// Decide `dist^r q^delta > c^r`. A constant-time msb comparison
    /// settles all but hairline cases; those fall back to interval
    /// arithmetic and finally to an exact integer-power comparison, so the
    /// decision is always made.
    fn exceeds(
        &self,
        dist: &NearestDistance,
        dist_iv: &IntervalReal,
        exact_fallbacks: &mut u64,
    ) -> Result<bool> {
        let q_msb = dist.q.bits() as i64 - 1; // 2^q_msb <= q < 2^(q_msb+1)
        let r = self.r_u32 as i64;
        let delta = self.delta_u32 as i64;
        if let (Some(lo_msb), Some(hi_msb)) = (dist_iv.lo().msb(), dist_iv.hi().msb()) {
            // lhs >= 2^(r lo_msb + delta q_msb)
            if r * lo_msb + delta * q_msb > self.rhs_msb_hi {
                return Ok(true);
            }
            // lhs < 2^(r (hi_msb+1) + delta (q_msb+1))
            if r * (hi_msb + 1) + delta * (q_msb + 1) <= self.rhs_msb_lo {
                return Ok(false);
            }
        }
        let q_pow = dist.q.pow(self.delta_u32);
        for bits in [96u32, 224] {
            let lhs = dist.value_interval(bits).pow_u32(self.r_u32).mul_int(&q_pow);
            use Ordering::*;
            if lhs.lo().cmp_ratio(&self.c_pow_num, &self.c_pow_den) == Greater {
                return Ok(true);
            }
            let hi_cmp = lhs.hi().cmp_ratio(&self.c_pow_num, &self.c_pow_den);
            if hi_cmp == Less || hi_cmp == Equal {
                return Ok(false);
            }
        }
        // exact route: (dist element)^r * q^delta compared with c^r
        *exact_fallbacks += 1;
        let e = dist.as_element().pow(self.r_u32 as u64).mul_int(&q_pow);
        let shifted = QuadElement::new(
            e.x() * &self.c_pow_den - &self.c_pow_num,
            e.y() * &self.c_pow_den,
            e.radicand().clone(),
        )?;
        Ok(shifted.signum() > 0)
    }
}

/// Outcome of scanning `max(||q sqrt a||, ||q sqrt b||) > c q^(1-mu)`
/// over `1 <= q <= q_max`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub q_max: u64,
    /// Violating q values (at most the first 32).
    pub violations: Vec<u64>,
    pub n_violations: u64,
    /// The q with the smallest margin `dist^r q^(p-r) / c^r`.
    pub worst_q: u64,
    pub worst_margin: IntervalReal,
    /// How many decisions needed the exact integer-power fallback.
    pub exact_fallbacks: u64,
}

/// Check the simultaneous inequality for every `1 <= q <= q_max`. Every
/// decision is exact; the scan never skips and never guesses.
pub fn verify_inequality(
    a: &BigInt,
    b: &BigInt,
    c: &(BigInt, BigInt),
    mu: &(BigInt, BigInt),
    q_max: u64,
) -> Result<VerifyReport> {
    validate_pair(a, b)?;
    if !c.0.is_positive() || !c.1.is_positive() {
        return Err(Error::InvalidArgument("c must be a positive rational".into()));
    }
    if !mu.1.is_positive() || mu.0 <= mu.1 {
        return Err(Error::InvalidArgument("mu must exceed 1".into()));
    }
    if q_max < 1 {
        return Err(Error::InvalidArgument("q_max must be at least 1".into()));
    }

    let check = ThresholdCheck::new(c, mu)?;
    // shared root enclosures: the per-q distance interval is then one
    // exact scaling plus a subtraction
    let root_bits = 96u32;
    let root_a = IntervalReal::sqrt_int(a, root_bits + 40)?;
    let root_b = IntervalReal::sqrt_int(b, root_bits + 40)?;

    let mut violations = Vec::new();
    let mut n_violations = 0u64;
    let mut exact_fallbacks = 0u64;
    // track the q with the smallest margin; candidates are prefiltered by
    // an msb bound so the precise interval is computed rarely
    let mut worst: Option<(u64, i64, IntervalReal)> = None;
    let margin_bits = 160u32;
    let r_i64 = check.r_u32 as i64;
    let delta_i64 = check.delta_u32 as i64;

    for q in 1..=q_max {
        let qb = BigInt::from(q);
        let da = dist_nearest(&qb, a)?;
        let db = dist_nearest(&qb, b)?;
        let da_iv = dist_interval(&da, &root_a);
        let db_iv = dist_interval(&db, &root_b);
        let ok = check.exceeds(&da, &da_iv, &mut exact_fallbacks)?
            || check.exceeds(&db, &db_iv, &mut exact_fallbacks)?;
        if !ok {
            n_violations += 1;
            if violations.len() < 32 {
                violations.push(q);
            }
        }
        // margin of the larger distance, for the worst-q report
        let (dmax, dmax_iv) =
            if da.cmp_dist(&db)? == Ordering::Less { (&db, &db_iv) } else { (&da, &da_iv) };
        let q_msb = qb.bits() as i64 - 1;
        let margin_msb_lo = dmax_iv.lo().msb().map(|m| r_i64 * m + delta_i64 * q_msb);
        let could_improve = match (&worst, margin_msb_lo) {
            (Some((_, w_msb_hi, _)), Some(lo)) => lo <= *w_msb_hi,
            _ => true,
        };
        if could_improve {
            let q_pow = qb.pow(check.delta_u32);
            let margin = dmax
                .value_interval(margin_bits)
                .pow_u32(check.r_u32)
                .mul_int(&q_pow)
                .mul_int(&check.c_pow_den)
                .div(&IntervalReal::from_int(check.c_pow_num.clone(), margin_bits))?;
            let msb_hi = margin.hi().msb().unwrap_or(i64::MAX);
            // translate to the c-free msb scale used by the filter, with
            // slack so the filter can only over-admit, never over-skip
            let c_msb_shift = check.rhs_msb_hi + 2;
            worst = Some(match worst {
                None => (q, msb_hi + c_msb_shift, margin),
                Some((wq, w_msb_hi, wm)) => {
                    if margin.certainly_lt(&wm) {
                        (q, msb_hi + c_msb_shift, margin)
                    } else {
                        (wq, w_msb_hi, wm)
                    }
                }
            });
        }
    }
    let (worst_q, _, worst_margin) = worst.expect("q_max >= 1");
    Ok(VerifyReport {
        pass: n_violations == 0,
        q_max,
        violations,
        n_violations,
        worst_q,
        worst_margin,
        exact_fallbacks,
    })
}

/// Distance enclosure from a shared root enclosure: exact scaling by q
/// and shift by the certified nearest integer.
fn dist_interval(dist: &NearestDistance, root: &IntervalReal) -> IntervalReal {
    let scaled = root.mul_int(&dist.q);
    match dist.side {
        Side::Low => scaled.sub(&IntervalReal::from_int(dist.floor_sqrt.clone(), root.bits())),
        Side::High => {
            IntervalReal::from_int(&dist.floor_sqrt + 1, root.bits()).sub(&scaled)
        }
    }
}

/// A record denominator: a new minimum of `max(||q sqrt a||, ||q sqrt b||)`.
#[derive(Debug, Clone, Serialize)]
pub struct ApproxRecord {
    pub q: String,
    pub dist_a: NearestDistance,
    pub dist_b: NearestDistance,
    /// Which distance realizes the maximum.
    pub max_is_a: bool,
    /// `-log(max dist) / log q`, absent at q = 1.
    pub local_exponent: Option<IntervalReal>,
}

/// All q achieving a new minimum of the larger distance, with exact
/// record comparisons throughout.
pub fn best_records(a: &BigInt, b: &BigInt, q_max: u64) -> Result<Vec<ApproxRecord>> {
    validate_pair(a, b)?;
    if q_max < 1 {
        return Err(Error::InvalidArgument("q_max must be at least 1".into()));
    }
    let bits = 128u32;
    let mut out: Vec<ApproxRecord> = Vec::new();
    let mut best: Option<NearestDistance> = None;
    for q in 1..=q_max {
        let qb = BigInt::from(q);
        let da = dist_nearest(&qb, a)?;
        let db = dist_nearest(&qb, b)?;
        let (dmax, max_is_a) =
            if da.cmp_dist(&db)? == Ordering::Less { (db.clone(), false) } else { (da.clone(), true) };
        let improved = match &best {
            None => true,
            Some(prev) => dmax.cmp_dist(prev)? == Ordering::Less,
        };
        if improved {
            let local_exponent = if q >= 2 {
                let lnq = IntervalReal::from_int(qb.clone(), bits).ln()?;
                Some(dmax.value_interval(bits).ln()?.neg().div(&lnq)?)
            } else {
                None
            };
            out.push(ApproxRecord {
                q: q.to_string(),
                dist_a: da,
                dist_b: db,
                max_is_a,
                local_exponent,
            });
            best = Some(dmax);
        }
    }
    Ok(out)
}

/// Effective simultaneous irrationality exponent report for a pair
/// `(sqrt a, sqrt b)`: `max(||q sqrt a||, ||q sqrt b||) > q^(-1 + tau)`
/// for all `q` beyond an explicit threshold.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub a: String,
    pub b: String,
    pub route: BoundRoute,
    /// `tau = 1 / (2 c_route (log eps)(log eta) [log* factor])`.
    pub tau: IntervalReal,
    pub mu_eff_upper: IntervalReal,
    /// The instantiated constant `2 c_route` in tau's denominator.
    pub tau_constant: IntervalReal,
    /// `(log eps)(log eta)`.
    pub regulator_product: IntervalReal,
    /// `log10` of the threshold beyond which the inequality is certified.
    pub threshold_log10: IntervalReal,
    /// The same exponent with each `log` of a unit replaced by twice the
    /// classical regulator bound `sqrt(D)(1 + log sqrt D)`.
    pub tau_sqrtab_form: IntervalReal,
    pub mu_eff_upper_sqrtab_form: IntervalReal,
    /// True when both radicands are squarefree and 2 or 3 mod 4, so the
    /// regulator bound behind the sqrt(ab) form is verified, making the
    /// two-form ordering a certified inequality.
    pub sqrtab_form_certified: bool,
    pub has_log_star_factor: bool,
    pub exponent_factors: Vec<SymbolicFactor>,
}

const EXP_BITS: u32 = 320;

pub fn exponent_report(a: &BigInt, b: &BigInt, route: BoundRoute) -> Result<ExponentReport> {
    validate_pair(a, b)?;
    let bits = EXP_BITS;
    let eps = totally_positive_unit_prec(a, bits)?;
    let eta = totally_positive_unit_prec(b, bits)?;
    let log_eps = eps.regulator_at(bits)?;
    let log_eta = eta.regulator_at(bits)?;
    let regulator_product = log_eps.mul(&log_eta);

    let (c_route, log_star_factor, factors) = route_pieces(route, &log_eps, &log_eta, bits)?;
    let exponent = match &log_star_factor {
        Some(ls) => c_route.mul(&regulator_product).mul(ls),
        None => c_route.mul(&regulator_product),
    };
    let tau_constant = c_route.scale2(1);
    let tau = exponent.scale2(1).recip()?;
    let two = IntervalReal::from_int(2, bits);
    let mu_eff_upper = two.sub(&tau);
    if !tau.is_strictly_positive() || !mu_eff_upper.hi().cmp_ratio(&BigInt::from(2), &BigInt::one()).is_lt() {
        return Err(Error::InvariantViolation("exponent report failed positivity".into()));
    }

    // threshold: q beyond max(C 2^e, (3 sqrt(ab) C^(1/e))^(2e)) suffices;
    // reported in decimal digits
    let psi = IntervalReal::from_int(a * b, bits)
        .ln()?
        .max_i(&log_eps.scale2(1))
        .max_i(&log_eta.scale2(1));
    let log_c = exponent.mul(&psi);
    let ln2 = IntervalReal::ln2(bits);
    let ln_3sqrt_ab = IntervalReal::from_int(9 * a * b, bits).ln()?.scale2(-1);
    let t1 = log_c.add(&exponent.mul(&ln2));
    let t2 = exponent.scale2(1).mul(&ln_3sqrt_ab).add(&log_c.scale2(1));
    let ln10 = IntervalReal::from_int(10, bits).ln()?;
    let threshold_log10 = t1.max_i(&t2).div(&ln10)?;

    // the sqrt(ab)-form: log of each unit replaced by 2 sqrt(D)(1 + log sqrt D)
    let bound_a = regulator_rhs(a, bits)?.scale2(1);
    let bound_b = regulator_rhs(b, bits)?.scale2(1);
    let product_form = bound_a.mul(&bound_b);
    let exponent_sqrtab = match &log_star_factor {
        Some(_) => {
            let ls = log_star(&bound_a.max_i(&bound_b))?;
            c_route.mul(&product_form).mul(&ls)
        }
        None => c_route.mul(&product_form),
    };
    let tau_sqrtab_form = exponent_sqrtab.scale2(1).recip()?;
    let mu_eff_upper_sqrtab_form = two.sub(&tau_sqrtab_form);

    let sqrtab_form_certified = both_regulator_checked(a, b)?;
    if sqrtab_form_certified {
        // log eps < 2 sqrt(a)(1 + log sqrt a) is then verified, so the
        // sqrt(ab)-form denominator dominates and its tau is smaller
        if tau_sqrtab_form.lo() > tau.hi() {
            return Err(Error::InvariantViolation(
                "sqrt(ab)-form exponent fails to dominate the regulator form".into(),
            ));
        }
    }

    Ok(ExponentReport {
        a: a.to_string(),
        b: b.to_string(),
        route,
        tau,
        mu_eff_upper,
        tau_constant,
        regulator_product,
        threshold_log10,
        tau_sqrtab_form,
        mu_eff_upper_sqrtab_form,
        sqrtab_form_certified,
        has_log_star_factor: log_star_factor.is_some(),
        exponent_factors: factors,
    })
}

fn route_pieces(
    route: BoundRoute,
    log_eps: &IntervalReal,
    log_eta: &IntervalReal,
    bits: u32,
) -> Result<(IntervalReal, Option<IntervalReal>, Vec<SymbolicFactor>)> {
    match route {
        BoundRoute::Thm21 => {
            let (_, c6) = thm21_route_constants(bits)?;
            let ls = log_star(&log_eps.max_i(log_eta))?;
            let factors = vec![
                SymbolicFactor { name: "c6".into(), value: c6.clone() },
                SymbolicFactor { name: "log_eps".into(), value: log_eps.clone() },
                SymbolicFactor { name: "log_eta".into(), value: log_eta.clone() },
                SymbolicFactor { name: "log_star_max_log_unit".into(), value: ls.clone() },
            ];
            Ok((c6, Some(ls), factors))
        }
        BoundRoute::Thm22 => {
            let c7 = thm22_route_constant(bits)?;
            let factors = vec![
                SymbolicFactor { name: "c7".into(), value: c7.clone() },
                SymbolicFactor { name: "log_eps".into(), value: log_eps.clone() },
                SymbolicFactor { name: "log_eta".into(), value: log_eta.clone() },
            ];
            Ok((c7, None, factors))
        }
    }
}

/// Right-hand side of the classical regulator bound:
/// `sqrt(D)(1 + log sqrt D)`.
fn regulator_rhs(d: &BigInt, bits: u32) -> Result<IntervalReal> {
    let sd = IntervalReal::sqrt_int(d, bits)?;
    let lnd = IntervalReal::from_int(d.clone(), bits).ln()?;
    Ok(sd.add(&sd.mul(&lnd).scale2(-1)))
}

fn both_regulator_checked(a: &BigInt, b: &BigInt) -> Result<bool> {
    let four = BigInt::from(4);
    for d in [a, b] {
        let residue = d.mod_floor(&four);
        if residue != BigInt::from(2) && residue != BigInt::from(3) {
            return Ok(false);
        }
        if !is_squarefree(d)? {
            return Ok(false);
        }
    }
    // both eligible: run the actual check so "certified" means verified
    regulator_check(a)?;
    regulator_check(b)?;
    Ok(true)
}

/// Convenience wrapper used by scans: max distance at one q.
pub fn max_dist_at(a: &BigInt, b: &BigInt, q: u64) -> Result<NearestDistance> {
    let qb = BigInt::from(q);
    let da = dist_nearest(&qb, a)?;
    let db = dist_nearest(&qb, b)?;
    Ok(if da.cmp_dist(&db)? == Ordering::Less { db } else { da })
}
