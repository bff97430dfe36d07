//! Evaluators for the explicit effective estimates: the Waldschmidt-style
//! lower bound for linear forms in logarithms, and the Bombieri-style
//! height bound for units in a finitely generated group.

use crate::error::{Error, Result};
use crate::interval::IntervalReal;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// `log* x = max(1, log x)`.
pub fn log_star(x: &IntervalReal) -> Result<IntervalReal> {
    if !x.is_strictly_positive() {
        return Err(Error::NonPositiveLog);
    }
    let one = IntervalReal::from_int(1, x.bits());
    Ok(x.ln()?.max_i(&one))
}

/// Instance data for the linear-form lower bound: `n` logarithms over a
/// field of degree `D`, with certified `log A_j` majorants and integer
/// coefficients `b_j` (the last one nonzero).
#[derive(Debug, Clone, Serialize)]
pub struct LinFormInstance {
    pub degree: u32,
    pub log_a: Vec<IntervalReal>,
    pub coeffs: Vec<String>,
    #[serde(skip)]
    pub coeffs_int: Vec<BigInt>,
    pub bprime: IntervalReal,
}

impl LinFormInstance {
    pub fn new(
        degree: u32,
        log_a: Vec<IntervalReal>,
        coeffs: Vec<BigInt>,
        bprime: IntervalReal,
    ) -> Result<LinFormInstance> {
        let n = log_a.len();
        if n == 0 || coeffs.len() != n {
            return Err(Error::InvalidArgument("need n >= 1 logarithms with n coefficients".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::ZeroValue("last coefficient b_n".into()));
        }
        // hypothesis log A_j >= 1/D, certified on the lower endpoint
        let d_big = BigInt::from(degree);
        for (j, la) in log_a.iter().enumerate() {
            if la.lo().cmp_ratio(&BigInt::one(), &d_big).is_lt() {
                return Err(Error::InvalidArgument(format!(
                    "log A_{} below 1/D: not an admissible majorant",
                    j + 1
                )));
            }
        }
        // B' >= 3D, certified; and B' must be consistent with its formula
        let three_d = IntervalReal::from_int(3 * degree as i64, bprime.bits());
        if bprime.certainly_lt(&three_d) || bprime.lo().cmp_ratio(&BigInt::from(3 * degree as i64), &BigInt::one()).is_lt()
        {
            return Err(Error::InvalidArgument("B' below 3D".into()));
        }
        let formula = bprime_of(&coeffs, &log_a, degree)?;
        if bprime.certainly_lt(&formula) {
            return Err(Error::InvalidArgument("B' below its defining maximum".into()));
        }
        let coeffs_str = coeffs.iter().map(|b| b.to_string()).collect();
        Ok(LinFormInstance { degree, log_a, coeffs: coeffs_str, coeffs_int: coeffs, bprime })
    }

    pub fn n(&self) -> usize {
        self.log_a.len()
    }
}

/// Smallest admissible `B'`:
/// `max(3D, max_{1<=j<=n-1} (|b_n|/log A_j + |b_j|/log A_n))`.
pub fn bprime_of(coeffs: &[BigInt], log_a: &[IntervalReal], degree: u32) -> Result<IntervalReal> {
    let n = log_a.len();
    if n == 0 || coeffs.len() != n {
        return Err(Error::InvalidArgument("need n >= 1 logarithms with n coefficients".into()));
    }
    let bits = log_a.iter().map(|iv| iv.bits()).max().unwrap();
    let mut best = IntervalReal::from_int(3 * degree as i64, bits);
    let bn_abs = coeffs[n - 1].abs();
    let la_n = &log_a[n - 1];
    for j in 0..n.saturating_sub(1) {
        let term = IntervalReal::from_int(bn_abs.clone(), bits)
            .div(&log_a[j])?
            .add(&IntervalReal::from_int(coeffs[j].abs(), bits).div(la_n)?);
        best = best.max_i(&term);
    }
    Ok(best)
}

/// The magnitude `M` such that `log |b_1 log a_1 + ... + b_n log a_n| >= -M`
/// whenever the form is nonzero:
/// `M = 2^(n+26) n^(3n+9) D^(n+2) log(3D) (prod log A_j) log B'`.
pub fn thm21_lower_bound(inst: &LinFormInstance) -> Result<IntervalReal> {
    let n = inst.n() as u32;
    let d = inst.degree;
    let bits = inst.log_a.iter().map(|iv| iv.bits()).max().unwrap().max(inst.bprime.bits());
    let k = (BigInt::one() << (n + 26))
        * BigInt::from(n).pow(3 * n + 9)
        * BigInt::from(d).pow(n + 2);
    let mut m = IntervalReal::from_int(k, bits);
    m = m.mul(&IntervalReal::from_int(3 * d as i64, bits).ln()?);
    for la in &inst.log_a {
        m = m.mul(la);
    }
    m = m.mul(&inst.bprime.ln()?);
    Ok(m)
}

/// Instance data for the Bombieri-style bound: a real field of degree `d`,
/// a group with `t` generators of the given heights, the target `A`, and
/// the gap parameter `kappa` in (0, 1].
#[derive(Debug, Clone, Serialize)]
pub struct BombieriInstance {
    pub degree: u32,
    /// kappa as an exact fraction.
    pub kappa_num: String,
    pub kappa_den: String,
    #[serde(skip)]
    pub kappa: (BigInt, BigInt),
    pub gen_heights: Vec<IntervalReal>,
    pub h_a: IntervalReal,
}

impl BombieriInstance {
    pub fn new(
        degree: u32,
        kappa: (BigInt, BigInt),
        gen_heights: Vec<IntervalReal>,
        h_a: IntervalReal,
    ) -> Result<BombieriInstance> {
        let (kn, kd) = &kappa;
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if !kn.is_positive() || !kd.is_positive() || kn > kd {
            return Err(Error::InvalidArgument("kappa must satisfy 0 < kappa <= 1".into()));
        }
        if gen_heights.is_empty() {
            return Err(Error::InvalidArgument("need at least one generator".into()));
        }
        for h in &gen_heights {
            if h.lo().is_negative() {
                return Err(Error::InvalidArgument("generator heights must be nonnegative".into()));
            }
        }
        if h_a.lo().is_negative() {
            return Err(Error::InvalidArgument("h(A) must be nonnegative".into()));
        }
        Ok(BombieriInstance {
            degree,
            kappa_num: kn.to_string(),
            kappa_den: kd.to_string(),
            kappa,
            gen_heights,
            h_a,
        })
    }

    pub fn t(&self) -> usize {
        self.gen_heights.len()
    }
}

/// Output of the Bombieri-style evaluation, with the intermediate
/// quantities exposed for inspection.
#[derive(Debug, Clone, Serialize)]
pub struct Thm22Bound {
    /// `C = 4*10^19 d^4 (log 3d)^7 / kappa * log*(d/kappa)`.
    pub c: IntervalReal,
    /// `Q = (2 t C)^t prod h(xi_i)`.
    pub q: IntervalReal,
    /// `10 Q max(h(A), Q)`.
    pub bound: IntervalReal,
}

/// The constant `C = 4*10^19 d^4 (log 3d)^7 / kappa * log*(d/kappa)`.
pub fn thm22_c(degree: u32, kappa: &(BigInt, BigInt), bits: u32) -> Result<IntervalReal> {
    let (kn, kd) = kappa;
    let lead = BigInt::from(4) * BigInt::from(10).pow(19) * BigInt::from(degree).pow(4);
    let ln3d = IntervalReal::from_int(3 * degree as i64, bits).ln()?;
    let inv_kappa = IntervalReal::from_ratio(kd, kn, bits)?;
    let d_over_kappa = IntervalReal::from_ratio(&(BigInt::from(degree) * kd), kn, bits)?;
    Ok(IntervalReal::from_int(lead, bits)
        .mul(&ln3d.pow_u32(7))
        .mul(&inv_kappa)
        .mul(&log_star(&d_over_kappa)?))
}

/// Evaluate the height bound `h(xi) <= 10 Q max(h(A), Q)`.
pub fn thm22_height_bound(inst: &BombieriInstance) -> Result<Thm22Bound> {
    let bits = inst
        .gen_heights
        .iter()
        .map(|iv| iv.bits())
        .max()
        .unwrap()
        .max(inst.h_a.bits());
    let c = thm22_c(inst.degree, &inst.kappa, bits)?;

    let t = inst.t() as u32;
    let mut q = c.mul_int(&BigInt::from(2 * t)).pow_u32(t);
    for h in &inst.gen_heights {
        q = q.mul(h);
    }
    let bound = q.mul(&inst.h_a.max_i(&q)).mul_int(&BigInt::from(10));
    Ok(Thm22Bound { c, q, bound })
}
