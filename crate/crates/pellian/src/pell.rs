//! Complete solution theory for one generalized Pell equation
//! `x^2 - D y^2 = N`.
//!
//! Solution classes are represented by elements in the fundamental domain
//! of the totally positive unit action: `alpha >= |alpha^sigma|` and
//! `alpha eps^{-1} <= |alpha^sigma| eps`. Representatives are found by an
//! exhaustive, certifiably complete scan of `y` up to the bound implied by
//! `alpha <= eps sqrt|N|`; every nonnegative solution is then
//! `alpha eps^m` for exactly one representative and exponent.

use crate::error::{Error, Result};
use crate::interval::IntervalReal;
use crate::quad::{check_radicand, QuadElement};
use crate::unit::{totally_positive_unit, Unit};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;

/// A solution-class representative of `x^2 - D y^2 = N`.
#[derive(Debug, Clone)]
pub struct PellClassRep {
    /// The representative `alpha = x + y sqrt(D)`, nonnegative coordinates.
    pub alpha: QuadElement,
    /// The norm value N.
    pub n_value: BigInt,
    /// Totally positive unit defining the class window.
    pub unit: Unit,
    /// Position within the enumeration order of its equation.
    pub index: usize,
}

impl Serialize for PellClassRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PellClassRep", 3)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("N", &self.n_value.to_string())?;
        st.serialize_field("index", &self.index)?;
        st.end()
    }
}

/// One solution `x + y sqrt(D) = alpha eps^power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub class_index: usize,
    pub power: u64,
}

impl Serialize for GeneratedSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GeneratedSolution", 4)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.serialize_field("class_index", &self.class_index)?;
        st.serialize_field("power", &self.power)?;
        st.end()
    }
}

/// If `q = eps^m` for some `m >= 0`, return `m`. Requires `q >= 1`.
fn unit_power_of(q: &QuadElement, eps: &QuadElement) -> Option<u64> {
    let one = QuadElement::from_int(1, q.radicand()).expect("valid radicand");
    if *q == one {
        return Some(0);
    }
    let mut cur = eps.clone();
    let mut m = 1u64;
    loop {
        match cur.compare(q).expect("same field") {
            Ordering::Equal => return Some(m),
            Ordering::Greater => return None,
            Ordering::Less => {
                cur = cur.mul(eps).expect("same field");
                m += 1;
            }
        }
    }
}

/// `gamma / n` when both coordinates are divisible, else None.
fn div_coords(gamma: &QuadElement, n: &BigInt) -> Option<QuadElement> {
    let (qx, rx) = gamma.x().div_rem(n);
    let (qy, ry) = gamma.y().div_rem(n);
    if rx.is_zero() && ry.is_zero() {
        Some(QuadElement::new(qx, qy, gamma.radicand().clone()).expect("valid radicand"))
    } else {
        None
    }
}

/// True when `gamma` lies in the forward eps-orbit of `alpha`
/// (`gamma = alpha eps^m`, `m >= 0`). Exact.
fn in_orbit(gamma: &QuadElement, alpha: &QuadElement, eps: &QuadElement, n: &BigInt) -> bool {
    // gamma * conj(alpha) = N * eps^m
    let delta = gamma.mul(&alpha.conj()).expect("same field");
    match div_coords(&delta, n) {
        Some(q) => q.is_positive() && unit_power_of(&q, eps).is_some(),
        None => false,
    }
}

/// Exhaustively enumerate the solution-class representatives of
/// `x^2 - D y^2 = N` under the given totally positive unit. The returned
/// set is complete: every solution with `x, y >= 0` is `alpha eps^m` for
/// exactly one listed `alpha` and one `m >= 0`.
pub fn class_representatives(d: &BigInt, n: &BigInt, unit: &Unit) -> Result<Vec<PellClassRep>> {
    check_radicand(d)?;
    if n.is_zero() {
        return Err(Error::ZeroValue("Pell right-hand side N".into()));
    }
    if !unit.totally_positive || unit.element.radicand() != d {
        return Err(Error::InvalidArgument(
            "class enumeration needs the totally positive unit of Z[sqrt(D)]".into(),
        ));
    }
    let eps = &unit.element;
    let eps2 = eps.mul(eps)?;

    // y_max from alpha <= eps sqrt|N|, so y <= eps sqrt|N| / sqrt(D)
    let bits = 64;
    let bound = unit
        .element
        .to_interval(bits)
        .mul(&IntervalReal::sqrt_int(&n.abs(), bits)?)
        .div(&IntervalReal::sqrt_int(d, bits)?)?;
    let y_max = bound.hi().floor_int() + 2;

    let mut reps: Vec<PellClassRep> = Vec::new();
    let mut y = BigInt::zero();
    while y <= y_max {
        let r = n + d * &y * &y;
        if r.is_negative() {
            y += 1;
            continue;
        }
        let x = r.sqrt();
        if &x * &x != r {
            y += 1;
            continue;
        }
        let alpha = QuadElement::new(x, y.clone(), d.clone())?;
        y += 1;
        if alpha.is_zero() {
            continue;
        }
        debug_assert_eq!(alpha.norm(), *n);
        let conj_abs = alpha.conj().abs();
        // condition (3.2): alpha >= |alpha^sigma| and alpha <= |alpha^sigma| eps^2
        if alpha.compare(&conj_abs)? == Ordering::Less {
            continue;
        }
        if alpha.compare(&conj_abs.mul(&eps2)?)? == Ordering::Greater {
            continue;
        }
        if reps.iter().any(|r| in_orbit(&alpha, &r.alpha, eps, n)) {
            continue;
        }
        // alpha <= eps sqrt|N|, i.e. alpha^2 <= N eps^2, exactly
        let alpha2 = alpha.mul(&alpha)?;
        let cap = eps2.mul_int(&n.abs());
        if alpha2.compare(&cap)? == Ordering::Greater {
            return Err(Error::InvariantViolation(format!(
                "representative {alpha} escapes the class window"
            )));
        }
        let index = reps.len();
        reps.push(PellClassRep { alpha, n_value: n.clone(), unit: unit.clone(), index });
    }
    Ok(reps)
}

/// All solutions `alpha eps^m` of the representative's class with
/// `y <= y_cap`, in increasing y order.
pub fn generate_solutions(rep: &PellClassRep, y_cap: &BigInt) -> Vec<GeneratedSolution> {
    let eps = &rep.unit.element;
    let mut out = Vec::new();
    let mut gamma = rep.alpha.clone();
    let mut m = 0u64;
    while gamma.y() <= y_cap {
        debug_assert!(!gamma.x().is_negative() && !gamma.y().is_negative());
        out.push(GeneratedSolution {
            x: gamma.x().clone(),
            y: gamma.y().clone(),
            class_index: rep.index,
            power: m,
        });
        gamma = gamma.mul(eps).expect("same field");
        m += 1;
    }
    out
}

/// Complete solution list of `x^2 - D y^2 = N` with `0 <= y <= y_cap`,
/// `x >= 0`, as the union over all solution classes, sorted by y.
pub fn solve_pell_capped(d: &BigInt, n: &BigInt, y_cap: &BigInt) -> Result<Vec<GeneratedSolution>> {
    let unit = totally_positive_unit(d)?;
    let reps = class_representatives(d, n, &unit)?;
    let mut all = Vec::new();
    for rep in &reps {
        all.extend(generate_solutions(rep, y_cap));
    }
    all.sort_by(|a, b| (&a.y, &a.x).cmp(&(&b.y, &b.x)));
    // distinct classes cannot share a solution; a duplicate means a bug
    for w in all.windows(2) {
        if w[0].x == w[1].x && w[0].y == w[1].y {
            return Err(Error::InvariantViolation(format!(
                "solution ({}, {}) produced by two classes",
                w[0].x, w[0].y
            )));
        }
    }
    Ok(all)
}

/// Decompose a nonnegative solution as `alpha eps^m`: find the unique
/// (class index, power) pair among the given representatives.
pub fn decompose(reps: &[PellClassRep], x: &BigInt, y: &BigInt) -> Option<(usize, u64)> {
    let first = reps.first()?;
    let d = first.alpha.radicand();
    let gamma = QuadElement::new(x.clone(), y.clone(), d.clone()).ok()?;
    let mut found = None;
    for rep in reps {
        let delta = gamma.mul(&rep.alpha.conj()).ok()?;
        if let Some(q) = div_coords(&delta, &rep.n_value) {
            if q.is_positive() {
                if let Some(m) = unit_power_of(&q, &rep.unit.element) {
                    debug_assert!(found.is_none(), "two decompositions for ({x}, {y})");
                    found = Some((rep.index, m));
                }
            }
        }
    }
    found
}
