//! Periodic continued fraction expansion of sqrt(D).
//!
//! Uses the exact integer recurrence on the surd state (P, Q):
//! `a_k = floor((a0 + P_k) / Q_k)`, `P_{k+1} = a_k Q_k - P_k`,
//! `Q_{k+1} = (D - P_{k+1}^2) / Q_k`. The period is detected by the return
//! of the (P, Q) state, which guarantees minimality.

use crate::error::Result;
use crate::quad::check_radicand;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// One full period of the continued fraction of sqrt(D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    /// Integer part of sqrt(D).
    pub a0: BigInt,
    /// The minimal period of partial quotients.
    pub period: Vec<BigInt>,
    /// The radicand.
    pub d: BigInt,
}

impl Serialize for CFExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CFExpansion", 3)?;
        st.serialize_field("a0", &self.a0.to_string())?;
        let period: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
        st.serialize_field("period", &period)?;
        st.serialize_field("D", &self.d.to_string())?;
        st.end()
    }
}

/// Expand sqrt(D) into its minimal-period continued fraction.
pub fn sqrt_cf(d: &BigInt) -> Result<CFExpansion> {
    check_radicand(d)?;
    let a0 = d.sqrt();
    let mut p = BigInt::from(0);
    let mut q = BigInt::from(1);
    let mut period = Vec::new();
    // first step leaves the purely periodic tail; record its state
    let mut state0 = None;
    loop {
        let a = (&a0 + &p).div_floor(&q);
        if state0.is_some() {
            period.push(a.clone());
        }
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
        match &state0 {
            None => state0 = Some((p.clone(), q.clone())),
            Some(s) => {
                if *s == (p.clone(), q.clone()) {
                    break;
                }
            }
        }
    }
    debug_assert!(!period.is_empty());
    debug_assert_eq!(*period.last().unwrap(), &a0 * 2);
    Ok(CFExpansion { a0, period, d: d.clone() })
}

impl CFExpansion {
    /// Convergent numerator/denominator at the end of one period:
    /// `p_{l-1} / q_{l-1}` for period length l, using the quotients
    /// `a0, period[0], ..., period[l-2]`.
    pub fn period_end_convergent(&self) -> (BigInt, BigInt) {
        let mut p_prev = BigInt::from(1);
        let mut p_cur = self.a0.clone();
        let mut q_prev = BigInt::from(0);
        let mut q_cur = BigInt::from(1);
        for a in &self.period[..self.period.len() - 1] {
            let p_next = a * &p_cur + &p_prev;
            let q_next = a * &q_cur + &q_prev;
            p_prev = p_cur;
            p_cur = p_next;
            q_prev = q_cur;
            q_cur = q_next;
        }
        (p_cur, q_cur)
    }
}
