//! Property tests for the exact-arithmetic invariants: everything here
//! checks the library against algebra or against independent brute force,
//! never against itself.

use num_bigint::BigInt;
use pellian::approx::dist_nearest;
use pellian::pell::solve_pell_capped;
use pellian::quad::{compare_cross, is_square, QuadElement};
use pellian::{Dyadic, IntervalReal, QuadRational, Round};
use proptest::prelude::*;
use std::cmp::Ordering;

fn nonsquare_radicands() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13, 17, 19, 23, 46, 61, 94])
}

/// Exact comparison of an element against a dyadic endpoint.
fn element_vs_dyadic(e: &QuadElement, d: &Dyadic) -> Ordering {
    // compare e with mant * 2^exp: scale into integers
    let (num, den) = if d.exp() >= 0 {
        (d.mant() << d.exp() as u64, BigInt::from(1))
    } else {
        (d.mant().clone(), BigInt::from(1) << (-d.exp()) as u64)
    };
    let shifted = QuadElement::new(e.x() * &den - num, e.y() * &den, e.radicand().clone())
        .expect("valid radicand");
    match shifted.signum() {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    }
}

proptest! {
    #[test]
    fn norm_is_multiplicative(
        x1 in -1000i64..1000, y1 in -1000i64..1000,
        x2 in -1000i64..1000, y2 in -1000i64..1000,
        d in nonsquare_radicands(),
    ) {
        let a = QuadElement::new(x1, y1, d).unwrap();
        let b = QuadElement::new(x2, y2, d).unwrap();
        let prod = a.mul(&b).unwrap();
        prop_assert_eq!(prod.norm(), a.norm() * b.norm());
    }

    #[test]
    fn conjugation_is_involutive_and_multiplicative(
        x1 in -1000i64..1000, y1 in -1000i64..1000,
        x2 in -1000i64..1000, y2 in -1000i64..1000,
        d in nonsquare_radicands(),
    ) {
        let a = QuadElement::new(x1, y1, d).unwrap();
        let b = QuadElement::new(x2, y2, d).unwrap();
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().conj(), a.conj().mul(&b.conj()).unwrap());
    }

    /// to_interval always encloses the exact value, at every precision,
    /// witnessed by squaring-based comparisons against the endpoints.
    #[test]
    fn interval_encloses_exact_value(
        x in -100000i64..100000, y in -100000i64..100000,
        d in nonsquare_radicands(),
        bits in 16u32..300,
    ) {
        let e = QuadElement::new(x, y, d).unwrap();
        let iv = e.to_interval(bits);
        prop_assert_ne!(element_vs_dyadic(&e, iv.lo()), Ordering::Less);
        prop_assert_ne!(element_vs_dyadic(&e, iv.hi()), Ordering::Greater);
    }

    /// compare agrees with interval separation at sufficient precision.
    #[test]
    fn compare_consistent_with_intervals(
        x1 in -500i64..500, y1 in -500i64..500,
        x2 in -500i64..500, y2 in -500i64..500,
        d in nonsquare_radicands(),
    ) {
        let a = QuadElement::new(x1, y1, d).unwrap();
        let b = QuadElement::new(x2, y2, d).unwrap();
        let ord = a.compare(&b).unwrap();
        let ia = a.to_interval(160);
        let ib = b.to_interval(160);
        match ord {
            Ordering::Less => prop_assert!(ia.certainly_lt(&ib)),
            Ordering::Greater => prop_assert!(ib.certainly_lt(&ia)),
            Ordering::Equal => prop_assert_eq!((a.x(), a.y()), (b.x(), b.y())),
        }
    }

    /// cross-field comparison agrees with interval separation.
    #[test]
    fn cross_compare_consistent_with_intervals(
        x1 in -300i64..300, y1 in -300i64..300,
        x2 in -300i64..300, y2 in -300i64..300,
    ) {
        // radicands 2 and 3: product 6 nonsquare
        let a = QuadElement::new(x1, y1, 2).unwrap();
        let b = QuadElement::new(x2, y2, 3).unwrap();
        let ord = compare_cross(&a, &b).unwrap();
        let ia = a.to_interval(200);
        let ib = b.to_interval(200);
        match ord {
            Ordering::Less => prop_assert!(ia.lo() <= ib.hi()),
            Ordering::Greater => prop_assert!(ib.lo() <= ia.hi()),
            Ordering::Equal => {
                prop_assert!(y1 == 0 && y2 == 0 && x1 == x2);
            }
        }
        // strict separation check when intervals are disjoint
        if ia.certainly_lt(&ib) {
            prop_assert_eq!(ord, Ordering::Less);
        }
        if ib.certainly_lt(&ia) {
            prop_assert_eq!(ord, Ordering::Greater);
        }
    }

    /// interval arithmetic encloses exact rational arithmetic.
    #[test]
    fn interval_ops_enclose_rationals(
        p1 in -10000i64..10000, q1 in 1i64..10000,
        p2 in -10000i64..10000, q2 in 1i64..10000,
        bits in 24u32..200,
    ) {
        let r1 = IntervalReal::from_ratio(&BigInt::from(p1), &BigInt::from(q1), bits).unwrap();
        let r2 = IntervalReal::from_ratio(&BigInt::from(p2), &BigInt::from(q2), bits).unwrap();
        // p1/q1 + p2/q2 = (p1 q2 + p2 q1) / (q1 q2)
        let sum = r1.add(&r2);
        prop_assert!(sum.contains_ratio(&BigInt::from(p1 * q2 + p2 * q1), &BigInt::from(q1 * q2)));
        let prod = r1.mul(&r2);
        prop_assert!(prod.contains_ratio(&BigInt::from(p1 * p2), &BigInt::from(q1 * q2)));
        if p2 != 0 {
            let quot = r1.div(&r2);
            if let Ok(quot) = quot {
                let (num, den) = if p2 > 0 { (p1 * q2, q1 * p2) } else { (-p1 * q2, -q1 * p2) };
                prop_assert!(quot.contains_ratio(&BigInt::from(num), &BigInt::from(den)));
            }
        }
    }

    /// ln is a homomorphism: enclosures of ln(uv) and ln u + ln v overlap.
    #[test]
    fn ln_of_product_overlaps_sum(u in 1i64..100000, v in 1i64..100000) {
        let lu = IntervalReal::from_int(u, 128).ln().unwrap();
        let lv = IntervalReal::from_int(v, 128).ln().unwrap();
        let luv = IntervalReal::from_int(u as i128 * v as i128, 128).ln().unwrap();
        prop_assert!(luv.intersect(&lu.add(&lv)).is_some());
    }

    /// sqrt enclosures square back onto the argument.
    #[test]
    fn sqrt_squares_back(n in 1i64..1000000, bits in 32u32..200) {
        let s = IntervalReal::sqrt_int(&BigInt::from(n), bits).unwrap();
        let sq = s.mul(&s);
        prop_assert!(sq.contains_ratio(&BigInt::from(n), &BigInt::from(1)));
    }

    /// directed decimal rounding brackets the value.
    #[test]
    fn decimal_rounding_brackets(m in -1_000_000_000i64..1_000_000_000, e in -70i64..20, sig in 1usize..20) {
        let d = Dyadic::new(BigInt::from(m), e);
        let lo = Dyadic::from_decimal(&d.to_decimal_round(sig, Round::Down));
        let hi = Dyadic::from_decimal(&d.to_decimal_round(sig, Round::Up));
        // rounded strings are plain decimals unless they went scientific
        if let (Some(lo), Some(hi)) = (lo, hi) {
            prop_assert!(lo <= d && d <= hi);
        }
    }

    /// serde round trips are lossless.
    #[test]
    fn serde_round_trips(x in -100000i64..100000, y in -100000i64..100000, d in nonsquare_radicands()) {
        let e = QuadElement::new(x, y, d).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        let back: QuadElement = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, e.clone());

        let iv = e.to_interval(96);
        let json = serde_json::to_string(&iv).unwrap();
        let back: IntervalReal = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, iv);
    }

    /// height is invariant under conjugation and negation.
    #[test]
    fn height_symmetries(x in -200i64..200, y in 1i64..200, den in 1i64..50, d in nonsquare_radicands()) {
        let e = QuadElement::new(x, y, d).unwrap();
        let r = QuadRational::new(e.clone(), BigInt::from(den)).unwrap();
        let rc = QuadRational::new(e.conj(), BigInt::from(den)).unwrap();
        let rn = QuadRational::new(e.neg(), BigInt::from(den)).unwrap();
        let h = pellian::height::weil_height_quad(&r, 96).unwrap();
        let hc = pellian::height::weil_height_quad(&rc, 96).unwrap();
        let hn = pellian::height::weil_height_quad(&rn, 96).unwrap();
        prop_assert!(h.intersect(&hc).is_some());
        prop_assert!(h.intersect(&hn).is_some());
    }
}

#[test]
fn pell_solver_matches_oracle_grid() {
    // modest grid here; the acceptance suite runs the full one
    for d in 2i64..=20 {
        if is_square(&BigInt::from(d)) {
            continue;
        }
        for n in -20i64..=20 {
            if n == 0 {
                continue;
            }
            let got = solve_pell_capped(&BigInt::from(d), &BigInt::from(n), &BigInt::from(300))
                .unwrap();
            let got: Vec<(u128, u128)> = got
                .iter()
                .map(|s| (s.x.to_string().parse().unwrap(), s.y.to_string().parse().unwrap()))
                .collect();
            let want = pell_oracles::naive_pell(d as u64, n, 300);
            assert_eq!(got, want, "d={d} n={n}");
        }
    }
}

#[test]
fn conjugation_symmetry_of_solutions() {
    // (x, y) solves iff (x, -y) does: nonnegative-y generation plus
    // canonicalization loses nothing relative to a signed oracle
    for (d, n) in [(2i64, 7i64), (3, -2), (5, 4), (6, -5), (10, 9)] {
        let sols = solve_pell_capped(&BigInt::from(d), &BigInt::from(n), &BigInt::from(400)).unwrap();
        for s in &sols {
            let x: i128 = s.x.to_string().parse().unwrap();
            let y: i128 = s.y.to_string().parse().unwrap();
            assert_eq!(x * x - (d as i128) * y * y, n as i128);
            // the mirrored pair satisfies the equation too
            assert_eq!(x * x - (d as i128) * (-y) * (-y), n as i128);
        }
    }
}

#[test]
fn distance_certificates_bulk() {
    // 100000 seeded probes: certificate holds exactly, and the float
    // estimate agrees to within the interval width
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100_000 {
        let q: u64 = rng.gen_range(1..=1_000_000);
        let a: u64 = loop {
            let a = rng.gen_range(2..=500);
            if !is_square(&BigInt::from(a)) {
                break a;
            }
        };
        let d = dist_nearest(&BigInt::from(q), &BigInt::from(a)).unwrap();
        let t = BigInt::from(a) * BigInt::from(q) * BigInt::from(q);
        assert!(&d.floor_sqrt * &d.floor_sqrt <= t);
        assert!(t < (&d.floor_sqrt + 1) * (&d.floor_sqrt + 1));
        let est = pell_oracles::dist_estimate(q, a);
        let iv = d.value_interval(64);
        let lo: f64 = iv.lo().to_decimal_round(17, Round::Down).parse().unwrap();
        let hi: f64 = iv.hi().to_decimal_round(17, Round::Up).parse().unwrap();
        assert!(est >= lo - 1e-6 && est <= hi + 1e-6, "q={q} a={a}");
    }
}

#[test]
fn refinement_nests_for_bound_evaluators() {
    use pellian::bounds::{thm21_lower_bound, LinFormInstance};
    let one = |bits| IntervalReal::from_int(1, bits);
    for bits in [96u32, 128, 192] {
        let coarse_inst = LinFormInstance::new(
            4,
            vec![one(bits), one(bits), one(bits)],
            vec![BigInt::from(7), BigInt::from(-3), BigInt::from(1)],
            IntervalReal::from_int(12, bits),
        )
        .unwrap();
        let fine_inst = LinFormInstance::new(
            4,
            vec![one(bits * 2), one(bits * 2), one(bits * 2)],
            vec![BigInt::from(7), BigInt::from(-3), BigInt::from(1)],
            IntervalReal::from_int(12, bits * 2),
        )
        .unwrap();
        let coarse = thm21_lower_bound(&coarse_inst).unwrap();
        let fine = thm21_lower_bound(&fine_inst).unwrap();
        let refined = fine.refined_with(&coarse).unwrap();
        assert!(refined.width() <= coarse.width());
        assert!(refined.lo() >= coarse.lo() && refined.hi() <= coarse.hi());
    }
}
