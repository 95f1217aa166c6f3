//! Cross-module pipeline checks: the rational-independence surrogate on
//! family bases, the height inequality on the parametrized family, unit
//! evaluation against family witnesses, and the escape-of-mass study on
//! a hand-built dataset over the fixed subfield Q(sqrt(23)).

use num_bigint::BigInt;
use num_rational::BigRational;

use ushape_core::analysis::escape_study;
use ushape_core::big::PrecisionContext;
use ushape_core::families::{self, Family};
use ushape_core::records::{evaluate_record, FieldRecord, UnitExpr};
use ushape_core::units::{q_linear_independence_check, regulator_from_basis, y_bound_check};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

#[test]
fn family_bases_are_rationally_independent_up_to_bound_100() {
    let c = ctx();
    let tol = c.boundary_tol();
    for f in Family::ALL {
        let (lo, hi) = f.signed_range(f.min_abs_n(), 40);
        for n in families::sieve(f, lo, hi) {
            let m = families::member(f, n, &c).unwrap();
            let (ker, sub) = m.trans_pair();
            let ok = q_linear_independence_check(&ker.l1, &sub.l1, 100, &tol).unwrap();
            assert!(ok, "{f:?} n={n}: dependent pair detected");
        }
    }
}

#[test]
fn dependent_pair_is_detected() {
    let c = ctx();
    let a = c.real_from_i64(2).ln();
    let b = &a * c.real_from_i64(3); // 3a = 1b * 3 -> m=3, k=1
    assert!(!q_linear_independence_check(&a, &b, 50, &c.boundary_tol()).unwrap());
}

#[test]
fn height_inequality_holds_on_the_corner_family() {
    // y >= (3^(3/4)/2^(3/2)) sqrt(reg_L)/reg_K with reg_K = log(eps).
    let c = ctx();
    for n in families::sieve(Family::Lps, -200, -5) {
        let m = families::lps_member(n, &c).unwrap();
        let shape = m.shape(&c).unwrap();
        let reg = regulator_from_basis(&m.basis.0, &m.basis.1, &c.det_tol()).unwrap();
        let reg_k = m.witness.eps.clone().unwrap().ln();
        let check = y_bound_check(&shape.y, &reg.reg_l, &reg_k).unwrap();
        assert!(
            check.ratio >= c.real_one(),
            "n={n}: height ratio {} below 1",
            check.ratio.to_f64()
        );
    }
}

#[test]
fn nakamula_unit_evaluates_to_the_witness_embedding() {
    // The first unit of the serialized member is the defining root; its
    // evaluated log vector is (log eps, -log eps, 0).
    let c = ctx();
    let m = families::nakamula_member(5, &c).unwrap();
    let rec = ushape_core::records::serialize_member(&m, &c).unwrap();
    let (u, _) = evaluate_record(&rec, &c).unwrap();
    let log_eps = m.witness.eps.clone().unwrap().ln();
    let tol = c.rel_eps(40);
    assert!((&u.l1 - &log_eps).abs() <= tol.clone() * log_eps.abs());
    assert!((&u.l2 + &log_eps).abs() <= tol.clone() * log_eps.abs());
    assert!(u.l3.abs() <= tol * log_eps.abs());
}

/// Pure quartic fields Q((23 a^2)^(1/4)) all contain Q(sqrt(23)).
/// Units: the subfield fundamental unit 24 + 5 sqrt(23) and the
/// norm-one element (omega + n)/(omega - n) for n nearest to omega.
fn sqrt23_record(a: i64, n: i64) -> FieldRecord {
    let m = 23 * a * a;
    let d = m - n.pow(4);
    let q = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let u = UnitExpr([
        q(m + n.pow(4), d),
        q(2 * n.pow(3), d),
        q(2 * n.pow(2), d),
        q(2 * n, d),
    ]);
    let eps23 = UnitExpr([q(24, 1), q(0, 1), q(5, a), q(0, 1)]);
    let disc = ushape_core::roots::quartic_discriminant(&[-m, 0, 0, 0, 1]).unwrap();
    FieldRecord {
        label: format!("q23_a{a}"),
        poly: [-m, 0, 0, 0, 1],
        subfield_disc: 92,
        disc_magnitude: disc.magnitude().to_string(),
        units: [u, eps23],
    }
}

#[test]
fn escape_study_over_fixed_subfield() {
    let c = ctx();
    let records = vec![
        sqrt23_record(2, 3),
        sqrt23_record(3, 4),
        sqrt23_record(6, 5),
    ];
    let rep = escape_study(&records, &c).unwrap();
    assert_eq!(rep.subfield_label, "subfield_disc=92");
    assert_eq!(rep.samples.len(), 3);
    // Sorted by discriminant magnitude; height trend non-decreasing.
    for w in rep.samples.windows(2) {
        assert!(w[0].disc_magnitude < w[1].disc_magnitude);
        assert!(
            w[0].y <= w[1].y,
            "height trend broke: {} then {}",
            w[0].y.to_f64(),
            w[1].y.to_f64()
        );
    }
    assert!(rep.min_ratio.is_positive());
}

#[test]
fn escape_study_rejects_single_record() {
    let c = ctx();
    let records = vec![sqrt23_record(2, 3)];
    assert!(escape_study(&records, &c).is_err());
}

#[test]
fn lower_arc_family_side_is_recorded() {
    // No claim is made about the side for this family; the study just
    // records it. Empirically the cosines sit below -1/7.
    let c = ctx();
    let limit = Family::StenderMinusOne.claimed_limit(&c);
    let rep =
        ushape_core::analysis::convergence_study(Family::StenderMinusOne, 300, &limit, &c).unwrap();
    let target = -(c.real_one() / c.real_from_i64(7));
    let side = ushape_core::analysis::side_of_approach(&rep, &target);
    assert_eq!(side, ushape_core::analysis::Side::FromBelow);
}

#[test]
fn nakamula_regulator_value() {
    let c = ctx();
    let m = families::nakamula_member(5, &c).unwrap();
    let rep = regulator_from_basis(&m.basis.0, &m.basis.1, &c.det_tol()).unwrap();
    let frozen = c
        .real_from_dec_str("4.76332214526000264357445603040e+0")
        .unwrap();
    let err = (&rep.reg_l - &frozen).abs() / frozen.abs();
    assert!(err < c.pow2(-90), "reg_L = {}", rep.reg_l);
    let sqrt3 = c.real_from_i64(3).sqrt();
    let dev = (&rep.covol_ratio - &sqrt3).abs() / sqrt3.abs();
    assert!(dev < c.rel_eps(16));
}
