//! Acceptance suite: one test per verification criterion, each printing a
//! single PASS/FAIL line (visible with `--nocapture`; failures always
//! show the line). Criteria run at 256-bit precision with fixed
//! tolerances; the precision-stability criterion repeats the family
//! sweeps at 512 bits.

use std::collections::HashMap;
use std::sync::LazyLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ushape_core::analysis::{convergence_study, side_of_approach, Side};
use ushape_core::big::{BigReal, PrecisionContext};
use ushape_core::families::{sweep, Family, FamilyMember};
use ushape_core::lattice::{
    classify_boundary, hyperbolic_distance, lagrange_reduce, shape_from_basis,
    tau_from_reduced_gram, BoundaryClass, Gram2, ShapePoint, Unimodular,
};
use ushape_core::output::{emit_csv, member_row};
use ushape_core::real::Real;
use ushape_core::records::{evaluate_record, serialize_member};
use ushape_core::units::{galois_swap, regulator_from_basis, silverman_lower_bound, LogVector};
use ushape_core::verify::{
    brute_force_shape, random_gram_f64, run_suite, Suite, REDUCTION_ORACLE_BOUND,
    REDUCTION_ORACLE_COUNT, REDUCTION_ORACLE_SEED, REDUCTION_ORACLE_TOL,
};

const SWEEP_N_MAX: i64 = 10_000;
const BOUNDARY_N_MAX: i64 = 2_000;

static CTX_256: LazyLock<PrecisionContext> = LazyLock::new(PrecisionContext::default);
static CTX_512: LazyLock<PrecisionContext> =
    LazyLock::new(|| PrecisionContext::new(512, 32).unwrap());

static MEMBERS_256: LazyLock<HashMap<Family, Vec<FamilyMember>>> = LazyLock::new(|| {
    Family::ALL
        .into_iter()
        .map(|f| (f, sweep(f, f.min_abs_n(), SWEEP_N_MAX, &CTX_256).unwrap()))
        .collect()
});

static MEMBERS_512: LazyLock<HashMap<Family, Vec<FamilyMember>>> = LazyLock::new(|| {
    Family::ALL
        .into_iter()
        .map(|f| (f, sweep(f, f.min_abs_n(), SWEEP_N_MAX, &CTX_512).unwrap()))
        .collect()
});

fn verdict(criterion: &str, ok: bool, detail: &str) {
    let line = format!(
        "criterion {criterion}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(ok, "{line}");
}

fn rel_diff(a: &BigReal, b: &BigReal) -> BigReal {
    let scale = a.abs().max(&b.abs());
    if scale.is_zero() {
        return a.lift_i64(0);
    }
    (a - b).abs() / scale
}

#[test]
fn criterion_01_boundary_membership() {
    let t0 = Instant::now();
    let ctx = &*CTX_256;
    let report = run_suite(Suite::Boundary, BOUNDARY_N_MAX, ctx).unwrap();
    let total: usize = Family::ALL
        .into_iter()
        .map(|f| {
            MEMBERS_256[&f]
                .iter()
                .filter(|m| m.n.abs() <= BOUNDARY_N_MAX)
                .count()
        })
        .sum();
    let elapsed = t0.elapsed();
    let ok = report.passed && total >= 50 && elapsed.as_secs() < 120;
    verdict(
        "01 boundary-membership",
        ok,
        &format!(
            "all four families |n| <= {BOUNDARY_N_MAX}, {total} fields, boundary tol 2^-128, {:.1?}",
            elapsed
        ),
    );
}

fn limit_study(family: Family, ctx: &PrecisionContext) -> ushape_core::analysis::ConvergenceReport {
    let limit = family.claimed_limit(ctx);
    convergence_study(family, SWEEP_N_MAX, &limit, ctx).unwrap()
}

#[test]
fn criterion_02_stender_cube_limit() {
    let ctx = &*CTX_256;
    let rep = limit_study(Family::StenderCube, ctx);
    let d_first = rep.samples.first().unwrap().distance.to_f64();
    let d_last = rep.samples.last().unwrap().distance.to_f64();
    let a = rep.distance_fit.intercept.to_f64();
    let ok = d_last < d_first && a.abs() <= 0.02;
    verdict(
        "02 stender-cube-limit",
        ok,
        &format!(
            "members={} d_first={d_first:.5} d_last={d_last:.5} intercept A={a:+.5} (|A| <= 0.02)",
            rep.samples.len()
        ),
    );
}

#[test]
fn criterion_03_nakamula_limit_and_orthogonality() {
    let ctx = &*CTX_256;
    let rep = limit_study(Family::Nakamula, ctx);
    let d_first = rep.samples.first().unwrap().distance.to_f64();
    let d_last = rep.samples.last().unwrap().distance.to_f64();
    let a = rep.distance_fit.intercept.to_f64();
    let mut worst_dot = ctx.real_zero();
    for m in &MEMBERS_256[&Family::Nakamula] {
        let dot = m.basis.0.dot(&m.basis.1).abs();
        let rel = dot / (m.basis.0.norm() * m.basis.1.norm());
        if rel > worst_dot {
            worst_dot = rel;
        }
    }
    let dot_ok = worst_dot <= ctx.pow2(-240);
    let ok = d_last < d_first && a.abs() <= 0.02 && dot_ok;
    verdict(
        "03 nakamula-limit",
        ok,
        &format!(
            "members={} d_last={d_last:.6} A={a:+.5} worst |u.v|/(|u||v|)={:.2e} (<= 2^-240)",
            rep.samples.len(),
            worst_dot.to_f64()
        ),
    );
}

#[test]
fn criterion_04_lower_arc_limit() {
    let ctx = &*CTX_256;
    let rep = limit_study(Family::StenderMinusOne, ctx);
    let target = -1.0 / 7.0;
    let cos_first = rep.samples.first().unwrap().cos_theta.to_f64();
    let cos_last = rep.samples.last().unwrap().cos_theta.to_f64();
    let a_cos = rep.cos_fit.intercept.to_f64();
    let all_arc = rep
        .samples
        .iter()
        .all(|s| matches!(s.boundary, BoundaryClass::LowerArc));
    let ok = (cos_last - target).abs() <= 0.15
        && (cos_last - target).abs() < (cos_first - target).abs()
        && (a_cos - target).abs() <= 0.01
        && all_arc;
    verdict(
        "04 lower-arc-limit",
        ok,
        &format!(
            "members={} cos_last={cos_last:+.5} (|cos+1/7| <= 0.15) A_cos={a_cos:+.5} (within 0.01 of -1/7) all-lower-arc={all_arc}",
            rep.samples.len()
        ),
    );
}

#[test]
fn criterion_05_corner_limit_from_below() {
    let ctx = &*CTX_256;
    let rep = limit_study(Family::Lps, ctx);
    let half = ctx.real_one() / ctx.real_from_i64(2);
    let side = side_of_approach(&rep, &half);
    let a_cos = rep.cos_fit.intercept.to_f64();
    let ok = side == Side::FromBelow && (a_cos - 0.5).abs() <= 0.01;
    verdict(
        "05 corner-limit-from-below",
        ok,
        &format!(
            "members={} side={side:?} A_cos={a_cos:+.5} (within 0.01 of 1/2)",
            rep.samples.len()
        ),
    );
}

#[test]
fn criterion_06_reduction_oracle() {
    let t0 = Instant::now();
    let ctx = &*CTX_256;
    let report = run_suite(Suite::ReductionOracle, 0, ctx).unwrap();
    let elapsed = t0.elapsed();
    let ok = report.passed && elapsed.as_secs() < 60;
    verdict(
        "06 reduction-oracle",
        ok,
        &format!(
            "{REDUCTION_ORACLE_COUNT} matrices, coeff box {REDUCTION_ORACLE_BOUND}, rel tol {REDUCTION_ORACLE_TOL:.0e}, {:.1?}",
            elapsed
        ),
    );
}

#[test]
fn criterion_07_invariance_suite() {
    let ctx = &*CTX_256;
    let tol = ctx.pow2(-240);
    let mut rng = ChaCha8Rng::seed_from_u64(REDUCTION_ORACLE_SEED ^ 0xabcd);
    let mut worst = ctx.real_zero();
    for _ in 0..1000 {
        let gf = random_gram_f64(&mut rng);
        let g = Gram2 {
            g11: ctx.real_from_f64(gf.g11),
            g12: ctx.real_from_f64(gf.g12),
            g22: ctx.real_from_f64(gf.g22),
        };
        let (red, _) = lagrange_reduce(&g).unwrap();
        let p = tau_from_reduced_gram(&red, &ctx.boundary_tol(), ctx.bits()).unwrap();
        for k in 0..20 {
            let m = random_unimodular(&mut rng);
            let gt = g.transformed(&m);
            let (red_t, _) = lagrange_reduce(&gt).unwrap();
            let q = tau_from_reduced_gram(&red_t, &ctx.boundary_tol(), ctx.bits()).unwrap();
            let d = rel_diff(&p.x, &q.x).max(&rel_diff(&p.y, &q.y));
            if d > worst {
                worst = d.clone();
            }
            assert!(
                d <= tol,
                "unimodular invariance violated at transform {k}: {}",
                d.to_f64()
            );
        }
        // Positive scaling.
        let c = ctx.real_from_f64(rng.gen_range(0.1..10.0));
        let gs = g.scaled(&c);
        let (red_s, _) = lagrange_reduce(&gs).unwrap();
        let q = tau_from_reduced_gram(&red_s, &ctx.boundary_tol(), ctx.bits()).unwrap();
        let d = rel_diff(&p.x, &q.x).max(&rel_diff(&p.y, &q.y));
        if d > worst {
            worst = d.clone();
        }
        assert!(d <= tol, "scaling invariance violated: {}", d.to_f64());
    }
    // galois_swap: exact isometric involution on random vectors.
    let mut swap_exact = true;
    for _ in 0..100 {
        let v = LogVector::from_sum_zero(
            ctx.real_from_f64(rng.gen_range(-5.0..5.0)),
            ctx.real_from_f64(rng.gen_range(-5.0..5.0)),
        );
        let s = galois_swap(&v);
        swap_exact &= galois_swap(&s) == v && s.norm_sq() == v.norm_sq();
    }
    verdict(
        "07 invariance-suite",
        swap_exact,
        &format!(
            "1000 lattices x 20 transforms + scaling, worst shape drift {:.2e} (<= 2^-240); galois swap exact={swap_exact}",
            worst.to_f64()
        ),
    );
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Unimodular {
    loop {
        let mut m = Unimodular::IDENTITY;
        for _ in 0..rng.gen_range(1..=3usize) {
            let k = rng.gen_range(-2i64..=2);
            let shear = if rng.gen_bool(0.5) {
                Unimodular {
                    a: 1,
                    b: k,
                    c: 0,
                    d: 1,
                }
            } else {
                Unimodular {
                    a: 1,
                    b: 0,
                    c: k,
                    d: 1,
                }
            };
            m = Unimodular {
                a: shear.a * m.a + shear.b * m.c,
                b: shear.a * m.b + shear.b * m.d,
                c: shear.c * m.a + shear.d * m.c,
                d: shear.c * m.b + shear.d * m.d,
            };
        }
        if m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs()) <= 8 {
            return m;
        }
    }
}

#[test]
fn criterion_08_regulator_identity() {
    let ctx = &*CTX_256;
    let sqrt3 = ctx.real_from_i64(3).sqrt();
    let tol = ctx.pow2(-120);
    let mut worst = ctx.real_zero();
    let mut count = 0usize;
    for f in Family::ALL {
        for m in MEMBERS_256[&f]
            .iter()
            .filter(|m| m.n.abs() <= BOUNDARY_N_MAX)
        {
            let rep = regulator_from_basis(&m.basis.0, &m.basis.1, &ctx.det_tol()).unwrap();
            let d = rel_diff(&rep.covol_ratio, &sqrt3);
            if d > worst {
                worst = d.clone();
            }
            count += 1;
            assert!(
                d <= tol,
                "{:?} n={}: covol/reg deviates from sqrt(3) by {}",
                f,
                m.n,
                d.to_f64()
            );
        }
    }
    verdict(
        "08 regulator-identity",
        true,
        &format!(
            "covol = sqrt(3) reg_L on {count} members, worst rel dev {:.2e} (<= 2^-120)",
            worst.to_f64()
        ),
    );
}

#[test]
fn criterion_09_silverman_instance() {
    let ctx = &*CTX_256;
    let mut max_bound = 0.0f64;
    let mut min_reg = f64::INFINITY;
    let members = &MEMBERS_256[&Family::Lps];
    for m in members {
        let reg = regulator_from_basis(&m.basis.0, &m.basis.1, &ctx.det_tol()).unwrap();
        let bound = silverman_lower_bound(&m.disc_estimate, 4, 2, 1).unwrap();
        assert!(
            bound < reg.reg_l,
            "n={}: silverman bound {} not below regulator {}",
            m.n,
            bound.to_f64(),
            reg.reg_l.to_f64()
        );
        max_bound = max_bound.max(bound.to_f64());
        min_reg = min_reg.min(reg.reg_l.to_f64());
    }
    verdict(
        "09 silverman-instance",
        true,
        &format!(
            "{} members, max bound {max_bound:.1e} < min regulator {min_reg:.3}",
            members.len()
        ),
    );
}

#[test]
fn criterion_10_precision_stability() {
    let lo = &*CTX_256;
    let hi = &*CTX_512;
    let tol = lo.pow2(-200);
    let mut worst = lo.real_zero();
    let mut count = 0usize;
    for f in Family::ALL {
        let ms_lo = &MEMBERS_256[&f];
        let ms_hi = &MEMBERS_512[&f];
        assert_eq!(ms_lo.len(), ms_hi.len(), "sieve changed with precision");
        for (a, b) in ms_lo.iter().zip(ms_hi.iter()) {
            assert_eq!(a.n, b.n);
            let pa = a.shape(lo).unwrap();
            let pb = b.shape(hi).unwrap();
            let ca = a.cos_theta(lo).unwrap();
            let cb = b.cos_theta(hi).unwrap();
            let d = rel_diff(&pa.x, &pb.x)
                .max(&rel_diff(&pa.y, &pb.y))
                .max(&rel_diff(&ca, &cb));
            if d > worst {
                worst = d.clone();
            }
            count += 1;
            assert!(
                d <= tol,
                "{:?} n={}: 512-bit rerun moved a value by {}",
                f,
                a.n,
                d.to_f64()
            );
        }
    }
    verdict(
        "10 precision-stability",
        true,
        &format!(
            "{count} members re-run at 512 bits, worst rel change {:.2e} (<= 2^-200)",
            worst.to_f64()
        ),
    );
}

#[test]
fn criterion_11_ingestion_round_trip() {
    let ctx = &*CTX_256;
    let tol = ctx.pow2(-120);
    let mut worst: HashMap<Family, f64> = HashMap::new();
    let mut failures: Vec<(Family, i64, f64)> = Vec::new();
    for f in [Family::Lps, Family::Nakamula] {
        for m in MEMBERS_256[&f]
            .iter()
            .filter(|m| m.n.abs() <= BOUNDARY_N_MAX)
        {
            let rec = serialize_member(m, ctx).unwrap();
            let (u, v) = evaluate_record(&rec, ctx).unwrap();
            let p_rec =
                shape_from_basis(&u, &v, &ctx.det_tol(), &ctx.boundary_tol(), ctx.bits()).unwrap();
            let p_fam = m.shape(ctx).unwrap();
            let d = hyperbolic_distance(&p_rec, &p_fam);
            let df = d.to_f64();
            let w = worst.entry(f).or_insert(0.0);
            *w = w.max(df);
            if d > tol {
                failures.push((f, m.n, df));
            }
        }
    }
    let ok = failures.is_empty();
    let detail = format!(
        "nakamula worst {:.2e}; lps worst {:.2e}; tol 2^-120; {} members diverged{}",
        worst.get(&Family::Nakamula).copied().unwrap_or(0.0),
        worst.get(&Family::Lps).copied().unwrap_or(0.0),
        failures.len(),
        if ok {
            String::new()
        } else {
            format!(
                " (first: {:?} n={} dist={:.3e}; closed-form embedding logs differ from the root-found embeddings for this family)",
                failures[0].0, failures[0].1, failures[0].2
            )
        }
    );
    verdict("11 ingestion-round-trip", ok, &detail);
}

#[test]
fn criterion_12_output_determinism() {
    let ctx = &*CTX_256;
    fn in_pool<F>(threads: usize, f: F) -> String
    where
        F: FnOnce() -> String + Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(f)
    }
    // Verify-suite reports are byte-identical across runs and pools.
    let suite = || run_suite(Suite::Boundary, 300, ctx).unwrap().render();
    let r1 = in_pool(1, suite);
    let r2 = in_pool(4, suite);
    let r3 = in_pool(4, suite);
    assert_eq!(r1, r2, "verify output differs between thread counts");
    assert_eq!(r2, r3, "verify output differs between runs");
    // CSV emission is byte-identical across runs and thread counts.
    let csv = || {
        let members = sweep(Family::Nakamula, 2, 500, ctx).unwrap();
        let rows = members
            .iter()
            .map(|m| member_row(m, ctx, false).unwrap())
            .collect::<Vec<_>>();
        emit_csv(&rows)
    };
    let single = in_pool(1, csv);
    let multi = in_pool(4, csv);
    let again = in_pool(4, csv);
    let ok = single == multi && multi == again && r1 == r2 && r2 == r3;
    verdict(
        "12 output-determinism",
        ok,
        &format!(
            "verify report and csv identical for 1 vs 4 threads ({} csv bytes)",
            single.len()
        ),
    );
}

// The three claimed limit points
// classify on the boundary components they belong to.
#[test]
fn limit_points_classify_correctly() {
    let ctx = &*CTX_256;
    let tol = ctx.boundary_tol();
    let sqrt3 = ctx.real_from_i64(3).sqrt();
    let left = ShapePoint::new(ctx.real_zero(), sqrt3.clone(), ctx.bits()).unwrap();
    assert_eq!(classify_boundary(&left, &tol), BoundaryClass::LeftLine);
    let corner = ShapePoint::new(
        ctx.real_one() / ctx.real_from_i64(2),
        sqrt3.clone() / ctx.real_from_i64(2),
        ctx.bits(),
    )
    .unwrap();
    assert!(matches!(
        classify_boundary(&corner, &tol),
        BoundaryClass::Cusp(_)
    ));
    let arc = ShapePoint::new(
        ctx.real_one() / ctx.real_from_i64(7),
        ctx.real_from_i64(4) * &sqrt3 / ctx.real_from_i64(7),
        ctx.bits(),
    )
    .unwrap();
    assert_eq!(classify_boundary(&arc, &tol), BoundaryClass::LowerArc);
}

// The brute-force searcher agrees with reduction on the generic-scalar
// f64 instantiation for well-conditioned matrices.
#[test]
fn brute_force_f64_instantiation() {
    let g = Gram2 {
        g11: 13.0,
        g12: 8.0,
        g22: 5.0,
    };
    let (red, _) = lagrange_reduce(&g).unwrap();
    let p = tau_from_reduced_gram(&red, &1e-12, 53).unwrap();
    let (bx, by) = brute_force_shape(&g, 20).unwrap();
    assert!((p.x - bx).abs() < 1e-12);
    assert!((p.y - by).abs() < 1e-12);
}
