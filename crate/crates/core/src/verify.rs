//! Named verification suites behind the `verify` command: boundary
//! membership, limit-point convergence, orthogonality, the Silverman
//! regulator bound, and the reduction oracle. Each suite produces a
//! deterministic text report and a pass flag.
//!
//! Thresholds are fixed here, not configurable: they are the contract
//! the suites verify.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{convergence_study, side_of_approach, ConvergenceReport, Side};
use crate::big::PrecisionContext;
use crate::error::{Error, Result};
use crate::families::{sweep, Family};
use crate::lattice::{lagrange_reduce, tau_from_reduced_gram, Gram2};
use crate::real::Real;
use crate::units::{regulator_from_basis, silverman_lower_bound};

/// Distance-fit intercept bound for the two families converging to
/// `i sqrt(3)`.
pub const DIST_INTERCEPT_TOL: f64 = 0.02;
/// Cosine-fit intercept bound around the claimed cosine limits.
pub const COS_INTERCEPT_TOL: f64 = 0.01;
/// Terminal cosine window around -1/7 for the lower-arc family.
pub const COS_ENDPOINT_TOL: f64 = 0.15;
/// Matrix count and seed of the reduction oracle.
pub const REDUCTION_ORACLE_COUNT: usize = 1000;
pub const REDUCTION_ORACLE_SEED: u64 = 0x5eed_1a77;
/// Relative agreement required between reduction and brute force.
pub const REDUCTION_ORACLE_TOL: f64 = 1e-12;
/// Coefficient box of the brute-force search.
pub const REDUCTION_ORACLE_BOUND: i64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Boundary,
    Limits,
    Orthogonality,
    Silverman,
    ReductionOracle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Boundary,
        Suite::Limits,
        Suite::Orthogonality,
        Suite::Silverman,
        Suite::ReductionOracle,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Suite::Boundary => "boundary",
            Suite::Limits => "limits",
            Suite::Orthogonality => "orthogonality",
            Suite::Silverman => "silverman",
            Suite::ReductionOracle => "reduction-oracle",
        }
    }

    pub fn from_tag(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.tag() == s)
    }
}

/// Deterministic suite result.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub lines: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!(
            "suite {}: {}\n",
            self.suite.tag(),
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

pub fn run_suite(suite: Suite, n_max: i64, ctx: &PrecisionContext) -> Result<SuiteReport> {
    match suite {
        Suite::Boundary => boundary_suite(n_max, ctx),
        Suite::Limits => limits_suite(n_max, ctx),
        Suite::Orthogonality => orthogonality_suite(n_max, ctx),
        Suite::Silverman => silverman_suite(n_max, ctx),
        Suite::ReductionOracle => reduction_oracle_suite(ctx),
    }
}

/// Every sieved member of every family classifies on the boundary.
fn boundary_suite(n_max: i64, ctx: &PrecisionContext) -> Result<SuiteReport> {
    let mut lines = vec![format!(
        "boundary membership: |n| <= {n_max}, precision {} bits, tol 2^-{}",
        ctx.bits(),
        ctx.bits() / 2
    )];
    let mut passed = true;
    let mut total = 0usize;
    for f in Family::ALL {
        let members = sweep(f, f.min_abs_n(), n_max, ctx)?;
        let classes: Vec<(i64, &'static str, bool)> = members
            .par_iter()
            .map(|m| {
                let shape = m.shape(ctx)?;
                let cls = crate::lattice::classify_boundary(&shape, &ctx.boundary_tol());
                Ok((m.n, cls.token(), cls.is_interior()))
            })
            .collect::<Result<Vec<_>>>()?;
        let interior: Vec<i64> = classes
            .iter()
            .filter(|(_, _, int)| *int)
            .map(|(n, _, _)| *n)
            .collect();
        total += classes.len();
        if interior.is_empty() {
            lines.push(format!(
                "  {:<18} members={:<5} interior=0",
                f.tag(),
                classes.len()
            ));
        } else {
            passed = false;
            lines.push(format!(
                "  {:<18} members={:<5} interior={} at n={:?}",
                f.tag(),
                classes.len(),
                interior.len(),
                interior
            ));
        }
    }
    lines.push(format!("  total members: {total}"));
    Ok(SuiteReport {
        suite: Suite::Boundary,
        lines,
        passed,
    })
}

fn fmt6(v: f64) -> String {
    format!("{v:+.6}")
}

/// Per-family convergence contracts toward the claimed limit points.
fn limits_suite(n_max: i64, ctx: &PrecisionContext) -> Result<SuiteReport> {
    let mut lines = vec![format!(
        "limit points: |n| <= {n_max}, precision {} bits (intercept windows calibrated for |n| <= 10000)",
        ctx.bits()
    )];
    let mut passed = true;
    for f in Family::ALL {
        let limit = f.claimed_limit(ctx);
        let rep = convergence_study(f, n_max, &limit, ctx)?;
        let mut ok = true;
        let mut notes: Vec<String> = Vec::new();
        check_endpoint_shrink(&rep, &mut ok, &mut notes);
        match f {
            Family::StenderCube | Family::Nakamula => {
                let a = rep.distance_fit.intercept.to_f64();
                notes.push(format!("A_dist={}", fmt6(a)));
                if a.abs() > DIST_INTERCEPT_TOL {
                    ok = false;
                    notes.push(format!("distance intercept exceeds {DIST_INTERCEPT_TOL}"));
                }
            }
            Family::StenderMinusOne => {
                let target = -1.0 / 7.0;
                let first = rep.samples.first().unwrap().cos_theta.to_f64();
                let last = rep.samples.last().unwrap().cos_theta.to_f64();
                let a = rep.cos_fit.intercept.to_f64();
                notes.push(format!("cos_last={} A_cos={}", fmt6(last), fmt6(a)));
                if (last - target).abs() > COS_ENDPOINT_TOL {
                    ok = false;
                    notes.push("terminal cosine outside the -1/7 window".into());
                }
                if (last - target).abs() >= (first - target).abs() {
                    ok = false;
                    notes.push("cosine endpoint did not move toward -1/7".into());
                }
                if (a - target).abs() > COS_INTERCEPT_TOL {
                    ok = false;
                    notes.push(format!(
                        "cosine intercept off -1/7 by more than {COS_INTERCEPT_TOL}"
                    ));
                }
                if !rep
                    .samples
                    .iter()
                    .all(|s| matches!(s.boundary, crate::lattice::BoundaryClass::LowerArc))
                {
                    ok = false;
                    notes.push("a member left the lower arc".into());
                }
            }
            Family::Lps => {
                let half = ctx.real_one() / ctx.real_from_i64(2);
                let side = side_of_approach(&rep, &half);
                let a = rep.cos_fit.intercept.to_f64();
                notes.push(format!("side={:?} A_cos={}", side, fmt6(a)));
                if side != Side::FromBelow {
                    ok = false;
                    notes.push("cosines do not approach 1/2 from below".into());
                }
                if (a - 0.5).abs() > COS_INTERCEPT_TOL {
                    ok = false;
                    notes.push(format!(
                        "cosine intercept off 1/2 by more than {COS_INTERCEPT_TOL}"
                    ));
                }
            }
        }
        passed &= ok;
        lines.push(format!(
            "  {:<18} members={:<5} d_first={:.6} d_last={:.6} {} -> {}",
            f.tag(),
            rep.samples.len(),
            rep.samples.first().unwrap().distance.to_f64(),
            rep.samples.last().unwrap().distance.to_f64(),
            notes.join(" "),
            if ok { "ok" } else { "FAIL" }
        ));
    }
    Ok(SuiteReport {
        suite: Suite::Limits,
        lines,
        passed,
    })
}

fn check_endpoint_shrink(rep: &ConvergenceReport, ok: &mut bool, notes: &mut Vec<String>) {
    let first = &rep.samples.first().unwrap().distance;
    let last = &rep.samples.last().unwrap().distance;
    if !(last < first) {
        *ok = false;
        notes.push("distance at the largest parameter did not shrink".into());
    }
}

/// Orthogonal families: the basis dot product vanishes to 2^-(bits-16)
/// relative.
fn orthogonality_suite(n_max: i64, ctx: &PrecisionContext) -> Result<SuiteReport> {
    let mut lines = vec![format!(
        "orthogonality: |n| <= {n_max}, precision {} bits",
        ctx.bits()
    )];
    let mut passed = true;
    for f in [Family::StenderCube, Family::Nakamula] {
        let members = sweep(f, f.min_abs_n(), n_max, ctx)?;
        let tol = ctx.rel_eps(16);
        let mut worst = ctx.real_zero();
        let mut failures = 0usize;
        for m in &members {
            let dot = m.basis.0.dot(&m.basis.1).abs();
            let scale = m.basis.0.norm() * m.basis.1.norm();
            let rel = dot / scale;
            if rel > worst {
                worst = rel.clone();
            }
            if rel > tol {
                failures += 1;
            }
        }
        passed &= failures == 0;
        lines.push(format!(
            "  {:<18} members={:<5} worst_rel_dot={:.3e} failures={}",
            f.tag(),
            members.len(),
            worst.to_f64(),
            failures
        ));
    }
    Ok(SuiteReport {
        suite: Suite::Orthogonality,
        lines,
        passed,
    })
}

/// Silverman's bound evaluated on the family with exact discriminants:
/// the bound stays below the computed regulator for every member.
fn silverman_suite(n_max: i64, ctx: &PrecisionContext) -> Result<SuiteReport> {
    let members = sweep(Family::Lps, Family::Lps.min_abs_n(), n_max, ctx)?;
    let mut lines = vec![format!(
        "silverman bound: lps, |n| <= {n_max}, members={}",
        members.len()
    )];
    let mut failures = 0usize;
    let mut max_bound = 0.0f64;
    for m in &members {
        let reg = regulator_from_basis(&m.basis.0, &m.basis.1, &ctx.det_tol())?;
        let bound = silverman_lower_bound(&m.disc_estimate, 4, 2, 1)?;
        max_bound = max_bound.max(bound.to_f64());
        if !(bound < reg.reg_l) {
            failures += 1;
            lines.push(format!(
                "  n={} bound={:.6e} >= reg={:.6e}",
                m.n,
                bound.to_f64(),
                reg.reg_l.to_f64()
            ));
        }
    }
    lines.push(format!(
        "  max_bound={max_bound:.6e} (vacuous at desk scale) failures={failures}"
    ));
    Ok(SuiteReport {
        suite: Suite::Silverman,
        lines,
        passed: failures == 0,
    })
}

/// Deterministic positive-definite Gram generator for the oracle: a
/// reduced core with eigenvalue ratio up to 10^6, skewed by a random
/// unimodular word with entries small enough that the brute-force box
/// provably contains the reducing transform.
pub fn random_gram_f64(rng: &mut ChaCha8Rng) -> Gram2<f64> {
    loop {
        let g11 = rng.gen_range(0.5..2.0);
        let ratio = 10f64.powf(rng.gen_range(0.0..6.0f64));
        let g22 = g11 * ratio;
        let g12 = rng.gen_range(-0.5..0.5) * g11;
        let core = Gram2 { g11, g12, g22 };
        // Random unimodular word of up to 3 shear/swap steps.
        let mut m = crate::lattice::Unimodular::IDENTITY;
        for _ in 0..rng.gen_range(1..=3usize) {
            let k = rng.gen_range(-2i64..=2);
            // Alternate shears keep entries small.
            let shear = if rng.gen_bool(0.5) {
                crate::lattice::Unimodular {
                    a: 1,
                    b: k,
                    c: 0,
                    d: 1,
                }
            } else {
                crate::lattice::Unimodular {
                    a: 1,
                    b: 0,
                    c: k,
                    d: 1,
                }
            };
            m = crate::lattice::Unimodular {
                a: shear.a * m.a + shear.b * m.c,
                b: shear.a * m.b + shear.b * m.d,
                c: shear.c * m.a + shear.d * m.c,
                d: shear.c * m.b + shear.d * m.d,
            };
        }
        if m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs()) > 8 {
            continue;
        }
        let g = core.transformed(&m);
        // Keep the condition number within 10^6.
        let tr = g.g11 + g.g22;
        let det = g.det();
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let lmax = tr / 2.0 + disc;
        let lmin = tr / 2.0 - disc;
        if lmin > 0.0 && lmax / lmin <= 1.0e6 {
            return g;
        }
    }
}

/// Shape by exhaustive successive-minima search with coefficients in
/// `[-bound, bound]`: the shortest vector, then the shortest completion
/// to a determinant +-1 basis.
pub fn brute_force_shape<R: Real>(g: &Gram2<R>, bound: i64) -> Option<(R, R)> {
    let lift: Vec<R> = (-bound..=bound).map(|k| g.g11.lift_i64(k)).collect();
    let at = |k: i64| &lift[(k + bound) as usize];
    let two = g.g11.lift_i64(2);
    let q = |a: i64, b: i64| {
        at(a).clone() * at(a).clone() * g.g11.clone()
            + two.clone() * at(a).clone() * at(b).clone() * g.g12.clone()
            + at(b).clone() * at(b).clone() * g.g22.clone()
    };
    let mut v: Option<(i64, i64, R)> = None;
    for a in -bound..=bound {
        for b in -bound..=bound {
            if a == 0 && b == 0 {
                continue;
            }
            let val = q(a, b);
            if v.as_ref().map_or(true, |(_, _, best)| val < *best) {
                v = Some((a, b, val));
            }
        }
    }
    let (a, b, q1) = v?;
    let mut w: Option<(i64, i64, R)> = None;
    for c in -bound..=bound {
        for d in -bound..=bound {
            if (a * d - b * c).abs() != 1 {
                continue;
            }
            let val = q(c, d);
            if w.as_ref().map_or(true, |(_, _, best)| val < *best) {
                w = Some((c, d, val));
            }
        }
    }
    let (c, d, q2) = w?;
    let b12 = at(a).clone() * at(c).clone() * g.g11.clone()
        + g.g11.lift_i64(a * d + b * c) * g.g12.clone()
        + at(b).clone() * at(d).clone() * g.g22.clone();
    let x = (b12.abs() / q1.clone()).min_val(&g.g11.lift_ratio(1, 2));
    let y = (q1.clone() * q2 - b12.square()).sqrt() / q1;
    Some((x, y))
}

/// Smallest nonzero value of the quadratic form over the coefficient box.
pub fn brute_force_minimum<R: Real>(g: &Gram2<R>, bound: i64) -> R {
    let mut best: Option<R> = None;
    for a in -bound..=bound {
        for b in -bound..=bound {
            if a == 0 && b == 0 {
                continue;
            }
            let af = g.g11.lift_i64(a);
            let bf = g.g11.lift_i64(b);
            let val = af.square() * g.g11.clone()
                + g.g11.lift_i64(2) * af * bf.clone() * g.g12.clone()
                + bf.square() * g.g22.clone();
            best = Some(match best {
                None => val,
                Some(m) => m.min_val(&val),
            });
        }
    }
    best.expect("nonempty search box")
}

/// Reduction versus brute force on pseudo-random Gram matrices. Both
/// routes run on exact arbitrary-precision lifts of the same generated
/// f64 entries, so route disagreement is algorithmic, not round-off.
fn reduction_oracle_suite(ctx: &PrecisionContext) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(REDUCTION_ORACLE_SEED);
    let grams: Vec<Gram2<f64>> = (0..REDUCTION_ORACLE_COUNT)
        .map(|_| random_gram_f64(&mut rng))
        .collect();
    let results: Vec<Result<f64>> = grams
        .par_iter()
        .map(|gf| {
            let g = Gram2 {
                g11: ctx.real_from_f64(gf.g11),
                g12: ctx.real_from_f64(gf.g12),
                g22: ctx.real_from_f64(gf.g22),
            };
            let (reduced, _) = lagrange_reduce(&g)?;
            let p = tau_from_reduced_gram(&reduced, &ctx.boundary_tol(), ctx.bits())?;
            let (bx, by) = brute_force_shape(&g, REDUCTION_ORACLE_BOUND)
                .ok_or_else(|| Error::Numerical("brute force found no basis".into()))?;
            // Reduced g11 must be the true lattice minimum.
            let min_q = brute_force_minimum(&g, REDUCTION_ORACLE_BOUND);
            let g11_err = (&reduced.g11 - &min_q).abs() / min_q;
            let scale = by.abs().max(&ctx.real_one());
            let err = (&p.x - &bx).abs().max(&(&p.y - &by).abs()) / scale;
            Ok(err.max(&g11_err).to_f64())
        })
        .collect();
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for r in results {
        let err = r?;
        worst = worst.max(err);
        if err > REDUCTION_ORACLE_TOL {
            failures += 1;
        }
    }
    let lines = vec![
        format!(
            "reduction oracle: {} matrices, condition <= 1e6, coefficient box {}",
            REDUCTION_ORACLE_COUNT, REDUCTION_ORACLE_BOUND
        ),
        format!("  worst relative shape deviation: {worst:.3e}"),
    ];
    Ok(SuiteReport {
        suite: Suite::ReductionOracle,
        lines,
        passed: failures == 0,
    })
}
