//! Convergence studies toward the claimed limit points, asymptotic-model
//! fits, side-of-approach checks, and the escape-of-mass study for a
//! fixed quadratic subfield.

use crate::big::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::families::{sweep, Family};
use crate::lattice::{classify_boundary, hyperbolic_distance, BoundaryClass, ShapePoint};
use crate::records::{record_shape, FieldRecord};

/// One family member inside a convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceSample {
    pub n: i64,
    pub shape: ShapePoint<BigReal>,
    pub boundary: BoundaryClass<BigReal>,
    /// Hyperbolic distance to the claimed limit point.
    pub distance: BigReal,
    pub cos_theta: BigReal,
}

/// Ordinary least-squares line `y ~ intercept + slope * x`.
#[derive(Debug, Clone)]
pub struct LinearFit {
    pub intercept: BigReal,
    pub slope: BigReal,
}

/// Least squares of `(x_i, y_i)`; needs at least two distinct abscissas.
fn least_squares(xs: &[BigReal], ys: &[BigReal]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "{} points are not enough for a line fit",
            xs.len()
        )));
    }
    let n = xs[0].lift_i64(xs.len() as i64);
    let mut sx = xs[0].lift_i64(0);
    let mut sy = sx.clone();
    let mut sxx = sx.clone();
    let mut sxy = sx.clone();
    for (x, y) in xs.iter().zip(ys) {
        sx = sx + x;
        sy = sy + y;
        sxx = sxx + x.square();
        sxy = sxy + x.clone() * y.clone();
    }
    let det = n.clone() * &sxx - sx.square();
    if det.is_zero() {
        return Err(Error::InsufficientSamples(
            "degenerate abscissas in line fit".into(),
        ));
    }
    let slope = (n.clone() * &sxy - &sx * &sy) / &det;
    let intercept = (sy - slope.clone() * &sx) / &n;
    Ok(LinearFit { intercept, slope })
}

/// Convergence data of one family toward a claimed limit point.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub family: Family,
    pub claimed_limit: ShapePoint<BigReal>,
    /// Sorted ascending by |n|.
    pub samples: Vec<ConvergenceSample>,
    /// Fit of distance against `1 / ln |n|`.
    pub distance_fit: LinearFit,
    /// Fit of `cos(theta)` against `1 / ln |n|`.
    pub cos_fit: LinearFit,
    /// Intercept of the distance fit: the extrapolated distance at the
    /// parameter limit.
    pub extrapolated_limit_distance: BigReal,
}

/// Compute all sieved members with `|n| <= n_max`, their distances to
/// the claimed limit and the `1/ln|n|` line fits.
pub fn convergence_study(
    family: Family,
    n_max: i64,
    claimed_limit: &ShapePoint<BigReal>,
    ctx: &PrecisionContext,
) -> Result<ConvergenceReport> {
    let members = sweep(family, family.min_abs_n(), n_max, ctx)?;
    if members.len() < 5 {
        return Err(Error::InsufficientSamples(format!(
            "{} members of {} with |n| <= {n_max}; need at least 5",
            members.len(),
            family.tag()
        )));
    }
    let mut samples = Vec::with_capacity(members.len());
    for m in &members {
        let shape = m.shape(ctx)?;
        let boundary = classify_boundary(&shape, &ctx.boundary_tol());
        let distance = hyperbolic_distance(&shape, claimed_limit);
        let cos_theta = m.cos_theta(ctx)?;
        samples.push(ConvergenceSample {
            n: m.n,
            shape,
            boundary,
            distance,
            cos_theta,
        });
    }
    let xs: Vec<BigReal> = samples
        .iter()
        .map(|s| ctx.real_from_i64(s.n.abs()).ln().recip())
        .collect();
    let ds: Vec<BigReal> = samples.iter().map(|s| s.distance.clone()).collect();
    let cs: Vec<BigReal> = samples.iter().map(|s| s.cos_theta.clone()).collect();
    let distance_fit = least_squares(&xs, &ds)?;
    let cos_fit = least_squares(&xs, &cs)?;
    let extrapolated = distance_fit.intercept.clone();
    Ok(ConvergenceReport {
        family,
        claimed_limit: claimed_limit.clone(),
        samples,
        distance_fit,
        cos_fit,
        extrapolated_limit_distance: extrapolated,
    })
}

/// Which side the cosine sequence approaches its target from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    FromBelow,
    FromAbove,
    Mixed,
}

/// Side of approach of the `cos(theta)` samples toward `target`,
/// ignoring the smallest 20% of parameters (the "sufficiently large n"
/// allowance). Equality with the target counts as neither side.
pub fn side_of_approach(report: &ConvergenceReport, target: &BigReal) -> Side {
    let n = report.samples.len();
    if n == 0 {
        return Side::Mixed;
    }
    let skip = n.div_ceil(5);
    let considered = &report.samples[skip.min(n - 1)..];
    let mut below = true;
    let mut above = true;
    for s in considered {
        if s.cos_theta >= *target {
            below = false;
        }
        if s.cos_theta <= *target {
            above = false;
        }
    }
    match (below, above) {
        (true, false) => Side::FromBelow,
        (false, true) => Side::FromAbove,
        _ => Side::Mixed,
    }
}

/// One field inside an escape-of-mass study.
#[derive(Debug, Clone)]
pub struct EscapeSample {
    pub label: String,
    pub y: BigReal,
    pub reg_l: BigReal,
    pub disc_magnitude: BigReal,
}

/// Heights of shapes over one fixed real quadratic subfield.
#[derive(Debug, Clone)]
pub struct EscapeReport {
    pub subfield_label: String,
    /// Sorted ascending by discriminant magnitude.
    pub samples: Vec<EscapeSample>,
    /// Minimum over samples of `y / sqrt(ln disc)`.
    pub min_ratio: BigReal,
}

/// Assemble an escape report from precomputed samples.
pub fn escape_report_from_samples(
    subfield_label: String,
    mut samples: Vec<EscapeSample>,
) -> Result<EscapeReport> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples(
            "escape study needs at least 2 fields".into(),
        ));
    }
    samples.sort_by(|a, b| {
        a.disc_magnitude
            .partial_cmp(&b.disc_magnitude)
            .expect("finite discriminants")
    });
    let one = samples[0].y.lift_i64(1);
    let mut min_ratio: Option<BigReal> = None;
    for s in &samples {
        let log_disc = s.disc_magnitude.ln();
        if !(log_disc > one.lift_i64(0)) {
            return Err(Error::Domain(format!(
                "field {}: discriminant magnitude must exceed 1",
                s.label
            )));
        }
        let ratio = &s.y / log_disc.sqrt();
        min_ratio = Some(match min_ratio {
            None => ratio,
            Some(m) => m.min(&ratio),
        });
    }
    Ok(EscapeReport {
        subfield_label,
        samples,
        min_ratio: min_ratio.expect("nonempty samples"),
    })
}

/// Evaluate records sharing one quadratic subfield and study the growth
/// of the shape height `y` with the discriminant.
pub fn escape_study(records: &[FieldRecord], ctx: &PrecisionContext) -> Result<EscapeReport> {
    if records.len() < 2 {
        return Err(Error::InsufficientSamples(
            "escape study needs at least 2 records".into(),
        ));
    }
    let disc0 = records[0].subfield_disc;
    for r in records {
        if r.subfield_disc != disc0 {
            return Err(Error::MixedSubfields(format!(
                "record {} has subfield_disc {} (expected {})",
                r.label, r.subfield_disc, disc0
            )));
        }
    }
    let mut samples = Vec::with_capacity(records.len());
    for r in records {
        let (shape, reg) = record_shape(r, ctx)?;
        samples.push(EscapeSample {
            label: r.label.clone(),
            y: shape.y,
            reg_l: reg.reg_l,
            disc_magnitude: r.disc_magnitude_real(ctx)?,
        });
    }
    escape_report_from_samples(format!("subfield_disc={disc0}"), samples)
}
