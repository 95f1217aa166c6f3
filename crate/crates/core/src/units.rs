//! The logarithmic Minkowski embedding, the Galois action on embeddings,
//! regulators and covolume, the Silverman regulator bound, and the
//! rational-independence surrogate check.
//!
//! A [`LogVector`] is a point of the trace-zero hyperplane of R^3 with
//! coordinates `(log|s1(u)|, log|s2(u)|, 2 log|t(u)|)` for the two real
//! embeddings and the complex place of a unit `u`.

use crate::error::{Error, Result};
use crate::lattice::{gram_from_log_vectors, Gram2};
use crate::real::Real;

/// Logarithmic embedding vector on the sum-zero hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct LogVector<R> {
    pub l1: R,
    pub l2: R,
    pub l3: R,
}

impl<R: Real> LogVector<R> {
    /// Construct from raw coordinates, enforcing the sum-zero invariant at
    /// tolerance `tol` relative to the largest coordinate.
    pub fn from_coords(l1: R, l2: R, l3: R, tol: &R) -> Result<Self> {
        if !(l1.finite() && l2.finite() && l3.finite()) {
            return Err(Error::Numerical("non-finite log coordinates".into()));
        }
        let sum = l1.clone() + l2.clone() + l3.clone();
        let scale = l1
            .abs()
            .max_val(&l2.abs())
            .max_val(&l3.abs())
            .max_val(&l1.lift_i64(1));
        if sum.abs() > tol.clone() * scale.clone() {
            return Err(Error::NotAUnit(format!(
                "coordinates sum to {} relative to scale {}",
                sum.to_f64(),
                scale.to_f64()
            )));
        }
        Ok(LogVector { l1, l2, l3 })
    }

    /// `(a, -a, 0)`: the relative-norm-one pattern. Exact by construction.
    pub fn from_ker_norm(a: R) -> Self {
        let zero = a.lift_i64(0);
        LogVector {
            l1: a.clone(),
            l2: -a,
            l3: zero,
        }
    }

    /// `(c, c, -2c)`: the image of a subfield unit. Exact by construction.
    pub fn from_subfield(c: R) -> Self {
        let minus_two_c = -(c.clone() + c.clone());
        LogVector {
            l1: c.clone(),
            l2: c,
            l3: minus_two_c,
        }
    }

    /// `(a1, a2, -(a1 + a2))`: sum-zero completion of two coordinates.
    pub fn from_sum_zero(a1: R, a2: R) -> Self {
        let l3 = -(a1.clone() + a2.clone());
        LogVector { l1: a1, l2: a2, l3 }
    }

    pub fn dot(&self, o: &Self) -> R {
        self.l1.clone() * o.l1.clone()
            + self.l2.clone() * o.l2.clone()
            + self.l3.clone() * o.l3.clone()
    }

    pub fn norm_sq(&self) -> R {
        self.l1.square() + self.l2.square() + self.l3.square()
    }

    pub fn norm(&self) -> R {
        self.norm_sq().sqrt()
    }

    pub fn add(&self, o: &Self) -> Self {
        LogVector {
            l1: self.l1.clone() + o.l1.clone(),
            l2: self.l2.clone() + o.l2.clone(),
            l3: self.l3.clone() + o.l3.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LogVector {
            l1: self.l1.clone() - o.l1.clone(),
            l2: self.l2.clone() - o.l2.clone(),
            l3: self.l3.clone() - o.l3.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        LogVector {
            l1: -self.l1.clone(),
            l2: -self.l2.clone(),
            l3: -self.l3.clone(),
        }
    }
}

/// Log vector of a unit from the absolute values of its embeddings:
/// `(ln s1, ln s2, 2 ln t_abs)`. Rejects data whose coordinates do not
/// sum to zero (the input is not a unit, or precision is exhausted).
pub fn log_embedding<R: Real>(s1: &R, s2: &R, t_abs: &R, tol: &R) -> Result<LogVector<R>> {
    let zero = s1.lift_i64(0);
    if *s1 <= zero || *s2 <= zero || *t_abs <= zero {
        return Err(Error::Domain(
            "embedding absolute values must be positive".into(),
        ));
    }
    let l1 = s1.ln();
    let l2 = s2.ln();
    let l3 = s1.lift_i64(2) * t_abs.ln();
    LogVector::from_coords(l1, l2, l3, tol)
}

/// The Galois action on embeddings swaps the two real places and
/// conjugates the complex one: `(l1, l2, l3) -> (l2, l1, l3)`.
/// An exact isometric involution.
pub fn galois_swap<R: Clone>(v: &LogVector<R>) -> LogVector<R> {
    LogVector {
        l1: v.l2.clone(),
        l2: v.l1.clone(),
        l3: v.l3.clone(),
    }
}

/// Regulator, covolume and related diagnostics of a rank-2 unit lattice.
#[derive(Debug, Clone)]
pub struct RegulatorReport<R> {
    /// Absolute determinant of the 2x2 minor on the two real embeddings.
    pub reg_l: R,
    /// `sqrt(det Gram)`.
    pub covol: R,
    /// `covol / reg_l`; equals `sqrt(3)` for sum-zero lattices.
    pub covol_ratio: R,
    pub gram: Gram2<R>,
    /// Regulator of the quadratic subfield, when the construction
    /// provides a generator.
    pub reg_k: Option<R>,
    /// Silverman lower bound evaluated at `disc_magnitude`.
    pub silverman_bound: Option<R>,
    pub disc_magnitude: Option<R>,
}

/// Regulator and covolume from a unit basis. The regulator deletes the
/// complex coordinate (classical convention), which makes
/// `covol = sqrt(3) * reg_l` hold identically on the sum-zero hyperplane.
pub fn regulator_from_basis<R: Real>(
    u: &LogVector<R>,
    v: &LogVector<R>,
    det_tol: &R,
) -> Result<RegulatorReport<R>> {
    let gram = gram_from_log_vectors(u, v, det_tol)?;
    let reg_l = (u.l1.clone() * v.l2.clone() - u.l2.clone() * v.l1.clone()).abs();
    if reg_l == u.l1.lift_i64(0) {
        return Err(Error::DegenerateLattice("regulator minor vanishes".into()));
    }
    let covol = gram.det().sqrt();
    let covol_ratio = covol.clone() / reg_l.clone();
    Ok(RegulatorReport {
        reg_l,
        covol,
        covol_ratio,
        gram,
        reg_k: None,
        silverman_bound: None,
        disc_magnitude: None,
    })
}

/// Silverman-style lower bound for the regulator:
/// `2^(-4 d^2) * (ln(d^(-d^(log2 8d)) * disc))^(r - rho)` when the inner
/// logarithm is positive, else 0 (the bound carries no information).
pub fn silverman_lower_bound<R: Real>(
    disc_magnitude: &R,
    degree: u32,
    unit_rank: u32,
    max_subfield_rank: u32,
) -> Result<R> {
    let one = disc_magnitude.lift_i64(1);
    if *disc_magnitude <= one {
        return Err(Error::Domain("discriminant magnitude must exceed 1".into()));
    }
    if degree < 2 || unit_rank <= max_subfield_rank {
        return Err(Error::Domain(
            "need degree >= 2 and unit_rank > max_subfield_rank".into(),
        ));
    }
    let d = disc_magnitude.lift_i64(degree as i64);
    let two = disc_magnitude.lift_i64(2);
    // log2(8d) = ln(8d) / ln 2
    let log2_8d = (disc_magnitude.lift_i64(8 * degree as i64)).ln() / two.ln();
    // ln(d^(-d^log2(8d)) * disc) = ln(disc) - d^(log2 8d) * ln d
    let d_pow = (log2_8d * d.ln()).exp();
    let inner = disc_magnitude.ln() - d_pow * d.ln();
    let zero = disc_magnitude.lift_i64(0);
    if inner <= zero {
        return Ok(zero);
    }
    let neg_4d2 = -4i64 * (degree as i64) * (degree as i64);
    // 2^(-4 d^2)
    let mut lead = one.clone();
    for _ in 0..(-neg_4d2) {
        lead = lead / two.clone();
    }
    let exponent = (unit_rank - max_subfield_rank) as i64;
    let mut pow = one;
    for _ in 0..exponent {
        pow = pow * inner.clone();
    }
    Ok(lead * pow)
}

/// Both sides of the height inequality `y >= (3^(3/4)/2^(3/2)) *
/// sqrt(reg_L) / reg_K`, reported without asserting it.
#[derive(Debug, Clone)]
pub struct YBoundCheck<R> {
    pub lhs: R,
    pub rhs: R,
    pub ratio: R,
    /// Alternative constant `rhs / sqrt(3)` (subfield units embedded with
    /// the `sqrt(6)` normalization instead of `sqrt(2)`).
    pub rhs_alt: R,
}

pub fn y_bound_check<R: Real>(y: &R, reg_l: &R, reg_k: &R) -> Result<YBoundCheck<R>> {
    let zero = y.lift_i64(0);
    if *y <= zero || *reg_l <= zero || *reg_k <= zero {
        return Err(Error::Domain("y-bound inputs must be positive".into()));
    }
    let three = y.lift_i64(3);
    let two = y.lift_i64(2);
    // 3^(3/4) / 2^(3/2)
    let c = three.clone().sqrt() * three.clone().sqrt().sqrt() / (two.clone() * two.sqrt());
    let rhs = c * reg_l.sqrt() / reg_k.clone();
    let rhs_alt = rhs.clone() / three.sqrt();
    Ok(YBoundCheck {
        lhs: y.clone(),
        rhs: rhs.clone(),
        ratio: y.clone() / rhs,
        rhs_alt,
    })
}

/// Finite surrogate for rational linear independence of `a` and `b`:
/// true iff no integer pair `(m, k)` with `0 < max(|m|, |k|) <= bound`
/// satisfies `m a = k b` at tolerance `tol` (relative to `|a| + |b|`).
pub fn q_linear_independence_check<R: Real>(a: &R, b: &R, bound: u32, tol: &R) -> Result<bool> {
    let zero = a.lift_i64(0);
    if a.abs() == zero || b.abs() == zero {
        return Err(Error::Domain(
            "independence check needs nonzero coefficients".into(),
        ));
    }
    let aa = a.abs();
    let bb = b.abs();
    let scale = (aa.clone() + bb.clone()) * tol.clone();
    for m in 0..=bound as i64 {
        for k in 0..=bound as i64 {
            if m == 0 && k == 0 {
                continue;
            }
            let diff = (aa.lift_i64(m) * aa.clone() - bb.lift_i64(k) * bb.clone()).abs();
            if diff <= scale.clone() * aa.lift_i64(m.max(k).max(1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big::PrecisionContext;
    use crate::lattice::shape_from_basis;

    #[test]
    fn log_embedding_examples() {
        let e = std::f64::consts::E;
        let v = log_embedding(&e, &(1.0 / e), &1.0, &1e-12).unwrap();
        assert!((v.l1 - 1.0).abs() < 1e-14);
        assert!((v.l2 + 1.0).abs() < 1e-14);
        assert_eq!(v.l3, 0.0);
        let w = log_embedding(&e, &e, &(1.0 / e), &1e-12).unwrap();
        assert!((w.l3 + 2.0).abs() < 1e-13);
        assert!(matches!(
            log_embedding(&2.0, &2.0, &2.0, &1e-12),
            Err(Error::NotAUnit(_))
        ));
        assert!(log_embedding(&-1.0, &2.0, &2.0, &1e-12).is_err());
    }

    #[test]
    fn galois_swap_is_exact_isometric_involution() {
        let v = LogVector::from_coords(1.0, -1.0, 0.0, &1e-12).unwrap();
        let s = galois_swap(&v);
        assert_eq!((s.l1, s.l2, s.l3), (-1.0, 1.0, 0.0));
        let fixed = LogVector::from_coords(1.0, 1.0, -2.0, &1e-12).unwrap();
        let sf = galois_swap(&fixed);
        assert_eq!((sf.l1, sf.l2, sf.l3), (1.0, 1.0, -2.0));
        // Involution and isometry are exact on raw coordinates.
        let ctx = PrecisionContext::default();
        let w = LogVector::from_sum_zero(ctx.real_from_i64(7).sqrt(), ctx.real_from_i64(3).ln());
        let back = galois_swap(&galois_swap(&w));
        assert_eq!(w, back);
        assert_eq!(w.norm_sq(), galois_swap(&w).norm_sq());
    }

    #[test]
    fn regulator_examples() {
        let u = LogVector::from_coords(1.0, -1.0, 0.0, &1e-12).unwrap();
        let v = LogVector::from_coords(1.0, 1.0, -2.0, &1e-12).unwrap();
        let r = regulator_from_basis(&u, &v, &1e-10).unwrap();
        assert!((r.reg_l - 2.0).abs() < 1e-14);
        assert!((r.covol - 12f64.sqrt()).abs() < 1e-14);
        assert!((r.covol_ratio - 3f64.sqrt()).abs() < 1e-14);

        let w = LogVector::from_coords(2.0, -2.0, 0.0, &1e-12).unwrap();
        assert!(matches!(
            regulator_from_basis(&u, &w, &1e-10),
            Err(Error::DegenerateLattice(_))
        ));
    }

    #[test]
    fn covol_identity_on_random_sum_zero_vectors() {
        // covol = sqrt(3) * reg holds identically on the hyperplane.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..200 {
            let u = LogVector::from_sum_zero(next() * 4.0, next() * 4.0);
            let v = LogVector::from_sum_zero(next() * 4.0, next() * 4.0);
            if let Ok(r) = regulator_from_basis(&u, &v, &1e-10) {
                assert!(
                    (r.covol_ratio - 3f64.sqrt()).abs() < 1e-9,
                    "ratio {}",
                    r.covol_ratio
                );
            }
        }
    }

    #[test]
    fn silverman_examples() {
        let ctx = PrecisionContext::default();
        // Desk-scale discriminant: bound is vacuous (0).
        let b = silverman_lower_bound(&ctx.real_from_f64(1e6), 4, 2, 1).unwrap();
        assert!(b.is_zero());
        // disc = exp(2000): 2^-64 * (2000 - 1024 ln 4).
        let disc = ctx.real_from_i64(2000).exp();
        let b = silverman_lower_bound(&disc, 4, 2, 1).unwrap();
        let expect = ctx.pow2(-64)
            * (ctx.real_from_i64(2000) - ctx.real_from_i64(1024) * ctx.real_from_i64(4).ln());
        let rel = ((&b - &expect).abs()) / expect.abs();
        assert!(rel < ctx.rel_eps(16), "rel error {}", rel.to_f64());
        // r = rho is rejected; exponent-zero case via r - rho = 0 forbidden.
        assert!(silverman_lower_bound(&disc, 4, 2, 2).is_err());
        // Exponent zero is modelled by unit_rank - max_subfield_rank = 0,
        // which the preconditions exclude; nearest valid case:
        let b = silverman_lower_bound(&disc, 2, 1, 0).unwrap();
        assert!(b.is_positive());
        assert!(silverman_lower_bound(&ctx.real_from_f64(0.5), 4, 2, 1).is_err());
    }

    #[test]
    fn y_bound_example_values() {
        let y = 3f64.sqrt();
        let r = y_bound_check(&y, &2.0, &1.0).unwrap();
        // rhs = 3^(3/4) sqrt(2) / 2^(3/2) = 3^(3/4) / 2
        let expect_rhs = 3f64.powf(0.75) / 2.0;
        assert!((r.rhs - expect_rhs).abs() < 1e-12);
        // ratio = sqrt(3) / rhs = 2 * 3^(-1/4)
        let expect_ratio = 2.0 * 3f64.powf(-0.25);
        assert!((r.ratio - expect_ratio).abs() < 1e-12);
        assert!(r.ratio >= 1.0);
        // Ratio grows linearly in reg_K.
        let r10 = y_bound_check(&y, &2.0, &10.0).unwrap();
        assert!((r10.ratio / r.ratio - 10.0).abs() < 1e-9);
        // Alternative constant differs by sqrt(3).
        assert!((r.rhs / r.rhs_alt - 3f64.sqrt()).abs() < 1e-12);
        assert!(y_bound_check(&y, &-1.0, &1.0).is_err());
    }

    #[test]
    fn q_linear_independence_examples() {
        assert!(!q_linear_independence_check(&1.0, &1.0, 50, &1e-9).unwrap());
        let a = 2f64.ln();
        let b = 3f64.ln();
        assert!(q_linear_independence_check(&a, &b, 50, &1e-9).unwrap());
        // 3 ln 2 = ln 8: dependent pair caught at m=3, k=1 scale.
        assert!(!q_linear_independence_check(&(8f64.ln()), &(2f64.ln()), 50, &1e-9).unwrap());
        assert!(q_linear_independence_check(&0.0, &1.0, 10, &1e-9).is_err());
    }

    #[test]
    fn ker_norm_and_subfield_lengths() {
        // |(a,-a,0)| = sqrt(2)|a| and |(c,c,-2c)| = sqrt(6)|c|, exactly in
        // the squared form.
        let ctx = PrecisionContext::default();
        let a = ctx.real_from_i64(5).ln();
        let u = LogVector::from_ker_norm(a.clone());
        let expect = ctx.real_from_i64(2) * a.square();
        assert_eq!(u.norm_sq(), expect);
        let c = ctx.real_from_i64(7).ln();
        let v = LogVector::from_subfield(c.clone());
        let expect = ctx.real_from_i64(6) * c.square();
        assert_eq!(v.norm_sq(), expect);
        // Orthogonality of the two patterns is exact.
        assert!(u.dot(&v).is_zero());
    }

    #[test]
    fn shape_of_orthogonal_big_basis() {
        let ctx = PrecisionContext::default();
        let u = LogVector::from_ker_norm(ctx.real_from_i64(2).ln());
        let v = LogVector::from_subfield(ctx.real_from_i64(3).ln());
        let p = shape_from_basis(&u, &v, &ctx.det_tol(), &ctx.boundary_tol(), ctx.bits()).unwrap();
        assert!(p.x.is_zero() || p.x.to_f64() < 1e-70);
    }
}
