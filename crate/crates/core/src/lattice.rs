//! Rank-2 lattice geometry: Gram matrices, Lagrange reduction, the map to
//! the standard fundamental domain of `GL2(Z) \ H`, boundary
//! classification and hyperbolic distance.
//!
//! The fundamental domain is the reflection-folded region
//! `0 <= x <= 1/2`, `x^2 + y^2 >= 1` of the upper half plane.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::units::LogVector;

/// Symmetric positive-definite 2x2 Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram2<R> {
    pub g11: R,
    pub g12: R,
    pub g22: R,
}

impl<R: Real> Gram2<R> {
    /// Construct with a positive-definiteness check.
    pub fn new(g11: R, g12: R, g22: R) -> Result<Self> {
        let g = Gram2 { g11, g12, g22 };
        if !(g.g11.finite() && g.g12.finite() && g.g22.finite()) {
            return Err(Error::Numerical("non-finite gram entry".into()));
        }
        let zero = g.g11.lift_i64(0);
        if g.g11 <= zero || g.g22 <= zero || g.det() <= zero {
            return Err(Error::DegenerateLattice(
                "gram matrix is not positive definite".into(),
            ));
        }
        Ok(g)
    }

    pub fn det(&self) -> R {
        self.g11.clone() * self.g22.clone() - self.g12.square()
    }

    /// Uniform scaling of the underlying lattice by `c > 0` scales the
    /// Gram matrix by `c`.
    pub fn scaled(&self, c: &R) -> Self {
        Gram2 {
            g11: self.g11.clone() * c.clone(),
            g12: self.g12.clone() * c.clone(),
            g22: self.g22.clone() * c.clone(),
        }
    }

    /// Cosine of the basis angle.
    pub fn cos_angle(&self) -> R {
        self.g12.clone() / (self.g11.clone() * self.g22.clone()).sqrt()
    }

    /// `M G M^T` for an integer basis change `M`.
    pub fn transformed(&self, m: &Unimodular) -> Self {
        let a = self.g11.lift_i64(m.a);
        let b = self.g11.lift_i64(m.b);
        let c = self.g11.lift_i64(m.c);
        let d = self.g11.lift_i64(m.d);
        let r1g1 = a.clone() * self.g11.clone() + b.clone() * self.g12.clone();
        let r1g2 = a.clone() * self.g12.clone() + b.clone() * self.g22.clone();
        let r2g1 = c.clone() * self.g11.clone() + d.clone() * self.g12.clone();
        let r2g2 = c.clone() * self.g12.clone() + d.clone() * self.g22.clone();
        Gram2 {
            g11: r1g1.clone() * a.clone() + r1g2.clone() * b.clone(),
            g12: r1g1 * c.clone() + r1g2 * d.clone(),
            g22: r2g1 * c + r2g2 * d,
        }
    }
}

/// Integer 2x2 basis transform with determinant +-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = Unimodular { a, b, c, d };
        if m.det().abs() != 1 {
            return Err(Error::Domain(format!("matrix {m:?} is not unimodular")));
        }
        Ok(m)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    fn swap_rows(&mut self) {
        std::mem::swap(&mut self.a, &mut self.c);
        std::mem::swap(&mut self.b, &mut self.d);
    }

    fn sub_row1_from_row2(&mut self, mu: i64) {
        self.c -= mu * self.a;
        self.d -= mu * self.b;
    }

    fn negate_row2(&mut self) {
        self.c = -self.c;
        self.d = -self.d;
    }
}

/// Point of the closed fundamental domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapePoint<R> {
    pub x: R,
    pub y: R,
    pub precision_bits: u32,
}

impl<R: Real> ShapePoint<R> {
    pub fn new(x: R, y: R, precision_bits: u32) -> Result<Self> {
        if !(x.finite() && y.finite()) {
            return Err(Error::Numerical("non-finite shape coordinates".into()));
        }
        if y <= y.lift_i64(0) {
            return Err(Error::Domain("shape point must have y > 0".into()));
        }
        Ok(ShapePoint {
            x,
            y,
            precision_bits,
        })
    }

    /// `x^2 + y^2`, squared distance from the origin.
    pub fn norm_sq(&self) -> R {
        self.x.square() + self.y.square()
    }
}

/// Boundary component of the fundamental domain, or interior with the
/// minimal hyperbolic distance to the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryClass<R> {
    /// Left vertical line `x = 0`, `y >= 1`.
    LeftLine,
    /// Lower arc `x^2 + y^2 = 1`.
    LowerArc,
    /// Right vertical line `x = 1/2`.
    RightLine,
    /// One of the corner points `i` or `1/2 + i sqrt(3)/2`.
    Cusp(CuspKind),
    Interior(R),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspKind {
    /// The point `i`.
    I,
    /// The point `1/2 + i sqrt(3)/2`.
    Corner,
}

impl<R> BoundaryClass<R> {
    pub fn is_interior(&self) -> bool {
        matches!(self, BoundaryClass::Interior(_))
    }

    /// Stable lowercase token for reports and CSV.
    pub fn token(&self) -> &'static str {
        match self {
            BoundaryClass::LeftLine => "left-line",
            BoundaryClass::LowerArc => "lower-arc",
            BoundaryClass::RightLine => "right-line",
            BoundaryClass::Cusp(CuspKind::I) => "cusp-i",
            BoundaryClass::Cusp(CuspKind::Corner) => "cusp-corner",
            BoundaryClass::Interior(_) => "interior",
        }
    }
}

/// Gram matrix of two logarithmic embedding vectors under the ambient
/// Euclidean metric of R^3.
pub fn gram_from_log_vectors<R: Real>(
    u: &LogVector<R>,
    v: &LogVector<R>,
    det_tol: &R,
) -> Result<Gram2<R>> {
    let g11 = u.norm_sq();
    let g22 = v.norm_sq();
    let g12 = u.dot(v);
    let det = g11.clone() * g22.clone() - g12.square();
    if det <= det_tol.clone() * g11.clone() * g22.clone() {
        return Err(Error::DegenerateLattice(
            "log vectors are linearly dependent".into(),
        ));
    }
    Gram2::new(g11, g12, g22)
}

/// Lagrange-Gauss reduction of a positive-definite Gram matrix.
///
/// Returns the reduced Gram matrix (satisfying `g11 <= g22` and
/// `2|g12| <= g11`) together with the basis transform that produces it.
/// Ties (`g11 == g22` or `2|g12| == g11`) are canonicalized to `g12 <= 0`
/// so the output is deterministic.
pub fn lagrange_reduce<R: Real>(g: &Gram2<R>) -> Result<(Gram2<R>, Unimodular)> {
    let zero = g.g11.lift_i64(0);
    if g.g11 <= zero || g.g22 <= zero || g.det() <= zero {
        return Err(Error::DegenerateLattice(
            "cannot reduce a non positive-definite gram matrix".into(),
        ));
    }
    let mut g11 = g.g11.clone();
    let mut g12 = g.g12.clone();
    let mut g22 = g.g22.clone();
    let mut u = Unimodular::IDENTITY;
    let two = g.g11.lift_i64(2);
    for _ in 0..10_000 {
        if g11 > g22 {
            std::mem::swap(&mut g11, &mut g22);
            u.swap_rows();
        }
        let mu = (g12.clone() / g11.clone()).round_i64();
        if mu != 0 {
            let mu_r = g11.lift_i64(mu);
            let new_g12 = g12.clone() - mu_r.clone() * g11.clone();
            let new_g22 = g22.clone() - two.clone() * mu_r.clone() * g12.clone()
                + mu_r.square() * g11.clone();
            g12 = new_g12;
            g22 = new_g22;
            u.sub_row1_from_row2(mu);
        }
        if g22 >= g11 && two.clone() * g12.abs() <= g11 {
            // Canonical representative: prefer g12 <= 0 on ties.
            if g12 > zero {
                let on_reduction_boundary = two.clone() * g12.clone() == g11;
                if on_reduction_boundary {
                    g12 = -g12;
                    u.sub_row1_from_row2(1);
                } else if g11 == g22 {
                    g12 = -g12;
                    u.negate_row2();
                }
            }
            let reduced = Gram2 { g11, g12, g22 };
            debug_assert!(u.det().abs() == 1);
            return Ok((reduced, u));
        }
    }
    Err(Error::Numerical(
        "lagrange reduction did not terminate".into(),
    ))
}

/// Fundamental-domain coordinates of a Lagrange-reduced Gram matrix:
/// `x = |g12| / g11`, `y = sqrt(det) / g11`, with the sign of `g12`
/// folded away by the reflection.
pub fn tau_from_reduced_gram<R: Real>(
    g: &Gram2<R>,
    tol: &R,
    precision_bits: u32,
) -> Result<ShapePoint<R>> {
    let one = g.g11.lift_i64(1);
    let two = g.g11.lift_i64(2);
    let slack = one.clone() + tol.clone();
    if g.g11 > g.g22.clone() * slack.clone() || two * g.g12.abs() > g.g11.clone() * slack {
        return Err(Error::NotReduced(
            "gram matrix violates the reduction inequalities".into(),
        ));
    }
    let half = one.lift_ratio(1, 2);
    let x = (g.g12.abs() / g.g11.clone()).min_val(&half);
    let y = g.det().sqrt() / g.g11.clone();
    ShapePoint::new(x, y, precision_bits)
}

/// Shape of the lattice spanned by two log vectors: Gram, reduction and
/// the fundamental-domain map composed. Invariant under unimodular basis
/// change and overall scaling.
pub fn shape_from_basis<R: Real>(
    u: &LogVector<R>,
    v: &LogVector<R>,
    det_tol: &R,
    tol: &R,
    precision_bits: u32,
) -> Result<ShapePoint<R>> {
    let gram = gram_from_log_vectors(u, v, det_tol)?;
    let (reduced, _) = lagrange_reduce(&gram)?;
    tau_from_reduced_gram(&reduced, tol, precision_bits)
}

/// Hyperbolic distance in the upper half plane,
/// `acosh(1 + (dx^2 + dy^2) / (2 y1 y2))`.
pub fn hyperbolic_distance<R: Real>(p: &ShapePoint<R>, q: &ShapePoint<R>) -> R {
    let dx = p.x.clone() - q.x.clone();
    let dy = p.y.clone() - q.y.clone();
    let two = p.x.lift_i64(2);
    let u = (dx.square() + dy.square()) / (two.clone() * p.y.clone() * q.y.clone());
    // acosh(1 + u) = ln(1 + u + sqrt(u (u + 2))), cancellation-free.
    let one = p.x.lift_i64(1);
    (one + u.clone() + (u.clone() * (u + two)).sqrt()).ln()
}

/// Classify a point of the fundamental domain against its boundary.
///
/// Tie order: cusp before left line before right line before lower arc.
/// Cusp detection uses hyperbolic balls of radius `tol`; the line and arc
/// tests compare coordinates at tolerance `tol`.
pub fn classify_boundary<R: Real>(p: &ShapePoint<R>, tol: &R) -> BoundaryClass<R> {
    let zero = p.x.lift_i64(0);
    let one = p.x.lift_i64(1);
    let two = p.x.lift_i64(2);
    let half = p.x.lift_ratio(1, 2);
    let pb = p.precision_bits;

    let cusp_i = ShapePoint {
        x: zero.clone(),
        y: one.clone(),
        precision_bits: pb,
    };
    let corner_y = p.x.lift_i64(3).sqrt() / two.clone();
    let corner = ShapePoint {
        x: half.clone(),
        y: corner_y,
        precision_bits: pb,
    };
    if hyperbolic_distance(p, &cusp_i) <= tol.clone() {
        return BoundaryClass::Cusp(CuspKind::I);
    }
    if hyperbolic_distance(p, &corner) <= tol.clone() {
        return BoundaryClass::Cusp(CuspKind::Corner);
    }
    if p.x <= tol.clone() && p.y >= one.clone() - tol.clone() {
        return BoundaryClass::LeftLine;
    }
    if (p.x.clone() - half.clone()).abs() <= tol.clone() {
        return BoundaryClass::RightLine;
    }
    let arc_residual = (p.norm_sq() - one).abs();
    if arc_residual <= tol.clone() {
        return BoundaryClass::LowerArc;
    }
    // Interior: minimal hyperbolic distance to the three components.
    let d_left = (p.x.clone() / p.y.clone()).asinh_ln();
    let d_right = ((half - p.x.clone()).abs() / p.y.clone()).asinh_ln();
    let d_arc = (arc_residual / (two * p.y.clone())).asinh_ln();
    BoundaryClass::Interior(d_left.min_val(&d_right).min_val(&d_arc))
}
