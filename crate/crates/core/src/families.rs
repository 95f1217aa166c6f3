//! The four parametrized families of quartic fields with explicit unit
//! bases, their parameter sieves, and member construction.
//!
//! Each member carries the pair of logarithmic embedding vectors of its
//! unit basis plus a witness record of the intermediate quantities used
//! to build it (radical and root values, embedding logarithms, the
//! closed-form basis angle where the construction defines one).

use rayon::prelude::*;

use crate::big::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::integer::{
    is_perfect_square, is_prime, is_squarefree, product_is_squarefree, squarefree_part,
};
use crate::lattice::{shape_from_basis, ShapePoint};
use crate::roots::{
    bigint_to_real, lps_embedding_logs, lps_quadratic_roots, pure_quartic_logs,
    quartic_discriminant, reciprocal_quartic_roots,
};
use crate::units::{galois_swap, LogVector};

/// The four unit-basis constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Pure quartic `omega^4 = n^4 + n^3`, `n` prime with `n + 1` squarefree.
    StenderCube,
    /// Pure quartic `omega^4 = n^4 - 1` with `n^4 - 1` squarefree.
    StenderMinusOne,
    /// Quartic `x^4 - n x^3 + (1-n) x^2 - 2x + 1`, `n <= -5` with
    /// `(4n+17)(n^2-4)` squarefree.
    Lps,
    /// Reciprocal quartic `x^4 - n x^3 + 3 x^2 - n x + 1`, odd `n > 3`.
    Nakamula,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::StenderCube,
        Family::StenderMinusOne,
        Family::Lps,
        Family::Nakamula,
    ];

    /// Stable lowercase tag used by the CLI and CSV output.
    pub fn tag(&self) -> &'static str {
        match self {
            Family::StenderCube => "stender-cube",
            Family::StenderMinusOne => "stender-minus-one",
            Family::Lps => "lps",
            Family::Nakamula => "nakamula",
        }
    }

    pub fn from_tag(s: &str) -> Option<Family> {
        match s {
            "stender-cube" => Some(Family::StenderCube),
            "stender-minus-one" => Some(Family::StenderMinusOne),
            "lps" => Some(Family::Lps),
            "nakamula" => Some(Family::Nakamula),
            _ => None,
        }
    }

    /// Smallest valid |n| of the family.
    pub fn min_abs_n(&self) -> i64 {
        match self {
            Family::StenderCube | Family::StenderMinusOne => 2,
            Family::Lps => 5,
            Family::Nakamula => 5,
        }
    }

    /// Parameters are negative for the `Lps` family.
    pub fn signed_range(&self, abs_lo: i64, abs_hi: i64) -> (i64, i64) {
        match self {
            Family::Lps => (-abs_hi, -abs_lo),
            _ => (abs_lo, abs_hi),
        }
    }

    /// The limit point of the family's shapes in the fundamental domain.
    pub fn claimed_limit(&self, ctx: &PrecisionContext) -> ShapePoint<BigReal> {
        let sqrt3 = ctx.real_from_i64(3).sqrt();
        let (x, y) = match self {
            Family::StenderCube | Family::Nakamula => (ctx.real_zero(), sqrt3),
            Family::StenderMinusOne => (
                ctx.real_one() / ctx.real_from_i64(7),
                ctx.real_from_i64(4) * &sqrt3 / ctx.real_from_i64(7),
            ),
            Family::Lps => (
                ctx.real_one() / ctx.real_from_i64(2),
                sqrt3 / ctx.real_from_i64(2),
            ),
        };
        ShapePoint {
            x,
            y,
            precision_bits: ctx.bits(),
        }
    }

    /// The limit of the closed-form basis-angle cosine, where defined.
    pub fn claimed_cos_limit(&self, ctx: &PrecisionContext) -> Option<BigReal> {
        match self {
            Family::StenderMinusOne => Some(-(ctx.real_one() / ctx.real_from_i64(7))),
            Family::Lps => Some(ctx.real_one() / ctx.real_from_i64(2)),
            _ => None,
        }
    }
}

/// True iff `n` satisfies every hypothesis of the family's unit-basis
/// theorem.
pub fn satisfies(family: Family, n: i64) -> bool {
    match family {
        Family::StenderCube => {
            n >= 2
                && is_prime(n as u64)
                && is_squarefree(n + 1).unwrap_or(false)
                && !stender_cube_excluded(n)
        }
        Family::StenderMinusOne => {
            n >= 2 && product_is_squarefree(&[n - 1, n + 1, n * n + 1], 2).unwrap_or(false)
        }
        Family::Lps => {
            n <= -5 && product_is_squarefree(&[4 * n + 17, n - 2, n + 2], 5).unwrap_or(false)
        }
        Family::Nakamula => {
            if n <= 3 {
                return false;
            }
            let m = n * n - 4;
            let w = 25 - 4 * n * n;
            m.rem_euclid(4) == 1
                && w.rem_euclid(4) == 1
                && !is_perfect_square(m)
                && !is_perfect_square(w)
                && squarefree_part(m).unwrap_or(0) != squarefree_part(w).unwrap_or(0)
        }
    }
}

fn stender_cube_excluded(n: i64) -> bool {
    let w4 = (n as i128).pow(4) + (n as i128).pow(3);
    w4 == 8 || w4 == 12 || w4 == 20
}

/// All valid parameters in the inclusive range, ascending by |n|.
pub fn sieve(family: Family, lo: i64, hi: i64) -> Vec<i64> {
    if lo > hi {
        return Vec::new();
    }
    let mut out: Vec<i64> = (lo..=hi).filter(|&n| satisfies(family, n)).collect();
    out.sort_by_key(|n| (n.abs(), *n));
    out
}

/// Intermediate values recorded during member construction.
#[derive(Debug, Clone)]
pub struct Witness {
    /// Radical `omega` for the pure quartic families.
    pub omega: Option<BigReal>,
    /// Dominant real root / subfield surd for the Lps and Nakamula families.
    pub eps: Option<BigReal>,
    /// Real-embedding logarithms of the Lps unit.
    pub a1: Option<BigReal>,
    pub a2: Option<BigReal>,
    /// Closed-form basis-angle cosine, where the construction defines one.
    pub cos_theta: Option<BigReal>,
    /// Dot product of the two basis vectors for orthogonal constructions.
    pub orth_residual: Option<BigReal>,
    /// Set when the orthogonal ratio came out below one and the shape was
    /// produced by the general reduction instead of the direct quotient.
    pub ratio_below_one: bool,
}

impl Witness {
    fn empty() -> Self {
        Witness {
            omega: None,
            eps: None,
            a1: None,
            a2: None,
            cos_theta: None,
            orth_residual: None,
            ratio_below_one: false,
        }
    }
}

/// A validated family parameter with its unit-basis log vectors.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub family: Family,
    pub n: i64,
    /// Radicand offset for the pure quartic families (`n^3` or `1`).
    pub d: i64,
    pub basis: (LogVector<BigReal>, LogVector<BigReal>),
    pub witness: Witness,
    /// Magnitude of the defining polynomial's discriminant.
    pub disc_estimate: BigReal,
}

impl FamilyMember {
    /// Shape of the member's unit lattice in the fundamental domain.
    pub fn shape(&self, ctx: &PrecisionContext) -> Result<ShapePoint<BigReal>> {
        shape_from_basis(
            &self.basis.0,
            &self.basis.1,
            &ctx.det_tol(),
            &ctx.boundary_tol(),
            ctx.bits(),
        )
    }

    /// Basis-angle cosine recomputed from the Gram matrix.
    pub fn gram_cos_theta(&self, ctx: &PrecisionContext) -> Result<BigReal> {
        let g =
            crate::lattice::gram_from_log_vectors(&self.basis.0, &self.basis.1, &ctx.det_tol())?;
        Ok(g.cos_angle())
    }

    /// The closed-form cosine when defined, else the Gram-matrix cosine.
    pub fn cos_theta(&self, ctx: &PrecisionContext) -> Result<BigReal> {
        match &self.witness.cos_theta {
            Some(c) => Ok(c.clone()),
            None => self.gram_cos_theta(ctx),
        }
    }

    /// Regulator report with the member-level diagnostics filled in:
    /// the subfield regulator (from the recorded subfield unit), the
    /// Silverman bound at the member's discriminant, and the
    /// discriminant itself.
    pub fn regulator_report(
        &self,
        ctx: &PrecisionContext,
    ) -> Result<crate::units::RegulatorReport<BigReal>> {
        let mut rep =
            crate::units::regulator_from_basis(&self.basis.0, &self.basis.1, &ctx.det_tol())?;
        // Subfield-unit logarithm: the (c, c, -2c) vector of the
        // construction embeds a unit of the quadratic subfield whose
        // subfield logarithm is c. This is a multiple of the subfield
        // regulator, recorded as a diagnostic.
        let (_, sub) = self.trans_pair();
        rep.reg_k = Some(sub.l1.abs());
        rep.silverman_bound = Some(crate::units::silverman_lower_bound(
            &self.disc_estimate,
            4,
            2,
            1,
        )?);
        rep.disc_magnitude = Some(self.disc_estimate.clone());
        Ok(rep)
    }

    /// The member basis rewritten as a (relative-norm-one, subfield-unit)
    /// pair for the rational-independence check.
    pub fn trans_pair(&self) -> (LogVector<BigReal>, LogVector<BigReal>) {
        match self.family {
            Family::StenderCube | Family::Nakamula => (self.basis.0.clone(), self.basis.1.clone()),
            Family::StenderMinusOne | Family::Lps => (
                self.basis.0.sub(&self.basis.1),
                self.basis.0.add(&self.basis.1),
            ),
        }
    }

    /// Defining polynomial, ascending coefficients, monic quartic.
    pub fn defining_poly(&self) -> [i64; 5] {
        match self.family {
            Family::StenderCube => {
                let m = self.n.pow(4) + self.n.pow(3);
                [-m, 0, 0, 0, 1]
            }
            Family::StenderMinusOne => {
                let m = self.n.pow(4) - 1;
                [-m, 0, 0, 0, 1]
            }
            Family::Lps => [1, -2, 1 - self.n, -self.n, 1],
            Family::Nakamula => [1, -self.n, 3, -self.n, 1],
        }
    }

    /// Discriminant of the (unique) real quadratic subfield, where the
    /// construction pins it down.
    pub fn subfield_disc(&self) -> i64 {
        match self.family {
            // Q(sqrt(n^4 + n^3)) = Q(sqrt(n (n + 1))) for prime n.
            Family::StenderCube => quad_field_disc(self.n * (self.n + 1)),
            Family::StenderMinusOne => {
                // n^4 - 1 is squarefree for sieved members, so it is its
                // own squarefree part (factoring it would cost n^2 steps).
                let m = self.n.pow(4) - 1;
                if m.rem_euclid(4) == 1 {
                    m
                } else {
                    4 * m
                }
            }
            Family::Lps | Family::Nakamula => quad_field_disc(self.n * self.n - 4),
        }
    }
}

/// Discriminant of `Q(sqrt(m))`: the squarefree part `d` of `m`, times 4
/// unless `d = 1 mod 4`.
pub fn quad_field_disc(m: i64) -> i64 {
    let d = squarefree_part(m).expect("nonzero radicand");
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

fn disc_magnitude(poly: &[i64; 5], ctx: &PrecisionContext) -> Result<BigReal> {
    let d = quartic_discriminant(poly)?;
    Ok(bigint_to_real(&d, ctx).abs())
}

/// Member of the `n^4 + n^3` pure quartic family. Basis
/// `{u, v u^-2}` with `u = (omega+n)/(omega-n)`, `v = n^3/(omega-n)^4`,
/// which is orthogonal with patterns `(A, -A, 0)` and `(c, c, -2c)`.
pub fn stender_cube_member(n: i64, ctx: &PrecisionContext) -> Result<FamilyMember> {
    if !(n >= 2 && is_prime(n as u64) && is_squarefree(n + 1)?) {
        return Err(Error::Domain(format!(
            "n = {n} fails the sieve (prime with squarefree n+1)"
        )));
    }
    if stender_cube_excluded(n) {
        return Err(Error::ExcludedCase(format!(
            "omega^4 = {} is one of the excluded radicands",
            n.pow(4) + n.pow(3)
        )));
    }
    let d = n.pow(3);
    let logs = pure_quartic_logs(n, d, 1, ctx)?;
    let a = &logs.log_omega_plus_n - &logs.log_omega_minus_n;
    let c = ctx.real_from_i64(3) * ctx.real_from_i64(n).ln()
        - ctx.real_from_i64(2) * &logs.log_omega_minus_n
        - ctx.real_from_i64(2) * &logs.log_omega_plus_n;
    let u = LogVector::from_ker_norm(a);
    let v1 = LogVector::from_subfield(c);
    let orth = u.dot(&v1);
    let mut witness = Witness::empty();
    witness.omega = Some(logs.omega.clone());
    witness.orth_residual = Some(orth);
    let disc = disc_magnitude(&[-(n.pow(4) + n.pow(3)), 0, 0, 0, 1], ctx)?;
    Ok(FamilyMember {
        family: Family::StenderCube,
        n,
        d,
        basis: (u, v1),
        witness,
        disc_estimate: disc,
    })
}

/// Member of the `n^4 - 1` pure quartic family. Basis
/// `{u v^-1, v^-1}` with `u = (omega+n)/(omega-n)`, `v = 1/(omega-n)`;
/// the two vectors are coordinate swaps of each other and have equal
/// length.
pub fn stender_minus_one_member(n: i64, ctx: &PrecisionContext) -> Result<FamilyMember> {
    if !(n >= 2 && product_is_squarefree(&[n - 1, n + 1, n * n + 1], 2)?) {
        return Err(Error::Domain(format!(
            "n = {n} fails the sieve (n^4 - 1 squarefree)"
        )));
    }
    let logs = pure_quartic_logs(n, 1, -1, ctx)?;
    let p = logs.log_omega_plus_n.clone();
    let q = logs.log_omega_minus_n.clone();
    let r = logs.log_i_omega_plus_n.clone();
    let u1 = LogVector::from_sum_zero(p.clone(), q.clone());
    let v1 = galois_swap(&u1);
    let four_r_sq = ctx.real_from_i64(4) * r.square();
    let cos =
        (ctx.real_from_i64(2) * &p * &q + &four_r_sq) / (p.square() + q.square() + &four_r_sq);
    let mut witness = Witness::empty();
    witness.omega = Some(logs.omega.clone());
    witness.cos_theta = Some(cos);
    let disc = disc_magnitude(&[-(n.pow(4) - 1), 0, 0, 0, 1], ctx)?;
    Ok(FamilyMember {
        family: Family::StenderMinusOne,
        n,
        d: 1,
        basis: (u1, v1),
        witness,
        disc_estimate: disc,
    })
}

/// Member of the parametrized quartic family for `n <= -5`. Basis
/// `{Log(rho), sigma(Log(rho))}` with `Log(rho) = (a1, a2, -a1-a2)` from
/// the real-embedding logarithms of the closed-form quadratic roots.
pub fn lps_member(n: i64, ctx: &PrecisionContext) -> Result<FamilyMember> {
    if !satisfies(Family::Lps, n) {
        return Err(Error::Domain(format!(
            "n = {n} fails the sieve ((4n+17)(n^2-4) squarefree, n <= -5)"
        )));
    }
    let roots = lps_quadratic_roots(n, ctx)?;
    let (a1, a2) = lps_embedding_logs(n, ctx)?;
    let u = LogVector::from_sum_zero(a1.clone(), a2.clone());
    let v = galois_swap(&u);
    let s12 = (&a1 + &a2).square();
    let cos = (ctx.real_from_i64(2) * &a1 * &a2 + &s12) / (a1.square() + a2.square() + &s12);
    let mut witness = Witness::empty();
    witness.eps = Some(roots.eps.clone());
    witness.a1 = Some(a1);
    witness.a2 = Some(a2);
    witness.cos_theta = Some(cos);
    let disc = disc_magnitude(&[1, -2, 1 - n, -n, 1], ctx)?;
    Ok(FamilyMember {
        family: Family::Lps,
        n,
        d: 0,
        basis: (u, v),
        witness,
        disc_estimate: disc,
    })
}

/// Member of the reciprocal quartic family for odd `n > 3`. Basis
/// `{Log(rho), Log(rho + rho^-1)}` with patterns `(log eps, -log eps, 0)`
/// and `(b, b, -2b)`, `b = log(eps + eps^-1)`; an orthogonal lattice.
pub fn nakamula_member(n: i64, ctx: &PrecisionContext) -> Result<FamilyMember> {
    if !satisfies(Family::Nakamula, n) {
        return Err(Error::Domain(format!(
            "n = {n} fails the reciprocal-quartic sieve"
        )));
    }
    let roots = reciprocal_quartic_roots(n, ctx)?;
    let a = roots.eps.ln();
    let b = roots.y_plus.ln();
    let u = LogVector::from_ker_norm(a.clone());
    let v = LogVector::from_subfield(b.clone());
    let ratio = ctx.real_from_i64(3).sqrt() * &b / &a;
    let mut witness = Witness::empty();
    witness.eps = Some(roots.eps.clone());
    witness.orth_residual = Some(u.dot(&v));
    witness.ratio_below_one = ratio < ctx.real_one();
    let disc = disc_magnitude(&[1, -n, 3, -n, 1], ctx)?;
    Ok(FamilyMember {
        family: Family::Nakamula,
        n,
        d: 0,
        basis: (u, v),
        witness,
        disc_estimate: disc,
    })
}

/// Construct the member for a sieved parameter.
pub fn member(family: Family, n: i64, ctx: &PrecisionContext) -> Result<FamilyMember> {
    match family {
        Family::StenderCube => stender_cube_member(n, ctx),
        Family::StenderMinusOne => stender_minus_one_member(n, ctx),
        Family::Lps => lps_member(n, ctx),
        Family::Nakamula => nakamula_member(n, ctx),
    }
}

/// All members with `|n|` in `[abs_lo, abs_hi]`, computed in parallel,
/// ordered ascending by |n|.
pub fn sweep(
    family: Family,
    abs_lo: i64,
    abs_hi: i64,
    ctx: &PrecisionContext,
) -> Result<Vec<FamilyMember>> {
    let (lo, hi) = family.signed_range(abs_lo.max(family.min_abs_n()), abs_hi);
    let ns = sieve(family, lo, hi);
    ns.par_iter()
        .map(|&n| member(family, n, ctx))
        .collect::<Result<Vec<_>>>()
}
