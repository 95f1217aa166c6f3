//! Closed-form root solvers for the polynomial families and a general
//! monic quartic solver for ingested field records.
//!
//! The family solvers only use radicals, the quadratic formula and the
//! reciprocal substitution; expressions prone to catastrophic cancellation
//! (`omega - n`, conjugate-difference surds) are rewritten in product form
//! so relative precision does not degrade with the parameter.

use num_bigint::BigInt;

use crate::big::{BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// `omega = (n^4 + sign*d)^(1/4)` for positive integers `n`, `d`.
pub fn quartic_radical(n: i64, d: i64, sign: i8, ctx: &PrecisionContext) -> Result<BigReal> {
    let radicand = pure_quartic_radicand(n, d, sign)?;
    Ok(ctx.real_from_i128(radicand).sqrt().sqrt())
}

fn pure_quartic_radicand(n: i64, d: i64, sign: i8) -> Result<i128> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be positive, got {n}")));
    }
    if d < 1 {
        return Err(Error::Domain(format!(
            "d must be a positive integer, got {d}"
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign must be +-1, got {sign}")));
    }
    let n4 = (n as i128).pow(4);
    let radicand = n4 + (sign as i128) * (d as i128);
    if radicand <= 0 {
        return Err(Error::Domain(format!(
            "n^4 {} d = {radicand} is not a valid radicand",
            if sign > 0 { "+" } else { "-" }
        )));
    }
    Ok(radicand)
}

/// Logarithmic data of the pure quartic field Q(omega), omega^4 = n^4 +- d.
///
/// `log_omega_minus_n` is computed through the identity
/// `omega - n = (+-d) / ((omega + n)(omega^2 + n^2))`, which avoids the
/// cancellation in the direct difference.
#[derive(Debug, Clone)]
pub struct PureQuarticLogs {
    pub omega: BigReal,
    /// Signed value of `omega - n`.
    pub omega_minus_n: BigReal,
    /// `ln |omega + n|`
    pub log_omega_plus_n: BigReal,
    /// `ln |omega - n|`
    pub log_omega_minus_n: BigReal,
    /// `ln |i*omega + n| = ln sqrt(omega^2 + n^2)`
    pub log_i_omega_plus_n: BigReal,
}

pub fn pure_quartic_logs(
    n: i64,
    d: i64,
    sign: i8,
    ctx: &PrecisionContext,
) -> Result<PureQuarticLogs> {
    let omega = quartic_radical(n, d, sign, ctx)?;
    let nn = ctx.real_from_i64(n);
    let dd = ctx.real_from_i64(d);
    let omega_plus_n = &omega + &nn;
    let omega_sq_plus_n_sq = omega.square() + nn.square();
    let signed_d = if sign > 0 { dd } else { -dd };
    let omega_minus_n = &signed_d / (&omega_plus_n * &omega_sq_plus_n_sq);
    let log_omega_plus_n = omega_plus_n.ln();
    let log_omega_minus_n = ctx.real_from_i64(d).ln() - &log_omega_plus_n - omega_sq_plus_n_sq.ln();
    let log_i_omega_plus_n = omega_sq_plus_n_sq.ln() / ctx.real_from_i64(2);
    Ok(PureQuarticLogs {
        omega,
        omega_minus_n,
        log_omega_plus_n,
        log_omega_minus_n,
        log_i_omega_plus_n,
    })
}

/// The four roots of the reciprocal quartic `x^4 - n x^3 + 3 x^2 - n x + 1`.
#[derive(Debug, Clone)]
pub struct ReciprocalRoots {
    /// Real root with `|eps| >= 1`.
    pub eps: BigReal,
    pub eps_inv: BigReal,
    /// Complex root on the unit circle (positive imaginary part).
    pub eta: BigComplex,
    pub eta_inv: BigComplex,
    /// `y+ = eps + 1/eps = (n + sqrt(n^2-4))/2`
    pub y_plus: BigReal,
    /// `y- = eta + 1/eta = (n - sqrt(n^2-4))/2`
    pub y_minus: BigReal,
}

/// Solve the reciprocal quartic through `y = x + 1/x`:
/// `y^2 - n y + 1 = 0`, then `x^2 - y x + 1 = 0`.
pub fn reciprocal_quartic_roots(n: i64, ctx: &PrecisionContext) -> Result<ReciprocalRoots> {
    if n <= 3 || n % 2 == 0 {
        return Err(Error::Domain(format!(
            "reciprocal quartic expects odd n > 3, got {n}"
        )));
    }
    let nn = ctx.real_from_i64(n);
    let disc = nn.square() - ctx.real_from_i64(4);
    let sq = disc.sqrt();
    let two = ctx.real_from_i64(2);
    let y_plus = (&nn + &sq) / &two;
    // (n - sqrt(n^2-4))/2 rewritten as 2/(n + sqrt(n^2-4)).
    let y_minus = &two / (&nn + &sq);
    // x^2 - y+ x + 1 = 0 has the real pair.
    let disc_x = y_plus.square() - ctx.real_from_i64(4);
    let sq_x = disc_x.sqrt();
    let eps = (&y_plus + &sq_x) / &two;
    let eps_inv = &two / (&y_plus + &sq_x);
    // x^2 - y- x + 1 = 0 has the unit-circle pair.
    let half_y = &y_minus / &two;
    let im = (ctx.real_one() - half_y.square()).sqrt();
    let eta = BigComplex::new(half_y.clone(), im.clone());
    let eta_inv = eta.conj();
    Ok(ReciprocalRoots {
        eps,
        eps_inv,
        eta,
        eta_inv,
        y_plus,
        y_minus,
    })
}

/// Roots of the two quadratics attached to the parametrized quartic with
/// `eps = (-n + sqrt(n^2-4))/2`: the real pair solves `x^2 + eps x + eps`,
/// the complex pair solves `x^2 - eps' x + eps'` with `eps' = 1/eps`.
#[derive(Debug, Clone)]
pub struct LpsRoots {
    pub eps: BigReal,
    pub eps_bar: BigReal,
    /// Real roots of `x^2 + eps x + eps`, largest magnitude first.
    pub real_pair: (BigReal, BigReal),
    /// Roots of `x^2 - eps_bar x + eps_bar` (conjugate pair).
    pub complex_pair: (BigComplex, BigComplex),
}

pub fn lps_quadratic_roots(n: i64, ctx: &PrecisionContext) -> Result<LpsRoots> {
    if n > -5 {
        return Err(Error::Domain(format!(
            "parameter must satisfy n <= -5, got {n}"
        )));
    }
    let disc = (n as i128) * (n as i128) - 4;
    if disc <= 0 {
        return Err(Error::Domain(format!("n^2 - 4 = {disc} must be positive")));
    }
    let nn = ctx.real_from_i64(n);
    let two = ctx.real_from_i64(2);
    let sq = ctx.real_from_i128(disc).sqrt();
    let eps = (-&nn + &sq) / &two; // positive, ~|n|
    let eps_bar = eps.recip(); // eps * eps_bar = 1
                               // x^2 + eps x + eps: discriminant eps^2 - 4 eps > 0 for eps > 4.
    let d_real = (eps.square() - ctx.real_from_i64(4) * &eps).sqrt();
    let r_big = (-&eps - &d_real) / &two;
    let r_small = (-&eps + &d_real) / &two;
    // x^2 - eps_bar x + eps_bar: discriminant eps_bar^2 - 4 eps_bar < 0.
    let half = &eps_bar / &two;
    let im = (ctx.real_from_i64(4) * &eps_bar - eps_bar.square()).sqrt() / &two;
    let c = BigComplex::new(half, im);
    let c_conj = c.conj();
    Ok(LpsRoots {
        eps,
        eps_bar,
        real_pair: (r_big, r_small),
        complex_pair: (c, c_conj),
    })
}

/// The two real-embedding logarithms `(a1, a2)` of the parametrized unit:
/// `a1 = ln|(-eps - sqrt(eps^2 - 4 eps))/2|` and
/// `a2 = ln|(-eps + sqrt(eps^2 + 4 eps))/2|`.
///
/// `a2` is evaluated as `ln(2 / (1 + sqrt(1 + 4/eps)))` to avoid the
/// conjugate-difference cancellation.
pub fn lps_embedding_logs(n: i64, ctx: &PrecisionContext) -> Result<(BigReal, BigReal)> {
    let roots = lps_quadratic_roots(n, ctx)?;
    let eps = &roots.eps;
    let a1 = roots.real_pair.0.abs().ln();
    let four = ctx.real_from_i64(4);
    let one = ctx.real_one();
    // (-eps + sqrt(eps^2 + 4 eps))/2 = 2 / (1 + sqrt(1 + 4/eps))
    let val = ctx.real_from_i64(2) / (&one + (&one + &four / eps).sqrt());
    let a2 = val.ln();
    Ok((a1, a2))
}

/// Exact discriminant of `c0 + c1 x + c2 x^2 + c3 x^3 + x^4`.
pub fn quartic_discriminant(coeffs: &[i64; 5]) -> Result<BigInt> {
    if coeffs[4] != 1 {
        return Err(Error::Domain("discriminant expects a monic quartic".into()));
    }
    let p = BigInt::from(coeffs[3]);
    let q = BigInt::from(coeffs[2]);
    let r = BigInt::from(coeffs[1]);
    let s = BigInt::from(coeffs[0]);
    let d = BigInt::from(256) * s.pow(3)
        - BigInt::from(192) * &p * &r * s.pow(2)
        - BigInt::from(128) * q.pow(2) * s.pow(2)
        + BigInt::from(144) * &q * r.pow(2) * &s
        - BigInt::from(27) * r.pow(4)
        + BigInt::from(144) * p.pow(2) * &q * s.pow(2)
        - BigInt::from(6) * p.pow(2) * r.pow(2) * &s
        - BigInt::from(80) * &p * q.pow(2) * &r * &s
        + BigInt::from(18) * &p * &q * r.pow(3)
        + BigInt::from(16) * q.pow(4) * &s
        - BigInt::from(4) * q.pow(3) * r.pow(2)
        - BigInt::from(27) * p.pow(4) * s.pow(2)
        + BigInt::from(18) * p.pow(3) * &q * &r * &s
        - BigInt::from(4) * p.pow(3) * r.pow(3)
        - BigInt::from(4) * p.pow(2) * q.pow(3) * &s
        + p.pow(2) * q.pow(2) * r.pow(2);
    Ok(d)
}

/// Convert an exact `BigInt` to a `BigReal` (exact while the integer fits
/// the working precision).
pub fn bigint_to_real(v: &BigInt, ctx: &PrecisionContext) -> BigReal {
    let (sign, mag) = v.clone().into_parts();
    let hex = mag.to_str_radix(16);
    let x = BigReal::parse(&hex, astro_float::Radix::Hex, ctx.working_bits())
        .expect("hex integer parse");
    if sign == num_bigint::Sign::Minus {
        -x
    } else {
        x
    }
}

/// Horner evaluation of a real-coefficient polynomial (ascending order).
pub fn eval_poly_real(coeffs: &[BigReal], x: &BigReal) -> BigReal {
    let mut acc = x.lift_i64(0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Horner evaluation at a complex point (ascending real coefficients).
pub fn eval_poly_complex(coeffs: &[BigReal], z: &BigComplex) -> BigComplex {
    let mut acc = BigComplex::from_real(z.re.lift_i64(0));
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&BigComplex::from_real(c.clone()));
    }
    acc
}

/// Largest real root of the monic cubic `z^3 + a z^2 + b z + c`.
fn cubic_largest_real_root(
    a: &BigReal,
    b: &BigReal,
    c: &BigReal,
    ctx: &PrecisionContext,
) -> BigReal {
    let three = ctx.real_from_i64(3);
    let two = ctx.real_from_i64(2);
    let shift = a / &three;
    // Depressed cubic u^3 + p u + q with z = u - a/3.
    let p = b - a.square() / &three;
    let q = &two * a.powi(3) / ctx.real_from_i64(27) - a * b / &three + c;
    let disc = -(ctx.real_from_i64(4) * p.powi(3) + ctx.real_from_i64(27) * q.square());
    let u = if disc.is_positive() {
        // Three real roots; the largest is 2 sqrt(-p/3) cos(phi/3).
        let m = (-(&p) / &three).sqrt();
        let cos_arg = &three * &q / (&two * &p * &m);
        let clamped = cos_arg.max(&ctx.real_from_i64(-1)).min(&ctx.real_one());
        let phi = clamped.acos();
        &two * &m * (phi / &three).cos()
    } else {
        // One real root by Cardano.
        let half_q = &q / &two;
        let inner = (half_q.square() + p.powi(3) / ctx.real_from_i64(27)).sqrt();
        (-&half_q + &inner).cbrt() + (-&half_q - &inner).cbrt()
    };
    let mut z = u - shift;
    // Newton refinement against the original cubic.
    for _ in 0..6 {
        let f = ((z.clone() + a) * &z + b) * &z + c;
        let df = (&three * &z + &two * a) * &z + b;
        if df.is_zero() {
            break;
        }
        z = z - f / df;
    }
    z
}

fn complex_sqrt(z: &BigComplex) -> BigComplex {
    let zero = z.re.lift_i64(0);
    if z.im == zero {
        if z.re >= zero {
            return BigComplex::new(z.re.sqrt(), zero);
        }
        return BigComplex::new(zero, (-&z.re).sqrt());
    }
    let r = z.abs();
    let two = z.re.lift_i64(2);
    let u = ((&r + z.re.abs()) / &two).sqrt();
    let v = &z.im / (&two * &u);
    if z.re >= zero {
        BigComplex::new(u, v)
    } else if z.im >= zero {
        BigComplex::new(v.abs(), u)
    } else {
        BigComplex::new(v.abs(), -u)
    }
}

/// All four roots of the monic quartic
/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0` with real coefficients.
///
/// Closed-form seeds come from the resolvent cubic; a short Newton
/// iteration then restores full working precision. Real roots are
/// returned with an exactly zero imaginary part.
pub fn monic_quartic_roots(
    coeffs: &[BigReal; 4],
    ctx: &PrecisionContext,
) -> Result<Vec<BigComplex>> {
    let [c0, c1, c2, c3] = coeffs;
    let zero = ctx.real_zero();
    let two = ctx.real_from_i64(2);
    let four = ctx.real_from_i64(4);
    let quarter_c3 = c3 / &four;
    // Depressed quartic t^4 + p t^2 + q t + r, x = t - c3/4.
    let p = c2 - ctx.real_from_i64(3) * c3.square() / ctx.real_from_i64(8);
    let q = c1 - c3 * c2 / &two + c3.powi(3) / ctx.real_from_i64(8);
    let r = c0 - c3 * c1 / &four + c3.square() * c2 / ctx.real_from_i64(16)
        - ctx.real_from_i64(3) * c3.powi(4) / ctx.real_from_i64(256);

    // Resolvent cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0, z = alpha^2.
    let res_a = &two * &p;
    let res_b = p.square() - &four * &r;
    let res_c = -q.square();
    let z_star = cubic_largest_real_root(&res_a, &res_b, &res_c, ctx);

    // Threshold below which the factorization is treated as biquadratic.
    let small = ctx.pow2(-(ctx.working_bits() as i32) / 2);
    let scale = ctx.real_one().max(&p.abs()).max(&q.abs()).max(&r.abs());

    let mut seeds: Vec<BigComplex> = Vec::with_capacity(4);
    if z_star <= &small * &scale {
        // t^4 + p t^2 + r = 0: solve y^2 + p y + r = 0, then t^2 = y.
        let disc_y = p.square() - &four * &r;
        let ys: [BigComplex; 2] = if disc_y >= zero {
            let s = disc_y.sqrt();
            [
                BigComplex::new((-&p + &s) / &two, zero.clone()),
                BigComplex::new((-&p - &s) / &two, zero.clone()),
            ]
        } else {
            let s = (-&disc_y).sqrt() / &two;
            let re = -&p / &two;
            [
                BigComplex::new(re.clone(), s.clone()),
                BigComplex::new(re, -s),
            ]
        };
        for y in ys {
            let t = complex_sqrt(&y);
            seeds.push(t.clone());
            seeds.push(BigComplex::new(-&t.re, -&t.im));
        }
    } else {
        let alpha = z_star.sqrt();
        // beta + gamma = p + z, gamma - beta = q / alpha.
        let sum = &p + &z_star;
        let diff = &q / &alpha;
        let beta = (&sum - &diff) / &two;
        let gamma = (&sum + &diff) / &two;
        // t^2 + alpha t + beta and t^2 - alpha t + gamma.
        for (lin, con) in [(alpha.clone(), beta), (-&alpha, gamma)] {
            let disc = lin.square() - &four * &con;
            if disc >= zero {
                let s = disc.sqrt();
                seeds.push(BigComplex::new((-&lin + &s) / &two, zero.clone()));
                seeds.push(BigComplex::new((-&lin - &s) / &two, zero.clone()));
            } else {
                let s = (-&disc).sqrt() / &two;
                let re = -&lin / &two;
                seeds.push(BigComplex::new(re.clone(), s.clone()));
                seeds.push(BigComplex::new(re, -s));
            }
        }
    }

    // Newton polish against the original quartic.
    let poly = [
        c0.clone(),
        c1.clone(),
        c2.clone(),
        c3.clone(),
        ctx.real_one(),
    ];
    let dpoly = [
        c1.clone(),
        &two * c2,
        ctx.real_from_i64(3) * c3,
        ctx.real_from_i64(4),
    ];
    let mut roots = Vec::with_capacity(4);
    for seed in seeds {
        let mut zr = seed.sub(&BigComplex::from_real(quarter_c3.clone()));
        for _ in 0..10 {
            let f = eval_poly_complex(&poly, &zr);
            let df = eval_poly_complex(&dpoly, &zr);
            let d2 = df.abs_sq();
            if d2.is_zero() {
                break;
            }
            let step = f.mul(&df.conj());
            zr = zr.sub(&BigComplex::new(&step.re / &d2, &step.im / &d2));
        }
        if !zr.is_finite() {
            return Err(Error::Numerical("quartic root iteration diverged".into()));
        }
        roots.push(zr);
    }

    // Residual validation.
    let max_coeff = poly.iter().fold(ctx.real_one(), |m, c| m.max(&c.abs()));
    let tol = ctx.rel_eps(12) * &max_coeff;
    for root in &roots {
        let scale_pow = root.abs().max(&ctx.real_one()).powi(4);
        let resid = eval_poly_complex(&poly, root).abs();
        if resid > &tol * &scale_pow {
            return Err(Error::Numerical(format!(
                "quartic root residual too large: {}",
                resid.to_f64()
            )));
        }
    }
    Ok(roots)
}

/// Roots of a monic integer quartic split into reals (descending) and one
/// representative of each conjugate pair (positive imaginary part).
pub fn classified_quartic_roots(
    coeffs: &[i64; 5],
    ctx: &PrecisionContext,
) -> Result<(Vec<BigReal>, Vec<BigComplex>)> {
    if coeffs[4] != 1 {
        return Err(Error::Domain("polynomial must be monic".into()));
    }
    let lifted = [
        ctx.real_from_i64(coeffs[0]),
        ctx.real_from_i64(coeffs[1]),
        ctx.real_from_i64(coeffs[2]),
        ctx.real_from_i64(coeffs[3]),
    ];
    let roots = monic_quartic_roots(&lifted, ctx)?;
    let mut reals: Vec<BigReal> = Vec::new();
    let mut complexes: Vec<BigComplex> = Vec::new();
    for r in roots {
        if r.im.is_zero() {
            reals.push(r.re);
        } else if r.im.is_positive() {
            complexes.push(r);
        }
    }
    reals.sort_by(|a, b| b.partial_cmp(a).expect("finite real roots"));
    Ok((reals, complexes))
}
