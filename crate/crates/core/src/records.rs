//! Ingestion of externally computed fields: a line-delimited text format
//! carrying a monic quartic, its quadratic subfield discriminant, the
//! field discriminant magnitude, and two units as rational coefficient
//! vectors in the power basis of a root.
//!
//! Format, one record per line (`#` starts a comment):
//!
//! ```text
//! record label=<token> poly=c0,c1,c2,c3,c4 subfield_disc=<int> \
//!     disc=<decimal> unit=q0,q1,q2,q3 unit=q0,q1,q2,q3
//! ```
//!
//! Rational coefficients are `p` or `p/q`. The polynomial is ascending
//! and must be monic with signature (2,1) at evaluation time.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::big::{BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::families::{Family, FamilyMember};
use crate::lattice::{shape_from_basis, ShapePoint};
use crate::roots::{bigint_to_real, classified_quartic_roots, quartic_discriminant};
use crate::units::{log_embedding, regulator_from_basis, LogVector, RegulatorReport};

/// Unit expressed in the power basis of a root: `q0 + q1 r + q2 r^2 + q3 r^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitExpr(pub [BigRational; 4]);

impl UnitExpr {
    pub fn from_i64(c: [i64; 4]) -> Self {
        UnitExpr(c.map(|v| BigRational::from(BigInt::from(v))))
    }

    fn eval_real(&self, x: &BigReal, ctx: &PrecisionContext) -> BigReal {
        let mut acc = ctx.real_zero();
        for q in self.0.iter().rev() {
            acc = acc * x + rational_to_real(q, ctx);
        }
        acc
    }

    fn eval_complex(&self, z: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
        let mut acc = BigComplex::from_real(ctx.real_zero());
        for q in self.0.iter().rev() {
            acc = acc
                .mul(z)
                .add(&BigComplex::from_real(rational_to_real(q, ctx)));
        }
        acc
    }

    fn to_field(&self) -> String {
        self.0
            .iter()
            .map(|q| {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn rational_to_real(q: &BigRational, ctx: &PrecisionContext) -> BigReal {
    bigint_to_real(q.numer(), ctx) / bigint_to_real(q.denom(), ctx)
}

/// An externally supplied quartic field with two units.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRecord {
    pub label: String,
    /// Monic quartic, ascending coefficients.
    pub poly: [i64; 5],
    pub subfield_disc: i64,
    /// Decimal string, kept verbatim.
    pub disc_magnitude: String,
    pub units: [UnitExpr; 2],
}

impl FieldRecord {
    /// Render as a single record line.
    pub fn to_line(&self) -> String {
        format!(
            "record label={} poly={} subfield_disc={} disc={} unit={} unit={}",
            self.label,
            self.poly.map(|c| c.to_string()).join(","),
            self.subfield_disc,
            self.disc_magnitude,
            self.units[0].to_field(),
            self.units[1].to_field(),
        )
    }

    pub fn disc_magnitude_real(&self, ctx: &PrecisionContext) -> Result<BigReal> {
        let d = ctx.real_from_dec_str(&self.disc_magnitude)?;
        if !d.is_positive() {
            return Err(Error::Domain(format!(
                "record {}: discriminant magnitude must be positive",
                self.label
            )));
        }
        Ok(d)
    }
}

/// A rejected input line with its diagnostic.
#[derive(Debug, Clone)]
pub struct RecordReject {
    pub line: usize,
    pub message: String,
}

/// Outcome of parsing a record file: accepted records plus line-level
/// diagnostics for rejects. Rejects are reported, not fatal.
#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub records: Vec<FieldRecord>,
    pub rejects: Vec<RecordReject>,
}

/// Structural parse of the record format.
pub fn parse_records(input: &str) -> Result<ParseOutcome> {
    let mut out = ParseOutcome::default();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_record_line(line) {
            Ok(r) => out.records.push(r),
            Err(e) => out.rejects.push(RecordReject {
                line: line_no,
                message: e.to_string(),
            }),
        }
    }
    Ok(out)
}

fn parse_record_line(line: &str) -> Result<FieldRecord> {
    let mut tokens = line.split_whitespace();
    let head = tokens.next().unwrap_or("");
    if head != "record" {
        return Err(Error::MalformedInput(format!(
            "expected line to start with 'record', got {head:?}"
        )));
    }
    let mut label: Option<String> = None;
    let mut poly: Option<[i64; 5]> = None;
    let mut subfield_disc: Option<i64> = None;
    let mut disc: Option<String> = None;
    let mut units: Vec<UnitExpr> = Vec::new();
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::MalformedInput(format!("token {tok:?} is not key=value")))?;
        match key {
            "label" => {
                if value.is_empty() || value.contains(',') {
                    return Err(Error::MalformedInput(format!(
                        "label {value:?} must be nonempty and comma-free"
                    )));
                }
                set_once(&mut label, value.to_string(), "label")?;
            }
            "poly" => {
                let c = parse_i64_list::<5>(value)?;
                if c[4] != 1 {
                    return Err(Error::MalformedInput(
                        "polynomial must be monic (c4 = 1)".into(),
                    ));
                }
                set_once(&mut poly, c, "poly")?;
            }
            "subfield_disc" => {
                let v = value
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedInput(format!("bad subfield_disc {value:?}")))?;
                set_once(&mut subfield_disc, v, "subfield_disc")?;
            }
            "disc" => set_once(&mut disc, value.to_string(), "disc")?,
            "unit" => units.push(parse_unit(value)?),
            other => {
                return Err(Error::MalformedInput(format!("unknown key {other:?}")));
            }
        }
    }
    let label = label.ok_or_else(|| Error::MalformedInput("missing label".into()))?;
    let poly = poly.ok_or_else(|| Error::MalformedInput("missing poly".into()))?;
    let subfield_disc =
        subfield_disc.ok_or_else(|| Error::MalformedInput("missing subfield_disc".into()))?;
    let disc = disc.ok_or_else(|| Error::MalformedInput("missing disc".into()))?;
    if units.len() != 2 {
        return Err(Error::MalformedInput(format!(
            "expected exactly 2 units, got {}",
            units.len()
        )));
    }
    let units: [UnitExpr; 2] = [units[0].clone(), units[1].clone()];
    Ok(FieldRecord {
        label,
        poly,
        subfield_disc,
        disc_magnitude: disc,
        units,
    })
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::MalformedInput(format!("duplicate key {key:?}")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_i64_list<const N: usize>(value: &str) -> Result<[i64; N]> {
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != N {
        return Err(Error::MalformedInput(format!(
            "expected {N} comma-separated integers, got {}",
            parts.len()
        )));
    }
    let mut out = [0i64; N];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .parse::<i64>()
            .map_err(|_| Error::MalformedInput(format!("bad integer {p:?}")))?;
    }
    Ok(out)
}

fn parse_unit(value: &str) -> Result<UnitExpr> {
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::MalformedInput(format!(
            "unit needs 4 rational coefficients, got {}",
            parts.len()
        )));
    }
    let mut out: Vec<BigRational> = Vec::with_capacity(4);
    for p in parts {
        let q = match p.split_once('/') {
            Some((num, den)) => {
                let n = num.parse::<BigInt>().map_err(|_| {
                    Error::MalformedInput(format!("bad rational numerator {num:?}"))
                })?;
                let d = den.parse::<BigInt>().map_err(|_| {
                    Error::MalformedInput(format!("bad rational denominator {den:?}"))
                })?;
                if d.is_zero() {
                    return Err(Error::MalformedInput("zero denominator".into()));
                }
                BigRational::new(n, d)
            }
            None => {
                let n = p
                    .parse::<BigInt>()
                    .map_err(|_| Error::MalformedInput(format!("bad rational {p:?}")))?;
                BigRational::from(n)
            }
        };
        out.push(q);
    }
    Ok(UnitExpr([
        out[0].clone(),
        out[1].clone(),
        out[2].clone(),
        out[3].clone(),
    ]))
}

/// Evaluate a record: find the quartic's roots, order the real embeddings
/// descending, evaluate both units at the embeddings, and build the log
/// vectors. Rejects polynomials whose real-root count is not 2 and unit
/// expressions that are not units.
pub fn evaluate_record(
    r: &FieldRecord,
    ctx: &PrecisionContext,
) -> Result<(LogVector<BigReal>, LogVector<BigReal>)> {
    let (reals, complexes) = classified_quartic_roots(&r.poly, ctx)?;
    if reals.len() != 2 || complexes.len() != 1 {
        return Err(Error::WrongSignature(format!(
            "record {}: quartic has {} real roots, need exactly 2",
            r.label,
            reals.len()
        )));
    }
    let s1 = &reals[0];
    let s2 = &reals[1];
    let tau = &complexes[0];
    let tol = ctx.rel_eps(16);
    let mut vectors = Vec::with_capacity(2);
    for unit in &r.units {
        let v1 = unit.eval_real(s1, ctx).abs();
        let v2 = unit.eval_real(s2, ctx).abs();
        let vt = unit.eval_complex(tau, ctx).abs();
        let lv = log_embedding(&v1, &v2, &vt, &tol).map_err(|e| match e {
            Error::NotAUnit(m) => Error::NotAUnit(format!("record {}: {m}", r.label)),
            other => other,
        })?;
        vectors.push(lv);
    }
    let v2 = vectors.pop().expect("two vectors");
    let v1 = vectors.pop().expect("two vectors");
    Ok((v1, v2))
}

/// Shape and regulator data of a record.
pub fn record_shape(
    r: &FieldRecord,
    ctx: &PrecisionContext,
) -> Result<(ShapePoint<BigReal>, RegulatorReport<BigReal>)> {
    let (u, v) = evaluate_record(r, ctx)?;
    let shape = shape_from_basis(&u, &v, &ctx.det_tol(), &ctx.boundary_tol(), ctx.bits())?;
    let reg = regulator_from_basis(&u, &v, &ctx.det_tol())?;
    Ok((shape, reg))
}

/// Parse and fully validate records against a precision context. Records
/// that fail evaluation (wrong signature, non-units, degenerate lattices)
/// are moved to the reject list with diagnostics.
pub fn parse_and_validate(input: &str, ctx: &PrecisionContext) -> Result<ParseOutcome> {
    let parsed = parse_records(input)?;
    let mut out = ParseOutcome {
        records: Vec::new(),
        rejects: parsed.rejects,
    };
    // Line numbers of accepted structural parses are recomputed so the
    // diagnostics point at the right lines.
    let mut line_of_record = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if parse_record_line(line).is_ok() {
            line_of_record.push(idx + 1);
        }
    }
    for (i, rec) in parsed.records.into_iter().enumerate() {
        let line = line_of_record.get(i).copied().unwrap_or(0);
        match record_shape(&rec, ctx) {
            Ok(_) => out.records.push(rec),
            Err(e) => out.rejects.push(RecordReject {
                line,
                message: format!("record {}: {e}", rec.label),
            }),
        }
    }
    Ok(out)
}

// Polynomial arithmetic in Q[x] / (x^4 - m), used to put units of the
// pure quartic fields into the power basis.
fn poly_mul_mod_pure(a: &[BigRational; 4], b: &[BigRational; 4], m: i64) -> [BigRational; 4] {
    let mut full = vec![BigRational::zero(); 7];
    for i in 0..4 {
        for j in 0..4 {
            let prod = &a[i] * &b[j];
            full[i + j] += prod;
        }
    }
    let m = BigRational::from(BigInt::from(m));
    for k in (4..7).rev() {
        let carry = full[k].clone() * &m;
        full[k - 4] += carry;
        full[k] = BigRational::zero();
    }
    [
        full[0].clone(),
        full[1].clone(),
        full[2].clone(),
        full[3].clone(),
    ]
}

/// Serialize a family member to the record format. The emitted polynomial
/// and units describe the member's field exactly, so re-evaluation goes
/// through honest root finding and unit embedding.
pub fn serialize_member(m: &FamilyMember, _ctx: &PrecisionContext) -> Result<FieldRecord> {
    let n = m.n;
    let (poly, units) = match m.family {
        Family::StenderCube => {
            let radicand = n.pow(4) + n.pow(3);
            let poly = [-radicand, 0, 0, 0, 1];
            // u = (omega + n)/(omega - n) = ((m + n^4) + 2n^3 w + 2n^2 w^2 + 2n w^3) / d
            let d = BigRational::from(BigInt::from(n.pow(3)));
            let u = UnitExpr([
                BigRational::from(BigInt::from(radicand) + BigInt::from(n).pow(4)) / &d,
                BigRational::from(BigInt::from(2) * BigInt::from(n).pow(3)) / &d,
                BigRational::from(BigInt::from(2) * BigInt::from(n).pow(2)) / &d,
                BigRational::from(BigInt::from(2) * BigInt::from(n)) / &d,
            ]);
            // v1 = v u^-2 with v = n^3 (omega - n)^-4; build by modular
            // polynomial arithmetic: v1 = u^-2 * n^3 * inv^4,
            // inv = (omega - n)^-1 = (w^3 + n w^2 + n^2 w + n^3) / d.
            let inv = [
                BigRational::from(BigInt::from(n).pow(3)) / &d,
                BigRational::from(BigInt::from(n).pow(2)) / &d,
                BigRational::from(BigInt::from(n)) / &d,
                BigRational::one() / &d,
            ];
            // u^-1 = (omega - n)/(omega + n) = (m + n^4 - 2n^3 w + 2n^2 w^2 - 2n w^3)/(-d)
            // simpler: u^-1 = (omega - n)^2 / ((omega-n)(omega+n)) =
            // (omega - n) * inv_of(omega + n); avoid it: v1 = n^3 inv^4 u^-2
            // and u^-2 = ((omega - n)/(omega + n))^2 = ((omega-n)^2 *
            // inv_plus^2). Use inv_plus = (w^3 - n w^2 + n^2 w - n^3)/(-d')
            // with d' = m - n^4 = n^3 as well up to sign. Equivalent and
            // simpler: v1 = n^3 * inv^2 * (omega+n)^-2
            //            = n^3 * inv^2 * inv_plus^2.
            let inv_plus = [
                BigRational::from(-BigInt::from(n).pow(3)) / &d,
                BigRational::from(BigInt::from(n).pow(2)) / &d,
                BigRational::from(-BigInt::from(n)) / &d,
                BigRational::one() / &d,
            ];
            let inv2 = poly_mul_mod_pure(&inv, &inv, radicand);
            let invp2 = poly_mul_mod_pure(&inv_plus, &inv_plus, radicand);
            let mut v1 = poly_mul_mod_pure(&inv2, &invp2, radicand);
            let n3 = BigRational::from(BigInt::from(n).pow(3));
            for c in v1.iter_mut() {
                *c *= &n3;
            }
            (poly, [u, UnitExpr(v1)])
        }
        Family::StenderMinusOne => {
            let radicand = n.pow(4) - 1;
            let poly = [-radicand, 0, 0, 0, 1];
            // Basis units are omega + n and omega - n themselves.
            let u1 = UnitExpr::from_i64([n, 1, 0, 0]);
            let v1 = UnitExpr::from_i64([-n, 1, 0, 0]);
            (poly, [u1, v1])
        }
        Family::Lps => {
            // Field with the factorization (x^2 + e x + e)(x^2 + e' x + e'):
            // x^4 - n x^3 + (1-n) x^2 + 2x + 1.
            let poly = [1, 2, 1 - n, -n, 1];
            let rho = UnitExpr::from_i64([0, 1, 0, 0]);
            // sigma(rho) = -rho/(rho+1) = -rho^3 + (n+1) rho^2 - 2 rho - 1.
            let sigma_rho = UnitExpr::from_i64([-1, -2, n + 1, -1]);
            (poly, [rho, sigma_rho])
        }
        Family::Nakamula => {
            let poly = [1, -n, 3, -n, 1];
            let rho = UnitExpr::from_i64([0, 1, 0, 0]);
            // rho + rho^-1 = n - 2 rho + n rho^2 - rho^3.
            let trace_unit = UnitExpr::from_i64([n, -2, n, -1]);
            (poly, [rho, trace_unit])
        }
    };
    let disc = quartic_discriminant(&poly)?;
    let disc_str = disc.magnitude().to_string();
    Ok(FieldRecord {
        label: format!("{}_n{}", m.family.tag(), n),
        poly,
        subfield_disc: m.subfield_disc(),
        disc_magnitude: disc_str,
        units,
    })
}
