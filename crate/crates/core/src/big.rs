//! Arbitrary-precision real and complex scalars.
//!
//! [`BigReal`] wraps `astro_float::BigFloat` and carries its working
//! precision with the value. Binary operations round to the larger of the
//! two operand precisions, so precision set by a [`PrecisionContext`] at
//! construction time propagates through whole computations. Small integer
//! and rational constants created next to high-precision values are exact
//! in binary and therefore never dilute the result.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constant cache allocation"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision for arbitrary-precision arithmetic.
///
/// `bits` is the precision the caller asks for; `guard_bits` are added on
/// top for intermediate computation. Results are reliable to a relative
/// error of `2^-(bits-guard_slack)` with `guard_slack <= 10`; in practice
/// the slack is far smaller because every operation is correctly rounded
/// at `bits + guard_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_BITS: u32 = 256;
    pub const DEFAULT_GUARD: u32 = 32;

    pub fn new(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::Domain(format!(
                "precision must be at least 64 bits, got {bits}"
            )));
        }
        Ok(PrecisionContext { bits, guard_bits })
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        Self::new(bits, Self::DEFAULT_GUARD)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Precision actually used for arithmetic.
    pub fn working_bits(&self) -> usize {
        (self.bits + self.guard_bits) as usize
    }

    pub fn real_from_i64(&self, v: i64) -> BigReal {
        BigReal::from_bigfloat(
            BigFloat::from_i64(v, self.working_bits()),
            self.working_bits(),
        )
    }

    pub fn real_from_i128(&self, v: i128) -> BigReal {
        BigReal::from_bigfloat(
            BigFloat::from_i128(v, self.working_bits()),
            self.working_bits(),
        )
    }

    pub fn real_from_f64(&self, v: f64) -> BigReal {
        BigReal::from_bigfloat(
            BigFloat::from_f64(v, self.working_bits()),
            self.working_bits(),
        )
    }

    /// Parse a decimal string (plain or scientific notation).
    pub fn real_from_dec_str(&self, s: &str) -> Result<BigReal> {
        BigReal::parse(s, Radix::Dec, self.working_bits())
    }

    pub fn real_zero(&self) -> BigReal {
        self.real_from_i64(0)
    }

    pub fn real_one(&self) -> BigReal {
        self.real_from_i64(1)
    }

    /// `2^k` at working precision (exact).
    pub fn pow2(&self, k: i32) -> BigReal {
        BigReal::pow2(k, self.working_bits())
    }

    /// Relative tolerance `2^(slack - bits)`.
    pub fn rel_eps(&self, slack: i32) -> BigReal {
        self.pow2(slack - self.bits as i32)
    }

    /// Tolerance used for boundary classification, `2^(-bits/2)`.
    pub fn boundary_tol(&self) -> BigReal {
        self.pow2(-((self.bits / 2) as i32))
    }

    /// Degeneracy threshold for Gram determinants, `2^(-(bits-16))`.
    pub fn det_tol(&self) -> BigReal {
        self.rel_eps(16)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: Self::DEFAULT_BITS,
            guard_bits: Self::DEFAULT_GUARD,
        }
    }
}

/// Arbitrary-precision binary floating-point value.
#[derive(Debug, Clone)]
pub struct BigReal {
    x: BigFloat,
    p: usize,
}

impl BigReal {
    fn from_bigfloat(x: BigFloat, p: usize) -> Self {
        BigReal { x, p }
    }

    pub fn bigfloat(&self) -> &BigFloat {
        &self.x
    }

    pub fn precision_bits(&self) -> usize {
        self.p
    }

    /// `2^k` at precision `p` (exact).
    pub fn pow2(k: i32, p: usize) -> Self {
        let mut x = BigFloat::from_word(1, p);
        x.set_exponent(k + 1);
        BigReal::from_bigfloat(x, p)
    }

    pub fn parse(s: &str, rdx: Radix, p: usize) -> Result<Self> {
        let x = with_consts(|cc| BigFloat::parse(s, rdx, p, RM, cc));
        if x.is_nan() {
            return Err(Error::MalformedInput(format!("cannot parse number: {s:?}")));
        }
        Ok(BigReal::from_bigfloat(x, p))
    }

    /// Same-precision small integer constant (exact).
    pub fn lift_i64(&self, v: i64) -> Self {
        BigReal::from_bigfloat(BigFloat::from_i64(v, self.p), self.p)
    }

    /// Same-precision rational constant, correctly rounded.
    pub fn lift_ratio(&self, num: i64, den: i64) -> Self {
        self.lift_i64(num) / self.lift_i64(den)
    }

    fn bin(&self, rhs: &Self, f: impl Fn(&BigFloat, &BigFloat, usize) -> BigFloat) -> Self {
        let p = self.p.max(rhs.p);
        BigReal::from_bigfloat(f(&self.x, &rhs.x, p), p)
    }

    pub fn abs(&self) -> Self {
        BigReal::from_bigfloat(self.x.abs(), self.p)
    }

    pub fn sqrt(&self) -> Self {
        BigReal::from_bigfloat(self.x.sqrt(self.p, RM), self.p)
    }

    pub fn cbrt(&self) -> Self {
        BigReal::from_bigfloat(self.x.cbrt(self.p, RM), self.p)
    }

    pub fn ln(&self) -> Self {
        BigReal::from_bigfloat(with_consts(|cc| self.x.ln(self.p, RM, cc)), self.p)
    }

    pub fn exp(&self) -> Self {
        BigReal::from_bigfloat(with_consts(|cc| self.x.exp(self.p, RM, cc)), self.p)
    }

    pub fn cos(&self) -> Self {
        BigReal::from_bigfloat(with_consts(|cc| self.x.cos(self.p, RM, cc)), self.p)
    }

    pub fn acos(&self) -> Self {
        BigReal::from_bigfloat(with_consts(|cc| self.x.acos(self.p, RM, cc)), self.p)
    }

    pub fn atan(&self) -> Self {
        BigReal::from_bigfloat(with_consts(|cc| self.x.atan(self.p, RM, cc)), self.p)
    }

    pub fn recip(&self) -> Self {
        BigReal::from_bigfloat(self.x.reciprocal(self.p, RM), self.p)
    }

    /// Integer power with sign-aware exponent.
    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.recip().powi(-n);
        }
        BigReal::from_bigfloat(self.x.powi(n as usize, self.p, RM), self.p)
    }

    pub fn square(&self) -> Self {
        self.bin(self, |a, b, p| a.mul(b, p, RM))
    }

    pub fn min(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.x.is_negative() && !self.x.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.x.is_positive() && !self.x.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.x.is_nan() && !self.x.is_inf()
    }

    /// Binary exponent: value is `m * 2^exponent` with `m` in [0.5, 1).
    pub fn exponent(&self) -> Option<i32> {
        self.x.exponent()
    }

    /// Nearest f64 (best effort; overflows saturate to infinity).
    pub fn to_f64(&self) -> f64 {
        if self.x.is_nan() {
            return f64::NAN;
        }
        if self.x.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.x.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _inexact) = match self.x.as_raw_parts() {
            Some(parts) => parts,
            None => return f64::NAN,
        };
        // Value is sign * 0.m * 2^e with the mantissa's most significant
        // bit stored at the top of the last word.
        let nw = words.len();
        let top = words[nw - 1] as u128;
        let next = if nw >= 2 { words[nw - 2] as u128 } else { 0 };
        let frac = ((top << 64) | next) as f64 / 2f64.powi(128);
        let mag = frac * 2f64.powi(e);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Nearest integer, ties away from zero. Caller must keep |self| < 2^62.
    pub fn round_i64(&self) -> i64 {
        let half = self.lift_ratio(1, 2);
        let shifted = if self.is_negative() {
            (self.clone() - half).x.int()
        } else {
            (self.clone() + half).x.int()
        };
        bigfloat_int_to_i64(&shifted)
    }

    /// Format with `digits` significant decimal digits, scientific notation.
    ///
    /// Output shape: `-d.dddd...e+EE` (sign only when negative). The
    /// rendering is deterministic for a given value and digit count.
    pub fn to_decimal_sci(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.x.is_nan() {
            return "nan".to_string();
        }
        if self.x.is_inf_pos() {
            return "inf".to_string();
        }
        if self.x.is_inf_neg() {
            return "-inf".to_string();
        }
        if self.x.is_zero() {
            let zeros = "0".repeat(digits - 1);
            return format!("0.{zeros}e+0");
        }
        let (sign, mut ds, mut e10) = with_consts(|cc| self.x.convert_to_radix(Radix::Dec, RM, cc))
            .expect("decimal conversion of a finite value");
        // Strip leading zero digits (conversion may produce them).
        let lead = ds.iter().take_while(|&&d| d == 0).count();
        ds.drain(..lead);
        e10 -= lead as i32;
        if ds.is_empty() {
            let zeros = "0".repeat(digits - 1);
            return format!("0.{zeros}e+0");
        }
        // Round to the requested number of digits (half-up with carry).
        if ds.len() > digits {
            let round_up = ds[digits] >= 5;
            ds.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.truncate(digits);
                        e10 += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        } else {
            ds.resize(digits, 0);
        }
        let sgn = if sign == Sign::Neg { "-" } else { "" };
        let head = ds[0];
        let tail: String = ds[1..].iter().map(|d| (b'0' + d) as char).collect();
        // convert_to_radix represents the value as 0.d1d2... * 10^e10.
        let exp = e10 - 1;
        format!(
            "{sgn}{head}.{tail}e{}{}",
            if exp < 0 { "-" } else { "+" },
            exp.abs()
        )
    }

    /// Full-precision hexadecimal rendering (for golden files).
    pub fn to_hex_full(&self) -> String {
        with_consts(|cc| self.x.format(Radix::Hex, RM, cc)).expect("hex formatting")
    }
}

fn bigfloat_int_to_i64(x: &BigFloat) -> i64 {
    if x.is_zero() {
        return 0;
    }
    let (words, _n, sign, e, _inexact) = x.as_raw_parts().expect("finite integer value");
    let nw = words.len();
    let top = words[nw - 1] as u128;
    let next = if nw >= 2 { words[nw - 2] as u128 } else { 0 };
    let m = (top << 64) | next;
    assert!(e >= 0 && e < 63, "integer out of i64 conversion range");
    let v = (m >> (128 - e.clamp(0, 127))) as i64;
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_sci(30))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.x.cmp(&other.x) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.cmp(&other.x).map(|s| s.cmp(&0))
    }
}

macro_rules! impl_bin_op {
    ($trait:ident, $method:ident, $bf:ident) => {
        impl $trait for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.bin(&rhs, |a, b, p| a.$bf(b, p, RM))
            }
        }
        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                self.bin(rhs, |a, b, p| a.$bf(b, p, RM))
            }
        }
        impl<'a> $trait<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.bin(&rhs, |a, b, p| a.$bf(b, p, RM))
            }
        }
        impl<'a, 'b> $trait<&'b BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'b BigReal) -> BigReal {
                self.bin(rhs, |a, b, p| a.$bf(b, p, RM))
            }
        }
    };
}

impl_bin_op!(Add, add, add);
impl_bin_op!(Sub, sub, sub);
impl_bin_op!(Mul, mul, mul);
impl_bin_op!(Div, div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::from_bigfloat(self.x.neg(), self.p)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::from_bigfloat(BigFloat::neg(&self.x), self.p)
    }
}

/// Complex value over [`BigReal`].
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: BigReal) -> Self {
        let im = re.lift_i64(0);
        BigComplex { re, im }
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn abs_sq(&self) -> BigReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> BigReal {
        self.abs_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn div(&self, o: &Self) -> Self {
        let d = o.abs_sq();
        let num = self.mul(&o.conj());
        BigComplex::new(num.re / &d, num.im / &d)
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        BigComplex::new(&self.re * s, &self.im * s)
    }

    pub fn recip(&self) -> Self {
        let d = self.abs_sq();
        BigComplex::new(&self.re / &d, -&self.im / &d)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}
