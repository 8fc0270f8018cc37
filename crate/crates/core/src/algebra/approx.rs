//! Arbitrary-precision complex floating point values used when an exact
//! square root leaves the Gaussian rationals.

use std::cmp::Ordering;

use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

pub(crate) type Float = FBig<HalfEven, 2>;

/// Default working precision of approximate scalars, in bits.
pub const DEFAULT_PRECISION_BITS: usize = 128;
/// Default relative tolerance used by approximate equality.
pub const DEFAULT_REL_TOL: f64 = 1e-24;

/// Significant decimal digits printed for approximate values.
const PRINT_DIGITS: usize = 40;

pub(crate) fn float_from_bigint(n: &BigInt, prec: usize) -> Float {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    let signed = if sign == Sign::Minus { -mag } else { mag };
    Float::from(signed).with_precision(prec).value()
}

pub(crate) fn float_from_ratio(r: &BigRational, prec: usize) -> Float {
    let num = float_from_bigint(r.numer(), prec);
    let den = float_from_bigint(r.denom(), prec);
    num / den
}

fn float_from_f64(x: f64, prec: usize) -> Float {
    Float::try_from(x)
        .expect("finite tolerance")
        .with_precision(prec)
        .value()
}

fn zero(prec: usize) -> Float {
    Float::ZERO.with_precision(prec).value()
}

/// A complex number `re + im·i` with binary floating point parts.
#[derive(Clone, Debug)]
pub struct ApproxComplex {
    re: Float,
    im: Float,
    rel_tol: f64,
}

impl ApproxComplex {
    pub fn from_rationals(re: &BigRational, im: &BigRational, precision_bits: usize, rel_tol: f64) -> Self {
        ApproxComplex {
            re: float_from_ratio(re, precision_bits),
            im: float_from_ratio(im, precision_bits),
            rel_tol,
        }
    }

    pub fn precision_bits(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().value()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64().value()
    }

    fn combine_tol(&self, other: &Self) -> f64 {
        self.rel_tol.max(other.rel_tol)
    }

    pub(crate) fn norm_sqr(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &Self) -> Self {
        ApproxComplex {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rel_tol: self.combine_tol(other),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ApproxComplex {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            rel_tol: self.combine_tol(other),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ApproxComplex {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
            rel_tol: self.combine_tol(other),
        }
    }

    /// Division; the caller guarantees `other` is not exactly zero.
    pub fn div(&self, other: &Self) -> Self {
        let den = other.norm_sqr();
        ApproxComplex {
            re: (&self.re * &other.re + &self.im * &other.im) / &den,
            im: (&self.im * &other.re - &self.re * &other.im) / &den,
            rel_tol: self.combine_tol(other),
        }
    }

    pub fn neg(&self) -> Self {
        ApproxComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
            rel_tol: self.rel_tol,
        }
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.re == Float::ZERO && self.im == Float::ZERO
    }

    /// `|z| ≤ rel_tol`.
    pub fn is_negligible(&self) -> bool {
        let tol = float_from_f64(self.rel_tol, self.precision_bits());
        self.norm_sqr() <= &tol * &tol
    }

    /// `|x − y| ≤ rel_tol · max(1, |x|, |y|)`.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let prec = self.precision_bits().max(other.precision_bits());
        let tol = float_from_f64(self.combine_tol(other), prec);
        let diff = self.sub(other).norm_sqr();
        let one = Float::ONE.with_precision(prec).value();
        let scale = max_float(max_float(one, self.norm_sqr()), other.norm_sqr());
        diff <= &tol * &tol * scale
    }

    /// `|x − y| / max(1, |x|, |y|)` as an `f64`.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        let prec = self.precision_bits().max(other.precision_bits());
        let diff = self.sub(other).norm_sqr();
        let one = Float::ONE.with_precision(prec).value();
        let scale = max_float(max_float(one, self.norm_sqr()), other.norm_sqr());
        (diff / scale).sqrt().to_f64().value()
    }

    /// Principal square root: nonnegative real part, nonnegative imaginary
    /// part when the real part vanishes.
    pub fn sqrt(&self) -> Self {
        let prec = self.precision_bits();
        if self.is_exactly_zero() {
            return self.clone();
        }
        let two = Float::from(2).with_precision(prec).value();
        let modulus = self.norm_sqr().sqrt();
        let (re, im) = if self.re >= Float::ZERO {
            let u = ((&modulus + &self.re) / &two).sqrt();
            let v = &self.im / (&two * &u);
            (u, v)
        } else {
            let mut v = ((&modulus - &self.re) / &two).sqrt();
            if self.im < Float::ZERO {
                v = -v;
            }
            let u = &self.im / (&two * &v);
            (u, v)
        };
        ApproxComplex { re, im, rel_tol: self.rel_tol }
    }

    /// Nearest integer when the value lies within tolerance of one.
    pub fn nearest_integer(&self) -> Option<i64> {
        let re = self.re_f64();
        if !re.is_finite() || re.abs() > 9.0e15 {
            return None;
        }
        let candidate = re.round() as i64;
        let prec = self.precision_bits();
        let as_approx = ApproxComplex {
            re: Float::from(candidate).with_precision(prec).value(),
            im: zero(prec),
            rel_tol: self.rel_tol,
        };
        self.approx_eq(&as_approx).then_some(candidate)
    }

    pub(crate) fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

fn max_float(a: Float, b: Float) -> Float {
    match a.partial_cmp(&b) {
        Some(Ordering::Less) => b,
        _ => a,
    }
}

fn fmt_float(x: &Float) -> String {
    if *x == Float::ZERO {
        return "0".to_string();
    }
    let dec = x.clone().with_base_and_precision::<10>(PRINT_DIGITS).value();
    dec.to_string()
}

impl std::fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let re = fmt_float(&self.re);
        if self.im == Float::ZERO {
            return write!(f, "{re}");
        }
        let im = fmt_float(&self.im);
        if self.re == Float::ZERO {
            return write!(f, "{im}i");
        }
        if im.starts_with('-') {
            write!(f, "{re}{im}i")
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}
