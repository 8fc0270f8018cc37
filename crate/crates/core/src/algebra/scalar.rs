//! The scalar field: exact Gaussian rationals ℚ(i), with an arbitrary
//! precision complex float fallback.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::approx::{ApproxComplex, DEFAULT_PRECISION_BITS, DEFAULT_REL_TOL};
use crate::error::{Error, Result};

/// An element of ℚ(i).
pub type GaussianRational = Complex<BigRational>;

/// Arithmetic mode of a scalar.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Mode {
    #[default]
    Exact,
    Approx { precision_bits: usize, rel_tol: f64 },
}

impl Mode {
    /// 128-bit approximate mode with relative tolerance `1e-24`.
    pub const fn default_approx() -> Mode {
        Mode::Approx {
            precision_bits: DEFAULT_PRECISION_BITS,
            rel_tol: DEFAULT_REL_TOL,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mode::Exact)
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "approx" => Ok(Mode::default_approx()),
            other => Err(Error::Parse(format!("unknown mode '{other}' (expected exact or approx)"))),
        }
    }
}

/// A scalar of the working field.
///
/// Mixing an exact and an approximate operand promotes the result to
/// approximate; the reverse never happens. Equality between approximate
/// values is `|x − y| ≤ rel_tol · max(1, |x|, |y|)`.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussianRational),
    Approx(ApproxComplex),
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

fn gaussian_sqrt(z: &GaussianRational) -> Option<GaussianRational> {
    if z.im.is_zero() {
        return if z.re.is_negative() {
            rational_sqrt(&-z.re.clone()).map(|v| Complex::new(BigRational::zero(), v))
        } else {
            rational_sqrt(&z.re).map(|u| Complex::new(u, BigRational::zero()))
        };
    }
    let modulus = rational_sqrt(&(&z.re * &z.re + &z.im * &z.im))?;
    let two = BigRational::from_integer(BigInt::from(2));
    let u = rational_sqrt(&((&modulus + &z.re) / &two))?;
    let v = &z.im / (&two * &u);
    Some(Complex::new(u, v))
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(Complex::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Exact(Complex::one())
    }

    pub fn i() -> Scalar {
        Scalar::Exact(Complex::i())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Exact(Complex::new(BigRational::from_integer(n.into()), BigRational::zero()))
    }

    /// The rational `n/d`. Panics when `d = 0`.
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Exact(Complex::new(ratio(n, d), BigRational::zero()))
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::Exact(Complex::new(r, BigRational::zero()))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Exact(Complex::new(re, im))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Approx(a) => Mode::Approx {
                precision_bits: a.precision_bits(),
                rel_tol: a.rel_tol(),
            },
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Approx(_) => None,
        }
    }

    /// Converts to the requested mode. Approximate values stay approximate.
    pub fn to_mode(&self, mode: Mode) -> Scalar {
        match (self, mode) {
            (Scalar::Exact(z), Mode::Approx { precision_bits, rel_tol }) => {
                Scalar::Approx(ApproxComplex::from_rationals(&z.re, &z.im, precision_bits, rel_tol))
            }
            (Scalar::Approx(a), Mode::Approx { rel_tol, .. }) => Scalar::Approx(a.clone().with_rel_tol(rel_tol)),
            _ => self.clone(),
        }
    }

    fn approx_pair(&self, other: &Scalar) -> (ApproxComplex, ApproxComplex) {
        let (prec, tol) = match (self, other) {
            (Scalar::Approx(a), _) | (_, Scalar::Approx(a)) => (a.precision_bits(), a.rel_tol()),
            _ => (DEFAULT_PRECISION_BITS, DEFAULT_REL_TOL),
        };
        (self.promote(prec, tol), other.promote(prec, tol))
    }

    fn promote(&self, prec: usize, tol: f64) -> ApproxComplex {
        match self {
            Scalar::Exact(z) => ApproxComplex::from_rationals(&z.re, &z.im, prec, tol),
            Scalar::Approx(a) => a.clone(),
        }
    }

    /// Exact zero, or an approximate value with `|x| ≤ rel_tol`.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Approx(a) => a.is_negligible(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    /// `None` when dividing by zero (or by a negligible approximate value).
    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            return None;
        }
        Some(self / other)
    }

    pub fn inv(&self) -> Option<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power allowing negative exponents; `None` for `0^(-k)`.
    pub fn powi(&self, n: i64) -> Option<Scalar> {
        if n >= 0 {
            Some(self.pow(n as u32))
        } else {
            self.inv().map(|v| v.pow((-n) as u32))
        }
    }

    /// Principal square root, attempted exactly in ℚ(i) first.
    ///
    /// Returns the root and whether it is exact. When no exact root exists
    /// the value is promoted to `fallback` (the default approximate mode if
    /// `fallback` is `Exact`).
    pub fn sqrt(&self, fallback: Mode) -> (Scalar, bool) {
        match self {
            Scalar::Exact(z) => {
                if let Some(root) = gaussian_sqrt(z) {
                    return (Scalar::Exact(root), true);
                }
                let mode = match fallback {
                    Mode::Exact => Mode::default_approx(),
                    m => m,
                };
                match self.to_mode(mode) {
                    Scalar::Approx(a) => (Scalar::Approx(a.sqrt()), false),
                    Scalar::Exact(_) => unreachable!("promotion to approximate mode"),
                }
            }
            Scalar::Approx(a) => (Scalar::Approx(a.sqrt()), false),
        }
    }

    /// The integer this scalar equals (within tolerance in approximate mode).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Exact(z) => (z.im.is_zero() && z.re.is_integer()).then(|| z.re.to_integer()),
            Scalar::Approx(a) => a.nearest_integer().map(BigInt::from),
        }
    }

    /// True when the scalar is a positive integer (an element of ℕ = {1, 2, …}).
    pub fn is_positive_integer(&self) -> bool {
        self.as_integer().is_some_and(|n| n.is_positive())
    }

    /// True when the scalar lies in ℕ₀ = {0, 1, 2, …}.
    pub fn is_nonnegative_integer(&self) -> bool {
        self.as_integer().is_some_and(|n| !n.is_negative())
    }

    /// `|x − y| / max(1, |x|, |y|)`; zero for identical exact values.
    pub fn rel_diff(&self, other: &Scalar) -> f64 {
        if let (Scalar::Exact(x), Scalar::Exact(y)) = (self, other) {
            if x == y {
                return 0.0;
            }
        }
        let (x, y) = self.approx_pair(other);
        x.rel_diff(&y)
    }

    /// Real and imaginary parts rounded to `f64`.
    pub fn to_f64_parts(&self) -> (f64, f64) {
        match self {
            Scalar::Exact(z) => (ratio_to_f64(&z.re), ratio_to_f64(&z.im)),
            Scalar::Approx(a) => (a.re_f64(), a.im_f64()),
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rising factorial `(α)_n = α(α+1)⋯(α+n−1)`, with `(α)_0 = 1`.
pub fn pochhammer(alpha: &Scalar, n: usize) -> Scalar {
    (0..n).fold(Scalar::one(), |acc, i| acc * (alpha + &Scalar::from_int(i as i64)))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
            _ => {
                let (x, y) = self.approx_pair(other);
                x.approx_eq(&y)
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $exact:expr, $approx:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact($exact(x, y)),
                    _ => {
                        let (x, y) = self.approx_pair(rhs);
                        Scalar::Approx(x.$approx(&y))
                    }
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

fn exact_add(x: &GaussianRational, y: &GaussianRational) -> GaussianRational {
    x + y
}

fn exact_sub(x: &GaussianRational, y: &GaussianRational) -> GaussianRational {
    x - y
}

fn exact_mul(x: &GaussianRational, y: &GaussianRational) -> GaussianRational {
    // Most values are real; skip the cross terms when possible.
    if x.im.is_zero() && y.im.is_zero() {
        Complex::new(&x.re * &y.re, BigRational::zero())
    } else {
        x * y
    }
}

fn exact_div(x: &GaussianRational, y: &GaussianRational) -> GaussianRational {
    assert!(!y.is_zero(), "division by exact zero");
    if y.im.is_zero() {
        Complex::new(&x.re / &y.re, &x.im / &y.re)
    } else {
        x / y
    }
}

forward_binop!(Add, add, exact_add, add);
forward_binop!(Sub, sub, exact_sub, sub);
forward_binop!(Mul, mul, exact_mul, mul);
forward_binop!(Div, div, exact_div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z.clone()),
            Scalar::Approx(a) => Scalar::Approx(a.neg()),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Approx(a) => write!(f, "{a}"),
            Scalar::Exact(z) => {
                if z.im.is_zero() {
                    return write!(f, "{}", fmt_rational(&z.re));
                }
                let im = fmt_rational(&z.im);
                if z.re.is_zero() {
                    return write!(f, "{im}i");
                }
                let re = fmt_rational(&z.re);
                if z.im.is_negative() {
                    write!(f, "{re}{im}i")
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
        }
    }
}

/// Parses a decimal literal such as `-12`, `0.25` or `3e-2` exactly.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

fn parse_real(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_decimal(d)?;
            if d.is_zero() {
                return None;
            }
            Some(parse_decimal(n)? / d)
        }
        None => parse_decimal(s),
    }
}

fn parse_imag_coeff(s: &str) -> Option<BigRational> {
    match s {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        other => parse_real(other),
    }
}

/// Index of the sign separating the real and imaginary parts, if any.
fn split_point(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'/'))
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `n`, `n/d`, decimals, and complex values written `re+im i`.
    fn from_str(text: &str) -> Result<Scalar> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("invalid scalar '{text}'"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some(body) = s.strip_suffix('i') {
            let (re, im) = match split_point(body) {
                Some(pos) => (parse_real(&body[..pos]).ok_or_else(bad)?, parse_imag_coeff(&body[pos..]).ok_or_else(bad)?),
                None => (BigRational::zero(), parse_imag_coeff(body).ok_or_else(bad)?),
            };
            return Ok(Scalar::gaussian(re, im));
        }
        parse_real(&s).map(Scalar::from_rational).ok_or_else(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&s("7/3"), 0), Scalar::one());
        assert_eq!(pochhammer(&Scalar::one(), 5), Scalar::from_int(120));
        assert_eq!(pochhammer(&s("1/2"), 2), s("3/4"));
    }

    #[test]
    fn parse_and_print() {
        for text in ["0", "-3", "1/2", "-7/4", "2i", "-1/2i", "1/2+3i", "1-2/3i"] {
            assert_eq!(s(text).to_string(), text);
        }
        assert_eq!(s("i"), Scalar::i());
        assert_eq!(s("-i"), -Scalar::i());
        assert_eq!(s("0.25"), s("1/4"));
        assert_eq!(s("1.5e2"), s("150"));
        assert_eq!(s(" 1 + 2 i "), s("1+2i"));
        assert!("".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn exact_square_roots() {
        let (r, exact) = s("9/4").sqrt(Mode::Exact);
        assert!(exact);
        assert_eq!(r, s("3/2"));
        let (r, exact) = s("-4").sqrt(Mode::Exact);
        assert!(exact);
        assert_eq!(r, s("2i"));
        // (1+2i)^2 = -3+4i
        let (r, exact) = s("-3+4i").sqrt(Mode::Exact);
        assert!(exact);
        assert_eq!(r, s("1+2i"));
        // principal branch: (-1-2i)^2 is also -3-4i... root must have re >= 0
        let (r, _) = s("-3-4i").sqrt(Mode::Exact);
        assert_eq!(r, s("1-2i"));
    }

    #[test]
    fn inexact_square_root_falls_back() {
        let (r, exact) = s("3").sqrt(Mode::Exact);
        assert!(!exact);
        assert!(!r.is_exact());
        assert_eq!(&r * &r, s("3"));
        assert!((r.to_f64_parts().0 - 3f64.sqrt()).abs() < 1e-15);
        let (r, _) = s("-2").sqrt(Mode::Exact);
        let (re, im) = r.to_f64_parts();
        assert!(re.abs() < 1e-30 && (im - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mixing_promotes_to_approx() {
        let a = s("1/3").to_mode(Mode::default_approx());
        let b = s("2/3");
        let c = &a + &b;
        assert!(!c.is_exact());
        assert_eq!(c, Scalar::one());
        assert!(c.rel_diff(&Scalar::one()) < 1e-30);
    }

    #[test]
    fn approx_equality_uses_relative_tolerance() {
        let mode = Mode::default_approx();
        let big = s("1000000000000").to_mode(mode);
        let nudged = &big + &s("1/1000000000000000");
        assert_eq!(big, nudged);
        let far = &big + &s("1/1000");
        assert_ne!(big, far);
    }

    #[test]
    fn integer_membership() {
        assert!(s("3").is_positive_integer());
        assert!(!s("0").is_positive_integer());
        assert!(s("0").is_nonnegative_integer());
        assert!(!s("1/2").is_nonnegative_integer());
        assert!(!s("2+i").is_nonnegative_integer());
        let approx_two = s("2").to_mode(Mode::default_approx());
        assert!(approx_two.is_positive_integer());
    }

    #[test]
    fn approx_display_is_decimal() {
        let (r, _) = s("2").sqrt(Mode::Exact);
        let text = r.to_string();
        assert!(text.starts_with("1.41421356237309504880168872420969807"), "{text}");
    }
}
