//! Affine reduction of Pearson pairs to the four canonical families.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Mode, Poly, Scalar};
use crate::error::{Error, Result};
use crate::pearson::{moments_from_pearson, PearsonPair};
use crate::recurrence::recurrence_coeffs;

/// Relative error allowed by [`roundtrip_check`] when the reduction is not exact.
pub const ROUNDTRIP_TOL: f64 = 1e-20;

/// Family without parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Hermite,
    Laguerre,
    Jacobi,
    Bessel,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FamilyTag::Hermite => "Hermite",
            FamilyTag::Laguerre => "Laguerre",
            FamilyTag::Jacobi => "Jacobi",
            FamilyTag::Bessel => "Bessel",
        };
        f.write_str(name)
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hermite" => Ok(FamilyTag::Hermite),
            "laguerre" => Ok(FamilyTag::Laguerre),
            "jacobi" => Ok(FamilyTag::Jacobi),
            "bessel" => Ok(FamilyTag::Bessel),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// A canonical family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum CanonicalFamily {
    Hermite,
    Laguerre { alpha: Scalar },
    Jacobi { alpha: Scalar, beta: Scalar },
    Bessel { alpha: Scalar },
}

impl CanonicalFamily {
    /// Builds a family from its tag; missing parameters are an error.
    pub fn from_tag(tag: FamilyTag, alpha: Option<Scalar>, beta: Option<Scalar>) -> Result<Self> {
        let need = |v: Option<Scalar>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("family {tag} needs parameter {name}")))
        };
        Ok(match tag {
            FamilyTag::Hermite => CanonicalFamily::Hermite,
            FamilyTag::Laguerre => CanonicalFamily::Laguerre { alpha: need(alpha, "alpha")? },
            FamilyTag::Jacobi => CanonicalFamily::Jacobi { alpha: need(alpha, "alpha")?, beta: need(beta, "beta")? },
            FamilyTag::Bessel => CanonicalFamily::Bessel { alpha: need(alpha, "alpha")? },
        })
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            CanonicalFamily::Hermite => FamilyTag::Hermite,
            CanonicalFamily::Laguerre { .. } => FamilyTag::Laguerre,
            CanonicalFamily::Jacobi { .. } => FamilyTag::Jacobi,
            CanonicalFamily::Bessel { .. } => FamilyTag::Bessel,
        }
    }

    pub fn alpha(&self) -> Option<&Scalar> {
        match self {
            CanonicalFamily::Hermite => None,
            CanonicalFamily::Laguerre { alpha } | CanonicalFamily::Jacobi { alpha, .. } | CanonicalFamily::Bessel { alpha } => {
                Some(alpha)
            }
        }
    }

    pub fn beta(&self) -> Option<&Scalar> {
        match self {
            CanonicalFamily::Jacobi { beta, .. } => Some(beta),
            _ => None,
        }
    }
}

impl fmt::Display for CanonicalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalFamily::Hermite => write!(f, "Hermite"),
            CanonicalFamily::Laguerre { alpha } => write!(f, "Laguerre({alpha})"),
            CanonicalFamily::Jacobi { alpha, beta } => write!(f, "Jacobi({alpha}, {beta})"),
            CanonicalFamily::Bessel { alpha } => write!(f, "Bessel({alpha})"),
        }
    }
}

/// Result of reducing a pair: `Φ(x) = K·φ(Ax + B)` and `Ψ(x) = K·A·ψ(Ax + B)`
/// are the canonical pair of `family`, and `(h_{1/A} ∘ τ_{−B})u` is the
/// canonical functional.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineReduction {
    pub family: CanonicalFamily,
    /// `A`.
    pub scale: Scalar,
    /// `B`.
    pub shift: Scalar,
    /// `K`.
    pub factor: Scalar,
    /// `Δ = b² − 4ac`.
    pub discriminant: Scalar,
    /// `d = ψ(−b/(2a))`, present when `a ≠ 0`.
    pub d_value: Option<Scalar>,
    /// False when a square root left ℚ(i) or the input was approximate.
    pub exact: bool,
}

/// Reduces an admissible pair to its canonical family.
///
/// Square roots use the principal branch (nonnegative real part, and
/// nonnegative imaginary part on the negative real axis). They are taken
/// exactly in ℚ(i) when possible; otherwise the reduction switches to the
/// default approximate mode and `exact` is false.
pub fn classify(pair: &PearsonPair) -> Result<AffineReduction> {
    if let Some(index) = pair.first_inadmissible_index() {
        return Err(Error::NotAdmissible { index });
    }
    let (a, b, c, p, q) = (pair.a(), pair.b(), pair.c(), pair.p(), pair.q());
    let input_exact = pair.is_exact();
    let approx_mode = match p.mode() {
        Mode::Exact => Mode::default_approx(),
        m => m,
    };
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    let discriminant = &b * &b - &(&four * &a) * &c;

    if a.is_zero() && b.is_zero() {
        if c.is_zero() {
            return Err(Error::DegeneratePair("phi vanishes identically".into()));
        }
        let (scale, exact) = (-&(&two * &c) / &p).sqrt(approx_mode);
        return Ok(AffineReduction {
            family: CanonicalFamily::Hermite,
            scale,
            shift: -&q / &p,
            factor: c.inv().expect("c is nonzero"),
            discriminant,
            d_value: None,
            exact: exact && input_exact,
        });
    }
    if a.is_zero() {
        let b2 = &b * &b;
        let alpha = &(&(&q * &b) - &(&p * &c)) / &b2 - Scalar::one();
        return Ok(AffineReduction {
            family: CanonicalFamily::Laguerre { alpha },
            scale: -&b / &p,
            shift: -&c / &b,
            factor: -&p / &b2,
            discriminant,
            d_value: None,
            exact: input_exact,
        });
    }

    let two_a = &two * &a;
    let shift = -&b / &two_a;
    let d = pair.psi().eval(&shift);
    if discriminant.is_zero() {
        if d.is_zero() {
            return Err(Error::DegeneratePair("phi has a double zero that is also a zero of psi".into()));
        }
        return Ok(AffineReduction {
            family: CanonicalFamily::Bessel { alpha: &p / &a - two },
            scale: &d / &two_a,
            shift,
            factor: &(&four * &a) / &(&d * &d),
            discriminant,
            d_value: Some(d),
            exact: input_exact,
        });
    }

    let (root, exact) = discriminant.sqrt(approx_mode);
    let base = &p / &two_a - Scalar::one();
    let skew = &d / &root;
    Ok(AffineReduction {
        family: CanonicalFamily::Jacobi { alpha: &base - &skew, beta: &base + &skew },
        scale: -(&root / &two_a),
        shift,
        factor: -(&(&four * &a) / &discriminant),
        discriminant,
        d_value: Some(d),
        exact: exact && input_exact,
    })
}

/// The canonical `(Φ, Ψ)` of a family.
pub fn canonical_pair(family: &CanonicalFamily) -> PearsonPair {
    let one = Scalar::one();
    let two = Scalar::from_int(2);
    let (phi, psi) = match family {
        CanonicalFamily::Hermite => (Poly::one(), Poly::new(vec![Scalar::zero(), -&two])),
        CanonicalFamily::Laguerre { alpha } => (Poly::x(), Poly::new(vec![alpha + &one, -&one])),
        CanonicalFamily::Jacobi { alpha, beta } => (
            Poly::new(vec![one.clone(), Scalar::zero(), -&one]),
            Poly::new(vec![beta - alpha, -(alpha + beta + two)]),
        ),
        CanonicalFamily::Bessel { alpha } => (Poly::monomial(one, 2), Poly::new(vec![two.clone(), alpha + &two])),
    };
    PearsonPair::new(phi, psi).expect("canonical pairs are well formed")
}

/// `(K·φ(Ax + B), K·A·ψ(Ax + B))`.
pub fn transform_pearson(pair: &PearsonPair, scale: &Scalar, shift: &Scalar, factor: &Scalar) -> Result<PearsonPair> {
    if factor.is_zero() {
        return Err(Error::ZeroScale);
    }
    let phi = pair.phi().compose_affine(scale, shift)?.scale(factor);
    let psi = pair.psi().compose_affine(scale, shift)?.scale(&(factor * scale));
    PearsonPair::new(phi, psi)
}

/// Coarse family from the shape of `φ` alone: constant, linear, quadratic
/// with simple zeros, quadratic with a double zero. `None` when `φ = 0`.
pub fn classify_by_degree(pair: &PearsonPair) -> Option<FamilyTag> {
    match pair.phi().degree()? {
        0 => Some(FamilyTag::Hermite),
        1 => Some(FamilyTag::Laguerre),
        _ => {
            let (a, b, c) = (pair.a(), pair.b(), pair.c());
            let discriminant = &b * &b - &(&Scalar::from_int(4) * &a) * &c;
            Some(if discriminant.is_zero() { FamilyTag::Bessel } else { FamilyTag::Jacobi })
        }
    }
}

/// A closed-form regularity condition of a canonical family, stated as the
/// membership that breaks it (ℕ = {1, 2, 3, …}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityCondition {
    /// `−α ∈ ℕ` (Laguerre, Jacobi).
    MinusAlpha,
    /// `−β ∈ ℕ` (Jacobi).
    MinusBeta,
    /// `−(α + β + 1) ∈ ℕ` (Jacobi).
    MinusAlphaBetaOne,
    /// `−(α + 1) ∈ ℕ` (Bessel).
    MinusAlphaOne,
}

impl fmt::Display for RegularityCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            RegularityCondition::MinusAlpha => "−α∈ℕ",
            RegularityCondition::MinusBeta => "−β∈ℕ",
            RegularityCondition::MinusAlphaBetaOne => "−(α+β+1)∈ℕ",
            RegularityCondition::MinusAlphaOne => "−(α+1)∈ℕ",
        };
        f.write_str(text)
    }
}

/// All-`n` regularity verdict of a canonical family.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub regular_all_n: bool,
    pub violated: Option<RegularityCondition>,
}

/// Evaluates the family's closed-form regularity conditions.
pub fn regularity_certificate(family: &CanonicalFamily) -> Certificate {
    let one = Scalar::one();
    let checks: Vec<(Scalar, RegularityCondition)> = match family {
        CanonicalFamily::Hermite => Vec::new(),
        CanonicalFamily::Laguerre { alpha } => vec![(-alpha, RegularityCondition::MinusAlpha)],
        CanonicalFamily::Jacobi { alpha, beta } => vec![
            (-alpha, RegularityCondition::MinusAlpha),
            (-beta, RegularityCondition::MinusBeta),
            (-(alpha + beta + &one), RegularityCondition::MinusAlphaBetaOne),
        ],
        CanonicalFamily::Bessel { alpha } => vec![(-(alpha + &one), RegularityCondition::MinusAlphaOne)],
    };
    let violated = checks.into_iter().find(|(v, _)| v.is_positive_integer()).map(|(_, cond)| cond);
    Certificate { regular_all_n: violated.is_none(), violated }
}

/// Outcome of [`roundtrip_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct RoundtripReport {
    pub family: CanonicalFamily,
    pub horizon: usize,
    pub passed: bool,
    pub exact: bool,
    /// Largest relative discrepancy seen across all three comparisons.
    pub max_rel_error: f64,
    /// One line per failed comparison.
    pub failures: Vec<String>,
}

struct Comparator {
    exact: bool,
    max_rel_error: f64,
    failures: Vec<String>,
}

impl Comparator {
    fn check(&mut self, what: &str, lhs: &Scalar, rhs: &Scalar) {
        let rel = lhs.rel_diff(rhs);
        self.max_rel_error = self.max_rel_error.max(rel);
        let ok = if self.exact && lhs.is_exact() && rhs.is_exact() { lhs == rhs } else { rel <= ROUNDTRIP_TOL };
        if !ok {
            self.failures.push(format!("{what}: {lhs} vs {rhs} (relative error {rel:.3e})"));
        }
    }
}

/// Checks the reduction of `pair` along three independent routes, for
/// indices up to `horizon`:
///
/// 1. moments of `(h_{1/A} ∘ τ_{−B})u` against the canonical functional with
///    the same `u_0`;
/// 2. canonical recurrence coefficients against `((β_n − B)/A, γ_n/A²)`;
/// 3. `transform_pearson(pair, A, B, K)` against the canonical pair.
///
/// Exact reductions must agree exactly; otherwise the relative error must
/// stay within [`ROUNDTRIP_TOL`].
pub fn roundtrip_check(pair: &PearsonPair, horizon: usize) -> Result<RoundtripReport> {
    let red = classify(pair)?;
    let canonical = canonical_pair(&red.family);
    let mut cmp = Comparator { exact: red.exact, max_rel_error: 0.0, failures: Vec::new() };

    let u0 = Scalar::one();
    let u = moments_from_pearson(pair, &u0)?;
    let v = u.apply_affine(&red.scale, &red.shift)?;
    let w = moments_from_pearson(&canonical, &u0)?;
    for n in 0..=horizon {
        cmp.check(&format!("moment {n}"), &v.moment(n), &w.moment(n));
    }

    let inv = red.scale.inv().ok_or(Error::ZeroScale)?;
    for n in 0..=horizon {
        let original = recurrence_coeffs(pair, n)?;
        let target = recurrence_coeffs(&canonical, n)?;
        let beta_hat = &(&original.beta - &red.shift) * &inv;
        let gamma_hat = &(&original.gamma * &inv) * &inv;
        cmp.check(&format!("beta_{n}"), &beta_hat, &target.beta);
        cmp.check(&format!("gamma_{n}"), &gamma_hat, &target.gamma);
    }

    let mapped = transform_pearson(pair, &red.scale, &red.shift, &red.factor)?;
    for k in 0..=2 {
        cmp.check(&format!("Phi coefficient {k}"), &mapped.phi().coeff(k), &canonical.phi().coeff(k));
    }
    for k in 0..=1 {
        cmp.check(&format!("Psi coefficient {k}"), &mapped.psi().coeff(k), &canonical.psi().coeff(k));
    }

    Ok(RoundtripReport {
        family: red.family,
        horizon,
        passed: cmp.failures.is_empty(),
        exact: red.exact,
        max_rel_error: cmp.max_rel_error,
        failures: cmp.failures,
    })
}
