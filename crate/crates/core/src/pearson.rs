//! Pearson pairs `(φ, ψ)` and the distributional equation `D(φu) = ψu`.

use std::fmt;

use crate::algebra::{linalg, Mode, Poly, Scalar};
use crate::classification::{self, Certificate};
use crate::error::{Error, Result};
use crate::functional::{MomentFunctional, Provenance};

/// `φ(x) = ax² + bx + c` and `ψ(x) = px + q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PearsonPair {
    phi: Poly,
    psi: Poly,
}

impl PearsonPair {
    /// Requires `deg φ ≤ 2`, `deg ψ ≤ 1` and `(φ, ψ) ≠ (0, 0)`.
    pub fn new(phi: Poly, psi: Poly) -> Result<Self> {
        if phi.degree().is_some_and(|d| d > 2) {
            return Err(Error::InvalidPolynomial(format!("phi has degree {} > 2", phi.degree().unwrap_or(0))));
        }
        if psi.degree().is_some_and(|d| d > 1) {
            return Err(Error::InvalidPolynomial(format!("psi has degree {} > 1", psi.degree().unwrap_or(0))));
        }
        if phi.is_zero() && psi.is_zero() {
            return Err(Error::InvalidPolynomial("phi and psi are both zero".into()));
        }
        Ok(PearsonPair { phi, psi })
    }

    pub fn from_coeffs(a: Scalar, b: Scalar, c: Scalar, p: Scalar, q: Scalar) -> Result<Self> {
        Self::new(Poly::new(vec![c, b, a]), Poly::new(vec![q, p]))
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }

    pub fn psi(&self) -> &Poly {
        &self.psi
    }

    pub fn a(&self) -> Scalar {
        self.phi.coeff(2)
    }

    pub fn b(&self) -> Scalar {
        self.phi.coeff(1)
    }

    pub fn c(&self) -> Scalar {
        self.phi.coeff(0)
    }

    pub fn p(&self) -> Scalar {
        self.psi.coeff(1)
    }

    pub fn q(&self) -> Scalar {
        self.psi.coeff(0)
    }

    pub fn is_exact(&self) -> bool {
        self.phi.is_exact() && self.psi.is_exact()
    }

    pub fn to_mode(&self, mode: Mode) -> Self {
        PearsonPair { phi: self.phi.to_mode(mode), psi: self.psi.to_mode(mode) }
    }

    /// `d_n = n·a + p`, for any integer `n` (negative indices appear in the
    /// closed-form parameters, e.g. `h_1 = d_{−1}`).
    pub fn d(&self, n: i64) -> Scalar {
        &Scalar::from_int(n) * &self.a() + self.p()
    }

    /// `e_n = n·b + q`.
    pub fn e(&self, n: i64) -> Scalar {
        &Scalar::from_int(n) * &self.b() + self.q()
    }

    /// `ψ_n = ψ + nφ′ = d_{2n}·x + e_n`.
    pub fn psi_n(&self, n: usize) -> Poly {
        &self.psi + &self.phi.derivative().scale(&Scalar::from_int(n as i64))
    }

    /// `(φ, ψ_k)`, the pair satisfied by `φᵏu`.
    pub fn lifted(&self, k: usize) -> Self {
        PearsonPair { phi: self.phi.clone(), psi: self.psi_n(k) }
    }

    /// Smallest `n ≥ 0` with `d_n = 0`, decided in closed form.
    pub fn first_inadmissible_index(&self) -> Option<usize> {
        let (a, p) = (self.a(), self.p());
        if p.is_zero() {
            return Some(0);
        }
        if a.is_zero() {
            return None;
        }
        let ratio = -&p / &a;
        if ratio.is_nonnegative_integer() {
            ratio.as_integer().and_then(|n| usize::try_from(n).ok())
        } else {
            None
        }
    }

    /// `d_n ≠ 0` for every `n ≥ 0`.
    pub fn admissible(&self) -> bool {
        self.first_inadmissible_index().is_none()
    }

    fn require_admissible(&self) -> Result<()> {
        match self.first_inadmissible_index() {
            Some(index) => Err(Error::NotAdmissible { index }),
            None => Ok(()),
        }
    }

    /// Numerator of `φ(−e_n/d_{2n})` over `d_{2n}²`, namely
    /// `a·e_n² − b·e_n·d_{2n} + c·d_{2n}²`. Evaluated without division.
    pub fn regularity_numerator(&self, n: usize) -> Scalar {
        let e = self.e(n as i64);
        let d = self.d(2 * n as i64);
        &(&(&self.a() * &e) * &e) - &(&(&self.b() * &e) * &d) + &(&self.c() * &d) * &d
    }

    /// `φ(−e_n/d_{2n})`, or `None` when `d_{2n} = 0`.
    pub fn regularity_value(&self, n: usize) -> Option<Scalar> {
        let d = self.d(2 * n as i64);
        self.regularity_numerator(n).checked_div(&(&d * &d))
    }
}

impl fmt::Display for PearsonPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(phi = {}, psi = {})", self.phi, self.psi)
    }
}

/// The functional with `u_0 = u0` solving `D(φu) = ψu`.
///
/// Its moments follow `d_n u_{n+1} + e_n u_n + n·φ(0)·u_{n−1} = 0`.
pub fn moments_from_pearson(pair: &PearsonPair, u0: &Scalar) -> Result<MomentFunctional> {
    pair.require_admissible()?;
    let (u0, c) = (u0.clone(), pair.c());
    let pair = pair.clone();
    Ok(MomentFunctional::from_recurrence(
        move |n, prev| {
            if n == 0 {
                return u0.clone();
            }
            let k = n - 1;
            let mut rhs = &pair.e(k as i64) * &prev[k];
            if k > 0 && !c.is_zero() {
                rhs += &(&(&Scalar::from_int(k as i64) * &c) * &prev[k - 1]);
            }
            -(&rhs / &pair.d(k as i64))
        },
        Provenance::PearsonGenerated,
    ))
}

/// Eager version of [`moments_from_pearson`] returning `u_0, …, u_{count−1}`.
///
/// Unlike the lazy form it does not check admissibility up front: it fails
/// with [`Error::NotAdmissible`] exactly at the step that would divide by a
/// vanishing `d_n`.
pub fn moment_table(pair: &PearsonPair, u0: &Scalar, count: usize) -> Result<Vec<Scalar>> {
    let mut u: Vec<Scalar> = Vec::with_capacity(count);
    if count > 0 {
        u.push(u0.clone());
    }
    for n in 0..count.saturating_sub(1) {
        let d = pair.d(n as i64);
        if d.is_zero() {
            return Err(Error::NotAdmissible { index: n });
        }
        let mut rhs = &pair.e(n as i64) * &u[n];
        if n > 0 {
            rhs += &(&(&Scalar::from_int(n as i64) * &pair.c()) * &u[n - 1]);
        }
        u.push(-(&rhs / &d));
    }
    Ok(u)
}

/// `⟨D(φu) − ψu, x^m⟩ = −m⟨u, φx^{m−1}⟩ − ⟨u, ψx^m⟩`.
pub fn pearson_residual(pair: &PearsonPair, u: &MomentFunctional, m: usize) -> Scalar {
    let transport = if m == 0 {
        Scalar::zero()
    } else {
        &Scalar::from_int(m as i64) * &u.apply(&pair.phi.shift(m - 1))
    };
    -(transport + u.apply(&pair.psi.shift(m)))
}

/// `(φ, ψ_k)` together with `u^[k] = φᵏu`, which satisfies `D(φu^[k]) = ψ_k u^[k]`.
pub fn lift_pearson(pair: &PearsonPair, u: &MomentFunctional, k: usize) -> (PearsonPair, MomentFunctional) {
    if k == 0 {
        return (pair.clone(), u.clone());
    }
    (pair.lifted(k), u.left_mul(&pair.phi.pow(k)))
}

/// Finite-horizon regularity test plus the closed-form certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub admissible: bool,
    /// `d_n ≠ 0` and `φ(−e_n/d_{2n}) ≠ 0` for every `n` up to the horizon.
    pub horizon_ok: bool,
    pub failing_n: Option<usize>,
    /// Closed-form condition of the canonical family, valid for all `n`.
    /// Absent when the pair cannot be reduced to a canonical family.
    pub certificate: Option<Certificate>,
}

/// Checks `d_n ≠ 0` and `φ(−e_n/d_{2n}) ≠ 0` for `0 ≤ n ≤ horizon`.
pub fn regularity_conditions(pair: &PearsonPair, horizon: usize) -> RegularityReport {
    let admissible = pair.admissible();
    let failing_n = (0..=horizon).find(|&n| {
        pair.d(n as i64).is_zero() || pair.d(2 * n as i64).is_zero() || pair.regularity_numerator(n).is_zero()
    });
    let certificate = classification::classify(pair)
        .ok()
        .map(|reduction| classification::regularity_certificate(&reduction.family));
    RegularityReport { admissible, horizon_ok: failing_n.is_none(), failing_n, certificate }
}

/// Basis of all moment vectors `(u_0, …, u_horizon)` compatible with the
/// Pearson equation tested against `x^m`, `0 ≤ m < horizon`.
///
/// For admissible pairs this space is one dimensional. When some `d_n`
/// vanishes the equations no longer determine `u_{n+1}` and may force
/// `u_0 = 0` instead, which this makes visible.
pub fn moment_solution_space(pair: &PearsonPair, horizon: usize) -> Vec<Vec<Scalar>> {
    let cols = horizon + 1;
    let rows: Vec<Vec<Scalar>> = (0..horizon)
        .map(|m| {
            let mut row = vec![Scalar::zero(); cols];
            row[m + 1] = pair.d(m as i64);
            row[m] = pair.e(m as i64);
            if m > 0 {
                row[m - 1] = &Scalar::from_int(m as i64) * &pair.c();
            }
            row
        })
        .collect();
    linalg::nullspace(&rows, cols)
}
