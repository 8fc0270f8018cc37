//! Linear functionals on polynomials, represented by their moments.

mod hankel;

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{Poly, Scalar};
use crate::error::{Error, Result};

pub use hankel::{gram, hankel_det, is_regular_upto, GramRecord, RegularityCheck};

/// Where a functional came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    PearsonGenerated,
    Transformed,
    Explicit,
}

type MomentFn = dyn Fn(usize) -> Scalar + Send + Sync;
type StepFn = dyn Fn(usize, &[Scalar]) -> Scalar + Send + Sync;

enum Source {
    /// Closed-form moment generator.
    Explicit(Box<MomentFn>),
    /// `u_n` computed from `u_0, …, u_{n-1}`.
    Recurrence(Box<StepFn>),
    LeftMul(Poly, MomentFunctional),
    Derivative(MomentFunctional),
    Translate(Scalar, MomentFunctional),
    Homothety(Scalar, MomentFunctional),
    Combination(Vec<(Scalar, MomentFunctional)>),
}

/// A functional `u` on polynomials, known through `u_n = ⟨u, xⁿ⟩`.
///
/// Moments are produced on demand and memoized in an append-only table.
/// Clones copy the table, so two functionals never share one.
pub struct MomentFunctional {
    source: Arc<Source>,
    cache: Mutex<Vec<Scalar>>,
    provenance: Provenance,
}

impl Clone for MomentFunctional {
    fn clone(&self) -> Self {
        MomentFunctional {
            source: Arc::clone(&self.source),
            cache: Mutex::new(self.cache.lock().expect("moment cache poisoned").clone()),
            provenance: self.provenance,
        }
    }
}

impl fmt::Debug for MomentFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cached = self.cache.lock().map(|c| c.len()).unwrap_or(0);
        f.debug_struct("MomentFunctional")
            .field("provenance", &self.provenance)
            .field("cached_moments", &cached)
            .finish()
    }
}

fn binomial_row(n: usize) -> Vec<Scalar> {
    let mut row = vec![Scalar::one()];
    for k in 1..=n {
        let next = &row[k - 1] * &Scalar::ratio((n + 1 - k) as i64, k as i64);
        row.push(next);
    }
    row
}

impl MomentFunctional {
    fn with_source(source: Source, provenance: Provenance) -> Self {
        MomentFunctional {
            source: Arc::new(source),
            cache: Mutex::new(Vec::new()),
            provenance,
        }
    }

    /// A functional whose `n`-th moment is `f(n)`.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(usize) -> Scalar + Send + Sync + 'static,
    {
        Self::with_source(Source::Explicit(Box::new(f)), Provenance::Explicit)
    }

    /// A functional whose moments satisfy `u_n = step(n, [u_0, …, u_{n-1}])`.
    pub fn from_recurrence<F>(step: F, provenance: Provenance) -> Self
    where
        F: Fn(usize, &[Scalar]) -> Scalar + Send + Sync + 'static,
    {
        Self::with_source(Source::Recurrence(Box::new(step)), provenance)
    }

    /// A functional with the given leading moments and zero moments after.
    pub fn from_moments(moments: Vec<Scalar>) -> Self {
        Self::from_fn(move |n| moments.get(n).cloned().unwrap_or_else(Scalar::zero))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_| Scalar::zero())
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    fn compute(&self, n: usize, known: &[Scalar]) -> Scalar {
        match &*self.source {
            Source::Explicit(f) => f(n),
            Source::Recurrence(step) => step(n, known),
            Source::LeftMul(p, u) => p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| c * &u.moment(n + k))
                .sum(),
            Source::Derivative(u) => match n {
                0 => Scalar::zero(),
                _ => -(&Scalar::from_int(n as i64) * &u.moment(n - 1)),
            },
            Source::Translate(b, u) => {
                if b.is_zero() {
                    return u.moment(n);
                }
                let binom = binomial_row(n);
                let mut power = Scalar::one();
                let mut acc = Scalar::zero();
                // Σ_k C(n,k) b^{n-k} u_k, accumulated from k = n downwards.
                for k in (0..=n).rev() {
                    acc += &(&(&binom[k] * &power) * &u.moment(k));
                    power = &power * b;
                }
                acc
            }
            Source::Homothety(a, u) => &a.pow(n as u32) * &u.moment(n),
            Source::Combination(terms) => terms.iter().map(|(c, u)| c * &u.moment(n)).sum(),
        }
    }

    /// `u_n = ⟨u, xⁿ⟩`.
    pub fn moment(&self, n: usize) -> Scalar {
        let mut cache = self.cache.lock().expect("moment cache poisoned");
        while cache.len() <= n {
            let k = cache.len();
            let value = self.compute(k, &cache);
            cache.push(value);
        }
        cache[n].clone()
    }

    /// `[u_0, …, u_{count-1}]`.
    pub fn moments(&self, count: usize) -> Vec<Scalar> {
        if count == 0 {
            return Vec::new();
        }
        self.moment(count - 1);
        self.cache.lock().expect("moment cache poisoned")[..count].to_vec()
    }

    /// `⟨u, p⟩ = Σ coeff_k(p)·u_k`.
    pub fn apply(&self, p: &Poly) -> Scalar {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| c * &self.moment(k))
            .sum()
    }

    /// `φu`, defined by `⟨φu, p⟩ = ⟨u, φp⟩`.
    pub fn left_mul(&self, phi: &Poly) -> Self {
        Self::with_source(Source::LeftMul(phi.clone(), self.clone()), Provenance::Transformed)
    }

    /// `Du`, defined by `⟨Du, p⟩ = −⟨u, p′⟩`.
    pub fn derivative(&self) -> Self {
        Self::with_source(Source::Derivative(self.clone()), Provenance::Transformed)
    }

    /// `Dᵏu`.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |u, _| u.derivative())
    }

    /// `τ_b u`, defined by `⟨τ_b u, p⟩ = ⟨u, p(x + b)⟩`.
    pub fn translate(&self, b: &Scalar) -> Self {
        Self::with_source(Source::Translate(b.clone(), self.clone()), Provenance::Transformed)
    }

    /// `h_a u`, defined by `⟨h_a u, p⟩ = ⟨u, p(a·x)⟩`.
    pub fn homothety(&self, a: &Scalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(Self::with_source(Source::Homothety(a.clone(), self.clone()), Provenance::Transformed))
    }

    /// `v = (h_{1/A} ∘ τ_{−B}) u`, so that `⟨v, xⁿ⟩ = ⟨u, ((x − B)/A)ⁿ⟩`.
    pub fn apply_affine(&self, a: &Scalar, b: &Scalar) -> Result<Self> {
        let inv = a.inv().ok_or(Error::ZeroScale)?;
        self.translate(&-b).homothety(&inv)
    }

    /// `c·u`.
    pub fn scale(&self, c: &Scalar) -> Self {
        Self::linear_combination(vec![(c.clone(), self.clone())])
    }

    /// `Σ c_i u_i`.
    pub fn linear_combination(terms: Vec<(Scalar, MomentFunctional)>) -> Self {
        Self::with_source(Source::Combination(terms), Provenance::Transformed)
    }

    pub fn sub(&self, other: &MomentFunctional) -> Self {
        Self::linear_combination(vec![(Scalar::one(), self.clone()), (-Scalar::one(), other.clone())])
    }
}

/// First index `n ≤ horizon` with `u_n ≠ v_n`.
pub fn first_difference(u: &MomentFunctional, v: &MomentFunctional, horizon: usize) -> Option<usize> {
    (0..=horizon).find(|&n| u.moment(n) != v.moment(n))
}

/// True when `u_n = v_n` for `0 ≤ n ≤ horizon` (within tolerance for
/// approximate moments).
pub fn functionals_equal_upto(u: &MomentFunctional, v: &MomentFunctional, horizon: usize) -> bool {
    first_difference(u, v, horizon).is_none()
}
