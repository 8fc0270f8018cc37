//! Verifiers for the characterizations of classical functionals, each an
//! exact identity checked index by index.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Poly, Scalar};
use crate::classification::{canonical_pair, regularity_certificate, CanonicalFamily};
use crate::error::{Error, Result};
use crate::functional::MomentFunctional;
use crate::pearson::{lift_pearson, moments_from_pearson, PearsonPair};
use crate::recurrence::{derived_sequence, generate_polys, recurrence_coeffs, PolySequence, RecurrencePair};

/// Explicit parameters of the characterizations at index `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharParams {
    pub n: usize,
    /// Structure relation `φP_n′ = a_nP_{n+1} + b_nP_n + c_nP_{n−1}`.
    pub a_n: Scalar,
    pub b_n: Scalar,
    pub c_n: Scalar,
    /// `r_n^[1] = ψ(β_n)/(2d_{n−1})`; `None` when `d_{n−1} = 0`.
    pub r1_n: Option<Scalar>,
    /// `s_n^[1] = −(n−1)aγ_n/d_{n−2}`; `None` when the quotient is `x/0`
    /// with `x ≠ 0` (zero when the numerator vanishes).
    pub s1_n: Option<Scalar>,
    /// Bochner eigenvalue `λ_n = −n·d_{n−1}`.
    pub lambda_n: Scalar,
    /// `h_n = d_{2n−3}`.
    pub h_n: Scalar,
    /// `t_n = −d_{2n−1}γ_n`.
    pub t_n: Scalar,
    /// Rodrigues constant `k_n = Π_{i=0}^{n−1} 1/d_{n+i−1}`.
    pub k_n: Scalar,
}

/// Parameters at index `n` for the given recurrence coefficients.
///
/// Normally `rc = recurrence_coeffs(pair, n)`; passing other values is how
/// mutation tests feed tampered coefficients through the verifiers.
pub fn char_params_from(pair: &PearsonPair, rc: &RecurrencePair) -> Result<CharParams> {
    if let Some(index) = pair.first_inadmissible_index() {
        return Err(Error::NotAdmissible { index });
    }
    let n = rc.n;
    let ni = n as i64;
    let psi_beta = pair.psi().eval(&rc.beta);
    let two = Scalar::from_int(2);
    let d_prev = pair.d(ni - 1);
    let r1_n = psi_beta.checked_div(&(&two * &d_prev));
    let s1_num = -(&(&Scalar::from_int(ni - 1) * &pair.a()) * &rc.gamma);
    let s1_n = if s1_num.is_zero() { Some(Scalar::zero()) } else { s1_num.checked_div(&pair.d(ni - 2)) };
    let k_n = (0..ni).try_fold(Scalar::one(), |acc, i| {
        pair.d(ni + i - 1)
            .inv()
            .map(|inv| acc * inv)
            .ok_or(Error::NotAdmissible { index: (ni + i - 1) as usize })
    })?;
    Ok(CharParams {
        n,
        a_n: &Scalar::from_int(ni) * &pair.a(),
        b_n: -(&psi_beta / &two),
        c_n: -(&d_prev * &rc.gamma),
        r1_n,
        s1_n,
        lambda_n: -(&Scalar::from_int(ni) * &d_prev),
        h_n: pair.d(2 * ni - 3),
        t_n: -(&pair.d(2 * ni - 1) * &rc.gamma),
        k_n,
    })
}

/// Closed-form parameters of an admissible pair at index `n`.
pub fn char_params(pair: &PearsonPair, n: usize) -> Result<CharParams> {
    char_params_from(pair, &recurrence_coeffs(pair, n)?)
}

/// Parameters for `0 ≤ n ≤ horizon`.
pub fn char_params_table(pair: &PearsonPair, horizon: usize) -> Result<Vec<CharParams>> {
    (0..=horizon).map(|n| char_params(pair, n)).collect()
}

/// Everything tabulated for a canonical family at one index.
#[derive(Clone, Debug, PartialEq)]
pub struct Table3Row {
    pub family: CanonicalFamily,
    pub params: CharParams,
    pub recurrence: RecurrencePair,
}

/// Parameters of a canonical family at index `n`, obtained by feeding its
/// canonical pair through the general formulas.
pub fn table3_row(family: &CanonicalFamily, n: usize) -> Result<Table3Row> {
    let cert = regularity_certificate(family);
    if let Some(cond) = cert.violated {
        return Err(Error::Regularity(format!("{family}: {cond}")));
    }
    let pair = canonical_pair(family);
    let recurrence = recurrence_coeffs(&pair, n)?;
    let params = char_params_from(&pair, &recurrence)?;
    Ok(Table3Row { family: family.clone(), params, recurrence })
}

/// Which characterization a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Characterization {
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl Characterization {
    pub const ALL: [Characterization; 7] = [
        Characterization::C2,
        Characterization::C3,
        Characterization::C4,
        Characterization::C5,
        Characterization::C6,
        Characterization::C7,
        Characterization::C8,
    ];

    /// Short name of the identity being checked.
    pub fn description(&self) -> &'static str {
        match self {
            Characterization::C2 => "structure relation",
            Characterization::C3 => "orthogonality of derivatives",
            Characterization::C4 => "derivative decomposition",
            Characterization::C5 => "Bochner differential equation",
            Characterization::C6 => "Stieltjes series equation",
            Characterization::C7 => "McCarthy relation",
            Characterization::C8 => "Rodrigues formula",
        }
    }
}

impl fmt::Display for Characterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Characterization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Characterization::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown characterization '{s}' (expected C2..C8)")))
    }
}

/// A nonzero residual, kept verbatim.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Poly(Poly),
    Scalar(Scalar),
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Poly(p) => write!(f, "{p}"),
            Residual::Scalar(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub index: usize,
    pub residual: Residual,
    pub note: String,
}

/// Outcome of one verifier.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub characterization: Characterization,
    /// Derivative order for C3 and C4.
    pub k: Option<usize>,
    pub horizon: usize,
    pub passed: bool,
    pub first_failure: Option<Failure>,
}

impl CheckReport {
    fn new(characterization: Characterization, k: Option<usize>, horizon: usize, failure: Option<Failure>) -> Self {
        CheckReport { characterization, k, horizon, passed: failure.is_none(), first_failure: failure }
    }

    pub fn failing_index(&self) -> Option<usize> {
        self.first_failure.as_ref().map(|f| f.index)
    }
}

fn poly_failure(index: usize, residual: Poly, note: impl Into<String>) -> Option<Failure> {
    Some(Failure { index, residual: Residual::Poly(residual), note: note.into() })
}

fn scalar_failure(index: usize, residual: Scalar, note: impl Into<String>) -> Option<Failure> {
    Some(Failure { index, residual: Residual::Scalar(residual), note: note.into() })
}

fn require_len(seq: &PolySequence, needed: usize, what: &str) -> Result<()> {
    if seq.len() < needed {
        return Err(Error::Inconsistent(format!(
            "{what} needs {needed} polynomials but the sequence has {}",
            seq.len()
        )));
    }
    Ok(())
}

fn require_params(params: &[CharParams], needed: usize) -> Result<()> {
    if params.len() < needed {
        return Err(Error::Inconsistent(format!("need parameters for {needed} indices, got {}", params.len())));
    }
    Ok(())
}

/// Structure relation with the pair's closed-form parameters.
pub fn check_c2(pair: &PearsonPair, seq: &PolySequence, horizon: usize) -> Result<CheckReport> {
    check_c2_with_params(pair, seq, &char_params_table(pair, horizon)?, horizon)
}

/// `φP_n′ − a_nP_{n+1} − b_nP_n − c_nP_{n−1} = 0` and `c_n ≠ 0` (`n ≥ 1`)
/// for `0 ≤ n ≤ horizon`.
pub fn check_c2_with_params(
    pair: &PearsonPair,
    seq: &PolySequence,
    params: &[CharParams],
    horizon: usize,
) -> Result<CheckReport> {
    require_len(seq, horizon + 2, "C2")?;
    require_params(params, horizon + 1)?;
    let failure = (0..=horizon).find_map(|n| {
        let pr = &params[n];
        if n >= 1 && pr.c_n.is_zero() {
            return scalar_failure(n, pr.c_n.clone(), "c_n vanishes");
        }
        let lhs = pair.phi() * &seq.get(n).derivative();
        let rhs = &(&seq.get(n + 1).scale(&pr.a_n) + &seq.get(n).scale(&pr.b_n)) + &seq.at(n as isize - 1).scale(&pr.c_n);
        let residual = &lhs - &rhs;
        (!residual.is_zero()).then(|| poly_failure(n, residual, "structure relation residual")).flatten()
    });
    Ok(CheckReport::new(Characterization::C2, None, horizon, failure))
}

/// Orthogonality of the derived sequence `P_n^[k]` with respect to `φᵏu`,
/// for indices up to `horizon`.
pub fn check_c3(pair: &PearsonPair, seq: &PolySequence, k: usize, horizon: usize) -> Result<CheckReport> {
    if k == 0 {
        return Err(Error::Inconsistent("C3 needs k >= 1".into()));
    }
    require_len(seq, horizon + k + 1, "C3")?;
    let u = moments_from_pearson(pair, &Scalar::one())?;
    let (_, uk) = lift_pearson(pair, &u, k);
    let mut report = check_c3_on(&uk, &derived_sequence(seq, k), horizon)?;
    report.k = Some(k);
    Ok(report)
}

/// Gram diagonality `⟨v, Q_mQ_n⟩ = 0` for `m ≠ n` and `≠ 0` for `m = n`,
/// `m, n ≤ horizon`. The reported index is the larger of the two.
pub fn check_c3_on(v: &MomentFunctional, seq: &PolySequence, horizon: usize) -> Result<CheckReport> {
    require_len(seq, horizon + 1, "C3")?;
    let failure = (0..=horizon).find_map(|n| {
        (0..=n).find_map(|m| {
            let value = v.apply(&(seq.get(m) * seq.get(n)));
            if m == n && value.is_zero() {
                scalar_failure(n, value, format!("<v, Q_{n}^2> vanishes"))
            } else if m != n && !value.is_zero() {
                scalar_failure(n, value, format!("<v, Q_{m} Q_{n}> is nonzero"))
            } else {
                None
            }
        })
    });
    Ok(CheckReport::new(Characterization::C3, None, horizon, failure))
}

/// Coefficients `(r, s)` with `P − Q_n − r·Q_{n−1} − s·Q_{n−2}` as small as
/// possible, found by matching the `x^{n−1}` and `x^{n−2}` coefficients, and
/// the remaining residual.
fn solve_decomposition(target: &Poly, seq: &PolySequence, n: usize) -> (Scalar, Scalar, Poly) {
    let diff = target - seq.get(n);
    let r = diff.coeff(n - 1);
    let after_r = &diff - &seq.get(n - 1).scale(&r);
    let s = after_r.coeff(n - 2);
    let residual = &after_r - &seq.get(n - 2).scale(&s);
    (r, s, residual)
}

/// `P_n^[k−1] = P_n^[k] + r_n^[k]P_{n−1}^[k] + s_n^[k]P_{n−2}^[k]` for
/// `2 ≤ n ≤ horizon`, with `(r, s)` solved exactly. For `k = 1` the solved
/// values must also equal the closed forms `r_n^[1]`, `s_n^[1]`.
pub fn check_c4(pair: &PearsonPair, seq: &PolySequence, k: usize, horizon: usize) -> Result<CheckReport> {
    if k == 0 {
        return Err(Error::Inconsistent("C4 needs k >= 1".into()));
    }
    require_len(seq, horizon + k + 1, "C4")?;
    let upper = derived_sequence(seq, k - 1);
    let lower = derived_sequence(seq, k);
    let closed = if k == 1 { Some(char_params_table(pair, horizon)?) } else { None };
    let failure = (2..=horizon).find_map(|n| {
        let (r, s, residual) = solve_decomposition(upper.get(n), &lower, n);
        if !residual.is_zero() {
            return poly_failure(n, residual, "no decomposition over P_{n-1}^[k], P_{n-2}^[k]");
        }
        let params = &closed.as_ref()?[n];
        if params.r1_n.as_ref() != Some(&r) {
            return scalar_failure(n, r, "solved r_n differs from the closed form");
        }
        if params.s1_n.as_ref() != Some(&s) {
            return scalar_failure(n, s, "solved s_n differs from the closed form");
        }
        None
    });
    Ok(CheckReport::new(Characterization::C4, Some(k), horizon, failure))
}

/// `(r_n^[k], s_n^[k])` from the recurrence coefficients of the original and
/// the derived sequence:
/// `r = n(β_{n+k−1} − β^[k]_{n−1})/k`,
/// `s = n((n−1)γ_{n+k−1} − (n+k−1)γ^[k]_{n−1})/(k(n+k−1))`.
pub fn decomposition_params(pair: &PearsonPair, k: usize, n: usize) -> Result<(Scalar, Scalar)> {
    assert!(k >= 1 && n >= 2, "decomposition parameters need k >= 1 and n >= 2");
    let lifted = pair.lifted(k);
    let outer = recurrence_coeffs(pair, n + k - 1)?;
    let inner = recurrence_coeffs(&lifted, n - 1)?;
    let (ns, ks) = (Scalar::from_int(n as i64), Scalar::from_int(k as i64));
    let nk1 = Scalar::from_int((n + k - 1) as i64);
    let r = &(&ns * &(&outer.beta - &inner.beta)) / &ks;
    let num = &(&Scalar::from_int(n as i64 - 1) * &outer.gamma) - &(&nk1 * &inner.gamma);
    let s = &(&ns * &num) / &(&ks * &nk1);
    Ok((r, s))
}

/// Bochner equation with `λ_n = −n·d_{n−1}`.
pub fn check_c5(pair: &PearsonPair, seq: &PolySequence, horizon: usize) -> Result<CheckReport> {
    check_c5_with_params(pair, seq, &char_params_table(pair, horizon)?, horizon)
}

/// `φP_n″ + ψP_n′ + λ_nP_n = 0` and `λ_n ≠ 0` (`n ≥ 1`) for `0 ≤ n ≤ horizon`.
pub fn check_c5_with_params(
    pair: &PearsonPair,
    seq: &PolySequence,
    params: &[CharParams],
    horizon: usize,
) -> Result<CheckReport> {
    require_len(seq, horizon + 1, "C5")?;
    require_params(params, horizon + 1)?;
    let failure = (0..=horizon).find_map(|n| {
        let lambda = &params[n].lambda_n;
        if n >= 1 && lambda.is_zero() {
            return scalar_failure(n, lambda.clone(), "lambda_n vanishes");
        }
        let p = seq.get(n);
        let d1 = p.derivative();
        let residual = &(&(pair.phi() * &d1.derivative()) + &(pair.psi() * &d1)) + &p.scale(lambda);
        (!residual.is_zero()).then(|| poly_failure(n, residual, "Bochner residual")).flatten()
    });
    Ok(CheckReport::new(Characterization::C5, None, horizon, failure))
}

/// Truncated Laurent series `Σ_j c_j w^j` in `w = 1/z`, `j ≥ low`.
#[derive(Clone, Debug)]
struct Laurent {
    low: i64,
    coeffs: Vec<Scalar>,
}

impl Laurent {
    fn coeff(&self, j: i64) -> Scalar {
        usize::try_from(j - self.low)
            .ok()
            .and_then(|i| self.coeffs.get(i).cloned())
            .unwrap_or_else(Scalar::zero)
    }

    fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// A polynomial in `z`: `Σ p_k z^k = Σ p_k w^{−k}`.
    fn from_poly_in_z(p: &Poly) -> Laurent {
        let deg = p.degree().unwrap_or(0) as i64;
        let coeffs = (0..=deg).map(|j| p.coeff((deg - j) as usize)).collect();
        Laurent { low: -deg, coeffs }
    }

    /// `d/dz`, using `d/dz w^j = −j·w^{j+1}`.
    fn derivative_z(&self) -> Laurent {
        let coeffs = (self.low..=self.high())
            .map(|j| -(&Scalar::from_int(j) * &self.coeff(j)))
            .collect();
        Laurent { low: self.low + 1, coeffs }
    }

    /// Product keeping powers up to `max_power`.
    fn mul(&self, other: &Laurent, max_power: i64) -> Laurent {
        let low = self.low + other.low;
        let high = (self.high() + other.high()).min(max_power);
        let mut coeffs = vec![Scalar::zero(); (high - low + 1).max(0) as usize];
        for i in self.low..=self.high() {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in other.low..=other.high() {
                if i + j > high {
                    break;
                }
                coeffs[(i + j - low) as usize] += &(&a * &other.coeff(j));
            }
        }
        Laurent { low, coeffs }
    }

    fn add(&self, other: &Laurent) -> Laurent {
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        Laurent { low, coeffs: (low..=high).map(|j| self.coeff(j) + other.coeff(j)).collect() }
    }
}

/// Formal Stieltjes equation `φS′ = (ψ − φ′)S + (p − a)u_0` for
/// `S(z) = −Σ u_n z^{−n−1}`, compared coefficientwise in `z^{−j}` for
/// `j ≤ truncation`.
pub fn check_c6(pair: &PearsonPair, u: &MomentFunctional, truncation: usize) -> Result<CheckReport> {
    let m = truncation as i64;
    // S needs terms through w^{M+3} so that every compared coefficient is complete.
    let series = Laurent { low: 1, coeffs: u.moments(truncation + 3).into_iter().map(|c| -c).collect() };
    let keep = m + 2;
    let lhs = Laurent::from_poly_in_z(pair.phi()).mul(&series.derivative_z(), keep);
    let factor = Laurent::from_poly_in_z(&(pair.psi() - &pair.phi().derivative()));
    let constant = Laurent { low: 0, coeffs: vec![&(&pair.p() - &pair.a()) * &u.moment(0)] };
    let rhs = factor.mul(&series, keep).add(&constant);
    let start = lhs.low.min(rhs.low);
    let failure = (start..=m).find_map(|j| {
        let diff = &lhs.coeff(j) - &rhs.coeff(j);
        (!diff.is_zero())
            .then(|| scalar_failure(j.max(0) as usize, diff, format!("coefficient of z^-{j} differs")))
            .flatten()
    });
    Ok(CheckReport::new(Characterization::C6, None, truncation, failure))
}

/// McCarthy relation with the pair's closed-form parameters.
pub fn check_c7(pair: &PearsonPair, seq: &PolySequence, horizon: usize) -> Result<CheckReport> {
    check_c7_with_params(pair, seq, &char_params_table(pair, horizon)?, horizon)
}

/// `φ(P_nP_{n−1})′ = h_nP_n² − (ψ − φ′)P_nP_{n−1} + t_nP_{n−1}²` for
/// `1 ≤ n ≤ horizon`.
pub fn check_c7_with_params(
    pair: &PearsonPair,
    seq: &PolySequence,
    params: &[CharParams],
    horizon: usize,
) -> Result<CheckReport> {
    require_len(seq, horizon + 1, "C7")?;
    require_params(params, horizon + 1)?;
    let shifted_psi = pair.psi() - &pair.phi().derivative();
    let failure = (1..=horizon).find_map(|n| {
        let (p, q) = (seq.get(n), seq.get(n - 1));
        let product = p * q;
        let lhs = pair.phi() * &product.derivative();
        let rhs = &(&(p * p).scale(&params[n].h_n) - &(&shifted_psi * &product)) + &(q * q).scale(&params[n].t_n);
        let residual = &lhs - &rhs;
        (!residual.is_zero()).then(|| poly_failure(n, residual, "McCarthy residual")).flatten()
    });
    Ok(CheckReport::new(Characterization::C7, None, horizon, failure))
}

/// Rodrigues formula with the pair's closed-form `k_n`.
pub fn check_c8(
    pair: &PearsonPair,
    u: &MomentFunctional,
    seq: &PolySequence,
    horizon: usize,
    max_power: usize,
) -> Result<CheckReport> {
    check_c8_with_params(pair, u, seq, &char_params_table(pair, horizon)?, horizon, max_power)
}

/// `⟨P_nu, x^m⟩ = k_n⟨Dⁿ(φⁿu), x^m⟩` for `n ≤ horizon`, `m ≤ max_power`.
///
/// The right side is built with the functional operations (left
/// multiplication by `φⁿ`, then `n` distributional derivatives).
pub fn check_c8_with_params(
    pair: &PearsonPair,
    u: &MomentFunctional,
    seq: &PolySequence,
    params: &[CharParams],
    horizon: usize,
    max_power: usize,
) -> Result<CheckReport> {
    require_len(seq, horizon + 1, "C8")?;
    require_params(params, horizon + 1)?;
    let mut phi_power = Poly::one();
    let mut failure = None;
    for n in 0..=horizon {
        if n > 0 {
            phi_power = &phi_power * pair.phi();
        }
        let lhs = u.left_mul(seq.get(n));
        let rhs = u.left_mul(&phi_power).nth_derivative(n).scale(&params[n].k_n);
        if let Some(m) = (0..=max_power).find(|&m| lhs.moment(m) != rhs.moment(m)) {
            let diff = &lhs.moment(m) - &rhs.moment(m);
            failure = scalar_failure(n, diff, format!("moment x^{m} differs"));
            break;
        }
    }
    Ok(CheckReport::new(Characterization::C8, None, horizon, failure))
}

/// Runs every verifier on a pair: C2, C5, C7 to `horizon`, C8 to
/// `min(horizon, 8)` with powers up to `2·truncation`, C3 and C4 for
/// `k ∈ {1, 2, 3}` to `min(horizon, 10)`, and C6 to `truncation`.
pub fn verify_all(pair: &PearsonPair, horizon: usize, truncation: usize) -> Result<Vec<CheckReport>> {
    let seq = generate_polys(pair, horizon + 4)?;
    let u = moments_from_pearson(pair, &Scalar::one())?;
    let params = char_params_table(pair, horizon)?;
    let small = horizon.min(10);
    let mut reports = vec![check_c2_with_params(pair, &seq, &params, horizon)?];
    for k in 1..=3 {
        reports.push(check_c3(pair, &seq, k, small)?);
    }
    for k in 1..=3 {
        reports.push(check_c4(pair, &seq, k, small.max(2))?);
    }
    reports.push(check_c5_with_params(pair, &seq, &params, horizon)?);
    reports.push(check_c6(pair, &u, truncation)?);
    reports.push(check_c7_with_params(pair, &seq, &params, horizon)?);
    reports.push(check_c8_with_params(pair, &u, &seq, &params, horizon.min(8), 2 * truncation)?);
    Ok(reports)
}
