//! Three-term recurrences, monic polynomial sequences and their transport
//! under affine changes of variable.

use crate::algebra::{pochhammer, Poly, Scalar};
use crate::error::{Error, Result};
use crate::functional::{hankel_det, MomentFunctional};
use crate::pearson::PearsonPair;

/// Coefficients of `P_{n+1} = (x − β_n)P_n − γ_n P_{n−1}` at index `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrencePair {
    pub n: usize,
    pub beta: Scalar,
    pub gamma: Scalar,
}

/// How a polynomial sequence was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceSource {
    FromPearson(Box<PearsonPair>),
    FromMoments,
    FromRecurrence,
    /// `P_n^[k]` of some parent sequence.
    Derived(usize),
    /// `A^{−n}P_n(Ax + B)` of some parent sequence.
    Transported { scale: Scalar, shift: Scalar },
    Explicit,
}

/// Monic polynomials `P_0, P_1, …` with `deg P_n = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySequence {
    pub polys: Vec<Poly>,
    pub source: SequenceSource,
}

impl PolySequence {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn get(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    /// `P_n`, with `P_{−1} = 0`.
    pub fn at(&self, n: isize) -> Poly {
        if n < 0 {
            Poly::zero()
        } else {
            self.polys[n as usize].clone()
        }
    }

    /// Every entry is monic of degree equal to its index.
    pub fn is_simple_monic(&self) -> bool {
        self.polys.iter().enumerate().all(|(n, p)| p.degree() == Some(n) && p.is_monic())
    }
}

fn ratio_or_err(num: Scalar, den: &Scalar, index: usize) -> Result<Scalar> {
    num.checked_div(den).ok_or(Error::NotAdmissible { index })
}

fn d_checked(pair: &PearsonPair, k: i64) -> Result<Scalar> {
    let d = pair.d(k);
    if d.is_zero() {
        return Err(Error::NotAdmissible { index: k.max(0) as usize });
    }
    Ok(d)
}

/// Closed-form `β_n` and `γ_n` of the functional attached to a Pearson pair:
///
/// `β_n = n·e_{n−1}/d_{2n−2} − (n+1)·e_n/d_{2n}` (first term absent at `n = 0`),
///
/// `γ_{n+1} = −(n+1)·d_{n−1}/(d_{2n−1}·d_{2n+1}) · φ(−e_n/d_{2n})`, where at
/// `n = 0` the factor `d_{−1}/d_{−1}` cancels to one.
///
/// `γ_0` is reported as zero. Both are independent of the normalization `u_0`.
pub fn recurrence_coeffs(pair: &PearsonPair, n: usize) -> Result<RecurrencePair> {
    if let Some(index) = pair.first_inadmissible_index() {
        return Err(Error::NotAdmissible { index });
    }
    let ni = n as i64;
    let d2n = d_checked(pair, 2 * ni)?;
    let mut beta = -ratio_or_err(&Scalar::from_int(ni + 1) * &pair.e(ni), &d2n, 2 * n)?;
    if n > 0 {
        let d_prev = d_checked(pair, 2 * ni - 2)?;
        beta += &ratio_or_err(&Scalar::from_int(ni) * &pair.e(ni - 1), &d_prev, 2 * n - 2)?;
    }
    let gamma = if n == 0 {
        Scalar::zero()
    } else {
        gamma_closed_form(pair, n - 1)?
    };
    Ok(RecurrencePair { n, beta, gamma })
}

/// `γ_{m+1}` from the closed form.
fn gamma_closed_form(pair: &PearsonPair, m: usize) -> Result<Scalar> {
    let mi = m as i64;
    let d2m = d_checked(pair, 2 * mi)?;
    // φ(−e_m/d_{2m}) = numerator / d_{2m}²
    let phi_value = pair.regularity_numerator(m) / (&d2m * &d2m);
    let next = d_checked(pair, 2 * mi + 1)?;
    let factor = if m == 0 {
        next.inv().expect("checked nonzero")
    } else {
        let num = pair.d(mi - 1);
        let den = &d_checked(pair, 2 * mi - 1)? * &next;
        &num / &den
    };
    Ok(-(&(&Scalar::from_int(mi + 1) * &factor) * &phi_value))
}

/// `recurrence_coeffs` for `0 ≤ n ≤ horizon`.
pub fn recurrence_table(pair: &PearsonPair, horizon: usize) -> Result<Vec<RecurrencePair>> {
    (0..=horizon).map(|n| recurrence_coeffs(pair, n)).collect()
}

/// Unrolls the recurrence from `P_{−1} = 0`, `P_0 = 1` up to `P_degree`.
///
/// # Panics
///
/// Panics if `rc` has fewer than `degree` entries.
pub fn polys_from_recurrence(rc: &[RecurrencePair], degree: usize) -> PolySequence {
    assert!(rc.len() >= degree, "need {degree} recurrence pairs, got {}", rc.len());
    let mut polys = vec![Poly::one()];
    let mut prev = Poly::zero();
    for r in rc.iter().take(degree) {
        let cur = polys.last().expect("nonempty").clone();
        let shifted = &(&cur.shift(1) - &cur.scale(&r.beta)) - &prev.scale(&r.gamma);
        prev = cur;
        polys.push(shifted);
    }
    PolySequence { polys, source: SequenceSource::FromRecurrence }
}

/// Monic orthogonal polynomials `P_0, …, P_degree` of a Pearson pair.
pub fn generate_polys(pair: &PearsonPair, degree: usize) -> Result<PolySequence> {
    let rc = recurrence_table(pair, degree.saturating_sub(1))?;
    let mut seq = polys_from_recurrence(&rc, degree);
    seq.source = SequenceSource::FromPearson(Box::new(pair.clone()));
    Ok(seq)
}

/// Recurrence coefficients of a regular functional for `0 ≤ n ≤ horizon`,
/// from Gram ratios:
/// `β_n = ⟨u, xP_n²⟩/⟨u, P_n²⟩` and `γ_n = ⟨u, P_n²⟩/⟨u, P_{n−1}²⟩`.
///
/// Follows the Favard normalization `γ_0 = ⟨u, 1⟩`. No Pearson pair is
/// involved, so this is an independent route to the closed forms.
pub fn ttrr_from_moments(u: &MomentFunctional, horizon: usize) -> Result<Vec<RecurrencePair>> {
    let mut out = Vec::with_capacity(horizon + 1);
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    let mut prev_norm = Scalar::one();
    for n in 0..=horizon {
        let square = &cur * &cur;
        let norm = u.apply(&square);
        if norm.is_zero() {
            return Err(Error::SingularMoment { index: n });
        }
        let beta = &u.apply(&square.shift(1)) / &norm;
        let gamma = if n == 0 { norm.clone() } else { &norm / &prev_norm };
        let next = &(&cur.shift(1) - &cur.scale(&beta)) - &prev.scale(&gamma);
        out.push(RecurrencePair { n, beta, gamma });
        prev = std::mem::replace(&mut cur, next);
        prev_norm = norm;
    }
    Ok(out)
}

/// `γ_n = H_{n−2}H_n/H_{n−1}²` for `n ≥ 1`; `None` when `H_{n−1} = 0`.
pub fn gamma_from_hankel(u: &MomentFunctional, n: usize) -> Option<Scalar> {
    assert!(n >= 1, "gamma_from_hankel needs n >= 1");
    let n = n as isize;
    let mid = hankel_det(u, n - 1);
    (&hankel_det(u, n - 2) * &hankel_det(u, n)).checked_div(&(&mid * &mid))
}

/// `P_n^[k] = P_{n+k}^{(k)}/(n+1)_k` for every `n` with `n + k` in range.
pub fn derived_sequence(seq: &PolySequence, k: usize) -> PolySequence {
    if k == 0 {
        return seq.clone();
    }
    let polys = (0..seq.len().saturating_sub(k))
        .map(|n| {
            let norm = pochhammer(&Scalar::from_int(n as i64 + 1), k);
            seq.polys[n + k].nth_derivative(k).scale(&norm.inv().expect("(n+1)_k is positive"))
        })
        .collect();
    PolySequence { polys, source: SequenceSource::Derived(k) }
}

/// `Q_n(x) = A^{−n}P_n(Ax + B)` together with `β̂_n = (β_n − B)/A` and
/// `γ̂_n = γ_n/A²`.
///
/// The polynomials obtained by composition are checked against those
/// unrolled from the transported coefficients; a mismatch is reported as
/// [`Error::Inconsistent`].
pub fn affine_transport(
    seq: &PolySequence,
    rc: &[RecurrencePair],
    scale: &Scalar,
    shift: &Scalar,
) -> Result<(PolySequence, Vec<RecurrencePair>)> {
    let inv = scale.inv().ok_or(Error::ZeroScale)?;
    let inv_sq = &inv * &inv;
    let mut factor = Scalar::one();
    let mut polys = Vec::with_capacity(seq.len());
    for p in &seq.polys {
        polys.push(p.compose_affine(scale, shift)?.scale(&factor));
        factor = &factor * &inv;
    }
    let transported: Vec<RecurrencePair> = rc
        .iter()
        .map(|r| RecurrencePair { n: r.n, beta: &(&r.beta - shift) * &inv, gamma: &r.gamma * &inv_sq })
        .collect();
    let degree = seq.len().saturating_sub(1).min(transported.len());
    let unrolled = polys_from_recurrence(&transported, degree);
    if let Some(n) = (0..=degree).find(|&n| unrolled.polys[n] != polys[n]) {
        return Err(Error::Inconsistent(format!("transported Q_{n} disagrees with its recurrence")));
    }
    let source = SequenceSource::Transported { scale: scale.clone(), shift: shift.clone() };
    Ok((PolySequence { polys, source }, transported))
}
