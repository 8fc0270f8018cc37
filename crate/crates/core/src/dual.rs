//! Dual bases of monic orthogonal sequences.

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::functional::MomentFunctional;
use crate::recurrence::PolySequence;

/// `a_n = P_n·u / ⟨u, P_n²⟩`, which satisfies `⟨a_n, P_k⟩ = δ_{nk}` when the
/// sequence is orthogonal with respect to `u`.
pub fn dual_basis_functional(u: &MomentFunctional, seq: &PolySequence, n: usize) -> Result<MomentFunctional> {
    let pn = seq.get(n);
    let norm = u.apply(&(pn * pn));
    let inv = norm.inv().ok_or(Error::SingularMoment { index: n })?;
    Ok(u.left_mul(&pn.scale(&inv)))
}

/// `[⟨v, P_0⟩, …, ⟨v, P_horizon⟩]`, the coefficients of `v` in the dual basis.
pub fn expand_in_dual_basis(v: &MomentFunctional, seq: &PolySequence, horizon: usize) -> Vec<Scalar> {
    seq.polys.iter().take(horizon + 1).map(|p| v.apply(p)).collect()
}
