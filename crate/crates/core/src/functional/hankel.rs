//! Hankel determinants and Gram entries.

use super::MomentFunctional;
use crate::algebra::{Poly, Scalar};
use crate::error::{Error, Result};

/// `⟨u, P_n P_m⟩` for a pair of indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GramRecord {
    pub n: usize,
    pub m: usize,
    pub value: Scalar,
}

/// Gram entry of two members of a polynomial family.
pub fn gram(u: &MomentFunctional, polys: &[Poly], n: usize, m: usize) -> GramRecord {
    GramRecord { n, m, value: u.apply(&(&polys[n] * &polys[m])) }
}

fn hankel_matrix(u: &MomentFunctional, size: usize) -> Vec<Vec<Scalar>> {
    let moments = u.moments(2 * size);
    (0..size).map(|i| moments[i..i + size].to_vec()).collect()
}

/// `H_n = det[u_{i+j}]_{0≤i,j≤n}`, with `H_{−1} = 1`.
///
/// Uses fraction-free (Bareiss) elimination with row pivoting.
///
/// # Panics
///
/// Panics when `n < −1`.
pub fn hankel_det(u: &MomentFunctional, n: isize) -> Scalar {
    assert!(n >= -1, "Hankel index must be at least -1");
    if n == -1 {
        return Scalar::one();
    }
    let size = n as usize + 1;
    let mut m = hankel_matrix(u, size);
    let mut prev = Scalar::one();
    let mut negate = false;
    for k in 0..size {
        let Some(pivot) = (k..size).find(|&i| !m[i][k].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != k {
            m.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let cross = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &cross / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

/// Outcome of a finite-horizon regularity test.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityCheck {
    /// `H_n ≠ 0` for every tested `n`.
    pub regular: bool,
    /// Smallest `n` with `H_n = 0`.
    pub failing_n: Option<usize>,
    /// `H_0, H_1, …` up to the failing index or the horizon.
    pub determinants: Vec<Scalar>,
}

/// Checks `H_n ≠ 0` for `0 ≤ n ≤ horizon`.
///
/// This certifies nothing beyond the horizon. The pivots of Bareiss
/// elimination without row exchanges are exactly the leading minors, so a
/// single elimination yields every `H_n`.
///
/// Errors with [`Error::ApproxIndeterminate`] when an approximate `H_n` falls
/// below tolerance, since it cannot then be told apart from zero.
pub fn is_regular_upto(u: &MomentFunctional, horizon: usize) -> Result<RegularityCheck> {
    let size = horizon + 1;
    let mut m = hankel_matrix(u, size);
    let mut prev = Scalar::one();
    let mut determinants = Vec::with_capacity(size);
    for k in 0..size {
        let pivot = m[k][k].clone();
        if pivot.is_zero() {
            if !pivot.is_exact() {
                return Err(Error::ApproxIndeterminate { index: k });
            }
            determinants.push(pivot);
            return Ok(RegularityCheck { regular: false, failing_n: Some(k), determinants });
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let cross = &(&pivot * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &cross / &prev;
            }
        }
        determinants.push(pivot.clone());
        prev = pivot;
    }
    Ok(RegularityCheck { regular: true, failing_n: None, determinants })
}
