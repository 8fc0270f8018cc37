//! Exact row reduction over [`Scalar`].

use super::scalar::Scalar;

/// Basis of the right nullspace `{v : M v = 0}` of a row-major matrix with
/// `cols` columns, computed by Gauss–Jordan elimination.
pub fn nullspace(rows: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for entry in m[r].iter_mut() {
            *entry = &*entry * &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..cols {
                let delta = &factor * &m[r][j];
                m[i][j] -= &delta;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -&m[row][f];
            }
            v
        })
        .collect()
}
