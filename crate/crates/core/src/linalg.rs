//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut vals: Vec<f64> = SymmetricEigen::new(symmetrized(m)).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenpairs sorted by ascending eigenvalue; eigenvectors are columns.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(symmetrized(m));
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Orthonormal basis of the kernel of `A`, given the Gram matrix `AᵀA`.
/// Eigenvalues below `rel_tol * max` count as zero.
pub fn kernel_from_gram(gram: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let (vals, vecs) = sym_eigen_sorted(gram);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    vals.iter()
        .enumerate()
        .take_while(|(_, v)| v.abs() <= rel_tol * scale)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect()
}

/// Gram–Schmidt against an inner product given by `ip`; vectors whose
/// residual norm falls below `tol` are dropped.
pub fn gram_schmidt<F>(candidates: &[DVector<f64>], ip: F, tol: f64) -> Vec<DVector<f64>>
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> f64,
{
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for cand in candidates {
        let mut v = cand.clone();
        // two passes for numerical stability
        for _ in 0..2 {
            for b in &basis {
                let c = ip(&v, b);
                v.axpy(-c, b, 1.0);
            }
        }
        let n = ip(&v, &v).max(0.0).sqrt();
        if n > tol {
            basis.push(v / n);
        }
    }
    basis
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_sorted() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let v = sym_eigenvalues(&m);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = kernel_from_gram(&(a.transpose() * &a), 1e-12);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!((a.clone() * v).norm() < 1e-12);
        }
    }
}
