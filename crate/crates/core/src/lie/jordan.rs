//! The exceptional Jordan algebra h₃(O), its derivations (f₄), and the
//! derivations of O itself (g₂).
//!
//! Coordinates on h₃(O): indices 0..3 are the real diagonal entries, then
//! the eight coefficients of each upper off-diagonal entry in the order
//! (1,2), (1,3), (2,3). The lower entries are the conjugates.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::division::{unit_product, AlgebraElement, AlgebraTag};
use crate::error::{FlagError, Result};
use crate::lie::kmatrix::KMatrix;
use crate::linalg::kernel_from_gram;

pub const JORDAN_DIM: usize = 27;
const OFF_DIAGONAL: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
const OCT: AlgebraTag = AlgebraTag::Octonion;

fn off_index(p: usize, unit: usize) -> usize {
    3 + 8 * p + unit
}

pub fn herm_from_coords(v: &[f64]) -> KMatrix<f64> {
    let mut m = KMatrix::zero(OCT);
    for i in 0..3 {
        m.entries[i][i] = AlgebraElement::one(OCT).scale(v[i]);
    }
    for (p, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
        let x = AlgebraElement::from_coeffs(OCT, &v[off_index(p, 0)..off_index(p, 8)])
            .expect("eight coefficients");
        m.entries[i][j] = x;
        m.entries[j][i] = x.conjugate();
    }
    m
}

/// Coordinates of a Hermitian matrix (only the diagonal real parts and the
/// upper triangle are read).
pub fn coords_from_herm(m: &KMatrix<f64>) -> DVector<f64> {
    let mut v = DVector::zeros(JORDAN_DIM);
    for i in 0..3 {
        v[i] = m.entries[i][i].re();
    }
    for (p, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
        for u in 0..8 {
            v[off_index(p, u)] = m.entries[i][j].coeff(u);
        }
    }
    v
}

/// Structure constants of the Jordan product `x∘y = (xy + yx)/2`:
/// entry `[a][b]` is the coordinate vector of `e_a ∘ e_b`.
pub fn jordan_table() -> &'static Vec<Vec<DVector<f64>>> {
    static TABLE: OnceLock<Vec<Vec<DVector<f64>>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let basis: Vec<KMatrix<f64>> = (0..JORDAN_DIM)
            .map(|a| {
                let mut v = vec![0.0; JORDAN_DIM];
                v[a] = 1.0;
                herm_from_coords(&v)
            })
            .collect();
        basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| {
                        let s = *x * *y + *y * *x;
                        coords_from_herm(&s) * 0.5
                    })
                    .collect()
            })
            .collect()
    })
}

/// The linear map `H ↦ XH − HX` on h₃(O) as a 27×27 matrix.
pub fn commutator_action(x: &KMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(JORDAN_DIM, JORDAN_DIM);
    for c in 0..JORDAN_DIM {
        let mut v = vec![0.0; JORDAN_DIM];
        v[c] = 1.0;
        let h = herm_from_coords(&v);
        let image = *x * h - h * *x;
        d.set_column(c, &coords_from_herm(&image));
    }
    d
}

/// Largest violation of `D(x∘y) = Dx∘y + x∘Dy` over basis pairs.
pub fn derivation_residual(d: &DMatrix<f64>) -> f64 {
    let table = jordan_table();
    let product = |x: &DVector<f64>, y: &DVector<f64>| -> DVector<f64> {
        let mut out = DVector::zeros(JORDAN_DIM);
        for a in 0..JORDAN_DIM {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..JORDAN_DIM {
                if y[b] != 0.0 {
                    out.axpy(x[a] * y[b], &table[a][b], 1.0);
                }
            }
        }
        out
    };
    let mut worst = 0.0f64;
    for a in 0..JORDAN_DIM {
        let ea = DVector::from_fn(JORDAN_DIM, |i, _| if i == a { 1.0 } else { 0.0 });
        let da = d.column(a).into_owned();
        for b in a..JORDAN_DIM {
            let eb = DVector::from_fn(JORDAN_DIM, |i, _| if i == b { 1.0 } else { 0.0 });
            let db = d.column(b).into_owned();
            let lhs = d * &table[a][b];
            let rhs = product(&da, &eb) + product(&ea, &db);
            worst = worst.max((lhs - rhs).amax());
        }
    }
    worst
}

/// Dimension of the full derivation algebra of h₃(O), obtained as the
/// kernel of the linear derivation system in the 729 matrix entries.
pub fn derivation_algebra_dimension() -> usize {
    let n = JORDAN_DIM;
    let table = jordan_table();
    let unknowns = n * n;
    let mut gram = DMatrix::<f64>::zeros(unknowns, unknowns);
    let var = |i: usize, j: usize| i * n + j;
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(4 * n);
    for a in 0..n {
        for b in a..n {
            for k in 0..n {
                row.clear();
                // D(e_a∘e_b)_k
                for c in 0..n {
                    let v = table[a][b][c];
                    if v != 0.0 {
                        row.push((var(k, c), v));
                    }
                }
                // -(D e_a ∘ e_b)_k - (e_a ∘ D e_b)_k
                for i in 0..n {
                    let v = table[i][b][k];
                    if v != 0.0 {
                        row.push((var(i, a), -v));
                    }
                    let w = table[a][i][k];
                    if w != 0.0 {
                        row.push((var(i, b), -w));
                    }
                }
                for &(p, vp) in &row {
                    for &(q, vq) in &row {
                        gram[(p, q)] += vp * vq;
                    }
                }
            }
        }
    }
    kernel_from_gram(&gram, 1e-10).len()
}

/// Lift a derivation of O (acting on Im O) to h₃(O) by applying it to every
/// off-diagonal entry.
pub fn lift_octonion_derivation(d: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(JORDAN_DIM, JORDAN_DIM);
    for p in 0..3 {
        for r in 0..7 {
            for c in 0..7 {
                out[(off_index(p, r + 1), off_index(p, c + 1))] = d[(r, c)];
            }
        }
    }
    out
}

/// A Frobenius-orthonormal basis of g₂ = der(O), as 7×7 matrices acting on
/// the imaginary units `i, j, k, l, m, n, o`.
///
/// Solves `D(xy) = D(x)y + xD(y)` over all pairs of imaginary units; the
/// solution space must be 14-dimensional.
pub fn g2_basis() -> Result<Vec<DMatrix<f64>>> {
    let basis = octonion_derivations();
    if basis.len() != 14 {
        return Err(FlagError::RankDefect {
            what: "g2 = der(O)",
            expected: 14,
            found: basis.len(),
        });
    }
    Ok(basis)
}

/// Kernel of the derivation system on Im(O), whatever its dimension.
pub fn octonion_derivations() -> Vec<DMatrix<f64>> {
    // unknown D[r][c] with r, c in 0..7 referring to units 1..=7
    let var = |r: usize, c: usize| r * 7 + c;
    let mut gram = DMatrix::<f64>::zeros(49, 49);
    for x in 1..8 {
        for y in 1..8 {
            let (s_xy, xy) = unit_product(x, y);
            for k in 0..8 {
                let mut row: Vec<(usize, f64)> = Vec::new();
                // D(xy)_k, D kills the real unit
                if xy != 0 && k != 0 {
                    row.push((var(k - 1, xy - 1), s_xy as f64));
                }
                for i in 1..8 {
                    // (D x)_i e_i y and x (D y)_i e_i
                    let (s1, c1) = unit_product(i, y);
                    if c1 == k {
                        row.push((var(i - 1, x - 1), -(s1 as f64)));
                    }
                    let (s2, c2) = unit_product(x, i);
                    if c2 == k {
                        row.push((var(i - 1, y - 1), -(s2 as f64)));
                    }
                }
                for &(p, vp) in &row {
                    for &(q, vq) in &row {
                        gram[(p, q)] += vp * vq;
                    }
                }
            }
        }
    }
    kernel_from_gram(&gram, 1e-12)
        .into_iter()
        .map(|v| DMatrix::from_fn(7, 7, |r, c| v[var(r, c)]))
        .collect()
}
