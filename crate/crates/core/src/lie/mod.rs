//! The Lie algebras g = so(3), su(3), sp(3), f₄ with the reductive splitting
//! g = h ⊕ m and the Q-orthonormal basis `1_r, i_r, ..., o_r` of
//! m = V₁ ⊕ V₂ ⊕ V₃.
//!
//! Every algebra is realized by real matrices: the left-regular action of
//! K-matrices on K³ for R, C, H, and for O the action of f₄ by derivations
//! of h₃(O). The bi-invariant form Q is the trace form normalized so that the
//! m-basis is orthonormal, and h is generated from brackets of m. After that
//! everything is expressed through structure constants in the Q-orthonormal
//! basis (m first, then h).

pub mod jordan;
pub mod kmatrix;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::division::{AlgebraElement, AlgebraTag, UNIT_SYMBOLS};
use crate::error::{FlagError, Result};
use crate::linalg::gram_schmidt;
pub use kmatrix::KMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FlagModel {
    W3,
    W6,
    W12,
    W24,
}

impl FlagModel {
    pub const ALL: [FlagModel; 4] = [FlagModel::W3, FlagModel::W6, FlagModel::W12, FlagModel::W24];

    pub fn algebra(self) -> AlgebraTag {
        match self {
            FlagModel::W3 => AlgebraTag::Real,
            FlagModel::W6 => AlgebraTag::Complex,
            FlagModel::W12 => AlgebraTag::Quaternion,
            FlagModel::W24 => AlgebraTag::Octonion,
        }
    }

    pub fn unit_dim(self) -> usize {
        self.algebra().dim()
    }

    pub fn dim_m(self) -> usize {
        3 * self.unit_dim()
    }

    pub fn dim_g(self) -> usize {
        match self {
            FlagModel::W3 => 3,
            FlagModel::W6 => 8,
            FlagModel::W12 => 21,
            FlagModel::W24 => 52,
        }
    }

    pub fn dim_h(self) -> usize {
        self.dim_g() - self.dim_m()
    }

    /// The next smaller model in the totally geodesic chain.
    pub fn submodel(self) -> Option<FlagModel> {
        match self {
            FlagModel::W3 => None,
            FlagModel::W6 => Some(FlagModel::W3),
            FlagModel::W12 => Some(FlagModel::W6),
            FlagModel::W24 => Some(FlagModel::W12),
        }
    }

    pub fn contains(self, other: FlagModel) -> bool {
        other.unit_dim() <= self.unit_dim()
    }

    pub fn name(self) -> &'static str {
        match self {
            FlagModel::W3 => "W3",
            FlagModel::W6 => "W6",
            FlagModel::W12 => "W12",
            FlagModel::W24 => "W24",
        }
    }
}

impl fmt::Display for FlagModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlagModel {
    type Err = FlagError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "W3" | "3" => Ok(FlagModel::W3),
            "W6" | "6" => Ok(FlagModel::W6),
            "W12" | "12" => Ok(FlagModel::W12),
            "W24" | "24" => Ok(FlagModel::W24),
            other => Err(FlagError::Parse(format!("unknown model {other:?}"))),
        }
    }
}

/// A basis vector `u_r` of m: unit `u` placed in slot `r` (0-based here,
/// printed 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MBasisIndex {
    pub slot: usize,
    pub unit: usize,
}

impl MBasisIndex {
    /// Position in the m-basis of `model`: slots 1, 2, 3 in turn, units in
    /// order `1, i, j, ...` within each slot.
    pub fn flat(self, model: FlagModel) -> usize {
        self.slot * model.unit_dim() + self.unit
    }

    pub fn from_flat(model: FlagModel, a: usize) -> Self {
        let d = model.unit_dim();
        Self {
            slot: a / d,
            unit: a % d,
        }
    }

    pub fn label(self) -> String {
        format!("{}_{}", UNIT_SYMBOLS[self.unit], self.slot + 1)
    }
}

/// Element of m as a triple `(x₁, x₂, x₃)` of algebra elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MVector {
    pub model: FlagModel,
    pub x: [AlgebraElement<f64>; 3],
}

impl MVector {
    pub fn zero(model: FlagModel) -> Self {
        Self {
            model,
            x: [AlgebraElement::zero(model.algebra()); 3],
        }
    }

    /// The basis vector `u_r` (slot 0-based).
    pub fn basis(model: FlagModel, slot: usize, unit: usize) -> Self {
        let mut v = Self::zero(model);
        v.x[slot] = AlgebraElement::unit(model.algebra(), unit);
        v
    }

    pub fn from_coords(model: FlagModel, coords: &[f64]) -> Result<Self> {
        if coords.len() != model.dim_m() {
            return Err(FlagError::Dimension {
                what: "m coordinates",
                expected: model.dim_m(),
                got: coords.len(),
            });
        }
        let d = model.unit_dim();
        let mut v = Self::zero(model);
        for r in 0..3 {
            v.x[r] = AlgebraElement::from_coeffs(model.algebra(), &coords[r * d..(r + 1) * d])?;
        }
        Ok(v)
    }

    pub fn coords(&self) -> DVector<f64> {
        let d = self.model.unit_dim();
        DVector::from_fn(self.model.dim_m(), |a, _| self.x[a / d].coeff(a % d))
    }

    /// The zero-diagonal skew-Hermitian matrix representing this vector.
    pub fn to_matrix(&self) -> KMatrix<f64> {
        KMatrix::from_triple(&self.x)
    }
}

/// Element of g, stored as coefficients in the Q-orthonormal basis
/// (m-basis first, then the h-basis).
#[derive(Debug, Clone, PartialEq)]
pub struct GVector {
    pub model: FlagModel,
    pub coeffs: DVector<f64>,
}

impl GVector {
    pub fn zero(model: FlagModel) -> Self {
        Self {
            model,
            coeffs: DVector::zeros(model.dim_g()),
        }
    }

    pub fn m_part(&self) -> DVector<f64> {
        self.coeffs.rows(0, self.model.dim_m()).into_owned()
    }

    pub fn h_part(&self) -> DVector<f64> {
        self.coeffs
            .rows(self.model.dim_m(), self.model.dim_h())
            .into_owned()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            model: self.model,
            coeffs: &self.coeffs * c,
        }
    }

    pub fn add(&self, other: &GVector) -> Self {
        Self {
            model: self.model,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }
}

/// A realized Lie algebra g with its splitting and structure constants.
pub struct FlagAlgebra {
    model: FlagModel,
    /// `structure[(a*G + b)*G + c] = Q([E_a, E_b], E_c)`.
    structure: Vec<f64>,
    basis_matrices: Vec<DMatrix<f64>>,
    trace_scale: f64,
    closure_residual: f64,
}

impl fmt::Debug for FlagAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlagAlgebra")
            .field("model", &self.model)
            .field("dim_g", &self.model.dim_g())
            .field("closure_residual", &self.closure_residual)
            .finish()
    }
}

impl FlagAlgebra {
    /// Cached algebra for `model`; built on first use.
    pub fn get(model: FlagModel) -> &'static FlagAlgebra {
        static CACHE: [OnceLock<FlagAlgebra>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = match model {
            FlagModel::W3 => 0,
            FlagModel::W6 => 1,
            FlagModel::W12 => 2,
            FlagModel::W24 => 3,
        };
        CACHE[slot].get_or_init(|| {
            FlagAlgebra::build(model).unwrap_or_else(|e| panic!("building {model}: {e}"))
        })
    }

    /// Realize m, normalize Q, generate h and compute structure constants.
    pub fn build(model: FlagModel) -> Result<FlagAlgebra> {
        let n = model.dim_m();
        let m_mats: Vec<DMatrix<f64>> = (0..n)
            .map(|a| {
                let idx = MBasisIndex::from_flat(model, a);
                realize(&MVector::basis(model, idx.slot, idx.unit).to_matrix())
            })
            .collect();

        let raw_trace = |x: &DMatrix<f64>, y: &DMatrix<f64>| -> f64 { (x.transpose().component_mul(y)).sum() };
        // tr(XY) = sum_ij X_ij Y_ji = <Xᵀ, Y>_F
        let t0 = raw_trace(&m_mats[0], &m_mats[0]);
        let trace_scale = 1.0 / t0;
        let q = |x: &DMatrix<f64>, y: &DMatrix<f64>| -> f64 { trace_scale * raw_trace(x, y) };

        for a in 0..n {
            for b in 0..n {
                let expected = if a == b { 1.0 } else { 0.0 };
                if (q(&m_mats[a], &m_mats[b]) - expected).abs() > 1e-10 {
                    return Err(FlagError::RankDefect {
                        what: "Q-orthonormal m-basis",
                        expected: n,
                        found: a,
                    });
                }
            }
        }

        // h = Q-complement of m inside the algebra generated by m
        let flat = |m: &DMatrix<f64>| DVector::from_column_slice(m.as_slice());
        let rows = m_mats[0].nrows();
        let unflat = |v: &DVector<f64>| DMatrix::from_column_slice(rows, rows, v.as_slice());
        let ip = |x: &DVector<f64>, y: &DVector<f64>| q(&unflat(x), &unflat(y));
        let m_flat: Vec<DVector<f64>> = m_mats.iter().map(flat).collect();

        let mut h_flat: Vec<DVector<f64>> = Vec::new();
        let mut candidates: Vec<DVector<f64>> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let c = &m_mats[a] * &m_mats[b] - &m_mats[b] * &m_mats[a];
                candidates.push(flat(&c));
            }
        }
        for _round in 0..3 {
            let mut pool: Vec<DVector<f64>> = m_flat.clone();
            pool.extend(h_flat.iter().cloned());
            pool.extend(candidates.iter().cloned());
            let all = gram_schmidt(&pool, ip, 1e-9);
            let new_h: Vec<DVector<f64>> = all[n..].to_vec();
            if new_h.len() == h_flat.len() {
                break;
            }
            h_flat = new_h;
            candidates.clear();
            for x in &h_flat {
                let xm = unflat(x);
                for y in m_mats.iter().chain(h_flat.iter().map(unflat).collect::<Vec<_>>().iter()) {
                    candidates.push(flat(&(&xm * y - y * &xm)));
                }
            }
        }
        if h_flat.len() != model.dim_h() {
            return Err(FlagError::RankDefect {
                what: "isotropy algebra h",
                expected: model.dim_h(),
                found: h_flat.len(),
            });
        }

        let mut basis_matrices = m_mats;
        basis_matrices.extend(h_flat.iter().map(unflat));
        let g = basis_matrices.len();

        let rows_out: Vec<(Vec<f64>, f64)> = (0..g)
            .into_par_iter()
            .map(|a| {
                let mut slab = vec![0.0; g * g];
                let mut worst = 0.0f64;
                for b in 0..g {
                    let ea = &basis_matrices[a];
                    let eb = &basis_matrices[b];
                    let br = ea * eb - eb * ea;
                    let mut rest = br.clone();
                    for c in 0..g {
                        let v = q(&br, &basis_matrices[c]);
                        slab[b * g + c] = v;
                        rest -= &basis_matrices[c] * v;
                    }
                    worst = worst.max(rest.amax());
                }
                (slab, worst)
            })
            .collect();
        let closure_residual = rows_out.iter().fold(0.0f64, |m, (_, w)| m.max(*w));
        let structure = rows_out.into_iter().flat_map(|(s, _)| s).collect();

        Ok(FlagAlgebra {
            model,
            structure,
            basis_matrices,
            trace_scale,
            closure_residual,
        })
    }

    pub fn model(&self) -> FlagModel {
        self.model
    }

    pub fn dim_g(&self) -> usize {
        self.model.dim_g()
    }

    pub fn dim_m(&self) -> usize {
        self.model.dim_m()
    }

    /// `Q([E_a, E_b], E_c)` in the Q-orthonormal basis.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> f64 {
        let g = self.dim_g();
        self.structure[(a * g + b) * g + c]
    }

    /// Coefficients of `[E_a, E_b]`.
    pub fn bracket_of_basis(&self, a: usize, b: usize) -> &[f64] {
        let g = self.dim_g();
        &self.structure[(a * g + b) * g..(a * g + b + 1) * g]
    }

    /// Largest residual of `[E_a, E_b] - Σ_c c_abc E_c` in the matrix
    /// realization; zero up to rounding iff the basis spans a subalgebra.
    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }

    /// The realizing matrix of basis vector `E_a`.
    pub fn basis_matrix(&self, a: usize) -> &DMatrix<f64> {
        &self.basis_matrices[a]
    }

    /// Matrix realization of a general element.
    pub fn realize(&self, x: &GVector) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.basis_matrices[0].nrows(), self.basis_matrices[0].ncols());
        for (c, m) in x.coeffs.iter().zip(&self.basis_matrices) {
            if *c != 0.0 {
                out += m * *c;
            }
        }
        out
    }

    /// Q of two realized matrices (normalized trace form).
    pub fn q_of_matrices(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
        self.trace_scale * (x.transpose().component_mul(y)).sum()
    }

    /// Coefficients of a realized matrix lying in g, and the residual
    /// norm of the part outside g.
    pub fn coordinates_of_matrix(&self, x: &DMatrix<f64>) -> (GVector, f64) {
        let coeffs = DVector::from_iterator(
            self.dim_g(),
            self.basis_matrices.iter().map(|e| self.q_of_matrices(x, e)),
        );
        let v = GVector {
            model: self.model,
            coeffs,
        };
        let residual = (x - self.realize(&v)).amax();
        (v, residual)
    }

    fn check(&self, x: &GVector) -> Result<()> {
        if x.model != self.model {
            return Err(FlagError::ModelMismatch {
                left: x.model,
                right: self.model,
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &GVector, y: &GVector) -> Result<GVector> {
        self.check(x)?;
        self.check(y)?;
        let g = self.dim_g();
        let mut out = DVector::zeros(g);
        for a in 0..g {
            let xa = x.coeffs[a];
            if xa == 0.0 {
                continue;
            }
            for b in 0..g {
                let yb = y.coeffs[b];
                if yb == 0.0 {
                    continue;
                }
                let row = self.bracket_of_basis(a, b);
                let s = xa * yb;
                for (o, r) in out.iter_mut().zip(row) {
                    *o += s * r;
                }
            }
        }
        Ok(GVector {
            model: self.model,
            coeffs: out,
        })
    }

    pub fn q_inner(&self, x: &GVector, y: &GVector) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.coeffs.dot(&y.coeffs))
    }

    pub fn embed_m(&self, v: &MVector) -> Result<GVector> {
        if v.model != self.model {
            return Err(FlagError::ModelMismatch {
                left: v.model,
                right: self.model,
            });
        }
        let mut coeffs = DVector::zeros(self.dim_g());
        coeffs.rows_mut(0, self.dim_m()).copy_from(&v.coords());
        Ok(GVector {
            model: self.model,
            coeffs,
        })
    }

    pub fn basis_vector(&self, a: usize) -> GVector {
        let mut v = GVector::zero(self.model);
        v.coeffs[a] = 1.0;
        v
    }

    pub fn project_m(&self, x: &GVector) -> Result<MVector> {
        self.check(x)?;
        MVector::from_coords(self.model, x.m_part().as_slice())
    }

    pub fn project_h(&self, x: &GVector) -> Result<GVector> {
        self.check(x)?;
        let mut out = x.clone();
        out.coeffs.rows_mut(0, self.dim_m()).fill(0.0);
        Ok(out)
    }

    /// Q-orthonormal basis of h.
    pub fn h_basis(&self) -> Vec<GVector> {
        (self.dim_m()..self.dim_g()).map(|a| self.basis_vector(a)).collect()
    }

    /// `ad_x` restricted to m as a `dim_m × dim_m` matrix, for `x` in h
    /// (column `a` holds the m-coordinates of `[x, e_a]`).
    pub fn ad_on_m(&self, x: &GVector) -> Result<DMatrix<f64>> {
        let n = self.dim_m();
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            let br = self.bracket(x, &self.basis_vector(a))?;
            out.set_column(a, &br.m_part());
        }
        Ok(out)
    }

    /// The structure constants as CSV (`a,b,c,value`), nonzero entries only.
    pub fn structure_csv(&self) -> String {
        let g = self.dim_g();
        let mut out = String::from("a,b,c,value\n");
        for a in 0..g {
            for b in 0..g {
                for c in 0..g {
                    let v = self.structure_constant(a, b, c);
                    if v.abs() > 1e-14 {
                        out.push_str(&format!("{},{},{},{:.17e}\n", self.label(a), self.label(b), self.label(c), v));
                    }
                }
            }
        }
        out
    }

    /// Name of basis vector `a`: `u_r` for m, `h<k>` for h.
    pub fn label(&self, a: usize) -> String {
        if a < self.dim_m() {
            MBasisIndex::from_flat(self.model, a).label()
        } else {
            format!("h{}", a - self.dim_m() + 1)
        }
    }
}

/// Real matrix realization of a skew-Hermitian K-matrix.
fn realize(x: &KMatrix<f64>) -> DMatrix<f64> {
    if x.tag.is_associative() {
        x.realify()
    } else {
        jordan::commutator_action(x)
    }
}

/// Q of two skew-Hermitian K-matrices by the matrix formula `½ Re tr(XY*)`.
pub fn q_matrix_formula(x: &KMatrix<f64>, y: &KMatrix<f64>) -> f64 {
    0.5 * x.re_trace_pairing(y)
}

#[cfg(test)]
mod tests;
