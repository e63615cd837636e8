//! Curvature operators of the homogeneous metrics g_s and their
//! modifications by 4-forms.
//!
//! The metric is `⟨X, Y⟩ = Q(PX, Y)` with `P = s_r · Id` on `V_r`. Operators
//! are matrices of the curvature 4-tensor evaluated on the Q-orthonormal
//! basis of m, so `⟨R(e_a∧e_b), e_c∧e_d⟩ = R(e_a, e_b, e_c, e_d)` and
//! `sec(X, Y) = ⟨R(X∧Y), X∧Y⟩ / |X∧Y|²_g`.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FlagError, Result};
use crate::exterior::{bianchi, form_as_operator, pairs, Bivector, FourForm, SymOp};
use crate::lie::{FlagAlgebra, FlagModel, GVector, MBasisIndex, MVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    s: [f64; 3],
}

/// Smallest admissible `s_r` relative to `max s`.
pub const MIN_RELATIVE_S: f64 = 1e-6;

impl MetricParams {
    pub fn new(s: [f64; 3]) -> Result<Self> {
        if s.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(FlagError::Domain(format!("s = {s:?} must be finite and positive")));
        }
        let max = s.iter().copied().fold(0.0, f64::max);
        if s.iter().any(|v| *v < MIN_RELATIVE_S * max) {
            return Err(FlagError::Domain(format!(
                "s = {s:?} has an entry below {MIN_RELATIVE_S:e} times the largest"
            )));
        }
        Ok(Self { s })
    }

    pub fn normal() -> Self {
        Self { s: [1.0; 3] }
    }

    pub fn s(&self) -> [f64; 3] {
        self.s
    }

    /// `s_r` with 0-based cyclic index.
    pub fn get(&self, r: usize) -> f64 {
        self.s[r % 3]
    }

    /// Rescaled so that the largest entry is 1.
    pub fn normalized(&self) -> Self {
        let max = self.s.iter().copied().fold(0.0, f64::max);
        Self {
            s: self.s.map(|v| v / max),
        }
    }

    /// `s` of the slot containing each m-basis vector.
    pub fn weights(&self, model: FlagModel) -> Vec<f64> {
        (0..model.dim_m())
            .map(|a| self.s[MBasisIndex::from_flat(model, a).slot])
            .collect()
    }
}

pub fn p_apply(s: &MetricParams, v: &MVector) -> MVector {
    let mut out = *v;
    for r in 0..3 {
        out.x[r] = v.x[r].scale(s.get(r));
    }
    out
}

pub fn p_inverse(s: &MetricParams, v: &MVector) -> MVector {
    let mut out = *v;
    for r in 0..3 {
        out.x[r] = v.x[r].scale(1.0 / s.get(r));
    }
    out
}

fn b_pm(alg: &FlagAlgebra, s: &MetricParams, x: &MVector, y: &MVector, sign: f64) -> Result<GVector> {
    let xg = alg.embed_m(x)?;
    let yg = alg.embed_m(y)?;
    let x_py = alg.bracket(&xg, &alg.embed_m(&p_apply(s, y))?)?;
    let px_y = alg.bracket(&alg.embed_m(&p_apply(s, x))?, &yg)?;
    Ok(x_py.add(&px_y.scale(sign)).scale(0.5))
}

/// `B₊(X, Y) = ½([X, PY] − [PX, Y])`.
pub fn b_plus(alg: &FlagAlgebra, s: &MetricParams, x: &MVector, y: &MVector) -> Result<GVector> {
    b_pm(alg, s, x, y, -1.0)
}

/// `B₋(X, Y) = ½([X, PY] + [PX, Y])`.
pub fn b_minus(alg: &FlagAlgebra, s: &MetricParams, x: &MVector, y: &MVector) -> Result<GVector> {
    b_pm(alg, s, x, y, 1.0)
}

/// Brackets of m-basis vectors, `[e_a, e_b]` as full g-coordinate rows.
struct BracketTable {
    n: usize,
    g: usize,
    rows: Vec<f64>,
}

impl BracketTable {
    fn new(alg: &FlagAlgebra) -> Self {
        let n = alg.dim_m();
        let g = alg.dim_g();
        let mut rows = Vec::with_capacity(n * n * g);
        for a in 0..n {
            for b in 0..n {
                rows.extend_from_slice(alg.bracket_of_basis(a, b));
            }
        }
        Self { n, g, rows }
    }

    fn get(&self, a: usize, b: usize) -> &[f64] {
        let k = (a * self.n + b) * self.g;
        &self.rows[k..k + self.g]
    }

    /// `Q([e_a,e_b], [e_c,e_d])` over all of g.
    fn q_full(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.get(a, b).iter().zip(self.get(c, d)).map(|(x, y)| x * y).sum()
    }

    /// `Σ_{e ∈ m} w_e [e_a,e_b]_e [e_c,e_d]_e`.
    fn q_m_weighted(&self, w: &[f64], a: usize, b: usize, c: usize, d: usize) -> f64 {
        let x = &self.get(a, b)[..self.n];
        let y = &self.get(c, d)[..self.n];
        x.iter().zip(y).zip(w).map(|((x, y), w)| x * y * w).sum()
    }
}

fn bracket_table(model: FlagModel) -> &'static BracketTable {
    use std::sync::OnceLock;
    static CACHE: [OnceLock<BracketTable>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = FlagModel::ALL.iter().position(|m| *m == model).expect("known model");
    CACHE[slot].get_or_init(|| BracketTable::new(FlagAlgebra::get(model)))
}

/// `⟨β(X∧Y), Z∧W⟩ = ¼⟨[X,Y]_m, [Z,W]_m⟩` with the g_s inner product.
pub fn beta_op(model: FlagModel, s: &MetricParams) -> SymOp {
    let table = bracket_table(model);
    let w = s.weights(model);
    let n = model.dim_m();
    let ps = pairs(n);
    let mut op = SymOp::zero(n);
    for (i, &(a, b)) in ps.iter().enumerate() {
        for (j, &(c, d)) in ps.iter().enumerate().skip(i) {
            let v = 0.25 * table.q_m_weighted(&w, a, b, c, d);
            op.matrix[(i, j)] = v;
            op.matrix[(j, i)] = v;
        }
    }
    op
}

#[derive(Debug, Clone)]
pub struct CurvatureOperator {
    pub model: FlagModel,
    pub s: MetricParams,
    pub op: SymOp,
}

/// Assemble the curvature operator of `(model, g_s)`.
pub fn curvature_operator(model: FlagModel, s: &MetricParams) -> CurvatureOperator {
    let table = bracket_table(model);
    let w = s.weights(model);
    let w_inv: Vec<f64> = w.iter().map(|v| 1.0 / v).collect();
    let n = model.dim_m();
    let ps = pairs(n);

    let beta = beta_op(model, s);
    let beta_form_op = form_as_operator(&bianchi(&beta));

    let rows: Vec<Vec<f64>> = ps
        .par_iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let mut row = vec![0.0; ps.len()];
            for (j, &(c, d)) in ps.iter().enumerate().skip(i) {
                let first = 0.25 * (w[a] + w[b] + w[c] + w[d]) * table.q_full(a, b, c, d);
                let second = 0.25 * (w[d] - w[a]) * (w[c] - w[b]) * table.q_m_weighted(&w_inv, a, d, b, c);
                let third = 0.25 * (w[c] - w[a]) * (w[d] - w[b]) * table.q_m_weighted(&w_inv, a, c, b, d);
                row[j] = first + second - third - 3.0 * beta.matrix[(i, j)] + 3.0 * beta_form_op.matrix[(i, j)];
            }
            row
        })
        .collect();

    let mut op = SymOp::zero(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate().skip(i) {
            op.matrix[(i, j)] = v;
            op.matrix[(j, i)] = v;
        }
    }
    CurvatureOperator { model, s: *s, op }
}

impl CurvatureOperator {
    pub fn new(model: FlagModel, s: &MetricParams) -> Self {
        curvature_operator(model, s)
    }

    /// `R + ω`.
    pub fn modified(&self, omega: &FourForm) -> Result<SymOp> {
        if omega.dim != self.model.dim_m() {
            return Err(FlagError::Dimension {
                what: "4-form",
                expected: self.model.dim_m(),
                got: omega.dim,
            });
        }
        Ok(self.op.add(&form_as_operator(omega)))
    }

    /// Sectional curvature of the plane spanned by `x` and `y`.
    pub fn sectional_curvature(&self, x: &MVector, y: &MVector) -> Result<f64> {
        if x.model != self.model || y.model != self.model {
            return Err(FlagError::ModelMismatch {
                left: x.model,
                right: self.model,
            });
        }
        let xc = x.coords();
        let yc = y.coords();
        let w = DVector::from_vec(self.s.weights(self.model));
        let g = |u: &DVector<f64>, v: &DVector<f64>| u.component_mul(&w).dot(v);
        let area2 = g(&xc, &xc) * g(&yc, &yc) - g(&xc, &yc).powi(2);
        let scale = g(&xc, &xc).max(g(&yc, &yc)).powi(2);
        if area2 <= 1e-24 * scale || scale == 0.0 {
            return Err(FlagError::DegeneratePlane);
        }
        Ok(self.op.quadratic(&Bivector::wedge(&xc, &yc)) / area2)
    }
}
