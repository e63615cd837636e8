//! Invariant 4-forms, representative bivectors, restriction of operators to
//! the representatives, and the closed-form block matrices.
//!
//! Unit symbols in the tables below are `1 i j k l m n o`; a 2-form such as
//! `1i-jk` means `1∧i − j∧k` on one slot, and for cross terms the first
//! symbol of each pair lives in one slot and the second in the other.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::curvature::MetricParams;
use crate::division::unit_index;
use crate::error::{FlagError, Result};
use crate::exterior::{derivation_on_form, quad_index, quads, sort4, wedge22, Bivector, FourForm, SymOp};
use crate::lie::{FlagAlgebra, FlagModel};
use crate::linalg::sym_eigenvalues;

/// The 28 summands of ζ_r: sign, 2-form on slot r+1, 2-form on slot r+2.
/// The first three lines are φ_r.
pub const ZETA_TABLE: &str = "\
+ 1i-jk 1i+jk
+ 1j+ik 1j-ik
+ 1k-ij 1k+ij
+ 1l+im 1l-im
+ 1m-il 1m+il
+ 1n-io 1n+io
+ 1o+in 1o-in
+ 1i+jk lm-no
+ 1j-ik ln+mo
+ 1k+ij lo-mn
- 1l-im jn+ko
- 1m+il jo-kn
+ 1n+io jl-km
+ 1o-in jm+kl
- jl-km 1n-io
- jm+kl 1o+in
+ jn+ko 1l+im
+ jo-kn 1m-il
- lm-no 1i-jk
- ln+mo 1j+ik
- lo-mn 1k-ij
- jl+km jl+km
- jm-kl jm-kl
- jn-ko jn-ko
- jo+kn jo+kn
- lm+no lm+no
- ln-mo ln-mo
- lo+mn lo+mn
";

/// SHA-256 of [`ZETA_TABLE`], pinned by a unit test.
pub const ZETA_TABLE_SHA256: &str = "2b74a93003acc4b599037c06e3e2404dfb49bba3182976fc09a4885b88dd3df9";

pub fn table_digest(table: &str) -> String {
    Sha256::digest(table.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Parse a signed sum of unit pairs, e.g. `1i-jk` or `11-ii-jj-kk`.
fn parse_pairs(expr: &str) -> Result<Vec<(f64, usize, usize)>> {
    let mut out = Vec::new();
    let mut chars = expr.chars().filter(|c| !c.is_whitespace()).peekable();
    while chars.peek().is_some() {
        let mut sign = 1.0;
        if let Some(&c) = chars.peek() {
            if c == '+' || c == '-' {
                sign = if c == '-' { -1.0 } else { 1.0 };
                chars.next();
            }
        }
        let mut unit = || -> Result<usize> {
            let c = chars.next().ok_or_else(|| FlagError::Parse(format!("truncated pair in {expr:?}")))?;
            unit_index(c).ok_or_else(|| FlagError::Parse(format!("unknown unit {c:?} in {expr:?}")))
        };
        let u = unit()?;
        let v = unit()?;
        out.push((sign, u, v));
    }
    Ok(out)
}

/// A 2-form with all terms inside one slot.
fn slot_bivector(model: FlagModel, slot: usize, expr: &str) -> Result<Bivector> {
    cross_bivector(model, slot, slot, expr)
}

/// A 2-form whose pairs take their first unit from `slot_a` and their
/// second from `slot_b`.
fn cross_bivector(model: FlagModel, slot_a: usize, slot_b: usize, expr: &str) -> Result<Bivector> {
    let d = model.unit_dim();
    let mut b = Bivector::zero(model.dim_m());
    for (sign, u, v) in parse_pairs(expr)? {
        if u >= d || v >= d {
            return Err(FlagError::Parse(format!("{expr:?} uses units outside {model}")));
        }
        b.add_term(slot_a % 3 * d + u, slot_b % 3 * d + v, sign);
    }
    Ok(b)
}

/// One summand of the ζ table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableLine {
    pub sign: f64,
    pub left: String,
    pub right: String,
}

pub fn parse_table(table: &str) -> Result<Vec<TableLine>> {
    table
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let [sign, left, right] = parts[..] else {
                return Err(FlagError::Parse(format!("bad table line {l:?}")));
            };
            let sign = match sign {
                "+" => 1.0,
                "-" => -1.0,
                other => return Err(FlagError::Parse(format!("bad sign {other:?}"))),
            };
            Ok(TableLine {
                sign,
                left: left.to_string(),
                right: right.to_string(),
            })
        })
        .collect()
}

/// `Σ sign · left_{r+1} ∧ right_{r+2}` over the given table lines
/// (`r` is 0-based).
pub fn form_from_lines(model: FlagModel, r: usize, lines: &[TableLine]) -> Result<FourForm> {
    let mut out = FourForm::zero(model.dim_m());
    for line in lines {
        let left = slot_bivector(model, r + 1, &line.left)?;
        let right = slot_bivector(model, r + 2, &line.right)?;
        out = out.add(&wedge22(&left, &right).scale(line.sign));
    }
    Ok(out)
}

/// Names of the basis invariant forms of each model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Xi,
    Phi,
    Psi,
    Zeta,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Xi => "xi",
            FormKind::Phi => "phi",
            FormKind::Psi => "psi",
            FormKind::Zeta => "zeta",
        })
    }
}

/// Basis invariant 4-form `kind_r` (`r` 0-based), built from `table` for ζ.
pub fn basis_form_with_table(model: FlagModel, kind: FormKind, r: usize, table: &str) -> Result<FourForm> {
    let d = model.unit_dim();
    let required = match kind {
        FormKind::Xi => 2,
        FormKind::Phi | FormKind::Psi => 4,
        FormKind::Zeta => 8,
    };
    if d < required {
        return Err(FlagError::Parse(format!("{kind} is not defined on {model}")));
    }
    match kind {
        FormKind::Xi => form_from_lines(
            model,
            r,
            &[TableLine {
                sign: 1.0,
                left: "1i".into(),
                right: "1i".into(),
            }],
        ),
        FormKind::Phi => form_from_lines(model, r, &parse_table(table)?[..3]),
        FormKind::Zeta => form_from_lines(model, r, &parse_table(table)?),
        FormKind::Psi => {
            let mut out = FourForm::zero(model.dim_m());
            let base = (r % 3) * d;
            out.add_term([base, base + 1, base + 2, base + 3], 1.0);
            Ok(out)
        }
    }
}

pub fn basis_form(model: FlagModel, kind: FormKind, r: usize) -> Result<FourForm> {
    basis_form_with_table(model, kind, r, ZETA_TABLE)
}

/// The kinds of basis forms carried by `model`: the `a`-forms, then the
/// `b`-forms if any.
pub fn form_kinds(model: FlagModel) -> (Option<FormKind>, Option<FormKind>) {
    match model {
        FlagModel::W3 => (None, None),
        FlagModel::W6 => (Some(FormKind::Xi), None),
        FlagModel::W12 => (Some(FormKind::Phi), Some(FormKind::Psi)),
        FlagModel::W24 => (Some(FormKind::Zeta), None),
    }
}

/// Coefficients `a_r` (and `b_r` on W12) of a general invariant 4-form.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InvariantCoeffs {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl InvariantCoeffs {
    pub fn new(a: [f64; 3], b: [f64; 3]) -> Self {
        Self { a, b }
    }

    pub fn from_a(a: [f64; 3]) -> Self {
        Self { a, b: [0.0; 3] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            a: [0, 1, 2].map(|r| self.a[r] + other.a[r]),
            b: [0, 1, 2].map(|r| self.b[r] + other.b[r]),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            a: self.a.map(|v| v * c),
            b: self.b.map(|v| v * c),
        }
    }

    pub fn check(&self, model: FlagModel) -> Result<()> {
        if model != FlagModel::W12 && self.b.iter().any(|b| *b != 0.0) {
            return Err(FlagError::Parse(format!("b coefficients are only defined on W12, not {model}")));
        }
        if model == FlagModel::W3 && self.a.iter().any(|a| *a != 0.0) {
            return Err(FlagError::Parse("W3 has no invariant 4-forms".into()));
        }
        Ok(())
    }
}

/// `Σ a_r ω_r (+ Σ b_r ψ_r)`.
pub fn invariant_form(model: FlagModel, c: &InvariantCoeffs) -> Result<FourForm> {
    invariant_form_with_table(model, c, ZETA_TABLE)
}

pub fn invariant_form_with_table(model: FlagModel, c: &InvariantCoeffs, table: &str) -> Result<FourForm> {
    c.check(model)?;
    let mut out = FourForm::zero(model.dim_m());
    let (a_kind, b_kind) = form_kinds(model);
    for r in 0..3 {
        if let Some(kind) = a_kind {
            if c.a[r] != 0.0 {
                out = out.add(&basis_form_with_table(model, kind, r, table)?.scale(c.a[r]));
            }
        }
        if let Some(kind) = b_kind {
            if c.b[r] != 0.0 {
                out = out.add(&basis_form_with_table(model, kind, r, table)?.scale(c.b[r]));
            }
        }
    }
    Ok(out)
}

/// Restrict a 4-form of `big` to the m-subspace of `small` (first units of
/// each slot), reindexed to the basis of `small`.
pub fn project_form(omega: &FourForm, big: FlagModel, small: FlagModel) -> Result<FourForm> {
    if !big.contains(small) {
        return Err(FlagError::NotNested(small, big));
    }
    if omega.dim != big.dim_m() {
        return Err(FlagError::Dimension {
            what: "4-form",
            expected: big.dim_m(),
            got: omega.dim,
        });
    }
    let db = big.unit_dim();
    let ds = small.unit_dim();
    let mut out = FourForm::zero(small.dim_m());
    for q in quads(small.dim_m()) {
        let lifted = q.map(|a| (a / ds) * db + a % ds);
        // lifting preserves order, so no sign
        let (sign, sorted) = sort4(lifted).expect("distinct indices");
        out.coeffs[quad_index(q)] = sign * omega.coeffs[quad_index(sorted)];
    }
    Ok(out)
}

/// Largest `|Σᵢ ω(…, [η, Xᵢ], …)|` over the h-basis and all basis
/// quadruples.
pub fn invariance_residual(model: FlagModel, omega: &FourForm) -> f64 {
    let alg = FlagAlgebra::get(model);
    alg.h_basis()
        .iter()
        .map(|eta| {
            let ad = alg.ad_on_m(eta).expect("same model");
            derivation_on_form(&ad, omega).max_abs()
        })
        .fold(0.0, f64::max)
}

/// A unit bivector in one copy of an irreducible summand of Λ²m.
#[derive(Debug, Clone)]
pub struct Representative {
    pub label: String,
    /// 0, 1, 2 for the first, second, third block.
    pub block: usize,
    /// Isotypic component inside the block.
    pub component: usize,
    pub irrep_dim: usize,
    pub vector: Bivector,
}

#[derive(Debug, Clone)]
pub struct RepresentativeSet {
    pub model: FlagModel,
    pub reps: Vec<Representative>,
}

/// Irreducible dimensions of the three blocks.
pub fn irrep_dims(model: FlagModel) -> Result<[usize; 3]> {
    match model {
        FlagModel::W3 => Err(FlagError::NoBlocks(model)),
        FlagModel::W6 => Ok([1, 2, 2]),
        FlagModel::W12 => Ok([3, 4, 12]),
        FlagModel::W24 => Ok([28, 8, 56]),
    }
}

pub fn representatives(model: FlagModel) -> Result<RepresentativeSet> {
    let dims = irrep_dims(model)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut reps = Vec::new();
    let mut push = |label: String, block: usize, component: usize, vector: Bivector| {
        reps.push(Representative {
            label,
            block,
            component,
            irrep_dim: dims[block],
            vector,
        });
    };
    match model {
        FlagModel::W6 => {
            for r in 0..3 {
                push(format!("1_{0}^i_{0}", r + 1), 0, 0, slot_bivector(model, r, "1i")?);
            }
            for r in 0..3 {
                push(format!("b2_{}", r + 1), 1, r, cross_bivector(model, r + 1, r + 2, "-11+ii")?.scale(h));
            }
            for r in 0..3 {
                push(format!("b3_{}", r + 1), 2, r, cross_bivector(model, r + 1, r + 2, "11+ii")?.scale(h));
            }
        }
        FlagModel::W12 => {
            for r in 0..3 {
                push(format!("b1_{}a", r + 1), 0, r, slot_bivector(model, r + 1, "1i-jk")?.scale(h));
                push(format!("b1_{}b", r + 1), 0, r, slot_bivector(model, r + 2, "1i+jk")?.scale(h));
            }
            for r in 0..3 {
                push(format!("b2_{}", r + 1), 1, r, cross_bivector(model, r + 1, r + 2, "11-ii-jj-kk")?.scale(0.5));
            }
            for r in 0..3 {
                push(format!("b3_{}", r + 1), 2, r, cross_bivector(model, r + 1, r + 2, "11+kk")?.scale(h));
            }
        }
        FlagModel::W24 => {
            for r in 0..3 {
                push(format!("b1_{}", r + 1), 0, 0, slot_bivector(model, r, "jl+km")?.scale(h));
            }
            for r in 0..3 {
                push(
                    format!("b2_{}", r + 1),
                    1,
                    r,
                    cross_bivector(model, r + 1, r + 2, "11-ii-jj-kk-ll-mm-nn-oo")?.scale(0.5 * h),
                );
            }
            for r in 0..3 {
                push(format!("b3_{}", r + 1), 2, r, cross_bivector(model, r + 1, r + 2, "11+oo")?.scale(h));
            }
        }
        FlagModel::W3 => return Err(FlagError::NoBlocks(model)),
    }
    Ok(RepresentativeSet { model, reps })
}

impl RepresentativeSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Gram matrix of the representatives in the Q-wedge metric.
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |i, j| self.reps[i].vector.dot(&self.reps[j].vector))
    }

    fn block_indices(&self, block: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.reps[i].block == block).collect()
    }
}

/// The three blocks `R̂¹, R̂², R̂³` of an operator on the representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrices {
    pub model: FlagModel,
    pub blocks: [DMatrix<f64>; 3],
    /// Largest entry coupling representatives of different isotypic
    /// components (zero for closed-form blocks).
    pub off_block: f64,
}

/// Restrict `op` to the representatives of `reps`.
pub fn restrict(op: &SymOp, reps: &RepresentativeSet) -> Result<BlockMatrices> {
    let model = reps.model;
    if op.dim != model.dim_m() {
        return Err(FlagError::Dimension {
            what: "operator",
            expected: model.dim_m(),
            got: op.dim,
        });
    }
    let gram = reps.gram();
    let k = reps.len();
    if (gram - DMatrix::identity(k, k)).amax() > 1e-12 {
        return Err(FlagError::RankDefect {
            what: "orthonormal representatives",
            expected: k,
            found: k,
        });
    }
    let cols = DMatrix::from_fn(op.matrix.nrows(), k, |row, i| reps.reps[i].vector.coeffs[row]);
    let full = cols.transpose() * &op.matrix * &cols;
    let mut off_block = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let (ri, rj) = (&reps.reps[i], &reps.reps[j]);
            if ri.block != rj.block || ri.component != rj.component {
                off_block = off_block.max(full[(i, j)].abs());
            }
        }
    }
    let blocks = [0, 1, 2].map(|b| {
        let idx = reps.block_indices(b);
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
            let (ri, rj) = (&reps.reps[idx[i]], &reps.reps[idx[j]]);
            if ri.component == rj.component {
                full[(idx[i], idx[j])]
            } else {
                0.0
            }
        })
    });
    Ok(BlockMatrices {
        model,
        blocks,
        off_block,
    })
}

/// `s = 2(s₁s₂ + s₁s₃ + s₂s₃) − (s₁² + s₂² + s₃²)`.
pub fn s_scalar(s: &MetricParams) -> f64 {
    let [a, b, c] = s.s();
    2.0 * (a * b + a * c + b * c) - (a * a + b * b + c * c)
}

/// `((s_{r+1} − s_{r+2})² − s_r²) / (2 s_r)`, the value of `a_r` that
/// kills the third block.
pub fn a_zero(s: &MetricParams, r: usize) -> f64 {
    let (x, y, z) = (s.get(r), s.get(r + 1), s.get(r + 2));
    ((y - z).powi(2) - x * x) / (2.0 * x)
}

pub fn closed_form_blocks(model: FlagModel, s: &MetricParams, c: &InvariantCoeffs) -> Result<BlockMatrices> {
    c.check(model)?;
    let sc = s_scalar(s);
    let sr = |r: usize| s.get(r);
    let a = |r: usize| c.a[r % 3];
    let b = |r: usize| c.b[r % 3];
    let sigma = |r: usize| sr(r + 1) + sr(r + 2) - sr(r);
    let third = DMatrix::from_diagonal(&DVector::from_fn(3, |r, _| a_zero(s, r) - a(r)));
    let (first, second) = match model {
        FlagModel::W3 => return Err(FlagError::NoBlocks(model)),
        FlagModel::W6 | FlagModel::W24 => {
            let off = |t: usize| {
                if model == FlagModel::W6 {
                    -sc / (2.0 * sr(t)) + a(t)
                } else {
                    sc / sr(t) - 2.0 * a(t)
                }
            };
            let first = DMatrix::from_fn(3, 3, |i, j| if i == j { 4.0 * sr(i) } else { off(3 - i - j) });
            let second = DVector::from_fn(3, |r, _| {
                if model == FlagModel::W6 {
                    sigma(r) + a(r)
                } else {
                    sigma(r) + 3.0 * sc / (2.0 * sr(r)) + 7.0 * a(r)
                }
            });
            (first, second)
        }
        FlagModel::W12 => {
            let mut first = DMatrix::zeros(6, 6);
            for r in 0..3 {
                let off = -sc / sr(r) + 2.0 * a(r);
                first[(2 * r, 2 * r)] = 4.0 * sr(r + 1) - b(r + 1);
                first[(2 * r + 1, 2 * r + 1)] = 4.0 * sr(r + 2) + b(r + 2);
                first[(2 * r, 2 * r + 1)] = off;
                first[(2 * r + 1, 2 * r)] = off;
            }
            let second = DVector::from_fn(3, |r, _| sigma(r) + sc / (2.0 * sr(r)) + 3.0 * a(r));
            (first, second)
        }
    };
    Ok(BlockMatrices {
        model,
        blocks: [first, DMatrix::from_diagonal(&second), third],
        off_block: 0.0,
    })
}

/// The distinguished form ω₀ with `a_r` from [`a_zero`] and `b = 0`.
pub fn omega0(s: &MetricParams) -> InvariantCoeffs {
    InvariantCoeffs::from_a([0, 1, 2].map(|r| a_zero(s, r)))
}

/// Closed interval of admissible `a_r`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// For each r, the `a_r` for which the r-th diagonal entries of the second
/// and third blocks are both nonnegative. The upper endpoint is ω₀'s `a_r`.
pub fn admissible_intervals(model: FlagModel, s: &MetricParams) -> Result<[Interval; 3]> {
    let sc = s_scalar(s);
    let sigma = |r: usize| s.get(r + 1) + s.get(r + 2) - s.get(r);
    let lo = |r: usize| -> Result<f64> {
        Ok(match model {
            FlagModel::W6 => -sigma(r),
            FlagModel::W12 => -(sigma(r) + sc / (2.0 * s.get(r))) / 3.0,
            FlagModel::W24 => -(sigma(r) + 3.0 * sc / (2.0 * s.get(r))) / 7.0,
            FlagModel::W3 => return Err(FlagError::NoBlocks(model)),
        })
    };
    Ok([
        Interval { lo: lo(0)?, hi: a_zero(s, 0) },
        Interval { lo: lo(1)?, hi: a_zero(s, 1) },
        Interval { lo: lo(2)?, hi: a_zero(s, 2) },
    ])
}

impl BlockMatrices {
    pub fn max_deviation(&self, other: &BlockMatrices) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of each block.
    pub fn block_minima(&self) -> [f64; 3] {
        self.blocks.clone().map(|b| sym_eigenvalues(&b)[0])
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.block_minima().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues of the full operator predicted by the blocks: each block
    /// eigenvalue repeated by the irreducible dimension, sorted.
    pub fn predicted_spectrum(&self) -> Result<Vec<f64>> {
        let dims = irrep_dims(self.model)?;
        let mut out = Vec::new();
        for (block, d) in self.blocks.iter().zip(dims) {
            for v in sym_eigenvalues(block) {
                out.extend(std::iter::repeat_n(v, d));
            }
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
        };
        json!({
            "model": self.model,
            "R1": rows(&self.blocks[0]),
            "R2": rows(&self.blocks[1]),
            "R3": rows(&self.blocks[2]),
        })
    }
}

impl fmt::Display for BlockMatrices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.blocks.iter().enumerate() {
            writeln!(f, "R{}:", k + 1)?;
            for i in 0..m.nrows() {
                let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:>12.6}")).collect();
                writeln!(f, "  {}", row.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Nonzero coefficients of a form as CSV `a,b,c,d,value` with labels.
pub fn form_csv(model: FlagModel, omega: &FourForm) -> String {
    let alg = FlagAlgebra::get(model);
    let mut out = String::from("a,b,c,d,value\n");
    for (q, v) in omega.terms() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            alg.label(q[0]),
            alg.label(q[1]),
            alg.label(q[2]),
            alg.label(q[3]),
            v
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_operator;
    use crate::exterior::form_as_operator;
    use approx::assert_relative_eq;

    #[test]
    fn zeta_table_is_pinned() {
        assert_eq!(parse_table(ZETA_TABLE).unwrap().len(), 28);
        assert_eq!(table_digest(ZETA_TABLE), ZETA_TABLE_SHA256);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_pairs("1x").is_err());
        assert!(parse_pairs("1").is_err());
        assert!(parse_table("* 1i 1i").is_err());
        assert!(slot_bivector(FlagModel::W6, 0, "jk").is_err());
    }

    #[test]
    fn basis_form_examples() {
        let xi = invariant_form(FlagModel::W6, &InvariantCoeffs::from_a([1.0, 0.0, 0.0])).unwrap();
        assert_eq!(xi.terms(), vec![([2, 3, 4, 5], 1.0)]);
        let psi = invariant_form(FlagModel::W12, &InvariantCoeffs::new([0.0; 3], [1.0, 0.0, 0.0])).unwrap();
        assert_eq!(psi.terms(), vec![([0, 1, 2, 3], 1.0)]);
        assert_eq!(invariant_form(FlagModel::W24, &InvariantCoeffs::zero()).unwrap().norm(), 0.0);
        assert!(invariant_form(FlagModel::W6, &InvariantCoeffs::new([0.0; 3], [1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn representatives_are_orthonormal() {
        for (model, count) in [(FlagModel::W6, 9), (FlagModel::W12, 12), (FlagModel::W24, 9)] {
            let reps = representatives(model).unwrap();
            assert_eq!(reps.len(), count);
            let g = reps.gram();
            assert!((g - DMatrix::identity(count, count)).amax() < 1e-15);
        }
        assert!(representatives(FlagModel::W3).is_err());
    }

    #[test]
    fn dimension_audit_of_blocks() {
        for (model, n2) in [(FlagModel::W6, 15), (FlagModel::W12, 66), (FlagModel::W24, 276)] {
            let reps = representatives(model).unwrap();
            let dims = irrep_dims(model).unwrap();
            let total: usize = reps.reps.iter().map(|r| dims[r.block]).sum();
            assert_eq!(total, n2);
        }
    }

    #[test]
    fn restrict_zero_is_zero() {
        let reps = representatives(FlagModel::W12).unwrap();
        let b = restrict(&SymOp::zero(12), &reps).unwrap();
        assert!(b.blocks.iter().all(|m| m.amax() == 0.0));
    }

    #[test]
    fn omega0_examples() {
        let c = omega0(&MetricParams::normal());
        assert_eq!(c.a, [-0.5; 3]);
        let c = omega0(&MetricParams::new([1.0, 2.0, 3.0]).unwrap());
        assert_relative_eq!(c.a[0], 0.0);
        assert_relative_eq!(c.a[1], 0.0);
        assert_relative_eq!(c.a[2], -4.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let s = MetricParams::normal();
        let b = closed_form_blocks(FlagModel::W24, &s, &omega0(&s)).unwrap();
        assert!((&b.blocks[0] - DMatrix::from_element(3, 3, 4.0)).amax() < 1e-15);
        assert!((&b.blocks[1] - DMatrix::identity(3, 3) * 2.0).amax() < 1e-15);
        assert_eq!(b.blocks[2].amax(), 0.0);
        let ev = sym_eigenvalues(&b.blocks[0]);
        assert!(ev[0].abs() < 1e-12 && ev[1].abs() < 1e-12 && (ev[2] - 12.0).abs() < 1e-12);

        let s = MetricParams::new([1.0, 2.0, 3.0]).unwrap();
        let b = closed_form_blocks(FlagModel::W12, &s, &InvariantCoeffs::zero()).unwrap();
        // r = 1: 16 s₂ s₃ − (s/s₁)² = 96 − 64
        let m = b.blocks[0].view((0, 0), (2, 2)).into_owned();
        assert_relative_eq!(m.determinant(), 32.0, epsilon = 1e-12);
    }

    #[test]
    fn interval_examples() {
        let iv = admissible_intervals(FlagModel::W24, &MetricParams::normal()).unwrap();
        for i in iv {
            assert_relative_eq!(i.hi, -0.5);
            assert_relative_eq!(i.width(), 2.0 / 7.0, epsilon = 1e-15);
        }
        let iv = admissible_intervals(FlagModel::W6, &MetricParams::new([1.0, 1.0, 2.0]).unwrap()).unwrap();
        assert!(iv[2].is_empty());
        assert!(!iv[0].is_empty());
    }

    #[test]
    fn projections_of_forms() {
        for r in 0..3 {
            let zeta = basis_form(FlagModel::W24, FormKind::Zeta, r).unwrap();
            let phi = basis_form(FlagModel::W12, FormKind::Phi, r).unwrap();
            let xi = basis_form(FlagModel::W6, FormKind::Xi, r).unwrap();
            assert_eq!(project_form(&zeta, FlagModel::W24, FlagModel::W12).unwrap(), phi);
            assert_eq!(project_form(&phi, FlagModel::W12, FlagModel::W6).unwrap(), xi);
        }
        assert!(project_form(&FourForm::zero(6), FlagModel::W6, FlagModel::W12).is_err());
        let z = project_form(&FourForm::zero(24), FlagModel::W24, FlagModel::W6).unwrap();
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn zeta_invariance_and_fault_injection() {
        for r in 0..3 {
            let w = basis_form(FlagModel::W24, FormKind::Zeta, r).unwrap();
            assert!(invariance_residual(FlagModel::W24, &w) < 1e-10);
        }
        let flipped = ZETA_TABLE.replacen("+ 1o+in", "- 1o+in", 1);
        let w = basis_form_with_table(FlagModel::W24, FormKind::Zeta, 0, &flipped).unwrap();
        assert!(invariance_residual(FlagModel::W24, &w) > 1.0);
    }

    #[test]
    fn invariance_of_classical_forms() {
        for (model, kind) in [(FlagModel::W6, FormKind::Xi), (FlagModel::W12, FormKind::Phi), (FlagModel::W12, FormKind::Psi)] {
            for r in 0..3 {
                let w = basis_form(model, kind, r).unwrap();
                assert!(invariance_residual(model, &w) < 1e-10, "{kind}_{r}");
            }
        }
    }

    #[test]
    fn restriction_matches_closed_form_at_normal_metric() {
        for model in [FlagModel::W6, FlagModel::W12, FlagModel::W24] {
            let s = MetricParams::normal();
            let r = curvature_operator(model, &s);
            let c = InvariantCoeffs::zero();
            let got = restrict(&r.op.add(&form_as_operator(&invariant_form(model, &c).unwrap())), &representatives(model).unwrap()).unwrap();
            let want = closed_form_blocks(model, &s, &c).unwrap();
            assert!(got.max_deviation(&want) < 1e-9, "{model}\n{got}\n{want}");
        }
    }
}
