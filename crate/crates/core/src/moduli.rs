//! Classification of g_s: sec ≥ 0, sec > 0, strongly nonnegative and
//! strongly positive curvature, with certificates and refutations.

use nalgebra::{Cholesky, DMatrix};
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_operator, MetricParams};
use crate::error::{FlagError, Result};
use crate::exterior::SymOp;
use crate::forms::{
    admissible_intervals, closed_form_blocks, invariant_form, omega0, representatives, restrict, s_scalar,
    InvariantCoeffs,
};
use crate::lie::FlagModel;
use crate::linalg::{sym_eigen_sorted, sym_eigenvalues};

/// Default tolerance on eigenvalues and on the p-polynomials.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative tolerance for deciding `s_r = s_t`.
pub const TIE_TOL: f64 = 1e-9;

/// `p_r = (s_{r+1} − s_{r+2})² + 2s_r(s_{r+1} + s_{r+2}) − 3s_r²`.
pub fn p_polys(s: &MetricParams) -> [f64; 3] {
    p_polys_raw(s.s())
}

/// [`p_polys`] on an arbitrary triple (zeros allowed).
pub fn p_polys_raw(s: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|r| {
        let (x, y, z) = (s[r], s[(r + 1) % 3], s[(r + 2) % 3]);
        (y - z).powi(2) + 2.0 * x * (y + z) - 3.0 * x * x
    })
}

/// Exact p-polynomials of an integer triple.
pub fn p_polys_int(s: [i64; 3]) -> [i64; 3] {
    [0, 1, 2].map(|r| {
        let (x, y, z) = (s[r], s[(r + 1) % 3], s[(r + 2) % 3]);
        (y - z).pow(2) + 2 * x * (y + z) - 3 * x * x
    })
}

fn ties(s: &MetricParams) -> [bool; 3] {
    let max = s.s().into_iter().fold(0.0, f64::max);
    // ties[r]: s_{r+1} = s_{r+2}
    [0, 1, 2].map(|r| (s.get(r + 1) - s.get(r + 2)).abs() <= TIE_TOL * max)
}

/// Indices r (1-based) with `s_{r+1} = s_{r+2}` up to the relative `tol`.
pub fn detect_submersion(s: &MetricParams, tol: f64) -> Vec<usize> {
    let max = s.s().into_iter().fold(0.0, f64::max);
    (0..3)
        .filter(|&r| (s.get(r + 1) - s.get(r + 2)).abs() <= tol * max)
        .map(|r| r + 1)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// Normal homogeneous metric: sec ≥ 0 but no better.
    AllEqualNormal,
    /// W24 with two equal `s_r`: submerges onto CaP².
    #[serde(rename = "submerges_CaP2")]
    SubmergesCaP2,
    /// Some `p_r < 0`: a plane of negative curvature exists.
    PNegative,
    /// Some `p_r = 0` with the `s_r` not all equal: sec ≥ 0 but not sec > 0.
    PZero,
    /// Strongly positive.
    Generic,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::AllEqualNormal => "all_equal_normal",
            Reason::SubmergesCaP2 => "submerges_CaP2",
            Reason::PNegative => "p_negative",
            Reason::PZero => "p_zero",
            Reason::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub sec_nonneg: bool,
    pub sec_pos: bool,
    pub strongly_nonneg: bool,
    pub strongly_pos: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub model: FlagModel,
    /// Normalized so that `max s_r = 1`.
    pub s: [f64; 3],
    pub flags: Flags,
    pub reason: Reason,
    pub p_values: [f64; 3],
    pub s_scalar: f64,
    /// r (1-based) with `s_{r+1} = s_{r+2}`.
    pub submersions: Vec<usize>,
    /// `|s_{r+1} − s_{r+2}|` for r = 1, 2, 3.
    pub tie_distances: [f64; 3],
    /// Evidence for the strongest positive verdict, if any.
    pub certificate: Option<Certificate>,
    /// False when the certificate is weaker than the verdict, which happens
    /// when the positive margin near a tie falls below the tolerance.
    pub certified: bool,
}

/// Flags and reason from the p-polynomials and the tie pattern alone.
pub fn classify_flags(model: FlagModel, p: [f64; 3], ties: [bool; 3], tol: f64) -> (Flags, Reason) {
    let all_equal = ties.iter().all(|t| *t);
    let any_tie = ties.iter().any(|t| *t);
    let sec_nonneg = p.iter().all(|v| *v >= -tol);
    let sec_pos = p.iter().all(|v| *v > tol) && !all_equal;
    let strongly_pos = sec_pos && (model != FlagModel::W24 || !any_tie);
    let flags = Flags {
        sec_nonneg,
        sec_pos,
        strongly_nonneg: sec_nonneg,
        strongly_pos,
    };
    let reason = if !sec_nonneg {
        Reason::PNegative
    } else if all_equal {
        Reason::AllEqualNormal
    } else if !sec_pos {
        Reason::PZero
    } else if !strongly_pos {
        Reason::SubmergesCaP2
    } else {
        Reason::Generic
    };
    (flags, reason)
}

/// Classify `(model, s)`; positive verdicts carry a verified certificate.
pub fn classify(model: FlagModel, s: &MetricParams, tol: f64) -> Result<Classification> {
    let s = s.normalized();
    let p = p_polys(&s);
    let t = ties(&s);
    let (flags, reason) = classify_flags(model, p, t, tol);
    let mut certified = true;
    let pos = if flags.strongly_pos {
        match certify_strongly_pos(model, &s, tol) {
            Ok(c) => Some(c),
            Err(FlagError::BisectionExhausted { .. }) => {
                certified = false;
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let certificate = match pos {
        Some(c) => Some(c),
        None if flags.strongly_nonneg => Some(certify_strongly_nonneg(model, &s, tol)?),
        None => None,
    };
    Ok(Classification {
        model,
        s: s.s(),
        flags,
        reason,
        p_values: p,
        s_scalar: s_scalar(&s),
        submersions: detect_submersion(&s, TIE_TOL),
        tie_distances: [0, 1, 2].map(|r| (s.get(r + 1) - s.get(r + 2)).abs()),
        certificate,
        certified,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    StronglyNonneg,
    StronglyPos,
}

/// A 4-form together with the eigenvalue evidence for `R + ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub model: FlagModel,
    pub s: [f64; 3],
    pub coeffs: InvariantCoeffs,
    pub epsilon: f64,
    /// Smallest eigenvalue of the full operator `R + ω`.
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue of each closed-form block (empty for W3).
    pub block_minima: Vec<f64>,
    pub kernel_witness: Option<Vec<f64>>,
}

/// `R + ω(c)` on all of Λ²m.
pub fn full_operator(model: FlagModel, s: &MetricParams, c: &InvariantCoeffs) -> Result<SymOp> {
    curvature_operator(model, s).modified(&invariant_form(model, c)?)
}

fn block_minima(model: FlagModel, s: &MetricParams, c: &InvariantCoeffs) -> Result<Vec<f64>> {
    if model == FlagModel::W3 {
        return Ok(Vec::new());
    }
    Ok(closed_form_blocks(model, s, c)?.block_minima().to_vec())
}

/// `v = ((s₂−s₃)/s₁, (s₃−s₁)/s₂, (s₁−s₂)/s₃)`.
pub fn kernel_vector(s: &MetricParams) -> [f64; 3] {
    [0, 1, 2].map(|r| (s.get(r + 1) - s.get(r + 2)) / s.get(r))
}

/// Certificate that `R + ω₀` is positive-semidefinite.
pub fn certify_strongly_nonneg(model: FlagModel, s: &MetricParams, tol: f64) -> Result<Certificate> {
    let s = s.normalized();
    let p = p_polys(&s);
    if let Some(r) = (0..3).find(|&r| p[r] < -tol) {
        return Err(FlagError::NegativeP { r: r + 1, value: p[r] });
    }
    let coeffs = if model == FlagModel::W3 { InvariantCoeffs::zero() } else { omega0(&s) };
    let minima = block_minima(model, &s, &coeffs)?;
    let min_eigenvalue = sym_eigenvalues(&full_operator(model, &s, &coeffs)?.matrix)[0];
    let kernel_witness = match model {
        FlagModel::W24 => {
            let v = kernel_vector(&s);
            if v.iter().any(|x| x.abs() > TIE_TOL) {
                Some(v.to_vec())
            } else {
                let first = &closed_form_blocks(model, &s, &coeffs)?.blocks[0];
                let (_, vecs) = sym_eigen_sorted(first);
                Some(vecs.column(0).iter().copied().collect())
            }
        }
        _ => None,
    };
    let cert = Certificate {
        kind: CertificateKind::StronglyNonneg,
        model,
        s: s.s(),
        coeffs,
        epsilon: 0.0,
        min_eigenvalue,
        block_minima: minima,
        kernel_witness,
    };
    if cert.min_eigenvalue < -tol || cert.block_minima.iter().any(|m| *m < -tol) {
        return Err(FlagError::NotStronglyPositive(format!(
            "R + ω₀ has eigenvalue {:e} below -{tol:e}",
            cert.min_eigenvalue
        )));
    }
    Ok(cert)
}

/// The perturbation direction ω′ of the first-order argument, normalized
/// so that its largest coefficient has magnitude 1.
pub fn perturbation_direction(model: FlagModel, s: &MetricParams) -> InvariantCoeffs {
    let t = ties(s);
    let raw = match model {
        FlagModel::W3 => InvariantCoeffs::zero(),
        FlagModel::W6 => InvariantCoeffs::from_a([-1.0; 3]),
        FlagModel::W12 => {
            let mut c = InvariantCoeffs::from_a([-1.0; 3]);
            // s_r ≠ s_{r+1} = s_{r+2}: kernel (1,1) of the r-th 2×2 block,
            // on which ω′ acts by 4a′_r − b′_{r+1} + b′_{r+2}
            if let Some(r) = (0..3).find(|&r| t[r]) {
                c.b[(r + 2) % 3] = -4.0 * c.a[r] + 1.0;
            }
            c
        }
        FlagModel::W24 => {
            // ω′ acts on the kernel vector v by a positive multiple of
            // Σ c_r a′_r with c_r = s_r (s_r − s_{r+1})(s_r − s_{r+2})
            let c = [0, 1, 2].map(|r| s.get(r) * (s.get(r) - s.get(r + 1)) * (s.get(r) - s.get(r + 2)));
            let star = (0..3).min_by(|&i, &j| c[i].total_cmp(&c[j])).expect("three entries");
            let rest: f64 = (0..3).filter(|&r| r != star).map(|r| c[r].abs()).sum();
            let small = if rest > 0.0 { (0.5 * c[star].abs() / rest).min(0.5) } else { 0.5 };
            let mut a = [-small; 3];
            a[star] = -1.0;
            InvariantCoeffs::from_a(a)
        }
    };
    let max = raw.a.iter().chain(&raw.b).fold(0.0f64, |m, v| m.max(v.abs()));
    if max > 0.0 {
        raw.scale(1.0 / max)
    } else {
        raw
    }
}

/// Maximum number of halvings of ε.
pub const MAX_HALVINGS: usize = 60;

/// Certificate that `R + ω₀ + ε ω′` is positive-definite.
pub fn certify_strongly_pos(model: FlagModel, s: &MetricParams, tol: f64) -> Result<Certificate> {
    let s = s.normalized();
    let (flags, reason) = classify_flags(model, p_polys(&s), ties(&s), tol);
    if !flags.strongly_pos {
        return Err(FlagError::NotStronglyPositive(reason.as_str().to_string()));
    }
    if model == FlagModel::W3 {
        // Λ⁴ = 0 in dimension 3
        let c = InvariantCoeffs::zero();
        let min = sym_eigenvalues(&full_operator(model, &s, &c)?.matrix)[0];
        if min <= tol {
            return Err(FlagError::BisectionExhausted { steps: 0, best: min });
        }
        return Ok(Certificate {
            kind: CertificateKind::StronglyPos,
            model,
            s: s.s(),
            coeffs: c,
            epsilon: 0.0,
            min_eigenvalue: min,
            block_minima: Vec::new(),
            kernel_witness: None,
        });
    }
    let base = omega0(&s);
    let dir = perturbation_direction(model, &s);
    let mut eps = 1.0;
    let mut best = f64::NEG_INFINITY;
    for _ in 0..MAX_HALVINGS {
        let c = base.add(&dir.scale(eps));
        let minima = block_minima(model, &s, &c)?;
        let m = minima.iter().copied().fold(f64::INFINITY, f64::min);
        best = best.max(m);
        if m > tol {
            let min_eigenvalue = sym_eigenvalues(&full_operator(model, &s, &c)?.matrix)[0];
            return Ok(Certificate {
                kind: CertificateKind::StronglyPos,
                model,
                s: s.s(),
                coeffs: c,
                epsilon: eps,
                min_eigenvalue,
                block_minima: minima,
                kernel_witness: None,
            });
        }
        eps *= 0.5;
    }
    Err(FlagError::BisectionExhausted {
        steps: MAX_HALVINGS,
        best,
    })
}

/// Outcome of re-checking a certificate from scratch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    /// Smallest eigenvalue of the rebuilt full operator.
    pub min_eigenvalue: f64,
    /// Whether a Cholesky factorization of the full operator (shifted by
    /// `tol` for semidefinite certificates) succeeded.
    pub cholesky_ok: bool,
    /// Largest deviation between the restriction and the closed-form blocks.
    pub block_deviation: f64,
    pub valid: bool,
}

impl Certificate {
    /// Rebuild `R + ω` and re-check the claim with an eigensolver and an
    /// independent Cholesky factorization.
    pub fn verify(&self, tol: f64) -> Result<Verification> {
        let s = MetricParams::new(self.s)?;
        let op = full_operator(self.model, &s, &self.coeffs)?;
        let min_eigenvalue = sym_eigenvalues(&op.matrix)[0];
        let n = op.matrix.nrows();
        let shift = match self.kind {
            CertificateKind::StronglyPos => 0.0,
            CertificateKind::StronglyNonneg => tol.max(1e-12) * 10.0,
        };
        let cholesky_ok = Cholesky::new(&op.matrix + DMatrix::identity(n, n) * shift).is_some();
        let block_deviation = if self.model == FlagModel::W3 {
            0.0
        } else {
            let got = restrict(&op, &representatives(self.model)?)?;
            got.max_deviation(&closed_form_blocks(self.model, &s, &self.coeffs)?)
        };
        let valid = cholesky_ok
            && block_deviation < 1e-8
            && match self.kind {
                CertificateKind::StronglyPos => min_eigenvalue > 0.0,
                CertificateKind::StronglyNonneg => min_eigenvalue >= -tol,
            };
        Ok(Verification {
            min_eigenvalue,
            cholesky_ok,
            block_deviation,
            valid,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FlagError::Parse(e.to_string()))
    }
}

/// Best value of `min eig R̂¹` found over the admissible coefficient box.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Refutation {
    pub model: FlagModel,
    pub s: [f64; 3],
    pub supremum: f64,
    pub argmax: InvariantCoeffs,
    pub evaluations: usize,
}

/// Maximize the smallest eigenvalue of the first block over `a_r` in the
/// admissible intervals (and, on W12, `b_r ∈ [−4s_r, 4s_r]`, outside of
/// which a diagonal entry of the first block is already negative).
pub fn refute(model: FlagModel, s: &MetricParams) -> Result<Refutation> {
    let s = s.normalized();
    let iv = admissible_intervals(model, &s)?;
    if let Some(r) = (0..3).find(|&r| iv[r].is_empty()) {
        return Err(FlagError::NegativeP {
            r: r + 1,
            value: p_polys(&s)[r],
        });
    }
    let mut lo = vec![iv[0].lo, iv[1].lo, iv[2].lo];
    let mut hi = vec![iv[0].hi, iv[1].hi, iv[2].hi];
    if model == FlagModel::W12 {
        for r in 0..3 {
            lo.push(-4.0 * s.get(r));
            hi.push(4.0 * s.get(r));
        }
    }
    let dim = lo.len();
    let coeffs = |x: &[f64]| {
        let mut c = InvariantCoeffs::from_a([x[0], x[1], x[2]]);
        if dim == 6 {
            c.b = [x[3], x[4], x[5]];
        }
        c
    };
    let mut evaluations = 0usize;
    let mut f = |x: &[f64]| -> f64 {
        evaluations += 1;
        closed_form_blocks(model, &s, &coeffs(x))
            .map(|b| sym_eigenvalues(&b.blocks[0])[0])
            .unwrap_or(f64::NEG_INFINITY)
    };

    // grid
    let steps = if dim == 3 { 16 } else { 6 };
    let mut best_x = lo.clone();
    let mut best = f64::NEG_INFINITY;
    let total = (steps + 1usize).pow(dim as u32);
    for idx in 0..total {
        let mut k = idx;
        let x: Vec<f64> = (0..dim)
            .map(|d| {
                let i = k % (steps + 1);
                k /= steps + 1;
                lo[d] + (hi[d] - lo[d]) * i as f64 / steps as f64
            })
            .collect();
        let v = f(&x);
        if v > best {
            best = v;
            best_x = x;
        }
    }

    // compass search inside the box
    let mut step: Vec<f64> = (0..dim).map(|d| (hi[d] - lo[d]) / steps as f64).collect();
    for _ in 0..200 {
        let mut improved = false;
        for d in 0..dim {
            for sign in [-1.0, 1.0] {
                let mut x = best_x.clone();
                x[d] = (x[d] + sign * step[d]).clamp(lo[d], hi[d]);
                let v = f(&x);
                if v > best {
                    best = v;
                    best_x = x;
                    improved = true;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|h| *h *= 0.5);
            if step.iter().all(|h| *h < 1e-12) {
                break;
            }
        }
    }
    if !best.is_finite() {
        return Err(FlagError::NoBlocks(model));
    }
    Ok(Refutation {
        model,
        s: s.s(),
        supremum: best,
        argmax: coeffs(&best_x),
        evaluations,
    })
}

/// [`refute`] restricted to the normal metric `s₁ = s₂ = s₃`.
pub fn refute_all_equal(model: FlagModel, s: &MetricParams) -> Result<Refutation> {
    if !ties(s).iter().all(|t| *t) {
        return Err(FlagError::Domain(format!("s = {:?} is not normal", s.s())));
    }
    refute(model, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(s: [f64; 3]) -> MetricParams {
        MetricParams::new(s).unwrap()
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_polys(&MetricParams::normal()), [1.0; 3]);
        assert_eq!(s_scalar(&MetricParams::normal()), 3.0);
        assert_eq!(p_polys(&ms([1.0, 2.0, 3.0])), [8.0, 8.0, -8.0]);
        assert_eq!(s_scalar(&ms([1.0, 2.0, 3.0])), 8.0);
        assert_eq!(p_polys_raw([0.4, 0.4, 0.0]), [0.0; 3]);
        assert_eq!(p_polys_int([7, 7, 0]), [0; 3]);
        assert_eq!(p_polys_int([1, 1, 2]), [4, 4, -4]);
    }

    #[test]
    fn submersion_examples() {
        assert_eq!(detect_submersion(&MetricParams::normal(), TIE_TOL), vec![1, 2, 3]);
        assert_eq!(detect_submersion(&ms([1.0, 1.0, 1.2]), TIE_TOL), vec![3]);
        assert!(detect_submersion(&ms([1.0, 1.1, 1.3]), TIE_TOL).is_empty());
    }

    #[test]
    fn classification_examples() {
        let c = classify(FlagModel::W24, &MetricParams::normal(), DEFAULT_TOL).unwrap();
        assert!(c.flags.strongly_nonneg && !c.flags.sec_pos && !c.flags.strongly_pos);
        assert_eq!(c.reason, Reason::AllEqualNormal);

        let s = ms([1.0, 1.0, 1.2]);
        let c = classify(FlagModel::W24, &s, DEFAULT_TOL).unwrap();
        assert!(c.flags.sec_pos && !c.flags.strongly_pos);
        assert_eq!(c.reason, Reason::SubmergesCaP2);
        for model in [FlagModel::W6, FlagModel::W12] {
            let c = classify(model, &s, DEFAULT_TOL).unwrap();
            assert!(c.flags.strongly_pos, "{model}");
            assert_eq!(c.reason, Reason::Generic);
        }
        let c = classify(FlagModel::W12, &ms([1.0, 2.0, 3.0]), DEFAULT_TOL).unwrap();
        assert!(!c.flags.sec_nonneg);
        assert_eq!(c.reason, Reason::PNegative);
        assert!(c.certificate.is_none());
    }

    #[test]
    fn near_tie_falls_back_to_nonneg_certificate() {
        let c = classify(FlagModel::W24, &ms([1.0, 1.000001, 1.3]), DEFAULT_TOL).unwrap();
        assert!(c.flags.strongly_pos && !c.certified);
        let cert = c.certificate.unwrap();
        assert_eq!(cert.kind, CertificateKind::StronglyNonneg);
        assert!(cert.verify(DEFAULT_TOL).unwrap().valid);
        let c = classify(FlagModel::W24, &ms([1.0, 1.1, 1.3]), DEFAULT_TOL).unwrap();
        assert!(c.certified);
    }

    #[test]
    fn nonneg_certificates() {
        match certify_strongly_nonneg(FlagModel::W12, &ms([1.0, 2.0, 3.0]), DEFAULT_TOL) {
            Err(FlagError::NegativeP { r, .. }) => assert_eq!(r, 3),
            other => panic!("{other:?}"),
        }
        let c = certify_strongly_nonneg(FlagModel::W24, &MetricParams::normal(), DEFAULT_TOL).unwrap();
        assert_eq!(c.kernel_witness.as_ref().unwrap().len(), 3);
        let s = ms([1.0, 2.0, 2.5]);
        let v = kernel_vector(&s);
        assert_eq!(v, [-0.5, 1.5 / 2.0, -1.0 / 2.5]);
        let b = closed_form_blocks(FlagModel::W24, &s, &omega0(&s)).unwrap();
        let kv = &b.blocks[0] * nalgebra::DVector::from_row_slice(&v);
        assert!(kv.amax() < 1e-10);
    }

    #[test]
    fn positive_certificates_verify() {
        let c = certify_strongly_pos(FlagModel::W24, &ms([1.0, 1.1, 1.3]), DEFAULT_TOL).unwrap();
        assert!(c.min_eigenvalue > 0.0);
        assert!(c.verify(DEFAULT_TOL).unwrap().valid);
        let c = certify_strongly_pos(FlagModel::W12, &ms([1.0, 1.0, 1.2]), DEFAULT_TOL).unwrap();
        assert!(c.coeffs.b.iter().any(|b| *b > 0.0));
        assert!(c.verify(DEFAULT_TOL).unwrap().valid);
        assert!(certify_strongly_pos(FlagModel::W24, &ms([1.0, 1.0, 1.2]), DEFAULT_TOL).is_err());
        let c = certify_strongly_pos(FlagModel::W3, &ms([1.0, 1.1, 1.3]), DEFAULT_TOL).unwrap();
        assert!(c.verify(DEFAULT_TOL).unwrap().valid);
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = certify_strongly_pos(FlagModel::W6, &ms([1.0, 1.0, 1.2]), DEFAULT_TOL).unwrap();
        let text = c.to_json();
        for key in ["model", "s", "coeffs", "epsilon", "min_eigenvalue", "block_minima", "kernel_witness"] {
            assert!(text.contains(&format!("\"{key}\"")), "{key}");
        }
        assert_eq!(Certificate::from_json(&text).unwrap(), c);
        assert!(Certificate::from_json("{").is_err());
    }

    #[test]
    fn refutations_at_normal_metric() {
        for model in [FlagModel::W6, FlagModel::W12, FlagModel::W24] {
            let r = refute_all_equal(model, &MetricParams::normal()).unwrap();
            assert!(r.supremum <= 1e-8, "{model}: {}", r.supremum);
        }
        assert!(refute_all_equal(FlagModel::W6, &ms([1.0, 1.0, 1.2])).is_err());
        let r = refute(FlagModel::W24, &ms([1.0, 1.0, 1.2])).unwrap();
        assert!(r.supremum <= 1e-8, "{}", r.supremum);
    }

    #[test]
    fn w3_operator_agrees_with_p() {
        for s in [[1.0, 1.1, 1.3], [1.0, 2.0, 3.0], [1.0, 1.0, 1.0], [0.5, 1.0, 1.4]] {
            let s = ms(s);
            let p = p_polys(&s);
            let min = sym_eigenvalues(&curvature_operator(FlagModel::W3, &s).op.matrix)[0];
            let pmin = p.into_iter().fold(f64::INFINITY, f64::min);
            assert_eq!(min > 1e-12, pmin > 1e-12, "{s:?}: {min} vs {p:?}");
            assert_eq!(min < -1e-12, pmin < -1e-12, "{s:?}: {min} vs {p:?}");
        }
    }

    proptest! {
        #[test]
        fn flags_form_a_chain(s1 in 0.05f64..1.0, s2 in 0.05f64..1.0, s3 in 0.05f64..1.0, m in 0usize..4) {
            let model = FlagModel::ALL[m];
            let s = ms([s1, s2, s3]);
            let (f, _) = classify_flags(model, p_polys(&s.normalized()), ties(&s), DEFAULT_TOL);
            prop_assert!(!f.strongly_pos || f.sec_pos);
            prop_assert!(!f.sec_pos || f.sec_nonneg);
            prop_assert_eq!(f.strongly_nonneg, f.sec_nonneg);
        }

        #[test]
        fn flags_are_scale_and_permutation_invariant(s1 in 0.05f64..1.0, s2 in 0.05f64..1.0, s3 in 0.05f64..1.0, lambda in 0.1f64..10.0) {
            for model in FlagModel::ALL {
                let base = ms([s1, s2, s3]).normalized();
                let f = classify_flags(model, p_polys(&base), ties(&base), DEFAULT_TOL);
                let scaled = ms([s1 * lambda, s2 * lambda, s3 * lambda]).normalized();
                prop_assert_eq!(classify_flags(model, p_polys(&scaled), ties(&scaled), DEFAULT_TOL).0, f.0);
                let perm = ms([s3, s1, s2]).normalized();
                prop_assert_eq!(classify_flags(model, p_polys(&perm), ties(&perm), DEFAULT_TOL).0, f.0);
            }
        }
    }
}
