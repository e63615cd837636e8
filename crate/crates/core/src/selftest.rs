//! Numerical cross-checks and the self-test battery.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{curvature_operator, MetricParams};
use crate::error::{FlagError, Result};
use crate::exterior::bianchi;
use crate::forms::{
    basis_form, basis_form_with_table, closed_form_blocks, invariance_residual, invariant_form, representatives,
    restrict, table_digest, FormKind, InvariantCoeffs, ZETA_TABLE, ZETA_TABLE_SHA256,
};
use crate::lie::jordan::{derivation_algebra_dimension, g2_basis};
use crate::lie::{FlagAlgebra, FlagModel, GVector};
use crate::linalg::sym_eigenvalues;
use crate::moduli::{classify, refute_all_equal, DEFAULT_TOL};

/// Worst deviations between the first-principles operator and the
/// closed-form blocks over a batch of random samples.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub model: FlagModel,
    pub samples: usize,
    pub seed: u64,
    /// Largest entry of `restricted − closed form`.
    pub block_deviation: f64,
    /// Largest entry coupling different isotypic components.
    pub off_block: f64,
    /// Largest gap between the full spectrum and the block eigenvalues
    /// repeated by multiplicity.
    pub spectrum_deviation: f64,
}

impl CrosscheckReport {
    pub fn worst(&self) -> f64 {
        self.block_deviation.max(self.off_block).max(self.spectrum_deviation)
    }
}

/// Random `s ∈ [0.5, 2]³` and coefficients in `[−1, 1]` (b only on W12).
pub fn random_sample(model: FlagModel, rng: &mut ChaCha8Rng) -> (MetricParams, InvariantCoeffs) {
    let s = MetricParams::new([0; 3].map(|_| rng.random_range(0.5..2.0))).expect("positive s");
    let a = [0; 3].map(|_| rng.random_range(-1.0..1.0));
    let b = if model == FlagModel::W12 {
        [0; 3].map(|_| rng.random_range(-1.0..1.0))
    } else {
        [0.0; 3]
    };
    (s, InvariantCoeffs::new(a, b))
}

pub fn crosscheck(model: FlagModel, samples: usize, seed: u64) -> Result<CrosscheckReport> {
    if model == FlagModel::W3 {
        return Err(FlagError::NoBlocks(model));
    }
    let reps = representatives(model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CrosscheckReport {
        model,
        samples,
        seed,
        block_deviation: 0.0,
        off_block: 0.0,
        spectrum_deviation: 0.0,
    };
    for _ in 0..samples {
        let (s, c) = random_sample(model, &mut rng);
        let op = curvature_operator(model, &s).modified(&invariant_form(model, &c)?)?;
        let got = restrict(&op, &reps)?;
        let want = closed_form_blocks(model, &s, &c)?;
        report.block_deviation = report.block_deviation.max(got.max_deviation(&want));
        report.off_block = report.off_block.max(got.off_block);
        let full = sym_eigenvalues(&op.matrix);
        let predicted = want.predicted_spectrum()?;
        if predicted.len() != full.len() {
            return Err(FlagError::Dimension {
                what: "spectrum",
                expected: full.len(),
                got: predicted.len(),
            });
        }
        let gap = full.iter().zip(&predicted).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        report.spectrum_deviation = report.spectrum_deviation.max(gap);
    }
    Ok(report)
}

fn random_g(model: FlagModel, rng: &mut ChaCha8Rng) -> GVector {
    GVector {
        model,
        coeffs: DVector::from_fn(model.dim_g(), |_, _| rng.random_range(-1.0..1.0)),
    }
}

/// Largest Jacobiator entry over `trials` random triples in g.
pub fn jacobi_residual(model: FlagModel, trials: usize, seed: u64) -> f64 {
    let alg = FlagAlgebra::get(model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = |u: &GVector, v: &GVector| alg.bracket(u, v).expect("same model");
    (0..trials)
        .map(|_| {
            let (x, y, z) = (random_g(model, &mut rng), random_g(model, &mut rng), random_g(model, &mut rng));
            b(&b(&x, &y), &z).add(&b(&b(&y, &z), &x)).add(&b(&b(&z, &x), &y)).coeffs.amax()
        })
        .fold(0.0, f64::max)
}

/// Largest `|Q([z,x],y) + Q(x,[z,y])|` over `trials` random triples.
pub fn ad_invariance_residual(model: FlagModel, trials: usize, seed: u64) -> f64 {
    let alg = FlagAlgebra::get(model);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = |u: &GVector, v: &GVector| alg.q_inner(u, v).expect("same model");
    let b = |u: &GVector, v: &GVector| alg.bracket(u, v).expect("same model");
    (0..trials)
        .map(|_| {
            let (x, y, z) = (random_g(model, &mut rng), random_g(model, &mut rng), random_g(model, &mut rng));
            (q(&b(&z, &x), &y) + q(&x, &b(&z, &y))).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Run the battery against the built-in ζ table.
pub fn run() -> Vec<CheckResult> {
    run_with_table(ZETA_TABLE)
}

/// Run the battery with a substitute ζ table, to confirm that a corrupted
/// table is caught.
pub fn run_with_table(table: &str) -> Vec<CheckResult> {
    let mut out = Vec::new();

    let digest = table_digest(table);
    out.push(check("zeta table digest", digest == ZETA_TABLE_SHA256, digest));

    let zeta = (0..3)
        .map(|r| {
            basis_form_with_table(FlagModel::W24, FormKind::Zeta, r, table)
                .map(|w| invariance_residual(FlagModel::W24, &w))
        })
        .collect::<Result<Vec<f64>>>();
    out.push(match zeta {
        Ok(res) => {
            let worst = res.iter().copied().fold(0.0, f64::max);
            check("zeta invariance", worst < 1e-10, format!("residual {worst:.3e}"))
        }
        Err(e) => check("zeta invariance", false, e.to_string()),
    });

    let flipped = ZETA_TABLE.replacen("+ 1o+in", "- 1o+in", 1);
    let injected = basis_form_with_table(FlagModel::W24, FormKind::Zeta, 0, &flipped)
        .map(|w| invariance_residual(FlagModel::W24, &w))
        .unwrap_or(f64::INFINITY);
    out.push(check(
        "zeta fault injection detected",
        injected > 1.0,
        format!("flipped sign gives residual {injected:.3e}"),
    ));

    let mut worst = 0.0f64;
    for (model, kind) in [(FlagModel::W6, FormKind::Xi), (FlagModel::W12, FormKind::Phi), (FlagModel::W12, FormKind::Psi)] {
        for r in 0..3 {
            if let Ok(w) = basis_form(model, kind, r) {
                worst = worst.max(invariance_residual(model, &w));
            } else {
                worst = f64::INFINITY;
            }
        }
    }
    out.push(check("classical forms invariant", worst < 1e-10, format!("residual {worst:.3e}")));

    let jacobi = FlagModel::ALL.iter().map(|m| jacobi_residual(*m, 20, 1)).fold(0.0, f64::max);
    out.push(check("Jacobi identity", jacobi <= 1e-10, format!("residual {jacobi:.3e}")));
    let adinv = FlagModel::ALL.iter().map(|m| ad_invariance_residual(*m, 20, 2)).fold(0.0, f64::max);
    out.push(check("Q ad-invariance", adinv <= 1e-10, format!("residual {adinv:.3e}")));

    let g2 = g2_basis().map(|b| b.len()).unwrap_or(0);
    out.push(check("dim der(O) = 14", g2 == 14, format!("dim g2 = {g2}")));
    let f4 = derivation_algebra_dimension();
    out.push(check("dim der(h3(O)) = 52", f4 == 52, format!("dim f4 = {f4}")));
    let h24 = FlagAlgebra::get(FlagModel::W24).h_basis().len();
    out.push(check("dim h(W24) = 28", h24 == 28, format!("dim h = {h24}")));

    let closure = FlagModel::ALL
        .iter()
        .map(|m| FlagAlgebra::get(*m).closure_residual())
        .fold(0.0, f64::max);
    out.push(check("bracket closure", closure < 1e-10, format!("residual {closure:.3e}")));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bianchi_worst = 0.0f64;
    for model in FlagModel::ALL {
        let (s, _) = random_sample(model, &mut rng);
        bianchi_worst = bianchi_worst.max(bianchi(&curvature_operator(model, &s).op).max_abs());
    }
    out.push(check(
        "first Bianchi identity",
        bianchi_worst < 1e-10,
        format!("max |b(R)| {bianchi_worst:.3e}"),
    ));

    for model in [FlagModel::W6, FlagModel::W12, FlagModel::W24] {
        let name = format!("{model} blocks and spectrum factorization");
        out.push(match crosscheck(model, 3, 11) {
            Ok(r) => check(
                &name,
                r.worst() <= 1e-8,
                format!("block {:.3e}, spectrum {:.3e}", r.block_deviation, r.spectrum_deviation),
            ),
            Err(e) => check(&name, false, e.to_string()),
        });
    }

    let truth: [(FlagModel, [f64; 3], [bool; 2]); 5] = [
        (FlagModel::W24, [1.0, 1.0, 1.0], [true, false]),
        (FlagModel::W24, [1.0, 1.0, 1.2], [true, false]),
        (FlagModel::W12, [1.0, 1.0, 1.2], [true, true]),
        (FlagModel::W24, [1.0, 1.1, 1.3], [true, true]),
        (FlagModel::W6, [1.0, 2.0, 3.0], [false, false]),
    ];
    for (model, s, [nonneg, pos]) in truth {
        let name = format!("{model} at {s:?}");
        let res = MetricParams::new(s).and_then(|s| classify(model, &s, DEFAULT_TOL));
        out.push(match res {
            Ok(c) => {
                let (verified, note) = match &c.certificate {
                    Some(cert) => {
                        let v = cert.verify(DEFAULT_TOL).map(|v| v.valid).unwrap_or(false);
                        (v, format!("certificate verified: {v}"))
                    }
                    None => (!nonneg, "no certificate".to_string()),
                };
                let ok = c.flags.strongly_nonneg == nonneg && c.flags.strongly_pos == pos && verified;
                check(&name, ok, format!("{} ({note})", c.reason.as_str()))
            }
            Err(e) => check(&name, false, e.to_string()),
        });
    }

    for model in [FlagModel::W6, FlagModel::W12, FlagModel::W24] {
        let name = format!("{model} normal metric refuted");
        out.push(match refute_all_equal(model, &MetricParams::normal()) {
            Ok(r) => check(&name, r.supremum <= 1e-8, format!("sup min eig {:.3e}", r.supremum)),
            Err(e) => check(&name, false, e.to_string()),
        });
    }
    out
}
