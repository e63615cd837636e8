use super::*;
use crate::division::unit_index;
use crate::lie::jordan::{derivation_algebra_dimension, g2_basis, lift_octonion_derivation};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mb(model: FlagModel, sym: char, slot: usize) -> MVector {
    MVector::basis(model, slot - 1, unit_index(sym).unwrap())
}

fn random_g(model: FlagModel, rng: &mut ChaCha8Rng) -> GVector {
    GVector {
        model,
        coeffs: DVector::from_fn(model.dim_g(), |_, _| rng.random_range(-1.0..1.0)),
    }
}

fn unit_c(sym: char) -> AlgebraElement<f64> {
    AlgebraElement::unit(AlgebraTag::Complex, unit_index(sym).unwrap())
}

#[test]
fn dimensions_match_group_table() {
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        assert_eq!(alg.h_basis().len(), model.dim_h(), "{model}");
        assert!(alg.closure_residual() < 1e-10, "{model}: {}", alg.closure_residual());
    }
    assert_eq!(FlagModel::W6.dim_h(), 2);
    assert_eq!(FlagModel::W24.dim_h(), 28);
}

#[test]
fn model_parsing() {
    assert_eq!("w24".parse::<FlagModel>().unwrap(), FlagModel::W24);
    assert_eq!("12".parse::<FlagModel>().unwrap(), FlagModel::W12);
    assert!("W7".parse::<FlagModel>().is_err());
    assert_eq!(MBasisIndex::from_flat(FlagModel::W12, 6).label(), "j_2");
}

#[test]
fn embedded_matrices_match_display() {
    let z = AlgebraElement::zero(AlgebraTag::Complex);
    let one = unit_c('1');
    let i = unit_c('i');
    let m = mb(FlagModel::W6, '1', 1).to_matrix();
    let mut expected = KMatrix::zero(AlgebraTag::Complex);
    expected.entries[1][2] = one;
    expected.entries[2][1] = -one;
    assert_eq!(m, expected);

    let m = mb(FlagModel::W6, 'i', 2).to_matrix();
    let mut expected = KMatrix::zero(AlgebraTag::Complex);
    expected.entries[0][2] = i;
    expected.entries[2][0] = i;
    assert_eq!(m, expected);

    assert!(MVector::zero(FlagModel::W6).to_matrix().is_zero());
    assert_eq!(m.entries[1][1], z);
}

#[test]
fn q_examples() {
    let x = mb(FlagModel::W6, '1', 1).to_matrix();
    let y = mb(FlagModel::W6, 'i', 1).to_matrix();
    assert_eq!(q_matrix_formula(&x, &x), 1.0);
    assert_eq!(q_matrix_formula(&x, &y), 0.0);
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        let n = model.dim_m();
        for a in 0..n {
            for b in 0..n {
                let ia = MBasisIndex::from_flat(model, a);
                let ib = MBasisIndex::from_flat(model, b);
                let xa = MVector::basis(model, ia.slot, ia.unit);
                let xb = MVector::basis(model, ib.slot, ib.unit);
                let formula = q_matrix_formula(&xa.to_matrix(), &xb.to_matrix());
                let structural = alg
                    .q_inner(&alg.embed_m(&xa).unwrap(), &alg.embed_m(&xb).unwrap())
                    .unwrap();
                let realized = alg.q_of_matrices(alg.basis_matrix(a), alg.basis_matrix(b));
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((formula - expected).abs() < 1e-14);
                assert!((structural - expected).abs() < 1e-14);
                assert!((realized - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn bracket_examples() {
    let model = FlagModel::W6;
    let alg = FlagAlgebra::get(model);
    let x2 = alg.embed_m(&mb(model, '1', 2)).unwrap();
    let x3 = alg.embed_m(&mb(model, '1', 3)).unwrap();
    let br = alg.bracket(&x2, &x3).unwrap();
    let minus_one1 = alg.embed_m(&mb(model, '1', 1)).unwrap().scale(-1.0);
    assert!((br.coeffs - minus_one1.coeffs).amax() < 1e-14);

    let a = mb(model, '1', 1).to_matrix();
    let b = mb(model, 'i', 1).to_matrix();
    let k = a.commutator(&b);
    let i = unit_c('i');
    let expected = KMatrix::diagonal([AlgebraElement::zero(AlgebraTag::Complex), i.scale(2.0), i.scale(-2.0)]);
    assert_eq!(k, expected);

    // the same bracket through structure constants lands in h
    let g = alg
        .bracket(&alg.embed_m(&mb(model, '1', 1)).unwrap(), &alg.embed_m(&mb(model, 'i', 1)).unwrap())
        .unwrap();
    assert!(g.m_part().amax() < 1e-14);
    let (coords, residual) = alg.coordinates_of_matrix(&expected.realify());
    assert!(residual < 1e-12);
    assert!((coords.coeffs - &g.coeffs).amax() < 1e-12);
    assert!((alg.project_h(&g).unwrap().coeffs - &g.coeffs).amax() == 0.0);

    let x = random_g(model, &mut ChaCha8Rng::seed_from_u64(1));
    assert!(alg.bracket(&x, &x).unwrap().norm() < 1e-14);
}

#[test]
fn projections() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        let coords: Vec<f64> = (0..model.dim_m()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = MVector::from_coords(model, &coords).unwrap();
        assert_eq!(alg.project_m(&alg.embed_m(&v).unwrap()).unwrap(), v);
        let x = random_g(model, &mut rng);
        let back = alg.embed_m(&alg.project_m(&x).unwrap()).unwrap().add(&alg.project_h(&x).unwrap());
        assert!((back.coeffs - &x.coeffs).amax() < 1e-15);
    }
    // the torus element diag(i, -i, 0) has no m-component
    let alg = FlagAlgebra::get(FlagModel::W6);
    let i = unit_c('i');
    let t = KMatrix::diagonal([i, -i, AlgebraElement::zero(AlgebraTag::Complex)]);
    let (x, residual) = alg.coordinates_of_matrix(&t.realify());
    assert!(residual < 1e-12);
    assert!(alg.project_m(&x).unwrap().coords().amax() < 1e-14);
    assert!(MVector::from_coords(FlagModel::W6, &[0.0; 5]).is_err());
}

#[test]
fn jacobi_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        for _ in 0..100 {
            let x = random_g(model, &mut rng);
            let y = random_g(model, &mut rng);
            let z = random_g(model, &mut rng);
            let b = |u: &GVector, v: &GVector| alg.bracket(u, v).unwrap();
            let j = b(&b(&x, &y), &z).add(&b(&b(&y, &z), &x)).add(&b(&b(&z, &x), &y));
            assert!(j.coeffs.amax() <= 1e-10, "{model}: {}", j.coeffs.amax());
        }
    }
}

fn random_rational_skew(tag: AlgebraTag, rng: &mut ChaCha8Rng) -> KMatrix<Rational64> {
    let mut m = KMatrix::<Rational64>::zero(tag);
    let mut rnd = || Rational64::new(rng.random_range(-9..=9), rng.random_range(1..=7));
    for i in 0..3 {
        for j in i..3 {
            let coeffs: Vec<Rational64> = (0..tag.dim()).map(|_| rnd()).collect();
            let x = AlgebraElement::from_coeffs(tag, &coeffs).unwrap();
            if i == j {
                // purely imaginary diagonal
                m.entries[i][i] = x - x.conjugate();
            } else {
                m.entries[i][j] = x;
                m.entries[j][i] = -x.conjugate();
            }
        }
    }
    m
}

#[test]
fn jacobi_identity_exact_for_classical_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for tag in [AlgebraTag::Real, AlgebraTag::Complex, AlgebraTag::Quaternion] {
        for _ in 0..100 {
            let x = random_rational_skew(tag, &mut rng);
            let y = random_rational_skew(tag, &mut rng);
            let z = random_rational_skew(tag, &mut rng);
            let j = x.commutator(&y).commutator(&z) + y.commutator(&z).commutator(&x) + z.commutator(&x).commutator(&y);
            assert!(j.is_zero(), "{tag:?}");
        }
    }
}

#[test]
fn q_is_ad_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        for _ in 0..50 {
            let x = random_g(model, &mut rng);
            let y = random_g(model, &mut rng);
            let z = random_g(model, &mut rng);
            let lhs = alg.q_inner(&alg.bracket(&z, &x).unwrap(), &y).unwrap()
                + alg.q_inner(&x, &alg.bracket(&z, &y).unwrap()).unwrap();
            assert!(lhs.abs() <= 1e-10, "{model}: {lhs}");
        }
    }
}

#[test]
fn bracket_grading() {
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        let n = model.dim_m();
        let d = model.unit_dim();
        for a in 0..n {
            for b in 0..n {
                let (ra, rb) = (a / d, b / d);
                let row = alg.bracket_of_basis(a, b);
                for (c, v) in row.iter().enumerate().take(n) {
                    let rc = c / d;
                    // [V_r, V_r] ⊆ h and [V_{r+1}, V_{r+2}] ⊆ V_r
                    let allowed = ra != rb && rc != ra && rc != rb;
                    if !allowed {
                        assert!(v.abs() < 1e-12, "{model}: [{}, {}] has {} component", alg.label(a), alg.label(b), alg.label(c));
                    }
                }
            }
        }
    }
}

#[test]
fn h_acts_on_m() {
    for model in FlagModel::ALL {
        let alg = FlagAlgebra::get(model);
        for eta in alg.h_basis() {
            for a in 0..model.dim_m() {
                let br = alg.bracket(&eta, &alg.basis_vector(a)).unwrap();
                assert!(br.h_part().amax() < 1e-12);
            }
            let ad = alg.ad_on_m(&eta).unwrap();
            assert!((&ad + ad.transpose()).amax() < 1e-12);
        }
    }
}

#[test]
fn g2_sits_in_h_with_eighth_normalization() {
    let alg = FlagAlgebra::get(FlagModel::W24);
    for d in g2_basis().unwrap() {
        let lifted = lift_octonion_derivation(&d);
        let (x, residual) = alg.coordinates_of_matrix(&lifted);
        assert!(residual < 1e-10);
        assert!(x.m_part().amax() < 1e-12);
        // Q on g₂ is ⅛ of the trace form of the 7-dimensional representation
        let q = alg.q_of_matrices(&lifted, &lifted);
        let seven = (&d * d.transpose()).trace();
        assert!((q - seven / 8.0).abs() < 1e-12, "{q} vs {}", seven / 8.0);
    }
}

#[test]
fn f4_is_the_full_derivation_algebra() {
    assert_eq!(derivation_algebra_dimension(), 52);
}

#[test]
fn structure_csv_has_header() {
    let csv = FlagAlgebra::get(FlagModel::W6).structure_csv();
    assert!(csv.starts_with("a,b,c,value\n"));
    assert!(csv.contains("1_2,1_3,1_1,"));
}
