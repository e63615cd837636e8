//! Λ²m and Λ⁴m over the labeled basis of m, 4-forms as symmetric operators
//! on Λ²m, and the Bianchi map.
//!
//! Bivectors use the basis `e_a∧e_b` (a < b) in lexicographic order; 4-forms
//! use `e_a∧e_b∧e_c∧e_d` (a < b < c < d) in colexicographic order. Both bases
//! are orthonormal for the inner products induced by Q, and all operators
//! are matrices in that frame.

use nalgebra::{DMatrix, DVector};

/// `C(n, k)` for the small sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Index of `e_a∧e_b` (a < b) among `n` basis vectors.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// All pairs `(a, b)` with `a < b < n`, in index order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(binomial(n, 2));
    for a in 0..n {
        for b in a + 1..n {
            out.push((a, b));
        }
    }
    out
}

/// Colex rank of a strictly increasing quadruple.
pub fn quad_index(q: [usize; 4]) -> usize {
    binomial(q[0], 1) + binomial(q[1], 2) + binomial(q[2], 3) + binomial(q[3], 4)
}

/// All strictly increasing quadruples below `n`, in colex order.
pub fn quads(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(binomial(n, 4));
    for d in 0..n {
        for c in 0..d {
            for b in 0..c {
                for a in 0..b {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Sort four indices, returning the sign of the sorting permutation, or
/// `None` if two coincide.
pub fn sort4(mut q: [usize; 4]) -> Option<(f64, [usize; 4])> {
    let mut sign = 1.0;
    for i in 0..4 {
        for j in 0..3 - i {
            if q[j] == q[j + 1] {
                return None;
            }
            if q[j] > q[j + 1] {
                q.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bivector {
    pub dim: usize,
    pub coeffs: DVector<f64>,
}

impl Bivector {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: DVector::zeros(binomial(dim, 2)),
        }
    }

    /// `e_a ∧ e_b` for any `a ≠ b` (sign follows the order).
    pub fn basis(dim: usize, a: usize, b: usize) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(a, b, 1.0);
        out
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: f64) {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.coeffs[pair_index(self.dim, a, b)] += c,
            std::cmp::Ordering::Greater => self.coeffs[pair_index(self.dim, b, a)] -= c,
            std::cmp::Ordering::Equal => {}
        }
    }

    /// `x ∧ y` for coordinate vectors of m.
    pub fn wedge(x: &DVector<f64>, y: &DVector<f64>) -> Self {
        let n = x.len();
        let mut out = Self::zero(n);
        for (k, (a, b)) in pairs(n).into_iter().enumerate() {
            out.coeffs[k] = x[a] * y[b] - x[b] * y[a];
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            coeffs: &self.coeffs * c,
        }
    }

    pub fn add(&self, other: &Bivector) -> Self {
        Self {
            dim: self.dim,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    pub fn dot(&self, other: &Bivector) -> f64 {
        self.coeffs.dot(&other.coeffs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourForm {
    pub dim: usize,
    pub coeffs: DVector<f64>,
}

impl FourForm {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: DVector::zeros(binomial(dim, 4)),
        }
    }

    /// Add `c · e_a∧e_b∧e_c∧e_d` for arbitrary (possibly unsorted) indices.
    pub fn add_term(&mut self, q: [usize; 4], c: f64) {
        if let Some((sign, sorted)) = sort4(q) {
            self.coeffs[quad_index(sorted)] += sign * c;
        }
    }

    /// `ω(e_a, e_b, e_c, e_d)` for arbitrary indices.
    pub fn value(&self, q: [usize; 4]) -> f64 {
        match sort4(q) {
            Some((sign, sorted)) => sign * self.coeffs[quad_index(sorted)],
            None => 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.amax()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            coeffs: &self.coeffs * c,
        }
    }

    pub fn add(&self, other: &FourForm) -> Self {
        Self {
            dim: self.dim,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    /// Nonzero terms as `(sorted quadruple, coefficient)`.
    pub fn terms(&self) -> Vec<([usize; 4], f64)> {
        quads(self.dim)
            .into_iter()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| **c != 0.0)
            .map(|(q, c)| (q, *c))
            .collect()
    }
}

/// `β₁ ∧ β₂`.
pub fn wedge22(b1: &Bivector, b2: &Bivector) -> FourForm {
    let n = b1.dim;
    let mut out = FourForm::zero(n);
    let ps = pairs(n);
    for (i, &(a, b)) in ps.iter().enumerate() {
        let x = b1.coeffs[i];
        if x == 0.0 {
            continue;
        }
        for (j, &(c, d)) in ps.iter().enumerate() {
            let y = b2.coeffs[j];
            if y != 0.0 {
                out.add_term([a, b, c, d], x * y);
            }
        }
    }
    out
}

/// Symmetric operator on Λ²m, as a matrix in the `e_a∧e_b` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOp {
    pub dim: usize,
    pub matrix: DMatrix<f64>,
}

impl SymOp {
    pub fn zero(dim: usize) -> Self {
        let n2 = binomial(dim, 2);
        Self {
            dim,
            matrix: DMatrix::zeros(n2, n2),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let n2 = binomial(dim, 2);
        Self {
            dim,
            matrix: DMatrix::identity(n2, n2),
        }
    }

    /// `⟨S(e_a∧e_b), e_c∧e_d⟩` for arbitrary indices.
    pub fn entry(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        if a == b || c == d {
            return 0.0;
        }
        let (s1, i) = if a < b {
            (1.0, pair_index(self.dim, a, b))
        } else {
            (-1.0, pair_index(self.dim, b, a))
        };
        let (s2, j) = if c < d {
            (1.0, pair_index(self.dim, c, d))
        } else {
            (-1.0, pair_index(self.dim, d, c))
        };
        s1 * s2 * self.matrix[(i, j)]
    }

    pub fn quadratic(&self, v: &Bivector) -> f64 {
        v.coeffs.dot(&(&self.matrix * &v.coeffs))
    }

    pub fn pairing(&self, v: &Bivector, w: &Bivector) -> f64 {
        w.coeffs.dot(&(&self.matrix * &v.coeffs))
    }

    pub fn add(&self, other: &SymOp) -> SymOp {
        SymOp {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// Entries `(row, col, value)` as CSV with a header row.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let ps = pairs(self.dim);
        let name = |k: usize| format!("{}^{}", labels[ps[k].0], labels[ps[k].1]);
        let mut out = String::from("row,col,value\n");
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                let v = self.matrix[(i, j)];
                if v != 0.0 {
                    out.push_str(&format!("{},{},{:.17e}\n", name(i), name(j), v));
                }
            }
        }
        out
    }
}

/// The operator `⟨ω(X∧Y), Z∧W⟩ = ω(X, Y, Z, W)`.
pub fn form_as_operator(omega: &FourForm) -> SymOp {
    let n = omega.dim;
    let mut op = SymOp::zero(n);
    for (q, c) in omega.terms() {
        let [a, b, cc, d] = q;
        // the three ways to split {a<b<c<d} into two pairs, with signs
        for (p1, p2, sign) in [((a, b), (cc, d), 1.0), ((a, cc), (b, d), -1.0), ((a, d), (b, cc), 1.0)] {
            let i = pair_index(n, p1.0, p1.1);
            let j = pair_index(n, p2.0, p2.1);
            op.matrix[(i, j)] += sign * c;
            op.matrix[(j, i)] += sign * c;
        }
    }
    op
}

/// The Bianchi map
/// `b(S)(X,Y,Z,W) = ⅓(⟨S(X∧Y),Z∧W⟩ + ⟨S(Y∧Z),X∧W⟩ + ⟨S(Z∧X),Y∧W⟩)`.
pub fn bianchi(s: &SymOp) -> FourForm {
    let n = s.dim;
    let mut out = FourForm::zero(n);
    for (k, [a, b, c, d]) in quads(n).into_iter().enumerate() {
        out.coeffs[k] = (s.entry(a, b, c, d) + s.entry(b, c, a, d) + s.entry(c, a, b, d)) / 3.0;
    }
    out
}

/// Derivation action of a linear map `A` of m (columns are images of basis
/// vectors) on Λ²m: `e_a∧e_b ↦ Ae_a∧e_b + e_a∧Ae_b`.
pub fn derivation_on_bivectors(a_map: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a_map.nrows();
    let n2 = binomial(n, 2);
    let mut out = DMatrix::zeros(n2, n2);
    for (col, (a, b)) in pairs(n).into_iter().enumerate() {
        let mut img = Bivector::zero(n);
        for k in 0..n {
            let ka = a_map[(k, a)];
            if ka != 0.0 {
                img.add_term(k, b, ka);
            }
            let kb = a_map[(k, b)];
            if kb != 0.0 {
                img.add_term(a, k, kb);
            }
        }
        out.set_column(col, &img.coeffs);
    }
    out
}

/// `Σᵢ ω(…, A Xᵢ, …)` on every basis quadruple; vanishes iff ω is invariant
/// under the one-parameter group generated by `A`.
pub fn derivation_on_form(a_map: &DMatrix<f64>, omega: &FourForm) -> FourForm {
    let n = omega.dim;
    let mut out = FourForm::zero(n);
    let nonzero: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|col| {
            (0..n)
                .filter(|&k| a_map[(k, col)] != 0.0)
                .map(|k| (k, a_map[(k, col)]))
                .collect()
        })
        .collect();
    for (idx, q) in quads(n).into_iter().enumerate() {
        let mut acc = 0.0;
        for slot in 0..4 {
            for &(k, v) in &nonzero[q[slot]] {
                let mut r = q;
                r[slot] = k;
                acc += v * omega.value(r);
            }
        }
        out.coeffs[idx] = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dimension_audit() {
        assert_eq!(binomial(3, 2), 3);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(12, 2), 66);
        assert_eq!(binomial(24, 2), 276);
        assert_eq!(quads(24).len(), binomial(24, 4));
        for (k, q) in quads(9).into_iter().enumerate() {
            assert_eq!(quad_index(q), k);
        }
        for (k, (a, b)) in pairs(9).into_iter().enumerate() {
            assert_eq!(pair_index(9, a, b), k);
        }
    }

    #[test]
    fn wedge_basics() {
        let e = |i: usize| DVector::from_fn(6, |k, _| if k == i { 1.0 } else { 0.0 });
        assert_eq!(Bivector::wedge(&e(2), &e(2)).norm(), 0.0);
        let b = Bivector::wedge(&e(0), &e(1));
        assert_eq!(b, Bivector::basis(6, 0, 1));
        let f = wedge22(&Bivector::basis(6, 0, 1), &Bivector::basis(6, 2, 3));
        assert_eq!(f.value([0, 1, 2, 3]), 1.0);
        assert_eq!(f.norm(), 1.0);
    }

    #[test]
    fn unit_form_as_operator_signs() {
        let mut w = FourForm::zero(4);
        w.add_term([0, 1, 2, 3], 1.0);
        let op = form_as_operator(&w);
        assert_eq!(op.entry(0, 1, 2, 3), 1.0);
        assert_eq!(op.entry(0, 2, 1, 3), -1.0);
        assert_eq!(op.entry(0, 3, 1, 2), 1.0);
        assert_eq!(op.asymmetry(), 0.0);
        assert_eq!(form_as_operator(&FourForm::zero(6)).matrix.amax(), 0.0);
    }

    #[test]
    fn bianchi_of_identity_vanishes() {
        for n in [3, 6, 12] {
            assert!(bianchi(&SymOp::identity(n)).max_abs() < 1e-15);
        }
    }

    fn random_form(n: usize) -> impl Strategy<Value = FourForm> {
        proptest::collection::vec(-4i32..=4, binomial(n, 4)).prop_map(move |v| FourForm {
            dim: n,
            coeffs: DVector::from_iterator(v.len(), v.into_iter().map(f64::from)),
        })
    }

    fn random_symop(n: usize) -> impl Strategy<Value = SymOp> {
        let n2 = binomial(n, 2);
        proptest::collection::vec(-1.0f64..1.0, n2 * n2).prop_map(move |v| {
            let m = DMatrix::from_vec(n2, n2, v);
            SymOp {
                dim: n,
                matrix: &m + m.transpose(),
            }
        })
    }

    fn random_vec(n: usize) -> impl Strategy<Value = DVector<f64>> {
        proptest::collection::vec(-1.0f64..1.0, n).prop_map(DVector::from_vec)
    }

    proptest! {
        #[test]
        fn bianchi_inverts_form_as_operator(w in random_form(6)) {
            // integer coefficients: exact in floating point
            prop_assert_eq!(bianchi(&form_as_operator(&w)), w);
        }

        #[test]
        fn forms_vanish_on_decomposable_bivectors(w in random_form(6), x in random_vec(6), y in random_vec(6)) {
            let xy = Bivector::wedge(&x, &y);
            prop_assert!(form_as_operator(&w).quadratic(&xy).abs() < 1e-12);
        }

        #[test]
        fn bianchi_gives_orthogonal_decomposition(s in random_symop(6)) {
            let w = form_as_operator(&bianchi(&s));
            let rest = SymOp { dim: 6, matrix: &s.matrix - &w.matrix };
            prop_assert!(bianchi(&rest).max_abs() < 1e-12);
            // Frobenius-orthogonal to Λ⁴
            prop_assert!(rest.matrix.dot(&w.matrix).abs() < 1e-10);
        }
    }
}
