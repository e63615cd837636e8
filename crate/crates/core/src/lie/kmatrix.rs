//! 3×3 matrices over R, C, H or O.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::division::{unit_product, AlgebraElement, AlgebraTag, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMatrix<T: Scalar = f64> {
    pub tag: AlgebraTag,
    pub entries: [[AlgebraElement<T>; 3]; 3],
}

impl<T: Scalar> KMatrix<T> {
    pub fn zero(tag: AlgebraTag) -> Self {
        Self {
            tag,
            entries: [[AlgebraElement::zero(tag); 3]; 3],
        }
    }

    /// The skew-Hermitian matrix with zero diagonal parametrizing
    /// `V_1 ⊕ V_2 ⊕ V_3`:
    ///
    /// ```text
    /// (  0      x3   -x2* )
    /// ( -x3*    0     x1  )
    /// (  x2   -x1*    0   )
    /// ```
    pub fn from_triple(x: &[AlgebraElement<T>; 3]) -> Self {
        let tag = x[0].tag();
        let mut m = Self::zero(tag);
        m.entries[0][1] = x[2];
        m.entries[0][2] = -x[1].conjugate();
        m.entries[1][0] = -x[2].conjugate();
        m.entries[1][2] = x[0];
        m.entries[2][0] = x[1];
        m.entries[2][1] = -x[0].conjugate();
        m
    }

    pub fn diagonal(d: [AlgebraElement<T>; 3]) -> Self {
        let mut m = Self::zero(d[0].tag());
        for (i, v) in d.into_iter().enumerate() {
            m.entries[i][i] = v;
        }
        m
    }

    pub fn conjugate_transpose(&self) -> Self {
        let mut m = Self::zero(self.tag);
        for i in 0..3 {
            for j in 0..3 {
                m.entries[i][j] = self.entries[j][i].conjugate();
            }
        }
        m
    }

    pub fn trace(&self) -> AlgebraElement<T> {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `Re tr(X Y*)`, the sum of products of all real coefficients.
    pub fn re_trace_pairing(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                for (a, b) in self.entries[i][j]
                    .coeffs()
                    .iter()
                    .zip(other.entries[i][j].coeffs())
                {
                    acc = acc + *a * *b;
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }
}

impl KMatrix<f64> {
    /// Real `3d × 3d` matrix of left multiplication on `K³`. This is a Lie
    /// algebra homomorphism only for associative `K`.
    pub fn realify(&self) -> DMatrix<f64> {
        let d = self.tag.dim();
        let mut out = DMatrix::zeros(3 * d, 3 * d);
        for i in 0..3 {
            for j in 0..3 {
                let x = &self.entries[i][j];
                for a in 0..d {
                    let xa = x.coeff(a);
                    if xa == 0.0 {
                        continue;
                    }
                    for b in 0..d {
                        let (sign, c) = unit_product(a, b);
                        out[(i * d + c, j * d + b)] += sign as f64 * xa;
                    }
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for KMatrix<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.entries[i][j] = self.entries[i][j] + rhs.entries[i][j];
            }
        }
        self
    }
}

impl<T: Scalar> Sub for KMatrix<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for KMatrix<T> {
    type Output = Self;

    fn neg(mut self) -> Self {
        for row in self.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = -*e;
            }
        }
        self
    }
}

impl<T: Scalar> Mul for KMatrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero(self.tag);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = AlgebraElement::zero(self.tag);
                for k in 0..3 {
                    acc = acc + self.entries[i][k] * rhs.entries[k][j];
                }
                m.entries[i][j] = acc;
            }
        }
        m
    }
}
