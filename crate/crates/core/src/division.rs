//! The four real normed division algebras R, C, H, O over their standard bases.
//!
//! Elements are coefficient vectors over the units `{1, i, j, k, l, m, n, o}`
//! truncated to the algebra dimension. The product is Cayley–Dickson doubling
//! with the convention
//!
//! ```text
//! (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))
//! ```
//!
//! so that `l = (0, 1)`, `m = (0, i)`, `n = (0, j)`, `o = (0, k)` in O = H ⊕ H.
//! Since every algebra is a doubling of the previous one, the first 1/2/4
//! coefficients embed R ⊂ C ⊂ H ⊂ O as subalgebras.
//!
//! Resulting unit table for O (row times column):
//!
//! ```text
//!      |  i    j    k    l    m    n    o
//!   ---+-----------------------------------
//!    i | -1    k   -j    m   -l   -o    n
//!    j | -k   -1    i    n    o   -l   -m
//!    k |  j   -i   -1    o   -n    m   -l
//!    l | -m   -n   -o   -1    i    j    k
//!    m |  l   -o    n   -i   -1   -k    j
//!    n |  o    l   -m   -j    k   -1   -i
//!    o | -n    m    l   -k   -j    i   -1
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FlagError, Result};

/// Coefficient field for algebra elements: `f64` for numerics, `Rational64`
/// for exact checks.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i8(v: i8) -> Self;
}

impl Scalar for f64 {
    fn from_i8(v: i8) -> Self {
        v as f64
    }
}

impl Scalar for Rational64 {
    fn from_i8(v: i8) -> Self {
        Rational64::from_integer(v as i64)
    }
}

/// Symbols of the standard units, in basis order.
pub const UNIT_SYMBOLS: [char; 8] = ['1', 'i', 'j', 'k', 'l', 'm', 'n', 'o'];

/// Index of a unit symbol (`'1'`, `'i'`, ..., `'o'`; upper case accepted).
pub fn unit_index(symbol: char) -> Option<usize> {
    let lower = symbol.to_ascii_lowercase();
    UNIT_SYMBOLS.iter().position(|&c| c == lower)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraTag {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl AlgebraTag {
    pub const fn dim(self) -> usize {
        match self {
            AlgebraTag::Real => 1,
            AlgebraTag::Complex => 2,
            AlgebraTag::Quaternion => 4,
            AlgebraTag::Octonion => 8,
        }
    }

    pub fn from_dim(dim: usize) -> Option<Self> {
        match dim {
            1 => Some(AlgebraTag::Real),
            2 => Some(AlgebraTag::Complex),
            4 => Some(AlgebraTag::Quaternion),
            8 => Some(AlgebraTag::Octonion),
            _ => None,
        }
    }

    pub fn is_associative(self) -> bool {
        self != AlgebraTag::Octonion
    }
}

/// Product of two units `e_a e_b = sign * e_c`, valid in every algebra that
/// contains both units.
pub fn unit_product(a: usize, b: usize) -> (i8, usize) {
    unit_table()[a][b]
}

fn unit_table() -> &'static [[(i8, usize); 8]; 8] {
    static TABLE: OnceLock<[[(i8, usize); 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[(0i8, 0usize); 8]; 8];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let mut x = [0i64; 8];
                let mut y = [0i64; 8];
                x[a] = 1;
                y[b] = 1;
                let z = cayley_dickson(&x, &y);
                let (c, v) = z
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0)
                    .expect("product of units is a unit");
                *slot = (*v as i8, c);
            }
        }
        table
    })
}

/// Recursive doubling product on integer coefficient slices of length 2^k.
fn cayley_dickson(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[i64]| -> Vec<i64> {
        v.iter()
            .enumerate()
            .map(|(i, &t)| if i == 0 { t } else { -t })
            .collect()
    };
    let ac = cayley_dickson(a, c);
    let db = cayley_dickson(&conj(d), b);
    let da = cayley_dickson(d, a);
    let bc = cayley_dickson(b, &conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&db).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

/// An element of R, C, H or O.
#[derive(Clone, Copy, PartialEq)]
pub struct AlgebraElement<T: Scalar = f64> {
    tag: AlgebraTag,
    coeffs: [T; 8],
}

impl<T: Scalar> fmt::Debug for AlgebraElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.tag, self.coeffs())
    }
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn zero(tag: AlgebraTag) -> Self {
        Self {
            tag,
            coeffs: [T::zero(); 8],
        }
    }

    pub fn one(tag: AlgebraTag) -> Self {
        Self::unit(tag, 0)
    }

    /// The basis unit with index `index` (0 is the identity).
    ///
    /// Panics if `index` is not below the algebra dimension.
    pub fn unit(tag: AlgebraTag, index: usize) -> Self {
        assert!(index < tag.dim(), "unit {index} not in {tag:?}");
        let mut out = Self::zero(tag);
        out.coeffs[index] = T::one();
        out
    }

    pub fn from_coeffs(tag: AlgebraTag, coeffs: &[T]) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(FlagError::Dimension {
                what: "algebra coefficients",
                expected: tag.dim(),
                got: coeffs.len(),
            });
        }
        let mut out = Self::zero(tag);
        out.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(out)
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs[..self.tag.dim()]
    }

    pub fn coeff(&self, index: usize) -> T {
        self.coeffs[index]
    }

    /// Reinterpret in a larger algebra through the subalgebra chain.
    pub fn embed(&self, tag: AlgebraTag) -> Result<Self> {
        if tag.dim() < self.tag.dim() {
            return Err(FlagError::TagMismatch {
                left: self.tag,
                right: tag,
            });
        }
        Ok(Self {
            tag,
            coeffs: self.coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.tag != other.tag {
            return Err(FlagError::TagMismatch {
                left: self.tag,
                right: other.tag,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let dim = self.tag.dim();
        let mut out = Self::zero(self.tag);
        for a in 0..dim {
            let xa = self.coeffs[a];
            if xa == T::zero() {
                continue;
            }
            for b in 0..dim {
                let yb = other.coeffs[b];
                if yb == T::zero() {
                    continue;
                }
                let (sign, c) = unit_product(a, b);
                let term = xa * yb;
                out.coeffs[c] = if sign > 0 {
                    out.coeffs[c] + term
                } else {
                    out.coeffs[c] - term
                };
            }
        }
        out
    }

    pub fn conjugate(&self) -> Self {
        let mut out = *self;
        for c in out.coeffs[1..].iter_mut() {
            *c = -*c;
        }
        out
    }

    pub fn re(&self) -> T {
        self.coeffs[0]
    }

    pub fn norm2(&self) -> T {
        self.coeffs()
            .iter()
            .fold(T::zero(), |acc, &c| acc + c * c)
    }

    pub fn scale(&self, factor: T) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c = *c * factor;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == T::zero())
    }
}

/// `(x y) z - x (y z)`.
pub fn associator<T: Scalar>(
    x: &AlgebraElement<T>,
    y: &AlgebraElement<T>,
    z: &AlgebraElement<T>,
) -> Result<AlgebraElement<T>> {
    Ok(x.try_mul(y)?.try_mul(z)? - x.try_mul(&y.try_mul(z)?)?)
}

impl<T: Scalar> Add for AlgebraElement<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "adding elements of different algebras");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a = *a + b;
        }
        self
    }
}

impl<T: Scalar> Sub for AlgebraElement<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for AlgebraElement<T> {
    type Output = Self;

    fn neg(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

/// Panics on a tag mismatch; use [`AlgebraElement::try_mul`] for the
/// checked version.
impl<T: Scalar> Mul for AlgebraElement<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("multiplying elements of different algebras")
    }
}
