//! Exact linear algebra over the rationals.
//!
//! Routines are generic over [`Field`]. [`SmallRational`] performs checked
//! `i64` fraction arithmetic and reports overflow as `None`; callers retry
//! with `BigRational`, which never overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::Matrix;

pub trait Field: Clone + PartialEq + Debug + Zero + One {
    fn from_i64(x: i64) -> Self;
    fn add_f(&self, o: &Self) -> Option<Self>;
    fn sub_f(&self, o: &Self) -> Option<Self>;
    fn mul_f(&self, o: &Self) -> Option<Self>;
    /// `None` on overflow; division by zero is a bug and panics.
    fn div_f(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigRational;
}

/// A reduced fraction `num / den` with `den > 0`, both fitting in `i64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallRational {
    num: i64,
    den: i64,
}

impl SmallRational {
    fn reduce(num: i128, den: i128) -> Option<Self> {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Some(SmallRational {
            num: i64::try_from(n).ok()?,
            den: i64::try_from(d).ok()?,
        })
    }
}

impl std::ops::Add for SmallRational {
    type Output = SmallRational;
    fn add(self, o: Self) -> Self {
        self.add_f(&o).expect("small rational overflow")
    }
}

impl std::ops::Mul for SmallRational {
    type Output = SmallRational;
    fn mul(self, o: Self) -> Self {
        self.mul_f(&o).expect("small rational overflow")
    }
}

impl Zero for SmallRational {
    fn zero() -> Self {
        SmallRational { num: 0, den: 1 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl One for SmallRational {
    fn one() -> Self {
        SmallRational { num: 1, den: 1 }
    }
}

impl Field for SmallRational {
    fn from_i64(x: i64) -> Self {
        SmallRational { num: x, den: 1 }
    }
    fn add_f(&self, o: &Self) -> Option<Self> {
        if self.den == o.den {
            return Self::reduce(self.num as i128 + o.num as i128, self.den as i128);
        }
        let n = self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128;
        Self::reduce(n, self.den as i128 * o.den as i128)
    }
    fn sub_f(&self, o: &Self) -> Option<Self> {
        self.add_f(&SmallRational {
            num: o.num.checked_neg()?,
            den: o.den,
        })
    }
    fn mul_f(&self, o: &Self) -> Option<Self> {
        Self::reduce(self.num as i128 * o.num as i128, self.den as i128 * o.den as i128)
    }
    fn div_f(&self, o: &Self) -> Option<Self> {
        assert!(o.num != 0, "division by zero");
        Self::reduce(self.num as i128 * o.den as i128, self.den as i128 * o.num as i128)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Field for BigRational {
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn add_f(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_f(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_f(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_f(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

pub fn from_int<F: Field>(m: &Matrix<i64>) -> Matrix<F> {
    m.map(|&x| F::from_i64(x))
}

/// Reduced row echelon form. Returns the reduced matrix, the pivot columns
/// and the accumulated row operations `R` with `R * m = rref`.
pub fn rref<F: Field>(m: &Matrix<F>) -> Option<(Matrix<F>, Vec<usize>, Matrix<F>)> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut r = Matrix::<F>::identity(rows);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        r.swap_rows(row, p);
        let inv = F::one().div_f(&a[(row, col)])?;
        scale_row(&mut a, row, &inv)?;
        scale_row(&mut r, row, &inv)?;
        for i in 0..rows {
            if i != row && !a[(i, col)].is_zero() {
                let factor = a[(i, col)].clone();
                axpy_row(&mut a, i, row, &factor)?;
                axpy_row(&mut r, i, row, &factor)?;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Some((a, pivots, r))
}

fn scale_row<F: Field>(m: &mut Matrix<F>, row: usize, s: &F) -> Option<()> {
    for c in 0..m.cols() {
        if !m[(row, c)].is_zero() {
            m[(row, c)] = m[(row, c)].mul_f(s)?;
        }
    }
    Some(())
}

/// row_i -= factor * row_src
fn axpy_row<F: Field>(m: &mut Matrix<F>, i: usize, src: usize, factor: &F) -> Option<()> {
    for c in 0..m.cols() {
        if !m[(src, c)].is_zero() {
            let delta = factor.mul_f(&m[(src, c)])?;
            m[(i, c)] = m[(i, c)].sub_f(&delta)?;
        }
    }
    Some(())
}

pub fn rank<F: Field>(m: &Matrix<F>) -> Option<usize> {
    Some(rref(m)?.1.len())
}

/// Kernel basis from the free columns of the RREF, one column per vector.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Option<Vec<Vec<F>>> {
    let cols = m.cols();
    let (a, pivots, _) = rref(m)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &p) in pivots.iter().enumerate() {
            if !a[(row, free)].is_zero() {
                v[p] = F::zero().sub_f(&a[(row, free)])?;
            }
        }
        basis.push(v);
    }
    Some(basis)
}

pub fn mat_vec<F: Field>(m: &Matrix<F>, v: &[F]) -> Option<Vec<F>> {
    assert_eq!(m.cols(), v.len());
    let mut out = vec![F::zero(); m.rows()];
    for (r, o) in out.iter_mut().enumerate() {
        for (c, x) in v.iter().enumerate() {
            if !x.is_zero() && !m[(r, c)].is_zero() {
                *o = o.add_f(&m[(r, c)].mul_f(x)?)?;
            }
        }
    }
    Some(out)
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Option<Matrix<F>> {
    assert_eq!(a.cols(), b.rows());
    let mut out = Matrix::<F>::zeros(a.rows(), b.cols());
    for r in 0..a.rows() {
        for k in 0..a.cols() {
            if a[(r, k)].is_zero() {
                continue;
            }
            for c in 0..b.cols() {
                if !b[(k, c)].is_zero() {
                    let prod = a[(r, k)].mul_f(&b[(k, c)])?;
                    out[(r, c)] = out[(r, c)].add_f(&prod)?;
                }
            }
        }
    }
    Some(out)
}

/// Inverse of a square matrix; `Some(None)` when singular.
pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Option<Matrix<F>>> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let (_, pivots, r) = rref(m)?;
    Some((pivots.len() == m.rows()).then_some(r))
}

pub fn trace<F: Field>(m: &Matrix<F>) -> Option<F> {
    let mut t = F::zero();
    for i in 0..m.rows().min(m.cols()) {
        t = t.add_f(&m[(i, i)])?;
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> SmallRational {
        SmallRational::from_i64(x)
    }

    #[test]
    fn small_rational_arithmetic() {
        let half = q(1).div_f(&q(2)).unwrap();
        let third = q(1).div_f(&q(3)).unwrap();
        let s = half.add_f(&third).unwrap();
        assert_eq!(s.to_big(), BigRational::new(5.into(), 6.into()));
        assert_eq!(q(i64::MAX).add_f(&q(1)), None);
        assert_eq!(q(i64::MAX).mul_f(&q(2)), None);
        assert_eq!(q(-3).div_f(&q(-6)).unwrap(), half);
    }

    #[test]
    fn rank_and_kernel() {
        let m: Matrix<SmallRational> = from_int(&Matrix::from_rows(vec![
            vec![1, 2, 3],
            vec![2, 4, 6],
            vec![1, 0, 1],
        ]));
        assert_eq!(rank(&m), Some(2));
        let k = kernel(&m).unwrap();
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let m: Matrix<BigRational> = from_int(&Matrix::from_rows(vec![vec![2, 1], vec![1, 1]]));
        let inv = inverse(&m).unwrap().unwrap();
        assert_eq!(mat_mul(&m, &inv).unwrap(), Matrix::identity(2));
        let s: Matrix<BigRational> = from_int(&Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]));
        assert_eq!(inverse(&s).unwrap(), None);
    }

    #[test]
    fn rref_tracks_row_operations() {
        let m: Matrix<BigRational> = from_int(&Matrix::from_rows(vec![
            vec![0, 2, 4],
            vec![1, 1, 1],
            vec![1, 3, 5],
        ]));
        let (a, pivots, r) = rref(&m).unwrap();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(mat_mul(&r, &m).unwrap(), a);
    }
}
