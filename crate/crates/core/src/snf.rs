//! Smith normal form over the integers.
//!
//! The elimination always takes the nonzero entry of smallest absolute value
//! as pivot and clears its row and column by Euclidean steps. Whenever a
//! remaining entry is not divisible by the pivot, that row is added to the
//! pivot row, which forces a strictly smaller pivot on the next pass. The
//! resulting diagonal satisfies `d_1 | d_2 | ...`.
//!
//! The same routine runs on checked `i64` arithmetic first and is repeated
//! on `BigInt` only if an intermediate value overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::Matrix;

pub(crate) trait SnfScalar: Clone + Zero + One {
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn negative(&self) -> bool;
    /// Truncated quotient, `None` on overflow.
    fn quot(&self, d: &Self) -> Option<Self>;
    fn divides(&self, n: &Self) -> bool;
    /// `self - q * x`, `None` on overflow.
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn add_checked(&self, x: &Self) -> Option<Self>;
    fn neg_checked(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl SnfScalar for i64 {
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn negative(&self) -> bool {
        *self < 0
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn divides(&self, n: &Self) -> bool {
        n.checked_rem(*self) == Some(0)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn add_checked(&self, x: &Self) -> Option<Self> {
        self.checked_add(*x)
    }
    fn neg_checked(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfScalar for BigInt {
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn negative(&self) -> bool {
        self.is_negative()
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn divides(&self, n: &Self) -> bool {
        n.is_multiple_of(self)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn add_checked(&self, x: &Self) -> Option<Self> {
        Some(self + x)
    }
    fn neg_checked(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Elimination<T> {
    a: Matrix<T>,
    u: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
}

type Reduced<T> = (Matrix<T>, Option<Matrix<T>>, Option<Matrix<T>>);

impl<T: SnfScalar> Elimination<T> {
    fn new(a: Matrix<T>, track: bool) -> Self {
        let (m, n) = a.shape();
        Elimination {
            u: track.then(|| Matrix::identity(m)),
            v: track.then(|| Matrix::identity(n)),
            a,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Option<()> {
        fn apply<T: SnfScalar>(m: &mut Matrix<T>, i: usize, t: usize, q: &T) -> Option<()> {
            for c in 0..m.cols() {
                let x = m[(t, c)].clone();
                if !x.is_zero() {
                    m[(i, c)] = m[(i, c)].sub_mul(q, &x)?;
                }
            }
            Some(())
        }
        apply(&mut self.a, i, t, q)?;
        if let Some(u) = &mut self.u {
            apply(u, i, t, q)?;
        }
        Some(())
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Option<()> {
        fn apply<T: SnfScalar>(m: &mut Matrix<T>, j: usize, t: usize, q: &T) -> Option<()> {
            for r in 0..m.rows() {
                let x = m[(r, t)].clone();
                if !x.is_zero() {
                    m[(r, j)] = m[(r, j)].sub_mul(q, &x)?;
                }
            }
            Some(())
        }
        apply(&mut self.a, j, t, q)?;
        if let Some(v) = &mut self.v {
            apply(v, j, t, q)?;
        }
        Some(())
    }

    /// row_t += row_i
    fn row_add(&mut self, t: usize, i: usize) -> Option<()> {
        fn apply<T: SnfScalar>(m: &mut Matrix<T>, t: usize, i: usize) -> Option<()> {
            for c in 0..m.cols() {
                m[(t, c)] = m[(t, c)].add_checked(&m[(i, c)])?;
            }
            Some(())
        }
        apply(&mut self.a, t, i)?;
        if let Some(u) = &mut self.u {
            apply(u, t, i)?;
        }
        Some(())
    }

    fn negate_row(&mut self, t: usize) -> Option<()> {
        fn apply<T: SnfScalar>(m: &mut Matrix<T>, t: usize) -> Option<()> {
            for c in 0..m.cols() {
                m[(t, c)] = m[(t, c)].neg_checked()?;
            }
            Some(())
        }
        apply(&mut self.a, t)?;
        if let Some(u) = &mut self.u {
            apply(u, t)?;
        }
        Some(())
    }

    fn smallest_in(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (r, c) in cells {
            let x = &self.a[(r, c)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some(b) if x.abs_cmp(&self.a[b]) != Ordering::Less => {}
                _ => best = Some((r, c)),
            }
        }
        best
    }

    /// `(D, U, V)`; `None` on overflow.
    fn run(mut self) -> Option<Reduced<T>> {
        let (m, n) = self.a.shape();
        for t in 0..m.min(n) {
            let Some((r, c)) = self.smallest_in((t..m).flat_map(|r| (t..n).map(move |c| (r, c)))) else {
                break;
            };
            self.swap_rows(t, r);
            self.swap_cols(t, c);
            loop {
                let pivot = self.a[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..m {
                    if !self.a[(i, t)].is_zero() {
                        let q = self.a[(i, t)].quot(&pivot)?;
                        self.row_sub(i, t, &q)?;
                        clean &= self.a[(i, t)].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.a[(t, j)].is_zero() {
                        let q = self.a[(t, j)].quot(&pivot)?;
                        self.col_sub(j, t, &q)?;
                        clean &= self.a[(t, j)].is_zero();
                    }
                }
                if !clean {
                    // A remainder smaller than the pivot survived in row or column t.
                    let cells = (t..m).map(|r| (r, t)).chain((t + 1..n).map(|c| (t, c)));
                    let (r, c) = self.smallest_in(cells).expect("pivot is nonzero");
                    self.swap_rows(t, r);
                    self.swap_cols(t, c);
                    continue;
                }
                let offender = (t + 1..m)
                    .flat_map(|r| (t + 1..n).map(move |c| (r, c)))
                    .find(|&cell| !pivot.divides(&self.a[cell]));
                match offender {
                    Some((i, _)) => self.row_add(t, i)?,
                    None => break,
                }
            }
            if self.a[(t, t)].negative() {
                self.negate_row(t)?;
            }
        }
        Some((self.a, self.u, self.v))
    }
}

/// `D = U * M * V` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub u: Matrix<BigInt>,
    pub d: Matrix<BigInt>,
    pub v: Matrix<BigInt>,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn fits_i64(m: &Matrix<BigInt>) -> Option<Matrix<i64>> {
    let rows = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(ToPrimitive::to_i64)
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    if m.rows() == 0 {
        return Some(Matrix::zeros(0, m.cols()));
    }
    Some(Matrix::from_rows(rows))
}

pub fn smith_normal_form(m: &Matrix<BigInt>) -> SmithNormalForm {
    if let Some(small) = fits_i64(m) {
        if let Some((d, Some(u), Some(v))) = Elimination::new(small, true).run() {
            let big = |x: &i64| x.to_big();
            return SmithNormalForm {
                u: u.map(big),
                d: d.map(big),
                v: v.map(big),
            };
        }
    }
    let (d, u, v) = Elimination::new(m.clone(), true)
        .run()
        .expect("big integer elimination cannot overflow");
    SmithNormalForm {
        u: u.expect("tracked"),
        d,
        v: v.expect("tracked"),
    }
}

/// Invariant factors of an integer matrix without the transforms.
pub fn invariant_factors(m: &Matrix<i64>) -> Vec<BigInt> {
    let diag = |d: &Matrix<BigInt>| -> Vec<BigInt> {
        (0..d.rows().min(d.cols()))
            .map(|i| d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    };
    match Elimination::new(m.clone(), false).run() {
        Some((d, _, _)) => diag(&d.map(|x| x.to_big())),
        None => {
            let (d, _, _) = Elimination::new(m.to_bigint(), false)
                .run()
                .expect("big integer elimination cannot overflow");
            diag(&d)
        }
    }
}

pub fn rank(m: &Matrix<i64>) -> usize {
    invariant_factors(m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows).to_bigint()
    }

    fn factors(rows: Vec<Vec<i64>>) -> Vec<i64> {
        smith_normal_form(&big(rows))
            .invariant_factors()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&big(vec![vec![0, 0], vec![0, 0]]));
        assert!(s.d.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn empty_matrix() {
        let s = smith_normal_form(&Matrix::zeros(0, 3));
        assert_eq!(s.d.shape(), (0, 3));
        assert_eq!(s.v.shape(), (3, 3));
        assert!(s.invariant_factors().is_empty());
    }

    #[test]
    fn diag_two_three() {
        assert_eq!(factors(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn divisibility_is_enforced() {
        assert_eq!(factors(vec![vec![4, 0], vec![0, 6]]), vec![2, 12]);
        assert_eq!(
            factors(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn transforms_reproduce_d() {
        let m = big(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = i64::MAX / 3;
        let m = Matrix::from_rows(vec![vec![huge, huge - 1], vec![huge - 7, huge + 5]]);
        let small = invariant_factors(&m);
        let s = smith_normal_form(&m.to_bigint());
        assert_eq!(small, s.invariant_factors());
        assert_eq!(s.u.mul(&m.to_bigint()).mul(&s.v), s.d);
    }
}
