//! Dense matrices over an exact (`BigRational`) or floating (`f64`) field.
//!
//! Rational determinants use fraction-free (Bareiss) elimination after
//! clearing row denominators; everything else is Gauss-Jordan elimination
//! with a field-specific pivot rule.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Default rank tolerance for floating-point matrices.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar field used by [`Mat`].
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const EXACT: bool;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Zero test; `tol` is ignored by exact fields.
    fn is_negligible(&self, tol: f64) -> bool;
    /// Larger is a better pivot.
    fn pivot_weight(&self) -> f64;
    fn det(m: &Mat<Self>, tol: f64) -> Self {
        m.det_gauss(tol)
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn from_i64(v: i64) -> Self {
        qi(v)
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        // first nonzero wins; smaller entries keep growth down
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn det(m: &Mat<Self>, _tol: f64) -> Self {
        det_bareiss(m)
    }
}

/// `x^e` for any integer exponent; `x` must be nonzero when `e < 0`.
pub fn powi<T: Field>(x: &T, e: i64) -> T {
    let mut acc = T::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * x.clone();
    }
    if e < 0 {
        T::one() / acc
    } else {
        acc
    }
}

/// Converts a big rational without overflowing on huge numerators/denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb - db - 60).max(-1000);
    let scaled = if shift >= 0 {
        r / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi(shift as i32)
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::<T>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_negligible(0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(T::zero(), |acc, c| acc + self[(r, c)].clone() * v[c].clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() + other[(r, c)].clone())
    }

    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - other[(r, c)].clone())
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn hcat(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vcat(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        Self::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self[(r, c)].clone()
            } else {
                other[(r - self.rows, c)].clone()
            }
        })
    }

    pub fn block_diag(&self, other: &Mat<T>) -> Mat<T> {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |r, c| {
            match (r < self.rows, c < self.cols) {
                (true, true) => self[(r, c)].clone(),
                (false, false) => other[(r - self.rows, c - self.cols)].clone(),
                _ => T::zero(),
            }
        })
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat<T> {
        Self::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, tol: f64) -> (Mat<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best = None;
            let mut best_w = 0.0;
            for r in row..m.rows {
                if m[(r, col)].is_negligible(tol) {
                    continue;
                }
                let w = m[(r, col)].pivot_weight();
                if best.is_none() || w > best_w {
                    best = Some(r);
                    best_w = w;
                    if T::EXACT {
                        break;
                    }
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = T::one() / m[(row, col)].clone();
            for c in col..m.cols {
                let v = m[(row, c)].clone() * inv.clone();
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_negligible(0.0) {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = m[(r, c)].clone() - factor.clone() * m[(row, c)].clone();
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Indices of a maximal linearly independent set of columns (greedy, left to right).
    pub fn independent_cols(&self, tol: f64) -> Vec<usize> {
        self.rref(tol).1
    }

    /// Some `x` with `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[T], tol: f64) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hcat(&Mat::from_cols(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref(tol);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Solves for every column of `b`.
    pub fn solve_mat(&self, b: &Mat<T>, tol: f64) -> Option<Mat<T>> {
        let cols: Option<Vec<Vec<T>>> = b.columns().iter().map(|c| self.solve(c, tol)).collect();
        cols.map(|c| Mat::from_cols(self.cols, &c))
    }

    pub fn inverse(&self, tol: f64) -> Option<Mat<T>> {
        assert!(self.is_square());
        if self.rows == 0 {
            return Some(self.clone());
        }
        let (r, pivots) = self.hcat(&Mat::identity(self.rows)).rref(tol);
        if pivots.len() < self.rows || pivots[self.rows - 1] >= self.cols {
            return None;
        }
        Some(Self::from_fn(self.rows, self.rows, |i, j| r[(i, self.cols + j)].clone()))
    }

    pub fn det(&self, tol: f64) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        T::det(self, tol)
    }

    /// Gaussian elimination with the field's pivot rule.
    pub fn det_gauss(&self, _tol: f64) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let mut best = None;
            let mut best_w = 0.0;
            for r in col..n {
                if m[(r, col)].is_negligible(0.0) {
                    continue;
                }
                let w = m[(r, col)].pivot_weight();
                if best.is_none() || w > best_w {
                    best = Some(r);
                    best_w = w;
                }
            }
            let Some(p) = best else { return T::zero() };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = det * piv.clone();
            for r in col + 1..n {
                if m[(r, col)].is_negligible(0.0) {
                    continue;
                }
                let factor = m[(r, col)].clone() / piv.clone();
                for c in col..n {
                    let v = m[(r, c)].clone() - factor.clone() * m[(col, c)].clone();
                    m[(r, c)] = v;
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Fraction-free determinant: clear each row's denominators, run Bareiss over
/// the integers, then divide the scaling back out.
pub fn det_bareiss(m: &Mat<BigRational>) -> BigRational {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let lcm = (0..n).fold(BigInt::one(), |acc, c| num::integer::lcm(acc, m[(r, c)].denom().clone()));
        scale *= &lcm;
        a.push(
            (0..n)
                .map(|c| {
                    let v = &m[(r, c)];
                    v.numer() * (&lcm / v.denom())
                })
                .collect(),
        );
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigRational::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone() * BigInt::from(sign);
    BigRational::new(d, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Mat<Q> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn small_determinants() {
        assert_eq!(qm(&[&[1, 1], &[1, 0]]).det(0.0), qi(-1));
        assert_eq!(qm(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]).det(0.0), qi(-3));
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).det(0.0), qi(0));
        let f = Mat::from_rows(vec![vec![0.0, 2.0], vec![3.0, 1.0]]);
        assert!((f.det(1e-12) + 6.0).abs() < 1e-12);
    }

    #[test]
    fn nullspace_and_solve() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace(0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert!(m.solve(&[qi(1), qi(3)], 0.0).is_none());
        let x = m.solve(&[qi(2), qi(4)], 0.0).unwrap();
        assert_eq!(m.mul_vec(&x), vec![qi(2), qi(4)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = qm(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse(0.0).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse(0.0).is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_gauss(entries in proptest::collection::vec(-9i64..10, 16), dens in proptest::collection::vec(1i64..5, 16)) {
            let m = Mat::from_fn(4, 4, |r, c| q(entries[r * 4 + c], dens[r * 4 + c]));
            prop_assert_eq!(det_bareiss(&m), m.det_gauss(0.0));
        }
    }
}
