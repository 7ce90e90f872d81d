//! Dense exact linear algebra.
//!
//! Matrices are row-major and small (desk scale), so everything here is a
//! straightforward Gauss-Jordan elimination without pivoting heuristics.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Build from rows with an explicit column count (needed for 0-row matrices).
    pub fn from_rows_with_cols(rows: Vec<Vec<F>>, cols: usize) -> Self {
        if rows.is_empty() {
            return Self::zeros(0, cols);
        }
        Self::from_rows(rows)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a.clone()).collect() }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &F, other: &Self) {
        assert_eq!(self.shape(), other.shape());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.clone() + c.clone() * b.clone();
            }
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> F {
        assert!(self.is_square());
        let mut acc = F::zero();
        for i in 0..self.rows {
            acc = acc + self[(i, i)].clone();
        }
        acc
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Select columns by index.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.set_block(0, c, m);
            c += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Self]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.set_block(r, 0, m);
            r += m.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a.clone() * other[(k, l)].clone();
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening.
    pub fn vec(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, v: Vec<F>) -> Self {
        assert_eq!(v.len(), rows * cols);
        Matrix { rows, cols, data: v }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Gauss-Jordan on the first `ncols` columns; returns the pivot columns.
    fn rref_in_place(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv();
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = self[(r, j)].clone() * inv.clone();
                }
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if !self[(r, j)].is_zero() {
                        let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![F::zero(); self.cols];
            v[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            out.push(v);
        }
        out
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel(&self) -> Self {
        Self::from_columns(&self.nullspace(), self.cols)
    }

    /// Some solution of `A x = b`, free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let bm = Self::from_columns(&[b.to_vec()], self.rows);
        self.solve_matrix(&bm).map(|x| x.col(0))
    }

    /// Some solution of `A X = B`, free variables set to zero.
    pub fn solve_matrix(&self, b: &Self) -> Option<Self> {
        assert_eq!(b.rows, self.rows);
        let mut aug = Self::hstack(&[self, b]);
        let pivots = aug.rref_in_place(self.cols);
        // consistency: rows below the pivots must vanish on the right block
        for i in pivots.len()..self.rows {
            if (self.cols..aug.cols).any(|j| !aug[(i, j)].is_zero()) {
                return None;
            }
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = aug[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Self::identity(self.rows))?;
        if self.rank() == self.rows { Some(x) } else { None }
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.rows == 0 || self.pow(self.rows).is_zero()
    }

    /// Columns forming a basis of the column space, taken from the pivot
    /// columns so the result is a subset of the input columns.
    pub fn column_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }
}

/// Basis (as matrix columns) of the span of the given vectors.
pub fn span<F: Field>(vectors: &[Vec<F>], dim: usize) -> Matrix<F> {
    Matrix::from_columns(vectors, dim).column_basis()
}

/// Coordinates of `v` in the basis given by the columns of `basis`.
pub fn coords<F: Field>(basis: &Matrix<F>, v: &[F]) -> Option<Vec<F>> {
    if basis.cols() == 0 {
        return if v.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
    }
    basis.solve(v)
}

pub fn in_span<F: Field>(basis: &Matrix<F>, v: &[F]) -> bool {
    coords(basis, v).is_some()
}

/// Intersection of two column spans, returned as a column basis.
pub fn intersect<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(n, 0);
    }
    // a x = b y  <=>  [a | -b] (x, y) = 0
    let k = Matrix::hstack(&[a, &b.neg()]).nullspace();
    let vecs: Vec<Vec<F>> = k.iter().map(|xy| a.mul_vec(&xy[..a.cols()])).collect();
    span(&vecs, n)
}

/// Standard basis vectors completing the column span of `sub` to the whole
/// space, chosen greedily in index order.
pub fn complement<F: Field>(sub: &Matrix<F>) -> Matrix<F> {
    let n = sub.rows();
    let mut cur = sub.column_basis();
    let mut picked = Vec::new();
    for i in 0..n {
        if cur.cols() == n {
            break;
        }
        let mut e = vec![F::zero(); n];
        e[i] = F::one();
        if !in_span(&cur, &e) {
            let em = Matrix::from_columns(&[e.clone()], n);
            cur = Matrix::hstack(&[&cur, &em]);
            picked.push(e);
        }
    }
    Matrix::from_columns(&picked, n)
}

/// Linear-algebra description of a quotient `V / W`: a projection matrix
/// onto coordinates of a complement, and a section back into `V`.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    /// `dim(V/W) x dim V`
    pub projection: Matrix<F>,
    /// `dim V x dim(V/W)`, the chosen complement basis
    pub section: Matrix<F>,
}

/// Quotient of `F^n` by the column span of `sub`, using the standard-basis
/// complement from [`complement`].
pub fn quotient_space<F: Field>(sub: &Matrix<F>) -> Quotient<F> {
    let n = sub.rows();
    let w = sub.column_basis();
    let c = complement(&w);
    // basis [c | w]; projection = first block of its inverse
    let full = Matrix::hstack(&[&c, &w]);
    let inv = full.inverse().expect("complement completes a basis");
    let projection = inv.submatrix(0, c.cols(), 0, n);
    Quotient { projection, section: c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Fp};
    use num_rational::BigRational as Q;
    use num_traits::Zero;

    fn q(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_i64(rows)
    }

    #[test]
    fn rref_and_rank() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let (r, p) = a.rref();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r.row(0), &[rat(1, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn nullspace_is_killed() {
        let a = q(&[&[1, 2, 3, 4], &[0, 1, 1, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.det(), rat(1, 1));
        let x = a.solve(&[rat(3, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let s = q(&[&[1, 1], &[1, 1]]);
        assert!(s.inverse().is_none());
        assert!(s.solve(&[rat(1, 1), rat(0, 1)]).is_none());
    }

    #[test]
    fn det_matches_permutation_expansion() {
        let a = q(&[&[0, 2, 1], &[3, -1, 4], &[5, 0, 2]]);
        // 0*(-2-0) - 2*(6-20) + 1*(0+5) = 33
        assert_eq!(a.det(), rat(33, 1));
    }

    #[test]
    fn intersection_and_complement() {
        let a = q(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = q(&[&[1, 0], &[1, 0], &[0, 1]]);
        let i = intersect(&a, &b);
        assert_eq!(i.cols(), 1);
        let c = complement(&a);
        assert_eq!(c.cols(), 1);
        assert_eq!(c.col(0), vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn quotient_projection_kills_subspace() {
        let w = q(&[&[1], &[1], &[0]]);
        let quo = quotient_space(&w);
        assert_eq!(quo.projection.shape(), (2, 3));
        assert!(quo.projection.mul(&w).is_zero());
        assert!(quo.projection.mul(&quo.section).is_identity());
    }

    #[test]
    fn prime_field_elimination() {
        type F2 = Fp<2>;
        let a: Matrix<F2> = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(a.rank(), 1);
        assert!(a.is_nilpotent());
        assert_eq!(a.det(), F2::new(0));
    }

    #[test]
    fn kron_vectorises_products() {
        // vec_r(L X R) = (L kron R^T) vec_r(X)
        let l = q(&[&[1, 2], &[0, 1]]);
        let x = q(&[&[3, 0, 1], &[1, 1, 2]]);
        let r = q(&[&[1, 0], &[2, 1], &[0, 5]]);
        let lhs = l.mul(&x).mul(&r).vec();
        let rhs = l.kron(&r.transpose()).mul_vec(&x.vec());
        assert_eq!(lhs, rhs);
    }
}
