//! Dense matrices over an exact field, with Gauss–Jordan elimination as the
//! single workhorse. No pivoting heuristics are needed: arithmetic is exact,
//! so the first nonzero entry always works.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix. Rows index the codomain, columns the domain:
/// `m` represents a linear map `K^cols -> K^rows` acting on column vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<K: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    /// Builds from explicit rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&n| K::from_int(n)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<K> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_slice(&self, i: usize) -> &[K] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(K::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&K) -> K) -> Self {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Entrywise complex conjugation (the identity over `Q`).
    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    pub fn neg(&self) -> Self {
        self.map(Scalar::neg)
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out: Matrix<K> = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Applies the map to a column vector.
    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc.add(&a.mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Applies the map to every row of `rows` (vectors as rows), returning
    /// the image vectors as rows: `rows * self^T`.
    pub fn apply_to_rows(&self, rows: &Self) -> Self {
        rows.mul(&self.transpose())
    }

    pub fn vstack(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols, "shape mismatch in vstack");
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        Matrix { rows: self.rows + below.rows, cols: self.cols, entries }
    }

    pub fn hstack(&self, right: &Self) -> Self {
        assert_eq!(self.rows, right.rows, "shape mismatch in hstack");
        Matrix::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                right.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_rows(idx.iter().map(|&i| self.row(i)).collect::<Vec<_>>())
            .with_cols(self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    fn with_cols(mut self, cols: usize) -> Self {
        if self.rows == 0 {
            self.cols = cols;
        }
        self
    }

    /// Kronecker product with the ordered-basis convention `e_i ⊗ f_j`
    /// sorted lexicographically by `(i, j)`.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let (ia, ib) = (i / rhs.rows, i % rhs.rows);
            let (ja, jb) = (j / rhs.cols, j % rhs.cols);
            self.get(ia, ja).mul(rhs.get(ib, jb))
        })
    }

    pub fn direct_sum(&self, rhs: &Self) -> Self {
        Matrix::from_fn(self.rows + rhs.rows, self.cols + rhs.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                rhs.get(i - self.rows, j - self.cols).clone()
            } else {
                K::zero()
            }
        })
    }

    /// Reduced row echelon form together with the pivot columns. The RREF is
    /// the unique canonical representative of the row space (zero rows kept,
    /// pushed to the bottom), and the transform is idempotent.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(row, j).mul(&inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j).sub(&factor.mul(m.get(row, j)));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{v : m v = 0}`, one vector per row, in
    /// canonical form.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![K::zero(); self.cols];
            v[f] = K::one();
            for (irow, &p) in pivots.iter().enumerate() {
                v[p] = r.get(irow, f).neg();
            }
            rows.push(v);
        }
        let raw = Matrix::from_rows(rows).with_cols(self.cols);
        raw.rref().0.drop_zero_rows()
    }

    pub fn drop_zero_rows(&self) -> Self {
        let keep: Vec<usize> =
            (0..self.rows).filter(|&i| self.row_slice(i).iter().any(|x| !x.is_zero())).collect();
        self.select_rows(&keep).with_cols(self.cols)
    }

    /// Solves `self * x = b` for a single column vector; `None` when
    /// inconsistent. Returns one solution (free variables set to zero).
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(self.rows, b.len(), "shape mismatch in solve");
        let aug = self.hstack(&Matrix::from_rows(b.iter().map(|x| vec![x.clone()]).collect()));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (irow, &p) in pivots.iter().enumerate() {
            x[p] = r.get(irow, self.cols).clone();
        }
        Some(x)
    }

    /// Solves `self * X = B` columnwise; `None` when any column is
    /// inconsistent.
    pub fn solve_matrix(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows, "shape mismatch in solve_matrix");
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            let col: Vec<K> = (0..b.rows).map(|i| b.get(i, j).clone()).collect();
            cols.push(self.solve(&col)?);
        }
        Some(Matrix::from_fn(self.cols, b.cols, |i, j| cols[j][i].clone()))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::NotInvertible);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        let mut acc = K::zero();
        for i in 0..self.rows {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Coefficients of the characteristic polynomial, ascending degree,
    /// leading coefficient one (Faddeev–LeVerrier; exact in characteristic
    /// zero).
    pub fn charpoly(&self) -> Vec<K> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        let mut c = vec![K::zero(); n + 1];
        c[n] = K::one();
        let mut m = Matrix::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let t = am.trace();
            let inv_k = K::from_int(k as i64).inv().expect("k nonzero");
            c[n - k] = t.mul(&inv_k).neg();
            m = am.add(&Matrix::identity(n).scale(&c[n - k]));
        }
        c
    }

    /// Converts to a matrix over a larger field entrywise.
    pub fn convert<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
}

/// Extension of scalars `Q -> Q(i)` for rational matrices.
pub fn complexify(m: &Matrix<crate::scalar::Rat>) -> Matrix<crate::scalar::GaussRat> {
    m.convert(crate::scalar::GaussRat::from_rat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussRat, Rat};

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn rref_identity_fixed() {
        let id = Matrix::<Rat>::identity(3);
        assert_eq!(id.rref().0, id);
    }

    #[test]
    fn rref_rank_one() {
        let a = m(&[&[2, 4], &[1, 2]]);
        let (r, pivots) = a.rref();
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn rref_idempotent() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let (r, _) = a.rref();
        assert_eq!(r.rref().0, r);
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3, 1], &[0, 1, 1, 0]]);
        let k = a.kernel_basis();
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            assert!(a.apply(&k.row(i)).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn kronecker_respects_vectors() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let v = vec![Rat::from_int(1), Rat::from_int(-1)];
        let w = vec![Rat::from_int(2), Rat::from_int(5)];
        let mut vw = Vec::new();
        for x in &v {
            for y in &w {
                vw.push(x.mul(y));
            }
        }
        let lhs = a.kronecker(&b).apply(&vw);
        let av = a.apply(&v);
        let bw = b.apply(&w);
        let mut rhs = Vec::new();
        for x in &av {
            for y in &bw {
                rhs.push(x.mul(y));
            }
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn charpoly_companion() {
        // x^2 - 5x + 6 on diag(2, 3)
        let a = m(&[&[2, 0], &[0, 3]]);
        let c = a.charpoly();
        assert_eq!(c, vec![Rat::from_int(6), Rat::from_int(-5), Rat::from_int(1)]);
    }

    #[test]
    fn conjugate_involution() {
        let i = crate::scalar::gauss_i();
        let a = Matrix::<GaussRat>::from_fn(2, 2, |r, c| {
            if r == c {
                i.clone()
            } else {
                GaussRat::from_int((r + c) as i64)
            }
        });
        assert_eq!(a.conj().conj(), a);
    }
}
