//! Subspaces of `K^n` in canonical reduced row echelon form, plus the
//! quotient presentations used for homology classes, associated graded
//! pieces and spectral pages.
//!
//! Basis vectors are rows. Keeping every basis in RREF makes subspace
//! equality a plain matrix comparison and all chosen representatives
//! reproducible.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<K: Scalar> {
    ambient: usize,
    basis: Matrix<K>,
    pivots: Vec<usize>,
}

impl<K: Scalar> Subspace<K> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zero(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_rows(Matrix::identity(ambient))
    }

    /// Span of the given row vectors.
    pub fn from_rows(rows: Matrix<K>) -> Self {
        let ambient = rows.cols();
        let (r, pivots) = rows.rref();
        Subspace { ambient, basis: r.drop_zero_rows(), pivots }
    }

    pub fn span_of(ambient: usize, vectors: &[Vec<K>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_rows(Matrix::from_rows(vectors.to_vec()))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Coordinates of `v` in the RREF basis, or `None` when `v` is outside
    /// the subspace. With an RREF basis the coefficient of basis row `i` is
    /// simply `v[pivot_i]`.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let coords: Vec<K> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.ambient {
                residual[j] = residual[j].sub(&c.mul(self.basis.get(i, j)));
            }
        }
        residual.iter().all(K::is_zero).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[K]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Subspace<K>) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        (0..other.dim()).all(|i| self.contains_vector(other.basis.row_slice(i)))
    }

    pub fn sum(&self, other: &Subspace<K>) -> Result<Subspace<K>> {
        self.check_ambient(other)?;
        Ok(Subspace::from_rows(self.basis.vstack(&other.basis)))
    }

    /// Intersection via the kernel of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Subspace<K>) -> Result<Subspace<K>> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = self.basis.transpose().hstack(&other.basis.transpose().neg());
        let ker = stacked.kernel_basis();
        let mut vectors = Vec::new();
        for i in 0..ker.rows() {
            let coeffs = &ker.row(i)[..self.dim()];
            let mut v = vec![K::zero(); self.ambient];
            for (row, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for j in 0..self.ambient {
                    v[j] = v[j].add(&c.mul(self.basis.get(row, j)));
                }
            }
            vectors.push(v);
        }
        Ok(Subspace::span_of(self.ambient, &vectors))
    }

    fn check_ambient(&self, other: &Subspace<K>) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "ambient mismatch: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Image `{m v : v in self}` inside the codomain of `m`.
    pub fn image_under(&self, m: &Matrix<K>) -> Subspace<K> {
        assert_eq!(m.cols(), self.ambient, "ambient mismatch");
        if self.is_zero() {
            return Subspace::zero(m.rows());
        }
        Subspace::from_rows(m.apply_to_rows(&self.basis))
    }

    /// Preimage `{v : m v in self}` for `m : K^cols -> K^ambient`.
    pub fn preimage_under(&self, m: &Matrix<K>) -> Subspace<K> {
        assert_eq!(m.rows(), self.ambient, "ambient mismatch");
        if self.is_full() {
            return Subspace::full(m.cols());
        }
        let proj = Quotient::by_subspace(self).projection();
        Subspace::from_rows(proj.mul(m).kernel_basis())
    }

    /// Functionals vanishing on the subspace, in dual coordinates.
    pub fn annihilator(&self) -> Subspace<K> {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        Subspace::from_rows(self.basis.kernel_basis())
    }

    /// Entrywise conjugate of the subspace (re-canonicalized).
    pub fn conj(&self) -> Subspace<K> {
        Subspace::from_rows(self.basis.conj())
    }

    pub fn convert<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Subspace<L> {
        // RREF is preserved under field extension
        Subspace {
            ambient: self.ambient,
            basis: self.basis.convert(f),
            pivots: self.pivots.clone(),
        }
    }
}

/// Kernel and image of a matrix, as subspaces of domain and codomain.
pub fn kernel_image<K: Scalar>(m: &Matrix<K>) -> (Subspace<K>, Subspace<K>) {
    let kernel = Subspace::from_rows(m.kernel_basis());
    let image = Subspace::from_rows(m.transpose());
    (kernel, image)
}

/// Presentation of a quotient `big / small` with a deterministic choice of
/// representatives: the rows of `big`'s RREF basis sitting at the non-pivot
/// coordinates of `small` expressed in `big`-coordinates.
#[derive(Clone, Debug)]
pub struct Quotient<K: Scalar> {
    big: Subspace<K>,
    small_in_big: Matrix<K>,
    small_pivots: Vec<usize>,
    free: Vec<usize>,
}

impl<K: Scalar> Quotient<K> {
    pub fn new(big: Subspace<K>, small: &Subspace<K>) -> Result<Self> {
        if small.ambient() != big.ambient() {
            return Err(Error::Dimension("quotient ambient mismatch".into()));
        }
        let mut coords = Vec::with_capacity(small.dim());
        for i in 0..small.dim() {
            let c = big.coordinates(small.basis().row_slice(i)).ok_or_else(|| {
                Error::Invalid("quotient denominator is not contained in numerator".into())
            })?;
            coords.push(c);
        }
        let raw = if coords.is_empty() {
            Matrix::zero(0, big.dim())
        } else {
            Matrix::from_rows(coords)
        };
        let (small_in_big, small_pivots) = raw.rref();
        let free: Vec<usize> =
            (0..big.dim()).filter(|c| !small_pivots.contains(c)).collect();
        Ok(Quotient { big, small_in_big: small_in_big.drop_zero_rows(), small_pivots, free })
    }

    /// Quotient of the full ambient space by a subspace.
    pub fn by_subspace(small: &Subspace<K>) -> Self {
        Quotient::new(Subspace::full(small.ambient()), small).expect("full space contains everything")
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn big(&self) -> &Subspace<K> {
        &self.big
    }

    /// Chosen representatives, one per quotient basis vector, as ambient
    /// row vectors.
    pub fn representatives(&self) -> Matrix<K> {
        if self.free.is_empty() {
            return Matrix::zero(0, self.big.ambient());
        }
        self.big.basis().select_rows(&self.free)
    }

    /// Class coordinates of an ambient vector lying in the numerator.
    pub fn class_of(&self, v: &[K]) -> Option<Vec<K>> {
        let mut c = self.big.coordinates(v)?;
        // reduce modulo the denominator, written in big-coordinates
        for (row, &p) in self.small_pivots.iter().enumerate() {
            if c[p].is_zero() {
                continue;
            }
            let factor = c[p].clone();
            for j in 0..self.big.dim() {
                c[j] = c[j].sub(&factor.mul(self.small_in_big.get(row, j)));
            }
        }
        Some(self.free.iter().map(|&f| c[f].clone()).collect())
    }

    /// Class coordinates of several ambient row vectors, stacked as columns
    /// of the result (so the result is a matrix from "inputs" to the
    /// quotient).
    pub fn class_matrix(&self, vectors: &Matrix<K>) -> Option<Matrix<K>> {
        let mut cols = Vec::with_capacity(vectors.rows());
        for i in 0..vectors.rows() {
            cols.push(self.class_of(vectors.row_slice(i))?);
        }
        Some(Matrix::from_fn(self.dim(), vectors.rows(), |i, j| cols[j][i].clone()))
    }

    /// Image in the quotient of a subspace of the numerator.
    pub fn subspace_classes(&self, s: &Subspace<K>) -> Result<Subspace<K>> {
        let mut rows = Vec::with_capacity(s.dim());
        for i in 0..s.dim() {
            let class = self.class_of(s.basis().row_slice(i)).ok_or_else(|| {
                Error::Invalid("subspace is not contained in the quotient numerator".into())
            })?;
            rows.push(class);
        }
        Ok(Subspace::span_of(self.dim(), &rows))
    }

    /// The projection matrix `ambient -> quotient` (only available when the
    /// numerator is the full space).
    pub fn projection(&self) -> Matrix<K> {
        assert!(self.big.is_full(), "projection needs a full numerator");
        let n = self.big.ambient();
        Matrix::from_fn(self.dim(), n, |i, j| {
            let mut e = vec![K::zero(); n];
            e[j] = K::one();
            self.class_of(&e).expect("full numerator")[i].clone()
        })
    }
}

/// The sum, intersection, containment flag and quotient projection of a
/// pair of subspaces in one call.
pub struct SubspaceAlgebra<K: Scalar> {
    pub sum: Subspace<K>,
    pub intersection: Subspace<K>,
    pub contains: bool,
    pub quotient_projection: Matrix<K>,
}

pub fn subspace_algebra<K: Scalar>(
    s: &Subspace<K>,
    t: &Subspace<K>,
) -> Result<SubspaceAlgebra<K>> {
    let sum = s.sum(t)?;
    let intersection = s.intersect(t)?;
    let contains = s.contains(t);
    let quotient_projection = Quotient::by_subspace(s).projection();
    Ok(SubspaceAlgebra { sum, intersection, contains, quotient_projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn span(vectors: &[&[i64]]) -> Subspace<Rat> {
        Subspace::from_rows(Matrix::from_int_rows(vectors))
    }

    #[test]
    fn axes_in_q2() {
        let x = span(&[&[1, 0]]);
        let y = span(&[&[0, 1]]);
        let alg = subspace_algebra(&x, &y).unwrap();
        assert!(alg.sum.is_full());
        assert!(alg.intersection.is_zero());
        assert!(!alg.contains);
    }

    #[test]
    fn self_algebra() {
        let s = span(&[&[1, 2, 0], &[0, 0, 1]]);
        let alg = subspace_algebra(&s, &s).unwrap();
        assert_eq!(alg.sum, s);
        assert_eq!(alg.intersection, s);
        assert!(alg.contains);
    }

    #[test]
    fn quotient_projection_kernel_is_subspace() {
        let s = span(&[&[1, 2, 3]]);
        let q = Quotient::by_subspace(&s);
        let proj = q.projection();
        assert_eq!(proj.rows(), 2);
        // the subspace maps to zero
        assert!(proj.apply(&[Rat::from_int(1), Rat::from_int(2), Rat::from_int(3)])
            .iter()
            .all(Scalar::is_zero));
        // and the kernel of the projection is exactly the subspace
        let ker = Subspace::from_rows(proj.kernel_basis());
        assert_eq!(ker, s);
    }

    #[test]
    fn quotient_classes() {
        let big = span(&[&[1, 0, 0], &[0, 1, 0]]);
        let small = span(&[&[1, 1, 0]]);
        let q = Quotient::new(big, &small).unwrap();
        assert_eq!(q.dim(), 1);
        let c1 = q.class_of(&[Rat::from_int(1), Rat::from_int(0), Rat::from_int(0)]).unwrap();
        let c2 = q.class_of(&[Rat::from_int(0), Rat::from_int(-1), Rat::from_int(0)]).unwrap();
        assert_eq!(c1, c2);
        assert!(!c1[0].is_zero());
    }

    #[test]
    fn annihilator_dims() {
        let s = span(&[&[1, 0, 2]]);
        let ann = s.annihilator();
        assert_eq!(ann.dim(), 2);
        assert!(s.annihilator().annihilator() == s);
    }

    #[test]
    fn preimage() {
        // projection (x, y) -> x; preimage of zero is the y-axis
        let m = Matrix::<Rat>::from_int_rows(&[&[1, 0]]);
        let z = Subspace::zero(1);
        let pre = z.preimage_under(&m);
        assert_eq!(pre, span(&[&[0, 1]]));
    }
}
