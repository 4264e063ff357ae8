//! The weight-threshold canonical truncation: in weight `p` the column is
//! cut at degree `t(p) = ceil(p / alpha)` — untouched above, kernel of the
//! differential at the threshold, zero below. Homology above the threshold
//! is unchanged, which is what turns purity into formality.

use std::collections::BTreeMap;

use crate::bigraded::{BigradedComplex, BigradedMap, Cell};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::purity::PurityParams;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// A truncated bigraded complex together with the cellwise embeddings into
/// the original.
#[derive(Clone, Debug)]
pub struct TauComplex<K: Scalar> {
    truncated: BigradedComplex<K>,
    /// per kept cell: original-cell-dim × tau-cell-dim, columns are the
    /// embedded basis vectors
    embeddings: BTreeMap<Cell, Matrix<K>>,
}

impl<K: Scalar> TauComplex<K> {
    pub fn complex(&self) -> &BigradedComplex<K> {
        &self.truncated
    }

    /// Embedding of a tau-cell into the matching cell of the original.
    pub fn embedding(&self, cell: Cell, original: &BigradedComplex<K>) -> Matrix<K> {
        self.embeddings
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(original.dim(cell), self.truncated.dim(cell)))
    }
}

/// Truncates every weight column at its threshold degree.
pub fn tau_truncate<K: Scalar>(
    a: &BigradedComplex<K>,
    params: &PurityParams,
) -> Result<TauComplex<K>> {
    let violations = a.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid bigraded complex: {violations:?}")));
    }
    let mut dims = BTreeMap::new();
    let mut embeddings = BTreeMap::new();
    for (&(n, p), &dim) in a.dims() {
        let t = params.threshold(p);
        if n > t {
            dims.insert((n, p), dim);
            embeddings.insert((n, p), Matrix::identity(dim));
        } else if n == t {
            let kernel = Subspace::from_rows(a.d((n, p)).kernel_basis());
            if kernel.dim() > 0 {
                dims.insert((n, p), kernel.dim());
                embeddings.insert((n, p), kernel.basis().transpose());
            }
        }
    }
    let mut d = BTreeMap::new();
    for (&(n, p), emb) in &embeddings {
        let Some(target_emb) = embeddings.get(&(n - 1, p)) else {
            continue;
        };
        let image = a.d((n, p)).mul(emb);
        let component = target_emb.solve_matrix(&image).ok_or_else(|| {
            Error::Internal(format!("truncated differential escaped the kernel at ({n},{p})"))
        })?;
        if !component.is_zero() {
            d.insert((n, p), component);
        }
    }
    let truncated = BigradedComplex::new(dims, d)?;
    Ok(TauComplex { truncated, embeddings })
}

/// Restriction of a weight-preserving chain map to the truncations; exists
/// for every such map because chain maps preserve kernels.
pub fn tau_map<K: Scalar>(
    f: &BigradedMap<K>,
    tau_src: &TauComplex<K>,
    tau_tgt: &TauComplex<K>,
) -> Result<BigradedMap<K>> {
    let mut components = BTreeMap::new();
    for &cell in tau_src.truncated.dims().keys() {
        let emb_src = tau_src.embedding(cell, f.source());
        let image = f.component(cell).mul(&emb_src);
        let emb_tgt = tau_tgt.embedding(cell, f.target());
        let component = emb_tgt.solve_matrix(&image).ok_or_else(|| {
            Error::Internal(format!("restricted map escaped the truncation at {cell:?}"))
        })?;
        components.insert(cell, component);
    }
    BigradedMap::new(tau_src.truncated.clone(), tau_tgt.truncated.clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_from_str, Rat};

    fn params(s: &str) -> PurityParams {
        PurityParams::new(rat_from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn cells_on_the_threshold_keep_kernels() {
        // alpha = 1: column p = 1 with cells at degrees 1, 2 and d = id
        let mut dims = BTreeMap::new();
        dims.insert((1, 1), 1);
        dims.insert((2, 1), 1);
        let mut d = BTreeMap::new();
        d.insert((2, 1), Matrix::<Rat>::identity(1));
        let a = BigradedComplex::new(dims, d).unwrap();
        let tau = tau_truncate(&a, &params("1")).unwrap();
        // threshold for p=1 is 1; kernel of d at (1,1) is everything
        assert_eq!(tau.complex().dim((1, 1)), 1);
        assert_eq!(tau.complex().dim((2, 1)), 1);
    }

    #[test]
    fn cells_below_threshold_vanish() {
        let a = BigradedComplex::<Rat>::concentrated((0, 2), 3);
        let tau = tau_truncate(&a, &params("1")).unwrap();
        assert_eq!(tau.complex().total_dim(), 0);
    }

    #[test]
    fn fractional_slope_threshold() {
        // alpha = 4/3, weight 4: threshold is degree 3
        let mut dims = BTreeMap::new();
        dims.insert((2, 4), 1);
        dims.insert((3, 4), 2);
        dims.insert((4, 4), 1);
        let mut d = BTreeMap::new();
        // d : (3,4) -> (2,4) with a one-dimensional kernel
        d.insert((3, 4), Matrix::<Rat>::from_int_rows(&[&[1, 0]]));
        let a = BigradedComplex::new(dims, d).unwrap();
        let tau = tau_truncate(&a, &params("4/3")).unwrap();
        assert_eq!(tau.complex().dim((2, 4)), 0);
        assert_eq!(tau.complex().dim((3, 4)), 1);
        assert_eq!(tau.complex().dim((4, 4)), 1);
    }

    #[test]
    fn truncation_is_idempotent_on_dimensions() {
        let mut dims = BTreeMap::new();
        dims.insert((0, 0), 2);
        dims.insert((1, 1), 2);
        dims.insert((2, 1), 1);
        let mut d = BTreeMap::new();
        d.insert((2, 1), Matrix::<Rat>::from_int_rows(&[&[1], &[0]]));
        let a = BigradedComplex::new(dims, d).unwrap();
        let p = params("1");
        let once = tau_truncate(&a, &p).unwrap();
        let twice = tau_truncate(once.complex(), &p).unwrap();
        assert_eq!(once.complex().dims(), twice.complex().dims());
    }

    #[test]
    fn homology_preserved_at_and_above_threshold() {
        let mut dims = BTreeMap::new();
        dims.insert((1, 1), 2);
        dims.insert((2, 1), 2);
        let mut d = BTreeMap::new();
        d.insert((2, 1), Matrix::<Rat>::from_int_rows(&[&[1, 0], &[0, 0]]));
        let a = BigradedComplex::new(dims, d).unwrap();
        let tau = tau_truncate(&a, &params("1")).unwrap();
        let ha = a.homology_dims().unwrap();
        let ht = tau.complex().homology_dims().unwrap();
        for n in [1i64, 2] {
            assert_eq!(ha.get(&(n, 1)), ht.get(&(n, 1)), "degree {n}");
        }
    }
}
