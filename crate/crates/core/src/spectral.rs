//! Spectral pages of a filtered complex.
//!
//! With `Z^r_{p,q} = W_p K_{p+q} ∩ d^{-1}(W_{p-r} K_{p+q-1})`, the page is
//!
//! `E^r_{p,q} = Z^r_{p,q} / (Z^{r-1}_{p-1,q+1} + d Z^{r-1}_{p+r-1,q-r+2})`
//!
//! with differentials of bidegree `(-r, r-1)` computed on cycle
//! representatives inside `W_p K_{p+q}`. Everything is a literal subspace
//! computation, so page-turning can be cross-checked exactly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::{Filtration, FilteredComplex};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::{Quotient, Subspace};

#[derive(Clone, Debug)]
pub struct SpectralPage<K: Scalar> {
    pub r: i64,
    spaces: BTreeMap<(i64, i64), Quotient<K>>,
    /// keyed by source `(p, q)`, mapping to `(p-r, q+r-1)`
    differentials: BTreeMap<(i64, i64), Matrix<K>>,
}

impl<K: Scalar> SpectralPage<K> {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.spaces.get(&(p, q)).map_or(0, Quotient::dim)
    }

    /// Nonzero cells only.
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.spaces
            .iter()
            .filter(|(_, s)| s.dim() > 0)
            .map(|(&c, s)| (c, s.dim()))
            .collect()
    }

    pub fn space(&self, p: i64, q: i64) -> Option<&Quotient<K>> {
        self.spaces.get(&(p, q))
    }

    pub fn differential(&self, p: i64, q: i64) -> Matrix<K> {
        self.differentials
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.dim(p - self.r, q + self.r - 1), self.dim(p, q)))
    }

    pub fn differentials(&self) -> &BTreeMap<(i64, i64), Matrix<K>> {
        &self.differentials
    }

    /// `d^r ∘ d^r = 0`, cellwise.
    pub fn differential_squares_to_zero(&self) -> bool {
        self.spaces.keys().all(|&(p, q)| {
            let first = self.differential(p, q);
            let second = self.differential(p - self.r, q + self.r - 1);
            second.mul(&first).is_zero()
        })
    }

    /// Dimensions of the homology of `(E^r, d^r)`: the independent oracle
    /// for the next page.
    pub fn homology_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), space) in &self.spaces {
            let outgoing = self.differential(p, q);
            let incoming = self.differential(p + self.r, q - self.r + 1);
            let dim = space.dim() - outgoing.rank() - incoming.rank();
            if dim > 0 {
                out.insert((p, q), dim);
            }
        }
        out
    }
}

fn z_space<K: Scalar>(k: &FilteredComplex<K>, n: i64, p: i64, r: i64) -> Result<Subspace<K>> {
    let d = k.complex().d(n);
    let inside = k.level(n, p);
    let target = k.filtration(n - 1).level(p - r);
    inside.intersect(&target.preimage_under(&d))
}

/// The `r`-th page of the spectral sequence of a filtered complex.
pub fn spectral_page<K: Scalar>(k: &FilteredComplex<K>, r: i64) -> Result<SpectralPage<K>> {
    if r < 0 {
        return Err(Error::Precondition("page index must be nonnegative".into()));
    }
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid filtered complex: {violations:?}")));
    }
    let mut spaces = BTreeMap::new();
    for (&n, f) in k.filtrations() {
        let (Some(lo), Some(hi)) = (f.min_jump(), f.max_jump()) else {
            continue;
        };
        for p in lo..=hi {
            let q = n - p;
            let numerator = z_space(k, n, p, r)?;
            let first = z_space(k, n, p - 1, r - 1)?;
            let second = z_space(k, n + 1, p + r - 1, r - 1)?.image_under(&k.complex().d(n + 1));
            let denominator = first.sum(&second)?;
            let quotient = Quotient::new(numerator, &denominator).map_err(|_| {
                Error::Internal(format!("page denominator escaped numerator at ({p},{q})"))
            })?;
            spaces.insert((p, q), quotient);
        }
    }
    let mut differentials = BTreeMap::new();
    let cells: Vec<(i64, i64)> = spaces.keys().copied().collect();
    for &(p, q) in &cells {
        let source = &spaces[&(p, q)];
        if source.dim() == 0 {
            continue;
        }
        let Some(target) = spaces.get(&(p - r, q + r - 1)) else {
            // targets outside the indexed window are zero
            continue;
        };
        if target.dim() == 0 {
            continue;
        }
        let n = p + q;
        let images = k.complex().d(n).apply_to_rows(&source.representatives());
        let m = target.class_matrix(&images).ok_or_else(|| {
            Error::Internal(format!("page differential escaped its window at ({p},{q})"))
        })?;
        differentials.insert((p, q), m);
    }
    Ok(SpectralPage { r, spaces, differentials })
}

/// Page index from which the pages are guaranteed stable (filtration
/// length plus one).
pub fn stabilization_index<K: Scalar>(k: &FilteredComplex<K>) -> i64 {
    match k.jump_range() {
        Some((lo, hi)) => (hi - lo) + 1,
        None => 1,
    }
}

/// Dimensions of `Gr_p H_{p+q}` under the induced filtration on homology:
/// what the stable page must equal.
pub fn infinity_dims<K: Scalar>(k: &FilteredComplex<K>) -> Result<BTreeMap<(i64, i64), usize>> {
    let h = k.complex().homology()?;
    let filtrations = k.homology_filtration(&h)?;
    let mut out = BTreeMap::new();
    for (&n, f) in &filtrations {
        let mut previous = 0usize;
        for p in f.jump_indices() {
            let dim = f.level(p).dim();
            if dim > previous {
                out.insert((p, n - p), dim - previous);
            }
            previous = dim;
        }
    }
    Ok(out)
}

/// Totalization of the first page: the complex `n -> ⊕_p E^1_{p, n-p}`
/// with the `d^1` differential, filtered by columns `W_m = ⊕_{p<=m}`.
/// Its homology in total degree `n` has the dimensions of the second page.
pub fn e1_refilter<K: Scalar>(k: &FilteredComplex<K>) -> Result<FilteredComplex<K>> {
    let page = spectral_page(k, 1)?;
    let dims_by_cell = page.dims();
    // blocks per total degree, ascending column index
    let mut blocks: BTreeMap<i64, Vec<(i64, usize, usize)>> = BTreeMap::new();
    for (&(p, q), &dim) in &dims_by_cell {
        blocks.entry(p + q).or_default().push((p, dim, 0));
    }
    for list in blocks.values_mut() {
        list.sort_by_key(|&(p, _, _)| p);
        let mut offset = 0;
        for entry in list {
            entry.2 = offset;
            offset += entry.1;
        }
    }
    let total_dim =
        |n: i64| -> usize { blocks.get(&n).map_or(0, |l| l.iter().map(|&(_, d, _)| d).sum()) };
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    for (&n, list) in &blocks {
        dims.insert(n, total_dim(n));
        let rows = total_dim(n - 1);
        let cols = total_dim(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(rows, cols);
        for &(p, dim, offset) in list {
            let q = n - p;
            // d^1 : (p, q) -> (p-1, q) stays on the same row q
            let block = page.differential(p, q);
            if block.is_zero() {
                continue;
            }
            let Some(&(_, _, t_offset)) =
                blocks.get(&(n - 1)).and_then(|l| l.iter().find(|&&(tp, _, _)| tp == p - 1))
            else {
                continue;
            };
            for i in 0..block.rows() {
                for j in 0..dim {
                    let v = block.get(i, j);
                    if !v.is_zero() {
                        m.set(t_offset + i, offset + j, v.clone());
                    }
                }
            }
        }
        if !m.is_zero() {
            d.insert(n, m);
        }
    }
    let complex = crate::complex::ChainComplex::new(dims, d)?;
    let mut w = BTreeMap::new();
    for (&n, list) in &blocks {
        let ambient = total_dim(n);
        if ambient == 0 {
            continue;
        }
        let mut levels = BTreeMap::new();
        for &(p, dim, offset) in list {
            let upto = offset + dim;
            let rows =
                Matrix::from_fn(upto, ambient, |i, j| if i == j { K::one() } else { K::zero() });
            levels.insert(p, Subspace::from_rows(rows));
        }
        w.insert(n, Filtration::from_levels(ambient, levels)?);
    }
    FilteredComplex::new(complex, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ChainComplex;
    use crate::scalar::Rat;

    fn trivial_filtered(c: ChainComplex<Rat>) -> FilteredComplex<Rat> {
        FilteredComplex::with_trivial_filtration(c)
    }

    #[test]
    fn negative_page_rejected() {
        let k = trivial_filtered(ChainComplex::concentrated(0, 1));
        assert!(spectral_page(&k, -1).is_err());
    }

    #[test]
    fn e0_is_gr_for_trivial_filtration() {
        let mut dims = BTreeMap::new();
        dims.insert(0, 2);
        dims.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::from_int_rows(&[&[1], &[0]]));
        let k = trivial_filtered(ChainComplex::<Rat>::new(dims, d).unwrap());
        let page0 = spectral_page(&k, 0).unwrap();
        assert_eq!(page0.dim(0, 0), 2);
        assert_eq!(page0.dim(0, 1), 1);
        // E^1 is the homology for the trivial filtration
        let page1 = spectral_page(&k, 1).unwrap();
        assert_eq!(page1.dim(0, 0), 1);
        assert_eq!(page1.dim(0, 1), 0);
    }

    #[test]
    fn turn_page_matches_next_page_on_trivial_example() {
        let mut dims = BTreeMap::new();
        dims.insert(0, 2);
        dims.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::from_int_rows(&[&[1], &[0]]));
        let k = trivial_filtered(ChainComplex::<Rat>::new(dims, d).unwrap());
        let page0 = spectral_page(&k, 0).unwrap();
        assert!(page0.differential_squares_to_zero());
        let predicted = page0.homology_dims();
        let page1 = spectral_page(&k, 1).unwrap();
        assert_eq!(predicted, page1.dims());
    }

    #[test]
    fn infinity_matches_homology_totals() {
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(3, 1);
        let c = ChainComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
        let k = trivial_filtered(c);
        let inf = infinity_dims(&k).unwrap();
        assert_eq!(inf.get(&(0, 0)), Some(&1));
        assert_eq!(inf.get(&(0, 3)), Some(&1));
    }

    #[test]
    fn zero_complex_has_empty_pages() {
        let k = trivial_filtered(ChainComplex::zero());
        let page = spectral_page(&k, 2).unwrap();
        assert!(page.dims().is_empty());
        assert!(e1_refilter(&k).unwrap().complex().dims().is_empty());
    }

    #[test]
    fn e1_refilter_of_zero_differential_trivial_filtration() {
        let c = ChainComplex::<Rat>::concentrated(2, 3);
        let k = trivial_filtered(c);
        let out = e1_refilter(&k).unwrap();
        assert_eq!(out.complex().dim(2), 3);
        let h = out.complex().homology().unwrap();
        assert_eq!(h.dim(2), 3);
    }
}
