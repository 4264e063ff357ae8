//! Increasing, exhaustive, bounded filtrations on complexes; associated
//! graded; the shift and décalage reindexings; filtered tensor products;
//! strictness.
//!
//! One convention everywhere: filtrations are increasing with integer
//! indices. A decreasing filtration (such as a Hodge filtration `F^p`) is
//! stored through the substitution `F^p = stored_{-p}`, translated at the
//! I/O boundary.

use std::collections::{BTreeMap, BTreeSet};

use crate::bigraded::{forget_weight, BigradedComplex, WeightLayout};
use crate::complex::{tensor_complex, ChainComplex, Homology, TensorLayout, Violation};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussRat, Rat, Scalar};
use crate::subspace::{Quotient, Subspace};

/// A finite increasing filtration of `K^ambient` stored by jump indices:
/// `level(p)` is the subspace at the largest jump `<= p`, zero below the
/// first jump. Exhaustiveness (top level = full space) is enforced for
/// nonzero ambient dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Filtration<K: Scalar> {
    ambient: usize,
    jumps: Vec<(i64, Subspace<K>)>,
}

impl<K: Scalar> Filtration<K> {
    /// Single jump to the full space at index `p`.
    pub fn trivial(ambient: usize, p: i64) -> Self {
        if ambient == 0 {
            return Filtration { ambient, jumps: Vec::new() };
        }
        Filtration { ambient, jumps: vec![(p, Subspace::full(ambient))] }
    }

    /// Normalizes a family of levels into jumps: consecutive equal
    /// subspaces are merged, the chain must be increasing and end at the
    /// full space.
    pub fn from_levels(ambient: usize, levels: BTreeMap<i64, Subspace<K>>) -> Result<Self> {
        let mut jumps: Vec<(i64, Subspace<K>)> = Vec::new();
        let mut previous = Subspace::zero(ambient);
        for (p, s) in levels {
            if s.ambient() != ambient {
                return Err(Error::Dimension(format!(
                    "filtration level {p} has ambient {} instead of {ambient}",
                    s.ambient()
                )));
            }
            if !s.contains(&previous) {
                return Err(Error::Invalid(format!("filtration is not increasing at index {p}")));
            }
            if s != previous {
                previous = s.clone();
                jumps.push((p, s));
            }
        }
        if ambient > 0 {
            match jumps.last() {
                Some((_, top)) if top.is_full() => {}
                _ => return Err(Error::Invalid("filtration is not exhaustive".into())),
            }
        }
        Ok(Filtration { ambient, jumps })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn jumps(&self) -> &[(i64, Subspace<K>)] {
        &self.jumps
    }

    pub fn level(&self, p: i64) -> Subspace<K> {
        let mut current = Subspace::zero(self.ambient);
        for (j, s) in &self.jumps {
            if *j <= p {
                current = s.clone();
            } else {
                break;
            }
        }
        current
    }

    /// Indices where the filtration changes; empty for ambient zero.
    pub fn jump_indices(&self) -> Vec<i64> {
        self.jumps.iter().map(|(p, _)| *p).collect()
    }

    pub fn min_jump(&self) -> Option<i64> {
        self.jumps.first().map(|(p, _)| *p)
    }

    pub fn max_jump(&self) -> Option<i64> {
        self.jumps.last().map(|(p, _)| *p)
    }

    /// Reindexes every jump by a shift: the result has `level(p) =
    /// self.level(p - offset)`.
    pub fn shift_indices(&self, offset: i64) -> Self {
        Filtration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, s)| (p + offset, s.clone())).collect(),
        }
    }

    /// Dual filtration on the dual space: `level(p)` is the annihilator of
    /// `self.level(-p-1)`. This is the Hom-against-the-unit rule and works
    /// for negated decreasing filtrations as well.
    pub fn dual(&self) -> Self {
        if self.ambient == 0 {
            return self.clone();
        }
        let mut levels = BTreeMap::new();
        let candidates: Vec<i64> = self
            .jump_indices()
            .iter()
            .map(|p| -p - 1)
            .chain(self.jump_indices().iter().map(|p| -p))
            .collect();
        for p in candidates {
            levels.insert(p, self.level(-p - 1).annihilator());
        }
        // ensure a top jump exists
        if let Some(min) = self.min_jump() {
            levels.insert(-min, Subspace::full(self.ambient));
        }
        Filtration::from_levels(self.ambient, levels).expect("dual of a valid filtration is valid")
    }

    pub fn conj(&self) -> Self {
        // conjugation preserves inclusions, so jumps stay jumps
        Filtration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, s)| (*p, s.conj())).collect(),
        }
    }
}

/// A chain complex with a differential-compatible filtration per degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FilteredComplex<K: Scalar> {
    complex: ChainComplex<K>,
    w: BTreeMap<i64, Filtration<K>>,
}

impl<K: Scalar> FilteredComplex<K> {
    pub fn new(complex: ChainComplex<K>, w: BTreeMap<i64, Filtration<K>>) -> Result<Self> {
        for (&n, &k) in complex.dims() {
            let f = w
                .get(&n)
                .ok_or_else(|| Error::Invalid(format!("missing filtration at degree {n}")))?;
            if f.ambient() != k {
                return Err(Error::Dimension(format!(
                    "filtration at degree {n} has ambient {} instead of {k}",
                    f.ambient()
                )));
            }
        }
        let w = w.into_iter().filter(|(n, _)| complex.dim(*n) > 0).collect();
        Ok(FilteredComplex { complex, w })
    }

    /// Equips a complex with the trivial weight-0 filtration everywhere.
    pub fn with_trivial_filtration(complex: ChainComplex<K>) -> Self {
        let w = complex.dims().iter().map(|(&n, &k)| (n, Filtration::trivial(k, 0))).collect();
        FilteredComplex { complex, w }
    }

    pub fn complex(&self) -> &ChainComplex<K> {
        &self.complex
    }

    pub fn filtration(&self, n: i64) -> Filtration<K> {
        self.w.get(&n).cloned().unwrap_or_else(|| Filtration::trivial(self.complex.dim(n), 0))
    }

    pub fn filtrations(&self) -> &BTreeMap<i64, Filtration<K>> {
        &self.w
    }

    pub fn level(&self, n: i64, p: i64) -> Subspace<K> {
        self.filtration(n).level(p)
    }

    /// Smallest and largest jump index over all degrees.
    pub fn jump_range(&self) -> Option<(i64, i64)> {
        let mut lo = None;
        let mut hi = None;
        for f in self.w.values() {
            if let (Some(a), Some(b)) = (f.min_jump(), f.max_jump()) {
                lo = Some(lo.map_or(a, |x: i64| x.min(a)));
                hi = Some(hi.map_or(b, |x: i64| x.max(b)));
            }
        }
        Some((lo?, hi?))
    }

    /// `d²=0` plus `d(W_p K_n) ⊆ W_p K_{n-1}` at every jump.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = self.complex.validate();
        for (&n, f) in &self.w {
            let d = self.complex.d(n);
            for p in f.jump_indices() {
                let image = f.level(p).image_under(&d);
                if !self.level(n - 1, p).contains(&image) {
                    violations.push(Violation::new(
                        "filtration-compatibility",
                        &[("degree", n), ("index", p)],
                        "differential does not preserve the filtration",
                    ));
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Associated graded with the induced differential, plus the quotient
    /// presentations of every piece.
    pub fn gr(&self) -> Result<(BigradedComplex<K>, GrPresentation<K>)> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(format!("invalid filtered complex: {violations:?}")));
        }
        let mut pieces = BTreeMap::new();
        let mut dims = BTreeMap::new();
        for (&n, f) in &self.w {
            for p in f.jump_indices() {
                let q = Quotient::new(f.level(p), &f.level(p - 1))?;
                if q.dim() > 0 {
                    dims.insert((n, p), q.dim());
                }
                pieces.insert((n, p), q);
            }
        }
        let mut d = BTreeMap::new();
        for (&(n, p), piece) in &pieces {
            let Some(target) = pieces.get(&(n - 1, p)) else { continue };
            if piece.dim() == 0 || target.dim() == 0 {
                continue;
            }
            let dn = self.complex.d(n);
            let images = dn.apply_to_rows(&piece.representatives());
            let m = target
                .class_matrix(&images)
                .ok_or_else(|| Error::Internal("graded differential escaped its weight".into()))?;
            d.insert((n, p), m);
        }
        Ok((BigradedComplex::new(dims, d)?, GrPresentation { pieces }))
    }

    /// The filtration induced on homology: `W_p H_n` is the image of the
    /// classes of cycles lying in `W_p K_n`.
    pub fn homology_filtration(&self, h: &Homology<K>) -> Result<BTreeMap<i64, Filtration<K>>> {
        let mut out = BTreeMap::new();
        for (&n, f) in &self.w {
            let Some(q) = h.quotient(n) else {
                continue;
            };
            if q.dim() == 0 {
                out.insert(n, Filtration::trivial(0, 0));
                continue;
            }
            let cycles = q.big().clone();
            let mut levels = BTreeMap::new();
            for p in f.jump_indices() {
                let inside = f.level(p).intersect(&cycles)?;
                levels.insert(p, q.subspace_classes(&inside)?);
            }
            out.insert(n, Filtration::from_levels(q.dim(), levels)?);
        }
        Ok(out)
    }
}

/// Extension of scalars `Q -> Q(i)` on filtrations.
pub fn complexify_filtration(f: &Filtration<Rat>) -> Filtration<GaussRat> {
    Filtration {
        ambient: f.ambient,
        jumps: f.jumps.iter().map(|(p, s)| (*p, s.convert(GaussRat::from_rat))).collect(),
    }
}

/// Extension of scalars `Q -> Q(i)` on filtered complexes.
pub fn complexify_filtered(k: &FilteredComplex<Rat>) -> FilteredComplex<GaussRat> {
    let complex = ChainComplex::new(
        k.complex.dims().clone(),
        k.complex.stored_d().iter().map(|(&n, m)| (n, crate::matrix::complexify(m))).collect(),
    )
    .expect("shapes preserved");
    let w = k.w.iter().map(|(&n, f)| (n, complexify_filtration(f))).collect();
    FilteredComplex { complex, w }
}

/// Quotient presentations of the graded pieces `W_p / W_{p-1}`, keyed by
/// `(degree, index)`.
#[derive(Clone, Debug)]
pub struct GrPresentation<K: Scalar> {
    pub pieces: BTreeMap<(i64, i64), Quotient<K>>,
}

impl<K: Scalar> GrPresentation<K> {
    pub fn piece(&self, n: i64, p: i64) -> Option<&Quotient<K>> {
        self.pieces.get(&(n, p))
    }
}

/// The shift `(TW)_p K_n := W_{p-n} K_n`. The differential then lowers the
/// new index by one, so the induced differential on the associated graded
/// vanishes.
pub fn shift_t<K: Scalar>(k: &FilteredComplex<K>) -> FilteredComplex<K> {
    let w = k.filtrations().iter().map(|(&n, f)| (n, f.shift_indices(n))).collect();
    FilteredComplex { complex: k.complex().clone(), w }
}

/// Décalage: `(Dec W)_p K_n := W_{p+n} K_n ∩ d^{-1}(W_{p+n-1} K_{n-1})`.
pub fn decalage<K: Scalar>(k: &FilteredComplex<K>) -> Result<FilteredComplex<K>> {
    let mut w = BTreeMap::new();
    for (&n, f) in k.filtrations() {
        let ambient = f.ambient();
        if ambient == 0 {
            w.insert(n, Filtration::trivial(0, 0));
            continue;
        }
        let d = k.complex().d(n);
        let target = k.filtration(n - 1);
        let mut candidates = BTreeSet::new();
        for j in f.jump_indices() {
            candidates.insert(j - n);
        }
        for j in target.jump_indices() {
            candidates.insert(j - n + 1);
        }
        if let Some(hi) = f.max_jump() {
            // the top level is full because W is exhaustive and d lands in
            // the top level of the target
            candidates.insert(hi - n + 1);
        }
        let mut levels = BTreeMap::new();
        for p in candidates {
            let level = f.level(p + n).intersect(&target.level(p + n - 1).preimage_under(&d))?;
            levels.insert(p, level);
        }
        w.insert(n, Filtration::from_levels(ambient, levels)?);
    }
    FilteredComplex::new(k.complex().clone(), w)
}

/// The index correspondence realizing the page shift of décalage:
/// `E^r_{p,q}(Dec W) = E^{r+1}_{2p+q, -p}(W)`.
pub fn decalage_reindex(p: i64, q: i64) -> (i64, i64) {
    (2 * p + q, -p)
}

/// Filtration by partial weight sums of a weight grading; `gr` of the
/// result recovers the grading.
pub fn from_weight_grading<K: Scalar>(
    b: &BigradedComplex<K>,
) -> (FilteredComplex<K>, WeightLayout) {
    let (complex, layout) = forget_weight(b);
    let mut w = BTreeMap::new();
    for (&n, blocks) in &layout.blocks {
        let ambient = layout.dim(n);
        if ambient == 0 {
            continue;
        }
        let mut levels = BTreeMap::new();
        for block in blocks {
            let upto = block.offset + block.dim;
            let rows =
                Matrix::from_fn(upto, ambient, |i, j| if i == j { K::one() } else { K::zero() });
            levels.insert(block.weight, Subspace::from_rows(rows));
        }
        w.insert(n, Filtration::from_levels(ambient, levels).expect("coordinate flags are valid"));
    }
    (
        FilteredComplex::new(complex, w).expect("weight grading induces a valid filtration"),
        layout,
    )
}

/// Filtered tensor product: underlying tensor complex, with
/// `W_p(A⊗B) = Σ_{i+j<=p} im(W_i A ⊗ W_j B)`.
pub fn filtered_tensor<K: Scalar>(
    a: &FilteredComplex<K>,
    b: &FilteredComplex<K>,
) -> Result<(FilteredComplex<K>, TensorLayout)> {
    let (complex, layout) = tensor_complex(a.complex(), b.complex());
    let (a_lo, a_hi) = a.jump_range().unwrap_or((0, 0));
    let (b_lo, b_hi) = b.jump_range().unwrap_or((0, 0));
    let mut w = BTreeMap::new();
    for (&n, blocks) in &layout.blocks {
        let ambient = layout.dim(n);
        if ambient == 0 {
            continue;
        }
        let mut levels = BTreeMap::new();
        for p in (a_lo + b_lo)..=(a_hi + b_hi) {
            let mut rows: Vec<Vec<K>> = Vec::new();
            for block in blocks {
                let fa = a.filtration(block.a_deg);
                let fb = b.filtration(block.b_deg);
                for i in a_lo..=a_hi {
                    for j in b_lo..=b_hi {
                        if i + j > p {
                            continue;
                        }
                        let sa = fa.level(i);
                        let sb = fb.level(j);
                        if sa.is_zero() || sb.is_zero() {
                            continue;
                        }
                        let kron = sa.basis().kronecker(sb.basis());
                        for r in 0..kron.rows() {
                            let mut v = vec![K::zero(); ambient];
                            for (c, value) in kron.row_slice(r).iter().enumerate() {
                                v[block.offset + c] = value.clone();
                            }
                            rows.push(v);
                        }
                    }
                }
            }
            levels.insert(p, Subspace::span_of(ambient, &rows));
        }
        w.insert(n, Filtration::from_levels(ambient, levels)?);
    }
    Ok((FilteredComplex::new(complex, w)?, layout))
}

/// Strict compatibility of a filtration-compatible linear map:
/// `f(src) ∩ W_p(tgt) = f(W_p src)` for every `p`.
pub fn strictness_check<K: Scalar>(
    f: &Matrix<K>,
    src: &Filtration<K>,
    tgt: &Filtration<K>,
) -> Result<bool> {
    if f.cols() != src.ambient() || f.rows() != tgt.ambient() {
        return Err(Error::Dimension("strictness_check shape mismatch".into()));
    }
    let mut indices: BTreeSet<i64> = src.jump_indices().into_iter().collect();
    indices.extend(tgt.jump_indices());
    let full_image = Subspace::full(src.ambient()).image_under(f);
    for p in indices {
        if !tgt.level(p).contains(&src.level(p).image_under(f)) {
            return Err(Error::Precondition(format!(
                "map is not filtration-compatible at index {p}"
            )));
        }
        let lhs = full_image.intersect(&tgt.level(p))?;
        let rhs = src.level(p).image_under(f);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn span(vectors: &[&[i64]]) -> Subspace<Rat> {
        Subspace::from_rows(Matrix::from_int_rows(vectors))
    }

    fn two_step_filtration() -> Filtration<Rat> {
        let mut levels = BTreeMap::new();
        levels.insert(0, span(&[&[1, 0]]));
        levels.insert(1, Subspace::full(2));
        Filtration::from_levels(2, levels).unwrap()
    }

    #[test]
    fn level_lookup() {
        let f = two_step_filtration();
        assert!(f.level(-1).is_zero());
        assert_eq!(f.level(0).dim(), 1);
        assert!(f.level(5).is_full());
    }

    #[test]
    fn non_exhaustive_rejected() {
        let mut levels = BTreeMap::new();
        levels.insert(0, span(&[&[1, 0]]));
        assert!(Filtration::from_levels(2, levels).is_err());
    }

    #[test]
    fn gr_dimension_sum() {
        let complex = ChainComplex::<Rat>::concentrated(0, 2);
        let mut w = BTreeMap::new();
        w.insert(0, two_step_filtration());
        let k = FilteredComplex::new(complex, w).unwrap();
        let (gr, _) = k.gr().unwrap();
        assert_eq!(gr.dim((0, 0)), 1);
        assert_eq!(gr.dim((0, 1)), 1);
    }

    #[test]
    fn trivial_filtration_gr_is_everything_at_zero() {
        let complex = ChainComplex::<Rat>::concentrated(1, 3);
        let k = FilteredComplex::with_trivial_filtration(complex);
        let (gr, _) = k.gr().unwrap();
        assert_eq!(gr.dim((1, 0)), 3);
    }

    #[test]
    fn shift_moves_jumps_by_degree() {
        let complex = ChainComplex::<Rat>::concentrated(1, 1);
        let mut w = BTreeMap::new();
        w.insert(1, Filtration::trivial(1, 2));
        let k = FilteredComplex::new(complex, w).unwrap();
        let t = shift_t(&k);
        assert_eq!(t.filtration(1).jump_indices(), vec![3]);
        // degree zero is fixed
        let c0 = ChainComplex::<Rat>::concentrated(0, 1);
        let k0 = FilteredComplex::with_trivial_filtration(c0);
        assert_eq!(shift_t(&k0).filtration(0).jump_indices(), vec![0]);
    }

    #[test]
    fn decalage_with_zero_differential() {
        let complex = ChainComplex::<Rat>::concentrated(2, 1);
        let mut w = BTreeMap::new();
        w.insert(2, Filtration::trivial(1, 3));
        let k = FilteredComplex::new(complex, w).unwrap();
        let dec = decalage(&k).unwrap();
        // Dec W_p K_n = W_{p+n} K_n when d vanishes: jump at 3 - 2 = 1
        assert_eq!(dec.filtration(2).jump_indices(), vec![1]);
    }

    #[test]
    fn dual_filtration_of_a_line() {
        // jump at 2 in Q^1: dual jumps at -2
        let f = Filtration::<Rat>::trivial(1, 2);
        assert_eq!(f.dual().jump_indices(), vec![-2]);
    }

    #[test]
    fn strictness_of_identity() {
        let f = two_step_filtration();
        let id = Matrix::<Rat>::identity(2);
        assert!(strictness_check(&id, &f, &f).unwrap());
    }

    #[test]
    fn engineered_non_strict_map() {
        // source: Q with jump at 1; target: two-step; f(e) = e1 lands in
        // W_0(target) but f(W_0 source) = 0.
        let src = Filtration::trivial(1, 1);
        let tgt = two_step_filtration();
        let f = Matrix::<Rat>::from_int_rows(&[&[1], &[0]]);
        assert!(!strictness_check(&f, &src, &tgt).unwrap());
    }

    #[test]
    fn weight_grading_round_trip() {
        let mut dims = BTreeMap::new();
        dims.insert((0, 0), 1);
        dims.insert((0, 2), 2);
        let b = BigradedComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
        let (k, _) = from_weight_grading(&b);
        let (gr, _) = k.gr().unwrap();
        assert_eq!(gr.dims(), b.dims());
    }

    #[test]
    fn filtered_tensor_of_lines_adds_weights() {
        let a = {
            let c = ChainComplex::<Rat>::concentrated(0, 1);
            let mut w = BTreeMap::new();
            w.insert(0, Filtration::trivial(1, 2));
            FilteredComplex::new(c, w).unwrap()
        };
        let b = {
            let c = ChainComplex::<Rat>::concentrated(0, 1);
            let mut w = BTreeMap::new();
            w.insert(0, Filtration::trivial(1, 3));
            FilteredComplex::new(c, w).unwrap()
        };
        let (t, _) = filtered_tensor(&a, &b).unwrap();
        assert_eq!(t.filtration(0).jump_indices(), vec![5]);
    }
}
