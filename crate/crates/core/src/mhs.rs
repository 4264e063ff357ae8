//! Mixed Hodge structures over `Q` with their complexification over `Q(i)`:
//! validation of the graded purity axiom, the two-filtration splitting into
//! `I^{p,q}` pieces, and tensor / Hom / dual constructions.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::Violation;
use crate::error::{Error, Result};
use crate::filtration::{complexify_filtration, Filtration};
use crate::matrix::{complexify, Matrix};
use crate::scalar::{GaussRat, Rat, Scalar};
use crate::subspace::{Quotient, Subspace};

/// A decreasing filtration `F^p` on `Q(i)^n`, stored increasingly through
/// `F^p = stored_{-p}` so that the rest of the crate sees one convention.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HodgeFiltration {
    stored: Filtration<GaussRat>,
}

impl HodgeFiltration {
    pub fn from_stored(stored: Filtration<GaussRat>) -> Self {
        HodgeFiltration { stored }
    }

    /// Builds from levels keyed by the decreasing superscript.
    pub fn from_decreasing_levels(
        ambient: usize,
        levels: BTreeMap<i64, Subspace<GaussRat>>,
    ) -> Result<Self> {
        let stored = Filtration::from_levels(
            ambient,
            levels.into_iter().map(|(p, s)| (-p, s)).collect(),
        )?;
        Ok(HodgeFiltration { stored })
    }

    /// Full space for `p <= level`, zero above: a single Hodge jump.
    pub fn pure_level(ambient: usize, level: i64) -> Self {
        HodgeFiltration { stored: Filtration::trivial(ambient, -level) }
    }

    pub fn stored(&self) -> &Filtration<GaussRat> {
        &self.stored
    }

    pub fn ambient(&self) -> usize {
        self.stored.ambient()
    }

    /// `F^p`.
    pub fn at(&self, p: i64) -> Subspace<GaussRat> {
        self.stored.level(-p)
    }

    /// Superscripts where the filtration drops, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let mut ls: Vec<i64> = self.stored.jump_indices().iter().map(|m| -m).collect();
        ls.sort_unstable();
        ls
    }

    pub fn conj(&self) -> Self {
        HodgeFiltration { stored: self.stored.conj() }
    }

    pub fn dual(&self) -> Self {
        HodgeFiltration { stored: self.stored.dual() }
    }
}

/// `(V, W, F)`: a rational space with a weight filtration and a Hodge
/// filtration on its complexification in the standard basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedHodgeStructure {
    dim: usize,
    w: Filtration<Rat>,
    f: HodgeFiltration,
}

impl MixedHodgeStructure {
    pub fn new(dim: usize, w: Filtration<Rat>, f: HodgeFiltration) -> Result<Self> {
        if w.ambient() != dim || f.ambient() != dim {
            return Err(Error::Dimension("filtration ambient does not match MHS dimension".into()));
        }
        Ok(MixedHodgeStructure { dim, w, f })
    }

    /// The Tate object `Q(-n)`: one dimension, weight `2n`, Hodge level `n`.
    pub fn tate(n: i64) -> Self {
        MixedHodgeStructure {
            dim: 1,
            w: Filtration::trivial(1, 2 * n),
            f: HodgeFiltration::pure_level(1, n),
        }
    }

    pub fn unit() -> Self {
        MixedHodgeStructure::tate(0)
    }

    pub fn zero() -> Self {
        MixedHodgeStructure {
            dim: 0,
            w: Filtration::trivial(0, 0),
            f: HodgeFiltration::from_stored(Filtration::trivial(0, 0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight_filtration(&self) -> &Filtration<Rat> {
        &self.w
    }

    pub fn hodge_filtration(&self) -> &HodgeFiltration {
        &self.f
    }

    pub fn complexified_weight(&self) -> Filtration<GaussRat> {
        complexify_filtration(&self.w)
    }

    /// The graded purity axiom: on each `Gr^W_m ⊗ Q(i)` the filtration
    /// induced by `F` must give a weight-`m` Hodge decomposition
    /// `⊕_{p+q=m} V^{p,q}` with `V^{p,q} = F^p ∩ conj(F)^q` and
    /// `conj(V^{p,q}) = V^{q,p}`. Violations are reported, not thrown.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self.dim == 0 {
            return violations;
        }
        let wc = self.complexified_weight();
        let fbar = self.f.conj();
        let levels = self.f.levels();
        let (Some(&f_lo), Some(&f_hi)) = (levels.first(), levels.last()) else {
            return violations;
        };
        for m in self.w.jump_indices() {
            let piece = match Quotient::new(wc.level(m), &wc.level(m - 1)) {
                Ok(q) => q,
                Err(_) => {
                    violations.push(Violation::new(
                        "weight-chain",
                        &[("m", m)],
                        "weight filtration is not increasing",
                    ));
                    continue;
                }
            };
            if piece.dim() == 0 {
                continue;
            }
            let induced = |s: &Subspace<GaussRat>| -> Result<Subspace<GaussRat>> {
                piece.subspace_classes(&s.intersect(&wc.level(m))?)
            };
            // collect candidate (p, q) on the line p + q = m
            let lo = f_lo.min(m - f_hi) - 1;
            let hi = f_hi.max(m - f_lo) + 1;
            let mut cells: BTreeMap<(i64, i64), Subspace<GaussRat>> = BTreeMap::new();
            for p in lo..=hi {
                let q = m - p;
                let vp = match (induced(&self.f.at(p)), induced(&fbar.at(q))) {
                    (Ok(a), Ok(b)) => a.intersect(&b).unwrap(),
                    _ => {
                        violations.push(Violation::new(
                            "induced-filtration",
                            &[("m", m), ("p", p), ("q", q)],
                            "could not induce the Hodge filtration on the graded piece",
                        ));
                        continue;
                    }
                };
                if !vp.is_zero() {
                    cells.insert((p, q), vp);
                }
            }
            let mut sum = Subspace::zero(piece.dim());
            let mut dim_sum = 0;
            for v in cells.values() {
                sum = sum.sum(v).unwrap();
                dim_sum += v.dim();
            }
            if sum.dim() != piece.dim() || dim_sum != piece.dim() {
                violations.push(Violation::new(
                    "hodge-decomposition",
                    &[("m", m)],
                    format!(
                        "pieces span {} of {} dimensions (directness defect {})",
                        sum.dim(),
                        piece.dim(),
                        dim_sum as i64 - sum.dim() as i64
                    ),
                ));
                // name the overlapping cells
                for (&(p, q), v) in &cells {
                    let mut others = Subspace::zero(piece.dim());
                    for (&(p2, q2), v2) in &cells {
                        if (p2, q2) != (p, q) {
                            others = others.sum(v2).unwrap();
                        }
                    }
                    if !v.intersect(&others).unwrap().is_zero() {
                        violations.push(Violation::new(
                            "hodge-decomposition",
                            &[("m", m), ("p", p), ("q", q)],
                            "piece meets the span of the other pieces",
                        ));
                    }
                }
            }
            for (&(p, q), v) in &cells {
                let mirrored = cells
                    .get(&(q, p))
                    .cloned()
                    .unwrap_or_else(|| Subspace::zero(piece.dim()));
                if v.conj() != mirrored {
                    violations.push(Violation::new(
                        "conjugation-symmetry",
                        &[("m", m), ("p", p), ("q", q)],
                        "conj(V^{p,q}) differs from V^{q,p}",
                    ));
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Nonzero Hodge numbers `h^{p,q}` of the graded pieces.
    pub fn hodge_numbers(&self) -> Result<BTreeMap<(i64, i64), usize>> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(format!("invalid MHS: {violations:?}")));
        }
        let wc = self.complexified_weight();
        let fbar = self.f.conj();
        let mut out = BTreeMap::new();
        for m in self.w.jump_indices() {
            let piece = Quotient::new(wc.level(m), &wc.level(m - 1))?;
            if piece.dim() == 0 {
                continue;
            }
            let levels = self.f.levels();
            let (Some(&f_lo), Some(&f_hi)) = (levels.first(), levels.last()) else {
                continue;
            };
            for p in (f_lo.min(m - f_hi) - 1)..=(f_hi.max(m - f_lo) + 1) {
                let q = m - p;
                let a = piece.subspace_classes(&self.f.at(p).intersect(&wc.level(m))?)?;
                let b = piece.subspace_classes(&fbar.at(q).intersect(&wc.level(m))?)?;
                let v = a.intersect(&b)?;
                if !v.is_zero() {
                    out.insert((p, q), v.dim());
                }
            }
        }
        Ok(out)
    }
}

/// A weight- and Hodge-compatible rational map of mixed Hodge structures.
#[derive(Clone, Debug)]
pub struct MhsMap {
    source: MixedHodgeStructure,
    target: MixedHodgeStructure,
    matrix: Matrix<Rat>,
}

impl MhsMap {
    pub fn new(
        source: MixedHodgeStructure,
        target: MixedHodgeStructure,
        matrix: Matrix<Rat>,
    ) -> Result<Self> {
        let map = MhsMap { source, target, matrix };
        map.verify()?;
        Ok(map)
    }

    pub fn verify(&self) -> Result<()> {
        if self.matrix.rows() != self.target.dim || self.matrix.cols() != self.source.dim {
            return Err(Error::Dimension("MHS map shape mismatch".into()));
        }
        for m in self.source.w.jump_indices() {
            let image = self.source.w.level(m).image_under(&self.matrix);
            if !self.target.w.level(m).contains(&image) {
                return Err(Error::Precondition(format!(
                    "map does not preserve the weight filtration at {m}"
                )));
            }
        }
        let mc = complexify(&self.matrix);
        for p in self.source.f.levels() {
            let image = self.source.f.at(p).image_under(&mc);
            if !self.target.f.at(p).contains(&image) {
                return Err(Error::Precondition(format!(
                    "map does not preserve the Hodge filtration at {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.matrix
    }

    pub fn source(&self) -> &MixedHodgeStructure {
        &self.source
    }

    pub fn target(&self) -> &MixedHodgeStructure {
        &self.target
    }
}

/// The two-index splitting of the complexification of an MHS.
#[derive(Clone, Debug)]
pub struct BigradingSplit {
    dim: usize,
    pieces: BTreeMap<(i64, i64), Subspace<GaussRat>>,
}

impl BigradingSplit {
    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace<GaussRat>> {
        &self.pieces
    }

    pub fn piece(&self, p: i64, q: i64) -> Subspace<GaussRat> {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.dim))
    }

    /// Collapses the bigrading to a weight grading `V_w = ⊕_{p+q=w}`.
    pub fn weight_grading(&self) -> Result<BTreeMap<i64, Subspace<GaussRat>>> {
        let mut out: BTreeMap<i64, Subspace<GaussRat>> = BTreeMap::new();
        for (&(p, q), s) in &self.pieces {
            let entry = out.entry(p + q).or_insert_with(|| Subspace::zero(self.dim));
            *entry = entry.sum(s)?;
        }
        Ok(out)
    }
}

/// The canonical splitting `I^{p,q} = (F^p ∩ W_{p+q}) ∩ (conj(F)^q ∩ W_{p+q}
/// + Σ_{i>0} conj(F)^{q-i} ∩ W_{p+q-1-i})`, evaluated literally and then
/// verified to be a direct-sum refinement of `W`.
pub fn deligne_splitting(v: &MixedHodgeStructure) -> Result<BigradingSplit> {
    let violations = v.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid MHS: {violations:?}")));
    }
    if v.dim == 0 {
        return Ok(BigradingSplit { dim: 0, pieces: BTreeMap::new() });
    }
    let wc = v.complexified_weight();
    let fbar = v.f.conj();
    let w_lo = wc.min_jump().expect("nonzero dimension");
    let w_hi = wc.max_jump().expect("nonzero dimension");
    let levels = v.f.levels();
    let (&f_lo, &f_hi) = (levels.first().unwrap(), levels.last().unwrap());

    let mut pieces = BTreeMap::new();
    for p in (f_lo - 1)..=(f_hi + 1) {
        for q in (w_lo - f_hi - 1)..=(w_hi - f_lo + 1) {
            let m = p + q;
            if m < w_lo || m > w_hi {
                continue;
            }
            let mut correction = fbar.at(q).intersect(&wc.level(m))?;
            let mut i = 1;
            while m - 1 - i >= w_lo - 1 {
                let term = fbar.at(q - i).intersect(&wc.level(m - 1 - i))?;
                correction = correction.sum(&term)?;
                i += 1;
            }
            let piece = v.f.at(p).intersect(&wc.level(m))?.intersect(&correction)?;
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
    }
    let split = BigradingSplit { dim: v.dim, pieces };

    // direct sum refining W: both checked before returning
    let mut total = Subspace::zero(v.dim);
    let mut dim_sum = 0;
    for s in split.pieces.values() {
        total = total.sum(s)?;
        dim_sum += s.dim();
    }
    if dim_sum != v.dim || total.dim() != v.dim {
        return Err(Error::Internal("splitting pieces do not form a direct sum".into()));
    }
    for m in wc.jump_indices() {
        let mut below = Subspace::zero(v.dim);
        for (&(p, q), s) in &split.pieces {
            if p + q <= m {
                below = below.sum(s)?;
            }
        }
        if below != wc.level(m) {
            return Err(Error::Internal(format!(
                "splitting does not refine the weight filtration at {m}"
            )));
        }
    }
    Ok(split)
}

/// `f(I^{p,q}(source)) ⊆ I^{p,q}(target)` for every piece.
pub fn splitting_functorial(f: &MhsMap) -> Result<bool> {
    let src = deligne_splitting(f.source())?;
    let tgt = deligne_splitting(f.target())?;
    let mc = complexify(f.matrix());
    for (&(p, q), s) in src.pieces() {
        if !tgt.piece(p, q).contains(&s.image_under(&mc)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `W_p = Σ_{i+j<=p} im(W_i ⊗ W_j)` on plain filtered spaces.
pub fn tensor_filtrations<K: Scalar>(
    a: &Filtration<K>,
    b: &Filtration<K>,
) -> Result<Filtration<K>> {
    let ambient = a.ambient() * b.ambient();
    if ambient == 0 {
        return Ok(Filtration::trivial(0, 0));
    }
    let (a_lo, a_hi) = (a.min_jump().unwrap(), a.max_jump().unwrap());
    let (b_lo, b_hi) = (b.min_jump().unwrap(), b.max_jump().unwrap());
    let mut levels = BTreeMap::new();
    for p in (a_lo + b_lo)..=(a_hi + b_hi) {
        let mut rows: Vec<Vec<K>> = Vec::new();
        for i in a_lo..=a_hi {
            for j in b_lo..=b_hi {
                if i + j > p {
                    continue;
                }
                let (sa, sb) = (a.level(i), b.level(j));
                if sa.is_zero() || sb.is_zero() {
                    continue;
                }
                let kron = sa.basis().kronecker(sb.basis());
                for r in 0..kron.rows() {
                    rows.push(kron.row(r));
                }
            }
        }
        levels.insert(p, Subspace::span_of(ambient, &rows));
    }
    Filtration::from_levels(ambient, levels)
}

/// `W_p Hom = {f : f(W_q src) ⊆ W_{q+p} tgt for all q}` on the row-major
/// flattening of matrices `tgt-dim × src-dim`.
pub fn hom_filtration<K: Scalar>(
    src: &Filtration<K>,
    tgt: &Filtration<K>,
) -> Result<Filtration<K>> {
    let ambient = src.ambient() * tgt.ambient();
    if ambient == 0 {
        return Ok(Filtration::trivial(0, 0));
    }
    let (s_lo, s_hi) = (src.min_jump().unwrap(), src.max_jump().unwrap());
    let (t_lo, t_hi) = (tgt.min_jump().unwrap(), tgt.max_jump().unwrap());
    let mut levels = BTreeMap::new();
    for p in (t_lo - s_hi - 1)..=(t_hi - s_lo) {
        let mut constraints: Vec<Vec<K>> = Vec::new();
        for q in s_lo..=s_hi {
            let w_src = src.level(q);
            if w_src.is_zero() {
                continue;
            }
            let w_tgt = tgt.level(q + p);
            if w_tgt.is_full() {
                continue;
            }
            let proj = Quotient::by_subspace(&w_tgt).projection();
            for r in 0..w_src.dim() {
                let w_row = Matrix::from_rows(vec![w_src.basis().row(r)]);
                let block = proj.kronecker(&w_row);
                for i in 0..block.rows() {
                    constraints.push(block.row(i));
                }
            }
        }
        let level = if constraints.is_empty() {
            Subspace::full(ambient)
        } else {
            Subspace::from_rows(Matrix::from_rows(constraints).kernel_basis())
        };
        levels.insert(p, level);
    }
    Filtration::from_levels(ambient, levels)
}

pub struct MhsOps {
    pub tensor: MixedHodgeStructure,
    pub hom: MixedHodgeStructure,
    pub dual_of_first: MixedHodgeStructure,
}

/// Tensor and Hom with the filtered rules, and the dual (Hom into the
/// unit, which collapses to annihilator filtrations).
pub fn mhs_ops(v: &MixedHodgeStructure, w: &MixedHodgeStructure) -> Result<MhsOps> {
    let tensor = MixedHodgeStructure::new(
        v.dim * w.dim,
        tensor_filtrations(&v.w, &w.w)?,
        HodgeFiltration::from_stored(tensor_filtrations(v.f.stored(), w.f.stored())?),
    )?;
    // Hom(V, W) flattened row-major as (w-index, v-index)
    let hom = MixedHodgeStructure::new(
        v.dim * w.dim,
        hom_filtration(&v.w, &w.w)?,
        HodgeFiltration::from_stored(hom_filtration(v.f.stored(), w.f.stored())?),
    )?;
    let dual_of_first =
        MixedHodgeStructure::new(v.dim, v.w.dual(), v.f.dual())?;
    Ok(MhsOps { tensor, hom, dual_of_first })
}

/// Weight levels at which the dimension jumps, with the graded dimension.
pub fn weight_profile(v: &MixedHodgeStructure) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    let mut previous = 0;
    for m in v.w.jump_indices() {
        let dim = v.w.level(m).dim();
        if dim > previous {
            out.insert(m, dim - previous);
        }
        previous = dim;
    }
    out
}

/// Collects every index that appears in either structure; convenience for
/// scanning.
pub fn combined_weight_indices(a: &MixedHodgeStructure, b: &MixedHodgeStructure) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    out.extend(a.w.jump_indices());
    out.extend(b.w.jump_indices());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss_i;

    fn gspan(vectors: Vec<Vec<GaussRat>>) -> Subspace<GaussRat> {
        Subspace::span_of(vectors[0].len(), &vectors)
    }

    /// Weight-1 synthetic structure: `F^1 = span(e1 + i e2)`.
    pub(crate) fn weight_one_fixture() -> MixedHodgeStructure {
        let one = <GaussRat as Scalar>::one();
        let i = gauss_i();
        let f1 = gspan(vec![vec![one, i]]);
        let mut levels = BTreeMap::new();
        levels.insert(1, f1);
        levels.insert(0, Subspace::full(2));
        MixedHodgeStructure::new(
            2,
            Filtration::trivial(2, 1),
            HodgeFiltration::from_decreasing_levels(2, levels).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tate_is_valid_and_pure() {
        let t = MixedHodgeStructure::tate(1);
        assert!(t.is_valid());
        let h = t.hodge_numbers().unwrap();
        assert_eq!(h.get(&(1, 1)), Some(&1));
        let tn = MixedHodgeStructure::tate(-2);
        assert!(tn.is_valid());
        assert_eq!(tn.hodge_numbers().unwrap().get(&(-2, -2)), Some(&1));
    }

    #[test]
    fn weight_one_structure_validates() {
        let v = weight_one_fixture();
        assert!(v.is_valid());
        let h = v.hodge_numbers().unwrap();
        assert_eq!(h.get(&(1, 0)), Some(&1));
        assert_eq!(h.get(&(0, 1)), Some(&1));
    }

    #[test]
    fn conjugation_asymmetric_fails_at_named_cell() {
        let one = <GaussRat as Scalar>::one();
        let zero = <GaussRat as Scalar>::zero();
        let mut levels = BTreeMap::new();
        levels.insert(1, gspan(vec![vec![one, zero]]));
        levels.insert(0, Subspace::full(2));
        let v = MixedHodgeStructure::new(
            2,
            Filtration::trivial(2, 1),
            HodgeFiltration::from_decreasing_levels(2, levels).unwrap(),
        )
        .unwrap();
        let violations = v.validate();
        assert!(!violations.is_empty());
        let hit = violations.iter().any(|viol| {
            viol.locus.get("m") == Some(&1)
                && viol.locus.get("p") == Some(&1)
                && viol.locus.get("q") == Some(&0)
        });
        assert!(hit, "expected a violation at (1,1,0), got {violations:?}");
    }

    #[test]
    fn deligne_splitting_of_tate() {
        let split = deligne_splitting(&MixedHodgeStructure::tate(1)).unwrap();
        assert_eq!(split.pieces().len(), 1);
        assert!(split.piece(1, 1).is_full());
    }

    #[test]
    fn deligne_splitting_of_extension_fixture() {
        // e0 of weight 0, e2 of weight 2, F^1 = span(e2 + i e0)
        let one = <GaussRat as Scalar>::one();
        let i = gauss_i();
        let mut w_levels = BTreeMap::new();
        w_levels.insert(0, Subspace::span_of(2, &[vec![Rat::from_int(1), Rat::from_int(0)]]));
        w_levels.insert(2, Subspace::full(2));
        let mut f_levels = BTreeMap::new();
        f_levels.insert(1, gspan(vec![vec![i.clone(), one.clone()]]));
        f_levels.insert(0, Subspace::full(2));
        let v = MixedHodgeStructure::new(
            2,
            Filtration::from_levels(2, w_levels).unwrap(),
            HodgeFiltration::from_decreasing_levels(2, f_levels).unwrap(),
        )
        .unwrap();
        assert!(v.is_valid());
        let split = deligne_splitting(&v).unwrap();
        assert_eq!(split.piece(0, 0).dim(), 1);
        assert_eq!(split.piece(1, 1).dim(), 1);
        // the (1,1) piece is the F^1 line itself
        assert!(split.piece(1, 1).contains(&gspan(vec![vec![i, one]])));
    }

    #[test]
    fn tate_tensor_adds_twists() {
        let a = MixedHodgeStructure::tate(1);
        let b = MixedHodgeStructure::tate(2);
        let ops = mhs_ops(&a, &b).unwrap();
        assert!(ops.tensor.is_valid());
        assert_eq!(weight_profile(&ops.tensor).get(&6), Some(&1));
        assert_eq!(ops.tensor.hodge_numbers().unwrap().get(&(3, 3)), Some(&1));
    }

    #[test]
    fn dual_of_tate_negates() {
        let ops = mhs_ops(&MixedHodgeStructure::tate(1), &MixedHodgeStructure::unit()).unwrap();
        assert!(ops.dual_of_first.is_valid());
        assert_eq!(weight_profile(&ops.dual_of_first).get(&-2), Some(&1));
        assert_eq!(ops.dual_of_first.hodge_numbers().unwrap().get(&(-1, -1)), Some(&1));
        // hom(V, unit) agrees with the dual
        assert_eq!(ops.hom, ops.dual_of_first);
    }

    #[test]
    fn dual_of_weight_one_fixture_is_pure_weight_minus_one() {
        let v = weight_one_fixture();
        let ops = mhs_ops(&v, &MixedHodgeStructure::unit()).unwrap();
        assert!(ops.dual_of_first.is_valid());
        assert_eq!(weight_profile(&ops.dual_of_first).get(&-1), Some(&2));
        let h = ops.dual_of_first.hodge_numbers().unwrap();
        assert_eq!(h.get(&(-1, 0)), Some(&1));
        assert_eq!(h.get(&(0, -1)), Some(&1));
    }
}
