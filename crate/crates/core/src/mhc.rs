//! Complexes of mixed Hodge structures, mixed Hodge complexes with the
//! axioms MH0 (finite-type homology), MH1 (graded differential strict for
//! the Hodge filtration) and MH2 (graded homology pure), the shift functor
//! between the two, homology mixed Hodge structures, duals and tensors.
//!
//! Index bookkeeping, fixed once: filtrations are increasing, the shift is
//! `(TW)_p K_n = W_{p-n} K_n`, décalage is
//! `(Dec W)_p K_n = W_{p+n} K_n ∩ d^{-1}(W_{p+n-1})`, so `Dec ∘ T = id` on
//! the nose and homology of a shifted complex recovers its original weight
//! filtration. Under this convention the graded piece `Gr^{TW}_p K_n` of a
//! shifted complex is `Gr^W_{p-n} K_n`, so MH2 asks `H_n(Gr_p)` to be pure
//! of weight `p - n`.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{ChainComplex, ChainMap, Direction, Violation};
use crate::error::{Error, Result};
use crate::filtration::{
    complexify_filtered, decalage, filtered_tensor, shift_t, strictness_check, FilteredComplex,
    Filtration,
};
use crate::matrix::{complexify, Matrix};
use crate::mhs::{HodgeFiltration, MixedHodgeStructure};
use crate::scalar::{GaussRat, Rat};
use crate::subspace::Subspace;

/// A bounded chain complex of mixed Hodge structures: one MHS per degree,
/// differentials compatible with both filtrations.
#[derive(Clone, Debug)]
pub struct MhsComplex {
    complex: ChainComplex<Rat>,
    mhs: BTreeMap<i64, MixedHodgeStructure>,
}

impl MhsComplex {
    pub fn new(complex: ChainComplex<Rat>, mhs: BTreeMap<i64, MixedHodgeStructure>) -> Result<Self> {
        for (&n, &k) in complex.dims() {
            let v = mhs
                .get(&n)
                .ok_or_else(|| Error::Invalid(format!("missing MHS at degree {n}")))?;
            if v.dim() != k {
                return Err(Error::Dimension(format!(
                    "MHS at degree {n} has dimension {} instead of {k}",
                    v.dim()
                )));
            }
        }
        let mhs = mhs.into_iter().filter(|(n, _)| complex.dim(*n) > 0).collect();
        Ok(MhsComplex { complex, mhs })
    }

    pub fn complex(&self) -> &ChainComplex<Rat> {
        &self.complex
    }

    pub fn mhs(&self, n: i64) -> Option<&MixedHodgeStructure> {
        self.mhs.get(&n)
    }

    pub fn structures(&self) -> &BTreeMap<i64, MixedHodgeStructure> {
        &self.mhs
    }

    /// The underlying weight-filtered complex over `Q`.
    pub fn weight_filtered(&self) -> FilteredComplex<Rat> {
        let w = self
            .mhs
            .iter()
            .map(|(&n, v)| (n, v.weight_filtration().clone()))
            .collect();
        FilteredComplex::new(self.complex.clone(), w).expect("dimensions were checked")
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = self.complex.validate();
        for (&n, v) in &self.mhs {
            for violation in v.validate() {
                violations.push(violation.at("degree", n));
            }
        }
        // differentials must be maps of MHS
        for &n in self.complex.dims().keys() {
            let (Some(src), Some(tgt)) = (self.mhs.get(&n), self.mhs.get(&(n - 1))) else {
                if self.complex.dim(n - 1) > 0 || self.complex.d(n).is_zero() {
                    continue;
                }
                continue;
            };
            let d = self.complex.d(n);
            for m in src.weight_filtration().jump_indices() {
                let image = src.weight_filtration().level(m).image_under(&d);
                if !tgt.weight_filtration().level(m).contains(&image) {
                    violations.push(Violation::new(
                        "weight-compatibility",
                        &[("degree", n), ("index", m)],
                        "differential does not preserve the weight filtration",
                    ));
                }
            }
            let dc = complexify(&d);
            for a in src.hodge_filtration().levels() {
                let image = src.hodge_filtration().at(a).image_under(&dc);
                if !tgt.hodge_filtration().at(a).contains(&image) {
                    violations.push(Violation::new(
                        "hodge-compatibility",
                        &[("degree", n), ("level", a)],
                        "differential does not preserve the Hodge filtration",
                    ));
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The mixed Hodge structure on each homology space, computed directly:
    /// weight filtration induced by `W`, Hodge filtration induced by `F` on
    /// complexified cycles (rational and complexified homology share their
    /// representative bases since elimination is field-agnostic).
    pub fn homology_mhs(&self) -> Result<BTreeMap<i64, MixedHodgeStructure>> {
        let filtered = self.weight_filtered();
        let h = self.complex.homology()?;
        let w_h = filtered.homology_filtration(&h)?;
        let complexified = complexify_filtered(&filtered);
        let hc = complexified.complex().homology()?;
        let mut out = BTreeMap::new();
        for (&n, v) in &self.mhs {
            let dim = hc.dim(n);
            if dim == 0 {
                continue;
            }
            let q = hc.quotient(n).expect("nonzero homology");
            let cycles = q.big().clone();
            let mut stored_levels = BTreeMap::new();
            for m in v.hodge_filtration().stored().jump_indices() {
                let level = v.hodge_filtration().stored().level(m).intersect(&cycles)?;
                stored_levels.insert(m, q.subspace_classes(&level)?);
            }
            let f = HodgeFiltration::from_stored(Filtration::from_levels(dim, stored_levels)?);
            let w = w_h.get(&n).cloned().unwrap_or_else(|| Filtration::trivial(dim, 0));
            out.insert(n, MixedHodgeStructure::new(dim, w, f)?);
        }
        Ok(out)
    }

    /// Graded dimensions of the weight filtration induced on homology,
    /// keyed by `(degree, weight)`; the input of purity checking.
    pub fn weight_graded_homology_dims(&self) -> Result<BTreeMap<(i64, i64), usize>> {
        let filtered = self.weight_filtered();
        let h = self.complex.homology()?;
        let w_h = filtered.homology_filtration(&h)?;
        let mut out = BTreeMap::new();
        for (&n, f) in &w_h {
            let mut previous = 0;
            for p in f.jump_indices() {
                let dim = f.level(p).dim();
                if dim > previous {
                    out.insert((n, p), dim - previous);
                }
                previous = dim;
            }
        }
        Ok(out)
    }
}

/// A zig-zag of filtered complexes over `Q(i)` connecting the complexified
/// rational part of a mixed Hodge complex to its complex part.
#[derive(Clone, Debug)]
pub struct FilteredZigZag {
    objects: Vec<FilteredComplex<GaussRat>>,
    steps: Vec<(Direction, BTreeMap<i64, Matrix<GaussRat>>)>,
}

impl FilteredZigZag {
    pub fn identity(object: FilteredComplex<GaussRat>) -> Self {
        FilteredZigZag { objects: vec![object], steps: Vec::new() }
    }

    pub fn new(
        objects: Vec<FilteredComplex<GaussRat>>,
        steps: Vec<(Direction, BTreeMap<i64, Matrix<GaussRat>>)>,
    ) -> Result<Self> {
        if objects.len() != steps.len() + 1 {
            return Err(Error::Invalid("zig-zag must have one more object than steps".into()));
        }
        Ok(FilteredZigZag { objects, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn objects(&self) -> &[FilteredComplex<GaussRat>] {
        &self.objects
    }

    pub fn steps(&self) -> &[(Direction, BTreeMap<i64, Matrix<GaussRat>>)] {
        &self.steps
    }

    pub fn first(&self) -> &FilteredComplex<GaussRat> {
        self.objects.first().unwrap()
    }

    pub fn last(&self) -> &FilteredComplex<GaussRat> {
        self.objects.last().unwrap()
    }

    fn endpoints_of_step(&self, i: usize) -> (&FilteredComplex<GaussRat>, &FilteredComplex<GaussRat>) {
        match self.steps[i].0 {
            Direction::Forward => (&self.objects[i], &self.objects[i + 1]),
            Direction::Backward => (&self.objects[i + 1], &self.objects[i]),
        }
    }

    fn chain_map_of_step(&self, i: usize) -> Result<ChainMap<GaussRat>> {
        let (src, tgt) = self.endpoints_of_step(i);
        ChainMap::new(src.complex().clone(), tgt.complex().clone(), self.steps[i].1.clone())
    }

    /// Shape, chain-map, weight-compatibility and per-weight graded
    /// quasi-isomorphism checks for every step.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (idx, object) in self.objects.iter().enumerate() {
            for mut v in object.validate() {
                v.locus.insert("object".into(), idx as i64);
                violations.push(v);
            }
        }
        for i in 0..self.steps.len() {
            let (src, tgt) = self.endpoints_of_step(i);
            let map = match self.chain_map_of_step(i) {
                Ok(m) => m,
                Err(e) => {
                    violations.push(Violation::new(
                        "comparison-chain-map",
                        &[("step", i as i64)],
                        e.to_string(),
                    ));
                    continue;
                }
            };
            // weight compatibility
            let mut weights = BTreeSet::new();
            for f in src.filtrations().values() {
                weights.extend(f.jump_indices());
            }
            for f in tgt.filtrations().values() {
                weights.extend(f.jump_indices());
            }
            let mut compatible = true;
            for &n in src.complex().dims().keys() {
                for &p in &weights {
                    let image = src.level(n, p).image_under(&map.component(n));
                    if !tgt.level(n, p).contains(&image) {
                        violations.push(Violation::new(
                            "comparison-weight-compatibility",
                            &[("step", i as i64), ("degree", n), ("index", p)],
                            "comparison map does not preserve the weight filtration",
                        ));
                        compatible = false;
                    }
                }
            }
            if !compatible {
                continue;
            }
            // graded quasi-isomorphism in every weight
            match (src.gr(), tgt.gr()) {
                (Ok((gr_src, pres_src)), Ok((gr_tgt, pres_tgt))) => {
                    for &p in &weights {
                        let result = graded_column_quasi_iso(
                            &map, &gr_src, &pres_src, &gr_tgt, &pres_tgt, p,
                        );
                        match result {
                            Ok(true) => {}
                            Ok(false) => violations.push(Violation::new(
                                "comparison-graded-quasi-iso",
                                &[("step", i as i64), ("index", p)],
                                "comparison map is not a quasi-isomorphism on this graded piece",
                            )),
                            Err(e) => violations.push(Violation::new(
                                "comparison-graded-quasi-iso",
                                &[("step", i as i64), ("index", p)],
                                e.to_string(),
                            )),
                        }
                    }
                }
                _ => violations.push(Violation::new(
                    "comparison-graded",
                    &[("step", i as i64)],
                    "could not form associated graded of a comparison endpoint",
                )),
            }
        }
        violations
    }

    /// Composite isomorphism on degree-`n` homology from the first object
    /// to the last (backward steps inverted).
    pub fn transport_on_homology(&self, n: i64) -> Result<Matrix<GaussRat>> {
        let h0 = self.objects[0].complex().homology()?;
        let mut acc = Matrix::identity(h0.dim(n));
        for i in 0..self.steps.len() {
            let map = self.chain_map_of_step(i)?;
            let induced = map.induced_on_homology()?;
            let dim_tgt = map.target().homology()?.dim(n);
            let dim_src = map.source().homology()?.dim(n);
            let m = induced
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Matrix::zero(dim_tgt, dim_src));
            let m = match self.steps[i].0 {
                Direction::Forward => m,
                Direction::Backward => m
                    .inverse()
                    .map_err(|_| Error::Invalid(format!("comparison step {i} not invertible on H_{n}")))?,
            };
            acc = m.mul(&acc);
        }
        Ok(acc)
    }
}

fn graded_column_quasi_iso(
    map: &ChainMap<GaussRat>,
    gr_src: &crate::bigraded::BigradedComplex<GaussRat>,
    pres_src: &crate::filtration::GrPresentation<GaussRat>,
    gr_tgt: &crate::bigraded::BigradedComplex<GaussRat>,
    pres_tgt: &crate::filtration::GrPresentation<GaussRat>,
    p: i64,
) -> Result<bool> {
    let src_col = gr_src.column(p);
    let tgt_col = gr_tgt.column(p);
    let mut components = BTreeMap::new();
    let mut degrees: BTreeSet<i64> = src_col.dims().keys().copied().collect();
    degrees.extend(tgt_col.dims().keys().copied());
    for &n in &degrees {
        let (src_dim, tgt_dim) = (src_col.dim(n), tgt_col.dim(n));
        if src_dim == 0 {
            components.insert(n, Matrix::zero(tgt_dim, 0));
            continue;
        }
        let src_piece = pres_src.piece(n, p).expect("piece exists for nonzero dim");
        let images = map.component(n).apply_to_rows(&src_piece.representatives());
        let component = if tgt_dim == 0 {
            Matrix::zero(0, src_dim)
        } else {
            let tgt_piece = pres_tgt.piece(n, p).expect("piece exists for nonzero dim");
            tgt_piece
                .class_matrix(&images)
                .ok_or_else(|| Error::Internal("graded image escaped its level".into()))?
        };
        components.insert(n, component);
    }
    let graded_map = ChainMap::new(src_col, tgt_col, components)?;
    Ok(crate::complex::map_analysis(&graded_map, None)?.quasi_iso)
}

/// `{(K_Q, W), (K_C, W, F), comparison}` with checkable axioms.
#[derive(Clone, Debug)]
pub struct MixedHodgeComplex {
    rational: FilteredComplex<Rat>,
    complex_part: FilteredComplex<GaussRat>,
    hodge: BTreeMap<i64, HodgeFiltration>,
    comparison: FilteredZigZag,
}

impl MixedHodgeComplex {
    pub fn new(
        rational: FilteredComplex<Rat>,
        complex_part: FilteredComplex<GaussRat>,
        hodge: BTreeMap<i64, HodgeFiltration>,
        comparison: FilteredZigZag,
    ) -> Result<Self> {
        for (&n, &k) in complex_part.complex().dims() {
            let f = hodge
                .get(&n)
                .ok_or_else(|| Error::Invalid(format!("missing Hodge filtration at degree {n}")))?;
            if f.ambient() != k {
                return Err(Error::Dimension(format!(
                    "Hodge filtration at degree {n} has ambient {} instead of {k}",
                    f.ambient()
                )));
            }
        }
        let hodge = hodge.into_iter().filter(|(n, _)| complex_part.complex().dim(*n) > 0).collect();
        Ok(MixedHodgeComplex { rational, complex_part, hodge, comparison })
    }

    pub fn rational(&self) -> &FilteredComplex<Rat> {
        &self.rational
    }

    pub fn complex_part(&self) -> &FilteredComplex<GaussRat> {
        &self.complex_part
    }

    pub fn hodge(&self, n: i64) -> Option<&HodgeFiltration> {
        self.hodge.get(&n)
    }

    pub fn hodge_filtrations(&self) -> &BTreeMap<i64, HodgeFiltration> {
        &self.hodge
    }

    pub fn comparison(&self) -> &FilteredZigZag {
        &self.comparison
    }

    /// Purity weight demanded of `H_n(Gr^W_p)` under this crate's index
    /// convention.
    pub fn mh2_weight(p: i64, n: i64) -> i64 {
        p - n
    }

    /// All axioms, itemized: shape and endpoint coherence, the comparison
    /// zig-zag (graded quasi-isomorphisms), MH0 (recorded, always finite
    /// here), MH1 (graded differential strict for `F`), MH2 (graded
    /// homology carries a pure decomposition of weight `p - n`).
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for mut v in self.rational.validate() {
            v.locus.insert("part".into(), 0);
            violations.push(v);
        }
        for mut v in self.complex_part.validate() {
            v.locus.insert("part".into(), 1);
            violations.push(v);
        }
        // F must also be preserved by the differential
        for (&n, f) in &self.hodge {
            let d = self.complex_part.complex().d(n);
            let target = self
                .hodge
                .get(&(n - 1))
                .cloned()
                .unwrap_or_else(|| HodgeFiltration::pure_level(self.complex_part.complex().dim(n - 1), 0));
            for m in f.stored().jump_indices() {
                let image = f.stored().level(m).image_under(&d);
                if self.complex_part.complex().dim(n - 1) > 0
                    && !target.stored().level(m).contains(&image)
                {
                    violations.push(Violation::new(
                        "hodge-compatibility",
                        &[("degree", n), ("stored", m)],
                        "differential does not preserve the Hodge filtration",
                    ));
                }
            }
        }
        // endpoints of the comparison
        let complexified = complexify_filtered(&self.rational);
        if self.comparison.first() != &complexified {
            violations.push(Violation::new(
                "comparison-endpoint",
                &[("side", 0)],
                "first zig-zag object is not the complexified rational part",
            ));
        }
        if self.comparison.last() != &self.complex_part {
            violations.push(Violation::new(
                "comparison-endpoint",
                &[("side", 1)],
                "last zig-zag object is not the complex part",
            ));
        }
        violations.extend(self.comparison.validate());
        if !violations.is_empty() {
            return violations;
        }

        // MH0: bounded complexes of finite-dimensional spaces always have
        // finite-type homology; nothing can fail, the axiom is recorded by
        // construction.

        let (gr, presentations) = match self.complex_part.gr() {
            Ok(x) => x,
            Err(e) => {
                violations.push(Violation::new("gr", &[], e.to_string()));
                return violations;
            }
        };
        let induced_hodge = |n: i64, p: i64| -> Result<Option<Filtration<GaussRat>>> {
            let Some(piece) = presentations.piece(n, p) else {
                return Ok(None);
            };
            if piece.dim() == 0 {
                return Ok(Some(Filtration::trivial(0, 0)));
            }
            let f = self
                .hodge
                .get(&n)
                .ok_or_else(|| Error::Invalid(format!("missing Hodge filtration at degree {n}")))?;
            let w_level = self.complex_part.level(n, p);
            let mut levels = BTreeMap::new();
            for m in f.stored().jump_indices() {
                let inside = f.stored().level(m).intersect(&w_level)?;
                levels.insert(m, piece.subspace_classes(&inside)?);
            }
            Ok(Some(Filtration::from_levels(piece.dim(), levels)?))
        };

        // MH1: strictness of the graded differential
        let mut weights = BTreeSet::new();
        for &(_, p) in gr.dims().keys() {
            weights.insert(p);
        }
        for &p in &weights {
            let column = gr.column(p);
            for &n in column.dims().keys() {
                let (src, tgt) = match (induced_hodge(n, p), induced_hodge(n - 1, p)) {
                    (Ok(Some(a)), Ok(b)) => (a, b.unwrap_or_else(|| Filtration::trivial(0, 0))),
                    (Ok(None), _) => continue,
                    (Err(e), _) | (_, Err(e)) => {
                        violations.push(Violation::new(
                            "MH1",
                            &[("index", p), ("degree", n)],
                            e.to_string(),
                        ));
                        continue;
                    }
                };
                if tgt.ambient() == 0 {
                    continue;
                }
                match strictness_check(&column.d(n), &src, &tgt) {
                    Ok(true) => {}
                    Ok(false) => violations.push(Violation::new(
                        "MH1",
                        &[("index", p), ("degree", n)],
                        "graded differential is not strictly compatible with the Hodge filtration",
                    )),
                    Err(e) => violations.push(Violation::new(
                        "MH1",
                        &[("index", p), ("degree", n)],
                        e.to_string(),
                    )),
                }
            }
        }

        // MH2: pure decomposition of weight p - n on H_n(Gr_p)
        for &p in &weights {
            let column = gr.column(p);
            let homology = match column.homology() {
                Ok(h) => h,
                Err(e) => {
                    violations.push(Violation::new("MH2", &[("index", p)], e.to_string()));
                    continue;
                }
            };
            for &n in column.dims().keys() {
                let h_dim = homology.dim(n);
                if h_dim == 0 {
                    continue;
                }
                let hq = homology.quotient(n).expect("nonzero homology");
                let cell = presentations.piece(n, p).expect("nonzero cell");
                let f_cell = match induced_hodge(n, p) {
                    Ok(Some(f)) => f,
                    _ => continue,
                };
                // induced Hodge filtration on homology coordinates
                let cycles = hq.big().clone();
                let mut f_h_levels = BTreeMap::new();
                let mut level_err = false;
                for m in f_cell.jump_indices() {
                    match f_cell.level(m).intersect(&cycles).and_then(|s| hq.subspace_classes(&s)) {
                        Ok(cls) => {
                            f_h_levels.insert(m, cls);
                        }
                        Err(e) => {
                            violations.push(Violation::new(
                                "MH2",
                                &[("index", p), ("degree", n), ("stored", m)],
                                e.to_string(),
                            ));
                            level_err = true;
                        }
                    }
                }
                if level_err {
                    continue;
                }
                let f_h = match Filtration::from_levels(h_dim, f_h_levels) {
                    Ok(f) => HodgeFiltration::from_stored(f),
                    Err(e) => {
                        violations.push(Violation::new(
                            "MH2",
                            &[("index", p), ("degree", n)],
                            e.to_string(),
                        ));
                        continue;
                    }
                };
                // conjugation on homology coordinates, through representatives
                let conj_classes = |s: &Subspace<GaussRat>| -> Result<Subspace<GaussRat>> {
                    let mut rows = Vec::new();
                    for i in 0..s.dim() {
                        // homology coords -> cell coords -> ambient coords
                        let in_cells = Matrix::from_rows(vec![s.basis().row(i)])
                            .mul(&hq.representatives());
                        let ambient_vec = in_cells.mul(&cell.representatives());
                        let conj = ambient_vec.conj();
                        let back_cell = cell.class_of(conj.row_slice(0)).ok_or_else(|| {
                            Error::Invalid("conjugation leaves the weight level".into())
                        })?;
                        let back_h = hq.class_of(&back_cell).ok_or_else(|| {
                            Error::Invalid("conjugation leaves the cycle space".into())
                        })?;
                        rows.push(back_h);
                    }
                    Ok(Subspace::span_of(h_dim, &rows))
                };
                let weight = Self::mh2_weight(p, n);
                let levels = f_h.levels();
                let (Some(&lo), Some(&hi)) = (levels.first(), levels.last()) else {
                    continue;
                };
                let mut cells: BTreeMap<(i64, i64), Subspace<GaussRat>> = BTreeMap::new();
                let mut conj_failed = false;
                for a in (lo.min(weight - hi) - 1)..=(hi.max(weight - lo) + 1) {
                    let b = weight - a;
                    let fb = match conj_classes(&f_h.at(b)) {
                        Ok(x) => x,
                        Err(e) => {
                            violations.push(Violation::new(
                                "MH2",
                                &[("index", p), ("degree", n), ("p", a), ("q", b)],
                                e.to_string(),
                            ));
                            conj_failed = true;
                            break;
                        }
                    };
                    let piece = f_h.at(a).intersect(&fb).unwrap();
                    if !piece.is_zero() {
                        cells.insert((a, b), piece);
                    }
                }
                if conj_failed {
                    continue;
                }
                let mut sum = Subspace::zero(h_dim);
                let mut dim_sum = 0;
                for s in cells.values() {
                    sum = sum.sum(s).unwrap();
                    dim_sum += s.dim();
                }
                if sum.dim() != h_dim || dim_sum != h_dim {
                    violations.push(Violation::new(
                        "MH2",
                        &[("index", p), ("degree", n), ("weight", weight)],
                        format!(
                            "graded homology is not pure of weight {weight}: pieces span {} of {h_dim}",
                            sum.dim()
                        ),
                    ));
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// The shift functor: `(K, W, F) -> {(K, TW), (K ⊗ Q(i), TW, F)}` with the
/// identity comparison.
pub fn shift_to_mhc(k: &MhsComplex) -> Result<MixedHodgeComplex> {
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid MHS complex: {violations:?}")));
    }
    let rational = shift_t(&k.weight_filtered());
    let complex_part = complexify_filtered(&rational);
    let hodge = k
        .structures()
        .iter()
        .map(|(&n, v)| (n, v.hodge_filtration().clone()))
        .collect();
    let comparison = FilteredZigZag::identity(complex_part.clone());
    MixedHodgeComplex::new(rational, complex_part, hodge, comparison)
}

/// The mixed Hodge structure on each homology space of a mixed Hodge
/// complex: weights from the décalage of `W`, Hodge filtration transported
/// backwards through the comparison zig-zag.
pub fn mhc_homology_mhs(k: &MixedHodgeComplex) -> Result<BTreeMap<i64, MixedHodgeStructure>> {
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid mixed Hodge complex: {violations:?}")));
    }
    let h = k.rational().complex().homology()?;
    let dec = decalage(k.rational())?;
    let w_h = dec.homology_filtration(&h)?;

    let hc = k.complex_part().complex().homology()?;
    let h0 = complexify_filtered(k.rational()).complex().homology()?;
    let mut out = BTreeMap::new();
    for &n in k.rational().complex().dims().keys() {
        let dim = h.dim(n);
        if dim == 0 {
            continue;
        }
        // F on the homology of the complex part
        let q = hc.quotient(n).expect("quasi-isomorphic parts");
        let cycles = q.big().clone();
        let f_n = k
            .hodge(n)
            .ok_or_else(|| Error::Invalid(format!("missing Hodge filtration at degree {n}")))?;
        let transport = k.comparison().transport_on_homology(n)?;
        let back = transport.inverse().map_err(|_| {
            Error::Invalid(format!("comparison does not identify homology at degree {n}"))
        })?;
        let mut stored_levels = BTreeMap::new();
        for m in f_n.stored().jump_indices() {
            let level = f_n.stored().level(m).intersect(&cycles)?;
            let classes = q.subspace_classes(&level)?;
            stored_levels.insert(m, classes.image_under(&back));
        }
        let f_h = HodgeFiltration::from_stored(Filtration::from_levels(h0.dim(n), stored_levels)?);
        let w = w_h.get(&n).cloned().unwrap_or_else(|| Filtration::trivial(dim, 0));
        let v = MixedHodgeStructure::new(dim, w, f_h)?;
        out.insert(n, v);
    }
    Ok(out)
}

/// Linear dual of a mixed Hodge complex: dual complexes, annihilator
/// filtrations, the comparison reversed and dualized.
pub fn mhc_dual(k: &MixedHodgeComplex) -> Result<MixedHodgeComplex> {
    let dual_filtered_rat = |fc: &FilteredComplex<Rat>| -> Result<FilteredComplex<Rat>> {
        let complex = fc.complex().dual();
        let w = complex
            .dims()
            .keys()
            .map(|&n| (n, fc.filtration(-n).dual()))
            .collect();
        FilteredComplex::new(complex, w)
    };
    let dual_filtered_gauss = |fc: &FilteredComplex<GaussRat>| -> Result<FilteredComplex<GaussRat>> {
        let complex = fc.complex().dual();
        let w = complex
            .dims()
            .keys()
            .map(|&n| (n, fc.filtration(-n).dual()))
            .collect();
        FilteredComplex::new(complex, w)
    };
    let rational = dual_filtered_rat(k.rational())?;
    let complex_part = dual_filtered_gauss(k.complex_part())?;
    let hodge: BTreeMap<i64, HodgeFiltration> = complex_part
        .complex()
        .dims()
        .keys()
        .map(|&n| {
            let f = k
                .hodge(-n)
                .cloned()
                .unwrap_or_else(|| HodgeFiltration::pure_level(k.complex_part().complex().dim(-n), 0));
            (n, f.dual())
        })
        .collect();
    let mut objects: Vec<FilteredComplex<GaussRat>> = Vec::new();
    for object in k.comparison().objects().iter().rev() {
        objects.push(dual_filtered_gauss(object)?);
    }
    let mut steps = Vec::new();
    for (dir, components) in k.comparison().steps().iter().rev() {
        let flipped = match dir {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        let dual_components: BTreeMap<i64, Matrix<GaussRat>> =
            components.iter().map(|(&n, m)| (1 - n, m.transpose())).collect();
        steps.push((flipped, dual_components));
    }
    let comparison = FilteredZigZag::new(objects, steps)?;
    MixedHodgeComplex::new(rational, complex_part, hodge, comparison)
}

/// Tensor product of mixed Hodge complexes: filtered tensor on both parts,
/// Hodge filtrations tensored degreewise, comparisons composed
/// sequentially (`a`-steps tensored with the first object of `b`, then
/// `b`-steps tensored with the last object of `a`).
pub fn mhc_tensor(a: &MixedHodgeComplex, b: &MixedHodgeComplex) -> Result<MixedHodgeComplex> {
    let (rational, _) = filtered_tensor(a.rational(), b.rational())?;
    let (complex_part, _) = filtered_tensor(a.complex_part(), b.complex_part())?;

    let hodge_as_filtered = |k: &MixedHodgeComplex| -> Result<FilteredComplex<GaussRat>> {
        let w = k
            .complex_part()
            .complex()
            .dims()
            .keys()
            .map(|&n| {
                (
                    n,
                    k.hodge(n)
                        .map(|f| f.stored().clone())
                        .unwrap_or_else(|| Filtration::trivial(0, 0)),
                )
            })
            .collect();
        FilteredComplex::new(k.complex_part().complex().clone(), w)
    };
    let (hodge_tensor, _) = filtered_tensor(&hodge_as_filtered(a)?, &hodge_as_filtered(b)?)?;
    let hodge: BTreeMap<i64, HodgeFiltration> = hodge_tensor
        .complex()
        .dims()
        .keys()
        .map(|&n| (n, HodgeFiltration::from_stored(hodge_tensor.filtration(n))))
        .collect();

    // sequential composition of the two comparisons
    let mut objects = Vec::new();
    let mut steps: Vec<(Direction, BTreeMap<i64, Matrix<GaussRat>>)> = Vec::new();
    let b_first = b.comparison().first().clone();
    for object in a.comparison().objects() {
        objects.push(filtered_tensor(object, &b_first)?.0);
    }
    for (i, (dir, _)) in a.comparison().steps().iter().enumerate() {
        let map = a.comparison().chain_map_of_step(i)?;
        let id = ChainMap::identity(b_first.complex());
        let tensored = crate::complex::tensor_chain_maps(&map, &id)?;
        let components = tensored
            .source()
            .dims()
            .keys()
            .map(|&n| (n, tensored.component(n)))
            .collect();
        steps.push((*dir, components));
    }
    let a_last = a.comparison().last().clone();
    for object in b.comparison().objects().iter().skip(1) {
        objects.push(filtered_tensor(&a_last, object)?.0);
    }
    for (i, (dir, _)) in b.comparison().steps().iter().enumerate() {
        let map = b.comparison().chain_map_of_step(i)?;
        let id = ChainMap::identity(a_last.complex());
        let tensored = crate::complex::tensor_chain_maps(&id, &map)?;
        let components = tensored
            .source()
            .dims()
            .keys()
            .map(|&n| (n, tensored.component(n)))
            .collect();
        steps.push((*dir, components));
    }
    let comparison = FilteredZigZag::new(objects, steps)?;
    MixedHodgeComplex::new(rational, complex_part, hodge, comparison)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tate_in_degree(n: i64, twist: i64) -> MhsComplex {
        let complex = ChainComplex::concentrated(n, 1);
        let mut mhs = BTreeMap::new();
        mhs.insert(n, MixedHodgeStructure::tate(twist));
        MhsComplex::new(complex, mhs).unwrap()
    }

    #[test]
    fn shift_in_degree_zero_keeps_weights() {
        let k = tate_in_degree(0, 1);
        let mhc = shift_to_mhc(&k).unwrap();
        assert_eq!(mhc.rational().filtration(0).jump_indices(), vec![2]);
        assert!(mhc.is_valid());
    }

    #[test]
    fn shift_in_degree_two_moves_weights() {
        let k = tate_in_degree(2, 1);
        let mhc = shift_to_mhc(&k).unwrap();
        // (TW)_p K_2 = W_{p-2} K_2: the jump moves from 2 to 4
        assert_eq!(mhc.rational().filtration(2).jump_indices(), vec![4]);
        assert!(mhc.is_valid());
        // MH2 weight at (p, n) = (4, 2) is 2: the Tate twist's weight
        assert_eq!(MixedHodgeComplex::mh2_weight(4, 2), 2);
    }

    #[test]
    fn homology_round_trip_for_tate() {
        let k = tate_in_degree(2, 1);
        let mhc = shift_to_mhc(&k).unwrap();
        let recovered = mhc_homology_mhs(&mhc).unwrap();
        let direct = k.homology_mhs().unwrap();
        assert_eq!(recovered.len(), 1);
        assert_eq!(recovered[&2], direct[&2]);
        assert_eq!(crate::mhs::weight_profile(&recovered[&2]).get(&2), Some(&1));
    }

    #[test]
    fn acyclic_complex_has_no_homology_mhs() {
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::identity(1));
        let complex = ChainComplex::new(dims, d).unwrap();
        let mut mhs = BTreeMap::new();
        mhs.insert(0, MixedHodgeStructure::tate(0));
        mhs.insert(1, MixedHodgeStructure::tate(0));
        let k = MhsComplex::new(complex, mhs).unwrap();
        assert!(k.is_valid());
        let mhc = shift_to_mhc(&k).unwrap();
        assert!(mhc.is_valid());
        assert!(mhc_homology_mhs(&mhc).unwrap().is_empty());
    }

    #[test]
    fn dual_negates_homology_weights() {
        let k = tate_in_degree(0, 1);
        let mhc = shift_to_mhc(&k).unwrap();
        let dual = mhc_dual(&mhc).unwrap();
        assert!(dual.is_valid());
        let h = mhc_homology_mhs(&dual).unwrap();
        assert_eq!(crate::mhs::weight_profile(&h[&0]).get(&-2), Some(&1));
    }

    #[test]
    fn tensor_of_shifted_tates_adds_weights() {
        let a = shift_to_mhc(&tate_in_degree(0, 1)).unwrap();
        let b = shift_to_mhc(&tate_in_degree(0, 2)).unwrap();
        let t = mhc_tensor(&a, &b).unwrap();
        assert!(t.is_valid());
        let h = mhc_homology_mhs(&t).unwrap();
        assert_eq!(crate::mhs::weight_profile(&h[&0]).get(&6), Some(&1));
    }
}
