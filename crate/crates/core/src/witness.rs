//! Formality witnesses: the zig-zag `A <- tau(A) -> H(A)` on
//! degree-forgotten complexes, with machine-checked quasi-isomorphism and
//! monoidality obligations, and the end-to-end pipeline from complexes of
//! mixed Hodge structures through a weight splitting.
//!
//! Obligations are always evaluated, never assumed: an impure input
//! produces a witness whose flags are false rather than an error.

use std::collections::BTreeMap;

use crate::bigraded::{
    forget_weight, tensor_bigraded, BigradedComplex, BigradedMap, Cell, WeightLayout,
};
use crate::complex::{map_analysis, ChainMap, Homology};
use crate::error::{Error, Result};
use crate::matrix::{complexify, Matrix};
use crate::mhc::MhsComplex;
use crate::mhs::deligne_splitting;
use crate::purity::{purity_check, purity_of_dims, PurityParams, PurityReport};
use crate::scalar::{GaussRat, Rat, Scalar};
use crate::splitting::{splitting_from_automorphism, FilteredAutomorphism};
use crate::subspace::Subspace;
use crate::truncation::{tau_truncate, TauComplex};

/// The zig-zag `A <- tau(A) -> H(A)` with its evaluated obligations.
#[derive(Clone, Debug)]
pub struct FormalityWitness<K: Scalar> {
    pub alpha: Rat,
    pub purity: PurityReport,
    /// inclusion leg, `U(tau A) -> U(A)`
    pub phi: ChainMap<K>,
    /// projection leg, `U(tau A) -> U(H(A))`
    pub psi: ChainMap<K>,
    pub phi_quasi_iso: bool,
    pub psi_quasi_iso: bool,
    /// `q`-quasi-isomorphism verdicts when a bound was requested
    pub q_bound: Option<i64>,
    pub phi_q_quasi_iso: Option<bool>,
    pub psi_q_quasi_iso: Option<bool>,
}

impl<K: Scalar> FormalityWitness<K> {
    pub fn is_formal(&self) -> bool {
        self.phi_quasi_iso && self.psi_quasi_iso
    }

    pub fn is_q_formal(&self) -> Option<bool> {
        match (self.phi_q_quasi_iso, self.psi_q_quasi_iso) {
            (Some(a), Some(b)) => Some(a && b),
            _ => None,
        }
    }
}

/// Cellwise data shared by the witness and the monoidality checks.
pub struct TauLegs<K: Scalar> {
    pub tau: TauComplex<K>,
    pub homology: BigradedComplex<K>,
    pub column_homology: BTreeMap<i64, Homology<K>>,
}

/// Public handle on the truncation legs of one component, for structure
/// transport.
pub fn transport_legs<K: Scalar>(
    a: &BigradedComplex<K>,
    params: &PurityParams,
) -> Result<TauLegs<K>> {
    tau_legs(a, params)
}

fn tau_legs<K: Scalar>(a: &BigradedComplex<K>, params: &PurityParams) -> Result<TauLegs<K>> {
    let tau = tau_truncate(a, params)?;
    let column_homology = a.column_homology()?;
    let mut h_dims = BTreeMap::new();
    for (&p, h) in &column_homology {
        for (n, k) in h.dims() {
            h_dims.insert((n, p), k);
        }
    }
    let homology = BigradedComplex::new(h_dims, BTreeMap::new())?;
    Ok(TauLegs { tau, homology, column_homology })
}

/// Per-cell component of the projection leg: at the threshold the kernel
/// maps onto homology classes, above it the component vanishes.
fn psi_component<K: Scalar>(
    legs: &TauLegs<K>,
    a: &BigradedComplex<K>,
    params: &PurityParams,
    cell: Cell,
) -> Result<Matrix<K>> {
    let (n, p) = cell;
    let tau_dim = legs.tau.complex().dim(cell);
    let h_dim = legs.homology.dim(cell);
    if tau_dim == 0 || h_dim == 0 || n != params.threshold(p) {
        return Ok(Matrix::zero(h_dim, tau_dim));
    }
    let h = &legs.column_homology[&p];
    let emb = legs.tau.embedding(cell, a);
    let mut cols = Vec::with_capacity(tau_dim);
    for j in 0..tau_dim {
        let vector: Vec<K> = (0..emb.rows()).map(|i| emb.get(i, j).clone()).collect();
        let class = h
            .class_of(n, &vector)
            .ok_or_else(|| Error::Internal("threshold kernel vector is not a cycle".into()))?;
        cols.push(class);
    }
    Ok(Matrix::from_fn(h_dim, tau_dim, |i, j| cols[j][i].clone()))
}

/// Assembles a map `U(src) -> U(tgt)` out of weight-matching cell blocks.
fn assemble_forgotten<K: Scalar>(
    src: &BigradedComplex<K>,
    src_layout: &WeightLayout,
    tgt: &BigradedComplex<K>,
    tgt_layout: &WeightLayout,
    component: impl Fn(Cell) -> Result<Matrix<K>>,
) -> Result<BTreeMap<i64, Matrix<K>>> {
    let mut out = BTreeMap::new();
    let mut degrees: Vec<i64> = src.degrees();
    degrees.extend(tgt.degrees());
    degrees.sort_unstable();
    degrees.dedup();
    for n in degrees {
        let mut m = Matrix::zero(tgt_layout.dim(n), src_layout.dim(n));
        for block in src_layout.blocks.get(&n).into_iter().flatten() {
            let Some(tgt_block) = tgt_layout.block(n, block.weight) else {
                continue;
            };
            let cell = component((n, block.weight))?;
            for i in 0..cell.rows() {
                for j in 0..cell.cols() {
                    let v = cell.get(i, j);
                    if !v.is_zero() {
                        m.set(tgt_block.offset + i, block.offset + j, v.clone());
                    }
                }
            }
        }
        out.insert(n, m);
    }
    Ok(out)
}

/// Builds the witness zig-zag for a bigraded complex and evaluates both
/// legs, optionally against a partial-formality bound.
pub fn zigzag_maps<K: Scalar>(
    a: &BigradedComplex<K>,
    params: &PurityParams,
    q_bound: Option<i64>,
) -> Result<FormalityWitness<K>> {
    let legs = tau_legs(a, params)?;
    let (ua, a_layout) = forget_weight(a);
    let (utau, tau_layout) = forget_weight(legs.tau.complex());
    let (uh, h_layout) = forget_weight(&legs.homology);

    let phi_components = assemble_forgotten(
        legs.tau.complex(),
        &tau_layout,
        a,
        &a_layout,
        |cell| Ok(legs.tau.embedding(cell, a)),
    )?;
    let phi = ChainMap::new(utau.clone(), ua, phi_components)?;

    let psi_components = assemble_forgotten(
        legs.tau.complex(),
        &tau_layout,
        &legs.homology,
        &h_layout,
        |cell| psi_component(&legs, a, params, cell),
    )?;
    let psi = ChainMap::new(utau, uh, psi_components)?;

    let phi_analysis = map_analysis(&phi, q_bound)?;
    let psi_analysis = map_analysis(&psi, q_bound)?;
    let purity = purity_check(a, params, q_bound)?;
    Ok(FormalityWitness {
        alpha: params.alpha().clone(),
        purity,
        phi,
        psi,
        phi_quasi_iso: phi_analysis.quasi_iso,
        psi_quasi_iso: psi_analysis.quasi_iso,
        q_bound,
        phi_q_quasi_iso: phi_analysis.q_quasi_iso,
        psi_q_quasi_iso: psi_analysis.q_quasi_iso,
    })
}

/// Same zig-zag, obligations evaluated as `q`-quasi-isomorphisms.
pub fn q_formality_witness<K: Scalar>(
    a: &BigradedComplex<K>,
    params: &PurityParams,
    q: i64,
) -> Result<FormalityWitness<K>> {
    zigzag_maps(a, params, Some(q))
}

/// Report of the lax-monoidality obligations of the truncation.
#[derive(Clone, Debug)]
pub struct MonoidalityReport {
    /// cell pairs where `tau(A) ⊗ tau(B) ⊄ tau(A⊗B)` (none, by the
    /// threshold superadditivity — but verified)
    pub inclusion_failures: Vec<(Cell, Cell)>,
    /// cells of the source where the inclusion legs disagree
    pub phi_square_failures: Vec<Cell>,
    /// cells where the projection legs disagree with the Künneth map
    pub psi_square_failures: Vec<Cell>,
}

impl MonoidalityReport {
    pub fn inclusion_holds(&self) -> bool {
        self.inclusion_failures.is_empty()
    }

    pub fn squares_commute(&self) -> bool {
        self.phi_square_failures.is_empty() && self.psi_square_failures.is_empty()
    }
}

/// Tensor of cellwise maps whose components preserve the cell label:
/// block `(ca, cb)` of the source tensor maps by `f(ca) ⊗ g(cb)` into
/// block `(ca, cb)` of the target tensor.
fn tensor_cellwise<K: Scalar>(
    src_a: &BigradedComplex<K>,
    src_b: &BigradedComplex<K>,
    tgt_a: &BigradedComplex<K>,
    tgt_b: &BigradedComplex<K>,
    f: impl Fn(Cell) -> Result<Matrix<K>>,
    g: impl Fn(Cell) -> Result<Matrix<K>>,
) -> Result<(BigradedComplex<K>, BigradedComplex<K>, BTreeMap<Cell, Matrix<K>>)> {
    let (src, src_layout) = tensor_bigraded(src_a, src_b);
    let (tgt, tgt_layout) = tensor_bigraded(tgt_a, tgt_b);
    let mut components = BTreeMap::new();
    for &cell in src.dims().keys() {
        let mut m = Matrix::zero(tgt_layout.dim(cell), src_layout.dim(cell));
        for block in src_layout.blocks.get(&cell).into_iter().flatten() {
            let Some(tgt_block) = tgt_layout.block(cell, block.a_cell) else {
                continue;
            };
            if tgt_block.b_cell != block.b_cell {
                continue;
            }
            let k = f(block.a_cell)?.kronecker(&g(block.b_cell)?);
            for i in 0..k.rows() {
                for j in 0..k.cols() {
                    let v = k.get(i, j);
                    if !v.is_zero() {
                        m.set(tgt_block.offset + i, block.offset + j, v.clone());
                    }
                }
            }
        }
        components.insert(cell, m);
    }
    Ok((src, tgt, components))
}

/// Verifies the monoidality inclusion `tau(A) ⊗ tau(B) ⊆ tau(A⊗B)`
/// cellwise, and that both legs commute with the Künneth maps.
pub fn monoidality_check<K: Scalar>(
    a: &BigradedComplex<K>,
    b: &BigradedComplex<K>,
    params: &PurityParams,
) -> Result<MonoidalityReport> {
    let (t, t_layout) = tensor_bigraded(a, b);
    let legs_a = tau_legs(a, params)?;
    let legs_b = tau_legs(b, params)?;
    let legs_t = tau_legs(&t, params)?;

    let mut report = MonoidalityReport {
        inclusion_failures: Vec::new(),
        phi_square_failures: Vec::new(),
        psi_square_failures: Vec::new(),
    };

    // embedded tau(A) ⊗ tau(B) inside each cell of A⊗B, block by block
    let embedded_pair = |ca: Cell, cb: Cell| -> Option<Matrix<K>> {
        let cc = (ca.0 + cb.0, ca.1 + cb.1);
        let block = t_layout.block(cc, ca)?;
        if block.b_cell != cb {
            return None;
        }
        let k = legs_a.tau.embedding(ca, a).kronecker(&legs_b.tau.embedding(cb, b));
        if k.cols() == 0 {
            return None;
        }
        let mut rows = Matrix::zero(k.cols(), t_layout.dim(cc));
        for j in 0..k.cols() {
            for i in 0..k.rows() {
                let v = k.get(i, j);
                if !v.is_zero() {
                    rows.set(j, block.offset + i, v.clone());
                }
            }
        }
        Some(rows)
    };

    for &ca in legs_a.tau.complex().dims().keys() {
        for &cb in legs_b.tau.complex().dims().keys() {
            let Some(rows) = embedded_pair(ca, cb) else {
                continue;
            };
            let cc = (ca.0 + cb.0, ca.1 + cb.1);
            let tau_cell = legs_t.tau.embedding(cc, &t);
            let tau_space = Subspace::from_rows(tau_cell.transpose());
            if !tau_space.contains(&Subspace::from_rows(rows)) {
                report.inclusion_failures.push((ca, cb));
            }
        }
    }
    if !report.inclusion_failures.is_empty() {
        return Ok(report);
    }

    // the structure map mu: tau(A) ⊗ tau(B) -> tau(A⊗B), solved through
    // the embeddings
    let (tau_src, _tau_tgt, mu) = {
        let (src, _, id_components) = tensor_cellwise(
            legs_a.tau.complex(),
            legs_b.tau.complex(),
            legs_a.tau.complex(),
            legs_b.tau.complex(),
            |ca| Ok(Matrix::identity(legs_a.tau.complex().dim(ca))),
            |cb| Ok(Matrix::identity(legs_b.tau.complex().dim(cb))),
        )?;
        // embed into A⊗B then pull back along the embedding of tau(A⊗B)
        let (_, _, into_t) = tensor_cellwise(
            legs_a.tau.complex(),
            legs_b.tau.complex(),
            a,
            b,
            |ca| Ok(legs_a.tau.embedding(ca, a)),
            |cb| Ok(legs_b.tau.embedding(cb, b)),
        )?;
        let mut mu = BTreeMap::new();
        for (&cell, m) in &into_t {
            let emb = legs_t.tau.embedding(cell, &t);
            let solved = emb.solve_matrix(m).ok_or_else(|| {
                Error::Internal("monoidality inclusion failed after being verified".into())
            })?;
            mu.insert(cell, solved);
        }
        let _ = id_components;
        (src, (), mu)
    };

    // phi square: embedding(tau(A⊗B)) ∘ mu == embedding_a ⊗ embedding_b
    let (_, _, lhs_direct) = tensor_cellwise(
        legs_a.tau.complex(),
        legs_b.tau.complex(),
        a,
        b,
        |ca| Ok(legs_a.tau.embedding(ca, a)),
        |cb| Ok(legs_b.tau.embedding(cb, b)),
    )?;
    for &cell in tau_src.dims().keys() {
        let via_mu = legs_t.tau.embedding(cell, &t).mul(&mu[&cell]);
        if via_mu != lhs_direct[&cell] {
            report.phi_square_failures.push(cell);
        }
    }

    // psi square: psi_{A⊗B} ∘ mu == kunneth ∘ (psi_A ⊗ psi_B)
    let (_, _, psi_pair) = tensor_cellwise(
        legs_a.tau.complex(),
        legs_b.tau.complex(),
        &legs_a.homology,
        &legs_b.homology,
        |ca| psi_component(&legs_a, a, params, ca),
        |cb| psi_component(&legs_b, b, params, cb),
    )?;
    // Künneth on representatives: H(A) ⊗ H(B) -> H(A⊗B), class by class
    let (h_pair, h_pair_layout) = tensor_bigraded(&legs_a.homology, &legs_b.homology);
    let mut kunneth: BTreeMap<Cell, Matrix<K>> = BTreeMap::new();
    for (&cell, _) in h_pair.dims() {
        let h_t_dim = legs_t.homology.dim(cell);
        let mut m = Matrix::zero(h_t_dim, h_pair_layout.dim(cell));
        for block in h_pair_layout.blocks.get(&cell).into_iter().flatten() {
            let (ca, cb) = (block.a_cell, block.b_cell);
            let reps_a = legs_a.column_homology[&ca.1].representatives(ca.0);
            let reps_b = legs_b.column_homology[&cb.1].representatives(cb.0);
            let Some(t_block) = t_layout.block(cell, ca) else {
                continue;
            };
            if t_block.b_cell != cb {
                continue;
            }
            let kron = reps_a.kronecker(&reps_b);
            // each kron row, embedded in the tensor cell, is a cycle
            for row in 0..kron.rows() {
                let mut vector = vec![K::zero(); t_layout.dim(cell)];
                for (i, v) in kron.row_slice(row).iter().enumerate() {
                    vector[t_block.offset + i] = v.clone();
                }
                let class = legs_t.column_homology[&cell.1]
                    .class_of(cell.0, &vector)
                    .ok_or_else(|| Error::Internal("product of cycles is not a cycle".into()))?;
                for (i, v) in class.into_iter().enumerate() {
                    m.set(i, block.offset + row, v);
                }
            }
        }
        kunneth.insert(cell, m);
    }
    for &cell in tau_src.dims().keys() {
        let lhs = psi_component(&legs_t, &t, params, cell)?.mul(&mu[&cell]);
        let rhs = kunneth
            .get(&cell)
            .map(|k| k.mul(&psi_pair[&cell]))
            .unwrap_or_else(|| Matrix::zero(legs_t.homology.dim(cell), tau_src.dim(cell)));
        if lhs != rhs {
            report.psi_square_failures.push(cell);
        }
    }
    Ok(report)
}

/// Naturality of the truncation legs in a weight-preserving chain map:
/// `phi ∘ tau(f) = f ∘ phi` and `psi ∘ tau(f) = H(f) ∘ psi`, cellwise.
pub fn naturality_check<K: Scalar>(
    f: &BigradedMap<K>,
    params: &PurityParams,
) -> Result<bool> {
    let legs_src = tau_legs(f.source(), params)?;
    let legs_tgt = tau_legs(f.target(), params)?;
    let tau_f = crate::truncation::tau_map(f, &legs_src.tau, &legs_tgt.tau)?;
    for &cell in legs_src.tau.complex().dims().keys() {
        let lhs = legs_tgt.tau.embedding(cell, f.target()).mul(&tau_f.component(cell));
        let rhs = f.component(cell).mul(&legs_src.tau.embedding(cell, f.source()));
        if lhs != rhs {
            return Ok(false);
        }
    }
    // induced map on homology, cellwise
    for &cell in legs_src.tau.complex().dims().keys() {
        let (n, p) = cell;
        let h_src = &legs_src.column_homology[&p];
        let reps = h_src.representatives(n);
        let h_tgt_dim = legs_tgt.homology.dim(cell);
        let h_f = if reps.rows() == 0 || legs_tgt.column_homology.get(&p).is_none() {
            Matrix::zero(h_tgt_dim, reps.rows())
        } else {
            let images = f.component(cell).apply_to_rows(&reps);
            let mut cols = Vec::new();
            for i in 0..images.rows() {
                cols.push(
                    legs_tgt.column_homology[&p]
                        .class_of(n, images.row_slice(i))
                        .ok_or_else(|| Error::Internal("image of a cycle is not a cycle".into()))?,
                );
            }
            Matrix::from_fn(h_tgt_dim, reps.rows(), |i, j| cols[j][i].clone())
        };
        let lhs = psi_component(&legs_tgt, f.target(), params, cell)?.mul(&tau_f.component(cell));
        let rhs = h_f.mul(&psi_component(&legs_src, f.source(), params, cell)?);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compatibility of one composition map `gamma : A ⊗ B -> T` with the
/// truncation legs: (closure of the truncated tensor under `gamma`, the
/// inclusion square, the projection square against the induced homology
/// composition). All three are exact cellwise matrix checks.
#[allow(clippy::too_many_arguments)]
pub fn composition_compatibility<K: Scalar>(
    a: &BigradedComplex<K>,
    b: &BigradedComplex<K>,
    target: &BigradedComplex<K>,
    legs_a: &TauLegs<K>,
    legs_b: &TauLegs<K>,
    legs_t: &TauLegs<K>,
    gamma_cells: &BTreeMap<Cell, Matrix<K>>,
    params: &PurityParams,
) -> Result<(bool, bool, bool)> {
    let (_, t_layout) = tensor_bigraded(a, b);
    let gamma = |cell: Cell| -> Matrix<K> {
        gamma_cells
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(target.dim(cell), t_layout.dim(cell)))
    };

    // embedded tau(A) ⊗ tau(B) inside A ⊗ B, cellwise
    let (tau_pair, _, into_t) = tensor_cellwise(
        legs_a.tau.complex(),
        legs_b.tau.complex(),
        a,
        b,
        |ca| Ok(legs_a.tau.embedding(ca, a)),
        |cb| Ok(legs_b.tau.embedding(cb, b)),
    )?;

    // closure: gamma of the embedded truncation lands in the truncated target
    let mut tau_closed = true;
    let mut gamma_tau: BTreeMap<Cell, Matrix<K>> = BTreeMap::new();
    for (&cell, embedded) in &into_t {
        let image = gamma(cell).mul(embedded);
        let emb_t = legs_t.tau.embedding(cell, target);
        match emb_t.solve_matrix(&image) {
            Some(solved) => {
                gamma_tau.insert(cell, solved);
            }
            None => {
                tau_closed = false;
            }
        }
    }
    if !tau_closed {
        return Ok((false, false, false));
    }

    // inclusion square: emb_T ∘ gamma_tau == gamma ∘ (emb_A ⊗ emb_B)
    let mut phi_square = true;
    for (&cell, embedded) in &into_t {
        let lhs = legs_t.tau.embedding(cell, target).mul(&gamma_tau[&cell]);
        let rhs = gamma(cell).mul(embedded);
        if lhs != rhs {
            phi_square = false;
        }
    }

    // projection square: psi_T ∘ gamma_tau == gamma_H ∘ (psi_A ⊗ psi_B)
    let (_, _, psi_pair) = tensor_cellwise(
        legs_a.tau.complex(),
        legs_b.tau.complex(),
        &legs_a.homology,
        &legs_b.homology,
        |ca| psi_component(legs_a, a, params, ca),
        |cb| psi_component(legs_b, b, params, cb),
    )?;
    let (h_pair, h_layout) = tensor_bigraded(&legs_a.homology, &legs_b.homology);
    let mut gamma_h: BTreeMap<Cell, Matrix<K>> = BTreeMap::new();
    for (&cell, _) in h_pair.dims() {
        let h_t_dim = legs_t.homology.dim(cell);
        let mut m = Matrix::zero(h_t_dim, h_layout.dim(cell));
        for block in h_layout.blocks.get(&cell).into_iter().flatten() {
            let reps_a = legs_a.column_homology[&block.a_cell.1].representatives(block.a_cell.0);
            let reps_b = legs_b.column_homology[&block.b_cell.1].representatives(block.b_cell.0);
            let Some(t_block) = t_layout.block(cell, block.a_cell) else {
                continue;
            };
            if t_block.b_cell != block.b_cell {
                continue;
            }
            let kron = reps_a.kronecker(&reps_b);
            for row in 0..kron.rows() {
                let mut vector = vec![K::zero(); t_layout.dim(cell)];
                for (idx, v) in kron.row_slice(row).iter().enumerate() {
                    vector[t_block.offset + idx] = v.clone();
                }
                let image = gamma(cell).apply(&vector);
                let class = legs_t
                    .column_homology
                    .get(&cell.1)
                    .and_then(|h| h.class_of(cell.0, &image))
                    .or_else(|| image.iter().all(K::is_zero).then(Vec::new))
                    .ok_or_else(|| {
                        Error::Internal("composition image of cycles is not a cycle".into())
                    })?;
                for (i, v) in class.into_iter().enumerate() {
                    m.set(i, block.offset + row, v);
                }
            }
        }
        gamma_h.insert(cell, m);
    }
    let mut psi_square = true;
    for &cell in tau_pair.dims().keys() {
        let lhs = psi_component(legs_t, target, params, cell)?.mul(&gamma_tau[&cell]);
        let rhs = gamma_h
            .get(&cell)
            .map(|k| k.mul(&psi_pair[&cell]))
            .unwrap_or_else(|| Matrix::zero(legs_t.homology.dim(cell), tau_pair.dim(cell)));
        if lhs != rhs {
            psi_square = false;
        }
    }
    Ok((tau_closed, phi_square, psi_square))
}

/// How to split the weight filtration of an MHS complex into a grading.
#[derive(Clone, Debug)]
pub enum SplitRoute {
    /// the canonical two-filtration splitting, over `Q(i)`
    Deligne,
    /// eigenspaces of a supplied filtered chain automorphism, over `Q`
    Automorphism(BTreeMap<i64, Matrix<Rat>>),
}

/// A witness over whichever field the chosen route produces.
#[derive(Clone, Debug)]
pub enum PipelineWitness {
    Rational(FormalityWitness<Rat>),
    Gaussian(FormalityWitness<GaussRat>),
}

impl PipelineWitness {
    pub fn is_formal(&self) -> bool {
        match self {
            PipelineWitness::Rational(w) => w.is_formal(),
            PipelineWitness::Gaussian(w) => w.is_formal(),
        }
    }

    pub fn purity(&self) -> &PurityReport {
        match self {
            PipelineWitness::Rational(w) => &w.purity,
            PipelineWitness::Gaussian(w) => &w.purity,
        }
    }
}

/// Assembles the bigraded complex of a degreewise weight grading, checking
/// that the differential preserves the grading.
fn bigraded_from_grading<K: Scalar>(
    complex_d: &dyn Fn(i64) -> Matrix<K>,
    gradings: &BTreeMap<i64, BTreeMap<i64, Subspace<K>>>,
) -> Result<BigradedComplex<K>> {
    let mut dims = BTreeMap::new();
    for (&n, grading) in gradings {
        for (&w, s) in grading {
            if s.dim() > 0 {
                dims.insert((n, w), s.dim());
            }
        }
    }
    let mut d = BTreeMap::new();
    for (&n, grading) in gradings {
        for (&w, s) in grading {
            if s.dim() == 0 {
                continue;
            }
            let Some(target) = gradings.get(&(n - 1)).and_then(|g| g.get(&w)) else {
                if !s.image_under(&complex_d(n)).is_zero() {
                    return Err(Error::Internal(format!(
                        "differential does not preserve the weight grading at ({n},{w})"
                    )));
                }
                continue;
            };
            let images = complex_d(n).apply_to_rows(s.basis());
            let mut cols = Vec::new();
            for i in 0..images.rows() {
                let coords = target.coordinates(images.row_slice(i)).ok_or_else(|| {
                    Error::Internal(format!(
                        "differential does not preserve the weight grading at ({n},{w})"
                    ))
                })?;
                cols.push(coords);
            }
            let m = Matrix::from_fn(target.dim(), s.dim(), |i, j| cols[j][i].clone());
            if !m.is_zero() {
                d.insert((n, w), m);
            }
        }
    }
    BigradedComplex::new(dims, d)
}

/// Degreewise Deligne splitting of an MHS complex, assembled into a
/// bigraded complex over `Q(i)`. Verifies that the summed grading rebuilds
/// `W ⊗ Q(i)` levelwise and that the differential preserves the grading.
pub fn deligne_split_bigraded(k: &MhsComplex) -> Result<BigradedComplex<GaussRat>> {
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid MHS complex: {violations:?}")));
    }
    let mut gradings: BTreeMap<i64, BTreeMap<i64, Subspace<GaussRat>>> = BTreeMap::new();
    for (&n, v) in k.structures() {
        let split = deligne_splitting(v)?;
        let grading = split.weight_grading()?;
        // the summed grading must rebuild W ⊗ Q(i) levelwise
        let wc = v.complexified_weight();
        for m in wc.jump_indices() {
            let mut acc = Subspace::zero(v.dim());
            for (&w, s) in &grading {
                if w <= m {
                    acc = acc.sum(s)?;
                }
            }
            if acc != wc.level(m) {
                return Err(Error::Internal(format!(
                    "splitting does not rebuild the weight filtration at degree {n}, index {m}"
                )));
            }
        }
        gradings.insert(n, grading);
    }
    let complexified = crate::filtration::complexify_filtered(&k.weight_filtered());
    let d = |n: i64| complexified.complex().d(n);
    bigraded_from_grading(&d, &gradings)
}

/// Degreewise eigenspace splitting from a supplied chain automorphism
/// whose graded action is `psi_alpha`, over `Q`.
pub fn automorphism_split_bigraded(
    k: &MhsComplex,
    phis: &BTreeMap<i64, Matrix<Rat>>,
    params: &PurityParams,
) -> Result<BigradedComplex<Rat>> {
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Error::Invalid(format!("invalid MHS complex: {violations:?}")));
    }
    // a chain automorphism commuting with d, W-preserving, with graded
    // action psi_alpha in every degree
    for &n in k.complex().dims().keys() {
        let phi_n = phis
            .get(&n)
            .ok_or_else(|| Error::Precondition(format!("missing automorphism at degree {n}")))?;
        let d = k.complex().d(n);
        if k.complex().dim(n - 1) > 0 {
            let phi_prev = phis.get(&(n - 1)).ok_or_else(|| {
                Error::Precondition(format!("missing automorphism at degree {}", n - 1))
            })?;
            if d.mul(phi_n) != phi_prev.mul(&d) {
                return Err(Error::Precondition(format!(
                    "automorphism does not commute with the differential at degree {n}"
                )));
            }
        }
    }
    let mut gradings: BTreeMap<i64, BTreeMap<i64, Subspace<Rat>>> = BTreeMap::new();
    for (&n, v) in k.structures() {
        let phi = FilteredAutomorphism::new(
            v.weight_filtration().clone(),
            phis.get(&n)
                .ok_or_else(|| Error::Precondition(format!("missing automorphism at degree {n}")))?
                .clone(),
        )?;
        let grading = splitting_from_automorphism(&phi, params.alpha())?;
        gradings.insert(n, grading.pieces);
    }
    let complex = k.complex().clone();
    let d = move |n: i64| complex.d(n);
    bigraded_from_grading(&d, &gradings)
}

/// The full pipeline: split the weight filtration degreewise, assemble the
/// bigraded complex, truncate, and return the evaluated witness.
pub fn mhs_pipeline(
    k: &MhsComplex,
    params: &PurityParams,
    route: &SplitRoute,
) -> Result<PipelineWitness> {
    match route {
        SplitRoute::Deligne => {
            let bigraded = deligne_split_bigraded(k)?;
            Ok(PipelineWitness::Gaussian(zigzag_maps(&bigraded, params, None)?))
        }
        SplitRoute::Automorphism(phis) => {
            let bigraded = automorphism_split_bigraded(k, phis, params)?;
            Ok(PipelineWitness::Rational(zigzag_maps(&bigraded, params, None)?))
        }
    }
}

/// Purity of an MHS complex via the weight filtration on homology.
pub fn mhs_purity(
    k: &MhsComplex,
    params: &PurityParams,
    upto: Option<i64>,
) -> Result<PurityReport> {
    let dims = k.weight_graded_homology_dims()?;
    Ok(purity_of_dims(&dims, params, upto))
}

/// Convenience: complexified matrix access for pipelines over `Q(i)`.
pub fn complexified_d(k: &MhsComplex) -> impl Fn(i64) -> Matrix<GaussRat> + '_ {
    move |n| complexify(&k.complex().d(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_from_str;

    fn params(s: &str) -> PurityParams {
        PurityParams::new(rat_from_str(s).unwrap()).unwrap()
    }

    fn pure_fixture() -> BigradedComplex<Rat> {
        // classes at (1,1) and (2,2), alpha = 1, with an acyclic pad in
        // column 1
        let mut dims = BTreeMap::new();
        dims.insert((1, 1), 2);
        dims.insert((2, 1), 1);
        dims.insert((2, 2), 1);
        let mut d = BTreeMap::new();
        d.insert((2, 1), Matrix::<Rat>::from_int_rows(&[&[0], &[1]]));
        BigradedComplex::new(dims, d).unwrap()
    }

    #[test]
    fn pure_fixture_is_formal() {
        let w = zigzag_maps(&pure_fixture(), &params("1"), None).unwrap();
        assert!(w.purity.is_pure());
        assert!(w.phi_quasi_iso, "inclusion leg");
        assert!(w.psi_quasi_iso, "projection leg");
    }

    #[test]
    fn acyclic_fixture_is_formal() {
        let mut dims = BTreeMap::new();
        dims.insert((0, 3), 1);
        dims.insert((1, 3), 1);
        let mut d = BTreeMap::new();
        d.insert((1, 3), Matrix::<Rat>::identity(1));
        let a = BigradedComplex::new(dims, d).unwrap();
        let w = zigzag_maps(&a, &params("1"), None).unwrap();
        assert!(w.purity.is_pure());
        assert!(w.is_formal());
    }

    #[test]
    fn impure_fixture_fails_psi() {
        // one class at (1, 2): off the alpha = 1 line; truncation kills it
        let a = BigradedComplex::<Rat>::concentrated((1, 2), 1);
        let w = zigzag_maps(&a, &params("1"), None).unwrap();
        assert!(!w.purity.is_pure());
        assert!(!w.is_formal());
    }

    #[test]
    fn monoidality_on_pure_pair() {
        let a = pure_fixture();
        let report = monoidality_check(&a, &a, &params("1")).unwrap();
        assert!(report.inclusion_holds());
        assert!(report.squares_commute());
    }

    #[test]
    fn monoidality_inclusion_on_unit() {
        let a = pure_fixture();
        let unit = BigradedComplex::unit();
        let report = monoidality_check(&a, &unit, &params("1")).unwrap();
        assert!(report.inclusion_holds());
        assert!(report.squares_commute());
    }

    #[test]
    fn q_formality_boundary() {
        // pure in degrees <= 3, impure at degree 5 (alpha = 1)
        let mut dims = BTreeMap::new();
        dims.insert((1, 1), 1);
        dims.insert((3, 3), 1);
        dims.insert((5, 2), 1);
        let a = BigradedComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
        let pass = q_formality_witness(&a, &params("1"), 3).unwrap();
        assert_eq!(pass.is_q_formal(), Some(true));
        let fail = q_formality_witness(&a, &params("1"), 4).unwrap();
        assert_eq!(fail.is_q_formal(), Some(false));
    }
}
