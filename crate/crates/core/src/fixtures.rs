//! Deterministic fixture generators used by the test-suite, the acceptance
//! runner and the CLI examples. Every generator takes a seed; identical
//! seeds produce identical objects.
//!
//! Random complexes are built from an explicit homology model (chosen
//! homology summands plus matched source/target pairs of rank one) and then
//! conjugated by random filtration-preserving automorphisms, so every
//! fixture has known homology and is valid by construction.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigraded::{
    bigraded_associator, bigraded_braiding, invert_permutation_map, tensor_bigraded,
    tensor_bigraded_maps, BigradedComplex, BigradedMap, Cell,
};
use crate::complex::ChainComplex;
use crate::error::Result;
use crate::filtration::{complexify_filtered, Filtration, FilteredComplex};
use crate::matrix::Matrix;
use crate::mhc::MhsComplex;
use crate::mhs::{HodgeFiltration, MixedHodgeStructure};
use crate::operad::{GradedMonoid, NsOperad};
use crate::scalar::{gauss_i, GaussRat, Rat, Scalar};
use crate::subspace::Subspace;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=2);
    Rat::new(num.into(), den.into())
}

pub fn small_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Rat> {
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        data.push((0..cols).map(|_| small_rat(rng)).collect());
    }
    Matrix::from_rows(data)
}

/// Unimodular: a product of a unit lower- and unit upper-triangular matrix
/// with small integer entries.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rat> {
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, Rat::from_int(rng.gen_range(-2i64..=2)));
            upper.set(j, i, Rat::from_int(rng.gen_range(-2i64..=2)));
        }
    }
    lower.mul(&upper)
}

/// A random complex with prescribed homology dimensions `h[n]` and random
/// extra acyclic pairs, conjugated by random automorphisms.
pub fn random_complex(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_h: usize) -> ChainComplex<Rat> {
    let mut h = BTreeMap::new();
    let mut rank = BTreeMap::new();
    for n in lo..=hi {
        h.insert(n, rng.gen_range(0..=max_h));
        // rank of d_n, needing room in degree n-1
        rank.insert(n, if n > lo { rng.gen_range(0..=2) } else { 0 });
    }
    model_complex(rng, &h, &rank)
}

/// dim K_n = h_n + rank(d_n) + rank(d_{n+1}), basis ordered as
/// `[summands | sources | targets]`, then conjugated.
fn model_complex(
    rng: &mut ChaCha8Rng,
    h: &BTreeMap<i64, usize>,
    rank: &BTreeMap<i64, usize>,
) -> ChainComplex<Rat> {
    let r = |n: i64| rank.get(&n).copied().unwrap_or(0);
    let hh = |n: i64| h.get(&n).copied().unwrap_or(0);
    let dim = |n: i64| hh(n) + r(n) + r(n + 1);
    let degrees: Vec<i64> = h.keys().copied().collect();
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    for &n in &degrees {
        if dim(n) > 0 {
            dims.insert(n, dim(n));
        }
    }
    for &n in &degrees {
        if r(n) == 0 || dim(n) == 0 || dim(n - 1) == 0 {
            continue;
        }
        let mut m = Matrix::zero(dim(n - 1), dim(n));
        // sources sit after [h, then r(n) starts]? sources of d_n occupy the
        // middle block of K_n; targets the last block of K_{n-1}
        for k in 0..r(n) {
            m.set(hh(n - 1) + r(n - 1) + k, hh(n) + k, Rat::from_int(1));
        }
        d.insert(n, m);
    }
    let mut p: BTreeMap<i64, Matrix<Rat>> = BTreeMap::new();
    for (&n, &k) in &dims {
        p.insert(n, random_invertible(rng, k));
    }
    let conjugated: BTreeMap<i64, Matrix<Rat>> = d
        .iter()
        .map(|(&n, m)| {
            let pn = p[&n].inverse().expect("unimodular");
            (n, p[&(n - 1)].mul(m).mul(&pn))
        })
        .collect();
    ChainComplex::new(dims, conjugated).expect("model shapes are consistent")
}

/// A random bigraded complex: an independent random complex per weight
/// column.
pub fn random_bigraded(
    rng: &mut ChaCha8Rng,
    lo: i64,
    hi: i64,
    weights: &[i64],
    max_h: usize,
) -> BigradedComplex<Rat> {
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    for &p in weights {
        let column = random_complex(rng, lo, hi, max_h);
        for (&n, &k) in column.dims() {
            dims.insert((n, p), k);
        }
        for (&n, m) in column.stored_d() {
            d.insert((n, p), m.clone());
        }
    }
    BigradedComplex::new(dims, d).expect("columns are valid")
}

/// A random bigraded complex with `alpha`-pure homology: homology classes
/// only on the purity line, acyclic pairs anywhere.
pub fn random_pure_bigraded(
    rng: &mut ChaCha8Rng,
    alpha: &Rat,
    degrees: std::ops::RangeInclusive<i64>,
    max_h: usize,
) -> BigradedComplex<Rat> {
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    let mut used_weights: Vec<i64> = Vec::new();
    for n in degrees.clone() {
        let weight = Rat::from_int(n) * alpha;
        if num_traits::One::is_one(weight.denom()) {
            let p: i64 = weight.numer().try_into().expect("small weight");
            used_weights.push(p);
        }
    }
    for &p in &used_weights {
        // homology allowed exactly at the degree n with alpha * n = p
        let mut h = BTreeMap::new();
        let mut rank = BTreeMap::new();
        for n in degrees.clone() {
            let on_line = &(Rat::from_int(n) * alpha) == &Rat::from_int(p);
            h.insert(n, if on_line { rng.gen_range(1..=max_h) } else { 0 });
            rank.insert(n, if n > *degrees.start() { rng.gen_range(0..=1) } else { 0 });
        }
        let column = model_complex(rng, &h, &rank);
        for (&n, &k) in column.dims() {
            dims.insert((n, p), k);
        }
        for (&n, m) in column.stored_d() {
            d.insert((n, p), m.clone());
        }
    }
    BigradedComplex::new(dims, d).expect("columns are valid")
}

/// A random filtered complex with nontrivial higher pages: basis summands
/// carry weights, the rank-one differentials drop the weight by a random
/// amount, and the result is conjugated by a random weight-preserving
/// automorphism.
pub fn random_filtered(
    rng: &mut ChaCha8Rng,
    lo: i64,
    hi: i64,
    max_h: usize,
    weight_span: i64,
) -> FilteredComplex<Rat> {
    // slot lists per degree: (weight, kind) with kind 0 = homology summand,
    // pairs added as (source in degree n, target in degree n-1)
    let mut slots: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let mut arrows: Vec<(i64, usize, usize)> = Vec::new(); // (degree n, src slot, tgt slot)
    for n in lo..=hi {
        let count = rng.gen_range(0..=max_h);
        let entry = slots.entry(n).or_default();
        for _ in 0..count {
            entry.push(rng.gen_range(0..=weight_span));
        }
    }
    for n in (lo + 1)..=hi {
        let pairs = rng.gen_range(0..=2);
        for _ in 0..pairs {
            let w_src = rng.gen_range(0..=weight_span);
            let w_tgt = rng.gen_range(0..=w_src);
            let src_slot = {
                let entry = slots.entry(n).or_default();
                entry.push(w_src);
                entry.len() - 1
            };
            let tgt_slot = {
                let entry = slots.entry(n - 1).or_default();
                entry.push(w_tgt);
                entry.len() - 1
            };
            arrows.push((n, src_slot, tgt_slot));
        }
    }
    // order each degree by weight ascending; remember the permutation
    let mut order: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&n, ws) in &slots {
        let mut idx: Vec<usize> = (0..ws.len()).collect();
        idx.sort_by_key(|&i| (ws[i], i));
        order.insert(n, idx);
    }
    let position = |n: i64, slot: usize| -> usize {
        order[&n].iter().position(|&s| s == slot).expect("slot exists")
    };
    let mut dims = BTreeMap::new();
    let mut d: BTreeMap<i64, Matrix<Rat>> = BTreeMap::new();
    for (&n, ws) in &slots {
        if !ws.is_empty() {
            dims.insert(n, ws.len());
        }
    }
    for &(n, src, tgt) in &arrows {
        let rows = slots[&(n - 1)].len();
        let cols = slots[&n].len();
        let m = d.entry(n).or_insert_with(|| Matrix::zero(rows, cols));
        m.set(position(n - 1, tgt), position(n, src), Rat::from_int(1));
    }
    // weight-preserving change of basis: entries allowed when
    // weight(row) <= weight(col), unit diagonal
    let mut p: BTreeMap<i64, Matrix<Rat>> = BTreeMap::new();
    for (&n, ws) in &slots {
        let k = ws.len();
        if k == 0 {
            continue;
        }
        let sorted: Vec<i64> = order[&n].iter().map(|&i| ws[i]).collect();
        let mut m = Matrix::identity(k);
        for i in 0..k {
            for j in 0..k {
                let allowed = sorted[i] < sorted[j] || (sorted[i] == sorted[j] && i < j);
                if allowed && rng.gen_bool(0.4) {
                    m.set(i, j, Rat::from_int(rng.gen_range(-2i64..=2)));
                }
            }
        }
        p.insert(n, m);
    }
    let conjugated: BTreeMap<i64, Matrix<Rat>> = d
        .iter()
        .map(|(&n, m)| {
            let inv = p[&n].inverse().expect("unitriangular in weight order");
            (n, p[&(n - 1)].mul(m).mul(&inv))
        })
        .collect();
    let complex = ChainComplex::new(dims.clone(), conjugated).expect("model is consistent");
    let mut w = BTreeMap::new();
    for (&n, &k) in &dims {
        let sorted: Vec<i64> = order[&n].iter().map(|&i| slots[&n][i]).collect();
        let mut levels = BTreeMap::new();
        for cut in 0..k {
            let weight = sorted[cut];
            let upto = sorted.iter().take_while(|&&x| x <= weight).count();
            let rows = Matrix::from_fn(upto, k, |i, j| {
                if i == j {
                    Rat::from_int(1)
                } else {
                    Rat::from_int(0)
                }
            });
            levels.insert(weight, Subspace::from_rows(rows));
        }
        w.insert(n, Filtration::from_levels(k, levels).expect("coordinate flags"));
    }
    FilteredComplex::new(complex, w).expect("weights were compatible")
}

// ---------------------------------------------------------------------------
// mixed Hodge structure fixtures

/// One irreducible building block of a synthetic MHS.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HodgePiece {
    /// dimension 1, type `(p, p)`, weight `2p`
    Tate(i64),
    /// dimension 2, types `(p, q)` and `(q, p)` with `p > q`, weight `p+q`
    ConjugatePair(i64, i64),
}

impl HodgePiece {
    pub fn dim(self) -> usize {
        match self {
            HodgePiece::Tate(_) => 1,
            HodgePiece::ConjugatePair(_, _) => 2,
        }
    }

    pub fn weight(self) -> i64 {
        match self {
            HodgePiece::Tate(p) => 2 * p,
            HodgePiece::ConjugatePair(p, q) => p + q,
        }
    }
}

/// The direct sum of pieces, in the given order, in the standard basis.
pub fn split_mhs(pieces: &[HodgePiece]) -> MixedHodgeStructure {
    let dim: usize = pieces.iter().map(|p| p.dim()).sum();
    if dim == 0 {
        return MixedHodgeStructure::zero();
    }
    let mut w_levels: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
    let mut f_levels: BTreeMap<i64, Vec<Vec<GaussRat>>> = BTreeMap::new();
    let mut offset = 0usize;
    let i = gauss_i();
    for piece in pieces {
        let weight = piece.weight();
        for k in 0..piece.dim() {
            let mut v = vec![Rat::from_int(0); dim];
            v[offset + k] = Rat::from_int(1);
            w_levels.entry(weight).or_default().push(v);
        }
        match piece {
            HodgePiece::Tate(p) => {
                let mut v = vec![<GaussRat as Scalar>::zero(); dim];
                v[offset] = <GaussRat as Scalar>::one();
                f_levels.entry(*p).or_default().push(v);
            }
            HodgePiece::ConjugatePair(p, q) => {
                // F^a for a <= q contains both coordinates; for q < a <= p
                // only the line e1 + i e2
                let mut line = vec![<GaussRat as Scalar>::zero(); dim];
                line[offset] = <GaussRat as Scalar>::one();
                line[offset + 1] = i.clone();
                f_levels.entry(*p).or_default().push(line);
                let mut e1 = vec![<GaussRat as Scalar>::zero(); dim];
                e1[offset] = <GaussRat as Scalar>::one();
                let mut e2 = vec![<GaussRat as Scalar>::zero(); dim];
                e2[offset + 1] = <GaussRat as Scalar>::one();
                f_levels.entry(*q).or_default().push(e1);
                f_levels.entry(*q).or_default().push(e2);
            }
        }
        offset += piece.dim();
    }
    // accumulate: W_m contains all pieces of weight <= m; F^a all vectors
    // contributed at levels >= a
    let w_indices: Vec<i64> = w_levels.keys().copied().collect();
    let mut w_map = BTreeMap::new();
    for &m in &w_indices {
        let mut rows = Vec::new();
        for (&w, vectors) in &w_levels {
            if w <= m {
                rows.extend(vectors.iter().cloned());
            }
        }
        w_map.insert(m, Subspace::span_of(dim, &rows));
    }
    let f_indices: Vec<i64> = f_levels.keys().copied().collect();
    let mut f_map = BTreeMap::new();
    for &a in &f_indices {
        let mut rows = Vec::new();
        for (&b, vectors) in &f_levels {
            if b >= a {
                rows.extend(vectors.iter().cloned());
            }
        }
        f_map.insert(a, Subspace::span_of(dim, &rows));
    }
    let w = Filtration::from_levels(dim, w_map).expect("piece weights are increasing");
    let f = HodgeFiltration::from_decreasing_levels(dim, f_map).expect("piece levels are decreasing");
    MixedHodgeStructure::new(dim, w, f).expect("dimensions agree")
}

/// A weight-preserving rational change of basis (block upper-triangular in
/// the weight order of the given pieces).
pub fn weight_preserving_automorphism(
    rng: &mut ChaCha8Rng,
    pieces: &[HodgePiece],
) -> Matrix<Rat> {
    let dim: usize = pieces.iter().map(|p| p.dim()).sum();
    let mut weights = Vec::with_capacity(dim);
    for piece in pieces {
        for _ in 0..piece.dim() {
            weights.push(piece.weight());
        }
    }
    let mut m = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            // strictly triangular within an equal-weight block keeps the
            // matrix unipotent in the weight order, hence invertible
            let allowed = weights[i] < weights[j] || (weights[i] == weights[j] && i < j);
            if allowed && rng.gen_bool(0.4) {
                m.set(i, j, Rat::from_int(rng.gen_range(-2i64..=2)));
            }
        }
    }
    m
}

/// Twists a split structure by a weight-preserving automorphism `g`:
/// `(V, W, g F)`, an isomorphic — generally non-split — valid MHS.
pub fn twist_mhs(v: &MixedHodgeStructure, g: &Matrix<Rat>) -> MixedHodgeStructure {
    let gc = crate::matrix::complexify(g);
    let mut f_map = BTreeMap::new();
    for a in v.hodge_filtration().levels() {
        f_map.insert(a, v.hodge_filtration().at(a).image_under(&gc));
    }
    let f = HodgeFiltration::from_decreasing_levels(v.dim(), f_map).expect("image of a filtration");
    MixedHodgeStructure::new(v.dim(), v.weight_filtration().clone(), f).expect("same dimensions")
}

/// A random valid MHS with dimension at most `max_dim` and weights within
/// `[-4, 4]`, built from split pieces twisted by a random weight-preserving
/// automorphism.
pub fn random_mhs(rng: &mut ChaCha8Rng, max_dim: usize) -> MixedHodgeStructure {
    let mut pieces = Vec::new();
    let mut dim = 0;
    while dim < max_dim {
        let piece = if rng.gen_bool(0.5) {
            HodgePiece::Tate(rng.gen_range(-2i64..=2))
        } else {
            let q = rng.gen_range(-2i64..=1);
            let p = rng.gen_range((q + 1)..=2);
            HodgePiece::ConjugatePair(p, q)
        };
        if dim + piece.dim() > max_dim {
            break;
        }
        dim += piece.dim();
        pieces.push(piece);
        if rng.gen_bool(0.3) {
            break;
        }
    }
    if pieces.is_empty() {
        pieces.push(HodgePiece::Tate(0));
    }
    let split = split_mhs(&pieces);
    let g = weight_preserving_automorphism(rng, &pieces);
    twist_mhs(&split, &g)
}

/// A random map of mixed Hodge structures: matching pieces of a shared
/// palette connected by scalars, twisted independently on both sides.
pub fn random_mhs_map(rng: &mut ChaCha8Rng, max_pieces: usize) -> crate::mhs::MhsMap {
    let palette = [
        HodgePiece::Tate(-1),
        HodgePiece::Tate(0),
        HodgePiece::Tate(1),
        HodgePiece::ConjugatePair(1, -1),
        HodgePiece::ConjugatePair(2, 0),
    ];
    let count = rng.gen_range(1..=max_pieces);
    let shared: Vec<HodgePiece> =
        (0..count).map(|_| palette[rng.gen_range(0..palette.len())]).collect();
    // target may have extra summands; the map is zero into those
    let mut target_pieces = shared.clone();
    if rng.gen_bool(0.5) {
        target_pieces.push(palette[rng.gen_range(0..palette.len())]);
    }
    let source_split = split_mhs(&shared);
    let target_split = split_mhs(&target_pieces);
    let src_dim = source_split.dim();
    let tgt_dim = target_split.dim();
    let mut f_split = Matrix::zero(tgt_dim, src_dim);
    let mut offset = 0;
    for piece in &shared {
        let scale = Rat::from_int(rng.gen_range(-2i64..=2));
        for k in 0..piece.dim() {
            f_split.set(offset + k, offset + k, scale.clone());
        }
        offset += piece.dim();
    }
    let g_src = weight_preserving_automorphism(rng, &shared);
    let g_tgt = weight_preserving_automorphism(rng, &target_pieces);
    let source = twist_mhs(&source_split, &g_src);
    let target = twist_mhs(&target_split, &g_tgt);
    let matrix = g_tgt.mul(&f_split).mul(&g_src.inverse().expect("unitriangular"));
    crate::mhs::MhsMap::new(source, target, matrix).expect("constructed to be compatible")
}

/// A random complex of mixed Hodge structures with known homology: slots
/// carry whole pieces, differentials match pieces of equal type, and the
/// degreewise twists commute with everything by construction. Also returns
/// the degreewise automorphism realizing `psi_alpha` on the graded pieces
/// (weights here are even, so `alpha^p` stays rational for `alpha = 2`).
pub struct MhsComplexFixture {
    pub complex: MhsComplex,
    pub automorphism: BTreeMap<i64, Matrix<Rat>>,
}

pub fn random_mhs_complex(rng: &mut ChaCha8Rng, lo: i64, hi: i64, alpha: &Rat) -> MhsComplexFixture {
    // choose per-degree slot lists: homology pieces plus matched pairs
    let mut slots: BTreeMap<i64, Vec<HodgePiece>> = BTreeMap::new();
    let mut arrows: Vec<(i64, usize, usize)> = Vec::new();
    let palette = [
        HodgePiece::Tate(-1),
        HodgePiece::Tate(0),
        HodgePiece::Tate(1),
        HodgePiece::Tate(2),
        HodgePiece::ConjugatePair(1, -1),
        HodgePiece::ConjugatePair(2, 0),
    ];
    for n in lo..=hi {
        let entry = slots.entry(n).or_default();
        for _ in 0..rng.gen_range(0..=1) {
            entry.push(palette[rng.gen_range(0..palette.len())]);
        }
    }
    for n in (lo + 1)..=hi {
        for _ in 0..rng.gen_range(0..=1) {
            let piece = palette[rng.gen_range(0..palette.len())];
            let src = {
                let e = slots.entry(n).or_default();
                e.push(piece);
                e.len() - 1
            };
            let tgt = {
                let e = slots.entry(n - 1).or_default();
                e.push(piece);
                e.len() - 1
            };
            arrows.push((n, src, tgt));
        }
    }
    let offsets = |pieces: &[HodgePiece]| -> Vec<usize> {
        let mut out = Vec::with_capacity(pieces.len());
        let mut acc = 0;
        for p in pieces {
            out.push(acc);
            acc += p.dim();
        }
        out
    };
    let mut dims = BTreeMap::new();
    let mut d: BTreeMap<i64, Matrix<Rat>> = BTreeMap::new();
    let mut structures = BTreeMap::new();
    let mut twists: BTreeMap<i64, Matrix<Rat>> = BTreeMap::new();
    let mut autos: BTreeMap<i64, Matrix<Rat>> = BTreeMap::new();
    for (&n, pieces) in &slots {
        let dim: usize = pieces.iter().map(|p| p.dim()).sum();
        if dim == 0 {
            continue;
        }
        dims.insert(n, dim);
        let split = split_mhs(pieces);
        let g = weight_preserving_automorphism(rng, pieces);
        twists.insert(n, g.clone());
        structures.insert(n, twist_mhs(&split, &g));
        // psi_alpha acts on each slot by alpha^{weight}; conjugate by g
        let off = offsets(pieces);
        let mut psi = Matrix::zero(dim, dim);
        for (slot, piece) in pieces.iter().enumerate() {
            let factor = crate::scalar::rat_pow(alpha, piece.weight());
            for k in 0..piece.dim() {
                psi.set(off[slot] + k, off[slot] + k, factor.clone());
            }
        }
        let g_inv = g.inverse().expect("unitriangular");
        autos.insert(n, g.mul(&psi).mul(&g_inv));
    }
    for &(n, src, tgt) in &arrows {
        let src_pieces = &slots[&n];
        let tgt_pieces = &slots[&(n - 1)];
        let (so, to) = (offsets(src_pieces), offsets(tgt_pieces));
        let rows: usize = tgt_pieces.iter().map(|p| p.dim()).sum();
        let cols: usize = src_pieces.iter().map(|p| p.dim()).sum();
        let m = d.entry(n).or_insert_with(|| Matrix::zero(rows, cols));
        for k in 0..src_pieces[src].dim() {
            m.set(to[tgt] + k, so[src] + k, Rat::from_int(1));
        }
    }
    // conjugate the differential by the twists; MHS maps stay MHS maps
    let conjugated: BTreeMap<i64, Matrix<Rat>> = d
        .iter()
        .filter(|(&n, _)| dims.contains_key(&n) && dims.contains_key(&(n - 1)))
        .map(|(&n, m)| {
            let inv = twists[&n].inverse().expect("unitriangular");
            (n, twists[&(n - 1)].mul(m).mul(&inv))
        })
        .collect();
    let complex = ChainComplex::new(dims, conjugated).expect("model is consistent");
    let complex = MhsComplex::new(complex, structures).expect("dimensions agree");
    MhsComplexFixture { complex, automorphism: autos }
}

// ---------------------------------------------------------------------------
// named fixtures from the worked examples

/// Homology profile of the punctured affine plane: one class in degree 0
/// and weight 0, one in degree 3 and weight 4.
pub fn punctured_plane_bigraded() -> BigradedComplex<Rat> {
    let mut dims = BTreeMap::new();
    dims.insert((0, 0), 1);
    dims.insert((3, 4), 1);
    BigradedComplex::new(dims, BTreeMap::new()).expect("no differentials")
}

/// Arrangement-complement profile for codimension `d`: classes in degree
/// `(2d-1)k` and weight `2dk`, `k = 0..=kmax`.
pub fn arrangement_bigraded(d: i64, kmax: i64) -> BigradedComplex<Rat> {
    let mut dims = BTreeMap::new();
    for k in 0..=kmax {
        dims.insert(((2 * d - 1) * k, 2 * d * k), 1);
    }
    BigradedComplex::new(dims, BTreeMap::new()).expect("no differentials")
}

/// Two classes with incompatible purity slopes: degree 3 of weight 4 (the
/// 4/3 line) next to degree 4 of weight 4 (the 1 line). No single slope
/// accommodates both, and each sits strictly off the other's truncation
/// threshold, so the witness legs fail at both slopes.
pub fn mixed_slope_bigraded() -> BigradedComplex<Rat> {
    let mut dims = BTreeMap::new();
    dims.insert((3, 4), 1);
    dims.insert((4, 4), 1);
    BigradedComplex::new(dims, BTreeMap::new()).expect("no differentials")
}

/// The Tate twist `Q(-twist)` placed in one degree.
pub fn tate_complex(degree: i64, twist: i64) -> MhsComplex {
    let complex = ChainComplex::concentrated(degree, 1);
    let mut mhs = BTreeMap::new();
    mhs.insert(degree, MixedHodgeStructure::tate(twist));
    MhsComplex::new(complex, mhs).expect("dimension 1")
}

/// A pure weight-3 two-dimensional structure with Hodge types (2,1), (1,2).
pub fn weight_three_mhs() -> MixedHodgeStructure {
    split_mhs(&[HodgePiece::ConjugatePair(2, 1)])
}

/// A mixed Hodge complex whose graded differential is not strict for the
/// Hodge filtration: flagged by MH1 at weight index 0.
pub fn mh1_violating_mhc() -> crate::mhc::MixedHodgeComplex {
    use crate::mhc::{FilteredZigZag, MixedHodgeComplex};
    let mut dims = BTreeMap::new();
    dims.insert(0, 2);
    dims.insert(1, 2);
    let mut d = BTreeMap::new();
    // d(e1) = 0, d(e2) = e1
    d.insert(1, Matrix::<Rat>::from_int_rows(&[&[0, 1], &[0, 0]]));
    let complex = ChainComplex::new(dims, d).expect("shapes");
    let rational = FilteredComplex::with_trivial_filtration(complex);
    let complex_part = complexify_filtered(&rational);
    // F^1 = span(e1) in both degrees: d(F^1 K_1) = 0 but d(K_1) ∩ F^1 = span(e1)
    let mut hodge = BTreeMap::new();
    for n in [0i64, 1] {
        let mut levels = BTreeMap::new();
        levels.insert(
            1,
            Subspace::span_of(2, &[vec![<GaussRat as Scalar>::one(), <GaussRat as Scalar>::zero()]]),
        );
        levels.insert(0, Subspace::full(2));
        hodge.insert(n, HodgeFiltration::from_decreasing_levels(2, levels).expect("levels"));
    }
    let comparison = FilteredZigZag::identity(complex_part.clone());
    MixedHodgeComplex::new(rational, complex_part, hodge, comparison).expect("shapes agree")
}

// ---------------------------------------------------------------------------
// operads and monoids

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.iter().map(|&x| x + 1).collect());
        // advance to the next lexicographic combination of {0..n-1}
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in (i + 1)..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

fn subset_index(sets: &[Vec<usize>], wanted: &[usize]) -> usize {
    sets.iter().position(|s| s == wanted).expect("subset is enumerated")
}

/// Exterior algebra on `n - 1` generators of degree 1 and weight -2, as the
/// arity-`n` component: dimension `C(n-1, k)` in cell `(k, -2k)`.
fn exterior_component(n: usize) -> BigradedComplex<Rat> {
    let gens = n - 1;
    let mut dims = BTreeMap::new();
    for k in 0..=gens {
        let count = combinations(gens, k).len();
        if count > 0 {
            dims.insert((k as i64, -2 * k as i64), count);
        }
    }
    BigradedComplex::new(dims, BTreeMap::new()).expect("zero differential")
}

/// Relabels the generators of the two factors into the composite and
/// computes the wedge reordering sign.
fn compose_monomials(
    n: usize,
    i: usize,
    m: usize,
    s: &[usize],
    t: &[usize],
) -> (Vec<usize>, i64) {
    let mut relabeled: Vec<usize> = Vec::with_capacity(s.len() + t.len());
    let mut high = 0usize;
    for &x in s {
        if x < i {
            relabeled.push(x);
        } else {
            relabeled.push(x + m - 1);
            high += 1;
        }
    }
    let mut result = relabeled.clone();
    for &y in t {
        result.push(i - 1 + y);
    }
    // inversions between the shifted part of s and all of t
    let sign = if (high * t.len()) % 2 == 0 { 1 } else { -1 };
    result.sort_unstable();
    let _ = n;
    (result, sign)
}

/// The exterior operad: arity `n` is the exterior algebra on `n-1`
/// degree-1, weight `-2` generators; compositions relabel generators.
/// Its homology sits on the line `p = -2 deg`.
pub fn exterior_operad(max_arity: usize) -> NsOperad<Rat> {
    let mut components = BTreeMap::new();
    for n in 1..=max_arity {
        components.insert(n, exterior_component(n));
    }
    let mut compositions = BTreeMap::new();
    for n in 1..=max_arity {
        for m in 1..=max_arity {
            if n + m - 1 > max_arity {
                continue;
            }
            for i in 1..=n {
                compositions.insert((n, i, m), exterior_composition(n, i, m));
            }
        }
    }
    NsOperad::new(components, vec![Rat::from_int(1)], compositions).expect("valid shapes")
}

fn exterior_composition(n: usize, i: usize, m: usize) -> BTreeMap<Cell, Matrix<Rat>> {
    let a = exterior_component(n);
    let b = exterior_component(m);
    let target = exterior_component(n + m - 1);
    let (_, layout) = tensor_bigraded(&a, &b);
    let mut out = BTreeMap::new();
    for (&cell, _) in layout.blocks.iter() {
        let rows = target.dim(cell);
        let cols = layout.dim(cell);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut matrix = Matrix::zero(rows, cols);
        let target_sets = combinations(n + m - 2, (cell.0) as usize);
        for block in layout.blocks.get(&cell).into_iter().flatten() {
            let (ka, kb) = (block.a_cell.0 as usize, block.b_cell.0 as usize);
            let sets_a = combinations(n - 1, ka);
            let sets_b = combinations(m - 1, kb);
            for (ia, s) in sets_a.iter().enumerate() {
                for (ib, t) in sets_b.iter().enumerate() {
                    let (result, sign) = compose_monomials(n, i, m, s, t);
                    let row = subset_index(&target_sets, &result);
                    let col = block.offset + ia * sets_b.len() + ib;
                    matrix.set(row, col, Rat::from_int(sign));
                }
            }
        }
        out.insert(cell, matrix);
    }
    out
}

/// The exterior operad with one extra off-line homology class in a chosen
/// arity: a generator at `(2, -2)` that composes to zero except against
/// units. Still a valid operad; its homology is impure at that arity.
pub fn impure_exterior_operad(max_arity: usize, bad_arity: usize) -> NsOperad<Rat> {
    assert!(bad_arity >= 2 && bad_arity <= max_arity);
    let base = exterior_operad(max_arity);
    let mut components = base.components().clone();
    let bad_cell: Cell = (2, -2);
    let mut dims = components[&bad_arity].dims().clone();
    *dims.entry(bad_cell).or_insert(0) += 1;
    let padded = BigradedComplex::new(dims, components[&bad_arity].stored_d().clone())
        .expect("still zero differential");
    components.insert(bad_arity, padded);
    // extend compositions: zero on the new coordinate except unit slots
    let mut compositions = BTreeMap::new();
    for (&(n, i, m), cells) in base.compositions() {
        let a = &components[&n];
        let b = &components[&m];
        let target = &components[&(n + m - 1)];
        let (_, layout) = tensor_bigraded(a, b);
        let mut new_cells: BTreeMap<Cell, Matrix<Rat>> = BTreeMap::new();
        for (&cell, _) in layout.blocks.iter() {
            let rows = target.dim(cell);
            let cols = layout.dim(cell);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut matrix = Matrix::zero(rows, cols);
            // copy the exterior entries into the padded coordinates
            if let Some(old) = cells.get(&cell) {
                let old_layout = tensor_bigraded(
                    base.components().get(&n).unwrap(),
                    base.components().get(&m).unwrap(),
                )
                .1;
                for old_block in old_layout.blocks.get(&cell).into_iter().flatten() {
                    let new_block = layout
                        .block(cell, old_block.a_cell)
                        .expect("padded layout keeps blocks");
                    for r in 0..old.rows() {
                        for c in 0..old_block.a_dim * old_block.b_dim {
                            let v = old.get(r, old_block.offset + c);
                            if v.is_zero() {
                                continue;
                            }
                            // the row index survives: padding appends coordinates
                            let col = new_block.offset
                                + remap_kron_index(c, old_block.b_dim, new_block.b_dim);
                            matrix.set(r, col, v.clone());
                        }
                    }
                }
            }
            // unit slots must carry the new generator across
            if n == bad_arity && m == 1 && cell == bad_cell {
                let block = layout.block(cell, bad_cell).expect("w ⊗ unit block");
                let w_index = components[&bad_arity].dim(bad_cell) - 1;
                matrix.set(rows - 1, block.offset + w_index * block.b_dim, Rat::from_int(1));
            }
            if n == 1 && m == bad_arity && cell == bad_cell {
                let block = layout.block(cell, (0, 0)).expect("unit ⊗ w block");
                let w_index = components[&bad_arity].dim(bad_cell) - 1;
                matrix.set(rows - 1, block.offset + w_index, Rat::from_int(1));
            }
            if !matrix.is_zero() {
                new_cells.insert(cell, matrix);
            }
        }
        compositions.insert((n, i, m), new_cells);
    }
    NsOperad::new(components, base.unit().to_vec(), compositions).expect("valid shapes")
}

fn remap_kron_index(index: usize, old_b_dim: usize, new_b_dim: usize) -> usize {
    let (ia, ib) = (index / old_b_dim, index % old_b_dim);
    ia * new_b_dim + ib
}

/// The associative operad: one basis element in every arity, all
/// compositions the identity scalar.
pub fn associative_operad(max_arity: usize) -> NsOperad<Rat> {
    let mut components = BTreeMap::new();
    for n in 0..=max_arity {
        components.insert(n, BigradedComplex::concentrated((0, 0), 1));
    }
    let mut compositions = BTreeMap::new();
    for n in 1..=max_arity {
        for m in 0..=max_arity {
            if n + m < 1 || n + m - 1 > max_arity {
                continue;
            }
            for i in 1..=n {
                let mut cells = BTreeMap::new();
                cells.insert((0, 0), Matrix::<Rat>::identity(1));
                compositions.insert((n, i, m), cells);
            }
        }
    }
    NsOperad::new(components, vec![Rat::from_int(1)], compositions).expect("valid shapes")
}

/// The three-dimensional acyclic unital algebra `span{1, a, b}` with
/// `d b = a` and all products of non-units zero.
pub fn acyclic_algebra() -> (BigradedComplex<Rat>, BTreeMap<Cell, Matrix<Rat>>, Vec<Rat>) {
    let mut dims = BTreeMap::new();
    dims.insert((0, 0), 2);
    dims.insert((1, 0), 1);
    let mut d = BTreeMap::new();
    d.insert((1, 0), Matrix::from_int_rows(&[&[0], &[1]]));
    let c = BigradedComplex::new(dims, d).expect("shapes");
    let mut mu = BTreeMap::new();
    // (0,0): basis 1⊗1, 1⊗a, a⊗1, a⊗a
    mu.insert((0, 0), Matrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 1, 1, 0]]));
    // (1,0): blocks (0,0)x(1,0) then (1,0)x(0,0): 1⊗b, a⊗b, b⊗1, b⊗a
    mu.insert((1, 0), Matrix::from_int_rows(&[&[1, 0, 1, 0]]));
    let unit = vec![Rat::from_int(1), Rat::from_int(0)];
    (c, mu, unit)
}

/// Tensors every component of an operad with the acyclic algebra; the
/// homology operad recovers the original.
pub fn pad_operad_with_acyclic(operad: &NsOperad<Rat>) -> Result<NsOperad<Rat>> {
    let (c, mu, c_unit) = acyclic_algebra();
    let mut components = BTreeMap::new();
    for (&n, p) in operad.components() {
        components.insert(n, tensor_bigraded(p, &c).0);
    }
    let mut compositions = BTreeMap::new();
    for (&(n, i, m), _) in operad.compositions() {
        let p_n = operad.components().get(&n).unwrap();
        let p_m = operad.components().get(&m).unwrap();
        let gamma = operad.composition_map(n, i, m)?;
        let mu_map =
            BigradedMap::new_unchecked(tensor_bigraded(&c, &c).0, c.clone(), mu.clone())?;
        // (P(n)⊗C)⊗(P(m)⊗C) -> (P(n)⊗P(m))⊗(C⊗C) -> P(n+m-1)⊗C
        let interchange = middle_interchange(p_n, &c, p_m, &c)?;
        let outer = tensor_bigraded_maps(&gamma, &mu_map)?;
        let composite = outer.compose(&interchange)?;
        let mut cells = BTreeMap::new();
        for (&cell, _) in composite.source().dims() {
            let m2 = composite.component(cell);
            if !m2.is_zero() {
                cells.insert(cell, m2);
            }
        }
        compositions.insert((n, i, m), cells);
    }
    // unit = unit ⊗ 1: coordinates in block ((0,0),(0,0))
    let one = operad.components().get(&1).unwrap();
    let c_dim = c.dim((0, 0));
    let mut unit = vec![Rat::from_int(0); tensor_bigraded(one, &c).0.dim((0, 0))];
    for (u, coeff) in operad.unit().iter().enumerate() {
        for (v, c_coeff) in c_unit.iter().enumerate() {
            if !coeff.is_zero() && !c_coeff.is_zero() {
                unit[u * c_dim + v] = coeff.mul(c_coeff);
            }
        }
    }
    NsOperad::new(components, unit, compositions)
}

/// `(A⊗C)⊗(B⊗D) -> (A⊗B)⊗(C⊗D)` with the Koszul sign of moving `C` past
/// `B`, built from associators and the braiding.
pub fn middle_interchange<K: Scalar>(
    a: &BigradedComplex<K>,
    c: &BigradedComplex<K>,
    b: &BigradedComplex<K>,
    d: &BigradedComplex<K>,
) -> Result<BigradedMap<K>> {
    let (bd, _) = tensor_bigraded(b, d);
    let (cd, _) = tensor_bigraded(c, d);
    let assoc1 = bigraded_associator(a, c, &bd)?; // (A⊗C)⊗(B⊗D) -> A⊗(C⊗(B⊗D))
    let assoc2_inv = invert_permutation_map(&bigraded_associator(c, b, d)?); // C⊗(B⊗D) -> (C⊗B)⊗D
    let swap = tensor_bigraded_maps(&bigraded_braiding(c, b)?, &BigradedMap::identity(d))?; // -> (B⊗C)⊗D
    let assoc3 = bigraded_associator(b, c, d)?; // (B⊗C)⊗D -> B⊗(C⊗D)
    let inner = assoc3.compose(&swap.compose(&assoc2_inv)?)?; // C⊗(B⊗D) -> B⊗(C⊗D)
    let middle = tensor_bigraded_maps(&BigradedMap::identity(a), &inner)?;
    let assoc4_inv = invert_permutation_map(&bigraded_associator(a, b, &cd)?); // A⊗(B⊗(C⊗D)) -> (A⊗B)⊗(C⊗D)
    assoc4_inv.compose(&middle.compose(&assoc1)?)
}

/// A graded monoid with one exterior generator of degree 1 and weight -2 in
/// each positive grade; pure on the line `p = -2 deg`.
pub fn exterior_monoid(max_grade: i64) -> GradedMonoid<Rat> {
    let mut components = BTreeMap::new();
    components.insert(0, BigradedComplex::concentrated((0, 0), 1));
    for grade in 1..=max_grade {
        let mut dims = BTreeMap::new();
        dims.insert((0, 0), 1);
        dims.insert((1, -2), 1);
        components.insert(grade, BigradedComplex::new(dims, BTreeMap::new()).expect("shapes"));
    }
    let mut products = BTreeMap::new();
    for d in 0..=max_grade {
        for e in 0..=max_grade {
            if d + e > max_grade {
                continue;
            }
            let a = &components[&d];
            let b = &components[&e];
            let target = &components[&(d + e)];
            let (_, layout) = tensor_bigraded(a, b);
            let mut cells = BTreeMap::new();
            for (&cell, _) in layout.blocks.iter() {
                let rows = target.dim(cell);
                let cols = layout.dim(cell);
                if rows == 0 || cols == 0 {
                    continue;
                }
                let mut m = Matrix::zero(rows, cols);
                for block in layout.blocks.get(&cell).into_iter().flatten() {
                    // 1·1 = 1, g·1 = 1·g = g, g·g = 0
                    let degree_sum = block.a_cell.0 + block.b_cell.0;
                    if degree_sum <= 1 {
                        m.set(0, block.offset, Rat::from_int(1));
                    }
                }
                if !m.is_zero() {
                    cells.insert(cell, m);
                }
            }
            products.insert((d, e), cells);
        }
    }
    GradedMonoid::new(components, vec![Rat::from_int(1)], products).expect("valid shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_complex_is_valid_with_euler_identity() {
        let mut r = rng(7);
        for _ in 0..10 {
            let c = random_complex(&mut r, -1, 3, 2);
            assert!(c.is_valid());
            let h = c.homology().unwrap();
            assert!(h.euler_identity_holds(&c));
        }
    }

    #[test]
    fn random_filtered_is_valid() {
        let mut r = rng(11);
        for _ in 0..10 {
            let k = random_filtered(&mut r, 0, 3, 2, 3);
            assert!(k.is_valid(), "filtered fixture must validate");
        }
    }

    #[test]
    fn random_mhs_is_valid() {
        let mut r = rng(13);
        for _ in 0..20 {
            let v = random_mhs(&mut r, 6);
            assert!(v.is_valid(), "MHS fixture must validate");
        }
    }

    #[test]
    fn random_mhs_complex_is_valid() {
        let mut r = rng(17);
        for _ in 0..10 {
            let fixture = random_mhs_complex(&mut r, 0, 3, &Rat::from_int(2));
            assert!(fixture.complex.is_valid(), "MHS complex fixture must validate");
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn exterior_operad_validates() {
        let operad = exterior_operad(4);
        let violations = operad.validate();
        assert!(violations.is_empty(), "exterior operad must validate: {violations:?}");
    }

    #[test]
    fn associative_operad_validates() {
        let operad = associative_operad(4);
        assert!(operad.is_valid());
    }

    #[test]
    fn impure_exterior_operad_validates() {
        let operad = impure_exterior_operad(3, 3);
        let violations = operad.validate();
        assert!(violations.is_empty(), "padded operad must validate: {violations:?}");
    }

    #[test]
    fn exterior_monoid_validates() {
        let monoid = exterior_monoid(3);
        let violations = monoid.validate();
        assert!(violations.is_empty(), "monoid must validate: {violations:?}");
    }

    #[test]
    fn padded_associative_operad_recovers_homology() {
        let padded = pad_operad_with_acyclic(&associative_operad(3)).unwrap();
        let violations = padded.validate();
        assert!(violations.is_empty(), "padded operad must validate: {violations:?}");
        let homology = padded.homology_operad().unwrap();
        assert!(homology.is_valid());
        for (&n, component) in homology.components() {
            assert_eq!(component.total_dim(), 1, "arity {n}");
        }
    }

    #[test]
    fn mh1_fixture_fails_at_weight_zero() {
        let mhc = mh1_violating_mhc();
        let violations = mhc.validate();
        assert!(violations.iter().any(|v| v.rule == "MH1" && v.locus.get("index") == Some(&0)),
            "expected an MH1 violation at index 0, got {violations:?}");
    }
}
