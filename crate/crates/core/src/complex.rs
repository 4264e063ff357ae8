//! Bounded chain complexes over an exact field, chain maps and zig-zags,
//! homology with deterministic cycle representatives, tensor products with
//! the Koszul sign convention `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`, and
//! linear duals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::subspace::{kernel_image, Quotient};

/// A structured rule violation with an addressable locus, used by every
/// validation routine in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: String,
    pub locus: BTreeMap<String, i64>,
    pub detail: String,
}

impl Violation {
    pub fn new(rule: &str, locus: &[(&str, i64)], detail: impl Into<String>) -> Self {
        Violation {
            rule: rule.to_string(),
            locus: locus.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            detail: detail.into(),
        }
    }

    /// The same violation with an extra locus coordinate.
    pub fn at(mut self, key: &str, value: i64) -> Self {
        self.locus.insert(key.to_string(), value);
        self
    }
}

/// Homologically graded bounded chain complex: `d_n : K_n -> K_{n-1}`,
/// stored sparsely by degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex<K: Scalar> {
    dims: BTreeMap<i64, usize>,
    d: BTreeMap<i64, Matrix<K>>,
}

impl<K: Scalar> ChainComplex<K> {
    pub fn field(&self) -> Field {
        K::FIELD
    }

    /// Builds a complex from per-degree dimensions and differentials keyed
    /// by their source degree. Shapes are checked here; `d^2 = 0` is the
    /// job of [`ChainComplex::validate`].
    pub fn new(dims: BTreeMap<i64, usize>, d: BTreeMap<i64, Matrix<K>>) -> Result<Self> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|&(_, k)| k > 0).collect();
        let mut kept = BTreeMap::new();
        for (n, m) in d {
            let (rows, cols) = (
                dims.get(&(n - 1)).copied().unwrap_or(0),
                dims.get(&n).copied().unwrap_or(0),
            );
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Dimension(format!(
                    "d_{n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    rows,
                    cols
                )));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        Ok(ChainComplex { dims, d: kept })
    }

    pub fn zero() -> Self {
        ChainComplex { dims: BTreeMap::new(), d: BTreeMap::new() }
    }

    /// One-dimensional complex concentrated in degree 0; the tensor unit.
    pub fn unit() -> Self {
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        ChainComplex { dims, d: BTreeMap::new() }
    }

    pub fn concentrated(degree: i64, dim: usize) -> Self {
        let mut dims = BTreeMap::new();
        dims.insert(degree, dim);
        ChainComplex::new(dims, BTreeMap::new()).unwrap()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        let lo = *self.dims.keys().next()?;
        let hi = *self.dims.keys().last()?;
        Some((lo, hi))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    /// The differential leaving degree `n`, materialized (zero when absent).
    pub fn d(&self, n: i64) -> Matrix<K> {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.dim(n - 1), self.dim(n)))
    }

    pub fn stored_d(&self) -> &BTreeMap<i64, Matrix<K>> {
        &self.d
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Checks `d∘d = 0` in every degree; returns one violation per failing
    /// degree rather than panicking.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (&n, dn) in &self.d {
            if let Some(dn1) = self.d.get(&(n + 1)) {
                if !dn.mul(dn1).is_zero() {
                    violations.push(Violation::new(
                        "d-squared",
                        &[("degree", n + 1)],
                        format!("d_{} ∘ d_{} is nonzero", n, n + 1),
                    ));
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn homology(&self) -> Result<Homology<K>> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(format!("invalid complex: {violations:?}")));
        }
        let mut spaces = BTreeMap::new();
        for &n in self.dims.keys() {
            let (cycles, _) = kernel_image(&self.d(n));
            let (_, boundaries) = kernel_image(&self.d(n + 1));
            let quotient = Quotient::new(cycles, &boundaries)?;
            spaces.insert(n, quotient);
        }
        Ok(Homology { spaces, dims: self.dims.clone() })
    }

    /// Linear dual: degree `n` holds the dual of degree `-n`, with the sign
    /// convention `(d f)(x) = (-1)^{|f|} f(dx)`.
    pub fn dual(&self) -> ChainComplex<K> {
        let dims: BTreeMap<i64, usize> = self.dims.iter().map(|(&n, &k)| (-n, k)).collect();
        let mut d = BTreeMap::new();
        for (&m, dm) in &self.d {
            // d_m : K_m -> K_{m-1} dualizes to a map in dual-degree 1-m
            let n = 1 - m;
            let mut t = dm.transpose();
            if n.rem_euclid(2) == 1 {
                t = t.neg();
            }
            d.insert(n, t);
        }
        ChainComplex::new(dims, d).expect("shapes transpose consistently")
    }
}

/// Homology presented by cycle representatives: in each degree a quotient
/// `ker d_n / im d_{n+1}` with its chosen representative rows.
#[derive(Clone, Debug)]
pub struct Homology<K: Scalar> {
    spaces: BTreeMap<i64, Quotient<K>>,
    dims: BTreeMap<i64, usize>,
}

impl<K: Scalar> Homology<K> {
    pub fn dim(&self, n: i64) -> usize {
        self.spaces.get(&n).map_or(0, Quotient::dim)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.spaces.iter().filter(|(_, q)| q.dim() > 0).map(|(&n, q)| (n, q.dim())).collect()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.spaces.keys().copied()
    }

    /// Representative cycles in degree `n`, one ambient row per class.
    pub fn representatives(&self, n: i64) -> Matrix<K> {
        self.spaces
            .get(&n)
            .map(Quotient::representatives)
            .unwrap_or_else(|| Matrix::zero(0, self.dims.get(&n).copied().unwrap_or(0)))
    }

    /// Class coordinates of a cycle; `None` when the vector is not a cycle.
    pub fn class_of(&self, n: i64, v: &[K]) -> Option<Vec<K>> {
        match self.spaces.get(&n) {
            Some(q) => q.class_of(v),
            None => v.iter().all(K::is_zero).then(Vec::new),
        }
    }

    pub fn quotient(&self, n: i64) -> Option<&Quotient<K>> {
        self.spaces.get(&n)
    }

    /// Homology as a complex with zero differential.
    pub fn to_complex(&self) -> ChainComplex<K> {
        let dims = self.dims();
        ChainComplex::new(dims, BTreeMap::new()).expect("no differentials")
    }

    /// `sum (-1)^n dim K_n = sum (-1)^n dim H_n`, exact.
    pub fn euler_identity_holds(&self, complex: &ChainComplex<K>) -> bool {
        let lhs: i64 = complex.dims.iter().map(|(&n, &k)| sign(n) * k as i64).sum();
        let rhs: i64 = self.spaces.iter().map(|(&n, q)| sign(n) * q.dim() as i64).sum();
        lhs == rhs
    }
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A degree-0 chain map; commutation with the differentials is verified at
/// construction time.
#[derive(Clone, Debug)]
pub struct ChainMap<K: Scalar> {
    source: ChainComplex<K>,
    target: ChainComplex<K>,
    components: BTreeMap<i64, Matrix<K>>,
}

impl<K: Scalar> ChainMap<K> {
    pub fn new(
        source: ChainComplex<K>,
        target: ChainComplex<K>,
        components: BTreeMap<i64, Matrix<K>>,
    ) -> Result<Self> {
        let map = ChainMap::new_unchecked(source, target, components)?;
        map.verify()?;
        Ok(map)
    }

    /// Shape-checks only; used to build candidate maps that a validation
    /// routine is itself expected to reject.
    pub fn new_unchecked(
        source: ChainComplex<K>,
        target: ChainComplex<K>,
        components: BTreeMap<i64, Matrix<K>>,
    ) -> Result<Self> {
        let components: BTreeMap<i64, Matrix<K>> =
            components.into_iter().filter(|(_, m)| !(m.rows() == 0 && m.cols() == 0)).collect();
        for (&n, m) in &components {
            if m.rows() != target.dim(n) || m.cols() != source.dim(n) {
                return Err(Error::Dimension(format!(
                    "component at degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(c: &ChainComplex<K>) -> Self {
        let components =
            c.dims().iter().map(|(&n, &k)| (n, Matrix::identity(k))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn source(&self) -> &ChainComplex<K> {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex<K> {
        &self.target
    }

    pub fn component(&self, n: i64) -> Matrix<K> {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.target.dim(n), self.source.dim(n)))
    }

    /// Verifies `d_target ∘ f_n = f_{n-1} ∘ d_source` in all degrees.
    pub fn verify(&self) -> Result<()> {
        let degrees: Vec<i64> = self.source.degrees().collect();
        for n in degrees {
            let lhs = self.target.d(n).mul(&self.component(n));
            let rhs = self.component(n - 1).mul(&self.source.d(n));
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("square at degree {n} does not commute")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, inner: &ChainMap<K>) -> Result<ChainMap<K>> {
        if inner.target.dims() != self.source.dims() {
            return Err(Error::Dimension("composition of incompatible chain maps".into()));
        }
        let mut components = BTreeMap::new();
        for &n in inner.source.dims().keys() {
            components.insert(n, self.component(n).mul(&inner.component(n)));
        }
        ChainMap::new_unchecked(inner.source.clone(), self.target.clone(), components)
    }

    /// The matrices induced on homology, in the chosen representative bases.
    pub fn induced_on_homology(&self) -> Result<BTreeMap<i64, Matrix<K>>> {
        let hs = self.source.homology()?;
        let ht = self.target.homology()?;
        self.induced_with(&hs, &ht)
    }

    pub fn induced_with(
        &self,
        hs: &Homology<K>,
        ht: &Homology<K>,
    ) -> Result<BTreeMap<i64, Matrix<K>>> {
        let mut out = BTreeMap::new();
        let mut degrees: Vec<i64> = hs.degrees().chain(ht.degrees()).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for n in degrees {
            let reps = hs.representatives(n);
            let mut cols = Vec::with_capacity(reps.rows());
            let f = self.component(n);
            for i in 0..reps.rows() {
                let image = f.apply(reps.row_slice(i));
                let class = ht.class_of(n, &image).ok_or_else(|| {
                    Error::Internal(format!("image of a cycle is not a cycle at degree {n}"))
                })?;
                cols.push(class);
            }
            out.insert(n, Matrix::from_fn(ht.dim(n), reps.rows(), |i, j| cols[j][i].clone()));
        }
        Ok(out)
    }
}

/// Verdicts produced by [`map_analysis`].
#[derive(Clone, Debug)]
pub struct MapAnalysis<K: Scalar> {
    pub induced: BTreeMap<i64, Matrix<K>>,
    pub quasi_iso: bool,
    pub q_quasi_iso: Option<bool>,
}

/// Induced maps on homology together with the quasi-isomorphism verdict and
/// optionally the `q`-quasi-isomorphism verdict (isomorphism in degrees
/// `<= q`, epimorphism in degree `q+1`).
pub fn map_analysis<K: Scalar>(f: &ChainMap<K>, q: Option<i64>) -> Result<MapAnalysis<K>> {
    f.verify()?;
    let hs = f.source().homology()?;
    let ht = f.target().homology()?;
    let induced = f.induced_with(&hs, &ht)?;
    let iso_at = |n: i64| -> bool {
        let (ds, dt) = (hs.dim(n), ht.dim(n));
        if ds != dt {
            return false;
        }
        match induced.get(&n) {
            Some(m) => m.rank() == dt,
            None => ds == 0,
        }
    };
    let epi_at = |n: i64| -> bool {
        match induced.get(&n) {
            Some(m) => m.rank() == ht.dim(n),
            None => ht.dim(n) == 0,
        }
    };
    let mut all_degrees: Vec<i64> = hs.degrees().chain(ht.degrees()).collect();
    all_degrees.sort_unstable();
    all_degrees.dedup();
    let quasi_iso = all_degrees.iter().all(|&n| iso_at(n));
    let q_quasi_iso = q.map(|q| all_degrees.iter().filter(|&&n| n <= q).all(|&n| iso_at(n)) && epi_at(q + 1));
    Ok(MapAnalysis { induced, quasi_iso, q_quasi_iso })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn tag(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        }
    }
}

/// A zig-zag `O_0 ~ O_1 ~ ... ~ O_l` of chain maps; a forward step maps
/// `O_{i-1} -> O_i`, a backward step `O_i -> O_{i-1}`.
#[derive(Clone, Debug)]
pub struct ZigZag<K: Scalar> {
    objects: Vec<ChainComplex<K>>,
    steps: Vec<(Direction, ChainMap<K>)>,
}

impl<K: Scalar> ZigZag<K> {
    pub fn identity(object: ChainComplex<K>) -> Self {
        ZigZag { objects: vec![object], steps: Vec::new() }
    }

    pub fn new(objects: Vec<ChainComplex<K>>, steps: Vec<(Direction, ChainMap<K>)>) -> Result<Self> {
        if objects.is_empty() || objects.len() != steps.len() + 1 {
            return Err(Error::Invalid("zig-zag must have one more object than steps".into()));
        }
        for (i, (dir, map)) in steps.iter().enumerate() {
            let (expected_src, expected_tgt) = match dir {
                Direction::Forward => (&objects[i], &objects[i + 1]),
                Direction::Backward => (&objects[i + 1], &objects[i]),
            };
            if map.source().dims() != expected_src.dims() || map.target().dims() != expected_tgt.dims()
            {
                return Err(Error::Invalid(format!("zig-zag step {i} does not match its endpoints")));
            }
        }
        Ok(ZigZag { objects, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn objects(&self) -> &[ChainComplex<K>] {
        &self.objects
    }

    pub fn steps(&self) -> &[(Direction, ChainMap<K>)] {
        &self.steps
    }

    pub fn first(&self) -> &ChainComplex<K> {
        self.objects.first().unwrap()
    }

    pub fn last(&self) -> &ChainComplex<K> {
        self.objects.last().unwrap()
    }

    pub fn all_quasi_iso(&self) -> Result<bool> {
        for (_, map) in &self.steps {
            if !map_analysis(map, None)?.quasi_iso {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Composite isomorphism `H_n(O_0) -> H_n(O_l)` induced on homology;
    /// backward steps are inverted (each must be a quasi-isomorphism).
    pub fn transport_on_homology(&self, n: i64) -> Result<Matrix<K>> {
        let h0 = self.objects[0].homology()?;
        let mut acc = Matrix::identity(h0.dim(n));
        for (dir, map) in &self.steps {
            let induced = map.induced_on_homology()?;
            let m = induced
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Matrix::zero(0, 0));
            let m = match dir {
                Direction::Forward => m,
                Direction::Backward => {
                    if m.rows() == 0 && m.cols() == 0 {
                        m
                    } else {
                        m.inverse().map_err(|_| {
                            Error::Invalid(format!(
                                "backward zig-zag step is not invertible on H_{n}"
                            ))
                        })?
                    }
                }
            };
            acc = if acc.rows() == 0 && m.cols() == 0 && m.rows() == 0 {
                Matrix::zero(0, acc.cols())
            } else {
                m.mul(&acc)
            };
        }
        Ok(acc)
    }
}

/// Block layout of a tensor product of two complexes: in total degree `n`
/// the summands `A_i ⊗ B_{n-i}` appear in ascending `i`, each flattened in
/// the Kronecker (lexicographic) order.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub blocks: BTreeMap<i64, Vec<TensorBlock>>,
}

#[derive(Clone, Debug)]
pub struct TensorBlock {
    pub a_deg: i64,
    pub b_deg: i64,
    pub a_dim: usize,
    pub b_dim: usize,
    pub offset: usize,
}

impl TensorLayout {
    pub fn dim(&self, n: i64) -> usize {
        self.blocks.get(&n).map_or(0, |bs| {
            bs.last().map_or(0, |b| b.offset + b.a_dim * b.b_dim)
        })
    }

    pub fn block(&self, n: i64, a_deg: i64) -> Option<&TensorBlock> {
        self.blocks.get(&n)?.iter().find(|b| b.a_deg == a_deg)
    }
}

fn place_block<K: Scalar>(dst: &mut Matrix<K>, r0: usize, c0: usize, block: &Matrix<K>) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block.get(i, j);
            if !v.is_zero() {
                dst.set(r0 + i, c0 + j, v.clone());
            }
        }
    }
}

/// Tensor product of complexes with the fixed Koszul convention; also
/// returns the block layout so callers can address summands.
pub fn tensor_complex<K: Scalar>(
    a: &ChainComplex<K>,
    b: &ChainComplex<K>,
) -> (ChainComplex<K>, TensorLayout) {
    let mut blocks: BTreeMap<i64, Vec<TensorBlock>> = BTreeMap::new();
    for (&i, &da) in a.dims().iter() {
        for (&j, &db) in b.dims().iter() {
            let entry = blocks.entry(i + j).or_default();
            entry.push(TensorBlock { a_deg: i, b_deg: j, a_dim: da, b_dim: db, offset: 0 });
        }
    }
    for list in blocks.values_mut() {
        list.sort_by_key(|b| b.a_deg);
        let mut offset = 0;
        for b in list {
            b.offset = offset;
            offset += b.a_dim * b.b_dim;
        }
    }
    let layout = TensorLayout { blocks };
    let dims: BTreeMap<i64, usize> =
        layout.blocks.keys().map(|&n| (n, layout.dim(n))).filter(|&(_, k)| k > 0).collect();

    let mut d = BTreeMap::new();
    for &n in dims.keys() {
        let (rows, cols) = (layout.dim(n - 1), layout.dim(n));
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(rows, cols);
        for src in layout.blocks.get(&n).into_iter().flatten() {
            // da ⊗ id lands in block (a_deg - 1, b_deg)
            if let Some(tgt) = layout.block(n - 1, src.a_deg - 1) {
                let da = a.d(src.a_deg);
                if !da.is_zero() {
                    let k = da.kronecker(&Matrix::identity(src.b_dim));
                    place_block(&mut m, tgt.offset, src.offset, &k);
                }
            }
            // (-1)^{a_deg} id ⊗ db lands in block (a_deg, b_deg - 1)
            if let Some(tgt) = layout.block(n - 1, src.a_deg) {
                let db = b.d(src.b_deg);
                if !db.is_zero() {
                    let mut k = Matrix::identity(src.a_dim).kronecker(&db);
                    if src.a_deg.rem_euclid(2) == 1 {
                        k = k.neg();
                    }
                    place_block(&mut m, tgt.offset, src.offset, &k);
                }
            }
        }
        if !m.is_zero() {
            d.insert(n, m);
        }
    }
    (ChainComplex::new(dims, d).expect("layout shapes are consistent"), layout)
}

/// Tensor product of two degree-0 chain maps on the block layouts of their
/// sources and targets (no Koszul signs arise in degree 0).
pub fn tensor_chain_maps<K: Scalar>(
    f: &ChainMap<K>,
    g: &ChainMap<K>,
) -> Result<ChainMap<K>> {
    let (src, src_layout) = tensor_complex(f.source(), g.source());
    let (tgt, tgt_layout) = tensor_complex(f.target(), g.target());
    let mut components = BTreeMap::new();
    for &n in src.dims().keys() {
        let mut m = Matrix::zero(tgt_layout.dim(n), src_layout.dim(n));
        for sb in src_layout.blocks.get(&n).into_iter().flatten() {
            if let Some(tb) = tgt_layout.block(n, sb.a_deg) {
                let k = f.component(sb.a_deg).kronecker(&g.component(sb.b_deg));
                place_block(&mut m, tb.offset, sb.offset, &k);
            }
        }
        components.insert(n, m);
    }
    ChainMap::new(src, tgt, components)
}

/// The Koszul braiding `A⊗B -> B⊗A`, `a⊗b -> (-1)^{|a||b|} b⊗a`, as
/// per-degree matrices.
pub fn braiding<K: Scalar>(
    a: &ChainComplex<K>,
    b: &ChainComplex<K>,
) -> Result<ChainMap<K>> {
    let (ab, ab_layout) = tensor_complex(a, b);
    let (ba, ba_layout) = tensor_complex(b, a);
    let mut components = BTreeMap::new();
    for &n in ab.dims().keys() {
        let mut m = Matrix::zero(ba_layout.dim(n), ab_layout.dim(n));
        for sb in ab_layout.blocks.get(&n).into_iter().flatten() {
            let tb = ba_layout
                .block(n, sb.b_deg)
                .expect("mirror block exists");
            let sign = if (sb.a_deg * sb.b_deg).rem_euclid(2) == 1 { K::one().neg() } else { K::one() };
            for ia in 0..sb.a_dim {
                for ib in 0..sb.b_dim {
                    let col = sb.offset + ia * sb.b_dim + ib;
                    let row = tb.offset + ib * sb.a_dim + ia;
                    m.set(row, col, sign.clone());
                }
            }
        }
        components.insert(n, m);
    }
    ChainMap::new(ab, ba, components)
}

/// The regrouping isomorphism `(A⊗B)⊗C -> A⊗(B⊗C)` (a block permutation;
/// Kronecker flattening is strictly associative inside each triple block).
pub fn tensor_associator<K: Scalar>(
    a: &ChainComplex<K>,
    b: &ChainComplex<K>,
    c: &ChainComplex<K>,
) -> Result<ChainMap<K>> {
    let (ab, ab_layout) = tensor_complex(a, b);
    let (lhs, lhs_layout) = tensor_complex(&ab, c);
    let (bc, bc_layout) = tensor_complex(b, c);
    let (rhs, rhs_layout) = tensor_complex(a, &bc);
    let mut components = BTreeMap::new();
    for &n in lhs.dims().keys() {
        let mut m = Matrix::zero(rhs_layout.dim(n), lhs_layout.dim(n));
        for outer in lhs_layout.blocks.get(&n).into_iter().flatten() {
            // outer: (A⊗B)-degree s = outer.a_deg, C-degree t = outer.b_deg
            for inner in ab_layout.blocks.get(&outer.a_deg).into_iter().flatten() {
                let (i, j, t) = (inner.a_deg, inner.b_deg, outer.b_deg);
                let rhs_outer = rhs_layout.block(n, i).expect("block exists");
                let rhs_inner = bc_layout.block(j + t, j).expect("block exists");
                let (di, dj, dt) = (inner.a_dim, inner.b_dim, outer.b_dim);
                for x in 0..di {
                    for y in 0..dj {
                        for z in 0..dt {
                            let col = outer.offset + (inner.offset + x * dj + y) * dt + z;
                            let row = rhs_outer.offset
                                + x * bc_layout.dim(j + t)
                                + rhs_inner.offset
                                + y * dt
                                + z;
                            m.set(row, col, K::one());
                        }
                    }
                }
            }
        }
        components.insert(n, m);
    }
    ChainMap::new(lhs, rhs, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn two_term_acyclic() -> ChainComplex<Rat> {
        // 0 -> Q -> Q -> 0 with d = id
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(1, 1);
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::identity(1));
        ChainComplex::new(dims, d).unwrap()
    }

    #[test]
    fn validate_flags_bad_degree() {
        let mut dims = BTreeMap::new();
        for n in 0..3 {
            dims.insert(n, 1);
        }
        let mut d = BTreeMap::new();
        d.insert(1, Matrix::identity(1));
        d.insert(2, Matrix::identity(1));
        let c = ChainComplex::<Rat>::new(dims, d).unwrap();
        let violations = c.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].locus.get("degree"), Some(&2));
    }

    #[test]
    fn homology_of_zero_differential() {
        let c = ChainComplex::<Rat>::concentrated(2, 3);
        let h = c.homology().unwrap();
        assert_eq!(h.dim(2), 3);
        assert!(h.euler_identity_holds(&c));
    }

    #[test]
    fn homology_of_acyclic() {
        let c = two_term_acyclic();
        let h = c.homology().unwrap();
        assert_eq!(h.dim(0), 0);
        assert_eq!(h.dim(1), 0);
        assert!(h.euler_identity_holds(&c));
    }

    #[test]
    fn identity_is_quasi_iso() {
        let c = two_term_acyclic();
        let f = ChainMap::identity(&c);
        let analysis = map_analysis(&f, Some(0)).unwrap();
        assert!(analysis.quasi_iso);
        assert_eq!(analysis.q_quasi_iso, Some(true));
    }

    #[test]
    fn tensor_with_unit_preserves_dims() {
        let c = two_term_acyclic();
        let (t, _) = tensor_complex(&c, &ChainComplex::unit());
        assert_eq!(t.dims(), c.dims());
        assert_eq!(t.d(1), c.d(1));
    }

    #[test]
    fn tensor_of_acyclics_is_acyclic() {
        let c = two_term_acyclic();
        let (t, _) = tensor_complex(&c, &c);
        assert!(t.is_valid());
        let h = t.homology().unwrap();
        assert_eq!(h.dims().len(), 0);
    }

    #[test]
    fn dual_swaps_homology_degrees() {
        let c = two_term_acyclic();
        let (t, _) = tensor_complex(&c, &ChainComplex::concentrated(2, 2));
        let dual = t.dual();
        assert!(dual.is_valid());
        let h = t.homology().unwrap();
        let hd = dual.homology().unwrap();
        for n in -5..5 {
            assert_eq!(h.dim(n), hd.dim(-n));
        }
        // double dual has the original dimensions
        assert_eq!(t.dual().dual().dims(), t.dims());
    }

    #[test]
    fn braiding_is_a_chain_map_and_involution() {
        let c = two_term_acyclic();
        let d = ChainComplex::<Rat>::concentrated(1, 2);
        let s = braiding(&c, &d).unwrap();
        let s_back = braiding(&d, &c).unwrap();
        let round = s_back.compose(&s).unwrap();
        round.verify().unwrap();
        for &n in round.source().dims().keys() {
            assert_eq!(round.component(n), Matrix::identity(round.source().dim(n)));
        }
    }

    #[test]
    fn associator_is_a_chain_map() {
        let c = two_term_acyclic();
        let d = ChainComplex::<Rat>::concentrated(1, 2);
        let e = ChainComplex::<Rat>::concentrated(-1, 2);
        let assoc = tensor_associator(&c, &d, &e).unwrap();
        assoc.verify().unwrap();
        for &n in assoc.source().dims().keys() {
            assert_eq!(assoc.component(n).rank(), assoc.source().dim(n));
        }
    }
}
