//! Weight-graded chain complexes: cells indexed by `(degree n, weight p)`
//! with differentials that preserve the weight and lower the degree. Since
//! the differential is weight-diagonal, each weight column is an ordinary
//! chain complex and homology splits cellwise.

use std::collections::BTreeMap;

use crate::complex::{ChainComplex, Homology, Violation};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Cell index: homological degree, then weight.
pub type Cell = (i64, i64);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradedComplex<K: Scalar> {
    dims: BTreeMap<Cell, usize>,
    /// keyed by the source cell `(n, p)`, mapping to `(n-1, p)`
    d: BTreeMap<Cell, Matrix<K>>,
}

impl<K: Scalar> BigradedComplex<K> {
    pub fn new(dims: BTreeMap<Cell, usize>, d: BTreeMap<Cell, Matrix<K>>) -> Result<Self> {
        let dims: BTreeMap<Cell, usize> = dims.into_iter().filter(|&(_, k)| k > 0).collect();
        let mut kept = BTreeMap::new();
        for ((n, p), m) in d {
            let rows = dims.get(&(n - 1, p)).copied().unwrap_or(0);
            let cols = dims.get(&(n, p)).copied().unwrap_or(0);
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Dimension(format!(
                    "d at cell ({n},{p}) has shape {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                kept.insert((n, p), m);
            }
        }
        Ok(BigradedComplex { dims, d: kept })
    }

    pub fn zero() -> Self {
        BigradedComplex { dims: BTreeMap::new(), d: BTreeMap::new() }
    }

    /// One-dimensional cell at `(0, 0)`; the tensor unit.
    pub fn unit() -> Self {
        let mut dims = BTreeMap::new();
        dims.insert((0, 0), 1);
        BigradedComplex { dims, d: BTreeMap::new() }
    }

    pub fn concentrated(cell: Cell, dim: usize) -> Self {
        let mut dims = BTreeMap::new();
        dims.insert(cell, dim);
        BigradedComplex::new(dims, BTreeMap::new()).unwrap()
    }

    pub fn dims(&self) -> &BTreeMap<Cell, usize> {
        &self.dims
    }

    pub fn dim(&self, cell: Cell) -> usize {
        self.dims.get(&cell).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.dims.keys().copied()
    }

    pub fn weights(&self) -> Vec<i64> {
        let mut ws: Vec<i64> = self.dims.keys().map(|&(_, p)| p).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut ns: Vec<i64> = self.dims.keys().map(|&(n, _)| n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn d(&self, cell: Cell) -> Matrix<K> {
        self.d
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.dim((cell.0 - 1, cell.1)), self.dim(cell)))
    }

    pub fn stored_d(&self) -> &BTreeMap<Cell, Matrix<K>> {
        &self.d
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (&(n, p), dn) in &self.d {
            if let Some(up) = self.d.get(&(n + 1, p)) {
                if !dn.mul(up).is_zero() {
                    violations.push(Violation::new(
                        "d-squared",
                        &[("degree", n + 1), ("weight", p)],
                        format!("d ∘ d nonzero entering cell ({n},{p})", ),
                    ));
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The chain complex in a single weight column.
    pub fn column(&self, p: i64) -> ChainComplex<K> {
        let dims: BTreeMap<i64, usize> = self
            .dims
            .iter()
            .filter(|&(&(_, q), _)| q == p)
            .map(|(&(n, _), &k)| (n, k))
            .collect();
        let d: BTreeMap<i64, Matrix<K>> = self
            .d
            .iter()
            .filter(|&(&(_, q), _)| q == p)
            .map(|(&(n, _), m)| (n, m.clone()))
            .collect();
        ChainComplex::new(dims, d).expect("column shapes are consistent")
    }

    /// Homology of every weight column, keyed by weight.
    pub fn column_homology(&self) -> Result<BTreeMap<i64, Homology<K>>> {
        let mut out = BTreeMap::new();
        for p in self.weights() {
            out.insert(p, self.column(p).homology()?);
        }
        Ok(out)
    }

    /// Per-cell homology dimensions.
    pub fn homology_dims(&self) -> Result<BTreeMap<Cell, usize>> {
        let mut out = BTreeMap::new();
        for (p, h) in self.column_homology()? {
            for (n, k) in h.dims() {
                out.insert((n, p), k);
            }
        }
        Ok(out)
    }

    /// Bigraded homology as a bigraded complex with zero differential.
    pub fn homology_complex(&self) -> Result<BigradedComplex<K>> {
        Ok(BigradedComplex::new(self.homology_dims()?, BTreeMap::new())?)
    }
}

/// Block layout of the degree-forgetting functor: in degree `n` the weight
/// pieces appear in ascending weight order.
#[derive(Clone, Debug)]
pub struct WeightLayout {
    pub blocks: BTreeMap<i64, Vec<WeightBlock>>,
}

#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub weight: i64,
    pub dim: usize,
    pub offset: usize,
}

impl WeightLayout {
    pub fn of<K: Scalar>(b: &BigradedComplex<K>) -> Self {
        let mut blocks: BTreeMap<i64, Vec<WeightBlock>> = BTreeMap::new();
        for (&(n, p), &k) in b.dims() {
            blocks.entry(n).or_default().push(WeightBlock { weight: p, dim: k, offset: 0 });
        }
        for list in blocks.values_mut() {
            list.sort_by_key(|w| w.weight);
            let mut offset = 0;
            for w in list {
                w.offset = offset;
                offset += w.dim;
            }
        }
        WeightLayout { blocks }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.blocks.get(&n).map_or(0, |bs| bs.last().map_or(0, |b| b.offset + b.dim))
    }

    pub fn block(&self, n: i64, weight: i64) -> Option<&WeightBlock> {
        self.blocks.get(&n)?.iter().find(|b| b.weight == weight)
    }
}

/// Forgets the weight: `K_n = ⊕_p B_n^p` with block-diagonal differential.
pub fn forget_weight<K: Scalar>(b: &BigradedComplex<K>) -> (ChainComplex<K>, WeightLayout) {
    let layout = WeightLayout::of(b);
    let dims: BTreeMap<i64, usize> =
        layout.blocks.keys().map(|&n| (n, layout.dim(n))).filter(|&(_, k)| k > 0).collect();
    let mut d = BTreeMap::new();
    for &n in dims.keys() {
        let rows = layout.dim(n - 1);
        let cols = layout.dim(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(rows, cols);
        for src in layout.blocks.get(&n).into_iter().flatten() {
            if let Some(tgt) = layout.block(n - 1, src.weight) {
                let block = b.d((n, src.weight));
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        let v = block.get(i, j);
                        if !v.is_zero() {
                            m.set(tgt.offset + i, src.offset + j, v.clone());
                        }
                    }
                }
            }
        }
        if !m.is_zero() {
            d.insert(n, m);
        }
    }
    (ChainComplex::new(dims, d).expect("layout shapes are consistent"), layout)
}

/// Block layout of a bigraded tensor: the cell `(n, p)` of `A⊗B` is the sum
/// of `A_{(i,r)} ⊗ B_{(n-i, p-r)}` sorted by `(i, r)`.
#[derive(Clone, Debug)]
pub struct BigradedTensorLayout {
    pub blocks: BTreeMap<Cell, Vec<BigradedTensorBlock>>,
}

#[derive(Clone, Debug)]
pub struct BigradedTensorBlock {
    pub a_cell: Cell,
    pub b_cell: Cell,
    pub a_dim: usize,
    pub b_dim: usize,
    pub offset: usize,
}

impl BigradedTensorLayout {
    pub fn dim(&self, cell: Cell) -> usize {
        self.blocks
            .get(&cell)
            .map_or(0, |bs| bs.last().map_or(0, |b| b.offset + b.a_dim * b.b_dim))
    }

    pub fn block(&self, cell: Cell, a_cell: Cell) -> Option<&BigradedTensorBlock> {
        self.blocks.get(&cell)?.iter().find(|b| b.a_cell == a_cell)
    }
}

/// Weight-additive tensor product of bigraded complexes, same Koszul sign
/// as the plain tensor.
pub fn tensor_bigraded<K: Scalar>(
    a: &BigradedComplex<K>,
    b: &BigradedComplex<K>,
) -> (BigradedComplex<K>, BigradedTensorLayout) {
    let mut blocks: BTreeMap<Cell, Vec<BigradedTensorBlock>> = BTreeMap::new();
    for (&(i, r), &da) in a.dims() {
        for (&(j, s), &db) in b.dims() {
            blocks.entry((i + j, r + s)).or_default().push(BigradedTensorBlock {
                a_cell: (i, r),
                b_cell: (j, s),
                a_dim: da,
                b_dim: db,
                offset: 0,
            });
        }
    }
    for list in blocks.values_mut() {
        list.sort_by_key(|b| b.a_cell);
        let mut offset = 0;
        for b in list {
            b.offset = offset;
            offset += b.a_dim * b.b_dim;
        }
    }
    let layout = BigradedTensorLayout { blocks };
    let dims: BTreeMap<Cell, usize> =
        layout.blocks.keys().map(|&c| (c, layout.dim(c))).filter(|&(_, k)| k > 0).collect();
    let mut d = BTreeMap::new();
    for &(n, p) in dims.keys() {
        let rows = layout.dim((n - 1, p));
        let cols = layout.dim((n, p));
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(rows, cols);
        for src in layout.blocks.get(&(n, p)).into_iter().flatten() {
            let (i, r) = src.a_cell;
            let (j, s) = src.b_cell;
            if let Some(tgt) = layout.block((n - 1, p), (i - 1, r)) {
                let da = a.d((i, r));
                if !da.is_zero() {
                    let k = da.kronecker(&Matrix::identity(src.b_dim));
                    place(&mut m, tgt.offset, src.offset, &k);
                }
            }
            if let Some(tgt) = layout.block((n - 1, p), (i, r)) {
                let db = b.d((j, s));
                if !db.is_zero() {
                    let mut k = Matrix::identity(src.a_dim).kronecker(&db);
                    if i.rem_euclid(2) == 1 {
                        k = k.neg();
                    }
                    place(&mut m, tgt.offset, src.offset, &k);
                }
            }
        }
        if !m.is_zero() {
            d.insert((n, p), m);
        }
    }
    (BigradedComplex::new(dims, d).expect("layout shapes are consistent"), layout)
}

fn place<K: Scalar>(dst: &mut Matrix<K>, r0: usize, c0: usize, block: &Matrix<K>) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block.get(i, j);
            if !v.is_zero() {
                dst.set(r0 + i, c0 + j, v.clone());
            }
        }
    }
}

/// A weight-preserving degree-0 map of bigraded complexes, stored cellwise.
#[derive(Clone, Debug)]
pub struct BigradedMap<K: Scalar> {
    source: BigradedComplex<K>,
    target: BigradedComplex<K>,
    components: BTreeMap<Cell, Matrix<K>>,
}

impl<K: Scalar> BigradedMap<K> {
    pub fn new(
        source: BigradedComplex<K>,
        target: BigradedComplex<K>,
        components: BTreeMap<Cell, Matrix<K>>,
    ) -> Result<Self> {
        let m = BigradedMap::new_unchecked(source, target, components)?;
        m.verify()?;
        Ok(m)
    }

    pub fn new_unchecked(
        source: BigradedComplex<K>,
        target: BigradedComplex<K>,
        components: BTreeMap<Cell, Matrix<K>>,
    ) -> Result<Self> {
        for (&cell, m) in &components {
            if m.rows() != target.dim(cell) || m.cols() != source.dim(cell) {
                return Err(Error::Dimension(format!(
                    "component at cell {cell:?} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(cell),
                    source.dim(cell)
                )));
            }
        }
        Ok(BigradedMap { source, target, components })
    }

    pub fn identity(b: &BigradedComplex<K>) -> Self {
        let components = b.dims().iter().map(|(&c, &k)| (c, Matrix::identity(k))).collect();
        BigradedMap { source: b.clone(), target: b.clone(), components }
    }

    pub fn source(&self) -> &BigradedComplex<K> {
        &self.source
    }

    pub fn target(&self) -> &BigradedComplex<K> {
        &self.target
    }

    pub fn component(&self, cell: Cell) -> Matrix<K> {
        self.components
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.target.dim(cell), self.source.dim(cell)))
    }

    pub fn verify(&self) -> Result<()> {
        for &(n, p) in self.source.dims().keys() {
            let lhs = self.target.d((n, p)).mul(&self.component((n, p)));
            let rhs = self.component((n - 1, p)).mul(&self.source.d((n, p)));
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("square at cell ({n},{p}) does not commute")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, inner: &BigradedMap<K>) -> Result<BigradedMap<K>> {
        if inner.target.dims() != self.source.dims() {
            return Err(Error::Dimension("composition of incompatible bigraded maps".into()));
        }
        let components = inner
            .source
            .dims()
            .keys()
            .map(|&cell| (cell, self.component(cell).mul(&inner.component(cell))))
            .collect();
        BigradedMap::new_unchecked(inner.source.clone(), self.target.clone(), components)
    }
}

/// Tensor of two weight-preserving degree-0 maps (no Koszul signs arise).
pub fn tensor_bigraded_maps<K: Scalar>(
    f: &BigradedMap<K>,
    g: &BigradedMap<K>,
) -> Result<BigradedMap<K>> {
    let (src, src_layout) = tensor_bigraded(f.source(), g.source());
    let (tgt, tgt_layout) = tensor_bigraded(f.target(), g.target());
    let mut components = BTreeMap::new();
    for &cell in src.dims().keys() {
        let mut m = Matrix::zero(tgt_layout.dim(cell), src_layout.dim(cell));
        for block in src_layout.blocks.get(&cell).into_iter().flatten() {
            let Some(tb) = tgt_layout.block(cell, block.a_cell) else {
                continue;
            };
            if tb.b_cell != block.b_cell {
                continue;
            }
            let k = f.component(block.a_cell).kronecker(&g.component(block.b_cell));
            place(&mut m, tb.offset, block.offset, &k);
        }
        components.insert(cell, m);
    }
    BigradedMap::new_unchecked(src, tgt, components)
}

/// Koszul braiding `A⊗B -> B⊗A`, `a⊗b -> (-1)^{|a||b|} b⊗a`, on bigraded
/// tensor layouts.
pub fn bigraded_braiding<K: Scalar>(
    a: &BigradedComplex<K>,
    b: &BigradedComplex<K>,
) -> Result<BigradedMap<K>> {
    let (ab, ab_layout) = tensor_bigraded(a, b);
    let (ba, ba_layout) = tensor_bigraded(b, a);
    let mut components = BTreeMap::new();
    for &cell in ab.dims().keys() {
        let mut m = Matrix::zero(ba_layout.dim(cell), ab_layout.dim(cell));
        for block in ab_layout.blocks.get(&cell).into_iter().flatten() {
            let tb = ba_layout.block(cell, block.b_cell).expect("mirror block exists");
            let sign = if (block.a_cell.0 * block.b_cell.0).rem_euclid(2) == 1 {
                K::one().neg()
            } else {
                K::one()
            };
            for ia in 0..block.a_dim {
                for ib in 0..block.b_dim {
                    let col = block.offset + ia * block.b_dim + ib;
                    let row = tb.offset + ib * block.a_dim + ia;
                    m.set(row, col, sign.clone());
                }
            }
        }
        components.insert(cell, m);
    }
    BigradedMap::new_unchecked(ab, ba, components)
}

/// Inverse of a cellwise signed-permutation map (transpose each component;
/// valid because entries are 0 and ±1 with orthonormal columns).
pub fn invert_permutation_map<K: Scalar>(f: &BigradedMap<K>) -> BigradedMap<K> {
    let components = f
        .target()
        .dims()
        .keys()
        .map(|&cell| (cell, f.component(cell).transpose()))
        .collect();
    BigradedMap::new_unchecked(f.target().clone(), f.source().clone(), components)
        .expect("transposed shapes are consistent")
}

/// Regrouping `(A⊗B)⊗C -> A⊗(B⊗C)`: a block permutation with no signs.
pub fn bigraded_associator<K: Scalar>(
    a: &BigradedComplex<K>,
    b: &BigradedComplex<K>,
    c: &BigradedComplex<K>,
) -> Result<BigradedMap<K>> {
    let (ab, ab_layout) = tensor_bigraded(a, b);
    let (lhs, lhs_layout) = tensor_bigraded(&ab, c);
    let (bc, bc_layout) = tensor_bigraded(b, c);
    let (rhs, rhs_layout) = tensor_bigraded(a, &bc);
    let mut components = BTreeMap::new();
    for &cell in lhs.dims().keys() {
        let mut m = Matrix::zero(rhs_layout.dim(cell), lhs_layout.dim(cell));
        for outer in lhs_layout.blocks.get(&cell).into_iter().flatten() {
            for inner in ab_layout.blocks.get(&outer.a_cell).into_iter().flatten() {
                let (ca, cb, cc) = (inner.a_cell, inner.b_cell, outer.b_cell);
                let bc_cell = (cb.0 + cc.0, cb.1 + cc.1);
                let rhs_outer = rhs_layout.block(cell, ca).expect("block exists");
                if rhs_outer.b_cell != bc_cell {
                    continue;
                }
                let rhs_inner = bc_layout.block(bc_cell, cb).expect("block exists");
                let (di, dj, dt) = (inner.a_dim, inner.b_dim, outer.b_dim);
                for x in 0..di {
                    for y in 0..dj {
                        for z in 0..dt {
                            let col = outer.offset + (inner.offset + x * dj + y) * dt + z;
                            let row = rhs_outer.offset
                                + x * bc_layout.dim(bc_cell)
                                + rhs_inner.offset
                                + y * dt
                                + z;
                            m.set(row, col, K::one());
                        }
                    }
                }
            }
        }
        components.insert(cell, m);
    }
    BigradedMap::new_unchecked(lhs, rhs, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn cellmap(entries: &[((i64, i64), usize)]) -> BTreeMap<Cell, usize> {
        entries.iter().copied().collect()
    }

    #[test]
    fn forget_weight_sums_dims() {
        let b = BigradedComplex::<Rat>::new(
            cellmap(&[((0, 0), 1), ((0, 2), 1)]),
            BTreeMap::new(),
        )
        .unwrap();
        let (c, layout) = forget_weight(&b);
        assert_eq!(c.dim(0), 2);
        assert_eq!(layout.block(0, 2).unwrap().offset, 1);
    }

    #[test]
    fn single_weight_column_round_trip() {
        let mut d = BTreeMap::new();
        d.insert((1, 5), Matrix::<Rat>::identity(1));
        let b =
            BigradedComplex::new(cellmap(&[((0, 5), 1), ((1, 5), 1)]), d).unwrap();
        let (c, _) = forget_weight(&b);
        assert_eq!(c.d(1), Matrix::identity(1));
        assert_eq!(b.column(5).d(1), Matrix::identity(1));
        assert!(b.is_valid());
    }

    #[test]
    fn tensor_weights_add() {
        let a = BigradedComplex::<Rat>::concentrated((1, 2), 1);
        let b = BigradedComplex::<Rat>::concentrated((2, 3), 2);
        let (t, layout) = tensor_bigraded(&a, &b);
        assert_eq!(t.dim((3, 5)), 2);
        assert_eq!(layout.dim((3, 5)), 2);
    }

    #[test]
    fn tensor_unit_law() {
        let mut d = BTreeMap::new();
        d.insert((1, -2), Matrix::<Rat>::from_int_rows(&[&[0], &[1]]));
        let a = BigradedComplex::new(
            cellmap(&[((0, -2), 2), ((1, -2), 1)]),
            d,
        )
        .unwrap();
        let (t, _) = tensor_bigraded(&a, &BigradedComplex::unit());
        assert_eq!(t, a);
    }

    #[test]
    fn bigraded_homology_dims() {
        let mut d = BTreeMap::new();
        d.insert((1, 0), Matrix::<Rat>::identity(1));
        let b = BigradedComplex::new(
            cellmap(&[((0, 0), 1), ((1, 0), 1), ((2, 4), 3)]),
            d,
        )
        .unwrap();
        let h = b.homology_dims().unwrap();
        assert_eq!(h.get(&(2, 4)), Some(&3));
        assert_eq!(h.get(&(0, 0)), None);
    }
}
