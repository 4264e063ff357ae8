//! Nonsymmetric operads and graded monoids in (weight-graded) chain
//! complexes: axiom validation as exact matrix identities, passage to
//! homology, and transport of the truncation zig-zag across every
//! composition map.

use std::collections::BTreeMap;

use crate::bigraded::{
    bigraded_associator, bigraded_braiding, invert_permutation_map, tensor_bigraded,
    tensor_bigraded_maps, BigradedComplex, BigradedMap, Cell,
};
use crate::complex::Violation;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::purity::PurityParams;
use crate::scalar::Scalar;
use crate::witness::{composition_compatibility, transport_legs, zigzag_maps, FormalityWitness};

/// One composition of a structure, with named endpoints. Operads carry the
/// slot index, monoids do not.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompositionKey<Id: Ord + Clone> {
    pub a: Id,
    pub slot: Option<usize>,
    pub b: Id,
    pub target: Id,
}

impl<Id: Ord + Clone + std::fmt::Display> CompositionKey<Id> {
    pub fn label(&self) -> String {
        match self.slot {
            Some(i) => format!("({},{},{})", self.a, i, self.b),
            None => format!("({},{})", self.a, self.b),
        }
    }
}

/// The shared shape of operads and graded monoids: components plus binary
/// composition maps out of bigraded tensors, stored as cellwise matrices.
pub struct StructureCore<K: Scalar, Id: Ord + Clone> {
    pub components: BTreeMap<Id, BigradedComplex<K>>,
    pub compositions: BTreeMap<CompositionKey<Id>, BTreeMap<Cell, Matrix<K>>>,
}

/// One compatibility verdict per composition map.
#[derive(Clone, Debug)]
pub struct CompositionCheck {
    pub label: String,
    /// image of the truncated tensor lands in the truncated target
    pub tau_closed: bool,
    /// inclusion legs commute with the composition
    pub phi_square: bool,
    /// projection legs commute with the induced homology composition
    pub psi_square: bool,
}

impl CompositionCheck {
    pub fn passes(&self) -> bool {
        self.tau_closed && self.phi_square && self.psi_square
    }
}

/// Formality of a whole structure: per-component witnesses plus the
/// compatibility of both legs with every composition.
pub struct StructuredWitness<K: Scalar> {
    pub components: BTreeMap<String, FormalityWitness<K>>,
    pub checks: Vec<CompositionCheck>,
}

impl<K: Scalar> StructuredWitness<K> {
    pub fn is_formal(&self) -> bool {
        self.components.values().all(FormalityWitness::is_formal)
            && self.checks.iter().all(CompositionCheck::passes)
    }

    /// Labels of components whose homology fails the purity line.
    pub fn impure_components(&self) -> Vec<String> {
        self.components
            .iter()
            .filter(|(_, w)| !w.purity.is_pure())
            .map(|(k, _)| k.clone())
            .collect()
    }
}

impl<K: Scalar, Id: Ord + Clone + std::fmt::Display> StructureCore<K, Id> {
    /// Homology components and induced compositions on representatives.
    pub fn homology_structure(
        &self,
    ) -> Result<(
        BTreeMap<Id, BigradedComplex<K>>,
        BTreeMap<CompositionKey<Id>, BTreeMap<Cell, Matrix<K>>>,
    )> {
        let mut h_components = BTreeMap::new();
        let mut homologies = BTreeMap::new();
        for (id, component) in &self.components {
            h_components.insert(id.clone(), component.homology_complex()?);
            homologies.insert(id.clone(), component.column_homology()?);
        }
        let mut h_compositions = BTreeMap::new();
        for (key, cells) in &self.compositions {
            let a = &self.components[&key.a];
            let b = &self.components[&key.b];
            let (_, layout) = tensor_bigraded(a, b);
            let (h_src, h_layout) = tensor_bigraded(&h_components[&key.a], &h_components[&key.b]);
            let target_h = &homologies[&key.target];
            let mut induced: BTreeMap<Cell, Matrix<K>> = BTreeMap::new();
            for (&cell, _) in h_src.dims() {
                let rows_target = h_components[&key.target].dim(cell);
                let mut m = Matrix::zero(rows_target, h_layout.dim(cell));
                for block in h_layout.blocks.get(&cell).into_iter().flatten() {
                    let reps_a =
                        homologies[&key.a][&block.a_cell.1].representatives(block.a_cell.0);
                    let reps_b =
                        homologies[&key.b][&block.b_cell.1].representatives(block.b_cell.0);
                    let Some(t_block) = layout.block(cell, block.a_cell) else {
                        continue;
                    };
                    if t_block.b_cell != block.b_cell {
                        continue;
                    }
                    let kron = reps_a.kronecker(&reps_b);
                    let gamma = cells.get(&cell).cloned().unwrap_or_else(|| {
                        Matrix::zero(self.components[&key.target].dim(cell), layout.dim(cell))
                    });
                    for row in 0..kron.rows() {
                        let mut vector = vec![K::zero(); layout.dim(cell)];
                        for (idx, v) in kron.row_slice(row).iter().enumerate() {
                            vector[t_block.offset + idx] = v.clone();
                        }
                        let image = gamma.apply(&vector);
                        let class = target_h
                            .get(&cell.1)
                            .and_then(|h| h.class_of(cell.0, &image))
                            .or_else(|| {
                                image.iter().all(K::is_zero).then(Vec::new)
                            })
                            .ok_or_else(|| {
                                Error::Internal("composition image is not a cycle".into())
                            })?;
                        for (i, v) in class.into_iter().enumerate() {
                            m.set(i, block.offset + row, v);
                        }
                    }
                }
                if !m.is_zero() {
                    induced.insert(cell, m);
                }
            }
            h_compositions.insert(key.clone(), induced);
        }
        Ok((h_components, h_compositions))
    }

    /// Runs the truncation witness on every component and verifies both
    /// legs against every composition map, cellwise and exactly.
    pub fn transport(&self, params: &PurityParams) -> Result<StructuredWitness<K>> {
        let mut witnesses = BTreeMap::new();
        let mut legs = BTreeMap::new();
        for (id, component) in &self.components {
            witnesses.insert(id.to_string(), zigzag_maps(component, params, None)?);
            legs.insert(id.clone(), transport_legs(component, params)?);
        }
        let mut checks = Vec::new();
        for (key, cells) in &self.compositions {
            let (tau_closed, phi_square, psi_square) = composition_compatibility(
                &self.components[&key.a],
                &self.components[&key.b],
                &self.components[&key.target],
                &legs[&key.a],
                &legs[&key.b],
                &legs[&key.target],
                cells,
                params,
            )?;
            checks.push(CompositionCheck { label: key.label(), tau_closed, phi_square, psi_square });
        }
        Ok(StructuredWitness { components: witnesses, checks })
    }
}

fn maps_equal<K: Scalar>(f: &BigradedMap<K>, g: &BigradedMap<K>) -> bool {
    if f.source().dims() != g.source().dims() || f.target().dims() != g.target().dims() {
        return false;
    }
    f.source().dims().keys().all(|&cell| f.component(cell) == g.component(cell))
}

/// Checks that inserting the unit into one slot of `gamma` acts as the
/// identity of `component`; reports the first failing cell.
fn check_unit_action<K: Scalar>(
    gamma: &BigradedMap<K>,
    unit_factor: &BigradedComplex<K>,
    unit: &[K],
    component: &BigradedComplex<K>,
    left: bool,
) -> std::result::Result<(), Cell> {
    let unit_dim = unit.len();
    for (&cell, &dim) in component.dims() {
        let layout = if left {
            tensor_bigraded(unit_factor, component).1
        } else {
            tensor_bigraded(component, unit_factor).1
        };
        let a_cell = if left { (0, 0) } else { cell };
        let b_cell = if left { cell } else { (0, 0) };
        let block = match layout.block(cell, a_cell) {
            Some(b) if b.b_cell == b_cell => b,
            _ => {
                if dim > 0 && unit_dim > 0 {
                    return Err(cell);
                }
                continue;
            }
        };
        let mut with_unit = Matrix::zero(layout.dim(cell), dim);
        for j in 0..dim {
            for (u, coeff) in unit.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let offset = if left {
                    block.offset + u * dim + j
                } else {
                    block.offset + j * unit_dim + u
                };
                with_unit.set(offset, j, coeff.clone());
            }
        }
        if gamma.component(cell).mul(&with_unit) != Matrix::identity(dim) {
            return Err(cell);
        }
    }
    Ok(())
}

/// A nonsymmetric operad with weight-graded components. Arity 0 is
/// allowed. Compositions are stored as raw cellwise matrices out of the
/// bigraded tensor `P(n) ⊗ P(m)`.
#[derive(Clone, Debug)]
pub struct NsOperad<K: Scalar> {
    components: BTreeMap<usize, BigradedComplex<K>>,
    /// coordinates of the unit in the `(0, 0)` cell of the arity-1
    /// component
    unit: Vec<K>,
    compositions: BTreeMap<(usize, usize, usize), BTreeMap<Cell, Matrix<K>>>,
}

impl<K: Scalar> NsOperad<K> {
    pub fn new(
        components: BTreeMap<usize, BigradedComplex<K>>,
        unit: Vec<K>,
        compositions: BTreeMap<(usize, usize, usize), BTreeMap<Cell, Matrix<K>>>,
    ) -> Result<Self> {
        let operad = NsOperad { components, unit, compositions };
        operad.check_shapes()?;
        Ok(operad)
    }

    pub fn components(&self) -> &BTreeMap<usize, BigradedComplex<K>> {
        &self.components
    }

    pub fn component(&self, arity: usize) -> Option<&BigradedComplex<K>> {
        self.components.get(&arity)
    }

    pub fn unit(&self) -> &[K] {
        &self.unit
    }

    pub fn compositions(&self) -> &BTreeMap<(usize, usize, usize), BTreeMap<Cell, Matrix<K>>> {
        &self.compositions
    }

    pub fn arities(&self) -> Vec<usize> {
        self.components.keys().copied().collect()
    }

    fn check_shapes(&self) -> Result<()> {
        let one = self
            .components
            .get(&1)
            .ok_or_else(|| Error::Invalid("an operad needs an arity-1 component".into()))?;
        if self.unit.len() != one.dim((0, 0)) {
            return Err(Error::Dimension(
                "unit vector does not match the (0,0) cell of arity 1".into(),
            ));
        }
        for (&(n, i, m), cells) in &self.compositions {
            if i < 1 || i > n {
                return Err(Error::Invalid(format!(
                    "composition slot {i} out of range for arity {n}"
                )));
            }
            let (Some(a), Some(b)) = (self.components.get(&n), self.components.get(&m)) else {
                return Err(Error::Invalid(format!(
                    "composition ({n},{i},{m}) references missing components"
                )));
            };
            let target_arity = n + m - 1;
            let Some(target) = self.components.get(&target_arity) else {
                return Err(Error::Invalid(format!(
                    "composition ({n},{i},{m}) targets missing arity {target_arity}"
                )));
            };
            let (_, layout) = tensor_bigraded(a, b);
            for (&cell, matrix) in cells {
                if matrix.rows() != target.dim(cell) || matrix.cols() != layout.dim(cell) {
                    return Err(Error::Dimension(format!(
                        "composition ({n},{i},{m}) has a bad shape at cell {cell:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The composition as a checked map of bigraded complexes.
    pub fn composition_map(&self, n: usize, i: usize, m: usize) -> Result<BigradedMap<K>> {
        let cells = self
            .compositions
            .get(&(n, i, m))
            .ok_or_else(|| Error::Invalid(format!("missing composition ({n},{i},{m})")))?;
        let (src, _) = tensor_bigraded(&self.components[&n], &self.components[&m]);
        BigradedMap::new(src, self.components[&(n + m - 1)].clone(), cells.clone())
    }

    /// Every axiom as an exact matrix identity: compositions are chain
    /// maps, units act as identities, nested and parallel associativity
    /// (the latter with its Koszul sign, carried by the braiding).
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (&arity, component) in &self.components {
            for v in component.validate() {
                violations.push(v.at("arity", arity as i64));
            }
        }
        if let Some(one) = self.components.get(&1) {
            if one.dim((0, 0)) > 0 && !one.d((0, 0)).apply(&self.unit).iter().all(K::is_zero) {
                violations.push(Violation::new("unit-cycle", &[], "unit is not a cycle"));
            }
        }
        for &(n, i, m) in self.compositions.keys() {
            if let Err(e) = self.composition_map(n, i, m) {
                violations.push(Violation::new(
                    "composition-chain-map",
                    &[("n", n as i64), ("i", i as i64), ("m", m as i64)],
                    e.to_string(),
                ));
            }
        }
        if !violations.is_empty() {
            return violations;
        }
        violations.extend(self.validate_units());
        violations.extend(self.validate_associativity());
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn validate_units(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let one = &self.components[&1];
        for (&arity, component) in &self.components {
            match self.composition_map(1, 1, arity) {
                Ok(gamma) => {
                    if let Err(cell) = check_unit_action(&gamma, one, &self.unit, component, true) {
                        violations.push(Violation::new(
                            "left-unit",
                            &[("arity", arity as i64), ("degree", cell.0), ("weight", cell.1)],
                            "composing with the unit on the left is not the identity",
                        ));
                    }
                }
                Err(e) => violations.push(Violation::new(
                    "left-unit",
                    &[("arity", arity as i64)],
                    e.to_string(),
                )),
            }
            for i in 1..=arity {
                match self.composition_map(arity, i, 1) {
                    Ok(gamma) => {
                        if let Err(cell) =
                            check_unit_action(&gamma, one, &self.unit, component, false)
                        {
                            violations.push(Violation::new(
                                "right-unit",
                                &[
                                    ("arity", arity as i64),
                                    ("slot", i as i64),
                                    ("degree", cell.0),
                                    ("weight", cell.1),
                                ],
                                "composing with the unit on the right is not the identity",
                            ));
                        }
                    }
                    Err(e) => violations.push(Violation::new(
                        "right-unit",
                        &[("arity", arity as i64), ("slot", i as i64)],
                        e.to_string(),
                    )),
                }
            }
        }
        violations
    }

    fn validate_associativity(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let arities = self.arities();
        for &n in &arities {
            for &m in &arities {
                for &l in &arities {
                    if n < 1 {
                        continue;
                    }
                    for i in 1..=n {
                        // nested: (x o_i y) o_{i-1+j} z = x o_i (y o_j z)
                        for j in 1..=m.max(1) {
                            if m < 1 || j > m {
                                continue;
                            }
                            let needed = [
                                self.compositions.contains_key(&(n, i, m)),
                                self.compositions.contains_key(&(n + m - 1, i - 1 + j, l)),
                                self.compositions.contains_key(&(m, j, l)),
                                self.compositions.contains_key(&(n, i, m + l - 1)),
                            ];
                            if !needed.iter().all(|&x| x) {
                                continue;
                            }
                            match self.nested_assoc_holds(n, i, m, j, l) {
                                Ok(true) => {}
                                Ok(false) => violations.push(Violation::new(
                                    "nested-associativity",
                                    &[
                                        ("n", n as i64),
                                        ("i", i as i64),
                                        ("m", m as i64),
                                        ("j", j as i64),
                                        ("l", l as i64),
                                    ],
                                    "nested composition identity fails",
                                )),
                                Err(e) => violations.push(Violation::new(
                                    "nested-associativity",
                                    &[("n", n as i64), ("i", i as i64), ("m", m as i64)],
                                    e.to_string(),
                                )),
                            }
                        }
                        // parallel: (x o_i y) o_{j+m-1} z = ±(x o_j z) o_i y
                        for j in (i + 1)..=n {
                            let needed = [
                                self.compositions.contains_key(&(n, i, m)),
                                self.compositions.contains_key(&(n + m - 1, j + m - 1, l)),
                                self.compositions.contains_key(&(n, j, l)),
                                self.compositions.contains_key(&(n + l - 1, i, m)),
                            ];
                            if !needed.iter().all(|&x| x) {
                                continue;
                            }
                            match self.parallel_assoc_holds(n, i, m, j, l) {
                                Ok(true) => {}
                                Ok(false) => violations.push(Violation::new(
                                    "parallel-associativity",
                                    &[
                                        ("n", n as i64),
                                        ("i", i as i64),
                                        ("m", m as i64),
                                        ("j", j as i64),
                                        ("l", l as i64),
                                    ],
                                    "parallel composition identity fails",
                                )),
                                Err(e) => violations.push(Violation::new(
                                    "parallel-associativity",
                                    &[("n", n as i64), ("i", i as i64), ("m", m as i64)],
                                    e.to_string(),
                                )),
                            }
                        }
                    }
                }
            }
        }
        violations
    }

    fn nested_assoc_holds(&self, n: usize, i: usize, m: usize, j: usize, l: usize) -> Result<bool> {
        let p_n = &self.components[&n];
        let p_m = &self.components[&m];
        let p_l = &self.components[&l];
        let lhs = self.composition_map(n + m - 1, i - 1 + j, l)?.compose(&tensor_bigraded_maps(
            &self.composition_map(n, i, m)?,
            &BigradedMap::identity(p_l),
        )?)?;
        let rhs = self
            .composition_map(n, i, m + l - 1)?
            .compose(&tensor_bigraded_maps(
                &BigradedMap::identity(p_n),
                &self.composition_map(m, j, l)?,
            )?)?
            .compose(&bigraded_associator(p_n, p_m, p_l)?)?;
        Ok(maps_equal(&lhs, &rhs))
    }

    fn parallel_assoc_holds(&self, n: usize, i: usize, m: usize, j: usize, l: usize) -> Result<bool> {
        let p_n = &self.components[&n];
        let p_m = &self.components[&m];
        let p_l = &self.components[&l];
        let lhs = self.composition_map(n + m - 1, j + m - 1, l)?.compose(&tensor_bigraded_maps(
            &self.composition_map(n, i, m)?,
            &BigradedMap::identity(p_l),
        )?)?;
        // (x⊗y)⊗z -> (x⊗z)⊗y with the Koszul sign of swapping y and z
        let assoc = bigraded_associator(p_n, p_m, p_l)?;
        let swap =
            tensor_bigraded_maps(&BigradedMap::identity(p_n), &bigraded_braiding(p_m, p_l)?)?;
        let assoc_back = invert_permutation_map(&bigraded_associator(p_n, p_l, p_m)?);
        let rearrange = assoc_back.compose(&swap.compose(&assoc)?)?;
        let rhs = self
            .composition_map(n + l - 1, i, m)?
            .compose(&tensor_bigraded_maps(
                &self.composition_map(n, j, l)?,
                &BigradedMap::identity(p_m),
            )?)?
            .compose(&rearrange)?;
        Ok(maps_equal(&lhs, &rhs))
    }

    /// Components replaced by their homology (zero differential), with the
    /// compositions induced on representatives.
    pub fn homology_operad(&self) -> Result<NsOperad<K>> {
        let (components, compositions) = self.as_core().homology_structure()?;
        let unit_class = self.components[&1]
            .column(0)
            .homology()?
            .class_of(0, &self.unit)
            .ok_or_else(|| Error::Invalid("unit is not a cycle".into()))?;
        let compositions = compositions
            .into_iter()
            .map(|(key, cells)| ((key.a, key.slot.expect("operad keys carry slots"), key.b), cells))
            .collect();
        NsOperad::new(components, unit_class, compositions)
    }

    /// Per-component truncation witnesses plus compatibility of both legs
    /// with every composition map.
    pub fn transport_formality(&self, params: &PurityParams) -> Result<StructuredWitness<K>> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(format!("invalid operad: {violations:?}")));
        }
        self.as_core().transport(params)
    }

    fn as_core(&self) -> StructureCore<K, usize> {
        StructureCore {
            components: self.components.clone(),
            compositions: self
                .compositions
                .iter()
                .map(|(&(n, i, m), cells)| {
                    (CompositionKey { a: n, slot: Some(i), b: m, target: n + m - 1 }, cells.clone())
                })
                .collect(),
        }
    }
}

/// A graded monoid in weight-graded chain complexes: components indexed by
/// a monoid grading, products `M_d ⊗ M_e -> M_{d+e}`, unit in `M_0`.
#[derive(Clone, Debug)]
pub struct GradedMonoid<K: Scalar> {
    components: BTreeMap<i64, BigradedComplex<K>>,
    unit: Vec<K>,
    products: BTreeMap<(i64, i64), BTreeMap<Cell, Matrix<K>>>,
}

impl<K: Scalar> GradedMonoid<K> {
    pub fn new(
        components: BTreeMap<i64, BigradedComplex<K>>,
        unit: Vec<K>,
        products: BTreeMap<(i64, i64), BTreeMap<Cell, Matrix<K>>>,
    ) -> Result<Self> {
        let zero = components
            .get(&0)
            .ok_or_else(|| Error::Invalid("a graded monoid needs a degree-0 component".into()))?;
        if unit.len() != zero.dim((0, 0)) {
            return Err(Error::Dimension(
                "unit vector does not match the (0,0) cell of M_0".into(),
            ));
        }
        for (&(d, e), cells) in &products {
            let (Some(a), Some(b)) = (components.get(&d), components.get(&e)) else {
                return Err(Error::Invalid(format!(
                    "product ({d},{e}) references missing components"
                )));
            };
            let Some(target) = components.get(&(d + e)) else {
                return Err(Error::Invalid(format!("product ({d},{e}) targets a missing component")));
            };
            let (_, layout) = tensor_bigraded(a, b);
            for (&cell, matrix) in cells {
                if matrix.rows() != target.dim(cell) || matrix.cols() != layout.dim(cell) {
                    return Err(Error::Dimension(format!(
                        "product ({d},{e}) has a bad shape at cell {cell:?}"
                    )));
                }
            }
        }
        Ok(GradedMonoid { components, unit, products })
    }

    pub fn components(&self) -> &BTreeMap<i64, BigradedComplex<K>> {
        &self.components
    }

    pub fn unit(&self) -> &[K] {
        &self.unit
    }

    pub fn products(&self) -> &BTreeMap<(i64, i64), BTreeMap<Cell, Matrix<K>>> {
        &self.products
    }

    pub fn product_map(&self, d: i64, e: i64) -> Result<BigradedMap<K>> {
        let cells = self
            .products
            .get(&(d, e))
            .ok_or_else(|| Error::Invalid(format!("missing product ({d},{e})")))?;
        let (src, _) = tensor_bigraded(&self.components[&d], &self.components[&e]);
        BigradedMap::new(src, self.components[&(d + e)].clone(), cells.clone())
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (&d, component) in &self.components {
            for v in component.validate() {
                violations.push(v.at("grade", d));
            }
        }
        if let Some(zero) = self.components.get(&0) {
            if zero.dim((0, 0)) > 0 && !zero.d((0, 0)).apply(&self.unit).iter().all(K::is_zero) {
                violations.push(Violation::new("unit-cycle", &[], "unit is not a cycle"));
            }
        }
        for &(d, e) in self.products.keys() {
            if let Err(e2) = self.product_map(d, e) {
                violations.push(Violation::new(
                    "product-chain-map",
                    &[("d", d), ("e", e)],
                    e2.to_string(),
                ));
            }
        }
        if !violations.is_empty() {
            return violations;
        }
        let zero = &self.components[&0];
        for (&d, component) in &self.components {
            for (label, left) in [("left-unit", true), ("right-unit", false)] {
                let key = if left { (0, d) } else { (d, 0) };
                match self.product_map(key.0, key.1) {
                    Ok(gamma) => {
                        if let Err(cell) = check_unit_action(&gamma, zero, &self.unit, component, left)
                        {
                            violations.push(Violation::new(
                                label,
                                &[("grade", d), ("degree", cell.0), ("weight", cell.1)],
                                "unit does not act as the identity",
                            ));
                        }
                    }
                    Err(e) => {
                        violations.push(Violation::new(label, &[("grade", d)], e.to_string()))
                    }
                }
            }
        }
        let grades: Vec<i64> = self.components.keys().copied().collect();
        for &d in &grades {
            for &e in &grades {
                for &f in &grades {
                    let needed = [
                        self.products.contains_key(&(d, e)),
                        self.products.contains_key(&(d + e, f)),
                        self.products.contains_key(&(e, f)),
                        self.products.contains_key(&(d, e + f)),
                    ];
                    if !needed.iter().all(|&x| x) || !self.components.contains_key(&(d + e + f)) {
                        continue;
                    }
                    match self.assoc_holds(d, e, f) {
                        Ok(true) => {}
                        Ok(false) => violations.push(Violation::new(
                            "associativity",
                            &[("d", d), ("e", e), ("f", f)],
                            "product is not associative",
                        )),
                        Err(err) => violations.push(Violation::new(
                            "associativity",
                            &[("d", d), ("e", e), ("f", f)],
                            err.to_string(),
                        )),
                    }
                }
            }
        }
        violations
    }

    fn assoc_holds(&self, d: i64, e: i64, f: i64) -> Result<bool> {
        let a = &self.components[&d];
        let b = &self.components[&e];
        let c = &self.components[&f];
        let lhs = self
            .product_map(d + e, f)?
            .compose(&tensor_bigraded_maps(&self.product_map(d, e)?, &BigradedMap::identity(c))?)?;
        let rhs = self
            .product_map(d, e + f)?
            .compose(&tensor_bigraded_maps(&BigradedMap::identity(a), &self.product_map(e, f)?)?)?
            .compose(&bigraded_associator(a, b, c)?)?;
        Ok(maps_equal(&lhs, &rhs))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn homology_monoid(&self) -> Result<GradedMonoid<K>> {
        let (components, compositions) = self.as_core().homology_structure()?;
        let unit_class = self.components[&0]
            .column(0)
            .homology()?
            .class_of(0, &self.unit)
            .ok_or_else(|| Error::Invalid("unit is not a cycle".into()))?;
        let products = compositions.into_iter().map(|(key, m)| ((key.a, key.b), m)).collect();
        GradedMonoid::new(components, unit_class, products)
    }

    pub fn transport_formality(&self, params: &PurityParams) -> Result<StructuredWitness<K>> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(format!("invalid graded monoid: {violations:?}")));
        }
        self.as_core().transport(params)
    }

    fn as_core(&self) -> StructureCore<K, i64> {
        StructureCore {
            components: self.components.clone(),
            compositions: self
                .products
                .iter()
                .map(|(&(d, e), cells)| {
                    (CompositionKey { a: d, slot: None, b: e, target: d + e }, cells.clone())
                })
                .collect(),
        }
    }
}
