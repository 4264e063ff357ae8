//! JSON exchange formats and the canonical writer.
//!
//! Scalars are strings `"a/b"` (integer shorthand accepted on input,
//! normalized on output) or `{"re","im"}` objects over `Q(i)`; matrices are
//! arrays of row arrays; filtrations are sparse jump maps, with decreasing
//! filtrations marked `"direction":"decreasing"` and negated on import.
//! Output is canonical: object keys sorted (numerically where they are
//! numbers or comma-separated number tuples), scalars reduced, no
//! insignificant whitespace — identical objects serialize to identical
//! bytes.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::bigraded::{BigradedComplex, Cell};
use crate::complex::{ChainComplex, Direction};
use crate::error::{Error, Result};
use crate::filtration::{complexify_filtered, FilteredComplex, Filtration};
use crate::matrix::Matrix;
use crate::mhc::{FilteredZigZag, MhsComplex, MixedHodgeComplex};
use crate::mhs::{HodgeFiltration, MixedHodgeStructure};
use crate::operad::{GradedMonoid, NsOperad};
use crate::scalar::{Field, GaussRat, Rat, Scalar};
use crate::subspace::Subspace;

pub const FORMAT_VERSION: &str = "1.0.0";

/// Everything the CLI can read or write.
#[derive(Clone, Debug)]
pub enum Object {
    ComplexQ(ChainComplex<Rat>),
    ComplexQi(ChainComplex<GaussRat>),
    BigradedQ(BigradedComplex<Rat>),
    BigradedQi(BigradedComplex<GaussRat>),
    FilteredQ(FilteredComplex<Rat>),
    FilteredQi(FilteredComplex<GaussRat>),
    Mhs(MixedHodgeStructure),
    MhsComplex(MhsComplex),
    Mhc(MixedHodgeComplex),
    Operad(NsOperad<Rat>),
    Monoid(GradedMonoid<Rat>),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::ComplexQ(_) | Object::ComplexQi(_) => "complex",
            Object::BigradedQ(_) | Object::BigradedQi(_) => "bigraded",
            Object::FilteredQ(_) | Object::FilteredQi(_) => "filtered",
            Object::Mhs(_) => "mhs",
            Object::MhsComplex(_) => "mhs-complex",
            Object::Mhc(_) => "mhc",
            Object::Operad(_) => "operad",
            Object::Monoid(_) => "monoid",
        }
    }
}

// ---------------------------------------------------------------------------
// canonical writing

fn key_order(a: &str, b: &str) -> std::cmp::Ordering {
    let parts = |s: &str| -> Vec<std::result::Result<i64, String>> {
        s.split(',').map(|p| p.parse::<i64>().map_err(|_| p.to_string())).collect()
    };
    let (pa, pb) = (parts(a), parts(b));
    for (x, y) in pa.iter().zip(pb.iter()) {
        let ord = match (x, y) {
            (Ok(n), Ok(m)) => n.cmp(m),
            (Ok(_), Err(_)) => std::cmp::Ordering::Less,
            (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
            (Err(s), Err(t)) => s.cmp(t),
        };
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    pa.len().cmp(&pb.len())
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&n.to_string()),
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort_by(|a, b| key_order(a, b));
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push(':');
                write_canonical(&map[*key], out);
            }
            out.push('}');
        }
    }
}

/// Canonical byte-stable rendering, with a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// scalar-level pieces

fn matrix_to_json<K: Scalar>(m: &Matrix<K>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row_slice(i).iter().map(Scalar::to_json).collect()))
            .collect(),
    )
}

fn matrix_from_json<K: Scalar>(v: &Value, path: &str) -> Result<Matrix<K>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse(path, "expected an array of rows"))?;
    let mut data: Vec<Vec<K>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::parse(format!("{path}/{i}"), "expected a row array"))?;
        let mut out = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            out.push(
                K::from_json(e)
                    .map_err(|err| Error::parse(format!("{path}/{i}/{j}"), err.to_string()))?,
            );
        }
        data.push(out);
    }
    if let Some(first) = data.first() {
        let cols = first.len();
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::parse(path, "ragged matrix rows"));
        }
    }
    Ok(Matrix::from_rows(data))
}

fn object_entry<'v>(v: &'v Value, key: &str, path: &str) -> Result<&'v Value> {
    v.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing key {key:?}")))
}

fn parse_i64_key(key: &str, path: &str) -> Result<i64> {
    key.parse::<i64>()
        .map_err(|_| Error::parse(path, format!("expected an integer key, got {key:?}")))
}

fn parse_cell_key(key: &str, path: &str) -> Result<Cell> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::parse(path, format!("expected a key \"n,p\", got {key:?}")));
    }
    Ok((parse_i64_key(parts[0], path)?, parse_i64_key(parts[1], path)?))
}

fn field_of(v: &Value, path: &str) -> Result<Field> {
    match object_entry(v, "field", path)?.as_str() {
        Some("Q") => Ok(Field::Q),
        Some("Qi") => Ok(Field::Qi),
        other => Err(Error::parse(path, format!("unknown field {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// complexes

fn complex_to_json<K: Scalar>(c: &ChainComplex<K>) -> Value {
    let mut payload = Map::new();
    payload.insert("field".into(), json!(K::FIELD.name()));
    if let Some((lo, hi)) = c.range() {
        payload.insert("range".into(), json!([lo, hi]));
    }
    let dims: Map<String, Value> =
        c.dims().iter().map(|(n, k)| (n.to_string(), json!(k))).collect();
    payload.insert("dims".into(), Value::Object(dims));
    let d: Map<String, Value> =
        c.stored_d().iter().map(|(n, m)| (n.to_string(), matrix_to_json(m))).collect();
    payload.insert("d".into(), Value::Object(d));
    Value::Object(payload)
}

fn complex_from_json<K: Scalar>(v: &Value, path: &str) -> Result<ChainComplex<K>> {
    let dims_value = object_entry(v, "dims", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/dims"), "expected an object"))?;
    let mut dims = BTreeMap::new();
    for (key, value) in dims_value {
        let n = parse_i64_key(key, &format!("{path}/dims"))?;
        let k = value
            .as_u64()
            .ok_or_else(|| Error::parse(format!("{path}/dims/{key}"), "expected a dimension"))?;
        dims.insert(n, k as usize);
    }
    let mut d = BTreeMap::new();
    if let Some(d_value) = v.get("d") {
        let d_map = d_value
            .as_object()
            .ok_or_else(|| Error::parse(format!("{path}/d"), "expected an object"))?;
        for (key, value) in d_map {
            let n = parse_i64_key(key, &format!("{path}/d"))?;
            d.insert(n, matrix_from_json(value, &format!("{path}/d/{key}"))?);
        }
    }
    if let Some(range) = v.get("range") {
        let pair = range
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::parse(format!("{path}/range"), "expected [lo, hi]"))?;
        let lo = pair[0].as_i64().ok_or_else(|| Error::parse(format!("{path}/range"), "lo"))?;
        let hi = pair[1].as_i64().ok_or_else(|| Error::parse(format!("{path}/range"), "hi"))?;
        if dims.keys().any(|&n| n < lo || n > hi) {
            return Err(Error::parse(format!("{path}/range"), "dims outside the stated range"));
        }
    }
    ChainComplex::new(dims, d).map_err(|e| Error::parse(path, e.to_string()))
}

fn bigraded_to_json<K: Scalar>(b: &BigradedComplex<K>) -> Value {
    let mut payload = Map::new();
    payload.insert("field".into(), json!(K::FIELD.name()));
    let mut weights: BTreeMap<i64, Map<String, Value>> = BTreeMap::new();
    for (&(n, p), &k) in b.dims() {
        weights.entry(n).or_default().insert(p.to_string(), json!(k));
    }
    payload.insert(
        "weights".into(),
        Value::Object(weights.into_iter().map(|(n, m)| (n.to_string(), Value::Object(m))).collect()),
    );
    let d: Map<String, Value> = b
        .stored_d()
        .iter()
        .map(|(&(n, p), m)| (format!("{n},{p}"), matrix_to_json(m)))
        .collect();
    payload.insert("d".into(), Value::Object(d));
    Value::Object(payload)
}

fn bigraded_from_json<K: Scalar>(v: &Value, path: &str) -> Result<BigradedComplex<K>> {
    let weights = object_entry(v, "weights", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/weights"), "expected an object"))?;
    let mut dims = BTreeMap::new();
    for (nk, per_degree) in weights {
        let n = parse_i64_key(nk, &format!("{path}/weights"))?;
        let map = per_degree
            .as_object()
            .ok_or_else(|| Error::parse(format!("{path}/weights/{nk}"), "expected an object"))?;
        for (pk, value) in map {
            let p = parse_i64_key(pk, &format!("{path}/weights/{nk}"))?;
            let k = value.as_u64().ok_or_else(|| {
                Error::parse(format!("{path}/weights/{nk}/{pk}"), "expected a dimension")
            })?;
            dims.insert((n, p), k as usize);
        }
    }
    let mut d = BTreeMap::new();
    if let Some(d_value) = v.get("d") {
        let d_map = d_value
            .as_object()
            .ok_or_else(|| Error::parse(format!("{path}/d"), "expected an object"))?;
        for (key, value) in d_map {
            let cell = parse_cell_key(key, &format!("{path}/d"))?;
            d.insert(cell, matrix_from_json(value, &format!("{path}/d/{key}"))?);
        }
    }
    BigradedComplex::new(dims, d).map_err(|e| Error::parse(path, e.to_string()))
}

// ---------------------------------------------------------------------------
// filtrations

fn filtration_to_json<K: Scalar>(f: &Filtration<K>) -> Value {
    let jumps: Map<String, Value> = f
        .jumps()
        .iter()
        .map(|(p, s)| (p.to_string(), matrix_to_json(s.basis())))
        .collect();
    json!({ "jumps": Value::Object(jumps) })
}

/// Emits a stored (negated) decreasing filtration with its original
/// superscripts.
fn decreasing_filtration_to_json<K: Scalar>(f: &Filtration<K>) -> Value {
    let jumps: Map<String, Value> = f
        .jumps()
        .iter()
        .map(|(p, s)| ((-p).to_string(), matrix_to_json(s.basis())))
        .collect();
    json!({ "jumps": Value::Object(jumps), "direction": "decreasing" })
}

fn filtration_from_json<K: Scalar>(v: &Value, ambient: usize, path: &str) -> Result<Filtration<K>> {
    let decreasing = match v.get("direction").and_then(Value::as_str) {
        None | Some("increasing") => false,
        Some("decreasing") => true,
        Some(other) => {
            return Err(Error::parse(
                format!("{path}/direction"),
                format!("unknown direction {other:?}"),
            ))
        }
    };
    let jumps = object_entry(v, "jumps", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/jumps"), "expected an object"))?;
    let mut levels = BTreeMap::new();
    for (key, value) in jumps {
        let p = parse_i64_key(key, &format!("{path}/jumps"))?;
        let p = if decreasing { -p } else { p };
        let basis: Matrix<K> = matrix_from_json(value, &format!("{path}/jumps/{key}"))?;
        let basis = if basis.rows() == 0 {
            Matrix::zero(0, ambient)
        } else {
            basis
        };
        if basis.cols() != ambient {
            return Err(Error::parse(
                format!("{path}/jumps/{key}"),
                format!("basis has {} columns, ambient is {ambient}", basis.cols()),
            ));
        }
        levels.insert(p, Subspace::from_rows(basis));
    }
    Filtration::from_levels(ambient, levels).map_err(|e| Error::parse(path, e.to_string()))
}

fn filtered_to_json<K: Scalar>(k: &FilteredComplex<K>) -> Value {
    let w: Map<String, Value> = k
        .filtrations()
        .iter()
        .map(|(n, f)| (n.to_string(), filtration_to_json(f)))
        .collect();
    json!({ "complex": complex_to_json(k.complex()), "w": Value::Object(w) })
}

fn filtered_from_json<K: Scalar>(v: &Value, path: &str) -> Result<FilteredComplex<K>> {
    let complex: ChainComplex<K> =
        complex_from_json(object_entry(v, "complex", path)?, &format!("{path}/complex"))?;
    let w_value = object_entry(v, "w", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/w"), "expected an object"))?;
    let mut w = BTreeMap::new();
    for (key, value) in w_value {
        let n = parse_i64_key(key, &format!("{path}/w"))?;
        w.insert(n, filtration_from_json(value, complex.dim(n), &format!("{path}/w/{key}"))?);
    }
    FilteredComplex::new(complex, w).map_err(|e| Error::parse(path, e.to_string()))
}

// ---------------------------------------------------------------------------
// Hodge objects

fn mhs_to_json(v: &MixedHodgeStructure) -> Value {
    json!({
        "dim": v.dim(),
        "W": filtration_to_json(v.weight_filtration()),
        "F": decreasing_filtration_to_json(v.hodge_filtration().stored()),
    })
}

fn mhs_from_json(v: &Value, path: &str) -> Result<MixedHodgeStructure> {
    let dim = object_entry(v, "dim", path)?
        .as_u64()
        .ok_or_else(|| Error::parse(format!("{path}/dim"), "expected a dimension"))?
        as usize;
    let w: Filtration<Rat> =
        filtration_from_json(object_entry(v, "W", path)?, dim, &format!("{path}/W"))?;
    let f_value = object_entry(v, "F", path)?;
    let f: Filtration<GaussRat> = filtration_from_json(f_value, dim, &format!("{path}/F"))?;
    MixedHodgeStructure::new(dim, w, HodgeFiltration::from_stored(f))
        .map_err(|e| Error::parse(path, e.to_string()))
}

fn mhs_complex_to_json(k: &MhsComplex) -> Value {
    let mhs: Map<String, Value> =
        k.structures().iter().map(|(n, v)| (n.to_string(), mhs_to_json(v))).collect();
    json!({ "complex": complex_to_json(k.complex()), "mhs": Value::Object(mhs) })
}

fn mhs_complex_from_json(v: &Value, path: &str) -> Result<MhsComplex> {
    let complex: ChainComplex<Rat> =
        complex_from_json(object_entry(v, "complex", path)?, &format!("{path}/complex"))?;
    let mhs_value = object_entry(v, "mhs", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/mhs"), "expected an object"))?;
    let mut mhs = BTreeMap::new();
    for (key, value) in mhs_value {
        let n = parse_i64_key(key, &format!("{path}/mhs"))?;
        mhs.insert(n, mhs_from_json(value, &format!("{path}/mhs/{key}"))?);
    }
    MhsComplex::new(complex, mhs).map_err(|e| Error::parse(path, e.to_string()))
}

fn mhc_to_json(k: &MixedHodgeComplex) -> Value {
    let f: Map<String, Value> = k
        .hodge_filtrations()
        .iter()
        .map(|(n, h)| (n.to_string(), decreasing_filtration_to_json(h.stored())))
        .collect();
    let objects: Vec<Value> = k
        .comparison()
        .objects()
        .iter()
        .skip(1)
        .take(k.comparison().objects().len().saturating_sub(2))
        .map(filtered_to_json)
        .collect();
    let maps: Vec<Value> = k
        .comparison()
        .steps()
        .iter()
        .map(|(dir, components)| {
            let comp: Map<String, Value> = components
                .iter()
                .map(|(n, m)| (n.to_string(), matrix_to_json(m)))
                .collect();
            json!({ "dir": dir.tag(), "components": Value::Object(comp) })
        })
        .collect();
    json!({
        "rational": filtered_to_json(k.rational()),
        "complex": {
            "complex": complex_to_json(k.complex_part().complex()),
            "w": Value::Object(
                k.complex_part()
                    .filtrations()
                    .iter()
                    .map(|(n, fl)| (n.to_string(), filtration_to_json(fl)))
                    .collect::<Map<String, Value>>()
            ),
            "f": Value::Object(f),
        },
        "comparison": { "objects": objects, "maps": maps },
    })
}

fn mhc_from_json(v: &Value, path: &str) -> Result<MixedHodgeComplex> {
    let rational: FilteredComplex<Rat> =
        filtered_from_json(object_entry(v, "rational", path)?, &format!("{path}/rational"))?;
    let cp = object_entry(v, "complex", path)?;
    let cp_path = format!("{path}/complex");
    let complex: ChainComplex<GaussRat> =
        complex_from_json(object_entry(cp, "complex", &cp_path)?, &format!("{cp_path}/complex"))?;
    let w_value = object_entry(cp, "w", &cp_path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{cp_path}/w"), "expected an object"))?;
    let mut w = BTreeMap::new();
    for (key, value) in w_value {
        let n = parse_i64_key(key, &format!("{cp_path}/w"))?;
        w.insert(n, filtration_from_json(value, complex.dim(n), &format!("{cp_path}/w/{key}"))?);
    }
    let complex_part = FilteredComplex::new(complex, w)
        .map_err(|e| Error::parse(&cp_path, e.to_string()))?;
    let f_value = object_entry(cp, "f", &cp_path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{cp_path}/f"), "expected an object"))?;
    let mut hodge = BTreeMap::new();
    for (key, value) in f_value {
        let n = parse_i64_key(key, &format!("{cp_path}/f"))?;
        let stored: Filtration<GaussRat> = filtration_from_json(
            value,
            complex_part.complex().dim(n),
            &format!("{cp_path}/f/{key}"),
        )?;
        hodge.insert(n, HodgeFiltration::from_stored(stored));
    }
    let comparison_value = object_entry(v, "comparison", path)?;
    let comparison_path = format!("{path}/comparison");
    let mut objects = vec![complexify_filtered(&rational)];
    if let Some(intermediate) = comparison_value.get("objects") {
        let list = intermediate
            .as_array()
            .ok_or_else(|| Error::parse(format!("{comparison_path}/objects"), "expected an array"))?;
        for (i, value) in list.iter().enumerate() {
            objects.push(filtered_from_json(value, &format!("{comparison_path}/objects/{i}"))?);
        }
    }
    objects.push(complex_part.clone());
    let mut steps = Vec::new();
    if let Some(maps) = comparison_value.get("maps") {
        let list = maps
            .as_array()
            .ok_or_else(|| Error::parse(format!("{comparison_path}/maps"), "expected an array"))?;
        for (i, value) in list.iter().enumerate() {
            let step_path = format!("{comparison_path}/maps/{i}");
            let dir = match object_entry(value, "dir", &step_path)?.as_str() {
                Some("fwd") => Direction::Forward,
                Some("bwd") => Direction::Backward,
                other => {
                    return Err(Error::parse(
                        format!("{step_path}/dir"),
                        format!("unknown direction {other:?}"),
                    ))
                }
            };
            let comp_value = object_entry(value, "components", &step_path)?
                .as_object()
                .ok_or_else(|| Error::parse(format!("{step_path}/components"), "expected an object"))?;
            let mut components = BTreeMap::new();
            for (key, m) in comp_value {
                let n = parse_i64_key(key, &format!("{step_path}/components"))?;
                components
                    .insert(n, matrix_from_json(m, &format!("{step_path}/components/{key}"))?);
            }
            steps.push((dir, components));
        }
    }
    // an identity comparison may be written with no objects and no maps
    if steps.is_empty() && objects.len() == 2 {
        if objects[0] == objects[1] {
            objects.pop();
        }
    }
    let comparison = FilteredZigZag::new(objects, steps)
        .map_err(|e| Error::parse(&comparison_path, e.to_string()))?;
    MixedHodgeComplex::new(rational, complex_part, hodge, comparison)
        .map_err(|e| Error::parse(path, e.to_string()))
}

// ---------------------------------------------------------------------------
// operads and monoids

fn cells_to_json<K: Scalar>(cells: &BTreeMap<Cell, Matrix<K>>) -> Value {
    Value::Object(
        cells
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&(n, p), m)| (format!("{n},{p}"), matrix_to_json(m)))
            .collect(),
    )
}

fn cells_from_json<K: Scalar>(v: &Value, path: &str) -> Result<BTreeMap<Cell, Matrix<K>>> {
    let map = v
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected an object of cells"))?;
    let mut out = BTreeMap::new();
    for (key, value) in map {
        let cell = parse_cell_key(key, path)?;
        out.insert(cell, matrix_from_json(value, &format!("{path}/{key}"))?);
    }
    Ok(out)
}

fn operad_to_json(operad: &NsOperad<Rat>) -> Value {
    let arities: Map<String, Value> = operad
        .components()
        .iter()
        .map(|(n, c)| (n.to_string(), bigraded_to_json(c)))
        .collect();
    let compositions: Map<String, Value> = operad
        .compositions()
        .iter()
        .map(|(&(n, i, m), cells)| (format!("{n},{i},{m}"), cells_to_json(cells)))
        .collect();
    json!({
        "arities": Value::Object(arities),
        "unit": Value::Array(operad.unit().iter().map(Scalar::to_json).collect()),
        "compositions": Value::Object(compositions),
    })
}

fn operad_from_json(v: &Value, path: &str) -> Result<NsOperad<Rat>> {
    let arities_value = object_entry(v, "arities", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/arities"), "expected an object"))?;
    let mut components = BTreeMap::new();
    for (key, value) in arities_value {
        let n = key
            .parse::<usize>()
            .map_err(|_| Error::parse(format!("{path}/arities"), format!("bad arity {key:?}")))?;
        components.insert(n, bigraded_from_json(value, &format!("{path}/arities/{key}"))?);
    }
    let unit_value = object_entry(v, "unit", path)?
        .as_array()
        .ok_or_else(|| Error::parse(format!("{path}/unit"), "expected an array"))?;
    let unit = unit_value
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Rat::from_json(s).map_err(|e| Error::parse(format!("{path}/unit/{i}"), e.to_string()))
        })
        .collect::<Result<Vec<Rat>>>()?;
    let mut compositions = BTreeMap::new();
    if let Some(comp_value) = v.get("compositions") {
        let map = comp_value
            .as_object()
            .ok_or_else(|| Error::parse(format!("{path}/compositions"), "expected an object"))?;
        for (key, value) in map {
            let parts: Vec<&str> = key.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::parse(
                    format!("{path}/compositions"),
                    format!("expected a key \"n,i,m\", got {key:?}"),
                ));
            }
            let triple: Vec<usize> = parts
                .iter()
                .map(|p| {
                    p.parse::<usize>().map_err(|_| {
                        Error::parse(format!("{path}/compositions"), format!("bad index {p:?}"))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            compositions.insert(
                (triple[0], triple[1], triple[2]),
                cells_from_json(value, &format!("{path}/compositions/{key}"))?,
            );
        }
    }
    NsOperad::new(components, unit, compositions).map_err(|e| Error::parse(path, e.to_string()))
}

fn monoid_to_json(monoid: &GradedMonoid<Rat>) -> Value {
    let grades: Map<String, Value> = monoid
        .components()
        .iter()
        .map(|(d, c)| (d.to_string(), bigraded_to_json(c)))
        .collect();
    let products: Map<String, Value> = monoid
        .products()
        .iter()
        .map(|(&(d, e), cells)| (format!("{d},{e}"), cells_to_json(cells)))
        .collect();
    json!({
        "grades": Value::Object(grades),
        "unit": Value::Array(monoid.unit().iter().map(Scalar::to_json).collect()),
        "products": Value::Object(products),
    })
}

fn monoid_from_json(v: &Value, path: &str) -> Result<GradedMonoid<Rat>> {
    let grades_value = object_entry(v, "grades", path)?
        .as_object()
        .ok_or_else(|| Error::parse(format!("{path}/grades"), "expected an object"))?;
    let mut components = BTreeMap::new();
    for (key, value) in grades_value {
        let d = parse_i64_key(key, &format!("{path}/grades"))?;
        components.insert(d, bigraded_from_json(value, &format!("{path}/grades/{key}"))?);
    }
    let unit_value = object_entry(v, "unit", path)?
        .as_array()
        .ok_or_else(|| Error::parse(format!("{path}/unit"), "expected an array"))?;
    let unit = unit_value
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Rat::from_json(s).map_err(|e| Error::parse(format!("{path}/unit/{i}"), e.to_string()))
        })
        .collect::<Result<Vec<Rat>>>()?;
    let mut products = BTreeMap::new();
    if let Some(prod_value) = v.get("products") {
        let map = prod_value
            .as_object()
            .ok_or_else(|| Error::parse(format!("{path}/products"), "expected an object"))?;
        for (key, value) in map {
            let pair = parse_cell_key(key, &format!("{path}/products"))?;
            products.insert(
                (pair.0, pair.1),
                cells_from_json(value, &format!("{path}/products/{key}"))?,
            );
        }
    }
    GradedMonoid::new(components, unit, products).map_err(|e| Error::parse(path, e.to_string()))
}

// ---------------------------------------------------------------------------
// the manifest envelope

pub fn to_manifest(object: &Object) -> Value {
    let payload = match object {
        Object::ComplexQ(c) => complex_to_json(c),
        Object::ComplexQi(c) => complex_to_json(c),
        Object::BigradedQ(b) => bigraded_to_json(b),
        Object::BigradedQi(b) => bigraded_to_json(b),
        Object::FilteredQ(k) => filtered_to_json(k),
        Object::FilteredQi(k) => filtered_to_json(k),
        Object::Mhs(v) => mhs_to_json(v),
        Object::MhsComplex(k) => mhs_complex_to_json(k),
        Object::Mhc(k) => mhc_to_json(k),
        Object::Operad(o) => operad_to_json(o),
        Object::Monoid(m) => monoid_to_json(m),
    };
    json!({ "version": FORMAT_VERSION, "kind": object.kind(), "payload": payload })
}

pub fn from_manifest(v: &Value) -> Result<Object> {
    let version = object_entry(v, "version", "")?
        .as_str()
        .ok_or_else(|| Error::parse("/version", "expected a string"))?;
    let major = version.split('.').next().unwrap_or("");
    if major != "1" {
        return Err(Error::parse("/version", format!("unsupported version {version:?}")));
    }
    let kind = object_entry(v, "kind", "")?
        .as_str()
        .ok_or_else(|| Error::parse("/kind", "expected a string"))?;
    let payload = object_entry(v, "payload", "")?;
    let path = "/payload";
    match kind {
        "complex" => Ok(match field_of(payload, path)? {
            Field::Q => Object::ComplexQ(complex_from_json(payload, path)?),
            Field::Qi => Object::ComplexQi(complex_from_json(payload, path)?),
        }),
        "bigraded" => Ok(match field_of(payload, path)? {
            Field::Q => Object::BigradedQ(bigraded_from_json(payload, path)?),
            Field::Qi => Object::BigradedQi(bigraded_from_json(payload, path)?),
        }),
        "filtered" => {
            let inner = object_entry(payload, "complex", path)?;
            Ok(match field_of(inner, &format!("{path}/complex"))? {
                Field::Q => Object::FilteredQ(filtered_from_json(payload, path)?),
                Field::Qi => Object::FilteredQi(filtered_from_json(payload, path)?),
            })
        }
        "mhs" => Ok(Object::Mhs(mhs_from_json(payload, path)?)),
        "mhs-complex" => Ok(Object::MhsComplex(mhs_complex_from_json(payload, path)?)),
        "mhc" => Ok(Object::Mhc(mhc_from_json(payload, path)?)),
        "operad" => Ok(Object::Operad(operad_from_json(payload, path)?)),
        "monoid" => Ok(Object::Monoid(monoid_from_json(payload, path)?)),
        other => Err(Error::parse("/kind", format!("unknown kind {other:?}"))),
    }
}

pub fn parse_str(s: &str) -> Result<Object> {
    let value: Value =
        serde_json::from_str(s).map_err(|e| Error::parse("", format!("invalid JSON: {e}")))?;
    from_manifest(&value)
}

pub fn to_canonical_string(object: &Object) -> String {
    canonical_json(&to_manifest(object))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn complex_round_trip_is_stable() {
        let mut rng = fixtures::rng(23);
        let c = fixtures::random_complex(&mut rng, 0, 3, 2);
        let object = Object::ComplexQ(c);
        let first = to_canonical_string(&object);
        let reparsed = parse_str(&first).unwrap();
        let second = to_canonical_string(&reparsed);
        assert_eq!(first, second);
    }

    #[test]
    fn integer_shorthand_normalizes() {
        let s = r#"{
            "version": "1.0.0",
            "kind": "complex",
            "payload": {"field": "Q", "dims": {"0": 1, "1": 1}, "d": {"1": [["3"]]}}
        }"#;
        let object = parse_str(s).unwrap();
        let out = to_canonical_string(&object);
        assert!(out.contains("\"3/1\""), "normalized output: {out}");
    }

    #[test]
    fn filtered_round_trip() {
        let mut rng = fixtures::rng(29);
        let k = fixtures::random_filtered(&mut rng, 0, 3, 2, 3);
        let object = Object::FilteredQ(k);
        let first = to_canonical_string(&object);
        let reparsed = parse_str(&first).unwrap();
        assert_eq!(first, to_canonical_string(&reparsed));
    }

    #[test]
    fn mhs_round_trip_preserves_structure() {
        let mut rng = fixtures::rng(31);
        let v = fixtures::random_mhs(&mut rng, 4);
        let object = Object::Mhs(v.clone());
        let text = to_canonical_string(&object);
        let reparsed = parse_str(&text).unwrap();
        match reparsed {
            Object::Mhs(w) => assert_eq!(v, w),
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn mhc_round_trip() {
        let k = fixtures::tate_complex(2, 1);
        let mhc = crate::mhc::shift_to_mhc(&k).unwrap();
        let text = to_canonical_string(&Object::Mhc(mhc));
        let reparsed = parse_str(&text).unwrap();
        assert_eq!(text, to_canonical_string(&reparsed));
    }

    #[test]
    fn operad_round_trip() {
        let operad = fixtures::exterior_operad(3);
        let text = to_canonical_string(&Object::Operad(operad));
        let reparsed = parse_str(&text).unwrap();
        assert_eq!(text, to_canonical_string(&reparsed));
        match reparsed {
            Object::Operad(o) => assert!(o.is_valid()),
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn monoid_round_trip() {
        let monoid = fixtures::exterior_monoid(2);
        let text = to_canonical_string(&Object::Monoid(monoid));
        let reparsed = parse_str(&text).unwrap();
        assert_eq!(text, to_canonical_string(&reparsed));
    }

    #[test]
    fn unknown_version_rejected() {
        let s = r#"{"version": "2.0.0", "kind": "complex", "payload": {}}"#;
        assert!(parse_str(s).is_err());
    }

    #[test]
    fn key_order_is_numeric_aware() {
        assert_eq!(key_order("2", "10"), std::cmp::Ordering::Less);
        assert_eq!(key_order("-1", "0"), std::cmp::Ordering::Less);
        assert_eq!(key_order("1,-2", "1,3"), std::cmp::Ordering::Less);
        assert_eq!(key_order("im", "re"), std::cmp::Ordering::Less);
    }
}
