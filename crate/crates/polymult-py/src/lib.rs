//! Python bindings: thin wrappers over the polymult library.
//!
//! Lattice data crosses the boundary as plain Python lists of integers;
//! structured results (ledgers, classifications, witnesses) come back as
//! dictionaries mirroring the CLI's JSON output. Coefficients are integers
//! or `"num/den"` strings; the field is `"Q"` or a prime.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::{json, Value};

use polymult::affine::{self, AffineCheckOutcome, SubsetFamily};
use polymult::geometry::{self, LatticePolytope};
use polymult::local::{self, CheckOutcome, Finiteness, Mult, StarResult, WitnessKind};
use polymult::newton::NewtonDiagram;
use polymult::polysys::{self, Budget, Coef, Field, LocalMult, SparsePolynomial};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py(py)
            } else {
                n.as_f64().unwrap().into_py(py)
            }
        }
        Value::String(s) => s.into_py(py),
        Value::Array(items) => {
            let list = PyList::empty_bound(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new_bound(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_py(py)
        }
    })
}

fn mult_json(m: &Mult) -> Value {
    match m {
        Mult::Finite(v) => json!(v),
        Mult::Infinite => json!("infinite"),
    }
}

fn star_json(star: &StarResult) -> Value {
    Value::Array(
        star.entries
            .iter()
            .map(|e| {
                json!({"weight": e.weight, "value": e.value, "mixed_volume": e.mixed_volume})
            })
            .collect(),
    )
}

fn finiteness_label(f: Finiteness) -> &'static str {
    match f {
        Finiteness::Zero => "zero",
        Finiteness::Finite => "finite",
        Finiteness::Infinite => "infinite",
    }
}

fn kind_label(k: WitnessKind) -> &'static str {
    match k {
        WitnessKind::Origin => "origin",
        WitnessKind::Infinity => "infinity",
        WitnessKind::Centered => "centered",
        WitnessKind::InnerFace => "inner-face",
    }
}

fn hulls(supports: &[Vec<Vec<i64>>]) -> PyResult<Vec<LatticePolytope>> {
    supports
        .iter()
        .map(|s| geometry::convex_hull(s).map_err(err))
        .collect()
}

fn diagrams(n: usize, supports: &[Vec<Vec<i64>>]) -> PyResult<Vec<NewtonDiagram>> {
    supports
        .iter()
        .map(|s| NewtonDiagram::from_points(n, s).map_err(err))
        .collect()
}

fn family(n: usize, s: Option<Vec<Vec<usize>>>) -> PyResult<SubsetFamily> {
    match s {
        None => Ok(SubsetFamily::empty(n)),
        Some(members) => SubsetFamily::new(n, &members).map_err(err),
    }
}

#[derive(FromPyObject)]
enum PyField {
    Prime(u64),
    Name(String),
}

fn parse_field(f: &PyField) -> PyResult<Field> {
    match f {
        PyField::Name(s) if s == "Q" => Ok(Field::Q),
        PyField::Name(s) => Err(err(format!("field must be \"Q\" or a prime, got {s:?}"))),
        PyField::Prime(p) => Ok(Field::Fp(*p)),
    }
}

#[derive(FromPyObject)]
enum PyCoef {
    Int(i64),
    Str(String),
}

fn parse_coef(field: Field, c: &PyCoef) -> PyResult<Coef> {
    match c {
        PyCoef::Int(v) => Ok(field.from_i64(*v)),
        PyCoef::Str(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let num: i64 = num.trim().parse().map_err(err)?;
            let den: i64 = den.trim().parse().map_err(err)?;
            let num = field.from_i64(num);
            let den = field.from_i64(den);
            field.div(&num, &den).map_err(err)
        }
    }
}

type PyPoly = Vec<(Vec<i64>, PyCoef)>;

fn build_polys(n: usize, field: Field, polys: &[PyPoly]) -> PyResult<Vec<SparsePolynomial>> {
    polys
        .iter()
        .map(|terms| {
            let built: Vec<(Vec<u32>, Coef)> = terms
                .iter()
                .map(|(e, c)| {
                    if e.iter().any(|&x| x < 0) {
                        return Err(err(format!("negative exponent {e:?}")));
                    }
                    Ok((e.iter().map(|&x| x as u32).collect(), parse_coef(field, c)?))
                })
                .collect::<PyResult<_>>()?;
            SparsePolynomial::from_terms(n, field, built).map_err(err)
        })
        .collect()
}

/// Lattice-normalized volume (n! times the Euclidean volume) of the convex
/// hull of `points`.
#[pyfunction]
fn lattice_volume(points: Vec<Vec<i64>>) -> PyResult<i64> {
    let p = geometry::convex_hull(&points).map_err(err)?;
    geometry::lattice_volume(&p).map_err(err)
}

/// Mixed volume of the convex hulls of `supports`.
#[pyfunction]
fn mixed_volume(supports: Vec<Vec<Vec<i64>>>) -> PyResult<i64> {
    let ps = hulls(&supports)?;
    geometry::mixed_volume(&ps).map_err(err)
}

/// Generic intersection multiplicity at the origin of the diagrams spanned
/// by `supports`, with the per-subset ledger.
#[pyfunction]
fn origin_multiplicity(py: Python<'_>, supports: Vec<Vec<Vec<i64>>>) -> PyResult<PyObject> {
    let n = supports.len();
    let ds = diagrams(n, &supports)?;
    let m = local::origin_multiplicity(&ds).map_err(err)?;
    let terms: Vec<Value> = m
        .terms
        .iter()
        .map(|t| {
            json!({
                "I": t.subset,
                "star": star_json(&t.star),
                "cofactor": mult_json(&t.cofactor),
                "product": mult_json(&t.product),
            })
        })
        .collect();
    json_to_py(
        py,
        &json!({
            "finiteness": finiteness_label(m.finiteness),
            "value": mult_json(&m.total),
            "terms": terms,
        }),
    )
}

/// Trichotomy for the minimal Milnor number of a support set.
#[pyfunction]
#[pyo3(signature = (support, n, characteristic = 0))]
fn kushnirenko(
    py: Python<'_>,
    support: Vec<Vec<i64>>,
    n: usize,
    characteristic: u64,
) -> PyResult<PyObject> {
    let m = local::kushnirenko_solve(&support, n, characteristic).map_err(err)?;
    json_to_py(
        py,
        &json!({
            "finiteness": finiteness_label(m.finiteness),
            "value": mult_json(&m.total),
        }),
    )
}

/// Extended root-count bound of the hulls of `supports` on the complement
/// of the excluded subspaces `s` (a list of 0-based index lists).
#[pyfunction]
#[pyo3(signature = (supports, s = None))]
fn bkk_extended(
    py: Python<'_>,
    supports: Vec<Vec<Vec<i64>>>,
    s: Option<Vec<Vec<usize>>>,
) -> PyResult<PyObject> {
    let n = supports.len();
    let ps = hulls(&supports)?;
    let s = family(n, s)?;
    let bound = affine::bkk_extended(&ps, &s).map_err(err)?;
    let terms: Vec<Value> = bound
        .terms
        .iter()
        .map(|t| {
            json!({
                "I": t.subset,
                "infinity": star_json(&t.infinity),
                "centered": star_json(&t.centered),
                "star_net": t.star_net,
                "cofactor": mult_json(&t.cofactor),
                "product": mult_json(&t.product),
            })
        })
        .collect();
    let cls = &bound.classification;
    json_to_py(
        py,
        &json!({
            "value": mult_json(&bound.total),
            "terms": terms,
            "families": {
                "excess": cls.excess_family(),
                "exotrivial": cls.t_family(),
                "index": cls.index_family(),
            },
        }),
    )
}

/// Classification of every non-empty coordinate subset of the system.
#[pyfunction]
#[pyo3(signature = (supports, s = None))]
fn classify_subspaces(
    py: Python<'_>,
    supports: Vec<Vec<Vec<i64>>>,
    s: Option<Vec<Vec<usize>>>,
) -> PyResult<PyObject> {
    let n = supports.len();
    let ps = hulls(&supports)?;
    let s = family(n, s)?;
    let cls = affine::classify_subspaces(&ps, &s).map_err(err)?;
    json_to_py(
        py,
        &json!({
            "excess": cls.excess_family(),
            "exotrivial": cls.t_family(),
            "complement": cls.t_prime_family(),
            "exceptional": cls.t_star_family(),
            "regular": cls.n_family(),
            "index": cls.index_family(),
        }),
    )
}

fn check_json(outcome: &CheckOutcome) -> Value {
    match outcome {
        CheckOutcome::NonDegenerate => json!({"nondegenerate": true}),
        CheckOutcome::Degenerate(w) => json!({
            "nondegenerate": false,
            "witness": {"I": w.subset, "weight": w.weight, "kind": kind_label(w.kind)},
        }),
    }
}

/// Check a square system against the generic origin multiplicity of its own
/// diagrams. `polys` is a list of term lists `[(exponent, coefficient)]`.
#[pyfunction]
#[pyo3(signature = (n, field, polys, budget = 5_000_000))]
fn check_origin_nondegenerate(
    py: Python<'_>,
    n: usize,
    field: PyField,
    polys: Vec<PyPoly>,
    budget: u64,
) -> PyResult<PyObject> {
    let field = parse_field(&field)?;
    let fs = build_polys(n, field, &polys)?;
    let mut budget = Budget::new(budget);
    let outcome = local::check_origin_nondegenerate(&fs, &mut budget).map_err(err)?;
    json_to_py(py, &check_json(&outcome))
}

/// Check attainment of the extended root-count bound of the system's own
/// Newton polytopes relative to the excluded subspaces `s`.
#[pyfunction]
#[pyo3(signature = (n, field, polys, s = None, budget = 5_000_000))]
fn check_bound_attainment(
    py: Python<'_>,
    n: usize,
    field: PyField,
    polys: Vec<PyPoly>,
    s: Option<Vec<Vec<usize>>>,
    budget: u64,
) -> PyResult<PyObject> {
    let field = parse_field(&field)?;
    let fs = build_polys(n, field, &polys)?;
    let ps: Vec<LatticePolytope> = fs
        .iter()
        .map(|f| geometry::convex_hull(&f.support()).map_err(err))
        .collect::<PyResult<_>>()?;
    let s = family(n, s)?;
    let mut budget = Budget::new(budget);
    let outcome = affine::check_p_nondegenerate(&fs, &ps, &s, &mut budget).map_err(err)?;
    json_to_py(
        py,
        &match outcome {
            AffineCheckOutcome::NonDegenerate => json!({"nondegenerate": true}),
            AffineCheckOutcome::Degenerate(w) => json!({
                "nondegenerate": false,
                "witness": {
                    "I": w.subset,
                    "weight": w.weight,
                    "kind": kind_label(w.kind),
                    "condition": w.condition.label(),
                },
            }),
        },
    )
}

/// Multiplicity of the origin via the local standard-basis oracle; `None`
/// when the origin is not isolated.
#[pyfunction]
#[pyo3(signature = (n, field, polys, budget = 5_000_000))]
fn local_multiplicity(
    n: usize,
    field: PyField,
    polys: Vec<PyPoly>,
    budget: u64,
) -> PyResult<Option<u64>> {
    let field = parse_field(&field)?;
    let fs = build_polys(n, field, &polys)?;
    let mut budget = Budget::new(budget);
    match polysys::local_multiplicity(&fs, &mut budget).map_err(err)? {
        LocalMult::Finite(v) => Ok(Some(v)),
        LocalMult::Infinite => Ok(None),
    }
}

/// Number of common zeros in the torus, counted with multiplicity; `None`
/// when infinite.
#[pyfunction]
#[pyo3(signature = (n, field, polys, budget = 5_000_000))]
fn torus_root_count(
    n: usize,
    field: PyField,
    polys: Vec<PyPoly>,
    budget: u64,
) -> PyResult<Option<u64>> {
    let field = parse_field(&field)?;
    let fs = build_polys(n, field, &polys)?;
    let mut budget = Budget::new(budget);
    polysys::torus_root_count(&fs, &mut budget).map_err(err)
}

#[pymodule]
fn polymult_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lattice_volume, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_volume, m)?)?;
    m.add_function(wrap_pyfunction!(origin_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(kushnirenko, m)?)?;
    m.add_function(wrap_pyfunction!(bkk_extended, m)?)?;
    m.add_function(wrap_pyfunction!(classify_subspaces, m)?)?;
    m.add_function(wrap_pyfunction!(check_origin_nondegenerate, m)?)?;
    m.add_function(wrap_pyfunction!(check_bound_attainment, m)?)?;
    m.add_function(wrap_pyfunction!(local_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(torus_root_count, m)?)?;
    Ok(())
}
