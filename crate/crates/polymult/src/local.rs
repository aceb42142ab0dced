//! Invariants at the origin.
//!
//! Everything here is driven by a collection of Newton diagrams: whether the
//! generic intersection multiplicity at the origin is zero, finite or
//! infinite; its exact value via the subset/star decomposition; Milnor
//! numbers of generic polynomials with a prescribed support; and the
//! non-degeneracy checks which decide whether a concrete system attains the
//! generic value.

use crate::geometry::{self, LatticePolytope, LatticeVector, Sense};
use crate::linalg;
use crate::newton::{self, NewtonDiagram};
use crate::polysys::{self, Budget, SparsePolynomial};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalError {
    #[error("expected {expected} diagrams in {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Newton(#[from] newton::NewtonError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Algebra(#[from] polysys::AlgebraError),
}

pub type Result<T> = std::result::Result<T, LocalError>;

/// A root count that may be infinite; products absorb zero before infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mult {
    Finite(i64),
    Infinite,
}

impl Mult {
    pub fn add(self, other: Mult) -> Mult {
        match (self, other) {
            (Mult::Finite(a), Mult::Finite(b)) => Mult::Finite(a + b),
            _ => Mult::Infinite,
        }
    }

    /// Product with the convention `0 * infinity = 0`.
    pub fn mul(self, other: Mult) -> Mult {
        match (self, other) {
            (Mult::Finite(0), _) | (_, Mult::Finite(0)) => Mult::Finite(0),
            (Mult::Finite(a), Mult::Finite(b)) => Mult::Finite(a * b),
            _ => Mult::Infinite,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Mult::Finite(_))
    }
}

impl std::fmt::Display for Mult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mult::Finite(v) => write!(f, "{v}"),
            Mult::Infinite => write!(f, "infinite"),
        }
    }
}

/// Trichotomy for the generic intersection multiplicity at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Finiteness {
    Zero,
    Finite,
    Infinite,
}

/// Indices (0-based) of the diagrams whose restriction to the coordinate
/// subspace indexed by `coords` is non-empty.
pub fn supported_on(diagrams: &[NewtonDiagram], coords: &[usize]) -> Vec<usize> {
    diagrams
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.restrict(coords).is_empty())
        .map(|(i, _)| i)
        .collect()
}

/// All non-empty subsets of `0..n` as sorted index lists.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Decide whether the generic multiplicity at the origin is zero, finite or
/// infinite: zero when some diagram contains the origin (that polynomial has
/// a unit term), infinite when some coordinate subspace is cut out by fewer
/// polynomials than its dimension, finite otherwise.
pub fn origin_finiteness(diagrams: &[NewtonDiagram]) -> Result<Finiteness> {
    let n = diagrams.len();
    for d in diagrams {
        if d.n != n {
            return Err(LocalError::Arity { expected: n, got: d.n });
        }
        if d.contains(&vec![0; n]) {
            return Ok(Finiteness::Zero);
        }
        if d.is_empty() {
            return Ok(Finiteness::Infinite);
        }
    }
    for coords in nonempty_subsets(n) {
        if supported_on(diagrams, &coords).len() < coords.len() {
            return Ok(Finiteness::Infinite);
        }
    }
    Ok(Finiteness::Finite)
}

/// Bounded face of a diagram polyhedron at a strictly positive weight, as a
/// polytope (the convex hull of the minimizing generators).
pub fn initial_face(d: &NewtonDiagram, w: &[i64]) -> Result<LatticePolytope> {
    let pts = newton::extremal_support(&d.generators, w, Sense::Min);
    Ok(geometry::convex_hull(&pts)?)
}

/// One candidate term of a star sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarEntry {
    pub weight: LatticeVector,
    pub value: i64,
    pub mixed_volume: i64,
}

/// Result of a star sum together with its per-weight ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarResult {
    pub total: Mult,
    pub entries: Vec<StarEntry>,
}

/// The origin star sum: over each strictly positive primitive facet normal
/// `v` of the Minkowski sum of `rest`, add `v(first)` times the mixed volume
/// (in the lattice of the hyperplane `v = const`) of the initial faces of
/// `rest`. In one variable this degenerates to the minimal exponent of
/// `first`.
pub fn star_origin(first: &NewtonDiagram, rest: &[NewtonDiagram]) -> Result<StarResult> {
    let k = first.n;
    if rest.len() + 1 != k {
        return Err(LocalError::Arity { expected: k, got: rest.len() + 1 });
    }
    if rest.iter().any(|d| d.is_empty()) {
        // Initial faces of an empty diagram are empty; every mixed volume
        // term vanishes.
        return Ok(StarResult { total: Mult::Finite(0), entries: vec![] });
    }
    let candidates: Vec<LatticeVector> = if k == 1 {
        vec![vec![1]]
    } else {
        let sum = newton::diagram_sum(rest, k)?;
        newton::diagram_hull(&sum)?.positive_facet_weights()
    };
    star_from_candidates(first.generators.as_slice(), Sense::Min, rest, &candidates, |d, w| {
        initial_face(d, w)
    })
}

/// Shared tail of the star sums: given candidate weights and a face
/// extractor, accumulate `value(first) * relative mixed volume` terms. The
/// `first` argument is its generating point set; `sense` picks min
/// (valuations) or max (degrees). An empty `first` makes every term with a
/// positive mixed volume infinite.
pub(crate) fn star_from_candidates<D, F>(
    first_points: &[LatticeVector],
    sense: Sense,
    rest: &[D],
    candidates: &[LatticeVector],
    face_of: F,
) -> Result<StarResult>
where
    F: Fn(&D, &[i64]) -> Result<LatticePolytope>,
{
    let mut total = Mult::Finite(0);
    let mut entries = Vec::new();
    for w in candidates {
        let mv = if rest.is_empty() {
            1
        } else {
            let faces: Vec<LatticePolytope> =
                rest.iter().map(|d| face_of(d, w)).collect::<Result<_>>()?;
            let basis = geometry::kernel_lattice_basis(w)?;
            geometry::relative_mixed_volume(&faces, &basis)?
        };
        let value = match sense {
            Sense::Min => first_points.iter().map(|p| linalg::dot(w, p)).min(),
            Sense::Max => first_points.iter().map(|p| linalg::dot(w, p)).max(),
        };
        match value {
            Some(v) => {
                entries.push(StarEntry { weight: w.clone(), value: v, mixed_volume: mv });
                total = total.add(Mult::Finite(v * mv));
            }
            None => {
                // Empty first argument: value is +/- infinity, and the term
                // survives exactly when the mixed volume is positive.
                if mv != 0 {
                    total = Mult::Infinite;
                }
            }
        }
    }
    Ok(StarResult { total, entries })
}

/// One subset term of the multiplicity decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OriginTerm {
    /// 0-based coordinate subset `I`.
    pub subset: Vec<usize>,
    pub star: StarResult,
    /// Multiplicity of the projected residual system (1 when `I` is full).
    pub cofactor: Mult,
    pub product: Mult,
}

/// Full result of the origin multiplicity computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OriginMultiplicity {
    pub finiteness: Finiteness,
    pub total: Mult,
    pub terms: Vec<OriginTerm>,
}

/// Generic intersection multiplicity at the origin of `n` diagrams in `n`
/// variables, decomposed over coordinate subsets: each contributing subset
/// `I` pairs a star sum of the restricted diagrams with the multiplicity of
/// the projected diagrams of the polynomials vanishing on the subspace.
pub fn origin_multiplicity(diagrams: &[NewtonDiagram]) -> Result<OriginMultiplicity> {
    let n = diagrams.len();
    match origin_finiteness(diagrams)? {
        Finiteness::Zero => {
            return Ok(OriginMultiplicity {
                finiteness: Finiteness::Zero,
                total: Mult::Finite(0),
                terms: vec![],
            })
        }
        Finiteness::Infinite => {
            return Ok(OriginMultiplicity {
                finiteness: Finiteness::Infinite,
                total: Mult::Infinite,
                terms: vec![],
            })
        }
        Finiteness::Finite => {}
    }
    let mut total = Mult::Finite(0);
    let mut terms = Vec::new();
    for coords in nonempty_subsets(n) {
        let supp = supported_on(diagrams, &coords);
        if supp.len() != coords.len() || !supp.contains(&0) {
            continue;
        }
        let first = diagrams[0].restrict(&coords);
        let rest: Vec<NewtonDiagram> = supp
            .iter()
            .filter(|&&j| j != 0)
            .map(|&j| diagrams[j].restrict(&coords))
            .collect();
        let star = star_origin(&first, &rest)?;
        let cofactor = if coords.len() == n {
            Mult::Finite(1)
        } else {
            let complement: Vec<usize> = (0..n).filter(|i| !coords.contains(i)).collect();
            let projected: Vec<NewtonDiagram> = (0..n)
                .filter(|j| !supp.contains(j))
                .map(|j| diagrams[j].project(&complement))
                .collect();
            origin_multiplicity(&projected)?.total
        };
        let product = star.total.mul(cofactor);
        total = total.add(product);
        terms.push(OriginTerm { subset: coords, star, cofactor, product });
    }
    Ok(OriginMultiplicity { finiteness: Finiteness::Finite, total, terms })
}

/// Independent re-derivation of the origin multiplicity: instead of reading
/// the vanishing set off `supported_on`, sum over every subset `I` and every
/// choice `J` of residual indices, letting the conventions (empty diagrams,
/// zero mixed volumes, `0 * infinity = 0`) kill the non-matching terms.
/// Must agree with [`origin_multiplicity`] whenever that is finite.
pub fn origin_multiplicity_alt(diagrams: &[NewtonDiagram]) -> Result<Mult> {
    let n = diagrams.len();
    match origin_finiteness(diagrams)? {
        Finiteness::Zero => return Ok(Mult::Finite(0)),
        Finiteness::Infinite => return Ok(Mult::Infinite),
        Finiteness::Finite => {}
    }
    let mut total = Mult::Finite(0);
    for coords in nonempty_subsets(n) {
        let complement: Vec<usize> = (0..n).filter(|i| !coords.contains(i)).collect();
        let others: Vec<usize> = (1..n).collect();
        // All choices of n-|I| residual indices among 1..n.
        for jmask in 0u32..(1 << others.len()) {
            let chosen: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|&(b, _)| jmask & (1 << b) != 0)
                .map(|(_, &j)| j)
                .collect();
            if chosen.len() != n - coords.len() {
                continue;
            }
            let star_rest: Vec<NewtonDiagram> = others
                .iter()
                .filter(|j| !chosen.contains(j))
                .map(|&j| diagrams[j].restrict(&coords))
                .collect();
            let first = diagrams[0].restrict(&coords);
            let star = star_origin(&first, &star_rest)?;
            if star.total == Mult::Finite(0) {
                continue;
            }
            let cofactor = if chosen.is_empty() {
                Mult::Finite(1)
            } else {
                let projected: Vec<NewtonDiagram> =
                    chosen.iter().map(|&j| diagrams[j].project(&complement)).collect();
                origin_multiplicity(&projected)?.total
            };
            total = total.add(star.total.mul(cofactor));
        }
    }
    Ok(total)
}

/// A witness that a concrete system misses its generic invariant: the
/// coordinate subset, the weight, and which family of weights it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyWitness {
    /// 0-based coordinate subset `I`.
    pub subset: Vec<usize>,
    /// Weight vector in the coordinates of `subset` (origin/centered kinds)
    /// or of the full space, depending on the check.
    pub weight: LatticeVector,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// A strictly positive weight (valuation centered at the origin).
    Origin,
    /// A weight with at least one positive entry (degree centered at
    /// infinity).
    Infinity,
    /// A weight vanishing exactly on a sub-subset (valuation centered at a
    /// coordinate torus).
    Centered,
    /// A face of a prescribed polytope (inner non-degeneracy).
    InnerFace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckOutcome {
    NonDegenerate,
    Degenerate(DegeneracyWitness),
}

impl CheckOutcome {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, CheckOutcome::NonDegenerate)
    }
}

/// Check whether a system attains the generic origin multiplicity of its
/// own diagrams: for every coordinate subset cut out by exactly as many
/// polynomials as its dimension, and every bounded face of the summed
/// restricted diagrams, the initial forms must have no common zero with all
/// coordinates non-zero. Returns the first violated (subset, weight) pair.
pub fn check_origin_nondegenerate(
    polys: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<CheckOutcome> {
    let n = polys.len();
    let diagrams: Vec<NewtonDiagram> = polys
        .iter()
        .map(|f| NewtonDiagram::from_points(n, &f.support()))
        .collect::<newton::Result<_>>()?;
    for coords in nonempty_subsets(n) {
        let supp = supported_on(&diagrams, &coords);
        if supp.len() != coords.len() {
            continue;
        }
        if let Some(w) = find_origin_witness(polys, &diagrams, &coords, &supp, budget)? {
            return Ok(CheckOutcome::Degenerate(DegeneracyWitness {
                subset: coords,
                weight: w,
                kind: WitnessKind::Origin,
            }));
        }
    }
    Ok(CheckOutcome::NonDegenerate)
}

/// Scan the bounded faces of the summed restricted diagrams of `supp` for a
/// strictly positive weight whose initial forms share a toric zero.
fn find_origin_witness(
    polys: &[SparsePolynomial],
    diagrams: &[NewtonDiagram],
    coords: &[usize],
    supp: &[usize],
    budget: &mut Budget,
) -> Result<Option<LatticeVector>> {
    let restricted: Vec<NewtonDiagram> =
        supp.iter().map(|&j| diagrams[j].restrict(coords)).collect();
    let sum = newton::diagram_sum(&restricted, coords.len())?;
    if sum.is_empty() {
        return Ok(None);
    }
    let hull = newton::diagram_hull(&sum)?;
    for w in hull.bounded_face_weights()? {
        let forms: Vec<SparsePolynomial> = supp
            .iter()
            .map(|&j| polys[j].restrict(coords).extremal_form(&w, Sense::Min))
            .collect();
        if polysys::torus_has_common_zero(&forms, budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Newton diagrams of the partial derivatives of a generic polynomial with
/// the given support, in the given characteristic (0 for none): exponents
/// divisible by the characteristic kill their derivative term.
pub fn generic_partial_diagrams(
    support: &[LatticeVector],
    n: usize,
    characteristic: u64,
) -> Result<Vec<NewtonDiagram>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let pts: Vec<LatticeVector> = support
            .iter()
            .filter(|a| a[i] >= 1 && (characteristic == 0 || a[i] % characteristic as i64 != 0))
            .map(|a| {
                let mut b = (*a).clone();
                b[i] -= 1;
                b
            })
            .collect();
        out.push(NewtonDiagram::from_points(n, &pts)?);
    }
    Ok(out)
}

/// The smallest Milnor number attainable by a power series with the given
/// support (infinite when no such series has an isolated singular point):
/// the generic origin multiplicity of the partial-derivative diagrams.
pub fn minimal_milnor_number(
    support: &[LatticeVector],
    n: usize,
    characteristic: u64,
) -> Result<OriginMultiplicity> {
    let diagrams = generic_partial_diagrams(support, n, characteristic)?;
    origin_multiplicity(&diagrams)
}

/// Trichotomy solver for the minimal Milnor number of a support set: zero,
/// a positive finite value, or infinite. Alias of
/// [`minimal_milnor_number`] emphasizing the decision aspect.
pub fn kushnirenko_solve(
    support: &[LatticeVector],
    n: usize,
    characteristic: u64,
) -> Result<OriginMultiplicity> {
    minimal_milnor_number(support, n, characteristic)
}

/// Report of the Milnor non-degeneracy analysis of a concrete polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    /// Generic multiplicity of the diagrams of the actual partials.
    pub partial_multiplicity: Mult,
    /// Generic multiplicity for generic coefficients on the same support.
    pub generic_multiplicity: Mult,
    /// Whether each actual partial has the generic diagram.
    pub partials_generic: Vec<bool>,
    /// Non-degeneracy of the actual partial system (when finite).
    pub outcome: Option<CheckOutcome>,
    pub partially_milnor_nondegenerate: bool,
    pub milnor_nondegenerate: bool,
}

/// Decide (partial) Milnor non-degeneracy of `f`: the partials must form a
/// system that is non-degenerate for its own diagrams, and for full Milnor
/// non-degeneracy the actual partial diagrams must additionally yield the
/// same multiplicity as the generic ones.
pub fn check_milnor(f: &SparsePolynomial, budget: &mut Budget) -> Result<MilnorReport> {
    let n = f.n;
    let characteristic = match f.field {
        polysys::Field::Q => 0,
        polysys::Field::Fp(p) => p,
    };
    let partials: Vec<SparsePolynomial> = (0..n).map(|i| f.partial(i)).collect();
    let actual_diagrams: Vec<NewtonDiagram> = partials
        .iter()
        .map(|g| NewtonDiagram::from_points(n, &g.support()))
        .collect::<newton::Result<_>>()?;
    let generic_diagrams = generic_partial_diagrams(&f.support(), n, characteristic)?;
    let partials_generic: Vec<bool> = actual_diagrams
        .iter()
        .zip(&generic_diagrams)
        .map(|(a, b)| a == b)
        .collect();
    let partial_multiplicity = origin_multiplicity(&actual_diagrams)?.total;
    let generic_multiplicity = origin_multiplicity(&generic_diagrams)?.total;
    let outcome = if partial_multiplicity.is_finite() {
        Some(check_origin_nondegenerate(&partials, budget)?)
    } else {
        None
    };
    let partially = partial_multiplicity.is_finite()
        && outcome.as_ref().is_some_and(|o| o.is_nondegenerate());
    let milnor = partially && partial_multiplicity == generic_multiplicity;
    Ok(MilnorReport {
        partial_multiplicity,
        generic_multiplicity,
        partials_generic,
        outcome,
        partially_milnor_nondegenerate: partially,
        milnor_nondegenerate: milnor,
    })
}

/// Classical Newton non-degeneracy: for every bounded face of the diagram of
/// `f`, the partials of the initial form must have no common toric zero.
pub fn check_newton_nondegenerate(
    f: &SparsePolynomial,
    budget: &mut Budget,
) -> Result<CheckOutcome> {
    let n = f.n;
    let diagram = NewtonDiagram::from_points(n, &f.support())?;
    if diagram.is_empty() {
        return Ok(CheckOutcome::NonDegenerate);
    }
    let hull = newton::diagram_hull(&diagram)?;
    let all: Vec<usize> = (0..n).collect();
    for w in hull.bounded_face_weights()? {
        let form = f.extremal_form(&w, Sense::Min);
        let parts: Vec<SparsePolynomial> = (0..n).map(|i| form.partial(i)).collect();
        if polysys::torus_has_common_zero(&parts, budget)? {
            return Ok(CheckOutcome::Degenerate(DegeneracyWitness {
                subset: all,
                weight: w,
                kind: WitnessKind::Origin,
            }));
        }
    }
    Ok(CheckOutcome::NonDegenerate)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InnerCheckError {
    #[error("the prescribed diagram must contain a positive point on every coordinate axis")]
    NotConvenient,
    #[error("support point {0:?} lies below the prescribed diagram")]
    SupportBelow(LatticeVector),
    #[error(transparent)]
    Local(#[from] LocalError),
}

/// Inner Newton non-degeneracy of `f` with respect to a prescribed diagram:
/// the diagram must meet every axis, no support point may lie below it, and
/// for every bounded face touching the strict interior of the orthant and
/// every coordinate subspace meeting the face, the partials of the face form
/// may not share a zero with the prescribed coordinates non-zero.
pub fn check_inner_nondegenerate(
    f: &SparsePolynomial,
    diagram: &NewtonDiagram,
    budget: &mut Budget,
) -> std::result::Result<CheckOutcome, InnerCheckError> {
    let n = f.n;
    for i in 0..n {
        let has_axis_point = diagram
            .generators
            .iter()
            .any(|g| g[i] > 0 && (0..n).all(|j| j == i || g[j] == 0));
        if !has_axis_point {
            return Err(InnerCheckError::NotConvenient);
        }
    }
    for a in f.support() {
        if !diagram.contains(&a) {
            return Err(InnerCheckError::SupportBelow(a));
        }
    }
    let hull = newton::diagram_hull(diagram).map_err(LocalError::from)?;
    for face in hull.bounded_faces().map_err(LocalError::from)? {
        // Inner faces only: the face must not lie in a coordinate subspace.
        let inner = (0..n).all(|i| face.vertices.iter().any(|v| v[i] > 0));
        if !inner {
            continue;
        }
        let form = f.extremal_form(&face.weight, Sense::Min);
        let parts: Vec<SparsePolynomial> = (0..n).map(|i| form.partial(i)).collect();
        for coords in nonempty_subsets(n) {
            // The face must meet the coordinate subspace.
            let meets = face
                .vertices
                .iter()
                .any(|v| (0..n).all(|i| coords.contains(&i) || v[i] == 0));
            if !meets {
                continue;
            }
            let restricted: Vec<SparsePolynomial> =
                parts.iter().map(|p| p.restrict(&coords)).collect();
            if polysys::torus_has_common_zero(&restricted, budget)
                .map_err(|e| LocalError::from(e))?
            {
                return Ok(CheckOutcome::Degenerate(DegeneracyWitness {
                    subset: coords,
                    weight: face.weight.clone(),
                    kind: WitnessKind::InnerFace,
                }));
            }
        }
    }
    Ok(CheckOutcome::NonDegenerate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::Field;

    fn diag(n: usize, pts: &[&[i64]]) -> NewtonDiagram {
        NewtonDiagram::from_points(n, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn qpoly(n: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            n,
            Field::Q,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Field::Q.from_i64(*c)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn finiteness_trichotomy() {
        // Unit term: multiplicity zero.
        let d0 = diag(2, &[&[0, 0], &[1, 0]]);
        let d1 = diag(2, &[&[0, 1]]);
        assert_eq!(origin_finiteness(&[d0, d1.clone()]).unwrap(), Finiteness::Zero);
        // Both polynomials vanish on the x-axis: infinite.
        let d2 = diag(2, &[&[0, 1]]);
        assert_eq!(origin_finiteness(&[d1, d2]).unwrap(), Finiteness::Infinite);
        // Transverse pair: finite.
        let a = diag(2, &[&[1, 0], &[0, 1]]);
        let b = diag(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(origin_finiteness(&[a, b]).unwrap(), Finiteness::Finite);
    }

    #[test]
    fn multiplicity_of_transverse_lines() {
        let a = diag(2, &[&[1, 0], &[0, 1]]);
        let r = origin_multiplicity(&[a.clone(), a]).unwrap();
        assert_eq!(r.total, Mult::Finite(1));
    }

    #[test]
    fn multiplicity_of_pure_powers() {
        // x^2 and y^3 meet with multiplicity 6 at the origin.
        let a = diag(2, &[&[2, 0]]);
        let b = diag(2, &[&[0, 3]]);
        let r = origin_multiplicity(&[a, b]).unwrap();
        assert_eq!(r.total, Mult::Finite(6));
    }

    #[test]
    fn multiplicity_of_cusp_pair() {
        // Diagrams of x^2 - y^3 and y^2 - x^3: multiplicity 4.
        let a = diag(2, &[&[2, 0], &[0, 3]]);
        let b = diag(2, &[&[0, 2], &[3, 0]]);
        let r = origin_multiplicity(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(r.total, Mult::Finite(4));
        assert_eq!(origin_multiplicity_alt(&[a, b]).unwrap(), Mult::Finite(4));
    }

    #[test]
    fn three_variable_example_with_ledger() {
        // f1 linear, f2 and f3 with two positive facets between them; the
        // decomposition contributes 5 on the full subset and 1 on {z}.
        let g1 = diag(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let g2 = diag(3, &[&[3, 0, 0], &[1, 0, 2], &[0, 3, 0], &[0, 1, 2]]);
        let g3 = diag(3, &[&[2, 0, 0], &[1, 0, 2], &[0, 2, 0], &[0, 1, 2]]);
        let r = origin_multiplicity(&[g1, g2, g3]).unwrap();
        assert_eq!(r.total, Mult::Finite(6));
        let full: Vec<usize> = vec![0, 1, 2];
        let top = r.terms.iter().find(|t| t.subset == full).unwrap();
        let mut star: Vec<(LatticeVector, i64, i64)> = top
            .star
            .entries
            .iter()
            .map(|e| (e.weight.clone(), e.value, e.mixed_volume))
            .collect();
        star.sort();
        assert_eq!(star, vec![(vec![1, 1, 1], 1, 4), (vec![2, 2, 1], 1, 1)]);
        let z_only = r.terms.iter().find(|t| t.subset == vec![2]).unwrap();
        assert_eq!(z_only.star.total, Mult::Finite(1));
        assert_eq!(z_only.cofactor, Mult::Finite(1));
    }

    #[test]
    fn alt_formula_agrees_on_examples() {
        let g1 = diag(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let g2 = diag(3, &[&[3, 0, 0], &[1, 0, 2], &[0, 3, 0], &[0, 1, 2]]);
        let g3 = diag(3, &[&[2, 0, 0], &[1, 0, 2], &[0, 2, 0], &[0, 1, 2]]);
        assert_eq!(
            origin_multiplicity_alt(&[g1, g2, g3]).unwrap(),
            Mult::Finite(6)
        );
    }

    #[test]
    fn origin_check_accepts_transverse_lines() {
        let f = qpoly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let g = qpoly(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let mut b = Budget::new(100_000);
        assert!(check_origin_nondegenerate(&[f, g], &mut b)
            .unwrap()
            .is_nondegenerate());
    }

    #[test]
    fn origin_check_rejects_tangent_parabolas() {
        // x + y and x + y + x^2: same initial forms along (1,1).
        let f = qpoly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let g = qpoly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[2, 0], 1)]);
        let mut b = Budget::new(100_000);
        let outcome = check_origin_nondegenerate(&[f, g], &mut b).unwrap();
        match outcome {
            CheckOutcome::Degenerate(w) => {
                assert_eq!(w.kind, WitnessKind::Origin);
                assert_eq!(w.subset, vec![0, 1]);
            }
            CheckOutcome::NonDegenerate => panic!("expected a degeneracy witness"),
        }
    }

    #[test]
    fn generic_partials_respect_characteristic() {
        // x^3 + xy: in characteristic 3 the x^3 term has no x-derivative.
        let sup: Vec<LatticeVector> = vec![vec![3, 0], vec![1, 1]];
        let char0 = generic_partial_diagrams(&sup, 2, 0).unwrap();
        assert_eq!(char0[0].generators, vec![vec![0, 1], vec![2, 0]]);
        let char3 = generic_partial_diagrams(&sup, 2, 3).unwrap();
        assert_eq!(char3[0].generators, vec![vec![0, 1]]);
    }

    #[test]
    fn milnor_of_plane_cusp() {
        // f = x^2 + y^3 has Milnor number 2.
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 3], 1)]);
        let mut b = Budget::new(100_000);
        let r = check_milnor(&f, &mut b).unwrap();
        assert_eq!(r.generic_multiplicity, Mult::Finite(2));
        assert!(r.milnor_nondegenerate);
    }

    #[test]
    fn minimal_milnor_of_single_monomial_is_infinite() {
        // x1^q x2^q ... xn^q alone never has an isolated singularity.
        let sup: Vec<LatticeVector> = vec![vec![3, 3]];
        let r = minimal_milnor_number(&sup, 2, 0).unwrap();
        assert_eq!(r.total, Mult::Infinite);
    }

    #[test]
    fn kushnirenko_style_example() {
        // Expanded support of x1 + (x2 + x3)^3. The x1-partial of any series
        // with this support is a unit, so the minimal Milnor number is 0.
        let sup: Vec<LatticeVector> = vec![
            vec![1, 0, 0],
            vec![0, 3, 0],
            vec![0, 2, 1],
            vec![0, 1, 2],
            vec![0, 0, 3],
        ];
        let r = minimal_milnor_number(&sup, 3, 0).unwrap();
        assert_eq!(r.total, Mult::Finite(0));
    }

    #[test]
    fn newton_nondegeneracy_of_cusp() {
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 3], 1)]);
        let mut b = Budget::new(100_000);
        assert!(check_newton_nondegenerate(&f, &mut b).unwrap().is_nondegenerate());
    }

    #[test]
    fn inner_check_requires_convenient_diagram() {
        let f = qpoly(2, &[(&[2, 0], 1), (&[1, 1], 1)]);
        let d = diag(2, &[&[2, 0], &[1, 1]]);
        let mut b = Budget::new(100_000);
        assert_eq!(
            check_inner_nondegenerate(&f, &d, &mut b),
            Err(InnerCheckError::NotConvenient)
        );
    }

    #[test]
    fn inner_check_accepts_cusp() {
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 3], 1)]);
        let d = diag(2, &[&[2, 0], &[0, 3]]);
        let mut b = Budget::new(100_000);
        assert!(check_inner_nondegenerate(&f, &d, &mut b)
            .unwrap()
            .is_nondegenerate());
    }
}
