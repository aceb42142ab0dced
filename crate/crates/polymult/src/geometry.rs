//! Exact integral convex geometry.
//!
//! Polytopes are stored by their canonical vertex sets (lexicographically
//! sorted extreme points). All volumes are lattice-normalized: an
//! n-dimensional polytope P has `lattice_volume(P) = n! * vol(P)`, so the
//! standard simplex has volume 1. No floating point is used anywhere.

use crate::linalg;
use serde::Serialize;
use thiserror::Error;

pub type LatticeVector = Vec<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a non-empty polytope")]
    EmptyPolytope,
    #[error("mixed volume needs exactly {expected} polytopes, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("zero weight vector not allowed here")]
    ZeroWeight,
    #[error("faces do not lie in parallel translates of the given subspace")]
    NotParallel,
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A lattice polytope, canonically represented by its sorted vertex set.
/// The empty polytope has no vertices and dimension -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    pub vertices: Vec<LatticeVector>,
}

/// A primitive (inner) normal vector together with the optimal value of
/// `<w, .>` over the polytope it was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimitiveNormal {
    pub weights: LatticeVector,
    pub support_value: i64,
}

/// Facet data of a polytope: proper facets (within the affine hull for
/// lower-dimensional polytopes) plus normals spanning the directions
/// orthogonal to the affine hull.
#[derive(Debug, Clone)]
pub struct FacetNormals {
    pub facets: Vec<PrimitiveNormal>,
    pub orthogonal: Vec<PrimitiveNormal>,
}

/// A basis of the sublattice `{a in Z^n : <w, a> = 0}` for some weight w,
/// or more generally of a saturated direction lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublatticeBasis {
    pub basis: Vec<LatticeVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Convex hull: canonical vertex set of the hull of `points`.
pub fn convex_hull(points: &[LatticeVector]) -> Result<LatticePolytope> {
    let Some(first) = points.first() else {
        return Ok(LatticePolytope { ambient_dim: 0, vertices: vec![] });
    };
    let n = first.len();
    for p in points {
        if p.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: p.len() });
        }
    }
    let mut uniq: Vec<LatticeVector> = points.to_vec();
    uniq.sort();
    uniq.dedup();
    let mut vertices: Vec<LatticeVector> = Vec::new();
    for (i, p) in uniq.iter().enumerate() {
        let others: Vec<LatticeVector> = uniq
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !linalg::in_convex_hull(&others, p) {
            vertices.push(p.clone());
        }
    }
    Ok(LatticePolytope { ambient_dim: n, vertices })
}

/// Construct an empty polytope in ambient dimension `n`.
pub fn empty_polytope(n: usize) -> LatticePolytope {
    LatticePolytope { ambient_dim: n, vertices: vec![] }
}

impl LatticePolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; -1 for the empty polytope.
    pub fn dim(&self) -> i64 {
        if self.vertices.is_empty() {
            return -1;
        }
        let diffs = self.edge_diffs();
        linalg::rank(&diffs) as i64
    }

    fn edge_diffs(&self) -> Vec<LatticeVector> {
        let v0 = &self.vertices[0];
        self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(&a, &b)| a - b).collect())
            .collect()
    }

    /// Min or max of `<w, .>` over the vertices.
    pub fn support(&self, w: &[i64], sense: Sense) -> Option<i64> {
        let vals = self.vertices.iter().map(|v| linalg::dot(w, v));
        match sense {
            Sense::Min => vals.min(),
            Sense::Max => vals.max(),
        }
    }
}

/// Minkowski sum. The sum with an empty polytope is empty.
pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.ambient_dim != q.ambient_dim && !p.is_empty() && !q.is_empty() {
        return Err(GeometryError::DimensionMismatch {
            expected: p.ambient_dim,
            got: q.ambient_dim,
        });
    }
    if p.is_empty() || q.is_empty() {
        return Ok(empty_polytope(p.ambient_dim.max(q.ambient_dim)));
    }
    let mut sums: Vec<LatticeVector> = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(a.iter().zip(b).map(|(&x, &y)| x + y).collect());
        }
    }
    convex_hull(&sums)
}

/// Minkowski sum of a list; empty list gives the origin point.
pub fn minkowski_sum_all(ps: &[LatticePolytope], n: usize) -> Result<LatticePolytope> {
    let mut acc = LatticePolytope { ambient_dim: n, vertices: vec![vec![0; n]] };
    for p in ps {
        acc = minkowski_sum(&acc, p)?;
    }
    Ok(acc)
}

/// The face of `P` optimizing `<w, .>` (In for `Min`, ld for `Max`).
/// The zero weight returns `P` itself.
pub fn face(p: &LatticePolytope, w: &[i64], sense: Sense) -> Result<LatticePolytope> {
    if p.is_empty() {
        return Err(GeometryError::EmptyPolytope);
    }
    let opt = p.support(w, sense).expect("non-empty");
    let vertices: Vec<LatticeVector> = p
        .vertices
        .iter()
        .filter(|v| linalg::dot(w, v) == opt)
        .cloned()
        .collect();
    Ok(LatticePolytope { ambient_dim: p.ambient_dim, vertices })
}

/// Facet normals. For a full-dimensional polytope these are the primitive
/// INNER normals with their minimum values. For a lower-dimensional polytope
/// the facets are taken within the affine hull (normals lifted back to Z^n)
/// and `orthogonal` spans the directions orthogonal to the affine hull.
pub fn facet_normals(p: &LatticePolytope) -> Result<FacetNormals> {
    if p.is_empty() {
        return Err(GeometryError::EmptyPolytope);
    }
    let n = p.ambient_dim;
    let d = p.dim();
    if d == n as i64 {
        return Ok(FacetNormals { facets: full_dim_facets(p), orthogonal: vec![] });
    }
    // Lower-dimensional: work in saturated coordinates of the affine hull.
    let diffs = p.edge_diffs();
    let ortho = linalg::integer_kernel_basis(&diffs, n);
    let lattice = linalg::integer_kernel_basis(&ortho, n);
    debug_assert_eq!(lattice.len() as i64, d);
    let orthogonal = ortho
        .iter()
        .map(|w| {
            let w = linalg::primitive(w);
            let support_value = p.support(&w, Sense::Min).expect("non-empty");
            PrimitiveNormal { weights: w, support_value }
        })
        .collect();
    if d <= 0 {
        // A point has no facets within its affine hull.
        return Ok(FacetNormals { facets: vec![], orthogonal });
    }
    let reduced = project_to_sublattice(p, &SublatticeBasis { basis: lattice.clone() })?;
    let inner = full_dim_facets(&reduced);
    let mut facets = Vec::new();
    for f in inner {
        let lifted = lift_normal(&lattice, &f.weights);
        let support_value = p.support(&lifted, Sense::Min).expect("non-empty");
        facets.push(PrimitiveNormal { weights: lifted, support_value });
    }
    Ok(FacetNormals { facets, orthogonal })
}

/// Facet enumeration for a full-dimensional polytope: every facet hyperplane
/// is spanned by some n affinely independent vertices, so candidate normals
/// come from kernels of difference matrices of n-subsets of vertices.
fn full_dim_facets(p: &LatticePolytope) -> Vec<PrimitiveNormal> {
    let n = p.ambient_dim;
    let verts = &p.vertices;
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        let lo = verts.iter().map(|v| v[0]).min().unwrap();
        let hi = verts.iter().map(|v| v[0]).max().unwrap();
        return vec![
            PrimitiveNormal { weights: vec![1], support_value: lo },
            PrimitiveNormal { weights: vec![-1], support_value: -hi },
        ];
    }
    let m = verts.len();
    if m < n {
        return vec![];
    }
    let mut candidates: std::collections::BTreeSet<LatticeVector> = Default::default();
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let base = &verts[subset[0]];
        let diffs: Vec<LatticeVector> = subset[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(base).map(|(&a, &b)| a - b).collect())
            .collect();
        let kernel = linalg::integer_kernel_basis(&diffs, n);
        if kernel.len() == 1 {
            let mut w = linalg::primitive(&kernel[0]);
            // Canonical sign for dedup; both orientations are tried below.
            if let Some(&first) = w.iter().find(|&&x| x != 0) {
                if first < 0 {
                    w = w.iter().map(|&x| -x).collect();
                }
            }
            candidates.insert(w);
        }
        if !next_combination(&mut subset, m) {
            break;
        }
    }
    let mut facets = Vec::new();
    for w in &candidates {
        for signed in [w.clone(), w.iter().map(|&x| -x).collect::<Vec<i64>>()] {
            let min = p.support(&signed, Sense::Min).expect("non-empty");
            let face_verts: Vec<&LatticeVector> = verts
                .iter()
                .filter(|v| linalg::dot(&signed, v) == min)
                .collect();
            if face_verts.len() < n {
                continue;
            }
            let base = face_verts[0];
            let diffs: Vec<LatticeVector> = face_verts[1..]
                .iter()
                .map(|v| v.iter().zip(base).map(|(&a, &b)| a - b).collect())
                .collect();
            if linalg::rank(&diffs) == n - 1 {
                facets.push(PrimitiveNormal { weights: signed, support_value: min });
            }
        }
    }
    facets.sort_by(|a, b| a.weights.cmp(&b.weights));
    facets.dedup();
    facets
}

/// Advance `subset` to the next k-combination of `0..m` in lexicographic
/// order; returns false when exhausted.
fn next_combination(subset: &mut [usize], m: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < i + m - k {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Basis of `{a in Z^n : <w, a> = 0}` in Hermite-derived canonical form.
pub fn kernel_lattice_basis(w: &[i64]) -> Result<SublatticeBasis> {
    if w.iter().all(|&x| x == 0) {
        return Err(GeometryError::ZeroWeight);
    }
    Ok(SublatticeBasis { basis: linalg::integer_kernel_basis(&[w.to_vec()], w.len()) })
}

/// Express `p` (translated so its first vertex is at the origin) in the
/// coordinates of a saturated sublattice basis. Errors if `p` is not
/// parallel to the spanned subspace.
pub fn project_to_sublattice(
    p: &LatticePolytope,
    basis: &SublatticeBasis,
) -> Result<LatticePolytope> {
    if p.is_empty() {
        return Ok(empty_polytope(basis.basis.len()));
    }
    let v0 = &p.vertices[0];
    let k = basis.basis.len();
    let mut mapped: Vec<LatticeVector> = Vec::with_capacity(p.vertices.len());
    for v in &p.vertices {
        let target: Vec<i64> = v.iter().zip(v0).map(|(&a, &b)| a - b).collect();
        let coords = linalg::solve_in_basis(&basis.basis, &target)
            .ok_or(GeometryError::NotParallel)?;
        let mut pt = Vec::with_capacity(k);
        for c in coords {
            if !c.is_integer() {
                return Err(GeometryError::NotParallel);
            }
            let val: i64 = num::ToPrimitive::to_i64(&c.to_integer())
                .ok_or(GeometryError::NotParallel)?;
            pt.push(val);
        }
        mapped.push(pt);
    }
    convex_hull(&mapped)
}

/// Lift a normal from sublattice coordinates back to Z^n: the unique (up to
/// positive scale) vector in the rational row span of the basis pairing to
/// the given values; returned primitive.
fn lift_normal(basis: &[LatticeVector], w_reduced: &[i64]) -> LatticeVector {
    use num::rational::BigRational;
    use num::{BigInt, Zero};
    let d = basis.len();
    let n = basis[0].len();
    // Solve G a = w_reduced with the Gram matrix G of the basis, then set
    // w = sum a_i b_i and clear denominators.
    let gram: Vec<LatticeVector> = (0..d)
        .map(|i| (0..d).map(|j| linalg::dot(&basis[i], &basis[j])).collect())
        .collect();
    let cols: Vec<LatticeVector> = (0..d)
        .map(|j| (0..d).map(|i| gram[i][j]).collect())
        .collect();
    let a = linalg::solve_in_basis(&cols, w_reduced).expect("Gram matrix invertible");
    let mut w: Vec<BigRational> = vec![BigRational::zero(); n];
    for (ai, b) in a.iter().zip(basis) {
        for (wi, &bi) in w.iter_mut().zip(b) {
            *wi += ai * BigRational::from_integer(BigInt::from(bi));
        }
    }
    let denom_lcm = w
        .iter()
        .map(|x| x.denom().clone())
        .fold(BigInt::from(1), |acc, d| num::Integer::lcm(&acc, &d));
    let ints: Vec<i64> = w
        .iter()
        .map(|x| {
            let v = x.numer() * &denom_lcm / x.denom();
            num::ToPrimitive::to_i64(&v).expect("lifted normal fits in i64")
        })
        .collect();
    let mut prim = linalg::primitive(&ints);
    // Preserve orientation: the solve keeps the sign of w_reduced, but guard
    // against an accidental global flip.
    let check: i64 = linalg::dot(&prim, &basis[0]);
    if w_reduced[0] != 0 && check.signum() != w_reduced[0].signum() && check != 0 {
        prim = prim.iter().map(|&x| -x).collect();
    }
    prim
}

/// Lattice-normalized volume: `n! * vol(conv P)` as an exact integer;
/// 0 if `dim(P) < n`. Pyramid decomposition over facets.
pub fn lattice_volume(p: &LatticePolytope) -> Result<i64> {
    let n = p.ambient_dim;
    if p.is_empty() {
        return Ok(0);
    }
    if (p.dim()) < n as i64 {
        return Ok(if n == 0 { 1 } else { 0 });
    }
    if n == 0 {
        return Ok(1);
    }
    if n == 1 {
        let lo = p.vertices.iter().map(|v| v[0]).min().unwrap();
        let hi = p.vertices.iter().map(|v| v[0]).max().unwrap();
        return Ok(hi - lo);
    }
    let apex = &p.vertices[0];
    let mut total: i64 = 0;
    for f in full_dim_facets(p) {
        let height = linalg::dot(&f.weights, apex) - f.support_value;
        if height == 0 {
            continue; // apex lies on this facet
        }
        let facet_poly = face(p, &f.weights, Sense::Min)?;
        let basis = kernel_lattice_basis(&f.weights)?;
        let reduced = project_to_sublattice(&facet_poly, &basis)?;
        total += height * lattice_volume(&reduced)?;
    }
    Ok(total)
}

/// Mixed volume of n polytopes in Z^n, normalized so `mv(P,...,P) = n!vol(P)`.
/// Primary path: inclusion-exclusion over sub-collections.
pub fn mixed_volume(ps: &[LatticePolytope]) -> Result<i64> {
    if ps.is_empty() {
        return Ok(1); // empty mixed volumes are 1 by convention
    }
    let n = ps[0].ambient_dim;
    if ps.len() != n {
        return Err(GeometryError::Arity { expected: n, got: ps.len() });
    }
    for p in ps {
        if p.is_empty() {
            return Err(GeometryError::EmptyPolytope);
        }
        if p.ambient_dim != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: p.ambient_dim });
        }
    }
    let mut total: i64 = 0;
    for mask in 1u32..(1 << n) {
        let chosen: Vec<LatticePolytope> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| ps[i].clone())
            .collect();
        let sum = minkowski_sum_all(&chosen, n)?;
        let vol = lattice_volume(&sum)?;
        let sign = if (n - chosen.len()) % 2 == 0 { 1 } else { -1 };
        total += sign * vol;
    }
    // Each term carries an extra n! against the Euclidean identity
    // n!V = sum (-1)^(n-|S|) vol(sum_S), so divide it back out.
    let factorial: i64 = (1..=n as i64).product();
    debug_assert_eq!(total % factorial, 0);
    Ok(total / factorial)
}

/// Independent second path for the mixed volume: the support-function
/// recursion `mv(P1,...,Pn) = sum over primitive outer facet normals w of
/// P2+...+Pn of h_{P1}(w) * mv'(faces of P2..Pn at w)` with the (n-1)-dim
/// mixed volume taken in the induced lattice of the facet hyperplane.
pub fn mixed_volume_recursive(ps: &[LatticePolytope]) -> Result<i64> {
    if ps.is_empty() {
        return Ok(1);
    }
    let n = ps[0].ambient_dim;
    if ps.len() != n {
        return Err(GeometryError::Arity { expected: n, got: ps.len() });
    }
    if n == 1 {
        return lattice_volume(&ps[0]);
    }
    let q = minkowski_sum_all(&ps[1..], n)?;
    let qd = q.dim();
    if qd < n as i64 - 1 {
        return Ok(0);
    }
    let mut outer: Vec<LatticeVector> = Vec::new();
    if qd == n as i64 {
        for f in facet_normals(&q)?.facets {
            outer.push(f.weights.iter().map(|&x| -x).collect());
        }
    } else {
        // Q spans a hyperplane: both unit normals of that hyperplane see the
        // whole of Q as a "facet"; in-hull facets contribute zero.
        let ortho = facet_normals(&q)?.orthogonal;
        debug_assert_eq!(ortho.len(), 1);
        let w = &ortho[0].weights;
        outer.push(w.clone());
        outer.push(w.iter().map(|&x| -x).collect());
    }
    let mut total: i64 = 0;
    for w in outer {
        let h = ps[0].support(&w, Sense::Max).expect("non-empty");
        let faces: Vec<LatticePolytope> = ps[1..]
            .iter()
            .map(|p| face(p, &w, Sense::Max))
            .collect::<Result<_>>()?;
        let basis = kernel_lattice_basis(&w)?;
        let reduced: Vec<LatticePolytope> = faces
            .iter()
            .map(|f| project_to_sublattice(f, &basis))
            .collect::<Result<_>>()?;
        total += h * mixed_volume_recursive(&reduced)?;
    }
    Ok(total)
}

/// A proper face of a polytope, recorded by its vertex set and the indices
/// (into a given facet list) of all facets containing it.
#[derive(Debug, Clone)]
pub struct FaceInfo {
    pub vertex_indices: Vec<usize>,
    pub facet_indices: Vec<usize>,
}

/// All non-empty proper faces of `p` (faces within the affine hull, down to
/// vertices), computed as the intersection closure of the facet vertex sets.
/// Facet indices refer to `facets`, which must be the in-hull facet list of
/// `p` (e.g. `facet_normals(p)?.facets`).
pub fn proper_faces(p: &LatticePolytope, facets: &[PrimitiveNormal]) -> Result<Vec<FaceInfo>> {
    use std::collections::BTreeSet;
    if p.is_empty() {
        return Err(GeometryError::EmptyPolytope);
    }
    let facet_sets: Vec<BTreeSet<usize>> = facets
        .iter()
        .map(|f| {
            let min = p.support(&f.weights, Sense::Min).expect("non-empty");
            p.vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| linalg::dot(&f.weights, v) == min)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut faces: BTreeSet<BTreeSet<usize>> = facet_sets.iter().cloned().collect();
    loop {
        let snapshot: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
        let before = faces.len();
        for a in &snapshot {
            for fs in &facet_sets {
                let inter: BTreeSet<usize> = a.intersection(fs).cloned().collect();
                if !inter.is_empty() {
                    faces.insert(inter);
                }
            }
        }
        if faces.len() == before {
            break;
        }
    }
    Ok(faces
        .into_iter()
        .map(|vs| {
            let facet_indices = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, fs)| vs.is_subset(fs))
                .map(|(i, _)| i)
                .collect();
            FaceInfo { vertex_indices: vs.into_iter().collect(), facet_indices }
        })
        .collect())
}

/// Mixed volume of k faces lying in parallel translates of a common
/// k-dimensional lattice subspace, measured in the induced lattice.
pub fn relative_mixed_volume(
    faces: &[LatticePolytope],
    basis: &SublatticeBasis,
) -> Result<i64> {
    if faces.len() != basis.basis.len() {
        return Err(GeometryError::Arity { expected: basis.basis.len(), got: faces.len() });
    }
    let reduced: Vec<LatticePolytope> = faces
        .iter()
        .map(|f| project_to_sublattice(f, basis))
        .collect::<Result<_>>()?;
    mixed_volume(&reduced)
}
