//! Newton diagram calculus.
//!
//! A Newton diagram is the unbounded polyhedron `conv(S) + R_{>=0}^n` spanned
//! by a finite set of exponent vectors. It is stored by its canonical minimal
//! generating set: the points of S that are vertices of the polyhedron.
//!
//! Because the polyhedron is unbounded, all face computations go through a
//! truncation trick: cutting with `x_1 + ... + x_n <= T` for a large enough
//! `T` yields a polytope whose facets are exactly the facets of the
//! polyhedron plus one extra cut facet, and whose faces away from the cut
//! plane are exactly the bounded faces of the polyhedron. That gives exact
//! enumeration of the finitely many positive weight vectors (one per bounded
//! face, taken in the relative interior of its normal cone) that the
//! multiplicity formulas and non-degeneracy checks quantify over.

use crate::geometry::{
    self, LatticePolytope, LatticeVector, PrimitiveNormal, Sense,
};
use crate::linalg;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NewtonError {
    #[error("exponent vectors must be non-negative, got {0:?}")]
    NegativeExponent(LatticeVector),
    #[error("exponent dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a non-empty diagram")]
    EmptyDiagram,
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
}

pub type Result<T> = std::result::Result<T, NewtonError>;

/// Value of a weight on a (possibly empty or unbounded) set of exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

impl std::fmt::Display for ExtInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

/// A Newton diagram `conv(S) + R_{>=0}^n`, canonically represented by its
/// minimal generating set (sorted).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NewtonDiagram {
    pub n: usize,
    pub generators: Vec<LatticeVector>,
}

impl NewtonDiagram {
    /// Canonicalize: keep exactly the points that are vertices of the
    /// polyhedron, i.e. not in the hull-plus-orthant of the others.
    pub fn from_points(n: usize, points: &[LatticeVector]) -> Result<Self> {
        for p in points {
            if p.len() != n {
                return Err(NewtonError::DimensionMismatch { expected: n, got: p.len() });
            }
            if p.iter().any(|&x| x < 0) {
                return Err(NewtonError::NegativeExponent(p.clone()));
            }
        }
        let mut uniq: Vec<LatticeVector> = points.to_vec();
        uniq.sort();
        uniq.dedup();
        let mut generators = Vec::new();
        for (i, p) in uniq.iter().enumerate() {
            let others: Vec<LatticeVector> = uniq
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            if others.is_empty() || !linalg::in_hull_plus_orthant(&others, p) {
                generators.push(p.clone());
            }
        }
        Ok(NewtonDiagram { n, generators })
    }

    pub fn empty(n: usize) -> Self {
        NewtonDiagram { n, generators: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership in the polyhedron.
    pub fn contains(&self, alpha: &[i64]) -> bool {
        !self.generators.is_empty() && linalg::in_hull_plus_orthant(&self.generators, alpha)
    }

    /// `min <w, .>` over the polyhedron: +inf on the empty diagram, -inf if
    /// some weight entry is negative (the polyhedron is unbounded in every
    /// positive coordinate direction), otherwise the minimum over generators.
    pub fn value(&self, w: &[i64]) -> ExtInt {
        if self.is_empty() {
            return ExtInt::PosInf;
        }
        if w.iter().any(|&x| x < 0) {
            return ExtInt::NegInf;
        }
        ExtInt::Finite(
            self.generators.iter().map(|g| linalg::dot(w, g)).min().expect("non-empty"),
        )
    }

    /// Restriction to the coordinate subspace indexed by `coords` (sorted):
    /// generators supported inside the subspace, re-embedded in Z^|coords|.
    pub fn restrict(&self, coords: &[usize]) -> NewtonDiagram {
        let keep: Vec<LatticeVector> = self
            .generators
            .iter()
            .filter(|g| {
                (0..self.n).all(|j| coords.contains(&j) || g[j] == 0)
            })
            .map(|g| coords.iter().map(|&j| g[j]).collect())
            .collect();
        NewtonDiagram::from_points(coords.len(), &keep).expect("restriction stays valid")
    }

    /// Coordinate projection onto the subspace indexed by `coords` (sorted).
    pub fn project(&self, coords: &[usize]) -> NewtonDiagram {
        let mapped: Vec<LatticeVector> = self
            .generators
            .iter()
            .map(|g| coords.iter().map(|&j| g[j]).collect())
            .collect();
        NewtonDiagram::from_points(coords.len(), &mapped).expect("projection stays valid")
    }

    /// Minkowski sum of diagrams (generated by pairwise sums).
    pub fn minkowski_add(&self, other: &NewtonDiagram) -> Result<NewtonDiagram> {
        if self.n != other.n {
            return Err(NewtonError::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(NewtonDiagram::empty(self.n));
        }
        let mut sums = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                sums.push(a.iter().zip(b).map(|(&x, &y)| x + y).collect());
            }
        }
        NewtonDiagram::from_points(self.n, &sums)
    }

    /// The compact polytope `conv(generators)` (NOT the diagram polyhedron).
    pub fn generator_hull(&self) -> Result<LatticePolytope> {
        Ok(geometry::convex_hull(&self.generators)?)
    }
}

/// Minkowski sum of several diagrams; empty list gives the origin diagram.
pub fn diagram_sum(diagrams: &[NewtonDiagram], n: usize) -> Result<NewtonDiagram> {
    let mut acc = NewtonDiagram::from_points(n, &[vec![0; n]])?;
    for d in diagrams {
        acc = acc.minkowski_add(d)?;
    }
    Ok(acc)
}

/// Exponents of a support set minimizing (`Sense::Min`, valuations) or
/// maximizing (`Sense::Max`, degrees) a weight; used to cut initial and
/// leading forms out of polynomial supports.
pub fn extremal_support(points: &[LatticeVector], w: &[i64], sense: Sense) -> Vec<LatticeVector> {
    let vals: Vec<i64> = points.iter().map(|p| linalg::dot(w, p)).collect();
    let opt = match sense {
        Sense::Min => vals.iter().min(),
        Sense::Max => vals.iter().max(),
    };
    let Some(&opt) = opt else { return vec![] };
    points
        .iter()
        .zip(&vals)
        .filter(|&(_, &v)| v == opt)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Weighted degree `max <w, .>` of a finite support; -inf when empty.
pub fn weighted_degree(points: &[LatticeVector], w: &[i64]) -> ExtInt {
    points
        .iter()
        .map(|p| linalg::dot(w, p))
        .max()
        .map_or(ExtInt::NegInf, ExtInt::Finite)
}

/// Truncated model of a diagram polyhedron: the polytope obtained by cutting
/// with `sum x_i <= T`, together with the facets of the polyhedron itself
/// (the cut facet is dropped).
#[derive(Debug, Clone)]
pub struct DiagramHull {
    pub n: usize,
    pub cut: i64,
    pub polytope: LatticePolytope,
    pub facets: Vec<PrimitiveNormal>,
}

/// Build the truncated hull of a non-empty diagram. With `C` the largest
/// generator coordinate and `T = n*C + 1`, every vertex and bounded face of
/// the polyhedron lies strictly below the cut plane, and the truncation is
/// generated by the diagram generators plus their pushes `g + (T - sum g) e_i`
/// along each axis.
pub fn diagram_hull(d: &NewtonDiagram) -> Result<DiagramHull> {
    if d.is_empty() {
        return Err(NewtonError::EmptyDiagram);
    }
    let n = d.n;
    let c = d
        .generators
        .iter()
        .flat_map(|g| g.iter().copied())
        .max()
        .unwrap_or(0);
    let t = (n as i64) * c + 1;
    let mut pts: Vec<LatticeVector> = d.generators.clone();
    for g in &d.generators {
        let total: i64 = g.iter().sum();
        for i in 0..n {
            let mut p = g.clone();
            p[i] += t - total;
            pts.push(p);
        }
    }
    let polytope = geometry::convex_hull(&pts)?;
    let all = geometry::facet_normals(&polytope)?;
    debug_assert!(all.orthogonal.is_empty(), "truncated hull is full-dimensional");
    let facets: Vec<PrimitiveNormal> = all
        .facets
        .into_iter()
        .filter(|f| !(f.weights.iter().all(|&x| x == -1)))
        .collect();
    Ok(DiagramHull { n, cut: t, polytope, facets })
}

impl DiagramHull {
    fn on_cut_plane(&self, v: &LatticeVector) -> bool {
        v.iter().sum::<i64>() == self.cut
    }

    /// Primitive facet normals of the polyhedron with all entries strictly
    /// positive: the weights appearing as candidates in the origin
    /// multiplicity formula.
    pub fn positive_facet_weights(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = self
            .facets
            .iter()
            .filter(|f| f.weights.iter().all(|&x| x > 0))
            .map(|f| f.weights.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All bounded faces of the polyhedron (faces of the truncation that do
    /// not touch the cut plane), each with a strictly positive weight taken
    /// in the relative interior of its normal cone (the sum of the primitive
    /// normals of all facets containing the face). Together these weights
    /// cut out every initial part a positive weight can select.
    pub fn bounded_faces(&self) -> Result<Vec<BoundedFace>> {
        let faces = geometry::proper_faces(&self.polytope, &self.facets)?;
        let mut out: Vec<BoundedFace> = Vec::new();
        for face in faces {
            if face
                .vertex_indices
                .iter()
                .any(|&i| self.on_cut_plane(&self.polytope.vertices[i]))
            {
                continue; // unbounded face of the polyhedron
            }
            let mut w = vec![0i64; self.n];
            for &fi in &face.facet_indices {
                for (wi, &x) in w.iter_mut().zip(&self.facets[fi].weights) {
                    *wi += x;
                }
            }
            debug_assert!(w.iter().all(|&x| x > 0), "bounded faces have positive normals");
            out.push(BoundedFace {
                weight: linalg::primitive(&w),
                vertices: face
                    .vertex_indices
                    .iter()
                    .map(|&i| self.polytope.vertices[i].clone())
                    .collect(),
            });
        }
        out.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| a.vertices.cmp(&b.vertices)));
        out.dedup();
        Ok(out)
    }

    /// Just the weights of [`Self::bounded_faces`], deduplicated.
    pub fn bounded_face_weights(&self) -> Result<Vec<LatticeVector>> {
        let mut out: Vec<LatticeVector> =
            self.bounded_faces()?.into_iter().map(|f| f.weight).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// A bounded face of a diagram polyhedron: a representative weight in the
/// relative interior of its normal cone and the vertices of the face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedFace {
    pub weight: LatticeVector,
    pub vertices: Vec<LatticeVector>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(n: usize, pts: &[&[i64]]) -> NewtonDiagram {
        NewtonDiagram::from_points(n, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn canonical_generators_drop_dominated_points() {
        // (3,1) is dominated by (2,0) + orthant, and (1,2) lies above the
        // segment between the other two, so only the extremes survive.
        let d = diag(2, &[&[2, 0], &[0, 3], &[3, 1], &[1, 2]]);
        assert_eq!(d.generators, vec![vec![0, 3], vec![2, 0]]);
        let d = diag(2, &[&[2, 0], &[0, 3], &[1, 1]]);
        assert_eq!(d.generators, vec![vec![0, 3], vec![1, 1], vec![2, 0]]);
        let d2 = diag(2, &[&[1, 0], &[2, 0], &[1, 5]]);
        assert_eq!(d2.generators, vec![vec![1, 0]]);
    }

    #[test]
    fn idempotent_canonicalization() {
        let d = diag(3, &[&[1, 0, 2], &[0, 2, 0], &[2, 2, 2], &[0, 0, 5]]);
        let again = NewtonDiagram::from_points(3, &d.generators).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn values_and_infinities() {
        let d = diag(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(d.value(&[1, 1]), ExtInt::Finite(2));
        assert_eq!(d.value(&[3, 2]), ExtInt::Finite(6));
        assert_eq!(d.value(&[-1, 1]), ExtInt::NegInf);
        assert_eq!(NewtonDiagram::empty(2).value(&[1, 1]), ExtInt::PosInf);
    }

    #[test]
    fn membership() {
        let d = diag(2, &[&[2, 0], &[0, 3]]);
        assert!(d.contains(&[1, 2]));
        assert!(d.contains(&[5, 5]));
        assert!(!d.contains(&[1, 1]));
        assert!(!d.contains(&[0, 0]));
    }

    #[test]
    fn restrict_and_project() {
        let d = diag(3, &[&[1, 0, 0], &[0, 2, 1], &[0, 0, 3]]);
        let r = d.restrict(&[0, 2]);
        assert_eq!(r.generators, vec![vec![0, 3], vec![1, 0]]);
        let p = d.project(&[0, 2]);
        assert_eq!(p.generators, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn hull_of_two_point_diagram() {
        let d = diag(2, &[&[2, 0], &[0, 3]]);
        let h = diagram_hull(&d).unwrap();
        // Facets: the slanted edge between the generators plus the two
        // axis-parallel rays x >= ... ; candidates are the strictly positive.
        assert_eq!(h.positive_facet_weights(), vec![vec![3, 2]]);
        let reps = h.bounded_face_weights().unwrap();
        // Bounded faces: two vertices and the edge between them.
        assert_eq!(reps.len(), 3);
        assert!(reps.contains(&vec![3, 2]));
        for w in &reps {
            assert!(w.iter().all(|&x| x > 0));
        }
    }

    #[test]
    fn single_generator_hull() {
        let d = diag(2, &[&[1, 1]]);
        let h = diagram_hull(&d).unwrap();
        assert!(h.positive_facet_weights().is_empty());
        assert_eq!(h.bounded_face_weights().unwrap(), vec![vec![1, 1]]);
    }

    #[test]
    fn extremal_support_and_degree() {
        let pts: Vec<LatticeVector> = vec![vec![2, 0], vec![0, 3], vec![1, 1]];
        let ini = extremal_support(&pts, &[1, 1], Sense::Min);
        assert_eq!(ini, vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(weighted_degree(&pts, &[1, 1]), ExtInt::Finite(3));
        assert_eq!(weighted_degree(&[], &[1, 1]), ExtInt::NegInf);
    }

    #[test]
    fn diagram_sum_collapses_on_empty() {
        let d = diag(2, &[&[1, 0]]);
        let s = diagram_sum(&[d.clone(), NewtonDiagram::empty(2)], 2).unwrap();
        assert!(s.is_empty());
        let s2 = diagram_sum(&[d.clone(), d], 2).unwrap();
        assert_eq!(s2.generators, vec![vec![2, 0]]);
    }
}
