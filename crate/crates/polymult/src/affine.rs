//! Root counting away from the origin.
//!
//! Given the Newton polytopes of a square polynomial system and a family of
//! coordinate subspaces to exclude, this module classifies every coordinate
//! subset (trivial / isolated / exotrivial, together with the derived
//! families used by the bound and its checkers), evaluates the extended
//! root-count bound on the complement of the excluded subspaces, and decides
//! whether a concrete system attains that bound, producing a witness weight
//! when it does not.
//!
//! Conventions: subsets of coordinates are sorted 0-based index vectors;
//! restrictions to a subset are re-embedded into that many variables; star
//! sums at infinity use leading (max) forms, centered star sums use initial
//! (min) forms; ledger entries with zero mixed volume are omitted.

use std::collections::BTreeSet;

use crate::geometry::{self, LatticePolytope, LatticeVector, Sense};
use crate::linalg;
use crate::local::{self, Mult, StarResult, WitnessKind};
use crate::newton::{self, NewtonDiagram};
use crate::polysys::{self, Budget, SparsePolynomial};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AffineError {
    #[error("expected {expected} polytopes in {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("polytope {index} has a vertex with a negative coordinate")]
    NegativeVertex { index: usize },
    #[error("restriction of argument {index} to the subset is empty")]
    EmptyRestriction { index: usize },
    #[error("polynomial {index} does not have the prescribed Newton polytope")]
    NotAdmissible { index: usize },
    #[error("subset {0:?} out of range for {1} variables")]
    BadSubset(Vec<usize>, usize),
    #[error(transparent)]
    Local(#[from] local::LocalError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Newton(#[from] newton::NewtonError),
    #[error(transparent)]
    Algebra(#[from] polysys::AlgebraError),
}

pub type Result<T> = std::result::Result<T, AffineError>;

/// A family of subsets of the coordinate set `{0, .., n-1}`, closed under
/// nothing by default; [`SubsetFamily::closure`] produces the downward
/// (inclusion) closure. Members are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    n: usize,
    members: BTreeSet<Vec<usize>>,
}

impl SubsetFamily {
    pub fn new(n: usize, members: &[Vec<usize>]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for m in members {
            let mut m = m.clone();
            m.sort_unstable();
            m.dedup();
            if m.iter().any(|&i| i >= n) {
                return Err(AffineError::BadSubset(m, n));
            }
            set.insert(m);
        }
        Ok(SubsetFamily { n, members: set })
    }

    pub fn empty(n: usize) -> Self {
        SubsetFamily { n, members: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.members.iter()
    }

    pub fn contains(&self, subset: &[usize]) -> bool {
        self.members.contains(subset)
    }

    /// Downward closure under inclusion: every subset of a member.
    pub fn closure(&self) -> SubsetFamily {
        let mut set = BTreeSet::new();
        for m in &self.members {
            for mask in 0u64..(1 << m.len()) {
                let sub: Vec<usize> = m
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                set.insert(sub);
            }
        }
        SubsetFamily { n: self.n, members: set }
    }

    /// The family joined with extra members.
    pub fn union_with(&self, extra: &[Vec<usize>]) -> SubsetFamily {
        let mut members = self.members.clone();
        for m in extra {
            members.insert(m.clone());
        }
        SubsetFamily { n: self.n, members }
    }

    /// Members contained in `coords`, re-indexed to positions within
    /// `coords` (the family seen from the restricted coordinate space).
    pub fn restrict_to(&self, coords: &[usize]) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .filter(|m| m.iter().all(|i| coords.contains(i)))
            .map(|m| {
                m.iter()
                    .map(|i| coords.iter().position(|c| c == i).expect("member inside coords"))
                    .collect()
            })
            .collect()
    }
}

/// Restriction of a polytope to a coordinate subset: the vertices supported
/// on the subset, re-embedded into that many variables. For polytopes in the
/// non-negative orthant this is the face cut out by the complementary
/// coordinate hyperplanes.
pub fn restrict_polytope(p: &LatticePolytope, coords: &[usize]) -> Result<LatticePolytope> {
    let pts: Vec<LatticeVector> = p
        .vertices
        .iter()
        .filter(|v| v.iter().enumerate().all(|(i, &x)| x == 0 || coords.contains(&i)))
        .map(|v| coords.iter().map(|&i| v[i]).collect())
        .collect();
    if pts.is_empty() {
        return Ok(geometry::empty_polytope(coords.len()));
    }
    Ok(geometry::convex_hull(&pts)?)
}

/// Indices whose polytope has a non-empty restriction to `coords`.
fn supported_polytopes(ps: &[LatticePolytope], coords: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (j, p) in ps.iter().enumerate() {
        if !restrict_polytope(p, coords)?.is_empty() {
            out.push(j);
        }
    }
    Ok(out)
}

/// Whether a generic system with these polytopes has no zero on the torus of
/// `coords`: some sub-collection of restrictions outnumbers the dimension of
/// its Minkowski sum. Restrictions that are single points are generically
/// monomials — units on the torus — and are not counted as equations.
fn is_trivial_on(ps: &[LatticePolytope], coords: &[usize]) -> Result<bool> {
    let multi: Vec<LatticePolytope> = ps
        .iter()
        .map(|p| restrict_polytope(p, coords))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|r| r.dim() >= 1)
        .collect();
    for mask in 1u64..(1 << multi.len()) {
        let chosen: Vec<LatticePolytope> = multi
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        let sum = geometry::minkowski_sum_all(&chosen, coords.len())?;
        if chosen.len() as i64 > sum.dim() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Everything the bound and the checkers need to know about one non-empty
/// coordinate subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetReport {
    /// The subset `I` (sorted, 0-based).
    pub subset: Vec<usize>,
    /// Indices whose polytope restricts non-emptily to `I`.
    pub supported: Vec<usize>,
    /// Generic systems have no zero on the torus of `I`.
    pub trivial: bool,
    /// Generic systems have only isolated zeros on the torus of `I`.
    pub isolated: bool,
    /// Some superset of `I` is cut out by fewer polytopes than its size;
    /// every zero on the torus of `I` is then non-isolated.
    pub in_excess: bool,
    /// Trivial for an exact count reason: in the excess family, or trivial
    /// with exactly as many supporting polytopes as coordinates.
    pub exotrivial: bool,
    /// Member of the exotrivial family outside the excluded subsets.
    pub in_t: bool,
    /// Member of the complementary (non-exotrivial) family.
    pub in_t_prime: bool,
    /// Exotrivial with exactly matching support count (checker family).
    pub in_t_star: bool,
    /// Non-trivial member of the complementary family (checker family).
    pub in_n_family: bool,
    /// Contributes a term to the extended root-count bound.
    pub in_index_family: bool,
}

/// Classification of all non-empty coordinate subsets for a polytope system
/// and a family of excluded subspaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceClassification {
    pub n: usize,
    pub reports: Vec<SubsetReport>,
    /// Whether the empty subset belongs to the excess family (that is,
    /// whether any subset at all is under-supported).
    pub empty_in_excess: bool,
}

impl SubspaceClassification {
    pub fn report(&self, subset: &[usize]) -> Option<&SubsetReport> {
        self.reports.iter().find(|r| r.subset == subset)
    }

    fn family(&self, pick: impl Fn(&SubsetReport) -> bool) -> Vec<Vec<usize>> {
        self.reports.iter().filter(|r| pick(r)).map(|r| r.subset.clone()).collect()
    }

    /// Subsets every zero over which is forced non-isolated (the excess
    /// family), with the empty subset included when applicable.
    pub fn excess_family(&self) -> Vec<Vec<usize>> {
        let mut out = if self.empty_in_excess { vec![vec![]] } else { vec![] };
        out.extend(self.family(|r| r.in_excess));
        out
    }

    pub fn t_family(&self) -> Vec<Vec<usize>> {
        self.family(|r| r.in_t)
    }

    pub fn t_prime_family(&self) -> Vec<Vec<usize>> {
        self.family(|r| r.in_t_prime)
    }

    pub fn t_star_family(&self) -> Vec<Vec<usize>> {
        self.family(|r| r.in_t_star)
    }

    pub fn n_family(&self) -> Vec<Vec<usize>> {
        self.family(|r| r.in_n_family)
    }

    pub fn index_family(&self) -> Vec<Vec<usize>> {
        self.family(|r| r.in_index_family)
    }
}

fn validate_polytopes(ps: &[LatticePolytope]) -> Result<usize> {
    let n = ps.len();
    if n == 0 {
        return Err(AffineError::Arity { expected: 1, got: 0 });
    }
    for (j, p) in ps.iter().enumerate() {
        if p.ambient_dim != n {
            return Err(AffineError::Arity { expected: n, got: p.ambient_dim });
        }
        if p.vertices.iter().any(|v| v.iter().any(|&x| x < 0)) {
            return Err(AffineError::NegativeVertex { index: j });
        }
        if p.is_empty() {
            return Err(AffineError::EmptyRestriction { index: j });
        }
    }
    Ok(n)
}

/// Classify every non-empty coordinate subset of a system of `n` polytopes
/// in `n` variables relative to the excluded-subspace family `s`.
pub fn classify_subspaces(
    ps: &[LatticePolytope],
    s: &SubsetFamily,
) -> Result<SubspaceClassification> {
    let n = validate_polytopes(ps)?;
    if s.n() != n {
        return Err(AffineError::Arity { expected: n, got: s.n() });
    }
    let subsets = local::nonempty_subsets(n);
    let mut supported: Vec<Vec<usize>> = Vec::with_capacity(subsets.len());
    for coords in &subsets {
        supported.push(supported_polytopes(ps, coords)?);
    }
    let deficient: Vec<&Vec<usize>> = subsets
        .iter()
        .zip(&supported)
        .filter(|(c, s)| s.len() < c.len())
        .map(|(c, _)| c)
        .collect();
    let sbar = s.closure();
    let mut reports = Vec::with_capacity(subsets.len());
    for (coords, supp) in subsets.iter().zip(supported.iter()) {
        let trivial = is_trivial_on(ps, coords)?;
        let full_support = supp.len() == coords.len();
        let in_excess = deficient.iter().any(|d| coords.iter().all(|i| d.contains(i)));
        let exotrivial = in_excess || (trivial && full_support);
        let excluded = sbar.contains(coords) || in_excess;
        let in_t = !excluded && exotrivial;
        let in_t_prime = !excluded && !exotrivial;
        reports.push(SubsetReport {
            subset: coords.clone(),
            supported: supp.clone(),
            trivial,
            isolated: trivial || full_support,
            in_excess,
            exotrivial,
            in_t,
            in_t_prime,
            in_t_star: in_t && full_support,
            in_n_family: in_t_prime && !trivial,
            in_index_family: !excluded && full_support && !trivial && supp.contains(&0),
        });
    }
    Ok(SubspaceClassification { n, reports, empty_in_excess: !deficient.is_empty() })
}

fn has_positive_entry(w: &[i64]) -> bool {
    w.iter().any(|&x| x > 0)
}

fn check_star_arity(first: &LatticePolytope, rest: &[LatticePolytope]) -> Result<usize> {
    let k = first.ambient_dim;
    if rest.len() + 1 != k {
        return Err(AffineError::Arity { expected: k, got: rest.len() + 1 });
    }
    if first.is_empty() {
        return Err(AffineError::EmptyRestriction { index: 0 });
    }
    for (i, p) in rest.iter().enumerate() {
        if p.ambient_dim != k {
            return Err(AffineError::Arity { expected: k, got: p.ambient_dim });
        }
        if p.is_empty() {
            return Err(AffineError::EmptyRestriction { index: i + 1 });
        }
    }
    Ok(k)
}

/// Star sum at infinity: over each weight `w` with at least one positive
/// entry that exposes a facet-sized leading face of the Minkowski sum of
/// `rest`, add the maximum of `w` on `first` times the mixed volume of the
/// leading faces of `rest` in the hyperplane lattice of `w`. With no `rest`
/// (one variable) the sum degenerates to the maximal exponent of `first`.
pub fn mult_star_infinity(
    first: &LatticePolytope,
    rest: &[LatticePolytope],
) -> Result<StarResult> {
    let k = check_star_arity(first, rest)?;
    let mut candidates: Vec<LatticeVector> = if k == 1 {
        vec![vec![1]]
    } else {
        let q = geometry::minkowski_sum_all(rest, k)?;
        let normals = geometry::facet_normals(&q)?;
        match normals.orthogonal.len() {
            // Full-dimensional sum: leading faces of facet size are exposed
            // exactly by the (negated, outer) facet normals.
            0 => normals
                .facets
                .iter()
                .map(|f| f.weights.iter().map(|&x| -x).collect())
                .collect(),
            // Codimension one: only weights orthogonal to the whole sum can
            // expose it entirely; anything else leaves a zero mixed volume.
            1 => {
                let o = &normals.orthogonal[0].weights;
                vec![o.clone(), o.iter().map(|&x| -x).collect()]
            }
            // Lower-dimensional: every mixed volume term vanishes.
            _ => vec![],
        }
    };
    candidates.retain(|w| has_positive_entry(w));
    candidates.sort();
    candidates.dedup();
    let mut res = local::star_from_candidates(
        &first.vertices,
        Sense::Max,
        rest,
        &candidates,
        |p, w| Ok(geometry::face(p, w, Sense::Max)?),
    )?;
    res.entries.retain(|e| e.mixed_volume != 0);
    Ok(res)
}

/// Star sum centered at a family of sub-tori: over each non-negative weight
/// whose zero set is a family member (and which exposes a facet-sized
/// initial face of the summed rest diagrams), add the minimum of the weight
/// on `first` times the mixed volume of the initial faces of `rest`.
pub fn mult_star_centered(
    first: &LatticePolytope,
    rest: &[LatticePolytope],
    family: &[Vec<usize>],
) -> Result<StarResult> {
    let k = check_star_arity(first, rest)?;
    let mut patterns: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in family {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|&i| i >= k) {
            return Err(AffineError::BadSubset(s, k));
        }
        if s.len() < k {
            // The full subset corresponds to the zero weight, whose term
            // always vanishes.
            patterns.insert(s);
        }
    }
    let mut candidates: Vec<LatticeVector> = if patterns.is_empty() {
        vec![]
    } else if k == 1 {
        if patterns.contains(&vec![]) {
            vec![vec![1]]
        } else {
            vec![]
        }
    } else {
        // Non-negative weights see polytopes and their diagrams (polytope
        // plus orthant) identically, and the diagram sum is always
        // full-dimensional, so its facet normals enumerate all candidates.
        let diagrams: Vec<NewtonDiagram> = rest
            .iter()
            .map(|p| NewtonDiagram::from_points(k, &p.vertices))
            .collect::<newton::Result<_>>()?;
        let sum = newton::diagram_sum(&diagrams, k)?;
        let hull = newton::diagram_hull(&sum)?;
        hull.facets
            .iter()
            .map(|f| f.weights.clone())
            .filter(|w| w.iter().all(|&x| x >= 0))
            .filter(|w| {
                let zeros: Vec<usize> =
                    w.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i).collect();
                patterns.contains(&zeros)
            })
            .collect()
    };
    candidates.sort();
    candidates.dedup();
    let mut res = local::star_from_candidates(
        &first.vertices,
        Sense::Min,
        rest,
        &candidates,
        |p, w| Ok(geometry::face(p, w, Sense::Min)?),
    )?;
    res.entries.retain(|e| e.mixed_volume != 0);
    Ok(res)
}

fn finite_total(star: &StarResult) -> i64 {
    match star.total {
        Mult::Finite(v) => v,
        Mult::Infinite => unreachable!("star sums over non-empty first arguments are finite"),
    }
}

/// One subset term of the extended root-count bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BkkTerm {
    pub subset: Vec<usize>,
    /// Star sum at infinity of the restricted polytopes.
    pub infinity: StarResult,
    /// Star sum centered at the excluded-or-excess family, subtracted.
    pub centered: StarResult,
    /// `infinity - centered`.
    pub star_net: i64,
    /// Root count at the origin of the projected generic diagrams of the
    /// polytopes not supported on the subset.
    pub cofactor: Mult,
    pub product: Mult,
}

/// The extended root-count bound with its per-subset ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BkkBound {
    pub total: Mult,
    pub terms: Vec<BkkTerm>,
    pub classification: SubspaceClassification,
}

/// Number of isolated roots (counted with multiplicity) of a generic system
/// with the given Newton polytopes on the complement of the closed excluded
/// subspaces: the sum, over subsets cut out exactly and supported by the
/// first polytope, of a recursive origin factor times the net star sum of
/// the restrictions.
pub fn bkk_extended(ps: &[LatticePolytope], s: &SubsetFamily) -> Result<BkkBound> {
    let n = validate_polytopes(ps)?;
    let classification = classify_subspaces(ps, s)?;
    let mut removed = s.closure();
    removed = removed.union_with(&classification.excess_family());
    let mut total = Mult::Finite(0);
    let mut terms = Vec::new();
    for report in classification.reports.iter().filter(|r| r.in_index_family) {
        let coords = &report.subset;
        let k = coords.len();
        let first = restrict_polytope(&ps[0], coords)?;
        let rest: Vec<LatticePolytope> = report
            .supported
            .iter()
            .filter(|&&j| j != 0)
            .map(|&j| restrict_polytope(&ps[j], coords))
            .collect::<Result<_>>()?;
        let infinity = mult_star_infinity(&first, &rest)?;
        let centered = mult_star_centered(&first, &rest, &removed.restrict_to(coords))?;
        let star_net = finite_total(&infinity) - finite_total(&centered);
        let cofactor = if k == n {
            Mult::Finite(1)
        } else {
            let complement: Vec<usize> = (0..n).filter(|i| !coords.contains(i)).collect();
            let projected: Vec<NewtonDiagram> = (0..n)
                .filter(|j| !report.supported.contains(j))
                .map(|j| {
                    NewtonDiagram::from_points(n, &ps[j].vertices)
                        .map(|d| d.project(&complement))
                })
                .collect::<newton::Result<_>>()?;
            local::origin_multiplicity(&projected)?.total
        };
        let product = cofactor.mul(Mult::Finite(star_net));
        total = total.add(product);
        terms.push(BkkTerm {
            subset: coords.clone(),
            infinity,
            centered,
            star_net,
            cofactor,
            product,
        });
    }
    Ok(BkkBound { total, terms, classification })
}

/// Which clause of the attainment criterion a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionTag {
    /// A non-exotrivial stratum: the restrictions must be non-degenerate at
    /// infinity and at the excluded-or-exotrivial family.
    Regular,
    /// An exotrivial stratum with matching support count: the restrictions
    /// must be non-degenerate at the complementary family.
    Exceptional,
}

impl ConditionTag {
    pub fn label(&self) -> &'static str {
        match self {
            ConditionTag::Regular => "b",
            ConditionTag::Exceptional => "c",
        }
    }
}

/// A degeneracy certificate: on the subset, the extremal forms of the
/// restricted system at the weight share a zero with all coordinates
/// non-zero. The weight is expressed in the coordinates of the subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineWitness {
    pub subset: Vec<usize>,
    pub weight: LatticeVector,
    pub kind: WitnessKind,
    pub condition: ConditionTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AffineCheckOutcome {
    NonDegenerate,
    Degenerate(AffineWitness),
}

impl AffineCheckOutcome {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, AffineCheckOutcome::NonDegenerate)
    }
}

/// Scan the normal-fan cones of the summed restricted polytopes for a
/// weight with at least one positive entry whose leading forms share a
/// toric zero. One representative in the relative interior of each cone
/// suffices: the leading data is constant there.
fn find_infinity_witness(
    restricted: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<Option<LatticeVector>> {
    let k = restricted[0].n;
    let polytopes: Vec<LatticePolytope> = restricted
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| Ok(geometry::convex_hull(&f.support())?))
        .collect::<Result<_>>()?;
    if polytopes.is_empty() {
        // Identically zero restrictions vanish everywhere.
        return Ok(Some(vec![1; k]));
    }
    let q = geometry::minkowski_sum_all(&polytopes, k)?;
    let normals = geometry::facet_normals(&q)?;
    let outer: Vec<LatticeVector> = normals
        .facets
        .iter()
        .map(|f| f.weights.iter().map(|&x| -x).collect())
        .collect();
    let mut ortho_dirs: Vec<LatticeVector> = Vec::new();
    for o in &normals.orthogonal {
        ortho_dirs.push(o.weights.clone());
        ortho_dirs.push(o.weights.iter().map(|&x| -x).collect());
    }
    // The improper face (the whole sum) has a non-trivial cone only for
    // lower-dimensional sums; every weight in it leaves all polynomials
    // whole, so one admissible representative suffices.
    if let Some(g) = ortho_dirs.iter().find(|g| has_positive_entry(g)) {
        if polysys::torus_has_common_zero(restricted, budget)? {
            return Ok(Some(linalg::primitive(g)));
        }
    }
    for face in geometry::proper_faces(&q, &normals.facets)? {
        let mut center = vec![0i64; k];
        for &fi in &face.facet_indices {
            for (c, &x) in center.iter_mut().zip(&outer[fi]) {
                *c += x;
            }
        }
        let w = if has_positive_entry(&center) {
            center
        } else {
            let gens = face
                .facet_indices
                .iter()
                .map(|&fi| &outer[fi])
                .chain(ortho_dirs.iter());
            let Some(g) = gens.into_iter().find(|g| has_positive_entry(g)) else {
                continue;
            };
            // Push far enough along the admissible generator to force a
            // positive entry while staying in the cone's relative interior.
            let m: i64 = 1 + center.iter().map(|x| x.abs()).sum::<i64>();
            center.iter().zip(g).map(|(&c, &x)| c + m * x).collect()
        };
        let w = linalg::primitive(&w);
        let forms: Vec<SparsePolynomial> =
            restricted.iter().map(|f| f.extremal_form(&w, Sense::Max)).collect();
        if polysys::torus_has_common_zero(&forms, budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Scan, for each family member `S`, the bounded faces of the diagrams
/// projected away from `S`, lifting each representative weight by zeros on
/// `S`; report a weight whose initial forms share a toric zero.
fn find_centered_witness(
    restricted: &[SparsePolynomial],
    family: &[Vec<usize>],
    budget: &mut Budget,
) -> Result<Option<LatticeVector>> {
    let k = restricted[0].n;
    let mut patterns: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in family {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        patterns.insert(s);
    }
    for s in patterns {
        if s.len() == k {
            // Zero weight: the restrictions themselves.
            if polysys::torus_has_common_zero(restricted, budget)? {
                return Ok(Some(vec![0; k]));
            }
            continue;
        }
        let keep: Vec<usize> = (0..k).filter(|i| !s.contains(i)).collect();
        let diagrams: Vec<NewtonDiagram> = restricted
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| {
                let pts: Vec<LatticeVector> = f
                    .support()
                    .iter()
                    .map(|e| keep.iter().map(|&i| e[i]).collect())
                    .collect();
                NewtonDiagram::from_points(keep.len(), &pts)
            })
            .collect::<newton::Result<_>>()?;
        if diagrams.is_empty() {
            let mut w = vec![0i64; k];
            for &i in &keep {
                w[i] = 1;
            }
            return Ok(Some(w));
        }
        let sum = newton::diagram_sum(&diagrams, keep.len())?;
        let hull = newton::diagram_hull(&sum)?;
        for wk in hull.bounded_face_weights()? {
            let mut w = vec![0i64; k];
            for (&i, &x) in keep.iter().zip(&wk) {
                w[i] = x;
            }
            let forms: Vec<SparsePolynomial> =
                restricted.iter().map(|f| f.extremal_form(&w, Sense::Min)).collect();
            if polysys::torus_has_common_zero(&forms, budget)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Decide whether a concrete system attains the extended root-count bound
/// of its prescribed polytopes: on every non-exotrivial stratum the
/// restrictions must be non-degenerate at infinity and at the
/// excluded-or-exotrivial family, and on every exotrivial stratum with
/// matching support count they must be non-degenerate at the complementary
/// family. The first violated (subset, weight) pair is reported.
pub fn check_p_nondegenerate(
    fs: &[SparsePolynomial],
    ps: &[LatticePolytope],
    s: &SubsetFamily,
    budget: &mut Budget,
) -> Result<AffineCheckOutcome> {
    let n = validate_polytopes(ps)?;
    if fs.len() != n {
        return Err(AffineError::Arity { expected: n, got: fs.len() });
    }
    for (j, f) in fs.iter().enumerate() {
        if f.n != n {
            return Err(AffineError::Arity { expected: n, got: f.n });
        }
        let np = geometry::convex_hull(&f.support())?;
        let mut got = np.vertices.clone();
        let mut want = ps[j].vertices.clone();
        got.sort();
        want.sort();
        if got != want {
            return Err(AffineError::NotAdmissible { index: j });
        }
    }
    let classification = classify_subspaces(ps, s)?;
    let sbar_or_t = s.closure().union_with(&classification.t_family());
    let t_prime = SubsetFamily::new(n, &classification.t_prime_family())?;
    for report in classification.reports.iter().filter(|r| r.in_n_family) {
        let coords = &report.subset;
        let restricted: Vec<SparsePolynomial> =
            fs.iter().map(|f| f.restrict(coords)).collect();
        if let Some(w) = find_infinity_witness(&restricted, budget)? {
            return Ok(AffineCheckOutcome::Degenerate(AffineWitness {
                subset: coords.clone(),
                weight: w,
                kind: WitnessKind::Infinity,
                condition: ConditionTag::Regular,
            }));
        }
        let family = sbar_or_t.restrict_to(coords);
        if let Some(w) = find_centered_witness(&restricted, &family, budget)? {
            return Ok(AffineCheckOutcome::Degenerate(AffineWitness {
                subset: coords.clone(),
                weight: w,
                kind: WitnessKind::Centered,
                condition: ConditionTag::Regular,
            }));
        }
    }
    for report in classification.reports.iter().filter(|r| r.in_t_star) {
        let coords = &report.subset;
        let restricted: Vec<SparsePolynomial> =
            fs.iter().map(|f| f.restrict(coords)).collect();
        let family = t_prime.restrict_to(coords);
        if let Some(w) = find_centered_witness(&restricted, &family, budget)? {
            return Ok(AffineCheckOutcome::Degenerate(AffineWitness {
                subset: coords.clone(),
                weight: w,
                kind: WitnessKind::Centered,
                condition: ConditionTag::Exceptional,
            }));
        }
    }
    Ok(AffineCheckOutcome::NonDegenerate)
}
