//! Property-based invariants of the geometric and combinatorial layers.

use polymult::affine::{self, SubsetFamily};
use polymult::geometry::{self, LatticePolytope};
use polymult::local::{self, Mult};
use polymult::newton::NewtonDiagram;
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=3i64, n)
}

/// A non-empty support avoiding the origin (so diagrams never swallow the
/// whole orthant).
fn support(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(point(n), 1..=4)
        .prop_filter("origin-free", |pts| pts.iter().all(|p| p.iter().any(|&x| x > 0)))
}

fn polytope(n: usize) -> impl Strategy<Value = LatticePolytope> {
    support(n).prop_map(|pts| geometry::convex_hull(&pts).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_volume_paths_agree(ps in prop::collection::vec(polytope(3), 3)) {
        let a = geometry::mixed_volume(&ps).unwrap();
        let b = geometry::mixed_volume_recursive(&ps).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mixed_volume_symmetric(p in polytope(2), q in polytope(2)) {
        let a = geometry::mixed_volume(&[p.clone(), q.clone()]).unwrap();
        let b = geometry::mixed_volume(&[q, p]).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mixed_volume_multilinear(p in polytope(2), p2 in polytope(2), q in polytope(2)) {
        let sum = geometry::minkowski_sum(&p, &p2).unwrap();
        let lhs = geometry::mixed_volume(&[sum, q.clone()]).unwrap();
        let rhs = geometry::mixed_volume(&[p, q.clone()]).unwrap()
            + geometry::mixed_volume(&[p2, q]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_volume_translation_invariant(
        p in polytope(2),
        q in polytope(2),
        t in prop::collection::vec(0..=2i64, 2),
    ) {
        let shifted = geometry::convex_hull(
            &p.vertices
                .iter()
                .map(|v| v.iter().zip(&t).map(|(&x, &d)| x + d).collect())
                .collect::<Vec<Vec<i64>>>(),
        )
        .unwrap();
        let a = geometry::mixed_volume(&[p, q.clone()]).unwrap();
        let b = geometry::mixed_volume(&[shifted, q]).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn origin_multiplicity_paths_agree(sups in prop::collection::vec(support(3), 3)) {
        let diagrams: Vec<NewtonDiagram> = sups
            .iter()
            .map(|s| NewtonDiagram::from_points(3, s).unwrap())
            .collect();
        let a = local::origin_multiplicity(&diagrams).unwrap().total;
        let b = local::origin_multiplicity_alt(&diagrams).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Excluding every proper coordinate subspace leaves exactly the torus,
    /// where the bound is the classical mixed volume.
    #[test]
    fn torus_only_bound_is_mixed_volume(ps in prop::collection::vec(polytope(3), 3)) {
        let members: Vec<Vec<usize>> = local::nonempty_subsets(3)
            .into_iter()
            .filter(|c| c.len() < 3)
            .chain(std::iter::once(vec![]))
            .collect();
        let s = SubsetFamily::new(3, &members).unwrap();
        let bound = affine::bkk_extended(&ps, &s).unwrap();
        let mv = geometry::mixed_volume(&ps).unwrap();
        prop_assert_eq!(bound.total, Mult::Finite(mv));
    }

    /// Excluding more subspaces can only lower the bound.
    #[test]
    fn bound_monotone_in_excluded_family(
        ps in prop::collection::vec(polytope(2), 2),
        extra in prop::collection::vec(prop::collection::vec(0..2usize, 0..=1), 0..=2),
    ) {
        let none = affine::bkk_extended(&ps, &SubsetFamily::empty(2)).unwrap();
        let s = SubsetFamily::new(2, &extra).unwrap();
        let some = affine::bkk_extended(&ps, &s).unwrap();
        let (Mult::Finite(a), Mult::Finite(b)) = (none.total, some.total) else {
            return Err(TestCaseError::fail("bounds must be finite"));
        };
        prop_assert!(b <= a);
    }
}
