//! Acceptance gate: one test per release criterion, each emitting a single
//! pass line. Values are exact; where a criterion carries a runtime budget
//! the test asserts it.

use std::time::Instant;

use polymult::affine::{self, AffineCheckOutcome, ConditionTag, SubsetFamily};
use polymult::geometry::{self, LatticePolytope, Sense};
use polymult::local::{self, Finiteness, Mult, WitnessKind};
use polymult::newton::NewtonDiagram;
use polymult::polysys::{self, Budget, Coef, Field, LocalMult, SparsePolynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hull(pts: &[&[i64]]) -> LatticePolytope {
    geometry::convex_hull(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn fp(pairs: &[(&[i64], i64)]) -> SparsePolynomial {
    let n = pairs[0].0.len();
    let field = Field::Fp(32003);
    SparsePolynomial::from_terms(
        n,
        field,
        pairs
            .iter()
            .map(|(e, c)| {
                (
                    e.iter().map(|&x| x as u32).collect::<Vec<u32>>(),
                    field.from_i64(*c),
                )
            })
            .collect(),
    )
    .unwrap()
}

/// The linear+two-cubics system used throughout: supports of a linear form
/// and two convenient cubics.
fn system_supports() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![3, 0, 0], vec![1, 0, 2], vec![0, 3, 0], vec![0, 1, 2]],
        vec![vec![2, 0, 0], vec![1, 0, 2], vec![0, 2, 0], vec![0, 1, 2]],
    ]
}

fn system_diagrams() -> Vec<NewtonDiagram> {
    system_supports()
        .iter()
        .map(|s| NewtonDiagram::from_points(3, s))
        .collect::<Result<_, _>>()
        .unwrap()
}

fn system_polytopes() -> Vec<LatticePolytope> {
    system_supports()
        .iter()
        .map(|s| geometry::convex_hull(s).unwrap())
        .collect()
}

#[test]
fn criterion_01_origin_multiplicity_regression() {
    let start = Instant::now();
    let m = local::origin_multiplicity(&system_diagrams()).unwrap();
    assert_eq!(m.total, Mult::Finite(6));
    // Ledger: the axis subset {2} contributes 1*1, the full subset
    // contributes (1,1,1) -> 1*4 and (2,2,1) -> 1*1.
    assert_eq!(m.terms.len(), 2);
    let axis = m.terms.iter().find(|t| t.subset == vec![2]).unwrap();
    let axis_entries: Vec<(Vec<i64>, i64, i64)> = axis
        .star
        .entries
        .iter()
        .map(|e| (e.weight.clone(), e.value, e.mixed_volume))
        .collect();
    assert_eq!(axis_entries, vec![(vec![1], 1, 1)]);
    assert_eq!(axis.product, Mult::Finite(1));
    let full = m.terms.iter().find(|t| t.subset == vec![0, 1, 2]).unwrap();
    let full_entries: Vec<(Vec<i64>, i64, i64)> = full
        .star
        .entries
        .iter()
        .map(|e| (e.weight.clone(), e.value, e.mixed_volume))
        .collect();
    assert_eq!(full_entries, vec![(vec![1, 1, 1], 1, 4), (vec![2, 2, 1], 1, 1)]);
    assert_eq!(full.product, Mult::Finite(5));
    assert!(start.elapsed().as_secs() < 1);
    println!("criterion 1 (origin multiplicity = 6 with ledger): PASS");
}

#[test]
fn criterion_02_extended_bound_regression() {
    let start = Instant::now();
    let bound = affine::bkk_extended(&system_polytopes(), &SubsetFamily::empty(3)).unwrap();
    assert_eq!(bound.total, Mult::Finite(9));
    let full = bound.terms.iter().find(|t| t.subset == vec![0, 1, 2]).unwrap();
    let entries: Vec<(Vec<i64>, i64, i64)> = full
        .infinity
        .entries
        .iter()
        .map(|e| (e.weight.clone(), e.value, e.mixed_volume))
        .collect();
    // Ledger: (1,1,1) -> 1*2, (2,2,1) -> 2*3, plus the axis subset's 1.
    assert_eq!(entries, vec![(vec![1, 1, 1], 1, 2), (vec![2, 2, 1], 2, 3)]);
    let axis = bound.terms.iter().find(|t| t.subset == vec![2]).unwrap();
    assert_eq!(axis.product, Mult::Finite(1));
    assert!(start.elapsed().as_secs() < 1);
    println!("criterion 2 (extended bound = 9 with ledger): PASS");
}

#[test]
fn criterion_03_tetrahedron_volume() {
    let t = hull(&[&[0, 0, 0], &[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    assert_eq!(geometry::lattice_volume(&t).unwrap(), 2);
    println!("criterion 3 (tetrahedron lattice volume = 2): PASS");
}

#[test]
fn criterion_04_bound_below_hulled_mixed_volume() {
    let start = Instant::now();
    let hulled = |p: &LatticePolytope| {
        let mut pts = p.vertices.clone();
        pts.push(vec![0; p.ambient_dim]);
        geometry::convex_hull(&pts).unwrap()
    };
    for k in 1..=3i64 {
        // Two parallel segments and a degree-k slice: bound 0 vs hulled
        // mixed volume k.
        let seg = hull(&[&[1, 0, 0], &[0, 1, 0]]);
        let slice = hull(&[&[1, 0, k], &[0, 0, 0]]);
        let ps = vec![seg.clone(), seg, slice.clone()];
        let b = affine::bkk_extended(&ps, &SubsetFamily::empty(3)).unwrap();
        assert_eq!(b.total, Mult::Finite(0), "k = {k}");
        let hs: Vec<LatticePolytope> = ps.iter().map(&hulled).collect();
        assert_eq!(geometry::mixed_volume(&hs).unwrap(), k, "k = {k}");
        // With the segments widened to triangles: bound k vs 2k.
        let tri = hull(&[&[1, 0, 0], &[0, 1, 0], &[2, 0, 0]]);
        let ps = vec![tri.clone(), tri, slice];
        let b = affine::bkk_extended(&ps, &SubsetFamily::empty(3)).unwrap();
        assert_eq!(b.total, Mult::Finite(k), "k = {k}");
        let hs: Vec<LatticePolytope> = ps.iter().map(&hulled).collect();
        assert_eq!(geometry::mixed_volume(&hs).unwrap(), 2 * k, "k = {k}");
    }
    assert!(start.elapsed().as_secs() < 5);
    println!("criterion 4 (bound 0 vs k and k vs 2k for k = 1..3): PASS");
}

#[test]
fn criterion_05_trichotomy_solver() {
    // x1 + (x2+x3)^3: one partial is a unit, so the minimal Milnor number
    // is finite; its self-consistent value is 0 (the Jacobian ideal of any
    // series with this support is the unit ideal).
    let sup: Vec<Vec<i64>> = vec![
        vec![1, 0, 0],
        vec![0, 3, 0],
        vec![0, 2, 1],
        vec![0, 1, 2],
        vec![0, 0, 3],
    ];
    let m = local::kushnirenko_solve(&sup, 3, 0).unwrap();
    assert_ne!(m.finiteness, Finiteness::Infinite);
    assert_eq!(m.total, Mult::Finite(0));
    // A single-monomial support never has an isolated critical point.
    let m = local::kushnirenko_solve(&[vec![3, 3, 3]], 3, 0).unwrap();
    assert_eq!(m.finiteness, Finiteness::Infinite);
    assert_eq!(m.total, Mult::Infinite);
    println!("criterion 5 (trichotomy: finite/0 and infinite cases): PASS");
}

fn tetra_polytopes() -> Vec<LatticePolytope> {
    let t = hull(&[&[0, 0, 0], &[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    let shifted = hull(&[&[0, 0, 1], &[1, 1, 1], &[0, 1, 2], &[1, 0, 2]]);
    vec![t.clone(), t, shifted]
}

fn planar_extension_polytopes() -> Vec<LatticePolytope> {
    let simplex = hull(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    vec![
        simplex.clone(),
        simplex,
        hull(&[&[1, 0, 1, 0], &[0, 1, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 1]]),
        hull(&[&[2, 0, 1, 0], &[0, 1, 1, 0], &[0, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 0, 1]]),
    ]
}

#[test]
fn criterion_06_classification_regressions() {
    // Tetrahedron system: the exotrivial family is exactly {{0,1}}.
    let cls = affine::classify_subspaces(&tetra_polytopes(), &SubsetFamily::empty(3)).unwrap();
    assert_eq!(cls.t_family(), vec![vec![0, 1]]);
    // Planar extension system: the exotrivial family is exactly the full
    // subset.
    let cls =
        affine::classify_subspaces(&planar_extension_polytopes(), &SubsetFamily::empty(4))
            .unwrap();
    assert_eq!(cls.t_family(), vec![vec![0, 1, 2, 3]]);
    // Linear+cubics system: no under-supported subsets, and the bound is
    // indexed by {2} and the full subset.
    let cls = affine::classify_subspaces(&system_polytopes(), &SubsetFamily::empty(3)).unwrap();
    assert!(cls.excess_family().is_empty());
    assert_eq!(cls.index_family(), vec![vec![2], vec![0, 1, 2]]);
    println!("criterion 6 (classification families, exact set equality): PASS");
}

#[test]
fn criterion_07_nondegeneracy_witnesses() {
    let start = Instant::now();
    // Tetrahedron system with shared leading coefficients: degenerate at
    // infinity on the full subset; the witness is validated by an actual
    // common toric zero of the leading forms, not by weight equality.
    let g = |a: i64, b: i64, c: i64, d: i64| {
        fp(&[(&[0, 0, 0], a), (&[1, 1, 0], b), (&[0, 1, 1], c), (&[1, 0, 1], d)])
    };
    let z = fp(&[(&[0, 0, 1], 1)]);
    let fs = vec![g(1, 2, 3, 5), g(1, 2, 13, 17), g(1, 2, 29, 31).mul(&z)];
    let mut budget = Budget::new(4_000_000);
    let out = affine::check_p_nondegenerate(
        &fs,
        &tetra_polytopes(),
        &SubsetFamily::empty(3),
        &mut budget,
    )
    .unwrap();
    let AffineCheckOutcome::Degenerate(w) = out else {
        panic!("expected degeneracy");
    };
    assert_eq!(w.subset, vec![0, 1, 2]);
    assert_eq!(w.kind, WitnessKind::Infinity);
    let forms: Vec<SparsePolynomial> =
        fs.iter().map(|f| f.extremal_form(&w.weight, Sense::Max)).collect();
    assert!(polysys::torus_has_common_zero(&forms, &mut budget).unwrap());
    assert!(start.elapsed().as_secs() < 30);

    // Planar extension system whose slice coefficients vanish at the toric
    // root of the planar pair: degenerate with a centered witness whose
    // weight vanishes exactly on {0,1}.
    let start = Instant::now();
    let f1 = fp(&[(&[0, 0, 0, 0], 1), (&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], 1)]);
    let f2 = fp(&[(&[0, 0, 0, 0], 1), (&[1, 0, 0, 0], 2), (&[0, 1, 0, 0], 3)]);
    let f3 = fp(&[(&[1, 0, 1, 0], 1), (&[0, 1, 1, 0], 2), (&[0, 0, 0, 1], 1), (&[1, 0, 0, 1], 1)]);
    let f4 = fp(&[
        (&[2, 0, 1, 0], 1),
        (&[0, 1, 1, 0], -4),
        (&[0, 0, 0, 1], 1),
        (&[0, 1, 0, 1], 1),
    ]);
    let fs = vec![f1, f2, f3, f4];
    let ps: Vec<LatticePolytope> = fs
        .iter()
        .map(|f| geometry::convex_hull(&f.support()).unwrap())
        .collect();
    let mut budget = Budget::new(8_000_000);
    let out =
        affine::check_p_nondegenerate(&fs, &ps, &SubsetFamily::empty(4), &mut budget).unwrap();
    let AffineCheckOutcome::Degenerate(w) = out else {
        panic!("expected degeneracy");
    };
    assert_eq!(w.kind, WitnessKind::Centered);
    assert_eq!(w.condition, ConditionTag::Exceptional);
    let zeros: Vec<usize> = w
        .weight
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 0)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(zeros, vec![0, 1]);
    let forms: Vec<SparsePolynomial> =
        fs.iter().map(|f| f.extremal_form(&w.weight, Sense::Min)).collect();
    assert!(polysys::torus_has_common_zero(&forms, &mut budget).unwrap());
    assert!(start.elapsed().as_secs() < 30);
    println!("criterion 7 (degeneracy witnesses, validated by toric zeros): PASS");
}

/// A random support of 1..=max_pts non-zero points with coordinates in
/// 0..=max_coord.
fn random_support<R: Rng>(
    rng: &mut R,
    n: usize,
    max_pts: usize,
    max_coord: i64,
) -> Vec<Vec<i64>> {
    let count = rng.gen_range(1..=max_pts);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_coord)).collect();
        if p.iter().any(|&x| x > 0) {
            pts.push(p);
        }
    }
    pts
}

#[test]
fn criterion_08_oracle_equivalence() {
    let start = Instant::now();
    let field = Field::Fp(32003);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tested = 0usize;
    let mut attempts = 0usize;
    while tested < 20 && attempts < 500 {
        attempts += 1;
        let n = if attempts % 2 == 0 { 2 } else { 3 };
        // Keep exponents small in three variables: the local standard-basis
        // oracle's staircase grows quickly with the degree.
        let max_coord = if n == 2 { 3 } else { 2 };
        let supports: Vec<Vec<Vec<i64>>> =
            (0..n).map(|_| random_support(&mut rng, n, 6, max_coord)).collect();
        let diagrams: Vec<NewtonDiagram> = supports
            .iter()
            .map(|s| NewtonDiagram::from_points(n, s).unwrap())
            .collect();
        let m = local::origin_multiplicity(&diagrams).unwrap();
        let Mult::Finite(expected) = m.total else { continue };
        for seed in 1..=5u64 {
            let mut srng = ChaCha8Rng::seed_from_u64(seed);
            let polys =
                polysys::sample_with_supports(&supports, n, field, &mut srng).unwrap();
            let mut budget = Budget::new(400_000);
            let Ok(check) = local::check_origin_nondegenerate(&polys, &mut budget) else {
                continue; // budget blown on a hard instance: outside scope
            };
            if !check.is_nondegenerate() {
                continue;
            }
            let Ok(mora) = polysys::local_multiplicity(&polys, &mut budget) else {
                continue;
            };
            assert_eq!(
                mora,
                LocalMult::Finite(expected as u64),
                "supports {supports:?} seed {seed}"
            );
        }
        tested += 1;
    }
    assert!(tested >= 20, "only {tested} support families tested");

    // Constructed degenerate instances: the oracle length strictly exceeds
    // the generic multiplicity.
    let degenerate_2 = vec![
        fp(&[(&[1, 0], 1), (&[0, 1], 1)]),
        fp(&[(&[1, 0], 1), (&[0, 1], 1), (&[3, 0], 1)]),
    ];
    let degenerate_3 = vec![
        fp(&[(&[1, 0, 0], 1), (&[0, 1, 0], 1)]),
        fp(&[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[3, 0, 0], 1)]),
        fp(&[(&[0, 0, 1], 1)]),
    ];
    for polys in [degenerate_2, degenerate_3] {
        let n = polys.len();
        let diagrams: Vec<NewtonDiagram> = polys
            .iter()
            .map(|f| NewtonDiagram::from_points(n, &f.support()).unwrap())
            .collect();
        let Mult::Finite(generic) = local::origin_multiplicity(&diagrams).unwrap().total
        else {
            panic!("expected a finite generic multiplicity");
        };
        let mut budget = Budget::new(1_000_000);
        let LocalMult::Finite(actual) =
            polysys::local_multiplicity(&polys, &mut budget).unwrap()
        else {
            panic!("expected a finite oracle length");
        };
        assert!(actual > generic as u64, "n = {n}: {actual} vs {generic}");
    }
    assert!(start.elapsed().as_secs() < 600);
    println!("criterion 8 (oracle equivalence on random supports): PASS");
}

#[test]
fn criterion_09_internal_identities() {
    // Origin multiplicity: decomposition formula vs the alternating-sum
    // path, on 100 random systems.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0usize;
    while done < 100 {
        let n = rng.gen_range(2..=3);
        let diagrams: Vec<NewtonDiagram> = (0..n)
            .map(|_| NewtonDiagram::from_points(n, &random_support(&mut rng, n, 5, 3)).unwrap())
            .collect();
        let a = local::origin_multiplicity(&diagrams).unwrap().total;
        let b = local::origin_multiplicity_alt(&diagrams).unwrap();
        assert_eq!(a, b);
        done += 1;
    }
    // Mixed volume: inclusion–exclusion vs the support-function recursion,
    // on 50 random instances.
    let mut done = 0usize;
    while done < 50 {
        let n = rng.gen_range(2..=3);
        let ps: Vec<LatticePolytope> = (0..n)
            .map(|_| geometry::convex_hull(&random_support(&mut rng, n, 4, 3)).unwrap())
            .collect();
        let a = geometry::mixed_volume(&ps).unwrap();
        let b = geometry::mixed_volume_recursive(&ps).unwrap();
        assert_eq!(a, b);
        done += 1;
    }
    // Symmetry, multilinearity, translation invariance on 50 instances.
    let mut done = 0usize;
    while done < 50 {
        let n = 2;
        let p1 = geometry::convex_hull(&random_support(&mut rng, n, 4, 3)).unwrap();
        let p1b = geometry::convex_hull(&random_support(&mut rng, n, 4, 3)).unwrap();
        let p2 = geometry::convex_hull(&random_support(&mut rng, n, 4, 3)).unwrap();
        let mv = geometry::mixed_volume(&[p1.clone(), p2.clone()]).unwrap();
        // Symmetry.
        assert_eq!(mv, geometry::mixed_volume(&[p2.clone(), p1.clone()]).unwrap());
        // Multilinearity in the first argument.
        let sum = geometry::minkowski_sum(&p1, &p1b).unwrap();
        assert_eq!(
            geometry::mixed_volume(&[sum, p2.clone()]).unwrap(),
            mv + geometry::mixed_volume(&[p1b.clone(), p2.clone()]).unwrap()
        );
        // Translation invariance.
        let shifted = geometry::convex_hull(
            &p1.vertices
                .iter()
                .map(|v| v.iter().map(|&x| x + 2).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(mv, geometry::mixed_volume(&[shifted, p2]).unwrap());
        done += 1;
    }
    println!("criterion 9 (internal identities on random instances): PASS");
}

#[test]
fn criterion_10_torus_count_equals_mixed_volume() {
    let field = Field::Fp(32003);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // Excluding every proper coordinate subspace leaves exactly the torus.
    let torus_family = |n: usize| {
        let members: Vec<Vec<usize>> = local::nonempty_subsets(n)
            .into_iter()
            .filter(|c| c.len() < n)
            .chain(std::iter::once(vec![]))
            .collect();
        SubsetFamily::new(n, &members).unwrap()
    };
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < 10 && attempts < 300 {
        attempts += 1;
        let n = 2;
        let ps: Vec<LatticePolytope> = (0..n)
            .map(|_| geometry::convex_hull(&random_support(&mut rng, n, 4, 3)).unwrap())
            .collect();
        // Full-dimensional systems only.
        if ps.iter().any(|p| p.dim() < n as i64) {
            continue;
        }
        let supports: Vec<Vec<Vec<i64>>> = ps.iter().map(|p| p.vertices.clone()).collect();
        let polys = polysys::sample_with_supports(&supports, n, field, &mut rng).unwrap();
        let mut budget = Budget::new(2_000_000);
        // Complete non-degeneracy sampling: the sample must attain the
        // torus-only bound of its own polytopes.
        let Ok(check) = affine::check_p_nondegenerate(&polys, &ps, &torus_family(n), &mut budget)
        else {
            continue;
        };
        if !check.is_nondegenerate() {
            continue;
        }
        let Ok(Some(count)) = polysys::torus_root_count(&polys, &mut budget) else {
            continue;
        };
        let mv = geometry::mixed_volume(&ps).unwrap();
        assert_eq!(count as i64, mv, "supports {supports:?}");
        done += 1;
    }
    assert!(done >= 10, "only {done} systems verified");
    println!("criterion 10 (torus root count = mixed volume): PASS");
}
