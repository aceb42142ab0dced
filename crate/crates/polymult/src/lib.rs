//! Exact invariants of polynomial systems from their Newton polyhedra.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: integral convex geometry — hulls, Minkowski sums, faces,
//!   facet normals, lattice-normalized (mixed) volumes, sublattice bases.
//! - [`newton`]: Newton diagram calculus — supports, diagrams, weight
//!   vectors, initial/leading forms, and enumeration of the finitely many
//!   weights that can contribute to the multiplicity formulas.
//! - [`polysys`]: exact polynomial algebra over Q and F_p — Buchberger
//!   Groebner bases, Mora local standard bases, torus-emptiness tests,
//!   generic coefficient sampling. Serves as the independent oracle.
//! - [`local`]: everything at the origin — finiteness, the generic
//!   intersection-multiplicity formula, Milnor numbers, the Kushnirenko
//!   solver, and non-degeneracy checkers.
//! - [`affine`]: root counting away from the origin — coordinate-subspace
//!   classification and the extended root-count bound on complements of
//!   coordinate-subspace unions.
//! - [`cli`]: command-line dispatch, file formats, reports.

pub mod affine;
pub mod cli;
pub mod geometry;
mod linalg;
pub mod local;
pub mod newton;
pub mod polysys;
