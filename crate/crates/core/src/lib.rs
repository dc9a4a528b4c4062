//! Combinatorics of type-A cluster varieties over small finite fields.
//!
//! Seeds are triangulations of a convex polygon with a distinguished side,
//! points are labelings of its vertices by the projective line, and a point
//! lies in a cluster torus exactly when it properly colors the triangulation.

pub mod coloring;
pub mod count;
pub mod covering;
pub mod error;
pub mod hexmoves;
pub mod polygon;
pub mod quiver;

pub use coloring::{
    admits_some_triangulation, deep_points, enumerate_manifold_points, enumerate_points,
    f2_coloring, invalid_diagonals, is_proper, is_valid_diagonal, PointX, ProjLabel,
};
pub use count::{
    closed_form, dynkin_quiver, f2_count_bruteforce, f2_count_recursive, seed_count, CountMethod,
    CountResult, DynkinType,
};
pub use covering::{
    algorithm_a, algorithm_b, check_identities, counterexample_cover, counterexample_witness,
    upsilon_cover, upsilon_image, verify_covering, verify_covering_with, CounterexampleReport,
    CoverReport, IdentityReport,
};
pub use error::{Error, Result};
pub use hexmoves::{
    annotated_classes, apply_hex_move, find_hex_moves, hex_classes, move_path, verify_theorem_main,
    HexMove, MoveKind, TheoremReport,
};
pub use polygon::{crosses, enumerate_triangulations, flip, quiver_of, Diagonal, Triangulation};
pub use quiver::{IceQuiver, QuiverVertex};
