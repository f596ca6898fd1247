//! Transition matrices, certified eigenvalue bounds, Levy cycles and the
//! case analysis for cubic maps with two fixed critical points.

pub mod classify;
pub mod eigen;
pub mod graph;
pub mod levy;
pub mod matrix;

pub use classify::{
    case_analysis, certify_cubic_obstruction, certify_obstruction, check_cubic_two_fixed, classify_obstruction_case,
    structural_checks, structural_properties, CaseReport, CertifiedObstruction, CriticalFace, MainTheoremVerdict,
    ObstructionCase, StructuralReport,
    verify_main_theorem,
};
pub use eigen::{default_tolerance, leading_eigenvalue_bounds, BlockCertificate, Decision, EigenvalueBounds};
pub use levy::{classified_levy_cycles, classify_levy, find_levy_cycles, LevyClass, LevyCycle, LevyReport};
pub use matrix::{ratio, transition_matrix, transition_matrix_brute_force, TransitionMatrix};

/// Strong connectivity of the support digraph. The 1×1 zero matrix is
/// reducible since no power of it has a positive entry.
pub fn is_irreducible(m: &TransitionMatrix) -> bool {
    graph::is_strongly_connected(&m.support())
}
