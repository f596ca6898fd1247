//! Combinatorial Thurston obstruction analysis for postcritically finite
//! branched self-covers of the sphere.

pub mod braid;
pub mod corpus;
pub mod cover;
pub mod curves;
pub mod error;
pub mod format;
pub mod fuzz;
pub mod generate;
pub mod obstruction;
pub mod perm;
pub mod realize;
pub mod report;
pub mod sphere_group;

pub use cover::{CoverPresentation, LiftComponent, LiftKind, PreimageTopology, ValidationReport};
pub use error::{Error, Result};
pub use perm::Perm;
pub use sphere_group::{CurveClass, MarkedSet, SidePartition, Word};
pub use curves::{Multicurve, Saturation, SaturationBounds};
pub use fuzz::{FuzzConfig, FuzzSummary, InstanceReport};
pub use generate::{Family, GeneratorConfig};
pub use obstruction::{
    CaseReport, Decision, EigenvalueBounds, LevyClass, LevyCycle, LevyReport, MainTheoremVerdict, ObstructionCase,
    StructuralReport, TransitionMatrix,
};
pub use report::{analyze, AnalysisReport};
