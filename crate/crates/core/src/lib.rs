//! Exact-arithmetic workbench for real simple symplectic triple systems.
//!
//! The crate builds explicit rational models of all fifteen families of real
//! simple symplectic triple systems ([`models`]), verifies the defining axioms
//! ([`sts`]), constructs the standard enveloping Lie algebra and its Killing
//! form ([`envelope`]), and exports structure constants as JSON ([`export`]).
//! [`analysis::analyze`] runs the full chain of checks on one model.
//!
//! ```
//! use sts_core::{analyze, build, CheckMode, ModelLabel};
//!
//! let model = build(ModelLabel::G2).unwrap();
//! let report = analyze(&model, CheckMode::Exhaustive);
//! assert!(report.passed());
//! assert_eq!(report.structure.unwrap().computed.envelope_signature, 2);
//! ```

pub mod analysis;
pub mod clifford;
pub mod envelope;
pub mod export;
pub mod exterior;
pub mod linalg;
pub mod models;
pub mod scalar;
pub mod sts;

pub use analysis::{analyze, default_mode, Analysis};
pub use envelope::{build_envelope, classification_row, killing, ClassificationRow, Envelope, LieAlgebra};
pub use export::{ExportError, ExportRecord};
pub use models::{build, catalog, representatives, Model};
pub use scalar::Rational;
pub use sts::{
    calibrate_alpha, check_axioms, check_z4_grading, inder_span, CheckMode, ModelLabel, StsError, TripleSystem,
    Z4Grading,
};
