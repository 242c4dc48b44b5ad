//! Trace on the hyperplane x_n = 0, co-extension, reflections, lifts and extension operators.

pub mod coextend;
pub mod extension;
pub mod hestenes;
pub mod lift;
pub mod trace;

pub use hestenes::{boundary_derivative_mismatch, hestenes_coeffs, hestenes_extend, HestenesCoeffs, HestenesExtension, HestenesVariant};
pub use lift::{build_lift_symbol, comparability_band, lift_apply, LiftSymbol};
pub use trace::{trace, trace_quark, HalfSpaceFunction};
pub use coextend::{coextend, CoExtension};
pub use extension::{ext_n, halfspace_norm_upper, lift_sigma, max_analysis_band, utrace, ExtParams, ExtPath, ExtResult, HalfspaceNormReport, UtraceReport};
