//! Dyadic coefficient spaces, atoms, the φ-transform and quarkonial decompositions.

pub mod atoms;
pub mod kappa;
pub mod quarks;
pub mod sequence;

pub use kappa::{build_kappa, lattice_samples, phi_transform_synthesize, KappaKernel};
pub use sequence::{seq_norm, seq_norm_b, seq_norm_f, seq_norm_with_sets, CoefficientArray, DyadicCube, DyadicLevel};
pub use quarks::{coefficient_bound, mu, DEFAULT_BETA_MAX, DEFAULT_RHO, quark_analyze, quark_eval, quark_round_trip, max_quark_level, quark_norm, quark_synthesize, QuarkBasis, QuarkCoefficients, QuarkNormReport};
pub use atoms::{quark_atom, validate_atom, AtomReport};
