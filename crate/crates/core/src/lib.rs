//! Quantum discord of two-qubit X-states.
//!
//! The minimisation of the measured conditional entropy over projective
//! measurements on qubit A is replaced by a sign test on two closed-form
//! criteria (`C0` at θ = 0, `C+` at θ = π/2). Only a small fraction of states
//! need a one-dimensional root solve for an interior angle θ_e. A brute-force
//! grid minimiser ([`oracle`]) is kept alongside as an independent check.
//!
//! Everything numeric is generic over [`Real`]; the `*64` / `*32` aliases at
//! the crate root cover the common cases.

pub mod classifier;
pub mod conditional;
pub mod discord;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod real;
pub mod scan;
pub mod state;
pub mod symmetric;

pub use classifier::{
    classify, compute_c0, compute_cplus, min_conditional_entropy, solve_theta_e, ClassifierReport,
    MeasurementClass, ResolvedAxis, DEFAULT_EPSILON_ZERO, DEFAULT_THETA_TOL,
};
pub use conditional::{
    c_phi, c_theta, closed_form_f0, closed_form_fx, conditional_f, f_terms, outcome_probabilities,
    FTerms, MeasurementAngles,
};
pub use discord::{discord_ab, quantum_discord, quantum_discord_with, DiscordResult};
pub use error::{Error, Result};
pub use oracle::{grid_minimize, oracle_discord, slice_minimize, OracleConfig, OracleMinimum};
pub use real::Real;
pub use scan::{
    region_map, sweep_z, trace_boundary, write_csv, xxz_region_map, BoundaryCriterion,
    BoundaryPoint, ClassCode, Diagonals, LineSegment, RegionMapSpec, ScanRecord, SweepSpec,
};
pub use state::{make_state, DerivedConstants, Spectrum, StateJson, XState};
pub use symmetric::{xxz_discord, xxz_min_f, xxz_region, XxzBranch, XxzRegion, XxzState};

pub type XState64 = XState<f64>;
pub type XState32 = XState<f32>;
pub type DerivedConstants64 = DerivedConstants<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type MeasurementAngles64 = MeasurementAngles<f64>;
pub type FTerms64 = FTerms<f64>;
pub type MeasurementClass64 = MeasurementClass<f64>;
pub type ClassifierReport64 = ClassifierReport<f64>;
pub type DiscordResult64 = DiscordResult<f64>;
pub type DiscordResult32 = DiscordResult<f32>;
pub type OracleConfig64 = OracleConfig<f64>;
pub type XxzState64 = XxzState<f64>;
pub type ScanRecord64 = ScanRecord<f64>;
