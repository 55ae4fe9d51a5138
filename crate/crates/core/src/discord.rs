use serde::Serialize;

use crate::classifier::{classify, MeasurementClass, DEFAULT_EPSILON_ZERO};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::state::XState;

/// Round-off below this magnitude is clamped to zero; anything more negative
/// is reported as an internal inconsistency.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordResult<T> {
    /// `D(B|A)` in bits.
    pub discord: T,
    /// `J(B|A) = S(ρ_B) - min F`.
    pub classical_correlation: T,
    pub mutual_information: T,
    pub f_min: T,
    pub class: MeasurementClass<T>,
    pub theta_opt: T,
    pub phi_opt: T,
    pub used_fallback: bool,
}

fn clamp_non_negative<T: Real>(x: T, what: &str) -> Result<T> {
    let tol = T::tolerance(NEGATIVE_CLAMP, 64.0);
    if x < -tol {
        Err(Error::InternalConsistency(format!(
            "{what} = {x} is negative"
        )))
    } else {
        Ok(x.max(T::zero()))
    }
}

/// Assembles `D = min F - S(ρ_AB) + S(ρ_A)` from a known minimum.
pub(crate) fn assemble<T: Real>(
    s: &XState<T>,
    f_min: T,
    class: MeasurementClass<T>,
    theta_opt: T,
    used_fallback: bool,
) -> Result<DiscordResult<T>> {
    let mutual = clamp_non_negative(s.mutual_information(), "mutual information")?;
    let discord = clamp_non_negative(f_min - s.entropy_joint() + s.entropy_a(), "discord")?;
    let classical = clamp_non_negative(s.entropy_b() - f_min, "classical correlation")?;
    Ok(DiscordResult {
        discord,
        classical_correlation: classical,
        mutual_information: mutual,
        f_min,
        class,
        theta_opt,
        phi_opt: T::zero(),
        used_fallback,
    })
}

/// Quantum discord `D(B|A)` with the measurement on qubit A.
pub fn quantum_discord<T: Real>(s: &XState<T>) -> Result<DiscordResult<T>> {
    quantum_discord_with(s, T::lit(DEFAULT_EPSILON_ZERO))
}

/// [`quantum_discord`] with an explicit zero threshold for the criteria.
pub fn quantum_discord_with<T: Real>(s: &XState<T>, epsilon_zero: T) -> Result<DiscordResult<T>> {
    let r = classify(s, epsilon_zero)?;
    assemble(s, r.f_min, r.class, r.theta_opt, r.used_fallback)
}

/// Quantum discord `D(A|B)` with the measurement on qubit B.
pub fn discord_ab<T: Real>(s: &XState<T>) -> Result<DiscordResult<T>> {
    quantum_discord(&s.swap_subsystems())
}
