//! Spin-flip symmetric X-states, as produced by XXZ-type spin chains:
//! diagonal `(a, 1/2 - a, 1/2 - a, a)` so that `A2 = A3 = 0` and
//! `A1 = 4a - 1`.
//!
//! Only the two axis measurements are ever optimal. With `s = w + z` and
//! threshold `|2a - 1/2|`:
//!
//! * `s < |2a - 1/2|`: σz, `F = H2(2a)`
//! * `s > |2a - 1/2|`: σx, `F = H2((1 + 2s)/2)`
//!
//! and on the threshold line the two agree and `F` does not depend on the
//! measurement angle.

use serde::Serialize;

use crate::classifier::MeasurementClass;
use crate::discord::{assemble, DiscordResult};
use crate::error::{Error, Result};
use crate::real::{binary_entropy, Real};
use crate::state::{XState, POSITIVITY_TOLERANCE};

/// Tolerance on `|w + z - |2a - 1/2||` for reporting the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XxzState<T> {
    a: T,
    w: T,
    z: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum XxzBranch {
    #[serde(rename = "SZ")]
    SigmaZ,
    #[serde(rename = "SX")]
    SigmaX,
    #[serde(rename = "ANY")]
    Any,
}

impl XxzBranch {
    pub fn code(&self) -> &'static str {
        match self {
            XxzBranch::SigmaZ => "SZ",
            XxzBranch::SigmaX => "SX",
            XxzBranch::Any => "ANY",
        }
    }

    fn class<T>(self) -> MeasurementClass<T> {
        match self {
            XxzBranch::SigmaZ => MeasurementClass::SigmaZ,
            XxzBranch::SigmaX => MeasurementClass::SigmaX,
            XxzBranch::Any => MeasurementClass::Any,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct XxzRegion {
    pub branch: XxzBranch,
    pub on_boundary: bool,
}

impl<T: Real> XxzState<T> {
    pub fn new(a: T, w: T, z: T) -> Result<Self> {
        let half = T::lit(0.5);
        let tol = T::tolerance(POSITIVITY_TOLERANCE, 16.0);
        if ![a, w, z].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidState("non-finite XXZ parameter".into()));
        }
        if a < -tol || a > half + tol || w < T::zero() || z < T::zero() {
            return Err(Error::InvalidState(format!(
                "XXZ parameters out of range: a = {a}, w = {w}, z = {z}"
            )));
        }
        let a = a.max(T::zero()).min(half);
        if w > a + tol || z > half - a + tol {
            return Err(Error::InvalidState(format!(
                "positivity violated: need w <= a and z <= 1/2 - a (a = {a}, w = {w}, z = {z})"
            )));
        }
        Ok(XxzState {
            a,
            w: w.min(a),
            z: z.min(half - a),
        })
    }

    pub fn a(&self) -> T {
        self.a
    }
    pub fn w(&self) -> T {
        self.w
    }
    pub fn z(&self) -> T {
        self.z
    }

    /// `|2a - 1/2|`.
    pub fn threshold(&self) -> T {
        (T::lit(2.0) * self.a - T::lit(0.5)).abs()
    }

    pub fn to_xstate(&self) -> Result<XState<T>> {
        let b = T::lit(0.5) - self.a;
        XState::new(self.a, b, b, self.a, self.w, self.z)
    }
}

/// Closed-form minimum of `F` and the branch it comes from.
pub fn xxz_min_f<T: Real>(x: &XxzState<T>) -> (T, XxzBranch) {
    let region = xxz_region(x);
    let two = T::lit(2.0);
    let f_z = binary_entropy(two * x.a);
    let s = x.w + x.z;
    let f_x = binary_entropy((T::one() + two * s) / two);
    match region.branch {
        XxzBranch::SigmaZ => (f_z, XxzBranch::SigmaZ),
        XxzBranch::SigmaX => (f_x, XxzBranch::SigmaX),
        XxzBranch::Any => (f_z.min(f_x), XxzBranch::Any),
    }
}

pub fn xxz_region<T: Real>(x: &XxzState<T>) -> XxzRegion {
    let s = x.w + x.z;
    let thr = x.threshold();
    let on_boundary = (s - thr).abs() <= T::lit(BOUNDARY_TOLERANCE);
    let branch = if on_boundary {
        XxzBranch::Any
    } else if s < thr {
        XxzBranch::SigmaZ
    } else {
        XxzBranch::SigmaX
    };
    XxzRegion {
        branch,
        on_boundary,
    }
}

pub fn xxz_discord<T: Real>(x: &XxzState<T>) -> Result<DiscordResult<T>> {
    let s = x.to_xstate()?;
    let (f, branch) = xxz_min_f(x);
    let theta = match branch {
        XxzBranch::SigmaX => T::FRAC_PI_2(),
        _ => T::zero(),
    };
    assemble(&s, f, branch.class(), theta, false)
}
