//! Optimal-measurement classification.
//!
//! On the φ = 0 slice the only critical angles of `F(θ, 0)` are θ = 0,
//! θ = π/2 and at most one interior root θ_e of `C_θ`. The curvature at the
//! two ends is carried by
//!
//! * `C0  = -4 F''(0)`
//! * `C+  ∝ -F''(π/2)` (positive factor `16 r³ (1 - 4r²) ln 2`)
//!
//! and their signs select the class:
//!
//! | class | condition            | min F                        |
//! |-------|----------------------|------------------------------|
//! | ANY   | C0 = 0 or C+ = 0     | min{F(0,0), F(π/2,0)}        |
//! | SZ    | C0 < 0, C+ > 0       | F(0,0)                       |
//! | SX    | C0 > 0, C+ < 0       | F(π/2,0)                     |
//! | SE    | C0 > 0, C+ > 0       | F(θ_e,0)                     |
//! | SQ    | C0 < 0, C+ < 0       | min{F(0,0), F(π/2,0)}        |
//!
//! States where a criterion diverges (a vanishing diagonal entry, pure
//! conditional states) are classified by a direct θ scan instead.

use serde::Serialize;

use crate::conditional::{
    c_theta, closed_form_f0, closed_form_fx, conditional_f, MeasurementAngles,
};
use crate::error::{Error, Result};
use crate::numeric::{brent_root, golden_section_min};
use crate::real::Real;
use crate::state::XState;

pub const DEFAULT_EPSILON_ZERO: f64 = 1e-12;
pub const DEFAULT_THETA_TOL: f64 = 1e-12;

/// Diagonal entries at or below this make `C0` singular.
const DIAGONAL_FLOOR: f64 = 1e-14;
/// Relative separation below which `log2(x/y)/(x - y)` takes its limit.
const RATIO_LIMIT: f64 = 1e-10;
const THETA_E_GRID: usize = 512;
const THETA_E_EDGE: f64 = 1e-9;
const FALLBACK_GRID: usize = 2001;
const FALLBACK_SNAP: f64 = 1e-6;
/// Spread of `F` over the fallback grid below which every angle is optimal.
const FLAT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResolvedAxis {
    #[serde(rename = "SZ")]
    SigmaZ,
    #[serde(rename = "SX")]
    SigmaX,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "code")]
pub enum MeasurementClass<T> {
    /// A criterion vanishes.
    #[serde(rename = "ANY")]
    Any,
    #[serde(rename = "SZ")]
    SigmaZ,
    #[serde(rename = "SX")]
    SigmaX,
    /// Interior optimum; `theta_e ∈ (0, π/2)`.
    #[serde(rename = "SE")]
    SigmaE { theta_e: T },
    /// Both ends are local minima; `resolved` names the lower one.
    #[serde(rename = "SQ")]
    SigmaQ { resolved: ResolvedAxis },
}

impl<T> MeasurementClass<T> {
    pub fn code(&self) -> &'static str {
        match self {
            MeasurementClass::Any => "ANY",
            MeasurementClass::SigmaZ => "SZ",
            MeasurementClass::SigmaX => "SX",
            MeasurementClass::SigmaE { .. } => "SE",
            MeasurementClass::SigmaQ { .. } => "SQ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifierReport<T> {
    /// `None` when `C0` diverges.
    pub c0: Option<T>,
    pub c_plus: Option<T>,
    pub class: MeasurementClass<T>,
    pub theta_opt: T,
    pub f_min: T,
    pub used_fallback: bool,
}

/// `log2(x/y)/(x - y)`, continuous across `x = y`.
fn log2_ratio_slope<T: Real>(x: T, y: T) -> T {
    let diff = x - y;
    if diff.abs() <= T::lit(RATIO_LIMIT) * x.max(y) {
        T::lit(2.0) / ((x + y) * T::LN_2())
    } else {
        (diff / y).ln_1p() / (diff * T::LN_2())
    }
}

/// `C0 = A2 log2(cd(1+A2)²/(ab(1-A2)²)) - A1 log2(ad/bc)
///      + 2(w+z)² [log2(a/b)/(a-b) + log2(c/d)/(c-d)]`.
pub fn compute_c0<T: Real>(s: &XState<T>) -> Result<T> {
    let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
    let floor = T::tolerance(DIAGONAL_FLOOR, 4.0);
    if a.min(b).min(c).min(d) <= floor {
        return Err(Error::DegenerateLimit("C0: vanishing diagonal entry"));
    }
    let k = s.derived_constants();
    let two = T::lit(2.0);
    let sum = s.w() + s.z();
    // 1 + A2 = 2(a+b), 1 - A2 = 2(c+d)
    let first = k.a2 * ((c * d).log2() - (a * b).log2() + two * ((a + b) / (c + d)).log2());
    let second = k.a1 * ((a * d).log2() - (b * c).log2());
    let third = two * sum * sum * (log2_ratio_slope(a, b) + log2_ratio_slope(c, d));
    Ok(first - second + third)
}

/// `C+ = 4r (A1 A3 - 4 A2 r²)² - 4(w+z)² (1 - 4r²)(4r² - A1²) ln((1+2r)/(1-2r))`.
///
/// At `r = 1/2` the logarithmic product is replaced by its limit 0.
pub fn compute_cplus<T: Real>(s: &XState<T>) -> T {
    let k = s.derived_constants();
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let r = k.r;
    let r2 = r * r;
    let sum = s.w() + s.z();
    let lead = k.a1 * k.a3 - four * k.a2 * r2;
    let head = four * r * lead * lead;
    // 1 - 4r² = 4((a+c)(b+d) - (w+z)²), exact-sign form
    let gap = (four * ((s.a() + s.c()) * (s.b() + s.d()) - sum * sum)).max(T::zero());
    if gap <= T::zero() {
        return head;
    }
    let one_minus_2r = gap / (T::one() + two * r);
    let log = ((T::one() + two * r) / one_minus_2r).ln();
    head - four * sum * sum * gap * (four * r2 - k.a1 * k.a1) * log
}

fn f_at<T: Real>(s: &XState<T>, theta: T) -> T {
    conditional_f(s, MeasurementAngles::unchecked(theta, T::zero()))
}

/// Interior root θ_e of `C_θ(θ) = 0` where `F(·, 0)` turns from decreasing
/// to increasing.
pub fn solve_theta_e<T: Real>(s: &XState<T>, tol: T) -> Result<T> {
    let edge = T::lit(THETA_E_EDGE);
    let span = T::FRAC_PI_2() - edge - edge;
    let n = THETA_E_GRID;
    let grid: Vec<T> = (0..n)
        .map(|i| edge + span * T::lit(i as f64) / T::lit((n - 1) as f64))
        .collect();
    let values = grid
        .iter()
        .map(|&t| c_theta(s, t))
        .collect::<Result<Vec<T>>>()?;

    let mut best: Option<(T, T)> = None;
    for i in 0..n - 1 {
        // C_θ > 0 means F decreasing
        if values[i] > T::zero() && values[i + 1] <= T::zero() {
            let f = |t: T| c_theta(s, t).unwrap_or_else(|_| T::nan());
            let Some(root) = brent_root(f, grid[i], grid[i + 1], tol, 200) else {
                continue;
            };
            let fr = f_at(s, root);
            if best.is_none_or(|(_, fb)| fr < fb) {
                best = Some((root, fr));
            }
        }
    }
    best.map(|(t, _)| t).ok_or(Error::RootNotFound)
}

/// Direct θ scan on φ = 0 for states where the criteria are unusable.
fn fallback_scan<T: Real>(s: &XState<T>, c0: Option<T>, c_plus: Option<T>) -> ClassifierReport<T> {
    let n = FALLBACK_GRID;
    let step = T::FRAC_PI_2() / T::lit((n - 1) as f64);
    let theta = |i: usize| {
        if i == n - 1 {
            T::FRAC_PI_2()
        } else {
            step * T::lit(i as f64)
        }
    };
    let (mut best_i, mut best_f, mut worst_f) = (0, T::infinity(), T::neg_infinity());
    for i in 0..n {
        let f = f_at(s, theta(i));
        worst_f = worst_f.max(f);
        if f < best_f {
            best_i = i;
            best_f = f;
        }
    }
    if worst_f - best_f <= T::tolerance(FLAT_TOLERANCE, 16.0) {
        let f_min = closed_form_f0(s).min(best_f);
        return ClassifierReport {
            c0,
            c_plus,
            class: MeasurementClass::Any,
            theta_opt: T::zero(),
            f_min,
            used_fallback: true,
        };
    }
    let lo = theta(best_i.saturating_sub(1));
    let hi = theta((best_i + 1).min(n - 1));
    let (mut t, refined) = golden_section_min(|x| f_at(s, x), lo, hi, T::lit(1e-12), 300);
    if refined < best_f {
        best_f = refined;
    } else {
        t = theta(best_i);
    }

    let snap = T::lit(FALLBACK_SNAP);
    let (class, theta_opt, f_min) = if t <= snap {
        (
            MeasurementClass::SigmaZ,
            T::zero(),
            closed_form_f0(s).min(best_f),
        )
    } else if t >= T::FRAC_PI_2() - snap {
        (
            MeasurementClass::SigmaX,
            T::FRAC_PI_2(),
            closed_form_fx(s).min(best_f),
        )
    } else {
        (MeasurementClass::SigmaE { theta_e: t }, t, best_f)
    };
    ClassifierReport {
        c0,
        c_plus,
        class,
        theta_opt,
        f_min,
        used_fallback: true,
    }
}

/// Classifies the optimal projective measurement on qubit A.
pub fn classify<T: Real>(s: &XState<T>, epsilon_zero: T) -> Result<ClassifierReport<T>> {
    if epsilon_zero.is_nan() || epsilon_zero <= T::zero() {
        return Err(Error::InvalidState("epsilon_zero must be positive".into()));
    }
    let c_plus = compute_cplus(s);
    let c0 = match compute_c0(s) {
        Ok(v) => v,
        Err(Error::DegenerateLimit(_)) => return Ok(fallback_scan(s, None, Some(c_plus))),
        Err(e) => return Err(e),
    };
    let f0 = closed_form_f0(s);
    let fx = closed_form_fx(s);
    let report = |class, theta_opt, f_min| ClassifierReport {
        c0: Some(c0),
        c_plus: Some(c_plus),
        class,
        theta_opt,
        f_min,
        used_fallback: false,
    };
    let lower_end = |class_z, class_x| {
        if fx < f0 {
            (class_x, T::FRAC_PI_2(), fx)
        } else {
            (class_z, T::zero(), f0)
        }
    };

    let zero = T::zero();
    if c0.abs() <= epsilon_zero || c_plus.abs() <= epsilon_zero {
        let (class, t, f) = lower_end(MeasurementClass::Any, MeasurementClass::Any);
        return Ok(report(class, t, f));
    }
    let out = match (c0 < zero, c_plus < zero) {
        (true, false) => report(MeasurementClass::SigmaZ, zero, f0),
        (false, true) => report(MeasurementClass::SigmaX, T::FRAC_PI_2(), fx),
        (true, true) => {
            // ties (|F0 - Fx| <= 1e-15) resolve to σz
            let (axis, t, f) = if fx < f0 - T::tolerance(1e-15, 2.0) {
                (ResolvedAxis::SigmaX, T::FRAC_PI_2(), fx)
            } else {
                (ResolvedAxis::SigmaZ, zero, f0)
            };
            report(MeasurementClass::SigmaQ { resolved: axis }, t, f)
        }
        (false, false) => match solve_theta_e(s, T::lit(DEFAULT_THETA_TOL)) {
            Ok(te) => {
                let fe = f_at(s, te);
                if fe <= f0.min(fx) {
                    report(MeasurementClass::SigmaE { theta_e: te }, te, fe)
                } else {
                    fallback_scan(s, Some(c0), Some(c_plus))
                }
            }
            Err(Error::RootNotFound) | Err(Error::DegenerateLimit(_)) => {
                fallback_scan(s, Some(c0), Some(c_plus))
            }
            Err(e) => return Err(e),
        },
    };
    Ok(out)
}

/// `min_{θ,φ} F(θ, φ)` with the class and optimal θ (the optimal φ is 0).
pub fn min_conditional_entropy<T: Real>(s: &XState<T>) -> Result<(T, MeasurementClass<T>, T)> {
    let r = classify(s, T::lit(DEFAULT_EPSILON_ZERO))?;
    Ok((r.f_min, r.class, r.theta_opt))
}
