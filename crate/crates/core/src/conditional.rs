//! Measured conditional entropy `F(θ, φ)` of qubit B after a projective
//! measurement of qubit A along the Bloch direction `(θ, φ)`, and the
//! derivative factors `C_φ`, `C_θ`.
//!
//! The measurement basis is `|+> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`,
//! `|-> = sin(θ/2)|0> - e^{iφ} cos(θ/2)|1>`. Each outcome leaves B in a 2×2
//! block with trace `p±` and eigenvalues `(p± ± R±)/2`. The small eigenvalue
//! is taken from the block determinant, `p² - R² = 4 det`, which keeps it
//! accurate when the conditional state is nearly pure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{atanh_over, binary_entropy, Real};
use crate::state::XState;

/// Below this `p - R` the logarithms in `C_φ` / `C_θ` are treated as divergent.
pub const DEGENERATE_GAP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAngles<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> MeasurementAngles<T> {
    /// Angles inside the fundamental domain `θ ∈ [0, π/2]`, `φ ∈ [0, π)`.
    pub fn new(theta: T, phi: T) -> Result<Self> {
        let ok = theta >= T::zero() && theta <= T::FRAC_PI_2() && phi >= T::zero() && phi < T::PI();
        if ok {
            Ok(MeasurementAngles { theta, phi })
        } else {
            Err(Error::InvalidState(format!(
                "angles ({theta}, {phi}) outside [0, pi/2] x [0, pi)"
            )))
        }
    }

    /// No domain check. `F` itself is well defined for any `θ ∈ [0, π]` and
    /// any `φ`.
    pub fn unchecked(theta: T, phi: T) -> Self {
        MeasurementAngles { theta, phi }
    }

    /// Maps arbitrary angles onto the fundamental domain using
    /// `F(θ, φ) = F(π - θ, φ)`, `F(θ, φ) = F(θ, 2π - φ)` and π-periodicity
    /// in φ.
    pub fn fundamental(theta: T, phi: T) -> Self {
        let two_pi = T::lit(2.0) * T::PI();
        let mut t = theta % two_pi;
        if t < T::zero() {
            t = t + two_pi;
        }
        if t > T::PI() {
            t = two_pi - t;
        }
        if t > T::FRAC_PI_2() {
            t = T::PI() - t;
        }
        let mut p = phi % T::PI();
        if p < T::zero() {
            p = p + T::PI();
        }
        MeasurementAngles { theta: t, phi: p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FTerms<T> {
    pub p_plus: T,
    pub p_minus: T,
    pub b2: T,
    pub g_plus: T,
    pub g_minus: T,
    pub r_plus: T,
    pub r_minus: T,
    pub t_plus: T,
    pub t_minus: T,
    pub q_plus: T,
    pub q_minus: T,
}

/// `cos²(θ/2)`, `sin²(θ/2)`, `cos θ`, exact at θ = π/2.
fn half_angle<T: Real>(theta: T) -> (T, T, T) {
    if theta == T::FRAC_PI_2() {
        let h = T::lit(0.5);
        return (h, h, T::zero());
    }
    let (sh, ch) = (theta / T::lit(2.0)).sin_cos();
    let (c2, s2) = (ch * ch, sh * sh);
    (c2, s2, c2 - s2)
}

/// One measurement outcome: trace `p`, Bloch length `r`, and `p - r`
/// evaluated without cancellation.
#[derive(Debug, Clone, Copy)]
struct Branch<T> {
    p: T,
    g: T,
    r: T,
    gap: T,
    det: T,
}

impl<T: Real> Branch<T> {
    /// Block `[[alpha, v], [v*, beta]]` with `|v|² = cs·B²`.
    fn new(alpha: T, beta: T, cs_b2: T) -> Self {
        let p = alpha + beta;
        let g = alpha - beta;
        let det = (alpha * beta - cs_b2).max(T::zero());
        let r = (g * g + T::lit(4.0) * cs_b2).sqrt().min(p);
        // the plain subtraction is fine unless p - r is small
        let gap = if p - r > T::lit(0.5) * p {
            p - r
        } else if p + r > T::zero() {
            (T::lit(4.0) * det / (p + r)).min(p)
        } else {
            T::zero()
        };
        Branch { p, g, r, gap, det }
    }

    /// `(p + r) log2((p + r)/2p)` and `(p - r) log2((p - r)/2p)`.
    fn entropy_terms(&self) -> (T, T) {
        if self.p <= T::zero() {
            return (T::zero(), T::zero());
        }
        let two_p = T::lit(2.0) * self.p;
        let hi = self.p + self.r;
        let lo = self.gap;
        let t_hi = if hi > T::zero() {
            hi * (hi / two_p).log2()
        } else {
            T::zero()
        };
        let t_lo = if lo > T::zero() {
            lo * (lo / two_p).log2()
        } else {
            T::zero()
        };
        (t_hi, t_lo)
    }

    /// `log2((p + r)/(p - r)) / r`, finite as `r -> 0`.
    fn log_ratio_over_r(&self) -> Result<T> {
        if self.gap <= T::tolerance(DEGENERATE_GAP, 4.0) {
            return Err(Error::DegenerateLimit(
                "p - R vanishes: pure conditional state",
            ));
        }
        let u = self.r / self.p;
        let v = if u < T::lit(0.5) {
            // 2 atanh(u) / (u p ln 2)
            T::lit(2.0) * atanh_over(u) / (self.p * T::LN_2())
        } else {
            ((self.p + self.r) / self.gap).log2() / self.r
        };
        Ok(v)
    }
}

struct Kernel<T> {
    plus: Branch<T>,
    minus: Branch<T>,
    b2: T,
    cos_theta: T,
}

fn kernel<T: Real>(s: &XState<T>, theta: T, phi: T) -> Kernel<T> {
    let (c2, s2, x) = half_angle(theta);
    let (w, z) = (s.w(), s.z());
    let cphi = phi.cos();
    let b2 = ((w - z) * (w - z) + T::lit(4.0) * w * z * cphi * cphi).max(T::zero());
    let cs_b2 = c2 * s2 * b2;
    let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
    Kernel {
        plus: Branch::new(a * c2 + c * s2, b * c2 + d * s2, cs_b2),
        minus: Branch::new(a * s2 + c * c2, b * s2 + d * c2, cs_b2),
        b2,
        cos_theta: x,
    }
}

/// `p± = (1 ± A2 cos θ)/2`.
pub fn outcome_probabilities<T: Real>(s: &XState<T>, theta: T) -> (T, T) {
    let (c2, s2, _) = half_angle(theta);
    let (top, bottom) = (s.a() + s.b(), s.c() + s.d());
    (top * c2 + bottom * s2, top * s2 + bottom * c2)
}

pub fn f_terms<T: Real>(s: &XState<T>, angles: MeasurementAngles<T>) -> FTerms<T> {
    let k = kernel(s, angles.theta, angles.phi);
    let (t_plus, t_minus) = k.plus.entropy_terms();
    let (q_plus, q_minus) = k.minus.entropy_terms();
    FTerms {
        p_plus: k.plus.p,
        p_minus: k.minus.p,
        b2: k.b2,
        g_plus: k.plus.g,
        g_minus: k.minus.g,
        r_plus: k.plus.r,
        r_minus: k.minus.r,
        t_plus,
        t_minus,
        q_plus,
        q_minus,
    }
}

/// `F(θ, φ) = p+ S(ρ_B|+) + p- S(ρ_B|-) = -(T+ + T- + Q+ + Q-)/2`.
pub fn conditional_f<T: Real>(s: &XState<T>, angles: MeasurementAngles<T>) -> T {
    let t = f_terms(s, angles);
    let f = -(t.t_plus + t.t_minus + t.q_plus + t.q_minus) / T::lit(2.0);
    f.max(T::zero()).min(T::one())
}

/// `F(0, 0)`: measuring A along σz.
pub fn closed_form_f0<T: Real>(s: &XState<T>) -> T {
    let term = |x: T, y: T| {
        if x <= T::zero() {
            T::zero()
        } else {
            x * (x / (x + y)).log2()
        }
    };
    let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
    -(term(a, b) + term(b, a) + term(c, d) + term(d, c))
}

/// `F(π/2, 0)`: measuring A along σx, the binary entropy of `(1 ± 2r)/2`.
pub fn closed_form_fx<T: Real>(s: &XState<T>) -> T {
    let k = s.derived_constants();
    let sum = s.w() + s.z();
    // (1 - 2r)/2 = 2((a+c)(b+d) - (w+z)²)/(1 + 2r)
    let inner = ((s.a() + s.c()) * (s.b() + s.d()) - sum * sum).max(T::zero());
    let low = T::lit(2.0) * inner / (T::one() + T::lit(2.0) * k.r);
    binary_entropy(low)
}

/// `C_φ = log2((p- + R-)/(p- - R-))/R- + log2((p+ + R+)/(p+ - R+))/R+`, the
/// positive factor in `∂F/∂φ = -wz sin²θ sin 2φ C_φ`.
pub fn c_phi<T: Real>(s: &XState<T>, angles: MeasurementAngles<T>) -> Result<T> {
    let k = kernel(s, angles.theta, angles.phi);
    Ok(k.minus.log_ratio_over_r()? + k.plus.log_ratio_over_r()?)
}

/// `C_θ` at φ = 0, defined by `∂F/∂θ = -(sin θ / 4) C_θ`.
pub fn c_theta<T: Real>(s: &XState<T>, theta: T) -> Result<T> {
    let k = kernel(s, theta, T::zero());
    let kc = s.derived_constants();
    let two = T::lit(2.0);
    let (p, m) = (&k.plus, &k.minus);
    let lm = m.log_ratio_over_r()?;
    let lp = p.log_ratio_over_r()?;
    if p.det <= T::zero() || m.det <= T::zero() || p.p <= T::zero() || m.p <= T::zero() {
        return Err(Error::DegenerateLimit("singular conditional block"));
    }
    let bx = two * k.b2 * k.cos_theta;
    // A2 log2(p+² (p-² - R-²) / (p-² (p+² - R+²))) with p² - R² = 4 det
    let tail = kc.a2 * (two * (p.p / m.p).log2() + (m.det / p.det).log2());
    Ok((kc.a1 * m.g + bx) * lm - (kc.a1 * p.g - bx) * lp + tail)
}
