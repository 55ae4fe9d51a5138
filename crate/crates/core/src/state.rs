//! X-shaped two-qubit density matrices.
//!
//! In the basis `|00>, |01>, |10>, |11>` the state is
//!
//! ```text
//! | a 0 0 w |
//! | 0 b z 0 |
//! | 0 z c 0 |
//! | w 0 0 d |
//! ```
//!
//! Phases of the coherences are removed by a local unitary, so only the
//! moduli `w, z >= 0` are stored.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{shannon_entropy, Real};

/// Largest trace deviation that is silently renormalised.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Slack on the positivity bounds and on negative diagonal entries.
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "StateJson<T>",
    bound(
        serialize = "T: Real + Serialize",
        deserialize = "T: Real + Deserialize<'de>"
    )
)]
pub struct XState<T> {
    a: T,
    b: T,
    c: T,
    d: T,
    w: T,
    z: T,
}

/// `A1 = <σz σz>`, `A2 = <σz ⊗ 1>`, `A3 = <1 ⊗ σz>` and the radius `r` that
/// governs the θ = π/2 branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub r: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum<T> {
    pub joint: [T; 4],
    pub reduced_a: [T; 2],
    pub reduced_b: [T; 2],
}

/// Wire form of a state. `w_im` / `z_im` carry optional imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateJson<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub w: T,
    pub z: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_im: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_im: Option<T>,
}

impl<T: Real> TryFrom<StateJson<T>> for XState<T> {
    type Error = Error;

    fn try_from(j: StateJson<T>) -> Result<Self> {
        make_state(
            j.a,
            j.b,
            j.c,
            j.d,
            Complex::new(j.w, j.w_im.unwrap_or_else(T::zero)),
            Complex::new(j.z, j.z_im.unwrap_or_else(T::zero)),
        )
    }
}

impl<T: Real> From<XState<T>> for StateJson<T> {
    fn from(s: XState<T>) -> Self {
        StateJson {
            a: s.a,
            b: s.b,
            c: s.c,
            d: s.d,
            w: s.w,
            z: s.z,
            w_im: None,
            z_im: None,
        }
    }
}

/// Validates and normalises an X-state given possibly complex coherences.
pub fn make_state<T: Real>(
    a: T,
    b: T,
    c: T,
    d: T,
    w: Complex<T>,
    z: Complex<T>,
) -> Result<XState<T>> {
    let diag = [a, b, c, d];
    let all = [a, b, c, d, w.re, w.im, z.re, z.im];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidState("non-finite input".into()));
    }
    let neg_tol = T::tolerance(POSITIVITY_TOLERANCE, 4.0);
    if let Some(v) = diag.iter().find(|&&v| v < -neg_tol) {
        return Err(Error::InvalidState(format!("negative diagonal entry {v}")));
    }
    let clamped = diag.map(|v| v.max(T::zero()).min(T::one()));
    let trace = clamped.iter().fold(T::zero(), |s, &v| s + v);
    if (trace - T::one()).abs() > T::tolerance(TRACE_TOLERANCE, 64.0) {
        return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
    }
    let [a, b, c, d] = clamped.map(|v| v / trace);

    let (w, z) = (w.norm(), z.norm());
    let pos_tol = T::tolerance(POSITIVITY_TOLERANCE, 16.0);
    let (w_max, z_max) = ((a * d).sqrt(), (b * c).sqrt());
    if w > w_max + pos_tol {
        return Err(Error::InvalidState(format!(
            "positivity violated: |w| = {w} > sqrt(ad) = {w_max}"
        )));
    }
    if z > z_max + pos_tol {
        return Err(Error::InvalidState(format!(
            "positivity violated: |z| = {z} > sqrt(bc) = {z_max}"
        )));
    }
    Ok(XState {
        a,
        b,
        c,
        d,
        w: w.min(w_max),
        z: z.min(z_max),
    })
}

impl<T: Real> XState<T> {
    /// Real, non-negative coherences.
    pub fn new(a: T, b: T, c: T, d: T, w: T, z: T) -> Result<Self> {
        make_state(
            a,
            b,
            c,
            d,
            Complex::new(w, T::zero()),
            Complex::new(z, T::zero()),
        )
    }

    /// The maximally mixed state `1/4`.
    pub fn maximally_mixed() -> Self {
        let q = T::lit(0.25);
        XState {
            a: q,
            b: q,
            c: q,
            d: q,
            w: T::zero(),
            z: T::zero(),
        }
    }

    /// `(|00> + |11>)/√2`.
    pub fn bell_phi_plus() -> Self {
        let h = T::lit(0.5);
        XState {
            a: h,
            b: T::zero(),
            c: T::zero(),
            d: h,
            w: h,
            z: T::zero(),
        }
    }

    pub fn a(&self) -> T {
        self.a
    }
    pub fn b(&self) -> T {
        self.b
    }
    pub fn c(&self) -> T {
        self.c
    }
    pub fn d(&self) -> T {
        self.d
    }
    pub fn w(&self) -> T {
        self.w
    }
    pub fn z(&self) -> T {
        self.z
    }

    pub fn diagonals(&self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Same diagonal, different coherences.
    pub fn with_coherences(&self, w: T, z: T) -> Result<Self> {
        Self::new(self.a, self.b, self.c, self.d, w, z)
    }

    pub fn derived_constants(&self) -> DerivedConstants<T> {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let a3 = a - b + c - d;
        let s = self.w + self.z;
        DerivedConstants {
            a1: a - b - c + d,
            a2: a + b - c - d,
            a3,
            r: (a3 * a3 + T::lit(4.0) * s * s).sqrt() / T::lit(2.0),
        }
    }

    /// Eigenvalues of the two 2×2 blocks `{a, d, w}` and `{b, c, z}` plus the
    /// marginal spectra.
    pub fn spectrum(&self) -> Spectrum<T> {
        let (l1, l2) = block_eigenvalues(self.a, self.d, self.w);
        let (l3, l4) = block_eigenvalues(self.b, self.c, self.z);
        Spectrum {
            joint: [l1, l2, l3, l4],
            reduced_a: [self.a + self.b, self.c + self.d],
            reduced_b: [self.a + self.c, self.b + self.d],
        }
    }

    /// `S(ρ_AB)` in bits.
    pub fn entropy_joint(&self) -> T {
        shannon_entropy(&self.spectrum().joint)
    }

    /// `S(ρ_A)` in bits.
    pub fn entropy_a(&self) -> T {
        shannon_entropy(&[self.a + self.b, self.c + self.d])
    }

    /// `S(ρ_B)` in bits.
    pub fn entropy_b(&self) -> T {
        shannon_entropy(&[self.a + self.c, self.b + self.d])
    }

    /// `I(ρ_AB) = S(ρ_A) + S(ρ_B) - S(ρ_AB)`.
    pub fn mutual_information(&self) -> T {
        self.entropy_a() + self.entropy_b() - self.entropy_joint()
    }

    /// Exchanges the roles of A and B (`b <-> c`).
    pub fn swap_subsystems(&self) -> Self {
        XState {
            b: self.c,
            c: self.b,
            ..*self
        }
    }
}

/// Eigenvalues of `[[x, v], [v, y]]`, larger first. The smaller one comes from
/// the determinant so it stays accurate when the block is nearly singular.
fn block_eigenvalues<T: Real>(x: T, y: T, v: T) -> (T, T) {
    let two = T::lit(2.0);
    let half_diff = (x - y) / two;
    let big = (x + y) / two + (half_diff * half_diff + v * v).sqrt();
    let det = x * y - v * v;
    let small = if big > T::zero() {
        det / big
    } else {
        T::zero()
    };
    (big, small)
}
