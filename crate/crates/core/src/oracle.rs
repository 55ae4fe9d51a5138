//! Brute-force minimisation of `F(θ, φ)` over a dense angle grid followed by
//! golden-section refinement.
//!
//! Nothing here consults the curvature criteria or `C_θ`; the only shared
//! code with the analytic path is the evaluation of `F` itself.

use serde::Serialize;

use crate::conditional::{conditional_f, MeasurementAngles};
use crate::error::{Error, Result};
use crate::numeric::golden_section_min;
use crate::real::Real;
use crate::state::XState;

/// Grid minima within this of the global grid minimum are all refined.
const CANDIDATE_MARGIN: f64 = 1e-6;
const MAX_CANDIDATES: usize = 8;
const REFINE_ROUNDS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig<T> {
    /// Grid points over `[0, π/2]`, ends included.
    pub n_theta: usize,
    /// Grid points over `[0, π)`.
    pub n_phi: usize,
    pub refine_tol: T,
    pub refine_max_iter: usize,
}

impl<T: Real> Default for OracleConfig<T> {
    fn default() -> Self {
        OracleConfig {
            n_theta: 721,
            n_phi: 181,
            refine_tol: T::lit(1e-10),
            refine_max_iter: 200,
        }
    }
}

impl<T: Real> OracleConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 3
            || self.n_phi < 3
            || self.refine_tol.is_nan()
            || self.refine_tol <= T::zero()
        {
            return Err(Error::InvalidState(format!(
                "oracle config needs n_theta >= 3, n_phi >= 3, refine_tol > 0 (got {}, {}, {})",
                self.n_theta, self.n_phi, self.refine_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleMinimum<T> {
    pub theta: T,
    pub phi: T,
    pub f: T,
    /// Best value on the raw grid before refinement.
    pub grid_f: T,
}

struct Grid<T> {
    thetas: Vec<T>,
    phis: Vec<T>,
}

impl<T: Real> Grid<T> {
    fn new(n_theta: usize, phis: Vec<T>) -> Self {
        let step = T::FRAC_PI_2() / T::lit((n_theta - 1) as f64);
        let thetas = (0..n_theta)
            .map(|i| {
                if i == n_theta - 1 {
                    T::FRAC_PI_2()
                } else {
                    step * T::lit(i as f64)
                }
            })
            .collect();
        Grid { thetas, phis }
    }

    fn phi_step(&self) -> T {
        T::PI() / T::lit(self.phis.len() as f64)
    }
}

fn f<T: Real>(s: &XState<T>, theta: T, phi: T) -> T {
    conditional_f(s, MeasurementAngles::unchecked(theta, phi))
}

fn minimize_on<T: Real>(s: &XState<T>, grid: &Grid<T>, cfg: &OracleConfig<T>) -> OracleMinimum<T> {
    let (nt, np) = (grid.thetas.len(), grid.phis.len());
    let mut values = vec![T::zero(); nt * np];
    for (j, &phi) in grid.phis.iter().enumerate() {
        for (i, &theta) in grid.thetas.iter().enumerate() {
            values[j * nt + i] = f(s, theta, phi);
        }
    }
    let at = |i: usize, j: usize| values[j * nt + i];
    let grid_min = values.iter().copied().fold(T::infinity(), T::min);

    // local minima over the θ-line (ends open) and the periodic φ-circle
    let margin = T::lit(CANDIDATE_MARGIN);
    let mut candidates = Vec::new();
    for j in 0..np {
        for i in 0..nt {
            let v = at(i, j);
            if v > grid_min + margin {
                continue;
            }
            let mut is_min = true;
            for di in [-1i64, 0, 1] {
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    if ii < 0 || ii >= nt as i64 {
                        continue;
                    }
                    if np == 1 && dj != 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                    if at(ii as usize, jj) < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                candidates.push((v, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    candidates.truncate(MAX_CANDIDATES);

    let refine_phi = np > 1 && s.w() * s.z() > T::zero();
    let dphi = grid.phi_step();
    let mut best = OracleMinimum {
        theta: grid.thetas[0],
        phi: grid.phis[0],
        f: grid_min,
        grid_f: grid_min,
    };
    let mut first = true;
    for &(v, i, j) in &candidates {
        let (mut theta, mut phi, mut fv) = (grid.thetas[i], grid.phis[j], v);
        let mut t_lo = grid.thetas[i.saturating_sub(1)];
        let mut t_hi = grid.thetas[(i + 1).min(nt - 1)];
        let mut p_half = dphi;
        for _ in 0..REFINE_ROUNDS {
            let (t, ft) = golden_section_min(
                |x| f(s, x, phi),
                t_lo,
                t_hi,
                cfg.refine_tol,
                cfg.refine_max_iter,
            );
            if ft <= fv {
                theta = t;
                fv = ft;
            }
            if !refine_phi {
                break;
            }
            let (p, fp) = golden_section_min(
                |x| f(s, theta, x),
                phi - p_half,
                phi + p_half,
                cfg.refine_tol,
                cfg.refine_max_iter,
            );
            if fp <= fv {
                phi = p;
                fv = fp;
            }
            // shrink the θ bracket around the current point for the next pass
            let half = (t_hi - t_lo) / T::lit(4.0);
            t_lo = (theta - half).max(T::zero());
            t_hi = (theta + half).min(T::FRAC_PI_2());
            p_half = p_half / T::lit(2.0);
        }
        if first || fv < best.f {
            first = false;
            best.theta = theta;
            best.phi = phi;
            best.f = fv;
        }
    }
    let fund = MeasurementAngles::fundamental(best.theta, best.phi);
    best.theta = fund.theta;
    best.phi = fund.phi;
    best
}

/// Global minimum of `F` over the `(θ, φ)` grid, refined.
///
/// When `w·z = 0`, `F` has no φ dependence and a single φ column is used.
pub fn grid_minimize<T: Real>(s: &XState<T>, cfg: &OracleConfig<T>) -> Result<OracleMinimum<T>> {
    cfg.validate()?;
    let phis = if s.w() * s.z() > T::zero() {
        let step = T::PI() / T::lit(cfg.n_phi as f64);
        (0..cfg.n_phi).map(|j| step * T::lit(j as f64)).collect()
    } else {
        vec![T::zero()]
    };
    Ok(minimize_on(s, &Grid::new(cfg.n_theta, phis), cfg))
}

/// Minimum of `F(·, phi)` over θ alone.
pub fn slice_minimize<T: Real>(
    s: &XState<T>,
    phi: T,
    cfg: &OracleConfig<T>,
) -> Result<OracleMinimum<T>> {
    cfg.validate()?;
    Ok(minimize_on(s, &Grid::new(cfg.n_theta, vec![phi]), cfg))
}

/// `D(B|A)` from the brute-force minimum.
pub fn oracle_discord<T: Real>(s: &XState<T>, cfg: &OracleConfig<T>) -> Result<T> {
    let m = grid_minimize(s, cfg)?;
    Ok(m.f - s.entropy_joint() + s.entropy_a())
}
