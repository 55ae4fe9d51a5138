//! Parameter-space scans: measurement-class region maps over `(w, z)`,
//! zero crossings of the curvature criteria along a line, discord sweeps in
//! `z`, and XXZ maps over `(a, z)`.
//!
//! Points are independent and may be evaluated in parallel, but output is
//! always assembled in row-major spec order.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{
    classify, compute_c0, compute_cplus, ClassifierReport, MeasurementClass, DEFAULT_EPSILON_ZERO,
};
use crate::discord::assemble;
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::oracle::{oracle_discord, OracleConfig};
use crate::real::Real;
use crate::state::{XState, POSITIVITY_TOLERANCE};
use crate::symmetric::{xxz_discord, xxz_region, XxzBranch, XxzState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassCode {
    #[serde(rename = "ANY")]
    Any,
    #[serde(rename = "SZ")]
    Sz,
    #[serde(rename = "SX")]
    Sx,
    #[serde(rename = "SE")]
    Se,
    #[serde(rename = "SQ")]
    Sq,
    #[serde(rename = "SKIP")]
    Skip,
    #[serde(rename = "BOUNDARY")]
    Boundary,
}

impl ClassCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassCode::Any => "ANY",
            ClassCode::Sz => "SZ",
            ClassCode::Sx => "SX",
            ClassCode::Se => "SE",
            ClassCode::Sq => "SQ",
            ClassCode::Skip => "SKIP",
            ClassCode::Boundary => "BOUNDARY",
        }
    }
}

impl<T> From<&MeasurementClass<T>> for ClassCode {
    fn from(c: &MeasurementClass<T>) -> Self {
        match c {
            MeasurementClass::Any => ClassCode::Any,
            MeasurementClass::SigmaZ => ClassCode::Sz,
            MeasurementClass::SigmaX => ClassCode::Sx,
            MeasurementClass::SigmaE { .. } => ClassCode::Se,
            MeasurementClass::SigmaQ { .. } => ClassCode::Sq,
        }
    }
}

/// Diagonal of an X-state, validated as a probability vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagonals<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Diagonals<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let s = XState::new(a, b, c, d, T::zero(), T::zero())?;
        Ok(Diagonals {
            a: s.a(),
            b: s.b(),
            c: s.c(),
            d: s.d(),
        })
    }

    pub fn w_max(&self) -> T {
        (self.a * self.d).sqrt()
    }

    pub fn z_max(&self) -> T {
        (self.b * self.c).sqrt()
    }

    pub fn state(&self, w: T, z: T) -> Result<XState<T>> {
        XState::new(self.a, self.b, self.c, self.d, w, z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionMapSpec<T> {
    pub diagonals: Diagonals<T>,
    pub w_range: (T, T),
    pub z_range: (T, T),
    /// Grid counts `(n_w, n_z)`.
    pub resolution: (usize, usize),
}

impl<T: Real> RegionMapSpec<T> {
    /// Ranges are clipped to `[0, √(ad)] × [0, √(bc)]`.
    pub fn new(
        diagonals: Diagonals<T>,
        w_range: (T, T),
        z_range: (T, T),
        resolution: (usize, usize),
    ) -> Result<Self> {
        if resolution.0 < 2 || resolution.1 < 2 {
            return Err(Error::InvalidState(
                "region map needs at least 2 points per axis".into(),
            ));
        }
        let clip = |(lo, hi): (T, T), max: T| -> Result<(T, T)> {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::InvalidState(format!("empty range [{lo}, {hi}]")));
            }
            Ok((lo.max(T::zero()).min(max), hi.max(T::zero()).min(max)))
        };
        Ok(RegionMapSpec {
            w_range: clip(w_range, diagonals.w_max())?,
            z_range: clip(z_range, diagonals.z_max())?,
            diagonals,
            resolution,
        })
    }

    /// The whole positivity rectangle at the default 400×400 resolution.
    pub fn full(diagonals: Diagonals<T>) -> Self {
        RegionMapSpec {
            w_range: (T::zero(), diagonals.w_max()),
            z_range: (T::zero(), diagonals.z_max()),
            diagonals,
            resolution: (400, 400),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec<T> {
    pub diagonals: Diagonals<T>,
    pub w: T,
    pub z_range: (T, T),
    pub samples: usize,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(diagonals: Diagonals<T>, w: T, z_range: (T, T), samples: usize) -> Result<Self> {
        let tol = T::tolerance(POSITIVITY_TOLERANCE, 16.0);
        if samples < 2 {
            return Err(Error::InvalidState("sweep needs at least 2 samples".into()));
        }
        if !(z_range.0 >= T::zero()
            && z_range.0 <= z_range.1
            && z_range.1 <= diagonals.z_max() + tol)
        {
            return Err(Error::InvalidState(format!(
                "z range [{}, {}] not within [0, sqrt(bc) = {}]",
                z_range.0,
                z_range.1,
                diagonals.z_max()
            )));
        }
        if w < T::zero() || w > diagonals.w_max() + tol {
            return Err(Error::InvalidState(format!(
                "w = {w} outside [0, sqrt(ad)]"
            )));
        }
        Ok(SweepSpec {
            diagonals,
            w,
            z_range,
            samples,
        })
    }
}

/// One row of a scan. Numeric fields are `None` for `SKIP` rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord<T> {
    pub a: Option<T>,
    pub w: T,
    pub z: T,
    pub class: ClassCode,
    pub discord: Option<T>,
    pub f_min: Option<T>,
    pub theta_opt: Option<T>,
    pub c0: Option<T>,
    pub c_plus: Option<T>,
    pub oracle_discord: Option<T>,
}

impl<T: Real> ScanRecord<T> {
    fn skip(a: Option<T>, w: T, z: T) -> Self {
        ScanRecord {
            a,
            w,
            z,
            class: ClassCode::Skip,
            discord: None,
            f_min: None,
            theta_opt: None,
            c0: None,
            c_plus: None,
            oracle_discord: None,
        }
    }

    fn from_report(w: T, z: T, report: &ClassifierReport<T>, discord: T) -> Self {
        ScanRecord {
            a: None,
            w,
            z,
            class: ClassCode::from(&report.class),
            discord: Some(discord),
            f_min: Some(report.f_min),
            theta_opt: Some(report.theta_opt),
            c0: report.c0,
            c_plus: report.c_plus,
            oracle_discord: None,
        }
    }
}

fn linspace<T: Real>((lo, hi): (T, T), n: usize) -> Vec<T> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * T::lit(i as f64) / T::lit((n - 1) as f64)
            }
        })
        .collect()
}

/// Order-preserving parallel map. `threads = Some(1)` runs inline.
fn par_map<I, O, F>(items: Vec<I>, threads: Option<usize>, f: F) -> Result<Vec<O>>
where
    I: Send + Sync,
    O: Send,
    F: Fn(&I) -> Result<O> + Send + Sync,
{
    if threads == Some(1) {
        return items.iter().map(&f).collect();
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InternalConsistency(format!("thread pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

fn classify_point<T: Real>(diag: &Diagonals<T>, w: T, z: T) -> Result<ScanRecord<T>> {
    let Ok(s) = diag.state(w, z) else {
        return Ok(ScanRecord::skip(None, w, z));
    };
    let report = classify(&s, T::lit(DEFAULT_EPSILON_ZERO))?;
    let d = assemble(
        &s,
        report.f_min,
        report.class,
        report.theta_opt,
        report.used_fallback,
    )?;
    Ok(ScanRecord::from_report(w, z, &report, d.discord))
}

/// Classifies every point of the `(w, z)` grid, `w` outer, `z` inner.
pub fn region_map<T: Real>(
    spec: &RegionMapSpec<T>,
    threads: Option<usize>,
) -> Result<Vec<ScanRecord<T>>> {
    let ws = linspace(spec.w_range, spec.resolution.0);
    let zs = linspace(spec.z_range, spec.resolution.1);
    let points: Vec<(T, T)> = ws
        .iter()
        .flat_map(|&w| zs.iter().map(move |&z| (w, z)))
        .collect();
    par_map(points, threads, |&(w, z)| {
        classify_point(&spec.diagonals, w, z)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryCriterion {
    C0,
    CPlus,
}

/// Straight segment from `(w0, z0)` to `(w1, z1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSegment<T> {
    pub w0: T,
    pub z0: T,
    pub w1: T,
    pub z1: T,
}

impl<T: Real> LineSegment<T> {
    pub fn at(&self, t: T) -> (T, T) {
        (
            self.w0 + (self.w1 - self.w0) * t,
            self.z0 + (self.z1 - self.z0) * t,
        )
    }

    fn length(&self) -> T {
        let (dw, dz) = (self.w1 - self.w0, self.z1 - self.z0);
        (dw * dw + dz * dz).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint<T> {
    /// Line parameter in `[0, 1]`.
    pub t: T,
    pub w: T,
    pub z: T,
}

/// Samples used to bracket sign changes along a line.
pub const BOUNDARY_SAMPLES: usize = 2001;

/// All zero crossings of `C0` or `C+` along `line`, each solved by bisection
/// to `tol` in `(w, z)` distance.
pub fn trace_boundary<T: Real>(
    diagonals: &Diagonals<T>,
    criterion: BoundaryCriterion,
    line: &LineSegment<T>,
    tol: T,
) -> Vec<BoundaryPoint<T>> {
    let eval = |t: T| -> T {
        let (w, z) = line.at(t);
        match diagonals.state(w, z) {
            Ok(s) => match criterion {
                BoundaryCriterion::C0 => compute_c0(&s).unwrap_or_else(|_| T::nan()),
                BoundaryCriterion::CPlus => compute_cplus(&s),
            },
            Err(_) => T::nan(),
        }
    };
    let len = line.length();
    let t_tol = if len > T::zero() { tol / len } else { tol };
    let ts = linspace((T::zero(), T::one()), BOUNDARY_SAMPLES);
    let vals: Vec<T> = ts.iter().map(|&t| eval(t)).collect();

    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < ts.len() {
        let (v0, v1) = (vals[i], vals[i + 1]);
        if v0.is_nan() || v1.is_nan() {
            i += 1;
            continue;
        }
        if v0 == T::zero() {
            let (w, z) = line.at(ts[i]);
            out.push(BoundaryPoint { t: ts[i], w, z });
        } else if v0.signum() != v1.signum() && v1 != T::zero() {
            if let Some(t) = bisect(eval, ts[i], ts[i + 1], t_tol) {
                let (w, z) = line.at(t);
                out.push(BoundaryPoint { t, w, z });
            }
        }
        i += 1;
    }
    if let Some(&v) = vals.last() {
        if v == T::zero() {
            let (w, z) = line.at(T::one());
            out.push(BoundaryPoint { t: T::one(), w, z });
        }
    }
    out
}

/// Discord along `z` at fixed `w`. With `oracle` set, every row also carries
/// the brute-force discord.
pub fn sweep_z<T: Real>(
    spec: &SweepSpec<T>,
    oracle: Option<&OracleConfig<T>>,
    threads: Option<usize>,
) -> Result<Vec<ScanRecord<T>>> {
    let zs = linspace(spec.z_range, spec.samples);
    par_map(zs, threads, |&z| {
        let Ok(s) = spec.diagonals.state(spec.w, z) else {
            return Ok(ScanRecord::skip(None, spec.w, z));
        };
        let report = classify(&s, T::lit(DEFAULT_EPSILON_ZERO))?;
        let d = assemble(
            &s,
            report.f_min,
            report.class,
            report.theta_opt,
            report.used_fallback,
        )?;
        let mut rec = ScanRecord::from_report(spec.w, z, &report, d.discord);
        if let Some(cfg) = oracle {
            rec.oracle_discord = Some(oracle_discord(&s, cfg)?);
        }
        Ok(rec)
    })
}

/// XXZ map over `(a, z)` at fixed `w`, `a` outer, `z` inner. Points with
/// `w > a` or `z > 1/2 - a` are `SKIP`; points on `w + z = |2a - 1/2|` are
/// `BOUNDARY`.
pub fn xxz_region_map<T: Real>(
    a_range: (T, T),
    z_range: (T, T),
    w: T,
    resolution: (usize, usize),
    threads: Option<usize>,
) -> Result<Vec<ScanRecord<T>>> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidState(
            "XXZ map needs at least 2 points per axis".into(),
        ));
    }
    let as_ = linspace(a_range, resolution.0);
    let zs = linspace(z_range, resolution.1);
    let points: Vec<(T, T)> = as_
        .iter()
        .flat_map(|&a| zs.iter().map(move |&z| (a, z)))
        .collect();
    par_map(points, threads, |&(a, z)| {
        let Ok(x) = XxzState::new(a, w, z) else {
            return Ok(ScanRecord::skip(Some(a), w, z));
        };
        let region = xxz_region(&x);
        let d = xxz_discord(&x)?;
        let s = x.to_xstate()?;
        let class = if region.on_boundary {
            ClassCode::Boundary
        } else {
            match region.branch {
                XxzBranch::SigmaZ => ClassCode::Sz,
                XxzBranch::SigmaX => ClassCode::Sx,
                XxzBranch::Any => ClassCode::Any,
            }
        };
        Ok(ScanRecord {
            a: Some(a),
            w,
            z,
            class,
            discord: Some(d.discord),
            f_min: Some(d.f_min),
            theta_opt: Some(d.theta_opt),
            c0: compute_c0(&s).ok(),
            c_plus: Some(compute_cplus(&s)),
            oracle_discord: None,
        })
    })
}

/// 17 significant digits, scientific notation.
pub fn fmt17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn opt17<T: Real>(x: Option<T>) -> String {
    x.map(fmt17).unwrap_or_default()
}

/// Writes records as CSV. The `a` and `oracle_discord` columns appear only
/// when some record carries them.
pub fn write_csv<T: Real, W: Write>(records: &[ScanRecord<T>], mut out: W) -> io::Result<()> {
    let with_a = records.iter().any(|r| r.a.is_some());
    let with_oracle = records.iter().any(|r| r.oracle_discord.is_some());
    let mut header = Vec::new();
    if with_a {
        header.push("a");
    }
    header.extend([
        "w",
        "z",
        "class",
        "discord",
        "f_min",
        "theta_opt",
        "c0",
        "c_plus",
    ]);
    if with_oracle {
        header.push("oracle_discord");
    }
    writeln!(out, "{}", header.join(","))?;
    for r in records {
        let mut row = Vec::with_capacity(header.len());
        if with_a {
            row.push(opt17(r.a));
        }
        row.push(fmt17(r.w));
        row.push(fmt17(r.z));
        row.push(r.class.as_str().to_string());
        row.push(opt17(r.discord));
        row.push(opt17(r.f_min));
        row.push(opt17(r.theta_opt));
        row.push(opt17(r.c0));
        row.push(opt17(r.c_plus));
        if with_oracle {
            row.push(opt17(r.oracle_discord));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
