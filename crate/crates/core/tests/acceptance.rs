//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use xdiscord::{
    c_theta, classify, closed_form_f0, closed_form_fx, compute_c0, compute_cplus, conditional_f,
    grid_minimize, quantum_discord, region_map, slice_minimize, trace_boundary, xxz_discord,
    BoundaryCriterion, ClassCode, Diagonals, LineSegment, MeasurementAngles, MeasurementClass,
    OracleConfig, OracleMinimum, RegionMapSpec, XState, XxzState, DEFAULT_EPSILON_ZERO,
};

const SAMPLE_SIZE: usize = 10_000;
const SAMPLE_SEED: u64 = 20_240_611;

#[derive(Debug, PartialEq)]
enum Status {
    Pass,
    Fail,
    /// Outside the target but inside the tolerated band.
    Report,
}

struct Outcome {
    status: Status,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Sampled {
    state: XState<f64>,
    analytic: f64,
    class: MeasurementClass<f64>,
    oracle: OracleMinimum<f64>,
    slice: OracleMinimum<f64>,
}

impl Sampled {
    fn oracle_discord(&self) -> f64 {
        self.oracle.f - self.state.entropy_joint() + self.state.entropy_a()
    }
}

fn shared_sample() -> Vec<Sampled> {
    let cfg = OracleConfig::default();
    common::sample_states(SAMPLE_SEED, SAMPLE_SIZE)
        .into_par_iter()
        .map(|s| {
            let r = quantum_discord(&s).expect("analytic discord");
            Sampled {
                state: s,
                analytic: r.discord,
                class: r.class,
                oracle: grid_minimize(&s, &cfg).expect("oracle"),
                slice: slice_minimize(&s, 0.0, &cfg).expect("slice oracle"),
            }
        })
        .collect()
}

fn oracle_equivalence(sample: &[Sampled]) -> Outcome {
    let (worst, at) = sample
        .iter()
        .map(|x| (x.analytic - x.oracle_discord()).abs())
        .enumerate()
        .fold(
            (0.0f64, 0),
            |(m, i), (j, e)| if e > m { (e, j) } else { (m, i) },
        );
    let bad = sample
        .iter()
        .filter(|x| {
            let e = (x.analytic - x.oracle_discord()).abs();
            e.is_nan() || e > 1e-9
        })
        .count();
    Outcome::check(
        bad == 0,
        format!(
            "{} states, max |analytic - oracle| = {worst:.3e} (state #{at}), {bad} above 1e-9",
            sample.len()
        ),
    )
}

fn se_diagonals() -> Diagonals<f64> {
    Diagonals::new(0.0783, 0.1250, 0.1, 0.6967).unwrap()
}

fn se_line_roots() -> (Option<f64>, Option<f64>) {
    let diag = se_diagonals();
    let line = LineSegment {
        w0: 0.05,
        z0: 0.0,
        w1: 0.05,
        z1: diag.z_max(),
    };
    let first = |c| trace_boundary(&diag, c, &line, 1e-13).first().map(|p| p.z);
    (
        first(BoundaryCriterion::C0),
        first(BoundaryCriterion::CPlus),
    )
}

fn boundary_landmarks() -> Outcome {
    let (z0, zp) = se_line_roots();
    let ok = matches!((z0, zp), (Some(a), Some(b)) if (a - 0.0655096).abs() <= 1e-5 && (b - 0.0661362).abs() <= 1e-5);
    Outcome::check(
        ok,
        format!("z0 = {z0:?} (target 0.0655096), z+ = {zp:?} (target 0.0661362), tolerance 1e-5"),
    )
}

fn se_window() -> Outcome {
    let (Some(z0), Some(zp)) = se_line_roots() else {
        return Outcome::check(false, "boundary roots not found".into());
    };
    let span = zp - z0;
    let diag = se_diagonals();
    let theta_e = |z: f64| -> Option<(f64, bool)> {
        let s = diag.state(0.05, z).ok()?;
        let r = classify(&s, DEFAULT_EPSILON_ZERO).ok()?;
        match r.class {
            MeasurementClass::SigmaE { theta_e } => {
                let f = conditional_f(&s, MeasurementAngles::unchecked(theta_e, 0.0));
                Some((theta_e, f < closed_form_f0(&s).min(closed_form_fx(&s))))
            }
            _ => None,
        }
    };
    let mut thetas = Vec::new();
    let mut not_se = 0;
    let mut not_below = 0;
    for k in 1..=50 {
        match theta_e(z0 + span * k as f64 / 51.0) {
            Some((t, below)) => {
                thetas.push(t);
                not_below += usize::from(!below);
            }
            None => not_se += 1,
        }
    }
    let monotone = thetas.windows(2).all(|p| p[1] > p[0]);
    let lo = theta_e(z0 + 1e-4 * span).map(|p| p.0);
    let hi = theta_e(zp - 1e-4 * span).map(|p| p.0);
    let limits_ok = matches!((lo, hi), (Some(l), Some(h)) if l <= 0.05 && h >= FRAC_PI_2 - 0.05);
    Outcome::check(
        not_se == 0 && monotone && limits_ok && not_below == 0,
        format!(
            "{} of 50 SE, increasing = {monotone}, theta_e(z0+) = {lo:?}, theta_e(z+-) = {hi:?}, \
             F(theta_e) not below both ends at {not_below} points",
            50 - not_se
        ),
    )
}

fn sq_region() -> Outcome {
    let diag = Diagonals::new(0.5, 0.3, 0.1, 0.1).unwrap();
    let count_sq = |spec: &RegionMapSpec<f64>| {
        region_map(spec, None)
            .unwrap()
            .iter()
            .filter(|r| r.class == ClassCode::Sq)
            .count()
    };
    let square = RegionMapSpec::new(diag, (0.049, 0.056), (0.049, 0.056), (141, 141)).unwrap();
    let sq_square = count_sq(&square);
    let sq_full = count_sq(&RegionMapSpec::full(diag));

    let crossings = |line: &LineSegment<f64>| {
        let mut out = Vec::new();
        for (name, c) in [
            ("C0", BoundaryCriterion::C0),
            ("C+", BoundaryCriterion::CPlus),
        ] {
            for p in trace_boundary(&diag, c, line, 1e-13) {
                out.push(format!("{name} at w=z={:.7}", p.w));
            }
        }
        out
    };
    let on_stated = crossings(&LineSegment {
        w0: 0.049,
        z0: 0.049,
        w1: 0.056,
        z1: 0.056,
    });
    let on_diagonal = crossings(&LineSegment {
        w0: 0.0,
        z0: 0.0,
        w1: 0.056,
        z1: 0.056,
    });
    let c0_root = trace_boundary(
        &diag,
        BoundaryCriterion::C0,
        &LineSegment {
            w0: 0.0,
            z0: 0.0,
            w1: 0.2,
            z1: 0.0,
        },
        1e-13,
    );
    let cp_root = trace_boundary(
        &diag,
        BoundaryCriterion::CPlus,
        &LineSegment {
            w0: 0.0,
            z0: 0.0,
            w1: 0.2,
            z1: 0.0,
        },
        1e-13,
    );
    let as_sum = |v: &[xdiscord::BoundaryPoint<f64>]| {
        v.iter()
            .map(|p| format!("{:.7}", p.w + p.z))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Outcome::check(
        sq_square > 0,
        format!(
            "SQ cells: {sq_square} in [0.049,0.056]^2, {sq_full} on the full 400x400 map; \
             crossings on w=z in [0.049,0.056]: [{}]; on w=z from 0: [{}]; \
             as w+z: C0 = [{}], C+ = [{}]; stated endpoints 0.0502681, 0.0540158",
            on_stated.join("; "),
            on_diagonal.join("; "),
            as_sum(&c0_root),
            as_sum(&cp_root),
        ),
    )
}

fn exact_landmarks() -> Outcome {
    let bell = quantum_discord(&XState::<f64>::bell_phi_plus())
        .unwrap()
        .discord;
    let mut worst_diag = 0.0f64;
    let mut r = common::rng(5);
    let corners = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.5, 0.5, 0.0, 0.0],
        [0.5, 0.0, 0.5, 0.0],
    ];
    let mut diags: Vec<[f64; 4]> = corners.to_vec();
    for _ in 0..2000 {
        let s = common::sample_state(&mut r);
        diags.push(s.diagonals());
    }
    for [a, b, c, d] in diags {
        let s = XState::new(a, b, c, d, 0.0, 0.0).unwrap();
        worst_diag = worst_diag.max(quantum_discord(&s).unwrap().discord);
    }
    let mm = XState::<f64>::maximally_mixed();
    let mm_r = quantum_discord(&mm).unwrap();
    let c0 = compute_c0(&mm).unwrap();
    let cp = compute_cplus(&mm);
    let ok = (bell - 1.0).abs() <= 1e-12
        && worst_diag <= 1e-12
        && mm_r.discord.abs() <= 1e-12
        && mm_r.class == MeasurementClass::Any
        && c0.abs() <= 1e-12
        && cp.abs() <= 1e-12;
    Outcome::check(
        ok,
        format!(
            "Bell {bell:.15}, max diagonal-state discord {worst_diag:.1e}, maximally mixed: \
             discord {:.1e} class {} C0 {c0:.1e} C+ {cp:.1e}",
            mm_r.discord,
            mm_r.class.code()
        ),
    )
}

fn xxz_consistency() -> Outcome {
    let n = 200;
    let cfg = OracleConfig::default();
    let grid: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                (
                    0.5 * i as f64 / (n - 1) as f64,
                    0.5 * j as f64 / (n - 1) as f64,
                )
            })
        })
        .filter(|&(a, z)| z <= 0.5 - a + 1e-15)
        .collect();
    struct Row {
        vs_general: f64,
        vs_oracle: f64,
        bad_class: bool,
    }
    let rows: Vec<Row> = grid
        .par_iter()
        .map(|&(a, z)| {
            let x = XxzState::new(a, 0.0, z).unwrap();
            let s = x.to_xstate().unwrap();
            let special = xxz_discord(&x).unwrap().discord;
            let general = quantum_discord(&s).unwrap();
            let m = grid_minimize(&s, &cfg).unwrap();
            let oracle = m.f - s.entropy_joint() + s.entropy_a();
            Row {
                vs_general: (special - general.discord).abs(),
                vs_oracle: (special - oracle).abs(),
                bad_class: matches!(
                    general.class,
                    MeasurementClass::SigmaE { .. } | MeasurementClass::SigmaQ { .. }
                ),
            }
        })
        .collect();
    let max_general = rows.iter().map(|r| r.vs_general).fold(0.0, f64::max);
    let max_oracle = rows.iter().map(|r| r.vs_oracle).fold(0.0, f64::max);
    let bad_class = rows.iter().filter(|r| r.bad_class).count();

    // continuity and flatness on w + z = |2a - 1/2|
    let mut max_jump = 0.0f64;
    let mut max_spread = 0.0f64;
    let mut boundary_points = 0;
    for i in 0..n {
        let a = 0.5 * i as f64 / (n - 1) as f64;
        let zb = (2.0 * a - 0.5).abs();
        if zb > 0.5 - a {
            continue;
        }
        boundary_points += 1;
        let d = |z: f64| {
            xxz_discord(&XxzState::new(a, 0.0, z).unwrap())
                .unwrap()
                .discord
        };
        let delta = 1e-11;
        let below = if zb >= delta { d(zb - delta) } else { d(zb) };
        let above = if zb + delta <= 0.5 - a {
            d(zb + delta)
        } else {
            d(zb)
        };
        max_jump = max_jump.max((above - below).abs());
        let s = XxzState::new(a, 0.0, zb).unwrap().to_xstate().unwrap();
        let fs: Vec<f64> = (0..100)
            .map(|k| {
                conditional_f(
                    &s,
                    MeasurementAngles::unchecked(FRAC_PI_2 * k as f64 / 99.0, 0.0),
                )
            })
            .collect();
        let spread = fs.iter().cloned().fold(f64::MIN, f64::max)
            - fs.iter().cloned().fold(f64::MAX, f64::min);
        max_spread = max_spread.max(spread);
    }
    Outcome::check(
        max_general <= 1e-10 && max_oracle <= 1e-9 && max_jump <= 1e-9 && max_spread <= 1e-9 && bad_class == 0,
        format!(
            "{} grid states: max |xxz - general| {max_general:.1e}, max |xxz - oracle| {max_oracle:.1e}, \
             {bad_class} SE/SQ; {boundary_points} boundary points: max jump {max_jump:.1e}, \
             max F spread over theta {max_spread:.1e}",
            rows.len()
        ),
    )
}

fn derivative_and_symmetry(sample: &[Sampled]) -> Outcome {
    let mut r = common::rng(77);
    let states = common::sample_states(78, SAMPLE_SIZE);
    let f = |s: &XState<f64>, t: f64, p: f64| conditional_f(s, MeasurementAngles::unchecked(t, p));

    let mut worst_sym = 0.0f64;
    let mut worst_rel = 0.0f64;
    let mut deriv_fail = 0;
    let mut deriv_skipped = 0;
    let mut curv_fail = 0;
    for s in &states {
        let theta = r.gen::<f64>() * PI;
        let phi = r.gen::<f64>() * 2.0 * PI;
        let v = f(s, theta, phi);
        worst_sym = worst_sym
            .max((v - f(s, PI - theta, phi)).abs())
            .max((v - f(s, theta, 2.0 * PI - phi)).abs());

        // Richardson-extrapolated central difference of F(·, 0)
        let t = theta.clamp(2e-3, PI - 2e-3);
        let h = 1e-3;
        let cd = |h: f64| (f(s, t + h, 0.0) - f(s, t - h, 0.0)) / (2.0 * h);
        let fd = (4.0 * cd(h / 2.0) - cd(h)) / 3.0;
        match c_theta(s, t) {
            Ok(ct) => {
                let an = -(t.sin() / 4.0) * ct;
                let err = (fd - an).abs();
                // relative check; an absolute floor covers stationary points
                if err > 1e-5 * an.abs() + 1e-10 {
                    deriv_fail += 1;
                }
                if an.abs() > 1e-6 {
                    worst_rel = worst_rel.max(err / an.abs());
                }
            }
            Err(_) => deriv_skipped += 1,
        }

        if theta > 1e-3 && theta < PI - 1e-3 {
            let hp = 1e-3;
            let d2 = |p: f64| {
                (f(s, theta, p + hp) - 2.0 * f(s, theta, p) + f(s, theta, p - hp)) / (hp * hp)
            };
            if d2(0.0) < -1e-9 || d2(FRAC_PI_2) > 1e-9 {
                curv_fail += 1;
            }
        }
    }

    let worst_phi = sample
        .iter()
        .map(|x| (x.oracle.f - x.slice.f).abs())
        .fold(0.0, f64::max);
    Outcome::check(
        worst_sym <= 1e-12 && deriv_fail == 0 && curv_fail == 0 && worst_phi <= 1e-10,
        format!(
            "{} pairs: max symmetry error {worst_sym:.1e}; C_theta vs FD: {deriv_fail} failures, \
             max rel {worst_rel:.1e}, {deriv_skipped} degenerate skipped; phi curvature failures \
             {curv_fail}; max |grid min - phi=0 min| {worst_phi:.1e} over {} states",
            states.len(),
            sample.len()
        ),
    )
}

fn class_prevalence(sample: &[Sampled]) -> Outcome {
    let axis = sample
        .iter()
        .filter(|x| matches!(x.class, MeasurementClass::SigmaZ | MeasurementClass::SigmaX))
        .count();
    let count = |code: &str| sample.iter().filter(|x| x.class.code() == code).count();
    let frac = axis as f64 / sample.len() as f64;
    let status = if frac > 0.99 {
        Status::Pass
    } else if frac >= 0.985 {
        Status::Report
    } else {
        Status::Fail
    };
    Outcome {
        status,
        detail: format!(
            "SZ+SX fraction {frac:.4} (SZ {}, SX {}, SE {}, SQ {}, ANY {})",
            count("SZ"),
            count("SX"),
            count("SE"),
            count("SQ"),
            count("ANY")
        ),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let sample = shared_sample();
    println!(
        "acceptance: sampled {} states with oracle minima in {:.1}s",
        sample.len(),
        start.elapsed().as_secs_f64()
    );

    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "oracle equivalence",
            Box::new(|| oracle_equivalence(&sample)),
        ),
        ("boundary landmarks", Box::new(boundary_landmarks)),
        ("SE window", Box::new(se_window)),
        ("SQ region", Box::new(sq_region)),
        ("exact landmarks", Box::new(exact_landmarks)),
        ("XXZ consistency", Box::new(xxz_consistency)),
        (
            "derivatives and symmetry",
            Box::new(|| derivative_and_symmetry(&sample)),
        ),
        ("class prevalence", Box::new(|| class_prevalence(&sample))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let tag = match out.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Report => "REPORT",
        };
        println!(
            "acceptance criterion {} ({name}): {tag} [{:.1}s] {}",
            i + 1,
            t.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
