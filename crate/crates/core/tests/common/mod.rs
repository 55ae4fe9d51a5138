#![allow(dead_code)]

use nalgebra::{Complex, Matrix2, Matrix4, Vector2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xdiscord::XState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Diagonal uniform on the simplex (normalised Exp(1) draws), coherences
/// uniform within their positivity bounds.
pub fn sample_state<R: Rng>(rng: &mut R) -> XState<f64> {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let sum: f64 = e.iter().sum();
    let [a, b, c, d] = e.map(|x| x / sum);
    let w = rng.gen::<f64>() * (a * d).sqrt();
    let z = rng.gen::<f64>() * (b * c).sqrt();
    XState::new(a, b, c, d, w, z).expect("sampled state is valid")
}

pub fn sample_states(seed: u64, n: usize) -> Vec<XState<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| sample_state(&mut r)).collect()
}

/// Dense density matrix in the basis |00>, |01>, |10>, |11>.
pub fn density(s: &XState<f64>) -> Matrix4<f64> {
    Matrix4::new(
        s.a(),
        0.0,
        0.0,
        s.w(),
        0.0,
        s.b(),
        s.z(),
        0.0,
        0.0,
        s.z(),
        s.c(),
        0.0,
        s.w(),
        0.0,
        0.0,
        s.d(),
    )
}

fn entropy_of(eigs: impl IntoIterator<Item = f64>) -> f64 {
    eigs.into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

pub fn dense_entropy_joint(s: &XState<f64>) -> f64 {
    entropy_of(density(s).symmetric_eigen().eigenvalues.iter().copied())
}

pub fn dense_eigenvalues(s: &XState<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = density(s)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

fn reduced(m: &Matrix4<f64>, keep_a: bool) -> Matrix2<f64> {
    let mut r = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                r[(i, j)] += if keep_a {
                    m[(2 * i + k, 2 * j + k)]
                } else {
                    m[(2 * k + i, 2 * k + j)]
                };
            }
        }
    }
    r
}

pub fn dense_entropy_a(s: &XState<f64>) -> f64 {
    entropy_of(
        reduced(&density(s), true)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied(),
    )
}

pub fn dense_entropy_b(s: &XState<f64>) -> f64 {
    entropy_of(
        reduced(&density(s), false)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied(),
    )
}

/// Entropy of a 2×2 Hermitian matrix from its trace and discriminant.
fn entropy_2x2(m: &Matrix2<Complex<f64>>) -> f64 {
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    let diff = (m[(0, 0)] - m[(1, 1)]).re;
    let off = m[(0, 1)].norm();
    let disc = (diff * diff + 4.0 * off * off).sqrt();
    entropy_of([(tr + disc) / 2.0, (tr - disc) / 2.0])
}

/// `F(θ, φ)` by explicit projection of qubit A onto `±n(θ, φ)`.
pub fn projected_f(s: &XState<f64>, theta: f64, phi: f64) -> f64 {
    projected_f_on(s, theta, phi, true)
}

/// Same with the measured qubit chosen; the other one is kept.
pub fn projected_f_on(s: &XState<f64>, theta: f64, phi: f64, measure_a: bool) -> f64 {
    let rho = density(s).map(|x| Complex::new(x, 0.0));
    let up = Vector2::new(
        Complex::new((theta / 2.0).cos(), 0.0),
        Complex::from_polar((theta / 2.0).sin(), phi),
    );
    let down = Vector2::new(
        Complex::new((theta / 2.0).sin(), 0.0),
        -Complex::from_polar((theta / 2.0).cos(), phi),
    );
    let mut total = 0.0;
    for v in [up, down] {
        // <v| ρ |v> on the measured qubit, a 2×2 operator on the other one
        let idx = |meas: usize, kept: usize| {
            if measure_a {
                2 * meas + kept
            } else {
                2 * kept + meas
            }
        };
        let mut m = Matrix2::<Complex<f64>>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex::new(0.0, 0.0);
                for k in 0..2 {
                    for l in 0..2 {
                        acc += v[k].conj() * rho[(idx(k, i), idx(l, j))] * v[l];
                    }
                }
                m[(i, j)] = acc;
            }
        }
        let p = (m[(0, 0)] + m[(1, 1)]).re;
        if p > 0.0 {
            total += p * entropy_2x2(&m.map(|x| x / p));
        }
    }
    total
}

/// Minimum over θ at φ = 0 of the projected `F`: grid of `n` points, then
/// golden-section refinement.
pub fn projected_min_over_theta(s: &XState<f64>, n: usize, measure_a: bool) -> f64 {
    let f = |t: f64| projected_f_on(s, t, 0.0, measure_a);
    let mut best = (0.0, f64::INFINITY);
    for i in 0..n {
        let t = std::f64::consts::FRAC_PI_2 * i as f64 / (n - 1) as f64;
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let step = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
    let (mut lo, mut hi) = (
        (best.0 - step).max(0.0),
        (best.0 + step).min(std::f64::consts::FRAC_PI_2),
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best.1.min(f((lo + hi) / 2.0))
}
