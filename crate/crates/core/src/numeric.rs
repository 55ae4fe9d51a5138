//! One-dimensional root bracketing and minimisation.

use crate::real::Real;

/// Brent's method on a sign-changing bracket `[lo, hi]`.
///
/// Returns `None` when the endpoints do not bracket a root. Iteration stops
/// once the bracket is narrower than `xtol` (plus a few ulps of the iterate)
/// or the function is exactly zero.
pub fn brent_root<T, F>(mut f: F, lo: T, hi: T, xtol: T, max_iter: usize) -> Option<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Some(a);
    }
    if fb == T::zero() {
        return Some(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Some(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::lit(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1.copysign(xm)
        };
        fb = f(b);
        if fb.is_nan() {
            return None;
        }
    }
    Some(b)
}

/// Plain bisection to `xtol`. Used where the bracket function is cheap and
/// robustness matters more than iteration count.
pub fn bisect<T, F>(mut f: F, mut lo: T, mut hi: T, xtol: T) -> Option<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Some(lo);
    }
    if fhi == T::zero() {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let half = T::lit(0.5);
    while (hi - lo).abs() > xtol {
        let mid = half * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(half * (lo + hi))
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))` for the best point seen, including both endpoints,
/// so the result is never worse than the bracket ends.
pub fn golden_section_min<T, F>(mut f: F, lo: T, hi: T, xtol: T, max_iter: usize) -> (T, T)
where
    T: Real,
    F: FnMut(T) -> T,
{
    // 1/phi
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = (lo, hi);
    let (fa_end, fb_end) = (f(a), f(b));
    let mut best = if fa_end <= fb_end {
        (a, fa_end)
    } else {
        (b, fb_end)
    };

    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while (b - a).abs() > xtol && iter < max_iter {
        iter += 1;
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}
