//! Bessel functions of the first kind, orders 0 through 2, for non-negative
//! real arguments.
//!
//! Three regimes:
//! * `x < 8`: direct power series for every order.
//! * `8 <= x < 30`: Miller backward recurrence normalised by
//!   `J0 + 2 (J2 + J4 + ...) = 1`.
//! * `x >= 30`: Hankel asymptotic expansion for `J0`, `J1`; `J2` by upward
//!   recurrence, which is stable for `x > 2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 30.0;

/// `J_order(x)` for `order` in {0, 1, 2} and finite `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    if order > 2 {
        return Err(Error::invalid(format!(
            "Bessel order {order} not supported (0, 1, 2 only)"
        )));
    }
    Ok(bessel_j012(x)[order as usize])
}

/// `[J0(x), J1(x), J2(x)]` for `x >= 0`. The caller guarantees the domain.
pub fn bessel_j012(x: f64) -> [f64; 3] {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        [1.0, 0.0, 0.0]
    } else if x < SERIES_LIMIT {
        [series(0, x), series(1, x), series(2, x)]
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        let j0 = hankel(0, x);
        let j1 = hankel(1, x);
        [j0, j1, 2.0 * j1 / x - j0]
    }
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let mut sum = term;
    let n = order as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> [f64; 3] {
    // even start order well above x
    let start = 2 * ((x as usize + 40) / 2);
    let mut next = 0.0_f64; // f_{k+1}
    let mut current = 1e-30_f64; // f_k
    let mut norm = 0.0;
    let mut out = [0.0; 3];
    for k in (1..=start).rev() {
        // f_{k-1} = (2k/x) f_k - f_{k+1}
        let prev = 2.0 * k as f64 / x * current - next;
        next = current;
        current = prev;
        let order = k - 1;
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * current;
        }
        if order <= 2 {
            out[order] = current;
        }
    }
    norm += out[0];
    [out[0] / norm, out[1] / norm, out[2] / norm]
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..120 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // k odd -> Q, k even -> P; signs alternate in pairs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    // chi = x - (order/2 + 1/4) pi, expanded to avoid rounding x - const
    let shift = (0.5 * order as f64 + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (ss, cs) = shift.sin_cos();
    let cos_chi = cx * cs + sx * ss;
    let sin_chi = sx * cs - cx * ss;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from the defining integral J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt,
    // evaluated with the trapezoid rule, which is spectrally accurate here because the
    // integrand is smooth and even about both endpoints.
    fn integral_reference(n: u32, x: f64) -> f64 {
        let steps = 20_000;
        let h = PI / steps as f64;
        let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
        let mut sum = 0.5 * (f(0.0) + f(PI));
        for i in 1..steps {
            sum += f(i as f64 * h);
        }
        sum * h / PI
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        // located by bisection on the power series alone
        let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if series(0, lo) * series(0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo - 2.404825557695773).abs() < 1e-14);
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn matches_integral_representation_across_regimes() {
        for &x in &[1e-3, 0.3, 1.0, 2.5, 5.0, 7.99, 8.0, 8.01, 12.3, 20.0, 29.9, 30.0, 31.7, 55.0, 140.0] {
            let got = bessel_j012(x);
            for n in 0..3 {
                let want = integral_reference(n, x);
                assert!(
                    (got[n as usize] - want).abs() < 1e-12,
                    "J{n}({x}) = {} vs {want}",
                    got[n as usize]
                );
            }
        }
    }

    #[test]
    fn recurrence_holds() {
        let mut x = 1e-3;
        while x <= 50.0 {
            let [j0, j1, j2] = bessel_j012(x);
            assert!((j2 - (2.0 / x * j1 - j0)).abs() < 1e-10, "x = {x}");
            x *= 1.07;
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(3, 1.0).is_err());
        assert!(bessel_j(1, f64::NAN).is_err());
    }
}
