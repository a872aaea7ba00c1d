//! Homogeneous-space dyadic Green's tensor.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::GreensTensor;

/// Below this scaled distance the imaginary parts are summed from their
/// Taylor series; the closed forms cancel catastrophically near zero.
const SERIES_BELOW: f64 = 0.5;

/// `6π Im` of the transverse coefficient: `(3/2)(sin ρ/ρ + cos ρ/ρ² − sin ρ/ρ³)`.
pub(crate) fn transverse_decay(rho: f64) -> f64 {
    if rho < SERIES_BELOW {
        // (3/2) Σ_{m≥1} (−1)^{m−1} 4m² ρ^{2m−2} / (2m+1)!
        let r2 = rho * rho;
        let mut sum = 0.0;
        let mut power = 1.0; // ρ^{2m−2}
        let mut fact = 6.0; // (2m+1)!
        for m in 1..30 {
            let mf = m as f64;
            let term = 4.0 * mf * mf * power / fact;
            sum += if m % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
            power *= r2;
            fact *= (2.0 * mf + 2.0) * (2.0 * mf + 3.0);
        }
        1.5 * sum
    } else {
        let (s, c) = rho.sin_cos();
        1.5 * (s / rho + c / (rho * rho) - s / (rho * rho * rho))
    }
}

/// `6π Im` of the longitudinal coefficient: `3(sin ρ − ρ cos ρ)/ρ³`.
pub(crate) fn longitudinal_decay(rho: f64) -> f64 {
    if rho < SERIES_BELOW {
        // 3 Σ_{k≥1} (−1)^{k+1} 2k ρ^{2k−2} / (2k+1)!
        let r2 = rho * rho;
        let mut sum = 0.0;
        let mut power = 1.0;
        let mut fact = 6.0;
        for k in 1..30 {
            let kf = k as f64;
            let term = 2.0 * kf * power / fact;
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
            power *= r2;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        3.0 * sum
    } else {
        let (s, c) = rho.sin_cos();
        3.0 * (s - rho * c) / (rho * rho * rho)
    }
}

/// Free tensor in units of the vacuum wavenumber for the scaled separation
/// vector `r` (non-zero): `G̃ = A(ρ) I + B(ρ) r̂r̂`.
pub(crate) fn free_dyadic_scaled(r: [f64; 3]) -> GreensTensor {
    let rho = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    debug_assert!(rho > 0.0);
    let (s, c) = rho.sin_cos();
    let inv = 1.0 / rho;
    let inv2 = inv * inv;
    let pref = 1.0 / (4.0 * PI * rho);

    let a_re = pref * (c * (1.0 - inv2) - s * inv);
    let a_im = transverse_decay(rho) / (6.0 * PI);
    let b_re = pref * (c * (3.0 * inv2 - 1.0) + 3.0 * s * inv);
    let b_im = (longitudinal_decay(rho) - transverse_decay(rho)) / (6.0 * PI);
    let a = Complex64::new(a_re, a_im);
    let b = Complex64::new(b_re, b_im);

    let u = [r[0] * inv, r[1] * inv, r[2] * inv];
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = b * (u[i] * u[j]);
            if i == j {
                *cell += a;
            }
        }
    }
    GreensTensor(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_closed_forms_agree_at_switch() {
        for rho in [0.45, 0.499_999, 0.5, 0.55] {
            let (s, c) = f64::sin_cos(rho);
            let t = 1.5 * (s / rho + c / (rho * rho) - s / rho.powi(3));
            let l = 3.0 * (s - rho * c) / rho.powi(3);
            assert!((transverse_decay(rho) - t).abs() < 1e-13);
            assert!((longitudinal_decay(rho) - l).abs() < 1e-13);
        }
        assert_eq!(transverse_decay(0.0), 1.0);
        assert_eq!(longitudinal_decay(0.0), 1.0);
    }

    #[test]
    fn closed_forms_at_unit_distance() {
        assert!((transverse_decay(1.0) - 0.810_453_5).abs() < 1e-6);
        assert!((longitudinal_decay(1.0) - 0.903_506_0).abs() < 1e-6);
    }

    #[test]
    fn dyadic_is_symmetric() {
        let g = free_dyadic_scaled([0.3, -0.7, 1.1]);
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.0[i][j] - g.0[j][i]).norm() < 1e-16);
            }
        }
    }
}
