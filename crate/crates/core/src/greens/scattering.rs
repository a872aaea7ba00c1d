//! Reflected (scattering) part of the half-space Green's tensor as an
//! angular-spectrum integral over the in-plane wavenumber.
//!
//! Both emitters sit at scaled height `z̃`, separated laterally by `x̃` along
//! the x axis. In units where `k₀ = 1`, with `q = k∥/k₀`, `kz = k⊥/k₀`:
//!
//! ```text
//! G̃ = (i/8π) ∫₀^∞ dq (q/kz) e^{2i kz z̃} [ r_s S + r_p P ]
//! S = diag(J0 + J2, J0 − J2, 0)
//! P = [ −kz²(J0 − J2)     0            −2i q kz J1 ]
//!     [ 0                 −kz²(J0 + J2)  0         ]
//!     [ 2i q kz J1        0             2 q² J0    ]
//! ```
//!
//! Bessel functions are evaluated at `q x̃`. The range splits into the
//! propagating branch `q ∈ [0, 1]`, integrated in `φ` with `kz = sin φ`,
//! `q = cos φ`, and the evanescent branch `q > 1`, integrated in `κ` with
//! `kz = iκ`, `q = √(1 + κ²)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{GreensTensor, Polarization};
use crate::error::{Error, Result};
use crate::media::Reflector;
use crate::numerics::{
    bessel_j012, integrate_evanescent_partitioned, integrate_partitioned, QuadratureError,
    QuadratureSpec,
};

const MAX_INITIAL_PANELS: usize = 4096;
const I: Complex64 = Complex64::new(0.0, 1.0);

type Components = [Complex64; 4]; // xx, yy, zz, xz

#[inline]
fn kernel(
    reflector: &Reflector,
    polarization: Polarization,
    x: f64,
    kz: Complex64,
    q: f64,
) -> Components {
    let (mut r_s, r_p) = reflector.coefficients(kz);
    if polarization == Polarization::POnly {
        r_s = Complex64::new(0.0, 0.0);
    }
    let [j0, mut j1, j2] = bessel_j012(q * x.abs());
    if x < 0.0 {
        j1 = -j1;
    }
    let kz2 = kz * kz;
    [
        r_s * (j0 + j2) - r_p * kz2 * (j0 - j2),
        r_s * (j0 - j2) - r_p * kz2 * (j0 + j2),
        r_p * (2.0 * q * q * j0),
        -2.0 * I * r_p * kz * (q * j1),
    ]
}

const MAX_POLE_LEVELS: usize = 40;

fn uniform_partition(lo: f64, hi: f64, width: f64, extra: &[f64]) -> Vec<f64> {
    let n = if width.is_finite() && width > 0.0 {
        (((hi - lo) / width).ceil() as usize).clamp(1, MAX_INITIAL_PANELS)
    } else {
        1
    };
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * (i as f64 / n as f64))
        .collect();
    pts.extend(extra.iter().copied().filter(|&p| p > lo && p < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * hi.abs().max(1.0));
    pts
}

fn quadrature_error<T: std::fmt::Debug>(
    err: QuadratureError<T>,
    branch: &str,
    x: f64,
    z: f64,
) -> Error {
    let (error, subdivisions) = err.progress();
    match err {
        QuadratureError::NotConverged { .. } | QuadratureError::NonFinite { .. } => Error::Quadrature {
            context: format!(
                "scattering tensor components xx/yy/zz/xz, {branch} branch, x̃ = {x}, z̃ = {z} ({err})"
            ),
            error,
            subdivisions,
        },
        other => Error::invalid(format!("{branch} branch: {other}")),
    }
}

/// Scattering tensor in units of `k₀` for a signed lateral offset `x`
/// (observation minus source) and common scaled height `z > 0`.
pub(crate) fn scattering_tensor_scaled(
    reflector: &Reflector,
    polarization: Polarization,
    x: f64,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<GreensTensor> {
    if matches!(reflector, Reflector::None) {
        return Ok(GreensTensor::zero());
    }

    // about half an oscillation of the Bessel and phase factors per initial panel
    let rate = x.abs().max(2.0 * z);
    let prop_pts = uniform_partition(0.0, FRAC_PI_2, PI / rate, &[]);
    let propagating = integrate_partitioned(
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            let kz = Complex64::new(s, 0.0);
            let phase = Complex64::new(0.0, 2.0 * s * z).exp() * c;
            let k = kernel(reflector, polarization, x, kz, c);
            [k[0] * phase, k[1] * phase, k[2] * phase, k[3] * phase]
        },
        &prop_pts,
        spec,
    )
    .map_err(|e| quadrature_error(e, "propagating", x, z))?;

    let decay = 2.0 * z;
    let cutoff = spec.evanescent_cutoff_scale / decay;
    let mut extra = Vec::new();
    if let Some((centre, width)) = reflector.plasmon_pole() {
        // breakpoints at geometrically spaced offsets resolve a Lorentzian of
        // any width with a bounded number of panels per decade
        extra.push(centre);
        let mut offset = width;
        while offset < centre && extra.len() < 2 * MAX_POLE_LEVELS {
            extra.push(centre - offset);
            extra.push(centre + offset);
            offset *= 3.0;
        }
    }
    let evan_pts = uniform_partition(0.0, cutoff, PI / x.abs(), &extra);
    let interior = &evan_pts[1..evan_pts.len() - 1];
    let evanescent = integrate_evanescent_partitioned(
        |kappa: f64| {
            let q = (1.0 + kappa * kappa).sqrt();
            let kz = Complex64::new(0.0, kappa);
            // (q/kz) dq = −i dκ
            let w = Complex64::new(0.0, -(-decay * kappa).exp());
            let k = kernel(reflector, polarization, x, kz, q);
            [k[0] * w, k[1] * w, k[2] * w, k[3] * w]
        },
        decay,
        interior,
        spec,
    )
    .map_err(|e| quadrature_error(e, "evanescent", x, z))?;

    let pref = I / (8.0 * PI);
    let v: Components = std::array::from_fn(|i| pref * (propagating.value[i] + evanescent.value[i]));
    let zero = Complex64::new(0.0, 0.0);
    Ok(GreensTensor([
        [v[0], zero, v[3]],
        [zero, v[1], zero],
        [-v[3], zero, v[2]],
    ]))
}
