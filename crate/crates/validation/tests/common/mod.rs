//! Closed-form references, written independently of the library.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

pub type Tensor = [[Complex64; 3]; 3];
pub type Density = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Homogeneous-space dyadic in units of `k₀` at scaled separation `r`.
pub fn free_dyadic(r: [f64; 3]) -> Tensor {
    let rho = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let u = [r[0] / rho, r[1] / rho, r[2] / rho];
    let i = Complex64::i();
    let phase = (i * rho).exp() / (4.0 * PI * rho);
    let a = phase * (1.0 + i / rho - 1.0 / (rho * rho));
    let b = phase * (3.0 / (rho * rho) - 3.0 * i / rho - 1.0);
    let mut g = [[ZERO; 3]; 3];
    for (j, row) in g.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let delta = if j == k { 1.0 } else { 0.0 };
            *cell = a * delta + b * u[j] * u[k];
        }
    }
    g
}

/// Reflected tensor above a perfect conductor: the image source sits at
/// `−z` with its parallel components reversed.
pub fn image_tensor(x: f64, z: f64) -> Tensor {
    let g = free_dyadic([x, 0.0, 2.0 * z]);
    let mirror = [-1.0, -1.0, 1.0];
    let mut out = g;
    for row in out.iter_mut() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell *= mirror[k];
        }
    }
    out
}

pub fn max_abs(t: &Tensor) -> f64 {
    t.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn relative_gap(got: &Tensor, want: &Tensor) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            worst = worst.max((got[j][k] - want[j][k]).norm());
        }
    }
    worst / max_abs(want)
}

/// `Γ₁₂/Γ₀`, dipoles along the separation.
pub fn free_gamma_parallel(x: f64) -> f64 {
    3.0 * (x.sin() - x * x.cos()) / x.powi(3)
}

/// `Γ₁₂/Γ₀`, dipoles normal to the separation.
pub fn free_gamma_normal(x: f64) -> f64 {
    -1.5 * ((1.0 - x * x) * x.sin() - x * x.cos()) / x.powi(3)
}

/// `Ω₁₂/Γ₀`, dipoles along the separation.
pub fn free_omega_parallel(x: f64) -> f64 {
    -1.5 * (x.cos() + x * x.sin()) / x.powi(3)
}

/// `Ω₁₂/Γ₀`, dipoles normal to the separation.
pub fn free_omega_normal(x: f64) -> f64 {
    -0.75 * ((1.0 - 1.0 / (x * x)) * x.cos() - x.sin() / x) / x
}

/// `Γ/Γ₀` for a normal dipole above a perfect conductor.
pub fn pec_gamma_normal(z: f64) -> f64 {
    let t = 2.0 * z;
    1.0 + 3.0 / (8.0 * z.powi(3)) * (t.sin() - t * t.cos())
}

/// `Γ/Γ₀` for a parallel dipole above a perfect conductor.
pub fn pec_gamma_parallel(z: f64) -> f64 {
    let t = 2.0 * z;
    1.0 - 3.0 / (16.0 * z.powi(3)) * (t * t.cos() + (2.0 * z * z - 1.0) * t.sin())
}

/// Density matrix at `Γ₀t = t` from `|eg⟩` in the basis `ee, eg, ge, gg`,
/// assembled from the symmetric and antisymmetric combinations.
pub fn eg_evolution(gamma: f64, gamma_12: f64, omega_12: f64, t: f64) -> Density {
    let slow = (-(gamma - gamma_12) * t).exp();
    let fast = (-(gamma + gamma_12) * t).exp();
    let env = (-gamma * t).exp();
    let phi_p = 0.5 * (slow + fast);
    let phi_m = (2.0 * omega_12 * t).cos() * env;
    let psi_p = -0.5 * (slow - fast);
    let psi_m = (2.0 * omega_12 * t).sin() * env;
    let mut rho = [[ZERO; 4]; 4];
    rho[1][1] = Complex64::new(0.5 * (phi_p + phi_m), 0.0);
    rho[2][2] = Complex64::new(0.5 * (phi_p - phi_m), 0.0);
    rho[1][2] = Complex64::new(0.5 * psi_p, 0.5 * psi_m);
    rho[2][1] = Complex64::new(0.5 * psi_p, -0.5 * psi_m);
    rho[3][3] = Complex64::new(1.0 - (0.5 * (slow + fast)), 0.0);
    rho
}

/// `½(|ψ₋⟩⟨ψ₋| + |gg⟩⟨gg|)` with `ψ₋ = (|eg⟩ − |ge⟩)/√2`.
pub fn steady_entangled() -> Density {
    let mut rho = [[ZERO; 4]; 4];
    rho[1][1] = Complex64::new(0.25, 0.0);
    rho[2][2] = Complex64::new(0.25, 0.0);
    rho[1][2] = Complex64::new(-0.25, 0.0);
    rho[2][1] = Complex64::new(-0.25, 0.0);
    rho[3][3] = Complex64::new(0.5, 0.0);
    rho
}

/// Concurrence of an X-state.
pub fn x_state_concurrence(rho: &Density) -> f64 {
    let a = rho[1][2].norm() - (rho[0][0].re * rho[3][3].re).max(0.0).sqrt();
    let b = rho[0][3].norm() - (rho[1][1].re * rho[2][2].re).max(0.0).sqrt();
    2.0 * a.max(b).max(0.0)
}

pub fn max_deviation(a: &Density, b: &Density) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// Eigenvalues of a state confined to `{ee, gg}` populations and the
/// `{eg, ge}` block.
pub fn sector_eigenvalues(rho: &Density) -> [f64; 4] {
    let (a, d) = (rho[1][1].re, rho[2][2].re);
    let b = rho[1][2].norm();
    let mean = 0.5 * (a + d);
    let split = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    [rho[0][0].re, mean - split, mean + split, rho[3][3].re]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `n` logarithmically spaced points from `a` to `b`.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64))
        .collect()
}
