use num_complex::Complex64;

use super::linalg::{hermitian_eigen, singular_values, Matrix4};
use super::state::TwoQubitState;
use crate::error::Result;

/// `σ_y ⊗ σ_y` in the `|ee⟩, |eg⟩, |ge⟩, |gg⟩` basis is real and anti-diagonal.
const SPIN_FLIP: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λᵢ` are obtained as singular values of `τ = Fᵀ (σ_y⊗σ_y) F` for any
/// factor `ρ = F F†`, here `F = V √Λ` from the eigendecomposition. This
/// avoids square roots of nearly vanishing eigenvalues of `ρ ρ̃`, which would
/// otherwise cost half the significant digits on rank-deficient states.
pub fn concurrence(state: &TwoQubitState) -> Result<f64> {
    TwoQubitState::new(*state.matrix())?;
    Ok(concurrence_unchecked(state.matrix()))
}

pub(crate) fn concurrence_unchecked(rho: &Matrix4) -> f64 {
    let (values, vectors) = hermitian_eigen(rho);
    let mut f = [[Complex64::new(0.0, 0.0); 4]; 4];
    for k in 0..4 {
        if values[k] > 0.0 {
            let w = values[k].sqrt();
            for r in 0..4 {
                f[r][k] = vectors[r][k] * w;
            }
        }
    }
    // τ_kl = Σ_r f_{r k} Y_{r, 3−r} f_{3−r, l}
    let mut tau = [[Complex64::new(0.0, 0.0); 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            let mut sum = Complex64::new(0.0, 0.0);
            for r in 0..4 {
                let a = f[r][k];
                let b = f[3 - r][l];
                if a != Complex64::new(0.0, 0.0) && b != Complex64::new(0.0, 0.0) {
                    sum += a * b * SPIN_FLIP[r];
                }
            }
            tau[k][l] = sum;
        }
    }
    let lambda = singular_values(&tau);
    (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn reference_states() {
        assert_eq!(concurrence(&TwoQubitState::ground()).unwrap(), 0.0);
        assert!((concurrence(&TwoQubitState::subradiant()).unwrap() - 1.0).abs() < 1e-14);
        assert!((concurrence(&TwoQubitState::superradiant()).unwrap() - 1.0).abs() < 1e-14);
        assert!((concurrence(&TwoQubitState::steady_entangled()).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn werner_states() {
        // p|Φ⟩⟨Φ| + (1 − p) I/4 with a Bell state: C = max(0, (3p − 1)/2)
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.9, 1.0] {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let bell = TwoQubitState::pure([
                Complex64::new(h, 0.0),
                ZERO,
                ZERO,
                Complex64::new(h, 0.0),
            ])
            .unwrap();
            let mut m = *bell.matrix();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, c) in row.iter_mut().enumerate() {
                    *c *= p;
                    if i == j {
                        *c += (1.0 - p) / 4.0;
                    }
                }
            }
            let c = concurrence(&TwoQubitState::new(m).unwrap()).unwrap();
            assert!((c - (1.5 * p - 0.5).max(0.0)).abs() < 1e-13, "p = {p}: {c}");
        }
    }

    #[test]
    fn rejects_non_physical_input() {
        let mut m = *TwoQubitState::ground().matrix();
        m[0][0] = Complex64::new(0.5, 0.0);
        assert!(concurrence(&TwoQubitState::from_unchecked(m)).is_err());
    }

    fn pure_from(parts: &[f64]) -> Option<TwoQubitState> {
        let amps: Vec<Complex64> = parts.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        let a = [amps[0] / norm, amps[1] / norm, amps[2] / norm, amps[3] / norm];
        TwoQubitState::pure(a).ok()
    }

    proptest! {
        #[test]
        fn pure_states_match_closed_form(parts in proptest::collection::vec(-1.0f64..1.0, 8)) {
            if let Some(s) = pure_from(&parts) {
                let m = s.matrix();
                // C = 2|a_ee a_gg − a_eg a_ge| for a pure state; recover amplitudes
                // from the first non-negligible column
                let col = (0..4).max_by(|&i, &j| m[i][i].re.total_cmp(&m[j][j].re)).unwrap();
                let scale = m[col][col].re.sqrt();
                let a: Vec<Complex64> = (0..4).map(|r| m[r][col] / scale).collect();
                let want = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
                let got = concurrence(&s).unwrap();
                prop_assert!((got - want).abs() < 1e-10, "{got} vs {want}");
            }
        }

        #[test]
        fn x_states_match_shortcut(
            p in 0.0f64..1.0,
            share in 0.0f64..1.0,
            coherence in 0.0f64..1.0,
            phase in 0.0f64..6.3,
        ) {
            // ρ₁₁ = 0, single-excitation block of weight p, rest in |gg⟩
            let (a, b) = (p * share, p * (1.0 - share));
            let c = Complex64::from_polar(coherence * (a * b).sqrt(), phase);
            let mut m = [[ZERO; 4]; 4];
            m[1][1] = Complex64::new(a, 0.0);
            m[2][2] = Complex64::new(b, 0.0);
            m[1][2] = c;
            m[2][1] = c.conj();
            m[3][3] = Complex64::new(1.0 - p, 0.0);
            let s = TwoQubitState::new(m).unwrap();
            let got = concurrence(&s).unwrap();
            prop_assert!((got - 2.0 * c.norm()).abs() < 1e-12, "{got} vs {}", 2.0 * c.norm());
        }

        #[test]
        fn bounded_for_mixtures(parts in proptest::collection::vec(-1.0f64..1.0, 16), w in 0.0f64..1.0) {
            if let (Some(s1), Some(s2)) = (pure_from(&parts[..8]), pure_from(&parts[8..])) {
                let mut m = *s1.matrix();
                for i in 0..4 {
                    for j in 0..4 {
                        m[i][j] = w * m[i][j] + (1.0 - w) * s2.matrix()[i][j];
                    }
                }
                let mix = TwoQubitState::new(m).unwrap();
                let c = concurrence(&mix).unwrap();
                let bound = w * concurrence(&s1).unwrap() + (1.0 - w) * concurrence(&s2).unwrap();
                prop_assert!((0.0..=1.0).contains(&c));
                prop_assert!(c <= bound + 1e-10);
            }
        }
    }
}
