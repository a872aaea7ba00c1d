use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{hermitian_eigen, Matrix4};
use crate::error::{Error, Result};

pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Basis labels in storage order.
pub const BASIS: [&str; 4] = ["ee", "eg", "ge", "gg"];

/// Two-qubit density matrix in the ordered basis `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.
///
/// Indices are zero-based: `ρ₂₃ = ⟨eg|ρ|ge⟩` is `state.element(1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "StateRepr")]
pub struct TwoQubitState(Matrix4);

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        check(&matrix)?;
        Ok(Self(matrix))
    }

    pub(crate) fn from_unchecked(matrix: Matrix4) -> Self {
        Self(matrix)
    }

    /// `|ψ⟩⟨ψ|` for a normalised amplitude vector.
    pub fn pure(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::NonPhysicalState(format!(
                "state vector has squared norm {norm}, expected 1"
            )));
        }
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Self::new(m)
    }

    /// A basis projector, `index` in storage order.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut m = [[ZERO; 4]; 4];
        m[index][index] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn ground() -> Self {
        Self::basis(3)
    }

    /// `|eg⟩⟨eg|`, the initial state of the decay problem.
    pub fn excited_ground() -> Self {
        Self::basis(1)
    }

    /// `(|eg⟩ − |ge⟩)/√2`.
    pub fn subradiant() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let mut m = [[ZERO; 4]; 4];
        m[1][1] = h;
        m[2][2] = h;
        m[1][2] = -h;
        m[2][1] = -h;
        Self(m)
    }

    /// `(|eg⟩ + |ge⟩)/√2`.
    pub fn superradiant() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let mut m = [[ZERO; 4]; 4];
        for i in 1..3 {
            for j in 1..3 {
                m[i][j] = h;
            }
        }
        Self(m)
    }

    /// `½(|ψ_sub⟩⟨ψ_sub| + |gg⟩⟨gg|)`, the steady state when `Γ₁₂ = Γ`.
    pub fn steady_entangled() -> Self {
        let mut m = Self::subradiant().0;
        for row in m.iter_mut() {
            for c in row.iter_mut() {
                *c *= 0.5;
            }
        }
        m[3][3] = Complex64::new(0.5, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.0
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    /// Diagonal in storage order.
    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| self.0[k][k].re)
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigen(&self.0).0
    }

    pub fn view(&self) -> SymmetricAntisymmetricView {
        let m = &self.0;
        SymmetricAntisymmetricView {
            phi_plus: m[1][1] + m[2][2],
            phi_minus: m[1][1] - m[2][2],
            psi_plus: m[1][2] + m[2][1],
            psi_minus: m[1][2] - m[2][1],
        }
    }

    /// Largest elementwise modulus of the difference.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

fn check(m: &Matrix4) -> Result<()> {
    if m.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonPhysicalState("matrix has non-finite entries".into()));
    }
    let mut asym: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            asym = asym.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    if asym > HERMITICITY_TOLERANCE {
        return Err(Error::NonPhysicalState(format!(
            "not Hermitian: max |ρ − ρ†| = {asym:e}"
        )));
    }
    let trace: Complex64 = (0..4).map(|k| m[k][k]).sum();
    if (trace - 1.0).norm() > TRACE_TOLERANCE {
        return Err(Error::NonPhysicalState(format!("trace is {trace}, expected 1")));
    }
    let min = hermitian_eigen(m).0[0];
    if min < -POSITIVITY_TOLERANCE {
        return Err(Error::NonPhysicalState(format!(
            "not positive semidefinite: smallest eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// Symmetric and antisymmetric combinations of the single-excitation block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricAntisymmetricView {
    /// `Φ₊ = ρ₂₂ + ρ₃₃`
    pub phi_plus: Complex64,
    /// `Φ₋ = ρ₂₂ − ρ₃₃`
    pub phi_minus: Complex64,
    /// `Ψ₊ = ρ₂₃ + ρ₃₂`
    pub psi_plus: Complex64,
    /// `Ψ₋ = ρ₂₃ − ρ₃₂`
    pub psi_minus: Complex64,
}

/// Serialised form: real and imaginary parts as separate 4×4 arrays.
#[derive(Serialize, Deserialize)]
struct StateRepr {
    re: [[f64; 4]; 4],
    im: [[f64; 4]; 4],
}

impl From<TwoQubitState> for StateRepr {
    fn from(s: TwoQubitState) -> Self {
        StateRepr {
            re: s.0.map(|row| row.map(|c| c.re)),
            im: s.0.map(|row| row.map(|c| c.im)),
        }
    }
}

impl<'de> Deserialize<'de> for TwoQubitState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(d)?;
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = Complex64::new(repr.re[i][j], repr.im[i][j]);
            }
        }
        TwoQubitState::new(m).map_err(serde::de::Error::custom)
    }
}
