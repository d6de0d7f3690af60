use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qmath::{
    commutator_norm, entropy_of_psd, root_fidelity, von_neumann_entropy, DensityOperator,
};

/// Binary-input classical-quantum channel x ↦ ρ_x.
#[derive(Debug, Clone, PartialEq)]
pub struct CqChannel {
    rho0: DensityOperator,
    rho1: DensityOperator,
}

impl CqChannel {
    pub fn new(rho0: DensityOperator, rho1: DensityOperator) -> Result<Self> {
        if rho0.dim() != rho1.dim() {
            return Err(Error::Dimension(format!(
                "cq channel outputs have dimensions {} and {}",
                rho0.dim(),
                rho1.dim()
            )));
        }
        Ok(Self { rho0, rho1 })
    }

    /// Classical channel embedded as commuting diagonal outputs.
    pub fn classical(p0: &[f64], p1: &[f64]) -> Result<Self> {
        Self::new(
            DensityOperator::diagonal(p0)?,
            DensityOperator::diagonal(p1)?,
        )
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::classical(&[1.0 - p, p], &[p, 1.0 - p])
    }

    /// Binary erasure channel; symbol order (0, 1, erasure).
    pub fn bec(epsilon: f64) -> Result<Self> {
        Self::classical(
            &[1.0 - epsilon, 0.0, epsilon],
            &[0.0, 1.0 - epsilon, epsilon],
        )
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    pub fn rho(&self, x: u8) -> &DensityOperator {
        if x == 0 {
            &self.rho0
        } else {
            &self.rho1
        }
    }

    pub fn outputs(&self) -> (&DensityOperator, &DensityOperator) {
        (&self.rho0, &self.rho1)
    }

    pub fn into_outputs(self) -> (DensityOperator, DensityOperator) {
        (self.rho0, self.rho1)
    }

    /// (ρ₀ + ρ₁)/2.
    pub fn average(&self) -> DensityOperator {
        DensityOperator::mixture(&[(0.5, &self.rho0), (0.5, &self.rho1)]).expect("equal dimensions")
    }

    /// √F(W) = ‖√ρ₀ √ρ₁‖₁.
    pub fn root_fidelity(&self) -> Result<f64> {
        root_fidelity(&self.rho0, &self.rho1)
    }

    /// F(W) = ‖√ρ₀ √ρ₁‖₁².
    pub fn fidelity(&self) -> Result<f64> {
        Ok(self.root_fidelity()?.powi(2))
    }

    pub fn holevo(&self) -> Result<f64> {
        symmetric_holevo(self)
    }

    /// ‖[ρ₀, ρ₁]‖₁.
    pub fn commutator_norm(&self) -> Result<f64> {
        commutator_norm(self.rho0.matrix(), self.rho1.matrix())
    }

    pub fn is_commuting(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.commutator_norm()? <= tol.commute)
    }

    /// Outputs swapped: x ↦ ρ_{1-x}.
    pub fn swapped(&self) -> Self {
        Self {
            rho0: self.rho1.clone(),
            rho1: self.rho0.clone(),
        }
    }
}

/// I(W) = H((ρ₀+ρ₁)/2) − (H(ρ₀) + H(ρ₁))/2, in bits.
pub fn symmetric_holevo(w: &CqChannel) -> Result<f64> {
    let tol = Tolerances::default();
    let avg = w.rho0.matrix().add(w.rho1.matrix())?.scale(0.5);
    let h = entropy_of_psd(&avg, &tol)?;
    let h0 = von_neumann_entropy(&w.rho0)?;
    let h1 = von_neumann_entropy(&w.rho1)?;
    Ok((h - 0.5 * (h0 + h1)).clamp(0.0, 1.0))
}
