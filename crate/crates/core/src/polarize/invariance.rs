use crate::error::{Error, Result};
use crate::qmath::{uhlmann_isometry, PureState, C64};

/// Fidelities of a pure-state channel before and after one minus step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceCheck {
    pub f_w: f64,
    pub f_w_minus: f64,
    pub gap: f64,
}

/// Σ_{u₂} |ψ_{u⊕u₂}⟩|ψ_{u₂}⟩|u₂⟩ / √2, a purification of the minus output for
/// input u with a qubit reference last.
fn minus_purification(psi: [&PureState; 2], u: usize) -> Result<PureState> {
    let d = psi[0].dim();
    let mut amps = vec![C64::new(0.0, 0.0); d * d * 2];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for u2 in 0..2 {
        let a = psi[u ^ u2].amplitudes();
        let b = psi[u2].amplitudes();
        for i in 0..d {
            for j in 0..d {
                amps[(i * d + j) * 2 + u2] = a[i] * b[j] * s;
            }
        }
    }
    PureState::normalized(amps)
}

/// F(W) = |⟨ψ₀|ψ₁⟩|² against F(W⁻), the latter by Uhlmann maximization over the
/// reference of the purifications of the two rank-2 minus outputs.
pub fn verify_pure_state_invariance(psi0: &PureState, psi1: &PureState) -> Result<InvarianceCheck> {
    if psi0.dim() != psi1.dim() {
        return Err(Error::Dimension(format!(
            "pure states of dimension {} and {}",
            psi0.dim(),
            psi1.dim()
        )));
    }
    let d = psi0.dim();
    let f_w = psi0.inner(psi1).norm_sqr();
    let phi0 = minus_purification([psi0, psi1], 0)?;
    let phi1 = minus_purification([psi0, psi1], 1)?;
    let f_w_minus = uhlmann_isometry(&phi0, &phi1, (d * d, 2), 1)?
        .overlap
        .min(1.0);
    Ok(InvarianceCheck {
        f_w,
        f_w_minus,
        gap: (f_w - f_w_minus).abs(),
    })
}
