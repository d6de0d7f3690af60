use super::cq::CqChannel;
use super::spec::{ChannelFamilySpec, Family};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, C64};

/// Kraus representation of a map from Bob's output space to Eve's.
#[derive(Debug, Clone)]
pub struct DegradingMap {
    kraus: Vec<ComplexMatrix>,
}

impl DegradingMap {
    /// Validates shapes and Σ K†K = I to 1e-10.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| {
            Error::Invalid("degrading map needs at least one Kraus operator".into())
        })?;
        let (rows, cols) = (first.rows(), first.cols());
        let mut sum = ComplexMatrix::zeros(cols, cols);
        for k in &kraus {
            if k.rows() != rows || k.cols() != cols {
                return Err(Error::Dimension("Kraus operators of unequal shape".into()));
            }
            sum = sum.add(&k.adjoint().matmul(k)?)?;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(cols));
        if defect > Tolerances::default().norm {
            return Err(Error::Domain(format!(
                "Kraus completeness violated by {defect:.3e}"
            )));
        }
        Ok(Self { kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn kraus_operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.kraus[0].cols()
    }

    pub fn dim_out(&self) -> usize {
        self.kraus[0].rows()
    }

    /// Σ K ρ K†.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim_out(), self.dim_out());
        for k in &self.kraus {
            out = out.add(&k.matmul(rho)?.matmul(&k.adjoint())?)?;
        }
        Ok(out)
    }
}

/// max_x ‖D(ρ_x^B) − ρ_x^E‖₁.
pub fn verify_degrading_map(w: &CqChannel, wstar: &CqChannel, d: &DegradingMap) -> Result<f64> {
    if d.dim_in() != w.dim() || d.dim_out() != wstar.dim() {
        return Err(Error::Dimension(format!(
            "map {}→{} does not fit channels of dimension {} and {}",
            d.dim_in(),
            d.dim_out(),
            w.dim(),
            wstar.dim()
        )));
    }
    let mut worst = 0.0f64;
    for x in 0..2u8 {
        let mapped = d.apply(w.rho(x).matrix())?;
        worst = worst.max(mapped.sub(wstar.rho(x).matrix())?.hermitian_trace_norm()?);
    }
    Ok(worst)
}

fn ket_bra(rows: usize, cols: usize, i: usize, j: usize, amp: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    m.set(i, j, C64::new(amp, 0.0));
    m
}

/// A map taking the family's Bob cq channel to its Eve cq channel, when one is
/// known in closed form:
///
/// * amplitude damping γ ≤ 1/2: further damping with (1−2γ)/(1−γ)
/// * erasure ε ≤ 1/2: further erasure with (1−2ε)/(1−ε)
/// * photon-detected jump: read the jump flag
/// * dephasing: replace by Eve's common output diag(1−p, p)
///
/// Cloning returns `None`.
pub fn standard_degrading_map(spec: &ChannelFamilySpec) -> Result<Option<DegradingMap>> {
    spec.validate()?;
    let v = spec.value();
    let kraus = match spec.family {
        Family::AmplitudeDamping if v <= 0.5 => {
            let g = if v < 1.0 {
                (1.0 - 2.0 * v) / (1.0 - v)
            } else {
                0.0
            };
            let mut k0 = ComplexMatrix::identity(2);
            k0.set(1, 1, C64::new((1.0 - g).sqrt(), 0.0));
            vec![k0, ket_bra(2, 2, 0, 1, g.sqrt())]
        }
        Family::Erasure if v <= 0.5 => {
            let q = (1.0 - 2.0 * v) / (1.0 - v);
            let mut ks = vec![ComplexMatrix::identity(3).scale((1.0 - q).sqrt())];
            ks.extend((0..3).map(|j| ket_bra(3, 3, 2, j, q.sqrt())));
            ks
        }
        Family::PhotonDetectedJump => (0..4).map(|sf| ket_bra(2, 4, sf % 2, sf, 1.0)).collect(),
        Family::Dephasing => {
            let sigma = [1.0 - v, v];
            (0..2)
                .flat_map(|k| (0..2).map(move |j| ket_bra(2, 2, k, j, sigma[k].sqrt())))
                .collect()
        }
        _ => return Ok(None),
    };
    DegradingMap::new(kraus).map(Some)
}
