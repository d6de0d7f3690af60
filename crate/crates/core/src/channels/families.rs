use super::isometric::IsometricChannel;
use super::spec::{Axis, ChannelFamilySpec, Family};
use crate::error::Result;
use crate::qmath::{ComplexMatrix, PureState, C64};

/// Isometric extension of a family member, with the input basis that makes
/// the environment classical.
///
/// Output layouts (Bob ⊗ Eve, Bob factor most significant):
///
/// * amplitude damping: B = E = qubit
/// * photon-detected jump: B = (state qubit) ⊗ (jump flag), E = qubit recording the jump
/// * erasure: B = E = qutrit, index 2 is the erasure flag
/// * dephasing: B = qubit, E = qubit
/// * cloning with N clones: B = symmetric subspace spanned by Dicke states
///   D_0..D_N (k = number of ones), E = N-dimensional
pub fn build_channel(spec: &ChannelFamilySpec) -> Result<IsometricChannel> {
    spec.validate()?;
    let v = spec.value();
    let ch = match spec.family {
        Family::AmplitudeDamping => amplitude_damping(v),
        Family::PhotonDetectedJump => photon_detected_jump(v),
        Family::Erasure => erasure(v),
        Family::Dephasing => dephasing(v, spec.axis()),
        Family::Cloning => cloning(spec.clones.unwrap_or(2) as usize),
    }?;
    Ok(ch.with_spec(spec.clone()))
}

fn computational() -> Vec<PureState> {
    vec![
        PureState::basis(2, 0).unwrap(),
        PureState::basis(2, 1).unwrap(),
    ]
}

/// Isometry from columns given as sparse (row, amplitude) lists.
fn from_columns(rows: usize, cols: &[Vec<(usize, f64)>]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for &(i, a) in col {
            m.set(i, j, m.get(i, j) + C64::new(a, 0.0));
        }
    }
    m
}

// V|0⟩ = |0⟩|0⟩, V|1⟩ = √(1−γ)|1⟩|0⟩ + √γ|0⟩|1⟩.
fn amplitude_damping(gamma: f64) -> Result<IsometricChannel> {
    let idx = |b: usize, e: usize| b * 2 + e;
    let v = from_columns(
        4,
        &[
            vec![(idx(0, 0), 1.0)],
            vec![(idx(1, 0), (1.0 - gamma).sqrt()), (idx(0, 1), gamma.sqrt())],
        ],
    );
    IsometricChannel::new(v, 2, 2, computational())
}

// V|0⟩ = |0,0⟩|0⟩, V|1⟩ = √(1−γ)|1,0⟩|0⟩ + √γ|0,1⟩|1⟩ with Bob = (state, flag).
fn photon_detected_jump(gamma: f64) -> Result<IsometricChannel> {
    let idx = |s: usize, f: usize, e: usize| (s * 2 + f) * 2 + e;
    let v = from_columns(
        8,
        &[
            vec![(idx(0, 0, 0), 1.0)],
            vec![
                (idx(1, 0, 0), (1.0 - gamma).sqrt()),
                (idx(0, 1, 1), gamma.sqrt()),
            ],
        ],
    );
    IsometricChannel::new(v, 4, 2, computational())
}

// V|ψ⟩ = √(1−ε)|ψ⟩|e⟩ + √ε|e⟩|ψ⟩ with |e⟩ = |2⟩.
fn erasure(eps: f64) -> Result<IsometricChannel> {
    let idx = |b: usize, e: usize| b * 3 + e;
    let col = |x: usize| vec![(idx(x, 2), (1.0 - eps).sqrt()), (idx(2, x), eps.sqrt())];
    let v = from_columns(9, &[col(0), col(1)]);
    IsometricChannel::new(v, 3, 3, computational())
}

// V|ψ⟩ = √(1−p)|ψ⟩|0⟩ + √p σ|ψ⟩|1⟩; input basis is flipped by σ.
fn dephasing(p: f64, axis: Axis) -> Result<IsometricChannel> {
    let (a, b) = ((1.0 - p).sqrt(), p.sqrt());
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let pauli: [[C64; 2]; 2] = match axis {
        Axis::X => [[z, one], [one, z]],
        Axis::Y => [[z, -i], [i, z]],
        Axis::Z => [[one, z], [z, -one]],
    };
    let mut v = ComplexMatrix::zeros(4, 2);
    for (row, entries) in pauli.iter().enumerate() {
        for (col, &p) in entries.iter().enumerate() {
            let ident = if row == col { one } else { z };
            v.set(row * 2, col, ident * a);
            v.set(row * 2 + 1, col, p * b);
        }
    }
    let basis = match axis {
        Axis::Z => vec![PureState::plus(), PureState::minus()],
        Axis::X | Axis::Y => computational(),
    };
    IsometricChannel::new(v, 2, 2, basis)
}

// Universal 1→N cloner with Δ = N(N+1)/2:
// V|0⟩ = Σ_{k<N} √((N−k)/Δ)|D_k⟩|N−1−k⟩, V|1⟩ = Σ_{k≥1} √(k/Δ)|D_k⟩|N−k⟩.
fn cloning(n: usize) -> Result<IsometricChannel> {
    let delta = (n * (n + 1) / 2) as f64;
    let (db, de) = (n + 1, n);
    let idx = |k: usize, e: usize| k * de + e;
    let col0 = (0..n)
        .map(|k| (idx(k, n - 1 - k), ((n - k) as f64 / delta).sqrt()))
        .collect();
    let col1 = (1..=n)
        .map(|k| (idx(k, n - k), (k as f64 / delta).sqrt()))
        .collect();
    let v = from_columns(db * de, &[col0, col1]);
    IsometricChannel::new(v, db, de, computational())
}
