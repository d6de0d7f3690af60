//! The coherent entanglement-generation protocol, simulated on state vectors
//! at tiny blocklength.
//!
//! Alice prepares Bell pairs on A (one half kept in a reference register R),
//! fixed ancillas on B, |+⟩ states with phases γ on Y, and the halves of
//! pre-shared ebits on X. She encodes coherently and sends the block through
//! V^{⊗N}. Bob applies the coherent SC isometry controlled on his ebit halves,
//! writing the decoded (u_A, u_Y) into a fresh register, then the decoupling
//! unitary U_{u_A} controlled on the decoded u_A. The figure of merit is the
//! fidelity of (R, decoded u_A) with the maximally entangled state.

use std::f64::consts::{LN_2, TAU};

use nalgebra::DMatrix;
use serde::Serialize;

use super::encoder::encode_word;
use super::quantum::HelstromCascade;
use crate::channels::{
    bob_channel, build_channel, eve_channel, ChannelFamilySpec, IsometricChannel,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polarize::check_beta;
use crate::qmath::{uhlmann_isometry, ComplexMatrix, PureState, C64};
use crate::wiretap::{exact_leakage, partition_channels, SetLabel, WiretapCode};

/// Longest block for the end-to-end protocol simulation.
pub const MAX_PROTOCOL_BLOCKLENGTH: usize = 4;

/// Longest block for phase selection.
pub const MAX_PHASE_BLOCKLENGTH: usize = 6;

/// Amplitude budget of the simulated joint state.
const MAX_AMPLITUDES: usize = 1 << 22;

/// Phases on the Y branches, indexed by the u_Y word (first Y index most
/// significant). γ is applied by Alice, δ belongs to the ideal target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseAssignment {
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
}

impl PhaseAssignment {
    pub fn zeros(y_count: usize) -> Self {
        Self {
            gamma: vec![0.0; 1 << y_count],
            delta: vec![0.0; 1 << y_count],
        }
    }

    pub fn new(gamma: Vec<f64>, delta: Vec<f64>) -> Result<Self> {
        if gamma.len() != delta.len() || !gamma.len().is_power_of_two() {
            return Err(Error::Invalid(
                "phase tables must have equal power-of-two lengths".into(),
            ));
        }
        let wrap = |v: Vec<f64>| -> Result<Vec<f64>> {
            v.into_iter()
                .map(|p| {
                    if p.is_finite() {
                        Ok(p.rem_euclid(TAU))
                    } else {
                        Err(Error::Invalid("phase must be finite".into()))
                    }
                })
                .collect()
        };
        Ok(Self {
            gamma: wrap(gamma)?,
            delta: wrap(delta)?,
        })
    }

    fn branches(&self) -> usize {
        self.gamma.len()
    }
}

/// Block layout with word helpers: set members are addressed by words whose
/// most significant bit is the first member.
struct Layout {
    n: usize,
    len: usize,
    a: Vec<usize>,
    x: Vec<usize>,
    y: Vec<usize>,
    decoded: Vec<usize>,
    base: u64,
}

impl Layout {
    fn new(code: &WiretapCode) -> Self {
        let p = &code.partition;
        let len = p.blocklength();
        let mut base = 0u64;
        for (k, i) in p.set(SetLabel::B).into_iter().enumerate() {
            base |= (code.frozen[k] as u64) << (len - i);
        }
        Self {
            n: p.n,
            len,
            a: p.set(SetLabel::A),
            x: p.set(SetLabel::X),
            y: p.set(SetLabel::Y),
            decoded: p.decoded(),
            base,
        }
    }

    fn scatter(&self, word: usize, set: &[usize]) -> u64 {
        set.iter().enumerate().fold(0u64, |acc, (k, &i)| {
            let bit = (word >> (set.len() - 1 - k)) & 1;
            acc | ((bit as u64) << (self.len - i))
        })
    }

    fn input(&self, ua: usize, uy: usize, ux: usize) -> u64 {
        self.base
            | self.scatter(ua, &self.a)
            | self.scatter(uy, &self.y)
            | self.scatter(ux, &self.x)
    }

    fn known(&self, code: &WiretapCode, ux: usize) -> Vec<Option<u8>> {
        let mut known = code.known_bits();
        for (k, &i) in self.x.iter().enumerate() {
            known[i - 1] = Some(((ux >> (self.x.len() - 1 - k)) & 1) as u8);
        }
        known
    }

    /// Outcome bits along the decoded positions for the pair (a', y').
    fn outcome_bits(&self, a: usize, y: usize) -> Vec<u8> {
        let word = self.scatter(a, &self.a) | self.scatter(y, &self.y);
        self.decoded
            .iter()
            .map(|&i| ((word >> (self.len - i)) & 1) as u8)
            .collect()
    }
}

/// √Λ for every ebit value u_X and every decoded pair (u_A, u_Y), built from
/// the cascade Kraus operators in bit order: Λ = K†K.
pub struct CoherentDecoder {
    a_count: usize,
    y_count: usize,
    dim: usize,
    povm: Vec<Vec<ComplexMatrix>>,
    sqrt_povm: Vec<Vec<ComplexMatrix>>,
}

impl CoherentDecoder {
    pub fn new(ch: &IsometricChannel, code: &WiretapCode) -> Result<Self> {
        let len = code.partition.blocklength();
        if len > MAX_PHASE_BLOCKLENGTH {
            return Err(Error::Resource(format!(
                "coherent decoding limited to N ≤ {MAX_PHASE_BLOCKLENGTH}, got {len}"
            )));
        }
        let layout = Layout::new(code);
        let cascade = HelstromCascade::new(&bob_channel(ch)?, len)?;
        let (a_count, y_count) = (layout.a.len(), layout.y.len());
        let mut povm = Vec::with_capacity(1 << layout.x.len());
        let mut sqrt_povm = Vec::with_capacity(1 << layout.x.len());
        for ux in 0..1usize << layout.x.len() {
            let known = layout.known(code, ux);
            let mut row = Vec::new();
            let mut roots = Vec::new();
            for a in 0..1usize << a_count {
                for y in 0..1usize << y_count {
                    let k = cascade.kraus(&known, &layout.outcome_bits(a, y))?;
                    let lambda = k.adjoint().matmul(&k)?.hermitian_part();
                    roots.push(lambda.hermitian_function(|v| v.max(0.0).sqrt())?);
                    row.push(lambda);
                }
            }
            povm.push(row);
            sqrt_povm.push(roots);
        }
        Ok(Self {
            a_count,
            y_count,
            dim: cascade.dim(),
            povm,
            sqrt_povm,
        })
    }

    /// Dimension of Bob's block output space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, a: usize, y: usize) -> usize {
        a * (1 << self.y_count) + y
    }

    /// Λ^{(u_X)}_{u_A,u_Y}.
    pub fn povm_element(&self, ux: usize, ua: usize, uy: usize) -> &ComplexMatrix {
        &self.povm[ux][self.slot(ua, uy)]
    }

    pub fn sqrt_element(&self, ux: usize, ua: usize, uy: usize) -> &ComplexMatrix {
        &self.sqrt_povm[ux][self.slot(ua, uy)]
    }

    pub fn outcome_count(&self) -> usize {
        1 << (self.a_count + self.y_count)
    }

    /// Σ_{a,y} √Λ_{a,y} ⊗ |a,y⟩ for one ebit value, as a stacked matrix whose
    /// block (a·2^{|Y|} + y) is √Λ_{a,y}.
    pub fn isometry(&self, ux: usize) -> ComplexMatrix {
        let d = self.dim;
        let blocks = &self.sqrt_povm[ux];
        ComplexMatrix::from_fn(d * blocks.len(), d, |r, c| blocks[r / d].get(r % d, c))
    }
}

/// Branch overlaps ⟨φ_{u_Y}|χ_{u_Y}⟩ without phases: the average over u_A,
/// u_X of Tr(√Λ_{u_A,u_Y} ρ^B_u).
fn branch_overlaps(
    ch: &IsometricChannel,
    code: &WiretapCode,
    dec: &CoherentDecoder,
) -> Result<Vec<C64>> {
    let layout = Layout::new(code);
    let bob = bob_channel(ch)?;
    let tol = Tolerances::default();
    let (na, nx, ny) = (layout.a.len(), layout.x.len(), layout.y.len());
    let weight = 1.0 / (1u64 << (na + nx)) as f64;
    let mut out = vec![C64::new(0.0, 0.0); 1 << ny];
    for (uy, slot) in out.iter_mut().enumerate() {
        for ua in 0..1usize << na {
            for ux in 0..1usize << nx {
                let x = encode_word(layout.input(ua, uy, ux), layout.n);
                let mut rho = ComplexMatrix::identity(1);
                for j in 0..layout.len {
                    let bit = ((x >> (layout.len - 1 - j)) & 1) as u8;
                    rho = rho.kron(bob.rho(bit).matrix(), &tol)?;
                }
                *slot += dec.sqrt_element(ux, ua, uy).matmul(&rho)?.trace() * weight;
            }
        }
    }
    Ok(out)
}

/// Branch-aligned phases: δ_{u_Y} = arg⟨φ_{u_Y}|χ_{u_Y}⟩ and γ_{u_Y} = 0,
/// which makes every branch term real and non-negative.
pub fn select_phases(ch: &IsometricChannel, code: &WiretapCode) -> Result<PhaseAssignment> {
    let dec = CoherentDecoder::new(ch, code)?;
    let t = branch_overlaps(ch, code, &dec)?;
    let delta = t
        .iter()
        .map(|z| if z.norm() < 1e-12 { 0.0 } else { z.arg() })
        .collect();
    PhaseAssignment::new(vec![0.0; t.len()], delta)
}

/// 2^{−|Y|} Re Σ_{u_Y} e^{i(γ−δ)} ⟨φ_{u_Y}|χ_{u_Y}⟩.
pub fn average_branch_overlap(
    ch: &IsometricChannel,
    code: &WiretapCode,
    phases: &PhaseAssignment,
) -> Result<f64> {
    let dec = CoherentDecoder::new(ch, code)?;
    let t = branch_overlaps(ch, code, &dec)?;
    check_phases(phases, t.len())?;
    let sum: C64 = t
        .iter()
        .enumerate()
        .map(|(k, z)| z * C64::from_polar(1.0, phases.gamma[k] - phases.delta[k]))
        .sum();
    Ok(sum.re / t.len() as f64)
}

fn check_phases(phases: &PhaseAssignment, branches: usize) -> Result<()> {
    if phases.branches() != branches {
        return Err(Error::Invalid(format!(
            "phase tables have {} entries, layout needs {branches}",
            phases.branches()
        )));
    }
    Ok(())
}

/// Everything a protocol run produces.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolTrace {
    pub n: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub frozen: Vec<u8>,
    pub channel: Option<ChannelFamilySpec>,
    pub phases: PhaseAssignment,
    /// |⟨ideal detected state|actual post-decoder state⟩|².
    pub overlap: f64,
    /// Phase-weighted average of the branch overlaps.
    pub branch_overlap: f64,
    /// I(U_A; E^N) in bits.
    pub leakage: f64,
    /// Mean squared Uhlmann overlap of the decoupling unitaries.
    pub decoupling_fidelity: f64,
    pub final_fidelity: f64,
    /// 1 − 2(1 − overlap) − 2√(2 ln 2 · leakage) − 1e-6.
    pub fidelity_bound: f64,
    pub ebit_count: usize,
}

impl ProtocolTrace {
    pub fn bound_holds(&self) -> bool {
        self.final_fidelity >= self.fidelity_bound
    }
}

/// Per-site amplitude matrix S_x[b, e] of V|b_x⟩.
fn site_matrices(ch: &IsometricChannel) -> [DMatrix<C64>; 2] {
    let v = ch.logical_isometry();
    let (db, de) = (ch.dim_b(), ch.dim_e());
    let site = |x: usize| DMatrix::from_fn(db, de, |b, e| v.get(b * de + e, x));
    [site(0), site(1)]
}

fn frobenius_inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(p, q)| p.conj() * q).sum()
}

pub fn run_coherent_protocol(
    ch: &IsometricChannel,
    code: &WiretapCode,
    phases: &PhaseAssignment,
) -> Result<ProtocolTrace> {
    let len = code.partition.blocklength();
    if len > MAX_PROTOCOL_BLOCKLENGTH {
        return Err(Error::Resource(format!(
            "protocol simulation limited to N ≤ {MAX_PROTOCOL_BLOCKLENGTH}, got {len}"
        )));
    }
    if ch.dim_in() != 2 {
        return Err(Error::Dimension(
            "protocol needs a qubit-input channel".into(),
        ));
    }
    let layout = Layout::new(code);
    let (na, nx, ny) = (layout.a.len(), layout.x.len(), layout.y.len());
    check_phases(phases, 1 << ny)?;
    let db = ch.dim_b().pow(len as u32);
    let de = ch.dim_e().pow(len as u32);
    let bob_dim = db << (nx + ny);
    if bob_dim
        .checked_mul(de)
        .and_then(|v| v.checked_mul(1 << na))
        .is_none_or(|v| v > MAX_AMPLITUDES)
    {
        return Err(Error::Resource(format!(
            "joint state of {} x {bob_dim} x {de} amplitudes exceeds the cap",
            1 << na
        )));
    }
    let dec = CoherentDecoder::new(ch, code)?;
    let sites = site_matrices(ch);
    let channel_output = |u: u64| -> DMatrix<C64> {
        let x = encode_word(u, layout.n);
        let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for j in 0..len {
            m = m.kronecker(&sites[((x >> (len - 1 - j)) & 1) as usize]);
        }
        m
    };
    let (ca, cx, cy) = (1usize << na, 1usize << nx, 1usize << ny);
    let idx = |ua: usize, uy: usize, ux: usize| (ua * cy + uy) * cx + ux;
    let psi: Vec<DMatrix<C64>> = (0..ca * cy * cx)
        .map(|k| {
            let (ua, uy, ux) = (k / (cy * cx), (k / cx) % cy, k % cx);
            channel_output(layout.input(ua, uy, ux))
        })
        .collect();
    let e = |p: f64| C64::from_polar(1.0, p);

    // ⟨ideal|actual⟩ and the decoded blocks on the diagonal a' = u_A.
    let norm = 1.0 / ((ca * cx * cy) as f64);
    let amp = 1.0 / ((ca * cx * cy) as f64).sqrt();
    let mut inner = C64::new(0.0, 0.0);
    let mut actual: Vec<DMatrix<C64>> = vec![DMatrix::zeros(bob_dim, de); ca];
    for ua in 0..ca {
        for ux in 0..cx {
            for uy in 0..cy {
                let src = &psi[idx(ua, uy, ux)];
                for yd in 0..cy {
                    let w = dec.sqrt_element(ux, ua, yd).as_nalgebra() * src;
                    inner += frobenius_inner(&psi[idx(ua, yd, ux)], &w)
                        * e(phases.gamma[uy] - phases.delta[yd])
                        * norm;
                    let coeff = e(phases.gamma[uy]) * amp;
                    for b in 0..db {
                        let row = (b * cx + ux) * cy + yd;
                        for c in 0..de {
                            actual[ua][(row, c)] += coeff * w[(b, c)];
                        }
                    }
                }
            }
        }
    }

    // Ideal detected states per u_A and a purification of their average on
    // Eve's side.
    let ideal_amp = 1.0 / ((cx * cy) as f64).sqrt();
    let ideal: Vec<DMatrix<C64>> = (0..ca)
        .map(|ua| {
            let mut m = DMatrix::zeros(bob_dim, de);
            for ux in 0..cx {
                for uy in 0..cy {
                    let src = &psi[idx(ua, uy, ux)];
                    let coeff = e(phases.delta[uy]) * ideal_amp;
                    for b in 0..db {
                        let row = (b * cx + ux) * cy + uy;
                        for c in 0..de {
                            m[(row, c)] = coeff * src[(b, c)];
                        }
                    }
                }
            }
            m
        })
        .collect();
    let mut rho_e = DMatrix::<C64>::zeros(de, de);
    for m in &ideal {
        rho_e += m.transpose() * m.conjugate() / C64::new(ca as f64, 0.0);
    }
    let (vals, vecs) = ComplexMatrix::from_nalgebra(rho_e).eigh()?;
    let support: Vec<usize> = (0..de).rev().filter(|&k| vals[k] > 1e-14).collect();
    if support.len() > bob_dim {
        return Err(Error::Dimension(format!(
            "Bob's registers (dimension {bob_dim}) cannot purify a rank-{} environment",
            support.len()
        )));
    }
    let mut reference = DMatrix::<C64>::zeros(bob_dim, de);
    for (row, &k) in support.iter().enumerate() {
        for c in 0..de {
            reference[(row, c)] = vecs.get(c, k) * vals[k].sqrt();
        }
    }
    let as_state = |m: &DMatrix<C64>| -> Result<PureState> {
        let flat: Vec<C64> = (0..bob_dim)
            .flat_map(|r| (0..de).map(move |c| (r, c)))
            .map(|(r, c)| m[(r, c)])
            .collect();
        PureState::normalized(flat)
    };
    let reference_state = as_state(&reference)?;

    let mut target = DMatrix::<C64>::zeros(bob_dim, de);
    let mut decoupling = 0.0;
    for ua in 0..ca {
        let u = uhlmann_isometry(&as_state(&ideal[ua])?, &reference_state, (bob_dim, de), 0)?;
        decoupling += u.overlap / ca as f64;
        target += u.isometry.as_nalgebra() * &actual[ua];
    }
    let final_fidelity = (target.norm_squared() / ca as f64).clamp(0.0, 1.0);
    let overlap = inner.norm_sqr().min(1.0);
    let leakage = exact_leakage(code, ch)?;
    let fidelity_bound = 1.0 - 2.0 * (1.0 - overlap) - 2.0 * (2.0 * LN_2 * leakage).sqrt() - 1e-6;
    let t = branch_overlaps(ch, code, &dec)?;
    let branch_overlap = t
        .iter()
        .enumerate()
        .map(|(k, z)| (z * e(phases.gamma[k] - phases.delta[k])).re)
        .sum::<f64>()
        / t.len() as f64;
    let p = &code.partition;
    Ok(ProtocolTrace {
        n: layout.n,
        a: layout.a.clone(),
        b: p.set(SetLabel::B),
        x: layout.x.clone(),
        y: layout.y.clone(),
        frozen: code.frozen.clone(),
        channel: ch.spec().cloned(),
        phases: phases.clone(),
        overlap,
        branch_overlap,
        leakage,
        decoupling_fidelity: decoupling,
        final_fidelity,
        fidelity_bound,
        ebit_count: nx,
    })
}

/// Entanglement consumption |X|/N per level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EbitRate {
    pub n: usize,
    pub ebit_rate: f64,
}

pub fn ebit_rate_trend(
    spec: &ChannelFamilySpec,
    beta: f64,
    n_list: &[usize],
) -> Result<Vec<EbitRate>> {
    check_beta(beta)?;
    let ch = build_channel(spec)?;
    let (bob, eve) = (bob_channel(&ch)?, eve_channel(&ch)?);
    n_list
        .iter()
        .map(|&n| {
            let (p, _) = partition_channels(&bob, &eve, n, beta)?;
            Ok(EbitRate {
                n,
                ebit_rate: p.count(SetLabel::X) as f64 / p.blocklength() as f64,
            })
        })
        .collect()
}
