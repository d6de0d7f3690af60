//! Quantum successive cancellation: a cascade of Helstrom projective
//! measurements, one per decoded bit, with the projection postulate applied
//! between steps.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::DVector;
use rand::Rng;

use super::encoder::{encode_word, level_of};
use crate::channels::CqChannel;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polarize::ProductOutputs;
use crate::qmath::{ComplexMatrix, DensityOperator, PureState, C64};

/// Longest block the quantum decoder accepts.
pub const MAX_QUANTUM_BLOCKLENGTH: usize = 8;

/// Eigenvalues of ρ̄₀ − ρ̄₁ at or above −TIE count towards outcome 0.
const TIE: f64 = 1e-12;

/// Helstrom projector onto outcome 0.
#[derive(Debug)]
enum Projector {
    Diagonal(Vec<bool>),
    Dense(ComplexMatrix),
}

impl Projector {
    fn to_dense(&self) -> ComplexMatrix {
        match self {
            Projector::Diagonal(mask) => ComplexMatrix::diag_real(
                &mask
                    .iter()
                    .map(|&m| if m { 1.0 } else { 0.0 })
                    .collect::<Vec<_>>(),
            ),
            Projector::Dense(m) => m.clone(),
        }
    }

    /// Π_outcome v.
    fn project(&self, v: &DVector<C64>, outcome: u8) -> DVector<C64> {
        match self {
            Projector::Diagonal(mask) => DVector::from_fn(v.len(), |k, _| {
                if mask[k] == (outcome == 0) {
                    v[k]
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
            Projector::Dense(m) => {
                let p0 = m.apply(v);
                if outcome == 0 {
                    p0
                } else {
                    v - p0
                }
            }
        }
    }
}

/// The step-i test: decisions so far and the two averaged conditional
/// states ρ̄_{û,0}, ρ̄_{û,1} (each unit trace).
#[derive(Debug, Clone)]
pub struct DecoderState {
    /// 1-based index of the bit about to be decided.
    pub step: usize,
    pub decisions: Vec<u8>,
    pub states: [DensityOperator; 2],
}

/// Decisions plus the post-measurement state.
#[derive(Debug, Clone)]
pub struct QuantumDecoding<S> {
    pub decisions: Vec<u8>,
    pub state: S,
}

/// Helstrom cascade for a length-N block over one cq channel, caching the
/// projector of every (step, prefix) it has visited.
#[derive(Debug)]
pub struct HelstromCascade {
    outputs: ProductOutputs,
    n: usize,
    len: usize,
    dim: usize,
    cache: RwLock<HashMap<(usize, u64), Arc<Projector>>>,
}

fn pack(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

impl HelstromCascade {
    pub fn new(w: &CqChannel, blocklength: usize) -> Result<Self> {
        let n = level_of(blocklength)?;
        if blocklength > MAX_QUANTUM_BLOCKLENGTH {
            return Err(Error::Resource(format!(
                "quantum decoding limited to N ≤ {MAX_QUANTUM_BLOCKLENGTH}, got {blocklength}"
            )));
        }
        let outputs = ProductOutputs::new(w);
        let dim = outputs.block_dim(blocklength);
        let tol = Tolerances::default();
        if dim > tol.max_dim {
            return Err(Error::Resource(format!(
                "output dimension {dim} exceeds the cap {}",
                tol.max_dim
            )));
        }
        Ok(Self {
            outputs,
            n,
            len: blocklength,
            dim,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn blocklength(&self) -> usize {
        self.len
    }

    /// Dimension of the block output space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Averaged states ρ̄_{prefix,0}, ρ̄_{prefix,1} for step i.
    fn conditional(&self, step: usize, prefix: u64) -> Result<[ComplexMatrix; 2]> {
        let tail = self.len - step;
        let weight = 1.0 / (1u64 << tail) as f64;
        let mut out = [
            ComplexMatrix::zeros(self.dim, self.dim),
            ComplexMatrix::zeros(self.dim, self.dim),
        ];
        for (u, acc) in out.iter_mut().enumerate() {
            let head = ((prefix << 1) | u as u64) << tail;
            for c in 0..1u64 << tail {
                self.outputs
                    .accumulate(acc, encode_word(head | c, self.n), self.len, weight)?;
            }
        }
        Ok(out)
    }

    fn check_prefix(&self, step: usize, prefix: &[u8]) -> Result<()> {
        if step == 0 || step > self.len {
            return Err(Error::IndexOutOfRange {
                index: step,
                blocklength: self.len,
            });
        }
        if prefix.len() != step - 1 || prefix.iter().any(|&b| b > 1) {
            return Err(Error::Invalid(format!(
                "step {step} needs {} prefix bits",
                step - 1
            )));
        }
        Ok(())
    }

    pub fn decoder_state(&self, step: usize, decisions: &[u8]) -> Result<DecoderState> {
        self.check_prefix(step, decisions)?;
        let [a, b] = self.conditional(step, pack(decisions))?;
        Ok(DecoderState {
            step,
            decisions: decisions.to_vec(),
            states: [
                DensityOperator::from_constructed(a),
                DensityOperator::from_constructed(b),
            ],
        })
    }

    fn projector(&self, step: usize, prefix: u64) -> Result<Arc<Projector>> {
        let key = (step, prefix);
        if let Some(p) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(p));
        }
        let [r0, r1] = self.conditional(step, prefix)?;
        let diff = r0.sub(&r1)?;
        let proj = if diff.is_diagonal_exact() {
            Projector::Diagonal(diff.real_diagonal().iter().map(|&d| d >= -TIE).collect())
        } else {
            let (vals, vecs) = diff.eigh()?;
            let v = vecs.as_nalgebra();
            let mut m = nalgebra::DMatrix::<C64>::zeros(self.dim, self.dim);
            for (j, &lambda) in vals.iter().enumerate() {
                if lambda >= -TIE {
                    let col = v.column(j);
                    m += col * col.adjoint();
                }
            }
            Projector::Dense(ComplexMatrix::from_nalgebra(m))
        };
        let proj = Arc::new(proj);
        self.cache
            .write()
            .expect("cache lock")
            .insert(key, Arc::clone(&proj));
        Ok(proj)
    }

    /// Π₀ of the Helstrom test at `step` given the earlier bits.
    pub fn helstrom_projector(&self, step: usize, prefix: &[u8]) -> Result<ComplexMatrix> {
        self.check_prefix(step, prefix)?;
        Ok(self.projector(step, pack(prefix))?.to_dense())
    }

    fn check_known(&self, known: &[Option<u8>]) -> Result<()> {
        if known.len() != self.len {
            return Err(Error::Dimension(format!(
                "{} known entries for blocklength {}",
                known.len(),
                self.len
            )));
        }
        Ok(())
    }

    /// Runs the cascade on a pure block state.
    pub fn decode_pure<R: Rng + ?Sized>(
        &self,
        psi: &PureState,
        known: &[Option<u8>],
        rng: &mut R,
    ) -> Result<QuantumDecoding<PureState>> {
        self.check_known(known)?;
        if psi.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "state of dimension {} for output dimension {}",
                psi.dim(),
                self.dim
            )));
        }
        let mut v = psi.amplitudes().clone();
        let mut decisions = Vec::with_capacity(self.len);
        for (i, k) in known.iter().enumerate() {
            let bit = match k {
                Some(b) => *b,
                None => {
                    let proj = self.projector(i + 1, pack(&decisions))?;
                    let v0 = proj.project(&v, 0);
                    let v1 = &v - &v0;
                    let (p0, p1) = (v0.norm_squared(), v1.norm_squared());
                    let (bit, kept, p) = if rng.random::<f64>() * (p0 + p1) < p0 {
                        (0, v0, p0)
                    } else {
                        (1, v1, p1)
                    };
                    v = kept / C64::new(p.sqrt(), 0.0);
                    bit
                }
            };
            decisions.push(bit);
        }
        Ok(QuantumDecoding {
            decisions,
            state: PureState::normalized(v.iter().copied().collect())?,
        })
    }

    /// Runs the cascade on a block density operator.
    pub fn decode_density<R: Rng + ?Sized>(
        &self,
        rho: &DensityOperator,
        known: &[Option<u8>],
        rng: &mut R,
    ) -> Result<QuantumDecoding<DensityOperator>> {
        self.check_known(known)?;
        if rho.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "state of dimension {} for output dimension {}",
                rho.dim(),
                self.dim
            )));
        }
        let mut m = rho.matrix().clone();
        let mut decisions = Vec::with_capacity(self.len);
        for (i, k) in known.iter().enumerate() {
            let bit = match k {
                Some(b) => *b,
                None => {
                    let p0m = self.projector(i + 1, pack(&decisions))?.to_dense();
                    let p1m = ComplexMatrix::identity(self.dim).sub(&p0m)?;
                    let branch =
                        |p: &ComplexMatrix| -> Result<ComplexMatrix> { p.matmul(&m)?.matmul(p) };
                    let (b0, b1) = (branch(&p0m)?, branch(&p1m)?);
                    let (t0, t1) = (b0.trace().re.max(0.0), b1.trace().re.max(0.0));
                    let (bit, kept, t) = if rng.random::<f64>() * (t0 + t1) < t0 {
                        (0, b0, t0)
                    } else {
                        (1, b1, t1)
                    };
                    m = kept.scale(1.0 / t);
                    bit
                }
            };
            decisions.push(bit);
        }
        Ok(QuantumDecoding {
            decisions,
            state: DensityOperator::from_constructed(m.hermitian_part()),
        })
    }

    /// Kraus operator Π_{d_m} ⋯ Π_{d_1} of the cascade: `known` positions
    /// are substituted, the others take the successive bits of `outcome`.
    pub fn kraus(&self, known: &[Option<u8>], outcome: &[u8]) -> Result<ComplexMatrix> {
        self.check_known(known)?;
        let free = known.iter().filter(|k| k.is_none()).count();
        if outcome.len() != free {
            return Err(Error::Dimension(format!(
                "{} outcome bits for {free} decoded positions",
                outcome.len()
            )));
        }
        let mut k = ComplexMatrix::identity(self.dim);
        let mut prefix = Vec::with_capacity(self.len);
        let mut next = outcome.iter();
        for (i, slot) in known.iter().enumerate() {
            let bit = match slot {
                Some(b) => *b,
                None => {
                    let bit = *next.next().expect("length checked");
                    let p0 = self.projector(i + 1, pack(&prefix))?.to_dense();
                    let p = if bit == 0 {
                        p0
                    } else {
                        ComplexMatrix::identity(self.dim).sub(&p0)?
                    };
                    k = p.matmul(&k)?;
                    bit
                }
            };
            prefix.push(bit);
        }
        Ok(k)
    }
}

/// One pass of the Helstrom cascade over a block output state.
pub fn sc_decode_quantum<R: Rng + ?Sized>(
    w: &CqChannel,
    output_state: &DensityOperator,
    known: &[Option<u8>],
    rng: &mut R,
) -> Result<QuantumDecoding<DensityOperator>> {
    HelstromCascade::new(w, known.len())?.decode_density(output_state, known, rng)
}
