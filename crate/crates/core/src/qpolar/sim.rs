//! Monte Carlo block-error estimates for the classical and quantum SC
//! decoders. Trial t draws from its own ChaCha stream, so results do not
//! depend on the thread count.

use std::fmt::Write as _;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::classical::{sample_index, ClassicalScDecoder};
use super::encoder::encode;
use super::quantum::HelstromCascade;
use crate::channels::CqChannel;
use crate::error::{Error, Result};
use crate::polarize::classical_reduce;
use crate::qmath::{PureState, C64};
use crate::report::fmt_real;
use crate::wiretap::{SetLabel, WiretapCode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloRun {
    pub seed: u64,
    pub trials: usize,
    pub errors: usize,
    pub error_rate: f64,
    /// Block error per trial.
    #[serde(skip)]
    pub flags: Vec<bool>,
}

impl MonteCarloRun {
    fn from_flags(seed: u64, flags: Vec<bool>) -> Self {
        let errors = flags.iter().filter(|&&f| f).count();
        let trials = flags.len();
        Self {
            seed,
            trials,
            errors,
            error_rate: if trials == 0 {
                0.0
            } else {
                errors as f64 / trials as f64
            },
            flags,
        }
    }

    /// `trial,error_flag` rows followed by a `total,<errors>` row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("trial,error_flag\n");
        for (t, f) in self.flags.iter().enumerate() {
            let _ = writeln!(s, "{t},{}", u8::from(*f));
        }
        let _ = writeln!(s, "total,{}", self.errors);
        s
    }

    /// Summary line used by the CLI.
    pub fn summary(&self) -> String {
        format!(
            "seed={} trials={} errors={} error_rate={}",
            self.seed,
            self.trials,
            self.errors,
            fmt_real(self.error_rate)
        )
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Uniform information and randomization bits, then the full input word.
fn draw_input<R: Rng + ?Sized>(code: &WiretapCode, rng: &mut R) -> Vec<u8> {
    let p = &code.partition;
    let info: Vec<u8> = (0..p.count(SetLabel::A))
        .map(|_| rng.random_range(0..2u8))
        .collect();
    let random: Vec<u8> = (0..p.count(SetLabel::Y))
        .map(|_| rng.random_range(0..2u8))
        .collect();
    code.input_word(&info, &random)
}

fn block_error(u: &[u8], decided: &[u8], known: &[Option<u8>]) -> bool {
    u.iter()
        .zip(decided)
        .zip(known)
        .any(|((a, b), k)| k.is_none() && a != b)
}

/// Classical SC over the reduced tables of a commuting channel.
pub fn monte_carlo_classical(
    w: &CqChannel,
    code: &WiretapCode,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloRun> {
    let dec = ClassicalScDecoder::from_channel(w)?;
    let known = code.known_bits();
    let flags: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let u = draw_input(code, &mut rng);
            let x = encode(&u)?;
            let y: Vec<usize> = x.iter().map(|&b| dec.sample(b, &mut rng)).collect();
            let decided = dec.decode(&y, &known)?;
            Ok(block_error(&u, &decided, &known))
        })
        .collect();
    Ok(MonteCarloRun::from_flags(seed, flags?))
}

/// Spectral decomposition of each output as an ensemble of pure states. A
/// commuting channel uses its common eigenbasis so that sampled symbols line
/// up with the classical reduction.
#[derive(Debug, Clone)]
pub struct PureEnsembles {
    probs: [Vec<f64>; 2],
    vectors: [Vec<DVector<C64>>; 2],
}

impl PureEnsembles {
    pub fn new(w: &CqChannel) -> Result<Self> {
        if let Ok(red) = classical_reduce(w) {
            let cols: Vec<DVector<C64>> = (0..w.dim())
                .map(|k| red.basis.as_nalgebra().column(k).into_owned())
                .collect();
            return Ok(Self {
                probs: [red.p0, red.p1],
                vectors: [cols.clone(), cols],
            });
        }
        let mut probs: [Vec<f64>; 2] = Default::default();
        let mut vectors: [Vec<DVector<C64>>; 2] = Default::default();
        for x in 0..2u8 {
            let (vals, vecs) = w.rho(x).matrix().eigh()?;
            probs[x as usize] = vals.iter().map(|v| v.max(0.0)).collect();
            vectors[x as usize] = (0..w.dim())
                .map(|k| vecs.as_nalgebra().column(k).into_owned())
                .collect();
        }
        Ok(Self { probs, vectors })
    }

    /// Index of a sampled component of ρ_x.
    pub fn sample<R: Rng + ?Sized>(&self, x: u8, rng: &mut R) -> usize {
        sample_index(&self.probs[x as usize], rng)
    }

    /// Product state of the chosen components.
    pub fn product(&self, x: &[u8], picks: &[usize]) -> Result<PureState> {
        let mut v = DVector::from_element(1, C64::new(1.0, 0.0));
        for (&b, &k) in x.iter().zip(picks) {
            v = v.kronecker(&self.vectors[b as usize][k]);
        }
        PureState::normalized(v.iter().copied().collect())
            .map_err(|e| Error::Domain(format!("sampled product state: {e}")))
    }
}

/// Quantum SC on sampled pure product outputs (an unbiased unravelling of
/// the mixed block output).
pub fn monte_carlo_quantum(
    w: &CqChannel,
    code: &WiretapCode,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloRun> {
    let cascade = HelstromCascade::new(w, code.partition.blocklength())?;
    let ensembles = PureEnsembles::new(w)?;
    let known = code.known_bits();
    let flags: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let u = draw_input(code, &mut rng);
            let x = encode(&u)?;
            let picks: Vec<usize> = x.iter().map(|&b| ensembles.sample(b, &mut rng)).collect();
            let psi = ensembles.product(&x, &picks)?;
            let out = cascade.decode_pure(&psi, &known, &mut rng)?;
            Ok(block_error(&u, &out.decisions, &known))
        })
        .collect();
    Ok(MonteCarloRun::from_flags(seed, flags?))
}
