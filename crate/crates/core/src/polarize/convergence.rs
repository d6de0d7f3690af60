use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bhat::Bhat;
use super::evolve::{check_beta, EvolveOptions};
use super::table::{classical_reduce, ClassicalTable};
use crate::channels::CqChannel;
use crate::error::{Error, Result};

/// Parameters of the X_n process Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceProcessConfig {
    /// Growth constant of the minus branch: X_{n+1} ≤ q·X_n.
    pub q: f64,
    pub beta: f64,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ConvergenceProcessConfig {
    pub fn new(beta: f64, n_max: usize, trials: usize, seed: u64) -> Self {
        Self {
            q: 2.0,
            beta,
            n_max,
            trials,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        check_beta(self.beta)?;
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::Domain(format!(
                "q = {} must be a positive real",
                self.q
            )));
        }
        if self.trials == 0 {
            return Err(Error::Invalid("at least one trial is required".into()));
        }
        Ok(())
    }
}

/// What drives X_n along a random path.
#[derive(Debug, Clone)]
pub enum ProcessSource {
    /// X_{n+1} = min(1, q·X_n) or X_n², each with probability 1/2.
    Synthetic { x0: f64 },
    /// X_n = Z of the synthesized channel (classical-reducible channel).
    Bhattacharyya { channel: CqChannel },
    /// X_n = 1 − Z² of the synthesized channel.
    Complement { channel: CqChannel },
}

/// Empirical Pr{X_n < 2^{−2^{nβ}}} with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceEstimate {
    pub n: usize,
    pub hits: usize,
    pub trials: usize,
    pub probability: f64,
    pub lower: f64,
    pub upper: f64,
}

const Z95: f64 = 1.959963984540054;

fn wilson(hits: usize, trials: usize) -> (f64, f64) {
    let t = trials as f64;
    let p = hits as f64 / t;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / t;
    let centre = (p + z2 / (2.0 * t)) / denom;
    let half = Z95 * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

enum Walker {
    Synthetic {
        log2_x: f64,
        log2_q: f64,
    },
    Table {
        table: ClassicalTable,
        cap: usize,
        complement: bool,
    },
}

impl Walker {
    fn log2_x(&self) -> f64 {
        match self {
            Walker::Synthetic { log2_x, .. } => *log2_x,
            Walker::Table {
                table, complement, ..
            } => {
                let z: Bhat = table.bhattacharyya();
                if *complement {
                    // 1 − Z² = (1 − Z)(1 + Z)
                    (z.ln_complement() + z.value().ln_1p()) / std::f64::consts::LN_2
                } else {
                    z.log2()
                }
            }
        }
    }

    fn step(&mut self, plus: bool) {
        match self {
            Walker::Synthetic { log2_x, log2_q } => {
                *log2_x = if plus {
                    2.0 * *log2_x
                } else {
                    (*log2_x + *log2_q).min(0.0)
                };
            }
            Walker::Table { table, cap, .. } => {
                let next = table.transform(plus);
                // Degrading keeps Z an upper bound, the conservative side for
                // the "X small" event of the direct process.
                *table = if next.len() > *cap {
                    next.degraded(*cap)
                } else {
                    next
                };
            }
        }
    }
}

/// Per-level estimates for n = 0..=n_max. Trial t draws its path from the
/// ChaCha8 stream t of `seed`, so the result is independent of scheduling.
pub fn simulate_convergence_theorem(
    cfg: &ConvergenceProcessConfig,
    source: &ProcessSource,
) -> Result<Vec<ConvergenceEstimate>> {
    cfg.validate()?;
    let base = match source {
        ProcessSource::Synthetic { x0 } => {
            if !(0.0..=1.0).contains(x0) {
                return Err(Error::Domain(format!("x0 = {x0} outside [0, 1]")));
            }
            None
        }
        ProcessSource::Bhattacharyya { channel } | ProcessSource::Complement { channel } => {
            Some(classical_reduce(channel)?.table())
        }
    };
    let cap = EvolveOptions::default().alphabet_cap;
    let make = || match source {
        ProcessSource::Synthetic { x0 } => Walker::Synthetic {
            log2_x: x0.log2(),
            log2_q: cfg.q.log2(),
        },
        ProcessSource::Bhattacharyya { .. } | ProcessSource::Complement { .. } => {
            let t = base.clone().expect("table built above");
            Walker::Table {
                table: if t.len() > cap { t.degraded(cap) } else { t },
                cap,
                complement: matches!(source, ProcessSource::Complement { .. }),
            }
        }
    };
    let levels = cfg.n_max + 1;
    let hits = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial as u64);
            let mut walker = make();
            let mut row = vec![0usize; levels];
            for (n, slot) in row.iter_mut().enumerate() {
                if n > 0 {
                    walker.step(rng.random::<bool>());
                }
                let threshold = -(n as f64 * cfg.beta).exp2();
                *slot = usize::from(walker.log2_x() < threshold);
            }
            row
        })
        .reduce(
            || vec![0usize; levels],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hits
        .into_iter()
        .enumerate()
        .map(|(n, h)| {
            let (lower, upper) = wilson(h, cfg.trials);
            ConvergenceEstimate {
                n,
                hits: h,
                trials: cfg.trials,
                probability: h as f64 / cfg.trials as f64,
                lower,
                upper,
            }
        })
        .collect())
}
