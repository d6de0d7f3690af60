//! The four-way wiretap partition, code rates, and the security and
//! reliability bounds.

use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{eve_channel, CqChannel, IsometricChannel};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polarize::{check_beta, evolve_scalar, EvolveMode, ProductOutputs, ScalarTracker};
use crate::qmath::{entropy_of_psd, ComplexMatrix};
use crate::qpolar::encoder::encode_word;
use crate::report::fmt_real;


/// Largest blocklength for brute-force leakage.
pub const MAX_LEAKAGE_BLOCKLENGTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetLabel {
    /// Good for Bob, poor for Eve: information.
    A,
    /// Poor for Eve, not good for Bob: frozen.
    B,
    /// Not poor for Eve, not good for Bob: secret key.
    X,
    /// Not poor for Eve, good for Bob: randomized.
    Y,
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SetLabel::A => "A",
            SetLabel::B => "B",
            SetLabel::X => "X",
            SetLabel::Y => "Y",
        };
        f.write_str(s)
    }
}

/// Label per index (1-based positions stored at offset i − 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarPartition {
    pub n: usize,
    pub beta: f64,
    labels: Vec<SetLabel>,
    /// Indices whose bound intervals straddle a threshold; they are frozen.
    pub undecided: usize,
    /// Violations of the degraded-pair set inclusions, if any.
    pub warnings: Vec<String>,
}

impl PolarPartition {
    /// Builds a partition from explicit labels (length 2^n).
    pub fn from_labels(n: usize, beta: f64, labels: Vec<SetLabel>) -> Result<Self> {
        if labels.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "{} labels for blocklength {}",
                labels.len(),
                1usize << n
            )));
        }
        Ok(Self {
            n,
            beta,
            labels,
            undecided: 0,
            warnings: Vec::new(),
        })
    }

    pub fn blocklength(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[SetLabel] {
        &self.labels
    }

    /// Label of the 1-based index i.
    pub fn label(&self, i: usize) -> SetLabel {
        self.labels[i - 1]
    }

    /// 1-based indices carrying `label`, ascending.
    pub fn set(&self, label: SetLabel) -> Vec<usize> {
        (1..=self.labels.len())
            .filter(|&i| self.label(i) == label)
            .collect()
    }

    pub fn count(&self, label: SetLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Indices Bob must decode: A ∪ Y.
    pub fn decoded(&self) -> Vec<usize> {
        (1..=self.labels.len())
            .filter(|&i| matches!(self.label(i), SetLabel::A | SetLabel::Y))
            .collect()
    }
}

/// Bob-side and Eve-side trackers behind a partition.
#[derive(Debug, Clone)]
pub struct PartitionTrackers {
    pub bob: Vec<ScalarTracker>,
    pub eve: Vec<ScalarTracker>,
}

fn threshold(n: usize, beta: f64) -> f64 {
    (n as f64 * beta).exp2()
}

/// Exact trackers when the outputs commute, bound intervals otherwise.
pub fn trackers_for(w: &CqChannel, n: usize) -> Result<Vec<ScalarTracker>> {
    match evolve_scalar(w, n, EvolveMode::ExactClassical) {
        Err(Error::NonCommuting { .. }) => evolve_scalar(w, n, EvolveMode::FidelityBounds),
        other => other,
    }
}

/// A = P∩G, B = P∩Gᶜ, X = Pᶜ∩Gᶜ, Y = Pᶜ∩G from per-index trackers, with G
/// Bob's good set and P Eve's poor set. Indices whose intervals straddle a
/// threshold go to B.
pub fn partition_from_trackers(
    bob: &[ScalarTracker],
    eve: &[ScalarTracker],
    beta: f64,
) -> Result<PolarPartition> {
    check_beta(beta)?;
    let len = bob.len();
    if !len.is_power_of_two() || eve.len() != len {
        return Err(Error::Invalid(format!(
            "tracker counts {} and {} do not describe one blocklength",
            bob.len(),
            eve.len()
        )));
    }
    let n = len.trailing_zeros() as usize;
    let t = threshold(n, beta);
    let mut labels = Vec::with_capacity(len);
    let mut undecided = 0;
    for (b, e) in bob.iter().zip(eve) {
        let good = b.is_good(beta);
        let poor = e.is_poor(beta);
        let bob_unsure = !good && b.lower.log2() < -t;
        let eve_unsure = !poor && e.upper.log2_complement() < -t;
        labels.push(if bob_unsure || eve_unsure {
            undecided += 1;
            SetLabel::B
        } else {
            match (poor, good) {
                (true, true) => SetLabel::A,
                (true, false) => SetLabel::B,
                (false, false) => SetLabel::X,
                (false, true) => SetLabel::Y,
            }
        });
    }
    let mut warnings = Vec::new();
    if bob.iter().chain(eve).all(|t| t.exact) {
        for (b, e) in bob.iter().zip(eve) {
            if e.is_good(beta) && !b.is_good(beta) {
                warnings.push(format!("index {} is good for Eve but not for Bob", b.index));
            }
        }
    }
    Ok(PolarPartition {
        n,
        beta,
        labels,
        undecided,
        warnings,
    })
}

/// Evolves both channels to level n and partitions [N].
pub fn partition_channels(
    w: &CqChannel,
    wstar: &CqChannel,
    n: usize,
    beta: f64,
) -> Result<(PolarPartition, PartitionTrackers)> {
    check_beta(beta)?;
    let bob = trackers_for(w, n)?;
    let eve = trackers_for(wstar, n)?;
    let p = partition_from_trackers(&bob, &eve, beta)?;
    Ok((p, PartitionTrackers { bob, eve }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodeRates {
    /// |A|/N.
    pub rate: f64,
    /// |X|/N.
    pub key_rate: f64,
    /// |B|/N.
    pub frozen_rate: f64,
    /// |Y|/N.
    pub random_rate: f64,
}

pub fn code_rates(p: &PolarPartition) -> CodeRates {
    let n = p.blocklength() as f64;
    CodeRates {
        rate: p.count(SetLabel::A) as f64 / n,
        key_rate: p.count(SetLabel::X) as f64 / n,
        frozen_rate: p.count(SetLabel::B) as f64 / n,
        random_rate: p.count(SetLabel::Y) as f64 / n,
    }
}

fn tracker_at(trackers: &[ScalarTracker], i: usize) -> Result<&ScalarTracker> {
    trackers
        .get(i - 1)
        .filter(|t| t.index == i)
        .or_else(|| trackers.iter().find(|t| t.index == i))
        .ok_or(Error::MissingTracker(i))
}

/// Σ_{i∈A} √(1 − l_i²) with l_i the lower bound on Eve's √F.
pub fn security_bound(p: &PolarPartition, eve: &[ScalarTracker]) -> Result<f64> {
    let mut total = 0.0;
    for i in p.set(SetLabel::A) {
        let l = tracker_at(eve, i)?.lower;
        // 1 − l² = (1 − l)(1 + l)
        total += (0.5 * (l.ln_complement() + l.value().ln_1p())).exp();
    }
    Ok(total)
}

/// 2·√(Σ_{i∈A∪Y} ½·u_i) with u_i the upper bound on Bob's √F, clamped to [0, 2].
pub fn reliability_bound(p: &PolarPartition, bob: &[ScalarTracker]) -> Result<f64> {
    let mut total = 0.0;
    for i in p.decoded() {
        total += 0.5 * tracker_at(bob, i)?.upper.value();
    }
    Ok((2.0 * total.sqrt()).clamp(0.0, 2.0))
}

/// A partition with its frozen and key bit values.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapCode {
    pub partition: PolarPartition,
    /// Values on B in index order.
    pub frozen: Vec<u8>,
    /// Secret key on X in index order.
    pub key: Vec<u8>,
    pub rng_seed: u64,
}

impl WiretapCode {
    /// All-zero frozen bits and a uniform key drawn from `seed`.
    pub fn new(partition: PolarPartition, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = (0..partition.count(SetLabel::X))
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let frozen = vec![0; partition.count(SetLabel::B)];
        Self {
            partition,
            frozen,
            key,
            rng_seed: seed,
        }
    }

    pub fn with_frozen(mut self, frozen: Vec<u8>) -> Result<Self> {
        if frozen.len() != self.partition.count(SetLabel::B) || frozen.iter().any(|&b| b > 1) {
            return Err(Error::Invalid(format!(
                "frozen vector must hold {} bits",
                self.partition.count(SetLabel::B)
            )));
        }
        self.frozen = frozen;
        Ok(self)
    }

    /// Values Bob substitutes rather than decodes: frozen bits on B and the
    /// key on X. Decoded positions (A and Y) are `None`.
    pub fn known_bits(&self) -> Vec<Option<u8>> {
        let (mut b, mut x) = (0, 0);
        self.partition
            .labels()
            .iter()
            .map(|label| match label {
                SetLabel::B => {
                    b += 1;
                    Some(self.frozen[b - 1])
                }
                SetLabel::X => {
                    x += 1;
                    Some(self.key[x - 1])
                }
                _ => None,
            })
            .collect()
    }

    /// Input word u with u_A, u_Y from the given bits and u_B, u_X from the
    /// code. Bit i − 1 of each slice feeds the i-th member of its set.
    pub fn input_word(&self, info: &[u8], random: &[u8]) -> Vec<u8> {
        let mut u = vec![0u8; self.partition.blocklength()];
        let (mut a, mut b, mut x, mut y) = (0, 0, 0, 0);
        for (slot, label) in u.iter_mut().zip(self.partition.labels()) {
            *slot = match label {
                SetLabel::A => {
                    a += 1;
                    info[a - 1]
                }
                SetLabel::B => {
                    b += 1;
                    self.frozen[b - 1]
                }
                SetLabel::X => {
                    x += 1;
                    self.key[x - 1]
                }
                SetLabel::Y => {
                    y += 1;
                    random[y - 1]
                }
            };
        }
        u
    }
}

/// I(U_A; E^N) in bits by enumeration: U_A, U_Y and the key U_X uniform, U_B
/// fixed to the code's frozen bits.
pub fn exact_leakage(code: &WiretapCode, ch: &IsometricChannel) -> Result<f64> {
    let p = &code.partition;
    let len = p.blocklength();
    if len > MAX_LEAKAGE_BLOCKLENGTH {
        return Err(Error::Resource(format!(
            "exact leakage limited to N ≤ {MAX_LEAKAGE_BLOCKLENGTH}, got {len}"
        )));
    }
    let tol = Tolerances::default();
    let eve = eve_channel(ch)?;
    let outputs = ProductOutputs::new(&eve);
    let dim = outputs.block_dim(len);
    if dim > tol.max_dim {
        return Err(Error::Resource(format!(
            "Eve's block dimension {dim} exceeds the cap {}",
            tol.max_dim
        )));
    }
    let a_set = p.set(SetLabel::A);
    let hidden: Vec<usize> = (1..=len)
        .filter(|&i| matches!(p.label(i), SetLabel::X | SetLabel::Y))
        .collect();
    let mut base = 0u64;
    for (k, i) in p.set(SetLabel::B).into_iter().enumerate() {
        base |= (code.frozen[k] as u64) << (len - i);
    }
    let scatter = |bits: usize, set: &[usize]| -> u64 {
        set.iter().enumerate().fold(0u64, |acc, (k, &i)| {
            acc | ((((bits >> k) & 1) as u64) << (len - i))
        })
    };
    let weight = 1.0 / (1u64 << hidden.len()) as f64;
    let states: Result<Vec<ComplexMatrix>> = (0..1usize << a_set.len())
        .into_par_iter()
        .map(|a| {
            let mut acc = ComplexMatrix::zeros(dim, dim);
            let head = base | scatter(a, &a_set);
            for h in 0..1usize << hidden.len() {
                outputs.accumulate(
                    &mut acc,
                    encode_word(head | scatter(h, &hidden), p.n),
                    len,
                    weight,
                )?;
            }
            Ok(acc)
        })
        .collect();
    let states = states?;
    let count = states.len() as f64;
    let mut avg = ComplexMatrix::zeros(dim, dim);
    let mut cond = 0.0;
    for s in &states {
        avg.axpy(1.0 / count, s)?;
        cond += entropy_of_psd(s, &tol)? / count;
    }
    Ok((entropy_of_psd(&avg, &tol)? - cond).max(0.0))
}

/// Rates and bounds for a code, serialized with fixed field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecurityReport {
    pub rate: f64,
    pub key_rate: f64,
    pub frozen_rate: f64,
    pub random_rate: f64,
    pub security_bound: f64,
    pub reliability_bound: f64,
    pub leakage_exact: Option<f64>,
    pub undecided: usize,
}

pub fn security_report(
    p: &PolarPartition,
    trackers: &PartitionTrackers,
    leakage_exact: Option<f64>,
) -> Result<SecurityReport> {
    let r = code_rates(p);
    Ok(SecurityReport {
        rate: r.rate,
        key_rate: r.key_rate,
        frozen_rate: r.frozen_rate,
        random_rate: r.random_rate,
        security_bound: security_bound(p, &trackers.eve)?,
        reliability_bound: reliability_bound(p, &trackers.bob)?,
        leakage_exact,
        undecided: p.undecided,
    })
}

/// CSV with columns index,set,bob_upper_log2,eve_lower_log2.
pub fn partition_csv(p: &PolarPartition, trackers: &PartitionTrackers) -> Result<String> {
    let mut s = String::from("index,set,bob_upper_log2,eve_lower_log2\n");
    for i in 1..=p.blocklength() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            i,
            p.label(i),
            fmt_real(tracker_at(&trackers.bob, i)?.upper.log2()),
            fmt_real(tracker_at(&trackers.eve, i)?.lower.log2())
        );
    }
    Ok(s)
}
