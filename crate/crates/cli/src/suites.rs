//! Property suites behind `cqpolar verify`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cqpolar::channels::{
    bob_channel, build_channel, check_classical_environment, eve_channel, symmetric_holevo, Axis,
};
use cqpolar::polarize::{
    combine_minus, combine_plus, evolve_scalar, verify_pure_state_invariance, EvolveMode,
};
use cqpolar::qmath::random::{random_density, random_pure};
use cqpolar::report::fmt_real;
use cqpolar::{ChannelFamilySpec, CqChannel};

use crate::{Common, Failure, Suite};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub checks: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str, seed: u64, tolerance: f64) -> Self {
        Self {
            suite,
            seed,
            checks: 0,
            failures: 0,
            max_deviation: 0.0,
            tolerance,
            passed: true,
            notes: Vec::new(),
        }
    }

    /// Records one check with its deviation from the expected value.
    fn record(&mut self, deviation: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        if deviation.is_nan() || deviation > self.tolerance {
            self.failures += 1;
            self.passed = false;
            if self.notes.len() < 20 {
                self.notes.push(what());
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("quantity,value\n");
        let _ = writeln!(s, "suite,{}", self.suite);
        let _ = writeln!(s, "seed,{}", self.seed);
        let _ = writeln!(s, "checks,{}", self.checks);
        let _ = writeln!(s, "failures,{}", self.failures);
        let _ = writeln!(s, "max_deviation,{}", fmt_real(self.max_deviation));
        let _ = writeln!(s, "tolerance,{}", fmt_real(self.tolerance));
        let _ = writeln!(s, "passed,{}", self.passed);
        s
    }
}

pub fn run(suite: Suite, c: &Common) -> Result<SuiteReport, Failure> {
    match suite {
        Suite::AppendixA => appendix_a(c),
        Suite::AppendixB => appendix_b(c),
        Suite::Lemma1 => lemma1(c),
        Suite::Conservation => conservation(c),
    }
}

fn random_channel(rng: &mut ChaCha8Rng) -> Result<CqChannel, Failure> {
    let d = rng.random_range(2..=4);
    let r0 = rng.random_range(1..=d);
    let r1 = rng.random_range(1..=d);
    Ok(CqChannel::new(
        random_density(d, r0, rng),
        random_density(d, r1, rng),
    )?)
}

/// F(W⁻) = F(W) for pure-state channels.
fn appendix_a(c: &Common) -> Result<SuiteReport, Failure> {
    let mut rep = SuiteReport::new("appendix_a", c.seed, 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for k in 0..c.trials.unwrap_or(100) {
        let d = rng.random_range(2..=4);
        let (a, b) = (random_pure(d, &mut rng), random_pure(d, &mut rng));
        let chk = verify_pure_state_invariance(&a, &b)?;
        rep.record(chk.gap, || {
            format!("pair {k}: F(W) = {}, F(W-) = {}", chk.f_w, chk.f_w_minus)
        });
    }
    Ok(rep)
}

fn family_grid() -> Vec<ChannelFamilySpec> {
    let grid: Vec<f64> = (0..20).map(|k| k as f64 / 19.0).collect();
    let mut specs = Vec::new();
    for &p in &grid {
        specs.push(ChannelFamilySpec::amplitude_damping(p));
        specs.push(ChannelFamilySpec::photon_detected_jump(p));
        specs.push(ChannelFamilySpec::erasure(p));
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            specs.push(ChannelFamilySpec::dephasing(p, axis));
        }
    }
    specs.extend((2..22).map(ChannelFamilySpec::cloning));
    specs
}

/// Eve's outputs commute for every family over its grid.
fn appendix_b(c: &Common) -> Result<SuiteReport, Failure> {
    let mut rep = SuiteReport::new("appendix_b", c.seed, 1e-12);
    for spec in family_grid() {
        let norm = check_classical_environment(&build_channel(&spec)?)?;
        rep.record(norm, || format!("{spec}: commutator norm {norm:e}"));
    }
    Ok(rep)
}

/// For a degraded pair, Eve's √F dominates Bob's index by index, so Eve-good
/// implies Bob-good and Bob-poor implies Eve-poor.
fn lemma1(c: &Common) -> Result<SuiteReport, Failure> {
    let mut rep = SuiteReport::new("lemma1", c.seed, 1e-12);
    let (bob, eve) = match &c.spec {
        Some(_) => {
            let ch = build_channel(&crate::commands::spec_of(c)?)?;
            (bob_channel(&ch)?, eve_channel(&ch)?)
        }
        None => (CqChannel::bec(0.2)?, CqChannel::bec(0.3)?),
    };
    let n_max = c.n.unwrap_or(10);
    for n in 0..=n_max {
        let tb = evolve_scalar(&bob, n, EvolveMode::ExactClassical)?;
        let te = evolve_scalar(&eve, n, EvolveMode::ExactClassical)?;
        for (b, e) in tb.iter().zip(&te) {
            let excess = (b.upper.value() - e.lower.value()).max(0.0);
            rep.record(excess, || {
                format!(
                    "n={n} index {}: Bob {} above Eve {}",
                    b.index,
                    b.upper.value(),
                    e.lower.value()
                )
            });
            for beta in [0.1, 0.2, 0.3, 0.4, 0.5] {
                let broken =
                    (e.is_good(beta) && !b.is_good(beta)) || (b.is_poor(beta) && !e.is_poor(beta));
                rep.record(if broken { 1.0 } else { 0.0 }, || {
                    format!("n={n} index {} beta {beta}: set inclusion fails", b.index)
                });
            }
        }
    }
    Ok(rep)
}

/// I(W⁻) + I(W⁺) = 2 I(W).
fn conservation(c: &Common) -> Result<SuiteReport, Failure> {
    let mut rep = SuiteReport::new("conservation", c.seed, 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for k in 0..c.trials.unwrap_or(100) {
        let w = random_channel(&mut rng)?;
        let total = symmetric_holevo(&combine_minus(&w)?)? + symmetric_holevo(&combine_plus(&w)?)?;
        let twice = 2.0 * symmetric_holevo(&w)?;
        let dev = (total - twice).abs();
        rep.record(dev, || format!("channel {k}: {total} vs {twice}"));
    }
    Ok(rep)
}
