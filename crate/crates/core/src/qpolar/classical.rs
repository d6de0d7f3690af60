//! Successive cancellation over the classical reduction of a commuting
//! channel, with known bits substituted rather than decoded.

use rand::Rng;

use super::encoder::{bit_reverse, level_of};
use crate::channels::CqChannel;
use crate::error::{Error, Result};
use crate::polarize::{classical_reduce, ClassicalReduction};

/// Exact box-plus: LLR of a ⊕ b from the LLRs of a and b.
pub(crate) fn box_plus(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() || a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let sign = a.signum() * b.signum();
    match (a.is_infinite(), b.is_infinite()) {
        (true, true) => sign * f64::INFINITY,
        (true, false) => sign * b.abs(),
        (false, true) => sign * a.abs(),
        (false, false) => {
            sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p()
                - (-(a - b).abs()).exp().ln_1p()
        }
    }
}

fn combine(own: f64, partner: f64, bit: u8) -> f64 {
    let s = if bit == 0 {
        own + partner
    } else {
        own - partner
    };
    if s.is_nan() {
        0.0
    } else {
        s
    }
}

/// Hard decision with ties (and NaN) going to 0.
fn decide(llr: f64) -> u8 {
    if llr < 0.0 {
        1
    } else {
        0
    }
}

/// Decodes u from z = u·F^{⊗n} given per-position LLRs of z; returns z.
fn sc(llr: &[f64], known: &[Option<u8>], u: &mut [u8]) -> Vec<u8> {
    let m = llr.len();
    if m == 1 {
        let b = known[0].unwrap_or_else(|| decide(llr[0]));
        u[0] = b;
        return vec![b];
    }
    let h = m / 2;
    let first: Vec<f64> = (0..h).map(|k| box_plus(llr[k], llr[k + h])).collect();
    let (u_lo, u_hi) = u.split_at_mut(h);
    let xa = sc(&first, &known[..h], u_lo);
    let second: Vec<f64> = (0..h).map(|k| combine(llr[k + h], llr[k], xa[k])).collect();
    let xb = sc(&second, &known[h..], u_hi);
    let mut z: Vec<u8> = xa.iter().zip(&xb).map(|(a, b)| a ^ b).collect();
    z.extend_from_slice(&xb);
    z
}

/// SC decoder for a commuting cq channel read in its common eigenbasis.
#[derive(Debug, Clone)]
pub struct ClassicalScDecoder {
    reduction: ClassicalReduction,
    llr: Vec<f64>,
}

impl ClassicalScDecoder {
    pub fn new(reduction: ClassicalReduction) -> Self {
        let llr = reduction
            .p0
            .iter()
            .zip(&reduction.p1)
            .map(|(&a, &b)| a.ln() - b.ln())
            .collect();
        Self { reduction, llr }
    }

    pub fn from_channel(w: &CqChannel) -> Result<Self> {
        Ok(Self::new(classical_reduce(w)?))
    }

    pub fn reduction(&self) -> &ClassicalReduction {
        &self.reduction
    }

    pub fn alphabet(&self) -> usize {
        self.llr.len()
    }

    /// Draws an output symbol for input bit `x`.
    pub fn sample<R: Rng + ?Sized>(&self, x: u8, rng: &mut R) -> usize {
        let p = if x == 0 {
            &self.reduction.p0
        } else {
            &self.reduction.p1
        };
        sample_index(p, rng)
    }

    /// Decodes all N bits from received symbols. `known[i]` holds the
    /// substituted value of frozen and key positions.
    pub fn decode(&self, y: &[usize], known: &[Option<u8>]) -> Result<Vec<u8>> {
        let n = level_of(y.len())?;
        if known.len() != y.len() {
            return Err(Error::Dimension(format!(
                "{} known entries for {} symbols",
                known.len(),
                y.len()
            )));
        }
        if let Some(&bad) = y.iter().find(|&&s| s >= self.llr.len()) {
            return Err(Error::Invalid(format!(
                "symbol {bad} outside the alphabet of size {}",
                self.llr.len()
            )));
        }
        let llr: Vec<f64> = (0..y.len())
            .map(|k| self.llr[y[bit_reverse(k, n)]])
            .collect();
        let mut u = vec![0u8; y.len()];
        sc(&llr, known, &mut u);
        Ok(u)
    }
}

pub(crate) fn sample_index<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    let total: f64 = p.iter().sum();
    let r = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, &q) in p.iter().enumerate() {
        acc += q;
        if r < acc {
            return k;
        }
    }
    p.iter().rposition(|&q| q > 0.0).unwrap_or(0)
}
