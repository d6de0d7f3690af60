use rayon::prelude::*;
use serde::Serialize;

use super::families::build_channel;
use super::isometric::{bob_channel, eve_channel, symmetric_coherent_info, IsometricChannel};
use super::spec::ChannelFamilySpec;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qmath::{entropy_of_psd, ComplexMatrix};

const GRID_POINTS: usize = 10_000;
const GOLDEN_TOL: f64 = 1e-9;

struct PriorObjective {
    b: (ComplexMatrix, ComplexMatrix),
    e: (ComplexMatrix, ComplexMatrix),
    tol: Tolerances,
}

impl PriorObjective {
    fn new(ch: &IsometricChannel) -> Result<Self> {
        let (b0, b1) = bob_channel(ch)?.into_outputs();
        let (e0, e1) = eve_channel(ch)?.into_outputs();
        Ok(Self {
            b: (b0.into_matrix(), b1.into_matrix()),
            e: (e0.into_matrix(), e1.into_matrix()),
            tol: Tolerances::default(),
        })
    }

    fn mix(pair: &(ComplexMatrix, ComplexMatrix), p: f64) -> ComplexMatrix {
        let mut m = pair.0.scale(1.0 - p);
        m.axpy(p, &pair.1).expect("equal shapes");
        m
    }

    fn eval(&self, p: f64) -> Result<f64> {
        Ok(entropy_of_psd(&Self::mix(&self.b, p), &self.tol)?
            - entropy_of_psd(&Self::mix(&self.e, p), &self.tol)?)
    }
}

/// H(B) − H(E) for the input (1−p)|b₀⟩⟨b₀| + p|b₁⟩⟨b₁|.
pub fn coherent_info_at_prior(ch: &IsometricChannel, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("input prior {p} outside [0, 1]")));
    }
    PriorObjective::new(ch)?.eval(p)
}

/// Maximum of the coherent information over diagonal input priors:
/// a 10⁴-interval grid followed by golden-section refinement around the best
/// grid point. Returns (argmax prior, maximum).
pub fn maximize_coherent_info(ch: &IsometricChannel) -> Result<(f64, f64)> {
    let obj = PriorObjective::new(ch)?;
    let mut best = (0.0, obj.eval(0.0)?);
    for k in 1..=GRID_POINTS {
        let p = k as f64 / GRID_POINTS as f64;
        let v = obj.eval(p)?;
        if v > best.1 {
            best = (p, v);
        }
    }
    let step = 1.0 / GRID_POINTS as f64;
    let (mut lo, mut hi) = ((best.0 - step).max(0.0), (best.0 + step).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (obj.eval(c)?, obj.eval(d)?);
    while hi - lo > GOLDEN_TOL {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = obj.eval(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = obj.eval(d)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = obj.eval(mid)?;
    if fm > best.1 {
        best = (mid, fm);
    }
    Ok(best)
}

/// Single-letter quantum capacity of a degradable family member, taken over
/// diagonal inputs in the channel's input basis.
pub fn quantum_capacity_degradable(spec: &ChannelFamilySpec) -> Result<f64> {
    spec.validate()?;
    if !spec.is_degradable() {
        return Err(Error::Domain(format!(
            "{spec} is not degradable; valid range is {}",
            spec.degradable_range()
        )));
    }
    Ok(maximize_coherent_info(&build_channel(spec)?)?.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    NonDegradable,
    NonPositiveCoherentInfo,
}

/// One point of the capacity-to-symmetric-rate curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityRow {
    pub parameter: f64,
    pub q_true: Option<f64>,
    pub ic_sym: f64,
    pub ratio: Option<f64>,
    pub status: RowStatus,
}

/// Q / I_c over a parameter grid. Rows outside the degradable range or with
/// I_c ≤ 0 are flagged and carry no ratio.
pub fn capacity_ratio_curve(base: &ChannelFamilySpec, grid: &[f64]) -> Result<Vec<CapacityRow>> {
    grid.par_iter()
        .map(|&value| {
            let spec = base.with_value(value);
            spec.validate()?;
            let ch = build_channel(&spec)?;
            let ic_sym = symmetric_coherent_info(&ch)?;
            if !spec.is_degradable() {
                return Ok(CapacityRow {
                    parameter: value,
                    q_true: None,
                    ic_sym,
                    ratio: None,
                    status: RowStatus::NonDegradable,
                });
            }
            let q_true = maximize_coherent_info(&ch)?.1;
            let (ratio, status) = if ic_sym > 0.0 {
                (Some(q_true / ic_sym), RowStatus::Ok)
            } else {
                (None, RowStatus::NonPositiveCoherentInfo)
            };
            Ok(CapacityRow {
                parameter: value,
                q_true: Some(q_true),
                ic_sym,
                ratio,
                status,
            })
        })
        .collect()
}
