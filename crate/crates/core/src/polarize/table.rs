use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::bhat::Bhat;
use crate::channels::CqChannel;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, C64};

/// Joint diagonalization of a commuting cq channel.
#[derive(Debug, Clone)]
pub struct ClassicalReduction {
    /// Columns are the common eigenvectors.
    pub basis: ComplexMatrix,
    /// ⟨v_k|ρ₀|v_k⟩.
    pub p0: Vec<f64>,
    /// ⟨v_k|ρ₁|v_k⟩.
    pub p1: Vec<f64>,
}

impl ClassicalReduction {
    pub fn table(&self) -> ClassicalTable {
        ClassicalTable::from_probs(&self.p0, &self.p1)
    }
}

/// Reduces a commuting cq channel to a transition table; refuses with the
/// commutator norm otherwise.
pub fn classical_reduce(w: &CqChannel) -> Result<ClassicalReduction> {
    let tol = Tolerances::default();
    let norm = w.commutator_norm()?;
    if norm > tol.commute {
        return Err(Error::NonCommuting { norm });
    }
    let (rho0, rho1) = w.outputs();
    let d = w.dim();
    let (vals, vecs) = rho0.matrix().eigh()?;
    let v = vecs.as_nalgebra();
    let mut basis = nalgebra::DMatrix::<C64>::zeros(d, d);
    // Within each degenerate eigenspace of ρ₀, diagonalize ρ₁.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && vals[end] - vals[end - 1] <= 1e-9 {
            end += 1;
        }
        let q = v.columns(start, end - start).into_owned();
        let restricted =
            ComplexMatrix::from_nalgebra(q.adjoint() * rho1.matrix().as_nalgebra() * &q);
        let (_, inner) = restricted.eigh()?;
        let rotated = &q * inner.as_nalgebra();
        basis.columns_mut(start, end - start).copy_from(&rotated);
        start = end;
    }
    let diag = |m: &ComplexMatrix| -> Vec<f64> {
        let r = basis.adjoint() * m.as_nalgebra() * &basis;
        (0..d).map(|k| r[(k, k)].re.max(0.0)).collect()
    };
    let (p0, p1) = (diag(rho0.matrix()), diag(rho1.matrix()));
    Ok(ClassicalReduction {
        basis: ComplexMatrix::from_nalgebra(basis),
        p0,
        p1,
    })
}

fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn log_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Binary-input channel over a finite alphabet, stored as log-likelihood
/// pairs (ln W(y|0), ln W(y|1)). After [`ClassicalTable::canonical`] the
/// symbols are sorted by log-likelihood ratio with equal ratios merged.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTable {
    ln_a: Vec<f64>,
    ln_b: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ClassicalTable {
    pub fn from_probs(p0: &[f64], p1: &[f64]) -> Self {
        Self::from_logs(
            p0.iter().map(|p| p.ln()).collect(),
            p1.iter().map(|p| p.ln()).collect(),
        )
        .canonical()
    }

    fn from_logs(ln_a: Vec<f64>, ln_b: Vec<f64>) -> Self {
        Self { ln_a, ln_b }
    }

    pub fn len(&self) -> usize {
        self.ln_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_a.is_empty()
    }

    /// (W(y|0), W(y|1)) per symbol.
    pub fn probs(&self) -> Vec<(f64, f64)> {
        self.ln_a
            .iter()
            .zip(&self.ln_b)
            .map(|(a, b)| (a.exp(), b.exp()))
            .collect()
    }

    fn llr(&self, k: usize) -> f64 {
        let (a, b) = (self.ln_a[k], self.ln_b[k]);
        match (a == f64::NEG_INFINITY, b == f64::NEG_INFINITY) {
            (true, _) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            _ => a - b,
        }
    }

    /// Z = Σ √(W(y|0) W(y|1)), with 1 − Z = ½ Σ (√W(y|0) − √W(y|1))².
    pub fn bhattacharyya(&self) -> Bhat {
        let ln_v = log_sum(self.ln_a.iter().zip(&self.ln_b).map(|(a, b)| 0.5 * (a + b)));
        let ln_c = log_sum(self.ln_a.iter().zip(&self.ln_b).map(|(&a, &b)| {
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            if hi == f64::NEG_INFINITY {
                return hi;
            }
            // (√a − √b)² = e^{hi} (1 − e^{(lo−hi)/2})²
            let r = 0.5 * (lo - hi);
            hi + 2.0 * (-r.exp_m1()).ln()
        })) - std::f64::consts::LN_2;
        Bhat::from_logs(ln_v, ln_c)
    }

    /// Sorts by LLR, merges equal ratios (exact) and drops null symbols.
    pub fn canonical(self) -> Self {
        let mut idx: Vec<usize> = (0..self.len())
            .filter(|&k| self.ln_a[k] > f64::NEG_INFINITY || self.ln_b[k] > f64::NEG_INFINITY)
            .collect();
        idx.sort_by(|&x, &y| self.llr(x).total_cmp(&self.llr(y)));
        let mut ln_a: Vec<f64> = Vec::with_capacity(idx.len());
        let mut ln_b: Vec<f64> = Vec::with_capacity(idx.len());
        let mut last = f64::NAN;
        for &k in &idx {
            let l = self.llr(k);
            let same = l == last
                || (l.is_finite()
                    && last.is_finite()
                    && (l - last).abs() <= 1e-12 * l.abs().max(1.0));
            if same {
                let j = ln_a.len() - 1;
                ln_a[j] = log_add(ln_a[j], self.ln_a[k]);
                ln_b[j] = log_add(ln_b[j], self.ln_b[k]);
            } else {
                ln_a.push(self.ln_a[k]);
                ln_b.push(self.ln_b[k]);
                last = l;
            }
        }
        Self { ln_a, ln_b }
    }

    /// W⁻(y₁,y₂|u) = ½ Σ_v W(y₁|u⊕v) W(y₂|v).
    pub fn minus(&self) -> Self {
        let n = self.len();
        let half = -std::f64::consts::LN_2;
        let mut ln_a = Vec::with_capacity(n * n);
        let mut ln_b = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                ln_a.push(half + log_add(self.ln_a[i] + self.ln_a[j], self.ln_b[i] + self.ln_b[j]));
                ln_b.push(half + log_add(self.ln_b[i] + self.ln_a[j], self.ln_a[i] + self.ln_b[j]));
            }
        }
        Self::from_logs(ln_a, ln_b).canonical()
    }

    /// W⁺(y₁,y₂,u₁|u₂) = ½ W(y₁|u₁⊕u₂) W(y₂|u₂).
    pub fn plus(&self) -> Self {
        let n = self.len();
        let half = -std::f64::consts::LN_2;
        let mut ln_a = Vec::with_capacity(2 * n * n);
        let mut ln_b = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                ln_a.push(half + self.ln_a[i] + self.ln_a[j]);
                ln_b.push(half + self.ln_b[i] + self.ln_b[j]);
                ln_a.push(half + self.ln_b[i] + self.ln_a[j]);
                ln_b.push(half + self.ln_a[i] + self.ln_b[j]);
            }
        }
        Self::from_logs(ln_a, ln_b).canonical()
    }

    pub fn transform(&self, plus: bool) -> Self {
        if plus {
            self.plus()
        } else {
            self.minus()
        }
    }

    /// Merges LLR-adjacent pairs, cheapest Z increase first, until at most
    /// `cap` symbols remain. The result is a degraded channel, so its Z is an
    /// upper bound that survives further transforms.
    pub fn degraded(&self, cap: usize) -> Self {
        let cap = cap.max(2);
        let n = self.len();
        if n <= cap {
            return self.clone();
        }
        let mut list = Linked::new(self);
        let mut heap = BinaryHeap::new();
        let pair_cost = |l: &Linked, i: usize, j: usize| -> f64 {
            let s = l.a[i].max(l.b[i]).max(l.a[j]).max(l.b[j]);
            let (ai, bi, aj, bj) = (
                (l.a[i] - s).exp(),
                (l.b[i] - s).exp(),
                (l.a[j] - s).exp(),
                (l.b[j] - s).exp(),
            );
            let dz = ((ai + aj) * (bi + bj)).sqrt() - (ai * bi).sqrt() - (aj * bj).sqrt();
            s + dz.max(0.0).ln()
        };
        for i in 0..n - 1 {
            heap.push(Reverse((
                Key(pair_cost(&list, i, i + 1)),
                i,
                i + 1,
                0u32,
                0u32,
            )));
        }
        let mut count = n;
        while count > cap {
            let Reverse((_, i, j, vi, vj)) = heap.pop().expect("pairs remain while above cap");
            if !list.alive[i]
                || !list.alive[j]
                || list.next[i] != Some(j)
                || list.ver[i] != vi
                || list.ver[j] != vj
            {
                continue;
            }
            list.a[i] = log_add(list.a[i], list.a[j]);
            list.b[i] = log_add(list.b[i], list.b[j]);
            list.unlink(j);
            list.ver[i] += 1;
            count -= 1;
            if let Some(p) = list.prev[i] {
                heap.push(Reverse((
                    Key(pair_cost(&list, p, i)),
                    p,
                    i,
                    list.ver[p],
                    list.ver[i],
                )));
            }
            if let Some(q) = list.next[i] {
                heap.push(Reverse((
                    Key(pair_cost(&list, i, q)),
                    i,
                    q,
                    list.ver[i],
                    list.ver[q],
                )));
            }
        }
        list.collect()
    }

    /// Removes interior symbols, cheapest Z decrease first, splitting each
    /// onto its LLR neighbours, until at most `cap` symbols remain. The result
    /// is an upgraded channel, so its Z is a lower bound that survives further
    /// transforms.
    pub fn upgraded(&self, cap: usize) -> Self {
        let cap = cap.max(2);
        let n = self.len();
        if n <= cap {
            return self.clone();
        }
        let mut list = Linked::new(self);
        let mut heap = BinaryHeap::new();
        // Coefficients (α, β) with y_j = α y_i + β y_k, and ln of the Z loss.
        let split = |l: &Linked, i: usize, j: usize, k: usize| -> (f64, f64, f64) {
            let s = [l.a[i], l.b[i], l.a[j], l.b[j], l.a[k], l.b[k]]
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            let e = |x: f64| (x - s).exp();
            let (ai, bi, aj, bj, ak, bk) = (
                e(l.a[i]),
                e(l.b[i]),
                e(l.a[j]),
                e(l.b[j]),
                e(l.a[k]),
                e(l.b[k]),
            );
            let det = ai * bk - ak * bi;
            if det.abs() <= 1e-300 {
                return (1.0, 0.0, f64::NEG_INFINITY);
            }
            let alpha = ((aj * bk - ak * bj) / det).max(0.0);
            let beta = ((ai * bj - aj * bi) / det).max(0.0);
            let loss = (aj * bj).sqrt() - alpha * (ai * bi).sqrt() - beta * (ak * bk).sqrt();
            (alpha, beta, s + loss.max(0.0).ln())
        };
        let push = |heap: &mut BinaryHeap<_>, l: &Linked, j: usize| {
            if let (Some(i), Some(k)) = (l.prev[j], l.next[j]) {
                let (_, _, cost) = split(l, i, j, k);
                heap.push(Reverse((Key(cost), j, l.ver[i], l.ver[j], l.ver[k])));
            }
        };
        for j in 1..n - 1 {
            push(&mut heap, &list, j);
        }
        let mut count = n;
        while count > cap {
            let Reverse((_, j, vi, vj, vk)) =
                heap.pop().expect("interior symbols remain while above cap");
            let (Some(i), Some(k)) = (list.prev[j], list.next[j]) else {
                continue;
            };
            if !list.alive[j] || list.ver[i] != vi || list.ver[j] != vj || list.ver[k] != vk {
                continue;
            }
            let (alpha, beta, _) = split(&list, i, j, k);
            let (gi, gk) = (alpha.ln_1p(), beta.ln_1p());
            list.a[i] += gi;
            list.b[i] += gi;
            list.a[k] += gk;
            list.b[k] += gk;
            list.unlink(j);
            list.ver[i] += 1;
            list.ver[k] += 1;
            count -= 1;
            for c in [list.prev[i], Some(i), Some(k), list.next[k]]
                .into_iter()
                .flatten()
            {
                push(&mut heap, &list, c);
            }
        }
        list.collect()
    }
}

/// Doubly linked view over a canonical table used by the reductions.
struct Linked {
    a: Vec<f64>,
    b: Vec<f64>,
    prev: Vec<Option<usize>>,
    next: Vec<Option<usize>>,
    alive: Vec<bool>,
    ver: Vec<u32>,
}

impl Linked {
    fn new(t: &ClassicalTable) -> Self {
        let n = t.len();
        Self {
            a: t.ln_a.clone(),
            b: t.ln_b.clone(),
            prev: (0..n).map(|i| i.checked_sub(1)).collect(),
            next: (0..n)
                .map(|i| if i + 1 < n { Some(i + 1) } else { None })
                .collect(),
            alive: vec![true; n],
            ver: vec![0; n],
        }
    }

    fn unlink(&mut self, j: usize) {
        self.alive[j] = false;
        let (p, q) = (self.prev[j], self.next[j]);
        if let Some(p) = p {
            self.next[p] = q;
        }
        if let Some(q) = q {
            self.prev[q] = p;
        }
    }

    fn collect(self) -> ClassicalTable {
        let keep: Vec<usize> = (0..self.a.len()).filter(|&k| self.alive[k]).collect();
        ClassicalTable {
            ln_a: keep.iter().map(|&k| self.a[k]).collect(),
            ln_b: keep.iter().map(|&k| self.b[k]).collect(),
        }
    }
}
