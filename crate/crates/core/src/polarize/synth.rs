use rayon::prelude::*;

use crate::channels::{symmetric_holevo, CqChannel};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qmath::{
    commutator_norm, entropy_of_psd, root_fidelity_psd, ComplexMatrix, DensityOperator,
};
use crate::qpolar::encoder::encode_word;

fn check_dim(dim: usize, tol: &Tolerances) -> Result<()> {
    if dim > tol.max_dim {
        return Err(Error::Resource(format!(
            "operator dimension {dim} exceeds the cap {}",
            tol.max_dim
        )));
    }
    Ok(())
}

/// W⁻: ρ⁻_u = ½ Σ_v ρ_{u⊕v} ⊗ ρ_v.
pub fn combine_minus(w: &CqChannel) -> Result<CqChannel> {
    let tol = Tolerances::default();
    check_dim(w.dim() * w.dim(), &tol)?;
    let (r0, r1) = (w.rho(0).matrix(), w.rho(1).matrix());
    let out = |u: u8| -> Result<DensityOperator> {
        let (a, b) = if u == 0 { (r0, r1) } else { (r1, r0) };
        let m = a.kron(r0, &tol)?.add(&b.kron(r1, &tol)?)?.scale(0.5);
        Ok(DensityOperator::from_constructed(m))
    };
    CqChannel::new(out(0)?, out(1)?)
}

/// W⁺: ρ⁺_v = ½ Σ_u |u⟩⟨u| ⊗ ρ_{u⊕v} ⊗ ρ_v, classical register first.
pub fn combine_plus(w: &CqChannel) -> Result<CqChannel> {
    let tol = Tolerances::default();
    let d = w.dim();
    check_dim(2 * d * d, &tol)?;
    let (r0, r1) = (w.rho(0).matrix(), w.rho(1).matrix());
    let out = |v: u8| -> Result<DensityOperator> {
        let rv = if v == 0 { r0 } else { r1 };
        let (same, flipped) = if v == 0 { (r0, r1) } else { (r1, r0) };
        let blocks = [same.kron(rv, &tol)?, flipped.kron(rv, &tol)?];
        let mut m = ComplexMatrix::zeros(2 * d * d, 2 * d * d);
        for (u, blk) in blocks.iter().enumerate() {
            for r in 0..d * d {
                for c in 0..d * d {
                    m.set(u * d * d + r, u * d * d + c, blk.get(r, c) * 0.5);
                }
            }
        }
        Ok(DensityOperator::from_constructed(m))
    };
    CqChannel::new(out(0)?, out(1)?)
}

/// Product outputs ρ_{x₁} ⊗ ⋯ ⊗ ρ_{x_N} for codewords x, with a fast path
/// when both base outputs are diagonal.
#[derive(Debug, Clone)]
pub(crate) struct ProductOutputs {
    dense: [ComplexMatrix; 2],
    diag: Option<[Vec<f64>; 2]>,
    d: usize,
}

impl ProductOutputs {
    pub(crate) fn new(w: &CqChannel) -> Self {
        let dense = [w.rho(0).matrix().clone(), w.rho(1).matrix().clone()];
        let diag = if dense.iter().all(ComplexMatrix::is_diagonal_exact) {
            Some([dense[0].real_diagonal(), dense[1].real_diagonal()])
        } else {
            None
        };
        Self {
            d: w.dim(),
            dense,
            diag,
        }
    }

    /// Adds `weight · ρ_x` to `acc` (dense, d^N square). Bit j of `x` counted
    /// from the most significant of the low N bits is x_{j+1}.
    pub(crate) fn accumulate(
        &self,
        acc: &mut ComplexMatrix,
        x: u64,
        len: usize,
        weight: f64,
    ) -> Result<()> {
        let bit = |j: usize| ((x >> (len - 1 - j)) & 1) as usize;
        if let Some(diag) = &self.diag {
            let mut v = vec![weight];
            for j in 0..len {
                let f = &diag[bit(j)];
                v = v
                    .iter()
                    .flat_map(|&a| f.iter().map(move |&b| a * b))
                    .collect();
            }
            for (k, a) in v.into_iter().enumerate() {
                if a != 0.0 {
                    acc.set(k, k, acc.get(k, k) + a);
                }
            }
            return Ok(());
        }
        let tol = Tolerances::default();
        let mut m = self.dense[bit(0)].clone();
        for j in 1..len {
            m = m.kron(&self.dense[bit(j)], &tol)?;
        }
        acc.axpy(weight, &m)
    }

    pub(crate) fn block_dim(&self, len: usize) -> usize {
        self.d.pow(len as u32)
    }
}

/// Exact synthesized channel W_N^{(i)}, stored blockwise: the classical
/// register U₁^{i−1} makes both outputs block diagonal,
/// ρ_{(i),u} = Σ_p 2^{−(i−1)} |p⟩⟨p| ⊗ ρ̄_{p,u}.
#[derive(Debug, Clone)]
pub struct SynthesizedChannelExact {
    base: CqChannel,
    n: usize,
    index: usize,
    blocks: Vec<[DensityOperator; 2]>,
}

impl SynthesizedChannelExact {
    pub fn base(&self) -> &CqChannel {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based index i.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn blocklength(&self) -> usize {
        1 << self.n
    }

    /// 2^{i−1} · d^N.
    pub fn dim(&self) -> usize {
        self.blocks.len() * self.block_dim()
    }

    pub fn block_dim(&self) -> usize {
        self.blocks[0][0].dim()
    }

    pub fn prefix_count(&self) -> usize {
        self.blocks.len()
    }

    /// ρ̄_{p,u} over B^N for the prefix `p` (u₁ most significant).
    pub fn averaged_state(&self, prefix: usize, u: u8) -> &DensityOperator {
        &self.blocks[prefix][u as usize]
    }

    fn weight(&self) -> f64 {
        1.0 / self.blocks.len() as f64
    }

    /// √F, additive over the blocks.
    pub fn root_fidelity(&self) -> Result<f64> {
        let tol = Tolerances::default();
        let per: Result<Vec<f64>> = self
            .blocks
            .par_iter()
            .map(|[a, b]| root_fidelity_psd(a.matrix(), b.matrix(), &tol))
            .collect();
        Ok((per?.iter().sum::<f64>() * self.weight()).clamp(0.0, 1.0))
    }

    pub fn fidelity(&self) -> Result<f64> {
        Ok(self.root_fidelity()?.powi(2))
    }

    /// Symmetric Holevo information, additive over the blocks.
    pub fn holevo(&self) -> Result<f64> {
        let tol = Tolerances::default();
        let per: Result<Vec<f64>> = self
            .blocks
            .par_iter()
            .map(|[a, b]| {
                let avg = a.matrix().add(b.matrix())?.scale(0.5);
                Ok(entropy_of_psd(&avg, &tol)?
                    - 0.5 * (entropy_of_psd(a.matrix(), &tol)? + entropy_of_psd(b.matrix(), &tol)?))
            })
            .collect();
        Ok((per?.iter().sum::<f64>() * self.weight()).clamp(0.0, 1.0))
    }

    /// ‖[ρ_{(i),0}, ρ_{(i),1}]‖₁.
    pub fn commutator_norm(&self) -> Result<f64> {
        let w = self.weight();
        let mut total = 0.0;
        for [a, b] in &self.blocks {
            total += w * w * commutator_norm(a.matrix(), b.matrix())?;
        }
        Ok(total)
    }

    /// Full operators on U₁^{i−1} ⊗ B^N.
    pub fn to_dense(&self) -> Result<CqChannel> {
        let tol = Tolerances::default();
        check_dim(self.dim(), &tol)?;
        let bd = self.block_dim();
        let w = self.weight();
        let build = |u: usize| {
            let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
            for (p, blk) in self.blocks.iter().enumerate() {
                let src = blk[u].matrix();
                for r in 0..bd {
                    for c in 0..bd {
                        m.set(p * bd + r, p * bd + c, src.get(r, c) * w);
                    }
                }
            }
            DensityOperator::from_constructed(m)
        };
        CqChannel::new(build(0), build(1))
    }

    /// Symmetric Holevo information of the dense form; for cross-checks.
    pub fn holevo_dense(&self) -> Result<f64> {
        symmetric_holevo(&self.to_dense()?)
    }
}

/// W_N^{(i)} by direct summation over the completions u_{i+1}^N of
/// ρ_{u·G_N}, for every prefix u₁^{i−1}.
pub fn synthesize(w: &CqChannel, n: usize, index: usize) -> Result<SynthesizedChannelExact> {
    let tol = Tolerances::default();
    let len = 1usize << n;
    if index == 0 || index > len {
        return Err(Error::IndexOutOfRange {
            index,
            blocklength: len,
        });
    }
    if n > 6 {
        return Err(Error::Resource(format!(
            "exact synthesis limited to n ≤ 6, got {n}"
        )));
    }
    let outputs = ProductOutputs::new(w);
    let bd = outputs.block_dim(len);
    check_dim(bd, &tol)?;
    let tail = len - index;
    let prefixes = 1usize << (index - 1);
    let weight = 1.0 / (1u64 << tail) as f64;
    let blocks: Result<Vec<[DensityOperator; 2]>> = (0..prefixes)
        .into_par_iter()
        .map(|p| {
            let mut pair = Vec::with_capacity(2);
            for u in 0..2u64 {
                let mut acc = ComplexMatrix::zeros(bd, bd);
                let head = ((p as u64) << 1 | u) << tail;
                for c in 0..(1u64 << tail) {
                    outputs.accumulate(&mut acc, encode_word(head | c, n), len, weight)?;
                }
                pair.push(DensityOperator::from_constructed(acc));
            }
            let b = pair.pop().expect("two outputs");
            let a = pair.pop().expect("two outputs");
            Ok([a, b])
        })
        .collect();
    Ok(SynthesizedChannelExact {
        base: w.clone(),
        n,
        index,
        blocks: blocks?,
    })
}

/// Where each basis index of the recursively combined channel lands in the
/// direct layout (U₁^{i−1} then B^N).
///
/// The recursion follows W_{2N}^{(2i−1)} = (W_N^{(i)})⁻ and
/// W_{2N}^{(2i)} = (W_N^{(i)})⁺, the first transform being the most
/// significant path bit. A combined layout is [u_c?, U_a, B_a, U_b, B_b], where
/// U_a carries u_odd ⊕ u_even, U_b carries u_even and u_c (plus only) is the
/// new last prefix bit u_{2i−1}.
pub fn recursive_register_map(base_dim: usize, n: usize, index: usize) -> Vec<usize> {
    if n == 0 {
        return (0..base_dim).collect();
    }
    let child_index = index.div_ceil(2);
    let plus = index.is_multiple_of(2);
    let child = recursive_register_map(base_dim, n - 1, child_index);
    let dy = base_dim.pow(1 << (n - 1));
    let bits = child_index - 1;
    let dc = child.len();
    let reg = if plus { 2 } else { 1 };
    let mut out = vec![0usize; reg * dc * dc];
    for uc in 0..reg {
        for ra in 0..dc {
            for rb in 0..dc {
                let (ca, cb) = (child[ra], child[rb]);
                let (ua, ya) = (ca / dy, ca % dy);
                let (ub, yb) = (cb / dy, cb % dy);
                let mut u = 0usize;
                for k in 0..bits {
                    let a = (ua >> (bits - 1 - k)) & 1;
                    let b = (ub >> (bits - 1 - k)) & 1;
                    u = (u << 2) | ((a ^ b) << 1) | b;
                }
                if plus {
                    u = (u << 1) | uc;
                }
                out[(uc * dc + ra) * dc + rb] = u * dy * dy + ya * dy + yb;
            }
        }
    }
    out
}

/// W_N^{(i)} by repeated [`combine_minus`]/[`combine_plus`], permuted into the
/// direct layout with [`recursive_register_map`].
pub fn synthesize_recursive(w: &CqChannel, n: usize, index: usize) -> Result<CqChannel> {
    let len = 1usize << n;
    if index == 0 || index > len {
        return Err(Error::IndexOutOfRange {
            index,
            blocklength: len,
        });
    }
    let path = index - 1;
    let mut ch = w.clone();
    for level in 0..n {
        let plus = (path >> (n - 1 - level)) & 1 == 1;
        ch = if plus {
            combine_plus(&ch)?
        } else {
            combine_minus(&ch)?
        };
    }
    let map = recursive_register_map(w.dim(), n, index);
    let permute = |rho: &DensityOperator| {
        let m = rho.matrix();
        let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(map[r], map[c], m.get(r, c));
            }
        }
        DensityOperator::from_constructed(out)
    };
    CqChannel::new(permute(ch.rho(0)), permute(ch.rho(1)))
}
