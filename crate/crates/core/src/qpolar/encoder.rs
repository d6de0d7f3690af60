//! The transform x = u·G_N with G_N = B_N F^{⊗n}, F = [[1,0],[1,1]].

use crate::error::{Error, Result};
use crate::qmath::{PureState, C64};

/// Level n for a power-of-two length.
pub fn level_of(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::Invalid(format!(
            "length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Reverses the low `n` bits of `j`.
pub fn bit_reverse(j: usize, n: usize) -> usize {
    if n == 0 {
        0
    } else {
        j.reverse_bits() >> (usize::BITS as usize - n)
    }
}

/// In-place bit-reversal permutation (the B_N factor).
pub fn bit_reverse_permute<T>(v: &mut [T]) {
    let n = v.len().trailing_zeros() as usize;
    for j in 0..v.len() {
        let r = bit_reverse(j, n);
        if r > j {
            v.swap(j, r);
        }
    }
}

/// Butterfly for F^{⊗n} acting on a row vector: for each block of size 2h,
/// the first half absorbs the second.
pub fn butterfly(x: &mut [u8]) {
    let len = x.len();
    let mut h = len / 2;
    while h >= 1 {
        for block in x.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        h /= 2;
    }
}

/// x = u·G_N over GF(2). Entries of `u` must be 0 or 1.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    level_of(u.len())?;
    if u.iter().any(|&b| b > 1) {
        return Err(Error::Invalid("bit vector entries must be 0 or 1".into()));
    }
    let mut x = u.to_vec();
    encode_in_place(&mut x);
    Ok(x)
}

/// In-place encode; the length must be a power of two.
pub fn encode_in_place(x: &mut [u8]) {
    debug_assert!(x.len().is_power_of_two());
    bit_reverse_permute(x);
    butterfly(x);
}

/// u·G_N^{-1}. G_N is its own inverse over GF(2).
pub fn decode_codeword(x: &[u8]) -> Result<Vec<u8>> {
    encode(x)
}

/// Encode on packed words: bit j of the word (counting from the most
/// significant of the low N bits) is u_{j+1}. Valid for N ≤ 64.
pub fn encode_word(u: u64, n: usize) -> u64 {
    let len = 1usize << n;
    let mut bits: Vec<u8> = (0..len).map(|j| ((u >> (len - 1 - j)) & 1) as u8).collect();
    encode_in_place(&mut bits);
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

/// Largest register the coherent encoder accepts.
pub const MAX_COHERENT_BLOCKLENGTH: usize = 12;

/// The CNOT network of the encoder on an N-qubit state vector: the amplitude
/// of |u⟩ moves to |u·G_N⟩. Qubit 1 is the most significant.
pub fn coherent_encode(state: &PureState) -> Result<PureState> {
    let dim = state.dim();
    let len = level_of(dim)?;
    if len > MAX_COHERENT_BLOCKLENGTH || !len.is_power_of_two() {
        return Err(Error::Resource(format!(
            "coherent encoding needs N ≤ {MAX_COHERENT_BLOCKLENGTH} a power of two, got {len} qubits"
        )));
    }
    let n = level_of(len)?;
    let old = state.amplitudes();
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (u, &a) in old.iter().enumerate() {
        amps[encode_word(u as u64, n) as usize] = a;
    }
    PureState::new(amps)
}
