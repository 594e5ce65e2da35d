use num_complex::Complex64;

use super::{split_cut, ProbeError};
use crate::circuitsim::StateVector;

pub const MAX_STABILIZER_QUBITS: u32 = 8;

/// Purity tr(ρ_A²) of a pure state on the qubits in `cut`.
pub fn subsystem_purity(psi: &StateVector, cut: &[u32]) -> Result<f64, ProbeError> {
    let n = psi.n_total();
    let (a, b) = split_cut(n, cut)?;
    // keep the smaller factor as the reduced density matrix
    let (keep, trace) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    Ok(bipartite_purity(psi.amplitudes(), &keep, &trace))
}

/// tr(ρ_K²) for the amplitudes reshaped as M[k][r] over the `keep` and
/// `trace` registers.
pub(crate) fn bipartite_purity(amps: &[Complex64], keep: &[u32], trace: &[u32]) -> f64 {
    let dk = 1usize << keep.len();
    let dr = 1usize << trace.len();
    let mut m = vec![Complex64::new(0.0, 0.0); dk * dr];
    for (i, &amp) in amps.iter().enumerate() {
        let k: usize = keep.iter().enumerate().map(|(bit, &q)| ((i >> q) & 1) << bit).sum();
        let r: usize = trace.iter().enumerate().map(|(bit, &q)| ((i >> q) & 1) << bit).sum();
        m[k * dr + r] = amp;
    }
    let mut sum = 0.0;
    for k1 in 0..dk {
        let row1 = &m[k1 * dr..(k1 + 1) * dr];
        for k2 in 0..dk {
            let row2 = &m[k2 * dr..(k2 + 1) * dr];
            let rho: Complex64 = row1.iter().zip(row2).map(|(x, y)| x * y.conj()).sum();
            sum += rho.norm_sqr();
        }
    }
    sum
}

/// 2-Rényi entanglement entropy −log₂ tr(ρ_A²) in bits.
pub fn renyi2_entanglement(psi: &StateVector, cut: &[u32]) -> Result<f64, ProbeError> {
    Ok(-subsystem_purity(psi, cut)?.log2())
}

/// In-place Walsh–Hadamard transform v[z] ← Σ_b (−1)^{z·b} v[b].
fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// All 4^n Pauli expectations ⟨ψ|P|ψ⟩, indexed by x_mask·d + z_mask.
///
/// For a fixed X part the expectations over all Z parts are one
/// Walsh–Hadamard transform of b ↦ conj(ψ_{b⊕x})ψ_b, so the whole table
/// costs O(d² log d).
fn pauli_spectrum(psi: &StateVector) -> Vec<f64> {
    use rayon::prelude::*;
    let amps = psi.amplitudes();
    let d = amps.len();
    (0..d)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut f: Vec<Complex64> = (0..d).map(|b| amps[b ^ x].conj() * amps[b]).collect();
            walsh_hadamard(&mut f);
            f.into_iter().enumerate().map(move |(z, w)| {
                let k = ((x & z).count_ones() % 4) as usize;
                let phase = [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(-1.0, 0.0),
                    Complex64::new(0.0, -1.0),
                ][k];
                (phase * w).re
            })
        })
        .collect()
}

fn check_enumerable(psi: &StateVector) -> Result<(), ProbeError> {
    let n = psi.n_total();
    if n > MAX_STABILIZER_QUBITS {
        return Err(ProbeError::EnumerationOverflow { n, limit: MAX_STABILIZER_QUBITS });
    }
    Ok(())
}

/// (1/d) Σ_P ⟨ψ|P|ψ⟩⁴.
pub fn stabilizer_purity(psi: &StateVector) -> Result<f64, ProbeError> {
    check_enumerable(psi)?;
    let fourth: Vec<f64> = pauli_spectrum(psi).into_iter().map(|e| e.powi(4)).collect();
    Ok(crate::stats::pairwise_sum(&fourth) / psi.dim() as f64)
}

/// Stabilizer Rényi entropy M_α = log₂((1/d) Σ_P ⟨ψ|P|ψ⟩^{2α}) / (1 − α) in bits.
pub fn stabilizer_entropy(psi: &StateVector, alpha: f64) -> Result<f64, ProbeError> {
    check_enumerable(psi)?;
    if alpha.is_nan() || alpha < 2.0 {
        return Err(ProbeError::InvalidArgument(format!("order {alpha} below 2")));
    }
    let powers: Vec<f64> = pauli_spectrum(psi).into_iter().map(|e| e.abs().powf(2.0 * alpha)).collect();
    let s = crate::stats::pairwise_sum(&powers) / psi.dim() as f64;
    Ok((s.log2() / (1.0 - alpha)).max(0.0))
}
