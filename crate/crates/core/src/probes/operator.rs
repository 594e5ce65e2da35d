use nalgebra::DMatrix;
use num_complex::Complex64;

use super::entropy::bipartite_purity;
use super::{split_cut, PauliLabel, ProbeError};
use crate::ensembles::UnitaryMatrix;
use crate::randcore::SeededRng;
use crate::stats::Estimate;

pub const MAX_LOE_QUBITS: u32 = 7;

fn n_qubits(u: &UnitaryMatrix) -> Result<u32, ProbeError> {
    let d = u.dim();
    if !d.is_power_of_two() {
        return Err(ProbeError::DimensionMismatch { expected: d.next_power_of_two(), found: d });
    }
    Ok(d.trailing_zeros())
}

fn check_pauli(p: &PauliLabel, n: u32) -> Result<(), ProbeError> {
    if p.is_identity() {
        return Err(ProbeError::InvalidPauli("identity is not allowed here".into()));
    }
    if p.support_len() > n {
        return Err(ProbeError::InvalidPauli(format!("{p} acts outside {n} qubits")));
    }
    Ok(())
}

/// Heisenberg-evolved Pauli U·P·U†.
pub fn heisenberg(u: &UnitaryMatrix, p: &PauliLabel) -> DMatrix<Complex64> {
    let m = u.matrix();
    let d = m.nrows();
    // (P·U†)_{a,b} = c(a⊕x)·(U†)_{a⊕x, b}
    let pu = DMatrix::from_fn(d, d, |a, b| {
        let j = p.flip(a);
        p.coefficient(j) * m[(b, j)].conj()
    });
    m * pu
}

/// A = W·P₂ with A_{ij} = W_{i, j⊕x}·c(j).
fn right_multiply(w: &DMatrix<Complex64>, p: &PauliLabel) -> DMatrix<Complex64> {
    let d = w.nrows();
    DMatrix::from_fn(d, d, |i, j| w[(i, p.flip(j))] * p.coefficient(j))
}

/// Diagonal of (P₁(t)P₂)², whose real parts average to the OTOC.
fn otoc_diagonal(u_t: &UnitaryMatrix, p1: &PauliLabel, p2: &PauliLabel) -> Result<Vec<f64>, ProbeError> {
    let n = n_qubits(u_t)?;
    check_pauli(p1, n)?;
    check_pauli(p2, n)?;
    let a = right_multiply(&heisenberg(u_t, p1), p2);
    let d = a.nrows();
    Ok((0..d).map(|x| (0..d).map(|j| a[(x, j)] * a[(j, x)]).sum::<Complex64>().re).collect())
}

/// (1/d)·Re tr(P₁(t) P₂ P₁(t) P₂) with P₁(t) = U_t P₁ U_t†.
pub fn otoc4_exact(u_t: &UnitaryMatrix, p1: &PauliLabel, p2: &PauliLabel) -> Result<f64, ProbeError> {
    let diag = otoc_diagonal(u_t, p1, p2)?;
    Ok(crate::stats::mean(&diag))
}

/// Shot-based OTOC estimate. Each shot prepares a uniformly random basis
/// state |x⟩, applies P₂, U†, P₁, U, P₂, U†, P₁, U and records the ±1
/// outcome of a Hadamard test, which is +1 with probability
/// (1 + Re⟨x|(P₁(t)P₂)²|x⟩)/2. The shot mean is unbiased for the OTOC.
pub fn otoc4_sampled(
    u_t: &UnitaryMatrix,
    p1: &PauliLabel,
    p2: &PauliLabel,
    shots: usize,
    rng: &mut SeededRng,
) -> Result<Estimate, ProbeError> {
    if shots == 0 {
        return Err(ProbeError::InvalidArgument("at least one shot is required".into()));
    }
    let diag = otoc_diagonal(u_t, p1, p2)?;
    let d = diag.len() as u64;
    let outcomes: Vec<f64> = (0..shots)
        .map(|_| {
            let x = rng.below(d) as usize;
            let p_plus = 0.5 * (1.0 + diag[x]);
            if rng.uniform() < p_plus {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let mut e = Estimate::from_samples(&outcomes);
    if shots == 1 {
        e.std_error = 1.0;
    }
    Ok(e)
}

/// Purity of the normalized Choi vector of U_t O U_t† across (A ∪ A′) | (B ∪ B′).
pub fn operator_purity(u_t: &UnitaryMatrix, o: &PauliLabel, cut: &[u32]) -> Result<f64, ProbeError> {
    let n = n_qubits(u_t)?;
    if n > MAX_LOE_QUBITS {
        return Err(ProbeError::EnumerationOverflow { n, limit: MAX_LOE_QUBITS });
    }
    check_pauli(o, n)?;
    let (a, b) = split_cut(n, cut)?;
    let w = heisenberg(u_t, o);
    let d = w.nrows();
    // Choi amplitude of |i⟩|j⟩ is W_ij/√d, stored at index i + d·j;
    // copy qubit q of the column index sits at position n + q.
    let scale = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        for i in 0..d {
            amps[i + d * j] = w[(i, j)] * scale;
        }
    }
    let doubled = |reg: &[u32]| -> Vec<u32> { reg.iter().copied().chain(reg.iter().map(|q| q + n)).collect() };
    let (keep, trace) = if a.len() <= b.len() { (doubled(&a), doubled(&b)) } else { (doubled(&b), doubled(&a)) };
    Ok(bipartite_purity(&amps, &keep, &trace))
}

/// Local operator entanglement −log₂ of [`operator_purity`], in bits.
pub fn local_operator_entanglement(u_t: &UnitaryMatrix, o: &PauliLabel, cut: &[u32]) -> Result<f64, ProbeError> {
    Ok((-operator_purity(u_t, o, cut)?.log2()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::sample_haar_unitary;

    #[test]
    fn otoc_at_time_zero() {
        let id = UnitaryMatrix::identity(16);
        let (x0, z1, z0) = (PauliLabel::x(0), PauliLabel::z(1), PauliLabel::z(0));
        assert!((otoc4_exact(&id, &x0, &z1).unwrap() - 1.0).abs() < 1e-15);
        assert!((otoc4_exact(&id, &x0, &z0).unwrap() + 1.0).abs() < 1e-15);
        let e = otoc4_sampled(&id, &x0, &z1, 500, &mut SeededRng::new(1, 0)).unwrap();
        assert_eq!(e.mean, 1.0);
        assert!(otoc4_exact(&id, &PauliLabel::IDENTITY, &z1).is_err());
    }

    #[test]
    fn otoc_invariant_under_global_pauli_conjugation() {
        let mut rng = SeededRng::new(51, 0);
        let u = sample_haar_unitary(16, &mut rng);
        let (p1, p2, g) = (PauliLabel::x(0), PauliLabel::z(2), "YXZI".parse::<PauliLabel>().unwrap());
        let a = otoc4_exact(&u, &p1, &p2).unwrap();
        // gPg = ±P, and each Pauli enters the trace twice
        let gm =
            DMatrix::from_fn(16, 16, |i, j| if g.flip(j) == i { g.coefficient(j) } else { Complex64::new(0.0, 0.0) });
        let ug = UnitaryMatrix::new(&gm * u.matrix() * &gm).unwrap();
        let b = otoc4_exact(&ug, &p1, &p2).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn sampled_agrees_with_exact() {
        let mut rng = SeededRng::new(52, 0);
        let u = sample_haar_unitary(32, &mut rng);
        let (p1, p2) = (PauliLabel::x(0), PauliLabel::z(3));
        let exact = otoc4_exact(&u, &p1, &p2).unwrap();
        let e = otoc4_sampled(&u, &p1, &p2, 10_000, &mut rng).unwrap();
        assert!(e.within(exact, 4.0), "{e:?} vs {exact}");
        let big = otoc4_sampled(&u, &p1, &p2, 40_000, &mut rng).unwrap();
        let ratio = e.std_error / big.std_error;
        assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn loe_of_local_operator_is_zero() {
        let id = UnitaryMatrix::identity(16);
        for p in [PauliLabel::x(0), PauliLabel::y(3), "ZZII".parse().unwrap()] {
            assert!(local_operator_entanglement(&id, &p, &[0, 1]).unwrap().abs() < 1e-12);
        }
        assert!(local_operator_entanglement(&id, &PauliLabel::IDENTITY, &[0]).is_err());
    }

    #[test]
    fn loe_sign_invariant_and_bounded() {
        let mut rng = SeededRng::new(53, 0);
        let u = sample_haar_unitary(32, &mut rng);
        let p = PauliLabel::x(1);
        let v = local_operator_entanglement(&u, &p, &[0, 1]).unwrap();
        // −O has the same Choi state up to a global phase: fold the sign into U
        let minus = UnitaryMatrix::new(u.matrix() * Complex64::new(0.0, 1.0)).unwrap();
        let w = local_operator_entanglement(&minus, &p, &[0, 1]).unwrap();
        assert!((v - w).abs() < 1e-12);
        assert!(v > 0.0 && v <= 4.0 + 1e-12);
    }

    #[test]
    fn two_qubit_swap_creates_operator_entanglement() {
        // SWAP moves X₀ to X₁: a product operator, no entanglement
        let mut swap = DMatrix::<Complex64>::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(i, j)] = Complex64::new(1.0, 0.0);
        }
        let u = UnitaryMatrix::new(swap).unwrap();
        assert!(local_operator_entanglement(&u, &PauliLabel::x(0), &[0]).unwrap().abs() < 1e-12);
        // CNOT spreads X on the control to X⊗X, still a product
        let mut cnot = DMatrix::<Complex64>::zeros(4, 4);
        for (i, j) in [(0, 0), (3, 1), (2, 2), (1, 3)] {
            cnot[(i, j)] = Complex64::new(1.0, 0.0);
        }
        let u = UnitaryMatrix::new(cnot).unwrap();
        assert!(local_operator_entanglement(&u, &PauliLabel::x(0), &[0]).unwrap().abs() < 1e-12);
    }
}
