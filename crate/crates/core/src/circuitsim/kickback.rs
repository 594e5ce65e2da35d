use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::state::{inverse_qft, qft, register_value, with_register};
use super::{PhaseTable, SimError, StateVector};
use crate::ensembles::UnitaryMatrix;

pub const MAX_EXPLICIT_SYSTEM: u32 = 3;
pub const MAX_EXPLICIT_ANCILLAS: u32 = 8;

/// Row-parallel dense product; `adjoint` selects U† instead of U.
fn mat_vec(u: &UnitaryMatrix, v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
    let m = u.matrix();
    (0..v.len())
        .into_par_iter()
        .map(|i| {
            if adjoint {
                (0..v.len()).map(|j| m[(j, i)].conj() * v[j]).sum()
            } else {
                (0..v.len()).map(|j| m[(i, j)] * v[j]).sum()
            }
        })
        .collect()
}

fn check_table(table: &PhaseTable, n_sys: u32) -> Result<(), SimError> {
    if table.class_bits() > n_sys {
        return Err(SimError::InvalidTable(format!("{} classes exceed a {n_sys}-qubit system", table.dtilde())));
    }
    Ok(())
}

/// V·diag(e^{−2πi·entries[class(x)]/2^m})·V† on a system register of
/// 2^n amplitudes.
fn evolve_system(sys: &[Complex64], table: &PhaseTable, v: &UnitaryMatrix, n_sys: u32) -> Vec<Complex64> {
    let mut coeffs = mat_vec(v, sys, true);
    let modulus = table.modulus() as f64;
    coeffs.par_iter_mut().enumerate().for_each(|(x, c)| {
        let e = table.entries[table.class_of(x, n_sys)];
        *c *= Complex64::from_polar(1.0, -TAU * (e as f64 / modulus));
    });
    mat_vec(v, &coeffs, false)
}

/// Controlled pseudo-GUE evolution with the ancilla register traced out
/// analytically: each eigenbasis state picks up e^{−2πi·entries[c]/2^m}.
///
/// `control`, when given, is a qubit of `psi`; the remaining qubits form
/// the system register in ascending order. The evolution acts only on the
/// control = 1 branch.
pub fn apply_pseudo_evolution(
    psi: &StateVector,
    table: &PhaseTable,
    v: &UnitaryMatrix,
    control: Option<u32>,
) -> Result<StateVector, SimError> {
    let n_total = psi.n_total();
    if let Some(c) = control {
        if c >= n_total {
            return Err(SimError::InvalidRegister(format!("control qubit {c} of {n_total}")));
        }
    }
    let system: Vec<u32> = (0..n_total).filter(|&q| Some(q) != control).collect();
    let n_sys = system.len() as u32;
    if v.dim() != 1 << n_sys {
        return Err(SimError::DimensionMismatch { expected: 1 << n_sys, found: v.dim() });
    }
    check_table(table, n_sys)?;

    let base = control.map_or(0, |c| 1usize << c);
    let gather: Vec<Complex64> =
        (0..1usize << n_sys).map(|x| psi.amplitudes()[with_register(base, &system, x)]).collect();
    let evolved = evolve_system(&gather, table, v, n_sys);
    let mut out = psi.clone();
    for (x, a) in evolved.into_iter().enumerate() {
        out.amplitudes_mut()[with_register(base, &system, x)] = a;
    }
    Ok(out)
}

/// Adds f(x) mod 2^m to the ancilla register for every system value x.
fn add_to_ancillas<F: Fn(usize) -> u64>(psi: &mut StateVector, system: &[u32], ancillas: &[u32], f: &F) {
    let modulus = 1usize << ancillas.len();
    let src = psi.amplitudes().to_vec();
    for (i, &a) in src.iter().enumerate() {
        let x = register_value(i, system);
        let y = register_value(i, ancillas);
        let shifted = (y + (f(x) % modulus as u64) as usize) % modulus;
        psi.amplitudes_mut()[with_register(i, ancillas, shifted)] = a;
    }
}

/// Phase kickback on `psi ⊗ |1⟩^{⊗m}`: QFT on the ancillas, |x⟩|y⟩ ↦
/// |x⟩|y + f(x)⟩, inverse QFT. Each |x⟩ picks up e^{2πi f(x)/2^m} and the
/// ancillas return to |1⟩^{⊗m}. Returns the full n + m qubit state.
pub fn phase_kickback<F: Fn(usize) -> u64>(psi: &StateVector, m: u32, f: F) -> Result<StateVector, SimError> {
    let n = psi.n_total();
    if n > MAX_EXPLICIT_SYSTEM || m > MAX_EXPLICIT_ANCILLAS || m == 0 {
        return Err(SimError::SizeOverflow(format!("n = {n}, m = {m}")));
    }
    let ones = StateVector::basis(m, (1 << m) - 1);
    let mut full = psi.tensor(&ones);
    let system: Vec<u32> = (0..n).collect();
    let ancillas: Vec<u32> = (n..n + m).collect();
    qft(&mut full, &ancillas)?;
    add_to_ancillas(&mut full, &system, &ancillas, &f);
    inverse_qft(&mut full, &ancillas)?;
    Ok(full)
}

/// Full controlled circuit on system (qubits 0..n), ancillas (n..n+m) and,
/// when `control` is given, a control qubit at n+m prepared in that value.
///
/// Control = 1 branch: V† on the system, QFT on |1⟩^{⊗m}, add
/// f(x) = −entries[class(x)] mod 2^m, inverse QFT, V. Control = 0 branch:
/// (HX)^{⊗m} maps the ancillas to the uniform superposition, which the adder
/// leaves invariant, and (XH)^{⊗m} restores them. Without a control the
/// circuit is the control = 1 branch.
pub fn simulate_explicit_kickback(
    psi_sys: &StateVector,
    table: &PhaseTable,
    v: &UnitaryMatrix,
    control: Option<bool>,
) -> Result<StateVector, SimError> {
    let n = psi_sys.n_total();
    let m = table.m;
    if n > MAX_EXPLICIT_SYSTEM || m > MAX_EXPLICIT_ANCILLAS {
        return Err(SimError::SizeOverflow(format!("n = {n}, m = {m}")));
    }
    if v.dim() != 1 << n {
        return Err(SimError::DimensionMismatch { expected: 1 << n, found: v.dim() });
    }
    check_table(table, n)?;
    let modulus = table.modulus();
    let f = |x: usize| (modulus - table.entries[table.class_of(x, n)]) % modulus;
    let system: Vec<u32> = (0..n).collect();
    let ancillas: Vec<u32> = (n..n + m).collect();

    let active = control.unwrap_or(true);
    let full = if active {
        let rotated = StateVector::from_amplitudes(mat_vec(v, psi_sys.amplitudes(), true))?;
        let mut full = phase_kickback(&rotated, m, f)?;
        let dim_sys = 1usize << n;
        for y in 0..1usize << m {
            let block: Vec<Complex64> =
                (0..dim_sys).map(|x| full.amplitudes()[with_register(x, &ancillas, y)]).collect();
            if block.iter().all(|a| a.norm_sqr() == 0.0) {
                continue;
            }
            for (x, a) in mat_vec(v, &block, false).into_iter().enumerate() {
                full.amplitudes_mut()[with_register(x, &ancillas, y)] = a;
            }
        }
        full
    } else {
        let mut full = psi_sys.tensor(&StateVector::basis(m, (1 << m) - 1));
        for &q in &ancillas {
            full.apply_x(q);
            full.apply_h(q);
        }
        add_to_ancillas(&mut full, &system, &ancillas, &f);
        for &q in &ancillas {
            full.apply_h(q);
            full.apply_x(q);
        }
        full
    };
    Ok(match control {
        Some(c) => full.tensor(&StateVector::basis(1, usize::from(c))),
        None => full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_haar_unitary, Eigensystem, Provenance, Spectrum};
    use crate::randcore::SeededRng;

    fn random_state(n: u32, rng: &mut SeededRng) -> StateVector {
        let amps = (0..1usize << n).map(|_| Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)).collect();
        StateVector::normalized(amps).unwrap()
    }

    /// Amplitudes of the system register at ancilla value `y` (and control `c`).
    fn system_slice(full: &StateVector, n: u32, m: u32, y: usize, c: Option<bool>) -> Vec<Complex64> {
        let ancillas: Vec<u32> = (n..n + m).collect();
        let cbit = c.map_or(0, |b| usize::from(b) << (n + m));
        (0..1usize << n).map(|x| full.amplitudes()[with_register(x | cbit, &ancillas, y)]).collect()
    }

    #[test]
    fn textbook_kickback_phase() {
        // n = 1, m = 2, f(x) = x: |1⟩ picks up e^{2πi/4} = i
        let full = phase_kickback(&StateVector::basis(1, 1), 2, |x| x as u64).unwrap();
        let amp = full.amplitudes()[1 | (3 << 1)];
        assert!((amp - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!((full.amplitudes()[1].norm()) < 1e-14);
    }

    #[test]
    fn control_zero_is_identity() {
        let mut rng = SeededRng::new(31, 0);
        let psi = random_state(3, &mut rng);
        let v = sample_haar_unitary(4, &mut rng);
        let table = PhaseTable::from_energies(2.3, 30, vec![0.4, -1.1]).unwrap();
        // control is qubit 2, held at |0⟩ in a 3-qubit state
        let lifted = StateVector::normalized(
            psi.amplitudes()
                .iter()
                .enumerate()
                .map(|(i, &a)| if i & 4 == 0 { a } else { Complex64::new(0.0, 0.0) })
                .collect(),
        )
        .unwrap();
        let out = apply_pseudo_evolution(&lifted, &table, &v, Some(2)).unwrap();
        assert_eq!(out, lifted);
    }

    #[test]
    fn implicit_matches_dense_propagator() {
        let mut rng = SeededRng::new(32, 0);
        let n = 4;
        let v = sample_haar_unitary(16, &mut rng);
        let table = PhaseTable::from_energies(3.7, 48, vec![-1.3, -0.2, 0.5, 1.7]).unwrap();
        let psi = random_state(n, &mut rng);
        let out = apply_pseudo_evolution(&psi, &table, &v, None).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        let system =
            Eigensystem::new(Spectrum::new(table.basis_energies(n), Provenance::Degenerate { dtilde: 4 }), v.clone());
        // basis energies are already sorted here, so the eigensystem lines up with V
        let want = StateVector::from_amplitudes(system.evolve(psi.amplitudes(), 3.7)).unwrap();
        assert!(out.fidelity(&want) >= 1.0 - 1e-9);
    }

    #[test]
    fn explicit_matches_implicit_and_restores_ancillas() {
        let mut rng = SeededRng::new(33, 0);
        for (n, m, dtilde) in [(1u32, 4u32, 2usize), (2, 6, 4), (3, 8, 2)] {
            let v = sample_haar_unitary(1 << n, &mut rng);
            let energies = (0..dtilde).map(|_| 4.0 * rng.uniform() - 2.0).collect();
            let table = PhaseTable::from_energies(1.9, m, energies).unwrap();
            let psi = random_state(n, &mut rng);
            let implicit = apply_pseudo_evolution(&psi, &table, &v, None).unwrap();
            for control in [None, Some(true), Some(false)] {
                let full = simulate_explicit_kickback(&psi, &table, &v, control).unwrap();
                let kept = system_slice(&full, n, m, (1 << m) - 1, control);
                let want = if control == Some(false) { psi.amplitudes() } else { implicit.amplitudes() };
                for (a, b) in kept.iter().zip(want) {
                    assert!((a - b).norm() < 1e-10, "n={n} m={m} control={control:?}");
                }
                let kept_norm: f64 = kept.iter().map(|a| a.norm_sqr()).sum();
                assert!((kept_norm - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn forward_then_backward_is_identity() {
        let mut rng = SeededRng::new(34, 0);
        let v = sample_haar_unitary(8, &mut rng);
        let table = PhaseTable::from_energies(1234.5, 50, vec![-1.0, 0.3]).unwrap();
        let psi = random_state(3, &mut rng);
        let there = apply_pseudo_evolution(&psi, &table, &v, None).unwrap();
        let back = apply_pseudo_evolution(&there, &table.reversed(), &v, None).unwrap();
        assert!(back.fidelity(&psi) > 1.0 - 1e-9);
    }

    #[test]
    fn size_limits() {
        let psi = StateVector::zero(4);
        assert!(matches!(phase_kickback(&psi, 2, |_| 0), Err(SimError::SizeOverflow(_))));
        let table = PhaseTable::from_energies(1.0, 9, vec![0.0]).unwrap();
        let v = UnitaryMatrix::identity(2);
        assert!(simulate_explicit_kickback(&StateVector::zero(1), &table, &v, None).is_err());
    }
}
