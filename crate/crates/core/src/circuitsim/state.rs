use std::f64::consts::TAU;
use std::io::{self, Read, Write};

use num_complex::Complex64;

use super::SimError;

const NORM_TOL: f64 = 1e-10;

/// Amplitudes over `n_total` qubits; qubit q is bit q of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_total: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n_total: u32, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_total];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_total, amps }
    }

    pub fn zero(n_total: u32) -> Self {
        Self::basis(n_total, 0)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(SimError::DimensionMismatch { expected: amps.len().next_power_of_two(), found: amps.len() });
        }
        let s = Self { n_total: amps.len().trailing_zeros(), amps };
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(n2));
        }
        Ok(s)
    }

    /// Scales `amps` to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Self::from_amplitudes(amps.into_iter().map(|a| a / n).collect())
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        let sq: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        crate::stats::pairwise_sum(&sq)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Tensor product with `self` on the low qubits.
    pub fn tensor(&self, high: &Self) -> Self {
        let amps = high.amps.iter().flat_map(|h| self.amps.iter().map(move |l| l * h)).collect();
        Self { n_total: self.n_total + high.n_total, amps }
    }

    /// Applies a 2×2 matrix `[[a, b], [c, d]]` to qubit `q`.
    pub fn apply_single(&mut self, q: u32, g: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (x0, x1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = g[0][0] * x0 + g[0][1] * x1;
                self.amps[i | bit] = g[1][0] * x0 + g[1][1] * x1;
            }
        }
    }

    pub fn apply_x(&mut self, q: u32) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_h(&mut self, q: u32) {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_single(q, [[h, h], [h, -h]]);
    }
}

fn check_register(n_total: u32, register: &[u32]) -> Result<(), SimError> {
    let mut seen = 0u64;
    for &q in register {
        if q >= n_total || seen & (1 << q) != 0 {
            return Err(SimError::InvalidRegister(format!("qubit {q} in {register:?}")));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Value of `register` (register[i] is bit i) in basis index `x`.
pub(crate) fn register_value(x: usize, register: &[u32]) -> usize {
    register.iter().enumerate().map(|(i, &q)| ((x >> q) & 1) << i).sum()
}

/// Basis index `base` with `register` overwritten by `value`.
pub(crate) fn with_register(base: usize, register: &[u32], value: usize) -> usize {
    register.iter().enumerate().fold(base, |acc, (i, &q)| (acc & !(1 << q)) | (((value >> i) & 1) << q))
}

fn dft_register(psi: &mut StateVector, register: &[u32], sign: f64) -> Result<(), SimError> {
    check_register(psi.n_total, register)?;
    let m = 1usize << register.len();
    let mask: usize = register.iter().map(|&q| 1usize << q).sum();
    let scale = 1.0 / (m as f64).sqrt();
    let roots: Vec<Complex64> = (0..m).map(|k| Complex64::from_polar(1.0, sign * TAU * k as f64 / m as f64)).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for base in 0..psi.dim() {
        if base & mask != 0 {
            continue;
        }
        for (z, b) in buf.iter_mut().enumerate() {
            *b = psi.amps[with_register(base, register, z)];
        }
        for y in 0..m {
            let acc: Complex64 = buf.iter().enumerate().map(|(z, &a)| roots[(z * y) % m] * a).sum();
            psi.amps[with_register(base, register, y)] = acc * scale;
        }
    }
    Ok(())
}

/// Dense QFT |z⟩ ↦ 2^{−m/2} Σ_y e^{2πi zy/2^m}|y⟩ on `register`.
pub fn qft(psi: &mut StateVector, register: &[u32]) -> Result<(), SimError> {
    dft_register(psi, register, 1.0)
}

pub fn inverse_qft(psi: &mut StateVector, register: &[u32]) -> Result<(), SimError> {
    dft_register(psi, register, -1.0)
}

const MAGIC: &[u8; 4] = b"PCSV";

/// "PCSV", u32 n_total, then interleaved little-endian (re, im) f64 pairs.
pub fn write_pcsv<W: Write>(mut w: W, psi: &StateVector) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&psi.n_total.to_le_bytes())?;
    for a in &psi.amps {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_pcsv<R: Read>(mut r: R) -> io::Result<StateVector> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "missing PCSV magic"));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let n_total = u32::from_le_bytes(b4);
    if n_total > 40 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "qubit count too large"));
    }
    let mut amps = Vec::with_capacity(1 << n_total);
    let mut b8 = [0u8; 8];
    for _ in 0..1usize << n_total {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        amps.push(Complex64::new(re, f64::from_le_bytes(b8)));
    }
    Ok(StateVector { n_total, amps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn one_qubit_qft_is_hadamard() {
        for x in 0..2 {
            let mut a = StateVector::basis(1, x);
            let mut b = a.clone();
            qft(&mut a, &[0]).unwrap();
            b.apply_h(0);
            assert!(close(a.amplitudes(), b.amplitudes(), 1e-15));
        }
    }

    #[test]
    fn qft_of_all_ones_register() {
        // |11⟩ = |3⟩ ↦ ½ Σ_z ω₄^{3z}|z⟩
        let mut psi = StateVector::basis(2, 3);
        qft(&mut psi, &[0, 1]).unwrap();
        for z in 0..4 {
            let want = Complex64::from_polar(0.5, TAU * 3.0 * z as f64 / 4.0);
            assert!((psi.amplitudes()[z] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn qft_round_trip_on_sub_register() {
        let amps: Vec<Complex64> = (0..32).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let psi = StateVector::normalized(amps).unwrap();
        let mut phi = psi.clone();
        qft(&mut phi, &[4, 1, 2]).unwrap();
        assert!((phi.norm_sqr() - 1.0).abs() < 1e-12);
        inverse_qft(&mut phi, &[4, 1, 2]).unwrap();
        assert!(close(phi.amplitudes(), psi.amplitudes(), 1e-12));
    }

    #[test]
    fn register_validation() {
        let mut psi = StateVector::zero(3);
        assert!(qft(&mut psi, &[0, 3]).is_err());
        assert!(qft(&mut psi, &[1, 1]).is_err());
    }

    #[test]
    fn register_helpers() {
        assert_eq!(register_value(0b10110, &[1, 2, 4]), 0b111);
        assert_eq!(with_register(0, &[1, 2, 4], 0b101), 0b10010);
    }

    #[test]
    fn normalization_is_checked() {
        assert!(matches!(
            StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 2]),
            Err(SimError::NotNormalized(_))
        ));
    }

    #[test]
    fn pcsv_round_trip() {
        let psi = StateVector::normalized(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)]).unwrap();
        let mut buf = Vec::new();
        write_pcsv(&mut buf, &psi).unwrap();
        assert_eq!(&buf[..4], b"PCSV");
        assert_eq!(buf.len(), 8 + 32);
        assert_eq!(read_pcsv(buf.as_slice()).unwrap(), psi);
    }
}
