use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::ProbeError;

const I_POWERS: [Complex64; 4] =
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];

/// n-qubit Pauli operator ⊗_q σ_q with σ = I, X, Z, Y for (x_q, z_q) =
/// (0,0), (1,0), (0,1), (1,1). Y = iXZ, so P = i^{|x∧z|} X^x Z^z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliLabel {
    pub x_mask: u64,
    pub z_mask: u64,
}

fn popcount(v: u64) -> u32 {
    v.count_ones()
}

impl PauliLabel {
    pub const IDENTITY: Self = Self { x_mask: 0, z_mask: 0 };

    pub fn new(x_mask: u64, z_mask: u64) -> Self {
        Self { x_mask, z_mask }
    }

    pub fn x(q: u32) -> Self {
        Self::new(1 << q, 0)
    }

    pub fn y(q: u32) -> Self {
        Self::new(1 << q, 1 << q)
    }

    pub fn z(q: u32) -> Self {
        Self::new(0, 1 << q)
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Highest qubit acted on, plus one.
    pub fn support_len(&self) -> u32 {
        64 - (self.x_mask | self.z_mask).leading_zeros()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (popcount(self.x_mask & other.z_mask) + popcount(self.z_mask & other.x_mask)).is_multiple_of(2)
    }

    /// self·other = i^k·label, returned as (k mod 4, label).
    pub fn product(&self, other: &Self) -> (u8, Self) {
        let c = Self::new(self.x_mask ^ other.x_mask, self.z_mask ^ other.z_mask);
        let k = popcount(self.x_mask & self.z_mask) as i64
            + popcount(other.x_mask & other.z_mask) as i64
            + 2 * popcount(self.z_mask & other.x_mask) as i64
            - popcount(c.x_mask & c.z_mask) as i64;
        (k.rem_euclid(4) as u8, c)
    }

    /// P|j⟩ = coefficient(j)·|j ⊕ x⟩.
    pub fn coefficient(&self, j: usize) -> Complex64 {
        let k = popcount(self.x_mask & self.z_mask) + 2 * popcount(self.z_mask & j as u64);
        I_POWERS[(k % 4) as usize]
    }

    pub fn flip(&self, j: usize) -> usize {
        j ^ self.x_mask as usize
    }

    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (j, &a) in amps.iter().enumerate() {
            out[self.flip(j)] = self.coefficient(j) * a;
        }
        out
    }

    /// ⟨ψ|P|ψ⟩, real for Hermitian P.
    pub fn expectation(&self, amps: &[Complex64]) -> f64 {
        amps.iter().enumerate().map(|(j, &a)| (amps[self.flip(j)].conj() * self.coefficient(j) * a).re).sum()
    }

    pub fn to_string_n(&self, n: u32) -> String {
        (0..n)
            .map(|q| match ((self.x_mask >> q) & 1, (self.z_mask >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            })
            .collect()
    }
}

/// Character q of the string acts on qubit q, e.g. "XIZ" = X₀Z₂.
impl FromStr for PauliLabel {
    type Err = ProbeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > 64 {
            return Err(ProbeError::InvalidPauli(format!("{s} is longer than 64 sites")));
        }
        let mut p = Self::IDENTITY;
        for (q, ch) in s.chars().enumerate() {
            let (x, z) = match ch.to_ascii_uppercase() {
                'I' => (0, 0),
                'X' => (1, 0),
                'Z' => (0, 1),
                'Y' => (1, 1),
                other => return Err(ProbeError::InvalidPauli(format!("unknown symbol {other:?}"))),
            };
            p.x_mask |= x << q;
            p.z_mask |= z << q;
        }
        Ok(p)
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_n(self.support_len().max(1)))
    }
}
