use super::{RandError, SeededRng};

/// Mersenne prime 2⁶¹ − 1, the default modulus for outputs of up to 60 bits.
const MERSENNE_61: u64 = (1 << 61) - 1;
/// Largest prime below 2⁶⁴, used for 61 to 63 output bits.
const PRIME_BELOW_2_64: u64 = u64::MAX - 58;

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve primes as witnesses are
/// exact for every 64-bit input.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random polynomial of degree < k over GF(q), truncated to m output bits.
///
/// With coefficients drawn uniformly, the values at any k distinct points
/// are jointly uniform over GF(q). Truncation to m bits adds a bias of at
/// most 2^m / q per output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KWiseFamily {
    coefficients: Vec<u64>,
    modulus: u64,
    output_bits: u32,
}

impl KWiseFamily {
    /// Default prime for `output_bits` outputs.
    pub fn default_modulus(output_bits: u32) -> u64 {
        if output_bits <= 60 {
            MERSENNE_61
        } else {
            PRIME_BELOW_2_64
        }
    }

    pub fn new(coefficients: Vec<u64>, modulus: u64, output_bits: u32) -> Result<Self, RandError> {
        if coefficients.is_empty() {
            return Err(RandError::InvalidFamily("degree k must be positive".into()));
        }
        if output_bits == 0 || output_bits > 63 {
            return Err(RandError::InvalidFamily(format!("output bits {output_bits} outside 1..=63")));
        }
        if modulus < (1u64 << output_bits) {
            return Err(RandError::InvalidFamily(format!("modulus {modulus} is below 2^{output_bits}")));
        }
        if !is_prime_u64(modulus) {
            return Err(RandError::InvalidFamily(format!("modulus {modulus} is not prime")));
        }
        if let Some(c) = coefficients.iter().find(|&&c| c >= modulus) {
            return Err(RandError::InvalidFamily(format!("coefficient {c} is not reduced mod {modulus}")));
        }
        Ok(Self { coefficients, modulus, output_bits })
    }

    /// Fresh uniformly random member of the degree-k family.
    pub fn random(k: usize, output_bits: u32, rng: &mut SeededRng) -> Result<Self, RandError> {
        let q = Self::default_modulus(output_bits);
        let coefficients = (0..k).map(|_| rng.below(q)).collect();
        Self::new(coefficients, q, output_bits)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn output_bits(&self) -> u32 {
        self.output_bits
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    /// Horner evaluation mod q, then reduction mod 2^m.
    pub fn eval(&self, x: u64) -> Result<u64, RandError> {
        if x >= self.modulus {
            return Err(RandError::DomainOverflow { x, modulus: self.modulus });
        }
        let q = self.modulus;
        let v = self
            .coefficients
            .iter()
            .rev()
            .fold(0u64, |acc, &c| ((mul_mod(acc, x, q) as u128 + c as u128) % q as u128) as u64);
        Ok(v & ((1u64 << self.output_bits) - 1))
    }

    /// Output mapped to [0, 1) by dividing by 2^m.
    pub fn eval_unit(&self, x: u64) -> Result<f64, RandError> {
        let v = self.eval(x)?;
        Ok(v as f64 / 2f64.powi(self.output_bits as i32))
    }
}
