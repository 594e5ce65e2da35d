use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::EnsembleError;

const HERMITIAN_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

fn check_square(m: &DMatrix<Complex64>) -> Result<(), EnsembleError> {
    if m.nrows() != m.ncols() {
        return Err(EnsembleError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(())
}

/// Largest entrywise |a − b|.
pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(DMatrix<Complex64>);

impl HermitianMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, EnsembleError> {
        check_square(&m)?;
        let dev = max_abs_diff(&m, &m.adjoint());
        if dev > HERMITIAN_TOL {
            return Err(EnsembleError::NotHermitian(dev));
        }
        Ok(Self(m))
    }

    /// Averages `m` with its adjoint, removing rounding asymmetry.
    pub fn hermitize(m: DMatrix<Complex64>) -> Result<Self, EnsembleError> {
        check_square(&m)?;
        let adj = m.adjoint();
        Ok(Self((m + adj).scale(0.5)))
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let diag = DVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)));
        Self(DMatrix::from_diagonal(&diag))
    }

    pub(crate) fn from_raw(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Dense unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DMatrix<Complex64>);

impl UnitaryMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self, EnsembleError> {
        check_square(&m)?;
        let d = m.nrows();
        let dev = max_abs_diff(&(m.adjoint() * &m), &DMatrix::identity(d, d));
        if dev > UNITARY_TOL {
            return Err(EnsembleError::NotUnitary(dev));
        }
        Ok(Self(m))
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub(crate) fn from_raw(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// max |U†U − I|.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        max_abs_diff(&(self.0.adjoint() * &self.0), &DMatrix::identity(d, d))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = DVector::from_column_slice(v);
        (&self.0 * x).as_slice().to_vec()
    }
}

/// Where a spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Gue,
    Iid,
    Degenerate { dtilde: usize },
    KWise { dtilde: usize, k: usize },
}

impl Provenance {
    /// Semicircle-sampled provenances lie in [−2, 2].
    pub fn is_semicircle(&self) -> bool {
        !matches!(self, Provenance::Gue)
    }
}

/// Ascending eigenvalues with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    provenance: Provenance,
}

impl Spectrum {
    /// Sorts `eigenvalues` ascending.
    pub fn new(mut eigenvalues: Vec<f64>, provenance: Provenance) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues, provenance }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn distinct_count(&self) -> usize {
        let mut n = usize::from(!self.eigenvalues.is_empty());
        for w in self.eigenvalues.windows(2) {
            if w[1] != w[0] {
                n += 1;
            }
        }
        n
    }

    pub fn sum(&self) -> f64 {
        crate::stats::pairwise_sum(&self.eigenvalues)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralMode {
    Iid,
    KWise(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    Gue,
    PseudoGue { dtilde: usize, spectral_mode: SpectralMode },
    DiagonalGue,
    DiagonalIid { dtilde: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BasisMode {
    #[default]
    Haar,
    Identity,
}

/// Declarative description of an ensemble over n qubits (d = 2^n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnsembleSpec {
    pub n_qubits: u32,
    pub kind: EnsembleKind,
    pub basis_mode: BasisMode,
}

impl EnsembleSpec {
    pub fn new(n_qubits: u32, kind: EnsembleKind) -> Result<Self, EnsembleError> {
        let basis_mode = match kind {
            EnsembleKind::DiagonalGue | EnsembleKind::DiagonalIid { .. } => BasisMode::Identity,
            _ => BasisMode::Haar,
        };
        let spec = Self { n_qubits, kind, basis_mode };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gue(n_qubits: u32) -> Self {
        Self { n_qubits, kind: EnsembleKind::Gue, basis_mode: BasisMode::Haar }
    }

    pub fn pseudo_iid(n_qubits: u32, dtilde: usize) -> Result<Self, EnsembleError> {
        Self::new(n_qubits, EnsembleKind::PseudoGue { dtilde, spectral_mode: SpectralMode::Iid })
    }

    pub fn with_basis(mut self, basis_mode: BasisMode) -> Self {
        self.basis_mode = basis_mode;
        self
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn dtilde(&self) -> Option<usize> {
        match self.kind {
            EnsembleKind::PseudoGue { dtilde, .. } | EnsembleKind::DiagonalIid { dtilde } => Some(dtilde),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), EnsembleError> {
        if self.n_qubits == 0 || self.n_qubits > 12 {
            return Err(EnsembleError::InvalidSpec(format!("n = {} outside 1..=12", self.n_qubits)));
        }
        let d = self.dim();
        if let Some(dtilde) = self.dtilde() {
            if dtilde == 0 || !d.is_multiple_of(dtilde) {
                return Err(EnsembleError::InvalidDegeneracy { d, dtilde });
            }
        }
        if let EnsembleKind::PseudoGue { spectral_mode: SpectralMode::KWise(k), .. } = self.kind {
            if k == 0 {
                return Err(EnsembleError::InvalidSpec("k-wise degree must be positive".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_sorts_and_counts() {
        let s = Spectrum::new(vec![3.0, 1.0, 2.0, 1.0], Provenance::Iid);
        assert_eq!(s.eigenvalues(), &[1.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.distinct_count(), 3);
        assert_eq!(s.sum(), 7.0);
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::pseudo_iid(6, 4).is_ok());
        assert_eq!(EnsembleSpec::pseudo_iid(3, 3), Err(EnsembleError::InvalidDegeneracy { d: 8, dtilde: 3 }));
        let diag = EnsembleSpec::new(3, EnsembleKind::DiagonalIid { dtilde: 2 }).unwrap();
        assert_eq!(diag.basis_mode, BasisMode::Identity);
    }

    #[test]
    fn hermitian_check_rejects_asymmetric() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 1.0);
        m[(1, 0)] = Complex64::new(1.0, 1.0);
        assert!(matches!(HermitianMatrix::new(m.clone()), Err(EnsembleError::NotHermitian(_))));
        m[(1, 0)] = Complex64::new(1.0, -1.0);
        assert!(HermitianMatrix::new(m).is_ok());
    }

    #[test]
    fn unitary_check() {
        assert!(UnitaryMatrix::new(DMatrix::identity(4, 4)).is_ok());
        let m = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(UnitaryMatrix::new(m), Err(EnsembleError::NotUnitary(_))));
    }
}
