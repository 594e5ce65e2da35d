use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::types::max_abs_diff;
use super::{EnsembleError, HermitianMatrix, Provenance, Spectrum, UnitaryMatrix};

/// Reconstruction tolerance for eigendecompositions, relative to max(1, max|H_ij|).
const RESIDUAL_TOL: f64 = 1e-8;
/// QR sweep budget, in units of d.
const SWEEPS_PER_DIM: usize = 60;

/// Spectrum together with the unitary whose columns are the matching
/// eigenvectors, so that H = V·diag(Λ)·V†.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    spectrum: Spectrum,
    vectors: UnitaryMatrix,
    residual: Option<f64>,
}

impl Eigensystem {
    pub fn new(spectrum: Spectrum, vectors: UnitaryMatrix) -> Self {
        assert_eq!(spectrum.dim(), vectors.dim(), "spectrum and basis dimensions differ");
        Self { spectrum, vectors, residual: None }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn vectors(&self) -> &UnitaryMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    /// max |H − VΛV†| measured when this system came from [`eig_hermitian`].
    pub fn residual(&self) -> Option<f64> {
        self.residual
    }

    pub fn into_parts(self) -> (Spectrum, UnitaryMatrix) {
        (self.spectrum, self.vectors)
    }

    pub fn hamiltonian(&self) -> Result<HermitianMatrix, EnsembleError> {
        assemble_hamiltonian(&self.vectors, &self.spectrum)
    }

    fn conjugate_diagonal(&self, diag: &[Complex64]) -> DMatrix<Complex64> {
        let v = self.vectors.matrix();
        let mut scaled = v.clone();
        for (j, &p) in diag.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= p;
            }
        }
        scaled * v.adjoint()
    }

    /// e^{−iHt} = V·diag(e^{−iλt})·V†.
    pub fn propagator(&self, t: f64) -> UnitaryMatrix {
        let phases: Vec<Complex64> =
            self.spectrum.eigenvalues().iter().map(|&l| Complex64::from_polar(1.0, -l * t)).collect();
        UnitaryMatrix::from_raw(self.conjugate_diagonal(&phases))
    }

    /// e^{−iHt}ψ without forming the propagator.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = self.vectors.matrix();
        let mut coeffs = v.ad_mul(&DVector::from_column_slice(psi));
        for (c, &l) in coeffs.iter_mut().zip(self.spectrum.eigenvalues()) {
            *c *= Complex64::from_polar(1.0, -l * t);
        }
        (v * coeffs).as_slice().to_vec()
    }
}

/// U·diag(Λ)·U†, re-Hermitized.
pub fn assemble_hamiltonian(u: &UnitaryMatrix, spectrum: &Spectrum) -> Result<HermitianMatrix, EnsembleError> {
    if u.dim() != spectrum.dim() {
        return Err(EnsembleError::DimensionMismatch { expected: u.dim(), found: spectrum.dim() });
    }
    let mut scaled = u.matrix().clone();
    for (j, &l) in spectrum.eigenvalues().iter().enumerate() {
        scaled.column_mut(j).scale_mut(l);
    }
    HermitianMatrix::hermitize(scaled * u.matrix().adjoint())
}

/// Dense Hermitian eigendecomposition with ascending eigenvalues. The
/// reconstruction residual is always measured; a failed or inaccurate
/// decomposition is an error.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Eigensystem, EnsembleError> {
    let d = h.dim();
    let m = h.matrix();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, SWEEPS_PER_DIM * d.max(1))
        .ok_or(EnsembleError::EigenNotConverged { residual: f64::NAN })?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(d, d, |i, j| eig.eigenvectors[(i, order[j])]);

    let spectrum = Spectrum::new(values, Provenance::Gue);
    let mut system = Eigensystem::new(spectrum, UnitaryMatrix::from_raw(vectors));
    let rebuilt = system
        .conjugate_diagonal(&system.spectrum.eigenvalues().iter().map(|&l| Complex64::new(l, 0.0)).collect::<Vec<_>>());
    let residual = max_abs_diff(m, &rebuilt);
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if residual.is_nan() || residual > RESIDUAL_TOL * scale {
        return Err(EnsembleError::EigenNotConverged { residual });
    }
    system.residual = Some(residual);
    Ok(system)
}

/// e^{−iHt} via the eigendecomposition of H.
pub fn propagator(h: &HermitianMatrix, t: f64) -> Result<UnitaryMatrix, EnsembleError> {
    Ok(eig_hermitian(h)?.propagator(t))
}
