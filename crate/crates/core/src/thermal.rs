//! Exact spectral computations on dense Hermitian operators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::operator::{hermitian_deviation, site_mask, DenseOperator};
use crate::{Error, Result};

/// Inputs to [`eig_hermitian`] must be Hermitian to this absolute tolerance.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Ground-state clustering tolerance, relative to the spectral range.
pub const DEGENERACY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 10_000;
/// Components below this magnitude are skipped when fixing eigenvector phases.
const PHASE_THRESHOLD: f64 = 1e-8;

/// Full eigendecomposition, eigenvalues ascending, column `k` of
/// `eigenvectors` belonging to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n_sites: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> DVector<Complex64> {
        self.eigenvectors.column(k).into_owned()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn spectral_range(&self) -> f64 {
        self.eigenvalues[self.dim() - 1] - self.eigenvalues[0]
    }

    /// Number of eigenvalues clustered with the lowest one.
    pub fn ground_degeneracy(&self) -> usize {
        let tol = DEGENERACY_TOL * self.spectral_range().max(f64::MIN_POSITIVE);
        let e0 = self.eigenvalues[0];
        self.eigenvalues.iter().take_while(|&&e| e - e0 <= tol).count()
    }

    /// Gap between the ground cluster and the next level (zero if the whole
    /// spectrum is one cluster).
    pub fn gap(&self) -> f64 {
        let g = self.ground_degeneracy();
        if g >= self.dim() {
            0.0
        } else {
            self.eigenvalues[g] - self.eigenvalues[0]
        }
    }

    /// Normalised weights `exp(−(E_k − E_0)/T) / Z`.
    pub fn boltzmann_weights(&self, temperature: f64) -> Result<Vec<f64>> {
        check_temperature(temperature)?;
        let e0 = self.eigenvalues[0];
        let mut w: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|e| (-(e - e0) / temperature).exp())
            .collect();
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= z);
        Ok(w)
    }

    /// Von Neumann entropy of the Gibbs state at `temperature`.
    pub fn thermal_entropy(&self, temperature: f64) -> Result<f64> {
        Ok(self
            .boltzmann_weights(temperature)?
            .into_iter()
            .filter(|&w| w > 0.0)
            .map(|w| -w * w.ln())
            .sum())
    }

    /// `Σ_k w_k |v_k⟩⟨v_k|` for arbitrary nonnegative weights summing to one.
    pub fn mixture(&self, weights: &[f64]) -> DensityMatrix {
        let dim = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (k, &w) in weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(w);
        }
        let rho = &scaled * self.eigenvectors.adjoint();
        debug_assert_eq!(rho.nrows(), dim);
        DensityMatrix::from_hermitian_unchecked(self.n_sites, rho)
    }

    pub fn thermal_state(&self, temperature: f64) -> Result<DensityMatrix> {
        Ok(self.mixture(&self.boltzmann_weights(temperature)?))
    }

    /// Equal-weight mixture over the ground cluster: the `T → 0` Gibbs limit.
    pub fn ground_mixture(&self) -> DensityMatrix {
        let g = self.ground_degeneracy();
        let mut w = vec![0.0; self.dim()];
        w[..g].iter_mut().for_each(|x| *x = 1.0 / g as f64);
        self.mixture(&w)
    }

    /// Largest `‖H v_k − E_k v_k‖`.
    pub fn max_residual(&self, h: &DenseOperator) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        (0..self.dim())
            .map(|k| (hv.column(k) - self.eigenvectors.column(k) * Complex64::from(self.eigenvalues[k])).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|V†V − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let g = self.eigenvectors.adjoint() * &self.eigenvectors;
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (g - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveTemperature(t));
    }
    Ok(())
}

/// Rotate every column so its first significant component is real positive.
fn fix_phases(vectors: &mut DMatrix<Complex64>) {
    for mut col in vectors.column_iter_mut() {
        if let Some(z) = col.iter().copied().find(|z| z.norm() > PHASE_THRESHOLD) {
            let phase = z.conj() / z.norm();
            col *= phase;
        }
    }
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

/// Full spectral decomposition of a Hermitian operator.
///
/// Real symmetric inputs go through the real solver. Eigenvectors are
/// phase-fixed so that repeated calls give bit-identical output.
pub fn eig_hermitian(h: &DenseOperator) -> Result<Spectrum> {
    let deviation = hermitian_deviation(h);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    let dim = h.dim();
    let (values, vectors): (Vec<f64>, DMatrix<Complex64>) = if h.is_real() {
        let m = DMatrix::from_fn(dim, dim, |r, c| 0.5 * (h.get(r, c).re + h.get(c, r).re));
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence)?;
        let vecs = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        (eig.eigenvalues.iter().copied().collect(), vecs)
    } else {
        let m = DMatrix::from_fn(dim, dim, |r, c| (h.get(r, c) + h.get(c, r).conj()) * 0.5);
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence)?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let order = sorted_order(&values);
    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut eigenvectors = DMatrix::from_fn(dim, dim, |r, c| vectors[(r, order[c])]);
    fix_phases(&mut eigenvectors);
    Ok(Spectrum {
        n_sites: h.n_sites(),
        eigenvalues,
        eigenvectors,
    })
}

/// A normalised, Hermitian, positive semidefinite `2^n × 2^n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_sites: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    const TRACE_TOL: f64 = 1e-10;

    /// Validates trace and Hermiticity. Positivity is not checked here;
    /// see [`DensityMatrix::min_eigenvalue`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = DenseOperator::from_matrix(matrix)?;
        let deviation = hermitian_deviation(&op);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidParameter(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        Ok(Self::from_hermitian_unchecked(op.n_sites(), op.into_matrix()))
    }

    fn from_hermitian_unchecked(n_sites: usize, m: DMatrix<Complex64>) -> Self {
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self { n_sites, matrix: sym }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) state vector.
    pub fn pure(state: &DVector<Complex64>) -> Result<Self> {
        let norm = state.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let psi = state / Complex64::new(norm, 0.0);
        Self::new(&psi * psi.adjoint())
    }

    pub fn maximally_mixed(n_sites: usize) -> Result<Self> {
        let id = DenseOperator::identity(n_sites)?;
        let d = id.dim() as f64;
        Ok(Self {
            n_sites,
            matrix: id.into_matrix() / Complex64::new(d, 0.0),
        })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Self {
        Self {
            n_sites: self.n_sites + other.n_sites,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn as_operator(&self) -> DenseOperator {
        DenseOperator::from_matrix(self.matrix.clone()).expect("density matrix has power-of-two dimension")
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(&self.as_operator())?.ground_energy())
    }
}

pub fn gibbs_state(h: &DenseOperator, temperature: f64) -> Result<DensityMatrix> {
    check_temperature(temperature)?;
    eig_hermitian(h)?.thermal_state(temperature)
}

/// `Tr(o ρ)`.
pub fn expectation(rho: &DensityMatrix, o: &DenseOperator) -> Result<Complex64> {
    if rho.dim() != o.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: o.dim(),
        });
    }
    let (om, rm) = (o.matrix(), rho.matrix());
    let dim = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..dim {
        for b in 0..dim {
            acc += om[(a, b)] * rm[(b, a)];
        }
    }
    Ok(acc)
}

/// Partial trace keeping the sites in `keep` (in ascending site order).
pub fn reduced_density(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_sites();
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "reduced_density needs at least one kept site".into(),
        ));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidParameter(format!("site {} listed twice", w[0])));
        }
    }
    if let Some(&bad) = kept.iter().find(|&&s| s >= n) {
        return Err(Error::SiteOutOfRange { site: bad, n_sites: n });
    }
    let traced: Vec<usize> = (0..n).filter(|s| !kept.contains(s)).collect();

    // Scatter a local index over the given sites into a full basis index.
    let scatter = |sites: &[usize], local: usize| -> usize {
        let k = sites.len();
        sites
            .iter()
            .enumerate()
            .filter(|(i, _)| local & (1 << (k - 1 - i)) != 0)
            .fold(0, |acc, (_, &s)| acc | site_mask(s, n))
    };
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let kept_idx: Vec<usize> = (0..dk).map(|a| scatter(&kept, a)).collect();
    let traced_idx: Vec<usize> = (0..dt).map(|t| scatter(&traced, t)).collect();

    let m = rho.matrix();
    let out = DMatrix::from_fn(dk, dk, |a, b| {
        traced_idx
            .iter()
            .map(|&t| m[(kept_idx[a] | t, kept_idx[b] | t)])
            .sum::<Complex64>()
    });
    Ok(DensityMatrix::from_hermitian_unchecked(kept.len(), out))
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone)]
pub struct GroundStateInfo {
    pub energy: f64,
    pub vector: DVector<Complex64>,
    pub degeneracy: usize,
    /// Purity of each single-site reduced state of `vector`.
    pub reduced_purities: Vec<f64>,
}

pub fn ground_state(h: &DenseOperator) -> Result<GroundStateInfo> {
    ground_state_of(&eig_hermitian(h)?)
}

pub fn ground_state_of(spectrum: &Spectrum) -> Result<GroundStateInfo> {
    let vector = spectrum.eigenvector(0);
    let rho = DensityMatrix::pure(&vector)?;
    let reduced_purities = (0..spectrum.n_sites())
        .map(|s| reduced_density(&rho, &[s]).map(|r| purity(&r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundStateInfo {
        energy: spectrum.ground_energy(),
        vector,
        degeneracy: spectrum.ground_degeneracy(),
        reduced_purities,
    })
}
