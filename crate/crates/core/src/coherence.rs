//! Local l1 coherence `C_j = |⟨σ_j^x + iσ_j^y⟩|` and the Z2 symmetry
//! generated by `⊗_j σ_j^z`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::operator::{
    build_operator, commutator_frobenius, site_cap, site_mask, DenseOperator, OperatorSpec, PauliAxis, PauliString,
};
use crate::thermal::{eig_hermitian, DensityMatrix, Spectrum};
use crate::{Error, Result};

/// Default relative tolerance for [`is_z2_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Per-site coherences of one Gibbs state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceProfile {
    pub temperature: f64,
    pub per_site: Vec<f64>,
}

impl CoherenceProfile {
    pub fn max(&self) -> f64 {
        self.per_site.iter().copied().fold(0.0, f64::max)
    }
}

fn check_site(site: usize, n_sites: usize) -> Result<()> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

/// `⟨σ^x + iσ^y⟩` at `site`, i.e. `2 Σ_a ρ[a|m, a]` over basis states `a`
/// with the site bit clear.
fn raising_expectation(m: &DMatrix<Complex64>, site: usize, n_sites: usize) -> Complex64 {
    let mask = site_mask(site, n_sites);
    let dim = 1usize << n_sites;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in (0..dim).filter(|a| a & mask == 0) {
        acc += m[(a | mask, a)];
    }
    acc * 2.0
}

pub fn local_coherence(rho: &DensityMatrix, site: usize, n_sites: usize) -> Result<f64> {
    if rho.dim() != 1 << n_sites {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 1 << n_sites,
        });
    }
    check_site(site, n_sites)?;
    Ok(raising_expectation(rho.matrix(), site, n_sites).norm())
}

/// Builds the operator, its Gibbs state at `temperature` and every site's coherence.
pub fn coherence_profile(spec: &OperatorSpec, temperature: f64) -> Result<CoherenceProfile> {
    let h = build_operator(spec)?;
    let rho = eig_hermitian(&h)?.thermal_state(temperature)?;
    let n = spec.n_sites();
    let per_site = (0..n)
        .map(|j| local_coherence(&rho, j, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceProfile { temperature, per_site })
}

/// Evaluates site coherences at many temperatures from one spectrum.
///
/// Stores `⟨v_k|σ_j^x + iσ_j^y|v_k⟩` for every eigenvector, so each
/// temperature costs `O(dim)` per site.
#[derive(Debug, Clone)]
pub struct SpectralCoherence {
    spectrum: Spectrum,
    sites: Vec<usize>,
    /// `diag[s][k]` for `sites[s]`.
    diag: Vec<Vec<Complex64>>,
}

impl SpectralCoherence {
    pub fn new(spectrum: Spectrum, sites: &[usize]) -> Result<Self> {
        let n = spectrum.n_sites();
        for &s in sites {
            check_site(s, n)?;
        }
        let v = spectrum.eigenvectors();
        let dim = spectrum.dim();
        let diag = sites
            .iter()
            .map(|&site| {
                let mask = site_mask(site, n);
                (0..dim)
                    .map(|k| {
                        let col = v.column(k);
                        let mut acc = Complex64::new(0.0, 0.0);
                        for a in (0..dim).filter(|a| a & mask == 0) {
                            acc += col[a].conj() * col[a | mask];
                        }
                        acc * 2.0
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            spectrum,
            sites: sites.to_vec(),
            diag,
        })
    }

    pub fn for_spec(spec: &OperatorSpec) -> Result<Self> {
        let sites: Vec<usize> = (0..spec.n_sites()).collect();
        Self::new(eig_hermitian(&build_operator(spec)?)?, &sites)
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Coherences of `sites()` (in that order) at `temperature`.
    pub fn at(&self, temperature: f64) -> Result<Vec<f64>> {
        let w = self.spectrum.boltzmann_weights(temperature)?;
        Ok(self
            .diag
            .iter()
            .map(|d| d.iter().zip(&w).map(|(m, &wk)| m * wk).sum::<Complex64>().norm())
            .collect())
    }
}

/// `⊗_i σ_i^z`, a diagonal ±1 matrix.
pub fn z_generator(n_sites: usize) -> Result<DenseOperator> {
    if n_sites == 0 {
        return Err(Error::InvalidParameter("z_generator needs at least one site".into()));
    }
    if n_sites > site_cap() {
        return Err(Error::SiteCapExceeded {
            n_sites,
            cap: site_cap(),
        });
    }
    let dim = 1usize << n_sites;
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        if r != c {
            Complex64::new(0.0, 0.0)
        } else if r.count_ones() % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    });
    DenseOperator::from_matrix(m)
}

/// Whether `[⊗σ^z, H] = 0` to relative tolerance `tol`.
///
/// Decided twice: from the dense commutator, and from the merged Pauli terms
/// (a string commutes iff it has an even number of X/Y factors; distinct
/// strings are Frobenius-orthogonal, so `‖[Z, H]‖ = 2‖H_odd‖`). The two
/// must agree.
pub fn is_z2_symmetric(spec: &OperatorSpec, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let h = build_operator(spec)?;
    let h_norm = h.frobenius_norm();
    let comm = commutator_frobenius(&z_generator(spec.n_sites())?, &h)?;
    let matrix_says = comm <= tol * h_norm;

    let merged = spec.simplified();
    let coef_norm = |odd: bool| {
        merged
            .terms()
            .iter()
            .filter(|t| t.is_parity_even() != odd)
            .map(|t| t.coefficient().powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let total = (coef_norm(false).powi(2) + coef_norm(true).powi(2)).sqrt();
    let parity_says = 2.0 * coef_norm(true) <= tol * total;

    if matrix_says != parity_says {
        return Err(Error::SymmetryDisagreement {
            matrix: matrix_says,
            parity: parity_says,
        });
    }
    Ok(matrix_says)
}

/// Seeded generator of random Z2-symmetric specs: every term has an even
/// number of X/Y factors and a coefficient uniform in `[−2, 2]`.
#[derive(Debug, Clone)]
pub struct SymmetricSpecGenerator {
    rng: ChaCha8Rng,
    max_sites: usize,
    max_terms: usize,
}

impl SymmetricSpecGenerator {
    pub fn new(seed: u64, max_sites: usize) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_sites: max_sites.max(1),
            max_terms: 8,
        }
    }

    fn random_axis(&mut self) -> PauliAxis {
        PauliAxis::ALL[self.rng.gen_range(0..4)]
    }

    /// One even-parity string: draw freely, then repair parity on a random site.
    fn even_string(&mut self, n: usize) -> Vec<PauliAxis> {
        let mut axes: Vec<PauliAxis> = (0..n).map(|_| self.random_axis()).collect();
        if axes.iter().filter(|a| a.flips()).count() % 2 == 1 {
            let site = self.rng.gen_range(0..n);
            axes[site] = match axes[site] {
                PauliAxis::X | PauliAxis::Y => {
                    if self.rng.gen_bool(0.5) {
                        PauliAxis::I
                    } else {
                        PauliAxis::Z
                    }
                }
                _ => {
                    if self.rng.gen_bool(0.5) {
                        PauliAxis::X
                    } else {
                        PauliAxis::Y
                    }
                }
            };
        }
        axes
    }

    pub fn next_spec(&mut self) -> OperatorSpec {
        let n = self.rng.gen_range(1..=self.max_sites);
        let n_terms = self.rng.gen_range(1..=self.max_terms);
        let terms = (0..n_terms)
            .map(|_| {
                let axes = self.even_string(n);
                let coef = self.rng.gen_range(-2.0..=2.0);
                PauliString::new(axes, coef).expect("finite coefficient")
            })
            .collect();
        OperatorSpec::new(n, terms).expect("generated spec within cap")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{direct_model, indirect_model, xyz_chain_model};
    use crate::operator::single_site_pauli;
    use crate::thermal::{expectation, gibbs_state, reduced_density};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use proptest::prelude::*;

    /// Direct-model closed form, evaluated independently of the engine.
    fn c1_closed(g: f64, w1: f64, w2: f64, t: f64) -> f64 {
        let wb = (g * g + w1 * w1).sqrt();
        g * (w2 / (2.0 * t)).tanh() * (wb / (2.0 * t)).tanh() / wb
    }

    #[test]
    fn mixed_and_pure_limits() {
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        for s in 0..3 {
            assert_eq!(local_coherence(&mixed, s, 3).unwrap(), 0.0);
        }
        let s = 0.5f64.sqrt();
        let plus =
            DensityMatrix::pure(&DVector::from_vec(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])).unwrap();
        assert_abs_diff_eq!(local_coherence(&plus, 0, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert!(local_coherence(&plus, 0, 2).is_err());
        assert!(local_coherence(&plus, 1, 1).is_err());
    }

    #[test]
    fn direct_model_at_half() {
        let spec = direct_model(1.0, 1.3, 0.5).unwrap();
        let p = coherence_profile(&spec, 0.5).unwrap();
        assert_abs_diff_eq!(p.per_site[0], c1_closed(0.5, 1.0, 1.3, 0.5), epsilon = 1e-12);
        assert_abs_diff_eq!(p.per_site[0], 0.310_952_361_873_515, epsilon = 1e-12);
        assert!(p.per_site[1] < 1e-12);
    }

    #[test]
    fn xyz_and_high_t_profiles() {
        let spec = xyz_chain_model(1.0, 1.0, 0.7, 0.3, 0.2).unwrap();
        for t in [0.01, 0.3, 3.0, 300.0] {
            assert!(coherence_profile(&spec, t).unwrap().max() <= 1e-12);
        }
        let hot = coherence_profile(&direct_model(1.0, 1.3, 0.5).unwrap(), 1e6).unwrap();
        assert!(hot.per_site.iter().all(|&c| c < 1e-5));
    }

    #[test]
    fn coherence_equals_twice_reduced_offdiagonal() {
        let spec = indirect_model(0.5, 1.0, 0.5, 0.5).unwrap();
        let h = build_operator(&spec).unwrap();
        for t in [0.05, 0.5, 5.0] {
            let rho = gibbs_state(&h, t).unwrap();
            for site in 0..2 {
                let r = reduced_density(&rho, &[site]).unwrap();
                let c = local_coherence(&rho, site, 2).unwrap();
                assert_abs_diff_eq!(c, 2.0 * r.get(0, 1).norm(), epsilon = 1e-12);
                // and via ⟨σ^x⟩ + i⟨σ^y⟩
                let ex = expectation(&rho, &single_site_pauli(PauliAxis::X, site, 2).unwrap()).unwrap();
                let ey = expectation(&rho, &single_site_pauli(PauliAxis::Y, site, 2).unwrap()).unwrap();
                assert_abs_diff_eq!(c, (ex + Complex64::i() * ey).norm(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spectral_path_matches_density_path() {
        let spec = crate::models::Model::transferred_n_uniform(1.0, 0.5, 2, 1.3, 0.5, 0.5)
            .spec()
            .unwrap();
        let fast = SpectralCoherence::for_spec(&spec).unwrap();
        for t in [1e-3, 0.1, 1.0, 50.0] {
            let slow = coherence_profile(&spec, t).unwrap();
            for (a, b) in fast.at(t).unwrap().iter().zip(&slow.per_site) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn gamma_sign_does_not_change_magnitude() {
        for t in [0.01, 0.2, 2.0] {
            let a = coherence_profile(&direct_model(1.0, 1.3, 0.5).unwrap(), t).unwrap();
            let b = coherence_profile(&direct_model(1.0, 1.3, -0.5).unwrap(), t).unwrap();
            assert_abs_diff_eq!(a.per_site[0], b.per_site[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn z_generator_examples() {
        let z1 = z_generator(1).unwrap();
        assert_eq!(z1.get(0, 0).re, 1.0);
        assert_eq!(z1.get(1, 1).re, -1.0);
        let z2 = z_generator(2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| z2.get(i, i).re).collect();
        assert_eq!(diag, [1.0, -1.0, -1.0, 1.0]);
        let z3 = z_generator(3).unwrap();
        assert_eq!(&z3 * &z3, DenseOperator::identity(3).unwrap());
        assert!(z_generator(0).is_err());
        assert!(z_generator(site_cap() + 1).is_err());
        // matches the product of single-site σ^z
        let prod = &single_site_pauli(PauliAxis::Z, 0, 2).unwrap() * &single_site_pauli(PauliAxis::Z, 1, 2).unwrap();
        assert_eq!(prod, z2);
    }

    #[test]
    fn symmetry_check_examples() {
        for (a, b, c) in [(0.0, 0.0, 0.0), (0.7, 0.3, 0.2), (-1.5, 2.0, 0.9)] {
            assert!(is_z2_symmetric(&xyz_chain_model(1.0, 1.0, a, b, c).unwrap(), SYMMETRY_TOL).unwrap());
        }
        assert!(!is_z2_symmetric(&direct_model(1.0, 1.3, 0.5).unwrap(), SYMMETRY_TOL).unwrap());
        assert!(is_z2_symmetric(&direct_model(1.0, 1.3, 0.0).unwrap(), SYMMETRY_TOL).unwrap());
        assert!(is_z2_symmetric(&OperatorSpec::zero(3).unwrap(), SYMMETRY_TOL).unwrap());
        assert!(is_z2_symmetric(&OperatorSpec::zero(1).unwrap(), 0.0).is_err());
        // cancelling odd terms are still symmetric by both routes
        let cancel = OperatorSpec::new(
            2,
            vec!["XZ".parse().unwrap(), "-1*XZ".parse().unwrap(), "ZZ".parse().unwrap()],
        )
        .unwrap();
        assert!(is_z2_symmetric(&cancel, SYMMETRY_TOL).unwrap());
    }

    #[test]
    fn generator_is_seeded_and_symmetric() {
        let mut a = SymmetricSpecGenerator::new(7, 4);
        let mut b = SymmetricSpecGenerator::new(7, 4);
        for _ in 0..20 {
            let s = a.next_spec();
            assert_eq!(s, b.next_spec());
            assert!(s.n_sites() <= 4);
            assert!(s.terms().iter().all(|t| t.is_parity_even()));
            assert!(is_z2_symmetric(&s, SYMMETRY_TOL).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn symmetric_specs_have_no_local_coherence(seed in any::<u64>()) {
            let spec = SymmetricSpecGenerator::new(seed, 4).next_spec();
            let fast = SpectralCoherence::for_spec(&spec).unwrap();
            for t in [0.05, 0.5, 5.0] {
                let c = fast.at(t).unwrap();
                prop_assert!(c.iter().all(|&x| x <= 1e-10), "{c:?} at T={t}");
            }
        }

        #[test]
        fn asymmetric_catalog_models_carry_coherence(
            g in prop_oneof![-2.0f64..-0.05, 0.05f64..2.0],
            th in 0.05f64..2.0,
            w1 in 0.2f64..2.0,
            w2 in 0.2f64..2.0,
        ) {
            for spec in [direct_model(w1, w2, g).unwrap(), indirect_model(w1, w2, g, th).unwrap()] {
                prop_assert!(!is_z2_symmetric(&spec, SYMMETRY_TOL).unwrap());
                let c = coherence_profile(&spec, 0.05).unwrap();
                prop_assert!(c.max() > 1e-3, "{:?}", c.per_site);
            }
        }
    }
}
