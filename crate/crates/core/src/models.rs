//! Catalogue of coupled two-level-system Hamiltonians.
//!
//! Every constructor returns an [`OperatorSpec`] whose site 0 is the TLS
//! whose coherence is usually of interest (the "first", "target" or "zeroth"
//! TLS). Local terms are `(ω/2)σ^z`; couplings are `(g/2)σ^a σ^b`.
//! Couplings may be negative; frequencies must be positive.

use std::fmt;
use std::str::FromStr;

use crate::operator::{OperatorSpec, PauliAxis, PauliString};
use crate::{Error, Result};

use PauliAxis::{X, Y, Z};

fn check_frequency(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be a positive frequency, got {value}"
        )));
    }
    Ok(())
}

fn check_coupling(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be finite, got {value}")));
    }
    Ok(())
}

fn check_sources(omegas: &[f64], others: &[(&str, &[f64])]) -> Result<()> {
    if omegas.is_empty() {
        return Err(Error::InvalidParameter("at least one source TLS is required".into()));
    }
    for (name, list) in others {
        if list.len() != omegas.len() {
            return Err(Error::InvalidParameter(format!(
                "{name} has {} entries but there are {} sources",
                list.len(),
                omegas.len()
            )));
        }
        for &v in *list {
            check_coupling(name, v)?;
        }
    }
    for &w in omegas {
        check_frequency("source frequency", w)?;
    }
    Ok(())
}

fn local_z(n: usize, site: usize, omega: f64) -> Result<PauliString> {
    PauliString::local(n, &[(site, Z)], omega / 2.0)
}

fn pair(n: usize, a: (usize, PauliAxis), b: (usize, PauliAxis), g: f64) -> Result<PauliString> {
    PauliString::local(n, &[a, b], g / 2.0)
}

fn labelled(spec: OperatorSpec, labels: Vec<String>) -> Result<OperatorSpec> {
    spec.with_labels(labels)
}

/// `(ω1/2)σ_1^z + (γ/2)σ_1^x σ_2^z + (ω2/2)σ_2^z`.
pub fn direct_model(omega1: f64, omega2: f64, gamma: f64) -> Result<OperatorSpec> {
    check_frequency("omega1", omega1)?;
    check_frequency("omega2", omega2)?;
    check_coupling("gamma", gamma)?;
    let terms = vec![
        local_z(2, 0, omega1)?,
        pair(2, (0, X), (1, Z), gamma)?,
        local_z(2, 1, omega2)?,
    ];
    labelled(OperatorSpec::new(2, terms)?, vec!["first".into(), "second".into()])
}

/// Direct model plus a `(θ/2)σ_1^x σ_2^x` exchange term.
pub fn indirect_model(omega1: f64, omega2: f64, gamma: f64, theta: f64) -> Result<OperatorSpec> {
    check_frequency("omega1", omega1)?;
    check_frequency("omega2", omega2)?;
    check_coupling("gamma", gamma)?;
    check_coupling("theta", theta)?;
    let terms = vec![
        local_z(2, 0, omega1)?,
        pair(2, (0, X), (1, Z), gamma)?,
        pair(2, (0, X), (1, X), theta)?,
        local_z(2, 1, omega2)?,
    ];
    labelled(OperatorSpec::new(2, terms)?, vec!["first".into(), "second".into()])
}

/// Three sites `0, 1, 2`: the direct pair `(1, 2)` with site 0 attached to
/// site 1 by `(θ/2)σ_0^x σ_1^x`.
pub fn transferred_model(omega0: f64, omega1: f64, omega2: f64, gamma: f64, theta: f64) -> Result<OperatorSpec> {
    check_frequency("omega0", omega0)?;
    check_frequency("omega1", omega1)?;
    check_frequency("omega2", omega2)?;
    check_coupling("gamma", gamma)?;
    check_coupling("theta", theta)?;
    let terms = vec![
        local_z(3, 0, omega0)?,
        local_z(3, 1, omega1)?,
        local_z(3, 2, omega2)?,
        pair(3, (0, X), (1, X), theta)?,
        pair(3, (1, X), (2, Z), gamma)?,
    ];
    labelled(
        OperatorSpec::new(3, terms)?,
        vec!["zeroth".into(), "first".into(), "second".into()],
    )
}

fn source_labels(prefix: &[&str], n_sources: usize) -> Vec<String> {
    prefix
        .iter()
        .map(|s| s.to_string())
        .chain((1..=n_sources).map(|j| format!("source-{j}")))
        .collect()
}

/// Target at site 0 coupled to each source `j` by `(γ_j/2)σ_1^x σ_j^z`.
pub fn direct_model_n(omega1: f64, omega_sources: &[f64], gamma_sources: &[f64]) -> Result<OperatorSpec> {
    check_frequency("omega1", omega1)?;
    check_sources(omega_sources, &[("gamma_sources", gamma_sources)])?;
    let n = omega_sources.len() + 1;
    let mut terms = vec![local_z(n, 0, omega1)?];
    for (j, (&w, &g)) in omega_sources.iter().zip(gamma_sources).enumerate() {
        let site = j + 1;
        terms.push(local_z(n, site, w)?);
        terms.push(pair(n, (0, X), (site, Z), g)?);
    }
    labelled(
        OperatorSpec::new(n, terms)?,
        source_labels(&["target"], omega_sources.len()),
    )
}

/// Target T at site 0 with sources coupled by
/// `(γ_j/2)σ_T^z σ_j^x + (θ_j/2)σ_T^x σ_j^x`.
///
/// For `N = 1` this is [`indirect_model`] with the two sites exchanged
/// (the target plays the role of the second TLS there).
pub fn indirect_model_n(
    omega_target: f64,
    omega_sources: &[f64],
    gamma_sources: &[f64],
    theta_sources: &[f64],
) -> Result<OperatorSpec> {
    indirect_n_with(omega_target, omega_sources, gamma_sources, theta_sources, (Z, X))
}

/// Same as [`indirect_model_n`] but with the γ coupling written
/// `σ_T^x σ_j^z`, i.e. the target carries σ^x in both couplings.
pub fn indirect_model_n_swapped(
    omega_target: f64,
    omega_sources: &[f64],
    gamma_sources: &[f64],
    theta_sources: &[f64],
) -> Result<OperatorSpec> {
    indirect_n_with(omega_target, omega_sources, gamma_sources, theta_sources, (X, Z))
}

fn indirect_n_with(
    omega_target: f64,
    omega_sources: &[f64],
    gamma_sources: &[f64],
    theta_sources: &[f64],
    gamma_axes: (PauliAxis, PauliAxis),
) -> Result<OperatorSpec> {
    check_frequency("omega_target", omega_target)?;
    check_sources(
        omega_sources,
        &[("gamma_sources", gamma_sources), ("theta_sources", theta_sources)],
    )?;
    let n = omega_sources.len() + 1;
    let mut terms = vec![local_z(n, 0, omega_target)?];
    for j in 0..omega_sources.len() {
        let site = j + 1;
        terms.push(local_z(n, site, omega_sources[j])?);
        terms.push(pair(n, (0, gamma_axes.0), (site, gamma_axes.1), gamma_sources[j])?);
        terms.push(pair(n, (0, X), (site, X), theta_sources[j])?);
    }
    labelled(
        OperatorSpec::new(n, terms)?,
        source_labels(&["target"], omega_sources.len()),
    )
}

/// Site 0 receives coherence through `(θ/2)σ_0^x σ_1^x` from the mediator
/// at site 1, which is coupled to `N` sources by `(γ_j/2)σ_1^x σ_j^z`.
pub fn transferred_model_n(
    omega0: f64,
    omega1: f64,
    omega_sources: &[f64],
    gamma_sources: &[f64],
    theta: f64,
) -> Result<OperatorSpec> {
    check_frequency("omega0", omega0)?;
    check_frequency("omega1", omega1)?;
    check_coupling("theta", theta)?;
    check_sources(omega_sources, &[("gamma_sources", gamma_sources)])?;
    let n = omega_sources.len() + 2;
    let mut terms = vec![
        local_z(n, 0, omega0)?,
        pair(n, (0, X), (1, X), theta)?,
        local_z(n, 1, omega1)?,
    ];
    for (j, (&w, &g)) in omega_sources.iter().zip(gamma_sources).enumerate() {
        let site = j + 2;
        terms.push(pair(n, (1, X), (site, Z), g)?);
        terms.push(local_z(n, site, w)?);
    }
    labelled(
        OperatorSpec::new(n, terms)?,
        source_labels(&["zeroth", "mediator"], omega_sources.len()),
    )
}

/// Two-spin XYZ chain: local σ^z terms and `(γ_α/2)σ_1^α σ_2^α`.
pub fn xyz_chain_model(omega1: f64, omega2: f64, gamma_x: f64, gamma_y: f64, gamma_z: f64) -> Result<OperatorSpec> {
    check_frequency("omega1", omega1)?;
    check_frequency("omega2", omega2)?;
    check_coupling("gamma_x", gamma_x)?;
    check_coupling("gamma_y", gamma_y)?;
    check_coupling("gamma_z", gamma_z)?;
    let terms = vec![
        local_z(2, 0, omega1)?,
        local_z(2, 1, omega2)?,
        pair(2, (0, X), (1, X), gamma_x)?,
        pair(2, (0, Y), (1, Y), gamma_y)?,
        pair(2, (0, Z), (1, Z), gamma_z)?,
    ];
    labelled(OperatorSpec::new(2, terms)?, vec!["first".into(), "second".into()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Direct,
    Indirect,
    Transferred,
    DirectN,
    IndirectN,
    TransferredN,
    Xyz,
}

impl ModelTag {
    pub const ALL: [ModelTag; 7] = [
        ModelTag::Direct,
        ModelTag::Indirect,
        ModelTag::Transferred,
        ModelTag::DirectN,
        ModelTag::IndirectN,
        ModelTag::TransferredN,
        ModelTag::Xyz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Direct => "direct",
            ModelTag::Indirect => "indirect",
            ModelTag::Transferred => "transferred",
            ModelTag::DirectN => "direct-n",
            ModelTag::IndirectN => "indirect-n",
            ModelTag::TransferredN => "transferred-n",
            ModelTag::Xyz => "xyz",
        }
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        ModelTag::ALL
            .into_iter()
            .find(|t| t.as_str() == norm)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// A catalogue model together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Direct {
        omega1: f64,
        omega2: f64,
        gamma: f64,
    },
    Indirect {
        omega1: f64,
        omega2: f64,
        gamma: f64,
        theta: f64,
    },
    Transferred {
        omega0: f64,
        omega1: f64,
        omega2: f64,
        gamma: f64,
        theta: f64,
    },
    DirectN {
        omega1: f64,
        omega_sources: Vec<f64>,
        gamma_sources: Vec<f64>,
    },
    IndirectN {
        omega_target: f64,
        omega_sources: Vec<f64>,
        gamma_sources: Vec<f64>,
        theta_sources: Vec<f64>,
    },
    TransferredN {
        omega0: f64,
        omega1: f64,
        omega_sources: Vec<f64>,
        gamma_sources: Vec<f64>,
        theta: f64,
    },
    Xyz {
        omega1: f64,
        omega2: f64,
        gamma_x: f64,
        gamma_y: f64,
        gamma_z: f64,
    },
}

impl Model {
    pub fn tag(&self) -> ModelTag {
        match self {
            Model::Direct { .. } => ModelTag::Direct,
            Model::Indirect { .. } => ModelTag::Indirect,
            Model::Transferred { .. } => ModelTag::Transferred,
            Model::DirectN { .. } => ModelTag::DirectN,
            Model::IndirectN { .. } => ModelTag::IndirectN,
            Model::TransferredN { .. } => ModelTag::TransferredN,
            Model::Xyz { .. } => ModelTag::Xyz,
        }
    }

    pub fn spec(&self) -> Result<OperatorSpec> {
        match self {
            Model::Direct { omega1, omega2, gamma } => direct_model(*omega1, *omega2, *gamma),
            Model::Indirect {
                omega1,
                omega2,
                gamma,
                theta,
            } => indirect_model(*omega1, *omega2, *gamma, *theta),
            Model::Transferred {
                omega0,
                omega1,
                omega2,
                gamma,
                theta,
            } => transferred_model(*omega0, *omega1, *omega2, *gamma, *theta),
            Model::DirectN {
                omega1,
                omega_sources,
                gamma_sources,
            } => direct_model_n(*omega1, omega_sources, gamma_sources),
            Model::IndirectN {
                omega_target,
                omega_sources,
                gamma_sources,
                theta_sources,
            } => indirect_model_n(*omega_target, omega_sources, gamma_sources, theta_sources),
            Model::TransferredN {
                omega0,
                omega1,
                omega_sources,
                gamma_sources,
                theta,
            } => transferred_model_n(*omega0, *omega1, omega_sources, gamma_sources, *theta),
            Model::Xyz {
                omega1,
                omega2,
                gamma_x,
                gamma_y,
                gamma_z,
            } => xyz_chain_model(*omega1, *omega2, *gamma_x, *gamma_y, *gamma_z),
        }
    }

    pub fn n_sites(&self) -> usize {
        match self {
            Model::Direct { .. } | Model::Indirect { .. } | Model::Xyz { .. } => 2,
            Model::Transferred { .. } => 3,
            Model::DirectN { omega_sources, .. } | Model::IndirectN { omega_sources, .. } => omega_sources.len() + 1,
            Model::TransferredN { omega_sources, .. } => omega_sources.len() + 2,
        }
    }

    /// Largest absolute frequency or coupling of the model.
    pub fn energy_scale(&self) -> f64 {
        let vals: Vec<f64> = match self {
            Model::Direct { omega1, omega2, gamma } => vec![*omega1, *omega2, *gamma],
            Model::Indirect {
                omega1,
                omega2,
                gamma,
                theta,
            } => vec![*omega1, *omega2, *gamma, *theta],
            Model::Transferred {
                omega0,
                omega1,
                omega2,
                gamma,
                theta,
            } => {
                vec![*omega0, *omega1, *omega2, *gamma, *theta]
            }
            Model::DirectN {
                omega1,
                omega_sources,
                gamma_sources,
            } => std::iter::once(*omega1)
                .chain(omega_sources.iter().copied())
                .chain(gamma_sources.iter().copied())
                .collect(),
            Model::IndirectN {
                omega_target,
                omega_sources,
                gamma_sources,
                theta_sources,
            } => std::iter::once(*omega_target)
                .chain(omega_sources.iter().copied())
                .chain(gamma_sources.iter().copied())
                .chain(theta_sources.iter().copied())
                .collect(),
            Model::TransferredN {
                omega0,
                omega1,
                omega_sources,
                gamma_sources,
                theta,
            } => [*omega0, *omega1, *theta]
                .into_iter()
                .chain(omega_sources.iter().copied())
                .chain(gamma_sources.iter().copied())
                .collect(),
            Model::Xyz {
                omega1,
                omega2,
                gamma_x,
                gamma_y,
                gamma_z,
            } => {
                vec![*omega1, *omega2, *gamma_x, *gamma_y, *gamma_z]
            }
        };
        vals.into_iter().map(f64::abs).fold(0.0, f64::max)
    }

    /// Identical-source N-models: `n` sources with the same parameters.
    pub fn direct_n_uniform(omega1: f64, n: usize, omega_src: f64, gamma: f64) -> Self {
        Model::DirectN {
            omega1,
            omega_sources: vec![omega_src; n],
            gamma_sources: vec![gamma; n],
        }
    }

    pub fn indirect_n_uniform(omega_target: f64, n: usize, omega_src: f64, gamma: f64, theta: f64) -> Self {
        Model::IndirectN {
            omega_target,
            omega_sources: vec![omega_src; n],
            gamma_sources: vec![gamma; n],
            theta_sources: vec![theta; n],
        }
    }

    pub fn transferred_n_uniform(omega0: f64, omega1: f64, n: usize, omega_src: f64, gamma: f64, theta: f64) -> Self {
        Model::TransferredN {
            omega0,
            omega1,
            omega_sources: vec![omega_src; n],
            gamma_sources: vec![gamma; n],
            theta,
        }
    }
}
