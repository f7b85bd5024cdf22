//! Named parameter bundles for reproducing the reference figures.
//!
//! Names use Greek letters (`fig1a-γ0.5-ω2_1.3`); `g`/`w` are accepted as
//! ASCII spellings (`fig1a-g0.5-w2_1.3`). The temperature range is not part
//! of the bundles: every preset sweeps 60 log-spaced points over
//! [1e-2, 1e1].

use super::SweepConfig;
use crate::models::Model;
use crate::{Error, Result};

const T_MIN: f64 = 1e-2;
const T_MAX: f64 = 1e1;
const POINTS: usize = 60;

const FIG1_GAMMAS: [f64; 2] = [0.1, 0.5];
const FIG1_FREQS: [f64; 2] = [0.5, 1.3];

fn fig1(panel: char, gamma: f64, freq: f64) -> Model {
    match panel {
        'a' => Model::Direct {
            omega1: 1.0,
            omega2: freq,
            gamma,
        },
        'b' => Model::Indirect {
            omega1: freq,
            omega2: 1.0,
            gamma,
            theta: gamma,
        },
        _ => Model::Transferred {
            omega0: 1.0,
            omega1: freq,
            omega2: 1.3,
            gamma,
            theta: gamma,
        },
    }
}

fn catalog() -> Vec<(String, Model)> {
    let mut out = Vec::new();
    for panel in ['a', 'b', 'c'] {
        let freq_name = if panel == 'a' { "ω2" } else { "ω1" };
        for g in FIG1_GAMMAS {
            for w in FIG1_FREQS {
                out.push((format!("fig1{panel}-γ{g}-{freq_name}_{w}"), fig1(panel, g, w)));
            }
        }
    }
    for n in [1, 2, 4] {
        out.push((format!("afig2a-N{n}"), Model::direct_n_uniform(1.0, n, 1.3, 0.5)));
    }
    for n in [1, 4, 8] {
        out.push((format!("afig2b-N{n}"), Model::indirect_n_uniform(1.0, n, 0.5, 0.5, 0.5)));
    }
    for n in [1, 2, 4, 7] {
        out.push((
            format!("afig3-N{n}"),
            Model::transferred_n_uniform(1.0, 0.5, n, 1.3, 0.5, 0.5),
        ));
    }
    out
}

fn normalize(name: &str) -> String {
    name.trim().replace('γ', "g").replace('ω', "w").to_ascii_lowercase()
}

pub fn preset_names() -> Vec<String> {
    catalog().into_iter().map(|(n, _)| n).collect()
}

pub fn figure_preset(name: &str) -> Result<SweepConfig> {
    let key = normalize(name);
    catalog()
        .into_iter()
        .find(|(n, _)| normalize(n) == key)
        .map(|(_, model)| SweepConfig::log(model, T_MIN, T_MAX, POINTS))
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}
