//! Sweep configuration and the plain-text `key = value` format.
//!
//! Recognised keys: `model`, `omega0`, `omega1`, `omega2`, `omega-src`,
//! `n-sources`, `gamma`, `theta`, `gamma-x`, `gamma-y`, `gamma-z`, `tmin`,
//! `tmax`, `points`, `log`, `sites`. For N-source models `omega1` is the
//! target frequency of `indirect-n` and the mediator frequency of
//! `transferred-n`; `omega-src`, `gamma` and (for `indirect-n`) `theta`
//! accept either one value or a comma list of `n-sources` values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::models::{Model, ModelTag};
use crate::{Error, Result};

pub const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: Model,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// `None` means every site.
    pub sites: Option<Vec<usize>>,
}

impl SweepConfig {
    pub fn log(model: Model, t_min: f64, t_max: f64, points: usize) -> Self {
        Self {
            model,
            t_min,
            t_max,
            points,
            spacing: Spacing::Log,
            sites: None,
        }
    }

    pub fn linear(model: Model, t_min: f64, t_max: f64, points: usize) -> Self {
        Self {
            spacing: Spacing::Linear,
            ..Self::log(model, t_min, t_max, points)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0) || !self.t_max.is_finite() || !(self.t_min < self.t_max) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < tmin < tmax, got tmin = {}, tmax = {}",
                self.t_min, self.t_max
            )));
        }
        if !(2..=MAX_POINTS).contains(&self.points) {
            return Err(Error::InvalidParameter(format!(
                "points must be in [2, {MAX_POINTS}], got {}",
                self.points
            )));
        }
        let n = self.model.n_sites();
        if let Some(sites) = &self.sites {
            if sites.is_empty() {
                return Err(Error::InvalidParameter("empty site list".into()));
            }
            if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
                return Err(Error::SiteOutOfRange { site: bad, n_sites: n });
            }
        }
        Ok(())
    }

    pub fn sites_or_all(&self) -> Vec<usize> {
        self.sites
            .clone()
            .unwrap_or_else(|| (0..self.model.n_sites()).collect())
    }

    /// Ascending grid with both endpoints hit exactly.
    pub fn temperatures(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.t_min;
                }
                if i == last {
                    return self.t_max;
                }
                let f = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.t_min + f * (self.t_max - self.t_min),
                    Spacing::Log => (self.t_min.ln() + f * (self.t_max.ln() - self.t_min.ln())).exp(),
                }
            })
            .collect()
    }

    /// Parse from the key-value map of a config file and/or flags.
    pub fn from_key_values(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let num = |k: &str| -> Result<f64> {
            let raw = get(k).ok_or_else(|| Error::Config(format!("missing `{k}`")))?;
            raw.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("`{k}` = `{raw}`: {e}")))
        };
        let num_or = |k: &str, default: f64| if get(k).is_some() { num(k) } else { Ok(default) };
        let n_sources = || -> Result<usize> {
            let raw = get("n-sources").ok_or_else(|| Error::Config("missing `n-sources`".into()))?;
            raw.trim()
                .parse::<usize>()
                .map_err(|e| Error::Config(format!("`n-sources` = `{raw}`: {e}")))
        };
        let list = |k: &str, n: usize| -> Result<Vec<f64>> {
            let raw = get(k).ok_or_else(|| Error::Config(format!("missing `{k}`")))?;
            let vals = raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Config(format!("`{k}` = `{raw}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match vals.len() {
                1 => Ok(vec![vals[0]; n]),
                m if m == n => Ok(vals),
                m => Err(Error::Config(format!("`{k}` has {m} values but n-sources is {n}"))),
            }
        };

        let tag: ModelTag = get("model")
            .ok_or_else(|| Error::Config("missing `model`".into()))?
            .parse()?;
        let model = match tag {
            ModelTag::Direct => Model::Direct {
                omega1: num("omega1")?,
                omega2: num("omega2")?,
                gamma: num("gamma")?,
            },
            ModelTag::Indirect => Model::Indirect {
                omega1: num("omega1")?,
                omega2: num("omega2")?,
                gamma: num("gamma")?,
                theta: num("theta")?,
            },
            ModelTag::Transferred => Model::Transferred {
                omega0: num("omega0")?,
                omega1: num("omega1")?,
                omega2: num("omega2")?,
                gamma: num("gamma")?,
                theta: num("theta")?,
            },
            ModelTag::DirectN => {
                let n = n_sources()?;
                Model::DirectN {
                    omega1: num("omega1")?,
                    omega_sources: list("omega-src", n)?,
                    gamma_sources: list("gamma", n)?,
                }
            }
            ModelTag::IndirectN => {
                let n = n_sources()?;
                Model::IndirectN {
                    omega_target: num("omega1")?,
                    omega_sources: list("omega-src", n)?,
                    gamma_sources: list("gamma", n)?,
                    theta_sources: list("theta", n)?,
                }
            }
            ModelTag::TransferredN => {
                let n = n_sources()?;
                Model::TransferredN {
                    omega0: num("omega0")?,
                    omega1: num("omega1")?,
                    omega_sources: list("omega-src", n)?,
                    gamma_sources: list("gamma", n)?,
                    theta: num("theta")?,
                }
            }
            ModelTag::Xyz => Model::Xyz {
                omega1: num("omega1")?,
                omega2: num("omega2")?,
                gamma_x: num_or("gamma-x", 0.0)?,
                gamma_y: num_or("gamma-y", 0.0)?,
                gamma_z: num_or("gamma-z", 0.0)?,
            },
        };

        let spacing = match get("log").map(|s| s.trim().to_ascii_lowercase()) {
            None => Spacing::Log,
            Some(v) if matches!(v.as_str(), "true" | "1" | "yes" | "on") => Spacing::Log,
            Some(v) if matches!(v.as_str(), "false" | "0" | "no" | "off") => Spacing::Linear,
            Some(v) => return Err(Error::Config(format!("`log` must be true or false, got `{v}`"))),
        };
        let points = match get("points") {
            None => 60,
            Some(raw) => raw
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Config(format!("`points` = `{raw}`: {e}")))?,
        };
        let sites = match get("sites") {
            None => None,
            Some(raw) => Some(
                raw.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Config(format!("`sites` = `{raw}`: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let cfg = SweepConfig {
            model,
            t_min: num_or("tmin", 1e-2)?,
            t_max: num_or("tmax", 1e1)?,
            points,
            spacing,
            sites,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Render as config-file text; parsing it back gives the same config.
    pub fn to_key_values(&self) -> String {
        fn join(v: &[f64]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        let mut kv: Vec<(&str, String)> = vec![("model", self.model.tag().to_string())];
        match &self.model {
            Model::Direct { omega1, omega2, gamma } => kv.extend([
                ("omega1", omega1.to_string()),
                ("omega2", omega2.to_string()),
                ("gamma", gamma.to_string()),
            ]),
            Model::Indirect {
                omega1,
                omega2,
                gamma,
                theta,
            } => kv.extend([
                ("omega1", omega1.to_string()),
                ("omega2", omega2.to_string()),
                ("gamma", gamma.to_string()),
                ("theta", theta.to_string()),
            ]),
            Model::Transferred {
                omega0,
                omega1,
                omega2,
                gamma,
                theta,
            } => kv.extend([
                ("omega0", omega0.to_string()),
                ("omega1", omega1.to_string()),
                ("omega2", omega2.to_string()),
                ("gamma", gamma.to_string()),
                ("theta", theta.to_string()),
            ]),
            Model::DirectN {
                omega1,
                omega_sources,
                gamma_sources,
            } => kv.extend([
                ("omega1", omega1.to_string()),
                ("n-sources", omega_sources.len().to_string()),
                ("omega-src", join(omega_sources)),
                ("gamma", join(gamma_sources)),
            ]),
            Model::IndirectN {
                omega_target,
                omega_sources,
                gamma_sources,
                theta_sources,
            } => kv.extend([
                ("omega1", omega_target.to_string()),
                ("n-sources", omega_sources.len().to_string()),
                ("omega-src", join(omega_sources)),
                ("gamma", join(gamma_sources)),
                ("theta", join(theta_sources)),
            ]),
            Model::TransferredN {
                omega0,
                omega1,
                omega_sources,
                gamma_sources,
                theta,
            } => kv.extend([
                ("omega0", omega0.to_string()),
                ("omega1", omega1.to_string()),
                ("n-sources", omega_sources.len().to_string()),
                ("omega-src", join(omega_sources)),
                ("gamma", join(gamma_sources)),
                ("theta", theta.to_string()),
            ]),
            Model::Xyz {
                omega1,
                omega2,
                gamma_x,
                gamma_y,
                gamma_z,
            } => kv.extend([
                ("omega1", omega1.to_string()),
                ("omega2", omega2.to_string()),
                ("gamma-x", gamma_x.to_string()),
                ("gamma-y", gamma_y.to_string()),
                ("gamma-z", gamma_z.to_string()),
            ]),
        }
        kv.extend([
            ("tmin", self.t_min.to_string()),
            ("tmax", self.t_max.to_string()),
            ("points", self.points.to_string()),
            ("log", (self.spacing == Spacing::Log).to_string()),
        ]);
        if let Some(sites) = &self.sites {
            kv.push((
                "sites",
                sites.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
            ));
        }
        let mut out = String::new();
        for (k, v) in kv {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// Parse `key = value` lines. `#` starts a comment; blank lines are skipped;
/// later keys override earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grids_hit_endpoints() {
        let m = Model::Direct {
            omega1: 1.0,
            omega2: 1.3,
            gamma: 0.5,
        };
        let t = SweepConfig::log(m.clone(), 1e-2, 1e1, 4).temperatures();
        assert_eq!(t[0], 1e-2);
        assert_eq!(t[3], 1e1);
        assert!((t[1] - 1e-1).abs() < 1e-15 && (t[2] - 1.0).abs() < 1e-14);
        let t = SweepConfig::linear(m, 1.0, 2.0, 3).temperatures();
        assert_eq!(t, vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn validation() {
        let m = Model::Direct {
            omega1: 1.0,
            omega2: 1.3,
            gamma: 0.5,
        };
        assert!(SweepConfig::log(m.clone(), 1.0, 1.0, 10).validate().is_err());
        assert!(SweepConfig::log(m.clone(), 0.0, 1.0, 10).validate().is_err());
        assert!(SweepConfig::log(m.clone(), 0.1, 1.0, 1).validate().is_err());
        assert!(SweepConfig::log(m.clone(), 0.1, 1.0, MAX_POINTS + 1)
            .validate()
            .is_err());
        assert!(SweepConfig::log(m, 0.1, 1.0, 2).validate().is_ok());
    }

    #[test]
    fn parse_file_text() {
        let text =
            "# fig 1(a)\nmodel = direct\nomega1 = 1   # target\nomega2=1.3\n\ngamma = 0.5\npoints = 5\nlog = false\n";
        let cfg = SweepConfig::from_key_values(&parse_key_values(text).unwrap()).unwrap();
        assert_eq!(
            cfg.model,
            Model::Direct {
                omega1: 1.0,
                omega2: 1.3,
                gamma: 0.5
            }
        );
        assert_eq!(cfg.points, 5);
        assert_eq!(cfg.spacing, Spacing::Linear);
        assert_eq!((cfg.t_min, cfg.t_max), (1e-2, 1e1));
        assert!(parse_key_values("no equals sign").is_err());
        assert!(parse_key_values(" = 3").is_err());
    }

    #[test]
    fn n_source_lists_broadcast() {
        let map = parse_key_values(
            "model = indirect-n\nomega1 = 1\nn-sources = 3\nomega-src = 0.5\ngamma = 0.1,0.2,0.3\ntheta = 0.5",
        )
        .unwrap();
        let cfg = SweepConfig::from_key_values(&map).unwrap();
        match cfg.model {
            Model::IndirectN {
                omega_sources,
                gamma_sources,
                theta_sources,
                ..
            } => {
                assert_eq!(omega_sources, vec![0.5; 3]);
                assert_eq!(gamma_sources, vec![0.1, 0.2, 0.3]);
                assert_eq!(theta_sources, vec![0.5; 3]);
            }
            other => panic!("{other:?}"),
        }
        let bad =
            parse_key_values("model = direct-n\nomega1 = 1\nn-sources = 3\nomega-src = 0.5\ngamma = 0.1,0.2").unwrap();
        assert!(SweepConfig::from_key_values(&bad).is_err());
    }

    #[test]
    fn missing_and_bad_keys() {
        let map = parse_key_values("model = direct\nomega1 = 1\ngamma = 0.5").unwrap();
        assert!(matches!(SweepConfig::from_key_values(&map), Err(Error::Config(_))));
        let map = parse_key_values("model = tight-binding").unwrap();
        assert!(matches!(
            SweepConfig::from_key_values(&map),
            Err(Error::UnknownModel(_))
        ));
        let map = parse_key_values("model = direct\nomega1 = 1\nomega2 = x\ngamma = 0.5").unwrap();
        assert!(SweepConfig::from_key_values(&map).is_err());
    }

    fn arb_model() -> impl Strategy<Value = Model> {
        let f = 0.05f64..3.0;
        let g = -2.0f64..2.0;
        prop_oneof![
            (f.clone(), f.clone(), g.clone()).prop_map(|(omega1, omega2, gamma)| Model::Direct {
                omega1,
                omega2,
                gamma
            }),
            (f.clone(), f.clone(), g.clone(), g.clone()).prop_map(|(omega1, omega2, gamma, theta)| Model::Indirect {
                omega1,
                omega2,
                gamma,
                theta
            }),
            (f.clone(), 1usize..5, f.clone(), g.clone())
                .prop_map(|(w1, n, ws, gm)| Model::direct_n_uniform(w1, n, ws, gm)),
            (f.clone(), f.clone(), 1usize..4, f.clone(), g.clone(), g.clone())
                .prop_map(|(w0, w1, n, ws, gm, th)| Model::transferred_n_uniform(w0, w1, n, ws, gm, th)),
            (f.clone(), f, g.clone(), g.clone(), g).prop_map(|(omega1, omega2, gamma_x, gamma_y, gamma_z)| {
                Model::Xyz {
                    omega1,
                    omega2,
                    gamma_x,
                    gamma_y,
                    gamma_z,
                }
            }),
        ]
    }

    proptest! {
        #[test]
        fn key_value_text_round_trips(model in arb_model(), tmin in 1e-3f64..1.0, span in 1.5f64..1e3, points in 2usize..500, log in any::<bool>()) {
            let mut cfg = SweepConfig::log(model, tmin, tmin * span, points);
            if !log {
                cfg.spacing = Spacing::Linear;
            }
            let back = SweepConfig::from_key_values(&parse_key_values(&cfg.to_key_values()).unwrap()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
