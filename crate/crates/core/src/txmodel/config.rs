//! Scenario parameters and their flat `key = value` file format.
//!
//! Units are fixed: watts, kilometres, degrees. Lines starting with `#` and
//! blank lines are ignored; absent keys take their default.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};

/// How an SNR in dB maps to the noise variance at Bob and Mallory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrDefinition {
    /// `P_A g_AB / sigma^2`: pre-beamforming SNR at Bob including path loss.
    #[default]
    Received,
    /// `P_A / sigma^2`.
    Transmit,
}

impl fmt::Display for SnrDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrDefinition::Received => "received",
            SnrDefinition::Transmit => "transmit",
        })
    }
}

impl FromStr for SnrDefinition {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "received" => Ok(SnrDefinition::Received),
            "transmit" => Ok(SnrDefinition::Transmit),
            other => Err(format!("expected `received` or `transmit`, got `{other}`")),
        }
    }
}

/// Departure (`t`) and arrival (`r`) angles of the three links, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkAngles {
    pub t_ab: f64,
    pub r_ab: f64,
    pub t_mb: f64,
    pub r_mb: f64,
    pub t_am: f64,
    pub r_am: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkDistances {
    pub ab: f64,
    pub am: f64,
    pub mb: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_a: usize,
    pub n_b: usize,
    pub n_m: usize,
    /// Number of jamming streams at Mallory.
    pub n_j: usize,
    pub p_a_watt: f64,
    pub p_m_watt: f64,
    /// Fraction of Alice's power on the confidential message.
    pub beta1: f64,
    /// Residual self-interference factor at Mallory.
    pub rho: f64,
    pub sigma_b2: f64,
    pub sigma_m2: f64,
    pub angles_deg: LinkAngles,
    pub distances_km: LinkDistances,
    /// Path loss at the 1 km reference distance.
    pub path_loss_alpha: f64,
    pub path_loss_exponent: f64,
    pub spacing_over_wavelength: f64,
    pub snr_definition: SnrDefinition,
    pub rng_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_a: 4,
            n_b: 4,
            n_m: 4,
            n_j: 1,
            p_a_watt: 10.0,
            p_m_watt: 10.0,
            beta1: 0.9,
            rho: 1e-11,
            sigma_b2: 0.1,
            sigma_m2: 0.1,
            angles_deg: LinkAngles {
                t_ab: 90.0,
                r_ab: 90.0,
                t_mb: 45.0,
                r_mb: 45.0,
                t_am: 125.0,
                r_am: 125.0,
            },
            distances_km: LinkDistances {
                ab: 1.0,
                am: 4.0,
                mb: 3.0,
            },
            path_loss_alpha: 1.0,
            path_loss_exponent: 2.0,
            spacing_over_wavelength: 0.5,
            snr_definition: SnrDefinition::Received,
            rng_seed: 1,
        }
    }
}

/// Every recognised key, in file order.
pub const CONFIG_KEYS: &[&str] = &[
    "n_a",
    "n_b",
    "n_m",
    "n_j",
    "p_a_watt",
    "p_m_watt",
    "beta1",
    "rho",
    "sigma_b2",
    "sigma_m2",
    "theta_t_ab_deg",
    "theta_r_ab_deg",
    "theta_t_mb_deg",
    "theta_r_mb_deg",
    "theta_t_am_deg",
    "theta_r_am_deg",
    "d_ab_km",
    "d_am_km",
    "d_mb_km",
    "path_loss_alpha",
    "path_loss_exponent",
    "spacing_over_wavelength",
    "snr_definition",
    "rng_seed",
];

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_a", self.n_a), ("n_b", self.n_b), ("n_m", self.n_m)] {
            if n == 0 {
                return Err(Error::config(name, "must be at least 1"));
            }
        }
        if self.n_j == 0 || self.n_j + 1 > self.n_m {
            return Err(Error::config(
                "n_j",
                format!(
                    "= {} violates N_J in {{1,...,N_M-1}} with N_M = {}",
                    self.n_j, self.n_m
                ),
            ));
        }
        let positive = [
            ("p_a_watt", self.p_a_watt),
            ("sigma_b2", self.sigma_b2),
            ("sigma_m2", self.sigma_m2),
            ("d_ab_km", self.distances_km.ab),
            ("d_am_km", self.distances_km.am),
            ("d_mb_km", self.distances_km.mb),
            ("path_loss_alpha", self.path_loss_alpha),
            ("spacing_over_wavelength", self.spacing_over_wavelength),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("= {v} must be finite and > 0")));
            }
        }
        if !(self.p_m_watt >= 0.0 && self.p_m_watt.is_finite()) {
            return Err(Error::config(
                "p_m_watt",
                format!("= {} must be finite and >= 0", self.p_m_watt),
            ));
        }
        for (name, v) in [("beta1", self.beta1), ("rho", self.rho)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(name, format!("= {v} must lie in [0, 1]")));
            }
        }
        if !self.path_loss_exponent.is_finite() {
            return Err(Error::config("path_loss_exponent", "must be finite"));
        }
        let a = &self.angles_deg;
        for (name, v) in [
            ("theta_t_ab_deg", a.t_ab),
            ("theta_r_ab_deg", a.r_ab),
            ("theta_t_mb_deg", a.t_mb),
            ("theta_r_mb_deg", a.r_mb),
            ("theta_t_am_deg", a.t_am),
            ("theta_r_am_deg", a.r_am),
        ] {
            if !(0.0..=180.0).contains(&v) {
                return Err(Error::config(name, format!("= {v} must lie in [0, 180] degrees")));
            }
        }
        Ok(())
    }

    /// Alice-to-Bob path gain `alpha / d_AB^c`.
    pub fn g_ab(&self) -> f64 {
        self.path_loss_alpha / self.distances_km.ab.powf(self.path_loss_exponent)
    }

    /// Noise variance that realizes `snr_db` under this config's SNR definition.
    pub fn noise_variance_for_snr(&self, snr_db: f64) -> f64 {
        let reference = match self.snr_definition {
            SnrDefinition::Received => self.p_a_watt * self.g_ab(),
            SnrDefinition::Transmit => self.p_a_watt,
        };
        reference / 10f64.powf(snr_db / 10.0)
    }

    /// Copy with `sigma_B^2 = sigma_M^2` set from an SNR in dB.
    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        let noise = self.noise_variance_for_snr(snr_db);
        Self {
            sigma_b2: noise,
            sigma_m2: noise,
            ..self.clone()
        }
    }

    pub fn snr_db(&self) -> f64 {
        let reference = match self.snr_definition {
            SnrDefinition::Received => self.p_a_watt * self.g_ab(),
            SnrDefinition::Transmit => self.p_a_watt,
        };
        10.0 * (reference / self.sigma_b2).log10()
    }

    fn value_of(&self, key: &str) -> String {
        let a = &self.angles_deg;
        let d = &self.distances_km;
        match key {
            "n_a" => self.n_a.to_string(),
            "n_b" => self.n_b.to_string(),
            "n_m" => self.n_m.to_string(),
            "n_j" => self.n_j.to_string(),
            "p_a_watt" => format!("{:?}", self.p_a_watt),
            "p_m_watt" => format!("{:?}", self.p_m_watt),
            "beta1" => format!("{:?}", self.beta1),
            "rho" => format!("{:?}", self.rho),
            "sigma_b2" => format!("{:?}", self.sigma_b2),
            "sigma_m2" => format!("{:?}", self.sigma_m2),
            "theta_t_ab_deg" => format!("{:?}", a.t_ab),
            "theta_r_ab_deg" => format!("{:?}", a.r_ab),
            "theta_t_mb_deg" => format!("{:?}", a.t_mb),
            "theta_r_mb_deg" => format!("{:?}", a.r_mb),
            "theta_t_am_deg" => format!("{:?}", a.t_am),
            "theta_r_am_deg" => format!("{:?}", a.r_am),
            "d_ab_km" => format!("{:?}", d.ab),
            "d_am_km" => format!("{:?}", d.am),
            "d_mb_km" => format!("{:?}", d.mb),
            "path_loss_alpha" => format!("{:?}", self.path_loss_alpha),
            "path_loss_exponent" => format!("{:?}", self.path_loss_exponent),
            "spacing_over_wavelength" => format!("{:?}", self.spacing_over_wavelength),
            "snr_definition" => self.snr_definition.to_string(),
            "rng_seed" => self.rng_seed.to_string(),
            _ => unreachable!("unknown config key {key}"),
        }
    }

    /// `(key, value)` pairs for every parameter, in file order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        CONFIG_KEYS.iter().map(|&k| (k, self.value_of(k))).collect()
    }

    /// Serializes every parameter, one `key = value` per line.
    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// Parses a config file body, filling absent keys from the defaults, and
    /// validates the result.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigParse {
                    line: line_no,
                    key: line.to_string(),
                    message: "expected `key = value`".into(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let parse_err = |message: String| Error::ConfigParse {
                line: line_no,
                key: key.to_string(),
                message,
            };
            let Some(&canonical) = CONFIG_KEYS.iter().find(|&&k| k == key) else {
                return Err(parse_err("unknown key".into()));
            };
            if seen.contains(&canonical) {
                return Err(parse_err("duplicate key".into()));
            }
            seen.push(canonical);
            cfg.set(canonical, value).map_err(parse_err)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse::<T>().map_err(|_| format!("cannot parse `{v}`"))
        }
        let a = &mut self.angles_deg;
        let d = &mut self.distances_km;
        match key {
            "n_a" => self.n_a = num(value)?,
            "n_b" => self.n_b = num(value)?,
            "n_m" => self.n_m = num(value)?,
            "n_j" => self.n_j = num(value)?,
            "p_a_watt" => self.p_a_watt = num(value)?,
            "p_m_watt" => self.p_m_watt = num(value)?,
            "beta1" => self.beta1 = num(value)?,
            "rho" => self.rho = num(value)?,
            "sigma_b2" => self.sigma_b2 = num(value)?,
            "sigma_m2" => self.sigma_m2 = num(value)?,
            "theta_t_ab_deg" => a.t_ab = num(value)?,
            "theta_r_ab_deg" => a.r_ab = num(value)?,
            "theta_t_mb_deg" => a.t_mb = num(value)?,
            "theta_r_mb_deg" => a.r_mb = num(value)?,
            "theta_t_am_deg" => a.t_am = num(value)?,
            "theta_r_am_deg" => a.r_am = num(value)?,
            "d_ab_km" => d.ab = num(value)?,
            "d_am_km" => d.am = num(value)?,
            "d_mb_km" => d.mb = num(value)?,
            "path_loss_alpha" => self.path_loss_alpha = num(value)?,
            "path_loss_exponent" => self.path_loss_exponent = num(value)?,
            "spacing_over_wavelength" => self.spacing_over_wavelength = num(value)?,
            "snr_definition" => self.snr_definition = value.parse()?,
            "rng_seed" => self.rng_seed = num(value)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = ScenarioConfig::from_kv_str("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.p_a_watt, 10.0);
        assert_eq!((cfg.n_a, cfg.n_b, cfg.n_m), (4, 4, 4));
        assert_eq!(cfg.rho, 1e-11);
        assert_eq!(cfg.beta1, 0.9);
        assert_eq!(
            (cfg.angles_deg.t_ab, cfg.angles_deg.t_am, cfg.angles_deg.t_mb),
            (90.0, 125.0, 45.0)
        );
        assert_eq!(
            (cfg.distances_km.ab, cfg.distances_km.am, cfg.distances_km.mb),
            (1.0, 4.0, 3.0)
        );
    }

    #[test]
    fn beta_out_of_range() {
        let err = ScenarioConfig::from_kv_str("beta1 = 1.5").unwrap_err();
        assert!(matches!(&err, Error::Config { field, .. } if field == "beta1"), "{err}");
    }

    #[test]
    fn jamming_streams_bounded_by_array() {
        let err = ScenarioConfig::from_kv_str("n_j = 4\nn_m = 4").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("N_J in {1,...,N_M-1}"), "{msg}");
    }

    #[test]
    fn unknown_key_names_line() {
        let err = ScenarioConfig::from_kv_str("# comment\n\nbogus = 3\n").unwrap_err();
        assert_eq!(
            err,
            Error::ConfigParse {
                line: 3,
                key: "bogus".into(),
                message: "unknown key".into()
            }
        );
        let err = ScenarioConfig::from_kv_str("p_a_watt = ten").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 1, .. }));
        let err = ScenarioConfig::from_kv_str("rho = 0\nrho = 0").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 2, .. }));
    }

    #[test]
    fn comments_and_snr_definition() {
        let cfg =
            ScenarioConfig::from_kv_str("p_m_watt = 0   # jamming off\nsnr_definition = transmit\n")
                .unwrap();
        assert_eq!(cfg.p_m_watt, 0.0);
        assert_eq!(cfg.snr_definition, SnrDefinition::Transmit);
    }

    #[test]
    fn snr_mapping() {
        let cfg = ScenarioConfig::default().with_snr_db(15.0);
        assert!((cfg.sigma_b2 - 10.0 / 10f64.powf(1.5)).abs() < 1e-15);
        assert_eq!(cfg.sigma_b2, cfg.sigma_m2);
        assert!((cfg.snr_db() - 15.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn kv_round_trip(
            p_a in 1e-3f64..1e3,
            p_m in 0.0f64..1e3,
            beta in 0.0f64..=1.0,
            sigma in 1e-6f64..1e2,
            t_ab in 0.0f64..=180.0,
            r_mb in 0.0f64..=180.0,
            seed in any::<u64>(),
            n_m in 2usize..9,
        ) {
            let cfg = ScenarioConfig {
                p_a_watt: p_a,
                p_m_watt: p_m,
                beta1: beta,
                sigma_b2: sigma,
                sigma_m2: sigma * 2.0,
                n_m,
                n_j: n_m - 1,
                angles_deg: LinkAngles { t_ab, r_mb, ..ScenarioConfig::default().angles_deg },
                rng_seed: seed,
                ..ScenarioConfig::default()
            };
            let once = ScenarioConfig::from_kv_str(&cfg.to_kv_string()).unwrap();
            prop_assert_eq!(&once, &cfg);
            let twice = ScenarioConfig::from_kv_str(&once.to_kv_string()).unwrap();
            prop_assert_eq!(twice, once);
        }
    }
}
