//! Flat `key = value` configuration: link parameters plus experiment settings.

use std::fs;
use std::path::Path;

use crate::channel::LinkConfig;
use crate::detector::default_epsilon_grid;
use crate::distfit::Family;
use crate::error::Error;
use crate::harness::{EpsilonPolicy, HistogramSpec};

use super::{CliError, ExitKind};

/// Every accepted key with a one-line description, in help order.
pub const CONFIG_KEYS: [(&str, &str); 21] = [
    ("p1", "apriori probability of a 1, in (0, 1) [0.5]"),
    ("level0", "transmit intensity of a 0, duty-cycle units [0]"),
    ("level1", "transmit intensity of a 1, > level0 [50]"),
    ("n_bits", "bits per simulated block [10000]"),
    ("fiber_length_m", "fiber length in meters [2]"),
    ("attenuation_db_per_km", "fiber attenuation in dB/km [0]"),
    ("noise_sigma", "standard deviation of the circuit noise [2]"),
    (
        "fading_depth",
        "depth of the Rayleigh fading, in [0, 1] [0.15]",
    ),
    (
        "scatter_sigma",
        "Rayleigh scale of the scattered-light background [8]",
    ),
    (
        "fading",
        "on | off; off disables fading and background [on]",
    ),
    ("rng_seed", "64-bit seed of the simulation [42]"),
    (
        "epsilon",
        "threshold offset for detect, hist and fixed sweeps [0]",
    ),
    (
        "epsilon_grid",
        "comma-separated epsilon values for sweep-eps and tuning [0,1,...,30]",
    ),
    (
        "epsilon_policy",
        "sweep-sep policy: fixed (uses epsilon) | tuned (uses epsilon_grid) [fixed]",
    ),
    ("trials", "trials per sweep row [50]"),
    (
        "separations",
        "comma-separated ascending level separations [30,40,50,60,70,80]",
    ),
    (
        "p1_list",
        "comma-separated apriori probabilities for sweep-sep [0.5,0.9,0.3]",
    ),
    (
        "bin_width",
        "histogram bin width or auto, auto = range/60 [auto]",
    ),
    ("hist_min", "histogram lower bound or auto [auto]"),
    ("hist_max", "histogram upper bound or auto [auto]"),
    (
        "families",
        "comma-separated candidate families for fit [rayleigh,rician]",
    ),
];

/// Experiment settings that are not part of the link itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub epsilon: f64,
    pub epsilon_grid: Vec<f64>,
    pub tuned: bool,
    pub trials: usize,
    pub separations: Vec<f64>,
    pub p1_list: Vec<f64>,
    pub histogram: HistogramSpec,
    pub families: Vec<Family>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            epsilon: 0.0,
            epsilon_grid: default_epsilon_grid(),
            tuned: false,
            trials: 50,
            separations: vec![30.0, 40.0, 50.0, 60.0, 70.0, 80.0],
            p1_list: vec![0.5, 0.9, 0.3],
            histogram: HistogramSpec::default(),
            families: Family::ALL.to_vec(),
        }
    }
}

impl ExperimentConfig {
    pub fn epsilon_policy(&self) -> EpsilonPolicy {
        if self.tuned {
            EpsilonPolicy::Tuned(self.epsilon_grid.clone())
        } else {
            EpsilonPolicy::Fixed(self.epsilon)
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<bool, CliError> {
        let value = value.trim();
        match key {
            "epsilon" => self.epsilon = parse_one(key, value)?,
            "epsilon_grid" => self.epsilon_grid = parse_list(key, value)?,
            "epsilon_policy" => {
                self.tuned = match value {
                    "fixed" => false,
                    "tuned" => true,
                    _ => return Err(parse_error(key, value)),
                }
            }
            "trials" => self.trials = parse_one(key, value)?,
            "separations" => self.separations = parse_list(key, value)?,
            "p1_list" => self.p1_list = parse_list(key, value)?,
            "bin_width" => self.histogram.bin_width = parse_auto(key, value)?,
            "hist_min" => self.histogram.min = parse_auto(key, value)?,
            "hist_max" => self.histogram.max = parse_auto(key, value)?,
            "families" => self.families = parse_list(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn validate(&self) -> Result<(), CliError> {
        let invalid =
            |key: &str, reason: &str| Err(CliError::from_config(ExitKind::Validation, key, reason));
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return invalid("epsilon", "must be finite and >= 0");
        }
        if self.epsilon_grid.is_empty()
            || self
                .epsilon_grid
                .iter()
                .any(|e| !(*e >= 0.0) || !e.is_finite())
        {
            return invalid(
                "epsilon_grid",
                "must be a nonempty list of finite values >= 0",
            );
        }
        if self.trials == 0 {
            return invalid("trials", "must be >= 1");
        }
        if self.separations.is_empty()
            || self.separations.iter().any(|s| !(*s > 0.0))
            || self.separations.windows(2).any(|w| w[1] <= w[0])
        {
            return invalid(
                "separations",
                "must be a nonempty, positive, strictly ascending list",
            );
        }
        if self.p1_list.is_empty() || self.p1_list.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
            return invalid("p1_list", "must be a nonempty list of values in (0, 1)");
        }
        if let Some(w) = self.histogram.bin_width {
            if !(w > 0.0) || !w.is_finite() {
                return invalid("bin_width", "must be positive");
            }
        }
        if let (Some(lo), Some(hi)) = (self.histogram.min, self.histogram.max) {
            if hi < lo {
                return invalid("hist_max", "must be >= hist_min");
            }
        }
        if self.families.is_empty() {
            return invalid("families", "must not be empty");
        }
        Ok(())
    }
}

/// Link and experiment settings after file values and overrides.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub link: LinkConfig,
    pub experiment: ExperimentConfig,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if self.experiment.set(key, value)? {
            return Ok(());
        }
        self.link
            .set(key, value)
            .map_err(|e| CliError::new(ExitKind::Parse, e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.link
            .validate()
            .map_err(|e| CliError::new(ExitKind::Validation, e.to_string()))?;
        self.experiment.validate()
    }
}

fn parse_error(key: &str, value: &str) -> CliError {
    CliError::from_config(ExitKind::Parse, key, &format!("cannot parse `{value}`"))
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| parse_error(key, value))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse_one(key, v)).collect()
}

fn parse_auto(key: &str, value: &str) -> Result<Option<f64>, CliError> {
    if value == "auto" {
        Ok(None)
    } else {
        parse_one(key, value).map(Some)
    }
}

/// Split one `key = value` line; `None` for blank and comment lines.
fn split_line(line: &str) -> Option<Result<(&str, &str), ()>> {
    let content = line.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return None;
    }
    Some(match content.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(()),
    })
}

/// Apply a config file text to `settings`. Errors carry the line number.
pub fn apply_text(settings: &mut Settings, text: &str, origin: &str) -> Result<(), CliError> {
    for (i, line) in text.lines().enumerate() {
        match split_line(line) {
            None => {}
            Some(Err(())) => {
                return Err(CliError::new(
                    ExitKind::Parse,
                    format!(
                        "{origin}:{}: expected `key = value`, got `{}`",
                        i + 1,
                        line.trim()
                    ),
                ))
            }
            Some(Ok((key, value))) => settings
                .set(key, value)
                .map_err(|e| CliError::new(e.kind, format!("{origin}:{}: {}", i + 1, e.message)))?,
        }
    }
    Ok(())
}

/// Defaults, then the file at `path`, then each `key=value` override in order,
/// then `seed`. The result is validated.
pub fn parse_config(
    path: Option<&Path>,
    overrides: &[String],
    seed: Option<u64>,
) -> Result<Settings, CliError> {
    let mut settings = Settings::default();
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::new(
                ExitKind::File,
                format!("cannot read {}: {e}", path.display()),
            )
        })?;
        apply_text(&mut settings, &text, &path.display().to_string())?;
    }
    for item in overrides {
        match split_line(item) {
            Some(Ok((key, value))) => settings.set(key, value)?,
            _ => {
                return Err(CliError::new(
                    ExitKind::Parse,
                    format!("override `{item}` is not of the form key=value"),
                ))
            }
        }
    }
    if let Some(seed) = seed {
        settings.link.rng_seed = seed;
    }
    settings.validate()?;
    Ok(settings)
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = if e.is_numerical() {
            ExitKind::Numerical
        } else {
            ExitKind::Validation
        };
        CliError::new(kind, e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_text(text: &str, overrides: &[&str]) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        apply_text(&mut s, text, "test")?;
        let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        for o in &overrides {
            let (k, v) = o.split_once('=').unwrap();
            s.set(k, v)?;
        }
        s.validate()?;
        Ok(s)
    }

    #[test]
    fn scenario_file() {
        let s = from_text(
            "# scenario\np1 = 0.5\nlevel0 = 10\nlevel1 = 60\n\nn_bits = 100000\nrng_seed = 42 # seed\n",
            &[],
        )
        .unwrap();
        assert_eq!(s.link.separation(), 50.0);
        assert_eq!(s.link.n_bits, 100_000);
        assert_eq!(s.link.rng_seed, 42);
    }

    #[test]
    fn invariant_violation_names_key() {
        let e = from_text("level0 = 10\nlevel1 = 5\n", &[]).unwrap_err();
        assert_eq!(e.kind, ExitKind::Validation);
        assert!(e.message.contains("level1"));
    }

    #[test]
    fn overrides_apply_after_file() {
        let s = from_text("rng_seed = 42\n", &["rng_seed=7"]).unwrap();
        assert_eq!(s.link.rng_seed, 7);
    }

    #[test]
    fn unknown_key_is_parse_error() {
        let e = from_text("nosie_sigma = 3\n", &[]).unwrap_err();
        assert_eq!(e.kind, ExitKind::Parse);
        assert!(e.message.contains("nosie_sigma"));
        assert_eq!(
            from_text("just words\n", &[]).unwrap_err().kind,
            ExitKind::Parse
        );
        assert_eq!(
            from_text("trials = many\n", &[]).unwrap_err().kind,
            ExitKind::Parse
        );
    }

    #[test]
    fn experiment_keys() {
        let s = from_text(
            "epsilon_grid = 0, 5, 10\nepsilon_policy = tuned\nseparations = 50,70\np1_list = 0.9\n\
             bin_width = 2\nhist_min = auto\nfamilies = rayleigh\ntrials = 3\nepsilon = 4\n",
            &[],
        )
        .unwrap();
        let x = &s.experiment;
        assert_eq!(x.epsilon_grid, vec![0.0, 5.0, 10.0]);
        assert_eq!(
            x.epsilon_policy(),
            EpsilonPolicy::Tuned(vec![0.0, 5.0, 10.0])
        );
        assert_eq!(x.separations, vec![50.0, 70.0]);
        assert_eq!(x.histogram.bin_width, Some(2.0));
        assert_eq!(x.histogram.min, None);
        assert_eq!(x.families, vec![Family::Rayleigh]);
        assert_eq!(x.trials, 3);
        assert_eq!(x.epsilon, 4.0);
    }

    #[test]
    fn experiment_validation() {
        for bad in [
            "trials = 0",
            "separations = 50,40",
            "p1_list = 1.2",
            "epsilon = -1",
            "epsilon_grid = ",
            "bin_width = 0",
        ] {
            assert_eq!(
                from_text(bad, &[]).unwrap_err().kind,
                ExitKind::Validation,
                "{bad}"
            );
        }
    }

    #[test]
    fn every_key_is_settable() {
        let samples = [
            "0.5", "0", "50", "100", "2", "0", "2", "0.15", "8", "on", "1", "0", "0,1", "fixed",
            "1", "50", "0.5", "auto", "auto", "auto", "rician",
        ];
        for ((key, _), value) in CONFIG_KEYS.iter().zip(samples) {
            Settings::default()
                .set(key, value)
                .unwrap_or_else(|e| panic!("{key}: {}", e.message));
        }
        for key in LinkConfig::KEYS {
            assert!(
                CONFIG_KEYS.iter().any(|(k, _)| *k == key),
                "{key} missing from help table"
            );
        }
    }
}
