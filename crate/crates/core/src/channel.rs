//! Seeded simulation of the optical link: bit source, ASK intensity
//! modulation and a Rayleigh-scattering fiber.
//!
//! Each transmitted level `x` is received as
//!
//! ```text
//! y = max(0, a * (x * (1 - d + d * r) + b) + n)
//! ```
//!
//! - `a = 10^(-attenuation_db_per_km * fiber_length_m / 1000 / 10)` is the fiber gain,
//! - `r` is unit-mean Rayleigh fading (scale `sqrt(2/pi)`) applied with depth `d`,
//! - `b ~ Rayleigh(scatter_sigma)` is scattered light reaching the detector
//!   independently of the symbol,
//! - `n ~ N(0, noise_sigma^2)` is circuit noise,
//! - the receiver output is floored at zero.
//!
//! With `fading = off` both scattering draws are disabled (`r = 1`, `b = 0`),
//! which leaves attenuation and noise exactly computable.
//!
//! Everything is a pure function of [`LinkConfig`]: the bit source and the
//! channel draw from two independent ChaCha8 streams of `rng_seed`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::distfit::SampleVector;
use crate::error::{Error, Result};

/// Scale of the unit-mean Rayleigh fading variable: `sqrt(2/pi)`.
pub const UNIT_MEAN_RAYLEIGH_SCALE: f64 = 0.797_884_560_802_865_4;

const BITS_STREAM: u64 = 0;
const CHANNEL_STREAM: u64 = 1;

/// One simulated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    /// Apriori probability of a `1`; `p0 = 1 - p1`.
    pub p1: f64,
    /// Transmit intensity of a `0` (duty-cycle units, 0..255).
    pub level0: f64,
    /// Transmit intensity of a `1`.
    pub level1: f64,
    pub n_bits: usize,
    pub fiber_length_m: f64,
    pub attenuation_db_per_km: f64,
    /// Standard deviation of the additive circuit noise.
    pub noise_sigma: f64,
    /// Depth `d` of the multiplicative fading, in `[0, 1]`.
    pub fading_depth: f64,
    /// Rayleigh scale of the scattered-light background.
    pub scatter_sigma: f64,
    /// `false` replaces the fading draw by 1 and drops the scatter background.
    pub fading: bool,
    pub rng_seed: u64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            p1: 0.5,
            level0: 0.0,
            level1: 50.0,
            n_bits: 10_000,
            fiber_length_m: 2.0,
            attenuation_db_per_km: 0.0,
            noise_sigma: 2.0,
            fading_depth: 0.15,
            scatter_sigma: 8.0,
            fading: true,
            rng_seed: 42,
        }
    }
}

impl LinkConfig {
    /// Keys of the flat `key = value` representation, in canonical order.
    pub const KEYS: [&'static str; 11] = [
        "p1",
        "level0",
        "level1",
        "n_bits",
        "fiber_length_m",
        "attenuation_db_per_km",
        "noise_sigma",
        "fading_depth",
        "scatter_sigma",
        "fading",
        "rng_seed",
    ];

    pub fn separation(&self) -> f64 {
        self.level1 - self.level0
    }

    /// Same config with `level1 = level0 + separation`.
    pub fn with_separation(&self, separation: f64) -> Self {
        LinkConfig {
            level1: self.level0 + separation,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn nonneg(key: &str, v: f64) -> Result<()> {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(
                    key,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
            Ok(())
        }
        if !(self.p1 > 0.0 && self.p1 < 1.0) {
            return Err(Error::config(
                "p1",
                format!("must lie in (0, 1), got {}", self.p1),
            ));
        }
        nonneg("level0", self.level0)?;
        if !(self.level1 > self.level0) || !self.level1.is_finite() {
            return Err(Error::config(
                "level1",
                format!("must exceed level0 = {}, got {}", self.level0, self.level1),
            ));
        }
        if self.n_bits == 0 {
            return Err(Error::config("n_bits", "must be >= 1"));
        }
        nonneg("fiber_length_m", self.fiber_length_m)?;
        nonneg("attenuation_db_per_km", self.attenuation_db_per_km)?;
        nonneg("noise_sigma", self.noise_sigma)?;
        if !(0.0..=1.0).contains(&self.fading_depth) {
            return Err(Error::config(
                "fading_depth",
                format!("must lie in [0, 1], got {}", self.fading_depth),
            ));
        }
        nonneg("scatter_sigma", self.scatter_sigma)?;
        Ok(())
    }

    /// Set one field from its textual value. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
        }
        match key {
            "p1" => self.p1 = num(key, value)?,
            "level0" => self.level0 = num(key, value)?,
            "level1" => self.level1 = num(key, value)?,
            "n_bits" => self.n_bits = num(key, value)?,
            "fiber_length_m" => self.fiber_length_m = num(key, value)?,
            "attenuation_db_per_km" => self.attenuation_db_per_km = num(key, value)?,
            "noise_sigma" => self.noise_sigma = num(key, value)?,
            "fading_depth" => self.fading_depth = num(key, value)?,
            "scatter_sigma" => self.scatter_sigma = num(key, value)?,
            "fading" => {
                self.fading = match value.trim() {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    other => {
                        return Err(Error::config(
                            key,
                            format!("expected on/off, got `{other}`"),
                        ))
                    }
                }
            }
            "rng_seed" => self.rng_seed = num(key, value)?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// `(key, value)` pairs in [`LinkConfig::KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("p1", self.p1.to_string()),
            ("level0", self.level0.to_string()),
            ("level1", self.level1.to_string()),
            ("n_bits", self.n_bits.to_string()),
            ("fiber_length_m", self.fiber_length_m.to_string()),
            (
                "attenuation_db_per_km",
                self.attenuation_db_per_km.to_string(),
            ),
            ("noise_sigma", self.noise_sigma.to_string()),
            ("fading_depth", self.fading_depth.to_string()),
            ("scatter_sigma", self.scatter_sigma.to_string()),
            ("fading", if self.fading { "on" } else { "off" }.to_string()),
            ("rng_seed", self.rng_seed.to_string()),
        ]
    }

    /// Linear power gain of the fiber.
    pub fn attenuation_gain(&self) -> f64 {
        let loss_db = self.attenuation_db_per_km * self.fiber_length_m / 1000.0;
        10f64.powf(-loss_db / 10.0)
    }
}

/// Ground truth and observations of one simulated block.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionRecord {
    pub bits: Vec<bool>,
    pub tx_levels: Vec<f64>,
    pub rx_samples: SampleVector,
}

/// ChaCha8 generator for `seed`, positioned on an independent `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn generate_bits<R: Rng + ?Sized>(p1: f64, n: usize, rng: &mut R) -> Result<Vec<bool>> {
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(Error::domain(format!("p1 must lie in (0, 1), got {p1}")));
    }
    Ok((0..n).map(|_| rng.random::<f64>() < p1).collect())
}

pub fn modulate(bits: &[bool], level0: f64, level1: f64) -> Result<Vec<f64>> {
    if !(level0 >= 0.0) || !(level1 > level0) {
        return Err(Error::domain(format!(
            "need 0 <= level0 < level1, got level0={level0}, level1={level1}"
        )));
    }
    Ok(bits
        .iter()
        .map(|&b| if b { level1 } else { level0 })
        .collect())
}

fn rayleigh_draw<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    // inverse CDF; 1 - U lies in (0, 1]
    let u: f64 = rng.random();
    scale * (-2.0 * (1.0 - u).ln()).sqrt()
}

pub fn propagate<R: Rng + ?Sized>(
    tx_levels: &[f64],
    config: &LinkConfig,
    rng: &mut R,
) -> Result<SampleVector> {
    config.validate()?;
    let gain = config.attenuation_gain();
    let depth = config.fading_depth;
    let with_scatter = config.fading && config.scatter_sigma > 0.0;
    let with_noise = config.noise_sigma > 0.0;

    let rx = tx_levels
        .iter()
        .map(|&x| {
            let faded = if config.fading {
                let r = rayleigh_draw(UNIT_MEAN_RAYLEIGH_SCALE, rng);
                x * (1.0 - depth + depth * r)
            } else {
                x
            };
            let background = if with_scatter {
                rayleigh_draw(config.scatter_sigma, rng)
            } else {
                0.0
            };
            let noise = if with_noise {
                config.noise_sigma * rng.sample::<f64, _>(StandardNormal)
            } else {
                0.0
            };
            (gain * (faded + background) + noise).max(0.0)
        })
        .collect();
    SampleVector::new(rx)
}

/// Run the whole chain for one config.
pub fn transmit(config: &LinkConfig) -> Result<TransmissionRecord> {
    config.validate()?;
    let mut bit_rng = stream_rng(config.rng_seed, BITS_STREAM);
    let mut channel_rng = stream_rng(config.rng_seed, CHANNEL_STREAM);
    let bits = generate_bits(config.p1, config.n_bits, &mut bit_rng)?;
    let tx_levels = modulate(&bits, config.level0, config.level1)?;
    let rx_samples = propagate(&tx_levels, config, &mut channel_rng)?;
    Ok(TransmissionRecord {
        bits,
        tx_levels,
        rx_samples,
    })
}
