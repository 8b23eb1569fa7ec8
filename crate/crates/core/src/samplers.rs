//! Reference strength distributions.
//!
//! Every sampler draws from a caller-owned [`RandomStream`] and only emits
//! positive finite values: a draw that is exactly zero (or under/overflows)
//! is rejected and redrawn.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorLaw {
    /// Uniform on `(0, 1)`.
    UniformUnit,
    /// `exp(N(0, 1))`.
    LogNormalUnit,
    /// `|N(0, 1)|`, the magnitude law of a Gaussian matrix element.
    HalfNormal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrengthLaw {
    PorterThomas {
        mean: f64,
    },
    Exponential {
        mean: f64,
    },
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    Cascade {
        n_factors: usize,
        factor_law: FactorLaw,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthSample {
    pub law: StrengthLaw,
    pub values: Vec<f64>,
}

impl StrengthSample {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Population variance (divides by `n`).
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.values.len() as f64
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, "must be positive and finite"))
    }
}

fn draw_positive(mut draw: impl FnMut() -> f64) -> Result<f64> {
    for _ in 0..MAX_REDRAWS {
        let v = draw();
        if v.is_finite() && v > 0.0 {
            return Ok(v);
        }
    }
    Err(Error::DegenerateSample {
        attempts: MAX_REDRAWS,
    })
}

fn collect(n: usize, mut draw: impl FnMut() -> f64) -> Result<Vec<f64>> {
    (0..n).map(|_| draw_positive(&mut draw)).collect()
}

/// Porter-Thomas density `L / sqrt(2π ⟨S⟩ s) · exp(−s / (2⟨S⟩))`: the
/// chi-square(1) law of a squared Gaussian amplitude, scaled to `L` lines.
pub fn porter_thomas_density(s: f64, mean_strength: f64, line_count: u64) -> Result<f64> {
    positive("s", s)?;
    positive("mean_strength", mean_strength)?;
    if line_count == 0 {
        return Err(Error::param("line_count", "must be at least 1"));
    }
    Ok(line_count as f64 / libm::sqrt(2.0 * PI * mean_strength * s)
        * libm::exp(-s / (2.0 * mean_strength)))
}

/// Porter-Thomas CDF, `erf(sqrt(s / (2⟨S⟩)))`.
pub fn porter_thomas_cdf(s: f64, mean_strength: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        libm::erf(libm::sqrt(s / (2.0 * mean_strength)))
    }
}

/// `⟨S⟩ · Z²` with `Z` standard normal.
pub fn sample_porter_thomas(
    mean_strength: f64,
    n: usize,
    stream: &mut RandomStream,
) -> Result<StrengthSample> {
    positive("mean_strength", mean_strength)?;
    let values = collect(n, || {
        let z = stream.standard_normal();
        mean_strength * z * z
    })?;
    Ok(StrengthSample {
        law: StrengthLaw::PorterThomas {
            mean: mean_strength,
        },
        values,
    })
}

/// Inverse-CDF exponential sampling, `−mean · ln U`.
pub fn sample_exponential(
    mean: f64,
    n: usize,
    stream: &mut RandomStream,
) -> Result<StrengthSample> {
    positive("mean", mean)?;
    let values = collect(n, || -mean * libm::log(stream.uniform_open()))?;
    Ok(StrengthSample {
        law: StrengthLaw::Exponential { mean },
        values,
    })
}

/// `exp(N(mu, sigma²))`; `sigma` is in natural-log units.
pub fn sample_lognormal(
    mu: f64,
    sigma: f64,
    n: usize,
    stream: &mut RandomStream,
) -> Result<StrengthSample> {
    if !mu.is_finite() {
        return Err(Error::param("mu", "must be finite"));
    }
    positive("sigma", sigma)?;
    let values = collect(n, || libm::exp(stream.normal(mu, sigma)))?;
    Ok(StrengthSample {
        law: StrengthLaw::LogNormal { mu, sigma },
        values,
    })
}

fn draw_factor(law: FactorLaw, stream: &mut RandomStream) -> f64 {
    match law {
        FactorLaw::UniformUnit => stream.uniform_open(),
        FactorLaw::LogNormalUnit => libm::exp(stream.standard_normal()),
        FactorLaw::HalfNormal => loop {
            let z = stream.standard_normal().abs();
            if z > 0.0 {
                break z;
            }
        },
    }
}

/// Products of `n_factors` independent positive factors.
pub fn multiplicative_cascade(
    n_factors: usize,
    n_samples: usize,
    factor_law: FactorLaw,
    stream: &mut RandomStream,
) -> Result<StrengthSample> {
    if n_factors == 0 {
        return Err(Error::param("n_factors", "must be at least 1"));
    }
    let values = collect(n_samples, || {
        (0..n_factors).fold(1.0, |acc, _| acc * draw_factor(factor_law, stream))
    })?;
    Ok(StrengthSample {
        law: StrengthLaw::Cascade {
            n_factors,
            factor_law,
        },
        values,
    })
}

/// Draw `n` values from `law`.
pub fn sample(law: StrengthLaw, n: usize, stream: &mut RandomStream) -> Result<StrengthSample> {
    match law {
        StrengthLaw::PorterThomas { mean } => sample_porter_thomas(mean, n, stream),
        StrengthLaw::Exponential { mean } => sample_exponential(mean, n, stream),
        StrengthLaw::LogNormal { mu, sigma } => sample_lognormal(mu, sigma, n, stream),
        StrengthLaw::Cascade {
            n_factors,
            factor_law,
        } => multiplicative_cascade(n_factors, n, factor_law, stream),
    }
}
