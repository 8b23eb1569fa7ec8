//! Synthetic transition arrays from random Hamiltonians.
//!
//! Lower and upper level sets each get a random real symmetric Hamiltonian;
//! a dense Gaussian dipole matrix couples them. After diagonalizing both
//! Hamiltonians, the strength of line `(i, j)` is `(u_iᵀ D v_j)²` and its
//! energy is `λ_j(upper) − λ_i(lower)`.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, EigenDecomposition, SymMatrix};
use crate::rng::RandomStream;

const LOWER_STREAM: u64 = 0;
const UPPER_STREAM: u64 = 1;
const DIPOLE_STREAM: u64 = 2;

/// Off-diagonal law of the Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ensemble {
    /// Off-diagonal `N(0, σ²)`, diagonal `N(0, 2σ²)`.
    Goe,
    /// Off-diagonal mixture `p·N(0, σ1²) + (1−p)·N(0, σ2²)`, diagonal
    /// `N(0, diag_sigma²)`.
    BiGaussian {
        p: f64,
        sigma1: f64,
        sigma2: f64,
        diag_sigma: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoeConfig {
    pub dim_lower: usize,
    pub dim_upper: usize,
    /// Standard deviation of GOE off-diagonal elements (energy units).
    pub sigma_offdiag: f64,
    pub ensemble: Ensemble,
    pub dipole_sigma: f64,
    pub seed: u64,
}

impl GoeConfig {
    pub fn goe(dim_lower: usize, dim_upper: usize, seed: u64) -> Self {
        GoeConfig {
            dim_lower,
            dim_upper,
            sigma_offdiag: 1.0,
            ensemble: Ensemble::Goe,
            dipole_sigma: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim_lower == 0 || self.dim_upper == 0 {
            return Err(Error::param("dim", "dimensions must be at least 1"));
        }
        positive("sigma_offdiag", self.sigma_offdiag)?;
        positive("dipole_sigma", self.dipole_sigma)?;
        if let Ensemble::BiGaussian {
            p,
            sigma1,
            sigma2,
            diag_sigma,
        } = self.ensemble
        {
            check_bigaussian(p, sigma1, sigma2, diag_sigma)?;
        }
        Ok(())
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, "must be positive and finite"))
    }
}

fn check_bigaussian(p: f64, sigma1: f64, sigma2: f64, diag_sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    positive("sigma1", sigma1)?;
    positive("sigma2", sigma2)?;
    positive("diag_sigma", diag_sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub energy: f64,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionArray {
    /// Row-major over `(lower i, upper j)`.
    pub lines: Vec<Line>,
    pub dim_lower: usize,
    pub dim_upper: usize,
    pub total_strength: f64,
    /// `‖D‖_F²` of the dipole matrix; equals `total_strength` up to rounding.
    pub dipole_norm_sq: f64,
}

impl TransitionArray {
    pub fn strengths(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.strength).collect()
    }
}

/// GOE matrix: off-diagonal `N(0, σ²)`, diagonal `N(0, 2σ²)`.
pub fn sample_goe_matrix(
    dim: usize,
    sigma_offdiag: f64,
    stream: &mut RandomStream,
) -> Result<SymMatrix> {
    positive("sigma_offdiag", sigma_offdiag)?;
    let mut h = SymMatrix::zeros(dim);
    for i in 0..dim {
        h.set(i, i, stream.normal(0.0, SQRT_2 * sigma_offdiag));
        for j in (i + 1)..dim {
            h.set(i, j, stream.normal(0.0, sigma_offdiag));
        }
    }
    Ok(h)
}

/// Symmetric matrix with bi-Gaussian off-diagonal elements.
pub fn sample_bigaussian_matrix(
    dim: usize,
    p: f64,
    sigma1: f64,
    sigma2: f64,
    diag_sigma: f64,
    stream: &mut RandomStream,
) -> Result<SymMatrix> {
    check_bigaussian(p, sigma1, sigma2, diag_sigma)?;
    let mut h = SymMatrix::zeros(dim);
    for i in 0..dim {
        h.set(i, i, stream.normal(0.0, diag_sigma));
        for j in (i + 1)..dim {
            let sigma = if stream.uniform() < p { sigma1 } else { sigma2 };
            h.set(i, j, stream.normal(0.0, sigma));
        }
    }
    Ok(h)
}

fn sample_hamiltonian(
    config: &GoeConfig,
    dim: usize,
    stream: &mut RandomStream,
) -> Result<SymMatrix> {
    match config.ensemble {
        Ensemble::Goe => sample_goe_matrix(dim, config.sigma_offdiag, stream),
        Ensemble::BiGaussian {
            p,
            sigma1,
            sigma2,
            diag_sigma,
        } => sample_bigaussian_matrix(dim, p, sigma1, sigma2, diag_sigma, stream),
    }
}

/// Builds the full `dim_lower × dim_upper` transition array for `config`.
///
/// Lower Hamiltonian, upper Hamiltonian and dipole matrix draw from
/// substreams 0, 1 and 2 of the config seed.
pub fn simulate_transition_array(config: &GoeConfig) -> Result<TransitionArray> {
    config.validate()?;
    let root = RandomStream::new(config.seed);
    let (nl, nu) = (config.dim_lower, config.dim_upper);

    let lower = symmetric_eigen(&sample_hamiltonian(
        config,
        nl,
        &mut root.split(LOWER_STREAM),
    )?)?;
    let upper = symmetric_eigen(&sample_hamiltonian(
        config,
        nu,
        &mut root.split(UPPER_STREAM),
    )?)?;

    let mut dipole_stream = root.split(DIPOLE_STREAM);
    let dipole: Vec<f64> = (0..nl * nu)
        .map(|_| dipole_stream.normal(0.0, config.dipole_sigma))
        .collect();
    let dipole_norm_sq = dipole.iter().map(|d| d * d).sum();

    let amplitudes = rotate_dipole(&dipole, &lower, &upper);
    let mut lines = Vec::with_capacity(nl * nu);
    for i in 0..nl {
        for j in 0..nu {
            let a = amplitudes[i * nu + j];
            lines.push(Line {
                energy: upper.eigenvalues[j] - lower.eigenvalues[i],
                strength: a * a,
            });
        }
    }
    let total_strength = lines.iter().map(|l| l.strength).sum();
    Ok(TransitionArray {
        lines,
        dim_lower: nl,
        dim_upper: nu,
        total_strength,
        dipole_norm_sq,
    })
}

/// `Uᵀ D V`, row-major `dim_lower × dim_upper`.
fn rotate_dipole(d: &[f64], lower: &EigenDecomposition, upper: &EigenDecomposition) -> Vec<f64> {
    let (nl, nu) = (lower.dim(), upper.dim());
    // D V
    let v = upper.eigenvectors();
    let mut dv = alloc::vec![0.0; nl * nu];
    for r in 0..nl {
        let out = &mut dv[r * nu..(r + 1) * nu];
        for k in 0..nu {
            let dk = d[r * nu + k];
            for (o, &vk) in out.iter_mut().zip(&v[k * nu..(k + 1) * nu]) {
                *o += dk * vk;
            }
        }
    }
    // Uᵀ (D V)
    let u = lower.eigenvectors();
    let mut result = alloc::vec![0.0; nl * nu];
    for r in 0..nl {
        for i in 0..nl {
            let uri = u[r * nl + i];
            let out = &mut result[i * nu..(i + 1) * nu];
            for (o, &x) in out.iter_mut().zip(&dv[r * nu..(r + 1) * nu]) {
                *o += uri * x;
            }
        }
    }
    result
}
