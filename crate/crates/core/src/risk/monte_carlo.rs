//! Seeded Monte Carlo estimation of a risk profile.
//!
//! Paths are split into fixed-size chunks. Chunk `i` draws from a ChaCha
//! stream keyed by `(seed, i)`, chunks run in parallel, and their moments are
//! merged in chunk order, so the estimate depends only on
//! `(model, seed, n_paths, chunk_size)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moments::Moments;
use super::{GbmParams, TwoPointScenario};
use crate::domain::RiskProfile;
use crate::error::{Error, Result};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    n_paths: u64,
    seed: u64,
    chunk_size: u64,
}

impl McConfig {
    pub fn new(n_paths: u64, seed: u64) -> Result<Self> {
        Self::with_chunk_size(n_paths, seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(n_paths: u64, seed: u64, chunk_size: u64) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::InvalidParameter("need at least one path".into()));
        }
        if chunk_size == 0 {
            return Err(Error::InvalidParameter(
                "chunk size must be positive".into(),
            ));
        }
        Ok(Self {
            n_paths,
            seed,
            chunk_size,
        })
    }

    pub fn n_paths(&self) -> u64 {
        self.n_paths
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chunk_size(&self) -> u64 {
        self.chunk_size
    }
}

/// Draws one terminal value `R_T`. Implement this to plug in another asset
/// model.
pub trait TerminalSampler: Sync {
    /// Initial capital `L`.
    fn capital(&self) -> f64;

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64;
}

impl TerminalSampler for GbmParams {
    fn capital(&self) -> f64 {
        GbmParams::capital(self)
    }

    /// Exact terminal draw `L exp((μ − σ²/2)T + σ√T Z)`.
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let drift = (self.mu() - 0.5 * self.sigma() * self.sigma()) * self.horizon();
        GbmParams::capital(self) * (drift + self.sigma() * self.horizon().sqrt() * z).exp()
    }
}

impl TerminalSampler for TwoPointScenario {
    fn capital(&self) -> f64 {
        TwoPointScenario::capital(self)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        if rng.gen::<f64>() < self.beta() {
            self.r_plus()
        } else {
            self.r_minus()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AssetModel {
    Gbm(GbmParams),
    TwoPoint(TwoPointScenario),
}

impl AssetModel {
    fn sampler(&self) -> &dyn TerminalSampler {
        match self {
            AssetModel::Gbm(g) => g,
            AssetModel::TwoPoint(s) => s,
        }
    }
}

pub fn monte_carlo_profile(model: &AssetModel, cfg: &McConfig) -> Result<RiskProfile> {
    monte_carlo_with(model.sampler(), cfg)
}

pub fn monte_carlo_with(sampler: &dyn TerminalSampler, cfg: &McConfig) -> Result<RiskProfile> {
    let chunks = cfg.n_paths.div_ceil(cfg.chunk_size);
    let capital = sampler.capital();
    let partials: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i);
            let len = cfg.chunk_size.min(cfg.n_paths - i * cfg.chunk_size);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push_terminal(sampler.draw(&mut rng), capital);
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for m in &partials {
        total.merge(m);
    }
    total.into_profile()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::gbm_closed_form;

    #[test]
    fn constant_model_is_exact() {
        let sure = TwoPointScenario::new(1.0, 120.0, 100.0, 100.0).unwrap();
        let p = monte_carlo_profile(
            &AssetModel::TwoPoint(sure),
            &McConfig::new(10_000, 3).unwrap(),
        )
        .unwrap();
        assert_eq!(p.e_profit(), 20.0);
        assert_eq!(p.e_loss(), 0.0);
        let se = p.std_errors().unwrap();
        assert_eq!((se.profit, se.loss, se.rho), (0.0, 0.0, 0.0));
    }

    #[test]
    fn deterministic_per_seed_and_independent_of_threads() {
        let g = AssetModel::Gbm(GbmParams::new(0.1, 0.2, 1.0, 100.0).unwrap());
        let cfg = McConfig::with_chunk_size(50_000, 42, 4096).unwrap();
        let a = monte_carlo_profile(&g, &cfg).unwrap();
        let b = monte_carlo_profile(&g, &cfg).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = single.install(|| monte_carlo_profile(&g, &cfg).unwrap());
        assert_eq!(a, c);
        let other =
            monte_carlo_profile(&g, &McConfig::with_chunk_size(50_000, 43, 4096).unwrap()).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn gbm_estimate_near_closed_form() {
        let params = GbmParams::new(0.1, 0.2, 1.0, 100.0).unwrap();
        let exact = gbm_closed_form(&params).unwrap();
        let est = monte_carlo_profile(
            &AssetModel::Gbm(params),
            &McConfig::new(200_000, 7).unwrap(),
        )
        .unwrap();
        let se = est.std_errors().unwrap();
        assert!((est.rho() - exact.rho()).abs() < 4.0 * se.rho);
        assert!((est.delta() - exact.delta()).abs() < 4.0 * se.delta);
    }

    #[test]
    fn zero_paths_rejected() {
        assert!(McConfig::new(0, 1).is_err());
        assert!(McConfig::with_chunk_size(10, 1, 0).is_err());
    }
}
