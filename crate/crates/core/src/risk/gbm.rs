use serde::Serialize;

use super::normal::std_normal_cdf;
use crate::domain::RiskProfile;
use crate::error::{Error, Result};

/// Below this `|μT|` the investment is treated as exactly break-even.
const BREAK_EVEN_EPS: f64 = 1e-10;

/// Log-normal dynamics `dR_t = μ R_t dt + σ R_t dW_t`, `R_0 = L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GbmParams {
    mu: f64,
    sigma: f64,
    #[serde(rename = "T")]
    horizon: f64,
    #[serde(rename = "L")]
    capital: f64,
}

impl GbmParams {
    pub fn new(mu: f64, sigma: f64, horizon: f64, capital: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu must be finite, got {mu}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be > 0, got {sigma}"
            )));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T must be > 0, got {horizon}"
            )));
        }
        if !(capital.is_finite() && capital > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "L must be > 0, got {capital}"
            )));
        }
        Ok(Self {
            mu,
            sigma,
            horizon,
            capital,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn capital(&self) -> f64 {
        self.capital
    }

    /// `E(R_T) − L = L(e^{μT} − 1)`.
    pub fn expected_profit(&self) -> f64 {
        self.capital * (self.mu * self.horizon).exp_m1()
    }
}

/// Closed-form profile of a log-normal terminal value. With
/// `ϑ = (2μ − σ²)T / (2σ√T)`:
///
/// ```text
/// E(R_T − L)^+ = L (e^{μT} Φ(ϑ + σ√T) − Φ(ϑ))
/// E(L − R_T)^+ = L (Φ(−ϑ) − e^{μT} Φ(−ϑ − σ√T))
/// ```
///
/// For strongly negative drift the expected profit can fall below the
/// smallest positive `f64`; that case is reported as [`Error::NotViable`]
/// with `rho = ∞`.
pub fn gbm_closed_form(params: &GbmParams) -> Result<RiskProfile> {
    let GbmParams {
        mu,
        sigma,
        horizon,
        capital,
    } = *params;
    let vol = sigma * horizon.sqrt();
    if (mu * horizon).abs() < BREAK_EVEN_EPS {
        // E(R_T) = L: profit and loss legs coincide
        let leg = capital * (2.0 * std_normal_cdf(0.5 * vol) - 1.0);
        return RiskProfile::new(leg, leg);
    }
    let theta = (mu - 0.5 * sigma * sigma) * horizon / vol;
    let growth = (mu * horizon).exp();
    let e_profit = capital * (growth * std_normal_cdf(theta + vol) - std_normal_cdf(theta));
    let e_loss = capital * (std_normal_cdf(-theta) - growth * std_normal_cdf(-theta - vol));
    if e_profit <= 0.0 && mu < 0.0 {
        return Err(Error::NotViable { rho: f64::INFINITY });
    }
    RiskProfile::new(e_profit, e_loss.max(0.0))
}
