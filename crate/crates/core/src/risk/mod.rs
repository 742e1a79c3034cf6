//! Risk profiles `(E⁺, E⁻, ρ, Δ)` of an investment of `L` returning `R_T`.
//!
//! Producers: the log-normal closed form, a two-outcome scenario, plug-in
//! estimates from observed draws, and seeded Monte Carlo over any sampler.

mod gbm;
mod moments;
mod monte_carlo;
mod normal;

pub use gbm::{gbm_closed_form, GbmParams};
pub use monte_carlo::{
    monte_carlo_profile, monte_carlo_with, AssetModel, McConfig, TerminalSampler,
};
pub use normal::{std_normal_cdf, std_normal_pdf};

use serde::Serialize;

use crate::domain::RiskProfile;
use crate::error::{Error, Result};
use moments::Moments;

/// Revenue `r_plus` with probability `beta`, `r_minus` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointScenario {
    beta: f64,
    r_plus: f64,
    r_minus: f64,
    capital: f64,
}

impl TwoPointScenario {
    pub fn new(beta: f64, r_plus: f64, r_minus: f64, capital: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "success probability must be in (0, 1], got {beta}"
            )));
        }
        if ![r_plus, r_minus, capital].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite revenue or capital".into(),
            ));
        }
        if !(r_minus <= capital && capital < r_plus) {
            return Err(Error::InvalidParameter(format!(
                "need r_minus <= L < r_plus, got {r_minus}, {capital}, {r_plus}"
            )));
        }
        Ok(Self {
            beta,
            r_plus,
            r_minus,
            capital,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    pub fn capital(&self) -> f64 {
        self.capital
    }
}

pub fn two_point_profile(s: &TwoPointScenario) -> Result<RiskProfile> {
    RiskProfile::new(
        s.beta * (s.r_plus - s.capital),
        (1.0 - s.beta) * (s.capital - s.r_minus),
    )
}

/// Observed terminal values `R_T` of an investment of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    draws: Vec<f64>,
    capital: f64,
}

impl EmpiricalSample {
    pub fn new(draws: Vec<f64>, capital: f64) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::InvalidParameter("empty sample".into()));
        }
        if let Some((i, x)) = draws
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
        {
            return Err(Error::InvalidParameter(format!(
                "draw {i} = {x} is not a non-negative number"
            )));
        }
        if !(capital.is_finite() && capital > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "capital must be positive, got {capital}"
            )));
        }
        Ok(Self { draws, capital })
    }

    pub fn draws(&self) -> &[f64] {
        &self.draws
    }

    pub fn capital(&self) -> f64 {
        self.capital
    }
}

/// Parses one draw per line. An optional first line `R_T` is a header;
/// blank lines are skipped; LF and CRLF are both accepted.
pub fn parse_draws(text: &str) -> Result<Vec<f64>> {
    let mut draws = Vec::new();
    let mut seen_data = false;
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !seen_data && draws.is_empty() && line == "R_T" {
            seen_data = true;
            continue;
        }
        seen_data = true;
        let x: f64 = line
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: {line:?} is not a number", no + 1)))?;
        draws.push(x);
    }
    Ok(draws)
}

/// Plug-in estimates with standard errors `s / √n`.
pub fn empirical_profile(sample: &EmpiricalSample) -> Result<RiskProfile> {
    let mut m = Moments::default();
    for &x in &sample.draws {
        m.push_terminal(x, sample.capital);
    }
    m.into_profile()
}
