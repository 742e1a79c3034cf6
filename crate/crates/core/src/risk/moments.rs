use crate::domain::{RiskProfile, StdErrors};
use crate::error::Result;

/// Running means and co-moments of the per-path profit `(R_T − L)^+` and
/// loss `(L − R_T)^+`. Welford updates, Chan merges; a constant sample has
/// exactly zero spread.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Moments {
    n: u64,
    mean_profit: f64,
    mean_loss: f64,
    m2_profit: f64,
    m2_loss: f64,
    co_moment: f64,
}

impl Moments {
    pub(crate) fn push_terminal(&mut self, terminal: f64, capital: f64) {
        let profit = (terminal - capital).max(0.0);
        let loss = (capital - terminal).max(0.0);
        self.n += 1;
        let n = self.n as f64;
        let dp = profit - self.mean_profit;
        self.mean_profit += dp / n;
        let dl = loss - self.mean_loss;
        self.mean_loss += dl / n;
        self.m2_profit += dp * (profit - self.mean_profit);
        self.m2_loss += dl * (loss - self.mean_loss);
        self.co_moment += dp * (loss - self.mean_loss);
    }

    pub(crate) fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let dp = other.mean_profit - self.mean_profit;
        let dl = other.mean_loss - self.mean_loss;
        let w = na * nb / n;
        self.mean_profit += dp * nb / n;
        self.mean_loss += dl * nb / n;
        self.m2_profit += other.m2_profit + dp * dp * w;
        self.m2_loss += other.m2_loss + dl * dl * w;
        self.co_moment += other.co_moment + dp * dl * w;
        self.n += other.n;
    }

    /// Means as the profile; standard errors of the means, and of `ρ̂` by
    /// the first-order delta method.
    pub(crate) fn into_profile(self) -> Result<RiskProfile> {
        let profile = RiskProfile::new(self.mean_profit, self.mean_loss)?;
        let n = self.n as f64;
        let (var_p, var_l, cov) = if self.n > 1 {
            (
                self.m2_profit / (n - 1.0),
                self.m2_loss / (n - 1.0),
                self.co_moment / (n - 1.0),
            )
        } else {
            (0.0, 0.0, 0.0)
        };
        let rho = profile.rho();
        let var_rho = (var_l - 2.0 * rho * cov + rho * rho * var_p).max(0.0)
            / (self.mean_profit * self.mean_profit);
        let se = StdErrors {
            profit: (var_p / n).sqrt(),
            loss: (var_l / n).sqrt(),
            rho: (var_rho / n).sqrt(),
            delta: ((var_p + var_l - 2.0 * cov).max(0.0) / n).sqrt(),
        };
        Ok(profile.with_std_errors(se))
    }
}
