//! Seeded Monte Carlo estimates against the closed form, plus a custom
//! terminal-value model plugged in through `TerminalSampler`.

use pls_fair::risk::{
    gbm_closed_form, monte_carlo_profile, monte_carlo_with, AssetModel, GbmParams, McConfig,
    TerminalSampler,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Uniform terminal value on `[lo, hi]`.
struct Uniform {
    lo: f64,
    hi: f64,
    capital: f64,
}

impl TerminalSampler for Uniform {
    fn capital(&self) -> f64 {
        self.capital
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        rng.gen_range(self.lo..self.hi)
    }
}

fn main() -> pls_fair::Result<()> {
    let params = GbmParams::new(0.1, 0.2, 1.0, 100.0)?;
    let exact = gbm_closed_form(&params)?;
    println!(
        "closed form      rho {:.6}  delta {:.6}",
        exact.rho(),
        exact.delta()
    );
    for n in [10_000, 100_000, 1_000_000] {
        let est = monte_carlo_profile(&AssetModel::Gbm(params), &McConfig::new(n, 42)?)?;
        let se = est
            .std_errors()
            .expect("simulation reports standard errors");
        println!(
            "n = {n:>9}    rho {:.6} ± {:.6}  delta {:.6} ± {:.6}",
            est.rho(),
            se.rho,
            est.delta(),
            se.delta
        );
    }

    let uniform = Uniform {
        lo: 80.0,
        hi: 140.0,
        capital: 100.0,
    };
    let est = monte_carlo_with(&uniform, &McConfig::new(1_000_000, 1)?)?;
    println!(
        "uniform [80,140] rho {:.4} (exact {:.4})",
        est.rho(),
        (20.0f64 * 20.0) / (40.0 * 40.0)
    );
    Ok(())
}
