//! Four-partner musharakah with unequal capital, and which partner's ratio
//! overtakes the other's as risk grows.

use pls_fair::ratio::{cfair_musharakah, dominance, sharing_weights, Regime};
use pls_fair::{CapitalShares, RatingVector, RiskProfile};

fn main() -> pls_fair::Result<()> {
    let kappa = CapitalShares::new(vec![0.125, 0.375, 0.125, 0.375])?;
    for c in [vec![1.0, 1.0, 1.0, 1.0], vec![1.0, 2.0, 1.0, 4.0]] {
        let ratings = RatingVector::new(c.clone())?;
        println!(
            "ratings {c:?}, weights {:.4?}",
            sharing_weights(&ratings).values()
        );
        for rho in [1.0 / 8.0, 2.0 / 3.0] {
            let profile = RiskProfile::from_rho(rho, Some(1_000.0))?;
            let alloc = cfair_musharakah(&ratings, &kappa, &profile)?;
            let pct: Vec<String> = alloc
                .gammas
                .iter()
                .map(|g| format!("{:.2}%", 100.0 * g))
                .collect();
            let pay: Vec<String> = alloc.payoffs.iter().map(|p| format!("{p:.1}")).collect();
            println!(
                "  rho = {rho:.4}: gamma [{}], payoff [{}]",
                pct.join(", "),
                pay.join(", ")
            );
        }

        let report = dominance(&ratings, &kappa, 0, 3)?;
        match report.regime {
            Regime::CrossesAt { rho } => {
                println!("  partner 1 vs 4: order flips at rho = {rho:.4}")
            }
            Regime::AlwaysGe { .. } => println!("  partner 1 vs 4: partner 1 never behind"),
            Regime::AlwaysLe => println!("  partner 1 vs 4: partner 1 never ahead"),
        }
    }
    Ok(())
}
