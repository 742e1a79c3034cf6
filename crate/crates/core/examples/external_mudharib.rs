//! Three funders hire an outside manager on a profit share.

use pls_fair::ratio::cfair_musharakah_external_mudharib;
use pls_fair::{CapitalShares, RatingVector, RiskProfile};

fn main() -> pls_fair::Result<()> {
    let kappa = CapitalShares::new(vec![1.0 / 3.0; 3])?;
    let profile = RiskProfile::from_rho(0.5, Some(90.0))?;
    for c in [vec![1.0, 1.0, 1.0, 1.0], vec![3.0, 3.0, 3.0, 2.0]] {
        let alloc =
            cfair_musharakah_external_mudharib(&RatingVector::new(c.clone())?, &kappa, &profile)?;
        println!("ratings {c:?}");
        for (i, (g, pay)) in alloc.gammas.iter().zip(&alloc.payoffs).enumerate() {
            let role = if i == 3 { "manager" } else { "funder" };
            println!(
                "  {} {role:<7} gamma {:>6.2}%  expected payoff {pay:.2}",
                i + 1,
                100.0 * g
            );
        }
    }
    Ok(())
}
