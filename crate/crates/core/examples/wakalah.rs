//! Investor, co-manager and an agent paid a fixed fee `k` times up to
//! maturity, at several interest rates.

use pls_fair::ratio::{annuity_pv, cfair_musharakah_wakalah, varpi};
use pls_fair::{CapitalShares, RatingVector, RiskProfile, WakalahTerms};

fn main() -> pls_fair::Result<()> {
    let ratings = RatingVector::new(vec![1.0, 1.0, 1.0])?;
    let kappa = CapitalShares::new(vec![1.0, 0.0])?;
    let profile = RiskProfile::from_rho(0.5, Some(30.0))?;
    for r in [0.0, 0.01, 0.05, 0.2] {
        let terms = WakalahTerms::new(r, 1.0, 4)?;
        let alloc = cfair_musharakah_wakalah(&ratings, &kappa, &profile, &terms)?;
        let p = alloc.periodic_payment.expect("wakalah sets a payment");
        println!(
            "r = {r:<4}  gamma {:?}  p = {p:.4}  k p = {:.4}  A = {:.4}  varpi = {:.4}  PV payoffs {:.4?}",
            alloc.gammas,
            4.0 * p,
            annuity_pv(&terms),
            varpi(&terms),
            alloc.payoffs
        );
    }
    Ok(())
}
