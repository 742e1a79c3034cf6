//! Closed-form risk profile of a log-normal project value.

use pls_fair::ratio::fair_mudharabah;
use pls_fair::risk::{gbm_closed_form, GbmParams};

fn main() -> pls_fair::Result<()> {
    println!(
        "{:>5} {:>5} {:>4} {:>9} {:>9} {:>7} {:>9}  fair owner share",
        "mu", "sigma", "T", "E+", "E-", "rho", "delta"
    );
    for (mu, sigma, t) in [
        (0.1, 0.2, 1.0),
        (0.05, 0.3, 2.0),
        (0.02, 0.5, 0.5),
        (0.0, 0.2, 1.0),
        (-0.05, 0.2, 1.0),
    ] {
        let p = gbm_closed_form(&GbmParams::new(mu, sigma, t, 100.0)?)?;
        let share = match fair_mudharabah(p.rho()) {
            Ok((owner, _)) => format!("{:.2}%", 100.0 * owner),
            Err(e) => e.to_string(),
        };
        println!(
            "{mu:>5} {sigma:>5} {t:>4} {:>9.4} {:>9.4} {:>7.4} {:>9.4}  {share}",
            p.e_profit(),
            p.e_loss(),
            p.rho(),
            p.delta()
        );
    }
    Ok(())
}
