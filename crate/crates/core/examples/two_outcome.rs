//! Fair owner share for a project that either succeeds or fails, computed
//! directly and through the general risk profile.

use pls_fair::ratio::{cfair_mudharabah, lessy_ratio};
use pls_fair::risk::{two_point_profile, TwoPointScenario};
use pls_fair::RatingVector;

fn main() -> pls_fair::Result<()> {
    let even = RatingVector::uniform(2)?;
    for (beta, up, down) in [
        (0.6, 120.0, 90.0),
        (0.9, 150.0, 0.0),
        (0.5, 130.0, 75.0),
        (0.3, 110.0, 50.0),
    ] {
        let direct = lessy_ratio(beta, up, down, 100.0);
        let scenario = TwoPointScenario::new(beta, up, down, 100.0)?;
        let via_profile = cfair_mudharabah(&even, &two_point_profile(&scenario)?);
        match (direct, via_profile) {
            (Ok(a), Ok(b)) => println!(
                "beta {beta}, R+ {up}, R- {down}: {a:.6} = {:.6}",
                b.gammas[0]
            ),
            (Err(e), _) | (_, Err(e)) => println!("beta {beta}, R+ {up}, R- {down}: {e}"),
        }
    }
    Ok(())
}
