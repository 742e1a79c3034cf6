//! Bank-and-company mudharabah: ratios for three rating choices at two
//! risk levels.
//!
//! ```text
//! cargo run --example mudharabah
//! ```

use pls_fair::ratio::{allocate, fair_mudharabah};
use pls_fair::{ContractSpec, RatingVector, RiskProfile};

fn main() -> pls_fair::Result<()> {
    for rho in [0.25, 0.5] {
        let (owner, manager) = fair_mudharabah(rho)?;
        println!(
            "rho = {rho}: fair split {:.1}% / {:.1}%",
            100.0 * owner,
            100.0 * manager
        );
    }

    for ratings in [[1.0, 1.0], [2.0, 3.0], [3.0, 2.0]] {
        let spec = ContractSpec::cfair_mudharabah(RatingVector::new(ratings.to_vec())?)?;
        for rho in [0.25, 0.5] {
            let alloc = allocate(&spec, &RiskProfile::from_rho(rho, None)?)?;
            println!(
                "c = {ratings:?}, rho = {rho}: owner {:.1}%, manager {:.1}%, residual {:.1e}",
                100.0 * alloc.gammas[0],
                100.0 * alloc.gammas[1],
                alloc.residual
            );
        }
    }
    Ok(())
}
