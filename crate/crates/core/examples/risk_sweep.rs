//! Ratios of four partners as functions of the investment risk, written as
//! CSV to standard output.
//!
//! ```text
//! cargo run --example risk_sweep > curves.csv
//! ```

use std::io;

use pls_fair::cli::{sweep_rows, write_sweep_csv};
use pls_fair::{CapitalShares, ContractSpec, ContractVariant, RatingVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ContractSpec::new(
        ContractVariant::MusharakahSelfManaged,
        RatingVector::new(vec![3.0, 5.0, 4.0, 2.0])?,
        CapitalShares::new(vec![0.125, 0.625, 0.25, 0.0])?,
        None,
    )?;
    let rows = sweep_rows(&spec, 0.0, 1.0, 21)?;
    write_sweep_csv(&rows, &mut io::stdout().lock())?;
    Ok(())
}
