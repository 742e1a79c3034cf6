//! Loads a JSON contract, estimates its risk profile and prints the
//! allocation as JSON.
//!
//! ```text
//! cargo run --example contract_file -- crates/core/contracts/gbm_musharakah.json
//! ```

use std::path::PathBuf;

use pls_fair::cli::LoadedContract;
use pls_fair::oracle::verify_allocation;
use pls_fair::ratio::allocate;
use pls_fair::risk::McConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            [
                env!("CARGO_MANIFEST_DIR"),
                "contracts",
                "gbm_musharakah.json",
            ]
            .iter()
            .collect()
        });
    let contract = LoadedContract::load(&path)?;
    let spec = contract.spec()?;
    for mc in [None, Some(McConfig::new(200_000, 0)?)] {
        let profile = contract.profile(mc.as_ref())?;
        let alloc = allocate(&spec, &profile)?;
        let report = verify_allocation(&alloc, &spec, &profile, 1e-9)?;
        let label = if mc.is_some() {
            "monte carlo"
        } else {
            "closed form"
        };
        println!("{label}: {}", serde_json::to_string(&alloc)?);
        println!("  verification pass = {}", report.pass);
    }
    Ok(())
}
