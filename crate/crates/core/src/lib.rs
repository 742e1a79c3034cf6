//! c-fair profit-sharing ratios for profit-and-loss sharing contracts.
//!
//! Partners of a mudharabah or musharakah (optionally managed through a
//! wakalah) agree on rating coefficients `c_ℓ`; the c-fair ratios are the
//! profit shares that make the rated expected payoffs `c_ℓ Pay_ℓ` equal.
//! Everything depends on the investment only through its risk
//! `ρ = E(L − R_T)^+ / E(R_T − L)^+` and expected profit `Δ = E(R_T) − L`.
//!
//! - [`domain`]: validated contract, rating, capital and profile types.
//! - [`ratio`]: closed-form ratios, payments and payoffs.
//! - [`risk`]: `ρ` and `Δ` from log-normal, two-point, empirical or
//!   simulated models.
//! - [`oracle`]: the raw fairness systems solved numerically, and residual
//!   checks of any allocation.
//! - [`cli`]: the `pls` command-line front end.

pub mod cli;
pub mod domain;
pub mod error;
pub mod oracle;
pub mod ratio;
pub mod risk;

pub use domain::{
    Allocation, CapitalShares, ContractSpec, ContractVariant, RatingVector, RiskProfile, Valuation,
    WakalahTerms,
};
pub use error::{Error, Result};
