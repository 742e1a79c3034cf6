//! Solves the fairness conditions as a linear system and compares with the
//! closed form, then checks a hand-typed tuple.

use pls_fair::oracle::{assemble_fairness_system, verify_allocation};
use pls_fair::ratio::allocate;
use pls_fair::{
    Allocation, CapitalShares, ContractSpec, ContractVariant, RatingVector, RiskProfile,
};

fn main() -> pls_fair::Result<()> {
    let ratings = RatingVector::new(vec![1.0, 2.0, 1.0, 4.0])?;
    let kappa = CapitalShares::equal(4)?;
    let profile = RiskProfile::from_rho(0.125, None)?;
    let spec = ContractSpec::new(
        ContractVariant::MusharakahSelfManaged,
        ratings.clone(),
        kappa.clone(),
        None,
    )?;

    let system = assemble_fairness_system(&ratings, &kappa, profile.e_profit(), profile.e_loss())?;
    let solved = system.solve()?;
    let closed = allocate(&spec, &profile)?;
    println!("unknowns   {:?}", system.labels());
    println!("oracle     {solved:.6?}");
    println!("closed     {:.6?}", closed.gammas);
    println!("|Ax - b|   {:.1e}", system.residual(&solved));

    for tuple in [vec![0.35, 0.11, 0.35, 0.19], vec![0.35, 0.19, 0.35, 0.11]] {
        let report = verify_allocation(
            &Allocation::candidate(tuple.clone(), None),
            &spec,
            &profile,
            0.01,
        )?;
        println!(
            "{tuple:?}: relative residual {:.4}, {}",
            report.relative_fairness_residual,
            if report.pass { "pass" } else { "fail" }
        );
    }
    Ok(())
}
