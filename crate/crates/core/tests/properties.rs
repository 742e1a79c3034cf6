use pls_fair::domain::{
    CapitalShares, ContractSpec, ContractVariant, RatingVector, RiskProfile, WakalahTerms,
    MAX_PARTNERS,
};
use pls_fair::error::Error;
use pls_fair::oracle::assemble_fairness_system;
use pls_fair::ratio::{allocate, cfair_musharakah, dominance, sharing_weights, Regime};
use pls_fair::risk::{
    empirical_profile, gbm_closed_form, monte_carlo_profile, two_point_profile, AssetModel,
    EmpiricalSample, GbmParams, McConfig, TerminalSampler, TwoPointScenario,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn log_uniform_ratings(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-1.0f64..=1.0).prop_map(|x| 10f64.powf(x)), d)
}

fn simplex(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3f64..1.0, d).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.iter().map(|x| x / total).collect()
    })
}

fn wakalah_terms() -> impl Strategy<Value = WakalahTerms> {
    (0.0f64..0.3, 0.1f64..20.0, 1u32..=24).prop_map(|(r, t, k)| WakalahTerms::new(r, t, k).unwrap())
}

fn any_spec() -> impl Strategy<Value = ContractSpec> {
    prop_oneof![
        Just(ContractSpec::fair_mudharabah()),
        log_uniform_ratings(2)
            .prop_map(|c| ContractSpec::cfair_mudharabah(RatingVector::new(c).unwrap()).unwrap()),
        (2usize..=8)
            .prop_flat_map(|d| (log_uniform_ratings(d), simplex(d)))
            .prop_map(|(c, k)| spec(ContractVariant::MusharakahSelfManaged, c, k, None)),
        (2usize..=8)
            .prop_flat_map(|d| (log_uniform_ratings(d), simplex(d - 1)))
            .prop_map(|(c, k)| spec(ContractVariant::MusharakahExternalMudharib, c, k, None)),
        (2usize..=8)
            .prop_flat_map(|d| (log_uniform_ratings(d), simplex(d - 1), wakalah_terms()))
            .prop_map(|(c, k, w)| spec(ContractVariant::MusharakahWakalah, c, k, Some(w))),
    ]
}

fn spec(
    variant: ContractVariant,
    c: Vec<f64>,
    k: Vec<f64>,
    w: Option<WakalahTerms>,
) -> ContractSpec {
    ContractSpec::new(
        variant,
        RatingVector::new(c).unwrap(),
        CapitalShares::new(k).unwrap(),
        w,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn contract_spec_json_round_trip(s in any_spec()) {
        let text = serde_json::to_string(&s).unwrap();
        let back: ContractSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn ratings_with_a_non_positive_entry_are_rejected(
        mut c in log_uniform_ratings(5),
        at in 0usize..5,
        bad in prop_oneof![Just(0.0), -10.0f64..0.0, Just(f64::NAN), Just(f64::INFINITY)],
    ) {
        c[at] = bad;
        prop_assert!(RatingVector::new(c).is_err());
    }

    #[test]
    fn capital_off_the_simplex_is_rejected(k in simplex(4), drift in 1e-9f64..0.5, negative in any::<bool>()) {
        let mut off = k.clone();
        off[0] += drift;
        prop_assert!(CapitalShares::new(off).is_err());
        if negative {
            let mut neg = k.clone();
            neg[0] = -drift;
            neg[1] += k[0] + drift;
            prop_assert!(CapitalShares::new(neg).is_err());
        }
    }

    #[test]
    fn spec_with_mismatched_capital_length_is_rejected(
        d in 3usize..=8,
        extra in prop_oneof![Just(-1i32), Just(1i32)],
    ) {
        let c = RatingVector::uniform(d).unwrap();
        let len = (d as i32 + extra) as usize;
        let k = CapitalShares::equal(len).unwrap();
        prop_assert!(ContractSpec::new(ContractVariant::MusharakahSelfManaged, c.clone(), k.clone(), None).is_err());
        let k_short = CapitalShares::equal(d).unwrap();
        prop_assert!(ContractSpec::new(ContractVariant::MusharakahExternalMudharib, c, k_short, None).is_err());
    }

    #[test]
    fn wakalah_terms_required_exactly_for_wakalah(d in 3usize..=6, w in wakalah_terms()) {
        let c = RatingVector::uniform(d).unwrap();
        let k = CapitalShares::equal(d - 1).unwrap();
        prop_assert!(ContractSpec::new(ContractVariant::MusharakahWakalah, c.clone(), k.clone(), None).is_err());
        prop_assert!(ContractSpec::new(ContractVariant::MusharakahExternalMudharib, c, k, Some(w)).is_err());
    }

    #[test]
    fn risk_profile_rejects_bad_expectations(ep in -10.0f64..=0.0, el in -10.0f64..-1e-12) {
        prop_assert!(RiskProfile::new(ep, 1.0).is_err());
        prop_assert!(RiskProfile::new(1.0, el).is_err());
    }

    #[test]
    fn solver_residual_is_backward_stable(
        (c, k) in (2usize..=12).prop_flat_map(|d| (log_uniform_ratings(d), simplex(d))),
        e_profit in 0.01f64..1e4,
        rho in 0.0f64..=1.0,
    ) {
        let system = assemble_fairness_system(
            &RatingVector::new(c).unwrap(),
            &CapitalShares::new(k).unwrap(),
            e_profit,
            rho * e_profit,
        ).unwrap();
        let x = system.solve().unwrap();
        let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(system.residual(&x) <= 1e-12 * system.norm_inf() * x_norm);
    }

    #[test]
    fn weights_are_proportional_to_reciprocal_ratings(
        c in (2usize..=MAX_PARTNERS).prop_flat_map(log_uniform_ratings),
    ) {
        let w = sharing_weights(&RatingVector::new(c.clone()).unwrap());
        let sum: f64 = w.values().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        let rated: Vec<f64> = w.values().iter().zip(&c).map(|(w, c)| w * c).collect();
        for x in &rated {
            prop_assert!((x / rated[0] - 1.0).abs() <= 1e-12, "{:?}", rated);
        }
    }

    #[test]
    fn every_variant_lands_on_the_simplex(s in any_spec(), rho in 0.0f64..=1.0) {
        let alloc = allocate(&s, &RiskProfile::from_rho(rho, None).unwrap()).unwrap();
        prop_assert_eq!(alloc.gammas.len(), s.ratio_count());
        let sum: f64 = alloc.gammas.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(alloc.gammas.iter().all(|g| *g >= 0.0 && *g <= 1.0 + 1e-12));
    }

    #[test]
    fn dominance_regime_matches_grid(
        (c, k) in (2usize..=6).prop_flat_map(|d| (log_uniform_ratings(d), simplex(d))),
    ) {
        let c = RatingVector::new(c).unwrap();
        let k = CapitalShares::new(k).unwrap();
        let report = dominance(&c, &k, 0, 1).unwrap();
        for i in 0..=50 {
            let rho = i as f64 / 50.0;
            let g = cfair_musharakah(&c, &k, &RiskProfile::from_rho(rho, None).unwrap())
                .unwrap()
                .gammas;
            let gap = g[0] - g[1];
            match report.regime {
                Regime::AlwaysGe { .. } => prop_assert!(gap >= -1e-12),
                Regime::AlwaysLe => prop_assert!(gap <= 1e-12),
                Regime::CrossesAt { rho: star } => {
                    let before = report.weight_gap > 0.0;
                    if (rho - star).abs() > 1e-9 {
                        prop_assert_eq!(gap > 0.0, (rho < star) == before, "rho {} star {}", rho, star);
                    }
                }
            }
        }
    }

    #[test]
    fn gbm_profile_is_consistent_and_viable_iff_drift_non_negative(
        mu in prop_oneof![-0.5f64..-1e-6, 1e-6f64..0.5],
        sigma in 0.01f64..1.0,
        horizon in 0.1f64..5.0,
    ) {
        let params = GbmParams::new(mu, sigma, horizon, 100.0).unwrap();
        let theta = (mu - 0.5 * sigma * sigma) * horizon.sqrt() / sigma;
        let p = match gbm_closed_form(&params) {
            Ok(p) => p,
            Err(Error::NotViable { rho }) => {
                prop_assert!(mu < 0.0 && theta < -30.0 && rho.is_infinite());
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!((p.rho() - p.e_loss() / p.e_profit()).abs() <= 1e-12 * p.rho().max(1.0));
        prop_assert!((p.delta() - (p.e_profit() - p.e_loss())).abs() <= 1e-12 * p.e_profit());
        prop_assert_eq!(p.viable(), mu >= 0.0);
    }
}

#[test]
fn monte_carlo_rho_within_three_se_for_most_seeds() {
    let params = GbmParams::new(0.08, 0.25, 1.0, 100.0).unwrap();
    let exact = gbm_closed_form(&params).unwrap();
    let model = AssetModel::Gbm(params);
    let hits = (0..100)
        .filter(|seed| {
            let est =
                monte_carlo_profile(&model, &McConfig::new(1_000_000, *seed).unwrap()).unwrap();
            (est.rho() - exact.rho()).abs() <= 3.0 * est.std_errors().unwrap().rho
        })
        .count();
    assert!(hits >= 99, "{hits}/100 seeds within 3 SE");
}

#[test]
fn empirical_sample_of_two_point_draws_converges() {
    let scenarios = [
        (0.6, 120.0, 90.0, 100.0),
        (0.3, 250.0, 20.0, 100.0),
        (0.9, 101.0, 0.0, 100.0),
    ];
    for (seed, (beta, up, down, capital)) in scenarios.into_iter().enumerate() {
        let s = TwoPointScenario::new(beta, up, down, capital).unwrap();
        let exact = two_point_profile(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let draws = (0..100_000).map(|_| s.draw(&mut rng)).collect();
        let est = empirical_profile(&EmpiricalSample::new(draws, capital).unwrap()).unwrap();
        let se = est.std_errors().unwrap();
        assert!((est.e_profit() - exact.e_profit()).abs() <= 3.0 * se.profit);
        assert!((est.e_loss() - exact.e_loss()).abs() <= 3.0 * se.loss);
        assert!((est.rho() - exact.rho()).abs() <= 3.0 * se.rho);
        assert!((est.delta() - exact.delta()).abs() <= 3.0 * se.delta);
    }
}
