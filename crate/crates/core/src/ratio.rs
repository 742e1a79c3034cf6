//! Closed-form c-fair profit-sharing ratios.
//!
//! Every contract variant reduces to the same two ingredients: the sharing
//! weights `c_{ℓ,ℓ̄}` built from the ratings, and the risk profile `(ρ, Δ)`.
//! Ratio `ℓ` is a labor reward `c_{ℓ,ℓ̄}(1 − ρ)` plus a funding reward `κ_ℓ ρ`,
//! and partner `ℓ` ends up with the expected payoff `c_{ℓ,ℓ̄} Δ`.

use serde::{Deserialize, Serialize};

use crate::domain::{
    Allocation, CapitalShares, ContractSpec, ContractVariant, RatingVector, RiskProfile, Valuation,
    WakalahTerms,
};
use crate::error::{Error, Result};
use crate::oracle;

/// Above this many partners the rating products are formed in log space.
const DIRECT_PRODUCT_MAX: usize = 16;

/// Normalised sharing weights `c_{ℓ,ℓ̄}`: weight `ℓ` is the product of every
/// rating except `c_ℓ`, so a smaller rating earns a larger weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn manager(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

pub fn sharing_weights(c: &RatingVector) -> WeightVector {
    let c = c.values();
    let d = c.len();
    let raw: Vec<f64> = if d <= DIRECT_PRODUCT_MAX {
        // exclusive products from prefix and suffix products
        let mut suffix = vec![1.0; d + 1];
        for i in (0..d).rev() {
            suffix[i] = suffix[i + 1] * c[i];
        }
        let mut prefix = 1.0;
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            out.push(prefix * suffix[i + 1]);
            prefix *= c[i];
        }
        out
    } else {
        let logs: Vec<f64> = c.iter().map(|x| x.ln()).collect();
        let total: f64 = logs.iter().sum();
        let excl: Vec<f64> = logs.iter().map(|l| total - l).collect();
        let top = excl.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        excl.iter().map(|e| (e - top).exp()).collect()
    };
    let norm: f64 = raw.iter().sum();
    WeightVector(raw.into_iter().map(|w| w / norm).collect())
}

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rho must be in [0, 1], got {rho}"
        )));
    }
    if rho > 1.0 {
        return Err(Error::NotViable { rho });
    }
    Ok(())
}

/// Fair mudharabah ratios `(½(1 + ρ), ½(1 − ρ))` for the capital owner and
/// the manager.
pub fn fair_mudharabah(rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    Ok((0.5 * (1.0 + rho), 0.5 * (1.0 - rho)))
}

/// `(c_1, c_2)`-fair mudharabah ratios at risk `ρ`.
pub fn cfair_mudharabah_ratios(c: &RatingVector, rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let [c1, c2] = two_ratings(c)?;
    let manager = c1 / (c1 + c2) * (1.0 - rho);
    Ok((c2 / (c1 + c2) * (1.0 - rho) + rho, manager))
}

fn two_ratings(c: &RatingVector) -> Result<[f64; 2]> {
    match c.values() {
        [a, b] => Ok([*a, *b]),
        v => Err(Error::DimensionMismatch(format!(
            "a mudharabah has 2 partners, got {} ratings",
            v.len()
        ))),
    }
}

pub fn cfair_mudharabah(c: &RatingVector, profile: &RiskProfile) -> Result<Allocation> {
    profile.ensure_viable()?;
    let (g1, g2) = cfair_mudharabah_ratios(c, profile.rho())?;
    let [c1, c2] = two_ratings(c)?;
    let delta = profile.delta();
    let payoffs = vec![c2 / (c1 + c2) * delta, c1 / (c1 + c2) * delta];
    finish(
        c,
        &CapitalShares::mudharabah(),
        profile,
        vec![g1, g2],
        payoffs,
    )
}

/// Self-managed musharakah: `γ_ℓ = c_{ℓ,ℓ̄}(1 − ρ) + κ_ℓ ρ`.
pub fn cfair_musharakah(
    c: &RatingVector,
    kappa: &CapitalShares,
    profile: &RiskProfile,
) -> Result<Allocation> {
    if c.len() != kappa.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} ratings but {} capital shares",
            c.len(),
            kappa.len()
        )));
    }
    profile.ensure_viable()?;
    let rho = profile.rho();
    let weights = sharing_weights(c);
    let gammas = weights
        .values()
        .iter()
        .zip(kappa.values())
        .map(|(w, k)| w * (1.0 - rho) + k * rho)
        .collect();
    let payoffs = weights
        .values()
        .iter()
        .map(|w| w * profile.delta())
        .collect();
    finish(c, kappa, profile, gammas, payoffs)
}

/// Musharakah of `d − 1` funders whose manager (partner `d`, rated `c_d`)
/// is bound by a mudharabah and brings no capital.
pub fn cfair_musharakah_external_mudharib(
    c: &RatingVector,
    kappa: &CapitalShares,
    profile: &RiskProfile,
) -> Result<Allocation> {
    if c.len() != kappa.len() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} ratings need {} funder capital shares, got {}",
            c.len(),
            c.len() - 1,
            kappa.len()
        )));
    }
    cfair_musharakah(c, &kappa.with_manager(), profile)
}

/// Musharakah of `d − 1` funders whose manager is paid `k` fixed payments
/// `p` up to maturity. The funders' ratios do not depend on `r` or `k`:
/// `γ_ℓ = (c_{d,d̄}/(d − 1) + c_{ℓ,ℓ̄})(1 − ρ) + κ_ℓ ρ`.
///
/// The payment satisfies `p = ϖ(r, T, k) c_{d,d̄} Δ`, i.e. the present value
/// of the payments equals the manager's discounted share of `Δ`. Payoffs are
/// present values.
pub fn cfair_musharakah_wakalah(
    c: &RatingVector,
    kappa: &CapitalShares,
    profile: &RiskProfile,
    terms: &WakalahTerms,
) -> Result<Allocation> {
    let d = c.len();
    if d != kappa.len() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{d} ratings need {} funder capital shares, got {}",
            d - 1,
            kappa.len()
        )));
    }
    profile.ensure_viable()?;
    let rho = profile.rho();
    let weights = sharing_weights(c);
    let manager_cut = weights.manager() / (d - 1) as f64;
    let gammas: Vec<f64> = weights.values()[..d - 1]
        .iter()
        .zip(kappa.values())
        .map(|(w, k)| (manager_cut + w) * (1.0 - rho) + k * rho)
        .collect();
    let p = varpi(terms) * weights.manager() * profile.delta();
    let discount = terms.maturity_discount();
    let payoffs = weights
        .values()
        .iter()
        .map(|w| w * discount * profile.delta())
        .collect();
    let residual = oracle::fairness_residual(
        c.values(),
        kappa.values(),
        profile,
        &gammas,
        Some((terms, p)),
    );
    Ok(Allocation {
        gammas,
        periodic_payment: Some(p),
        payoffs,
        valuation: Valuation::PresentValue,
        residual,
    })
}

fn finish(
    c: &RatingVector,
    kappa: &CapitalShares,
    profile: &RiskProfile,
    gammas: Vec<f64>,
    payoffs: Vec<f64>,
) -> Result<Allocation> {
    let residual = oracle::fairness_residual(c.values(), kappa.values(), profile, &gammas, None);
    Ok(Allocation {
        gammas,
        periodic_payment: None,
        payoffs,
        valuation: Valuation::Maturity,
        residual,
    })
}

/// Dispatches a validated contract to its closed form.
pub fn allocate(spec: &ContractSpec, profile: &RiskProfile) -> Result<Allocation> {
    match spec.variant() {
        ContractVariant::FairMudharabah | ContractVariant::CFairMudharabah => {
            cfair_mudharabah(spec.ratings(), profile)
        }
        ContractVariant::MusharakahSelfManaged => {
            cfair_musharakah(spec.ratings(), spec.capital(), profile)
        }
        ContractVariant::MusharakahExternalMudharib => {
            cfair_musharakah_external_mudharib(spec.ratings(), spec.capital(), profile)
        }
        ContractVariant::MusharakahWakalah => {
            let terms = spec.wakalah().ok_or(Error::MissingWakalahTerms)?;
            cfair_musharakah_wakalah(spec.ratings(), spec.capital(), profile, terms)
        }
    }
}

/// Present value at time 0 of `k` unit payments spread evenly up to `T`:
/// `A = Σ_{i=1..k} (1 + r)^{−iT/k}`.
pub fn annuity_pv(terms: &WakalahTerms) -> f64 {
    let k = f64::from(terms.k());
    if terms.r() == 0.0 {
        return k;
    }
    let log_growth = terms.r().ln_1p();
    let total = -(-terms.maturity() * log_growth).exp_m1();
    let step = (terms.maturity() / k * log_growth).exp_m1();
    total / step
}

/// `ϖ(r, T, k) = ((1 + r)^{T/k} − 1) / ((1 + r)^T − 1)`, with the limit
/// `1/k` at `r = 0`. Satisfies `A · ϖ = (1 + r)^{−T}`.
pub fn varpi(terms: &WakalahTerms) -> f64 {
    let k = f64::from(terms.k());
    if terms.r() == 0.0 {
        return 1.0 / k;
    }
    let log_growth = terms.r().ln_1p();
    (terms.maturity() / k * log_growth).exp_m1() / (terms.maturity() * log_growth).exp_m1()
}

/// Fair ratio of the capital owner in a two-outcome project: revenue
/// `r_plus` with probability `beta`, `r_minus` otherwise.
pub fn lessy_ratio(beta: f64, r_plus: f64, r_minus: f64, capital: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "success probability must be in (0, 1], got {beta}"
        )));
    }
    if r_plus <= capital || r_plus.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "success revenue {r_plus} must exceed the capital {capital}"
        )));
    }
    if r_minus > capital {
        return Err(Error::InvalidParameter(format!(
            "failure revenue {r_minus} must not exceed the capital {capital}"
        )));
    }
    let odds = (1.0 - beta) / beta * (capital - r_minus) / (r_plus - capital);
    if odds > 1.0 {
        return Err(Error::NotViable { rho: odds });
    }
    Ok(0.5 * (1.0 + odds))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    /// `γ_ℓ ≥ γ_ℓ′` for every `ρ ∈ [0, 1]`. `identical` when the two ratio
    /// curves coincide.
    AlwaysGe { identical: bool },
    /// `γ_ℓ ≤ γ_ℓ′` for every `ρ ∈ [0, 1]`.
    AlwaysLe,
    /// The order flips at `rho`.
    CrossesAt { rho: f64 },
}

/// Which of two partners gets the larger ratio, as a function of `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub pair: (usize, usize),
    pub regime: Regime,
    /// `c_{ℓ,ℓ̄} − c_{ℓ′,ℓ̄′}`.
    pub weight_gap: f64,
    /// `κ_ℓ − κ_ℓ′`.
    pub capital_gap: f64,
}

impl DominanceReport {
    pub fn crossing_rho(&self) -> Option<f64> {
        match self.regime {
            Regime::CrossesAt { rho } => Some(rho),
            _ => None,
        }
    }

    /// `γ_ℓ(ρ) − γ_ℓ′(ρ)`, which is affine in `ρ`.
    pub fn gap_at(&self, rho: f64) -> f64 {
        self.weight_gap * (1.0 - rho) + self.capital_gap * rho
    }
}

/// Compares `γ_ℓ − γ_ℓ′ = (c_{ℓ,ℓ̄} − c_{ℓ′,ℓ̄′})(1 − ρ) + (κ_ℓ − κ_ℓ′) ρ`.
/// When the two gaps have opposite signs the order flips at
/// `ρ* = Δw / (Δw − Δκ)`.
pub fn dominance_threshold(
    weight_l: f64,
    weight_lp: f64,
    kappa_l: f64,
    kappa_lp: f64,
) -> Result<Regime> {
    for x in [weight_l, weight_lp, kappa_l, kappa_lp] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "weights and capital shares must be in [0, 1], got {x}"
            )));
        }
    }
    let dw = weight_l - weight_lp;
    let dk = kappa_l - kappa_lp;
    Ok(if dw == 0.0 && dk == 0.0 {
        Regime::AlwaysGe { identical: true }
    } else if dw >= 0.0 && dk >= 0.0 {
        Regime::AlwaysGe { identical: false }
    } else if dw <= 0.0 && dk <= 0.0 {
        Regime::AlwaysLe
    } else {
        Regime::CrossesAt {
            rho: dw / (dw - dk),
        }
    })
}

/// Dominance between partners `l` and `lp` (0-based) of a self-managed
/// musharakah.
pub fn dominance(
    c: &RatingVector,
    kappa: &CapitalShares,
    l: usize,
    lp: usize,
) -> Result<DominanceReport> {
    let d = c.len();
    if kappa.len() != d || l >= d || lp >= d {
        return Err(Error::DimensionMismatch(format!(
            "partners ({l}, {lp}) out of range for {d} ratings and {} shares",
            kappa.len()
        )));
    }
    let w = sharing_weights(c);
    let (wl, wlp) = (w.values()[l], w.values()[lp]);
    let (kl, klp) = (kappa.values()[l], kappa.values()[lp]);
    Ok(DominanceReport {
        pair: (l, lp),
        regime: dominance_threshold(wl, wlp, kl, klp)?,
        weight_gap: wl - wlp,
        capital_gap: kl - klp,
    })
}
