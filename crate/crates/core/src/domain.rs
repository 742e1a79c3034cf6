//! Validated value types shared by the ratio, risk and oracle modules.
//!
//! Every type here is immutable once built. Constructors enforce the
//! invariants, and deserialization goes through the same constructors, so a
//! value that exists is a valid value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for simplex membership of capital shares and ratios.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Largest supported number of partners.
pub const MAX_PARTNERS: usize = 64;

/// Per-partner rating coefficients `c_1..c_d`, all strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RatingVector(Vec<f64>);

impl RatingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || values.len() > MAX_PARTNERS {
            return Err(Error::DimensionMismatch(format!(
                "ratings need between 2 and {MAX_PARTNERS} partners, got {}",
                values.len()
            )));
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveRating { index, value });
            }
        }
        Ok(Self(values))
    }

    /// All partners rated 1: the plain fair allocation.
    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(vec![1.0; d])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ratings multiplied by a positive scalar.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|c| c * t).collect())
    }
}

impl TryFrom<Vec<f64>> for RatingVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<RatingVector> for Vec<f64> {
    fn from(r: RatingVector) -> Self {
        r.0
    }
}

/// Capital fractions `κ_ℓ = L_ℓ / L` of the funding partners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CapitalShares(Vec<f64>);

impl CapitalShares {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_PARTNERS {
            return Err(Error::DimensionMismatch(format!(
                "capital shares need between 1 and {MAX_PARTNERS} entries, got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(Error::CapitalNotOnSimplex(format!(
                "share {i} = {v} is outside [0, 1]"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::CapitalNotOnSimplex(format!("shares sum to {sum}")));
        }
        Ok(Self(values))
    }

    /// Equal stakes `1/d`; the last share absorbs rounding so the sum is exact.
    pub fn equal(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch("zero partners".into()));
        }
        let mut v = vec![1.0 / d as f64; d];
        let head: f64 = v[..d - 1].iter().sum();
        v[d - 1] = 1.0 - head;
        Self::new(v)
    }

    /// The mudharabah embedding `(1, 0)`: partner 1 funds, partner 2 works.
    pub fn mudharabah() -> Self {
        Self(vec![1.0, 0.0])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shares with an extra zero-stake partner appended (an outside manager).
    pub fn with_manager(&self) -> Self {
        let mut v = self.0.clone();
        v.push(0.0);
        Self(v)
    }
}

impl TryFrom<Vec<f64>> for CapitalShares {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<CapitalShares> for Vec<f64> {
    fn from(c: CapitalShares) -> Self {
        c.0
    }
}

/// Monte Carlo standard errors attached to an estimated profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub profit: f64,
    pub loss: f64,
    pub rho: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Deserialize)]
struct RawRiskProfile {
    e_profit: f64,
    e_loss: f64,
    #[serde(default)]
    std_errors: Option<StdErrors>,
}

/// Expected profit `E(R_T − L)^+`, expected loss `E(L − R_T)^+` and the
/// derived investment risk `ρ` and expected investment profit `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRiskProfile")]
pub struct RiskProfile {
    e_profit: f64,
    e_loss: f64,
    rho: f64,
    delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_errors: Option<StdErrors>,
}

impl RiskProfile {
    pub fn new(e_profit: f64, e_loss: f64) -> Result<Self> {
        if !(e_profit.is_finite() && e_profit > 0.0) {
            return Err(Error::Degenerate(format!(
                "expected profit must be positive and finite, got {e_profit}"
            )));
        }
        if !(e_loss.is_finite() && e_loss >= 0.0) {
            return Err(Error::Degenerate(format!(
                "expected loss must be non-negative and finite, got {e_loss}"
            )));
        }
        Ok(Self {
            e_profit,
            e_loss,
            rho: e_loss / e_profit,
            delta: e_profit - e_loss,
            std_errors: None,
        })
    }

    /// Profile with a given risk. Without `delta` the profile is normalised
    /// to unit expected profit, so payoffs come out per unit of `E(R_T − L)^+`.
    pub fn from_rho(rho: f64, delta: Option<f64>) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must be >= 0, got {rho}"
            )));
        }
        match delta {
            None => Self::new(1.0, rho),
            Some(delta) => {
                if rho == 1.0 {
                    if delta != 0.0 {
                        return Err(Error::InvalidParameter("rho = 1 forces delta = 0".into()));
                    }
                    return Self::new(1.0, 1.0);
                }
                let e_profit = delta / (1.0 - rho);
                Self::new(e_profit, rho * e_profit).map_err(|_| {
                    Error::InvalidParameter(format!(
                        "delta = {delta} is inconsistent with rho = {rho}"
                    ))
                })
            }
        }
    }

    pub fn with_std_errors(mut self, se: StdErrors) -> Self {
        self.std_errors = Some(se);
        self
    }

    pub fn e_profit(&self) -> f64 {
        self.e_profit
    }

    pub fn e_loss(&self) -> f64 {
        self.e_loss
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn std_errors(&self) -> Option<&StdErrors> {
        self.std_errors.as_ref()
    }

    /// `Δ ≥ 0`, equivalently `ρ ≤ 1`.
    pub fn viable(&self) -> bool {
        self.e_loss <= self.e_profit
    }

    pub(crate) fn ensure_viable(&self) -> Result<()> {
        if self.viable() {
            Ok(())
        } else {
            Err(Error::NotViable { rho: self.rho })
        }
    }
}

impl TryFrom<RawRiskProfile> for RiskProfile {
    type Error = Error;

    fn try_from(raw: RawRiskProfile) -> Result<Self> {
        let p = Self::new(raw.e_profit, raw.e_loss)?;
        Ok(match raw.std_errors {
            Some(se) => p.with_std_errors(se),
            None => p,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
struct RawWakalahTerms {
    r: f64,
    #[serde(rename = "T")]
    maturity: f64,
    k: u32,
}

/// Wakalah remuneration terms: `k` payments of `p` up to maturity `T`,
/// discounted at rate `r` per period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWakalahTerms")]
pub struct WakalahTerms {
    r: f64,
    #[serde(rename = "T")]
    maturity: f64,
    k: u32,
}

impl WakalahTerms {
    pub fn new(r: f64, maturity: f64, k: u32) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidWakalahTerms(format!(
                "r must be >= 0, got {r}"
            )));
        }
        if !(maturity.is_finite() && maturity > 0.0) {
            return Err(Error::InvalidWakalahTerms(format!(
                "T must be > 0, got {maturity}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidWakalahTerms("k must be >= 1".into()));
        }
        Ok(Self { r, maturity, k })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `(1 + r)^{-T}`.
    pub fn maturity_discount(&self) -> f64 {
        (-self.maturity * self.r.ln_1p()).exp()
    }
}

impl TryFrom<RawWakalahTerms> for WakalahTerms {
    type Error = Error;

    fn try_from(raw: RawWakalahTerms) -> Result<Self> {
        Self::new(raw.r, raw.maturity, raw.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractVariant {
    /// Two-party mudharabah with equal ratings.
    FairMudharabah,
    /// Two-party mudharabah with ratings `(c_1, c_2)`.
    #[serde(rename = "cfair_mudharabah")]
    CFairMudharabah,
    /// Musharakah where the funding partners manage the project themselves.
    MusharakahSelfManaged,
    /// Musharakah of `d − 1` funders managed by an outside partner bound by
    /// a mudharabah.
    MusharakahExternalMudharib,
    /// Musharakah of `d − 1` funders managed by an outside agent paid a fixed
    /// periodic remuneration.
    MusharakahWakalah,
}

impl ContractVariant {
    pub fn has_outside_manager(self) -> bool {
        matches!(
            self,
            Self::MusharakahExternalMudharib | Self::MusharakahWakalah
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
struct RawContractSpec {
    variant: ContractVariant,
    ratings: RatingVector,
    capital: CapitalShares,
    #[serde(default)]
    wakalah: Option<WakalahTerms>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawContractSpec")]
pub struct ContractSpec {
    variant: ContractVariant,
    ratings: RatingVector,
    capital: CapitalShares,
    #[serde(skip_serializing_if = "Option::is_none")]
    wakalah: Option<WakalahTerms>,
}

impl ContractSpec {
    pub fn new(
        variant: ContractVariant,
        ratings: RatingVector,
        capital: CapitalShares,
        wakalah: Option<WakalahTerms>,
    ) -> Result<Self> {
        validate_spec(Self {
            variant,
            ratings,
            capital,
            wakalah,
        })
    }

    pub fn fair_mudharabah() -> Self {
        Self {
            variant: ContractVariant::FairMudharabah,
            ratings: RatingVector(vec![1.0, 1.0]),
            capital: CapitalShares::mudharabah(),
            wakalah: None,
        }
    }

    pub fn cfair_mudharabah(ratings: RatingVector) -> Result<Self> {
        Self::new(
            ContractVariant::CFairMudharabah,
            ratings,
            CapitalShares::mudharabah(),
            None,
        )
    }

    pub fn variant(&self) -> ContractVariant {
        self.variant
    }

    pub fn ratings(&self) -> &RatingVector {
        &self.ratings
    }

    pub fn capital(&self) -> &CapitalShares {
        &self.capital
    }

    pub fn wakalah(&self) -> Option<&WakalahTerms> {
        self.wakalah.as_ref()
    }

    /// Number of profit-sharing ratios the contract determines.
    pub fn ratio_count(&self) -> usize {
        match self.variant {
            ContractVariant::MusharakahWakalah => self.ratings.len() - 1,
            _ => self.ratings.len(),
        }
    }

    /// Capital shares of all `d` partners, with a zero stake for an outside
    /// manager.
    pub fn capital_of_all(&self) -> CapitalShares {
        if self.variant.has_outside_manager() {
            self.capital.with_manager()
        } else {
            self.capital.clone()
        }
    }
}

impl TryFrom<RawContractSpec> for ContractSpec {
    type Error = Error;

    fn try_from(raw: RawContractSpec) -> Result<Self> {
        Self::new(raw.variant, raw.ratings, raw.capital, raw.wakalah)
    }
}

/// Checks the cross-field invariants of a contract and hands it back.
pub fn validate_spec(spec: ContractSpec) -> Result<ContractSpec> {
    use ContractVariant::*;

    let d = spec.ratings.len();
    let m = spec.capital.len();
    match spec.variant {
        FairMudharabah | CFairMudharabah => {
            if d != 2 {
                return Err(Error::DimensionMismatch(format!(
                    "a mudharabah has 2 partners, got {d} ratings"
                )));
            }
            if spec.capital.values() != [1.0, 0.0] {
                return Err(Error::CapitalNotOnSimplex(
                    "a mudharabah is funded entirely by partner 1: capital must be (1, 0)".into(),
                ));
            }
            if spec.variant == FairMudharabah && spec.ratings.0[0] != spec.ratings.0[1] {
                return Err(Error::InvalidParameter(
                    "a fair mudharabah rates both partners equally".into(),
                ));
            }
        }
        MusharakahSelfManaged => {
            if m != d {
                return Err(Error::DimensionMismatch(format!(
                    "{d} ratings but {m} capital shares"
                )));
            }
        }
        MusharakahExternalMudharib | MusharakahWakalah => {
            if m + 1 != d {
                return Err(Error::DimensionMismatch(format!(
                    "{d} ratings (manager last) need {} funder capital shares, got {m}",
                    d - 1
                )));
            }
        }
    }
    match (spec.variant, spec.wakalah.is_some()) {
        (MusharakahWakalah, false) => return Err(Error::MissingWakalahTerms),
        (MusharakahWakalah, true) | (_, false) => {}
        (_, true) => {
            return Err(Error::InvalidWakalahTerms(
                "wakalah terms only apply to a wakalah contract".into(),
            ))
        }
    }
    Ok(spec)
}

/// When payoffs are valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    /// Undiscounted expectations at maturity `T`.
    Maturity,
    /// Present values at time 0, discounted by `(1 + r)^{-T}`.
    PresentValue,
}

/// Profit-sharing ratios and the induced expected payoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub gammas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic_payment: Option<f64>,
    /// One entry per partner, outside manager included.
    pub payoffs: Vec<f64>,
    pub valuation: Valuation,
    /// Largest deviation between rated payoffs, recomputed from `gammas`.
    pub residual: f64,
}

impl Allocation {
    /// Candidate ratios from outside (user input, a printed table) that have
    /// not been through the engine yet.
    pub fn candidate(gammas: Vec<f64>, periodic_payment: Option<f64>) -> Self {
        Self {
            gammas,
            periodic_payment,
            payoffs: Vec::new(),
            valuation: Valuation::Maturity,
            residual: f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_mudharabah_is_valid() {
        let spec = ContractSpec::new(
            ContractVariant::CFairMudharabah,
            RatingVector::new(vec![1.0, 1.0]).unwrap(),
            CapitalShares::new(vec![1.0, 0.0]).unwrap(),
            None,
        );
        assert!(spec.is_ok());
    }

    #[test]
    fn four_partner_musharakah_is_valid() {
        let spec = ContractSpec::new(
            ContractVariant::MusharakahSelfManaged,
            RatingVector::new(vec![1.0, 2.0, 1.0, 4.0]).unwrap(),
            CapitalShares::new(vec![0.25; 4]).unwrap(),
            None,
        );
        assert!(spec.is_ok());
    }

    #[test]
    fn negative_rating_rejected() {
        assert_eq!(
            RatingVector::new(vec![1.0, -1.0]),
            Err(Error::NonPositiveRating {
                index: 1,
                value: -1.0
            })
        );
        assert!(RatingVector::new(vec![1.0, 0.0]).is_err());
        assert!(RatingVector::new(vec![1.0]).is_err());
        assert!(RatingVector::new(vec![1.0; 65]).is_err());
    }

    #[test]
    fn capital_off_simplex_rejected() {
        assert!(CapitalShares::new(vec![0.5, 0.4]).is_err());
        assert!(CapitalShares::new(vec![1.5, -0.5]).is_err());
        assert!(CapitalShares::new(vec![]).is_err());
        assert!(CapitalShares::equal(3).is_ok());
        assert!(CapitalShares::equal(7).is_ok());
    }

    #[test]
    fn dimension_and_terms_checks() {
        let c4 = RatingVector::new(vec![1.0; 4]).unwrap();
        let k3 = CapitalShares::equal(3).unwrap();
        let terms = WakalahTerms::new(0.0, 1.0, 4).unwrap();
        assert!(matches!(
            ContractSpec::new(
                ContractVariant::MusharakahSelfManaged,
                c4.clone(),
                k3.clone(),
                None
            ),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(ContractSpec::new(
            ContractVariant::MusharakahExternalMudharib,
            c4.clone(),
            k3.clone(),
            None
        )
        .is_ok());
        assert_eq!(
            ContractSpec::new(
                ContractVariant::MusharakahWakalah,
                c4.clone(),
                k3.clone(),
                None
            ),
            Err(Error::MissingWakalahTerms)
        );
        assert!(ContractSpec::new(
            ContractVariant::MusharakahWakalah,
            c4.clone(),
            k3.clone(),
            Some(terms)
        )
        .is_ok());
        assert!(ContractSpec::new(
            ContractVariant::MusharakahExternalMudharib,
            c4,
            k3,
            Some(terms)
        )
        .is_err());
        assert!(ContractSpec::new(
            ContractVariant::FairMudharabah,
            RatingVector::new(vec![2.0, 3.0]).unwrap(),
            CapitalShares::mudharabah(),
            None
        )
        .is_err());
    }

    #[test]
    fn wakalah_terms_bounds() {
        assert!(WakalahTerms::new(-0.01, 1.0, 1).is_err());
        assert!(WakalahTerms::new(0.0, 0.0, 1).is_err());
        assert!(WakalahTerms::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn risk_profile_identities() {
        let p = RiskProfile::new(12.0, 4.0).unwrap();
        assert_eq!(p.rho(), 1.0 / 3.0);
        assert_eq!(p.delta(), 8.0);
        assert!(p.viable());
        assert!(!RiskProfile::new(1.0, 1.5).unwrap().viable());
        assert!(RiskProfile::new(1.0, 1.0).unwrap().viable());
        assert!(RiskProfile::new(0.0, 1.0).is_err());
        assert!(RiskProfile::new(1.0, -1.0).is_err());
    }

    #[test]
    fn profile_from_rho_and_delta() {
        let p = RiskProfile::from_rho(0.25, Some(30.0)).unwrap();
        assert!((p.e_profit() - 40.0).abs() < 1e-12);
        assert!((p.delta() - 30.0).abs() < 1e-12);
        assert!(RiskProfile::from_rho(1.0, Some(3.0)).is_err());
        assert_eq!(RiskProfile::from_rho(0.5, None).unwrap().e_profit(), 1.0);
    }

    #[test]
    fn spec_json_rejects_invalid() {
        let bad = r#"{"variant":"cfair_mudharabah","ratings":[1,-1],"capital":[1,0]}"#;
        assert!(serde_json::from_str::<ContractSpec>(bad).is_err());
        let good = r#"{"variant":"cfair_mudharabah","ratings":[2,3],"capital":[1,0]}"#;
        assert!(serde_json::from_str::<ContractSpec>(good).is_ok());
    }
}
