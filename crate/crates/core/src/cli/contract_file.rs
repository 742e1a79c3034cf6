//! JSON contract documents.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "variant": "musharakah_wakalah",
//!   "ratings": [1, 1, 1],
//!   "capital": [1, 0],
//!   "wakalah": { "r": 0.0, "T": 1, "k": 4 },
//!   "model": { "kind": "fixed_rho", "rho": 0.5, "delta": 30 },
//!   "capital_amount": 100
//! }
//! ```
//!
//! Model kinds: `gbm {mu, sigma, T}`, `two_point {beta, r_plus, r_minus}`,
//! `empirical {draws | path}` and `fixed_rho {rho, delta?}`. The first three
//! need `capital_amount`. Mudharabah variants may omit `capital` (it is
//! `(1, 0)`), and a fair mudharabah may omit `ratings`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::domain::{
    CapitalShares, ContractSpec, ContractVariant, RatingVector, RiskProfile, WakalahTerms,
};
use crate::error::{Error, Result};
use crate::risk::{
    empirical_profile, gbm_closed_form, monte_carlo_profile, parse_draws, two_point_profile,
    AssetModel, EmpiricalSample, GbmParams, McConfig, TwoPointScenario,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractFile {
    pub schema: u32,
    pub variant: ContractVariant,
    #[serde(default)]
    pub ratings: Option<Vec<f64>>,
    #[serde(default)]
    pub capital: Option<Vec<f64>>,
    #[serde(default)]
    pub wakalah: Option<WakalahTerms>,
    pub model: ModelSpec,
    #[serde(default)]
    pub capital_amount: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Gbm {
        mu: f64,
        sigma: f64,
        #[serde(rename = "T")]
        horizon: f64,
    },
    TwoPoint {
        beta: f64,
        r_plus: f64,
        r_minus: f64,
    },
    Empirical {
        #[serde(default)]
        draws: Option<Vec<f64>>,
        #[serde(default)]
        path: Option<PathBuf>,
    },
    FixedRho {
        rho: f64,
        #[serde(default)]
        delta: Option<f64>,
    },
}

/// A parsed contract file plus the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedContract {
    pub file: ContractFile,
    pub base_dir: PathBuf,
}

impl LoadedContract {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base_dir)
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self> {
        let file: ContractFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                file.schema
            )));
        }
        Ok(Self { file, base_dir })
    }

    pub fn spec(&self) -> Result<ContractSpec> {
        let f = &self.file;
        let mudharabah = matches!(
            f.variant,
            ContractVariant::FairMudharabah | ContractVariant::CFairMudharabah
        );
        let ratings = match (&f.ratings, f.variant) {
            (Some(r), _) => r.clone(),
            (None, ContractVariant::FairMudharabah) => vec![1.0, 1.0],
            (None, _) => return Err(Error::Parse("missing `ratings`".into())),
        };
        let capital = match (&f.capital, mudharabah) {
            (Some(c), _) => c.clone(),
            (None, true) => vec![1.0, 0.0],
            (None, false) => return Err(Error::Parse("missing `capital`".into())),
        };
        ContractSpec::new(
            f.variant,
            RatingVector::new(ratings)?,
            CapitalShares::new(capital)?,
            f.wakalah,
        )
    }

    fn capital_amount(&self) -> Result<f64> {
        self.file
            .capital_amount
            .ok_or_else(|| Error::Parse("this model kind needs `capital_amount`".into()))
    }

    /// Asset model for simulation, when the model kind has one.
    pub fn asset_model(&self) -> Result<Option<AssetModel>> {
        Ok(match self.file.model {
            ModelSpec::Gbm { mu, sigma, horizon } => Some(AssetModel::Gbm(GbmParams::new(
                mu,
                sigma,
                horizon,
                self.capital_amount()?,
            )?)),
            ModelSpec::TwoPoint {
                beta,
                r_plus,
                r_minus,
            } => Some(AssetModel::TwoPoint(TwoPointScenario::new(
                beta,
                r_plus,
                r_minus,
                self.capital_amount()?,
            )?)),
            _ => None,
        })
    }

    /// Risk profile of the contract's model. With `mc`, analytic models are
    /// estimated by simulation instead.
    pub fn profile(&self, mc: Option<&McConfig>) -> Result<RiskProfile> {
        if let (Some(model), Some(cfg)) = (self.asset_model()?, mc) {
            return monte_carlo_profile(&model, cfg);
        }
        match &self.file.model {
            ModelSpec::Gbm { .. } | ModelSpec::TwoPoint { .. } => {
                match self
                    .asset_model()?
                    .expect("analytic model kinds have an asset model")
                {
                    AssetModel::Gbm(g) => gbm_closed_form(&g),
                    AssetModel::TwoPoint(s) => two_point_profile(&s),
                }
            }
            ModelSpec::Empirical { draws, path } => {
                let draws = match (draws, path) {
                    (Some(d), None) => d.clone(),
                    (None, Some(p)) => {
                        let full = self.base_dir.join(p);
                        let text = fs::read_to_string(&full).map_err(|e| {
                            Error::Parse(format!("cannot read {}: {e}", full.display()))
                        })?;
                        parse_draws(&text)?
                    }
                    _ => {
                        return Err(Error::Parse(
                            "empirical model needs exactly one of `draws` or `path`".into(),
                        ))
                    }
                };
                empirical_profile(&EmpiricalSample::new(draws, self.capital_amount()?)?)
            }
            ModelSpec::FixedRho { rho, delta } => RiskProfile::from_rho(*rho, *delta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<LoadedContract> {
        LoadedContract::parse(s, PathBuf::new())
    }

    #[test]
    fn mudharabah_defaults() {
        let c = parse(
            r#"{"schema":1,"variant":"cfair_mudharabah","ratings":[2,3],
                "model":{"kind":"fixed_rho","rho":0.25}}"#,
        )
        .unwrap();
        let spec = c.spec().unwrap();
        assert_eq!(spec.capital().values(), &[1.0, 0.0]);
        assert_eq!(c.profile(None).unwrap().rho(), 0.25);
    }

    #[test]
    fn rejects_wrong_schema_and_unknown_fields() {
        assert!(parse(
            r#"{"schema":2,"variant":"fair_mudharabah","model":{"kind":"fixed_rho","rho":0}}"#
        )
        .is_err());
        assert!(parse(r#"{"schema":1,"variant":"fair_mudharabah","colour":1,"model":{"kind":"fixed_rho","rho":0}}"#).is_err());
    }

    #[test]
    fn analytic_models_need_capital_amount() {
        let c = parse(
            r#"{"schema":1,"variant":"fair_mudharabah",
                "model":{"kind":"two_point","beta":0.6,"r_plus":120,"r_minus":90}}"#,
        )
        .unwrap();
        assert!(c.profile(None).is_err());
        let c = parse(
            r#"{"schema":1,"variant":"fair_mudharabah","capital_amount":100,
                "model":{"kind":"two_point","beta":0.6,"r_plus":120,"r_minus":90}}"#,
        )
        .unwrap();
        assert!((c.profile(None).unwrap().rho() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empirical_inline_draws() {
        let c = parse(
            r#"{"schema":1,"variant":"fair_mudharabah","capital_amount":100,
                "model":{"kind":"empirical","draws":[120,90]}}"#,
        )
        .unwrap();
        assert_eq!(c.profile(None).unwrap().rho(), 0.5);
    }
}
