//! Independent check of the closed forms.
//!
//! The fairness conditions `c_1 Pay_1 = … = c_d Pay_d` are assembled as a
//! dense linear system straight from the payoff definitions and solved by
//! Gaussian elimination. Nothing here calls into the ratio engine.

use serde::{Deserialize, Serialize};

use crate::domain::{
    Allocation, CapitalShares, ContractSpec, RatingVector, RiskProfile, WakalahTerms,
};
use crate::error::{Error, Result};

/// Square linear system `matrix · x = rhs`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessSystem {
    n: usize,
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    labels: Vec<String>,
}

impl FairnessSystem {
    pub fn new(matrix: Vec<Vec<f64>>, rhs: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        let n = rhs.len();
        if matrix.len() != n || labels.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "system with {n} right-hand sides, {} rows and {} labels is not square",
                matrix.len(),
                labels.len()
            )));
        }
        Ok(Self {
            n,
            matrix: matrix.into_iter().flatten().collect(),
            rhs,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.n + col]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Gaussian elimination with partial pivoting on a private copy.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let mut a = self.matrix.clone();
        let mut b = self.rhs.clone();
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Err(Error::Singular(0));
        }
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .expect("non-empty pivot range");
            if a[pivot * n + col].abs() <= 1e-14 * scale {
                return Err(Error::Singular(col));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                b.swap(col, pivot);
            }
            let p = a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor == 0.0 {
                    continue;
                }
                a[row * n + col] = 0.0;
                for j in col + 1..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
                b[row] -= factor * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let tail: f64 = (row + 1..n).map(|j| a[row * n + j] * x[j]).sum();
            x[row] = (b[row] - tail) / a[row * n + row];
        }
        Ok(x)
    }

    /// `max_i |(A x − b)_i|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| {
                let ax: f64 = (0..self.n).map(|j| self.entry(i, j) * x[j]).sum();
                (ax - self.rhs[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn check_profit(e_profit: f64, e_loss: f64) -> Result<()> {
    if !(e_profit > 0.0 && e_profit.is_finite()) || !(e_loss >= 0.0 && e_loss.is_finite()) {
        return Err(Error::Degenerate(format!(
            "need E(R_T - L)^+ > 0 and E(L - R_T)^+ >= 0, got {e_profit} and {e_loss}"
        )));
    }
    Ok(())
}

/// Rows `c_ℓ Pay_ℓ − c_1 Pay_1 = 0` for `ℓ = 2..d` with
/// `Pay_ℓ = γ_ℓ E⁺ − κ_ℓ E⁻`, closed by `Σ γ = 1`.
pub fn assemble_fairness_system(
    c: &RatingVector,
    kappa: &CapitalShares,
    e_profit: f64,
    e_loss: f64,
) -> Result<FairnessSystem> {
    let d = c.len();
    if kappa.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{d} ratings but {} capital shares",
            kappa.len()
        )));
    }
    check_profit(e_profit, e_loss)?;
    let (c, k) = (c.values(), kappa.values());
    let mut matrix = vec![vec![0.0; d]; d];
    let mut rhs = vec![0.0; d];
    for l in 1..d {
        let row = &mut matrix[l - 1];
        row[0] = -c[0] * e_profit;
        row[l] = c[l] * e_profit;
        rhs[l - 1] = (c[l] * k[l] - c[0] * k[0]) * e_loss;
    }
    matrix[d - 1] = vec![1.0; d];
    rhs[d - 1] = 1.0;
    let labels = (1..=d).map(|i| format!("gamma_{i}")).collect();
    FairnessSystem::new(matrix, rhs, labels)
}

pub fn solve_fairness_system(
    c: &RatingVector,
    kappa: &CapitalShares,
    e_profit: f64,
    e_loss: f64,
) -> Result<Vec<f64>> {
    assemble_fairness_system(c, kappa, e_profit, e_loss)?.solve()
}

/// Present value of `k` unit payments by direct summation.
fn payment_stream_pv(terms: &WakalahTerms) -> f64 {
    let k = terms.k();
    let growth = 1.0 + terms.r();
    (1..=k)
        .map(|i| growth.powf(-(f64::from(i)) * terms.maturity() / f64::from(k)))
        .sum()
}

/// Wakalah rows for funders `ℓ = 1..d−1`:
/// `c_ℓ (D (γ_ℓ E⁺ − κ_ℓ E⁻) − A p/(d − 1)) = c_d A p`, with `D = (1 + r)^{−T}`
/// and `A` the present value of the payment stream; closed by `Σ γ = 1`.
/// Unknowns are `(γ_1, …, γ_{d−1}, p)`.
pub fn assemble_wakalah_system(
    c: &RatingVector,
    kappa: &CapitalShares,
    e_profit: f64,
    e_loss: f64,
    terms: &WakalahTerms,
) -> Result<FairnessSystem> {
    let d = c.len();
    if kappa.len() + 1 != d {
        return Err(Error::DimensionMismatch(format!(
            "{d} ratings need {} funder capital shares, got {}",
            d - 1,
            kappa.len()
        )));
    }
    check_profit(e_profit, e_loss)?;
    let (c, k) = (c.values(), kappa.values());
    let discount = terms.maturity_discount();
    let annuity = payment_stream_pv(terms);
    let funders = (d - 1) as f64;
    let mut matrix = vec![vec![0.0; d]; d];
    let mut rhs = vec![0.0; d];
    for l in 0..d - 1 {
        matrix[l][l] = c[l] * discount * e_profit;
        matrix[l][d - 1] = -(c[l] / funders + c[d - 1]) * annuity;
        rhs[l] = c[l] * discount * k[l] * e_loss;
    }
    matrix[d - 1][..d - 1].fill(1.0);
    rhs[d - 1] = 1.0;
    let mut labels: Vec<String> = (1..d).map(|i| format!("gamma_{i}")).collect();
    labels.push("p".into());
    FairnessSystem::new(matrix, rhs, labels)
}

pub fn solve_wakalah_system(
    c: &RatingVector,
    kappa: &CapitalShares,
    e_profit: f64,
    e_loss: f64,
    terms: &WakalahTerms,
) -> Result<(Vec<f64>, f64)> {
    let mut x = assemble_wakalah_system(c, kappa, e_profit, e_loss, terms)?.solve()?;
    let p = x.pop().expect("wakalah system has a payment unknown");
    Ok((x, p))
}

/// Expected payoff of every partner implied by the ratios `gammas`.
///
/// Without wakalah terms: `Pay_ℓ = γ_ℓ E⁺ − κ_ℓ E⁻` at maturity, with `kappa`
/// covering all partners. With wakalah terms and payment `p`: present values
/// for the `d − 1` funders followed by the manager's `A p`.
pub fn implied_payoffs(
    kappa: &[f64],
    profile: &RiskProfile,
    gammas: &[f64],
    wakalah: Option<(&WakalahTerms, f64)>,
) -> Vec<f64> {
    let (ep, el) = (profile.e_profit(), profile.e_loss());
    let base = gammas.iter().zip(kappa).map(|(g, k)| g * ep - k * el);
    match wakalah {
        None => base.collect(),
        Some((terms, p)) => {
            let discount = terms.maturity_discount();
            let manager = payment_stream_pv(terms) * p;
            let share = manager / gammas.len() as f64;
            base.map(|pay| discount * pay - share)
                .chain(std::iter::once(manager))
                .collect()
        }
    }
}

/// Spread `max − min` of the rated payoffs `c_ℓ Pay_ℓ`, divided by the
/// largest rating so the figure is in currency units and independent of the
/// rating scale.
pub fn fairness_residual(
    ratings: &[f64],
    kappa: &[f64],
    profile: &RiskProfile,
    gammas: &[f64],
    wakalah: Option<(&WakalahTerms, f64)>,
) -> f64 {
    let payoffs = implied_payoffs(kappa, profile, gammas, wakalah);
    debug_assert_eq!(payoffs.len(), ratings.len());
    let (lo, hi) = payoffs
        .iter()
        .zip(ratings)
        .map(|(p, c)| p * c)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    let top = ratings.iter().copied().fold(0.0, f64::max);
    (hi - lo) / top
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Currency units.
    pub max_fairness_residual: f64,
    /// `max_fairness_residual / E(R_T − L)^+`.
    pub relative_fairness_residual: f64,
    /// `|Σ γ − 1|`.
    pub simplex_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Substitutes the ratios (and payment, for wakalah) of `alloc` back into
/// the fairness conditions of `spec`. Passes when both the relative fairness
/// residual and the simplex residual are within `tol`.
pub fn verify_allocation(
    alloc: &Allocation,
    spec: &ContractSpec,
    profile: &RiskProfile,
    tol: f64,
) -> Result<VerificationReport> {
    if alloc.gammas.len() != spec.ratio_count() {
        return Err(Error::DimensionMismatch(format!(
            "contract determines {} ratios, allocation has {}",
            spec.ratio_count(),
            alloc.gammas.len()
        )));
    }
    let wakalah = match (spec.wakalah(), alloc.periodic_payment) {
        (Some(terms), Some(p)) => Some((terms, p)),
        (Some(_), None) => {
            return Err(Error::InvalidParameter(
                "a wakalah allocation needs the periodic payment".into(),
            ))
        }
        (None, _) => None,
    };
    let kappa = if wakalah.is_some() {
        spec.capital().clone()
    } else {
        spec.capital_of_all()
    };
    let residual = fairness_residual(
        spec.ratings().values(),
        kappa.values(),
        profile,
        &alloc.gammas,
        wakalah,
    );
    let relative = residual / profile.e_profit();
    let simplex = (alloc.gammas.iter().sum::<f64>() - 1.0).abs();
    Ok(VerificationReport {
        max_fairness_residual: residual,
        relative_fairness_residual: relative,
        simplex_residual: simplex,
        tolerance: tol,
        pass: relative <= tol && simplex <= tol,
    })
}
