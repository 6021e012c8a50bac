//! Shared domain types: covariates, potential outcomes, experts, and
//! trajectories.
//!
//! Arm indices are 1-based wherever they appear in public records and errors;
//! positions inside probability vectors are plain 0-based vector indices.
//! All types here are immutable after construction and safe to share across
//! threads.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for "sums to one" checks on expert recommendations.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// A subject's covariates, a real vector of fixed length J.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateVector {
    pub values: Vec<f64>,
}

impl CovariateVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "covariates must be finite".to_string(),
            ));
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// The augmented row (1, xᵀ) used by linear eligibility scores.
    pub fn augmented(&self) -> Vec<f64> {
        let mut row = Vec::with_capacity(self.values.len() + 1);
        row.push(1.0);
        row.extend_from_slice(&self.values);
        row
    }
}

/// Potential outcomes, one per arm, in welfare units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialOutcomes {
    pub values: Vec<f64>,
}

impl PotentialOutcomes {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "potential outcomes must be finite".to_string(),
            ));
        }
        Ok(Self { values })
    }

    pub fn arms(&self) -> usize {
        self.values.len()
    }

    /// Checks the bounded-outcome envelope `0 <= y(k) <= cap` for every arm.
    pub fn check_envelope(&self, cap: f64, period: usize) -> Result<()> {
        for &v in &self.values {
            if !(0.0..=cap).contains(&v) {
                return Err(Error::OutcomeOutOfRange {
                    period,
                    value: v,
                    cap,
                });
            }
        }
        Ok(())
    }
}

/// A probability vector over the K arms produced by an expert.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertRecommendation {
    pub probs: Vec<f64>,
}

impl ExpertRecommendation {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty {
                what: "recommendation",
            });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter(
                "recommendation entries must be finite and nonnegative".to_string(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "recommendation sums to {sum}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Point mass on `arm` (1-based) among `k` arms.
    pub fn point_mass(arm: usize, k: usize) -> Result<Self> {
        if arm == 0 || arm > k {
            return Err(Error::InvalidParameter(format!(
                "arm {arm} outside 1..={k}"
            )));
        }
        let mut probs = vec![0.0; k];
        probs[arm - 1] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Self {
        Self {
            probs: vec![1.0 / k as f64; k],
        }
    }

    pub fn arms(&self) -> usize {
        self.probs.len()
    }
}

type RecommendFn = dyn Fn(&CovariateVector, usize) -> Result<ExpertRecommendation> + Send + Sync;

/// A time-invariant map from covariates to a distribution over arms.
#[derive(Clone)]
pub enum Expert {
    /// Exact lookup table from covariate vectors to a 1-based arm.
    Table(Vec<(CovariateVector, usize)>),
    /// Linear eligibility score: arm 2 ("treated") iff (1, xᵀ)β >= 0,
    /// arm 1 otherwise. Coefficients have length J + 1.
    LesRule(Vec<f64>),
    /// Equal probability on every arm.
    UniformRandom,
    /// Arbitrary user-supplied recommendation function.
    Custom(Arc<RecommendFn>),
}

impl fmt::Debug for Expert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expert::Table(rows) => write!(f, "Table({} rows)", rows.len()),
            Expert::LesRule(c) => write!(f, "LesRule({c:?})"),
            Expert::UniformRandom => write!(f, "UniformRandom"),
            Expert::Custom(_) => write!(f, "Custom(<fn>)"),
        }
    }
}

impl Expert {
    /// The expert's recommendation at `x` over `k` arms.
    pub fn recommend(&self, x: &CovariateVector, k: usize) -> Result<ExpertRecommendation> {
        if k == 0 {
            return Err(Error::Empty { what: "arm set" });
        }
        match self {
            Expert::Table(_) | Expert::LesRule(_) => {
                let arm = self
                    .deterministic_arm(x)?
                    .expect("table and LES experts are deterministic");
                if arm >= k {
                    return Err(Error::InvalidParameter(format!(
                        "table assigns arm {} but only {k} arms exist",
                        arm + 1
                    )));
                }
                ExpertRecommendation::point_mass(arm + 1, k)
            }
            Expert::UniformRandom => Ok(ExpertRecommendation::uniform(k)),
            Expert::Custom(fun) => {
                let rec = fun(x, k)?;
                if rec.arms() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        actual: rec.arms(),
                    });
                }
                // Revalidate: custom closures are untrusted.
                ExpertRecommendation::new(rec.probs)
            }
        }
    }

    /// Fast path for deterministic experts: the 0-based arm the expert puts
    /// all mass on, or `None` when the expert randomises.
    pub(crate) fn deterministic_arm(&self, x: &CovariateVector) -> Result<Option<usize>> {
        match self {
            Expert::Table(rows) => {
                for (key, arm) in rows {
                    if key.values == x.values {
                        if *arm == 0 {
                            return Err(Error::InvalidParameter(
                                "table arms are 1-based".to_string(),
                            ));
                        }
                        return Ok(Some(arm - 1));
                    }
                }
                Err(Error::UnknownCovariate)
            }
            Expert::LesRule(coeffs) => {
                if coeffs.len() != x.dim() + 1 {
                    return Err(Error::DimensionMismatch {
                        expected: coeffs.len() - 1,
                        actual: x.dim(),
                    });
                }
                let index: f64 = coeffs[0]
                    + coeffs[1..]
                        .iter()
                        .zip(&x.values)
                        .map(|(c, v)| c * v)
                        .sum::<f64>();
                // The boundary (index exactly zero) maps to the treated arm.
                Ok(Some(if index >= 0.0 { 1 } else { 0 }))
            }
            Expert::UniformRandom | Expert::Custom(_) => Ok(None),
        }
    }
}

/// A roster of experts: explicitly finite, or the linear eligibility-score
/// family represented intensionally and materialised by coarsening.
#[derive(Debug, Clone)]
pub enum ExpertClass {
    Finite(Vec<Expert>),
    Les { j: usize },
}

impl ExpertClass {
    pub fn validate(&self) -> Result<()> {
        match self {
            ExpertClass::Finite(experts) if experts.is_empty() => {
                Err(Error::Empty { what: "expert class" })
            }
            ExpertClass::Les { j: 0 } => Err(Error::InvalidParameter(
                "LES class needs at least one covariate".to_string(),
            )),
            _ => Ok(()),
        }
    }

    /// VC dimension of the class of induced treated sets, where defined.
    pub fn vc_dimension(&self) -> Option<usize> {
        match self {
            ExpertClass::Les { j } => Some(j + 1),
            ExpertClass::Finite(_) => None,
        }
    }
}

/// One period of a run: what the planner saw, did, and observed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodRecord {
    /// 1-based period index.
    pub t: usize,
    pub x: CovariateVector,
    /// Assignment probabilities used for the draw.
    pub p: Vec<f64>,
    /// Pulled arm, 1-based.
    pub arm: usize,
    /// Realised outcome `y_t(k_t)`.
    pub realized: f64,
    /// Full potential-outcome vector; present only for simulated data.
    pub counterfactuals: Option<PotentialOutcomes>,
}

/// The complete record of a run, in arrival order.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub periods: Vec<PeriodRecord>,
    /// Periods `1..=phase_boundary` form the coarsening phase, if any.
    pub phase_boundary: Option<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// Cumulative realised outcome over all periods.
    pub fn realized_sum(&self) -> f64 {
        self.periods.iter().map(|p| p.realized).sum()
    }

    pub fn has_counterfactuals(&self) -> bool {
        self.periods.iter().all(|p| p.counterfactuals.is_some())
    }

    /// Checks the structural invariants: contiguous 1-based periods,
    /// probability vectors summing to one, arms in range, and realised
    /// outcomes agreeing with the stored counterfactuals.
    pub fn validate(&self) -> Result<()> {
        for (i, rec) in self.periods.iter().enumerate() {
            if rec.t != i + 1 {
                return Err(Error::Malformed {
                    row: i + 1,
                    message: format!("period index {} out of order", rec.t),
                });
            }
            let sum: f64 = rec.p.iter().sum();
            if (sum - 1.0).abs() > 1e-10 {
                return Err(Error::Malformed {
                    row: rec.t,
                    message: format!("assignment probabilities sum to {sum}"),
                });
            }
            if rec.arm == 0 || rec.arm > rec.p.len() {
                return Err(Error::Malformed {
                    row: rec.t,
                    message: format!("arm {} outside 1..={}", rec.arm, rec.p.len()),
                });
            }
            if let Some(cf) = &rec.counterfactuals {
                if (cf.values[rec.arm - 1] - rec.realized).abs() > 0.0 {
                    return Err(Error::Malformed {
                        row: rec.t,
                        message: "realized outcome disagrees with counterfactuals".to_string(),
                    });
                }
            }
        }
        if let Some(b) = self.phase_boundary {
            if b == 0 || b > self.periods.len() {
                return Err(Error::Malformed {
                    row: b,
                    message: "phase boundary outside trajectory".to_string(),
                });
            }
        }
        Ok(())
    }
}
