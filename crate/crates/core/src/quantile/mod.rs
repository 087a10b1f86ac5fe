//! Parametric income distributions described through their quantile
//! functions.

pub mod special;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use special::{inverse_normal_cdf, inverse_reg_gamma, normal_cdf, reg_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Uniform,
    Exponential,
    Gamma,
    Weibull,
    Lognormal,
    LogCauchy,
    ParetoII,
    ParetoIII,
    ParetoIV,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Uniform,
        Family::Exponential,
        Family::Gamma,
        Family::Weibull,
        Family::Lognormal,
        Family::LogCauchy,
        Family::ParetoII,
        Family::ParetoIII,
        Family::ParetoIV,
    ];

    /// Parameter names in canonical order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Uniform | Family::Exponential => &["theta"],
            Family::Gamma => &["theta", "alpha"],
            Family::Weibull => &["theta", "tau"],
            Family::Lognormal | Family::LogCauchy => &["mu", "sigma"],
            Family::ParetoII => &["sigma", "alpha"],
            Family::ParetoIII => &["sigma", "gamma"],
            Family::ParetoIV => &["sigma", "alpha", "gamma"],
        }
    }

    /// Name of the parameter that multiplies the quantile function, or `None`
    /// for the log-location families where `mu` plays that role additively.
    pub fn scale_param(self) -> Option<&'static str> {
        match self {
            Family::Uniform | Family::Exponential | Family::Gamma | Family::Weibull => {
                Some("theta")
            }
            Family::ParetoII | Family::ParetoIII | Family::ParetoIV => Some("sigma"),
            Family::Lognormal | Family::LogCauchy => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "Uniform",
            Family::Exponential => "Exponential",
            Family::Gamma => "Gamma",
            Family::Weibull => "Weibull",
            Family::Lognormal => "Lognormal",
            Family::LogCauchy => "Log-Cauchy",
            Family::ParetoII => "Pareto-II",
            Family::ParetoIII => "Pareto-III",
            Family::ParetoIV => "Pareto-IV",
        }
    }

    fn is_log_family(self) -> bool {
        matches!(self, Family::Lognormal | Family::LogCauchy)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let family = match key.as_str() {
            "uniform" => Family::Uniform,
            "exponential" | "exp" => Family::Exponential,
            "gamma" => Family::Gamma,
            "weibull" => Family::Weibull,
            "lognormal" => Family::Lognormal,
            "logcauchy" => Family::LogCauchy,
            "paretoii" | "pareto2" => Family::ParetoII,
            "paretoiii" | "pareto3" => Family::ParetoIII,
            "paretoiv" | "pareto4" => Family::ParetoIV,
            _ => return Err(Error::UnknownFamily(s.to_string())),
        };
        Ok(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated member of one of the nine families.
///
/// Parameters are kept exactly as supplied and in the family's canonical
/// order; no family is rewritten in terms of another.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileModel {
    family: Family,
    params: Vec<f64>,
}

impl QuantileModel {
    /// Builds a model from named parameters. Names are matched
    /// case-insensitively and may come in any order.
    pub fn new(family: Family, named: &[(&str, f64)]) -> Result<Self> {
        let names = family.param_names();
        let mut params = vec![None; names.len()];
        for (raw, value) in named {
            let lower = raw.to_ascii_lowercase();
            let slot = names.iter().position(|n| *n == lower).ok_or_else(|| {
                Error::UnexpectedParameter {
                    family: family.name(),
                    name: raw.to_string(),
                }
            })?;
            if params[slot].is_some() {
                return Err(Error::DuplicateParameter {
                    family: family.name(),
                    name: raw.to_string(),
                });
            }
            params[slot] = Some(*value);
        }
        let params = params
            .into_iter()
            .zip(names)
            .map(|(v, name)| {
                v.ok_or(Error::MissingParameter {
                    family: family.name(),
                    name,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        for (name, &value) in names.iter().zip(&params) {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: name.to_string(),
                    value,
                    reason: "must be finite",
                });
            }
            if *name != "mu" && value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.to_string(),
                    value,
                    reason: "scale and shape parameters must be positive",
                });
            }
        }
        Ok(QuantileModel { family, params })
    }

    pub fn uniform(theta: f64) -> Result<Self> {
        Self::new(Family::Uniform, &[("theta", theta)])
    }

    pub fn exponential(theta: f64) -> Result<Self> {
        Self::new(Family::Exponential, &[("theta", theta)])
    }

    pub fn gamma(theta: f64, alpha: f64) -> Result<Self> {
        Self::new(Family::Gamma, &[("theta", theta), ("alpha", alpha)])
    }

    pub fn weibull(theta: f64, tau: f64) -> Result<Self> {
        Self::new(Family::Weibull, &[("theta", theta), ("tau", tau)])
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Lognormal, &[("mu", mu), ("sigma", sigma)])
    }

    pub fn log_cauchy(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::LogCauchy, &[("mu", mu), ("sigma", sigma)])
    }

    pub fn pareto_ii(sigma: f64, alpha: f64) -> Result<Self> {
        Self::new(Family::ParetoII, &[("sigma", sigma), ("alpha", alpha)])
    }

    pub fn pareto_iii(sigma: f64, gamma: f64) -> Result<Self> {
        Self::new(Family::ParetoIII, &[("sigma", sigma), ("gamma", gamma)])
    }

    pub fn pareto_iv(sigma: f64, alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(
            Family::ParetoIV,
            &[("sigma", sigma), ("alpha", alpha), ("gamma", gamma)],
        )
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        let name = name.to_ascii_lowercase();
        self.family
            .param_names()
            .iter()
            .position(|n| *n == name)
            .map(|i| self.params[i])
    }

    pub fn params(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        self.family
            .param_names()
            .iter()
            .copied()
            .zip(self.params.iter().copied())
    }

    /// Returns a copy with one parameter replaced, revalidated.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut named: Vec<(&str, f64)> = self.params().collect();
        let lower = name.to_ascii_lowercase();
        match named.iter_mut().find(|(n, _)| *n == lower) {
            Some(slot) => slot.1 = value,
            None => {
                return Err(Error::UnexpectedParameter {
                    family: self.family.name(),
                    name: name.to_string(),
                })
            }
        }
        Self::new(self.family, &named)
    }

    fn p(&self, i: usize) -> f64 {
        self.params[i]
    }

    /// Q(p) for 0 < p < 1.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_open_unit(p)?;
        let q = match self.family {
            Family::Uniform => self.p(0) * p,
            Family::Exponential => -self.p(0) * (-p).ln_1p(),
            Family::Gamma => self.p(0) * inverse_reg_gamma(self.p(1), p)?,
            Family::Weibull => self.p(0) * (-(-p).ln_1p()).powf(1.0 / self.p(1)),
            Family::Lognormal | Family::LogCauchy => {
                (self.p(0) + self.p(1) * self.log_deviate(p)?).exp()
            }
            Family::ParetoII => self.p(0) * pareto_core(p, self.p(1)),
            Family::ParetoIII => self.p(0) * (p / (1.0 - p)).powf(self.p(1)),
            Family::ParetoIV => self.p(0) * pareto_core(p, self.p(1)).powf(self.p(2)),
        };
        Ok(q)
    }

    /// Standardised deviate of the log families: ln Q(p) = mu + sigma * z(p).
    fn log_deviate(&self, p: f64) -> Result<f64> {
        match self.family {
            Family::Lognormal => inverse_normal_cdf(p),
            Family::LogCauchy => Ok((std::f64::consts::PI * (p - 0.5)).tan()),
            _ => unreachable!("log_deviate called on {}", self.family),
        }
    }

    /// Q(a) / Q(b) for a <= b, evaluated on the log scale for the log
    /// families so that far tails neither overflow nor underflow early.
    pub(crate) fn quantile_ratio(&self, a: f64, b: f64) -> Result<f64> {
        if self.family.is_log_family() {
            check_open_unit(a)?;
            check_open_unit(b)?;
            let diff = self.log_deviate(a)? - self.log_deviate(b)?;
            return Ok((self.p(1) * diff).exp());
        }
        let num = self.quantile(a)?;
        let den = self.quantile(b)?;
        if den == 0.0 {
            return Err(Error::ZeroDenominator {
                context: "model",
                term: format!("Q({b}) = 0"),
            });
        }
        Ok(num / den)
    }

    /// Short label in the style `Pareto-IV(sigma=1, alpha=2, gamma=2)`.
    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Spec string accepted by [`QuantileModel::from_str`].
    pub fn spec_string(&self) -> String {
        let family = match self.family {
            Family::Uniform => "uniform",
            Family::Exponential => "exponential",
            Family::Gamma => "gamma",
            Family::Weibull => "weibull",
            Family::Lognormal => "lognormal",
            Family::LogCauchy => "logcauchy",
            Family::ParetoII => "paretoII",
            Family::ParetoIII => "paretoIII",
            Family::ParetoIV => "paretoIV",
        };
        let params: Vec<String> = self.params().map(|(n, v)| format!("{n}={v}")).collect();
        format!("{family}:{}", params.join(","))
    }
}

// (1 - p)^(-1/alpha) - 1 without cancellation for small p.
fn pareto_core(p: f64, alpha: f64) -> f64 {
    (-(-p).ln_1p() / alpha).exp_m1()
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

impl fmt::Display for QuantileModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family.name())?;
        for (i, (name, value)) in self.params().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        f.write_str(")")
    }
}

/// Parses `family:name=value,name=value`, e.g. `paretoIV:sigma=1,alpha=2,gamma=2`.
impl FromStr for QuantileModel {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let malformed = |reason: String| Error::ModelSpec {
            spec: spec.to_string(),
            reason,
        };
        let (family, rest) = spec
            .split_once(':')
            .ok_or_else(|| malformed("expected `family:name=value,...`".into()))?;
        let family: Family = family.trim().parse()?;
        let mut named = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| malformed(format!("`{item}` is not name=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| malformed(format!("`{}` is not a number", value.trim())))?;
            named.push((name.trim(), value));
        }
        QuantileModel::new(family, &named)
    }
}
