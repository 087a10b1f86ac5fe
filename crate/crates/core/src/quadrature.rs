//! Composite Gauss-Legendre integration over the open unit interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Newton on P_n starting from the Tricomi estimate
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shape of the composite rule.
///
/// `grading` is the exponent `m` of the endpoint-clustering substitution
/// `p = t^m / (t^m + (1 - t)^m)`; `1` gives plain uniform panels. The
/// equality curves can have square-root or logarithmic behaviour at the
/// ends of (0, 1) and the substitution restores fast convergence there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub nodes: usize,
    pub grading: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            panels: 512,
            nodes: 8,
            grading: 2,
        }
    }
}

impl QuadratureConfig {
    pub fn new(panels: usize, nodes: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            panels,
            nodes,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_grading(mut self, grading: u32) -> Result<Self> {
        self.grading = grading;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels < 1 {
            return Err(Error::InvalidQuadrature("panels must be at least 1".into()));
        }
        if self.nodes < 2 {
            return Err(Error::InvalidQuadrature(
                "nodes per panel must be at least 2".into(),
            ));
        }
        if self.grading < 1 {
            return Err(Error::InvalidQuadrature("grading must be at least 1".into()));
        }
        Ok(())
    }
}

/// Precomputed abscissae and weights on (0, 1).
#[derive(Debug, Clone)]
pub struct UnitRule {
    points: Vec<(f64, f64)>,
}

impl UnitRule {
    pub fn new(cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let (nodes, weights) = gauss_legendre(cfg.nodes);
        let m = cfg.grading as i32;
        let h = 1.0 / cfg.panels as f64;
        let mut points = Vec::with_capacity(cfg.panels * cfg.nodes);
        for panel in 0..cfg.panels {
            let mid = (panel as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(&weights) {
                let t = mid + 0.5 * h * x;
                let (p, jac) = if m == 1 {
                    (t, 1.0)
                } else {
                    let a = t.powi(m);
                    let b = (1.0 - t).powi(m);
                    let s = a + b;
                    let jac = m as f64 * t.powi(m - 1) * (1.0 - t).powi(m - 1) / (s * s);
                    (a / s, jac)
                };
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::InvalidQuadrature(format!(
                        "node {p} not strictly inside (0, 1); reduce panels or grading"
                    )));
                }
                points.push((p, 0.5 * h * w * jac));
            }
        }
        Ok(UnitRule { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Integral over (0, 1); the integrand is only evaluated at interior nodes.
    pub fn integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut sum = 0.0;
        for &(p, w) in &self.points {
            sum += w * f(p)?;
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small_orders() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_eq!(x[1], 0.0);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in 2..20 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            // degree 2n-1 monomial with even power
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn unit_rule_integrates_smooth_and_singular() {
        let rule = UnitRule::new(&QuadratureConfig::default()).unwrap();
        let v = rule.integrate(|p| Ok(p * p)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
        let v = rule.integrate(|p| Ok(p.sqrt())).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let v = rule.integrate(|p| Ok(-p.ln())).unwrap();
        // log singularity at 0
        assert!((v - 1.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0, 8).is_err());
        assert!(QuadratureConfig::new(1, 1).is_err());
        assert!(QuadratureConfig::new(1, 2).is_ok());
        assert!(QuadratureConfig::default().with_grading(0).is_err());
        let coarse = QuadratureConfig::new(1, 2).unwrap();
        let rule = UnitRule::new(&coarse).unwrap();
        assert_eq!(rule.points().len(), 2);
        assert!(rule.points().iter().all(|&(p, _)| p > 0.0 && p < 1.0));
    }
}
