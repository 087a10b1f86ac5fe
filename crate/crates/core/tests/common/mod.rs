//! Reference data and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;

/// Published three-index table: label, (Ψ1, Ψ2, Ψ3), rank strings.
pub const TABLE1: [(&str, [f64; 3], [&str; 3]); 16] = [
    ("Uniform(0, theta)", [0.5010, 0.6936, 0.6147], ["6", "2", "3-4"]),
    ("Exponential(0, theta)", [0.5583, 0.8327, 0.7026], ["7", "7", "7"]),
    ("Gamma(theta, alpha=0.5)", [0.6874, 0.9378, 0.8020], ["12", "10", "11"]),
    ("Gamma(theta, alpha=2)", [0.4360, 0.6974, 0.5956], ["3", "3", "2"]),
    ("Weibull(theta, tau=0.5)", [0.7237, 0.9681, 0.8358], ["13", "13", "13"]),
    ("Weibull(theta, tau=2)", [0.3810, 0.6022, 0.5239], ["1", "1", "1"]),
    ("Lognormal(mu, sigma=1)", [0.4779, 0.7886, 0.6648], ["4", "5", "5"]),
    ("Lognormal(mu, sigma=2)", [0.6648, 0.9527, 0.8122], ["11", "12", "12"]),
    ("Log-Cauchy(mu, sigma=1)", [0.6054, 0.9382, 0.7470], ["9", "11", "9"]),
    ("Log-Cauchy(mu, sigma=2)", [0.7470, 0.9935, 0.8551], ["14", "16", "14"]),
    ("Pareto-II(sigma, alpha=1)", [0.6147, 0.9242, 0.7736], ["10", "9", "10"]),
    ("Pareto-II(sigma, alpha=2)", [0.5868, 0.8863, 0.7407], ["8", "8", "8"]),
    ("Pareto-III(sigma, gamma=0.5)", [0.4302, 0.7344, 0.6147], ["2", "4", "3-4"]),
    ("Pareto-III(sigma, gamma=2)", [0.7736, 0.9932, 0.8795], ["16", "15", "16"]),
    ("Pareto-IV(sigma, alpha=0.5, gamma=0.5)", [0.4803, 0.8288, 0.6887], ["5", "6", "6"]),
    ("Pareto-IV(sigma, alpha=2, gamma=2)", [0.7495, 0.9852, 0.8598], ["15", "14", "15"]),
];

pub const TABLE1_TOLERANCE: f64 = 2e-3;

pub const EXAMPLE: [f64; 7] = [1.0, 3.0, 5.0, 7.0, 10.0, 20.0, 24.0];

/// The six income vectors of the worked transfer example.
pub const TABLE4_VECTORS: [[f64; 7]; 6] = [
    [1.0, 3.0, 5.0, 7.0, 10.0, 20.0, 24.0],
    [1.0, 3.0, 5.0, 7.0, 12.0, 18.0, 24.0],
    [1.0, 3.0, 5.0, 7.0, 14.0, 16.0, 24.0],
    [1.0, 3.0, 6.0, 7.0, 9.0, 20.0, 24.0],
    [1.0, 5.0, 6.0, 7.0, 9.0, 18.0, 24.0],
    [4.0, 5.0, 6.0, 7.0, 9.0, 18.0, 21.0],
];

/// Rows Ψ1, Ψ2, Ψ3; columns follow `TABLE4_VECTORS`.
pub const TABLE4: [[f64; 6]; 3] = [
    [0.5714, 0.5714, 0.5714, 0.5238, 0.4286, 0.2857],
    [0.8472, 0.8472, 0.8442, 0.8296, 0.7870, 0.6640],
    [0.7694, 0.7917, 0.8046, 0.7139, 0.6713, 0.6217],
];

/// Six-step plan from the example sample, as (L, H, c), with Ψ2 after each step.
pub const SIX_STEP_PLAN: [(usize, usize, f64); 6] = [
    (5, 6, 3.0),
    (6, 7, 3.0),
    (3, 6, 1.0),
    (2, 6, 1.0),
    (2, 5, 1.0),
    (1, 5, 3.0),
];
pub const SIX_STEP_PSI2: [f64; 6] = [0.8461, 0.8450, 0.8265, 0.8050, 0.7844, 0.6640];

/// Three-step plan through the third, fourth and fifth vectors.
pub const THREE_STEP_PLAN: [(usize, usize, f64); 3] = [(3, 5, 1.0), (2, 6, 2.0), (1, 7, 3.0)];
pub const THREE_STEP_PSI2: [f64; 3] = [0.8296, 0.7870, 0.6640];

/// Rounds half away from zero to `d` decimals, as printed tables do.
pub fn round_to(v: f64, d: i32) -> f64 {
    let s = 10f64.powi(d);
    (v * s).round() / s
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Gini from all pairwise differences: sum |xi - xj| / (2 n^2 mean).
pub fn brute_gini(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let pair: f64 = xs.iter().map(|a| xs.iter().map(|b| (a - b).abs()).sum::<f64>()).sum();
    pair / (2.0 * n * n * mean)
}

/// Zenga index by re-summing every lower and upper group.
pub fn brute_zenga(xs: &[f64]) -> f64 {
    let v = sorted(xs);
    let n = v.len();
    let mut acc = 0.0;
    for i in 1..n {
        let lower: f64 = v[..i].iter().sum::<f64>() / i as f64;
        let upper: f64 = v[i..].iter().sum::<f64>() / (n - i) as f64;
        acc += lower / upper;
    }
    1.0 - acc / n as f64
}

/// Davydov-Greselin index by re-summing the i poorest and the i richest.
pub fn brute_dg(xs: &[f64]) -> f64 {
    let v = sorted(xs);
    let n = v.len();
    let mut acc = 0.0;
    for i in 1..=n {
        let poor: f64 = v[..i].iter().sum();
        let rich: f64 = v[n - i..].iter().sum();
        acc += poor / rich;
    }
    1.0 - acc / n as f64
}

/// Median-normalised Gini mean difference, without the small-sample term:
/// (pairwise Gini - 1/n) * mean / median.
pub fn brute_g2(xs: &[f64]) -> f64 {
    let v = sorted(xs);
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let median = v[n.div_ceil(2) - 1];
    (brute_gini(&v) - 1.0 / n as f64) * mean / median
}

/// Median-based index read directly off a freshly sorted copy.
pub fn brute_psi(xs: &[f64], k: u32) -> f64 {
    let v = sorted(xs);
    let n = v.len();
    let q = |rank: usize| v[rank - 1];
    let m = n.div_ceil(2);
    let half = n / 2;
    let mut acc = 0.0;
    for j in 1..=half {
        let den = match k {
            1 => q(m),
            2 => q(m + j),
            _ => q(n + 1 - j),
        };
        acc += q(j) / den;
    }
    1.0 - acc / half as f64
}

/// Strictly increasing sample with gaps in [1, 10] above a start in [0, 10).
pub fn increasing_sample<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut x = rng.random_range(0.0..10.0);
    (0..n)
        .map(|_| {
            let v = x;
            x += rng.random_range(1.0..10.0);
            v
        })
        .collect()
}

/// Positive Pareto-tailed sample.
pub fn skewed_sample<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(1e-6..1.0);
            100.0 * u.powf(-1.0 / 1.5)
        })
        .collect()
}

/// Integer-valued positive sample.
pub fn integer_sample<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(1..1_000_000u32) as f64).collect()
}
