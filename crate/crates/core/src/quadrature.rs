//! Quadrature rules: Gauss–Legendre on intervals and the two circle rules used by the contraction.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::{reduce_angle, Real};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    /// Nodes in increasing order.
    pub nodes: Vec<f64>,
    /// Positive weights summing to 2.
    pub weights: Vec<f64>,
}

fn compute_gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
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
    GaussRule { nodes, weights }
}

/// The `n`-point Gauss–Legendre rule, computed once per `n` and shared.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut table = cache.lock().expect("gauss rule cache lock");
    table.entry(n.max(1)).or_insert_with(|| Arc::new(compute_gauss_legendre(n.max(1)))).clone()
}

/// Nodes and weights of an `n`-point Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_on_interval<T: Real>(n: usize, a: T, b: T) -> Vec<(T, T)> {
    let rule = gauss_legendre(n);
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| (mid + half * T::lit(x), half * T::lit(w))).collect()
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels of order `order`.
pub fn composite_gauss<T: Real>(panels: usize, order: usize, a: T, b: T) -> Vec<(T, T)> {
    let panels = panels.max(1);
    let width = (b - a) / T::lit(panels as f64);
    (0..panels)
        .flat_map(|p| {
            let lo = a + width * T::lit(p as f64);
            gauss_on_interval(order, lo, lo + width)
        })
        .collect()
}

/// How the contraction integrates over the prepended circle argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum QuadratureRule {
    /// `N` equally spaced nodes with weight `1/N`.
    Trapezoid,
    /// The circle is cut at the other arguments of the integrand into arcs,
    /// and each arc gets `max(2, ⌈N/arcs⌉)` Gauss–Legendre nodes. Integrands
    /// whose discontinuities sit at coincidences with those arguments are
    /// then integrated to spectral accuracy, and the result is smooth in the
    /// arguments.
    ArcGauss,
}

/// Discretization of the K-invariant probability measure on the circle.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureSpec {
    /// Node budget `N`.
    pub circle_nodes: usize,
    /// Rule.
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { circle_nodes: 256, rule: QuadratureRule::Trapezoid }
    }
}

impl QuadratureSpec {
    /// Trapezoid rule with `n` nodes.
    pub fn trapezoid(n: usize) -> Self {
        Self { circle_nodes: n, rule: QuadratureRule::Trapezoid }
    }

    /// Arc-split Gauss–Legendre rule with node budget `n`.
    pub fn arc_gauss(n: usize) -> Self {
        Self { circle_nodes: n, rule: QuadratureRule::ArcGauss }
    }

    /// Checks `N ≥ 8`.
    pub fn validate(&self) -> Result<()> {
        if self.circle_nodes < 8 {
            return Err(Error::InvalidSpec(format!("circle_nodes = {} must be at least 8", self.circle_nodes)));
        }
        Ok(())
    }

    /// Calls `visit(η, w)` for every node `η` of the rule (weights sum to one).
    /// `cuts` are the other arguments of the integrand, already reduced.
    pub fn for_each_node<T: Real>(&self, cuts: &[T], mut visit: impl FnMut(T, T) -> Result<()>) -> Result<()> {
        match self.rule {
            QuadratureRule::Trapezoid => {
                let n = self.circle_nodes;
                let w = T::one() / T::lit(n as f64);
                let step = T::two_pi() / T::lit(n as f64);
                for k in 0..n {
                    visit(step * T::lit(k as f64), w)?;
                }
                Ok(())
            }
            QuadratureRule::ArcGauss => {
                let mut pts = [T::zero(); crate::boundary::MAX_ARITY];
                let mut m = 0;
                let eps = T::lit(1e-13);
                let mut sorted: Vec<T> = cuts.iter().map(|&c| reduce_angle(c)).collect();
                sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
                for c in sorted {
                    if m == 0 || c - pts[m - 1] > eps {
                        pts[m] = c;
                        m += 1;
                    }
                }
                if m > 1 && pts[0] + T::two_pi() - pts[m - 1] <= eps {
                    m -= 1;
                }
                if m == 0 {
                    pts[0] = T::zero();
                    m = 1;
                }
                let per_arc = self.circle_nodes.div_ceil(m).max(2);
                let rule = gauss_legendre(per_arc);
                let inv_two_pi = T::one() / T::two_pi();
                for i in 0..m {
                    let lo = pts[i];
                    let hi = if i + 1 < m { pts[i + 1] } else { pts[0] + T::two_pi() };
                    let half = (hi - lo) / T::lit(2.0);
                    let mid = (hi + lo) / T::lit(2.0);
                    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                        visit(mid + half * T::lit(x), half * T::lit(w) * inv_two_pi)?;
                    }
                }
                Ok(())
            }
        }
    }
}
