//! Composite Gauss-Legendre quadrature.
//!
//! Nodes and weights are generated by Newton iteration on the Legendre
//! recurrence; composite panels resolve the oscillatory sine-basis integrands
//! whose frequency grows with the truncation size.

use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess, then Newton on P_n.
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A quadrature rule on an interval: matching node and weight lists.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    /// Composite rule: `panels` equal panels on [a, b], `order` points each.
    pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Self {
        assert!(panels >= 1 && b > a);
        let (xg, wg) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in xg.iter().zip(wg.iter()) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        QuadRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(&self, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_panel_is_exact_on_polynomials() {
        // GL-8 integrates degree <= 15 exactly.
        let rule = QuadRule::composite(0.0, 1.0, 1, 8);
        for deg in 0..=15usize {
            let got = rule.integrate(|x| x.powi(deg as i32));
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((got - exact).abs() < 1e-14, "deg {deg}: {got} vs {exact}");
        }
    }

    #[test]
    fn composite_resolves_high_frequency_sine() {
        let k = 200.0 * std::f64::consts::PI;
        let rule = QuadRule::composite(0.0, 1.0, 512, 8);
        let got = rule.integrate(|x| (k * x).sin().powi(2));
        assert!((got - 0.5).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let rule = QuadRule::composite(-2.0, 3.0, 17, 6);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 5.0).abs() < 1e-13);
    }
}
