//! Fixed-order quadrature rules: Gauss-Legendre on an interval and a
//! product-angle rule on the unit sphere.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `order` points, exact for polynomials of degree `< 2 order`.
    pub fn new(order: usize) -> Self {
        assert!(order > 0, "quadrature order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// `∫_a^b f` split into `pieces` equal panels.
    pub fn integrate_composite(&self, a: f64, b: f64, pieces: usize, f: impl Fn(f64) -> f64) -> f64 {
        let h = (b - a) / pieces as f64;
        (0..pieces)
            .map(|p| {
                let lo = a + h * p as f64;
                self.integrate(lo, lo + h, &f)
            })
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Product-angle quadrature on the unit sphere `S^{dim-1}`.
///
/// The last-but-one angles are polar angles on `[0, π]` handled by
/// Gauss-Legendre with the `sin^{d-2}` Jacobian; the final angle uses an
/// equispaced rule on the circle.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    dim: usize,
    polar: GaussLegendre,
    circle_points: usize,
}

impl SphereQuadrature {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "sphere quadrature needs dim >= 2");
        Self {
            dim,
            polar: GaussLegendre::new(24),
            circle_points: 32,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∫_S f(n) dσ(n)`.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let mut point = vec![0.0; self.dim];
        self.recurse(self.dim, 1.0, &mut point, &f)
    }

    /// Fills the trailing `d` coordinates of `point` with `scale * m`,
    /// `m ∈ S^{d-1}`, and integrates over `m`.
    fn recurse(&self, d: usize, scale: f64, point: &mut [f64], f: &dyn Fn(&[f64]) -> f64) -> f64 {
        let offset = self.dim - d;
        if d == 2 {
            let k = self.circle_points;
            let step = 2.0 * PI / k as f64;
            return (0..k)
                .map(|j| {
                    let t = step * j as f64;
                    point[offset] = scale * t.cos();
                    point[offset + 1] = scale * t.sin();
                    f(point)
                })
                .sum::<f64>()
                * step;
        }
        let mut total = 0.0;
        let half = 0.5 * PI;
        for (x, w) in self.polar.nodes().iter().zip(self.polar.weights()) {
            let theta = half * (x + 1.0);
            let (s, c) = theta.sin_cos();
            point[offset] = scale * c;
            let inner = self.recurse(d - 1, scale * s, point, f);
            total += w * half * s.powi(d as i32 - 2) * inner;
        }
        total
    }

    /// `∫_S n^a dσ` for a list of exponents.
    pub fn monomial_integral(&self, exponents: &[u32]) -> f64 {
        assert_eq!(exponents.len(), self.dim, "exponent count must equal the dimension");
        self.integrate(|n| exponents.iter().zip(n).map(|(e, x)| x.powi(*e as i32)).product())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        let rule = GaussLegendre::new(10);
        for p in 0..20 {
            let got = rule.integrate(0.0, 1.0, |x| x.powi(p));
            assert!((got - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "x^{p}: {got}");
        }
        assert!((rule.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_areas() {
        let areas = [2.0 * PI, 4.0 * PI, 2.0 * PI * PI];
        for (dim, want) in (2..=4).zip(areas) {
            let got = SphereQuadrature::new(dim).integrate(|_| 1.0);
            assert!((got - want).abs() < 1e-12, "dim {dim}: {got}");
        }
    }

    #[test]
    fn points_lie_on_the_sphere() {
        let q = SphereQuadrature::new(4);
        let worst = std::cell::Cell::new(0.0f64);
        q.integrate(|n| {
            let r2: f64 = n.iter().map(|x| x * x).sum();
            worst.set(worst.get().max((r2 - 1.0).abs()));
            0.0
        });
        assert!(worst.get() < 1e-14);
    }
}
