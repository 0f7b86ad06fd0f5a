//! Adaptive Gauss–Legendre quadrature for complex-valued integrands.

use num_complex::Complex;

use super::real::{cabs, Real};
use super::MockError;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like first guess, refined by Newton on P_n.
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut x = T::from_f64(guess);
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::epsilon() * T::from_f64(4.0) {
                    let (_, d) = legendre(n, x);
                    dp = d;
                    break;
                }
            }
            let w = T::from_f64(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// The rule mapped onto `[a, b]`.
    pub fn integrate<F>(&self, a: T, b: T, f: &mut F) -> Result<Complex<T>, MockError>
    where
        F: FnMut(T) -> Result<Complex<T>, MockError>,
    {
        let half = (b - a) / T::from_f64(2.0);
        let mid = (a + b) / T::from_f64(2.0);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, w) in self.nodes() {
            acc += f(mid + half * x)? * (w * half);
        }
        Ok(acc)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_i64(k as i64);
        let p2 = ((T::from_i64(2 * k as i64 - 1)) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_i64(n as i64);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Bisection-refined Gauss–Legendre integration.
#[derive(Debug, Clone)]
pub struct AdaptiveQuadrature<T> {
    rule: GaussLegendre<T>,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl<T: Real> AdaptiveQuadrature<T> {
    pub fn new(points: usize, abs_tol: f64) -> Self {
        AdaptiveQuadrature {
            rule: GaussLegendre::new(points),
            abs_tol,
            max_depth: 30,
        }
    }

    /// Integrates `f` over `[a, b]` to the absolute tolerance.
    pub fn integrate<F>(&self, a: T, b: T, f: &mut F) -> Result<Complex<T>, MockError>
    where
        F: FnMut(T) -> Result<Complex<T>, MockError>,
    {
        let whole = self.rule.integrate(a, b, f)?;
        self.refine(a, b, whole, self.abs_tol, 0, f)
    }

    fn refine<F>(&self, a: T, b: T, whole: Complex<T>, tol: f64, depth: u32, f: &mut F) -> Result<Complex<T>, MockError>
    where
        F: FnMut(T) -> Result<Complex<T>, MockError>,
    {
        let m = (a + b) / T::from_f64(2.0);
        let left = self.rule.integrate(a, m, f)?;
        let right = self.rule.integrate(m, b, f)?;
        let both = left + right;
        let err = cabs(both - whole).to_f64();
        if err <= tol {
            return Ok(both);
        }
        if depth >= self.max_depth {
            return Err(MockError::QuadratureNonConvergence {
                a: a.to_f64(),
                b: b.to_f64(),
                estimate: err,
            });
        }
        let l = self.refine(a, m, left, tol / 2.0, depth + 1, f)?;
        let r = self.refine(m, b, right, tol / 2.0, depth + 1, f)?;
        Ok(l + r)
    }

    /// Integrates over `[0, end]` split geometrically at `1/2, 1, 2, 4, …`,
    /// sharing the tolerance between pieces.
    pub fn integrate_geometric<F>(&self, end: T, f: &mut F) -> Result<Complex<T>, MockError>
    where
        F: FnMut(T) -> Result<Complex<T>, MockError>,
    {
        let mut cuts = vec![T::zero()];
        let mut c = T::from_f64(0.5);
        while c < end {
            cuts.push(c);
            c *= T::from_f64(2.0);
        }
        cuts.push(end);
        let pieces = (cuts.len() - 1) as f64;
        let sub = AdaptiveQuadrature {
            rule: self.rule.clone(),
            abs_tol: self.abs_tol / pieces,
            max_depth: self.max_depth,
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for w in cuts.windows(2) {
            acc += sub.integrate(w[0], w[1], f)?;
        }
        Ok(acc)
    }
}
