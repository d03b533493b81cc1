//! Small numerical quadrature toolkit: adaptive Simpson and Gauss-Legendre.

use std::f64::consts::PI;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub intervals: usize,
    /// False when the interval cap was reached before the tolerance was met.
    pub converged: bool,
}

/// Adaptive Simpson quadrature with Richardson correction.
///
/// The correction makes each accepted panel exact for quintic polynomials.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64, max_intervals: usize) -> Quadrature
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Quadrature { value: 0.0, intervals: 0, converged: true };
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    let mut state = SimpsonState { intervals: 1, max_intervals, converged: true };
    let value = simpson_rec(&f, a, b, fa, fm, fb, whole, abs_tol, 60, &mut state);
    Quadrature { value, intervals: state.intervals, converged: state.converged }
}

struct SimpsonState {
    intervals: usize,
    max_intervals: usize,
    converged: bool,
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    state: &mut SimpsonState,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;

    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 || state.intervals >= state.max_intervals {
        state.converged = false;
        return left + right + delta / 15.0;
    }
    state.intervals += 1;
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state)
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Integrates over consecutive panels delimited by `breaks` (sorted).
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, mut f: F, breaks: &[f64]) -> f64 {
        breaks
            .windows(2)
            .map(|w| self.integrate(&mut f, w[0], w[1]))
            .sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}
