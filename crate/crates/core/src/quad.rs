//! Composite Gauss–Legendre quadrature with caller-supplied breakpoints and
//! bisection-based refinement.

use std::sync::OnceLock;

/// Points per panel.
pub const RULE_POINTS: usize = 32;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence, started from
    /// the Chebyshev-like guess `cos(π(i + 3/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
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
        Self { nodes, weights }
    }

    pub fn standard() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(RULE_POINTS))
    }

    /// Maps the rule onto `[a, b]`, returning `(Σ w f, Σ w r, Σ w |f|)` where
    /// `f` yields a value and an absolute rounding bound `r`.
    fn apply<F>(&self, f: &F, a: f64, b: f64) -> (f64, f64, f64)
    where
        F: Fn(f64) -> (f64, f64),
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let (mut sum, mut round, mut mass) = (0.0, 0.0, 0.0);
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let (v, r) = f(mid + half * t);
            sum += w * v;
            round += w * r;
            mass += w * v.abs();
        }
        (half * sum, half.abs() * round, half.abs() * mass)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-13,
            max_panels: 50_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub value: f64,
    /// Discretisation plus propagated rounding error.
    pub abs_error_estimate: f64,
    pub panels: usize,
    /// Every panel met its tolerance before the budget ran out.
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    mass: f64,
}

/// Integrates `f` over consecutive `breaks` (ascending), each gap first cut
/// into `initial_split` equal panels. A panel is accepted when the
/// one-panel and two-half-panel estimates agree to tolerance.
pub fn integrate<F>(f: F, breaks: &[f64], initial_split: usize, opts: AdaptiveOptions) -> Outcome
where
    F: Fn(f64) -> (f64, f64),
{
    assert!(breaks.len() >= 2, "need at least one interval");
    let rule = GaussLegendre::standard();
    let total = breaks[breaks.len() - 1] - breaks[0];
    let split = initial_split.max(1);

    let mut pending: Vec<(f64, f64)> = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let h = (b - a) / split as f64;
        for i in 0..split {
            let lo = a + h * i as f64;
            let hi = if i + 1 == split { b } else { a + h * (i + 1) as f64 };
            pending.push((lo, hi));
        }
    }
    // Depth-first in left-to-right order.
    pending.reverse();

    let mut accepted: Vec<Panel> = Vec::new();
    let mut converged = true;
    while let Some((a, b)) = pending.pop() {
        let (coarse, _, _) = rule.apply(&f, a, b);
        let m = 0.5 * (a + b);
        let (l, lr, lm) = rule.apply(&f, a, m);
        let (r, rr, rm) = rule.apply(&f, m, b);
        let fine = l + r;
        let mass = lm + rm;
        let disc = (fine - coarse).abs();
        let tol = (opts.abs_tol * (b - a) / total).max(opts.rel_tol * mass);
        let budget_left = accepted.len() + pending.len() + 2 < opts.max_panels;
        let splittable = m > a && m < b;
        // Below the rounding floor, bisection only adds evaluations.
        let at_noise_floor = disc <= 2.0 * (lr + rr);
        if disc <= tol || at_noise_floor || !budget_left || !splittable {
            if disc > tol && !at_noise_floor {
                converged = false;
            }
            accepted.push(Panel {
                a,
                b,
                value: fine,
                error: disc + lr + rr,
                mass,
            });
        } else {
            pending.push((m, b));
            pending.push((a, m));
        }
    }

    accepted.sort_by(|x, y| x.a.total_cmp(&y.a).then(x.b.total_cmp(&y.b)));
    let values: Vec<f64> = accepted.iter().map(|p| p.value).collect();
    let error: f64 = accepted.iter().map(|p| p.error).sum();
    let mass: f64 = accepted.iter().map(|p| p.mass).sum();
    let summation = f64::EPSILON * mass * (values.len().max(2) as f64).log2();
    Outcome {
        value: pairwise_sum(&values),
        abs_error_estimate: error + summation,
        panels: accepted.len(),
        converged,
    }
}

/// Pairwise (cascade) summation in a fixed order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (l, r) = values.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}
