//! One-dimensional numerical integration, bracketing root finding and
//! grid-plus-golden-section maximization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegrationMethod {
    AdaptiveSimpson,
    /// Composite Gauss–Legendre with `panels` equal sub-intervals.
    GaussLegendre {
        order: usize,
        panels: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub method: IntegrationMethod,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            method: IntegrationMethod::AdaptiveSimpson,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_depth: 40,
        }
    }
}

impl IntegrationConfig {
    pub fn gauss_legendre(order: usize, panels: usize) -> Self {
        Self {
            method: IntegrationMethod::GaussLegendre { order, panels },
            ..Self::default()
        }
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("integration tolerance", "must be positive"));
        }
        if self.max_depth < 1 {
            return Err(Error::invalid("integration max_depth", "must be at least 1"));
        }
        if let IntegrationMethod::GaussLegendre { order, panels } = self.method {
            if order < 1 || panels < 1 {
                return Err(Error::invalid("gauss-legendre", "order and panels must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Stop once the bracket is narrower than this.
    pub x_tol: f64,
    /// Stop once |f(x)| is at most this.
    pub f_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-14,
            f_tol: 1e-15,
            max_iterations: 200,
        }
    }
}

impl RootConfig {
    pub fn with_x_tol(mut self, tol: f64) -> Self {
        self.x_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_tol > 0.0 && self.f_tol > 0.0 && self.max_iterations > 0 {
            Ok(())
        } else {
            Err(Error::invalid(
                "root config",
                "tolerances and max_iterations must be positive",
            ))
        }
    }
}

/// ∫_a^b f.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &IntegrationConfig) -> Result<f64> {
    if a > b {
        return Err(Error::Precondition(format!("integration bounds reversed: {a} > {b}")));
    }
    if a == b {
        return Ok(0.0);
    }
    match cfg.method {
        IntegrationMethod::AdaptiveSimpson => adaptive_simpson(&f, a, b, cfg),
        IntegrationMethod::GaussLegendre { order, panels } => Ok(gauss_legendre(&f, a, b, order, panels)),
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &IntegrationConfig) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let eps = cfg.abs_tol.max(cfg.rel_tol * whole.abs());
    let mut converged = true;
    let est = simpson_step(f, a, b, fa, fm, fb, whole, eps, cfg.max_depth, &mut converged);
    if converged {
        Ok(est)
    } else {
        Err(Error::Convergence { estimate: est })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
    converged: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *converged = false;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, converged)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, converged)
}

fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize, panels: usize) -> f64 {
    let (nodes, weights) = legendre_rule(order);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            let c = lo + 0.5 * h;
            nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * f(c + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on P_n.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_eval(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// Final bracket; `f` changes sign (or vanishes) across it.
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<RootResult> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(RootResult {
            root: a,
            bracket: (a, a),
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            root: b,
            bracket: (b, b),
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        iterations += 1;
        if fb.abs() <= cfg.f_tol || (b - a).abs() <= cfg.x_tol {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo3 = (3.0 * a + b) / 4.0;
        let between = if lo3 < b { s > lo3 && s < b } else { s > b && s < lo3 };
        let tol = cfg.x_tol.max(4.0 * f64::EPSILON * b.abs());
        let reject = !between
            || (bisected && (s - b).abs() >= 0.5 * (b - c).abs())
            || (!bisected && (s - b).abs() >= 0.5 * (c - d).abs())
            || (bisected && (b - c).abs() < tol)
            || (!bisected && (c - d).abs() < tol);
        if reject {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        if fb == 0.0 {
            break;
        }
    }
    Ok(RootResult {
        root: b,
        bracket: (a.min(b), a.max(b)),
        residual: fb,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxResult {
    pub argmax: f64,
    pub max: f64,
    /// Golden-section iterations spent refining.
    pub iterations: usize,
}

/// Scan `grid_points` equally spaced points of `[lo, hi]`, then refine by
/// golden-section search on the two cells around the best grid point.
///
/// NaN values count as −∞. Exact ties go to the smaller argument. The grid
/// is evaluated in parallel; the reduction is sequential and so independent
/// of scheduling.
pub fn maximize_scalar<F>(f: F, lo: f64, hi: f64, grid_points: usize, refine: &RootConfig) -> MaxResult
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = grid_points.max(3);
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect();
    let vals: Vec<f64> = xs.par_iter().map(|&x| sanitize(f(x))).collect();
    let mut best = 0;
    for (i, &v) in vals.iter().enumerate() {
        if v > vals[best] {
            best = i;
        }
    }
    if lo == hi || vals[best] == f64::NEG_INFINITY {
        return MaxResult {
            argmax: xs[best],
            max: vals[best],
            iterations: 0,
        };
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(n - 1)];
    let (gx, gv, iterations) = golden_section(|x| sanitize(f(x)), a, b, refine);

    let (mut argmax, mut max) = (xs[best], vals[best]);
    if gv > max || (gv == max && gx < argmax) {
        argmax = gx;
        max = gv;
    }
    MaxResult {
        argmax,
        max,
        iterations,
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section search for a maximum on `[a, b]`; returns the best point
/// seen, its value and the iteration count.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, cfg: &RootConfig) -> (f64, f64, usize) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a).abs() > cfg.x_tol && iterations < cfg.max_iterations {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc, iterations)
    } else {
        (d, fd, iterations)
    }
}
