//! Deterministic high-dimensional limits for real Gaussian measurements:
//! the feasibility-set function `c_d`, the PhaseMax transition and
//! asymptotic NMSE, and the PhaseLamp sufficient conditions.

pub mod roots;

use std::f64::consts::{FRAC_PI_2, PI};

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng;

use self::roots::bisect;

/// Theory functions reject `alpha <= 2 + ALPHA_MARGIN`.
pub const ALPHA_MARGIN: f64 = 1e-12;
/// Below this radius `c_d` switches to its `r = 0` limit.
const SMALL_RADIUS: f64 = 1e-14;

/// Oversampling ratio with its constant `c_alpha = 1/tan(pi/alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaContext {
    pub alpha: f64,
    pub c_alpha: f64,
}

impl AlphaContext {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 2.0 + ALPHA_MARGIN) {
            return Err(invalid("alpha", format!("theory requires alpha > 2, got {alpha}")));
        }
        Ok(Self {
            alpha,
            c_alpha: 1.0 / (PI / alpha).tan(),
        })
    }

    /// `sqrt(c^2 + 1 - s^2)`, clamped at `|s| = 1`.
    fn radius(&self, s: f64) -> f64 {
        (self.c_alpha * self.c_alpha + 1.0 - s * s).max(0.0).sqrt()
    }
}

/// `(1 + t^2) atan(t) / t - 1 = sum_{k>=1} (-1)^{k+1} 2 t^{2k} / ((2k-1)(2k+1))`,
/// summed as a series where the direct form cancels.
fn atan_excess(t: f64) -> f64 {
    if t.abs() >= 0.5 {
        return (1.0 + t * t) * t.atan() / t - 1.0;
    }
    let t2 = t * t;
    let mut power = t2;
    let mut sum = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        let term = 2.0 * power / ((2.0 * kf - 1.0) * (2.0 * kf + 1.0));
        sum += if k % 2 == 1 { term } else { -term };
        if term <= 1e-18 * sum.abs() {
            break;
        }
        power *= t2;
    }
    sum
}

/// `(a^2 + r^2) atan2(r, a) - a r` for `r > 0`.
fn half_term(a: f64, r: f64) -> f64 {
    if a > 0.0 {
        a * r * atan_excess(r / a)
    } else {
        (a * a + r * r) * r.atan2(a) - a * r
    }
}

/// `c_d(s, r) = E[min(|q| - |r g + s q|, 0)^2]` for independent standard
/// normals `q, g`, in closed form.
pub fn c_d(s: f64, r: f64) -> f64 {
    let r = r.abs();
    if r < SMALL_RADIUS {
        let d = s.abs() - 1.0;
        return if d >= 0.0 { d * d } else { 0.0 };
    }
    // the -2r of the closed form cancels against the a r parts of both terms
    (half_term(1.0 - s, r) + half_term(1.0 + s, r)) / PI
}

/// Monte Carlo estimate of `c_d(s, r)` and its standard error.
pub fn c_d_mc(s: f64, r: f64, n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    if n_samples == 0 {
        return Err(invalid("n_samples", "need at least one sample"));
    }
    let mut gen = rng::stream(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n_samples {
        let q: f64 = StandardNormal.sample(&mut gen);
        let g: f64 = StandardNormal.sample(&mut gen);
        let v = (q.abs() - (r * g + s * q).abs()).min(0.0).powi(2);
        sum += v;
        sum_sq += v * v;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = if n_samples > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok((mean, (var / n).sqrt()))
}

/// `r_alpha(s) = sqrt(c^2 + 1 - s^2) - c`, the maximizer of
/// `r^2 - alpha c_d(s, r)` over `r >= 0`.
pub fn r_alpha(ctx: &AlphaContext, s: f64) -> f64 {
    (ctx.radius(s) - ctx.c_alpha).max(0.0)
}

/// `g_alpha(s) = r_alpha(s)^2 - alpha c_d(s, r_alpha(s))` in closed form.
pub fn g_alpha(ctx: &AlphaContext, s: f64) -> f64 {
    let a = ctx.alpha;
    let r = r_alpha(ctx, s);
    -1.0 - s * s + 2.0 * a * r / PI + (2.0 * a * s / PI) * (s / (r + ctx.c_alpha)).atan()
}

/// `g_alpha'(s) / 2 = -s + (alpha/pi) atan(s / sqrt(c^2 + 1 - s^2))`.
fn half_g_prime(ctx: &AlphaContext, s: f64) -> f64 {
    -s + (ctx.alpha / PI) * (s / ctx.radius(s)).atan()
}

/// PhaseMax transition `rho_c(alpha) = sqrt(1 - (pi/alpha)/tan(pi/alpha))`.
pub fn rho_c(alpha: f64) -> Result<f64> {
    let ctx = AlphaContext::new(alpha)?;
    Ok((1.0 - (PI / alpha) * ctx.c_alpha).max(0.0).sqrt())
}

/// Smallest `alpha` with `rho_c(alpha) <= rho`, the tight PhaseMax
/// oversampling requirement for a given initial cosine similarity.
pub fn alpha_c(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(invalid("rho", format!("must lie in (0, 1), got {rho}")));
    }
    let lo = 2.0 + 1e-9;
    let mut hi = 4.0;
    while rho_c(hi)? > rho {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Bracketing { lo, hi });
        }
    }
    bisect(|a| rho_c(a).map_or(f64::NAN, |r| r - rho), lo, hi)
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid("rho_init", format!("must lie in [0, 1], got {rho}")));
    }
    Ok(())
}

/// `s* = argmax_{0 <= s <= 1} rho s + sqrt((1 - rho^2) g_alpha(s))` and
/// `r* = r_alpha(s*)`.
///
/// The objective is strictly concave. At or above the transition the optimum
/// is the endpoint `(1, 0)`; otherwise its derivative, whose sign is that of
/// `rho sqrt(g) + sqrt(1 - rho^2) g'/2`, is bisected on `[0, 1]`.
pub fn solve_s_star(ctx: &AlphaContext, rho_init: f64) -> Result<(f64, f64)> {
    check_rho(rho_init)?;
    let rc = (1.0 - (PI / ctx.alpha) * ctx.c_alpha).max(0.0).sqrt();
    if rho_init >= rc - ALPHA_MARGIN {
        return Ok((1.0, 0.0));
    }
    let tail = (1.0 - rho_init * rho_init).sqrt();
    let slope = |s: f64| rho_init * g_alpha(ctx, s).max(0.0).sqrt() + tail * half_g_prime(ctx, s);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > f64::EPSILON * hi.max(1e-300) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    Ok((s, r_alpha(ctx, s)))
}

/// Objective `rho s + sqrt((1 - rho^2) g_alpha(s))` of the scalar program.
pub fn s_objective(ctx: &AlphaContext, rho_init: f64, s: f64) -> f64 {
    rho_init * s + ((1.0 - rho_init * rho_init) * g_alpha(ctx, s).max(0.0)).sqrt()
}

/// Asymptotic PhaseMax prediction at one `(alpha, rho_init)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryPoint {
    pub alpha: f64,
    pub rho_init: f64,
    pub s_star: f64,
    pub r_star: f64,
    pub nmse_pred: f64,
    /// Limit of `<x_init, x_hat>` for unit-norm `x_init` and `xi`.
    pub objective: f64,
    pub recovers: bool,
}

pub fn predict_nmse(ctx: &AlphaContext, rho_init: f64) -> Result<TheoryPoint> {
    let (s, r) = solve_s_star(ctx, rho_init)?;
    let recovers = s == 1.0;
    let nmse_pred = if recovers { 0.0 } else { ((1.0 - s) * (1.0 - s) + r * r).max(0.0) };
    Ok(TheoryPoint {
        alpha: ctx.alpha,
        rho_init,
        s_star: s,
        r_star: r,
        nmse_pred,
        objective: s_objective(ctx, rho_init, s),
        recovers,
    })
}

/// `(pi/alpha) c^2 + c - (1 + c^2) atan(c)`.
pub fn c_star_equation(alpha: f64, c: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    (PI / alpha) * c * c - c * atan_excess(c)
}

/// Slope of the feasibility boundary at `s = 1`: the positive root of
/// [`c_star_equation`].
pub fn c_star(alpha: f64) -> Result<f64> {
    AlphaContext::new(alpha)?;
    let h = |c: f64| c_star_equation(alpha, c);
    let mut lo = 1.0;
    while h(lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-150 {
            return Err(Error::Bracketing { lo, hi: 1.0 });
        }
    }
    let mut hi = 1.0;
    while h(hi) >= 0.0 {
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::Bracketing { lo, hi });
        }
    }
    bisect(h, lo, hi)
}

/// PhaseMax sufficient cosine `sqrt(c*^2 / (c*^2 + 1))`.
pub fn c_star_sufficient(alpha: f64) -> Result<f64> {
    let c = c_star(alpha)?;
    Ok(c / (c * c + 1.0).sqrt())
}

/// `theta cos^2 + (1 + 3 sin^2) atan(sin cos / (1 + sin^2)) - 2 sin cos
/// - (pi/alpha) sin^2 cos^2`.
pub fn theta_star_equation(alpha: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    theta * c * c + (1.0 + 3.0 * s * s) * (s * c / (1.0 + s * s)).atan() - 2.0 * s * c - (PI / alpha) * s * s * c * c
}

/// Unique root of [`theta_star_equation`] in `(0, pi/2)`.
pub fn theta_star(alpha: f64) -> Result<f64> {
    AlphaContext::new(alpha)?;
    let f = |t: f64| theta_star_equation(alpha, t);
    // negative near 0, positive near pi/2
    let mut lo = 0.5;
    while f(lo) >= 0.0 {
        lo *= 0.5;
        if lo < 1e-100 {
            return Err(Error::Bracketing { lo, hi: FRAC_PI_2 });
        }
    }
    let mut gap = 0.5;
    while f(FRAC_PI_2 - gap) <= 0.0 {
        gap *= 0.5;
        if gap < 1e-15 {
            return Err(Error::Bracketing { lo, hi: FRAC_PI_2 });
        }
    }
    bisect(f, lo, FRAC_PI_2 - gap)
}

/// PhaseLamp sufficient cosine for arbitrary initializations, `sin(theta*)`.
pub fn rho_hat_s(alpha: f64) -> Result<f64> {
    Ok(theta_star(alpha)?.sin())
}

/// `s_hat = tan(theta*) / (sqrt(1 + c^2 + tan(theta*)^2) + c)`.
pub fn s_hat(ctx: &AlphaContext) -> Result<f64> {
    let t = theta_star(ctx.alpha)?.tan();
    Ok(t / ((1.0 + ctx.c_alpha * ctx.c_alpha + t * t).sqrt() + ctx.c_alpha))
}

/// `l_alpha = (s_hat - (alpha/pi) atan(s_hat / sqrt(c^2 + 1 - s_hat^2))) / sqrt(g(s_hat))`.
pub fn ell_alpha(ctx: &AlphaContext) -> Result<f64> {
    let s = s_hat(ctx)?;
    let g = g_alpha(ctx, s);
    if !(g > 0.0) {
        return Err(Error::Numerical(format!("g_alpha(s_hat) = {g:e} is not positive")));
    }
    Ok(-half_g_prime(ctx, s) / g.sqrt())
}

/// PhaseLamp sufficient cosine for initializations independent of the
/// measurements, `l / sqrt(l^2 + 1)`.
pub fn rho_s_independent(alpha: f64) -> Result<f64> {
    let l = ell_alpha(&AlphaContext::new(alpha)?)?;
    Ok(l / (l * l + 1.0).sqrt())
}

/// Oversampling ratio above which the norm-maximization program has only
/// `+-xi` as global optima: `pi / (pi - 2)`.
pub fn lamp_threshold() -> f64 {
    PI / (PI - 2.0)
}

/// Earlier sufficient condition `alpha > 2 pi / (pi - arccos(rho))`.
pub fn prior_sufficient_alpha(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(2.0 * PI / (PI - rho.acos()))
}

/// Upper boundary `r_max(s)` of `{(s, r) : r >= 0, alpha c_d(s, r) <= r^2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasBoundary {
    pub alpha: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Largest `r >= 0` with `alpha c_d(s, r) <= r^2`. For fixed `s` the set of
/// such `r` is an interval containing 0, so bisection keeps `lo` inside and
/// `hi` outside.
pub fn r_max(alpha: f64, s: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha >= 2.0) {
        return Err(invalid("alpha", format!("feasibility boundary requires alpha >= 2, got {alpha}")));
    }
    if !(-1.0..=1.0).contains(&s) {
        return Err(invalid("s", format!("must lie in [-1, 1], got {s}")));
    }
    if s.abs() == 1.0 {
        // the set meets the lines s = +-1 only at r = 0 when alpha >= 2
        return Ok(0.0);
    }
    let inside = |r: f64| alpha * c_d(s, r) <= r * r;
    let mut hi = 1.0;
    while inside(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Bracketing { lo: 0.0, hi });
        }
    }
    let mut lo = 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub fn feas_boundary(alpha: f64, grid: &[f64]) -> Result<FeasBoundary> {
    let samples = grid
        .iter()
        .map(|&s| r_max(alpha, s).map(|r| (s, r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeasBoundary { alpha, samples })
}
