//! Axisymmetric support-function simulation of expanding flows.
//!
//! A convex surface of revolution is described by its support function
//! `u(theta)` over the polar angle of the outward normal. The principal
//! curvature radii are `rho_1 = u'' + u` along the meridian and
//! `rho_2 = u' cot(theta) + u` around the axis; at the poles both reduce
//! to `u'' + u`. Under the flow with outward speed `G(l1, l2)` the support
//! function satisfies `du/dt = G(1/rho_1, 1/rho_2)` pointwise, which this
//! module integrates with classical fourth-order Runge-Kutta on a uniform
//! grid, ghost nodes enforcing the even extension across the poles.
//!
//! The extracted observables are the ones the convergence statements are
//! about: the tracked quantity maximum, curvature pinching, the
//! pseudocenter (the Gauss-map-weighted centroid, which lies on the axis),
//! support radii around it, and the extrapolated blow-up time.

use std::fmt;

use crate::poly::Var;
use crate::ratfn::RationalFn;
use crate::univar::rational_to_f64;

pub const DEFAULT_SAFETY: f64 = 0.2;

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    /// A principal curvature radius dropped to zero or below.
    NotConvex { t: f64, node: usize },
    NonFinite { t: f64 },
    Config(String),
    /// The blow-up fit needs at least eight samples in its window.
    TooFewSamples,
    /// Expansion should make the maximal support value increase.
    NonMonotoneExpansion,
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::NotConvex { t, node } => {
                write!(f, "surface not strictly convex at t = {t} (node {node})")
            }
            SimError::NonFinite { t } => write!(f, "non-finite values at t = {t}"),
            SimError::Config(msg) => write!(f, "{msg}"),
            SimError::TooFewSamples => write!(f, "too few samples for the blow-up fit"),
            SimError::NonMonotoneExpansion => {
                write!(f, "maximal support value is not increasing")
            }
        }
    }
}

impl std::error::Error for SimError {}

// ----- compiled evaluation --------------------------------------------------

/// A rational function lowered to floating point once, for inner-loop use.
#[derive(Clone, Debug)]
pub struct CompiledRatFn {
    num: Vec<(i32, i32, f64)>,
    den: Vec<(i32, i32, f64)>,
}

impl CompiledRatFn {
    pub fn new(f: &RationalFn) -> Self {
        let lower = |p: &crate::poly::BivarPoly| {
            p.terms()
                .map(|(&(i, j), c)| (i as i32, j as i32, rational_to_f64(c)))
                .collect()
        };
        CompiledRatFn {
            num: lower(f.num()),
            den: lower(f.den()),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let part = |terms: &[(i32, i32, f64)]| {
            terms
                .iter()
                .map(|&(i, j, c)| c * x.powi(i) * y.powi(j))
                .sum::<f64>()
        };
        part(&self.num) / part(&self.den)
    }
}

// ----- configuration --------------------------------------------------------

/// Parse a finite cosine series `a0 + a1*cos(theta) + a2*cos(theta)^2 + ...`
/// into its coefficient list by power. Signs, reordered terms, and bare
/// `cos(theta)` factors are accepted.
pub fn parse_cosine_series(src: &str) -> Result<Vec<f64>, String> {
    let mut coeffs: Vec<f64> = Vec::new();
    let mut rest = src.trim();
    if rest.is_empty() {
        return Err("empty initial-condition expression".into());
    }
    let mut sign = 1.0;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1.0;
        rest = r.trim_start();
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r.trim_start();
    }
    loop {
        let (term, remaining) = split_term(rest);
        let (coeff, power) = parse_term(term.trim())?;
        let power = power as usize;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0.0);
        }
        coeffs[power] += sign * coeff;
        match remaining {
            None => break,
            Some((next_sign, r)) => {
                sign = next_sign;
                rest = r.trim_start();
            }
        }
    }
    while coeffs.last() == Some(&0.0) && coeffs.len() > 1 {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn split_term(src: &str) -> (&str, Option<(f64, &str)>) {
    let bytes = src.as_bytes();
    let mut depth = 0usize;
    for (k, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'+' if depth == 0 && k > 0 && !is_exponent_sign(bytes, k) => {
                return (&src[..k], Some((1.0, &src[k + 1..])))
            }
            b'-' if depth == 0 && k > 0 && !is_exponent_sign(bytes, k) => {
                return (&src[..k], Some((-1.0, &src[k + 1..])))
            }
            _ => {}
        }
    }
    (src, None)
}

fn is_exponent_sign(bytes: &[u8], k: usize) -> bool {
    k > 0 && (bytes[k - 1] == b'e' || bytes[k - 1] == b'E')
}

/// One term: `<float>`, `cos(theta)^k`, or `<float>*cos(theta)^k` with any
/// number of cosine factors.
fn parse_term(term: &str) -> Result<(f64, u32), String> {
    if term.is_empty() {
        return Err("empty term in initial-condition expression".into());
    }
    let mut coeff = 1.0;
    let mut power = 0u32;
    let mut saw_number = false;
    for factor in term.split('*') {
        let factor = factor.trim();
        if let Some(rest) = factor.strip_prefix("cos") {
            let rest = rest.trim_start();
            let rest = rest
                .strip_prefix("(theta)")
                .or_else(|| rest.strip_prefix("( theta )"))
                .ok_or_else(|| format!("expected cos(theta), found '{factor}'"))?;
            let rest = rest.trim();
            if rest.is_empty() {
                power += 1;
            } else if let Some(exp) = rest.strip_prefix('^') {
                let k: u32 = exp
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad exponent in '{factor}'"))?;
                power += k;
            } else {
                return Err(format!("unexpected input after cos(theta): '{rest}'"));
            }
        } else {
            let v: f64 = factor
                .parse()
                .map_err(|_| format!("bad number '{factor}'"))?;
            if saw_number {
                coeff *= v;
            } else {
                coeff = v;
                saw_number = true;
            }
        }
    }
    Ok((coeff, power))
}

pub fn eval_cosine_series(coeffs: &[f64], theta: f64) -> f64 {
    let c = theta.cos();
    let mut acc = 0.0;
    for &a in coeffs.iter().rev() {
        acc = acc * c + a;
    }
    acc
}

/// Full description of one simulation run.
#[derive(Clone, Debug)]
pub struct SimConfig {
    /// Normal velocity `F` in the curvature basis; the expansion speed is
    /// `G = -F`, which must be positive on the quadrant.
    pub velocity: RationalFn,
    /// Initial support function as a cosine series in the polar angle.
    pub u0: Vec<f64>,
    /// Number of grid intervals on `[0, pi]`; even and at least 16.
    pub n: usize,
    /// Stop once `max u` reaches this value; defaults to ten times the
    /// initial maximum.
    pub stop_max_u: Option<f64>,
    pub stop_max_steps: usize,
    /// Observable sampling cadence in steps.
    pub sample_every: usize,
    /// Quantity whose grid maximum is tracked, if any.
    pub track_w: Option<RationalFn>,
    /// Time-step safety factor in front of the parabolic bound.
    pub safety: f64,
}

impl SimConfig {
    pub fn new(velocity: RationalFn, u0: Vec<f64>) -> Self {
        SimConfig {
            velocity,
            u0,
            n: 64,
            stop_max_u: None,
            stop_max_steps: 2_000_000,
            sample_every: 20,
            track_w: None,
            safety: DEFAULT_SAFETY,
        }
    }
}

/// The expansion speed and its curvature derivatives, compiled.
pub struct SpeedFunction {
    pub speed: CompiledRatFn,
    pub d1: CompiledRatFn,
    pub d2: CompiledRatFn,
    /// `gamma` when the speed is homogeneous of degree `-gamma`.
    pub gamma: Option<f64>,
    /// `G(1, 1)`, the speed of the unit sphere.
    pub sphere_rate: f64,
}

impl SpeedFunction {
    pub fn new(velocity: &RationalFn) -> Result<Self, SimError> {
        let g = velocity.neg();
        let rep = g.symmetry_and_homogeneity();
        if !rep.symmetric {
            return Err(SimError::Config("velocity must be symmetric".into()));
        }
        if rep.homogeneous {
            match crate::positivity::quadrant_sign(&g) {
                Ok(cert) => match cert.verdict {
                    crate::positivity::SignVerdict::NonnegativeOnQuadrant => {}
                    _ => {
                        return Err(SimError::Config(
                            "expansion speed -F must be positive on the quadrant".into(),
                        ))
                    }
                },
                Err(_) => {
                    return Err(SimError::Config(
                        "could not certify the expansion speed sign".into(),
                    ))
                }
            }
        }
        let speed = CompiledRatFn::new(&g);
        let sphere_rate = speed.eval(1.0, 1.0);
        if !sphere_rate.is_finite() || sphere_rate <= 0.0 {
            return Err(SimError::Config(
                "expansion speed is not positive at the unit sphere".into(),
            ));
        }
        Ok(SpeedFunction {
            d1: CompiledRatFn::new(&g.partial_derivative(Var::First)),
            d2: CompiledRatFn::new(&g.partial_derivative(Var::Second)),
            speed,
            gamma: rep.degree.map(|d| -d as f64),
            sphere_rate,
        })
    }
}

// ----- state and derivatives ------------------------------------------------

/// Support function samples on the uniform polar grid, with a time stamp.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub theta: Vec<f64>,
    pub u: Vec<f64>,
    pub t: f64,
}

impl FlowState {
    pub fn from_cosine_series(coeffs: &[f64], n: usize) -> Result<Self, SimError> {
        if n < 16 || n % 2 != 0 {
            return Err(SimError::Config(
                "grid size must be even and at least 16".into(),
            ));
        }
        let dtheta = std::f64::consts::PI / n as f64;
        let theta: Vec<f64> = (0..=n).map(|i| i as f64 * dtheta).collect();
        let u: Vec<f64> = theta
            .iter()
            .map(|&th| eval_cosine_series(coeffs, th))
            .collect();
        if u.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(SimError::Config(
                "initial support function must be positive".into(),
            ));
        }
        Ok(FlowState { theta, u, t: 0.0 })
    }

    pub fn dtheta(&self) -> f64 {
        std::f64::consts::PI / (self.theta.len() - 1) as f64
    }

    pub fn max_u(&self) -> f64 {
        self.u.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_u(&self) -> f64 {
        self.u.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn ghost(u: &[f64], i: isize) -> f64 {
    let n = u.len() as isize - 1;
    // even extension across both poles
    let k = if i < 0 {
        -i
    } else if i > n {
        2 * n - i
    } else {
        i
    };
    u[k as usize]
}

/// First derivative by central differences with pole ghosts.
fn derivative_theta(u: &[f64], dtheta: f64) -> Vec<f64> {
    (0..u.len() as isize)
        .map(|i| (ghost(u, i + 1) - ghost(u, i - 1)) / (2.0 * dtheta))
        .collect()
}

/// Principal curvature radii at every node. Errors on loss of strict
/// convexity or positivity.
pub fn principal_radii(u: &[f64], theta: &[f64], t: f64) -> Result<(Vec<f64>, Vec<f64>), SimError> {
    let n = u.len() - 1;
    let dtheta = std::f64::consts::PI / n as f64;
    let mut rho1 = Vec::with_capacity(n + 1);
    let mut rho2 = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let ii = i as isize;
        let utt = (ghost(u, ii + 1) - 2.0 * u[i] + ghost(u, ii - 1)) / (dtheta * dtheta);
        let r1 = utt + u[i];
        let r2 = if i == 0 || i == n {
            // cot(theta) singularity resolved by the even extension
            r1
        } else {
            let ut = (ghost(u, ii + 1) - ghost(u, ii - 1)) / (2.0 * dtheta);
            ut * theta[i].cos() / theta[i].sin() + u[i]
        };
        if !r1.is_finite() || !r2.is_finite() {
            return Err(SimError::NonFinite { t });
        }
        if r1 <= 0.0 || r2 <= 0.0 || u[i] <= 0.0 {
            return Err(SimError::NotConvex { t, node: i });
        }
        rho1.push(r1);
        rho2.push(r2);
    }
    Ok((rho1, rho2))
}

fn rhs(speed: &SpeedFunction, u: &[f64], theta: &[f64], t: f64) -> Result<Vec<f64>, SimError> {
    let (rho1, rho2) = principal_radii(u, theta, t)?;
    Ok(rho1
        .iter()
        .zip(&rho2)
        .map(|(&r1, &r2)| speed.speed.eval(1.0 / r1, 1.0 / r2))
        .collect())
}

/// Parabolic stability bound: `safety * dtheta^2 / max |dG/dl_i| l_i^2`,
/// the von Neumann limit for the linearized support equation.
pub fn stable_dt(speed: &SpeedFunction, state: &FlowState, safety: f64) -> Result<f64, SimError> {
    let (rho1, rho2) = principal_radii(&state.u, &state.theta, state.t)?;
    let mut diffusion: f64 = 0.0;
    for (&r1, &r2) in rho1.iter().zip(&rho2) {
        let (l1, l2) = (1.0 / r1, 1.0 / r2);
        let d1 = speed.d1.eval(l1, l2).abs() * l1 * l1;
        let d2 = speed.d2.eval(l1, l2).abs() * l2 * l2;
        diffusion = diffusion.max(d1).max(d2);
    }
    if !diffusion.is_finite() || diffusion <= 0.0 {
        return Err(SimError::NonFinite { t: state.t });
    }
    let h = state.dtheta();
    Ok(safety * h * h / diffusion)
}

/// One classical Runge-Kutta step; every stage re-validates convexity.
pub fn step(speed: &SpeedFunction, state: &FlowState, dt: f64) -> Result<FlowState, SimError> {
    let u = &state.u;
    let theta = &state.theta;
    let t = state.t;
    let k1 = rhs(speed, u, theta, t)?;
    let stage = |k: &[f64], c: f64| -> Vec<f64> {
        u.iter().zip(k).map(|(&ui, &ki)| ui + c * dt * ki).collect()
    };
    let k2 = rhs(speed, &stage(&k1, 0.5), theta, t + 0.5 * dt)?;
    let k3 = rhs(speed, &stage(&k2, 0.5), theta, t + 0.5 * dt)?;
    let k4 = rhs(speed, &stage(&k3, 1.0), theta, t + dt)?;
    let u_new: Vec<f64> = (0..u.len())
        .map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    let next = FlowState {
        theta: state.theta.clone(),
        u: u_new,
        t: t + dt,
    };
    principal_radii(&next.u, &next.theta, next.t)?;
    Ok(next)
}

// ----- observables ----------------------------------------------------------

/// Per-sample measurements of the evolving surface.
#[derive(Clone, Debug)]
pub struct Observables {
    pub t: f64,
    pub max_u: f64,
    pub min_u: f64,
    /// Grid maximum of the tracked quantity; NaN when none is tracked.
    pub max_w: f64,
    pub max_principal_curvature: f64,
    /// Grid maximum of `max(l1/l2, l2/l1)`; at least 1.
    pub pinching_ratio: f64,
    /// Outer support radius around the pseudocenter.
    pub r_plus: f64,
    /// Inner support radius around the pseudocenter.
    pub r_minus: f64,
    /// Axis coordinate of the pseudocenter.
    pub pseudocenter_z: f64,
    /// Circumradius: smallest enclosing-sphere radius over axis centers.
    pub circumradius: f64,
    /// Inradius: largest enclosed-sphere radius over axis centers.
    pub inradius: f64,
    /// Grid maximum of `|l1 - l2| / K^(5/4)`, the pinching-decay ratio.
    pub diff_over_k54: f64,
    /// Running blow-up estimate; NaN until enough samples exist.
    pub estimated_t: f64,
}

/// Composite Simpson quadrature over the uniform grid (even interval
/// count).
fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    let mut acc = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Extract all observables from a state.
pub fn observables(
    state: &FlowState,
    track_w: Option<&CompiledRatFn>,
    estimated_t: f64,
) -> Result<Observables, SimError> {
    let (rho1, rho2) = principal_radii(&state.u, &state.theta, state.t)?;
    let ut = derivative_theta(&state.u, state.dtheta());

    let mut max_w = f64::NAN;
    let mut max_curv = 0.0f64;
    let mut pinch = 1.0f64;
    let mut diff_ratio = 0.0f64;
    for i in 0..state.u.len() {
        let (l1, l2) = (1.0 / rho1[i], 1.0 / rho2[i]);
        max_curv = max_curv.max(l1).max(l2);
        pinch = pinch.max(l1 / l2).max(l2 / l1);
        let k = l1 * l2;
        diff_ratio = diff_ratio.max((l1 - l2).abs() / k.powf(1.25));
        if let Some(wf) = track_w {
            let w = wf.eval(l1, l2);
            if max_w.is_nan() || w > max_w {
                max_w = w;
            }
        }
    }

    // pseudocenter: the average of the embedding over the normal sphere;
    // by axisymmetry only the axis component survives:
    // q_z = 1/2 * integral (u cos - u' sin) sin dtheta
    let integrand: Vec<f64> = state
        .theta
        .iter()
        .enumerate()
        .map(|(i, &th)| (state.u[i] * th.cos() - ut[i] * th.sin()) * th.sin())
        .collect();
    let q_z = 0.5 * simpson(&integrand, state.dtheta());

    let support_about = |c: f64| -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &th) in state.theta.iter().enumerate() {
            let v = state.u[i] - c * th.cos();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    };
    let (r_minus, r_plus) = support_about(q_z);

    // best centers on the axis: max-support is convex in the center and
    // min-support concave, so ternary search converges
    let max_u = state.max_u();
    let minimize_hi = |mut a: f64, mut b: f64| -> f64 {
        for _ in 0..200 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if support_about(m1).1 <= support_about(m2).1 {
                b = m2;
            } else {
                a = m1;
            }
        }
        support_about(0.5 * (a + b)).1
    };
    let maximize_lo = |mut a: f64, mut b: f64| -> f64 {
        for _ in 0..200 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if support_about(m1).0 >= support_about(m2).0 {
                b = m2;
            } else {
                a = m1;
            }
        }
        support_about(0.5 * (a + b)).0
    };
    let circumradius = minimize_hi(-max_u, max_u);
    let inradius = maximize_lo(-max_u, max_u);

    Ok(Observables {
        t: state.t,
        max_u,
        min_u: state.min_u(),
        max_w,
        max_principal_curvature: max_curv,
        pinching_ratio: pinch,
        r_plus,
        r_minus,
        pseudocenter_z: q_z,
        circumradius,
        inradius,
        diff_over_k54: diff_ratio,
        estimated_t,
    })
}

// ----- blow-up fit and slopes -------------------------------------------------

fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Extrapolate the blow-up time from `(t, max_u)` samples.
///
/// For a speed homogeneous of degree `-gamma` with `gamma > 1`, expanding
/// spheres obey an exact power law that makes `max_u^(1-gamma)` linear in
/// time and zero at blow-up; the fit runs over the final quarter of the
/// samples (at least eight). For other speeds `1/max_u` is used, which is
/// exact for `gamma = 2` and an extrapolation artifact otherwise. Returns
/// the estimate and the fit's root-mean-square residual.
pub fn estimate_blowup(
    samples: &[(f64, f64)],
    gamma: Option<f64>,
) -> Result<(f64, f64), SimError> {
    let window = (samples.len() / 4).max(8);
    if samples.len() < window || window < 8 {
        return Err(SimError::TooFewSamples);
    }
    let tail = &samples[samples.len() - window..];
    if tail.windows(2).any(|w| w[1].1 <= w[0].1) {
        return Err(SimError::NonMonotoneExpansion);
    }
    let exponent = match gamma {
        Some(g) if g > 1.0 => 1.0 - g,
        _ => -1.0,
    };
    let xs: Vec<f64> = tail.iter().map(|&(t, _)| t).collect();
    let ys: Vec<f64> = tail.iter().map(|&(_, u)| u.powf(exponent)).collect();
    let (slope, intercept) = linear_fit(&xs, &ys).ok_or(SimError::TooFewSamples)?;
    if slope >= 0.0 {
        return Err(SimError::NonMonotoneExpansion);
    }
    let t_hat = -intercept / slope;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    Ok((t_hat, (rss / xs.len() as f64).sqrt()))
}

/// Log-log slope of `y` against `t_hat - t` over the last half of the
/// positive samples. Exploratory output, not a gated quantity.
fn loglog_slope(series: &[(f64, f64)], t_hat: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(t, y)| t_hat - t > 0.0 && y > 0.0)
        .map(|&(t, y)| ((t_hat - t).ln(), y.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let tail = &pts[pts.len() / 2..];
    let xs: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    linear_fit(&xs, &ys).map(|(m, _)| m)
}

/// Exploratory convergence-order report.
#[derive(Clone, Debug)]
pub struct SlopeReport {
    /// Fitted slope of `log(r_plus * (T - t) - 1)` against `log(T - t)`.
    pub r_plus_excess: Option<f64>,
    /// Fitted slope of `log(max |l1 - l2| / K^(5/4))` against
    /// `log(T - t)`.
    pub diff_ratio: Option<f64>,
}

// ----- driver ----------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SimOutput {
    pub series: Vec<Observables>,
    /// Final blow-up estimate and fit residual, when enough samples exist.
    pub estimate: Option<(f64, f64)>,
    pub slopes: SlopeReport,
}

/// Run a configured simulation to its stop rule and collect the series.
pub fn simulate(config: &SimConfig) -> Result<SimOutput, SimError> {
    let speed = SpeedFunction::new(&config.velocity)?;
    let mut state = FlowState::from_cosine_series(&config.u0, config.n)?;
    let track = config.track_w.as_ref().map(CompiledRatFn::new);
    let stop_max_u = config.stop_max_u.unwrap_or(10.0 * state.max_u());
    let sample_every = config.sample_every.max(1);

    let mut series: Vec<Observables> = Vec::new();
    let mut maxu_samples: Vec<(f64, f64)> = Vec::new();
    let push_sample = |state: &FlowState,
                           series: &mut Vec<Observables>,
                           maxu_samples: &mut Vec<(f64, f64)>|
     -> Result<(), SimError> {
        maxu_samples.push((state.t, state.max_u()));
        let est = estimate_blowup(maxu_samples, speed.gamma)
            .map(|(t, _)| t)
            .unwrap_or(f64::NAN);
        series.push(observables(state, track.as_ref(), est)?);
        Ok(())
    };

    push_sample(&state, &mut series, &mut maxu_samples)?;
    let mut steps = 0usize;
    while state.max_u() < stop_max_u && steps < config.stop_max_steps {
        let dt = stable_dt(&speed, &state, config.safety)?;
        state = step(&speed, &state, dt)?;
        steps += 1;
        if steps % sample_every == 0 {
            push_sample(&state, &mut series, &mut maxu_samples)?;
        }
    }
    if steps % sample_every != 0 {
        push_sample(&state, &mut series, &mut maxu_samples)?;
    }

    let estimate = estimate_blowup(&maxu_samples, speed.gamma).ok();
    let slopes = match estimate {
        Some((t_hat, _)) => {
            let excess: Vec<(f64, f64)> = series
                .iter()
                .map(|o| (o.t, o.r_plus * (t_hat - o.t) - 1.0))
                .collect();
            let ratio: Vec<(f64, f64)> = series.iter().map(|o| (o.t, o.diff_over_k54)).collect();
            SlopeReport {
                r_plus_excess: loglog_slope(&excess, t_hat),
                diff_ratio: loglog_slope(&ratio, t_hat),
            }
        }
        None => SlopeReport {
            r_plus_excess: None,
            diff_ratio: None,
        },
    };
    Ok(SimOutput {
        series,
        estimate,
        slopes,
    })
}

/// Fixed CSV header for the time series.
pub const CSV_HEADER: &str = "t,max_u,min_u,max_w,max_curv,pinch,r_plus,r_minus,q_z,est_T";

pub fn series_to_csv(series: &[Observables]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for o in series {
        out.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            o.t,
            o.max_u,
            o.min_u,
            o.max_w,
            o.max_principal_curvature,
            o.pinching_ratio,
            o.r_plus,
            o.r_minus,
            o.pseudocenter_z,
            o.estimated_t,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::poly::Basis;

    fn lam(src: &str) -> RationalFn {
        parse(src, Basis::Lambda).unwrap()
    }

    fn inverse_gauss() -> RationalFn {
        lam("-1/(l1*l2)")
    }

    #[test]
    fn cosine_series_parsing() {
        assert_eq!(parse_cosine_series("1").unwrap(), vec![1.0]);
        assert_eq!(
            parse_cosine_series("1 + 0.1*cos(theta)").unwrap(),
            vec![1.0, 0.1]
        );
        assert_eq!(
            parse_cosine_series("0.95 + 0.15*cos(theta)^2").unwrap(),
            vec![0.95, 0.0, 0.15]
        );
        assert_eq!(
            parse_cosine_series("-0.5 + cos(theta)*cos(theta)").unwrap(),
            vec![-0.5, 0.0, 1.0]
        );
        assert!(parse_cosine_series("1 + sin(theta)").is_err());
    }

    #[test]
    fn unit_sphere_radii() {
        let st = FlowState::from_cosine_series(&[1.0], 32).unwrap();
        let (r1, r2) = principal_radii(&st.u, &st.theta, 0.0).unwrap();
        for i in 0..=32 {
            assert!((r1[i] - 1.0).abs() < 1e-12);
            assert!((r2[i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn translated_sphere_radii_to_grid_order() {
        // u = 1 + 0.1 cos(theta) is the unit sphere shifted along the axis
        let n = 64;
        let st = FlowState::from_cosine_series(&[1.0, 0.1], n).unwrap();
        let (r1, r2) = principal_radii(&st.u, &st.theta, 0.0).unwrap();
        let h = st.dtheta();
        for i in 0..=n {
            assert!((r1[i] - 1.0).abs() < 2.0 * h * h, "rho1 at node {i}");
            assert!((r2[i] - 1.0).abs() < 2.0 * h * h, "rho2 at node {i}");
        }
    }

    #[test]
    fn spheroid_radii_match_symbolic_derivatives() {
        // u = 1 + 0.05 (3 cos^2 - 1)
        let n = 64;
        let st = FlowState::from_cosine_series(&[0.95, 0.0, 0.15], n).unwrap();
        let (r1, r2) = principal_radii(&st.u, &st.theta, 0.0).unwrap();
        let h = st.dtheta();
        for (i, &th) in st.theta.iter().enumerate() {
            let u = 0.95 + 0.15 * th.cos() * th.cos();
            let ut = -0.15 * (2.0 * th).sin();
            let utt = -0.3 * (2.0 * th).cos();
            let exact1 = utt + u;
            let exact2 = if i == 0 || i == n {
                exact1
            } else {
                ut * th.cos() / th.sin() + u
            };
            assert!((r1[i] - exact1).abs() < 3.0 * h * h, "rho1 node {i}");
            assert!((r2[i] - exact2).abs() < 3.0 * h * h, "rho2 node {i}");
        }
    }

    #[test]
    fn sphere_step_matches_scalar_ode() {
        // u identically r solves du/dt = G(1/r, 1/r); the grid solution
        // must match the scalar Runge-Kutta update exactly
        let speed = SpeedFunction::new(&inverse_gauss()).unwrap();
        let st = FlowState::from_cosine_series(&[1.0], 32).unwrap();
        let dt = 1e-4;
        let next = step(&speed, &st, dt).unwrap();
        let g = |r: f64| speed.speed.eval(1.0 / r, 1.0 / r);
        let k1 = g(1.0);
        let k2 = g(1.0 + 0.5 * dt * k1);
        let k3 = g(1.0 + 0.5 * dt * k2);
        let k4 = g(1.0 + dt * k3);
        let scalar = 1.0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        for v in &next.u {
            assert!((v - scalar).abs() < 1e-14);
        }
        // du/dt = rho1 rho2 = 1 at the unit sphere
        assert!((next.u[0] - (1.0 + dt)).abs() < 2.0 * dt * dt);
    }

    #[test]
    fn sphere_speeds_at_radius() {
        // at u = 1 under speed H^2/K^2 the support grows at rate 4
        let speed = SpeedFunction::new(&lam("-(l1+l2)^2/(l1^2*l2^2)")).unwrap();
        assert!((speed.sphere_rate - 4.0).abs() < 1e-12);
        assert_eq!(speed.gamma, Some(2.0));
        // at u = 2 under 1/K the rate is 4
        let speed = SpeedFunction::new(&inverse_gauss()).unwrap();
        assert!((speed.speed.eval(0.5, 0.5) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_observables() {
        let st = FlowState::from_cosine_series(&[1.0], 64).unwrap();
        let o = observables(&st, None, f64::NAN).unwrap();
        assert!(o.pseudocenter_z.abs() < 1e-10);
        assert!((o.r_plus - 1.0).abs() < 1e-10);
        assert!((o.r_minus - 1.0).abs() < 1e-10);
        assert!((o.pinching_ratio - 1.0).abs() < 1e-10);
        assert!((o.circumradius - 1.0).abs() < 1e-6);
        assert!((o.inradius - 1.0).abs() < 1e-6);
        // translated sphere: pseudocenter at z = 0.1, radii still 1, all
        // to discretization order of the numerical theta-derivative
        let st = FlowState::from_cosine_series(&[1.0, 0.1], 64).unwrap();
        let o = observables(&st, None, f64::NAN).unwrap();
        assert!((o.pseudocenter_z - 0.1).abs() < 1e-4);
        assert!((o.r_plus - 1.0).abs() < 1e-4);
        assert!((o.r_minus - 1.0).abs() < 1e-4);
    }

    #[test]
    fn sphere_blowup_estimate() {
        let mut config = SimConfig::new(inverse_gauss(), vec![1.0]);
        config.n = 64;
        let out = simulate(&config).unwrap();
        let (t_hat, residual) = out.estimate.unwrap();
        assert!((t_hat - 1.0).abs() < 1e-3, "estimated T = {t_hat}");
        assert!(residual < 1e-6);
        // exact law r(t) = 1/(1 - t) within relative 1e-3 along the run
        for o in &out.series {
            let exact = 1.0 / (1.0 - o.t);
            assert!((o.max_u - exact).abs() / exact < 1e-3);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        // positive but insufficiently convex data fails the radius check
        let st = FlowState::from_cosine_series(&[1.0, 0.0, 2.0], 32).unwrap();
        assert!(matches!(
            principal_radii(&st.u, &st.theta, 0.0),
            Err(SimError::NotConvex { .. })
        ));
        // odd grid size
        assert!(FlowState::from_cosine_series(&[1.0], 33).is_err());
        // contracting speed
        assert!(SpeedFunction::new(&lam("1/(l1*l2)")).is_err());
    }

    #[test]
    fn translation_invariance_of_curvature_series() {
        let speed = SpeedFunction::new(&inverse_gauss()).unwrap();
        let a = FlowState::from_cosine_series(&[0.95, 0.0, 0.15], 64).unwrap();
        let b = FlowState::from_cosine_series(&[0.95, 0.02, 0.15], 64).unwrap();
        let h = a.dtheta();
        let mut sa = a;
        let mut sb = b;
        for _ in 0..50 {
            let dt = stable_dt(&speed, &sa, DEFAULT_SAFETY).unwrap();
            sa = step(&speed, &sa, dt).unwrap();
            sb = step(&speed, &sb, dt).unwrap();
        }
        let oa = observables(&sa, None, f64::NAN).unwrap();
        let ob = observables(&sb, None, f64::NAN).unwrap();
        assert!(
            (oa.max_principal_curvature - ob.max_principal_curvature).abs() < 10.0 * h * h,
            "curvature differs beyond grid order"
        );
        assert!((oa.pinching_ratio - ob.pinching_ratio).abs() < 10.0 * h * h);
    }
}
