//! Divergence-preserving mollification on the unit ball and Friedrichs
//! mollification in time.
//!
//! The space operator is
//!
//! ```text
//! (K v)(x) = int_B rho(y) P(x) vbar(theta(x) + delta xi y) dy,
//! theta(x) = x + delta V(x),   P = det(J) J^{-1},   J = D theta,
//! ```
//!
//! where `vbar` is `v` extended by zero outside the ball and `V` is a smooth
//! radial field pointing out of the ball. Since `P` is the Piola factor of
//! `theta`, `div K v = det(J) (rho_s * div vbar)(theta(x))`, so tangential
//! divergence-free fields stay divergence-free, and because `theta` pushes
//! the boundary layer of width `delta (1 - xi)` outside the ball the result
//! vanishes there.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use beltrami_core::ExtRational;
use gauss_quad::GaussLegendre;

use crate::error::{invalid, FlowError, Result};
use crate::fields::{
    divergence, jacobian, lq_norm, lq_norm_scalar, lq_norm_tensor, Boundary, Domain, SampledField,
};
use crate::io::format_real;

/// Unnormalized bump `exp(-1 / (1 - t))` of `t = |y|^2`.
#[inline]
pub fn bump(t: f64) -> f64 {
    if t < 1.0 {
        (-1.0 / (1.0 - t)).exp()
    } else {
        0.0
    }
}

/// `int_{|y| < 1} bump(|y|^2) dy`.
pub fn ball_bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(96).expect("nonzero"));
        4.0 * PI * rule.integrate(0.0, 1.0, |r| r * r * bump(r * r))
    })
}

/// `int_{-1}^{1} bump(t^2) dt`.
pub fn line_bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(96).expect("nonzero"));
        rule.integrate(-1.0, 1.0, |t| bump(t * t))
    })
}

/// The normalized radial mollifier `rho` on the unit ball.
pub fn rho(y: [f64; 3]) -> f64 {
    bump(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / ball_bump_mass()
}

/// The normalized even time kernel `k` on `[-1, 1]`.
pub fn time_kernel(t: f64) -> f64 {
    bump(t * t) / line_bump_mass()
}

/// The outward field `V(x) = x g(|x|)` with `g = 1/r` for `r >= 1/2` and a
/// `C^2` even polynomial blend inside, together with `theta = x + delta V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversalMap {
    pub delta: f64,
}

impl TransversalMap {
    /// `(g(r), g'(r) / r)`.
    #[inline]
    fn profile(r2: f64) -> (f64, f64) {
        if r2 >= 0.25 {
            let r = r2.sqrt();
            (1.0 / r, -1.0 / (r2 * r))
        } else {
            (3.75 - 10.0 * r2 + 12.0 * r2 * r2, -20.0 + 48.0 * r2)
        }
    }

    pub fn field(&self, x: [f64; 3]) -> [f64; 3] {
        let (g, _) = Self::profile(dot(x, x));
        [x[0] * g, x[1] * g, x[2] * g]
    }

    pub fn theta(&self, x: [f64; 3]) -> [f64; 3] {
        let (g, _) = Self::profile(dot(x, x));
        let s = 1.0 + self.delta * g;
        [x[0] * s, x[1] * s, x[2] * s]
    }

    /// `J = (1 + delta g) I + delta (g'/r) x x^T`.
    pub fn jacobian(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        let (g, gr) = Self::profile(dot(x, x));
        let a = 1.0 + self.delta * g;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let diag = if i == j { a } else { 0.0 };
                diag + self.delta * gr * x[i] * x[j]
            })
        })
    }

    /// `det(J) J^{-1} = a (a + b) I - a delta (g'/r) x x^T` with
    /// `a = 1 + delta g` and `b = delta r g'`.
    pub fn piola(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        let r2 = dot(x, x);
        let (g, gr) = Self::profile(r2);
        let a = 1.0 + self.delta * g;
        let b = self.delta * gr * r2;
        let c = -a * self.delta * gr;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let diag = if i == j { a * (a + b) } else { 0.0 };
                diag + c * x[i] * x[j]
            })
        })
    }
}

/// How the `y` integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// Product Gauss-Legendre nodes on `[-1, 1]^3` masked to `|y| < 1`,
    /// with trilinear interpolation of `vbar` between grid nodes.
    Gauss { order: usize },
    /// Sum of the scaled kernel over the grid nodes themselves; the result
    /// is a smooth function of `x`, which is what the divergence
    /// refinement study needs.
    Lattice,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MollifierConfig {
    pub delta: f64,
    pub xi: f64,
    pub quadrature: Quadrature,
}

pub const DEFAULT_XI: f64 = 0.25;
pub const DEFAULT_QUAD_ORDER: usize = 8;

impl MollifierConfig {
    pub fn new(delta: f64, xi: f64, quad_order: usize) -> Result<Self> {
        let cfg = MollifierConfig {
            delta,
            xi,
            quadrature: Quadrature::Gauss { order: quad_order },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn lattice(delta: f64, xi: f64) -> Result<Self> {
        let cfg = MollifierConfig {
            delta,
            xi,
            quadrature: Quadrature::Lattice,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        let cfg = MollifierConfig {
            delta,
            ..self.clone()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn map(&self) -> TransversalMap {
        TransversalMap { delta: self.delta }
    }

    /// Kernel radius `delta xi`.
    pub fn radius(&self) -> f64 {
        self.delta * self.xi
    }

    /// Width of the boundary layer on which `K v` vanishes.
    pub fn support_margin_bound(&self) -> f64 {
        self.delta * (1.0 - self.xi)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(invalid(format!(
                "delta must lie in (0, 1], got {}",
                self.delta
            )));
        }
        if !(self.xi > 0.0 && self.xi < 1.0 / 3.0) {
            return Err(invalid(format!("xi must lie in (0, 1/3), got {}", self.xi)));
        }
        if let Quadrature::Gauss { order } = self.quadrature {
            if !(2..=64).contains(&order) {
                return Err(invalid(format!(
                    "quadrature order must lie in 2..=64, got {order}"
                )));
            }
        }
        // theta(O) + B_{3 delta xi} must stay outside the closed ball for the
        // exterior shell O = {1 <= |x| <= 2}
        let map = self.map();
        for i in 0..=256 {
            let r = 1.0 + i as f64 / 256.0;
            let t = map.theta([r, 0.0, 0.0]);
            if t[0] - 3.0 * self.radius() <= 1.0 {
                return Err(invalid(format!(
                    "theta(x) + B(3 delta xi) meets the ball at |x| = {r} (delta = {}, xi = {})",
                    self.delta, self.xi
                )));
            }
        }
        Ok(())
    }
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn matvec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

/// Masked product Gauss nodes on the unit ball with weights `w rho(y)`,
/// normalized to unit discrete mass.
pub fn ball_nodes(order: usize) -> Result<Vec<([f64; 3], f64)>> {
    let order =
        NonZeroUsize::new(order).ok_or_else(|| invalid("quadrature order must be positive"))?;
    let rule = GaussLegendre::new(order);
    let pairs = rule.as_node_weight_pairs();
    let mut nodes = Vec::new();
    for &(a, wa) in pairs {
        for &(b, wb) in pairs {
            for &(c, wc) in pairs {
                let y = [a, b, c];
                let w = wa * wb * wc * rho(y);
                if w > 0.0 {
                    nodes.push((y, w));
                }
            }
        }
    }
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return Err(invalid(
            "quadrature order too low: no node inside the unit ball",
        ));
    }
    for (_, w) in nodes.iter_mut() {
        *w /= total;
    }
    Ok(nodes)
}

/// Trilinear interpolation of a ball field, with `vbar(p) = 0` for `|p| >= 1`.
pub fn sample_extended(v: &SampledField, p: [f64; 3]) -> [f64; 3] {
    if dot(p, p) >= 1.0 {
        return [0.0; 3];
    }
    let n = v.n;
    let h = Domain::Ball.spacing(n);
    let mut i0 = [0usize; 3];
    let mut t = [0.0; 3];
    for d in 0..3 {
        let s = (p[d] + 1.0) / h;
        let i = (s.floor() as isize).clamp(0, n as isize - 2) as usize;
        i0[d] = i;
        t[d] = s - i as f64;
    }
    let mut out = [0.0; 3];
    for (corner, w) in [
        ([0, 0, 0], (1.0 - t[0]) * (1.0 - t[1]) * (1.0 - t[2])),
        ([0, 0, 1], (1.0 - t[0]) * (1.0 - t[1]) * t[2]),
        ([0, 1, 0], (1.0 - t[0]) * t[1] * (1.0 - t[2])),
        ([0, 1, 1], (1.0 - t[0]) * t[1] * t[2]),
        ([1, 0, 0], t[0] * (1.0 - t[1]) * (1.0 - t[2])),
        ([1, 0, 1], t[0] * (1.0 - t[1]) * t[2]),
        ([1, 1, 0], t[0] * t[1] * (1.0 - t[2])),
        ([1, 1, 1], t[0] * t[1] * t[2]),
    ] {
        let idx = ((i0[0] + corner[0]) * n + i0[1] + corner[1]) * n + i0[2] + corner[2];
        for c in 0..3 {
            out[c] += w * v.values[c][idx];
        }
    }
    out
}

fn require_ball(v: &SampledField) -> Result<()> {
    if v.domain != Domain::Ball {
        return Err(FlowError::DomainMismatch { expected: "ball" });
    }
    Ok(())
}

/// `K_delta v` at every grid node; zero outside the ball and on the
/// boundary layer of width `delta (1 - xi)`.
pub fn mollify_div(v: &SampledField, cfg: &MollifierConfig) -> Result<SampledField> {
    require_ball(v)?;
    cfg.validate()?;
    let n = v.n;
    let map = cfg.map();
    let s = cfg.radius();
    let mut out = SampledField::zeros(Domain::Ball, n)?.with_boundary(Boundary::NoSlip);
    out.time = v.time;

    let nodes = match cfg.quadrature {
        Quadrature::Gauss { order } => ball_nodes(order)?,
        Quadrature::Lattice => Vec::new(),
    };
    let h = Domain::Ball.spacing(n);
    let coords: Vec<f64> = (0..n).map(|i| Domain::Ball.coord(n, i)).collect();
    let lattice_scale = h * h * h / (ball_bump_mass() * s * s * s);

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = [coords[i], coords[j], coords[k]];
                if dot(x, x) > 1.0 {
                    continue;
                }
                let p = map.theta(x);
                // every sample point lies outside the ball
                if dot(p, p).sqrt() - s >= 1.0 {
                    continue;
                }
                let avg = match cfg.quadrature {
                    Quadrature::Gauss { .. } => {
                        let mut acc = [0.0; 3];
                        for (y, w) in &nodes {
                            let q = [p[0] + s * y[0], p[1] + s * y[1], p[2] + s * y[2]];
                            let val = sample_extended(v, q);
                            for c in 0..3 {
                                acc[c] += w * val[c];
                            }
                        }
                        acc
                    }
                    Quadrature::Lattice => lattice_average(v, &coords, p, s, lattice_scale),
                };
                let val = matvec(&map.piola(x), avg);
                let idx = (i * n + j) * n + k;
                for c in 0..3 {
                    out.values[c][idx] = val[c];
                }
            }
        }
    }
    Ok(out)
}

/// `sum_m h^3 rho_s(x_m - p) v_m` over grid nodes inside the ball.
fn lattice_average(v: &SampledField, coords: &[f64], p: [f64; 3], s: f64, scale: f64) -> [f64; 3] {
    let n = v.n;
    let h = Domain::Ball.spacing(n);
    let range = |c: f64| {
        let lo = (((c - s + 1.0) / h).ceil().max(0.0)) as usize;
        let hi = (((c + s + 1.0) / h).floor().min(n as f64 - 1.0)) as isize;
        (lo, hi)
    };
    let (ri, rj, rk) = (range(p[0]), range(p[1]), range(p[2]));
    let inv_s2 = 1.0 / (s * s);
    let mut acc = [0.0; 3];
    for i in ri.0 as isize..=ri.1 {
        let xi = coords[i as usize];
        let dx = xi - p[0];
        for j in rj.0 as isize..=rj.1 {
            let yj = coords[j as usize];
            let dy = yj - p[1];
            let dxy = dx * dx + dy * dy;
            if dxy >= s * s {
                continue;
            }
            for k in rk.0 as isize..=rk.1 {
                let zk = coords[k as usize];
                let dz = zk - p[2];
                let t = (dxy + dz * dz) * inv_s2;
                if t >= 1.0 || xi * xi + yj * yj + zk * zk > 1.0 {
                    continue;
                }
                let w = bump(t) * scale;
                let idx = ((i as usize) * n + j as usize) * n + k as usize;
                for c in 0..3 {
                    acc[c] += w * v.values[c][idx];
                }
            }
        }
    }
    acc
}

/// Distance from the outermost nonzero sample to the sphere; 1 for a zero
/// field.
pub fn support_margin(w: &SampledField) -> Result<f64> {
    require_ball(w)?;
    let mut r_max: Option<f64> = None;
    for idx in 0..w.len() {
        let v = w.at(idx);
        if v != [0.0; 3] {
            let x = w.node(idx);
            let r = dot(x, x).sqrt();
            r_max = Some(r_max.map_or(r, |m: f64| m.max(r)));
        }
    }
    Ok(r_max.map_or(1.0, |r| (1.0 - r).max(0.0)))
}

/// `|div_h w|_2 / |grad_h w|_2` with the grid difference operators.
pub fn divergence_residual(w: &SampledField) -> Result<f64> {
    require_ball(w)?;
    let two = ExtRational::int(2);
    let g = lq_norm_tensor(&jacobian(w), w.domain, w.n, &two);
    if g == 0.0 {
        return Err(FlowError::UndefinedRatio("L2 norm of the gradient"));
    }
    Ok(lq_norm_scalar(&divergence(w), &two) / g)
}

/// `sup_{|x| <= 1} |det(J) J^{-1} - I|` (Frobenius) over the grid nodes.
pub fn piola_defect(map: &TransversalMap, n: usize) -> Result<f64> {
    let grid = SampledField::zeros(Domain::Ball, n)?;
    let mut sup = 0.0f64;
    for idx in 0..grid.len() {
        let x = grid.node(idx);
        if dot(x, x) > 1.0 {
            continue;
        }
        let p = map.piola(x);
        let mut f = 0.0;
        for (i, row) in p.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let d = e - if i == j { 1.0 } else { 0.0 };
                f += d * d;
            }
        }
        sup = sup.max(f.sqrt());
    }
    Ok(sup)
}

/// Table row: `(delta, value)`.
pub type DeltaRow = (f64, f64);

fn check_decreasing(deltas: &[f64]) -> Result<()> {
    if deltas.is_empty() {
        return Err(invalid("at least one delta is required"));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("deltas must be strictly decreasing"));
    }
    Ok(())
}

/// Mollify `v` once per delta with the template's `xi` and quadrature.
pub fn mollify_family(
    v: &SampledField,
    deltas: &[f64],
    template: &MollifierConfig,
) -> Result<Vec<SampledField>> {
    check_decreasing(deltas)?;
    deltas
        .iter()
        .map(|&d| mollify_div(v, &template.with_delta(d)?))
        .collect()
}

/// Rows `(delta, |K_delta v - v|_q)`.
pub fn convergence_experiment(
    v: &SampledField,
    deltas: &[f64],
    q: &ExtRational,
    template: &MollifierConfig,
) -> Result<Vec<DeltaRow>> {
    let family = mollify_family(v, deltas, template)?;
    convergence_rows(v, deltas, &family, q)
}

/// Rows of `convergence_experiment` from precomputed mollifications.
pub fn convergence_rows(
    v: &SampledField,
    deltas: &[f64],
    family: &[SampledField],
    q: &ExtRational,
) -> Result<Vec<DeltaRow>> {
    deltas
        .iter()
        .zip(family)
        .map(|(&d, w)| Ok((d, lq_norm(&w.combine(1.0, v, -1.0)?, q))))
        .collect()
}

/// Rows `(delta, |grad K_delta v|_q)`.
pub fn gradient_bound_experiment(
    v: &SampledField,
    deltas: &[f64],
    q: &ExtRational,
    template: &MollifierConfig,
) -> Result<Vec<DeltaRow>> {
    let family = mollify_family(v, deltas, template)?;
    Ok(gradient_rows(deltas, &family, q))
}

pub fn gradient_rows(deltas: &[f64], family: &[SampledField], q: &ExtRational) -> Vec<DeltaRow> {
    deltas
        .iter()
        .zip(family)
        .map(|(&d, w)| (d, lq_norm_tensor(&jacobian(w), w.domain, w.n, q)))
        .collect()
}

/// `max / median` of the value column.
pub fn max_over_median(rows: &[DeltaRow]) -> Option<f64> {
    if rows.is_empty() {
        return None;
    }
    let mut vals: Vec<f64> = rows.iter().map(|r| r.1).collect();
    vals.sort_by(f64::total_cmp);
    let m = vals.len();
    let median = if m % 2 == 1 {
        vals[m / 2]
    } else {
        0.5 * (vals[m / 2 - 1] + vals[m / 2])
    };
    Some(vals[m - 1] / median)
}

/// Fit `value <= c delta` with `c = max(value / delta)` and report the
/// spread `max / min` of the ratios.
pub fn fit_linear_constant(rows: &[DeltaRow]) -> Option<(f64, f64)> {
    let ratios: Vec<f64> = rows.iter().map(|(d, v)| v / d).collect();
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    (!ratios.is_empty()).then(|| (max, max / min))
}

/// CSV of a delta table, `delta` in column 1.
pub fn rows_to_csv(header: &str, rows: &[DeltaRow]) -> String {
    let mut s = format!("delta,{header}\n");
    for (d, v) in rows {
        s.push_str(&format!("{},{}\n", format_real(*d), format_real(*v)));
    }
    s
}

/// Frames sampled at uniformly spaced times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub frames: Vec<SampledField>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, frames: Vec<SampledField>) -> Result<Self> {
        if times.len() != frames.len() {
            return Err(invalid("one frame per time is required"));
        }
        if let Some(first) = frames.first() {
            for f in &frames[1..] {
                first.same_grid(f)?;
            }
        }
        Ok(TimeSeries { times, frames })
    }

    /// Sample `f(t)` at `t0 + i dt`, `i < count`.
    pub fn sample(
        t0: f64,
        dt: f64,
        count: usize,
        f: impl Fn(f64) -> Result<SampledField>,
    ) -> Result<Self> {
        let times: Vec<f64> = (0..count).map(|i| t0 + i as f64 * dt).collect();
        let frames = times
            .iter()
            .map(|&t| f(t).map(|w| w.with_time(t)))
            .collect::<Result<_>>()?;
        TimeSeries::new(times, frames)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The common time step; errors unless the sampling is uniform.
    pub fn uniform_step(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(invalid("a time series needs at least two frames"));
        }
        let dt = self.times[1] - self.times[0];
        if !(dt > 0.0) {
            return Err(invalid("times must be increasing"));
        }
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
                return Err(invalid("time sampling must be uniform"));
            }
        }
        Ok(dt)
    }

    /// Apply `f` frame by frame.
    pub fn map(&self, f: impl Fn(&SampledField) -> Result<SampledField>) -> Result<Self> {
        let frames = self.frames.iter().map(f).collect::<Result<_>>()?;
        TimeSeries::new(self.times.clone(), frames)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeMollifierConfig {
    pub epsilon: f64,
}

impl TimeMollifierConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(TimeMollifierConfig { epsilon })
    }

    /// Symmetric weights `w_{-m..=m}` of `k_eps` on the step `dt`,
    /// normalized to unit sum.
    pub fn weights(&self, dt: f64) -> Result<Vec<f64>> {
        if dt > self.epsilon / 8.0 {
            return Err(invalid(format!(
                "time step {dt} is coarser than epsilon / 8 = {}",
                self.epsilon / 8.0
            )));
        }
        let m = ((self.epsilon / dt) * (1.0 - 1e-12)).floor() as usize;
        let half: Vec<f64> = (0..=m)
            .map(|j| time_kernel(j as f64 * dt / self.epsilon))
            .collect();
        let mut w: Vec<f64> = half[1..].iter().rev().chain(half.iter()).copied().collect();
        let total: f64 = w.iter().sum();
        for x in w.iter_mut() {
            *x /= total;
        }
        Ok(w)
    }
}

/// Discrete convolution in time with `k_eps`, evaluated at the frames whose
/// full stencil lies inside the series.
pub fn mollify_time(series: &TimeSeries, cfg: &TimeMollifierConfig) -> Result<TimeSeries> {
    let dt = series.uniform_step()?;
    let w = cfg.weights(dt)?;
    let m = w.len() / 2;
    if series.len() <= 2 * m {
        return Err(invalid(format!(
            "series of {} frames is shorter than the kernel stencil of {}",
            series.len(),
            2 * m + 1
        )));
    }
    let mut times = Vec::new();
    let mut frames = Vec::new();
    for i in m..series.len() - m {
        let mut acc = series.frames[i].scaled(0.0);
        for (j, wj) in w.iter().enumerate() {
            let f = &series.frames[i + j - m];
            for c in 0..3 {
                for (a, b) in acc.values[c].iter_mut().zip(&f.values[c]) {
                    *a += wj * b;
                }
            }
        }
        acc.time = Some(series.times[i]);
        times.push(series.times[i]);
        frames.push(acc);
    }
    TimeSeries::new(times, frames)
}

/// `max |(K v)_eps - K (v_eps)|` over all frames and nodes.
pub fn commutation_residual(
    series: &TimeSeries,
    space: &MollifierConfig,
    time: &TimeMollifierConfig,
) -> Result<f64> {
    let a = mollify_time(&series.map(|f| mollify_div(f, space))?, time)?;
    let b = mollify_time(series, time)?.map(|f| mollify_div(f, space))?;
    let mut worst = 0.0f64;
    for (x, y) in a.frames.iter().zip(&b.frames) {
        worst = worst.max(x.combine(1.0, y, -1.0)?.max_abs());
    }
    Ok(worst)
}

/// Rows `(delta, max_t |K_delta v(t) - v(t)|_q)`.
pub fn uniform_time_check(
    series: &TimeSeries,
    deltas: &[f64],
    q: &ExtRational,
    template: &MollifierConfig,
) -> Result<Vec<DeltaRow>> {
    check_decreasing(deltas)?;
    let mut rows = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let cfg = template.with_delta(d)?;
        let mut worst = 0.0f64;
        for f in &series.frames {
            let k = mollify_div(f, &cfg)?;
            worst = worst.max(lq_norm(&k.combine(1.0, f, -1.0)?, q));
        }
        rows.push((d, worst));
    }
    Ok(rows)
}
