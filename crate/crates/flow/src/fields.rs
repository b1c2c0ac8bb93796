//! Vector fields sampled on the periodic box `[0, 2pi)^3` or on a uniform
//! grid over the bounding box `[-1, 1]^3` of the unit ball.
//!
//! Torus fields are differentiated spectrally. Ball fields vanish outside
//! the closed unit ball and are differentiated with fourth-order finite
//! differences (one-sided stencils at the edges of the box).

use std::f64::consts::PI;

use beltrami_core::ExtRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::error::{invalid, FlowError, Result};
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Periodic box of side `2 pi`, nodes `2 pi i / n`.
    Torus,
    /// Unit ball sampled on `[-1, 1]^3`, nodes `-1 + 2 i / (n - 1)`.
    Ball,
}

impl Domain {
    pub fn spacing(self, n: usize) -> f64 {
        match self {
            Domain::Torus => 2.0 * PI / n as f64,
            Domain::Ball => 2.0 / (n as f64 - 1.0),
        }
    }

    #[inline]
    pub fn coord(self, n: usize, i: usize) -> f64 {
        match self {
            Domain::Torus => 2.0 * PI * i as f64 / n as f64,
            Domain::Ball => -1.0 + 2.0 * i as f64 / (n as f64 - 1.0),
        }
    }

    pub fn cell_volume(self, n: usize) -> f64 {
        self.spacing(n).powi(3)
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::Torus => "torus",
            Domain::Ball => "ball",
        }
    }
}

/// Boundary condition the field is meant to satisfy; metadata only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    /// `u . n = 0`.
    Slip,
    /// `u = 0`.
    NoSlip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub domain: Domain,
    pub boundary: Boundary,
    pub n: usize,
    /// Component-major samples, flat index `(i n + j) n + k`.
    pub values: [Vec<f64>; 3],
    pub time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub domain: Domain,
    pub n: usize,
    pub values: Vec<f64>,
}

fn check_resolution(domain: Domain, n: usize) -> Result<()> {
    match domain {
        Domain::Torus if n < 4 || n % 2 != 0 => Err(invalid(format!(
            "torus resolution must be even and at least 4, got {n}"
        ))),
        Domain::Ball if n < 5 => Err(invalid(format!(
            "ball resolution must be at least 5, got {n}"
        ))),
        _ => Ok(()),
    }
}

impl SampledField {
    pub fn zeros(domain: Domain, n: usize) -> Result<Self> {
        check_resolution(domain, n)?;
        let len = n * n * n;
        Ok(SampledField {
            domain,
            boundary: match domain {
                Domain::Torus => Boundary::Periodic,
                Domain::Ball => Boundary::Slip,
            },
            n,
            values: [vec![0.0; len], vec![0.0; len], vec![0.0; len]],
            time: None,
        })
    }

    /// Sample `f` at every node; ball samples outside `|x| <= 1` are zero.
    pub fn from_fn(domain: Domain, n: usize, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        let mut out = SampledField::zeros(domain, n)?;
        for i in 0..n {
            let x = domain.coord(n, i);
            for j in 0..n {
                let y = domain.coord(n, j);
                for k in 0..n {
                    let z = domain.coord(n, k);
                    if domain == Domain::Ball && x * x + y * y + z * z > 1.0 {
                        continue;
                    }
                    let idx = (i * n + j) * n + k;
                    let v = f([x, y, z]);
                    for c in 0..3 {
                        out.values[c][idx] = v[c];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.values[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn at(&self, idx: usize) -> [f64; 3] {
        [
            self.values[0][idx],
            self.values[1][idx],
            self.values[2][idx],
        ]
    }

    pub fn node(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        [
            self.domain.coord(n, idx / (n * n)),
            self.domain.coord(n, (idx / n) % n),
            self.domain.coord(n, idx % n),
        ]
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn with_boundary(mut self, b: Boundary) -> Self {
        self.boundary = b;
        self
    }

    /// `a * self + b * other`, keeping the metadata of `self`.
    pub fn combine(&self, a: f64, other: &SampledField, b: f64) -> Result<SampledField> {
        self.same_grid(other)?;
        let mut out = self.clone();
        for c in 0..3 {
            for (o, (x, y)) in out.values[c]
                .iter_mut()
                .zip(self.values[c].iter().zip(&other.values[c]))
            {
                *o = a * x + b * y;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, a: f64) -> SampledField {
        let mut out = self.clone();
        for c in 0..3 {
            out.values[c].iter_mut().for_each(|v| *v *= a);
        }
        out
    }

    pub fn same_grid(&self, other: &SampledField) -> Result<()> {
        if self.domain != other.domain || self.n != other.n {
            return Err(invalid(format!(
                "grid mismatch: {} n={} vs {} n={}",
                self.domain.name(),
                self.n,
                other.domain.name(),
                other.n
            )));
        }
        Ok(())
    }

    /// Pointwise Euclidean magnitudes.
    pub fn magnitudes(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let v = self.at(i);
                (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`, a
/// Beltrami field with `curl u = u`.
pub fn abc_flow(a: f64, b: f64, c: f64, n: usize) -> Result<SampledField> {
    SampledField::from_fn(Domain::Torus, n, |[x, y, z]| {
        [
            a * z.sin() + c * y.cos(),
            b * x.sin() + a * z.cos(),
            c * y.sin() + b * x.cos(),
        ]
    })
}

/// Orthonormal `(e1, e2)` perpendicular to `k` with
/// `curl(e1 cos(k.x) + e2 sin(k.x)) = helicity * |k| * (...)`.
///
/// `e1` is the normalized `z x k` (or `x` when `k` is along `z`). Positive
/// helicity takes `e2 = e1 x k/|k|`, so `(e2, e1, k/|k|)` is right-handed.
pub fn eigen_basis(k: [i32; 3], helicity: f64) -> ([f64; 3], [f64; 3]) {
    let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
    let kn = norm(kf);
    let khat = [kf[0] / kn, kf[1] / kn, kf[2] / kn];
    let e1 = if k[0] == 0 && k[1] == 0 {
        [1.0, 0.0, 0.0]
    } else {
        let v = [-kf[1], kf[0], 0.0];
        let vn = norm(v);
        [v[0] / vn, v[1] / vn, 0.0]
    };
    let mut e2 = cross(e1, khat);
    if helicity < 0.0 {
        e2 = [-e2[0], -e2[1], -e2[2]];
    }
    (e1, e2)
}

/// `e1 cos(k.x + phase) + e2 sin(k.x + phase)` with `curl u = |k| u`.
pub fn curl_eigenfield(k: [i32; 3], phase: f64, n: usize) -> Result<SampledField> {
    eigenmode_sum(&[(k, 1.0, phase)], 1.0, n)
}

/// Sum of single-mode eigenfields `amp (e1 cos + e2 sin)(k.x + phase)`.
/// Negative `helicity` selects the modes with `curl u = -|k| u`.
pub fn eigenmode_sum(
    modes: &[([i32; 3], f64, f64)],
    helicity: f64,
    n: usize,
) -> Result<SampledField> {
    for (k, _, _) in modes {
        if *k == [0, 0, 0] {
            return Err(invalid("eigenfield wavevector must be nonzero"));
        }
    }
    let bases: Vec<_> = modes
        .iter()
        .map(|(k, a, p)| (*k, *a, *p, eigen_basis(*k, helicity)))
        .collect();
    SampledField::from_fn(Domain::Torus, n, |x| {
        let mut u = [0.0; 3];
        for (k, amp, phase, (e1, e2)) in &bases {
            let th = k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2] + phase;
            let (s, c) = th.sin_cos();
            for d in 0..3 {
                u[d] += amp * (e1[d] * c + e2[d] * s);
            }
        }
        u
    })
}

/// Random divergence-free torus field with all modes `|k|_inf <= kmax`,
/// independent Gaussian coefficients, reproducible from `seed`.
pub fn random_solenoidal(n: usize, kmax: usize, seed: u64) -> Result<SampledField> {
    check_resolution(Domain::Torus, n)?;
    if 2 * kmax >= n {
        return Err(invalid(format!(
            "kmax = {kmax} must be below n/2 = {}",
            n / 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sp = Spectral::new(n);
    let len = n * n * n;
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); len]; 3];
    let km = kmax as i64;
    for a in -km..=km {
        for b in -km..=km {
            for c in -km..=km {
                if (a, b, c) == (0, 0, 0) {
                    continue;
                }
                let mut v: [Complex64; 3] = std::array::from_fn(|_| {
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                });
                let kv = [a as f64, b as f64, c as f64];
                let k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                let kdotv = v[0] * kv[0] + v[1] * kv[1] + v[2] * kv[2];
                for d in 0..3 {
                    v[d] -= kdotv * (kv[d] / k2);
                }
                let idx = |w: i64| w.rem_euclid(n as i64) as usize;
                let at = (idx(a) * n + idx(b)) * n + idx(c);
                for d in 0..3 {
                    coeffs[d][at] = v[d];
                }
            }
        }
    }
    // keep the samples real: symmetrize c_{-k} = conj(c_k)
    let mut sym = coeffs.clone();
    for d in 0..3 {
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let at = (i * n + j) * n + l;
                    let neg = (((n - i) % n) * n + (n - j) % n) * n + (n - l) % n;
                    sym[d][at] = (coeffs[d][at] + coeffs[d][neg].conj()) * 0.5;
                }
            }
        }
    }
    let phys = sp.inverse_real(&[&sym[0], &sym[1], &sym[2]]);
    let mut out = SampledField::zeros(Domain::Torus, n)?;
    for (d, p) in phys.into_iter().enumerate() {
        out.values[d] = p;
    }
    Ok(out)
}

#[inline]
pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// `d f / d x_axis` with fourth-order differences on the ball grid.
pub fn fd_derivative(values: &[f64], n: usize, h: f64, axis: usize) -> Vec<f64> {
    let stride = match axis {
        0 => n * n,
        1 => n,
        _ => 1,
    };
    let inv = 1.0 / (12.0 * h);
    let mut out = vec![0.0; values.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let i = (idx / stride) % n;
        let f = |off: isize| values[(idx as isize + off * stride as isize) as usize];
        *o = inv
            * if i >= 2 && i + 2 < n {
                -f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)
            } else if i == 0 {
                -25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)
            } else if i == 1 {
                -3.0 * f(-1) - 10.0 * f(0) + 18.0 * f(1) - 6.0 * f(2) + f(3)
            } else if i == n - 1 {
                25.0 * f(0) - 48.0 * f(-1) + 36.0 * f(-2) - 16.0 * f(-3) + 3.0 * f(-4)
            } else {
                3.0 * f(1) + 10.0 * f(0) - 18.0 * f(-1) + 6.0 * f(-2) - f(-3)
            };
    }
    out
}

/// Full derivative table `d[j][i] = d f_i / d x_j`.
pub fn jacobian(f: &SampledField) -> [[Vec<f64>; 3]; 3] {
    match f.domain {
        Domain::Ball => {
            let h = f.domain.spacing(f.n);
            std::array::from_fn(|j| std::array::from_fn(|i| fd_derivative(&f.values[i], f.n, h, j)))
        }
        Domain::Torus => {
            let mut sp = Spectral::new(f.n);
            let c = sp.forward_real(&[&f.values[0], &f.values[1], &f.values[2]]);
            let mut specs: Vec<Vec<Complex64>> = Vec::with_capacity(9);
            for j in 0..3 {
                for ci in c.iter() {
                    specs.push(
                        ci.iter()
                            .enumerate()
                            .map(|(idx, z)| Complex64::new(0.0, sp.kvec(idx)[j]) * z)
                            .collect(),
                    );
                }
            }
            let refs: Vec<&[Complex64]> = specs.iter().map(|v| v.as_slice()).collect();
            let mut phys = sp.inverse_real(&refs).into_iter();
            std::array::from_fn(|_| std::array::from_fn(|_| phys.next().expect("nine derivatives")))
        }
    }
}

pub fn curl(f: &SampledField) -> SampledField {
    let d = jacobian(f);
    let mut out = f.clone();
    let len = f.len();
    for idx in 0..len {
        out.values[0][idx] = d[1][2][idx] - d[2][1][idx];
        out.values[1][idx] = d[2][0][idx] - d[0][2][idx];
        out.values[2][idx] = d[0][1][idx] - d[1][0][idx];
    }
    out
}

pub fn divergence(f: &SampledField) -> ScalarField {
    let values = match f.domain {
        Domain::Ball => {
            let h = f.domain.spacing(f.n);
            let mut acc = fd_derivative(&f.values[0], f.n, h, 0);
            for axis in 1..3 {
                for (a, b) in acc
                    .iter_mut()
                    .zip(fd_derivative(&f.values[axis], f.n, h, axis))
                {
                    *a += b;
                }
            }
            acc
        }
        Domain::Torus => {
            let mut sp = Spectral::new(f.n);
            let c = sp.forward_real(&[&f.values[0], &f.values[1], &f.values[2]]);
            let div: Vec<Complex64> = (0..f.len())
                .map(|idx| {
                    let k = sp.kvec(idx);
                    Complex64::new(0.0, 1.0)
                        * (c[0][idx] * k[0] + c[1][idx] * k[1] + c[2][idx] * k[2])
                })
                .collect();
            sp.inverse_real(&[&div]).pop().expect("one field")
        }
    };
    ScalarField {
        domain: f.domain,
        n: f.n,
        values,
    }
}

pub fn gradient(s: &ScalarField) -> SampledField {
    let mut out = SampledField::zeros(s.domain, s.n).expect("grid of an existing field");
    match s.domain {
        Domain::Ball => {
            let h = s.domain.spacing(s.n);
            for axis in 0..3 {
                out.values[axis] = fd_derivative(&s.values, s.n, h, axis);
            }
        }
        Domain::Torus => {
            let mut sp = Spectral::new(s.n);
            let c = sp.forward_real(&[&s.values]).pop().expect("one field");
            let specs: Vec<Vec<Complex64>> = (0..3)
                .map(|j| {
                    c.iter()
                        .enumerate()
                        .map(|(idx, z)| Complex64::new(0.0, sp.kvec(idx)[j]) * z)
                        .collect()
                })
                .collect();
            let phys = sp.inverse_real(&[&specs[0], &specs[1], &specs[2]]);
            for (d, p) in phys.into_iter().enumerate() {
                out.values[d] = p;
            }
        }
    }
    out
}

/// `(sum |v|^q dV)^(1/q)` over pointwise magnitudes; `q = inf` is the grid
/// maximum, a lower bound for the true supremum.
pub fn lq_of_magnitudes(mags: impl Iterator<Item = f64>, cell: f64, q: &ExtRational) -> f64 {
    if q.is_infinite() {
        return mags.fold(0.0, f64::max);
    }
    let qf = q.to_f64();
    if qf == 2.0 {
        return (mags.map(|m| m * m).sum::<f64>() * cell).sqrt();
    }
    (mags.map(|m| m.powf(qf)).sum::<f64>() * cell).powf(1.0 / qf)
}

pub fn lq_norm(f: &SampledField, q: &ExtRational) -> f64 {
    lq_of_magnitudes(f.magnitudes().into_iter(), f.domain.cell_volume(f.n), q)
}

pub fn lq_norm_scalar(s: &ScalarField, q: &ExtRational) -> f64 {
    lq_of_magnitudes(
        s.values.iter().map(|v| v.abs()),
        s.domain.cell_volume(s.n),
        q,
    )
}

/// `L^q` norm of the Frobenius magnitude of a derivative table.
pub fn lq_norm_tensor(d: &[[Vec<f64>; 3]; 3], domain: Domain, n: usize, q: &ExtRational) -> f64 {
    let len = d[0][0].len();
    let mags = (0..len).map(|idx| {
        let mut s = 0.0;
        for row in d {
            for comp in row {
                s += comp[idx] * comp[idx];
            }
        }
        s.sqrt()
    });
    lq_of_magnitudes(mags, domain.cell_volume(n), q)
}

fn require_torus(f: &SampledField) -> Result<()> {
    if f.domain != Domain::Torus {
        return Err(FlowError::DomainMismatch { expected: "torus" });
    }
    Ok(())
}

/// `L^2` norm of `(u.grad)u - omega x u - grad(|u|^2)/2`, every product
/// evaluated with 3/2-rule dealiasing.
pub fn lamb_residual(f: &SampledField) -> Result<f64> {
    require_torus(f)?;
    let n = f.n;
    let mut sp = Spectral::new(n);
    let c = sp.forward_real(&[&f.values[0], &f.values[1], &f.values[2]]);
    let mut specs: Vec<Vec<Complex64>> = c.clone();
    for j in 0..3 {
        for ci in c.iter() {
            specs.push(
                ci.iter()
                    .enumerate()
                    .map(|(idx, z)| Complex64::new(0.0, sp.kvec(idx)[j]) * z)
                    .collect(),
            );
        }
    }
    let refs: Vec<&[Complex64]> = specs.iter().map(|v| v.as_slice()).collect();
    let phys = sp.inverse_padded(&refs);
    let u = &phys[0..3];
    // d(j, i) = d u_i / d x_j
    let d = |j: usize, i: usize| &phys[3 + 3 * j + i];
    let m3 = phys[0].len();
    let mut g = vec![vec![0.0; m3]; 3];
    let mut e = vec![0.0; m3];
    for p in 0..m3 {
        let uu = [u[0][p], u[1][p], u[2][p]];
        let w = [
            d(1, 2)[p] - d(2, 1)[p],
            d(2, 0)[p] - d(0, 2)[p],
            d(0, 1)[p] - d(1, 0)[p],
        ];
        let wxu = cross(w, uu);
        for i in 0..3 {
            let adv = uu[0] * d(0, i)[p] + uu[1] * d(1, i)[p] + uu[2] * d(2, i)[p];
            g[i][p] = adv - wxu[i];
        }
        e[p] = 0.5 * (uu[0] * uu[0] + uu[1] * uu[1] + uu[2] * uu[2]);
    }
    let back = sp.forward_padded(&[&g[0], &g[1], &g[2], &e]);
    let mut sum = 0.0;
    for idx in 0..n * n * n {
        let k = sp.kvec(idx);
        for i in 0..3 {
            let r = back[i][idx] - Complex64::new(0.0, k[i]) * back[3][idx];
            sum += r.norm_sqr();
        }
    }
    Ok((sum * (2.0 * PI).powi(3)).sqrt())
}

/// `|curl f - lambda f|_2 / |f|_2`.
pub fn beltrami_residual(f: &SampledField, lambda: f64) -> Result<f64> {
    let two = ExtRational::int(2);
    let base = lq_norm(f, &two);
    if base == 0.0 {
        return Err(FlowError::UndefinedRatio("L2 norm of the field"));
    }
    let w = curl(f);
    let r = w.combine(1.0, f, -lambda)?;
    Ok(lq_norm(&r, &two) / base)
}

/// `|grad f|_q / |curl f|_q` with the Frobenius norm of the gradient.
pub fn von_wahl_ratio(f: &SampledField, q: &ExtRational) -> Result<f64> {
    let d = jacobian(f);
    let w = curl(f);
    let denom = lq_norm(&w, q);
    if denom == 0.0 {
        return Err(FlowError::UndefinedRatio("L^q norm of the curl"));
    }
    Ok(lq_norm_tensor(&d, f.domain, f.n, q) / denom)
}
