//! Pseudo-spectral Navier-Stokes on the periodic box and the energy
//! balance of Beltrami (Trkal) flows.
//!
//! The state is advanced in Fourier space with a fourth-order
//! integrating-factor Runge-Kutta scheme: the viscous term is integrated
//! exactly and the nonlinear term is taken in rotational form,
//! `P[u x omega]`, with 3/2-rule dealiasing and Leray projection `P`.
//! For a constant-`lambda` Beltrami field `u x omega` vanishes identically,
//! so the exact solution is `exp(-nu lambda^2 t) u0`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::error::{invalid, FlowError, Result};
use crate::fields::{eigenmode_sum, Domain, SampledField};
use crate::io::format_real;
use crate::spectral::{wavenumber, Spectral};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: [i32; 3],
    pub amplitude: f64,
    pub phase: f64,
}

/// Constant-`lambda` Beltrami data: a sum of curl eigenmodes with
/// `|k| = |lambda|`; the sign of `lambda` selects the helicity.
#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiSpec {
    pub lambda: f64,
    pub modes: Vec<Mode>,
}

impl BeltramiSpec {
    pub fn single(k: [i32; 3]) -> Self {
        let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        BeltramiSpec {
            lambda: kk.sqrt(),
            modes: vec![Mode {
                k,
                amplitude: 1.0,
                phase: 0.0,
            }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda == 0.0 {
            return Err(invalid(format!(
                "lambda must be finite and nonzero, got {}",
                self.lambda
            )));
        }
        if self.modes.is_empty() {
            return Err(invalid("Beltrami data needs at least one mode"));
        }
        for m in &self.modes {
            let k2 = (m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2]) as f64;
            let l2 = self.lambda * self.lambda;
            if (k2 - l2).abs() > 1e-9 * l2 {
                return Err(invalid(format!(
                    "mode {:?} has |k|^2 = {k2}, expected lambda^2 = {l2}",
                    m.k
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self, n: usize) -> Result<SampledField> {
        self.validate()?;
        let modes: Vec<_> = self
            .modes
            .iter()
            .map(|m| (m.k, m.amplitude, m.phase))
            .collect();
        eigenmode_sum(&modes, self.lambda.signum(), n)
    }
}

/// Integer wavevectors with `|k|^2 = k2`, one from each `+-k` pair.
pub fn lattice_shell(k2: i32) -> Vec<[i32; 3]> {
    let r = (k2 as f64).sqrt().ceil() as i32;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if a * a + b * b + c * c != k2 {
                    continue;
                }
                // keep the lexicographically positive representative
                if (a, b, c) > (0, 0, 0) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Every mode of the shell `|k|^2 = lambda^2` with amplitude in `[0.5, 1.5)`
/// and uniform phase, reproducible from `seed`.
pub fn random_beltrami(k2: i32, helicity: f64, seed: u64) -> Result<BeltramiSpec> {
    let shell = lattice_shell(k2);
    if shell.is_empty() {
        return Err(invalid(format!("no integer wavevector has |k|^2 = {k2}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = shell
        .into_iter()
        .map(|k| Mode {
            k,
            amplitude: rng.gen_range(0.5..1.5),
            phase: rng.gen_range(0.0..2.0 * PI),
        })
        .collect();
    Ok(BeltramiSpec {
        lambda: helicity.signum() * (k2 as f64).sqrt(),
        modes,
    })
}

type Vec3 = [Vec<Complex64>; 3];

fn zeros3(len: usize) -> Vec3 {
    std::array::from_fn(|_| vec![ZERO; len])
}

/// Spectral Navier-Stokes state and stepper on the torus.
pub struct NseSolver {
    sp: Spectral,
    viscosity: f64,
    u: Vec3,
    /// `|k|^2` with true (signed) wavenumbers.
    k2: Vec<f64>,
    time: f64,
    steps: usize,
    factors: Option<(f64, Vec<f64>, Vec<f64>)>,
    work: Work,
}

/// Scratch space for the nonlinear term and the Runge-Kutta stages.
struct Work {
    curl: Vec3,
    packed: Vec3,
    stage: Vec3,
    k: [Vec3; 4],
}

impl NseSolver {
    /// Start from a torus field; the initial data is Leray-projected.
    pub fn new(field: &SampledField, viscosity: f64) -> Result<Self> {
        if field.domain != Domain::Torus {
            return Err(FlowError::DomainMismatch { expected: "torus" });
        }
        if !viscosity.is_finite() || viscosity < 0.0 {
            return Err(invalid(format!("viscosity must be >= 0, got {viscosity}")));
        }
        let n = field.n;
        let mut sp = Spectral::new(n);
        let c = sp.forward_real(&[&field.values[0], &field.values[1], &field.values[2]]);
        let k2 = (0..n * n * n)
            .map(|idx| {
                let w = [
                    wavenumber(idx / (n * n), n) as f64,
                    wavenumber((idx / n) % n, n) as f64,
                    wavenumber(idx % n, n) as f64,
                ];
                w[0] * w[0] + w[1] * w[1] + w[2] * w[2]
            })
            .collect();
        let mut u: Vec3 = [c[0].clone(), c[1].clone(), c[2].clone()];
        project(&sp, &mut u);
        let len = n * n * n;
        let m = sp.padded_n();
        let work = Work {
            curl: zeros3(len),
            packed: zeros3(m * m * m),
            stage: zeros3(len),
            k: std::array::from_fn(|_| zeros3(len)),
        };
        Ok(NseSolver {
            sp,
            viscosity,
            u,
            k2,
            time: field.time.unwrap_or(0.0),
            steps: 0,
            factors: None,
            work,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn coefficients(&self) -> &Vec3 {
        &self.u
    }

    /// `|u|_2^2 / 2`.
    pub fn energy(&self) -> f64 {
        let s: f64 = self
            .u
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum();
        0.5 * s * (2.0 * PI).powi(3)
    }

    /// `|grad u|_2^2`.
    pub fn enstrophy(&self) -> f64 {
        let mut s = 0.0;
        for c in &self.u {
            for (z, k2) in c.iter().zip(&self.k2) {
                s += k2 * z.norm_sqr();
            }
        }
        s * (2.0 * PI).powi(3)
    }

    /// `|curl u - lambda u|_2 / |u|_2`, evaluated on the coefficients.
    pub fn beltrami_residual(&self, lambda: f64) -> Result<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for idx in 0..self.k2.len() {
            let k = self.sp.kvec(idx);
            let v = [self.u[0][idx], self.u[1][idx], self.u[2][idx]];
            let w = curl_coeff(k, v);
            for d in 0..3 {
                num += (w[d] - v[d] * lambda).norm_sqr();
                den += v[d].norm_sqr();
            }
        }
        if den == 0.0 {
            return Err(FlowError::UndefinedRatio("L2 norm of the state"));
        }
        Ok((num / den).sqrt())
    }

    pub fn field(&mut self) -> SampledField {
        let phys = self.sp.inverse_real(&[&self.u[0], &self.u[1], &self.u[2]]);
        let n = self.sp.n();
        let mut out = SampledField::zeros(Domain::Torus, n).expect("solver grid is valid");
        for (d, p) in phys.into_iter().enumerate() {
            out.values[d] = p;
        }
        out.time = Some(self.time);
        out
    }

    fn integrating_factors(&mut self, dt: f64) -> (Vec<f64>, Vec<f64>) {
        if let Some((h, half, full)) = self.factors.take() {
            if h == dt {
                self.factors = Some((h, half.clone(), full.clone()));
                return (half, full);
            }
        }
        let nu = self.viscosity;
        let half: Vec<f64> = self
            .k2
            .iter()
            .map(|k2| (-nu * k2 * dt * 0.5).exp())
            .collect();
        let full: Vec<f64> = self.k2.iter().map(|k2| (-nu * k2 * dt).exp()).collect();
        self.factors = Some((dt, half.clone(), full.clone()));
        (half, full)
    }

    /// One integrating-factor RK4 step.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        let (eh, ef) = self.integrating_factors(dt);
        let len = self.k2.len();
        let Work {
            curl,
            packed,
            stage,
            k: [k1, k2, k3, k4],
        } = &mut self.work;
        let sp = &mut self.sp;
        let u = &mut self.u;

        nonlinear(sp, u, curl, packed, k1);
        for d in 0..3 {
            for i in 0..len {
                stage[d][i] = (u[d][i] + k1[d][i] * (0.5 * dt)) * eh[i];
            }
        }
        nonlinear(sp, stage, curl, packed, k2);
        for d in 0..3 {
            for i in 0..len {
                stage[d][i] = u[d][i] * eh[i] + k2[d][i] * (0.5 * dt);
            }
        }
        nonlinear(sp, stage, curl, packed, k3);
        for d in 0..3 {
            for i in 0..len {
                stage[d][i] = u[d][i] * ef[i] + k3[d][i] * (dt * eh[i]);
            }
        }
        nonlinear(sp, stage, curl, packed, k4);
        for d in 0..3 {
            for i in 0..len {
                u[d][i] = u[d][i] * ef[i]
                    + (k1[d][i] * ef[i] + (k2[d][i] + k3[d][i]) * (2.0 * eh[i]) + k4[d][i])
                        * (dt / 6.0);
            }
        }
        self.time += dt;
        self.steps += 1;
        if u.iter()
            .flat_map(|c| c.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(FlowError::DivergedSimulation {
                step: self.steps,
                time: self.time,
            });
        }
        Ok(())
    }
}

/// `out = P[u x omega]` in Fourier space, dealiased on the padded grid.
fn nonlinear(sp: &mut Spectral, u: &Vec3, curl: &mut Vec3, packed: &mut Vec3, out: &mut Vec3) {
    for idx in 0..u[0].len() {
        let c = curl_coeff(sp.kvec(idx), [u[0][idx], u[1][idx], u[2][idx]]);
        for d in 0..3 {
            curl[d][idx] = c[d];
        }
    }
    let [p0, p1, p2] = packed;
    // p0 = ux + i uy, p1 = uz + i wx, p2 = wy + i wz
    sp.inverse_padded_pair(&u[0], Some(&u[1]), p0);
    sp.inverse_padded_pair(&u[2], Some(&curl[0]), p1);
    sp.inverse_padded_pair(&curl[1], Some(&curl[2]), p2);
    for ((a, b), c) in p0.iter_mut().zip(p1.iter_mut()).zip(p2.iter()) {
        let (ux, uy, uz) = (a.re, a.im, b.re);
        let (wx, wy, wz) = (b.im, c.re, c.im);
        let cx = uy * wz - uz * wy;
        let cy = uz * wx - ux * wz;
        let cz = ux * wy - uy * wx;
        *a = Complex64::new(cx, cy);
        *b = Complex64::new(cz, 0.0);
    }
    let [o0, o1, o2] = out;
    sp.forward_padded_pair(p0, o0, Some(o1));
    sp.forward_padded_pair(p1, o2, None);
    project(sp, out);
}

#[inline]
fn curl_coeff(k: [f64; 3], v: [Complex64; 3]) -> [Complex64; 3] {
    let i = Complex64::new(0.0, 1.0);
    [
        i * (v[2] * k[1] - v[1] * k[2]),
        i * (v[0] * k[2] - v[2] * k[0]),
        i * (v[1] * k[0] - v[0] * k[1]),
    ]
}

fn project(sp: &Spectral, u: &mut [Vec<Complex64>; 3]) {
    for idx in 0..u[0].len() {
        let k = sp.kvec(idx);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            for c in u.iter_mut() {
                c[idx] = ZERO;
            }
            continue;
        }
        let kv = (u[0][idx] * k[0] + u[1][idx] * k[1] + u[2][idx] * k[2]) / k2;
        for d in 0..3 {
            u[d][idx] -= kv * k[d];
        }
    }
}

/// One step of the unit-viscosity Navier-Stokes equations.
pub fn step_nse_spectral(state: &SampledField, dt: f64) -> Result<SampledField> {
    let mut s = NseSolver::new(state, 1.0)?;
    s.step(dt)?;
    Ok(s.field())
}

/// Energy balance time series of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    pub times: Vec<f64>,
    /// `E(t) = |u(t)|_2^2 / 2`.
    pub energy: Vec<f64>,
    /// `D(t) = nu * int_0^t |grad u|_2^2`, trapezoid rule.
    pub dissipation: Vec<f64>,
    pub beltrami_residuals: Vec<f64>,
    /// `|grad u|_2^2` at each time.
    pub enstrophy: Vec<f64>,
    /// `E(0) exp(-2 nu lambda^2 t)`.
    pub analytic_energy: Vec<f64>,
    pub lambda: f64,
    pub viscosity: f64,
}

impl EnergyLedger {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|E(t) - analytic(t)| / analytic(t)`.
    pub fn max_analytic_deviation(&self) -> f64 {
        self.energy
            .iter()
            .zip(&self.analytic_energy)
            .map(|(e, a)| ((e - a) / a).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with columns `t,E,D,E_plus_D_minus_E0_rel,beltrami_residual,analytic_E`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,E,D,E_plus_D_minus_E0_rel,beltrami_residual,analytic_E\n");
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        for i in 0..self.len() {
            let rel = if e0 != 0.0 {
                (self.energy[i] + self.dissipation[i] - e0) / e0
            } else {
                f64::NAN
            };
            let row = [
                self.times[i],
                self.energy[i],
                self.dissipation[i],
                rel,
                self.beltrami_residuals[i],
                self.analytic_energy[i],
            ];
            let row: Vec<String> = row.into_iter().map(format_real).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// `max_t |E(t) + D(t) - E(0)| / E(0)`.
pub fn energy_equality_residual(ledger: &EnergyLedger) -> Result<f64> {
    let e0 = *ledger
        .energy
        .first()
        .ok_or_else(|| invalid("empty energy ledger"))?;
    if e0 == 0.0 {
        return Err(FlowError::UndefinedRatio("initial energy"));
    }
    Ok(ledger
        .energy
        .iter()
        .zip(&ledger.dissipation)
        .map(|(e, d)| ((e + d - e0) / e0).abs())
        .fold(0.0, f64::max))
}

/// Evolve Beltrami data with viscosity `nu` (0 for Euler) up to `t_end`,
/// recording the ledger after every step. The step is shrunk slightly if
/// needed so that `t_end` is hit exactly.
pub fn run_beltrami(
    spec: &BeltramiSpec,
    t_end: f64,
    dt: f64,
    n: usize,
    viscosity: f64,
) -> Result<EnergyLedger> {
    spec.validate()?;
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(invalid(format!("t_end must be >= 0, got {t_end}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(invalid(format!("dt must be > 0, got {dt}")));
    }
    let field = spec.field(n)?;
    let mut solver = NseSolver::new(&field, viscosity)?;
    let steps = if t_end == 0.0 {
        0
    } else {
        ((t_end / dt) - 1e-9).ceil().max(1.0) as usize
    };
    let h = if steps == 0 { dt } else { t_end / steps as f64 };

    let lambda = spec.lambda;
    let e0 = solver.energy();
    let mut ledger = EnergyLedger {
        times: vec![0.0],
        energy: vec![e0],
        dissipation: vec![0.0],
        beltrami_residuals: vec![solver.beltrami_residual(lambda)?],
        enstrophy: vec![solver.enstrophy()],
        analytic_energy: vec![e0],
        lambda,
        viscosity,
    };
    for s in 1..=steps {
        solver.step(h)?;
        let t = s as f64 * h;
        let z = solver.enstrophy();
        let d_prev = *ledger.dissipation.last().expect("nonempty");
        let z_prev = *ledger.enstrophy.last().expect("nonempty");
        ledger.times.push(t);
        ledger.energy.push(solver.energy());
        ledger
            .dissipation
            .push(d_prev + 0.5 * h * viscosity * (z + z_prev));
        ledger.enstrophy.push(z);
        ledger
            .beltrami_residuals
            .push(solver.beltrami_residual(lambda)?);
        ledger
            .analytic_energy
            .push(e0 * (-2.0 * viscosity * lambda * lambda * t).exp());
    }
    Ok(ledger)
}

/// Unit-viscosity run (Trkal flow).
pub fn run_trkal(spec: &BeltramiSpec, t_end: f64, dt: f64, n: usize) -> Result<EnergyLedger> {
    run_beltrami(spec, t_end, dt, n, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{abc_flow, beltrami_residual, curl_eigenfield};

    #[test]
    fn zero_stays_zero() {
        let z = SampledField::zeros(Domain::Torus, 8).unwrap();
        let out = step_nse_spectral(&z, 1e-2).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }

    #[test]
    fn single_mode_decays_exactly() {
        let u = curl_eigenfield([0, 0, 1], 0.0, 16).unwrap();
        let dt = 1e-3;
        let out = step_nse_spectral(&u, dt).unwrap();
        let expect = u.scaled((-dt).exp());
        assert!(out.combine(1.0, &expect, -1.0).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn abc_stays_beltrami() {
        let u = abc_flow(1.0, 1.0, 1.0, 16).unwrap();
        let mut s = NseSolver::new(&u, 1.0).unwrap();
        for _ in 0..5 {
            s.step(0.05).unwrap();
        }
        assert!(beltrami_residual(&s.field(), 1.0).unwrap() < 1e-8);
    }

    #[test]
    fn shells_and_validation() {
        assert_eq!(lattice_shell(1).len(), 3);
        assert_eq!(lattice_shell(2).len(), 6);
        assert!(lattice_shell(7).is_empty());
        let bad = BeltramiSpec {
            lambda: 0.0,
            modes: vec![],
        };
        assert!(bad.validate().is_err());
        let bad = BeltramiSpec {
            lambda: 1.0,
            modes: vec![Mode {
                k: [1, 1, 0],
                amplitude: 1.0,
                phase: 0.0,
            }],
        };
        assert!(bad.validate().is_err());
        assert!(random_beltrami(7, 1.0, 0).is_err());
    }

    #[test]
    fn zero_length_run() {
        let l = run_trkal(&BeltramiSpec::single([0, 0, 1]), 0.0, 1e-3, 8).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.dissipation, vec![0.0]);
        assert_eq!(energy_equality_residual(&l).unwrap(), 0.0);
    }

    #[test]
    fn helicity_negative_runs() {
        let spec = random_beltrami(3, -1.0, 5).unwrap();
        assert!(spec.lambda < 0.0);
        let l = run_trkal(&spec, 0.05, 1e-2, 8).unwrap();
        assert!(l.beltrami_residuals.iter().all(|r| *r < 1e-12));
        assert!(l.max_analytic_deviation() < 1e-10);
    }
}
