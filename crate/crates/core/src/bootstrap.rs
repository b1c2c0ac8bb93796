//! Bootstrap iteration for Beltrami flows `omega = lambda u`.
//!
//! Starting from the energy class `u in L^inf(L^2)` and `lambda in
//! L^alpha(L^beta)`, each step lifts the current gradient bound to a
//! velocity bound (Sobolev below `q = 3`, Morrey into `L^inf` above it),
//! multiplies by `lambda` via Hoelder to bound `omega`, and transfers the
//! vorticity bound back to the gradient. Each gradient class is then fed
//! to the one-shot criteria of [`crate::criteria`].
//!
//! The engine accepts any `(alpha, beta)`. On the exponent relation
//! `beta = 6 alpha / (2 alpha - 5)` (and the endpoint `alpha = 5/2`,
//! `beta = inf`) its verdicts are the stated theorems; elsewhere they are
//! flagged [`Provenance::EngineDerived`].

use std::fmt;

use num_traits::{Signed, ToPrimitive};

use crate::criteria::{
    euler_gradient_verdict, nse_gradient_verdict, Provenance, Verdict, VerdictLevel,
};
use crate::error::{ExponentError, Result};
use crate::exponents::{
    holder_combine, rat, scaling_level, sobolev_lift, BochnerSpec, ExtRational,
};

pub const DEFAULT_MAX_ITER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Euler,
    Nse,
}

impl System {
    pub fn as_str(self) -> &'static str {
        match self {
            System::Euler => "euler",
            System::Nse => "nse",
        }
    }

    /// Index carried by the seed step. Euler traces count from 0 and
    /// Navier-Stokes traces from 1, so that the NSE step `n` has time
    /// exponent `alpha / n`.
    pub fn seed_index(self) -> usize {
        match self {
            System::Euler => 0,
            System::Nse => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// The seed: velocity in the energy class `L^inf(L^2)`.
    EnergyBound,
    SobolevLift,
    /// Gradient space exponent above 3: velocity in `L^inf` in space.
    BoundedLift,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::EnergyBound => "energy",
            Route::SobolevLift => "sobolev",
            Route::BoundedLift => "bounded",
        }
    }
}

/// Outcome of a single lift-and-multiply step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeltramiStep {
    pub vel_space: BochnerSpec,
    pub grad_space: BochnerSpec,
    pub route: Route,
    /// The gradient space exponent did not strictly increase.
    pub stagnant: bool,
}

/// One lift-and-multiply step from `grad u` to the next gradient class.
pub fn beltrami_step(grad: &BochnerSpec, lambda: &BochnerSpec) -> Result<BeltramiStep> {
    let q = &grad.space_exp;
    let p = &grad.time_exp;
    if *q <= ExtRational::one() {
        return Err(ExponentError::out_of_range(
            "q",
            q,
            "q > 1",
            "Beltrami bootstrap step",
        ));
    }
    let three = ExtRational::int(3);
    let (vel_space, grad_space, route) = if *q < three {
        let vel = BochnerSpec::new(p.clone(), sobolev_lift(q)?);
        let next = holder_combine(&vel, lambda);
        (vel, next, Route::SobolevLift)
    } else if *q > three {
        let vel = BochnerSpec::new(p.clone(), ExtRational::Infinity);
        // Multiplying a bounded velocity by lambda cannot beat lambda's own
        // space exponent.
        let time = holder_combine(&vel, lambda).time_exp;
        (
            vel,
            BochnerSpec::new(time, lambda.space_exp.clone()),
            Route::BoundedLift,
        )
    } else {
        return Err(ExponentError::CriticalExponent {
            criterion: "Beltrami bootstrap step",
        });
    };
    if grad_space.time_exp < ExtRational::one() {
        return Err(ExponentError::IterationExhausted {
            time_exp: grad_space.time_exp,
        });
    }
    let stagnant = grad_space.space_exp <= *q;
    Ok(BeltramiStep {
        vel_space,
        grad_space,
        route,
        stagnant,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationStep {
    pub index: usize,
    pub grad_space: BochnerSpec,
    pub vel_space: BochnerSpec,
    pub route: Route,
    pub energy_certified: bool,
    pub regularity_certified: bool,
    pub scaling: ExtRational,
    pub stagnant: bool,
    /// The criterion applied to `grad_space` at this step.
    pub verdict: Verdict,
}

/// Why the iteration ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopReason {
    EnergyCertified,
    RegularityCertified,
    /// One step was evaluated after the Morrey route; further steps cannot
    /// improve the space exponent.
    AfterBoundedLift,
    Stagnation,
    MaxIterations,
    CriticalExponent,
    IterationExhausted,
    /// The gradient space exponent dropped to 1 or below.
    SpaceExponentTooSmall,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::EnergyCertified => "energy-certified",
            StopReason::RegularityCertified => "regularity-certified",
            StopReason::AfterBoundedLift => "after-bounded-lift",
            StopReason::Stagnation => "stagnation",
            StopReason::MaxIterations => "max-iterations",
            StopReason::CriticalExponent => "critical-exponent",
            StopReason::IterationExhausted => "iteration-exhausted",
            StopReason::SpaceExponentTooSmall => "space-exponent-too-small",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapTrace {
    pub lambda_space: BochnerSpec,
    pub system: System,
    pub steps: Vec<IterationStep>,
    pub final_verdict: Verdict,
    pub stop: StopReason,
    /// `(alpha, beta)` lies on the stated exponent relation.
    pub on_theorem_curve: bool,
}

impl BootstrapTrace {
    /// First step whose gradient class gives the energy equality.
    pub fn certified_at(&self) -> Option<&IterationStep> {
        self.steps.iter().find(|s| s.energy_certified)
    }

    /// First step whose gradient class lies in the regularity class.
    pub fn regular_at(&self) -> Option<&IterationStep> {
        self.steps.iter().find(|s| s.regularity_certified)
    }

    /// Index of the first energy-certifying step, else of the last step.
    pub fn n_stop(&self) -> usize {
        self.certified_at()
            .or(self.steps.last())
            .map(|s| s.index)
            .unwrap_or(0)
    }

    pub fn step(&self, index: usize) -> Option<&IterationStep> {
        self.steps.iter().find(|s| s.index == index)
    }
}

/// `beta = 6 alpha / (2 alpha - 5)` for `alpha > 5/2`, or the endpoint
/// `(5/2, inf)`.
pub fn on_theorem_curve(alpha: &ExtRational, beta: &ExtRational) -> bool {
    let five_halves = rat(5, 2);
    if *alpha == five_halves {
        return beta.is_infinite();
    }
    if *alpha < five_halves || alpha.is_infinite() {
        return false;
    }
    *beta == ExtRational::int(6) * alpha / (ExtRational::int(2) * alpha - rat(5, 1))
}

fn classify(system: System, grad: &BochnerSpec) -> Verdict {
    let verdict = match system {
        System::Euler => euler_gradient_verdict(grad),
        System::Nse => nse_gradient_verdict(grad),
    };
    verdict.unwrap_or_else(|_| Verdict {
        level: VerdictLevel::Inconclusive,
        justification: crate::criteria::Justification {
            citation: match system {
                System::Euler => "euler-gradient",
                System::Nse => "nse-gradient-low",
            },
            witness: grad.clone(),
            provenance: Provenance::Theorem,
            audit: vec![("scaling", scaling_level(grad))],
        },
    })
}

fn make_step(
    system: System,
    index: usize,
    vel_space: BochnerSpec,
    grad_space: BochnerSpec,
    route: Route,
    stagnant: bool,
) -> IterationStep {
    let verdict = classify(system, &grad_space);
    IterationStep {
        index,
        scaling: scaling_level(&grad_space),
        energy_certified: verdict.level.implies_energy_equality(),
        regularity_certified: verdict.level >= VerdictLevel::StrongSolution,
        grad_space,
        vel_space,
        route,
        stagnant,
        verdict,
    }
}

/// Run the bootstrap for any `lambda in L^alpha(L^beta)` with
/// `alpha, beta >= 1`.
///
/// Euler traces stop at the first energy-certified step; Navier-Stokes
/// traces continue past it and stop at the first step in the regularity
/// class, or one step after the Morrey route is taken. Both stop on
/// stagnation, on the critical exponent, when the time exponent drops
/// below 1, or after `max_iter` steps beyond the seed.
pub fn beltrami_trace(
    system: System,
    alpha: &ExtRational,
    beta: &ExtRational,
    max_iter: usize,
) -> Result<BootstrapTrace> {
    let criterion = "Beltrami bootstrap";
    if *alpha < ExtRational::one() {
        return Err(ExponentError::out_of_range(
            "alpha",
            alpha,
            "alpha >= 1",
            criterion,
        ));
    }
    if *beta < ExtRational::one() {
        return Err(ExponentError::out_of_range(
            "beta",
            beta,
            "beta >= 1",
            criterion,
        ));
    }
    let lambda = BochnerSpec::new(alpha.clone(), beta.clone());
    let energy = BochnerSpec::new(ExtRational::Infinity, ExtRational::int(2));
    let seed_grad = holder_combine(&energy, &lambda);
    let mut steps = vec![make_step(
        system,
        system.seed_index(),
        energy,
        seed_grad,
        Route::EnergyBound,
        false,
    )];

    let stop = loop {
        let last = steps.last().expect("trace has a seed step");
        match system {
            System::Euler if last.energy_certified => break StopReason::EnergyCertified,
            System::Nse if last.regularity_certified => break StopReason::RegularityCertified,
            _ => {}
        }
        if last.route == Route::BoundedLift {
            break StopReason::AfterBoundedLift;
        }
        if last.stagnant {
            break StopReason::Stagnation;
        }
        if steps.len() > max_iter {
            break StopReason::MaxIterations;
        }
        let next = match beltrami_step(&last.grad_space, &lambda) {
            Ok(s) => s,
            Err(ExponentError::CriticalExponent { .. }) => break StopReason::CriticalExponent,
            Err(ExponentError::IterationExhausted { .. }) => break StopReason::IterationExhausted,
            Err(_) => break StopReason::SpaceExponentTooSmall,
        };
        let index = last.index + 1;
        steps.push(make_step(
            system,
            index,
            next.vel_space,
            next.grad_space,
            next.route,
            next.stagnant,
        ));
    };

    let on_curve = on_theorem_curve(alpha, beta);
    let best = steps
        .iter()
        .map(|s| s.verdict.level)
        .max()
        .unwrap_or(VerdictLevel::Inconclusive);
    let deciding = steps
        .iter()
        .find(|s| s.verdict.level == best)
        .expect("maximum is attained");
    let n_stop = steps
        .iter()
        .find(|s| s.energy_certified)
        .unwrap_or_else(|| steps.last().expect("nonempty"))
        .index;
    let mut audit = vec![
        ("alpha", alpha.clone()),
        ("beta", beta.clone()),
        ("n_stop", ExtRational::int(n_stop as i64)),
        ("deciding_step", ExtRational::int(deciding.index as i64)),
    ];
    audit.extend(deciding.verdict.justification.audit.iter().cloned());
    let final_verdict = Verdict {
        level: best,
        justification: crate::criteria::Justification {
            citation: match system {
                System::Euler => "euler-beltrami",
                System::Nse => "nse-beltrami",
            },
            witness: deciding.grad_space.clone(),
            provenance: if on_curve {
                Provenance::Theorem
            } else {
                Provenance::EngineDerived
            },
            audit,
        },
    };
    Ok(BootstrapTrace {
        lambda_space: lambda,
        system,
        steps,
        final_verdict,
        stop,
        on_theorem_curve: on_curve,
    })
}

fn require_admissible_alpha(alpha: &ExtRational, criterion: &'static str) -> Result<()> {
    if *alpha < rat(5, 2) {
        return Err(ExponentError::out_of_range(
            "alpha",
            alpha,
            "alpha >= 5/2",
            criterion,
        ));
    }
    Ok(())
}

/// Euler bootstrap, `alpha >= 5/2`.
pub fn euler_beltrami_trace(
    alpha: &ExtRational,
    beta: &ExtRational,
    max_iter: usize,
) -> Result<BootstrapTrace> {
    require_admissible_alpha(alpha, "Euler-Beltrami criterion")?;
    beltrami_trace(System::Euler, alpha, beta, max_iter)
}

/// Navier-Stokes bootstrap, `alpha >= 5/2`.
pub fn nse_beltrami_trace(
    alpha: &ExtRational,
    beta: &ExtRational,
    max_iter: usize,
) -> Result<BootstrapTrace> {
    require_admissible_alpha(alpha, "Navier-Stokes-Beltrami criterion")?;
    beltrami_trace(System::Nse, alpha, beta, max_iter)
}

/// Number of Euler steps needed from seed space exponent `q` to reach
/// `q_n >= 9/5` along the stated relation: the least natural
/// `n >= (18 - 10q)/(15q - 18)`. Defined for `6/5 < q < 2`.
pub fn euler_required_iterations(q: &ExtRational) -> Result<usize> {
    if *q <= rat(6, 5) || *q >= rat(2, 1) {
        return Err(ExponentError::out_of_range(
            "q",
            q,
            "6/5 < q < 2",
            "Euler-Beltrami iteration count",
        ));
    }
    let bound = (rat(18, 1) - rat(10, 1) * q) / (rat(15, 1) * q - rat(18, 1));
    let n = bound.ceil().expect("finite bound");
    if n.is_negative() {
        return Ok(0);
    }
    Ok(n.to_usize().expect("iteration count fits in usize"))
}

/// Verdict when `lambda` depends on time only, `lambda in L^p(0,T)`.
///
/// Euler: classical solution for `p >= 3`. Navier-Stokes: strong solution
/// for `p >= 8/3`.
pub fn elementary_lambda_time_only(p: &ExtRational, system: System) -> Verdict {
    let (threshold, level, citation) = match system {
        System::Euler => (
            rat(3, 1),
            VerdictLevel::ClassicalSolution,
            "time-only-lambda-euler",
        ),
        System::Nse => (
            rat(8, 3),
            VerdictLevel::StrongSolution,
            "time-only-lambda-nse",
        ),
    };
    let level = if *p >= threshold {
        level
    } else {
        VerdictLevel::Inconclusive
    };
    Verdict::new(
        level,
        citation,
        BochnerSpec::new(p.clone(), ExtRational::Infinity),
        vec![("required_p", threshold)],
    )
}
