//! The bootstrap engine and the interval machinery checked against the
//! closed-form sequences they are supposed to reproduce. The oracles here
//! are written directly from the formulas and share no code with the
//! library beyond `ExtRational` arithmetic.

use beltrami_core::bootstrap::{
    beltrami_trace, euler_beltrami_trace, euler_required_iterations, nse_beltrami_trace, Route,
    StopReason, System, DEFAULT_MAX_ITER,
};
use beltrami_core::criteria::{Provenance, VerdictLevel};
use beltrami_core::exponents::{scaling_level, BochnerSpec};
use beltrami_core::regularity::{
    alpha_formula, crossover, ln_rn, locate_beta, nse_regularity_verdict, required_alpha, Side,
};
use beltrami_core::{rat, ExtRational};
use proptest::prelude::*;

fn r(n: i64) -> ExtRational {
    ExtRational::int(n)
}

fn curve_beta(alpha: &ExtRational) -> ExtRational {
    r(6) * alpha / (r(2) * alpha - r(5))
}

fn euler_oracle(q: &ExtRational, n: i64) -> BochnerSpec {
    BochnerSpec::new(
        r(5) * q / (r(n + 1) * (r(5) * q - r(6))),
        r(6) * q / (r(6) * r(n + 1) - r(5) * r(n) * q),
    )
}

fn nse_oracle(alpha: &ExtRational, n: i64) -> BochnerSpec {
    BochnerSpec::new(alpha / r(n), r(6) * alpha / (r(5) * alpha - r(5) * r(n)))
}

#[test]
fn euler_trace_matches_closed_form_on_curve() {
    for k in 1..=50 {
        let alpha = rat(5, 2) + rat(k, 10);
        let beta = curve_beta(&alpha);
        let t = euler_beltrami_trace(&alpha, &beta, DEFAULT_MAX_ITER).unwrap();
        assert!(t.on_theorem_curve);
        let q0 = t.steps[0].grad_space.space_exp.clone();
        assert_eq!(q0, r(6) * &alpha / (r(5) * &alpha - r(5)));
        for s in &t.steps {
            assert_eq!(
                s.grad_space,
                euler_oracle(&q0, s.index as i64),
                "alpha = {alpha}"
            );
        }
        let cert = t.certified_at().expect("on-curve Euler trace certifies");
        assert_eq!(cert.index, euler_required_iterations(&q0).unwrap());
        assert_eq!(t.stop, StopReason::EnergyCertified);
        let qn = &cert.grad_space.space_exp;
        assert_eq!(cert.grad_space.time_exp, r(5) * qn / (r(5) * qn - r(6)));
        assert_eq!(t.final_verdict.level, VerdictLevel::EnergyEquality);
        assert_eq!(
            t.final_verdict.justification.provenance,
            Provenance::Theorem
        );
    }
}

#[test]
fn nse_trace_matches_closed_form_on_curve() {
    for k in 1..=110 {
        let alpha = rat(5, 2) + rat(k, 4);
        let beta = curve_beta(&alpha);
        let t = nse_beltrami_trace(&alpha, &beta, DEFAULT_MAX_ITER).unwrap();
        for s in t.steps.iter().filter(|s| s.route != Route::BoundedLift) {
            assert_eq!(
                s.grad_space,
                nse_oracle(&alpha, s.index as i64),
                "alpha = {alpha}"
            );
        }
        // the energy equality holds from the first n >= alpha/3 on
        let n0 = t.certified_at().unwrap().index as i64;
        let third = &alpha / r(3);
        assert!(r(n0) >= third && r(n0 - 1) < third);
        assert!(r(n0) < alpha.floor().map(ExtRational::from).unwrap());
        for s in t.steps.iter().filter(|s| s.energy_certified) {
            assert!(scaling_level(&s.grad_space) > r(2));
            assert!(!s.regularity_certified);
        }
        assert_eq!(t.final_verdict.level, VerdictLevel::EnergyEquality);
    }
}

#[test]
fn nse_post_bounded_lift_scaling() {
    for k in 1..=110 {
        let alpha = rat(5, 2) + rat(k, 4);
        let beta = curve_beta(&alpha);
        let t = nse_beltrami_trace(&alpha, &beta, DEFAULT_MAX_ITER).unwrap();
        let Some(b) = t.steps.iter().find(|s| s.route == Route::BoundedLift) else {
            // either q_n hit 3 exactly, or alpha/(n+1) < 1 for the lifted step
            assert!(
                matches!(
                    t.stop,
                    StopReason::CriticalExponent | StopReason::IterationExhausted
                ),
                "alpha = {alpha}"
            );
            continue;
        };
        let n = r(b.index as i64 - 1);
        assert_eq!(
            b.grad_space,
            BochnerSpec::new(&alpha / r(b.index as i64), beta.clone())
        );
        let above = b.scaling > r(2);
        assert_eq!(above, n > &alpha / r(2) + rat(1, 4));
        // the lift happened because q_n > 3, i.e. n > 3 alpha / 5
        assert!(n > r(3) * &alpha / r(5));
        assert!(above);
        assert_eq!(t.stop, StopReason::AfterBoundedLift);
    }
}

#[test]
fn endpoint_traces() {
    for system in [System::Euler, System::Nse] {
        let t =
            beltrami_trace(system, &rat(5, 2), &ExtRational::Infinity, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(t.steps[0].grad_space, BochnerSpec::new(rat(5, 2), r(2)));
        assert!(t.steps[0].energy_certified);
        assert!(t.on_theorem_curve);
    }
}

#[test]
fn off_curve_traces_are_flagged() {
    let t = euler_beltrami_trace(&r(3), &r(40), DEFAULT_MAX_ITER).unwrap();
    assert!(!t.on_theorem_curve);
    assert_eq!(
        t.final_verdict.justification.provenance,
        Provenance::EngineDerived
    );
    assert_eq!(t.final_verdict.level, VerdictLevel::EnergyEquality);
}

#[test]
fn tiling_up_to_one_hundred() {
    let rows: Vec<_> = (1..=101).map(|n| ln_rn(n).unwrap()).collect();
    for w in rows.windows(2) {
        assert_eq!(w[0].i_lo, w[1].i_hi);
        assert_eq!(w[0].l_hi, w[0].r_lo);
        assert!(w[0].l_lo < w[0].l_hi && w[0].r_lo < w[0].r_hi);
    }
    assert_eq!(rows[99].i_lo, rat(6 * 101, 199));
    assert!(rows[0].i_hi.is_infinite());
}

#[test]
fn required_alpha_is_continuous_across_junctions() {
    for n in 1..=50u64 {
        let row = ln_rn(n).unwrap();
        let next = ln_rn(n + 1).unwrap();
        let c = crossover(n);
        let a_l = alpha_formula(n, Side::L, &c);
        assert_eq!(a_l, alpha_formula(n, Side::R, &c));
        let level = |a: &ExtRational, b: &ExtRational| {
            scaling_level(&BochnerSpec::new(a.clone(), b.clone()))
        };
        let k = n as i64;
        assert_eq!(level(&a_l, &c), r(1) - rat(1, 2 * (k + 1)));
        let a_left = alpha_formula(n, Side::L, &row.l_lo);
        assert_eq!(level(&a_left, &row.l_lo), r(1) - rat(1, 2 * (k + 2)));
        assert_eq!(a_left, alpha_formula(n + 1, Side::R, &next.r_hi));
        assert_eq!(a_left, rat(4 * (k + 1) * (k + 2), 2 * k + 5));
    }
}

fn beta_above_three() -> impl Strategy<Value = ExtRational> {
    (1i64..100_000, 1i64..1000).prop_map(|(a, b)| r(3) + rat(a, b))
}

proptest! {
    #[test]
    fn required_alpha_lies_in_band(beta in beta_above_three()) {
        let a = required_alpha(&beta).unwrap();
        let level = scaling_level(&BochnerSpec::new(a, beta));
        prop_assert!(level >= rat(3, 4) && level < r(1));
    }

    #[test]
    fn located_row_contains_beta(beta in beta_above_three()) {
        let (n, side) = locate_beta(&beta).unwrap();
        let row = ln_rn(n).unwrap();
        let (lo, hi) = match side {
            Side::L => (row.l_lo, row.l_hi),
            Side::R => (row.r_lo, row.r_hi),
        };
        prop_assert!(lo < beta && beta <= hi);
    }

    #[test]
    fn engine_agrees_with_exact_exponent_on_curve(beta in beta_above_three()) {
        let alpha = required_alpha(&beta).unwrap();
        let t = nse_beltrami_trace(&alpha, &beta, DEFAULT_MAX_ITER).unwrap();
        let v = nse_regularity_verdict(&alpha, &beta).unwrap();
        prop_assert_eq!(v.level, VerdictLevel::StrongSolution);
        prop_assert!(t.regular_at().is_some() || t.stop == StopReason::CriticalExponent);
    }
}
