//! Exact regularity exponents for Navier-Stokes Beltrami flows with
//! `lambda in L^alpha(L^beta)`, `beta > 3`.
//!
//! The half-line `beta > 3` is tiled by intervals `I_n = L_n u R_n`,
//! `n >= 1`. On `L_n` the weakest hypothesis comes from running the
//! Sobolev chain until the gradient space exponent passes 3 and then taking
//! one bounded-velocity step; on `R_n` it comes from staying on the Sobolev
//! chain. [`required_alpha`] returns the exact time exponent on each piece.
//!
//! Alongside it, [`theorem_level`] gives the piecewise-constant scaling
//! level `2/alpha + 3/beta` of the coarser statement. The two disagree in
//! the interior of each `L_n`; both are reported and the exact exponent
//! decides verdicts.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::criteria::{Verdict, VerdictLevel};
use crate::error::{ExponentError, Result};
use crate::exponents::{rat, BochnerSpec, ExtRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    L,
    R,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

/// Row `n` of the tiling: `L_n = (l_lo, l_hi]`, `R_n = (r_lo, r_hi]`,
/// `I_n = (i_lo, i_hi] = L_n u R_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRow {
    pub n: u64,
    pub l_lo: ExtRational,
    pub l_hi: ExtRational,
    pub r_lo: ExtRational,
    pub r_hi: ExtRational,
    pub crossover: ExtRational,
    pub i_lo: ExtRational,
    pub i_hi: ExtRational,
}

fn int(n: u64) -> ExtRational {
    ExtRational::from(BigInt::from(n))
}

fn beta_out_of_range(beta: &ExtRational, criterion: &'static str) -> ExponentError {
    ExponentError::out_of_range("beta", beta, "beta > 3", criterion)
}

/// `6(n+1)^2 / (2n^2 + n - 2)`, where the two branch formulas for the
/// required exponent meet.
pub fn crossover(n: u64) -> ExtRational {
    let n = int(n);
    let n1 = &n + ExtRational::one();
    ExtRational::int(6) * &n1 * &n1 / (ExtRational::int(2) * &n * &n + &n - ExtRational::int(2))
}

pub fn ln_rn(n: u64) -> Result<IntervalRow> {
    if n == 0 {
        return Err(ExponentError::out_of_range(
            "n",
            &ExtRational::zero(),
            "n >= 1",
            "interval decomposition",
        ));
    }
    let nn = int(n);
    let six = ExtRational::int(6);
    let two = ExtRational::int(2);
    let i_lo = &six * (&nn + ExtRational::one()) / (&two * &nn - ExtRational::one());
    let i_hi = if n == 1 {
        ExtRational::Infinity
    } else {
        &six * &nn / (&two * &nn - ExtRational::int(3))
    };
    let c = crossover(n);
    Ok(IntervalRow {
        n,
        l_lo: i_lo.clone(),
        l_hi: c.clone(),
        r_lo: c.clone(),
        r_hi: i_hi.clone(),
        crossover: c,
        i_lo,
        i_hi,
    })
}

/// The unique `(n, side)` with `beta` in `L_n` or `R_n`. `beta = inf` is
/// placed in `R_1`, the unbounded piece.
pub fn locate_beta(beta: &ExtRational) -> Result<(u64, Side)> {
    if *beta <= ExtRational::int(3) {
        return Err(beta_out_of_range(beta, "interval decomposition"));
    }
    if beta.is_infinite() {
        return Ok((1, Side::R));
    }
    // beta lies in I_n iff n <= 3 beta / (2 beta - 6) < n + 1
    let f = ExtRational::int(3) * beta / (ExtRational::int(2) * beta - ExtRational::int(6));
    let n = f
        .floor()
        .and_then(|n| n.to_u64())
        .expect("floor of a finite positive rational");
    let side = if *beta <= crossover(n) {
        Side::L
    } else {
        Side::R
    };
    Ok((n, side))
}

/// Exact time exponent for `lambda` at space exponent `beta`:
///
/// * `beta in L_n`: `2(n+2) beta / (2 beta - 3)`
/// * `beta in R_n`: `4(n+1) beta / (2(n+1)(beta - 3) - beta)`
///
/// Both are evaluated in `1/beta` so that `beta = inf` yields `8/3`.
pub fn required_alpha(beta: &ExtRational) -> Result<ExtRational> {
    let (n, side) =
        locate_beta(beta).map_err(|_| beta_out_of_range(beta, "exact regularity exponent"))?;
    Ok(alpha_formula(n, side, beta))
}

/// The branch formula for `(n, side)` evaluated at `beta`, whether or not
/// `beta` lies in that piece.
pub fn alpha_formula(n: u64, side: Side, beta: &ExtRational) -> ExtRational {
    let nn = int(n);
    let inv = beta.recip();
    let two = ExtRational::int(2);
    let three = ExtRational::int(3);
    match side {
        Side::L => two.clone() * (&nn + two.clone()) / (&two - &three * &inv),
        Side::R => {
            let n1 = &nn + ExtRational::one();
            ExtRational::int(4) * &n1
                / (&two * &n1 * (ExtRational::one() - &three * &inv) - ExtRational::one())
        }
    }
}

/// `L_n` formula at its left endpoint, `4(n+1)(n+2)/(2n+5)` in closed form.
pub fn alpha_at_l_left(n: u64) -> Result<ExtRational> {
    let row = ln_rn(n)?;
    Ok(alpha_formula(n, Side::L, &row.l_lo))
}

/// Scaling level `2/alpha + 3/beta` attached to the piece `(n, side)`.
pub fn side_level(n: u64, side: Side) -> ExtRational {
    let k = match side {
        Side::L => n + 2,
        Side::R => n + 1,
    };
    ExtRational::one() - ExtRational::one() / (int(2) * int(k))
}

/// Constant scaling level `2/alpha + 3/beta` of the coarse statement:
/// `1 - 1/(2(n+2))` on `L_n`, `1 - 1/(2(n+1))` on `R_n`.
pub fn theorem_level(beta: &ExtRational) -> Result<ExtRational> {
    let (n, side) = locate_beta(beta).map_err(|_| beta_out_of_range(beta, "scaling level"))?;
    Ok(side_level(n, side))
}

/// Time exponent implied by [`theorem_level`], `2 / (level - 3/beta)`.
pub fn theorem_alpha(beta: &ExtRational) -> Result<ExtRational> {
    let level = theorem_level(beta)?;
    Ok(ExtRational::int(2) / (level - ExtRational::int(3) * beta.recip()))
}

/// Where a hypothesis sits relative to the scaling band `[3/4, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Beta0 {
    pub level: ExtRational,
    /// Smallest band index with
    /// `1 - 1/(2(n+1)) <= level <= 1 - 1/(2(n+2))`; `None` below the band.
    pub n_bar: Option<u64>,
    /// `6(n+1)/(2n-1)` at `n_bar`; `+inf` below the band, where every
    /// `beta > 3` is covered.
    pub beta0: ExtRational,
    /// `beta < beta0`.
    pub strong: bool,
}

/// Band location and threshold `beta0` for `2/alpha + 3/beta < 1`.
pub fn beta0(alpha: &ExtRational, beta: &ExtRational) -> Result<Beta0> {
    if *beta <= ExtRational::int(3) {
        return Err(beta_out_of_range(beta, "beta0 band"));
    }
    let level = BochnerSpec::new(alpha.clone(), beta.clone());
    let level = crate::exponents::scaling_level(&level);
    if level >= ExtRational::one() {
        return Err(ExponentError::HypothesisTooWeak { level });
    }
    if level < rat(3, 4) {
        return Ok(Beta0 {
            level,
            n_bar: None,
            beta0: ExtRational::Infinity,
            strong: true,
        });
    }
    // smallest n >= 1 with n + 2 >= 1/(2(1 - level))
    let x = (ExtRational::int(2) * (ExtRational::one() - &level)).recip() - ExtRational::int(2);
    let n = x
        .ceil()
        .and_then(|c| c.to_i64())
        .expect("finite band index")
        .max(1) as u64;
    let beta0 = ln_rn(n)?.i_lo;
    let strong = *beta < beta0;
    Ok(Beta0 {
        level,
        n_bar: Some(n),
        beta0,
        strong,
    })
}

/// Verdict from [`beta0`]: strong solution iff `beta < beta0`.
pub fn beta0_verdict(alpha: &ExtRational, beta: &ExtRational) -> Result<Verdict> {
    let b = beta0(alpha, beta)?;
    let citation = if b.n_bar.is_some() {
        "nse-beltrami-band"
    } else {
        "nse-beltrami-a-fortiori"
    };
    let level = if b.strong {
        VerdictLevel::StrongSolution
    } else {
        VerdictLevel::Inconclusive
    };
    let mut audit = vec![("level", b.level.clone()), ("beta0", b.beta0.clone())];
    if let Some(n) = b.n_bar {
        audit.push(("n_bar", int(n)));
    }
    Ok(Verdict::new(
        level,
        citation,
        BochnerSpec::new(alpha.clone(), beta.clone()),
        audit,
    ))
}

/// Strong solution iff `alpha >= required_alpha(beta)`.
///
/// The audit carries the exact exponent, the coarse level and its implied
/// exponent, and `level_gap = theorem_alpha - required_alpha` (nonzero in
/// the interior of `L_n`).
pub fn nse_regularity_verdict(alpha: &ExtRational, beta: &ExtRational) -> Result<Verdict> {
    let criterion = "Navier-Stokes-Beltrami regularity";
    if *beta <= ExtRational::int(3) {
        return Err(beta_out_of_range(beta, criterion));
    }
    let (n, side) = locate_beta(beta)?;
    let required = required_alpha(beta)?;
    let level = theorem_level(beta)?;
    let t_alpha = theorem_alpha(beta)?;
    let gap = &t_alpha - &required;
    let verdict_level = if *alpha >= required {
        VerdictLevel::StrongSolution
    } else {
        VerdictLevel::Inconclusive
    };
    Ok(Verdict::new(
        verdict_level,
        match side {
            Side::L => "nse-regularity-left",
            Side::R => "nse-regularity-right",
        },
        BochnerSpec::new(alpha.clone(), beta.clone()),
        vec![
            ("n", int(n)),
            ("required_alpha", required),
            ("theorem_level", level),
            ("theorem_alpha", t_alpha),
            ("level_gap", gap),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::scaling_level;

    fn level_at(alpha: &ExtRational, beta: &ExtRational) -> ExtRational {
        scaling_level(&BochnerSpec::new(alpha.clone(), beta.clone()))
    }

    #[test]
    fn rows() {
        let r1 = ln_rn(1).unwrap();
        assert_eq!((r1.l_lo, r1.l_hi), (rat(12, 1), rat(24, 1)));
        assert_eq!((r1.r_lo, r1.r_hi), (rat(24, 1), ExtRational::Infinity));
        let r2 = ln_rn(2).unwrap();
        assert_eq!((r2.l_lo, r2.l_hi), (rat(6, 1), rat(27, 4)));
        assert_eq!((r2.r_lo, r2.r_hi.clone()), (rat(27, 4), rat(12, 1)));
        let r3 = ln_rn(3).unwrap();
        assert_eq!((r3.l_lo, r3.l_hi), (rat(24, 5), rat(96, 19)));
        assert_eq!((r3.r_lo, r3.r_hi), (rat(96, 19), rat(6, 1)));
        assert!(ln_rn(0).is_err());
    }

    #[test]
    fn locate() {
        assert_eq!(locate_beta(&rat(24, 1)).unwrap(), (1, Side::L));
        assert_eq!(locate_beta(&rat(100, 1)).unwrap(), (1, Side::R));
        assert_eq!(locate_beta(&rat(7, 1)).unwrap(), (2, Side::R));
        assert_eq!(locate_beta(&rat(12, 1)).unwrap(), (2, Side::R));
        assert_eq!(locate_beta(&rat(27, 4)).unwrap(), (2, Side::L));
        assert_eq!(locate_beta(&ExtRational::Infinity).unwrap(), (1, Side::R));
        assert!(locate_beta(&rat(3, 1)).is_err());
    }

    #[test]
    fn locate_agrees_with_rows() {
        for n in 1..=60u64 {
            let row = ln_rn(n).unwrap();
            let inner = (&row.l_lo + &row.l_hi) / ExtRational::int(2);
            assert_eq!(locate_beta(&inner).unwrap(), (n, Side::L));
            assert_eq!(locate_beta(&row.l_hi).unwrap(), (n, Side::L));
            if row.r_hi.is_finite() {
                assert_eq!(locate_beta(&row.r_hi).unwrap(), (n, Side::R));
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let a = required_alpha(&rat(24, 1)).unwrap();
        assert_eq!(a, rat(16, 5));
        assert_eq!(level_at(&a, &rat(24, 1)), rat(3, 4));
        assert_eq!(required_alpha(&rat(12, 1)).unwrap(), rat(24, 7));
        assert_eq!(required_alpha(&ExtRational::Infinity).unwrap(), rat(8, 3));
        for n in 1..=20u64 {
            let row = ln_rn(n).unwrap();
            let n_i = n as i64;
            assert_eq!(
                alpha_at_l_left(n).unwrap(),
                rat(4 * (n_i + 1) * (n_i + 2), 2 * n_i + 5)
            );
            assert_eq!(
                alpha_formula(n, Side::L, &row.crossover),
                alpha_formula(n, Side::R, &row.crossover)
            );
        }
    }

    #[test]
    fn levels() {
        assert_eq!(theorem_level(&rat(20, 1)).unwrap(), rat(5, 6));
        assert_eq!(theorem_level(&rat(30, 1)).unwrap(), rat(3, 4));
        assert_eq!(theorem_level(&rat(7, 1)).unwrap(), rat(5, 6));
        assert_eq!(theorem_alpha(&rat(24, 1)).unwrap(), rat(48, 17));
    }

    #[test]
    fn beta0_examples() {
        let b = beta0(&rat(10, 1), &rat(5, 1)).unwrap();
        assert_eq!(b.level, rat(4, 5));
        assert_eq!(b.n_bar, Some(1));
        assert_eq!(b.beta0, rat(12, 1));
        assert!(b.strong);
        let b = beta0(&rat(8, 1), &rat(12, 1)).unwrap();
        assert_eq!(b.n_bar, None);
        assert!(b.beta0.is_infinite() && b.strong);
        assert!(matches!(
            beta0(&rat(4, 1), &rat(6, 1)),
            Err(ExponentError::HypothesisTooWeak { .. })
        ));
        // exactly on a band edge the smaller index is chosen
        let b = beta0(&rat(8, 1), &rat(6, 1)).unwrap();
        assert_eq!(b.level, rat(3, 4));
        assert_eq!(b.n_bar, Some(1));
    }

    #[test]
    fn regularity_verdicts() {
        let v = |a, b| nse_regularity_verdict(&a, &b).unwrap().level;
        assert_eq!(v(rat(16, 5), rat(24, 1)), VerdictLevel::StrongSolution);
        assert_eq!(v(rat(3, 1), rat(24, 1)), VerdictLevel::Inconclusive);
        assert_eq!(v(rat(24, 7), rat(12, 1)), VerdictLevel::StrongSolution);
        let full = nse_regularity_verdict(&rat(16, 5), &rat(24, 1)).unwrap();
        assert_eq!(full.audit_value("theorem_alpha"), Some(&rat(48, 17)));
        assert_eq!(
            full.audit_value("level_gap"),
            Some(&(rat(48, 17) - rat(16, 5)))
        );
        assert!(nse_regularity_verdict(&rat(10, 1), &rat(3, 1)).is_err());
    }
}
