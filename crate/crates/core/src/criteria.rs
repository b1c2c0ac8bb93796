//! Single-shot classification of gradient and vorticity hypotheses.
//!
//! Criterion curves are stated as equalities between `p` and `q`; here they
//! are read as "at least" conditions. On a finite time interval and a
//! bounded domain a hypothesis with larger exponents embeds into one on the
//! curve, so the classifier accepts everything at least as strong.

use std::fmt;

use crate::error::{ExponentError, Result};
use crate::exponents::{rat, scaling_level, BochnerSpec, ExtRational};

/// Ordered strength of a conclusion. Later variants imply earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictLevel {
    Inconclusive,
    EnergyEquality,
    StrongSolution,
    ClassicalSolution,
}

impl VerdictLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictLevel::Inconclusive => "Inconclusive",
            VerdictLevel::EnergyEquality => "EnergyEquality",
            VerdictLevel::StrongSolution => "StrongSolution",
            VerdictLevel::ClassicalSolution => "ClassicalSolution",
        }
    }

    pub fn implies_energy_equality(self) -> bool {
        self >= VerdictLevel::EnergyEquality
    }
}

impl fmt::Display for VerdictLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a verdict follows from a criterion as stated, or from the
/// generalized bootstrap applied off the stated exponent relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Theorem,
    EngineDerived,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Theorem => "theorem",
            Provenance::EngineDerived => "engine-derived",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    /// Machine-readable criterion tag, e.g. `euler-gradient`.
    pub citation: &'static str,
    /// The Bochner class the criterion was applied to.
    pub witness: BochnerSpec,
    pub provenance: Provenance,
    /// Named intermediate quantities, in a fixed order, for audit output.
    pub audit: Vec<(&'static str, ExtRational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub level: VerdictLevel,
    pub justification: Justification,
}

impl Verdict {
    pub(crate) fn new(
        level: VerdictLevel,
        citation: &'static str,
        witness: BochnerSpec,
        audit: Vec<(&'static str, ExtRational)>,
    ) -> Self {
        Verdict {
            level,
            justification: Justification {
                citation,
                witness,
                provenance: Provenance::Theorem,
                audit,
            },
        }
    }

    pub fn audit_value(&self, key: &str) -> Option<&ExtRational> {
        self.justification
            .audit
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// `u . n = 0` (Euler).
    Slip,
    /// `u = 0` (Navier-Stokes).
    NoSlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainMeta {
    /// First Betti number of the domain vanishes.
    pub betti_zero: bool,
    pub boundary: BoundaryCondition,
}

/// `5q/(5q-6)`, written as `1/(1 - 6/(5q))` so that `q = inf` gives 1.
fn euler_curve(q: &ExtRational) -> ExtRational {
    (ExtRational::one() - rat(6, 5) * q.recip()).recip()
}

/// `q/(2q-3)`, written as `1/(2 - 3/q)`.
fn nse_low_curve(q: &ExtRational) -> ExtRational {
    (ExtRational::int(2) - ExtRational::int(3) * q.recip()).recip()
}

/// Least time exponent `p` for which `grad u` in `L^p(L^q)` gives the
/// Euler energy equality. Defined for `q > 6/5`.
pub fn euler_required_time(q: &ExtRational) -> Result<ExtRational> {
    if *q <= rat(6, 5) {
        return Err(ExponentError::out_of_range(
            "q",
            q,
            "q > 6/5",
            "Euler gradient criterion",
        ));
    }
    Ok(euler_curve(q))
}

/// Least time exponent `p` for which `grad u` in `L^p(L^q)` gives the
/// Navier-Stokes energy equality. Defined for `q > 3/2`; the two branches
/// meet at `q = 9/5` with value 3.
pub fn nse_required_time(q: &ExtRational) -> Result<ExtRational> {
    if *q <= rat(3, 2) {
        return Err(ExponentError::out_of_range(
            "q",
            q,
            "q > 3/2",
            "Navier-Stokes gradient criterion",
        ));
    }
    if *q < rat(9, 5) {
        Ok(nse_low_curve(q))
    } else {
        Ok(euler_curve(q))
    }
}

/// Energy equality for Euler from `grad u` in `L^p(L^q)`: `q >= 9/5` and
/// `p >= 5q/(5q-6)`. Never returns a regularity verdict.
pub fn euler_gradient_verdict(s: &BochnerSpec) -> Result<Verdict> {
    let q = &s.space_exp;
    let required = euler_required_time(q)?;
    let ok = *q >= rat(9, 5) && s.time_exp >= required;
    let level = if ok {
        VerdictLevel::EnergyEquality
    } else {
        VerdictLevel::Inconclusive
    };
    Ok(Verdict::new(
        level,
        "euler-gradient",
        s.clone(),
        vec![("required_p", required), ("scaling", scaling_level(s))],
    ))
}

/// Navier-Stokes verdict from `grad u` in `L^p(L^q)`, `q > 3/2`.
///
/// Strong solution inside the regularity class `2/p + 3/q <= 2`; otherwise
/// energy equality above the required-time curve.
pub fn nse_gradient_verdict(s: &BochnerSpec) -> Result<Verdict> {
    let q = &s.space_exp;
    let required = nse_required_time(q)?;
    let audit = vec![
        ("required_p", required.clone()),
        ("scaling", scaling_level(s)),
    ];
    if regularity_class(s) {
        return Ok(Verdict::new(
            VerdictLevel::StrongSolution,
            "nse-gradient-scaling",
            s.clone(),
            audit,
        ));
    }
    let citation = if *q < rat(9, 5) {
        "nse-gradient-low"
    } else {
        "nse-gradient-high"
    };
    let level = if s.time_exp >= required {
        VerdictLevel::EnergyEquality
    } else {
        VerdictLevel::Inconclusive
    };
    Ok(Verdict::new(level, citation, s.clone(), audit))
}

/// Transfer a vorticity class to the gradient (`|grad u|_p <= C |omega|_p`).
///
/// Under slip conditions this needs a domain with vanishing first Betti
/// number; with no-slip conditions it holds on any smooth bounded domain.
pub fn curl_to_gradient(s: &BochnerSpec, meta: DomainMeta) -> Result<BochnerSpec> {
    if meta.boundary == BoundaryCondition::Slip && !meta.betti_zero {
        return Err(ExponentError::TopologyObstruction);
    }
    Ok(s.clone())
}

/// `2/p + 3/q <= 2` with `q > 3/2`.
pub fn regularity_class(s: &BochnerSpec) -> bool {
    s.space_exp > rat(3, 2) && scaling_level(s) <= ExtRational::int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::embeds;
    use proptest::prelude::*;

    fn spec(p: ExtRational, q: ExtRational) -> BochnerSpec {
        BochnerSpec::new(p, q)
    }

    #[test]
    fn euler_examples() {
        let v = euler_gradient_verdict(&spec(rat(3, 1), rat(9, 5))).unwrap();
        assert_eq!(v.level, VerdictLevel::EnergyEquality);
        assert_eq!(v.audit_value("required_p"), Some(&rat(3, 1)));
        let v = euler_gradient_verdict(&spec(rat(5, 2), rat(2, 1))).unwrap();
        assert_eq!(v.level, VerdictLevel::EnergyEquality);
        let v = euler_gradient_verdict(&spec(rat(2, 1), rat(9, 5))).unwrap();
        assert_eq!(v.level, VerdictLevel::Inconclusive);
        // q between 6/5 and 9/5 never certifies, however large p is
        let v = euler_gradient_verdict(&spec(ExtRational::Infinity, rat(3, 2))).unwrap();
        assert_eq!(v.level, VerdictLevel::Inconclusive);
        assert!(euler_gradient_verdict(&spec(rat(5, 1), rat(6, 5))).is_err());
    }

    #[test]
    fn nse_examples() {
        let v = nse_gradient_verdict(&spec(rat(8, 1), rat(8, 5))).unwrap();
        assert_eq!(v.level, VerdictLevel::EnergyEquality);
        assert_eq!(v.justification.citation, "nse-gradient-low");
        let v = nse_gradient_verdict(&spec(rat(2, 1), rat(2, 1))).unwrap();
        assert_eq!(v.level, VerdictLevel::Inconclusive);
        let v = nse_gradient_verdict(&spec(rat(2, 1), rat(6, 1))).unwrap();
        assert_eq!(v.level, VerdictLevel::StrongSolution);
        assert!(nse_gradient_verdict(&spec(rat(1, 1), rat(1, 1))).is_err());
        assert!(nse_gradient_verdict(&spec(ExtRational::Infinity, rat(3, 2))).is_err());
    }

    #[test]
    fn curl_transfer() {
        let s = spec(rat(3, 1), rat(9, 5));
        let slip_ok = DomainMeta {
            betti_zero: true,
            boundary: BoundaryCondition::Slip,
        };
        assert_eq!(curl_to_gradient(&s, slip_ok).unwrap(), s);
        let slip_bad = DomainMeta {
            betti_zero: false,
            boundary: BoundaryCondition::Slip,
        };
        assert_eq!(
            curl_to_gradient(&s, slip_bad),
            Err(ExponentError::TopologyObstruction)
        );
        let s2 = spec(rat(5, 2), rat(2, 1));
        for betti_zero in [true, false] {
            let meta = DomainMeta {
                betti_zero,
                boundary: BoundaryCondition::NoSlip,
            };
            assert_eq!(curl_to_gradient(&s2, meta).unwrap(), s2);
        }
    }

    #[test]
    fn regularity_class_examples() {
        assert!(regularity_class(&spec(rat(2, 1), rat(6, 1))));
        assert!(!regularity_class(&spec(rat(8, 3), rat(48, 25))));
        assert!(!regularity_class(&spec(ExtRational::Infinity, rat(3, 2))));
    }

    #[test]
    fn required_time_is_continuous_and_decreasing() {
        assert_eq!(nse_required_time(&rat(9, 5)).unwrap(), rat(3, 1));
        assert_eq!(nse_low_curve(&rat(9, 5)), rat(3, 1));
        assert_eq!(
            nse_required_time(&ExtRational::Infinity).unwrap(),
            ExtRational::one()
        );
        // 1000 sample points q_i = 3/2 + i/200, strictly decreasing required p
        let mut prev: Option<ExtRational> = None;
        for i in 1..=1000 {
            let q = rat(3, 2) + rat(i, 200);
            let p = nse_required_time(&q).unwrap();
            if let Some(pp) = &prev {
                assert!(p < *pp, "not decreasing at q = {q}");
            }
            prev = Some(p);
        }
        // continuity at 9/5 from both sides
        let eps = rat(1, 1_000_000);
        let left = nse_required_time(&(rat(9, 5) - &eps)).unwrap();
        let right = nse_required_time(&(rat(9, 5) + &eps)).unwrap();
        assert!((left - right).to_f64().abs() < 1e-4);
    }

    fn exponent() -> impl Strategy<Value = ExtRational> {
        prop_oneof![
            1 => Just(ExtRational::Infinity),
            9 => (1i64..200, 1i64..40).prop_map(|(n, d)| rat(n.max(d), d)),
        ]
    }

    proptest! {
        #[test]
        fn stronger_hypotheses_keep_energy_verdicts(
            p in exponent(), q in exponent(), dp in exponent(), dq in exponent()
        ) {
            // a = b with each exponent enlarged by a Hoelder-inverse step
            let b = BochnerSpec::new(p, q);
            let a = BochnerSpec::new(
                (b.time_exp.recip() * (ExtRational::one() - dp.recip())).recip(),
                (b.space_exp.recip() * (ExtRational::one() - dq.recip())).recip(),
            );
            prop_assert!(embeds(&a, &b));
            if let Ok(vb) = euler_gradient_verdict(&b) {
                let va = euler_gradient_verdict(&a).unwrap();
                prop_assert!(va.level >= vb.level);
                prop_assert!(va.level <= VerdictLevel::EnergyEquality);
            }
            if let Ok(vb) = nse_gradient_verdict(&b) {
                let va = nse_gradient_verdict(&a).unwrap();
                prop_assert!(va.level >= vb.level);
            }
        }

        #[test]
        fn strong_implies_above_energy_curve(p in exponent(), q in exponent()) {
            let s = BochnerSpec::new(p, q);
            if let Ok(v) = nse_gradient_verdict(&s) {
                if v.level == VerdictLevel::StrongSolution {
                    prop_assert!(s.time_exp >= nse_required_time(&s.space_exp).unwrap());
                }
            }
        }
    }
}
