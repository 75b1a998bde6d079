//! Hardy- and Bergman-space membership of the covering map from decay data.
//!
//! With `ω(t) ≈ C t^{-q}` in the tail, the covering map `f` of the disk onto
//! `D` lies in `H^p` iff `∫ t^{p-1} ω(t) dt < ∞`, i.e. iff `p < q`. On the
//! Bergman side membership in `A^p_α` forces `ω(t) = O(t^{-p/(α+2)})`, and
//! conversely `p/(α+2) < h(D)` gives membership through the embedding
//! `H^{p/(α+2)} ⊂ A^p_α`. Both tests compare a query ratio against the fitted
//! exponent `q`; queries within `margin` of it are left undecided.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy_estimator::{DecayEntry, DecayProfile};

pub const DEFAULT_MARGIN: f64 = 0.05;

/// Least-squares power law through the tail of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Slope `q` of `log(1/ω)` against `log r`.
    pub exponent: f64,
    /// Intercept `b` of that line, so `ω ≈ e^{-b} r^{-q}`.
    pub log_intercept: f64,
    /// Largest absolute deviation from the line in log space.
    pub residual: f64,
    pub fit_range: (f64, f64),
}

impl DecayFit {
    pub fn prefactor(&self) -> f64 {
        (-self.log_intercept).exp()
    }
}

/// Fits `log(1/ω) = q log r + b` on the positive entries among the last
/// `tail_window + 1` points.
pub fn fit_decay(p: &DecayProfile, tail_window: usize) -> Result<DecayFit> {
    let tail = p.tail(tail_window + 1);
    let points: Vec<(f64, f64)> = tail
        .iter()
        .filter(|e| e.omega > 0.0)
        .map(|e| (e.r.ln(), -e.omega.ln()))
        .collect();
    if points.len() < 2 {
        if let Some(e) = tail.iter().find(|e| e.omega == 0.0) {
            return Err(Error::ZeroMeasure { r: e.r });
        }
        return Err(Error::TooFewPoints {
            needed: 2,
            found: points.len(),
        });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let log_intercept = my - exponent * mx;
    let residual = points
        .iter()
        .map(|&(x, y)| (y - exponent * x - log_intercept).abs())
        .fold(0.0, f64::max);
    let positive: Vec<&DecayEntry> = tail.iter().filter(|e| e.omega > 0.0).collect();
    Ok(DecayFit {
        exponent,
        log_intercept,
        residual,
        fit_range: (positive[0].r, positive[positive.len() - 1].r),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipQuery {
    pub p: f64,
    /// `None` for Hardy-space queries.
    pub alpha: Option<f64>,
}

impl MembershipQuery {
    pub fn hardy(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "exponent p = {p} must be positive"
            )));
        }
        Ok(Self { p, alpha: None })
    }

    pub fn bergman(p: f64, alpha: f64) -> Result<Self> {
        Self::hardy(p)?;
        if !(alpha > -1.0 && alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "weight α = {alpha} must exceed -1"
            )));
        }
        Ok(Self {
            p,
            alpha: Some(alpha),
        })
    }

    /// Power of `ω` in the criterion integral: 1 for Hardy, `α + 2` for Bergman.
    pub fn omega_power(&self) -> f64 {
        self.alpha.map_or(1.0, |a| a + 2.0)
    }

    /// `p` for Hardy queries, `p/(α+2)` for Bergman queries.
    pub fn ratio(&self) -> f64 {
        self.p / self.omega_power()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NotMember,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationale {
    /// Decay faster than `r^{-p}` makes the Hardy criterion integral converge.
    DecaySufficient,
    /// The criterion integral diverges under the fitted decay.
    IntegralDiverges,
    /// Query within the margin of the critical exponent.
    NearCritical,
    /// Membership through `H^{p/(α+2)} ⊂ A^p_α`.
    EmbeddingSufficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub p: f64,
    pub alpha: Option<f64>,
    pub verdict: Verdict,
    pub margin: f64,
    pub rationale: Rationale,
    /// Fitted decay exponent, the estimate of `h(D) = b(D)`.
    pub critical_ratio: f64,
    pub query_ratio: f64,
    /// Whether `∫ r^{p-1} ω^β dr` converges under the fitted power law.
    pub criterion_integral_converges: bool,
}

fn check_margin(margin: f64) -> Result<()> {
    if margin >= 0.0 && margin.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("margin {margin} must be ≥ 0")))
    }
}

fn compare(fit: &DecayFit, query: &MembershipQuery, margin: f64) -> (Verdict, bool) {
    let q = fit.exponent;
    let ratio = query.ratio();
    let verdict = if (q - ratio).abs() <= margin {
        Verdict::Inconclusive
    } else if ratio < q {
        Verdict::Member
    } else {
        Verdict::NotMember
    };
    // ∫ r^{p-1} (C r^{-q})^β dr converges iff p < qβ
    (verdict, query.p < q * query.omega_power())
}

/// `H^p` membership of the covering map.
pub fn classify_hardy(
    fit: &DecayFit,
    query: &MembershipQuery,
    margin: f64,
) -> Result<MembershipVerdict> {
    check_margin(margin)?;
    if query.alpha.is_some() {
        return Err(Error::InvalidConfig(
            "Hardy query must not carry a weight".into(),
        ));
    }
    let (verdict, converges) = compare(fit, query, margin);
    let rationale = match verdict {
        Verdict::Member => Rationale::DecaySufficient,
        Verdict::NotMember => Rationale::IntegralDiverges,
        Verdict::Inconclusive => Rationale::NearCritical,
    };
    Ok(MembershipVerdict {
        p: query.p,
        alpha: None,
        verdict,
        margin,
        rationale,
        critical_ratio: fit.exponent,
        query_ratio: query.ratio(),
        criterion_integral_converges: converges,
    })
}

/// `A^p_α` membership of the covering map.
///
/// The integral test is only necessary for membership, so `Member` is
/// justified through the embedding route alone.
pub fn classify_bergman(
    fit: &DecayFit,
    query: &MembershipQuery,
    margin: f64,
) -> Result<MembershipVerdict> {
    check_margin(margin)?;
    let Some(alpha) = query.alpha else {
        return Err(Error::InvalidConfig(
            "Bergman query needs a weight α".into(),
        ));
    };
    let (verdict, converges) = compare(fit, query, margin);
    let rationale = match verdict {
        Verdict::Member => Rationale::EmbeddingSufficient,
        Verdict::NotMember => Rationale::IntegralDiverges,
        Verdict::Inconclusive => Rationale::NearCritical,
    };
    Ok(MembershipVerdict {
        p: query.p,
        alpha: Some(alpha),
        verdict,
        margin,
        rationale,
        critical_ratio: fit.exponent,
        query_ratio: query.ratio(),
        criterion_integral_converges: converges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionIntegral {
    /// Trapezoidal value over the profile range.
    pub truncated: f64,
    /// Power-law tail beyond the last radius; `None` when divergent.
    pub tail: Option<f64>,
    pub divergent: bool,
    /// Profile entries with `ω = 0` (they contribute nothing).
    pub zero_entries: usize,
    pub range: (f64, f64),
}

impl CriterionIntegral {
    pub fn total(&self) -> Option<f64> {
        self.tail.map(|t| self.truncated + t)
    }
}

/// `∫ t^{p-1} ω(t)^β dt` over the profile range plus a fitted tail, with
/// `β = 1` (Hardy) or `α + 2` (Bergman).
pub fn criterion_integral(
    p: &DecayProfile,
    query: &MembershipQuery,
    tail_window: usize,
) -> Result<CriterionIntegral> {
    let entries = p.entries();
    if entries.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: entries.len(),
        });
    }
    let beta = query.omega_power();
    // t^{p-1} dt = t^p d(log t); the geometric grid is uniform in log t
    let integrand = |e: &DecayEntry| e.r.powf(query.p) * e.omega.powf(beta);
    let truncated: f64 = entries
        .windows(2)
        .map(|w| 0.5 * (integrand(&w[0]) + integrand(&w[1])) * (w[1].r.ln() - w[0].r.ln()))
        .sum();
    let zero_entries = entries.iter().filter(|e| e.omega == 0.0).count();
    let last = entries[entries.len() - 1];

    let (tail, divergent) = match fit_decay(p, tail_window) {
        Ok(fit) => {
            let decay = fit.exponent * beta;
            if query.p >= decay {
                (None, true)
            } else {
                let c = fit.prefactor().powf(beta);
                (
                    Some(c * last.r.powf(query.p - decay) / (decay - query.p)),
                    false,
                )
            }
        }
        // the tail has vanished: nothing beyond the grid
        Err(Error::ZeroMeasure { .. }) if last.omega == 0.0 => (Some(0.0), false),
        Err(e) => return Err(e),
    };
    Ok(CriterionIntegral {
        truncated,
        tail,
        divergent,
        zero_entries,
        range: (entries[0].r, last.r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, PlanePoint};
    use crate::hardy_estimator::{default_grid, geometric_grid};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn half_plane_fit() -> DecayFit {
        let d = DomainSpec::half_plane(PlanePoint::real(1.0)).unwrap();
        let p = DecayProfile::from_oracle(&d, &default_grid(&d)).unwrap();
        fit_decay(&p, 4).unwrap()
    }

    #[test]
    fn fit_examples() {
        assert!((half_plane_fit().exponent - 1.0).abs() <= 0.05);

        let grid = geometric_grid(1.0, 2.0, 8).unwrap();
        let p = DecayProfile::synthetic(&grid, |r| (3.0 * r.powf(-1.5)).min(1.0)).unwrap();
        let fit = fit_decay(&p, 4).unwrap();
        assert_relative_eq!(fit.exponent, 1.5, max_relative = 1e-12);
        assert_relative_eq!(fit.log_intercept, -3f64.ln(), max_relative = 1e-12);
        assert!(fit.residual < 1e-12);
        assert_relative_eq!(fit.prefactor(), 3.0, max_relative = 1e-12);

        let d = DomainSpec::sector(FRAC_PI_2, PlanePoint::real(1.0)).unwrap();
        let p = DecayProfile::from_oracle(&d, &default_grid(&d)).unwrap();
        assert!((fit_decay(&p, 4).unwrap().exponent - 2.0).abs() <= 0.1);
    }

    #[test]
    fn fit_errors() {
        let p =
            DecayProfile::synthetic(&[1.0, 2.0, 4.0], |r| if r > 1.5 { 0.0 } else { 0.2 }).unwrap();
        assert!(matches!(fit_decay(&p, 4), Err(Error::ZeroMeasure { .. })));
        let p = DecayProfile::synthetic(&[1.0], |_| 0.2).unwrap();
        assert!(matches!(fit_decay(&p, 4), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn hardy_verdicts() {
        let fit = half_plane_fit();
        let v =
            |p| classify_hardy(&fit, &MembershipQuery::hardy(p).unwrap(), DEFAULT_MARGIN).unwrap();
        assert_eq!(v(0.5).verdict, Verdict::Member);
        assert_eq!(v(0.5).rationale, Rationale::DecaySufficient);
        assert!(v(0.5).criterion_integral_converges);
        assert_eq!(v(2.0).verdict, Verdict::NotMember);
        assert!(!v(2.0).criterion_integral_converges);
        assert_eq!(v(1.0).verdict, Verdict::Inconclusive);
        assert_eq!(v(1.0).rationale, Rationale::NearCritical);
        assert!(classify_hardy(&fit, &MembershipQuery::bergman(1.0, 0.0).unwrap(), 0.05).is_err());
    }

    #[test]
    fn bergman_verdicts() {
        let fit = half_plane_fit();
        let v = |p, a| {
            classify_bergman(
                &fit,
                &MembershipQuery::bergman(p, a).unwrap(),
                DEFAULT_MARGIN,
            )
            .unwrap()
        };
        assert_eq!(v(1.5, 0.0).verdict, Verdict::Member);
        assert_eq!(v(1.5, 0.0).rationale, Rationale::EmbeddingSufficient);
        assert_eq!(v(3.0, 0.0).verdict, Verdict::NotMember);
        assert!(!v(3.0, 0.0).criterion_integral_converges);
        let q = fit.exponent;
        for alpha in [-0.5, 0.0, 1.0, 3.0] {
            assert_eq!(v(q * (alpha + 2.0), alpha).verdict, Verdict::Inconclusive);
        }
        assert!(MembershipQuery::bergman(1.0, -1.0).is_err());
        assert!(MembershipQuery::hardy(0.0).is_err());
    }

    #[test]
    fn criterion_integral_examples() {
        let d = DomainSpec::half_plane(PlanePoint::real(1.0)).unwrap();
        let grid = default_grid(&d);
        let p = DecayProfile::from_oracle(&d, &grid).unwrap();

        let ci = criterion_integral(&p, &MembershipQuery::hardy(0.5).unwrap(), 4).unwrap();
        assert!(!ci.divergent);
        // independent value: ∫_2^∞ t^{-1/2} ω(t) dt with t = 2 e^u, midpoint rule
        let (n, u_max) = (2_000_000, 40.0);
        let h = u_max / n as f64;
        let exact: f64 = (0..n)
            .map(|i| {
                let t = 2.0 * ((i as f64 + 0.5) * h).exp();
                t.powf(0.5) * (2.0 / PI) * (1.0 / t).atan()
            })
            .sum::<f64>()
            * h;
        assert!(
            (ci.total().unwrap() / exact - 1.0).abs() < 0.05,
            "{ci:?} vs {exact}"
        );

        let ci = criterion_integral(&p, &MembershipQuery::hardy(2.0).unwrap(), 4).unwrap();
        assert!(ci.divergent && ci.tail.is_none());

        let grid = geometric_grid(1.0, 2.0, 10).unwrap();
        let p = DecayProfile::synthetic(&grid, |r| 1.0 / r).unwrap();
        let ci = criterion_integral(&p, &MembershipQuery::hardy(1.0).unwrap(), 4).unwrap();
        assert!(ci.divergent);
    }

    #[test]
    fn criterion_integral_with_vanishing_tail() {
        let d = DomainSpec::disk(3.0, PlanePoint::real(0.0)).unwrap();
        let p = DecayProfile::from_oracle(&d, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        let ci = criterion_integral(&p, &MembershipQuery::bergman(2.0, 1.0).unwrap(), 2).unwrap();
        assert_eq!(ci.zero_entries, 2);
        assert!(!ci.divergent);
        assert_eq!(ci.tail, Some(0.0));
    }

    proptest! {
        #[test]
        fn hardy_and_bergman_agree_on_ratio(p in 0.05f64..4.0, alpha in -0.95f64..5.0, q in 0.2f64..3.0) {
            let fit = DecayFit { exponent: q, log_intercept: 0.0, residual: 0.0, fit_range: (1.0, 2.0) };
            let h = classify_hardy(&fit, &MembershipQuery::hardy(p).unwrap(), DEFAULT_MARGIN).unwrap();
            let b = classify_bergman(
                &fit,
                &MembershipQuery::bergman(p * (alpha + 2.0), alpha).unwrap(),
                DEFAULT_MARGIN,
            ).unwrap();
            prop_assert_eq!(h.verdict, b.verdict);
        }

        #[test]
        fn embedding_never_contradicted(p0 in 0.05f64..3.0, t in 0.0f64..1.0, alpha in -0.95f64..4.0) {
            let fit = half_plane_fit();
            let hardy = classify_hardy(&fit, &MembershipQuery::hardy(p0).unwrap(), DEFAULT_MARGIN).unwrap();
            // choose p with p/(α+2) ≤ p0 ≤ p
            let p = p0 * (1.0 + t * (alpha + 1.0));
            prop_assume!(p / (alpha + 2.0) <= p0 && p0 <= p);
            let berg = classify_bergman(&fit, &MembershipQuery::bergman(p, alpha).unwrap(), DEFAULT_MARGIN).unwrap();
            if hardy.verdict == Verdict::Member {
                prop_assert_ne!(berg.verdict, Verdict::NotMember);
            }
        }
    }
}
