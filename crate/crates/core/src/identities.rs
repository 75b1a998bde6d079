//! Numerical checks of the potential-theoretic identities linking circle
//! averages of the Green's function to the tail harmonic measure
//! `ω(t) = ω(a, E_t)`:
//!
//! * `∫_r^∞ ω(t) dt/t = (1/2π) ∫ g(a, re^{iθ}) dθ` for `r > |a|`;
//! * `∫_{|a|}^∞ r^{p-1} ∫ g(a, re^{iθ}) dθ dr = (2π/p) ∫_{|a|}^∞ ω(t) t^{p-1} (1 - |a|^p/t^p) dt`;
//! * `((1/2π) ∫ g dθ)^{α+2} ≤ (1/2π) ∫ g^{α+2} dθ`;
//! * `∫ g(a, re^{iθ}) dθ ≥ 2π log 2 · ω(2r)`.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, PlanePoint};
use crate::oracles::{exact_hm, green_kernel, tail_decay, TailDecay};
use crate::quadrature::{breakpoints, geometric_points, integrate, Quadrature, Tolerance};

pub const BAERNSTEIN_TOLERANCE: f64 = 1e-3;
pub const FUBINI_TOLERANCE: f64 = 1e-2;
pub const INEQUALITY_TOLERANCE: f64 = 1e-9;
pub const DERIVATIVE_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// `lhs ≤ rhs`
    AtMost,
    /// `lhs ≥ rhs`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)` for equalities; for inequalities the
    /// relative slack, negative when violated.
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn equality(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let relative_error = if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        };
        Self {
            name: name.into(),
            relation: Relation::Equal,
            lhs,
            rhs,
            relative_error,
            tolerance,
            pass: relative_error <= tolerance,
        }
    }

    pub fn inequality(name: impl Into<String>, relation: Relation, lhs: f64, rhs: f64) -> Self {
        let (small, large) = match relation {
            Relation::AtMost => (lhs, rhs),
            _ => (rhs, lhs),
        };
        let slack = if large == 0.0 {
            if small <= 0.0 {
                0.0
            } else {
                -1.0
            }
        } else {
            (large - small) / large.abs()
        };
        Self {
            name: name.into(),
            relation,
            lhs,
            rhs,
            relative_error: slack,
            tolerance: INEQUALITY_TOLERANCE,
            pass: slack >= -INEQUALITY_TOLERANCE,
        }
    }
}

/// Closed-form data an identity check needs.
pub trait IdentityOracle: Sync {
    fn label(&self) -> String;
    fn basepoint(&self) -> Complex64;
    fn omega(&self, t: f64) -> Result<f64>;
    /// `g(a, w)`, zero off the domain.
    fn green(&self, w: Complex64) -> f64;
    fn decay(&self) -> TailDecay;
    /// Angles in `(0, 2π)` where the circle `|w| = r` meets the boundary.
    fn crossings(&self, _r: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// An oracle domain with closed-form harmonic measure and Green's function.
pub struct OracleDomain<'a> {
    domain: &'a DomainSpec,
    kernel: Box<dyn Fn(Complex64) -> f64 + Send + Sync + 'a>,
    decay: TailDecay,
}

impl<'a> OracleDomain<'a> {
    pub fn new(domain: &'a DomainSpec) -> Result<Self> {
        Ok(Self {
            domain,
            kernel: Box::new(green_kernel(domain)?),
            decay: tail_decay(domain)?,
        })
    }
}

impl IdentityOracle for OracleDomain<'_> {
    fn label(&self) -> String {
        let a = self.domain.basepoint();
        format!("{},a=({},{})", self.domain.shape().name(), a.re, a.im)
    }

    fn basepoint(&self) -> Complex64 {
        self.domain.basepoint_c()
    }

    fn omega(&self, t: f64) -> Result<f64> {
        exact_hm(self.domain, t)
    }

    fn green(&self, w: Complex64) -> f64 {
        (self.kernel)(w)
    }

    fn decay(&self) -> TailDecay {
        self.decay
    }

    fn crossings(&self, r: f64) -> Vec<f64> {
        const SAMPLES: usize = 4096;
        let inside = |t: f64| self.domain.contains_c(Complex64::from_polar(r, t));
        let mut out = Vec::new();
        for k in 0..SAMPLES {
            let (mut lo, mut hi) = (
                TAU * k as f64 / SAMPLES as f64,
                TAU * (k + 1) as f64 / SAMPLES as f64,
            );
            let side = inside(lo);
            if inside(hi) == side {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if inside(mid) == side {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }
}

type Scalar = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type Field = Box<dyn Fn(Complex64) -> f64 + Send + Sync>;

/// Hand-made `ω` and `g`, for degenerate and equality cases.
pub struct SyntheticOracle {
    pub basepoint: Complex64,
    pub omega: Scalar,
    pub green: Field,
    pub decay: TailDecay,
}

impl SyntheticOracle {
    /// Empty tail: `ω ≡ 0`, `g ≡ 0`.
    pub fn empty_tail(basepoint: Complex64) -> Self {
        Self {
            basepoint,
            omega: Box::new(|_| 0.0),
            green: Box::new(|_| 0.0),
            decay: TailDecay::Vanishing { beyond: 0.0 },
        }
    }

    /// `g ≡ value` on every circle.
    pub fn constant_green(basepoint: Complex64, value: f64) -> Self {
        Self {
            basepoint,
            omega: Box::new(|_| 0.0),
            green: Box::new(move |_| value),
            decay: TailDecay::Vanishing { beyond: 0.0 },
        }
    }
}

impl IdentityOracle for SyntheticOracle {
    fn label(&self) -> String {
        "synthetic".into()
    }
    fn basepoint(&self) -> Complex64 {
        self.basepoint
    }
    fn omega(&self, t: f64) -> Result<f64> {
        Ok((self.omega)(t))
    }
    fn green(&self, w: Complex64) -> f64 {
        (self.green)(w)
    }
    fn decay(&self) -> TailDecay {
        self.decay
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("radius {r} must be positive")))
    }
}

fn converged(q: Quadrature) -> Result<f64> {
    if q.converged {
        Ok(q.value)
    } else {
        Err(Error::QuadratureFailure {
            value: q.value,
            error: q.error,
        })
    }
}

/// `∫_0^{2π} g(a, re^{iθ})^power dθ`.
pub fn circle_integral(o: &dyn IdentityOracle, r: f64, power: f64) -> Result<f64> {
    check_radius(r)?;
    let a = o.basepoint();
    let theta_a = a.im.atan2(a.re).rem_euclid(TAU);
    let mut interior = o.crossings(r);
    // logarithmic peak where the circle passes near the pole
    let near = ((r - a.norm()).abs() / r).max(1e-300);
    if near < 1.0 {
        for x in geometric_points(0.0, PI, 0.0, near.max(1e-14)) {
            interior.push((theta_a + x).rem_euclid(TAU));
            interior.push((theta_a - x).rem_euclid(TAU));
        }
        interior.push(theta_a);
    }
    let pts = breakpoints(0.0, TAU, interior);
    let q = integrate(
        |t| {
            let g = o.green(Complex64::from_polar(r, t));
            if power == 1.0 {
                g
            } else {
                g.powf(power)
            }
        },
        &pts,
        Tolerance::relative(1e-10),
    );
    converged(q)
}

/// `∫_lo^hi φ(t) dt/t` on a log scale.
fn log_scale_integral(lo: f64, hi: f64, phi: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let (s0, s1) = (lo.ln(), hi.ln());
    let pts = breakpoints(
        s0,
        s1,
        (1..(s1 - s0).ceil() as usize).map(|k| s0 + k as f64),
    );
    let mut err = None;
    let q = integrate(
        |s| match phi(s.exp()) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        &pts,
        Tolerance::relative(1e-10),
    );
    if let Some(e) = err {
        return Err(e);
    }
    converged(q)
}

/// Upper end of the explicit quadrature range for `∫_r^∞` tails.
fn horizon(o: &dyn IdentityOracle, r: f64, cap: f64) -> f64 {
    match o.decay() {
        TailDecay::PowerLaw { .. } => cap.max(r),
        TailDecay::Vanishing { beyond } => beyond.min(cap).max(r),
    }
}

/// `∫_r^∞ ω(t) dt/t` against `(1/2π) ∫ g(a, re^{iθ}) dθ`.
pub fn baernstein_identity(d: &DomainSpec, r: f64) -> Result<IdentityReport> {
    baernstein_identity_with(&OracleDomain::new(d)?, r)
}

pub fn baernstein_identity_with(o: &dyn IdentityOracle, r: f64) -> Result<IdentityReport> {
    check_radius(r)?;
    if r <= o.basepoint().norm() {
        return Err(Error::InvalidConfig(format!(
            "radius {r} must exceed |a| = {}",
            o.basepoint().norm()
        )));
    }
    let lhs = tail_log_integral(o, r)?;
    let rhs = circle_integral(o, r, 1.0)? / TAU;
    Ok(IdentityReport::equality(
        format!("baernstein_identity[{},r={r}]", o.label()),
        lhs,
        rhs,
        BAERNSTEIN_TOLERANCE,
    ))
}

/// `∫_r^∞ ω(t) dt/t`, with the power-law tail beyond the quadrature range
/// added in closed form.
fn tail_log_integral(o: &dyn IdentityOracle, r: f64) -> Result<f64> {
    let end = horizon(o, r, r * 2f64.powi(40));
    let body = log_scale_integral(r, end, |t| o.omega(t))?;
    let tail = match o.decay() {
        TailDecay::PowerLaw { exponent } => o.omega(end)? / exponent,
        TailDecay::Vanishing { .. } => 0.0,
    };
    Ok(body + tail)
}

/// Both sides of the Fubini exchange for `∫_{|a|}^∞ r^{p-1} ∫ g dθ dr`,
/// integrated explicitly up to `r_max` with power-law tails beyond.
pub fn fubini_identity(d: &DomainSpec, p: f64, r_max: f64) -> Result<IdentityReport> {
    fubini_identity_with(&OracleDomain::new(d)?, p, r_max)
}

pub fn fubini_identity_with(o: &dyn IdentityOracle, p: f64, r_max: f64) -> Result<IdentityReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "exponent p = {p} must be positive"
        )));
    }
    let a = o.basepoint().norm();
    if let TailDecay::PowerLaw { exponent } = o.decay() {
        if p >= exponent {
            return Err(Error::DivergentCase { p, exponent });
        }
    }
    let lo = a.max(f64::MIN_POSITIVE);
    if !(r_max > lo) {
        return Err(Error::InvalidConfig(format!(
            "R_max = {r_max} must exceed |a| = {a}"
        )));
    }
    let end = horizon(o, lo, r_max);
    let ap = a.powf(p);

    // dr = r d(log r)
    let lhs_body = log_scale_integral(lo, end, |r| Ok(r.powf(p) * circle_integral(o, r, 1.0)?))?;
    let rhs_body = log_scale_integral(lo, end, |t| Ok(o.omega(t)? * (t.powf(p) - ap)))? * TAU / p;
    let (lhs_tail, rhs_tail) = match o.decay() {
        TailDecay::PowerLaw { exponent: q } => {
            // ω(t) ≈ ω(R)(R/t)^q beyond R; ∫ g dθ = 2π ∫_r^∞ ω dt/t there
            let w = o.omega(end)?;
            let rp = end.powf(p);
            (
                TAU * w * rp / (q * (q - p)),
                TAU / p * w * (rp / (q - p) - ap / q),
            )
        }
        TailDecay::Vanishing { .. } => (0.0, 0.0),
    };
    Ok(IdentityReport::equality(
        format!("fubini_identity[{},p={p},R={r_max}]", o.label()),
        lhs_body + lhs_tail,
        rhs_body + rhs_tail,
        FUBINI_TOLERANCE,
    ))
}

/// `((1/2π) ∫ g dθ)^{α+2} ≤ (1/2π) ∫ g^{α+2} dθ` on the circle of radius `r`.
pub fn jensen_check(d: &DomainSpec, r: f64, alpha: f64) -> Result<IdentityReport> {
    jensen_check_with(&OracleDomain::new(d)?, r, alpha)
}

pub fn jensen_check_with(o: &dyn IdentityOracle, r: f64, alpha: f64) -> Result<IdentityReport> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "weight α = {alpha} must exceed -1"
        )));
    }
    let power = alpha + 2.0;
    let lhs = (circle_integral(o, r, 1.0)? / TAU).powf(power);
    let rhs = circle_integral(o, r, power)? / TAU;
    Ok(IdentityReport::inequality(
        format!("jensen_check[{},r={r},alpha={alpha}]", o.label()),
        Relation::AtMost,
        lhs,
        rhs,
    ))
}

/// `∫ g(a, re^{iθ}) dθ ≥ 2π log 2 · ω(2r)`.
pub fn tail_lower_bound(d: &DomainSpec, r: f64) -> Result<IdentityReport> {
    tail_lower_bound_with(&OracleDomain::new(d)?, r)
}

pub fn tail_lower_bound_with(o: &dyn IdentityOracle, r: f64) -> Result<IdentityReport> {
    let lhs = circle_integral(o, r, 1.0)?;
    let rhs = TAU * LN_2 * o.omega(2.0 * r)?;
    Ok(IdentityReport::inequality(
        format!("tail_lower_bound[{},r={r}]", o.label()),
        Relation::AtLeast,
        lhs,
        rhs,
    ))
}

/// `d/dr ∫ g(a, re^{iθ}) dθ = -2π ω(r)/r`, by central differences.
pub fn derivative_check(d: &DomainSpec, r: f64) -> Result<IdentityReport> {
    derivative_check_with(&OracleDomain::new(d)?, r)
}

pub fn derivative_check_with(o: &dyn IdentityOracle, r: f64) -> Result<IdentityReport> {
    check_radius(r)?;
    let h = 1e-3 * r;
    let lhs = (circle_integral(o, r + h, 1.0)? - circle_integral(o, r - h, 1.0)?) / (2.0 * h);
    let rhs = -TAU * o.omega(r)? / r;
    Ok(IdentityReport::equality(
        format!("baernstein_derivative[{},r={r}]", o.label()),
        lhs,
        rhs,
        DERIVATIVE_TOLERANCE,
    ))
}

/// Radii `2, 4, …, 2^10`.
pub fn sweep_radii() -> Vec<f64> {
    (1..=10).map(|k| 2f64.powi(k)).collect()
}

pub const SWEEP_ALPHAS: [f64; 4] = [-0.5, 0.0, 1.0, 3.0];

/// The full verification suite on the half-plane with basepoint 1, plus the
/// bounded and synthetic edge cases.
pub fn verification_suite() -> Result<Vec<IdentityReport>> {
    let half_plane = DomainSpec::half_plane(PlanePoint::real(1.0))?;
    let o = OracleDomain::new(&half_plane)?;
    let mut reports = Vec::new();
    for r in sweep_radii() {
        reports.push(baernstein_identity_with(&o, r)?);
        reports.push(derivative_check_with(&o, r)?);
        reports.push(tail_lower_bound_with(&o, r)?);
        for alpha in SWEEP_ALPHAS {
            reports.push(jensen_check_with(&o, r, alpha)?);
        }
    }
    reports.push(fubini_identity_with(&o, 0.5, 1e4)?);

    let quarter = DomainSpec::sector(PI / 2.0, PlanePoint::real(1.0))?;
    let q = OracleDomain::new(&quarter)?;
    for r in [2.0, 32.0] {
        reports.push(baernstein_identity_with(&q, r)?);
    }
    reports.push(fubini_identity_with(&q, 1.5, 1e4)?);

    let disk = DomainSpec::disk(1.0, PlanePoint::real(0.0))?;
    reports.push(tail_lower_bound(&disk, 5.0)?);

    let empty = SyntheticOracle::empty_tail(Complex64::new(1.0, 0.0));
    reports.push(fubini_identity_with(&empty, 0.5, 1e4)?);
    let flat = SyntheticOracle::constant_green(Complex64::new(1.0, 0.0), 0.7);
    reports.push(jensen_check_with(&flat, 2.0, 1.0)?);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn half_plane() -> DomainSpec {
        DomainSpec::half_plane(PlanePoint::real(1.0)).unwrap()
    }

    /// `∫_r^∞ (2/π) atan(1/t) dt/t` by a substitution-free midpoint rule in
    /// `u = 1/t`: `(2/π) ∫_0^{1/r} atan(u)/u du`.
    fn half_plane_tail_integral(r: f64) -> f64 {
        let n = 200_000;
        let h = 1.0 / r / n as f64;
        (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) * h;
                u.atan() / u
            })
            .sum::<f64>()
            * h
            * 2.0
            / PI
    }

    #[test]
    fn baernstein_examples() {
        let d = half_plane();
        for r in [2.0, 10.0] {
            let rep = baernstein_identity(&d, r).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert_relative_eq!(rep.lhs, half_plane_tail_integral(r), max_relative = 1e-8);
        }
        let far = baernstein_identity(&d, 1e8).unwrap();
        assert!(far.pass && far.lhs < 1e-7 && far.rhs < 1e-7);
        assert!(baernstein_identity(&d, 0.5).is_err());
        let ext = DomainSpec::disk_exterior(1.0, PlanePoint::real(3.0)).unwrap();
        assert!(matches!(
            baernstein_identity(&ext, 4.0),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn circle_integral_of_half_plane_green_closed_form() {
        // for a = 1 and r > 1: ∫ g dθ = 2π ∫_r^∞ ω dt/t with ω = (2/π) atan(1/t)
        let d = half_plane();
        let o = OracleDomain::new(&d).unwrap();
        for r in [1.5, 4.0, 300.0] {
            assert_relative_eq!(
                circle_integral(&o, r, 1.0).unwrap(),
                TAU * half_plane_tail_integral(r),
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn fubini_examples() {
        let d = half_plane();
        let rep = fubini_identity(&d, 0.5, 1e4).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(matches!(
            fubini_identity(&d, 2.0, 1e4),
            Err(Error::DivergentCase { .. })
        ));
        let empty = SyntheticOracle::empty_tail(Complex64::new(1.0, 0.0));
        let rep = fubini_identity_with(&empty, 0.5, 1e4).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0));
        assert!(rep.pass);
    }

    #[test]
    fn fubini_on_a_bounded_disk() {
        let d = DomainSpec::disk(2.0, PlanePoint::new(0.5, 0.3).unwrap()).unwrap();
        let rep = fubini_identity(&d, 3.0, 1e4).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.lhs > 0.0);
    }

    #[test]
    fn jensen_examples() {
        let d = half_plane();
        for alpha in [0.0, 1.0] {
            let rep = jensen_check(&d, 2.0, alpha).unwrap();
            assert!(rep.pass && rep.lhs <= rep.rhs, "{rep:?}");
        }
        let flat = SyntheticOracle::constant_green(Complex64::new(1.0, 0.0), 0.7);
        let rep = jensen_check_with(&flat, 2.0, 1.0).unwrap();
        assert_relative_eq!(rep.lhs, rep.rhs, max_relative = 1e-12);
        assert!(rep.pass);
        assert!(jensen_check(&d, 2.0, -1.0).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        let d = half_plane();
        for r in [5.0, 100.0] {
            let rep = tail_lower_bound(&d, r).unwrap();
            assert!(rep.pass && rep.lhs >= rep.rhs, "{rep:?}");
        }
        let disk = DomainSpec::disk(1.0, PlanePoint::real(0.0)).unwrap();
        let rep = tail_lower_bound(&disk, 5.0).unwrap();
        assert_eq!(rep.rhs, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn inequality_reports_flag_violations() {
        let rep = IdentityReport::inequality("x", Relation::AtMost, 2.0, 1.0);
        assert!(!rep.pass && rep.relative_error < 0.0);
        let rep = IdentityReport::inequality("x", Relation::AtLeast, 2.0, 1.0);
        assert!(rep.pass);
        let rep = IdentityReport::equality("x", 1.0, 1.0005, 1e-3);
        assert!(rep.pass);
        assert_eq!(rep.pass, rep.relative_error <= rep.tolerance);
    }

    #[test]
    fn suite_passes() {
        let reports = verification_suite().unwrap();
        for rep in &reports {
            assert!(rep.pass, "{rep:?}");
        }
        assert!(reports.len() > 10 * 7);
    }

    #[test]
    fn crossings_of_shifted_sector() {
        let d = DomainSpec::sector(PI / 2.0, PlanePoint::real(1.0))
            .unwrap()
            .affine_image(PlanePoint::real(1.0), PlanePoint::new(0.5, -0.25).unwrap())
            .unwrap();
        let o = OracleDomain::new(&d).unwrap();
        let c = o.crossings(3.0);
        assert_eq!(c.len(), 2);
        for t in c {
            let w = Complex64::from_polar(3.0, t);
            assert!(d.distance_c(w) < 1e-12 || !d.contains_c(w));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn baernstein_on_sectors(opening in 0.3f64..6.2, r in 1.2f64..200.0, y in -0.3f64..0.3) {
            let a = PlanePoint::new(1.0, y * (opening / 2.0).min(1.2).tan().min(1.0)).unwrap();
            let d = DomainSpec::sector(opening, a).unwrap();
            prop_assume!(r > a.norm() * 1.01);
            let rep = baernstein_identity(&d, r).unwrap();
            prop_assert!(rep.pass, "{:?}", rep);
        }
    }
}
