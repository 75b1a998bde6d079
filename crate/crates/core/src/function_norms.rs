//! Integral means, weighted area integrals and their truncation profiles for
//! a small catalog of holomorphic maps of the unit disk.
//!
//! All integrals are evaluated in log space so that the exponential-type map
//! `R e^{(1+z)/(1-z)}` can be followed far past the range of `f64`.

use std::cell::Cell;
use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, PlanePoint};
use crate::oracles::{green_kernel, power};
use crate::quadrature::{
    breakpoints, geometric_points, integrate, integrate_ln, LogQuadrature, Tolerance,
};

/// Unbounded when the last refinement multiplies the integral by more than this.
pub const GROWTH_FACTOR: f64 = 1.5;
/// Bounded when the last refinement changes the integral by less than this, relatively.
pub const STABLE_INCREMENT: f64 = 1e-3;
/// Half-width of the undecided band around 1 for the ratio of successive increments.
pub const RATIO_BAND: f64 = 0.05;

const HARDY_TOL: f64 = 1e-10;
const AREA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogFunction {
    /// `(1+z)/(1-z)`, onto the right half-plane.
    Cayley,
    /// `((1+z)/(1-z))^β`, onto the sector of opening `βπ` when `β ≤ 2`.
    SectorPower {
        beta: f64,
    },
    /// `R e^{(1+z)/(1-z)}`, into `{|w| > R}`.
    ExpCayley {
        scale: f64,
    },
    Identity,
}

/// `ln|1-z|` and `ln|1+z|` for `z = (1-eps) e^{iθ}`, free of cancellation
/// near `z = ±1`.
fn ln_one_minus_plus(eps: f64, theta: f64) -> (f64, f64) {
    let r = 1.0 - eps;
    let (s, c) = (0.5 * theta).sin_cos();
    (
        0.5 * (eps * eps + 4.0 * r * s * s).ln(),
        0.5 * (eps * eps + 4.0 * r * c * c).ln(),
    )
}

fn polar(z: Complex64) -> (f64, f64) {
    (1.0 - z.norm(), z.im.atan2(z.re))
}

fn cayley(z: Complex64) -> Complex64 {
    (1.0 + z) / (1.0 - z)
}

impl CatalogFunction {
    pub fn sector_power(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta.is_finite() {
            Ok(Self::SectorPower { beta })
        } else {
            Err(Error::InvalidConfig(format!(
                "power β = {beta} must be positive"
            )))
        }
    }

    pub fn exp_cayley(scale: f64) -> Result<Self> {
        if scale > 0.0 && scale.is_finite() {
            Ok(Self::ExpCayley { scale })
        } else {
            Err(Error::InvalidConfig(format!(
                "scale R = {scale} must be positive"
            )))
        }
    }

    /// Parses `cayley`, `identity`, `sector_power:<β>` or `exp_cayley:<R>`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::InvalidConfig(format!("`{name}` needs a parameter")))?
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad parameter in `{text}`")))
        };
        match name {
            "cayley" => Ok(Self::Cayley),
            "identity" => Ok(Self::Identity),
            "sector_power" => Self::sector_power(num(arg)?),
            "exp_cayley" => Self::exp_cayley(num(arg)?),
            _ => Err(Error::InvalidConfig(format!(
                "unknown catalog function `{text}`"
            ))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Cayley => "cayley".into(),
            Self::Identity => "identity".into(),
            Self::SectorPower { beta } => format!("sector_power:{beta}"),
            Self::ExpCayley { scale } => format!("exp_cayley:{scale}"),
        }
    }

    fn check_in_disk(z: PlanePoint) -> Result<Complex64> {
        let z = z.to_complex();
        if z.norm() < 1.0 {
            Ok(z)
        } else {
            Err(Error::QueryOutsideDomain { re: z.re, im: z.im })
        }
    }

    fn value_c(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::Cayley => cayley(z),
            Self::SectorPower { beta } => power(cayley(z), beta),
            Self::ExpCayley { scale } => scale * cayley(z).exp(),
            Self::Identity => z,
        }
    }

    fn derivative_c(&self, z: Complex64) -> Complex64 {
        let dc = 2.0 / ((1.0 - z) * (1.0 - z));
        match *self {
            Self::Cayley => dc,
            Self::SectorPower { beta } => beta * power(cayley(z), beta - 1.0) * dc,
            Self::ExpCayley { .. } => self.value_c(z) * dc,
            Self::Identity => Complex64::new(1.0, 0.0),
        }
    }

    pub fn value(&self, z: PlanePoint) -> Result<PlanePoint> {
        let z = Self::check_in_disk(z)?;
        PlanePoint::try_from(self.value_c(z))
    }

    pub fn derivative(&self, z: PlanePoint) -> Result<PlanePoint> {
        let z = Self::check_in_disk(z)?;
        PlanePoint::try_from(self.derivative_c(z))
    }

    /// `ln|f(z)|`, finite even where `|f(z)|` overflows.
    pub fn ln_abs(&self, z: PlanePoint) -> Result<f64> {
        let (eps, theta) = polar(Self::check_in_disk(z)?);
        Ok(self.ln_abs_polar(eps, theta))
    }

    /// `ln|f'(z)|`.
    pub fn ln_abs_derivative(&self, z: PlanePoint) -> Result<f64> {
        let (eps, theta) = polar(Self::check_in_disk(z)?);
        Ok(self.ln_abs_derivative_polar(eps, theta))
    }

    fn ln_abs_polar(&self, eps: f64, theta: f64) -> f64 {
        match *self {
            Self::Identity => (-eps).ln_1p(),
            Self::ExpCayley { scale } => {
                let (lm, _) = ln_one_minus_plus(eps, theta);
                // Re (1+z)/(1-z) = (1 - |z|²)/|1-z|²
                scale.ln() + eps * (2.0 - eps) * (-2.0 * lm).exp()
            }
            Self::Cayley => {
                let (lm, lp) = ln_one_minus_plus(eps, theta);
                lp - lm
            }
            Self::SectorPower { beta } => {
                let (lm, lp) = ln_one_minus_plus(eps, theta);
                beta * (lp - lm)
            }
        }
    }

    fn ln_abs_derivative_polar(&self, eps: f64, theta: f64) -> f64 {
        let (lm, lp) = ln_one_minus_plus(eps, theta);
        let ln_dc = LN_2 - 2.0 * lm;
        match *self {
            Self::Identity => 0.0,
            Self::Cayley => ln_dc,
            Self::SectorPower { beta } => beta.ln() + (beta - 1.0) * (lp - lm) + ln_dc,
            Self::ExpCayley { .. } => self.ln_abs_polar(eps, theta) + ln_dc,
        }
    }

    /// Image domain with basepoint `f(0)` when it is one the oracles know.
    pub fn image_domain(&self) -> Option<DomainSpec> {
        match *self {
            Self::Cayley => DomainSpec::half_plane(PlanePoint::real(1.0)).ok(),
            Self::SectorPower { beta } if beta <= 2.0 => {
                DomainSpec::sector(beta * PI, PlanePoint::real(1.0)).ok()
            }
            _ => None,
        }
    }

    fn vanishes_somewhere(&self) -> bool {
        matches!(self, Self::Identity)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "exponent p = {p} must be positive"
        )))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "weight α = {alpha} must exceed -1"
        )))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "truncation δ = {delta} must lie in (0, 1)"
        )))
    }
}

fn failure(q: LogQuadrature) -> Error {
    Error::QuadratureFailure {
        value: q.ln_value.exp(),
        error: q.relative_error * q.ln_value.exp(),
    }
}

/// `ln ∫_0^{2π} exp(ln_g((1-eps) e^{iθ})) dθ` for integrands symmetric under
/// conjugation, which may peak at `θ = 0` and `θ = π` on scale `eps`.
fn ln_circle(ln_g: impl Fn(f64) -> f64, eps: f64, rel_tol: f64) -> LogQuadrature {
    let smallest = 0.25 * eps;
    let pts = breakpoints(
        0.0,
        PI,
        geometric_points(0.0, PI, 0.0, smallest)
            .into_iter()
            .chain(geometric_points(0.0, PI, PI, smallest)),
    );
    let mut q = integrate_ln(ln_g, &pts, Tolerance::relative(rel_tol));
    q.ln_value += LN_2;
    q
}

fn ln_hardy_mean_eps(f: &CatalogFunction, p: f64, eps: f64, rel_tol: f64) -> LogQuadrature {
    ln_circle(|t| p * f.ln_abs_polar(eps, t), eps, rel_tol)
}

/// `ln ∫_0^{2π} |f(re^{iθ})|^p dθ`.
pub fn ln_hardy_mean(f: &CatalogFunction, p: f64, r: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidConfig(format!(
            "radius r = {r} must lie in [0, 1)"
        )));
    }
    let q = ln_hardy_mean_eps(f, p, 1.0 - r, HARDY_TOL);
    if q.converged {
        Ok(q.ln_value)
    } else {
        Err(failure(q))
    }
}

/// `∫_0^{2π} |f(re^{iθ})|^p dθ`; `+∞` once it leaves `f64` range.
///
/// ```
/// use hardy_number::function_norms::{hardy_mean, CatalogFunction};
/// let m = hardy_mean(&CatalogFunction::Cayley, 2.0, 0.0).unwrap();
/// assert!((m - 2.0 * std::f64::consts::PI).abs() < 1e-12);
/// ```
pub fn hardy_mean(f: &CatalogFunction, p: f64, r: f64) -> Result<f64> {
    ln_hardy_mean(f, p, r).map(f64::exp)
}

/// `ln ∫_{|z| ≤ 1-δ} w(|z|) exp(ln_g(z)) dA`, with the radial factor given
/// as `ln_w(eps)` for `|z| = 1 - eps`.
fn ln_area(
    delta: f64,
    ln_w: impl Fn(f64) -> f64 + Sync,
    ln_g: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<f64> {
    // |z| = 1 - e^{-u}, dA = |z| d|z| dθ, d|z| = e^{-u} du
    let u_max = -delta.ln();
    let inner_failure: Cell<Option<Error>> = Cell::new(None);
    let radial = |u: f64| {
        let eps = (-u).exp();
        let rho = -(-u).exp_m1();
        let inner = ln_circle(|t| ln_g(eps, t), eps, 1e-2 * AREA_TOL);
        if !inner.converged {
            inner_failure.set(Some(failure(inner)));
        }
        rho.ln() + ln_w(eps) - u + inner.ln_value
    };
    let pts = breakpoints(
        0.0,
        u_max,
        (1..u_max.ceil() as usize)
            .map(|k| k as f64)
            .chain(geometric_points(0.0, u_max, u_max, 0.125 * delta)),
    );
    let q = integrate_ln(radial, &pts, Tolerance::relative(AREA_TOL));
    if let Some(e) = inner_failure.take() {
        return Err(e);
    }
    if q.converged {
        Ok(q.ln_value)
    } else {
        Err(failure(q))
    }
}

/// `ln ∫_{|z| ≤ 1-δ} |f|^p (1-|z|²)^α dA`.
pub fn ln_bergman_integral(f: &CatalogFunction, p: f64, alpha: f64, delta: f64) -> Result<f64> {
    check_p(p)?;
    check_alpha(alpha)?;
    check_delta(delta)?;
    ln_area(
        delta,
        |eps| alpha * (eps.ln() + (2.0 - eps).ln()),
        |eps, t| p * f.ln_abs_polar(eps, t),
    )
}

/// `∫_{|z| ≤ 1-δ} |f|^p (1-|z|²)^α dA`.
///
/// ```
/// use hardy_number::function_norms::{bergman_integral, CatalogFunction};
/// let v = bergman_integral(&CatalogFunction::Identity, 2.0, 0.0, 1e-9).unwrap();
/// assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
/// ```
pub fn bergman_integral(f: &CatalogFunction, p: f64, alpha: f64, delta: f64) -> Result<f64> {
    ln_bergman_integral(f, p, alpha, delta).map(f64::exp)
}

/// `ln ∫_{|z| ≤ 1-δ} |f|^{p-2} |f'|² (log 1/|z|)^γ dA` with `γ = 1`, or
/// `γ = α + 2` when a weight is given.
pub fn ln_yamashita_integral(
    f: &CatalogFunction,
    p: f64,
    delta: f64,
    alpha: Option<f64>,
) -> Result<f64> {
    check_p(p)?;
    check_delta(delta)?;
    if let Some(a) = alpha {
        check_alpha(a)?;
    }
    if p < 2.0 && f.vanishes_somewhere() {
        return Err(Error::ZeroOnDisk { p });
    }
    let gamma = alpha.map_or(1.0, |a| a + 2.0);
    ln_area(
        delta,
        |eps| gamma * (-(-eps).ln_1p()).ln(),
        |eps, t| (p - 2.0) * f.ln_abs_polar(eps, t) + 2.0 * f.ln_abs_derivative_polar(eps, t),
    )
}

pub fn yamashita_integral(
    f: &CatalogFunction,
    p: f64,
    delta: f64,
    alpha: Option<f64>,
) -> Result<f64> {
    ln_yamashita_integral(f, p, delta, alpha).map(f64::exp)
}

/// Both sides of the change of variables `w = f(z)` in the unweighted area
/// integral over `|z| ≤ 1-δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChangeOfVariables {
    /// Area integral in the disk.
    pub lhs: f64,
    /// `∫ |w|^{p-2} g(f(0), w) dA(w)` over the image region.
    pub rhs: f64,
}

impl ChangeOfVariables {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

pub fn change_of_variable_check(
    f: &CatalogFunction,
    p: f64,
    delta: f64,
) -> Result<ChangeOfVariables> {
    let image = f.image_domain().ok_or(Error::UnsupportedImage(
        "no closed-form Green's function for the image",
    ))?;
    let lhs = yamashita_integral(f, p, delta, None)?;

    // f = C^β with C the Cayley map; work in the half-plane ζ = C(z), where
    // {|z| ≤ ρ} becomes the disk |ζ - c| ≤ R, and use polar coordinates
    // about the pole ζ = 1.
    let beta = match *f {
        CatalogFunction::SectorPower { beta } => beta,
        _ => 1.0,
    };
    let rho = 1.0 - delta;
    let c = (1.0 + rho * rho) / (1.0 - rho * rho);
    let radius = 2.0 * rho / (1.0 - rho * rho);
    let d = 1.0 - c;
    let green = green_kernel(&image)?;
    let nearest = c - radius;

    let integrand = |zeta: Complex64| {
        let w = power(zeta, beta);
        let m = zeta.norm();
        beta * beta * m.powf(beta * (p - 2.0) + 2.0 * (beta - 1.0)) * green(w)
    };
    let angular = |phi: f64| {
        let (sin, cos) = phi.sin_cos();
        let s_max = -d * cos + (radius * radius - d * d * sin * sin).sqrt();
        let dir = Complex64::new(cos, sin);
        let edge = (1.0 + s_max * dir).norm();
        let pts = breakpoints(
            0.0,
            s_max,
            geometric_points(0.0, s_max, 0.0, 1e-9 * s_max)
                .into_iter()
                .chain(geometric_points(0.0, s_max, s_max, 0.25 * edge.min(1.0))),
        );
        integrate(
            |s| s * integrand(1.0 + s * dir),
            &pts,
            Tolerance::relative(1e-11),
        )
        .value
    };
    let pts = breakpoints(0.0, PI, geometric_points(0.0, PI, PI, 0.25 * nearest));
    let q = integrate(angular, &pts, Tolerance::relative(1e-9));
    if !q.converged {
        return Err(Error::QuadratureFailure {
            value: 2.0 * q.value,
            error: 2.0 * q.error,
        });
    }
    Ok(ChangeOfVariables {
        lhs,
        rhs: 2.0 * q.value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind {
    /// Parameter is the radius `r`.
    Hardy,
    /// Parameter is the truncation `δ`.
    Bergman { alpha: f64 },
    /// Parameter is the truncation `δ`.
    Yamashita { alpha: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormProfile {
    pub function: CatalogFunction,
    pub kind: NormKind,
    pub p: f64,
    /// Radii (Hardy) or truncations (area integrals), ordered so that the
    /// integral grows along the list.
    pub params: Vec<f64>,
    pub ln_values: Vec<f64>,
    /// Classification using the first `k + 1` entries.
    pub running: Vec<Growth>,
    pub classification: Growth,
}

impl NormProfile {
    pub fn values(&self) -> Vec<f64> {
        self.ln_values.iter().map(|l| l.exp()).collect()
    }

    /// `ratio` of the last two integrals.
    pub fn last_ratio(&self) -> f64 {
        let n = self.ln_values.len();
        (self.ln_values[n - 1] - self.ln_values[n - 2]).exp()
    }
}

/// Classifies a profile of integrals (as logarithms) taken along a
/// geometric refinement of the truncation.
pub fn classify_growth(ln_values: &[f64]) -> Growth {
    let n = ln_values.len();
    if n < 2 {
        return Growth::Inconclusive;
    }
    let step = ln_values[n - 1] - ln_values[n - 2];
    if step > GROWTH_FACTOR.ln() {
        return Growth::Unbounded;
    }
    if -(-step).exp_m1() < STABLE_INCREMENT {
        return Growth::Bounded;
    }
    if n >= 3 {
        let prev = ln_values[n - 2] - ln_values[n - 3];
        if prev <= 0.0 {
            return Growth::Inconclusive;
        }
        // ln of (I_n - I_{n-1}) / (I_{n-1} - I_{n-2})
        let ln_ratio =
            step.exp_m1().ln() + ln_values[n - 2] - prev.exp_m1().ln() - ln_values[n - 3];
        if ln_ratio > RATIO_BAND.ln_1p() {
            return Growth::Unbounded;
        }
        if ln_ratio < (-RATIO_BAND).ln_1p() {
            return Growth::Bounded;
        }
    }
    Growth::Inconclusive
}

fn build_profile(
    function: CatalogFunction,
    kind: NormKind,
    p: f64,
    params: &[f64],
    eval: impl Fn(f64) -> Result<f64> + Sync,
) -> Result<NormProfile> {
    if params.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: params.len(),
        });
    }
    let ln_values = params
        .par_iter()
        .map(|&x| eval(x))
        .collect::<Result<Vec<f64>>>()?;
    let running: Vec<Growth> = (1..=ln_values.len())
        .map(|k| classify_growth(&ln_values[..k]))
        .collect();
    Ok(NormProfile {
        function,
        kind,
        p,
        params: params.to_vec(),
        ln_values,
        classification: running[running.len() - 1],
        running,
    })
}

/// `10^{-1}, …, 10^{-levels}`.
pub fn truncation_ladder(levels: usize) -> Vec<f64> {
    (1..=levels as i32).map(|k| 10f64.powi(-k)).collect()
}

pub fn hardy_profile(f: &CatalogFunction, p: f64, radii: &[f64]) -> Result<NormProfile> {
    build_profile(*f, NormKind::Hardy, p, radii, |r| ln_hardy_mean(f, p, r))
}

pub fn bergman_profile(
    f: &CatalogFunction,
    p: f64,
    alpha: f64,
    deltas: &[f64],
) -> Result<NormProfile> {
    build_profile(*f, NormKind::Bergman { alpha }, p, deltas, |d| {
        ln_bergman_integral(f, p, alpha, d)
    })
}

pub fn yamashita_profile(
    f: &CatalogFunction,
    p: f64,
    alpha: Option<f64>,
    deltas: &[f64],
) -> Result<NormProfile> {
    build_profile(*f, NormKind::Yamashita { alpha }, p, deltas, |d| {
        ln_yamashita_integral(f, p, d, alpha)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbConfig {
    /// Truncation levels `10^{-1}, …, 10^{-levels}` per probe.
    pub levels: usize,
    /// Halvings of `(0, p_max]` per edge search.
    pub depth: usize,
    pub p_max: f64,
}

impl Default for HbConfig {
    fn default() -> Self {
        Self {
            levels: 6,
            depth: 8,
            p_max: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub p: f64,
    pub growth: Growth,
}

/// Location of the change from Bounded to Unbounded along `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub estimate: f64,
    /// Largest Bounded and smallest Unbounded probe.
    pub bracket: (f64, f64),
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HbEstimate {
    pub function: CatalogFunction,
    pub h_hat: f64,
    pub b_hat: f64,
    pub hardy: Transition,
    /// Transition in `p` at `α = 0`; `b_hat` is half its estimate.
    pub bergman: Transition,
}

fn locate_transition(p_max: f64, depth: usize, classify: impl Fn(f64) -> Growth) -> Transition {
    let mut probes: Vec<Probe> = Vec::new();
    let probe = |p: f64, probes: &mut Vec<Probe>| {
        if let Some(pr) = probes.iter().find(|pr| pr.p == p) {
            return pr.growth;
        }
        let growth = classify(p);
        probes.push(Probe { p, growth });
        growth
    };
    let top = probe(p_max, &mut probes);

    let (mut lo, mut hi) = (0.0, p_max);
    if top == Growth::Bounded {
        lo = p_max;
    } else {
        for _ in 0..depth {
            let mid = 0.5 * (lo + hi);
            if probe(mid, &mut probes) == Growth::Bounded {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let bounded_edge = lo;

    let mut unbounded_edge = p_max;
    if top == Growth::Unbounded {
        let (mut lo, mut hi) = (bounded_edge, p_max);
        for _ in 0..depth {
            let mid = 0.5 * (lo + hi);
            if probe(mid, &mut probes) == Growth::Unbounded {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        unbounded_edge = hi;
    }
    let estimate = if bounded_edge == 0.0 {
        0.0
    } else {
        0.5 * (bounded_edge + unbounded_edge)
    };
    Transition {
        estimate,
        bracket: (bounded_edge, unbounded_edge),
        probes,
    }
}

/// Locates `sup{p : f ∈ H^p}` and `sup{p/2 : f ∈ A^p}` by bisection on the
/// growth classification of truncation profiles.
pub fn empirical_hb(f: &CatalogFunction) -> HbEstimate {
    empirical_hb_with(f, HbConfig::default())
}

pub fn empirical_hb_with(f: &CatalogFunction, cfg: HbConfig) -> HbEstimate {
    let deltas = truncation_ladder(cfg.levels);
    let radii: Vec<f64> = deltas.iter().map(|d| 1.0 - d).collect();
    let hardy = locate_transition(cfg.p_max, cfg.depth, |p| {
        hardy_profile(f, p, &radii).map_or(Growth::Inconclusive, |pr| pr.classification)
    });
    let bergman = locate_transition(cfg.p_max, cfg.depth, |p| {
        bergman_profile(f, p, 0.0, &deltas).map_or(Growth::Inconclusive, |pr| pr.classification)
    });
    HbEstimate {
        function: *f,
        h_hat: hardy.estimate,
        b_hat: 0.5 * bergman.estimate,
        hardy,
        bergman,
    }
}
