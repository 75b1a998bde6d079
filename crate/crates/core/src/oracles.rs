//! Closed-form harmonic measures and Green's functions.
//!
//! All formulas are evaluated in the canonical coordinates of the shape. The
//! tail set `E_r` of the framed domain pulls back to the part of the canonical
//! boundary lying outside the disk `|ζ - c| ≤ ρ` with `c = -shift/scale` and
//! `ρ = r/|scale|`.
//!
//! * Half-plane: the boundary is the imaginary axis; the harmonic measure of
//!   an interval seen from `x + iy` is the angle it subtends divided by `π`.
//! * Sector of opening `θ`: the power map `ζ ↦ ζ^{π/θ}` straightens it to the
//!   half-plane, each boundary ray going to one half of the imaginary axis.
//! * Disk: a Möbius automorphism moves the basepoint to the centre, where
//!   harmonic measure is normalised arc length.
//! * Disk exterior: the reflection `ζ ↦ R²/ζ̄` fixes the circle and maps the
//!   exterior onto the disk.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, PlanePoint, Shape};

/// Green's function value, zero off the domain.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GreenValue {
    pub value: f64,
}

/// Large-`r` behaviour of `ω(a, E_r)` on an oracle domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDecay {
    /// `ω(a, E_r) ~ C r^{-exponent}`
    PowerLaw { exponent: f64 },
    /// `ω(a, E_r) = 0` for `r ≥ beyond`
    Vanishing { beyond: f64 },
}

/// `ω_D(a, E_r)` in closed form.
pub fn exact_hm(d: &DomainSpec, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidConfig(format!("tail radius {r} must be ≥ 0")));
    }
    let frame = d.frame();
    let centre = -frame.shift / frame.scale;
    let rho = r / frame.scale.norm();
    let a = d.canonical_basepoint();
    let omega = match *d.shape() {
        Shape::HalfPlane => {
            let excluded = axis_segment(centre, rho);
            line_tail_measure(a, excluded.into_iter().collect())
        }
        Shape::Sector { opening } => {
            let k = PI / opening;
            let w = power(a, k);
            let half = 0.5 * opening;
            let mut excluded = Vec::with_capacity(2);
            if let Some((s1, s2)) = ray_segment(centre, rho, half) {
                excluded.push((s1.powf(k), s2.powf(k)));
            }
            if let Some((s1, s2)) = ray_segment(centre, rho, -half) {
                excluded.push((-s2.powf(k), -s1.powf(k)));
            }
            line_tail_measure(w, excluded)
        }
        Shape::Disk { radius } => circle_tail_measure(a / radius, centre / radius, rho / radius),
        Shape::DiskExterior { radius } => {
            let reflected = radius / a.conj();
            circle_tail_measure(reflected, centre / radius, rho / radius)
        }
        Shape::Generic(_) => return Err(Error::UnsupportedShape("generic domains")),
    };
    Ok(omega.clamp(0.0, 1.0))
}

/// `g_D(a, w)` with pole at the basepoint of `d`; zero for `w ∉ D`.
pub fn exact_green(d: &DomainSpec, w: PlanePoint) -> Result<GreenValue> {
    let kernel = green_kernel(d)?;
    Ok(GreenValue {
        value: kernel(w.into()),
    })
}

/// Green's function of `d` with pole at its basepoint as a reusable closure.
///
/// Supported for the half-plane, sectors and disks (in any affine frame).
pub fn green_kernel(d: &DomainSpec) -> Result<impl Fn(Complex64) -> f64 + Send + Sync + '_> {
    match d.shape() {
        Shape::HalfPlane | Shape::Sector { .. } | Shape::Disk { .. } => {}
        Shape::DiskExterior { .. } => {
            return Err(Error::UnsupportedShape("the non-regular disk exterior"))
        }
        Shape::Generic(_) => return Err(Error::UnsupportedShape("generic domains")),
    }
    let a = d.canonical_basepoint();
    Ok(move |w: Complex64| {
        if !d.contains_c(w) {
            return 0.0;
        }
        let zeta = d.frame().invert(w);
        let g = match *d.shape() {
            Shape::HalfPlane => half_plane_green(a, zeta),
            Shape::Sector { opening } => {
                let k = PI / opening;
                half_plane_green(power(a, k), power(zeta, k))
            }
            Shape::Disk { radius } => {
                // |R² - āw|² - R²|w - a|² = (R² - |a|²)(R² - |w|²)
                let r2 = radius * radius;
                let num = (r2 - a.norm_sqr()) * (r2 - zeta.norm_sqr());
                0.5 * (num / (r2 * (zeta - a).norm_sqr())).ln_1p()
            }
            _ => unreachable!(),
        };
        g.max(0.0)
    })
}

/// Tail behaviour used for extrapolating `∫^∞` integrals.
pub fn tail_decay(d: &DomainSpec) -> Result<TailDecay> {
    let frame = d.frame();
    match *d.shape() {
        Shape::HalfPlane => Ok(TailDecay::PowerLaw { exponent: 1.0 }),
        Shape::Sector { opening } => Ok(TailDecay::PowerLaw {
            exponent: PI / opening,
        }),
        Shape::Disk { radius } | Shape::DiskExterior { radius } => Ok(TailDecay::Vanishing {
            beyond: frame.shift.norm() + frame.scale.norm() * radius,
        }),
        Shape::Generic(_) => Err(Error::UnsupportedShape("generic domains")),
    }
}

fn half_plane_green(a: Complex64, w: Complex64) -> f64 {
    // |w + ā|² - |w - a|² = 4 Re w Re a
    0.5 * (4.0 * w.re * a.re / (w - a).norm_sqr()).ln_1p()
}

/// Principal power, `|ζ|^k e^{ik arg ζ}`.
pub(crate) fn power(zeta: Complex64, k: f64) -> Complex64 {
    Complex64::from_polar(zeta.norm().powf(k), k * zeta.im.atan2(zeta.re))
}

/// Part `[t1, t2]` of the imaginary axis inside the closed disk `|ζ - c| ≤ ρ`.
fn axis_segment(c: Complex64, rho: f64) -> Option<(f64, f64)> {
    let h2 = rho * rho - c.re * c.re;
    if h2 < 0.0 {
        return None;
    }
    let h = h2.sqrt();
    Some((c.im - h, c.im + h))
}

/// Parameter range `[s1, s2]` (`s ≥ 0`) of the ray `s e^{iψ}` inside `|ζ - c| ≤ ρ`.
fn ray_segment(c: Complex64, rho: f64, psi: f64) -> Option<(f64, f64)> {
    let b = (c * Complex64::from_polar(1.0, -psi)).re;
    let disc = b * b - c.norm_sqr() + rho * rho;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let s2 = b + root;
    if s2 <= 0.0 {
        return None;
    }
    Some(((b - root).max(0.0), s2))
}

/// Harmonic measure, seen from `w` in the right half-plane, of the imaginary
/// axis with the given segments removed.
fn line_tail_measure(w: Complex64, mut excluded: Vec<(f64, f64)>) -> f64 {
    excluded.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(excluded.len());
    for (lo, hi) in excluded {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let mut total = 0.0;
    let mut lo = f64::NEG_INFINITY;
    for (a, b) in merged {
        total += axis_interval_measure(w, lo, a);
        lo = b;
    }
    total + axis_interval_measure(w, lo, f64::INFINITY)
}

/// Harmonic measure of `{it : t1 < t < t2}` from `w = x + iy`, `x > 0`.
fn axis_interval_measure(w: Complex64, t1: f64, t2: f64) -> f64 {
    let (x, y) = (w.re, w.im);
    if t2 <= t1 {
        return 0.0;
    }
    match (t1.is_finite(), t2.is_finite()) {
        (false, false) => 1.0,
        // complementary angles written with atan2 to avoid cancellation
        (true, false) => x.atan2(t1 - y) / PI,
        (false, true) => x.atan2(y - t2) / PI,
        (true, true) => ((t2 - y).atan2(x) - (t1 - y).atan2(x)) / PI,
    }
}

/// Harmonic measure, from `u` in the unit disk, of the part of the unit circle
/// outside the closed disk `|ζ - c| ≤ ρ`.
fn circle_tail_measure(u: Complex64, c: Complex64, rho: f64) -> f64 {
    let m = c.norm();
    if m == 0.0 {
        return if rho < 1.0 { 1.0 } else { 0.0 };
    }
    let kappa = (1.0 + m * m - rho * rho) / (2.0 * m);
    if kappa >= 1.0 {
        return 1.0;
    }
    if kappa <= -1.0 {
        return 0.0;
    }
    let beta = kappa.acos();
    let phase = c.im.atan2(c.re);
    arc_measure(u, phase + beta, phase + TAU - beta)
}

/// Harmonic measure of the counter-clockwise arc from `e^{iφ1}` to `e^{iφ2}`.
fn arc_measure(u: Complex64, phi1: f64, phi2: f64) -> f64 {
    let mobius = |phi: f64| {
        let e = Complex64::from_polar(1.0, phi);
        (e - u) / (Complex64::new(1.0, 0.0) - u.conj() * e)
    };
    let (m1, m2) = (mobius(phi1), mobius(phi2));
    let sweep = (m2.im.atan2(m2.re) - m1.im.atan2(m1.re)).rem_euclid(TAU);
    sweep / TAU
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn p(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(re, im).unwrap()
    }

    /// Independent check: Poisson-kernel quadrature on the boundary.
    fn half_plane_poisson_tail(x: f64, y: f64, keep: impl Fn(f64) -> bool) -> f64 {
        // substitute t = y + x tan(φ), φ ∈ (-π/2, π/2): density becomes dφ/π
        let n = 400_000;
        let h = PI / n as f64;
        (0..n)
            .map(|i| -FRAC_PI_2 + (i as f64 + 0.5) * h)
            .filter(|phi| keep(y + x * phi.tan()))
            .count() as f64
            * h
            / PI
    }

    #[test]
    fn half_plane_examples() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        assert_relative_eq!(exact_hm(&h, 1.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            exact_hm(&h, 10.0).unwrap(),
            1.0 - 2.0 / PI * 10f64.atan(),
            max_relative = 1e-12
        );
        assert!((exact_hm(&h, 10.0).unwrap() - 0.063451).abs() < 5e-7);
        assert_eq!(exact_hm(&h, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn sector_examples() {
        let s = DomainSpec::sector(FRAC_PI_2, p(1.0, 0.0)).unwrap();
        assert!((exact_hm(&s, 10.0).unwrap() - 0.006366).abs() < 5e-7);
        assert_eq!(exact_hm(&s, 0.0).unwrap(), 1.0);
        let slit = DomainSpec::slit_plane(p(1.0, 0.0)).unwrap();
        assert_relative_eq!(
            exact_hm(&slit, 16.0).unwrap(),
            1.0 - 2.0 / PI * 4f64.atan(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn disk_examples() {
        let e = DomainSpec::disk_exterior(1.0, p(2.0, 0.0)).unwrap();
        assert_eq!(exact_hm(&e, 2.0).unwrap(), 0.0);
        assert_eq!(exact_hm(&e, 0.5).unwrap(), 1.0);
        let d = DomainSpec::disk(1.0, p(0.3, 0.1)).unwrap();
        assert_eq!(exact_hm(&d, 1.5).unwrap(), 0.0);
        assert_eq!(exact_hm(&d, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn off_centre_half_plane_matches_poisson_quadrature() {
        // half-plane translated and rotated: Re((z - 3i) e^{-iπ/6}) > 0
        let base = DomainSpec::half_plane(p(1.5, -0.7)).unwrap();
        let rot = Complex64::from_polar(1.0, PI / 6.0);
        let d = base.affine_image(p(rot.re, rot.im), p(0.0, 3.0)).unwrap();
        for r in [0.5, 2.0, 3.5, 7.0, 40.0] {
            let expected = half_plane_poisson_tail(1.5, -0.7, |t| {
                (rot * Complex64::new(0.0, t) + Complex64::new(0.0, 3.0)).norm() > r
            });
            assert!(
                (exact_hm(&d, r).unwrap() - expected).abs() < 2e-5,
                "r = {r}"
            );
        }
    }

    #[test]
    fn shifted_sector_matches_poisson_quadrature() {
        // sector of opening 2π/3 shifted by 2 - i; pulled back by ζ^{3/2}
        let opening = 2.0 * PI / 3.0;
        let shift = Complex64::new(2.0, -1.0);
        let base = DomainSpec::sector(opening, p(1.0, 0.4)).unwrap();
        let d = base
            .affine_image(p(1.0, 0.0), p(shift.re, shift.im))
            .unwrap();
        let k = PI / opening;
        let w = power(Complex64::new(1.0, 0.4), k);
        for r in [1.0, 3.0, 9.0, 30.0] {
            let expected = half_plane_poisson_tail(w.re, w.im, |t| {
                // preimage on the boundary ray of the point it on the axis
                let s = t.abs().powf(1.0 / k);
                let ray = if t > 0.0 {
                    0.5 * opening
                } else {
                    -0.5 * opening
                };
                (Complex64::from_polar(s, ray) + shift).norm() > r
            });
            assert!(
                (exact_hm(&d, r).unwrap() - expected).abs() < 2e-5,
                "r = {r}"
            );
        }
    }

    #[test]
    fn off_centre_disk_matches_poisson_quadrature() {
        let d = DomainSpec::disk(1.0, p(0.2, 0.5))
            .unwrap()
            .affine_image(p(2.0, 0.0), p(1.0, 1.0))
            .unwrap();
        let a = Complex64::new(0.2, 0.5);
        let n = 200_000;
        for r in [1.0, 2.0, 3.0, 3.5] {
            let sum: f64 = (0..n)
                .map(|i| {
                    let phi = (i as f64 + 0.5) * TAU / n as f64;
                    let e = Complex64::from_polar(1.0, phi);
                    let kernel = (1.0 - a.norm_sqr()) / (e - a).norm_sqr();
                    let image = 2.0 * e + Complex64::new(1.0, 1.0);
                    if image.norm() > r {
                        kernel
                    } else {
                        0.0
                    }
                })
                .sum();
            let expected = sum / n as f64;
            assert!(
                (exact_hm(&d, r).unwrap() - expected).abs() < 1e-4,
                "r = {r}"
            );
        }
    }

    #[test]
    fn exterior_matches_reflected_poisson_quadrature() {
        let d = DomainSpec::disk_exterior(1.0, p(2.0, 1.0))
            .unwrap()
            .affine_image(p(1.0, 0.0), p(0.5, 0.0))
            .unwrap();
        let a = Complex64::new(2.0, 1.0);
        let n = 200_000;
        for r in [0.8, 1.2, 1.4] {
            let sum: f64 = (0..n)
                .map(|i| {
                    let phi = (i as f64 + 0.5) * TAU / n as f64;
                    let e = Complex64::from_polar(1.0, phi);
                    // exterior Poisson kernel (|a|² - 1)/|e - a|²
                    let kernel = (a.norm_sqr() - 1.0) / (e - a).norm_sqr();
                    if (e + 0.5).norm() > r {
                        kernel
                    } else {
                        0.0
                    }
                })
                .sum();
            assert!(
                (exact_hm(&d, r).unwrap() - sum / n as f64).abs() < 1e-4,
                "r = {r}"
            );
        }
    }

    #[test]
    fn green_examples() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        assert_relative_eq!(
            exact_green(&h, p(2.0, 0.0)).unwrap().value,
            3f64.ln(),
            max_relative = 1e-14
        );
        assert_eq!(exact_green(&h, p(0.0, 5.0)).unwrap().value, 0.0);
        assert_eq!(exact_green(&h, p(-1.0, 0.0)).unwrap().value, 0.0);
        assert_eq!(exact_green(&h, p(1.0, 0.0)).unwrap().value, f64::INFINITY);

        let d = DomainSpec::disk(2.0, p(0.0, 0.0)).unwrap();
        assert_relative_eq!(
            exact_green(&d, p(1.0, 0.0)).unwrap().value,
            2f64.ln(),
            max_relative = 1e-14
        );
        let e = DomainSpec::disk_exterior(1.0, p(2.0, 0.0)).unwrap();
        assert!(matches!(
            exact_green(&e, p(3.0, 0.0)),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn green_is_symmetric_and_conformally_invariant() {
        // half-plane symmetry g(a, w) = g(w, a)
        let a = p(1.3, 0.4);
        let w = p(0.2, -2.0);
        let ga = exact_green(&DomainSpec::half_plane(a).unwrap(), w)
            .unwrap()
            .value;
        let gw = exact_green(&DomainSpec::half_plane(w).unwrap(), a)
            .unwrap()
            .value;
        assert_relative_eq!(ga, gw, max_relative = 1e-13);

        // affine invariance
        let d = DomainSpec::disk(1.0, p(0.1, 0.2)).unwrap();
        let img = d.affine_image(p(0.0, 3.0), p(-1.0, 2.0)).unwrap();
        let z = Complex64::new(-0.4, 0.3);
        let wz = Complex64::new(0.0, 3.0) * z + Complex64::new(-1.0, 2.0);
        assert_relative_eq!(
            exact_green(&d, z.try_into().unwrap()).unwrap().value,
            exact_green(&img, wz.try_into().unwrap()).unwrap().value,
            max_relative = 1e-12
        );
    }

    #[test]
    fn monotone_and_bounded() {
        let domains = [
            DomainSpec::half_plane(p(1.0, 0.3)).unwrap(),
            DomainSpec::sector(1.0, p(2.0, 0.1)).unwrap(),
            DomainSpec::slit_plane(p(-1.0, 1.0)).unwrap(),
            DomainSpec::disk(3.0, p(1.0, 0.0)).unwrap(),
            DomainSpec::disk_exterior(1.0, p(0.0, 2.0))
                .unwrap()
                .affine_image(p(1.0, 0.0), p(0.5, 0.0))
                .unwrap(),
        ];
        for d in &domains {
            let mut prev = 1.0;
            for i in 0..400 {
                let r = 0.05 * i as f64;
                let w = exact_hm(d, r).unwrap();
                assert!((0.0..=1.0).contains(&w));
                assert!(w <= prev + 1e-12, "{:?} r = {r}", d.shape());
                prev = w;
            }
        }
    }

    #[test]
    fn green_decays_at_infinity() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let w = Complex64::from_polar(10f64.powi(k), 0.3);
            let g = exact_green(&h, w.try_into().unwrap()).unwrap().value;
            assert!(g >= 0.0 && g < prev);
            prev = g;
        }
        assert!(prev < 1e-10);
    }
}
