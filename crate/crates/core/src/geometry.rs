//! Planar domains.
//!
//! Every built-in domain is a canonical shape placed in the plane by an
//! affine frame `z = scale * ζ + shift`. The canonical shapes are
//!
//! * the right half-plane `Re ζ > 0`,
//! * the sector `|arg ζ| < opening / 2` (opening `2π` is the plane slit along
//!   the negative real axis),
//! * the disk `|ζ| < R` and its exterior `|ζ| > R`.
//!
//! Keeping the frame separate means affine images of built-in shapes stay
//! built-in, so closed-form harmonic measures remain available after scaling,
//! rotation and translation.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub re: f64,
    pub im: f64,
}

impl PlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(Error::NonFinitePoint { re, im })
        }
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0).expect("finite real coordinate")
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(self) -> f64 {
        self.to_complex().norm()
    }
}

impl From<PlanePoint> for Complex64 {
    fn from(p: PlanePoint) -> Self {
        p.to_complex()
    }
}

impl TryFrom<Complex64> for PlanePoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

/// Complex affine map `ζ ↦ scale·ζ + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub scale: Complex64,
    pub shift: Complex64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        scale: Complex64::new(1.0, 0.0),
        shift: Complex64::new(0.0, 0.0),
    };

    pub fn new(scale: Complex64, shift: Complex64) -> Result<Self> {
        if scale.norm_sqr() == 0.0 {
            return Err(Error::ZeroScale);
        }
        if !(scale.is_finite() && shift.is_finite()) {
            return Err(Error::InvalidDomain(
                "non-finite affine coefficients".into(),
            ));
        }
        Ok(Self { scale, shift })
    }

    #[inline]
    pub fn apply(&self, zeta: Complex64) -> Complex64 {
        self.scale * zeta + self.shift
    }

    #[inline]
    pub fn invert(&self, z: Complex64) -> Complex64 {
        (z - self.shift) / self.scale
    }

    /// `outer ∘ self`
    pub fn then(&self, outer: &Affine) -> Affine {
        Affine {
            scale: outer.scale * self.scale,
            shift: outer.scale * self.shift + outer.shift,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

type Predicate = Arc<dyn Fn(Complex64) -> bool + Send + Sync>;
type DistanceFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;
type ProjectionFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A user-described domain: a membership predicate and a lower bound on the
/// distance to the boundary, plus the topological facts that cannot be read
/// off a black-box predicate.
#[derive(Clone)]
pub struct GenericDomain {
    pub label: String,
    contains: Predicate,
    distance: DistanceFn,
    projection: Option<ProjectionFn>,
    pub bounded: bool,
    pub simply_connected: bool,
    pub regular: bool,
}

impl GenericDomain {
    pub fn new(
        label: impl Into<String>,
        contains: impl Fn(Complex64) -> bool + Send + Sync + 'static,
        distance: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            contains: Arc::new(contains),
            distance: Arc::new(distance),
            projection: None,
            bounded: false,
            simply_connected: false,
            regular: true,
        }
    }

    /// Nearest-boundary projection. Without one, tail membership is decided
    /// on the absorbed walker position itself.
    pub fn with_projection(
        mut self,
        projection: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        self.projection = Some(Arc::new(projection));
        self
    }

    pub fn with_flags(mut self, bounded: bool, simply_connected: bool, regular: bool) -> Self {
        self.bounded = bounded;
        self.simply_connected = simply_connected;
        self.regular = regular;
        self
    }
}

impl fmt::Debug for GenericDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericDomain")
            .field("label", &self.label)
            .field("bounded", &self.bounded)
            .field("simply_connected", &self.simply_connected)
            .field("regular", &self.regular)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Shape {
    HalfPlane,
    Sector { opening: f64 },
    DiskExterior { radius: f64 },
    Disk { radius: f64 },
    Generic(GenericDomain),
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::HalfPlane => "half_plane",
            Shape::Sector { .. } => "sector",
            Shape::DiskExterior { .. } => "disk_exterior",
            Shape::Disk { .. } => "disk",
            Shape::Generic(_) => "generic",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Shape::Sector { opening } if !(opening > 0.0 && opening <= TAU) => Err(
                Error::InvalidDomain(format!("sector opening {opening} outside (0, 2π]")),
            ),
            Shape::Disk { radius } | Shape::DiskExterior { radius }
                if !(radius > 0.0 && radius.is_finite()) =>
            {
                Err(Error::InvalidDomain(format!(
                    "radius {radius} must be positive"
                )))
            }
            _ => Ok(()),
        }
    }

    fn contains_canonical(&self, zeta: Complex64) -> bool {
        match self {
            Shape::HalfPlane => zeta.re > 0.0,
            Shape::Sector { opening } => {
                zeta.norm_sqr() > 0.0 && zeta.im.atan2(zeta.re).abs() < 0.5 * opening
            }
            Shape::Disk { radius } => zeta.norm() < *radius,
            Shape::DiskExterior { radius } => zeta.norm() > *radius,
            Shape::Generic(g) => (g.contains)(zeta),
        }
    }

    /// Distance to the boundary in canonical coordinates, assuming `zeta` is
    /// inside.
    fn distance_canonical(&self, zeta: Complex64) -> f64 {
        match self {
            Shape::HalfPlane => zeta.re,
            Shape::Sector { opening } => {
                let half = 0.5 * opening;
                let arg = zeta.im.atan2(zeta.re);
                let modulus = zeta.norm();
                ray_distance(modulus, arg, half)
                    .0
                    .min(ray_distance(modulus, arg, -half).0)
            }
            Shape::Disk { radius } => radius - zeta.norm(),
            Shape::DiskExterior { radius } => zeta.norm() - radius,
            Shape::Generic(g) => (g.distance)(zeta),
        }
    }

    fn project_canonical(&self, zeta: Complex64) -> Complex64 {
        match self {
            Shape::HalfPlane => Complex64::new(0.0, zeta.im),
            Shape::Sector { opening } => {
                let half = 0.5 * opening;
                let arg = zeta.im.atan2(zeta.re);
                let modulus = zeta.norm();
                let (d_up, p_up) = ray_distance(modulus, arg, half);
                let (d_lo, p_lo) = ray_distance(modulus, arg, -half);
                if d_up <= d_lo {
                    p_up
                } else {
                    p_lo
                }
            }
            Shape::Disk { radius } | Shape::DiskExterior { radius } => {
                let m = zeta.norm();
                if m > 0.0 {
                    zeta * (*radius / m)
                } else {
                    Complex64::new(*radius, 0.0)
                }
            }
            Shape::Generic(g) => match &g.projection {
                Some(p) => p(zeta),
                None => zeta,
            },
        }
    }
}

/// Distance from the point `modulus·e^{i arg}` to the ray `{s e^{i angle}: s ≥ 0}`
/// together with the nearest point on the ray.
fn ray_distance(modulus: f64, arg: f64, angle: f64) -> (f64, Complex64) {
    let mut delta = (arg - angle).abs() % TAU;
    if delta > PI {
        delta = TAU - delta;
    }
    if delta < FRAC_PI_2 {
        (
            modulus * delta.sin(),
            Complex64::from_polar(modulus * delta.cos(), angle),
        )
    } else {
        (modulus, Complex64::new(0.0, 0.0))
    }
}

/// Tail radius `r` of the boundary set `E_r = ∂D ∩ {|z| > r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuery {
    pub r: f64,
}

impl TailQuery {
    /// `r = 0` is accepted and selects the whole boundary minus the origin.
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r >= 0.0 {
            Ok(Self { r })
        } else {
            Err(Error::InvalidConfig(format!(
                "tail radius {r} must be finite and ≥ 0"
            )))
        }
    }
}

/// A plane domain together with a basepoint inside it.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    shape: Shape,
    frame: Affine,
    basepoint: Complex64,
}

impl DomainSpec {
    pub fn new(shape: Shape, frame: Affine, basepoint: PlanePoint) -> Result<Self> {
        shape.validate()?;
        let spec = Self {
            shape,
            frame,
            basepoint: basepoint.into(),
        };
        if !spec.contains_c(spec.basepoint) {
            return Err(Error::BasepointOutsideDomain);
        }
        Ok(spec)
    }

    pub fn half_plane(basepoint: PlanePoint) -> Result<Self> {
        Self::new(Shape::HalfPlane, Affine::IDENTITY, basepoint)
    }

    pub fn sector(opening: f64, basepoint: PlanePoint) -> Result<Self> {
        Self::new(Shape::Sector { opening }, Affine::IDENTITY, basepoint)
    }

    /// The plane slit along the negative real axis.
    pub fn slit_plane(basepoint: PlanePoint) -> Result<Self> {
        Self::sector(TAU, basepoint)
    }

    pub fn disk(radius: f64, basepoint: PlanePoint) -> Result<Self> {
        Self::new(Shape::Disk { radius }, Affine::IDENTITY, basepoint)
    }

    pub fn disk_exterior(radius: f64, basepoint: PlanePoint) -> Result<Self> {
        Self::new(Shape::DiskExterior { radius }, Affine::IDENTITY, basepoint)
    }

    pub fn generic(domain: GenericDomain, basepoint: PlanePoint) -> Result<Self> {
        Self::new(Shape::Generic(domain), Affine::IDENTITY, basepoint)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn frame(&self) -> &Affine {
        &self.frame
    }

    pub fn basepoint(&self) -> PlanePoint {
        PlanePoint {
            re: self.basepoint.re,
            im: self.basepoint.im,
        }
    }

    pub fn basepoint_c(&self) -> Complex64 {
        self.basepoint
    }

    /// Basepoint in the canonical coordinates of the shape.
    pub fn canonical_basepoint(&self) -> Complex64 {
        self.frame.invert(self.basepoint)
    }

    pub fn is_regular(&self) -> bool {
        match &self.shape {
            Shape::DiskExterior { .. } => false,
            Shape::Generic(g) => g.regular,
            _ => true,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match &self.shape {
            Shape::Disk { .. } => true,
            Shape::Generic(g) => g.bounded,
            _ => false,
        }
    }

    pub fn is_simply_connected(&self) -> bool {
        match &self.shape {
            Shape::HalfPlane | Shape::Sector { .. } | Shape::Disk { .. } => true,
            Shape::DiskExterior { .. } => false,
            Shape::Generic(g) => g.simply_connected,
        }
    }

    pub fn contains(&self, z: PlanePoint) -> bool {
        self.contains_c(z.into())
    }

    #[inline]
    pub fn contains_c(&self, z: Complex64) -> bool {
        self.shape.contains_canonical(self.frame.invert(z))
    }

    /// Lower bound on `dist(z, ∂D)`, exact for the built-in shapes.
    pub fn boundary_distance(&self, z: PlanePoint) -> Result<f64> {
        let z = z.to_complex();
        if !self.contains_c(z) {
            return Err(Error::QueryOutsideDomain { re: z.re, im: z.im });
        }
        Ok(self.distance_c(z))
    }

    /// Unchecked variant of [`boundary_distance`](Self::boundary_distance).
    #[inline]
    pub fn distance_c(&self, z: Complex64) -> f64 {
        self.frame.scale.norm() * self.shape.distance_canonical(self.frame.invert(z))
    }

    /// Nearest boundary point of `z`.
    #[inline]
    pub fn project_c(&self, z: Complex64) -> Complex64 {
        self.frame
            .apply(self.shape.project_canonical(self.frame.invert(z)))
    }

    /// Whether a point in the absorption shell belongs to `E_r`; decided on
    /// its nearest boundary projection.
    pub fn in_tail(&self, z_boundary: PlanePoint, q: TailQuery) -> bool {
        self.project_c(z_boundary.into()).norm() > q.r
    }

    /// Spec of `φ(D)` for `φ(z) = a_coef·z + b_coef`, with basepoint `φ(a)`.
    pub fn affine_image(&self, a_coef: PlanePoint, b_coef: PlanePoint) -> Result<Self> {
        let outer = Affine::new(a_coef.into(), b_coef.into())?;
        Ok(Self {
            shape: self.shape.clone(),
            frame: self.frame.then(&outer),
            basepoint: outer.apply(self.basepoint),
        })
    }

    /// Same domain, different basepoint.
    pub fn with_basepoint(&self, basepoint: PlanePoint) -> Result<Self> {
        Self::new(self.shape.clone(), self.frame, basepoint)
    }

    /// Largest modulus of a boundary point, when the boundary is known to be
    /// bounded.
    pub fn boundary_extent(&self) -> Option<f64> {
        match self.shape {
            Shape::Disk { radius } | Shape::DiskExterior { radius } => {
                Some(self.frame.shift.norm() + self.frame.scale.norm() * radius)
            }
            _ => None,
        }
    }

    /// Default first radius of the decay grid: `2·max(1, |a|)`.
    pub fn default_grid_start(&self) -> f64 {
        2.0 * self.basepoint.norm().max(1.0)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: DomainSpecJson =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> Result<DomainSpecJson> {
        let (opening, radius) = match self.shape {
            Shape::HalfPlane => (None, None),
            Shape::Sector { opening } => (Some(opening), None),
            Shape::Disk { radius } | Shape::DiskExterior { radius } => (None, Some(radius)),
            Shape::Generic(_) => {
                return Err(Error::Json("generic domains have no JSON form".into()))
            }
        };
        let frame = (!self.frame.is_identity()).then_some(self.frame);
        Ok(DomainSpecJson {
            shape: self.shape.name().to_string(),
            opening,
            radius,
            basepoint: [self.basepoint.re, self.basepoint.im],
            regular: Some(self.is_regular()),
            scale: frame.map(|f| [f.scale.re, f.scale.im]),
            shift: frame.map(|f| [f.shift.re, f.shift.im]),
        })
    }
}

/// On-disk form of a [`DomainSpec`].
///
/// `regular` is derived from the shape; when present in input it must agree.
/// `scale` and `shift` describe the affine frame and default to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpecJson {
    pub shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub basepoint: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<[f64; 2]>,
}

impl TryFrom<DomainSpecJson> for DomainSpec {
    type Error = Error;

    fn try_from(raw: DomainSpecJson) -> Result<Self> {
        let need = |v: Option<f64>, field: &str| {
            v.ok_or_else(|| Error::Json(format!("shape {} requires \"{field}\"", raw.shape)))
        };
        let shape = match raw.shape.as_str() {
            "half_plane" => Shape::HalfPlane,
            "sector" => Shape::Sector {
                opening: need(raw.opening, "opening")?,
            },
            "disk" => Shape::Disk {
                radius: need(raw.radius, "radius")?,
            },
            "disk_exterior" => Shape::DiskExterior {
                radius: need(raw.radius, "radius")?,
            },
            other => return Err(Error::Json(format!("unknown shape \"{other}\""))),
        };
        let pair = |v: Option<[f64; 2]>, default: Complex64| {
            v.map_or(default, |[re, im]| Complex64::new(re, im))
        };
        let frame = Affine::new(
            pair(raw.scale, Complex64::new(1.0, 0.0)),
            pair(raw.shift, Complex64::new(0.0, 0.0)),
        )?;
        let basepoint = PlanePoint::new(raw.basepoint[0], raw.basepoint[1])?;
        let spec = DomainSpec::new(shape, frame, basepoint)?;
        if let Some(flag) = raw.regular {
            if flag != spec.is_regular() {
                return Err(Error::Json(format!(
                    "\"regular\": {flag} contradicts shape {}",
                    raw.shape
                )));
            }
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(re, im).unwrap()
    }

    #[test]
    fn contains_examples() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        assert!(h.contains(p(1.0, 0.0)));
        assert!(!h.contains(p(-1.0, 0.0)));
        let e = DomainSpec::disk_exterior(1.0, p(2.0, 0.0)).unwrap();
        assert!(e.contains(p(2.0, 0.0)));
        assert!(!e.contains(p(0.5, 0.0)));
    }

    #[test]
    fn distance_examples() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        assert_eq!(h.boundary_distance(p(1.0, 0.0)).unwrap(), 1.0);
        let s = DomainSpec::sector(FRAC_PI_2, p(1.0, 0.0)).unwrap();
        assert_relative_eq!(
            s.boundary_distance(p(2.0, 0.0)).unwrap(),
            std::f64::consts::SQRT_2,
            max_relative = 1e-14
        );
        let e = DomainSpec::disk_exterior(1.0, p(2.0, 0.0)).unwrap();
        assert_eq!(e.boundary_distance(p(3.0, 0.0)).unwrap(), 2.0);
        assert!(matches!(
            h.boundary_distance(p(-1.0, 0.0)),
            Err(Error::QueryOutsideDomain { .. })
        ));
    }

    #[test]
    fn slit_plane_distance() {
        let s = DomainSpec::slit_plane(p(1.0, 0.0)).unwrap();
        assert!(!s.contains(p(-3.0, 0.0)));
        assert!(s.contains(p(-3.0, 1e-9)));
        assert_relative_eq!(s.boundary_distance(p(-3.0, 0.5)).unwrap(), 0.5);
        assert_relative_eq!(s.boundary_distance(p(2.0, 0.0)).unwrap(), 2.0);
        let proj = s.project_c(Complex64::new(-3.0, -0.5));
        assert_relative_eq!(proj.re, -3.0, max_relative = 1e-12);
        assert!(proj.im.abs() < 1e-12);
    }

    #[test]
    fn tail_examples() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        let z = p(1e-7, 5.0);
        assert!(h.in_tail(z, TailQuery::new(3.0).unwrap()));
        assert!(!h.in_tail(z, TailQuery::new(10.0).unwrap()));
        let e = DomainSpec::disk_exterior(1.0, p(2.0, 0.0)).unwrap();
        for k in 0..64 {
            let hit = Complex64::from_polar(1.0 + 1e-7, k as f64 * TAU / 64.0);
            assert!(!e.in_tail(hit.try_into().unwrap(), TailQuery::new(2.0).unwrap()));
        }
    }

    #[test]
    fn affine_examples() {
        let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
        let same = h.affine_image(p(1.0, 0.0), p(0.0, 0.0)).unwrap();
        assert!(same.frame().is_identity());
        assert_eq!(same.basepoint(), h.basepoint());

        let doubled = h.affine_image(p(2.0, 0.0), p(0.0, 0.0)).unwrap();
        assert_eq!(doubled.basepoint(), p(2.0, 0.0));
        assert_eq!(doubled.boundary_distance(p(2.0, 0.0)).unwrap(), 2.0);
        assert_eq!(doubled.boundary_distance(p(3.0, 7.0)).unwrap(), 3.0);

        let d = DomainSpec::disk(1.0, p(0.0, 0.0)).unwrap();
        let moved = d.affine_image(p(1.0, 0.0), p(5.0, 0.0)).unwrap();
        assert!(moved.contains(p(5.5, 0.0)));
        assert!(!moved.contains(p(0.0, 0.0)));
        assert_relative_eq!(moved.boundary_distance(p(5.0, 0.0)).unwrap(), 1.0);

        assert_eq!(
            h.affine_image(p(0.0, 0.0), p(1.0, 0.0)).unwrap_err(),
            Error::ZeroScale
        );
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(
            DomainSpec::half_plane(p(-1.0, 0.0)).unwrap_err(),
            Error::BasepointOutsideDomain
        );
        assert!(DomainSpec::sector(7.0, p(1.0, 0.0)).is_err());
        assert!(DomainSpec::disk(0.0, p(0.0, 0.0)).is_err());
        assert!(PlanePoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn regularity_flags() {
        let one = p(1.0, 0.0);
        assert!(DomainSpec::half_plane(one).unwrap().is_regular());
        assert!(DomainSpec::sector(1.0, one).unwrap().is_regular());
        assert!(DomainSpec::disk(2.0, one).unwrap().is_regular());
        assert!(!DomainSpec::disk_exterior(0.5, one).unwrap().is_regular());
        let g = GenericDomain::new("strip", |z| z.im.abs() < 1.0, |z| 1.0 - z.im.abs())
            .with_flags(false, true, false);
        assert!(!DomainSpec::generic(g, one).unwrap().is_regular());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let text = r#"{"shape": "sector", "opening": 1.5707963267948966, "basepoint": [1.0, 0.0]}"#;
        let s = DomainSpec::from_json_str(text).unwrap();
        assert!(matches!(s.shape(), Shape::Sector { .. }));
        let back = s.to_json().unwrap();
        assert_eq!(back.regular, Some(true));
        assert!(back.scale.is_none());

        let e = DomainSpec::from_json_str(
            r#"{"shape": "disk_exterior", "radius": 1, "basepoint": [2, 0], "regular": false}"#,
        )
        .unwrap();
        assert!(!e.is_regular());
        assert!(DomainSpec::from_json_str(
            r#"{"shape": "disk_exterior", "radius": 1, "basepoint": [2, 0], "regular": true}"#
        )
        .is_err());
        assert!(DomainSpec::from_json_str(r#"{"shape": "sector", "basepoint": [1, 0]}"#).is_err());
        assert!(DomainSpec::from_json_str(r#"{"shape": "strip", "basepoint": [1, 0]}"#).is_err());
    }

    fn builtin(kind: u8, param: f64) -> DomainSpec {
        let one = p(1.0, 0.0);
        match kind {
            0 => DomainSpec::half_plane(one),
            1 => DomainSpec::sector(param, one),
            2 => DomainSpec::disk(1.5 + param, p(0.0, 0.0)),
            _ => DomainSpec::disk_exterior(0.25 + param / 8.0, p(2.0, 0.0)),
        }
        .unwrap()
    }

    proptest! {
        #[test]
        fn distance_circle_stays_inside(
            kind in 0u8..4,
            param in 0.2f64..TAU,
            re in -6.0f64..6.0,
            im in -6.0f64..6.0,
            a_re in -3.0f64..3.0,
            a_im in -3.0f64..3.0,
            b_re in -3.0f64..3.0,
        ) {
            prop_assume!(a_re.abs() + a_im.abs() > 0.1);
            let d = builtin(kind, param)
                .affine_image(p(a_re, a_im), p(b_re, 0.5))
                .unwrap();
            let z = Complex64::new(re, im);
            prop_assume!(d.contains_c(z));
            let rho = d.distance_c(z);
            prop_assert!(rho > 0.0);
            for k in 0..720 {
                let w = z + Complex64::from_polar(rho * (1.0 - 1e-9), k as f64 * TAU / 720.0);
                prop_assert!(d.contains_c(w), "circle point {w} escaped");
            }
            // the radius is attained: the projection is at that distance
            let proj = d.project_c(z);
            prop_assert!(((proj - z).norm() - rho).abs() <= 1e-9 * (1.0 + rho));
        }

        #[test]
        fn tail_is_monotone(im in -50.0f64..50.0, r1 in 0.0f64..40.0, dr in 0.0f64..40.0) {
            let h = DomainSpec::half_plane(p(1.0, 0.0)).unwrap();
            let z = p(1e-7, im);
            if h.in_tail(z, TailQuery::new(r1 + dr).unwrap()) {
                prop_assert!(h.in_tail(z, TailQuery::new(r1).unwrap()));
            }
        }

        #[test]
        fn affine_preserves_contains(
            kind in 0u8..4,
            param in 0.2f64..TAU,
            re in -6.0f64..6.0,
            im in -6.0f64..6.0,
            a_re in -3.0f64..3.0,
            a_im in -3.0f64..3.0,
            b_re in -3.0f64..3.0,
            b_im in -3.0f64..3.0,
        ) {
            prop_assume!(a_re.abs() + a_im.abs() > 0.1);
            let d = builtin(kind, param);
            let img = d.affine_image(p(a_re, a_im), p(b_re, b_im)).unwrap();
            let z = Complex64::new(re, im);
            let w = Complex64::new(a_re, a_im) * z + Complex64::new(b_re, b_im);
            // skip points within rounding distance of the boundary
            prop_assume!((z - d.project_c(z)).norm() > 1e-9);
            prop_assert_eq!(d.contains_c(z), img.contains_c(w));
        }
    }
}
