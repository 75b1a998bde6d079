//! Hardy number from the decay of `r ↦ ω_D(a, E_r)`.
//!
//! For a regular domain the Hardy number equals the lower limit of
//! `log(1/ω(r)) / log r`. On a geometric grid that lower limit is approximated
//! by the smallest local slope
//!
//! ```text
//! s_k = [log(1/ω_{k+1}) - log(1/ω_k)] / [log r_{k+1} - log r_k]
//! ```
//!
//! over a trailing window of the grid.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::oracles::exact_hm;

pub const DEFAULT_TAIL_WINDOW: usize = 4;
pub const DEFAULT_GRID_RATIO: f64 = 2.0;
pub const DEFAULT_GRID_COUNT: usize = 13;

/// Normal quantile used for the reported confidence half-width.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayEntry {
    pub r: f64,
    pub omega: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileSource {
    Oracle,
    MonteCarlo {
        n_samples: usize,
        n_unterminated: usize,
    },
    Synthetic,
}

/// Facts about the domain that decide how a vanishing tail is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DomainStatus {
    pub regular: bool,
    pub bounded: bool,
}

impl From<&DomainSpec> for DomainStatus {
    fn from(d: &DomainSpec) -> Self {
        Self {
            regular: d.is_regular(),
            bounded: d.is_bounded(),
        }
    }
}

/// Harmonic-measure values over an increasing radius grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayProfile {
    entries: Vec<DecayEntry>,
    source: ProfileSource,
    status: Option<DomainStatus>,
}

impl DecayProfile {
    pub fn new(entries: Vec<DecayEntry>, source: ProfileSource) -> Result<Self> {
        for e in &entries {
            if !(e.r > 0.0 && e.r.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "radius {} must be positive",
                    e.r
                )));
            }
            if !(0.0..=1.0).contains(&e.omega) || !(e.stderr >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "entry at r = {} has omega {} / stderr {}",
                    e.r, e.omega, e.stderr
                )));
            }
        }
        for w in entries.windows(2) {
            if w[1].r <= w[0].r {
                return Err(Error::InvalidConfig(
                    "radii must be strictly increasing".into(),
                ));
            }
            if matches!(source, ProfileSource::Oracle) && w[1].omega > w[0].omega {
                return Err(Error::InvalidConfig(
                    "oracle profile must be non-increasing".into(),
                ));
            }
        }
        Ok(Self {
            entries,
            source,
            status: None,
        })
    }

    /// Closed-form profile of `d` over `grid`.
    pub fn from_oracle(d: &DomainSpec, grid: &[f64]) -> Result<Self> {
        validate_grid(grid)?;
        let entries = grid
            .iter()
            .map(|&r| {
                Ok(DecayEntry {
                    r,
                    omega: exact_hm(d, r)?,
                    stderr: 0.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(entries, ProfileSource::Oracle)?.with_status(d.into()))
    }

    /// Noise-free profile of a given function of `r`.
    pub fn synthetic(grid: &[f64], omega: impl Fn(f64) -> f64) -> Result<Self> {
        validate_grid(grid)?;
        let entries = grid
            .iter()
            .map(|&r| DecayEntry {
                r,
                omega: omega(r),
                stderr: 0.0,
            })
            .collect();
        Self::new(entries, ProfileSource::Synthetic)
    }

    pub fn with_status(mut self, status: DomainStatus) -> Self {
        self.status = Some(status);
        self
    }

    pub fn entries(&self) -> &[DecayEntry] {
        &self.entries
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }

    pub fn status(&self) -> Option<DomainStatus> {
        self.status
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Trailing `count` entries.
    pub fn tail(&self, count: usize) -> &[DecayEntry] {
        &self.entries[self.entries.len().saturating_sub(count)..]
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty radius grid".into()));
    }
    if grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidConfig("grid radii must be positive".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `r0·ratio^k` for `k = 0..count`.
pub fn geometric_grid(r0: f64, ratio: f64, count: usize) -> Result<Vec<f64>> {
    if !(r0 > 0.0 && r0.is_finite()) || !(ratio > 1.0 && ratio.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "grid needs r0 > 0 and ratio > 1, got {r0}, {ratio}"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidConfig("grid needs at least two radii".into()));
    }
    Ok((0..count).map(|k| r0 * ratio.powi(k as i32)).collect())
}

/// Default grid `r_k = 2·max(1,|a|)·2^k`, `k = 0..=12`.
pub fn default_grid(d: &DomainSpec) -> Vec<f64> {
    geometric_grid(
        d.default_grid_start(),
        DEFAULT_GRID_RATIO,
        DEFAULT_GRID_COUNT,
    )
    .expect("default grid parameters are valid")
}

fn slope(a: &DecayEntry, b: &DecayEntry) -> f64 {
    (a.omega.ln() - b.omega.ln()) / (b.r.ln() - a.r.ln())
}

fn slope_variance(a: &DecayEntry, b: &DecayEntry) -> f64 {
    let rel = |e: &DecayEntry| e.stderr / e.omega;
    let dlog = b.r.ln() - a.r.ln();
    (rel(a).powi(2) + rel(b).powi(2)) / (dlog * dlog)
}

/// Discrete slopes of `log(1/ω)` against `log r` between neighbouring radii.
pub fn local_slopes(p: &DecayProfile) -> Result<Vec<f64>> {
    if p.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: p.len(),
        });
    }
    if let Some(e) = p.entries.iter().find(|e| e.omega == 0.0) {
        return Err(Error::ZeroMeasure { r: e.r });
    }
    Ok(p.entries.windows(2).map(|w| slope(&w[0], &w[1])).collect())
}

/// Either a finite estimate or the `+∞` marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HardyValue {
    Finite(f64),
    Infinite,
}

impl HardyValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            HardyValue::Finite(v) => Some(v),
            HardyValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, HardyValue::Infinite)
    }
}

impl Serialize for HardyValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HardyValue::Finite(v) => s.serialize_f64(*v),
            HardyValue::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateWarning {
    /// Some `ω(r)` vanished at a finite radius.
    ZeroMeasureTail,
    /// The liminf formula does not apply; the `+∞` marker is not the Hardy number.
    NonRegularDomain,
    /// Bounded domains have Hardy number `+∞`, so the marker is correct.
    BoundedDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyNumberEstimate {
    pub value: HardyValue,
    pub local_slopes: Vec<f64>,
    pub tail_window: usize,
    pub ci_halfwidth: f64,
    pub warnings: Vec<EstimateWarning>,
}

/// Liminf-slope estimate over the last `tail_window` local slopes.
pub fn estimate_hardy_number(p: &DecayProfile, tail_window: usize) -> Result<HardyNumberEstimate> {
    if tail_window == 0 {
        return Err(Error::InvalidConfig(
            "tail window must be at least 1".into(),
        ));
    }
    if p.len() < tail_window + 1 {
        return Err(Error::TooFewPoints {
            needed: tail_window + 1,
            found: p.len(),
        });
    }

    if p.entries.iter().any(|e| e.omega == 0.0) {
        let positive = p
            .entries
            .iter()
            .take_while(|e| e.omega > 0.0)
            .collect::<Vec<_>>();
        let slopes = positive.windows(2).map(|w| slope(w[0], w[1])).collect();
        let mut warnings = vec![EstimateWarning::ZeroMeasureTail];
        if let Some(status) = p.status {
            if !status.regular {
                warnings.push(EstimateWarning::NonRegularDomain);
            }
            if status.bounded {
                warnings.push(EstimateWarning::BoundedDomain);
            }
        }
        return Ok(HardyNumberEstimate {
            value: HardyValue::Infinite,
            local_slopes: slopes,
            tail_window,
            ci_halfwidth: 0.0,
            warnings,
        });
    }

    let slopes = local_slopes(p)?;
    let first = slopes.len() - tail_window;
    let (argmin, min) =
        slopes[first..]
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bv), (i, &v)| {
                    if v < bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                },
            );
    let k = first + argmin;
    let ci = Z_95 * slope_variance(&p.entries[k], &p.entries[k + 1]).sqrt();
    Ok(HardyNumberEstimate {
        value: HardyValue::Finite(min.max(0.0)),
        local_slopes: slopes,
        tail_window,
        ci_halfwidth: ci,
        warnings: Vec::new(),
    })
}
