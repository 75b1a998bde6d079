//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Neumaier's compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn relative(relative: f64) -> Self {
        Self {
            relative,
            absolute: 0.0,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() || !error.is_finite() {
        error = f64::INFINITY;
    }
    Piece { a, b, value, error }
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the pieces
/// delimited by `points` (sorted ascending).
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], tol: Tolerance) -> Quadrature {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut finished = Vec::new();
    let mut evaluations = 0;
    let mut value = CompensatedSum::default();
    let mut error = CompensatedSum::default();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let piece = gk15(&mut f, w[0], w[1]);
            value.add(piece.value);
            error.add(piece.error);
            heap.push(piece);
            evaluations += 15;
        }
    }
    loop {
        let (v, e) = (value.value(), error.value());
        let target = tol.absolute.max(tol.relative * v.abs());
        let done = e <= target || e <= 50.0 * f64::EPSILON * v.abs();
        if done || heap.len() + finished.len() >= tol.max_intervals || heap.is_empty() {
            let pieces = || heap.iter().chain(&finished);
            let value = compensated_sum(pieces().map(|p| p.value));
            let error = compensated_sum(pieces().map(|p| p.error));
            return Quadrature {
                value,
                error,
                converged: done && value.is_finite(),
                evaluations,
            };
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) <= 1e-15 * mid.abs() {
            finished.push(worst);
            continue;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        if worst.error.is_finite() {
            value.add(-worst.value);
            error.add(-worst.error);
            for p in [left, right] {
                value.add(p.value);
                error.add(p.error);
                heap.push(p);
            }
        } else {
            heap.push(left);
            heap.push(right);
            let pieces = || heap.iter().chain(&finished);
            value = pieces().map(|p| p.value).collect();
            error = pieces().map(|p| p.error).collect();
        }
    }
}

/// Integral of `exp(log_f)` returned as a logarithm, for integrands beyond
/// floating-point range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogQuadrature {
    pub ln_value: f64,
    /// Error bound relative to the value.
    pub relative_error: f64,
    pub converged: bool,
}

pub fn integrate_ln<F: FnMut(f64) -> f64>(
    mut log_f: F,
    points: &[f64],
    tol: Tolerance,
) -> LogQuadrature {
    let mut shift = points
        .iter()
        .fold(f64::NEG_INFINITY, |m, &x| m.max(log_f(x)));
    for w in points.windows(2) {
        let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for x in XGK {
            shift = shift.max(log_f(c - h * x)).max(log_f(c + h * x));
        }
    }
    for _ in 0..8 {
        if shift == f64::NEG_INFINITY {
            return LogQuadrature {
                ln_value: f64::NEG_INFINITY,
                relative_error: 0.0,
                converged: true,
            };
        }
        // rounding in log_f of size ε·|log_f| caps the attainable accuracy
        let floor = 32.0 * f64::EPSILON * shift.abs();
        let tol = Tolerance {
            relative: tol.relative.max(floor),
            ..tol
        };
        let mut seen = shift;
        let q = integrate(
            |x| {
                let l = log_f(x);
                seen = seen.max(l);
                (l - shift).exp()
            },
            points,
            tol,
        );
        if seen - shift <= 300.0 && q.value.is_finite() {
            return LogQuadrature {
                ln_value: shift + q.value.ln(),
                relative_error: q.error / q.value,
                converged: q.converged,
            };
        }
        shift = seen;
    }
    LogQuadrature {
        ln_value: f64::INFINITY,
        relative_error: f64::INFINITY,
        converged: false,
    }
}

/// Points `end ± smallest·2^k` strictly inside `(a, b)`, walking away from
/// `end` (which must be `a` or `b`).
pub fn geometric_points(a: f64, b: f64, end: f64, smallest: f64) -> Vec<f64> {
    let sign = if end == a { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    let mut step = smallest;
    while step < b - a {
        let x = end + sign * step;
        if x > a && x < b {
            out.push(x);
        }
        step *= 2.0;
    }
    out
}

/// Sorted, deduplicated breakpoint list over `[a, b]`.
pub fn breakpoints(a: f64, b: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = interior.into_iter().filter(|&x| x > a && x < b).collect();
    v.push(a);
    v.push(b);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `ln(e^x + e^y)`.
pub fn ln_add_exp(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((x - m).exp() + (y - m).exp()).ln()
}
