//! Globally adaptive Gauss–Kronrod (10/21 point) integration of vector-valued
//! integrands over a set of panels, with an optional exponential tail map.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Absolute and relative tolerance pair. Convergence is declared when every
/// component satisfies `err ≤ max(abs, rel·|value|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        DEFAULT_TOLERANCE
    }
}

pub const DEFAULT_TOLERANCE: Tolerance = Tolerance::new(1e-10, 1e-8);

/// Upper bound on the number of live segments before giving up.
pub const MAX_SEGMENTS: usize = 400_000;

/// Outcome of an integration: value, error estimate and integrand calls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl<T> IntegrationResult<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> IntegrationResult<U> {
        IntegrationResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            evaluations: self.evaluations,
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_745_762,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// How a segment's abscissa maps onto the integration variable.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Map {
    Linear,
    /// ω = start − scale·ln u on u ∈ (0, 1], covering [start, ∞).
    Tail { start: f64, scale: f64 },
}

impl Map {
    #[inline]
    fn point(&self, x: f64) -> (f64, f64) {
        match *self {
            Map::Linear => (x, 1.0),
            Map::Tail { start, scale } => (start - scale * x.ln(), scale / x),
        }
    }
}

#[derive(Clone, Debug)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    map: Map,
    value: [f64; N],
    err: [f64; N],
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

fn gauss_kronrod<const N: usize, F>(f: &F, a: f64, b: f64, map: Map) -> Segment<N>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let (w, jac) = map.point(x);
        let mut v = f(w);
        for c in v.iter_mut() {
            *c *= jac;
        }
        v
    };

    let mut fv = [[0.0; N]; 21];
    fv[20] = eval(center);
    for j in 0..10 {
        let dx = half * XGK[j];
        fv[2 * j] = eval(center - dx);
        fv[2 * j + 1] = eval(center + dx);
    }

    let mut value = [0.0; N];
    let mut err = [0.0; N];
    for c in 0..N {
        let fc = fv[20][c];
        let mut resk = WGK[10] * fc;
        let mut resg = 0.0;
        let mut resabs = WGK[10] * fc.abs();
        for j in 0..10 {
            let (lo, hi) = (fv[2 * j][c], fv[2 * j + 1][c]);
            resk += WGK[j] * (lo + hi);
            resabs += WGK[j] * (lo.abs() + hi.abs());
            if j % 2 == 1 {
                resg += WG[j / 2] * (lo + hi);
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv[2 * j][c] - mean).abs() + (fv[2 * j + 1][c] - mean).abs());
        }
        let h = half.abs();
        value[c] = resk * half;
        err[c] = rescale_error((resk - resg) * half, resabs * h, resasc * h);
    }
    Segment {
        a,
        b,
        map,
        value,
        err,
    }
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

/// Integrates `f` over the union of the given segments, bisecting the worst
/// segment until the per-component tolerance is met.
pub(crate) fn integrate_segments<const N: usize, F>(
    f: &F,
    initial: &[(f64, f64, Map)],
    tol: Tolerance,
    context: &str,
) -> Result<IntegrationResult<[f64; N]>>
where
    F: Fn(f64) -> [f64; N],
{
    let mut segments: Vec<Segment<N>> = initial
        .iter()
        .map(|&(a, b, map)| gauss_kronrod(f, a, b, map))
        .collect();
    let mut evaluations = 21 * segments.len();

    let totals = |segs: &[Segment<N>]| {
        let mut v = [0.0; N];
        let mut e = [0.0; N];
        for s in segs {
            for c in 0..N {
                v[c] += s.value[c];
                e[c] += s.err[c];
            }
        }
        (v, e)
    };
    let (mut total, mut total_err) = totals(&segments);

    let priority = |s: &Segment<N>, total: &[f64; N]| {
        (0..N)
            .map(|c| s.err[c] / tol.target(total[c]))
            .fold(0.0, f64::max)
    };

    let mut heap: BinaryHeap<Key> = segments
        .iter()
        .enumerate()
        .map(|(i, s)| Key(priority(s, &total), i))
        .collect();

    let converged = |v: &[f64; N], e: &[f64; N]| (0..N).all(|c| e[c] <= tol.target(v[c]));
    let finite = |v: &[f64; N], e: &[f64; N]| (0..N).all(|c| v[c].is_finite() && e[c].is_finite());

    let mut iterations = 0usize;
    while !converged(&total, &total_err) {
        if !finite(&total, &total_err) {
            return Err(failure(context, &total, &total_err, evaluations));
        }
        iterations += 1;
        if iterations % 256 == 0 {
            // wash out accumulated cancellation in the running sums
            let (v, e) = totals(&segments);
            total = v;
            total_err = e;
            if converged(&total, &total_err) {
                break;
            }
        }
        let Some(Key(_, idx)) = heap.pop() else {
            return Err(failure(context, &total, &total_err, evaluations));
        };
        if segments.len() >= MAX_SEGMENTS {
            return Err(failure(context, &total, &total_err, evaluations));
        }
        let seg = segments[idx].clone();
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // cannot bisect further; keep its error but stop refining it
            continue;
        }
        let left = gauss_kronrod(f, seg.a, mid, seg.map);
        let right = gauss_kronrod(f, mid, seg.b, seg.map);
        evaluations += 42;
        for c in 0..N {
            total[c] += left.value[c] + right.value[c] - seg.value[c];
            total_err[c] += left.err[c] + right.err[c] - seg.err[c];
        }
        segments[idx] = left;
        segments.push(right);
        let n = segments.len() - 1;
        heap.push(Key(priority(&segments[idx], &total), idx));
        heap.push(Key(priority(&segments[n], &total), n));
    }

    let (value, err) = totals(&segments);
    if !finite(&value, &err) {
        return Err(failure(context, &value, &err, evaluations));
    }
    Ok(IntegrationResult {
        value,
        error_estimate: err.iter().copied().fold(0.0, f64::max),
        evaluations,
    })
}

fn failure<const N: usize>(
    context: &str,
    total: &[f64; N],
    err: &[f64; N],
    evaluations: usize,
) -> Error {
    Error::Quadrature {
        context: context.to_string(),
        estimate: total.first().copied().unwrap_or(0.0),
        error: err.iter().copied().fold(0.0, f64::max),
        evaluations,
    }
}

/// Adaptive integral of a vector-valued function over `[a, b]`.
pub fn integrate_vector<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<IntegrationResult<[f64; N]>>
where
    F: Fn(f64) -> [f64; N],
{
    check_interval(a, b)?;
    integrate_segments(&f, &[(a, b, Map::Linear)], tol, "finite interval")
}

/// Adaptive integral of a real function over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<IntegrationResult<f64>>
where
    F: Fn(f64) -> f64,
{
    Ok(integrate_vector(|x| [f(x)], a, b, tol)?.map(|v| v[0]))
}

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "interval",
            reason: format!("need finite a < b, got [{a}, {b}]"),
        })
    }
}
