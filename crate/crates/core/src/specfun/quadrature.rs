//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.
//!
//! Finite intervals are bisected where the Kronrod/Gauss difference is
//! largest. Semi-infinite ranges are mapped onto `[0, 1)` with
//! `t = a + u / (1 - u)`; a doubly infinite range is split at the origin.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{require_positive, Error, Result};

/// Tolerances and subdivision budget for [`integrate_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-300, max_subdivisions: 1000 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self { rel_tol, abs_tol, max_subdivisions };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("rel_tol", self.rel_tol)?;
        require_positive("abs_tol", self.abs_tol)?;
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter { name: "max_subdivisions", value: 0.0, reason: "must be >= 1" });
        }
        Ok(())
    }
}

/// Result of an adaptive integration. `converged == false` means the
/// subdivision budget ran out and `value` is the best available estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl Quadrature {
    /// Turns an unconverged result into an error.
    pub fn require_converged(self, context: &'static str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadratureNotConverged { value: self.value, error: self.error, context })
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// QUADPACK-style rescaling of the raw |K - G| difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half.abs();
    Segment {
        a,
        b,
        value: res_kronrod * half,
        error: rescale_error((res_kronrod - res_gauss) * half, res_abs * abs_half, res_asc * abs_half),
    }
}

fn adaptive<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Quadrature {
    let first = kronrod21(f, a, b);
    let mut evaluations = 21;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    // Segments too narrow to split further; they still count towards the total.
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;

    let mut subdivisions = 1;
    loop {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Quadrature { value: total, error: total_err, converged: true, evaluations };
        }
        if subdivisions >= spec.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            frozen_value += worst.value;
            frozen_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = kronrod21(f, worst.a, mid);
        let right = kronrod21(f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        heap.push(left);
        heap.push(right);
        total = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
        total_err = frozen_err + heap.iter().map(|s| s.error).sum::<f64>();
        if !total.is_finite() {
            break;
        }
    }

    total = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
    Quadrature { value: total, error: total_err, converged: false, evaluations }
}

fn combine(lhs: Quadrature, rhs: Quadrature) -> Quadrature {
    Quadrature {
        value: lhs.value + rhs.value,
        error: lhs.error + rhs.error,
        converged: lhs.converged && rhs.converged,
        evaluations: lhs.evaluations + rhs.evaluations,
    }
}

/// Integrates `f` over `[a, b]`; either bound may be infinite.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    spec.validate()?;
    integrate_dyn(&f, a, b, spec)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::InvalidParameter {
            name: "bound",
            value: f64::NAN,
            reason: "integration bounds must not be NaN",
        });
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, converged: true, evaluations: 0 });
    }
    if a > b {
        let q = integrate_dyn(f, b, a, spec)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }

    let result = match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(f, a, b, spec),
        (true, false) => {
            let g = |u: f64| {
                let w = 1.0 - u;
                f(a + u / w) / (w * w)
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
        (false, true) => {
            let g = |u: f64| {
                let w = 1.0 - u;
                f(b - u / w) / (w * w)
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
        (false, false) => {
            let half_spec = QuadratureSpec { abs_tol: 0.5 * spec.abs_tol, ..*spec };
            let left = integrate_dyn(f, f64::NEG_INFINITY, 0.0, &half_spec)?;
            let right = integrate_dyn(f, 0.0, f64::INFINITY, &half_spec)?;
            combine(left, right)
        }
    };
    Ok(result)
}

/// Integrates over consecutive breakpoints `points[0]..points[1]..`, which
/// keeps oscillatory or sharply peaked integrands from hiding between nodes.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Quadrature> {
    let mut acc = Quadrature { value: 0.0, error: 0.0, converged: true, evaluations: 0 };
    for w in points.windows(2) {
        acc = combine(acc, integrate_1d(&f, w[0], w[1], spec)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn check(name: &str, q: Quadrature, exact: f64, tol: f64) {
        let err = (q.value - exact).abs();
        assert!(q.converged, "{name}: not converged");
        assert!(err <= tol * exact.abs().max(1.0), "{name}: got {} want {exact} (err {err:e})", q.value);
        assert!(q.error >= err, "{name}: estimate {} < true error {err:e}", q.error);
    }

    // Ten integrals with known closed forms.
    #[test]
    fn golden_suite() {
        let s = spec();
        check("exp decay", integrate_1d(|t| (-t).exp(), 0.0, f64::INFINITY, &s).unwrap(), 1.0, 1e-12);
        check(
            "gaussian",
            integrate_1d(|t| (-t * t).exp(), f64::NEG_INFINITY, f64::INFINITY, &s).unwrap(),
            PI.sqrt(),
            1e-12,
        );
        check("sin", integrate_1d(f64::sin, 0.0, PI, &s).unwrap(), 2.0, 1e-13);
        check(
            "poly",
            integrate_1d(|x| x.powi(5) - 2.0 * x, -1.0, 3.0, &s).unwrap(),
            3.0f64.powi(6) / 6.0 - 1.0 / 6.0 - 8.0,
            1e-13,
        );
        check("sqrt endpoint", integrate_1d(f64::sqrt, 0.0, 1.0, &s).unwrap(), 2.0 / 3.0, 1e-12);
        check("log singularity", integrate_1d(|x| x.ln(), 0.0, 1.0, &s).unwrap(), -1.0, 1e-11);
        check(
            "lorentzian",
            integrate_1d(|x| 1.0 / (1.0 + x * x), f64::NEG_INFINITY, f64::INFINITY, &s).unwrap(),
            PI,
            1e-11,
        );
        check(
            "peaked",
            integrate_1d(|x| 1e-4 / ((x - 0.3).powi(2) + 1e-8), 0.0, 1.0, &s).unwrap(),
            1e-4 / 1e-4 * ((0.7f64 / 1e-4).atan() + (0.3f64 / 1e-4).atan()),
            1e-10,
        );
        let abs = QuadratureSpec::new(1e-12, 1e-13, 1000).unwrap();
        check("oscillatory", integrate_1d(|x| (20.0 * x).cos(), 0.0, 2.0 * PI, &abs).unwrap(), 0.0, 1e-12);
        check(
            "gamma(3/2)",
            integrate_1d(|t| t.sqrt() * (-t).exp(), 0.0, f64::INFINITY, &s).unwrap(),
            0.5 * PI.sqrt(),
            1e-11,
        );
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let q = integrate_1d(|x| x * x, 2.0, 0.0, &spec()).unwrap();
        assert!((q.value + 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn negative_semi_infinite() {
        let q = integrate_1d(f64::exp, f64::NEG_INFINITY, 0.0, &spec()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let tight = QuadratureSpec::new(1e-15, 1e-300, 2).unwrap();
        let q = integrate_1d(|x| x.ln(), 0.0, 1.0, &tight).unwrap();
        assert!(!q.converged);
        assert!(q.require_converged("log").is_err());
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    }
}
