//! Globally adaptive Gauss–Kronrod (10, 21) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum bisection depth of any subinterval.
pub const MAX_DEPTH: u32 = 50;

const MAX_INTERVALS: usize = 20_000;

// Abscissae and weights of the 21-point Kronrod rule and its embedded
// 10-point Gauss rule on [-1, 1]. Nodes at odd indices belong to the Gauss rule.
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
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_015_059_690,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Upper estimate of the absolute error.
    pub error: f64,
    pub evaluations: usize,
}

/// Integral of `f` over `[a, b]` to absolute accuracy `tol`.
pub fn adaptive_quadrature<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate(f, a, b, tol).map(|r| r.value)
}

/// Like [`adaptive_quadrature`] but also reports the error bound and evaluation count.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter {
            name: "b",
            value: b,
            reason: "integration bounds must be finite with a < b",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "tolerance must be positive",
        });
    }

    let first = kronrod21(&f, a, b, 0)?;
    let mut evaluations = 21;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    while error > tol {
        let worst = heap.pop().expect("heap holds every live interval");
        if worst.depth >= MAX_DEPTH || heap.len() + 2 > MAX_INTERVALS {
            heap.push(worst);
            let (value, error) = totals(&heap);
            return Err(Error::ToleranceNotMet {
                estimate: value,
                error_bound: error,
                tolerance: tol,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod21(&f, worst.a, mid, worst.depth + 1)?;
        let right = kronrod21(&f, mid, worst.b, worst.depth + 1)?;
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if error <= tol {
            // Re-sum to discard drift in the running totals before accepting.
            let (v, e) = totals(&heap);
            value = v;
            error = e;
        }
    }

    Ok(QuadratureResult {
        value,
        error,
        evaluations,
    })
}

fn totals(heap: &BinaryHeap<Interval>) -> (Complex64, f64) {
    heap.iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), iv| (v + iv.value, e + iv.error))
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    depth: u32,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod21<F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Interval>
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<Complex64> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { at: x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        let sum = f1 + f2;
        kronrod += sum * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    let width = half.abs();
    let value = kronrod * half;
    let roundoff = 50.0 * f64::EPSILON * abs_sum * width;
    let error = ((kronrod - gauss) * half).norm() + roundoff;
    Ok(Interval {
        a,
        b,
        value,
        error,
        depth,
    })
}
