//! Globally adaptive Gauss–Kronrod (7/15) quadrature with user breakpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Maximum number of bisections applied to any single panel.
pub const MAX_DEPTH: u32 = 60;

const MAX_PANELS: usize = 100_000;

// Kronrod abscissae; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn converged(&self, tol: f64) -> bool {
        self.error_estimate <= tol * self.value.abs().max(1.0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrate `f` over `[lo, hi]` to relative tolerance `tol` (absolute when
/// the integral is below 1 in magnitude).
///
/// Panels are seeded from `breakpoints`, so no panel ever straddles one;
/// breakpoints outside the open interval are ignored.
pub fn integrate_adaptive<F>(mut f: F, lo: f64, hi: f64, tol: f64, breakpoints: &[f64]) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("quadrature interval [{lo}, {hi}] is empty or not finite")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > lo && p < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (value, error) = kronrod15(&mut f, w[0], w[1]);
        evaluations += 15;
        total += value;
        total_err += error;
        heap.push(Panel { lo: w[0], hi: w[1], value, error, depth: 0 });
    }

    while total_err > tol * total.abs().max(1.0) {
        let worst = heap.pop().expect("at least one panel");
        if worst.depth >= MAX_DEPTH || heap.len() >= MAX_PANELS {
            return Err(Error::NumericalFailure {
                what: "adaptive quadrature".into(),
                estimate: total_err,
            });
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1) = kronrod15(&mut f, worst.lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, worst.hi);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { lo: worst.lo, hi: mid, value: v1, error: e1, depth: worst.depth + 1 });
        heap.push(Panel { lo: mid, hi: worst.hi, value: v2, error: e2, depth: worst.depth + 1 });
        // Re-sum occasionally so the running totals do not accumulate drift.
        if evaluations % 3000 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult { value, error_estimate, evaluations })
}
