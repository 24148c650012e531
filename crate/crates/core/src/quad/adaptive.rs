//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for complex-valued
//! integrands on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{PVResult, QuadConfig};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
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

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
    pub error: f64,
    /// Error estimate is the rounding floor; splitting cannot reduce it.
    pub at_roundoff: bool,
}

/// One G7K15 panel. Non-finite integrand values yield a non-finite error.
pub(crate) fn gk15<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut lo = [Complex64::new(0.0, 0.0); 7];
    let mut hi = [Complex64::new(0.0, 0.0); 7];
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        lo[j] = f(center - dx);
        hi[j] = f(center + dx);
        let s = lo[j] + hi[j];
        kronrod += s * WGK[j];
        abs_k += (lo[j].norm() + hi[j].norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).norm();
    let resabs = abs_k * half.abs();
    // QUADPACK's scaling of the raw Gauss/Kronrod difference.
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((lo[j] - mean).norm() + (hi[j] - mean).norm());
    }
    resasc *= half.abs();
    if error > 0.0 && resasc > 0.0 {
        error = resasc * (1.0f64).min((200.0 * error / resasc).powf(1.5));
    }
    let round = 50.0 * f64::EPSILON * resabs;
    let at_roundoff = round >= error;
    if at_roundoff {
        error = round;
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        error = f64::NAN;
    }
    Panel { a, b, value, error, at_roundoff }
}

pub(crate) const EVALS_PER_PANEL: u64 = 15;

struct Queued(Panel, usize);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]` to absolute
/// tolerance `cfg.tol`. A tolerance below the rounding floor of the panel sums
/// is met at that floor; the reported error estimate stays honest.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> PVResult {
    if !(a.is_finite() && b.is_finite()) {
        return PVResult::failed("integrate_adaptive needs finite limits", 0);
    }
    if a == b {
        return PVResult::ok(Complex64::new(0.0, 0.0), 0.0, 0);
    }
    if a > b {
        let mut r = integrate_adaptive(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    let first = gk15(f, a, b);
    let mut evals = EVALS_PER_PANEL;
    if !first.error.is_finite() {
        return PVResult::failed(&non_finite_hint(&first), evals);
    }
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut total_err = first.error;
    heap.push(Queued(first, seq));
    let mut settled: Vec<Panel> = Vec::new();
    while total_err > cfg.tol {
        if cfg.cancelled() {
            return finish(heap, settled, evals, Some("cancelled"));
        }
        if evals + 2 * EVALS_PER_PANEL > cfg.budget {
            return finish(heap, settled, evals, Some("evaluation budget exhausted"));
        }
        let Some(Queued(worst, _)) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // Panels at the rounding floor, or too narrow to split, are frozen.
        if worst.at_roundoff || mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
            settled.push(worst);
            if heap.is_empty() {
                break;
            }
            // Remaining error is dominated by frozen panels: stop refining.
            let live: f64 = heap.iter().map(|q| q.0.error).sum();
            if live <= cfg.tol * 0.5 {
                break;
            }
            continue;
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        evals += 2 * EVALS_PER_PANEL;
        if !left.error.is_finite() {
            return PVResult::failed(&non_finite_hint(&left), evals);
        }
        if !right.error.is_finite() {
            return PVResult::failed(&non_finite_hint(&right), evals);
        }
        total_err += left.error + right.error - worst.error;
        seq += 1;
        heap.push(Queued(left, seq));
        seq += 1;
        heap.push(Queued(right, seq));
        // Re-sum periodically to keep the running totals honest.
        if seq % 64 == 0 {
            total_err = heap.iter().map(|q| q.0.error).sum::<f64>() + settled.iter().map(|p| p.error).sum::<f64>();
        }
    }
    // Rounding-limited panels cap the attainable accuracy; only panels frozen
    // for width count against the tolerance.
    let frozen: f64 = settled.iter().filter(|p| !p.at_roundoff).map(|p| p.error).sum();
    if frozen > cfg.tol {
        return finish(heap, settled, evals, Some("subdivision limit reached before tolerance"));
    }
    finish(heap, settled, evals, None)
}

fn finish(
    heap: BinaryHeap<Queued>,
    settled: Vec<Panel>,
    evals: u64,
    failure: Option<&str>,
) -> PVResult {
    // Fixed summation order: by left endpoint.
    let mut panels: Vec<Panel> = heap.into_iter().map(|q| q.0).chain(settled).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().fold(Complex64::new(0.0, 0.0), |s, p| s + p.value);
    let error = panels.iter().map(|p| p.error).sum::<f64>();
    match failure {
        None => PVResult::ok(value, error, evals),
        Some(hint) => PVResult {
            value,
            abs_error_estimate: error,
            evaluations: evals,
            converged: false,
            divergence_hint: hint.to_string(),
        },
    }
}

fn non_finite_hint(p: &Panel) -> String {
    format!("integrand not finite on [{:e}, {:e}]", p.a, p.b)
}
