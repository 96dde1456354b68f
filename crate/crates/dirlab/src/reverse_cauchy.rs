//! The reverse Cauchy inequality: interval ratios mean(Ψ²)/(mean Ψ)², their
//! supremum over intervals (the best constant C), and the closed-form
//! reduction for the power family.
//!
//! For Ψ(t) = |t|^α the ratio on (a, b) with b > 0 depends only on t = a/b,
//! and equals (α+1)²/(2α+1) times
//!
//!     (1 − t)(1 − t^{2α+1}) / (1 − |t|^α t)²
//!
//! with odd powers taken as sign(t)|t|^p. The supremum of this inner
//! expression over t ≤ 1 (whole line) or t ∈ [0, 1] (nonnegative data) gives
//! the sharp constants; at α = 1 they are 3/2 and 4/3.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::psi::{Domain, PsiKind, PsiSpec};

/// The two interval means and their ratio on a single interval (a, b).
#[derive(Debug, Clone, Serialize)]
pub struct IntervalRatio {
    pub a: f64,
    pub b: f64,
    pub mean_psi: f64,
    pub mean_psi_sq: f64,
    pub ratio: f64,
}

/// A (lower-bound) estimate of the best constant, with the interval where
/// the scanned ratio peaked and the number of ratio evaluations spent.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub argmax_interval: (f64, f64),
    pub domain: Domain,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchParams {
    pub scan_points: usize,
    pub refine_iters: usize,
    pub interval_bound: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            scan_points: 400,
            refine_iters: 80,
            interval_bound: 10.0,
        }
    }
}

impl SearchParams {
    fn validate(&self) -> Result<()> {
        if self.scan_points < 2 || self.refine_iters == 0 || !(self.interval_bound > 0.0) {
            return Err(Error::InvalidSpec(
                "search parameters must be positive (scan_points >= 2)".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of checking condition "ratio <= C on every interval".
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub candidate_c: f64,
    /// An interval violating the candidate constant, when one was found.
    pub witness: Option<IntervalRatio>,
}

pub fn interval_ratio(psi: &PsiSpec, a: f64, b: f64) -> Result<IntervalRatio> {
    if !(a < b) {
        return Err(Error::DegenerateInterval { a, b });
    }
    let mean_psi = (psi.phi(b)? - psi.phi(a)?) / (b - a);
    let mean_psi_sq = psi.int_psi_squared(a, b)? / (b - a);
    if !(mean_psi > 0.0) {
        return Err(Error::ZeroMean { a, b });
    }
    Ok(IntervalRatio {
        a,
        b,
        mean_psi,
        mean_psi_sq,
        ratio: mean_psi_sq / (mean_psi * mean_psi),
    })
}

/// The inner expression of the closed-form constants for Ψ = |t|^α, as a
/// function of t = a/b (b > 0). The removable singularity at t = 1 is filled
/// with its limit (2α+1)/(α+1)². Defined for all finite t; values at |t| > 1
/// mirror |t| < 1 through the reciprocal symmetry inner(t) = inner(1/t).
pub fn power_inner(alpha: f64, t: f64) -> Result<f64> {
    if alpha <= -0.5 {
        return Err(Error::Divergent(format!("alpha = {alpha} <= -1/2")));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("t = {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    // 0/0 at t = 1; below this threshold the cancellation destroys precision
    if (1.0 - t).abs() < 1e-6 {
        return Ok((2.0 * alpha + 1.0) / ((alpha + 1.0) * (alpha + 1.0)));
    }
    let odd = |x: f64, p: f64| x.signum() * x.abs().powf(p);
    let num = (1.0 - t) * (1.0 - odd(t, 2.0 * alpha + 1.0));
    let den = 1.0 - t.abs().powf(alpha) * t;
    Ok(num / (den * den))
}

/// Maximize `f` on [lo, hi] by golden-section search. Returns (x, f(x)) and
/// the number of evaluations used.
fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64, u64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut evals = 0u64;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    evals += 2;
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evals += 1;
    }
    if f1 >= f2 {
        (x1, f1, evals)
    } else {
        (x2, f2, evals)
    }
}

/// Supremum of `power_inner(alpha, ·)` over the t-range for the given domain,
/// by bracketing scan plus golden-section refinement. The reciprocal symmetry
/// inner(t) = inner(1/t) folds everything into t ∈ [−1, 1].
fn power_inner_sup(alpha: f64, domain: Domain, scan_points: usize, refine_iters: usize) -> (f64, f64, u64) {
    let lo = match domain {
        Domain::WholeLine => -1.0,
        Domain::NonnegativeOnly => 0.0,
    };
    let hi = 1.0;
    let f = |t: f64| power_inner(alpha, t).unwrap_or(f64::NEG_INFINITY);

    let n = scan_points.max(3);
    let mut evals = 0u64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    for (i, &t) in grid.iter().enumerate() {
        let v = f(t);
        evals += 1;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let blo = grid[best_i.saturating_sub(1)];
    let bhi = grid[(best_i + 1).min(n - 1)];
    let (mut tx, mut fx, e) = golden_max(&f, blo, bhi, refine_iters);
    evals += e;
    // golden section stalls at a boundary maximum; keep the scanned endpoint
    if best_v > fx {
        tx = grid[best_i];
        fx = best_v;
    }
    // report the maximizer on the |t| >= 1 side of the reciprocal symmetry,
    // matching the sup over all intervals (t, 1)
    if tx < 0.0 && tx > -1.0 {
        tx = 1.0 / tx;
    }
    (tx, fx, evals)
}

/// Closed-form constant C_α (whole line) or C_{α,+} (nonnegative data):
/// (α+1)²/(2α+1) times the supremum of the inner expression.
pub fn power_constant(alpha: f64, domain: Domain) -> Result<ConstantEstimate> {
    if alpha <= -0.5 {
        return Err(Error::Divergent(format!("alpha = {alpha} <= -1/2")));
    }
    let prefactor = (alpha + 1.0) * (alpha + 1.0) / (2.0 * alpha + 1.0);
    let (t, sup, evals) = power_inner_sup(alpha, domain, 4097, 120);
    Ok(ConstantEstimate {
        value: prefactor * sup,
        argmax_interval: (t, 1.0),
        domain,
        evaluations: evals,
    })
}

/// Estimate sup over intervals of the ratio mean(Ψ²)/(mean Ψ)².
///
/// Power kind reduces by scale invariance to the one-dimensional t = a/b
/// parametrization; otherwise a coarse 2-D scan over (a, b) in the search box
/// is refined around the best cell (first maximal cell in lexicographic
/// order, for determinism).
pub fn estimate_constant(
    psi: &PsiSpec,
    domain: Domain,
    search: SearchParams,
) -> Result<ConstantEstimate> {
    search.validate()?;
    match &psi.kind {
        PsiKind::Constant { c } => {
            if *c == 0.0 {
                return Err(Error::ZeroMean { a: 0.0, b: search.interval_bound });
            }
            Ok(ConstantEstimate {
                value: 1.0,
                argmax_interval: (0.0, search.interval_bound),
                domain,
                evaluations: 1,
            })
        }
        PsiKind::Power { alpha } => {
            if *alpha == 0.0 {
                // psi == 1 away from the origin: ratio is identically 1
                return Ok(ConstantEstimate {
                    value: 1.0,
                    argmax_interval: (0.0, search.interval_bound),
                    domain,
                    evaluations: 1,
                });
            }
            let prefactor = (alpha + 1.0) * (alpha + 1.0) / (2.0 * alpha + 1.0);
            let (t, sup, evals) =
                power_inner_sup(*alpha, domain, search.scan_points, search.refine_iters);
            Ok(ConstantEstimate {
                value: prefactor * sup,
                argmax_interval: (t, 1.0),
                domain,
                evaluations: evals,
            })
        }
        PsiKind::PiecewiseLinear { .. } => scan_2d(psi, domain, search),
    }
}

fn scan_2d(psi: &PsiSpec, domain: Domain, search: SearchParams) -> Result<ConstantEstimate> {
    let bound = search.interval_bound;
    let lo = match domain {
        Domain::WholeLine => -bound,
        Domain::NonnegativeOnly => 0.0,
    };
    let hi = bound;
    let n = search.scan_points;
    let step = (hi - lo) / (n - 1) as f64;

    let mut evals = 0u64;
    let mut best: Option<(f64, f64, f64)> = None; // (ratio, a, b)
    for i in 0..n {
        let a = lo + step * i as f64;
        for j in (i + 1)..n {
            let b = lo + step * j as f64;
            if let Ok(r) = interval_ratio(psi, a, b) {
                evals += 1;
                // strict > keeps the first maximal cell in (a, b) order
                if best.map_or(true, |(v, _, _)| r.ratio > v) {
                    best = Some((r.ratio, a, b));
                }
            }
        }
    }
    let (mut value, mut ba, mut bb) =
        best.ok_or_else(|| Error::SearchFailed("no interval with positive mean in box".into()))?;

    // local refinement: rescan a shrinking window around the best (a, b)
    let mut half = step;
    for _ in 0..search.refine_iters {
        let k = 8;
        let mut improved = false;
        for i in -(k as i64)..=(k as i64) {
            for j in -(k as i64)..=(k as i64) {
                let a = (ba + half * i as f64 / k as f64).max(lo);
                let b = (bb + half * j as f64 / k as f64).min(hi);
                if let Ok(r) = interval_ratio(psi, a, b) {
                    evals += 1;
                    if r.ratio > value {
                        value = r.ratio;
                        ba = a;
                        bb = b;
                        improved = true;
                    }
                }
            }
        }
        half *= 0.5;
        if !improved && half < 1e-14 * bound {
            break;
        }
    }
    Ok(ConstantEstimate {
        value,
        argmax_interval: (ba, bb),
        domain,
        evaluations: evals,
    })
}

/// Check condition "ratio <= candidate_C on every scanned interval", up to a
/// 1e-9 slack; returns the worst interval as witness on failure.
pub fn check_condition(
    psi: &PsiSpec,
    candidate_c: f64,
    domain: Domain,
    search: SearchParams,
) -> Result<ConditionCheck> {
    if candidate_c < 1.0 {
        return Err(Error::InvalidSpec(format!(
            "candidate constant {candidate_c} < 1 can never hold (Cauchy-Schwarz)"
        )));
    }
    let est = estimate_constant(psi, domain, search)?;
    if est.value <= candidate_c + 1e-9 {
        return Ok(ConditionCheck {
            holds: true,
            candidate_c,
            witness: None,
        });
    }
    let (a, b) = est.argmax_interval;
    let witness = interval_ratio(psi, a, b).ok();
    Ok(ConditionCheck {
        holds: false,
        candidate_c,
        witness,
    })
}
