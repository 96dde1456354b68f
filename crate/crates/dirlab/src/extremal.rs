//! The sharpness experiment: step/ramp boundary data concentrated on an arc,
//! the I/J partition of the boundary double integrals, the ε-sweep, and the
//! extrapolation of the energy ratio toward the best constant.
//!
//! The data equal `a` on the arc Γ, `b` off its ε-neighborhood, and ramp
//! linearly across the two transition bands. As ε shrinks, both energies are
//! dominated by a log(1/ε)-divergent Γ×outside term whose I/J quotient is
//! exactly the interval ratio of Ψ on (a, b); the bounded remainders decay
//! like 1/log(1/ε), which fixes the extrapolation variable.

use serde::Serialize;

use crate::disk::{decompose, partitioned_pair_sums, theta_grid, BoundaryFunction, Region};
use crate::error::{Error, Result};
use crate::psi::PsiSpec;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Step/ramp boundary data: value `a` on the arc, `b` outside the
/// ε-neighborhood, linear in arc distance on the transition bands.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StepRampData {
    pub a: f64,
    pub b: f64,
    /// The arc Γ as (start, end) angles, 0 <= start < end < 2π.
    pub arc: (f64, f64),
    /// Transition width in arc length.
    pub epsilon: f64,
}

impl StepRampData {
    pub fn new(a: f64, b: f64, arc: (f64, f64), epsilon: f64) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidSpec("step levels a and b must differ".into()));
        }
        let (s, e) = arc;
        if !(0.0 <= s && s < e && e < TAU) {
            return Err(Error::InvalidSpec(format!(
                "arc ({s}, {e}) must satisfy 0 <= start < end < 2*pi"
            )));
        }
        let gap = TAU - (e - s);
        if !(epsilon > 0.0 && epsilon < 0.5 * gap) {
            return Err(Error::InvalidSpec(format!(
                "epsilon = {epsilon} must lie in (0, {})",
                0.5 * gap
            )));
        }
        Ok(StepRampData { a, b, arc, epsilon })
    }

    /// Arc distance from θ to Γ (0 on the arc itself).
    fn distance(&self, theta: f64) -> f64 {
        let (s, e) = self.arc;
        if (s..=e).contains(&theta) {
            return 0.0;
        }
        let circ = |x: f64, y: f64| {
            let d = (x - y).abs() % TAU;
            d.min(TAU - d)
        };
        circ(theta, s).min(circ(theta, e))
    }

    fn value(&self, theta: f64) -> f64 {
        let d = self.distance(theta);
        if d == 0.0 {
            self.a
        } else if d >= self.epsilon {
            self.b
        } else {
            self.a + (self.b - self.a) * d / self.epsilon
        }
    }

    fn region(&self, theta: f64) -> Region {
        let d = self.distance(theta);
        if d == 0.0 {
            Region::Core
        } else if d <= self.epsilon {
            Region::Ramp
        } else {
            Region::Outside
        }
    }
}

/// One ε of the sweep: both energies (boundary route), their ratio, and the
/// I/J partition diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalSweepRow {
    pub epsilon: f64,
    pub grid: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

/// Result of fitting the sweep ratios against 1/log(1/ε).
#[derive(Debug, Clone, Serialize)]
pub struct Extrapolation {
    pub intercept: f64,
    pub slope: f64,
    /// Root-mean-square residual of the linear fit.
    pub residual: f64,
    /// False when the ratios are not nondecreasing along the ladder beyond
    /// noise, which flags quadrature trouble.
    pub monotone: bool,
}

/// Sample the step/ramp data on M uniform nodes.
pub fn make_step_ramp(spec: &StepRampData, m: usize) -> Result<BoundaryFunction> {
    if m < 16 || !m.is_power_of_two() {
        return Err(Error::InvalidSpec(format!("grid {m} must be a power of two >= 16")));
    }
    let node_span = spec.epsilon / (TAU / m as f64);
    if node_span < 8.0 {
        return Err(Error::Resolution(format!(
            "epsilon = {} spans only {node_span:.1} of {m} samples; need >= 8",
            spec.epsilon
        )));
    }
    let samples: Vec<f64> = theta_grid(m).into_iter().map(|t| spec.value(t)).collect();
    decompose(&samples)
}

/// The I and J partition of the two boundary energies over
/// γ_ε×γ_ε, mixed, and Γ×(∂Ω \ [Γ]_ε) index sets.
/// Returns ([I1, I2, I3], [J1, J2, J3]); the sums telescope exactly to the
/// unpartitioned boundary energies since the omitted constant×constant cells
/// carry zero weight.
pub fn decompose_energy(
    psi: &PsiSpec,
    spec: &StepRampData,
    m: usize,
) -> Result<([f64; 3], [f64; 3])> {
    let h = make_step_ramp(spec, m)?;
    let regions: Vec<Region> = theta_grid(m).into_iter().map(|t| spec.region(t)).collect();
    let f2: Vec<f64> = h.samples.iter().map(|&v| psi.psi_sq_antiderivative(v)).collect();
    let phi: Vec<f64> = h.samples.iter().map(|&v| psi.phi_unchecked(v)).collect();
    Ok(partitioned_pair_sums(&h.samples, &f2, &phi, &regions))
}

/// M as a function of ε: at least 64 nodes per unit of 1/ε across the ramp,
/// capped to keep the O(M²) double sum affordable.
pub fn grid_for_epsilon(epsilon: f64, cap: usize) -> usize {
    let want = 64.0 * TAU / epsilon;
    let mut m = 256usize;
    while (m as f64) < want && m < cap {
        m *= 2;
    }
    m.min(cap)
}

/// Run the ε-sweep. The ladder must be decreasing; each row reports both
/// energies via the boundary route together with the I/J diagnostics.
pub fn sweep(
    psi: &PsiSpec,
    a: f64,
    b: f64,
    arc: (f64, f64),
    eps_ladder: &[f64],
    m_cap: usize,
) -> Result<Vec<ExtremalSweepRow>> {
    if eps_ladder.is_empty() {
        return Err(Error::InvalidSpec("empty epsilon ladder".into()));
    }
    if eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidSpec("epsilon ladder must be decreasing".into()));
    }
    let mut rows = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        let spec = StepRampData::new(a, b, arc, eps)?;
        let m = grid_for_epsilon(eps, m_cap);
        let (i, j) = decompose_energy(psi, &spec, m)?;
        let lhs = i[0] + i[1] + i[2];
        let rhs = j[0] + j[1] + j[2];
        rows.push(ExtremalSweepRow {
            epsilon: eps,
            grid: m,
            lhs,
            rhs,
            ratio: lhs / rhs,
            i1: i[0],
            i2: i[1],
            i3: i[2],
            j1: j[0],
            j2: j[1],
            j3: j[2],
        });
    }
    Ok(rows)
}

/// Least-squares fit of ratio against x = 1/log(1/ε); the x → 0 intercept
/// estimates the ε → 0 limit of the ratio.
pub fn extrapolate(rows: &[ExtremalSweepRow]) -> Result<Extrapolation> {
    if rows.len() < 3 {
        return Err(Error::Extrapolation(format!(
            "need >= 3 rows, got {}",
            rows.len()
        )));
    }
    for r in rows {
        if !(r.epsilon > 0.0 && r.epsilon < 1.0) {
            return Err(Error::Extrapolation(format!(
                "epsilon = {} outside (0, 1); 1/log(1/eps) undefined",
                r.epsilon
            )));
        }
    }
    // geometric ladder: constant consecutive quotients
    let q0 = rows[1].epsilon / rows[0].epsilon;
    for w in rows.windows(2) {
        let q = w[1].epsilon / w[0].epsilon;
        if (q - q0).abs() > 1e-9 * q0 {
            return Err(Error::Extrapolation("ladder is not geometric".into()));
        }
    }

    let xs: Vec<f64> = rows.iter().map(|r| 1.0 / (1.0 / r.epsilon).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::Extrapolation("degenerate abscissas".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    // epsilon decreasing means ratios should be nondecreasing up to noise
    let monotone = ys.windows(2).all(|w| w[1] >= w[0] - 1e-3);
    Ok(Extrapolation {
        intercept,
        slope,
        residual,
        monotone,
    })
}

/// A geometric ladder ε = base·2^{-k} for k in [k_min, k_max].
pub fn geometric_ladder(base: f64, k_min: u32, k_max: u32) -> Vec<f64> {
    (k_min..=k_max).map(|k| base * 0.5f64.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{energy_composed_boundary, energy_of_composed_data};
    use crate::psi::Domain;
    use std::f64::consts::PI;

    const HALF_ARC: (f64, f64) = (0.0, PI);

    fn power(alpha: f64) -> PsiSpec {
        PsiSpec::power(alpha, Domain::WholeLine).unwrap()
    }

    #[test]
    fn step_ramp_construction() {
        let spec = StepRampData::new(0.0, 1.0, HALF_ARC, PI / 8.0).unwrap();
        let h = make_step_ramp(&spec, 256).unwrap();
        let grid = theta_grid(256);
        for (&t, &v) in grid.iter().zip(&h.samples) {
            assert!((0.0..=1.0).contains(&v));
            if (0.0..=PI).contains(&t) {
                assert_eq!(v, 0.0, "theta = {t} on the arc");
            }
            if t > PI + PI / 8.0 && t < TAU - PI / 8.0 {
                assert_eq!(v, 1.0, "theta = {t} outside the neighborhood");
            }
        }

        assert!(StepRampData::new(1.0, 1.0, HALF_ARC, 0.1).is_err());
        assert!(StepRampData::new(0.0, 1.0, HALF_ARC, PI).is_err());
        // epsilon under-resolved by the grid
        let tight = StepRampData::new(0.0, 1.0, HALF_ARC, PI / 64.0).unwrap();
        assert!(matches!(make_step_ramp(&tight, 64), Err(Error::Resolution(_))));
    }

    #[test]
    fn degenerate_wide_ramp_is_continuous_piecewise_linear() {
        let eps = PI / 2.0 * 0.999;
        let spec = StepRampData::new(-1.0, 1.0, HALF_ARC, eps).unwrap();
        let h = make_step_ramp(&spec, 512).unwrap();
        // triangle-like data: no jumps larger than one ramp step
        let max_step = h
            .samples
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0f64, f64::max);
        assert!(max_step < 2.0 * (TAU / 512.0) / eps * 2.0);
    }

    #[test]
    fn partition_is_exact() {
        let spec = StepRampData::new(0.0, 1.0, HALF_ARC, PI / 8.0).unwrap();
        for &alpha in &[0.5, 1.0] {
            let psi = power(alpha);
            let (i, j) = decompose_energy(&psi, &spec, 512).unwrap();
            let h = make_step_ramp(&spec, 512).unwrap();
            let lhs = energy_composed_boundary(&psi, &h).unwrap();
            let rhs = energy_of_composed_data(&psi, &h).unwrap();
            let isum = i[0] + i[1] + i[2];
            let jsum = j[0] + j[1] + j[2];
            assert!(
                (isum - lhs).abs() <= 1e-9 * lhs.abs().max(1.0),
                "I partition {isum} vs {lhs}"
            );
            assert!(
                (jsum - rhs).abs() <= 1e-9 * rhs.abs().max(1.0),
                "J partition {jsum} vs {rhs}"
            );
        }
    }

    #[test]
    fn unit_psi_makes_both_sides_equal() {
        let psi = PsiSpec::constant(1.0, Domain::WholeLine).unwrap();
        let spec = StepRampData::new(0.0, 1.0, HALF_ARC, PI / 8.0).unwrap();
        let (i, j) = decompose_energy(&psi, &spec, 512).unwrap();
        for s in 0..3 {
            assert!(
                (i[s] - j[s]).abs() <= 1e-12 * i[s].abs().max(1e-12),
                "I{} = {} vs J{} = {}",
                s + 1,
                i[s],
                s + 1,
                j[s]
            );
        }
    }

    #[test]
    fn i3_grows_logarithmically() {
        let psi = power(1.0);
        let ladder = geometric_ladder(PI, 4, 8);
        let rows = sweep(&psi, 0.0, 1.0, HALF_ARC, &ladder, 1 << 14).unwrap();
        let mut increments = Vec::new();
        for w in rows.windows(2) {
            let d = w[1].i3 - w[0].i3;
            assert!(d > 0.0, "I3 must grow as epsilon halves");
            increments.push(d);
        }
        // log growth: increments per halving settle to a positive constant
        let last = increments[increments.len() - 1];
        let prev = increments[increments.len() - 2];
        assert!(
            (last - prev).abs() < 0.3 * prev,
            "increments {prev} -> {last} not stabilizing"
        );
        // bounded remainders
        for w in rows.windows(2) {
            assert!((w[1].i1 - w[0].i1).abs() < 0.2 * w[0].i1.abs().max(1.0));
            assert!((w[1].j1 - w[0].j1).abs() < 0.2 * w[0].j1.abs().max(1.0));
        }
    }

    #[test]
    fn unit_psi_sweep_has_ratio_one() {
        let psi = PsiSpec::constant(1.0, Domain::WholeLine).unwrap();
        let ladder = geometric_ladder(PI, 4, 6);
        let rows = sweep(&psi, 0.0, 1.0, HALF_ARC, &ladder, 1 << 13).unwrap();
        for r in &rows {
            assert!((r.ratio - 1.0).abs() < 1e-12);
        }
        let fit = extrapolate(&rows).unwrap();
        assert!((fit.intercept - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ratios_sandwiched_and_increasing() {
        let psi = power(1.0);
        let ladder = geometric_ladder(PI, 4, 9);
        let rows = sweep(&psi, 0.0, 1.0, HALF_ARC, &ladder, 1 << 14).unwrap();
        let c_plus = 4.0 / 3.0;
        for r in &rows {
            assert!(r.ratio >= 1.0 - 1e-9);
            assert!(r.ratio <= c_plus * (1.0 + 1e-6), "ratio {} above C", r.ratio);
        }
        for w in rows.windows(2) {
            assert!(w[1].ratio >= w[0].ratio - 1e-3);
        }
    }

    #[test]
    fn extrapolate_validates_input() {
        let psi = power(1.0);
        let ladder = geometric_ladder(PI, 4, 5);
        let rows = sweep(&psi, 0.0, 1.0, HALF_ARC, &ladder, 1 << 13).unwrap();
        assert!(extrapolate(&rows).is_err(), "two rows are not enough");

        assert!(sweep(&psi, 0.0, 1.0, HALF_ARC, &[0.1, 0.2], 1 << 12).is_err());
    }
}
