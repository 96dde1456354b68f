//! The two sides of the composed-energy inequality on the disk:
//! the left side D[Φ∘Ph] by polar volume quadrature of Ψ(u)²|∇u|² and,
//! independently, by the boundary double integral with the pairwise
//! Ψ²-antiderivative weight; the right side D[P(Φ∘h)] as the Douglas energy
//! of the composed boundary data.
//!
//! The volume route is the authoritative left side: the boundary route
//! shares its quadrature machinery with the right side, and a common-mode
//! error there could mask a violation of the inequality.

use serde::Serialize;

use crate::disk::{decompose, douglas_energy, symmetric_pair_energy, BoundaryFunction, HarmonicExtension};
use crate::error::{Error, Result};
use crate::psi::{Domain, PsiSpec, TruncationLevel};

/// Relative tolerance for agreement of the two left-side routes.
pub const ROUTE_TOLERANCE: f64 = 1e-5;
/// Relative slack allowed when checking the inequality itself.
pub const INEQUALITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureConfig {
    /// Gauss–Legendre order in the (graded) radial variable.
    pub radial_points: usize,
    /// Uniform angular grid size; a power of two.
    pub angular_points: usize,
    /// Boundary grid M for the double integrals.
    pub boundary_grid: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            radial_points: 128,
            angular_points: 2048,
            boundary_grid: 1024,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radial_points == 0 || self.angular_points == 0 || self.boundary_grid == 0 {
            return Err(Error::InvalidSpec("quadrature sizes must be positive".into()));
        }
        if !self.angular_points.is_power_of_two() {
            return Err(Error::InvalidSpec(format!(
                "angular_points = {} must be a power of two",
                self.angular_points
            )));
        }
        Ok(())
    }
}

/// Both sides of the inequality plus the two left-side routes.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyPair {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub lhs_routes: LhsRoutes,
}

#[derive(Debug, Clone, Serialize)]
pub struct LhsRoutes {
    pub volume: f64,
    pub boundary: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    #[serde(flatten)]
    pub pair: EnergyPair,
    pub constant: f64,
    pub pass: bool,
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p_n(x) and p_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Radial quadrature for the unit disk, graded toward the boundary by the
/// map r = 1 − (1 − s)², s ∈ [0, 1]. Returns (r_k, combined weight_k) such
/// that ∫₀¹ f(r) dr ≈ Σ w_k f(r_k).
fn graded_radial_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mut rs = Vec::with_capacity(n);
    let mut wr = Vec::with_capacity(n);
    for (&x, &w) in xs.iter().zip(&ws) {
        let s = 0.5 * (x + 1.0);
        let r = 1.0 - (1.0 - s) * (1.0 - s);
        let jac = 2.0 * (1.0 - s) * 0.5; // dr/ds times ds/dx
        rs.push(r);
        wr.push(w * jac);
    }
    (rs, wr)
}

/// ∫_Ω g(u) |∇u|² dx in polar coordinates, Gauss–Legendre (graded) in r and
/// periodic trapezoid in θ. `g` is the squared weight, e.g. Ψ² or Ψ_N².
fn volume_energy(g: &dyn Fn(f64) -> f64, u: &HarmonicExtension, q: &QuadratureConfig) -> Result<f64> {
    q.validate()?;
    let (rs, wr) = graded_radial_rule(q.radial_points);
    let nt = q.angular_points;
    let dtheta = 2.0 * std::f64::consts::PI / nt as f64;
    let kmax = u.significant_modes();

    let integrand = |r: f64, theta: f64| {
        let (uval, dr, dt) = u.value_and_gradient(r, theta, kmax);
        g(uval) * (dr * dr + dt * dt)
    };

    let mut ring_sums = Vec::with_capacity(rs.len());
    for (&r, &w) in rs.iter().zip(&wr) {
        let mut ring = 0.0;
        for jt in 0..nt {
            let theta = dtheta * jt as f64;
            let mut val = integrand(r, theta);
            if !val.is_finite() {
                // quadrature node fell on a pole of psi; jitter once
                val = integrand(r, theta + 1e-9 * dtheta);
                if !val.is_finite() {
                    return Err(Error::Quadrature(format!(
                        "integrand nonfinite at r = {r}, theta = {theta} even after jitter"
                    )));
                }
            }
            ring += val;
        }
        ring_sums.push(ring * dtheta * w * r);
    }
    Ok(crate::disk::pairwise_sum(&ring_sums))
}

/// Validate that the range of u (from the boundary extrema, by the maximum
/// principle) sits inside the declared domain of psi.
fn check_range(psi: &PsiSpec, h: &BoundaryFunction) -> Result<()> {
    if psi.domain == Domain::NonnegativeOnly && h.min_sample() < 0.0 {
        return Err(Error::Domain(format!(
            "boundary data reach {} < 0 but psi is declared on the nonnegative half-line",
            h.min_sample()
        )));
    }
    Ok(())
}

/// D[Φ∘Ph] = ∫ Ψ(Ph)² |∇Ph|², the volume route.
pub fn energy_composed_volume(
    psi: &PsiSpec,
    h: &BoundaryFunction,
    q: &QuadratureConfig,
) -> Result<f64> {
    check_range(psi, h)?;
    volume_energy(&|t| psi.eval_sq_unchecked(t), &h.extension(), q)
}

/// Same with the truncated weight Ψ_N².
pub fn energy_composed_volume_truncated(
    psi: &PsiSpec,
    level: TruncationLevel,
    h: &BoundaryFunction,
    q: &QuadratureConfig,
) -> Result<f64> {
    check_range(psi, h)?;
    let n = f64::from(level.0);
    volume_energy(
        &|t| {
            let v = psi.eval_unchecked(t).min(n);
            v * v
        },
        &h.extension(),
        q,
    )
}

/// D[Φ∘Ph] by the boundary representation: the double integral of
/// (h(y)−h(x)) ∫_{h(x)}^{h(y)} Ψ² against the disk kernel, evaluated through
/// pairwise differences of the antiderivative of Ψ².
pub fn energy_composed_boundary(psi: &PsiSpec, h: &BoundaryFunction) -> Result<f64> {
    if h.grid_size() < 16 {
        return Err(Error::Resolution(format!(
            "boundary route needs M >= 16, got {}",
            h.grid_size()
        )));
    }
    check_range(psi, h)?;
    let f2: Vec<f64> = h.samples.iter().map(|&v| psi.psi_sq_antiderivative(v)).collect();
    Ok(symmetric_pair_energy(&h.samples, &f2))
}

/// D[P(Φ∘h)]: apply Φ to the samples, re-decompose, take the Douglas energy.
pub fn energy_of_composed_data(psi: &PsiSpec, h: &BoundaryFunction) -> Result<f64> {
    check_range(psi, h)?;
    let composed: Vec<f64> = h.samples.iter().map(|&v| psi.phi_unchecked(v)).collect();
    douglas_energy(&decompose(&composed)?)
}

/// Same with the truncated antiderivative Φ_N.
pub fn energy_of_composed_data_truncated(
    psi: &PsiSpec,
    level: TruncationLevel,
    h: &BoundaryFunction,
) -> Result<f64> {
    check_range(psi, h)?;
    let composed: Vec<f64> = h
        .samples
        .iter()
        .map(|&v| psi.phi_truncated_unchecked(level, v))
        .collect();
    douglas_energy(&decompose(&composed)?)
}

/// Check D[Φ∘Ph] ≤ C·D[P(Φ∘h)] (and the free reverse direction) at the given
/// constant. The left side is the volume route; the boundary route must
/// agree within `ROUTE_TOLERANCE` or the check aborts with a
/// numerical-quality error rather than a verdict.
pub fn verify_theorem(
    psi: &PsiSpec,
    h: &BoundaryFunction,
    constant: f64,
    q: &QuadratureConfig,
) -> Result<TheoremCheck> {
    let volume = energy_composed_volume(psi, h, q)?;
    let boundary = energy_composed_boundary(psi, h)?;
    if (volume - boundary).abs() > ROUTE_TOLERANCE * volume.abs().max(1.0) {
        return Err(Error::RouteDisagreement { volume, boundary });
    }
    let rhs = energy_of_composed_data(psi, h)?;
    let lhs = volume;
    let pass = lhs <= constant * rhs * (1.0 + INEQUALITY_SLACK) + 1e-14
        && rhs <= lhs * (1.0 + INEQUALITY_SLACK) + 1e-14;
    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::NAN };
    Ok(TheoremCheck {
        pair: EnergyPair {
            lhs,
            rhs,
            ratio,
            lhs_routes: LhsRoutes { volume, boundary },
        },
        constant,
        pass,
    })
}

/// Both energies along a ladder of truncation levels.
pub fn truncation_sweep(
    psi: &PsiSpec,
    h: &BoundaryFunction,
    levels: &[u32],
    q: &QuadratureConfig,
) -> Result<Vec<(u32, f64, f64)>> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec("truncation levels must be increasing".into()));
    }
    let mut out = Vec::with_capacity(levels.len());
    for &n in levels {
        let level = TruncationLevel::new(n)?;
        let lhs = energy_composed_volume_truncated(psi, level, h, q)?;
        let rhs = energy_of_composed_data_truncated(psi, level, h)?;
        out.push((n, lhs, rhs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::boundary_from_fn;
    use std::f64::consts::PI;

    fn power(alpha: f64) -> PsiSpec {
        PsiSpec::power(alpha, Domain::WholeLine).unwrap()
    }

    fn const_psi(c: f64) -> PsiSpec {
        PsiSpec::constant(c, Domain::WholeLine).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (xs, ws) = gauss_legendre(8);
        // degree-15 polynomial x^14: integral over [-1,1] is 2/15
        let s: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        let s: f64 = ws.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn volume_energy_reduces_to_dirichlet_for_unit_psi() {
        let q = QuadratureConfig::default();
        let h = boundary_from_fn(256, |t| t.cos()).unwrap();
        let e = energy_composed_volume(&const_psi(1.0), &h, &q).unwrap();
        assert!((e - PI).abs() < 1e-10 * PI, "{e}");

        let h = boundary_from_fn(256, |_| 3.0).unwrap();
        let e = energy_composed_volume(&const_psi(1.0), &h, &q).unwrap();
        assert!(e.abs() < 1e-18);
    }

    #[test]
    fn composed_volume_analytic_spot_value() {
        // psi(t) = t on the range of h = 1 + cos(theta) >= 0:
        // integrand u^2 |grad u|^2 with u = 1 + r cos(theta), |grad u| = 1,
        // integral = 5 pi / 4
        let q = QuadratureConfig::default();
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(256, |t| 1.0 + t.cos()).unwrap();
        let e = energy_composed_volume(&psi, &h, &q).unwrap();
        assert!((e - 1.25 * PI).abs() < 1e-9 * PI, "{e}");
    }

    #[test]
    fn composed_boundary_matches_volume_spot_value() {
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(1024, |t| 1.0 + t.cos()).unwrap();
        let e = energy_composed_boundary(&psi, &h).unwrap();
        assert!((e - 1.25 * PI).abs() < 1e-6 * PI, "{e}");
    }

    #[test]
    fn composed_boundary_collapses_to_douglas_for_unit_psi() {
        let h = boundary_from_fn(512, |t| 0.3 + 1.2 * t.cos() - 0.7 * (3.0 * t).sin()).unwrap();
        let a = energy_composed_boundary(&const_psi(1.0), &h).unwrap();
        let b = crate::disk::douglas_energy(&h).unwrap();
        assert_eq!(a, b, "identical sums, bit for bit");
    }

    #[test]
    fn composed_data_analytic_spot_value() {
        // Phi(t) = t^2/2 on h = 1 + cos: Phi(h) = 3/4 + cos + cos(2t)/4,
        // energy = pi (1 + 2/16) = 9 pi / 8
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(1024, |t| 1.0 + t.cos()).unwrap();
        let e = energy_of_composed_data(&psi, &h).unwrap();
        assert!((e - 9.0 * PI / 8.0).abs() < 1e-6 * PI, "{e}");

        let e = energy_of_composed_data(&const_psi(1.0), &h).unwrap();
        let d = crate::disk::douglas_energy(&h).unwrap();
        assert!((e - d).abs() <= 1e-12 * d);

        let hc = boundary_from_fn(64, |_| 2.0).unwrap();
        assert!(energy_of_composed_data(&power(2.0), &hc).unwrap().abs() < 1e-18);
    }

    #[test]
    fn verify_theorem_examples() {
        let q = QuadratureConfig::default();
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(1024, |t| 1.0 + t.cos()).unwrap();
        let chk = verify_theorem(&psi, &h, 4.0 / 3.0, &q).unwrap();
        assert!(chk.pass);
        assert!((chk.pair.ratio - 10.0 / 9.0).abs() < 1e-5);

        let h = boundary_from_fn(1024, |t| 0.4 * t.cos() + (2.0 * t).sin()).unwrap();
        let chk = verify_theorem(&const_psi(1.0), &h, 1.0, &q).unwrap();
        assert!(chk.pass);
        assert!((chk.pair.ratio - 1.0).abs() < 1e-9);

        let h = boundary_from_fn(1024, |t| t.cos()).unwrap();
        let chk = verify_theorem(&power(1.0), &h, 1.5, &q).unwrap();
        assert!(chk.pass);
        assert!(chk.pair.ratio <= 1.5);
    }

    #[test]
    fn verify_theorem_fails_below_true_ratio() {
        // ratio for alpha = 1 on 1 + cos is 10/9; a constant below that must fail
        let q = QuadratureConfig::default();
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(1024, |t| 1.0 + t.cos()).unwrap();
        let chk = verify_theorem(&psi, &h, 1.05, &q).unwrap();
        assert!(!chk.pass);
    }

    #[test]
    fn truncation_sweep_monotone_and_convergent() {
        let q = QuadratureConfig::default();
        let h = boundary_from_fn(512, |t| 3.0 * t.cos()).unwrap();
        let rows = truncation_sweep(&power(1.0), &h, &[1, 2, 4, 8, 16], &q).unwrap();
        let lhs_full = energy_composed_volume(&power(1.0), &h, &q).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-10, "lhs_N not nondecreasing");
        }
        // clamp inactive for N >= 3 since |u| <= 3
        assert!((rows.last().unwrap().1 - lhs_full).abs() < 1e-10 * lhs_full);
        let rhs_full = energy_of_composed_data(&power(1.0), &h).unwrap();
        assert!((rows.last().unwrap().2 - rhs_full).abs() < 1e-9 * rhs_full);

        // small range: N = 1000 leaves psi untouched on h = cos
        let h = boundary_from_fn(256, |t| t.cos()).unwrap();
        let rows = truncation_sweep(&power(1.0), &h, &[1000], &q).unwrap();
        let full = energy_composed_volume(&power(1.0), &h, &q).unwrap();
        assert!((rows[0].1 - full).abs() <= 1e-9 * full.max(1e-12));

        // constant psi: flat sequence
        let rows = truncation_sweep(&const_psi(1.0), &h, &[1, 2, 4], &q).unwrap();
        assert!((rows[0].1 - rows[2].1).abs() < 1e-12 * rows[0].1.max(1.0));

        assert!(truncation_sweep(&power(1.0), &h, &[4, 2], &q).is_err());
    }

    #[test]
    fn chain_rule_consistency_on_fine_grid() {
        // plain Dirichlet energy of Phi(u) by finite differences must match
        // the weighted volume quadrature
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(256, |t| 1.5 + t.cos()).unwrap();
        let u = h.extension();
        let q = QuadratureConfig::default();
        let weighted = energy_composed_volume(&psi, &h, &q).unwrap();

        let nr = 600;
        let nt = 1024;
        let phi_u = |r: f64, t: f64| {
            let v = u.eval(r.min(1.0), t).unwrap();
            psi.phi_unchecked(v)
        };
        let mut acc = 0.0;
        for ir in 0..nr {
            let r = (ir as f64 + 0.5) / nr as f64;
            for it in 0..nt {
                let t = 2.0 * PI * it as f64 / nt as f64;
                let d = 1e-5;
                let gr = (phi_u(r + d, t) - phi_u(r - d, t)) / (2.0 * d);
                let gt = (phi_u(r, t + d) - phi_u(r, t - d)) / (2.0 * d * r);
                acc += (gr * gr + gt * gt) * r;
            }
        }
        acc *= (1.0 / nr as f64) * (2.0 * PI / nt as f64);
        assert!(
            (acc - weighted).abs() < 5e-3 * weighted,
            "finite differences {acc} vs quadrature {weighted}"
        );
    }

    #[test]
    fn range_validation_rejects_signed_data_for_nonnegative_psi() {
        let psi = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        let h = boundary_from_fn(256, |t| t.cos()).unwrap();
        let q = QuadratureConfig::default();
        assert!(matches!(
            energy_composed_volume(&psi, &h, &q),
            Err(Error::Domain(_))
        ));
        assert!(energy_composed_boundary(&psi, &h).is_err());
    }
}
