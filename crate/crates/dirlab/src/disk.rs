//! The Poisson operator and Dirichlet energy on the unit disk.
//!
//! Boundary data live on a uniform grid of M = 2^k angles with a retained
//! Fourier band of K = M/4 modes. The harmonic extension is the Fourier
//! series u(r,θ) = a0/2 + Σ rⁿ(aₙ cos nθ + bₙ sin nθ), whose Dirichlet
//! energy has two independent evaluations:
//!
//!  * the spectral identity D[u] = π Σ n (aₙ² + bₙ²), and
//!  * the Douglas boundary double integral against the exact disk kernel
//!    ∂²G/∂ν_x∂ν_y = 1/(4π sin²((θ−φ)/2)).

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fourier {
    pub a0: f64,
    pub an: Vec<f64>,
    pub bn: Vec<f64>,
}

/// 2π-periodic boundary data: uniform samples plus their Fourier band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryFunction {
    pub samples: Vec<f64>,
    pub fourier: Fourier,
}

/// Fourier representation of the harmonic extension Ph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicExtension {
    pub fourier: Fourier,
}

/// The mixed second normal derivative of the disk Green function, evaluated
/// on the boundary: K(θ,φ) = 1/(4π sin²((θ−φ)/2)). With the chordal distance
/// |x−y| = 2|sin((θ−φ)/2)| this is exactly 1/(π|x−y|²).
pub fn disk_kernel(theta: f64, phi: f64) -> f64 {
    let s = (0.5 * (theta - phi)).sin();
    1.0 / (4.0 * std::f64::consts::PI * s * s)
}

/// Spectral decomposition of uniform boundary samples; retains K = M/4 modes.
pub fn decompose(samples: &[f64]) -> Result<BoundaryFunction> {
    let m = samples.len();
    if m < 8 || !m.is_power_of_two() {
        return Err(Error::InvalidSpec(format!(
            "sample count {m} must be a power of two >= 8"
        )));
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("boundary sample {bad}")));
    }
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);

    let k = m / 4;
    let scale = 2.0 / m as f64;
    let a0 = buf[0].re * scale;
    let mut an = Vec::with_capacity(k);
    let mut bn = Vec::with_capacity(k);
    for n in 1..=k {
        an.push(buf[n].re * scale);
        bn.push(-buf[n].im * scale);
    }
    Ok(BoundaryFunction {
        samples: samples.to_vec(),
        fourier: Fourier { a0, an, bn },
    })
}

impl BoundaryFunction {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        decompose(&samples)
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn extension(&self) -> HarmonicExtension {
        HarmonicExtension {
            fourier: self.fourier.clone(),
        }
    }

    pub fn min_sample(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_sample(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl HarmonicExtension {
    /// u(r, θ) by summing the series with trigonometric recurrences.
    pub fn eval(&self, r: f64, theta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(format!("r = {r} outside [0, 1]")));
        }
        let f = &self.fourier;
        let (sin_t, cos_t) = theta.sin_cos();
        let mut cos_n = 1.0; // cos(n θ) starting at n = 0
        let mut sin_n = 0.0;
        let mut rn = 1.0;
        let mut acc = 0.5 * f.a0;
        for n in 0..f.an.len() {
            // advance to n+1
            let c = cos_n * cos_t - sin_n * sin_t;
            let s = sin_n * cos_t + cos_n * sin_t;
            cos_n = c;
            sin_n = s;
            rn *= r;
            acc += rn * (f.an[n] * cos_n + f.bn[n] * sin_n);
        }
        Ok(acc)
    }

    /// Polar gradient (∂u/∂r, (1/r) ∂u/∂θ) by term-wise differentiation.
    pub fn gradient(&self, r: f64, theta: f64) -> Result<(f64, f64)> {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Domain(format!("r = {r} outside (0, 1]")));
        }
        Ok(self.gradient_unchecked(r, theta))
    }

    pub(crate) fn gradient_unchecked(&self, r: f64, theta: f64) -> (f64, f64) {
        let f = &self.fourier;
        let (sin_t, cos_t) = theta.sin_cos();
        let mut cos_n = 1.0;
        let mut sin_n = 0.0;
        let mut rn1 = 1.0; // r^{n-1}, starting at n = 1
        let mut du_dr = 0.0;
        let mut du_dt_over_r = 0.0;
        for n in 0..f.an.len() {
            let c = cos_n * cos_t - sin_n * sin_t;
            let s = sin_n * cos_t + cos_n * sin_t;
            cos_n = c;
            sin_n = s;
            if n > 0 {
                rn1 *= r;
            }
            let nn = (n + 1) as f64;
            let w = nn * rn1;
            du_dr += w * (f.an[n] * cos_n + f.bn[n] * sin_n);
            du_dt_over_r += w * (-f.an[n] * sin_n + f.bn[n] * cos_n);
        }
        (du_dr, du_dt_over_r)
    }

    /// Index of the last mode whose coefficients are not negligible relative
    /// to the largest one. The decomposition keeps K = M/4 modes, but smooth
    /// data fill only a few; quadrature loops stop at the significant band.
    pub(crate) fn significant_modes(&self) -> usize {
        let f = &self.fourier;
        let peak = f
            .an
            .iter()
            .chain(&f.bn)
            .fold(f.a0.abs(), |m, &c| m.max(c.abs()));
        if peak == 0.0 {
            return 0;
        }
        let cut = 1e-14 * peak;
        let mut last = 0;
        for n in 0..f.an.len() {
            if f.an[n].abs() > cut || f.bn[n].abs() > cut {
                last = n + 1;
            }
        }
        last
    }

    /// (u, ∂u/∂r, (1/r) ∂u/∂θ) in one pass over the first `kmax` modes.
    pub(crate) fn value_and_gradient(&self, r: f64, theta: f64, kmax: usize) -> (f64, f64, f64) {
        let f = &self.fourier;
        let (sin_t, cos_t) = theta.sin_cos();
        let mut cos_n = 1.0;
        let mut sin_n = 0.0;
        let mut rn1 = 1.0; // r^{n-1}
        let mut val = 0.5 * f.a0;
        let mut du_dr = 0.0;
        let mut du_dt_over_r = 0.0;
        for n in 0..kmax.min(f.an.len()) {
            let c = cos_n * cos_t - sin_n * sin_t;
            let s = sin_n * cos_t + cos_n * sin_t;
            cos_n = c;
            sin_n = s;
            if n > 0 {
                rn1 *= r;
            }
            let ce = f.an[n] * cos_n + f.bn[n] * sin_n;
            let se = -f.an[n] * sin_n + f.bn[n] * cos_n;
            let nn = (n + 1) as f64;
            val += rn1 * r * ce;
            du_dr += nn * rn1 * ce;
            du_dt_over_r += nn * rn1 * se;
        }
        (val, du_dr, du_dt_over_r)
    }

    /// D[u] = π Σ n (aₙ² + bₙ²).
    pub fn energy_fourier(&self) -> f64 {
        let f = &self.fourier;
        let mut acc = 0.0;
        for n in 0..f.an.len() {
            acc += (n + 1) as f64 * (f.an[n] * f.an[n] + f.bn[n] * f.bn[n]);
        }
        std::f64::consts::PI * acc
    }
}

/// Douglas boundary form of the Dirichlet energy:
/// D[Ph] = (1/8π) ∬ (h(θ)−h(φ))² / sin²((θ−φ)/2) dθ dφ,
/// periodic trapezoid on the M×M grid, diagonal cells set to the integrand
/// limit 4 h′(θ)² with the centered discrete slope.
pub fn douglas_energy(h: &BoundaryFunction) -> Result<f64> {
    if h.grid_size() < 16 {
        return Err(Error::Resolution(format!(
            "douglas quadrature needs M >= 16, got {}",
            h.grid_size()
        )));
    }
    Ok(symmetric_pair_energy(&h.samples, &h.samples))
}

/// Sum a slice pairwise; deterministic and low-drift for long accumulations.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// 1/sin²(π d / M) for offsets d = 0..=M/2 (index 0 unused).
fn kernel_by_offset(m: usize) -> Vec<f64> {
    let mut kern = vec![0.0; m / 2 + 1];
    for (d, k) in kern.iter_mut().enumerate().skip(1) {
        let s = (std::f64::consts::PI * d as f64 / m as f64).sin();
        *k = 1.0 / (s * s);
    }
    kern
}

/// The generic boundary double form
///
///   (1/8π) ∬ (p(θ)−p(φ))(q(θ)−q(φ)) / sin²((θ−φ)/2) dθ dφ
///
/// on the uniform grid. With p = q = h this is the Douglas energy; with
/// p = h and q = F₂∘h (F₂ the antiderivative of Ψ²) it is the boundary
/// representation of D[Φ∘Ph]. The kernel depends only on the index offset,
/// so the sum runs over offsets d = 1..M/2 with the d ↔ M−d mirror pairs
/// folded in, plus the diagonal limit 4 p′ q′.
pub(crate) fn symmetric_pair_energy(p: &[f64], q: &[f64]) -> f64 {
    let m = p.len();
    debug_assert_eq!(q.len(), m);
    let kern = kernel_by_offset(m);

    let mut per_offset = Vec::with_capacity(m / 2 + 1);
    for d in 1..=m / 2 {
        let mut s = 0.0;
        for i in 0..m - d {
            s += (p[i + d] - p[i]) * (q[i + d] - q[i]);
        }
        for i in m - d..m {
            let j = i + d - m;
            s += (p[j] - p[i]) * (q[j] - q[i]);
        }
        let fold = if d == m / 2 { 1.0 } else { 2.0 };
        per_offset.push(fold * kern[d] * s);
    }
    // diagonal: limit of the integrand is 4 p'(θ) q'(θ). The off-diagonal sum
    // is exact for trigonometric polynomials, so the slope stencil sets the
    // overall accuracy; fourth order keeps it at O((k/M)^5) per mode k.
    let mf = m as f64;
    let mut diag = Vec::with_capacity(m);
    for i in 0..m {
        let dp = slope(p, i, mf);
        let dq = slope(q, i, mf);
        diag.push(4.0 * dp * dq);
    }

    let total = pairwise_sum(&per_offset) + pairwise_sum(&diag);
    let step = 2.0 * std::f64::consts::PI / mf;
    total * step * step / (8.0 * std::f64::consts::PI)
}

/// Fourth-order centered difference of periodic samples at node i, in θ.
fn slope(p: &[f64], i: usize, mf: f64) -> f64 {
    let m = p.len();
    let at = |k: isize| p[(i as isize + k).rem_euclid(m as isize) as usize];
    let num = 8.0 * (at(1) - at(-1)) - (at(2) - at(-2));
    num * mf / (12.0 * 2.0 * std::f64::consts::PI)
}

/// Index sets for the extremal-experiment partition of the boundary grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// The arc Γ where the data equal a.
    Core,
    /// The transition bands γ_ε.
    Ramp,
    /// ∂Ω \ [Γ]_ε where the data equal b.
    Outside,
}

fn bucket(x: Region, y: Region) -> usize {
    use Region::*;
    match (x, y) {
        (Ramp, Ramp) => 0,
        (Ramp, _) | (_, Ramp) => 1,
        // Core×Core and Outside×Outside carry zero weight (equal data), so
        // folding them into the third bucket keeps the partition exact
        _ => 2,
    }
}

/// Partitioned version of `symmetric_pair_energy` for two weight kinds at
/// once: the I-side (p1, q1) and the J-side (p2, p2). Returns the bucket
/// totals ([I1, I2, I3], [J1, J2, J3]) where bucket 0 is γ×γ, bucket 1 the
/// mixed terms, bucket 2 the Γ × (∂Ω \ [Γ]_ε) pairs.
pub(crate) fn partitioned_pair_sums(
    p1: &[f64],
    q1: &[f64],
    p2: &[f64],
    regions: &[Region],
) -> ([f64; 3], [f64; 3]) {
    let m = p1.len();
    debug_assert!(q1.len() == m && p2.len() == m && regions.len() == m);
    let kern = kernel_by_offset(m);

    let mut per_offset_i: [Vec<f64>; 3] = [
        Vec::with_capacity(m / 2),
        Vec::with_capacity(m / 2),
        Vec::with_capacity(m / 2),
    ];
    let mut per_offset_j: [Vec<f64>; 3] = [
        Vec::with_capacity(m / 2),
        Vec::with_capacity(m / 2),
        Vec::with_capacity(m / 2),
    ];
    for d in 1..=m / 2 {
        let mut si = [0.0f64; 3];
        let mut sj = [0.0f64; 3];
        let mut accum = |i: usize, j: usize| {
            let b = bucket(regions[i], regions[j]);
            si[b] += (p1[j] - p1[i]) * (q1[j] - q1[i]);
            let w = p2[j] - p2[i];
            sj[b] += w * w;
        };
        for i in 0..m - d {
            accum(i, i + d);
        }
        for i in m - d..m {
            accum(i, i + d - m);
        }
        let fold = if d == m / 2 { 1.0 } else { 2.0 };
        for b in 0..3 {
            per_offset_i[b].push(fold * kern[d] * si[b]);
            per_offset_j[b].push(fold * kern[d] * sj[b]);
        }
    }

    let mf = m as f64;
    let mut diag_i = [0.0f64; 3];
    let mut diag_j = [0.0f64; 3];
    for i in 0..m {
        let b = bucket(regions[i], regions[i]);
        let dp1 = slope(p1, i, mf);
        let dq1 = slope(q1, i, mf);
        let dp2 = slope(p2, i, mf);
        diag_i[b] += 4.0 * dp1 * dq1;
        diag_j[b] += 4.0 * dp2 * dp2;
    }

    let step = 2.0 * std::f64::consts::PI / mf;
    let scale = step * step / (8.0 * std::f64::consts::PI);
    let mut out_i = [0.0f64; 3];
    let mut out_j = [0.0f64; 3];
    for b in 0..3 {
        out_i[b] = (pairwise_sum(&per_offset_i[b]) + diag_i[b]) * scale;
        out_j[b] = (pairwise_sum(&per_offset_j[b]) + diag_j[b]) * scale;
    }
    (out_i, out_j)
}

/// Uniform angular grid θ_j = 2πj/M.
pub fn theta_grid(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64)
        .collect()
}

/// Sample a closure on the uniform grid and decompose.
pub fn boundary_from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<BoundaryFunction> {
    let samples: Vec<f64> = theta_grid(m).into_iter().map(f).collect();
    decompose(&samples)
}
