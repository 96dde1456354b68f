//! The one-variable weight Ψ, its antiderivative Φ, the antiderivative of Ψ²,
//! and the clamped truncations Ψ_N, Φ_N.
//!
//! Three families are supported: the power family Ψ(t) = |t|^α with α > −1/2,
//! piecewise-linear data, and constants. All integrals are closed forms; the
//! tests cross-check them against adaptive quadrature.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where Ψ (and boundary data fed into it) are allowed to live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    WholeLine,
    NonnegativeOnly,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::WholeLine => write!(f, "whole_line"),
            Domain::NonnegativeOnly => write!(f, "nonnegative_only"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiKind {
    /// Ψ(t) = |t|^α, α > −1/2.
    Power { alpha: f64 },
    /// Linear interpolation through sorted (t, value) breakpoints, with
    /// constant extension outside the breakpoint range.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
    /// Ψ ≡ c ≥ 0.
    Constant { c: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiSpec {
    pub kind: PsiKind,
    pub domain: Domain,
}

/// Clamp level N ≥ 1 for the truncations Ψ_N, Φ_N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationLevel(pub u32);

impl TruncationLevel {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("truncation level must be >= 1".into()));
        }
        Ok(TruncationLevel(n))
    }

    fn value(self) -> f64 {
        f64::from(self.0)
    }
}

/// sign(x)·|x|^p, the odd power used by all power-family antiderivatives.
fn sgn_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

impl PsiSpec {
    pub fn power(alpha: f64, domain: Domain) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite(format!("alpha = {alpha}")));
        }
        if alpha <= -0.5 {
            return Err(Error::Divergent(format!(
                "alpha = {alpha} <= -1/2 makes the integral of psi^2 diverge at 0"
            )));
        }
        Ok(PsiSpec {
            kind: PsiKind::Power { alpha },
            domain,
        })
    }

    pub fn constant(c: f64, domain: Domain) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "constant psi must be finite and >= 0, got {c}"
            )));
        }
        Ok(PsiSpec {
            kind: PsiKind::Constant { c },
            domain,
        })
    }

    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>, domain: Domain) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidSpec("pwl needs at least one breakpoint".into()));
        }
        for w in breakpoints.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidSpec(
                    "pwl breakpoints must be strictly increasing in t".into(),
                ));
            }
        }
        for &(t, v) in &breakpoints {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::NonFinite("pwl breakpoint".into()));
            }
            if v < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "pwl value {v} at t = {t} is negative"
                )));
            }
        }
        Ok(PsiSpec {
            kind: PsiKind::PiecewiseLinear { breakpoints },
            domain,
        })
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    fn check_point(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("t = {t}")));
        }
        if self.domain == Domain::NonnegativeOnly && t < 0.0 {
            return Err(Error::Domain(format!(
                "t = {t} < 0 but psi is declared on the nonnegative half-line"
            )));
        }
        Ok(())
    }

    /// Ψ(t). For the power family with α < 0 the origin is a pole and the
    /// returned value is `+∞`; callers that cannot absorb it must reject it.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_point(t)?;
        Ok(self.eval_unchecked(t))
    }

    /// Pointwise Ψ without the domain check. All kinds have a natural
    /// whole-line evaluation (|t|^α, constant extension, constant), which is
    /// what the quadrature loops rely on after validating the data range.
    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { alpha } => {
                if t == 0.0 {
                    if *alpha > 0.0 {
                        0.0
                    } else if *alpha == 0.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    t.abs().powf(*alpha)
                }
            }
            PsiKind::PiecewiseLinear { breakpoints } => pwl_value(breakpoints, t),
            PsiKind::Constant { c } => *c,
        }
    }

    /// Ψ(t)² without the domain check; finite for α > −1/2 except at the
    /// α < 0 pole, where it is `+∞` like `eval_unchecked`.
    pub(crate) fn eval_sq_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { alpha } => {
                if t == 0.0 {
                    if *alpha > 0.0 {
                        0.0
                    } else if *alpha == 0.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    t.abs().powf(2.0 * *alpha)
                }
            }
            _ => {
                let v = self.eval_unchecked(t);
                v * v
            }
        }
    }

    /// Φ(t) = ∫₀^t Ψ(τ) dτ, in closed form.
    pub fn phi(&self, t: f64) -> Result<f64> {
        self.check_point(t)?;
        Ok(self.phi_unchecked(t))
    }

    pub(crate) fn phi_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { alpha } => sgn_pow(t, alpha + 1.0) / (alpha + 1.0),
            PsiKind::Constant { c } => c * t,
            PsiKind::PiecewiseLinear { breakpoints } => {
                pwl_integral(breakpoints, 0.0, t, Integrand::Psi)
            }
        }
    }

    /// ∫_a^b Ψ²(τ) dτ, antisymmetric in (a, b).
    pub fn int_psi_squared(&self, a: f64, b: f64) -> Result<f64> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.int_psi_squared_unchecked(a, b))
    }

    pub(crate) fn int_psi_squared_unchecked(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { alpha } => {
                let p = 2.0 * alpha + 1.0;
                (sgn_pow(b, p) - sgn_pow(a, p)) / p
            }
            PsiKind::Constant { c } => c * c * (b - a),
            PsiKind::PiecewiseLinear { breakpoints } => {
                pwl_integral(breakpoints, a, b, Integrand::PsiSquared)
            }
        }
    }

    /// Antiderivative F₂(t) = ∫₀^t Ψ²; the boundary double integrals consume
    /// pairwise differences of this.
    pub(crate) fn psi_sq_antiderivative(&self, t: f64) -> f64 {
        self.int_psi_squared_unchecked(0.0, t)
    }

    /// Ψ_N(t) = min(Ψ(t), N); since Ψ ≥ 0 the two-sided clamp reduces to this.
    pub fn psi_truncated(&self, level: TruncationLevel, t: f64) -> Result<f64> {
        self.check_point(t)?;
        Ok(self.eval_unchecked(t).min(level.value()))
    }

    /// Φ_N(t) = ∫₀^t min(Ψ(τ), N) dτ, in closed form.
    pub fn phi_truncated(&self, level: TruncationLevel, t: f64) -> Result<f64> {
        self.check_point(t)?;
        Ok(self.phi_truncated_unchecked(level, t))
    }

    pub(crate) fn phi_truncated_unchecked(&self, level: TruncationLevel, t: f64) -> f64 {
        let n = level.value();
        match &self.kind {
            PsiKind::Constant { c } => c.min(n) * t,
            PsiKind::Power { alpha } => {
                let a = *alpha;
                let x = t.abs();
                let body = if a == 0.0 {
                    // psi = 1 <= N everywhere
                    x
                } else if a > 0.0 {
                    // clamp active for |tau| > c
                    let c = n.powf(1.0 / a);
                    if x <= c {
                        x.powf(a + 1.0) / (a + 1.0)
                    } else {
                        c.powf(a + 1.0) / (a + 1.0) + n * (x - c)
                    }
                } else {
                    // alpha < 0: clamp active near the pole, |tau| < c
                    let c = n.powf(1.0 / a);
                    if x <= c {
                        n * x
                    } else {
                        n * c + (x.powf(a + 1.0) - c.powf(a + 1.0)) / (a + 1.0)
                    }
                };
                if t < 0.0 {
                    -body
                } else {
                    body
                }
            }
            PsiKind::PiecewiseLinear { breakpoints } => {
                pwl_integral(breakpoints, 0.0, t, Integrand::PsiClamped(n))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Piecewise-linear machinery
// ---------------------------------------------------------------------------

fn pwl_value(bps: &[(f64, f64)], t: f64) -> f64 {
    let first = bps[0];
    let last = bps[bps.len() - 1];
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    // index of the last breakpoint with t_i <= t
    let i = bps.partition_point(|&(ti, _)| ti <= t) - 1;
    let (t0, v0) = bps[i];
    let (t1, v1) = bps[i + 1];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

enum Integrand {
    Psi,
    PsiSquared,
    PsiClamped(f64),
}

/// Exact integral of Ψ, Ψ² or min(Ψ, N) over [a, b] for the piecewise-linear
/// family, antisymmetric when a > b.
fn pwl_integral(bps: &[(f64, f64)], a: f64, b: f64, what: Integrand) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -pwl_integral(bps, b, a, what);
    }
    // Segment endpoints: the breakpoints clipped to [a, b], plus a and b.
    let mut cuts = Vec::with_capacity(bps.len() + 2);
    cuts.push(a);
    for &(t, _) in bps {
        if t > a && t < b {
            cuts.push(t);
        }
    }
    cuts.push(b);

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (x, y) = (w[0], w[1]);
        let vx = pwl_value(bps, x);
        let vy = pwl_value(bps, y);
        total += match what {
            Integrand::Psi => 0.5 * (vx + vy) * (y - x),
            Integrand::PsiSquared => linear_sq_integral(vx, vy, y - x),
            Integrand::PsiClamped(n) => linear_clamped_integral(vx, vy, y - x, n),
        };
    }
    total
}

/// ∫ v² over a segment of length h where v runs linearly from vx to vy.
fn linear_sq_integral(vx: f64, vy: f64, h: f64) -> f64 {
    (vx * vx + vx * vy + vy * vy) * h / 3.0
}

/// ∫ min(v, n) over a segment of length h where v runs linearly from vx to vy.
fn linear_clamped_integral(vx: f64, vy: f64, h: f64, n: f64) -> f64 {
    if vx <= n && vy <= n {
        return 0.5 * (vx + vy) * h;
    }
    if vx >= n && vy >= n {
        return n * h;
    }
    // one crossing at fraction s
    let s = (n - vx) / (vy - vx);
    let hs = s * h;
    if vx < n {
        0.5 * (vx + n) * hs + n * (h - hs)
    } else {
        n * hs + 0.5 * (n + vy) * (h - hs)
    }
}

// ---------------------------------------------------------------------------
// Compact text form: "power:1.0", "const:2.5", "pwl:0,0;1,2;3,1"
// ---------------------------------------------------------------------------

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PsiKind::Power { alpha } => write!(f, "power:{alpha}"),
            PsiKind::Constant { c } => write!(f, "const:{c}"),
            PsiKind::PiecewiseLinear { breakpoints } => {
                write!(f, "pwl:")?;
                for (i, (t, v)) in breakpoints.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{t},{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for PsiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("psi spec '{s}' has no ':'")))?;
        let parse_f64 = |x: &str| -> Result<f64> {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("bad number '{x}' in psi spec '{s}'")))
        };
        match tag {
            "power" => PsiSpec::power(parse_f64(rest)?, Domain::WholeLine),
            "const" => PsiSpec::constant(parse_f64(rest)?, Domain::WholeLine),
            "pwl" => {
                let mut bps = Vec::new();
                for pair in rest.split(';') {
                    let (t, v) = pair.split_once(',').ok_or_else(|| {
                        Error::InvalidSpec(format!("pwl breakpoint '{pair}' is not 't,v'"))
                    })?;
                    bps.push((parse_f64(t)?, parse_f64(v)?));
                }
                PsiSpec::piecewise_linear(bps, Domain::WholeLine)
            }
            _ => Err(Error::InvalidSpec(format!("unknown psi kind '{tag}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEVELS: [u32; 4] = [1, 2, 5, 40];

    fn power(alpha: f64) -> PsiSpec {
        PsiSpec::power(alpha, Domain::WholeLine).unwrap()
    }

    /// Adaptive Simpson, the independent oracle for every closed form here.
    fn adaptive_quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            if depth > 50 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, left, tol / 2.0, depth + 1)
                    + rec(f, m, b, right, tol / 2.0, depth + 1)
            }
        }
        if a == b {
            return 0.0;
        }
        rec(f, a, b, simpson(f, a, b), tol, 0)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(power(1.0).eval(-3.0).unwrap(), 3.0);
        assert_eq!(
            PsiSpec::constant(1.0, Domain::WholeLine).unwrap().eval(7.2).unwrap(),
            1.0
        );
        assert_eq!(power(0.5).eval(4.0).unwrap(), 2.0);
    }

    #[test]
    fn eval_at_zero_by_alpha_sign() {
        assert_eq!(power(1.0).eval(0.0).unwrap(), 0.0);
        assert_eq!(power(0.0).eval(0.0).unwrap(), 1.0);
        assert!(power(-0.25).eval(0.0).unwrap().is_infinite());
    }

    #[test]
    fn domain_and_input_validation() {
        let p = PsiSpec::power(1.0, Domain::NonnegativeOnly).unwrap();
        assert!(matches!(p.eval(-1.0), Err(Error::Domain(_))));
        assert!(matches!(p.eval(f64::NAN), Err(Error::NonFinite(_))));
        assert!(PsiSpec::power(-0.5, Domain::WholeLine).is_err());
        assert!(PsiSpec::piecewise_linear(vec![(0.0, -1.0)], Domain::WholeLine).is_err());
        assert!(PsiSpec::piecewise_linear(vec![(1.0, 0.0), (0.0, 1.0)], Domain::WholeLine).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(power(1.0).phi(2.0).unwrap(), 2.0);
        assert_eq!(power(1.0).phi(-2.0).unwrap(), -2.0);
        assert_eq!(
            PsiSpec::constant(1.0, Domain::WholeLine).unwrap().phi(5.0).unwrap(),
            5.0
        );
    }

    #[test]
    fn int_psi_squared_examples() {
        assert!((power(1.0).int_psi_squared(0.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(power(2.0).int_psi_squared(0.7, 0.7).unwrap(), 0.0);
        assert!((power(0.5).int_psi_squared(0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn truncated_psi_examples() {
        let n3 = TruncationLevel::new(3).unwrap();
        assert_eq!(power(1.0).psi_truncated(n3, 5.0).unwrap(), 3.0);
        assert_eq!(power(1.0).psi_truncated(n3, 2.0).unwrap(), 2.0);
        let c = PsiSpec::constant(1.0, Domain::WholeLine).unwrap();
        assert_eq!(c.psi_truncated(TruncationLevel::new(1).unwrap(), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn truncated_phi_examples() {
        let n1 = TruncationLevel::new(1).unwrap();
        let n10 = TruncationLevel::new(10).unwrap();
        // clamp splits at |tau| = 1: int_0^1 tau + int_1^2 1 = 3/2
        assert!((power(1.0).phi_truncated(n1, 2.0).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(power(1.0).phi_truncated(n10, 2.0).unwrap(), 2.0);
        assert_eq!(power(1.0).phi_truncated(n1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_forms_match_adaptive_quadrature() {
        let specs = [
            power(1.0),
            power(0.5),
            power(2.75),
            PsiSpec::constant(2.5, Domain::WholeLine).unwrap(),
            PsiSpec::piecewise_linear(
                vec![(-1.0, 2.0), (0.0, 0.0), (1.0, 2.0), (3.0, 1.0)],
                Domain::WholeLine,
            )
            .unwrap(),
        ];
        let points = [-2.7, -1.0, -0.4, 0.3, 1.0, 1.9, 3.5];
        for psi in &specs {
            for &t in &points {
                let phi = psi.phi(t).unwrap();
                let oracle = adaptive_quad(&|x| psi.eval_unchecked(x), 0.0, t, 1e-12);
                assert!(
                    (phi - oracle).abs() <= 1e-10 * phi.abs().max(1.0),
                    "phi({psi}, {t}) = {phi} vs quadrature {oracle}"
                );

                let isq = psi.int_psi_squared(-0.9, t).unwrap();
                let oracle = adaptive_quad(&|x| psi.eval_sq_unchecked(x), -0.9, t, 1e-12);
                assert!(
                    (isq - oracle).abs() <= 1e-9 * isq.abs().max(1.0),
                    "int_psi_sq({psi}, -0.9, {t}) = {isq} vs quadrature {oracle}"
                );

                for n in LEVELS {
                    let lvl = TruncationLevel::new(n).unwrap();
                    let ft = psi.phi_truncated(lvl, t).unwrap();
                    let oracle = adaptive_quad(
                        &|x| psi.eval_unchecked(x).min(f64::from(n)),
                        0.0,
                        t,
                        1e-12,
                    );
                    assert!(
                        (ft - oracle).abs() <= 1e-10 * ft.abs().max(1.0),
                        "phi_truncated({psi}, {n}, {t}) = {ft} vs quadrature {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn negative_alpha_closed_forms() {
        // The pole at 0 defeats direct quadrature; substitute tau = u^5 so the
        // integrands 5 u^{5a+4} and 5 u^{10a+4} are continuous for a = -0.3.
        let a = -0.3;
        let psi = power(a);
        for &t in &[0.25, 1.0, 3.0] {
            let phi = psi.phi(t).unwrap();
            let up = t.powf(0.2);
            let oracle = adaptive_quad(&|u| 5.0 * u.powf(5.0 * a + 4.0), 0.0, up, 1e-13);
            assert!((phi - oracle).abs() < 1e-8 * phi.abs());

            let isq = psi.int_psi_squared(0.0, t).unwrap();
            let oracle = adaptive_quad(&|u| 5.0 * u.powf(10.0 * a + 4.0), 0.0, up, 1e-13);
            assert!((isq - oracle).abs() < 1e-8 * isq.abs());

            // odd extension
            assert_eq!(psi.phi(-t).unwrap(), -phi);
            assert_eq!(psi.int_psi_squared(-t, 0.0).unwrap(), isq);

            // truncated integrand is bounded, plain quadrature applies
            let lvl = TruncationLevel::new(2).unwrap();
            let ft = psi.phi_truncated(lvl, t).unwrap();
            let oracle = adaptive_quad(&|x| psi.eval_unchecked(x).min(2.0), 0.0, t, 1e-13);
            assert!((ft - oracle).abs() < 1e-9 * ft.abs());
        }
    }

    #[test]
    fn truncation_clamps_and_converges_monotonically() {
        let specs = [
            power(1.0),
            power(2.0),
            PsiSpec::piecewise_linear(vec![(0.0, 0.0), (1.0, 6.0)], Domain::WholeLine).unwrap(),
        ];
        for psi in &specs {
            for &t in &[-4.0, -1.2, 0.0, 0.7, 3.0, 8.0] {
                let mut prev: Option<f64> = None;
                for n in [1u32, 2, 4, 8, 16, 64, 1024] {
                    let lvl = TruncationLevel::new(n).unwrap();
                    let pn = psi.psi_truncated(lvl, t).unwrap();
                    assert!(pn >= 0.0 && pn <= psi.eval_unchecked(t).min(f64::from(n)) + 1e-15);
                    let fnt = psi.phi_truncated(lvl, t).unwrap();
                    if let Some(p) = prev {
                        if t >= 0.0 {
                            assert!(fnt >= p - 1e-12, "phi_N not nondecreasing at t={t}");
                        } else {
                            assert!(fnt <= p + 1e-12, "phi_N not nonincreasing at t={t}");
                        }
                    }
                    prev = Some(fnt);
                }
                // limit reached once the clamp is inactive on [0, t]
                let big = TruncationLevel::new(1_000_000).unwrap();
                let lim = psi.phi_truncated(big, t).unwrap();
                let phi = psi.phi(t).unwrap();
                assert!((lim - phi).abs() <= 1e-9 * phi.abs().max(1.0));
            }
        }
    }

    #[test]
    fn int_psi_squared_antisymmetry_and_additivity() {
        let psi = PsiSpec::piecewise_linear(
            vec![(-2.0, 1.0), (0.5, 3.0), (2.0, 0.0)],
            Domain::WholeLine,
        )
        .unwrap();
        let (a, b, c) = (-1.3, 0.2, 2.8);
        let ab = psi.int_psi_squared(a, b).unwrap();
        let ba = psi.int_psi_squared(b, a).unwrap();
        assert_eq!(ab, -ba);
        let ac = psi.int_psi_squared(a, c).unwrap();
        let bc = psi.int_psi_squared(b, c).unwrap();
        assert!((ac - (ab + bc)).abs() < 1e-14);
    }

    #[test]
    fn finite_difference_phi_recovers_psi() {
        let specs = [power(1.0), power(0.5), PsiSpec::constant(2.0, Domain::WholeLine).unwrap()];
        for psi in &specs {
            for &t in &[-1.5, -0.5, 0.5, 1.0, 2.5] {
                let d1 = central_diff(psi, t, 1e-3);
                let d2 = central_diff(psi, t, 5e-4);
                let exact = psi.eval_unchecked(t);
                // O(delta^2): quartering the error when halving the step
                assert!((d1 - exact).abs() < 1e-4 * exact.abs().max(1.0));
                assert!((d2 - exact).abs() <= 0.3 * (d1 - exact).abs().max(1e-10));
            }
        }
    }

    fn central_diff(psi: &PsiSpec, t: f64, h: f64) -> f64 {
        (psi.phi_unchecked(t + h) - psi.phi_unchecked(t - h)) / (2.0 * h)
    }

    #[test]
    fn text_form_round_trips() {
        for s in ["power:1", "power:0.5", "const:2.5", "pwl:0,0;1,2;3,1"] {
            let psi: PsiSpec = s.parse().unwrap();
            let printed = psi.to_string();
            let back: PsiSpec = printed.parse().unwrap();
            assert_eq!(psi, back);
        }
        // exact float round-trip through the shortest decimal form
        let psi = PsiSpec::power(0.1 + 0.2, Domain::WholeLine).unwrap();
        let back: PsiSpec = psi.to_string().parse().unwrap();
        assert_eq!(psi, back);
        assert!("power".parse::<PsiSpec>().is_err());
        assert!("exp:1".parse::<PsiSpec>().is_err());
        assert!("pwl:0".parse::<PsiSpec>().is_err());
    }
}
