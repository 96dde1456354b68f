//! Command-line front end: parse Ψ and boundary-data specs, dispatch to the
//! library, emit CSV or JSON reports.
//!
//! Exit codes: 0 success, 1 mathematical check failed, 2 numerical-quality
//! failure (route disagreement, quadrature or resolution trouble), 64 usage
//! error. The environment variable DIRLAB_MAX_M caps every boundary grid.

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use dirlab::disk::{boundary_from_fn, BoundaryFunction};
use dirlab::energy::{
    energy_composed_boundary, energy_composed_volume, energy_of_composed_data, verify_theorem,
    QuadratureConfig,
};
use dirlab::extremal::{extrapolate, geometric_ladder, make_step_ramp, sweep, StepRampData};
use dirlab::psi::{Domain, PsiSpec};
use dirlab::reverse_cauchy::{
    estimate_constant, interval_ratio, power_constant, SearchParams,
};
use dirlab::selftest;
use dirlab::{Error, Result};

const USAGE_EXIT: u8 = 64;
const MATH_EXIT: u8 = 1;
const QUALITY_EXIT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "dirlab",
    version,
    about = "Dirichlet energies of composed harmonic extensions on the unit disk",
    long_about = "Computes reverse-Cauchy constants C(Psi), both sides of the \
composed-energy inequality D[Phi o Ph] <= C * D[P(Phi o h)], and the step/ramp \
sharpness sweep.\n\n\
CSV columns: `energy`/`verify` emit h,psi,lhs,rhs,ratio,C,pass; `extremal` \
emits epsilon,grid,lhs,rhs,ratio,i1,i2,i3,j1,j2,j3 followed by a JSON summary \
line. JSON output is the superset of the CSV fields."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    /// Intervals anywhere on the real line.
    Whole,
    /// Intervals in [0, inf) only.
    Nonneg,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Domain {
        match d {
            DomainArg::Whole => Domain::WholeLine,
            DomainArg::Nonneg => Domain::NonnegativeOnly,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Best reverse-Cauchy constant C(Psi) = sup over intervals of
    /// mean(Psi^2)/(mean Psi)^2.
    Constant {
        /// Weight spec: "power:1", "const:2.5" or "pwl:t,v;t,v;..."
        #[arg(long)]
        psi: String,
        #[arg(long, value_enum, default_value_t = DomainArg::Whole)]
        domain: DomainArg,
        /// Half-width of the (a, b) search box for non-power weights.
        #[arg(long, default_value_t = 10.0)]
        bound: f64,
    },
    /// The two interval means and their ratio on one interval (a, b).
    Ratio {
        #[arg(long)]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Both sides of the inequality for given boundary data.
    Energy {
        #[arg(long)]
        psi: String,
        /// Boundary data: "cos:K", "sin:K", "const:C", "fourier:FILE" (one
        /// grid of samples, whitespace/comma separated, power-of-two length)
        /// or "stepramp:a=A,b=B,arc=S:E,eps=EPS".
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value_t = DomainArg::Whole)]
        domain: DomainArg,
        /// Boundary grid size (power of two).
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Check D[Phi o Ph] <= C * D[P(Phi o h)] (and rhs <= lhs).
    Verify {
        #[arg(long)]
        psi: String,
        #[arg(long, required_unless_present = "random")]
        h: Option<String>,
        #[arg(long, value_enum, default_value_t = DomainArg::Whole)]
        domain: DomainArg,
        /// The constant C, or "auto" to use the best constant of psi.
        #[arg(long = "C", default_value = "auto")]
        constant: String,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Verify N random trigonometric polynomials instead of --h.
        #[arg(long)]
        random: Option<usize>,
        /// Seed for the random corpus.
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
    /// The step/ramp epsilon-sweep with I/J diagnostics and extrapolation.
    Extremal {
        #[arg(long)]
        psi: String,
        #[arg(long, value_enum, default_value_t = DomainArg::Whole)]
        domain: DomainArg,
        /// Step level on the arc.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Step level away from the arc.
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// Arc as "start:end" in radians.
        #[arg(long, default_value = "0:3.141592653589793")]
        arc: String,
        /// Ladder epsilon = pi * 2^-k for k in kmin..=kmax.
        #[arg(long, default_value_t = 4)]
        kmin: u32,
        #[arg(long, default_value_t = 12)]
        kmax: u32,
        /// Cap on the boundary grid of a sweep row.
        #[arg(long, default_value_t = selftest::DEFAULT_M_CAP)]
        m_cap: usize,
    },
    /// Run the full acceptance suite.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = selftest::DEFAULT_M_CAP)]
        m_cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests print and exit 0; real errors are usage
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE_EXIT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut sink = Sink::new(cli.output.clone());
    let code = match run(&cli, &mut sink) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dirlab: {e}");
            exit_for(&e)
        }
    };
    if let Err(e) = sink.finish() {
        eprintln!("dirlab: {e}");
        return ExitCode::from(USAGE_EXIT);
    }
    code
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::RouteDisagreement { .. }
        | Error::Quadrature(_)
        | Error::Resolution(_)
        | Error::Extrapolation(_)
        | Error::SearchFailed(_) => ExitCode::from(QUALITY_EXIT),
        _ => ExitCode::from(USAGE_EXIT),
    }
}

/// Buffers the report and writes it to the selected destination at the end.
struct Sink {
    path: Option<PathBuf>,
    buf: String,
}

impl Sink {
    fn new(path: Option<PathBuf>) -> Self {
        Sink { path, buf: String::new() }
    }

    fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    fn finish(self) -> Result<()> {
        match self.path {
            Some(p) => std::fs::write(p, self.buf)?,
            None => std::io::stdout().write_all(self.buf.as_bytes())?,
        }
        Ok(())
    }
}

fn max_m_env() -> Option<usize> {
    std::env::var("DIRLAB_MAX_M").ok().and_then(|v| v.parse().ok())
}

fn capped_grid(m: usize) -> Result<usize> {
    let m = match max_m_env() {
        Some(cap) => m.min(cap),
        None => m,
    };
    if !m.is_power_of_two() || m < 16 {
        return Err(Error::InvalidSpec(format!(
            "grid {m} must be a power of two >= 16 (check --grid and DIRLAB_MAX_M)"
        )));
    }
    Ok(m)
}

fn parse_psi(spec: &str, domain: DomainArg) -> Result<PsiSpec> {
    Ok(spec.parse::<PsiSpec>()?.with_domain(domain.into()))
}

fn parse_h(spec: &str, m: usize) -> Result<BoundaryFunction> {
    let (tag, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidSpec(format!("h spec '{spec}' has no ':'")))?;
    let num = |x: &str| -> Result<f64> {
        x.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidSpec(format!("bad number '{x}' in h spec '{spec}'")))
    };
    match tag {
        "cos" => {
            let k = num(rest)?;
            boundary_from_fn(m, |t| (k * t).cos())
        }
        "sin" => {
            let k = num(rest)?;
            boundary_from_fn(m, |t| (k * t).sin())
        }
        "const" => {
            let c = num(rest)?;
            boundary_from_fn(m, |_| c)
        }
        "fourier" => {
            let text = std::fs::read_to_string(rest).map_err(|e| {
                Error::InvalidSpec(format!("cannot read samples file '{rest}': {e}"))
            })?;
            let mut samples = Vec::new();
            for token in text.split(|c: char| c.is_whitespace() || c == ',') {
                if !token.is_empty() {
                    samples.push(num(token)?);
                }
            }
            BoundaryFunction::from_samples(samples)
        }
        "stepramp" => {
            let ramp = parse_stepramp(rest)?;
            make_step_ramp(&ramp, m)
        }
        _ => Err(Error::InvalidSpec(format!("unknown h kind '{tag}'"))),
    }
}

fn parse_stepramp(rest: &str) -> Result<StepRampData> {
    let mut a = None;
    let mut b = None;
    let mut arc = (0.0, PI);
    let mut eps = None;
    for field in rest.split(',') {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("stepramp field '{field}' is not k=v")))?;
        let num = |x: &str| -> Result<f64> {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("bad number '{x}' in stepramp spec")))
        };
        match key.trim() {
            "a" => a = Some(num(val)?),
            "b" => b = Some(num(val)?),
            "eps" => eps = Some(num(val)?),
            "arc" => arc = parse_arc(val)?,
            other => {
                return Err(Error::InvalidSpec(format!("unknown stepramp field '{other}'")));
            }
        }
    }
    match (a, b, eps) {
        (Some(a), Some(b), Some(eps)) => StepRampData::new(a, b, arc, eps),
        _ => Err(Error::InvalidSpec("stepramp needs a=, b= and eps=".into())),
    }
}

fn parse_arc(val: &str) -> Result<(f64, f64)> {
    let (s, e) = val
        .split_once(':')
        .ok_or_else(|| Error::InvalidSpec(format!("arc '{val}' is not start:end")))?;
    let parse = |x: &str| -> Result<f64> {
        x.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidSpec(format!("bad number '{x}' in arc spec")))
    };
    Ok((parse(s)?, parse(e)?))
}

fn resolve_constant(text: &str, psi: &PsiSpec, domain: Domain) -> Result<f64> {
    if text == "auto" {
        return Ok(estimate_constant(psi, domain, SearchParams::default())?.value);
    }
    text.parse::<f64>()
        .map_err(|_| Error::InvalidSpec(format!("--C must be a number or 'auto', got '{text}'")))
}

fn csv_energy_row(h: &str, psi: &PsiSpec, lhs: f64, rhs: f64, ratio: f64, c: &str, pass: &str) -> String {
    format!("{h},{psi},{lhs},{rhs},{ratio},{c},{pass}")
}

fn run(cli: &Cli, out: &mut Sink) -> Result<ExitCode> {
    match &cli.command {
        Command::Constant { psi, domain, bound } => {
            let spec = parse_psi(psi, *domain)?;
            let est = if let dirlab::psi::PsiKind::Power { alpha } = &spec.kind {
                power_constant(*alpha, (*domain).into())?
            } else {
                let params = SearchParams {
                    interval_bound: *bound,
                    ..SearchParams::default()
                };
                estimate_constant(&spec, (*domain).into(), params)?
            };
            match cli.format {
                Format::Json => out.line(&serde_json::to_string_pretty(&est).unwrap()),
                Format::Csv => {
                    out.line("psi,domain,value,argmax_a,argmax_b");
                    out.line(&format!(
                        "{spec},{},{},{},{}",
                        est.domain, est.value, est.argmax_interval.0, est.argmax_interval.1
                    ));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Ratio { psi, a, b } => {
            let spec = parse_psi(psi, DomainArg::Whole)?;
            let r = interval_ratio(&spec, *a, *b)?;
            match cli.format {
                Format::Json => out.line(&serde_json::to_string_pretty(&r).unwrap()),
                Format::Csv => {
                    out.line("psi,a,b,mean_psi,mean_psi_sq,ratio");
                    out.line(&format!(
                        "{spec},{},{},{},{},{}",
                        r.a, r.b, r.mean_psi, r.mean_psi_sq, r.ratio
                    ));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Energy { psi, h, domain, grid } => {
            let spec = parse_psi(psi, *domain)?;
            let m = capped_grid(*grid)?;
            let data = parse_h(h, m)?;
            let q = QuadratureConfig::default();
            let volume = energy_composed_volume(&spec, &data, &q)?;
            let boundary = energy_composed_boundary(&spec, &data)?;
            let rhs = energy_of_composed_data(&spec, &data)?;
            let ratio = if rhs > 0.0 { volume / rhs } else { f64::NAN };
            match cli.format {
                Format::Json => out.line(
                    &serde_json::to_string_pretty(&json!({
                        "h": h,
                        "psi": spec.to_string(),
                        "lhs": volume,
                        "rhs": rhs,
                        "ratio": ratio,
                        "lhs_routes": { "volume": volume, "boundary": boundary },
                    }))
                    .unwrap(),
                ),
                Format::Csv => {
                    out.line("h,psi,lhs,rhs,ratio,C,pass");
                    out.line(&csv_energy_row(h, &spec, volume, rhs, ratio, "", ""));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { psi, h, domain, constant, grid, random, seed } => {
            let spec = parse_psi(psi, *domain)?;
            let c = resolve_constant(constant, &spec, (*domain).into())?;
            let m = capped_grid(*grid)?;
            let q = QuadratureConfig::default();

            let mut cases: Vec<(String, BoundaryFunction)> = Vec::new();
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for i in 0..*n {
                    cases.push((format!("random[{i}]"), random_poly(&mut rng, m)?));
                }
            } else {
                let hspec = h.as_deref().expect("clap enforces --h without --random");
                cases.push((hspec.to_string(), parse_h(hspec, m)?));
            }

            let mut all_pass = true;
            let mut reports = Vec::new();
            if cli.format == Format::Csv {
                out.line("h,psi,lhs,rhs,ratio,C,pass");
            }
            for (name, data) in &cases {
                let chk = verify_theorem(&spec, data, c, &q)?;
                all_pass &= chk.pass;
                match cli.format {
                    Format::Json => reports.push(json!({
                        "h": name,
                        "psi": spec.to_string(),
                        "lhs": chk.pair.lhs,
                        "rhs": chk.pair.rhs,
                        "ratio": chk.pair.ratio,
                        "lhs_routes": chk.pair.lhs_routes,
                        "C": chk.constant,
                        "pass": chk.pass,
                    })),
                    Format::Csv => out.line(&csv_energy_row(
                        name,
                        &spec,
                        chk.pair.lhs,
                        chk.pair.rhs,
                        chk.pair.ratio,
                        &chk.constant.to_string(),
                        &chk.pass.to_string(),
                    )),
                }
            }
            if cli.format == Format::Json {
                let payload = if reports.len() == 1 {
                    reports.pop().unwrap()
                } else {
                    json!(reports)
                };
                out.line(&serde_json::to_string_pretty(&payload).unwrap());
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(MATH_EXIT)
            })
        }

        Command::Extremal { psi, domain, a, b, arc, kmin, kmax, m_cap } => {
            let spec = parse_psi(psi, *domain)?;
            let arc = parse_arc(arc)?;
            if kmin >= kmax {
                return Err(Error::InvalidSpec("need kmin < kmax".into()));
            }
            let cap = match max_m_env() {
                Some(env_cap) => (*m_cap).min(env_cap),
                None => *m_cap,
            };
            let ladder = geometric_ladder(PI, *kmin, *kmax);
            let rows = sweep(&spec, *a, *b, arc, &ladder, cap)?;
            let fit = extrapolate(&rows)?;
            let target = estimate_constant(&spec, (*domain).into(), SearchParams::default())
                .map(|e| e.value)
                .ok();
            let summary = json!({
                "intercept": fit.intercept,
                "slope": fit.slope,
                "residual": fit.residual,
                "monotone": fit.monotone,
                "target_constant": target,
            });
            match cli.format {
                Format::Json => out.line(
                    &serde_json::to_string_pretty(&json!({
                        "rows": rows,
                        "summary": summary,
                    }))
                    .unwrap(),
                ),
                Format::Csv => {
                    out.line("epsilon,grid,lhs,rhs,ratio,i1,i2,i3,j1,j2,j3");
                    for r in &rows {
                        out.line(&format!(
                            "{},{},{},{},{},{},{},{},{},{},{}",
                            r.epsilon, r.grid, r.lhs, r.rhs, r.ratio, r.i1, r.i2, r.i3, r.j1,
                            r.j2, r.j3
                        ));
                    }
                    out.line(&summary.to_string());
                }
            }
            Ok(if fit.monotone {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(QUALITY_EXIT)
            })
        }

        Command::Selftest { seed, m_cap } => {
            let cap = match max_m_env() {
                Some(env_cap) => (*m_cap).min(env_cap),
                None => *m_cap,
            };
            let results = selftest::run_all(*seed, cap);
            let all_pass = results.iter().all(|r| r.pass);
            match cli.format {
                Format::Json => out.line(&serde_json::to_string_pretty(&results).unwrap()),
                Format::Csv => {
                    out.line("id,name,pass,details");
                    for r in &results {
                        out.line(&format!(
                            "{},{},{},\"{}\"",
                            r.id,
                            r.name,
                            r.pass,
                            r.details.replace('"', "'")
                        ));
                    }
                }
            }
            for r in &results {
                eprintln!(
                    "criterion {} [{}] {}: {}",
                    r.id,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.details
                );
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(MATH_EXIT)
            })
        }
    }
}

/// Random degree-8 trigonometric polynomial, matching the selftest corpus.
fn random_poly(rng: &mut ChaCha8Rng, m: usize) -> Result<BoundaryFunction> {
    let a0: f64 = rng.gen_range(-2.0..=2.0);
    let coeffs: Vec<(f64, f64)> = (0..8)
        .map(|_| (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0)))
        .collect();
    boundary_from_fn(m, |t| {
        let mut acc = 0.5 * a0;
        for (n, &(a, b)) in coeffs.iter().enumerate() {
            let nt = (n + 1) as f64 * t;
            acc += a * nt.cos() + b * nt.sin();
        }
        acc
    })
}
