//! Command-line surface: star products, star-exponentials, the oscillator
//! comparison and the law-check suites.
//!
//! Exit codes are a stable contract: 0 success, 2 parse/lowering errors,
//! 3 violated preconditions (order, filtration, dimensions, config),
//! 4 mathematical-law violations.

use clap::{Parser, Subcommand, ValueEnum};
use starcalc_cli::{checks, config, json};

use config::{JobConfig, OutputFormat};
use serde::Serialize;
use starcalc_core::lower::{lower_sw, lower_tw, lower_w};
use starcalc_core::param::ParamScalar;
use starcalc_core::poly::XuPoly;
use starcalc_core::render::{render_sw, render_tw, render_w};
use starcalc_core::starexp::{
    fpi_oscillator, oscillator_closed_form, starexp_ode, starexp_series, starexp_via_resolvent,
};
use starcalc_core::twsym::PrecisionWindow;
use starcalc_core::wsym::WSymbol;
use starcalc_core::{Rat, VarContext};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_LAW: u8 = 4;

#[derive(Parser)]
#[command(
    name = "starcalc",
    about = "Exact symbol calculus: star products, Laplace bridge, star-exponentials",
    version
)]
struct Cli {
    /// JSON config file with the same fields as the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Half-dimension (count of x variables = count of u variables)
    #[arg(short, long, global = true)]
    n: Option<usize>,
    /// Comma-separated formal parameter names
    #[arg(long, global = true, value_delimiter = ',')]
    params: Option<Vec<String>>,
    /// Exactness floor for parsed symbols (must be <= 0)
    #[arg(long, global = true, allow_hyphen_values = true)]
    hbar_min: Option<i64>,
    /// t-truncation degree
    #[arg(long = "t-deg", global = true)]
    t_deg: Option<usize>,
    /// s-depth truncation
    #[arg(long = "s-deg", global = true)]
    s_deg: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    W,
    Sw,
    Tw,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    All,
    Series,
    Ode,
    Resolvent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Laws,
    Gevrey,
    Laplace,
}

#[derive(Subcommand)]
enum Cmd {
    /// Star product of two expressions in the chosen algebra
    Star {
        #[arg(long, value_enum)]
        target: TargetArg,
        /// Left and right factors
        #[arg(num_args = 2)]
        exprs: Vec<String>,
    },
    /// Star-exponential exp(t/h P) by the requested routes
    Starexp {
        /// Routes to compute and cross-check
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        routes: Vec<RouteArg>,
        expr: String,
    },
    /// Harmonic oscillator: all routes, the closed form and the
    /// path-integral series, with exact match verdicts
    Oscillator {
        /// Rational value for theta, or "symbolic" (default)
        #[arg(long, default_value = "symbolic")]
        theta: String,
    },
    /// Deterministic law suites
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        /// Named demonstration (gevrey suite): formal-counterexample
        #[arg(long)]
        demo: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: msg.to_string(),
        }
    }
    fn precondition(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: msg.to_string(),
        }
    }
    fn law(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_LAW,
            message: msg.to_string(),
        }
    }
}

impl From<starcalc_core::Error> for Failure {
    fn from(e: starcalc_core::Error) -> Self {
        Failure::precondition(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<JobConfig, Failure> {
    let mut cfg = JobConfig::default();
    if let Some(path) = &cli.config {
        let file = JobConfig::load(path).map_err(Failure::parse)?;
        cfg.apply_file(file).map_err(Failure::parse)?;
    }
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(p) = &cli.params {
        cfg.parameters = p.clone();
    }
    if let Some(h) = cli.hbar_min {
        cfg.hbar_min = Some(h);
    }
    if let Some(d) = cli.t_deg {
        cfg.t_deg = d;
    }
    if let Some(s) = cli.s_deg {
        cfg.s_deg = s;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Human => OutputFormat::Human,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    cfg.validate().map_err(Failure::precondition)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = resolve_config(&cli)?;
    let ctx = cfg.context();
    match &cli.cmd {
        Cmd::Star { target, exprs } => cmd_star(&cfg, &ctx, *target, exprs),
        Cmd::Starexp { routes, expr } => cmd_starexp(&cfg, &ctx, routes, expr),
        Cmd::Oscillator { theta } => cmd_oscillator(&cfg, theta),
        Cmd::Check {
            suite,
            seed,
            cases,
            demo,
        } => cmd_check(&cfg, *suite, *seed, *cases, demo.as_deref()),
    }
}

fn parsed_w(src: &str, ctx: &VarContext, cfg: &JobConfig) -> Result<WSymbol<ParamScalar>, Failure> {
    let sym = lower_w(src, ctx).map_err(Failure::parse)?;
    Ok(match cfg.hbar_min {
        Some(f) => sym.with_floor(f),
        None => sym,
    })
}

#[derive(Serialize)]
struct StarOutput {
    schema: u32,
    target: String,
    product: json::SymbolDto,
    window: json::WindowDto,
}

fn cmd_star(
    cfg: &JobConfig,
    ctx: &VarContext,
    target: TargetArg,
    exprs: &[String],
) -> Result<(), Failure> {
    let (human, out) = match target {
        TargetArg::W => {
            let a = parsed_w(&exprs[0], ctx, cfg)?;
            let b = parsed_w(&exprs[1], ctx, cfg)?;
            let prod = a.star(&b);
            let window = PrecisionWindow::full(prod.j_min(), cfg.t_deg);
            (
                format!("{}\nwindow: levels >= {}", render_w(&prod, ctx), prod.j_min()),
                StarOutput {
                    schema: json::SCHEMA_VERSION,
                    target: "w".into(),
                    product: json::w_to_dto(&prod, ctx),
                    window: json::WindowDto::from_window(&window),
                },
            )
        }
        TargetArg::Sw => {
            let a = lower_sw(&exprs[0], ctx, cfg.s_deg).map_err(Failure::parse)?;
            let b = lower_sw(&exprs[1], ctx, cfg.s_deg).map_err(Failure::parse)?;
            let prod = a.star(&b);
            let window = PrecisionWindow::full(prod.j_min(), cfg.s_deg);
            (
                format!(
                    "{}\nwindow: levels >= {}, s-depth <= {}",
                    render_sw(&prod, ctx),
                    prod.j_min(),
                    prod.s_trunc()
                ),
                StarOutput {
                    schema: json::SCHEMA_VERSION,
                    target: "sw".into(),
                    product: json::sw_to_dto(&prod, ctx),
                    window: json::WindowDto::from_window(&window),
                },
            )
        }
        TargetArg::Tw => {
            let a = lower_tw(&exprs[0], ctx, cfg.t_deg).map_err(Failure::parse)?;
            let b = lower_tw(&exprs[1], ctx, cfg.t_deg).map_err(Failure::parse)?;
            let prod = a.star(&b);
            let window = PrecisionWindow::product(
                &a,
                &PrecisionWindow::of_symbol(&a),
                &b,
                &PrecisionWindow::of_symbol(&b),
            );
            let wd = json::WindowDto::from_window(&window);
            (
                format!(
                    "{}\nwindow: floor {}, default t-cap {}{}",
                    render_tw(&prod, ctx),
                    wd.j_floor,
                    wd.default_cap,
                    if wd.caps.is_empty() {
                        String::new()
                    } else {
                        format!(", level caps {:?}", wd.caps)
                    }
                ),
                StarOutput {
                    schema: json::SCHEMA_VERSION,
                    target: "tw".into(),
                    product: json::tw_to_dto(&prod, ctx),
                    window: wd,
                },
            )
        }
    };
    emit(cfg, &human, &out)
}

#[derive(Serialize)]
struct StarexpOutput {
    schema: u32,
    t_deg: usize,
    routes: std::collections::BTreeMap<String, json::SymbolDto>,
    agreement: bool,
    window: json::WindowDto,
}

fn cmd_starexp(
    cfg: &JobConfig,
    ctx: &VarContext,
    routes: &[RouteArg],
    expr: &str,
) -> Result<(), Failure> {
    let p = parsed_w(expr, ctx, cfg)?;
    if let Some(m) = p.order() {
        if m > 0 {
            return Err(Failure::precondition(format!(
                "exp(t/h P) requires a symbol of order <= 0 \
                 (the geometric development of 1/(s - P)); got order {m}"
            )));
        }
    }
    let want_all = routes.contains(&RouteArg::All);
    let want = |r: RouteArg| want_all || routes.contains(&r);
    let d = cfg.t_deg;
    let mut computed = Vec::new();
    if want(RouteArg::Series) {
        computed.push(("series", starexp_series(&p, d)?));
    }
    if want(RouteArg::Ode) {
        computed.push(("ode", starexp_ode(&p, d)?));
    }
    if want(RouteArg::Resolvent) {
        computed.push(("resolvent", starexp_via_resolvent(&p, d)?));
    }
    let window = computed
        .iter()
        .map(|(_, e)| PrecisionWindow::of_symbol(e))
        .reduce(|a, b| a.intersect(&b))
        .unwrap_or_else(|| PrecisionWindow::full(0, d));
    let agreement = computed
        .windows(2)
        .all(|pair| pair[0].1.eq_within(&pair[1].1, &window));
    let mut human = String::new();
    for (name, e) in &computed {
        human.push_str(&format!("{name}: {}\n", render_tw(e, ctx)));
    }
    human.push_str(&format!("agreement: {agreement}"));
    let out = StarexpOutput {
        schema: json::SCHEMA_VERSION,
        t_deg: d,
        routes: computed
            .iter()
            .map(|(name, e)| (name.to_string(), json::tw_to_dto(e, ctx)))
            .collect(),
        agreement,
        window: json::WindowDto::from_window(&window),
    };
    emit(cfg, &human, &out)?;
    if !agreement {
        return Err(Failure::law(
            "star-exponential routes disagree inside the shared window",
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct OscillatorOutput {
    schema: u32,
    theta: String,
    t_deg: usize,
    verdicts: std::collections::BTreeMap<String, bool>,
    series: json::SymbolDto,
    closed_form: json::SymbolDto,
}

fn parse_theta(arg: &str) -> Result<Option<Rat>, Failure> {
    if arg == "symbolic" {
        return Ok(None);
    }
    let parts: Vec<&str> = arg.split('/').collect();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Failure::parse(format!("invalid theta '{arg}'")))
    };
    match parts.as_slice() {
        [n] => Ok(Some(Rat::from_integer(parse_int(n)?.into()))),
        [n, d] => {
            let den = parse_int(d)?;
            if den == 0 {
                return Err(Failure::parse("theta denominator is zero"));
            }
            Ok(Some(Rat::new(parse_int(n)?.into(), den.into())))
        }
        _ => Err(Failure::parse(format!("invalid theta '{arg}'"))),
    }
}

fn cmd_oscillator(cfg: &JobConfig, theta_arg: &str) -> Result<(), Failure> {
    let d = cfg.t_deg;
    let theta = match parse_theta(theta_arg)? {
        None => ParamScalar::param(0),
        Some(r) => ParamScalar::from_rat(r),
    };
    // the oscillator lives at n = 1 with parameter theta
    let ctx = VarContext::new(1, ["theta"]);
    let xu = &XuPoly::<ParamScalar>::x_var(1, 0) * &XuPoly::u_var(1, 0);
    let p = WSymbol::from_poly(xu.scale(&theta));
    let series = starexp_series(&p, d)?;
    let ode = starexp_ode(&p, d)?;
    let resolvent = starexp_via_resolvent(&p, d)?;
    let closed = oscillator_closed_form(&theta, d);
    let fpi = fpi_oscillator(&theta, d, d as i64)?;
    let mut verdicts = std::collections::BTreeMap::new();
    verdicts.insert("series_eq_ode".to_string(), series == ode);
    verdicts.insert("series_eq_resolvent".to_string(), series == resolvent);
    verdicts.insert("series_eq_closed_form".to_string(), series == closed);
    verdicts.insert("fpi_identity".to_string(), fpi.verified);
    let all = verdicts.values().all(|&v| v);
    let mut human = format!("exp(t/h * theta x1 u1) at t-degree {d}, theta = {theta_arg}\n");
    human.push_str(&format!("series:      {}\n", render_tw(&series, &ctx)));
    human.push_str(&format!("closed form: {}\n", render_tw(&closed, &ctx)));
    for (k, v) in &verdicts {
        human.push_str(&format!("{k}: {v}\n"));
    }
    human.pop();
    let out = OscillatorOutput {
        schema: json::SCHEMA_VERSION,
        theta: theta_arg.to_string(),
        t_deg: d,
        verdicts: verdicts.clone(),
        series: json::tw_to_dto(&series, &ctx),
        closed_form: json::tw_to_dto(&closed, &ctx),
    };
    emit(cfg, &human, &out)?;
    if !all {
        return Err(Failure::law("oscillator identities failed"));
    }
    Ok(())
}

fn cmd_check(
    cfg: &JobConfig,
    suite: SuiteArg,
    seed: u64,
    cases: usize,
    demo: Option<&str>,
) -> Result<(), Failure> {
    if demo.is_some() && suite != SuiteArg::Gevrey {
        return Err(Failure::parse("--demo only applies to the gevrey suite"));
    }
    let report = match suite {
        SuiteArg::Laws => checks::run_laws(seed, cases),
        SuiteArg::Laplace => checks::run_laplace(seed, cases),
        SuiteArg::Gevrey => checks::run_gevrey(seed, cases, demo).map_err(Failure::parse)?,
    };
    let mut human = format!(
        "suite {} (seed {seed}, {} cases): {}",
        report.suite,
        report.cases,
        if report.pass { "pass" } else { "FAIL" }
    );
    for v in &report.violations {
        human.push_str(&format!("\nviolation: {v}"));
    }
    if let Some(demo) = &report.demo {
        human.push_str(&format!(
            "\ndemo {}: verdict {}, t-coefficients {}",
            demo.name,
            demo.verdict,
            demo.t_coeffs.join(", ")
        ));
    }
    if let Some(fit) = &report.gevrey_fit {
        human.push_str(&format!(
            "\nsample fit: eps = {} (~{:.4}) against threshold {} -> {}\n({})",
            fit.fitted_epsilon_exact.as_deref().unwrap_or("inexact"),
            fit.fitted_epsilon_approx,
            fit.threshold,
            if fit.verdict { "pass" } else { "fail" },
            fit.norm
        ));
    }
    emit(cfg, &human, &report)?;
    if !report.pass {
        return Err(Failure::law(format!(
            "{} law violation(s) in suite {}",
            report.violations.len(),
            report.suite
        )));
    }
    Ok(())
}

fn emit<T: Serialize>(cfg: &JobConfig, human: &str, json_value: &T) -> Result<(), Failure> {
    match cfg.format {
        OutputFormat::Human => println!("{human}"),
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(json_value)
                .map_err(|e| Failure::parse(format!("serialization failed: {e}")))?
        ),
    }
    Ok(())
}
