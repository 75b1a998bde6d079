//! Batch front end: decay profiles, Hardy-number estimates, membership
//! verdicts, norm profiles, the identity suite and plot scripts.

pub mod output;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hardy_number::function_norms::{
    bergman_profile, empirical_hb, hardy_profile, truncation_ladder, CatalogFunction, NormProfile,
};
use hardy_number::geometry::{DomainSpec, DomainSpecJson, TailQuery};
use hardy_number::hardy_estimator::{
    estimate_hardy_number, geometric_grid, DecayProfile, HardyNumberEstimate, HardyValue,
    DEFAULT_TAIL_WINDOW,
};
use hardy_number::identities::{verification_suite, IdentityReport};
use hardy_number::membership::{
    classify_bergman, classify_hardy, criterion_integral, fit_decay, CriterionIntegral, DecayFit,
    MembershipQuery, MembershipVerdict, DEFAULT_MARGIN,
};
use hardy_number::oracles::exact_hm;
use hardy_number::wos::{estimate_hm, estimate_profile, HmEstimate, Sampler, WosConfig};
use hardy_number::Error;

use output::{fmt_f64, write_json, Cell, Csv};

pub const PROFILE_HEADER: &str = "r,omega,stderr,local_slope";

#[derive(Debug, Parser)]
#[command(
    name = "hardy-number",
    version,
    about = "Hardy and Bergman numbers of planar domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tail harmonic-measure profile (profile.csv).
    Hm,
    /// Profile plus Hardy-number estimate (profile.csv, hardy.json).
    Hardy,
    /// Hardy or Bergman membership of the covering map (member.json).
    Member,
    /// Norm profiles and empirical h/b of a catalog map.
    Norms,
    /// Identity suite and Monte Carlo agreement check (verify.json).
    Verify,
    /// Gnuplot script of log(1/ω) against log r (report.gp).
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Closed-form harmonic measure.
    Oracle,
    /// Walk-on-spheres with multilevel splitting.
    Mc,
    /// Plain walk-on-spheres sharing one set of walks across radii.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub r0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [r0, ratio, count] = parts[..] else {
            return Err(format!("expected r0,ratio,count, got `{s}`"));
        };
        let grid = Grid {
            r0: r0.parse().map_err(|_| format!("bad r0 `{r0}`"))?,
            ratio: ratio.parse().map_err(|_| format!("bad ratio `{ratio}`"))?,
            count: count.parse().map_err(|_| format!("bad count `{count}`"))?,
        };
        if !(grid.r0 > 0.0 && grid.r0.is_finite()) {
            return Err("r0 must be positive".into());
        }
        if !(grid.ratio > 1.0 && grid.ratio.is_finite()) {
            return Err("grid ratio must exceed 1".into());
        }
        if grid.count < 2 {
            return Err("grid count must be at least 2".into());
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Domain description (JSON).
    #[arg(long, global = true)]
    pub domain: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Walks per radius (per level for splitting).
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    /// Radius grid `r0,ratio,count`; defaults to `2·max(1,|a|)·2^k`, k = 0..12.
    #[arg(long, global = true)]
    pub grid: Option<Grid>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Local slopes used by the liminf estimate.
    #[arg(long, global = true, default_value_t = DEFAULT_TAIL_WINDOW)]
    pub window: usize,
    #[arg(long, global = true, value_enum, default_value_t = Method::Mc)]
    pub method: Method,
    /// Catalog map for `norms`: cayley, identity, sector_power:<β>, exp_cayley:<R>.
    #[arg(long, global = true, default_value = "cayley")]
    pub function: String,
    #[arg(long, global = true, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
    /// Independent replicates for the splitting sampler.
    #[arg(long, global = true, default_value_t = 16)]
    pub replicates: usize,
}

/// Validated configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub domain: Option<DomainSpec>,
    pub domain_spec_path: Option<PathBuf>,
    pub seed: u64,
    pub n_samples: usize,
    pub grid: Option<Grid>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub output_dir: PathBuf,
    pub window: usize,
    pub method: Method,
    pub function: CatalogFunction,
    pub margin: f64,
    pub replicates: usize,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or input files.
    Usage(String),
    /// A computation or write failed.
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDomain(_)
            | Error::InvalidConfig(_)
            | Error::Json(_)
            | Error::BasepointOutsideDomain
            | Error::NonFinitePoint { .. }
            | Error::ZeroScale
            | Error::DivergentCase { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let o = cli.options;
        let needs_domain = matches!(
            cli.command,
            Command::Hm | Command::Hardy | Command::Member | Command::Report
        );
        let domain = match (&o.domain, needs_domain) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                Some(DomainSpec::from_json_str(&text)?)
            }
            (None, true) => return Err(CliError::Usage("--domain is required".into())),
            (None, false) => None,
        };
        if o.samples == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        if o.window == 0 {
            return Err(CliError::Usage("--window must be positive".into()));
        }
        if cli.command == Command::Member && o.p.is_none() {
            return Err(CliError::Usage("member needs --p".into()));
        }
        if matches!(o.method, Method::Mc) && o.replicates < 2 {
            return Err(CliError::Usage("--replicates must be at least 2".into()));
        }
        let function = CatalogFunction::parse(&o.function)?;
        Ok(Self {
            command: cli.command,
            domain,
            domain_spec_path: o.domain,
            seed: o.seed,
            n_samples: o.samples,
            grid: o.grid,
            p: o.p,
            alpha: o.alpha,
            output_dir: o.out,
            window: o.window,
            method: o.method,
            function,
            margin: o.margin,
            replicates: o.replicates,
        })
    }

    fn domain(&self) -> &DomainSpec {
        self.domain.as_ref().expect("validated in from_cli")
    }

    fn radii(&self) -> Result<Vec<f64>, CliError> {
        let g = match self.grid {
            Some(g) => g,
            None => Grid {
                r0: self.domain().default_grid_start(),
                ratio: 2.0,
                count: 13,
            },
        };
        Ok(geometric_grid(g.r0, g.ratio, g.count)?)
    }

    fn wos(&self) -> WosConfig {
        WosConfig::new(self.seed, self.n_samples)
    }
}

/// What a run produced.
#[derive(Debug)]
pub struct Outcome {
    pub artifacts: Vec<PathBuf>,
    /// False when a verification check failed.
    pub verified: bool,
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.verified {
            0
        } else {
            1
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for a in &outcome.artifacts {
                println!("wrote {}", a.display());
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Usage(_) => 2,
                CliError::Failed(_) => 1,
            }
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    fs::create_dir_all(&cfg.output_dir)?;
    match cfg.command {
        Command::Hm => run_hm(cfg),
        Command::Hardy => run_hardy(cfg),
        Command::Member => run_member(cfg),
        Command::Norms => run_norms(cfg),
        Command::Verify => run_verify(cfg),
        Command::Report => run_report(cfg),
    }
}

fn profile(cfg: &RunConfig) -> Result<DecayProfile, CliError> {
    let d = cfg.domain();
    let grid = cfg.radii()?;
    let p = match cfg.method {
        Method::Oracle => DecayProfile::from_oracle(d, &grid)?,
        Method::Mc => estimate_profile(
            d,
            &grid,
            &cfg.wos(),
            Sampler::Splitting {
                replicates: cfg.replicates,
            },
        )?,
        Method::Plain => estimate_profile(d, &grid, &cfg.wos(), Sampler::Plain { shared: true })?,
    };
    Ok(p)
}

/// `profile.csv`: one row per radius; the slope column holds the slope of
/// `log(1/ω)` against `log r` from the previous radius.
pub fn profile_csv(p: &DecayProfile) -> Csv {
    let mut csv = Csv::new(PROFILE_HEADER);
    let entries = p.entries();
    for (k, e) in entries.iter().enumerate() {
        let slope = (k > 0 && e.omega > 0.0 && entries[k - 1].omega > 0.0).then(|| {
            let prev = &entries[k - 1];
            (prev.omega.ln() - e.omega.ln()) / (e.r.ln() - prev.r.ln())
        });
        csv.row(&[e.r.into(), e.omega.into(), e.stderr.into(), slope.into()]);
    }
    csv
}

fn write_profile(cfg: &RunConfig, p: &DecayProfile) -> Result<PathBuf, CliError> {
    let path = cfg.output_dir.join("profile.csv");
    profile_csv(p).write(&path)?;
    Ok(path)
}

#[derive(Serialize)]
struct RunMeta<'a> {
    domain: DomainSpecJson,
    method: Method,
    seed: u64,
    n_samples: usize,
    grid: &'a [f64],
}

fn meta<'a>(cfg: &RunConfig, grid: &'a [f64]) -> Result<RunMeta<'a>, CliError> {
    Ok(RunMeta {
        domain: cfg.domain().to_json()?,
        method: cfg.method,
        seed: cfg.seed,
        n_samples: cfg.n_samples,
        grid,
    })
}

fn run_hm(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let path = write_profile(cfg, &p)?;
    Ok(Outcome {
        artifacts: vec![path],
        verified: true,
        summary: format!("{} radii", p.len()),
    })
}

#[derive(Serialize)]
struct HardyReport<'a> {
    run: RunMeta<'a>,
    profile: &'a DecayProfile,
    estimate: &'a HardyNumberEstimate,
}

fn describe(value: HardyValue) -> String {
    match value {
        HardyValue::Finite(v) => format!("{v:.4}"),
        HardyValue::Infinite => "inf".into(),
    }
}

fn run_hardy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let estimate = estimate_hardy_number(&p, cfg.window)?;
    let grid: Vec<f64> = p.entries().iter().map(|e| e.r).collect();
    let csv = write_profile(cfg, &p)?;
    let json = cfg.output_dir.join("hardy.json");
    write_json(
        &json,
        &HardyReport {
            run: meta(cfg, &grid)?,
            profile: &p,
            estimate: &estimate,
        },
    )?;
    Ok(Outcome {
        artifacts: vec![csv, json],
        verified: true,
        summary: format!(
            "hardy number {} ± {:.4}, warnings {:?}",
            describe(estimate.value),
            estimate.ci_halfwidth,
            estimate.warnings
        ),
    })
}

#[derive(Serialize)]
struct MemberReport<'a> {
    run: RunMeta<'a>,
    query: MembershipQuery,
    fit: DecayFit,
    verdict: MembershipVerdict,
    criterion_integral: CriterionIntegral,
}

fn run_member(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p_exp = cfg.p.expect("validated in from_cli");
    let query = match cfg.alpha {
        Some(a) => MembershipQuery::bergman(p_exp, a)?,
        None => MembershipQuery::hardy(p_exp)?,
    };
    let p = profile(cfg)?;
    let fit = fit_decay(&p, cfg.window)?;
    let verdict = match query.alpha {
        Some(_) => classify_bergman(&fit, &query, cfg.margin)?,
        None => classify_hardy(&fit, &query, cfg.margin)?,
    };
    let integral = criterion_integral(&p, &query, cfg.window)?;
    let grid: Vec<f64> = p.entries().iter().map(|e| e.r).collect();
    let json = cfg.output_dir.join("member.json");
    write_json(
        &json,
        &MemberReport {
            run: meta(cfg, &grid)?,
            query,
            fit,
            verdict,
            criterion_integral: integral,
        },
    )?;
    Ok(Outcome {
        artifacts: vec![json],
        verified: true,
        summary: format!(
            "{:?} ({:?}); fitted exponent {:.4}",
            verdict.verdict, verdict.rationale, fit.exponent
        ),
    })
}

fn norm_csv(first: &str, pr: &NormProfile) -> Csv {
    let mut csv = Csv::new(&format!("{first},integral,ln_integral,classification"));
    for ((x, ln), g) in pr.params.iter().zip(&pr.ln_values).zip(&pr.running) {
        csv.row(&[
            (*x).into(),
            ln.exp().into(),
            (*ln).into(),
            Cell::Text(format!("{g:?}").to_lowercase()),
        ]);
    }
    csv
}

fn run_norms(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = cfg.function;
    let p = cfg.p.unwrap_or(0.5);
    let alpha = cfg.alpha.unwrap_or(0.0);
    let deltas = truncation_ladder(6);
    let radii: Vec<f64> = deltas.iter().map(|d| 1.0 - d).collect();
    let hardy = hardy_profile(&f, p, &radii)?;
    let bergman = bergman_profile(&f, p, alpha, &deltas)?;
    let hb = empirical_hb(&f);

    let hardy_path = cfg.output_dir.join("norms_hardy.csv");
    norm_csv("r", &hardy).write(&hardy_path)?;
    let bergman_path = cfg.output_dir.join("norms_bergman.csv");
    norm_csv("delta", &bergman).write(&bergman_path)?;
    let hb_path = cfg.output_dir.join("hb.json");
    write_json(&hb_path, &hb)?;
    Ok(Outcome {
        artifacts: vec![hardy_path, bergman_path, hb_path],
        verified: true,
        summary: format!(
            "{}: h ≈ {:.4}, b ≈ {:.4}; p = {p}: hardy {:?}, bergman(α = {alpha}) {:?}",
            f.label(),
            hb.h_hat,
            hb.b_hat,
            hardy.classification,
            bergman.classification
        ),
    })
}

/// Monte Carlo against closed form at one radius, within three standard errors.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementCheck {
    pub domain: DomainSpecJson,
    pub estimate: HmEstimate,
    pub exact: f64,
    pub z_score: f64,
    pub pass: bool,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    pass: bool,
    identities: &'a [IdentityReport],
    monte_carlo: &'a [AgreementCheck],
}

pub fn agreement_check(
    d: &DomainSpec,
    r: f64,
    cfg: &WosConfig,
) -> Result<AgreementCheck, CliError> {
    let estimate = estimate_hm(d, TailQuery::new(r)?, cfg)?;
    let exact = exact_hm(d, r)?;
    let z_score = (estimate.value - exact) / estimate.stderr;
    Ok(AgreementCheck {
        domain: d.to_json()?,
        estimate,
        exact,
        z_score,
        pass: (estimate.value - exact).abs() <= 3.0 * estimate.stderr,
    })
}

fn run_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let identities = verification_suite()?;
    let d = match &cfg.domain {
        Some(d) => d.clone(),
        None => DomainSpec::half_plane(hardy_number::geometry::PlanePoint::real(1.0))?,
    };
    let mc = vec![agreement_check(&d, 10.0, &cfg.wos())?];
    let pass = identities.iter().all(|r| r.pass) && mc.iter().all(|c| c.pass);
    let path = cfg.output_dir.join("verify.json");
    write_json(
        &path,
        &VerifyReport {
            pass,
            identities: &identities,
            monte_carlo: &mc,
        },
    )?;
    let failed: Vec<&str> = identities
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.name.as_str())
        .collect();
    Ok(Outcome {
        artifacts: vec![path],
        verified: pass,
        summary: format!(
            "{} identity checks, {} failed; monte carlo z = {:.3}{}",
            identities.len(),
            failed.len(),
            mc[0].z_score,
            if pass { "" } else { " (FAILED)" }
        ),
    })
}

/// Gnuplot script with the profile inline and the fitted tail line.
pub fn gnuplot_script(p: &DecayProfile, fit: Option<&DecayFit>, title: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!("set title \"{title}\"\n"));
    s.push_str("set xlabel \"log r\"\nset ylabel \"log 1/omega\"\nset key top left\n");
    s.push_str("$profile << EOD\n");
    for e in p.entries().iter().filter(|e| e.omega > 0.0) {
        s.push_str(&format!(
            "{} {}\n",
            fmt_f64(e.r.ln()),
            fmt_f64(-e.omega.ln())
        ));
    }
    s.push_str("EOD\n");
    match fit {
        Some(f) => {
            s.push_str(&format!(
                "q = {}\nb = {}\nfit_line(x) = q * x + b\n",
                fmt_f64(f.exponent),
                fmt_f64(f.log_intercept)
            ));
            s.push_str(&format!(
                "set arrow from {lo}, graph 0 to {lo}, graph 1 nohead dt 2\n",
                lo = fmt_f64(f.fit_range.0.ln())
            ));
            s.push_str(
                "plot $profile using 1:2 with linespoints title \"profile\", \\\n     fit_line(x) title sprintf(\"slope %.3f\", q)\n",
            );
        }
        None => s.push_str("plot $profile using 1:2 with linespoints title \"profile\"\n"),
    }
    s
}

fn run_report(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = profile(cfg)?;
    let estimate = estimate_hardy_number(&p, cfg.window)?;
    let fit = fit_decay(&p, cfg.window).ok();
    let title = match &cfg.domain_spec_path {
        Some(path) => file_stem(path),
        None => "domain".into(),
    };
    let csv = write_profile(cfg, &p)?;
    let path = cfg.output_dir.join("report.gp");
    fs::write(&path, gnuplot_script(&p, fit.as_ref(), &title))?;
    Ok(Outcome {
        artifacts: vec![csv, path],
        verified: true,
        summary: format!("hardy number {}", describe(estimate.value)),
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "domain".into())
}
