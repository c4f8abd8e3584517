//! Command-line front end: classify symmetric quadratic systems, reduce
//! them to a single ODE, normalize under the scaling group, run round-trip
//! integrations, list quadratic first integrals, and run the verification
//! suite.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use symquad_core::numerics::{algebraic_integrate, IntegrationStatus};
use symquad_core::verify;
use symquad_core::{
    classify, normal_form, quadratic_integral_basis, reduce_almost_generic, reduce_generic,
    Error as CoreError, Kind, NormalFormCase, Rational, SymmetricSystem,
};

use config::{
    merge, parse_config_file, resolve, OutputFormat, RawOptions, RunConfig,
    UsageError,
};
use output::{ode_value, poly_value, rational_value, with_seed};

#[derive(Parser)]
#[command(
    name = "symquad",
    version,
    about = "Symmetric quadratic dynamical systems: classification, reduction, integration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// System selection and common options, also accepted from --config.
#[derive(Args, Clone, Default)]
struct SystemFlags {
    /// Preset name: n1, symmetric, lv, kp2, darboux-halphen, gen-dh, lax
    #[arg(long)]
    preset: Option<String>,
    /// Inline system "n:alpha,beta,gamma,delta" with rational entries
    #[arg(long)]
    system: Option<String>,
    /// Path to a tensor JSON file {"n": ..., "A": [[[...]]]}
    #[arg(long)]
    tensor: Option<PathBuf>,
    /// JSON config file supplying any of these options
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension (presets symmetric, lv)
    #[arg(long)]
    n: Option<usize>,
    /// Parameter m (preset kp2)
    #[arg(long)]
    m: Option<String>,
    /// Parameter a (preset gen-dh)
    #[arg(long)]
    a: Option<String>,
    /// Parameter b (preset gen-dh)
    #[arg(long)]
    b: Option<String>,
    /// Parameters for presets n1 and symmetric (rationals like 1/2)
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// Initial point, comma-separated complex components ("1,2,3" or "1+2i,0,1-i")
    #[arg(long)]
    x0: Option<String>,
    /// Integration span "t0:t1"
    #[arg(long)]
    span: Option<String>,
    /// Relative tolerance for the adaptive integrator
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance for the adaptive integrator
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Seed recorded in outputs and used by randomized checks
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (integrate) or file (other commands)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: json or csv (trajectories)
    #[arg(long)]
    format: Option<String>,
}

impl SystemFlags {
    fn into_raw(self) -> RawOptions {
        RawOptions {
            preset: self.preset,
            system: self.system,
            tensor: self.tensor,
            n: self.n,
            m: self.m,
            a: self.a,
            b: self.b,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            x0: self.x0,
            span: self.span,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            seed: self.seed,
            out: self.out,
            format: self.format,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Detect symmetry and classify (generic / almost generic / neither)
    Classify(SystemFlags),
    /// Reduce to a single ODE plus differential polynomials
    Reduce(SystemFlags),
    /// Scale onto the orbit normal form
    Normalize(SystemFlags),
    /// Round-trip integration: reduced equation + root tracking vs direct
    Integrate(SystemFlags),
    /// Basis of quadratic first integrals
    Integrals(SystemFlags),
    /// Run the verification suite
    Verify {
        /// Seed for the randomized identity checks
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
        /// Comma-separated criterion ids to run (default: all)
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(flags) => with_config(flags, cmd_classify),
        Command::Reduce(flags) => with_config(flags, cmd_reduce),
        Command::Normalize(flags) => with_config(flags, cmd_normalize),
        Command::Integrate(flags) => with_config(flags, cmd_integrate),
        Command::Integrals(flags) => with_config(flags, cmd_integrals),
        Command::Verify { seed, only } => cmd_verify(seed, only),
    };
    match result {
        Ok(code) => code,
        Err(CmdError::Usage(e)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(CmdError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

enum CmdError {
    Usage(UsageError),
    Domain(CoreError),
}

impl From<UsageError> for CmdError {
    fn from(e: UsageError) -> Self {
        CmdError::Usage(e)
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        CmdError::Domain(e)
    }
}

type CmdResult = Result<ExitCode, CmdError>;

fn with_config(flags: SystemFlags, run: fn(&RunConfig) -> CmdResult) -> CmdResult {
    let config_path = flags.config.clone();
    let raw = flags.into_raw();
    let raw = match config_path {
        Some(path) => merge(raw, parse_config_file(&path)?)?,
        None => raw,
    };
    let cfg = resolve(&raw)?;
    run(&cfg)
}

fn emit(cfg: &RunConfig, human: String, body: Map<String, Value>) -> CmdResult {
    let doc = with_seed(cfg.seed, body);
    if let Some(path) = &cfg.out {
        std::fs::write(path, serde_json::to_string_pretty(&doc).expect("json"))
            .map_err(|e| CmdError::Usage(UsageError(format!("cannot write output: {e}"))))?;
        println!("{human}");
    } else if cfg.format == OutputFormat::Json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        println!("{human}");
    }
    Ok(ExitCode::SUCCESS)
}

fn params_value(sys: &SymmetricSystem<Rational>) -> Value {
    json!({
        "alpha": rational_value(sys.alpha()),
        "beta": rational_value(sys.beta()),
        "gamma": rational_value(sys.gamma()),
        "delta": rational_value(sys.delta()),
    })
}

fn kind_label(kind: Kind, c: &[Rational]) -> String {
    match kind {
        Kind::Generic => "generic".to_string(),
        Kind::AlmostGenericOnly => {
            let k = c.iter().position(|v| v.is_zero()).map(|i| i + 1).unwrap_or(0);
            format!("almost generic (c{k} = 0)")
        }
        Kind::NonGeneric => "neither generic nor almost generic".to_string(),
    }
}

fn cmd_classify(cfg: &RunConfig) -> CmdResult {
    let sys = cfg.system.symmetric()?;
    let cls = classify(&sys);
    let c_str: Vec<String> = cls.c.iter().map(|v| v.to_string()).collect();
    let human = format!(
        "n = {}\ncanonical parameters (alpha, beta, gamma, delta) = ({}, {}, {}, {})\nclassification: {}\nc = [{}]",
        sys.n(),
        sys.alpha(),
        sys.beta(),
        sys.gamma(),
        sys.delta(),
        kind_label(cls.kind, &cls.c),
        c_str.join(", "),
    );
    let mut body = Map::new();
    body.insert("n".into(), json!(sys.n()));
    body.insert("canonical_parameters".into(), params_value(&sys));
    body.insert("kind".into(), serde_json::to_value(cls.kind).expect("kind"));
    body.insert(
        "c".into(),
        Value::Array(cls.c.iter().map(rational_value).collect()),
    );
    emit(cfg, human, body)
}

fn cmd_reduce(cfg: &RunConfig) -> CmdResult {
    let sys = cfg.system.symmetric()?;
    let cls = classify(&sys);
    let mut body = Map::new();
    body.insert("n".into(), json!(sys.n()));
    body.insert("canonical_parameters".into(), params_value(&sys));
    let human;
    match cls.kind {
        Kind::Generic => {
            let red = reduce_generic(&sys)?;
            let mut lines = vec![format!("reduced equation: {}", red.ode.display())];
            for (k, expr) in red.sigma_exprs.iter().enumerate() {
                lines.push(format!("s{} = {}", k + 1, expr));
            }
            human = lines.join("\n");
            body.insert("kind".into(), json!("generic"));
            body.insert("ode".into(), ode_value(&red.ode));
            body.insert(
                "sigma_exprs".into(),
                Value::Array(red.sigma_exprs.iter().map(poly_value).collect()),
            );
        }
        Kind::AlmostGenericOnly => {
            let red = reduce_almost_generic(&sys)?;
            let mut lines = vec![format!("reduced equation: {}", red.ode.display())];
            for (k, expr) in red.sigma_exprs.iter().enumerate() {
                lines.push(format!("s{} = {}", k + 1, expr));
            }
            let (c, g) = &red.last_linear;
            let g_str = g.to_string();
            let tail = match g_str.strip_prefix('-') {
                Some(rest) => format!("- {rest}"),
                None => format!("+ {g_str}"),
            };
            lines.push(format!("s{n}' = {c}*s1*s{n} {tail}", n = sys.n()));
            human = lines.join("\n");
            body.insert("kind".into(), json!("almost_generic"));
            body.insert("ode".into(), ode_value(&red.ode));
            body.insert(
                "sigma_exprs".into(),
                Value::Array(red.sigma_exprs.iter().map(poly_value).collect()),
            );
            body.insert(
                "last_linear".into(),
                json!({
                    "c": rational_value(c),
                    "g": poly_value(g),
                }),
            );
        }
        Kind::NonGeneric => {
            return Err(CmdError::Domain(CoreError::NotReducible));
        }
    }
    emit(cfg, human, body)
}

fn case_name(case: NormalFormCase) -> &'static str {
    match case {
        NormalFormCase::N1Unit => "one-dimensional, alpha scaled to 1",
        NormalFormCase::N1Zero => "one-dimensional zero system",
        NormalFormCase::GammaOnly => "x' = x^2 + gamma p1^2",
        NormalFormCase::BetaOnly => "x' = x^2 + beta x p1",
        NormalFormCase::Exceptional => "x' = x^2 - x p1 + p1^2/4",
        NormalFormCase::BetaGamma => "x' = x^2 + beta x p1 + gamma p1^2",
    }
}

fn cmd_normalize(cfg: &RunConfig) -> CmdResult {
    let sys = cfg.system.symmetric()?;
    // exact first; fall back to the numeric field when the scale is an
    // irrational square root
    match normal_form(&sys) {
        Ok((b, out, case)) => {
            let human = format!(
                "scaling: lambda = {}, q = {}\nnormal form ({}): (alpha, beta, gamma, delta) = ({}, {}, {}, {})",
                b.lambda, b.q, case_name(case), out.alpha(), out.beta(), out.gamma(), out.delta(),
            );
            let mut body = Map::new();
            body.insert("mode".into(), json!("exact"));
            body.insert(
                "b".into(),
                json!({"lambda": rational_value(&b.lambda), "q": rational_value(&b.q), "n": b.n}),
            );
            body.insert("case".into(), json!(case_name(case)));
            body.insert("normal_form".into(), params_value(&out));
            emit(cfg, human, body)
        }
        Err(CoreError::NotExact) => {
            let (b, out, case) = normal_form(&sys.to_numeric())?;
            let human = format!(
                "scaling (numeric): lambda = {}, q = {}\nnormal form ({}): alpha = {}, beta = {}, gamma = {}, delta = {}",
                b.lambda, b.q, case_name(case), out.alpha(), out.beta(), out.gamma(), out.delta(),
            );
            let cx = |z: &symquad_core::Complex64| json!([z.re, z.im]);
            let mut body = Map::new();
            body.insert("mode".into(), json!("numeric"));
            body.insert(
                "b".into(),
                json!({"lambda": cx(&b.lambda), "q": cx(&b.q), "n": b.n}),
            );
            body.insert("case".into(), json!(case_name(case)));
            body.insert(
                "normal_form".into(),
                json!({
                    "alpha": cx(out.alpha()),
                    "beta": cx(out.beta()),
                    "gamma": cx(out.gamma()),
                    "delta": cx(out.delta()),
                }),
            );
            emit(cfg, human, body)
        }
        Err(e) => Err(CmdError::Domain(e)),
    }
}

fn cmd_integrate(cfg: &RunConfig) -> CmdResult {
    let sys = cfg.system.symmetric()?;
    let x0 = cfg
        .x0
        .clone()
        .ok_or_else(|| CmdError::Usage(UsageError("integrate needs --x0".into())))?;
    let report = algebraic_integrate(&sys, &x0, cfg.span, &cfg.tol)?;
    let status = match report.status {
        IntegrationStatus::Ok => "ok",
        IntegrationStatus::PoleTruncated => "pole_truncated",
        IntegrationStatus::DiscriminantDegenerate => "discriminant_degenerate",
    };
    let human = format!(
        "status: {status}\nsamples: {}\nmax_abs_error: {:.3e}\nmax_rel_error: {:.3e}\nmin |discriminant|: {:.3e}",
        report.reconstructed.len(),
        report.max_abs_error,
        report.max_rel_error,
        report.discriminant_min_abs,
    );
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| CmdError::Usage(UsageError(format!("cannot create {}: {e}", dir.display()))))?;
        let report_doc = with_seed(cfg.seed, {
            let mut m = Map::new();
            m.insert(
                "report".into(),
                serde_json::to_value(&report).expect("report serializes"),
            );
            m
        });
        let write = |name: &str, text: String| -> Result<(), CmdError> {
            std::fs::write(dir.join(name), text).map_err(|e| {
                CmdError::Usage(UsageError(format!("cannot write {name}: {e}")))
            })
        };
        write(
            "report.json",
            serde_json::to_string_pretty(&report_doc).expect("json"),
        )?;
        write("direct.csv", report.direct.to_csv())?;
        write("reconstructed.csv", report.reconstructed.to_csv())?;
        println!("{human}");
        println!("wrote report.json, direct.csv, reconstructed.csv to {}", dir.display());
        Ok(ExitCode::SUCCESS)
    } else if cfg.format == OutputFormat::Csv {
        print!("{}", report.reconstructed.to_csv());
        Ok(ExitCode::SUCCESS)
    } else {
        let mut body = Map::new();
        body.insert(
            "report".into(),
            serde_json::to_value(&report).expect("report serializes"),
        );
        emit(cfg, human, body)
    }
}

fn cmd_integrals(cfg: &RunConfig) -> CmdResult {
    let tensor = cfg.system.tensor();
    let basis = quadratic_integral_basis(&tensor);
    let mut lines = vec![format!("quadratic integral space dimension: {}", basis.len())];
    for q in &basis {
        let poly = q.to_poly();
        lines.push(format!("  {poly}"));
    }
    let human = lines.join("\n");
    let mut body = Map::new();
    body.insert("n".into(), json!(tensor.n()));
    body.insert("dimension".into(), json!(basis.len()));
    body.insert(
        "basis".into(),
        serde_json::to_value(&basis).expect("basis serializes"),
    );
    emit(cfg, human, body)
}

fn cmd_verify(seed: u64, only: Option<String>) -> CmdResult {
    let ids: Vec<usize> = match &only {
        Some(list) => {
            let parsed: Result<Vec<usize>, _> =
                list.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let parsed = parsed
                .map_err(|_| CmdError::Usage(UsageError(format!("bad criterion list `{list}`"))))?;
            for &id in &parsed {
                if !(1..=10).contains(&id) {
                    return Err(CmdError::Usage(UsageError(format!(
                        "criterion ids run from 1 to 10, got {id}"
                    ))));
                }
            }
            parsed
        }
        None => (1..=10).collect(),
    };
    println!("verification suite (seed {seed})");
    let mut all_ok = true;
    for id in ids {
        let result = verify::run_one(id, seed).expect("valid id");
        println!("{}", result.line());
        all_ok &= result.passed;
    }
    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CmdError::Domain(CoreError::Invalid(
            "verification suite failed".into(),
        )))
    }
}
