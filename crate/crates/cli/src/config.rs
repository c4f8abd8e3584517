//! Run configuration: system sources (presets, inline parameters, tensor
//! files, config files), numeric options, and the small value parsers.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use symquad_core::numerics::ToleranceConfig;
use symquad_core::{
    darboux_halphen, detect_symmetry, gen_dh, kp2_tensor, lax_system, lv_tensor, n1_system,
    Complex64, QuadraticTensor, Rational, Scalar, SymmetricSystem,
};

/// Usage-level failure: reported on exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// A loaded system: canonical symmetric parameters, or a raw tensor that
/// commands may pass through symmetry detection.
#[derive(Clone, Debug)]
pub enum LoadedSystem {
    Symmetric(SymmetricSystem<Rational>),
    Tensor(QuadraticTensor<Rational>),
}

impl LoadedSystem {
    /// Canonical symmetric parameters (library error when not symmetric).
    pub fn symmetric(&self) -> symquad_core::Result<SymmetricSystem<Rational>> {
        match self {
            LoadedSystem::Symmetric(sys) => Ok(sys.clone()),
            LoadedSystem::Tensor(t) => detect_symmetry(t),
        }
    }

    pub fn tensor(&self) -> QuadraticTensor<Rational> {
        match self {
            LoadedSystem::Symmetric(sys) => sys.to_tensor(),
            LoadedSystem::Tensor(t) => t.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

/// Everything a command needs to run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub system: LoadedSystem,
    pub x0: Option<Vec<Complex64>>,
    pub span: (f64, f64),
    pub tol: ToleranceConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// System-source and option fields accepted both as command-line flags and
/// as keys of a JSON config file. Unknown keys in the file are rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOptions {
    pub preset: Option<String>,
    pub system: Option<String>,
    pub tensor: Option<PathBuf>,
    pub n: Option<usize>,
    pub m: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub x0: Option<String>,
    pub span: Option<String>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RawOptions {
    fn has_any_system_source(&self) -> bool {
        self.preset.is_some() || self.system.is_some() || self.tensor.is_some()
    }
}

/// Load options from a JSON config file.
pub fn parse_config_file(path: &Path) -> Result<RawOptions, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("config {}: {e}", path.display())))
}

fn parse_rational(label: &str, s: &str) -> Result<Rational, UsageError> {
    s.parse::<Rational>()
        .map_err(|e| usage(format!("{label}: {e}")))
}

fn required_rational(label: &str, v: &Option<String>) -> Result<Rational, UsageError> {
    match v {
        Some(s) => parse_rational(label, s),
        None => Err(usage(format!("preset needs --{label}"))),
    }
}

/// One complex number: "1.5", "2i", "-1+0.5i", "3-2i".
pub fn parse_complex(s: &str) -> Result<Complex64, UsageError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(usage("empty complex component"));
    }
    if let Some(im_part) = t.strip_suffix('i') {
        // find the split between real and imaginary parts: a sign that is
        // not at position 0 and not part of an exponent
        let bytes = im_part.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && bytes[k - 1] as char != 'e' && bytes[k - 1] as char != 'E'
            {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = im_part[..k]
                    .parse()
                    .map_err(|_| usage(format!("bad complex `{s}`")))?;
                let im_str = &im_part[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| usage(format!("bad complex `{s}`")))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if im_part.is_empty() {
                    1.0
                } else if im_part == "-" {
                    -1.0
                } else {
                    im_part.parse().map_err(|_| usage(format!("bad complex `{s}`")))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| usage(format!("bad number `{s}`")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

pub fn parse_x0(s: &str) -> Result<Vec<Complex64>, UsageError> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_span(s: &str) -> Result<(f64, f64), UsageError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("span must be `t0:t1`, got `{s}`")))?;
    let t0: f64 = a.trim().parse().map_err(|_| usage(format!("bad span start `{a}`")))?;
    let t1: f64 = b.trim().parse().map_err(|_| usage(format!("bad span end `{b}`")))?;
    if !(t1 > t0) {
        return Err(usage("span end must exceed span start"));
    }
    Ok((t0, t1))
}

/// "n:alpha,beta,gamma,delta" with rational entries.
fn parse_inline_system(s: &str) -> Result<SymmetricSystem<Rational>, UsageError> {
    let (n_str, params) = s
        .split_once(':')
        .ok_or_else(|| usage("--system must be `n:alpha,beta,gamma,delta`"))?;
    let n: usize = n_str
        .trim()
        .parse()
        .map_err(|_| usage(format!("bad dimension `{n_str}`")))?;
    if n == 0 {
        return Err(usage("dimension must be at least 1"));
    }
    let parts: Vec<&str> = params.split(',').collect();
    if parts.len() != 4 {
        return Err(usage("--system needs four parameters alpha,beta,gamma,delta"));
    }
    let vals: Result<Vec<Rational>, UsageError> = parts
        .iter()
        .map(|p| parse_rational("system parameter", p))
        .collect();
    let v = vals?;
    Ok(SymmetricSystem::new(
        n,
        v[0].clone(),
        v[1].clone(),
        v[2].clone(),
        v[3].clone(),
    ))
}

fn exact_scalar(label: &str, s: &Scalar) -> Result<Rational, UsageError> {
    match s {
        Scalar::Exact(r) => Ok(r.clone()),
        Scalar::Numeric(z) if z.im == 0.0 => Rational::from_f64_exact(z.re)
            .ok_or_else(|| usage(format!("{label}: non-finite entry"))),
        Scalar::Numeric(_) => Err(usage(format!(
            "{label}: complex entries are not supported here; supply exact rationals"
        ))),
    }
}

fn load_tensor(path: &Path) -> Result<QuadraticTensor<Rational>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read tensor {}: {e}", path.display())))?;
    // parse scalars leniently, then require exactness
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        n: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<Vec<Scalar>>>,
    }
    let raw: Raw = serde_json::from_str(&text)
        .map_err(|e| usage(format!("tensor {}: {e}", path.display())))?;
    let n = raw.n;
    let mut entries = Vec::with_capacity(n * n * n);
    for plane in &raw.a {
        for row in plane {
            for s in row {
                entries.push(exact_scalar("tensor entry", s)?);
            }
        }
    }
    QuadraticTensor::from_entries(n, entries)
        .map_err(|e| usage(format!("tensor {}: {e}", path.display())))
}

fn resolve_preset(opts: &RawOptions, name: &str) -> Result<LoadedSystem, UsageError> {
    match name {
        "n1" => {
            let alpha = match &opts.alpha {
                Some(s) => parse_rational("alpha", s)?,
                None => Rational::one(),
            };
            Ok(LoadedSystem::Symmetric(n1_system(alpha)))
        }
        "symmetric" => {
            let n = opts.n.ok_or_else(|| usage("preset symmetric needs --n"))?;
            if n == 0 {
                return Err(usage("dimension must be at least 1"));
            }
            Ok(LoadedSystem::Symmetric(SymmetricSystem::new(
                n,
                required_rational("alpha", &opts.alpha)?,
                required_rational("beta", &opts.beta)?,
                required_rational("gamma", &opts.gamma)?,
                required_rational("delta", &opts.delta)?,
            )))
        }
        "lv" => {
            let n = opts.n.ok_or_else(|| usage("preset lv needs --n"))?;
            if n < 2 {
                return Err(usage("preset lv needs --n of at least 2"));
            }
            Ok(LoadedSystem::Tensor(lv_tensor(n)))
        }
        // the classical three-variable chain under its historical name
        "kovalevskaya" | "kovalevskaya-lv3" => Ok(LoadedSystem::Tensor(lv_tensor(3))),
        "kp2" => {
            let m = required_rational("m", &opts.m)?;
            Ok(LoadedSystem::Tensor(kp2_tensor(&m)))
        }
        "darboux-halphen" | "dh" => Ok(LoadedSystem::Symmetric(darboux_halphen())),
        "gen-dh" => Ok(LoadedSystem::Symmetric(gen_dh(
            &required_rational("a", &opts.a)?,
            &required_rational("b", &opts.b)?,
        ))),
        "lax" => Ok(LoadedSystem::Symmetric(lax_system())),
        other => Err(usage(format!(
            "unknown preset `{other}` (known: n1, symmetric, lv, kp2, darboux-halphen, gen-dh, lax)"
        ))),
    }
}

/// Resolve raw options (flags merged with an optional config file) into a
/// validated run configuration.
pub fn resolve(opts: &RawOptions) -> Result<RunConfig, UsageError> {
    let sources = [
        opts.preset.is_some(),
        opts.system.is_some(),
        opts.tensor.is_some(),
    ]
    .iter()
    .filter(|&&x| x)
    .count();
    if sources == 0 {
        return Err(usage(
            "no system given: use --preset, --system, --tensor, or --config",
        ));
    }
    if sources > 1 {
        return Err(usage("give exactly one of --preset, --system, --tensor"));
    }
    let system = if let Some(name) = &opts.preset {
        resolve_preset(opts, name)?
    } else if let Some(inline) = &opts.system {
        LoadedSystem::Symmetric(parse_inline_system(inline)?)
    } else {
        LoadedSystem::Tensor(load_tensor(opts.tensor.as_ref().unwrap())?)
    };

    let x0 = match &opts.x0 {
        Some(s) => Some(parse_x0(s)?),
        None => None,
    };
    let span = match &opts.span {
        Some(s) => parse_span(s)?,
        None => (0.0, 0.05),
    };
    let mut tol = ToleranceConfig::default();
    if let Some(rt) = opts.rel_tol {
        tol.rel_tol = rt;
    }
    if let Some(at) = opts.abs_tol {
        tol.abs_tol = at;
    }
    tol.validate()
        .map_err(|e| usage(format!("tolerances: {e}")))?;
    let format = match opts.format.as_deref() {
        None => OutputFormat::Human,
        Some("json") => OutputFormat::Json,
        Some("csv") => OutputFormat::Csv,
        Some(other) => return Err(usage(format!("unknown format `{other}` (json or csv)"))),
    };
    Ok(RunConfig {
        system,
        x0,
        span,
        tol,
        seed: opts.seed.unwrap_or(0),
        out: opts.out.clone(),
        format,
    })
}

/// Merge config-file values under the explicit flags (flags win).
pub fn merge(mut flags: RawOptions, file: RawOptions) -> Result<RawOptions, UsageError> {
    if flags.has_any_system_source() && file.has_any_system_source() {
        return Err(usage(
            "system is set both on the command line and in the config file",
        ));
    }
    macro_rules! take {
        ($field:ident) => {
            if flags.$field.is_none() {
                flags.$field = file.$field;
            }
        };
    }
    take!(preset);
    take!(system);
    take!(tensor);
    take!(n);
    take!(m);
    take!(a);
    take!(b);
    take!(alpha);
    take!(beta);
    take!(gamma);
    take!(delta);
    take!(x0);
    take!(span);
    take!(rel_tol);
    take!(abs_tol);
    take!(seed);
    take!(out);
    take!(format);
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-1+0.5i").unwrap(), Complex64::new(-1.0, 0.5));
        assert_eq!(parse_complex("3-2i").unwrap(), Complex64::new(3.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3").unwrap(), Complex64::new(1e-3, 0.0));
        assert_eq!(
            parse_complex("1e-3+2e-4i").unwrap(),
            Complex64::new(1e-3, 2e-4)
        );
        assert!(parse_complex("chaos").is_err());
    }

    #[test]
    fn span_parsing() {
        assert_eq!(parse_span("0:0.5").unwrap(), (0.0, 0.5));
        assert!(parse_span("1:1").is_err());
        assert!(parse_span("nope").is_err());
    }

    #[test]
    fn inline_system_parses_and_canonicalizes() {
        let sys = parse_inline_system("3:2,-2,1/2,-1/2").unwrap();
        assert_eq!(sys, darboux_halphen());
        assert!(parse_inline_system("3:1,2").is_err());
        assert!(parse_inline_system("0:1,0,0,0").is_err());
    }

    #[test]
    fn preset_resolution() {
        let opts = RawOptions {
            preset: Some("gen-dh".into()),
            a: Some("1".into()),
            b: Some("0".into()),
            ..Default::default()
        };
        let cfg = resolve(&opts).unwrap();
        match cfg.system {
            LoadedSystem::Symmetric(sys) => assert_eq!(sys, darboux_halphen()),
            _ => panic!("expected symmetric"),
        }
        // lv resolves through the raw tensor
        let opts = RawOptions {
            preset: Some("lv".into()),
            n: Some(4),
            ..Default::default()
        };
        let cfg = resolve(&opts).unwrap();
        let sys = cfg.system.symmetric().unwrap();
        assert_eq!(*sys.alpha(), Rational::from_int(-2));
        // exactly one source
        let opts = RawOptions {
            preset: Some("lax".into()),
            system: Some("1:1,0,0,0".into()),
            ..Default::default()
        };
        assert!(resolve(&opts).is_err());
        assert!(resolve(&RawOptions::default()).is_err());
    }
}
