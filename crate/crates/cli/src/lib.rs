//! `galmann` command line.
//!
//! Every subcommand renders its whole output into memory before writing it,
//! so a failing run leaves no partial file behind.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use galmann_core::curve::{read_csv, DEFAULT_SAMPLES};
use galmann_core::frenet::{fmt_sig17, push_row_fields, write_csv, CSV_HEADER};
use galmann_core::galilean::random_isometry;
use galmann_core::mannheim::{fmt_sci6, write_audit_json};
use galmann_core::{
    audit_claims, detect_partner, frenet_apparatus, mannheim_mate, reparametrize_to_arclength,
    synthesize_from_natural, CurveError, CurveSpec, Expression, FrenetData, FrenetError,
    MannheimError, ParseError, SampledCurve,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "galmann",
    version,
    about = "Frenet frames and Mannheim partners in Galilean 3-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frenet apparatus as CSV.
    Frenet(Common),
    /// Base curve and its mate at offset `--lambda`, side by side as CSV.
    Mate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = finite, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Tests whether the curve has a Mannheim partner.
    Detect(Common),
    /// Integrates a curve from `--kappa` and `--tau`, emits its Frenet CSV.
    Synth(Common),
    /// Residuals of the Mannheim relations as JSON.
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = finite, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Changes of curvature and torsion under a seeded random isometry.
    Isometry {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Three `;`-separated components, e.g. "t;t^2/2;t^3/6".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["csv", "kappa", "tau"])]
    curve: Option<String>,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Parameter name used in `--curve`.
    #[arg(long = "var", default_value = "t")]
    variable: String,
    /// Samples with header `t,x,y,z`.
    #[arg(long, conflicts_with_all = ["kappa", "tau"])]
    csv: Option<PathBuf>,
    /// Curvature as a function of `s`.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Torsion as a function of `s`.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    s0: Option<f64>,
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    s1: Option<f64>,
    #[arg(long, env = "GALMANN_SAMPLES", default_value_t = DEFAULT_SAMPLES, value_parser = sample_count)]
    samples: usize,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn finite(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err("must be finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn sample_count(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n >= 8 => Ok(n),
        Ok(n) => Err(format!("need at least 8 samples, got {n}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}", render_parse(.text, .error))]
    Expression { text: String, error: ParseError },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Frenet(#[from] FrenetError),
    #[error(transparent)]
    Mannheim(#[from] MannheimError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

fn render_parse(text: &str, error: &ParseError) -> String {
    format!(
        "{error}\n  {text}\n  {}^",
        " ".repeat(text[..error.offset.min(text.len())].chars().count())
    )
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Expression { .. } | CliError::Io { .. } => EXIT_INPUT,
            CliError::Curve(e) => match e {
                CurveError::InversionFailed { .. } => EXIT_NUMERIC,
                _ => EXIT_INPUT,
            },
            CliError::Frenet(e) => match e {
                FrenetError::DegenerateCurvature { .. } => EXIT_NUMERIC,
                _ => EXIT_INPUT,
            },
            CliError::Mannheim(e) => match e {
                MannheimError::DegenerateMate { .. }
                | MannheimError::TorsionVanishes { .. }
                | MannheimError::Frenet(FrenetError::DegenerateCurvature { .. }) => EXIT_NUMERIC,
                _ => EXIT_INPUT,
            },
        }
    }
}

/// A curve ready for the Frenet machinery.
enum Source {
    Spec(CurveSpec),
    Sampled(SampledCurve),
}

impl Common {
    fn load(&self) -> Result<Source, CliError> {
        if let Some(text) = &self.curve {
            let (Some(t0), Some(t1)) = (self.t0, self.t1) else {
                return Err(CliError::Usage("--curve needs --t0 and --t1".into()));
            };
            let spec = CurveSpec::parse(text, &self.variable, t0, t1).map_err(|e| match e {
                CurveError::Parse { component, source } => CliError::Expression {
                    text: component_text(text, component),
                    error: source,
                },
                other => other.into(),
            })?;
            return Ok(Source::Spec(spec));
        }
        if let Some(path) = &self.csv {
            let file = File::open(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let data = read_csv(io::BufReader::new(file))?;
            return Ok(Source::Sampled(reparametrize_to_arclength(
                &data,
                self.samples,
            )?));
        }
        if self.kappa.is_some() || self.tau.is_some() {
            return Ok(Source::Sampled(self.natural()?));
        }
        Err(CliError::Usage(
            "give a curve with --curve, --csv, or --kappa/--tau".into(),
        ))
    }

    fn natural(&self) -> Result<SampledCurve, CliError> {
        let (Some(kappa), Some(tau)) = (&self.kappa, &self.tau) else {
            return Err(CliError::Usage("--kappa and --tau go together".into()));
        };
        let (Some(s0), Some(s1)) = (self.s0, self.s1) else {
            return Err(CliError::Usage("--kappa/--tau need --s0 and --s1".into()));
        };
        let parse = |text: &String| {
            Expression::parse(text, "s").map_err(|error| CliError::Expression {
                text: text.clone(),
                error,
            })
        };
        Ok(synthesize_from_natural(
            &parse(kappa)?,
            &parse(tau)?,
            s0,
            s1,
            self.samples,
        )?)
    }

    fn sampled(&self) -> Result<SampledCurve, CliError> {
        match self.load()? {
            Source::Spec(spec) => Ok(reparametrize_to_arclength(&spec, self.samples)?),
            Source::Sampled(c) => Ok(c),
        }
    }
}

/// The text of one `;`-separated component, for caret diagnostics.
fn component_text(text: &str, component: &str) -> String {
    let idx = match component {
        "x" => 0,
        "y" => 1,
        _ => 2,
    };
    text.split(';').nth(idx).unwrap_or(text).to_string()
}

/// Frenet CSV bytes for a sampled curve.
pub fn frenet_csv(curve: &SampledCurve, fd: &FrenetData) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&mut buf, curve, fd).expect("writing to memory");
    buf
}

pub fn mate_csv_header() -> String {
    let mate: Vec<String> = CSV_HEADER
        .split(',')
        .skip(1)
        .map(|c| format!("{c}_m"))
        .collect();
    format!("{CSV_HEADER},{}", mate.join(","))
}

/// Base and mate apparatus on shared `s` rows.
pub fn mate_csv(
    base: &SampledCurve,
    base_fd: &FrenetData,
    mate: &SampledCurve,
    mate_fd: &FrenetData,
) -> Vec<u8> {
    let mut buf = Vec::new();
    writeln!(buf, "{}", mate_csv_header()).expect("writing to memory");
    let mut fields = Vec::with_capacity(29);
    for i in 0..base.len() {
        fields.clear();
        fields.push(fmt_sig17(base.s[i]));
        push_row_fields(&mut fields, &base.pos[i], &base_fd.frames[i]);
        push_row_fields(&mut fields, &mate.pos[i], &mate_fd.frames[i]);
        writeln!(buf, "{}", fields.join(",")).expect("writing to memory");
    }
    buf
}

/// Largest changes of `κ` and `τ` between `spec` and its image under the
/// isometry drawn from `seed`.
pub fn isometry_residuals(
    spec: &CurveSpec,
    seed: u64,
    samples: usize,
) -> Result<(f64, f64), CliError> {
    let moved = spec.transformed(&random_isometry(seed))?;
    let a = frenet_apparatus(&reparametrize_to_arclength(spec, samples)?)?;
    let b = frenet_apparatus(&reparametrize_to_arclength(&moved, samples)?)?;
    let mut dk: f64 = 0.0;
    let mut dt: f64 = 0.0;
    for (p, q) in a.frames.iter().zip(&b.frames) {
        dk = dk.max((p.kappa - q.kappa).abs());
        dt = dt.max((p.tau - q.tau).abs());
    }
    Ok((dk, dt))
}

fn execute(cli: Cli) -> Result<(Vec<u8>, Option<PathBuf>), CliError> {
    let mut buf = Vec::new();
    let out = match cli.command {
        Command::Frenet(common) => {
            let c = common.sampled()?;
            let fd = frenet_apparatus(&c)?;
            buf = frenet_csv(&c, &fd);
            common.out
        }
        Command::Synth(common) => {
            let c = common.natural()?;
            let fd = frenet_apparatus(&c)?;
            buf = frenet_csv(&c, &fd);
            common.out
        }
        Command::Mate { common, lambda } => {
            let c = common.sampled()?;
            let fd = frenet_apparatus(&c)?;
            let pair = mannheim_mate(&c, &fd, lambda)?;
            buf = mate_csv(&c, &fd, &pair.mate, pair.mate_frenet()?);
            common.out
        }
        Command::Detect(common) => {
            let c = common.sampled()?;
            let fd = frenet_apparatus(&c)?;
            writeln!(buf, "{}", detect_partner(&c, &fd)?.to_json()).expect("writing to memory");
            common.out
        }
        Command::Audit { common, lambda } => {
            let c = common.sampled()?;
            let fd = frenet_apparatus(&c)?;
            let pair = mannheim_mate(&c, &fd, lambda)?;
            write_audit_json(&mut buf, lambda, c.len(), &audit_claims(&pair))
                .expect("writing to memory");
            common.out
        }
        Command::Isometry { common, seed } => {
            let Source::Spec(spec) = common.load()? else {
                return Err(CliError::Usage("isometry needs --curve".into()));
            };
            let (dk, dt) = isometry_residuals(&spec, seed, common.samples)?;
            writeln!(
                buf,
                "{{\"seed\": {seed}, \"max_dkappa\": {}, \"max_dtau\": {}}}",
                fmt_sci6(dk),
                fmt_sci6(dt)
            )
            .expect("writing to memory");
            common.out
        }
    };
    Ok((buf, out))
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = execute(cli).and_then(|(bytes, out)| match out {
        Some(path) => std::fs::write(&path, &bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(&bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
