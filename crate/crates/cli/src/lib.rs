//! Command-line front end for `wallcross`.
//!
//! [`run_command`] does all the work and returns the exit code with the text
//! to print, so tests can drive it without spawning a process.

pub mod expr;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use thiserror::Error;
use wallcross::{
    build_cp_product, build_sphere_product, cp2_plan, evaluate_plan, format_rational, parse_rational, rank1_plan,
    ring_relation, walls, weighted_segre, weyl_correct, Cp2Variant, Direction, EquivariantClass, Generator,
    ModelKind, Plan, Rational, TorusModel, WeightedSpace,
};

pub use expr::{parse_class_expr, ClassExpr, SyntaxError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("cannot read `{path}`: {reason}")]
    Io { path: PathBuf, reason: String },
    #[error(transparent)]
    Domain(#[from] wallcross::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Syntax(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Domain(wallcross::Error::Format(_) | wallcross::Error::InvalidSpace(_)) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "wallcross", version, about = "Exact integrals over symplectic quotients by localization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pair a class with the fundamental class of a quotient.
    Pair {
        #[arg(long)]
        model: String,
        /// Class expression, e.g. `L^2` or `weyl(v1*v2)`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        source: Source,
    },
    /// Symplectic volume of a torus or Weyl-group quotient.
    Volume {
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value_t = Group::Torus)]
        group: Group,
        #[command(flatten)]
        source: Source,
        /// Also print a decimal approximation.
        #[arg(long)]
        float: bool,
    },
    /// List the walls crossed along a direction.
    Walls {
        #[arg(long)]
        model: String,
        /// Direction as comma-separated integers; defaults to `1` in rank one.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
    /// Print a localization plan as JSON.
    Plan {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        source: BuiltinSource,
    },
    /// Ring relation of a weighted projective space.
    Ring {
        /// Lines as `w:r1,r2;w:r1,r2`.
        #[arg(long, allow_hyphen_values = true)]
        space: String,
    },
    /// Weighted Segre classes of a weighted projective space.
    Segre {
        #[arg(long, allow_hyphen_values = true)]
        space: String,
        /// Highest piece to print; defaults to the rank.
        #[arg(long)]
        order: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Torus,
    Weyl,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Rank-one path `p0:dir`, e.g. `0:+` or `1/2:down`.
    #[arg(long, allow_hyphen_values = true)]
    path: Option<String>,
    /// Plan file as written by `wallcross plan`.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Named recipe for `cp2:n` models, e.g. `general` or `exchanged-mirrored`.
    #[arg(long)]
    recipe: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct BuiltinSource {
    #[arg(long, allow_hyphen_values = true)]
    path: Option<String>,
    #[arg(long)]
    recipe: Option<String>,
}

/// Runs the CLI on `args` (program name first) and returns the exit code
/// and the text to print.
pub fn run_command<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    match execute(cli.command) {
        Ok(out) => (EXIT_OK, out),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}

fn execute(command: Command) -> CliResult<String> {
    match command {
        Command::Pair { model, class, source } => {
            let model = load_model(&model)?;
            let expr = parse_class_expr(&class)?;
            let a = expr.evaluate(&model)?;
            let plan = resolve_plan(&model, &source)?;
            let value = evaluate_plan(&model, &plan, &a)?;
            Ok(format!("{}\n", format_rational(&value)))
        }
        Command::Volume {
            model,
            group,
            source,
            float,
        } => {
            let model = load_model(&model)?;
            let plan = resolve_plan(&model, &source)?;
            volume(&model, &plan, group, float)
        }
        Command::Walls { model, xi } => {
            let model = load_model(&model)?;
            let xi = match xi {
                Some(text) => parse_int_list(&text)?,
                None if model.rank() == 1 => vec![1],
                None => return Err(CliError::Usage("--xi is required for models of rank above one".into())),
            };
            Ok(walls(&model, &xi)?.to_string())
        }
        Command::Plan { model, source } => {
            let model = load_model(&model)?;
            let plan = builtin_plan(&model, source.path.as_deref(), source.recipe.as_deref())?;
            Ok(format!("{}\n", plan.to_json()))
        }
        Command::Ring { space } => {
            let space: WeightedSpace = space.parse()?;
            Ok(format!("{}\n", ring_relation(&space)))
        }
        Command::Segre { space, order } => {
            let space: WeightedSpace = space.parse()?;
            let order = order.unwrap_or(space.rank() as u32);
            let s = weighted_segre(&space, order);
            let mut out = String::new();
            for e in 0..=order {
                out.push_str(&format!("s_{e} = {}\n", s.piece(e)));
            }
            Ok(out)
        }
    }
}

/// `spheres:n`, `cp2:n` or the path of a model file.
fn load_model(spec: &str) -> CliResult<TorusModel> {
    let builtin = |prefix: &str| -> CliResult<Option<usize>> {
        match spec.strip_prefix(prefix) {
            None => Ok(None),
            Some(n) => match n.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(Some(n)),
                _ => Err(CliError::Usage(format!("`{spec}`: expected a positive count after `{prefix}`"))),
            },
        }
    };
    if let Some(n) = builtin("spheres:")? {
        return Ok(build_sphere_product(n));
    }
    if let Some(n) = builtin("cp2:")? {
        return Ok(build_cp_product(3, n));
    }
    let text = read_file(Path::new(spec))?;
    Ok(TorusModel::from_json(&text)?)
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

fn resolve_plan(model: &TorusModel, source: &Source) -> CliResult<Plan> {
    if let Some(file) = &source.plan {
        let text = read_file(file)?;
        let plan = Plan::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
        plan.validate(model)?;
        return Ok(plan);
    }
    builtin_plan(model, source.path.as_deref(), source.recipe.as_deref())
}

fn builtin_plan(model: &TorusModel, path: Option<&str>, recipe: Option<&str>) -> CliResult<Plan> {
    if let Some(path) = path {
        let (p0, dir) = parse_path(path)?;
        return Ok(rank1_plan(model, &p0, dir)?);
    }
    let recipe = recipe.ok_or_else(|| CliError::Usage("a plan source is required".into()))?;
    let variant: Cp2Variant = recipe
        .parse()
        .map_err(|e: wallcross::Error| CliError::Usage(e.to_string()))?;
    match model.kind() {
        ModelKind::ProjectiveProduct { k: 3, n } => Ok(cp2_plan(n, variant)?),
        _ => Err(wallcross::Error::Unsupported("recipes exist only for cp2:n models".into()).into()),
    }
}

fn parse_path(text: &str) -> CliResult<(Rational, Direction)> {
    let bad = || CliError::Usage(format!("`{text}`: expected a path `p0:dir` such as `0:+`"));
    let (p0, dir) = text.rsplit_once(':').ok_or_else(bad)?;
    let p0 = parse_rational(p0).map_err(|_| bad())?;
    let dir: Direction = dir.parse().map_err(|_| bad())?;
    Ok((p0, dir))
}

fn parse_int_list(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("`{text}`: expected comma-separated integers")))
        })
        .collect()
}

/// `vol = c·(2π)^m` with `c = ⟨κ(L^m/m!), [X//G]⟩`.
fn volume(model: &TorusModel, plan: &Plan, group: Group, float: bool) -> CliResult<String> {
    let mut m = model.complex_dimension() as i64 - model.rank() as i64;
    if group == Group::Weyl {
        let roots = model.roots().ok_or(wallcross::Error::NoRootData)?;
        m -= roots.len() as i64;
    }
    if m < 0 {
        return Err(wallcross::Error::Unsupported(format!("quotient has negative dimension {m}")).into());
    }
    let m = m as u32;
    let l = wallcross::class_generator(model, &Generator::Prequantum)?;
    let factorial: num_bigint::BigInt = (1..=m).map(num_bigint::BigInt::from).product();
    let mut a: EquivariantClass = l.pow(m).scale(&Rational::new(1.into(), factorial));
    if group == Group::Weyl {
        a = weyl_correct(model, &a)?;
    }
    let c = evaluate_plan(model, plan, &a)?;
    let mut out = format!("{} * (2pi)^{m}", format_rational(&c));
    if float {
        let approx = c.to_f64().unwrap_or(f64::NAN) * (2.0 * std::f64::consts::PI).powi(m as i32);
        out.push_str(&format!(" ~ {approx:.10e}"));
    }
    out.push('\n');
    Ok(out)
}
