//! The `tropreal` command line, as a library so tests can drive it in-process.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use tropreal::config::{self, Config};
use tropreal::realization::{self, RealizationTrace};
use tropreal::{cgb, decompose, hilbert, ideal_ops, zzlinalg};
use tropreal::{Ideal, MonomialOrder, ParamPoint, Poly, Ring};

pub mod problem;

use problem::{parse_fan, parse_int_list, parse_matrix, parse_problem, Problem};

/// Input errors exit with 1, scope errors (caps, unsupported shapes) with 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Scope(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Scope(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Scope(m) => m,
        }
    }
}

impl From<tropreal::Error> for CliError {
    fn from(e: tropreal::Error) -> Self {
        if e.is_scope() {
            CliError::Scope(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "tropreal",
    version,
    about = "Realization loci of tropical fan curves in parametric families"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Print a JSON object instead of one generator per line
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random points and generic coordinate changes
    #[arg(long, global = true, env = "TROPREAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the realization trace as JSON to this file
    #[arg(long, global = true, value_name = "FILE")]
    trace: Option<PathBuf>,
    /// Maximum branching depth of comprehensive Gröbner bases
    #[arg(long, global = true, env = "TROPREAL_CGB_DEPTH")]
    cgb_depth: Option<usize>,
    /// Largest monomial count for which minors are formed
    #[arg(long, global = true, env = "TROPREAL_MINOR_COLS")]
    minor_cols: Option<usize>,
    /// Maximum depth of the component-splitting ladder
    #[arg(long, global = true, env = "TROPREAL_DECOMPOSE_DEPTH")]
    decompose_depth: Option<usize>,
    /// Cache Gröbner bases on disk in this directory
    #[arg(long, global = true, env = "TROPREAL_CACHE_DIR", value_name = "DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closure of the parameters whose fiber curve has the ray
    Real1 {
        file: PathBuf,
        /// Primitive ray, default e_1
        #[arg(long, allow_hyphen_values = true)]
        ray: Option<String>,
    },
    /// As real1, with the ray counted at least `mult` times
    Realm {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        ray: Option<String>,
        #[arg(long)]
        mult: usize,
    },
    /// Closure of the parameters realizing every ray of a fan
    Realsigma {
        file: PathBuf,
        /// Fan file; defaults to the `fan` field of the problem
        #[arg(long)]
        fan: Option<PathBuf>,
    },
    /// Reduced Gröbner basis
    Gb {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
    },
    /// Saturation by a polynomial, default the product of the variables
    Saturate {
        file: PathBuf,
        #[arg(long)]
        by: Option<String>,
    },
    /// Minimal primes
    Decompose { file: PathBuf },
    /// Hilbert function in one degree (of the fiber over --at if there are parameters)
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Parameters where the fiber Hilbert function reaches `mult`
    Minors {
        file: PathBuf,
        #[arg(long)]
        mult: usize,
        /// Degree; defaults to the regularity of the family
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Comprehensive Gröbner basis with its branches
    Cgb {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Elim)]
        order: OrderArg,
    },
    /// Smith normal form of an integer matrix
    Snf { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrderArg {
    Grevlex,
    Lex,
    Elim,
}

impl OrderArg {
    fn order(self) -> MonomialOrder {
        match self {
            OrderArg::Grevlex => MonomialOrder::Grevlex,
            OrderArg::Lex => MonomialOrder::Lex,
            OrderArg::Elim => MonomialOrder::EliminateX,
        }
    }
}

struct Output {
    text: String,
    json: serde_json::Map<String, Value>,
    trace: Option<RealizationTrace>,
}

impl Output {
    fn new(text: String, json: Value) -> Output {
        let json = match json {
            Value::Object(m) => m,
            other => {
                let mut m = serde_json::Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        Output {
            text,
            json,
            trace: None,
        }
    }
}

/// Runs the CLI on `argv` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    0
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    1
                }
            };
        }
    };
    let defaults = Config::default();
    let cfg = Config {
        cgb_depth: cli.opts.cgb_depth.unwrap_or(defaults.cgb_depth),
        minor_cols: cli.opts.minor_cols.unwrap_or(defaults.minor_cols),
        decompose_depth: cli.opts.decompose_depth.unwrap_or(defaults.decompose_depth),
        seed: cli.opts.seed,
    };
    tropreal::groebner::set_disk_cache(cli.opts.cache_dir.clone());
    let start = Instant::now();
    let res = config::with_config(cfg, || execute(&cli.cmd));
    let elapsed = start.elapsed();
    let res = res.and_then(|o| {
        if let Some(path) = &cli.opts.trace {
            let Some(t) = &o.trace else {
                return Err(CliError::Input(
                    "--trace is only available for real1, realm and realsigma".into(),
                ));
            };
            let body = serde_json::to_string_pretty(t).expect("trace serializes");
            std::fs::write(path, body + "\n")
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(o)
    });
    match res {
        Ok(mut o) => {
            if cli.opts.json {
                if let Some(t) = o.trace.take() {
                    o.json.insert(
                        "trace".into(),
                        serde_json::to_value(t).expect("trace serializes"),
                    );
                }
                o.json.insert(
                    "timings".into(),
                    json!({ "total_ms": elapsed.as_secs_f64() * 1000.0 }),
                );
                let body = serde_json::to_string_pretty(&Value::Object(o.json)).expect("json");
                let _ = writeln!(out, "{body}");
            } else {
                let _ = write!(out, "{}", o.text);
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Problem, CliError> {
    parse_problem(&read(path)?).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Canonical generators: the reduced grevlex basis, `1` for the unit ideal
/// and `0` for the zero ideal.
pub fn canonical_generators(i: &Ideal) -> Vec<String> {
    if i.is_unit() {
        return vec!["1".into()];
    }
    let gb = i.canonical();
    if gb.is_empty() {
        return vec!["0".into()];
    }
    gb.iter().map(|g| i.ring().fmt_poly(g)).collect()
}

fn lines(gens: &[String]) -> String {
    let mut s = gens.join("\n");
    s.push('\n');
    s
}

/// Result ideal, shaped so the JSON re-reads as a problem file.
fn ideal_output(i: &Ideal) -> Output {
    let gens = canonical_generators(i);
    let r = i.ring();
    let ideal: Vec<String> = if i.is_zero() {
        Vec::new()
    } else {
        gens.clone()
    };
    Output::new(
        lines(&gens),
        json!({
            "parameters": r.params(),
            "variables": r.vars(),
            "ideal": ideal,
            "generators": gens,
        }),
    )
}

fn ray_or_e1(ray: &Option<String>, ring: &Ring) -> Result<Vec<BigInt>, CliError> {
    match ray {
        Some(s) => parse_int_list(s),
        None => Ok((0..ring.nvars())
            .map(|k| BigInt::from(u8::from(k == 0)))
            .collect()),
    }
}

fn parse_point(s: &str, k: usize) -> Result<ParamPoint, CliError> {
    let q = Ring::new::<&str>(&[], &[])?;
    let coords = s
        .split(',')
        .map(|t| {
            let p = tropreal::parse::parse_poly(&q, t.trim())?;
            Ok(p.constant_value().expect("no variables"))
        })
        .collect::<Result<Vec<_>, tropreal::Error>>()?;
    if coords.len() != k {
        return Err(CliError::Input(format!(
            "--at needs {k} coordinates, got {}",
            coords.len()
        )));
    }
    Ok(ParamPoint::new(coords))
}

/// The family itself if homogeneous in the variables, else its homogenization.
fn homogeneous_family(i: &Ideal) -> Result<Ideal, CliError> {
    let vars = i.ring().var_indices();
    if i.gens().iter().all(|g| g.is_homogeneous_in(&vars)) {
        Ok(i.clone())
    } else {
        Ok(hilbert::homogenized_family(i)?)
    }
}

fn execute(cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::Real1 { file, ray } => {
            let p = load(file)?;
            let v = ray_or_e1(ray, &p.ring)?;
            let ls = realization::local_set(&realization::normalize_ray(&p.ideal, &v)?)?;
            let mut o = ideal_output(&ls.c);
            o.trace = Some(RealizationTrace {
                local: vec![ls.steps],
                ..Default::default()
            });
            Ok(o)
        }
        Command::Realm { file, ray, mult } => {
            let p = load(file)?;
            let v = ray_or_e1(ray, &p.ring)?;
            let (c, tr) =
                realization::local_weighted(&realization::normalize_ray(&p.ideal, &v)?, *mult)?;
            let mut o = ideal_output(&c);
            o.trace = Some(tr);
            Ok(o)
        }
        Command::Realsigma { file, fan } => {
            let p = load(file)?;
            let fan = match fan {
                Some(f) => parse_fan(&read(f)?, p.ring.nvars())?,
                None => p.fan.clone().ok_or_else(|| {
                    CliError::Input("no fan: pass --fan or add a `fan` field".into())
                })?,
            };
            let (c, tr) = realization::global_realization(&p.ideal, &fan)?;
            let mut o = ideal_output(&c);
            o.trace = Some(tr);
            Ok(o)
        }
        Command::Gb { file, order } => {
            let p = load(file)?;
            let gb = p.ideal.groebner_basis(&order.order());
            let gens: Vec<String> = if gb.is_empty() {
                vec!["0".into()]
            } else {
                gb.iter().map(|g| p.ring.fmt_poly(g)).collect()
            };
            Ok(Output::new(lines(&gens), json!({ "generators": gens })))
        }
        Command::Saturate { file, by } => {
            let p = load(file)?;
            let s = match by {
                Some(f) => {
                    let f: Poly = tropreal::parse::parse_poly(&p.ring, f)
                        .map_err(|e| CliError::Input(format!("--by: {e}")))?;
                    ideal_ops::saturate(&p.ideal, &f)?
                }
                None => ideal_ops::saturate_by_vars(&p.ideal)?,
            };
            Ok(ideal_output(&s))
        }
        Command::Decompose { file } => {
            let p = load(file)?;
            let comps = decompose::components(&p.ideal)?;
            let gens: Vec<Vec<String>> = comps.iter().map(canonical_generators).collect();
            let text: String = gens
                .iter()
                .map(|g| format!("({})\n", g.join(", ")))
                .collect();
            Ok(Output::new(text, json!({ "components": gens })))
        }
        Command::Hilbert { file, degree, at } => {
            let p = load(file)?;
            let fam = homogeneous_family(&p.ideal)?;
            let value = if p.ring.nparams() == 0 {
                hilbert::hilbert_function(&fam, *degree)?
            } else {
                let at = at.as_deref().ok_or_else(|| {
                    CliError::Input("the family has parameters: pass --at".into())
                })?;
                let a = parse_point(at, p.ring.nparams())?;
                hilbert::fiber_hilbert_function(&fam, &a, *degree)?
            };
            Ok(Output::new(
                format!("{value}\n"),
                json!({ "degree": degree, "value": value }),
            ))
        }
        Command::Minors { file, mult, degree } => {
            let p = load(file)?;
            let fam = homogeneous_family(&p.ideal)?;
            let r = match degree {
                Some(d) => *d,
                None => hilbert::regularity(&fam)?.value,
            };
            let d = hilbert::minors_ideal(&fam, *mult, r, None)?;
            let mut o = ideal_output(&d);
            o.json.insert("degree".into(), json!(r));
            Ok(o)
        }
        Command::Cgb { file, order } => {
            let p = load(file)?;
            let b = cgb::comprehensive_basis(&p.ideal, &order.order())?;
            let basis: Vec<String> = b.polys.iter().map(|g| p.ring.fmt_poly(g)).collect();
            let mut text = lines(&basis);
            for br in &b.branches {
                let eqs = if br.equations.is_empty() {
                    "0".to_string()
                } else {
                    br.equations.join(", ")
                };
                let nz = if br.nonzero.is_empty() {
                    "1".to_string()
                } else {
                    br.nonzero.join(", ")
                };
                text.push_str(&format!(
                    "branch {}: {} = 0; {} != 0{}\n",
                    br.id,
                    eqs,
                    nz,
                    if br.unit { "; unit" } else { "" }
                ));
            }
            Ok(Output::new(
                text,
                json!({ "basis": basis, "branches": b.branches }),
            ))
        }
        Command::Snf { file } => {
            let m = parse_matrix(&read(file)?)?;
            let s = zzlinalg::smith_normal_form(&m);
            let diag: Vec<String> = s.diagonal().iter().map(|x| x.to_string()).collect();
            let rows = |a: &zzlinalg::IntMatrix| -> Vec<Vec<String>> {
                a.to_rows()
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect())
                    .collect()
            };
            let text = format!("diagonal: {}\nP: {}\nQ: {}\n", diag.join(" "), s.p, s.q);
            Ok(Output::new(
                text,
                json!({ "diagonal": diag, "d": rows(&s.d), "p": rows(&s.p), "q": rows(&s.q) }),
            ))
        }
    }
}
