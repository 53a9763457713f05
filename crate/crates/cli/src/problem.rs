//! Input files: problem descriptions, fans and integer matrices.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use tropreal::realization::Fan;
use tropreal::zzlinalg::IntMatrix;
use tropreal::{Ideal, Ring};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RayEntry {
    pub ray: Vec<i64>,
    pub mult: usize,
}

/// On-disk problem: a family `I` over `Q[c][x]` and optionally a fan.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProblemFile {
    pub parameters: Vec<String>,
    pub variables: Vec<String>,
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<Vec<RayEntry>>,
}

/// A parsed problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub ring: Ring,
    pub ideal: Ideal,
    pub fan: Option<Fan>,
}

fn json_err(what: &str, e: serde_json::Error) -> CliError {
    CliError::Input(format!(
        "{what}: line {}, column {}: {e}",
        e.line(),
        e.column()
    ))
}

pub fn parse_problem(src: &str) -> Result<Problem, CliError> {
    let pf: ProblemFile = serde_json::from_str(src).map_err(|e| json_err("problem file", e))?;
    pf.build()
}

impl ProblemFile {
    pub fn build(&self) -> Result<Problem, CliError> {
        let ring = Ring::new(&self.parameters, &self.variables)?;
        let mut gens = Vec::with_capacity(self.ideal.len());
        for (k, s) in self.ideal.iter().enumerate() {
            let g = tropreal::parse::parse_poly(&ring, s)
                .map_err(|e| CliError::Input(format!("ideal[{k}]: {e}")))?;
            gens.push(g);
        }
        let ideal = Ideal::new(&ring, gens)?;
        let fan = match &self.fan {
            Some(rays) => Some(build_fan(rays, ring.nvars())?),
            None => None,
        };
        Ok(Problem { ring, ideal, fan })
    }
}

pub fn build_fan(rays: &[RayEntry], nvars: usize) -> Result<Fan, CliError> {
    if let Some(bad) = rays.iter().find(|r| r.ray.len() != nvars) {
        return Err(CliError::Input(format!(
            "fan ray {:?} has length {}, the ring has {nvars} variables",
            bad.ray,
            bad.ray.len()
        )));
    }
    let rays = rays
        .iter()
        .map(|r| (r.ray.iter().map(|&x| BigInt::from(x)).collect(), r.mult))
        .collect();
    Ok(Fan::new(rays)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FanFile {
    Bare(Vec<RayEntry>),
    Wrapped { fan: Vec<RayEntry> },
}

/// A fan file: either a list of `{ray, mult}` or an object with a `fan` list.
pub fn parse_fan(src: &str, nvars: usize) -> Result<Fan, CliError> {
    let f: FanFile = serde_json::from_str(src).map_err(|e| json_err("fan file", e))?;
    let rays = match f {
        FanFile::Bare(r) | FanFile::Wrapped { fan: r } => r,
    };
    build_fan(&rays, nvars)
}

#[derive(Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<serde_json::Number>>,
}

/// Integer matrix `{rows, cols, entries}` with 64-bit entries.
pub fn parse_matrix(src: &str) -> Result<IntMatrix, CliError> {
    let m: MatrixFile = serde_json::from_str(src).map_err(|e| json_err("matrix file", e))?;
    if m.entries.len() != m.rows || m.entries.iter().any(|r| r.len() != m.cols) {
        return Err(CliError::Input(format!(
            "matrix entries do not match the declared shape {}x{}",
            m.rows, m.cols
        )));
    }
    if m.rows == 0 || m.cols == 0 {
        return Err(CliError::Input("matrix must be nonempty".into()));
    }
    let mut rows = Vec::with_capacity(m.rows);
    for r in &m.entries {
        let mut row = Vec::with_capacity(m.cols);
        for x in r {
            let s = x.to_string();
            let v: BigInt = s
                .parse()
                .map_err(|_| CliError::Input(format!("matrix entry `{s}` is not an integer")))?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(IntMatrix::from_rows(&rows)?)
}

/// Comma-separated integers, as in `--ray 1,0`.
pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::Input(format!("`{t}` is not an integer in `{s}`")))
        })
        .collect()
}
