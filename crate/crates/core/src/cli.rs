//! Command-line front end. Commands read a kernel description in JSON and
//! write CSV data with a JSON sidecar beside it (`out.csv` → `out.json`).
//!
//! Exit codes: 0 success, 1 a verified property failed, 2 bad input,
//! 3 unsupported kernel or grid, 4 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{
    bernstein_certify, cm_certify, duality_residual, sonine_residual, CertOptions, CertReport, Property,
};
use crate::calculus::{d_a, j_a, solve_relaxation, VectorTrajectory};
use crate::convolve::{solve_duality, solve_sonine, KernelInput};
use crate::error::Error;
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::laplace::{check_pd, check_structure, default_tail, numeric_laplace_many};
use crate::linalg::{Matrix, SymMatrix, Vector};
use crate::probe::ProbeSet;
use crate::sampled::{DeltaPlusFunction, Regular, SampledMatrixFunction};

const SEED_VAR: &str = "SONINE_SEED";
const DEFAULT_SEED: u64 = 42;
const DEFAULT_RESIDUAL_TOL: f64 = 1e-2;
const DEFAULT_LAPLACE_CELLS: usize = 20_000;

type Rows = Vec<Vec<f64>>;

#[derive(Parser, Debug)]
#[command(name = "sonine", version, about = "Sonine pairs, duality solutions and A-calculus on a grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a kernel together with its Sonine partner.
    Pair(PairArgs),
    /// Solve A∗X = t·I (`--rhs t`) or A∗X = I (`--rhs one`).
    Solve(SolveArgs),
    /// Run class, transform and residual checks; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Generalized Caputo derivative D_A of a trajectory.
    Deriv(OperatorArgs),
    /// A-integral J_A of a trajectory.
    Integ(OperatorArgs),
    /// Integrate the relaxation equation D_A σ = K(σ, t).
    Relax(RelaxArgs),
    /// Numerical Laplace transform of a kernel, with closed forms alongside.
    Laplace(LaplaceArgs),
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Number of cells.
    #[arg(long = "grid-n", default_value_t = 1000)]
    n: usize,
    /// Horizon T.
    #[arg(long = "grid-t", default_value_t = 1.0)]
    t: f64,
    /// Grading exponent; nodes T(i/N)^γ.
    #[arg(long = "grid-gamma")]
    gamma: Option<f64>,
}

impl GridArgs {
    fn build(&self) -> Result<Grid, Failure> {
        Ok(match self.gamma {
            Some(g) => Grid::graded(self.t, self.n, g)?,
            None => Grid::uniform(self.t, self.n)?,
        })
    }

    fn describe(&self) -> Value {
        json!({ "n": self.n, "t": self.t, "gamma": self.gamma.unwrap_or(1.0) })
    }
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    kernel: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: PathBuf,
    /// Tolerance for the Sonine residual recorded in the sidecar.
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RhsFlag {
    /// R = t·I
    T,
    /// R = I
    One,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long, value_enum)]
    rhs: RhsFlag,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Cm,
    Licm,
    Bernstein,
    SpdTransform,
    Structure,
    SonineResidual,
    DualityResidual,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Kernel description; required by transform and residual checks.
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// Solution CSV from `solve` or `pair`; its sidecar supplies the atom.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    checks: Vec<Check>,
    /// Tolerance for class and residual checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Transform variables for spd-transform and structure.
    #[arg(long = "p-list", value_delimiter = ',')]
    p_list: Vec<f64>,
    /// Grid on which a kernel's class is certified when no input is given.
    #[command(flatten)]
    grid: GridArgs,
    /// Report file; the summary always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OperatorArgs {
    #[arg(long)]
    kernel: PathBuf,
    /// Trajectory CSV `t,v1,…,vm`; a leading `t = 0` row gives the initial value.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RhsName {
    /// K(σ, t) = −σ
    Linear,
    /// K(σ, t) = −σ/(1 + |σ|) componentwise
    Demo,
}

#[derive(Args, Debug)]
struct RelaxArgs {
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long = "rhs-name", value_enum, default_value = "linear")]
    rhs_name: RhsName,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    sigma0: Vec<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct LaplaceArgs {
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long = "p-list", value_delimiter = ',', required = true)]
    p_list: Vec<f64>,
    /// Quadrature cells on [0, T_tail].
    #[arg(long = "grid-n", default_value_t = DEFAULT_LAPLACE_CELLS)]
    cells: usize,
    /// Truncation point; defaults to where e^{−p_min T} = 1e-10.
    #[arg(long = "grid-t")]
    t_tail: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Unsupported(String),
    Numerical(String),
    Verify,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify => 1,
            Failure::Input(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_) | Error::OutOfRange { .. } => Failure::Input(msg),
            Error::Unsupported(_) | Error::UnsupportedKernel(_) => Failure::Unsupported(msg),
            _ => Failure::Numerical(msg),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) | Failure::Unsupported(m) | Failure::Numerical(m) => {
                    eprintln!("sonine: {m}")
                }
                Failure::Verify => eprintln!("sonine: verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Pair(a) => cmd_pair(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Deriv(a) => cmd_operator(&a, "deriv"),
        Command::Integ(a) => cmd_operator(&a, "integ"),
        Command::Relax(a) => cmd_relax(&a),
        Command::Laplace(a) => cmd_laplace(&a),
    }
}

fn probe_seed() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{SEED_VAR}={s} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load_kernel(path: &Path) -> Result<KernelSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    // serde_json messages carry the line and column
    KernelSpec::from_json(&text).map_err(|e| io_failure(path, e))
}

fn kernel_json(a: &KernelSpec) -> Value {
    serde_json::to_value(a).expect("kernel descriptions serialize")
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn matrix_header(prefix: &str, m: usize) -> impl Iterator<Item = String> + '_ {
    (1..=m).flat_map(move |i| (1..=m).map(move |j| format!("{prefix}{i}{j}")))
}

fn row_major(m: &Matrix) -> impl Iterator<Item = f64> + '_ {
    (0..m.nrows()).flat_map(move |i| (0..m.ncols()).map(move |j| m[(i, j)]))
}

fn write_csv(path: &Path, header: Vec<String>, rows: Rows) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_failure(path, e))?;
    w.write_record(&header).map_err(|e| io_failure(path, e))?;
    for row in rows {
        w.write_record(row.into_iter().map(num)).map_err(|e| io_failure(path, e))?;
    }
    w.flush().map_err(|e| io_failure(path, e))
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn write_json(path: &Path, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Rows), Failure> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_failure(path, e))?;
    let header = r
        .headers()
        .map_err(|e| io_failure(path, e))?
        .iter()
        .map(str::to_owned)
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| io_failure(path, e))?;
        let row = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| io_failure(path, format!("row {}: {e}", i + 2)))?;
        if row.len() != header.len() {
            return Err(io_failure(path, format!("row {} has {} fields", i + 2, row.len())));
        }
        rows.push(row);
    }
    if header.len() < 2 || rows.is_empty() {
        return Err(io_failure(path, "expected a header and at least one data row"));
    }
    Ok((header, rows))
}

/// Splits off a leading `t = 0` row and builds the grid from the rest.
fn split_origin(path: &Path, mut rows: Rows) -> Result<(Option<Vec<f64>>, Grid, Rows), Failure> {
    let origin = if rows[0][0] == 0.0 {
        Some(rows.remove(0)[1..].to_vec())
    } else {
        None
    };
    let nodes: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let grid = Grid::from_nodes(&nodes).map_err(|e| io_failure(path, e))?;
    Ok((origin, grid, rows))
}

fn sampled_regular(x: &DeltaPlusFunction, grid: &Grid) -> Result<Vec<Matrix>, Failure> {
    Ok(match x.regular() {
        Regular::Sampled(f) => f.values().to_vec(),
        Regular::Kernel(k) => grid
            .nodes()
            .iter()
            .map(|&t| k.eval(t).map(SymMatrix::into_matrix))
            .collect::<Result<_, _>>()?,
    })
}

/// A residual report, or `null` when the check does not apply to the grid.
fn optional_report(r: Result<CertReport, Error>) -> Result<Value, Failure> {
    match r {
        Ok(rep) => Ok(serde_json::to_value(rep).expect("reports serialize")),
        Err(Error::Unsupported(_)) => Ok(Value::Null),
        Err(e) => Err(e.into()),
    }
}

fn cmd_pair(args: &PairArgs) -> Result<(), Failure> {
    let a = load_kernel(&args.kernel)?;
    let grid = args.grid.build()?;
    let (partner, method) = match a.sonine_partner() {
        Ok(x) => (x, "closed_form"),
        Err(Error::Unsupported(_)) => (solve_sonine(&a, &grid)?, "numerical"),
        Err(e) => return Err(e.into()),
    };
    let fs = sampled_regular(&partner, &grid)?;
    let m = a.rank();
    let header = std::iter::once("t".to_owned())
        .chain(matrix_header("A", m))
        .chain(matrix_header("F", m))
        .collect();
    let mut rows = Vec::with_capacity(grid.len());
    for (&t, f) in grid.nodes().iter().zip(&fs) {
        let av = a.eval(t)?.into_matrix();
        rows.push(std::iter::once(t).chain(row_major(&av)).chain(row_major(f)).collect());
    }
    write_csv(&args.out, header, rows)?;
    let residual = optional_report(sonine_residual(&a, &partner, &grid, args.tol))?;
    write_json(
        &sidecar_path(&args.out),
        &json!({
            "command": "pair",
            "kernel": kernel_json(&a),
            "grid": args.grid.describe(),
            "partner": method,
            "atom": partner.atom().to_rows(),
            "residual": residual,
        }),
    )
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let a = load_kernel(&args.kernel)?;
    let grid = args.grid.build()?;
    let (x, residual, rhs) = match args.rhs {
        RhsFlag::T => {
            let x = solve_duality(&a, &grid)?;
            let r = duality_residual(&a, &x, &grid, args.tol)?;
            (x, r, "t")
        }
        RhsFlag::One => {
            let x = solve_sonine(&a, &grid)?;
            let r = sonine_residual(&a, &x, &grid, args.tol)?;
            (x, r, "one")
        }
    };
    let values = sampled_regular(&x, &grid)?;
    let header = std::iter::once("t".to_owned()).chain(matrix_header("M", a.rank())).collect();
    let rows = grid
        .nodes()
        .iter()
        .zip(&values)
        .map(|(&t, v)| std::iter::once(t).chain(row_major(v)).collect())
        .collect();
    write_csv(&args.out, header, rows)?;
    write_json(
        &sidecar_path(&args.out),
        &json!({
            "command": "solve",
            "rhs": rhs,
            "kernel": kernel_json(&a),
            "grid": args.grid.describe(),
            "atom": x.atom().to_rows(),
            "residual": residual,
        }),
    )
}

/// A solution read back from `solve` output: CSV samples plus the sidecar atom.
fn load_solution(path: &Path) -> Result<(Grid, DeltaPlusFunction), Failure> {
    let (header, rows) = read_csv(path)?;
    let entries = header.len() - 1;
    let m = (entries as f64).sqrt().round() as usize;
    if m * m != entries {
        return Err(io_failure(path, format!("{entries} value columns do not form a square matrix")));
    }
    let (_, grid, rows) = split_origin(path, rows)?;
    let values = rows
        .iter()
        .map(|r| Matrix::from_row_slice(m, m, &r[1..]))
        .collect();
    let f = SampledMatrixFunction::new(grid.clone(), values).map_err(|e| io_failure(path, e))?;
    let side = sidecar_path(path);
    let atom = if side.exists() {
        let text = fs::read_to_string(&side).map_err(|e| io_failure(&side, e))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| io_failure(&side, e))?;
        match doc.get("atom") {
            Some(v) => {
                let rows: Vec<Vec<f64>> =
                    serde_json::from_value(v.clone()).map_err(|e| io_failure(&side, e))?;
                SymMatrix::from_rows(&rows).map_err(|e| io_failure(&side, e))?
            }
            None => SymMatrix::zeros(m),
        }
    } else {
        SymMatrix::zeros(m)
    };
    let x = DeltaPlusFunction::new(atom, Regular::Sampled(f)).map_err(|e| io_failure(path, e))?;
    Ok((grid, x))
}

fn default_p_list() -> Vec<f64> {
    (0..9).map(|k| 10f64.powf(-2.0 + 0.5 * k as f64)).collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let kernel = args.kernel.as_deref().map(load_kernel).transpose()?;
    let solution = args.input.as_deref().map(load_solution).transpose()?;
    let need_kernel = |check: Check| {
        kernel
            .as_ref()
            .ok_or_else(|| Failure::Input(format!("check {check:?} needs --kernel")))
    };
    let need_solution = |check: Check| {
        solution
            .as_ref()
            .ok_or_else(|| Failure::Input(format!("check {check:?} needs --input")))
    };
    let seed = probe_seed()?;
    let p_list = if args.p_list.is_empty() {
        default_p_list()
    } else {
        args.p_list.clone()
    };
    let mut opts = CertOptions::default();
    if let Some(tol) = args.tol {
        opts.tol = tol;
    }
    let residual_tol = args.tol.unwrap_or(DEFAULT_RESIDUAL_TOL);

    let mut reports = Vec::with_capacity(args.checks.len());
    for &check in &args.checks {
        let report = match check {
            Check::Cm | Check::Licm | Check::Bernstein => {
                let certify = |f: KernelInput<'_>, grid: &Grid, probes: &ProbeSet, opts: &CertOptions| {
                    if check == Check::Bernstein {
                        bernstein_certify(f, grid, probes, opts)
                    } else {
                        cm_certify(f, grid, probes, opts)
                    }
                };
                let mut r = match &solution {
                    Some((grid, x)) => {
                        let f = x
                            .sampled()
                            .ok_or_else(|| Failure::Input("input has no sampled part".into()))?;
                        certify(f.into(), grid, &ProbeSet::with_seed(f.rank(), seed)?, &opts)?
                    }
                    None => {
                        let a = need_kernel(check)?;
                        let grid = args.grid.build()?;
                        certify(a.into(), &grid, &ProbeSet::with_seed(a.rank(), seed)?, &opts)?
                    }
                };
                if check == Check::Licm {
                    r.property = Property::Licm;
                }
                r
            }
            Check::SpdTransform => {
                let a = need_kernel(check)?;
                check_pd(a, &p_list, &ProbeSet::with_seed(a.rank(), seed)?)?
            }
            Check::Structure => {
                let a = need_kernel(check)?;
                check_structure(a, &p_list, &ProbeSet::with_seed(a.rank(), seed)?)?
            }
            Check::SonineResidual | Check::DualityResidual => {
                let a = need_kernel(check)?;
                let (grid, x) = need_solution(check)?;
                if check == Check::SonineResidual {
                    sonine_residual(a, x, grid, residual_tol)?
                } else {
                    duality_residual(a, x, grid, residual_tol)?
                }
            }
        };
        println!(
            "{}: {} (max violation {:.3e}, tolerance {:.3e})",
            serde_json::to_value(report.property).expect("serializes").as_str().unwrap_or("?"),
            if report.passed() { "pass" } else { "fail" },
            report.max_violation,
            report.tolerance
        );
        reports.push(report);
    }
    let passed = reports.iter().all(CertReport::passed);
    if let Some(out) = &args.out {
        write_json(out, &json!({ "passed": passed, "seed": seed, "reports": reports }))?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn vector_rows(traj: &VectorTrajectory) -> Rows {
    let origin = traj
        .initial()
        .map(|v| std::iter::once(0.0).chain(v.iter().copied()).collect());
    origin
        .into_iter()
        .chain(
            traj.grid()
                .nodes()
                .iter()
                .zip(traj.values())
                .map(|(&t, v)| std::iter::once(t).chain(v.iter().copied()).collect()),
        )
        .collect()
}

fn vector_header(prefix: &str, m: usize) -> Vec<String> {
    std::iter::once("t".to_owned())
        .chain((1..=m).map(|i| format!("{prefix}{i}")))
        .collect()
}

fn cmd_operator(args: &OperatorArgs, which: &str) -> Result<(), Failure> {
    let a = load_kernel(&args.kernel)?;
    let (_, rows) = read_csv(&args.input)?;
    let (origin, grid, rows) = split_origin(&args.input, rows)?;
    let values = rows.iter().map(|r| Vector::from_column_slice(&r[1..])).collect();
    let w = VectorTrajectory::new(grid, values, origin.map(Vector::from_vec))
        .map_err(|e| io_failure(&args.input, e))?;
    let result = if which == "deriv" { d_a(&a, &w)? } else { j_a(&a, &w)? };
    write_csv(&args.out, vector_header("v", result.dim()), vector_rows(&result))?;
    write_json(
        &sidecar_path(&args.out),
        &json!({ "command": which, "kernel": kernel_json(&a), "nodes": result.len() }),
    )
}

fn cmd_relax(args: &RelaxArgs) -> Result<(), Failure> {
    let a = load_kernel(&args.kernel)?;
    let grid = args.grid.build()?;
    let sigma = match args.rhs_name {
        RhsName::Linear => solve_relaxation(&a, |s: &Vector, _| Ok(-s), &args.sigma0, &grid)?,
        RhsName::Demo => solve_relaxation(
            &a,
            |s: &Vector, _| Ok(s.map(|x| -x / (1.0 + x.abs()))),
            &args.sigma0,
            &grid,
        )?,
    };
    write_csv(&args.out, vector_header("s", sigma.dim()), vector_rows(&sigma))?;
    let rhs = match args.rhs_name {
        RhsName::Linear => "linear",
        RhsName::Demo => "demo",
    };
    write_json(
        &sidecar_path(&args.out),
        &json!({
            "command": "relax",
            "kernel": kernel_json(&a),
            "grid": args.grid.describe(),
            "rhs_name": rhs,
            "sigma0": args.sigma0,
        }),
    )
}

fn cmd_laplace(args: &LaplaceArgs) -> Result<(), Failure> {
    let a = load_kernel(&args.kernel)?;
    let p_min = args.p_list.iter().copied().fold(f64::INFINITY, f64::min);
    if !(p_min > 0.0) {
        return Err(Failure::Input("--p-list values must be positive".into()));
    }
    let t_tail = args.t_tail.unwrap_or_else(|| default_tail(p_min));
    let estimates = numeric_laplace_many(&a, &args.p_list, t_tail, args.cells)?;
    let header = std::iter::once("p".to_owned()).chain(matrix_header("M", a.rank())).collect();
    let rows = estimates
        .iter()
        .map(|e| std::iter::once(e.p).chain(row_major(&e.value)).collect())
        .collect();
    write_csv(&args.out, header, rows)?;
    let entries: Vec<Value> = estimates
        .iter()
        .map(|e| {
            let closed = a.laplace(e.p).ok().map(|m| m.to_rows());
            json!({ "p": e.p, "tail_bound": e.tail_bound, "closed_form": closed })
        })
        .collect();
    write_json(
        &sidecar_path(&args.out),
        &json!({
            "command": "laplace",
            "kernel": kernel_json(&a),
            "t_tail": t_tail,
            "cells": args.cells,
            "entries": entries,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "sonine", "laplace", "--kernel", "k.json", "--p-list", "0.5,1,2", "--out", "o.csv",
        ])
        .unwrap();
        match cli.command {
            Command::Laplace(a) => assert_eq!(a.p_list, vec![0.5, 1.0, 2.0]),
            other => panic!("parsed {other:?}"),
        }
        let cli = Cli::try_parse_from([
            "sonine", "verify", "--kernel", "k.json", "--checks", "cm,spd-transform,duality-residual",
        ])
        .unwrap();
        match cli.command {
            Command::Verify(a) => {
                assert_eq!(a.checks, vec![Check::Cm, Check::SpdTransform, Check::DualityResidual])
            }
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn negative_initial_values_parse() {
        let cli = Cli::try_parse_from([
            "sonine", "relax", "--kernel", "k.json", "--sigma0", "-1,2", "--out", "o.csv",
        ])
        .unwrap();
        match cli.command {
            Command::Relax(a) => assert_eq!(a.sigma0, vec![-1.0, 2.0]),
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::invalid("x")).code(), 2);
        assert_eq!(Failure::from(Error::Unsupported("x".into())).code(), 3);
        assert_eq!(Failure::from(Error::SingularMatrix { minor: 1 }).code(), 4);
        assert_eq!(Failure::Verify.code(), 1);
    }

    #[test]
    fn seventeen_significant_digits() {
        let x = 0.1 + 0.2;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn headers_are_row_major() {
        let h: Vec<String> = matrix_header("M", 2).collect();
        assert_eq!(h, ["M11", "M12", "M21", "M22"]);
    }
}
