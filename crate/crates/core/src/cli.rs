//! Command-line front end. `run` never panics on malformed input; every
//! failure maps to an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::matrix_core::random::{gaussian_vector, haar_unitary, seeded_rng};
use crate::matrix_core::{adjoint_range_shells, range_shells, range_sum, svd, ComplexMatrix, Subspace};
use crate::range_rep::{RangeError, RangeRep};
use crate::seqspace::{canonical_membership, weighted_norm_sq, Extended, SeqVector};
use crate::tolerances::{DEFAULT_SEED, FAMILY_GRID, SHELL_KERNEL_TOL, STABILITY_SAMPLES};
use crate::unitary::{
    check_family, check_stability, interleaved_counterexample, perturbation_rotation, stability_epsilon, FamilyKind,
    RotationFamilySpec, UnitaryError,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_REFUTED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "oprange", version, about = "Decide and verify disjoint unitary images of operator ranges")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a range representation admits U with U𝓡 ∩ 𝓡 = {0}.
    Decide(InputArgs),
    /// Enlarge a representation to a dense one with constant shells.
    Enlarge(InputArgs),
    /// Dyadic shell dimensions of a matrix and of its adjoint.
    Shells(ShellArgs),
    /// Exact membership of a sequence in the canonical weighted space.
    Member(InputArgs),
    /// Pairwise disjointness of a unitary family on a grid.
    Family(FamilyArgs),
    /// Build and check the perturbation W moving a point set off itself.
    Perturb(PerturbArgs),
    /// Monte Carlo check of the stability bound λ_min(T² + WVT²V*W*) ≥ δ²/4.
    Stability(StabilityArgs),
    /// Truncation ladder of the interleaved pair of ranges.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ShellArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Singular values at or below tol·‖T‖ count as kernel.
    #[arg(long, default_value_t = SHELL_KERNEL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyKindArg {
    Selfadjoint,
    Group,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "selfadjoint")]
    pub kind: FamilyKindArg,
    /// Ambient dimension; 𝓡 is spanned by the first ⌊dim/2⌋ basis vectors.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = FAMILY_GRID)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    /// JSON {"points": [[[re, im], ...], ...], "v": matrix (optional)}. Without it
    /// a random instance is generated from the seed.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    pub dim: usize,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Dimension of the random subspace holding the points (default ⌊dim/4⌋).
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// JSON {"t": matrix, "v": matrix}; defaults to the interleaved pair.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    #[arg(long, default_value_t = STABILITY_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Truncation levels; delta must vary by less than 10% across them.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32])]
    pub m: Vec<usize>,
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PRECONDITION, message: message.into() }
    }
}

impl From<UnitaryError> for CliError {
    fn from(e: UnitaryError) -> Self {
        CliError::precondition(e.to_string())
    }
}

/// A finished report and the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: Value,
    pub code: u8,
}

impl Report {
    fn verdict(body: Value, ok: bool) -> Self {
        Report { body, code: if ok { EXIT_OK } else { EXIT_REFUTED } }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.body).expect("reports are plain JSON values");
        s.push('\n');
        s
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Decide(a) => decide(&read_json(&a.input)?),
        Command::Enlarge(a) => enlarge(&read_json(&a.input)?),
        Command::Shells(a) => shells(&read_json(&a.input)?, a.tol),
        Command::Member(a) => member(&read_json(&a.input)?),
        Command::Family(a) => family(a),
        Command::Perturb(a) => perturb(a),
        Command::Stability(a) => stability(a),
        Command::Counterexample(a) => counterexample(&a.m),
    }
}

pub fn decide(rep: &RangeRep) -> Result<Report, CliError> {
    let d = rep.decide();
    let body = json!({
        "admits": d.admits,
        "witness": d.witness,
        "closed": rep.is_closed(),
        "dense": rep.is_dense(),
    });
    Ok(Report::verdict(body, d.admits))
}

pub fn enlarge(rep: &RangeRep) -> Result<Report, CliError> {
    let big = rep.enlarge().map_err(|e| match e {
        RangeError::EnlargeInapplicable(_) => CliError::precondition(e.to_string()),
        other => CliError::input(other.to_string()),
    })?;
    let body = json!({
        "input": rep,
        "enlarged": big,
        "admits": big.admits_disjoint_unitary(),
    });
    Ok(Report::verdict(body, true))
}

pub fn shells(t: &ComplexMatrix, tol: f64) -> Result<Report, CliError> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::input(format!("tol = {tol} must be a nonnegative number")));
    }
    let r = range_shells(t, tol);
    let adj = adjoint_range_shells(t, tol);
    let body = json!({
        "rows": t.rows(),
        "cols": t.cols(),
        "tol": tol,
        "scale_shift": r.scale_shift,
        "shells": adj.shells_a,
        "shells_adjoint": adj.shells_a_star,
        "kernel_dim": adj.kernel_a,
        "kernel_adjoint_dim": adj.kernel_a_star,
        "shells_match": adj.shells_match(),
        "symbolic": r.to_symbolic(),
    });
    Ok(Report::verdict(body, true))
}

pub fn member(x: &SeqVector) -> Result<Report, CliError> {
    let is_member = canonical_membership(x);
    let four = num_rational::BigRational::from_integer(4.into());
    let norm = match weighted_norm_sq(x, &four).map_err(|e| CliError::input(e.to_string()))? {
        Extended::Finite(q) => Value::String(q.to_string()),
        Extended::Infinite => Value::String("infinite".into()),
    };
    Ok(Report::verdict(json!({ "member": is_member, "weighted_norm_sq": norm }), is_member))
}

pub fn family(a: &FamilyArgs) -> Result<Report, CliError> {
    if a.dim < 2 {
        return Err(CliError::precondition("family needs dim >= 2"));
    }
    if a.grid < 2 {
        return Err(CliError::precondition("family needs a grid of at least 2 points"));
    }
    let r = a.dim / 2;
    let p = Subspace::coordinate(a.dim, &(0..r).collect::<Vec<_>>());
    let q = Subspace::coordinate(a.dim, &(r..2 * r).collect::<Vec<_>>());
    let spec = RotationFamilySpec::new(p, q)?;
    let kind = match a.kind {
        FamilyKindArg::Selfadjoint => FamilyKind::Selfadjoint,
        FamilyKindArg::Group => FamilyKind::Group,
    };
    let report = check_family(&spec, kind, a.grid)?;
    let pass = report.pass;
    let checks = json!({
        "pairs_disjoint": report.pairs.iter().all(|p| p.disjoint),
        "unitary": report.max_unitary_residual <= crate::tolerances::FRAME_TOL,
        "hermitian": report.max_hermitian_residual <= crate::tolerances::FRAME_TOL,
    });
    let body = json!({ "kind": kind, "dim": a.dim, "range_dim": r, "checks": checks, "report": report, "pass": pass });
    Ok(Report::verdict(body, pass))
}

#[derive(Deserialize)]
struct PerturbInput {
    points: Vec<Vec<[f64; 2]>>,
    v: Option<ComplexMatrix>,
}

pub fn perturb(a: &PerturbArgs) -> Result<Report, CliError> {
    let mut rng = seeded_rng(a.seed);
    let (points, v) = match &a.input {
        Some(path) => {
            let inp: PerturbInput = read_json(path)?;
            let points: Vec<Vec<Complex64>> =
                inp.points.iter().map(|p| p.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
            let n = points.first().map_or(0, Vec::len);
            if n == 0 {
                return Err(CliError::precondition("empty point list"));
            }
            if points.iter().any(|p| p.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()))) {
                return Err(CliError::input("point entries must be finite"));
            }
            (points, inp.v.unwrap_or_else(|| ComplexMatrix::identity(n)))
        }
        None => {
            if a.dim == 0 || a.points == 0 {
                return Err(CliError::precondition("dim and points must be positive"));
            }
            let rank = a.rank.unwrap_or((a.dim / 4).max(1));
            if rank == 0 || rank > a.dim {
                return Err(CliError::precondition(format!("rank {rank} is outside 1..={}", a.dim)));
            }
            if a.k == 0 {
                return Err(CliError::precondition("k must be positive"));
            }
            let basis = haar_unitary(&mut rng, a.dim).column_range(0, rank);
            let kf = f64::from(a.k);
            let points = (0..a.points)
                .map(|_| {
                    let x = basis.matvec(&gaussian_vector(&mut rng, rank));
                    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    let target = if a.k == 1 { 1.0 } else { rng.random_range(1.0 / kf..kf) };
                    x.iter().map(|z| z * (target / norm)).collect()
                })
                .collect();
            (points, haar_unitary(&mut rng, a.dim))
        }
    };
    let p = perturbation_rotation(&points, &v, a.eps, a.k)?;
    let pass = p.norm_ok && p.separation_ok;
    let body = json!({
        "seed": a.seed,
        "eps": a.eps,
        "k": a.k,
        "dim": v.rows(),
        "points": points.len(),
        "checks": { "norm": p.norm_ok, "separation": p.separation_ok },
        "report": p,
        "pass": pass,
    });
    Ok(Report::verdict(body, pass))
}

#[derive(Deserialize)]
struct StabilityInput {
    t: ComplexMatrix,
    v: ComplexMatrix,
}

pub fn stability(a: &StabilityArgs) -> Result<Report, CliError> {
    let (t, v, source) = match &a.input {
        Some(path) => {
            let inp: StabilityInput = read_json(path)?;
            (inp.t, inp.v, json!(path.display().to_string()))
        }
        None => {
            let x = interleaved_counterexample(a.m)?;
            (x.t, x.v, json!({ "interleaved_m": a.m }))
        }
    };
    let mut rng = seeded_rng(a.seed);
    let r = check_stability(&t, &v, a.samples, &mut rng)?;
    let pass = r.pass;
    let body = json!({
        "seed": a.seed,
        "source": source,
        "checks": { "bound": r.violations == 0, "radius": r.max_distance < r.eps },
        "report": r,
        "pass": pass,
    });
    Ok(Report::verdict(body, pass))
}

pub fn counterexample(ms: &[usize]) -> Result<Report, CliError> {
    if ms.is_empty() {
        return Err(CliError::precondition("no truncation levels given"));
    }
    let mut levels = Vec::new();
    let mut deltas = Vec::new();
    let mut all_full_rank = true;
    for &m in ms {
        let x = interleaved_counterexample(m)?;
        let sum = range_sum(&x.t, &x.v.matmul(&x.t)).map_err(|e| CliError::precondition(e.to_string()))?;
        let full_rank = svd(&sum).rank() == sum.rows();
        all_full_rank &= full_rank;
        let s = stability_epsilon(&x.t, &x.v)?;
        deltas.push(s.delta);
        levels.push(json!({
            "m": m,
            "ambient": x.t.rows(),
            "r_shells": x.r_shells.shell_dims(),
            "s_shells": x.s_shells.shell_dims(),
            "sum_full_rank": full_rank,
            "delta": s.delta,
            "eps": s.eps,
        }));
    }
    let hi = deltas.iter().copied().fold(0.0, f64::max);
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let variation = if hi > 0.0 { (hi - lo) / hi } else { f64::INFINITY };
    let stable = lo > 0.0 && variation < 0.1;
    let pass = stable && all_full_rank;
    let body = json!({
        "levels": levels,
        "delta_variation": variation,
        "checks": { "sum_full_rank": all_full_rank, "delta_stable": stable },
        "pass": pass,
    });
    Ok(Report::verdict(body, pass))
}

/// Parses `args`, runs the command, writes the report and returns the exit
/// code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    let text = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    report.code
}
