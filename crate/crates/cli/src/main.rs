use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wittext::cocycles::{dualize, residual, residual_window, ExtensionParams};
use wittext::extensions::{CurrentAlgebra, Gen, ModuleWindow};
use wittext::polynomials::parse_poly_in;
use wittext::solver::{h1_poly, parametric_scan, DEFAULT_SEED, MAX_SCAN_DEGREE};
use wittext::tables::{regenerate, TableKind};
use wittext::{Scalar, UPoly, Var};

mod record;
mod report;

use record::CocycleRecord;
use report::Format;

#[derive(Parser)]
#[command(name = "wittext", version, about = "Cocycles for length-two extensions of Witt algebra tensor modules")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Regenerate a classification table from the solvers and compare it with the printed rows
    Tables {
        #[arg(long, value_parser = parse_kind)]
        which: TableKind,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Polynomial H¹ in one degree at fixed parameters
    H1 {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        gamma: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan degrees 1..=max-degree for parameters carrying polynomial classes
    Scan {
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Check a cocycle file: residual plus brute-force bracket check on a window
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long, short = 'k', default_value_t = 4)]
        k: i64,
        /// Accept δ-cocycles outside their usual parameters
        #[arg(long)]
        relaxed: bool,
    },
    /// Write the dual cocycle τ*(k,m) = τ(k,−m−k) at parameters (1−β, 1−α, −γ)
    Dualize {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        relaxed: bool,
    },
    /// Jacobi and antisymmetry checks for Vir ⋉ V with a δ-type central term
    CheckCurrentAlgebra {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// μ(k) in the central term of [L(k), W(−k)]
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        /// Use [W(k), W(m)] = δ_{k+m,0} k c₃ instead of an abelian V
        #[arg(long)]
        heisenberg: bool,
        #[arg(long, short = 'k', default_value_t = 6)]
        k: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// β = −1, μ = k³
    W22,
    /// β = 0, μ = k²
    TwistedHv,
    /// β = 0, μ = k², Heisenberg V
    TwistedHvHeisenberg,
    /// β = 1, μ = 1
    Beta1Const,
    /// β = 1, μ = k
    Beta1K,
    /// β = 1, μ = k, Heisenberg V
    HeisenbergBeta1,
}

impl Preset {
    fn algebra(self) -> CurrentAlgebra {
        let (beta, mu, abelian): (i64, &[i64], bool) = match self {
            Preset::W22 => (-1, &[0, 0, 0, 1], true),
            Preset::TwistedHv => (0, &[0, 0, 1], true),
            Preset::TwistedHvHeisenberg => (0, &[0, 0, 1], false),
            Preset::Beta1Const => (1, &[1], true),
            Preset::Beta1K => (1, &[0, 1], true),
            Preset::HeisenbergBeta1 => (1, &[0, 1], false),
        };
        CurrentAlgebra::new(Scalar::int(beta), UPoly::from_ints(mu), abelian)
    }
}

fn parse_kind(s: &str) -> Result<TableKind, String> {
    s.parse()
}

enum Failure {
    /// Exit 1.
    Verification(String),
    /// Exit 2.
    Input(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

fn parse_scalar(name: &str, text: &str) -> Result<Scalar, Failure> {
    text.parse().map_err(|e| Failure::Input(format!("{name}: {e}")))
}

fn read_record(path: &Path, relaxed: bool) -> Result<(CocycleRecord, wittext::cocycles::Cocycle, ExtensionParams), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let rec: CocycleRecord =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: invalid cocycle JSON: {e}", path.display())))?;
    let (tau, params) = rec.decode(relaxed)?;
    Ok((rec, tau, params))
}

#[derive(Serialize)]
struct H1Json {
    degree: u32,
    alpha: String,
    beta: String,
    gamma: String,
    cocycle_space_dim: usize,
    coboundary_space_dim: usize,
    h1_dim: usize,
    representatives: Vec<String>,
}

fn cmd_h1(alpha: &str, beta: &str, gamma: &str, degree: u32, format: Format) -> Result<u8, Failure> {
    let params = ExtensionParams::new(parse_scalar("alpha", alpha)?, parse_scalar("beta", beta)?, parse_scalar("gamma", gamma)?);
    let r = h1_poly(degree, &params);
    let out = H1Json {
        degree,
        alpha: params.alpha.to_string(),
        beta: params.beta.to_string(),
        gamma: params.gamma.to_string(),
        cocycle_space_dim: r.cocycle_space_dim,
        coboundary_space_dim: r.coboundary_space_dim,
        h1_dim: r.h1_dim,
        representatives: r.representatives.iter().map(|c| c.to_string()).collect(),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Md | Format::Csv => {
            println!("degree {degree} at {params}");
            println!("cocycles: {}, coboundaries: {}, h1: {}", out.cocycle_space_dim, out.coboundary_space_dim, out.h1_dim);
            for rep in &out.representatives {
                println!("  {rep}");
            }
        }
    }
    Ok(0)
}

fn cmd_scan(max_degree: u32, seed: u64, format: Format) -> Result<u8, Failure> {
    if max_degree > MAX_SCAN_DEGREE {
        return Err(Failure::Input(format!("max-degree is limited to {MAX_SCAN_DEGREE}")));
    }
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=max_degree).map(|n| scope.spawn(move || parametric_scan(n, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("scan thread")).collect::<Vec<_>>()
    });
    print!("{}", report::render_scan(&reports, format));
    Ok(0)
}

fn cmd_verify(file: &Path, window: i64, kmax: i64, relaxed: bool) -> Result<u8, Failure> {
    let (_, tau, params) = read_record(file, relaxed)?;
    println!("cocycle {tau} at {params}");
    let window_violations = residual_window(&tau, &params, window);
    match residual(&tau, &params) {
        Ok(r) if !r.is_zero() => {
            println!("residual: {r}");
        }
        Ok(_) => println!("residual: 0"),
        Err(_) => println!("residual on window {window}: {} violations", window_violations.len()),
    }
    if let Some(v) = window_violations.first() {
        return Err(Failure::Verification(format!(
            "cocycle condition fails at k={}, s={}, m={} (defect {})",
            v.k, v.s, v.m, v.defect
        )));
    }
    let mw = ModuleWindow::new(&params, &tau, window);
    let violations = mw.bracket_check(kmax).map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(v) = violations.first() {
        return Err(Failure::Verification(format!(
            "bracket check fails at k={}, s={}, m={} on {:?}_m",
            v.k, v.s, v.m, v.basis
        )));
    }
    println!("bracket check (W={window}, K={kmax}): ok");
    Ok(0)
}

fn cmd_dualize(file: &Path, output: Option<&Path>, relaxed: bool) -> Result<u8, Failure> {
    let (_, tau, params) = read_record(file, relaxed)?;
    let (dual, dparams) = dualize(&tau, &params);
    let rec = CocycleRecord::encode(&dual, &dparams)?;
    let text = serde_json::to_string_pretty(&rec).expect("serializable");
    match output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn cmd_current(preset: Option<Preset>, beta: Option<&str>, mu: Option<&str>, heisenberg: bool, kmax: i64) -> Result<u8, Failure> {
    let algebra = match (preset, beta, mu) {
        (Some(p), None, None) => p.algebra(),
        (None, Some(b), Some(m)) => {
            let mu = parse_poly_in(m, &[Var::K])
                .ok()
                .and_then(|p| p.to_upoly(Var::K))
                .ok_or_else(|| Failure::Input(format!("mu: expected a polynomial in k, got '{m}'")))?;
            CurrentAlgebra::new(parse_scalar("beta", b)?, mu, !heisenberg)
        }
        _ => return Err(Failure::Input("give either --preset or both --beta and --mu".into())),
    };
    let v = if algebra.abelian { "abelian" } else { "Heisenberg" };
    println!("beta = {}, mu = {}, {v} V", algebra.beta, algebra.mu.display_in("k"));
    let anti = algebra.antisymmetry_check(kmax);
    println!("antisymmetry (K={kmax}): {} violations", anti.len());
    let jac = algebra.jacobi_check(kmax);
    println!("jacobi (K={kmax}): {} violations", jac.len());
    if algebra.beta.is_one() && algebra.mu == UPoly::from_ints(&[0, 1]) {
        let ok = (-kmax..=kmax).all(|k| {
            (-kmax..=kmax).all(|m| {
                let mut want = std::collections::BTreeMap::new();
                if m != 0 && m + k != 0 {
                    want.insert(Gen::W(m + k), Scalar::int(m));
                }
                if k + m == 0 && m != 0 {
                    want.insert(Gen::C2, Scalar::int(-m * m));
                }
                algebra.bracket_l_i(k, m) == Some(want)
            })
        });
        println!("[L(k), I(m)] = m I(m+k) - m^2 delta(m+k,0) c2 with I(m) = m W(m): {}", if ok { "ok" } else { "fails" });
    }
    if let Some(j) = jac.first() {
        let (a, b, c) = j.triple;
        return Err(Failure::Verification(format!("Jacobi identity fails on ({a}, {b}, {c})")));
    }
    if let Some((x, y)) = anti.first() {
        return Err(Failure::Verification(format!("antisymmetry fails on ({x}, {y})")));
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Tables { which, format, seed } => {
            let report = regenerate(which, seed);
            print!("{}", report::render_table(&report, format));
            if report.has_discrepancies() {
                if format == Format::Csv {
                    eprint!("{}", report::render_discrepancies(&report));
                }
                return Ok(3);
            }
            Ok(0)
        }
        Cmd::H1 { alpha, beta, gamma, degree, format } => cmd_h1(&alpha, &beta, &gamma, degree, format),
        Cmd::Scan { max_degree, seed, format } => cmd_scan(max_degree, seed, format),
        Cmd::Verify { file, window, k, relaxed } => cmd_verify(&file, window, k, relaxed),
        Cmd::Dualize { file, output, relaxed } => cmd_dualize(&file, output.as_deref(), relaxed),
        Cmd::CheckCurrentAlgebra { preset, beta, mu, heisenberg, k } => {
            cmd_current(preset, beta.as_deref(), mu.as_deref(), heisenberg, k)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
