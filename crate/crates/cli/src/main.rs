use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use so4_spherical::family::build_family;
use so4_spherical::group::{reconstruct_phi, wedge_cover, Rotation};
use so4_spherical::hyp::l_eigensolve;
use so4_spherical::io::{complex_matrix_json, gram_to_csv, samples_to_csv};
use so4_spherical::orthogonality::{commutant, gram_table, WeightMatrix};
use so4_spherical::structures::{build_structures, eigen_ledger};
use so4_spherical::verify::{run_all, GroupTolerances};
use so4_spherical::Error;

const THREADS_VAR: &str = "SO4SPH_THREADS";

#[derive(Parser)]
#[command(name = "so4sph", version, about = "Matrix-valued orthogonal polynomials for (SO(4), SO(3))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Ell {
    /// K-type `l` (dimension l+1)
    #[arg(long)]
    ell: usize,
}

#[derive(Args)]
struct Grid {
    #[command(flatten)]
    ell: Ell,
    #[arg(long, default_value_t = 8)]
    wmax: usize,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// All structure matrices as JSON
    Structures {
        #[command(flatten)]
        ell: Ell,
        #[command(flatten)]
        out: Output,
    },
    /// One JSON file per P_w and Ptilde_w, plus Psi
    Family {
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the identity suite and print a pass/fail table
    Verify {
        #[command(flatten)]
        grid: Grid,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        tol_single: Option<f64>,
        #[arg(long)]
        tol_composite: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Gram blocks <Ptilde_w, Ptilde_w'>
    Gram {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Numeric samples of W(u)
    Weight {
        #[command(flatten)]
        ell: Ell,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        sample: Vec<f64>,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Commutant basis and the block-reducing matrix R
    Reduce {
        #[command(flatten)]
        ell: Ell,
        #[command(flatten)]
        out: Output,
    },
    /// Eigenvectors of L(-n(n+2)) with their eigenvalue ledger
    Eigen {
        #[command(flatten)]
        ell: Ell,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Phi(a(theta)) for the spherical function indexed by (w, k)
    Reconstruct {
        #[command(flatten)]
        ell: Ell,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        theta: Vec<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// (a(g), b(g)) for a 4x4 rotation read from a JSON array of rows
    Cover {
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Identity(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Domain(_) | Error::NotRotation(_) | Error::IndexOutOfRange(_) => {
                Self::Usage(e.to_string())
            }
            _ => Self::Identity(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Output, v: &Value) -> Outcome {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Identity(e.to_string()))?;
    s.push('\n');
    emit(out.out.as_deref(), &s)
}

fn to_value<T: serde::Serialize>(x: &T) -> std::result::Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::Identity(e.to_string()))
}

fn warn_odd(ell: usize) {
    if ell % 2 == 1 {
        eprintln!("warning: l={ell} is odd; pi_l is only a projective representation of SO(3), group-level results are defined up to sign");
    }
}

fn configure_threads() -> Outcome {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| usage(format!("{THREADS_VAR}={v} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Structures { ell, out } => {
            warn_odd(ell.ell);
            emit_json(&out, &to_value(&build_structures(ell.ell))?)
        }
        Command::Family { grid, out } => {
            let ell = grid.ell.ell;
            warn_odd(ell);
            let fam = build_family(ell, grid.wmax)?;
            std::fs::create_dir_all(&out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
            let write = |name: String, v: Value| -> Outcome {
                let o = Output { out: Some(out.join(name)) };
                emit_json(&o, &v)
            };
            write("Psi.json".into(), to_value(&fam.psi)?)?;
            for (w, p) in &fam.pw {
                write(format!("P_{w}.json"), json!({ "ell": ell, "w": w, "P": to_value(p)? }))?;
            }
            for (w, p) in &fam.pw_tilde {
                write(format!("Ptilde_{w}.json"), json!({ "ell": ell, "w": w, "P": to_value(p)? }))?;
            }
            Ok(())
        }
        Command::Verify { grid, json: as_json, tol_single, tol_composite, out } => {
            let ell = grid.ell.ell;
            warn_odd(ell);
            let mut tol = GroupTolerances::default();
            if let Some(t) = tol_single {
                tol.single = t;
            }
            if let Some(t) = tol_composite {
                tol.composite = t;
            }
            let start = std::time::Instant::now();
            let report = run_all(ell, grid.wmax, &tol)?;
            for (layer, d) in &report.timings {
                eprintln!("timing {:<13} {:.3}s", layer.name(), d.as_secs_f64());
            }
            eprintln!("timing {:<13} {:.3}s", "total", start.elapsed().as_secs_f64());
            if as_json {
                emit_json(&out, &to_value(&report)?)?;
            } else {
                emit(out.out.as_deref(), &report.render())?;
            }
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Identity("some identities failed".into()))
            }
        }
        Command::Gram { grid, csv, json: as_json, out } => {
            let ell = grid.ell.ell;
            warn_odd(ell);
            let fam = build_family(ell, grid.wmax)?;
            let mut weight = WeightMatrix::from_psi(ell, &fam.psi);
            let g = gram_table(&mut weight, &fam, grid.wmax)?;
            if csv {
                emit(out.out.as_deref(), &gram_to_csv(&g)?)?;
            } else if as_json {
                emit_json(&out, &to_value(&g)?)?;
            } else {
                let mut s = format!("gram l={ell} wmax={}\n", grid.wmax);
                for e in g.entries.iter().filter(|e| e.w == e.w2) {
                    let d: Vec<String> = (0..=ell).map(|j| e.matrix[(j, j)].to_string()).collect();
                    s += &format!("w={}: diag({})\n", e.w, d.join(", "));
                }
                let off = g.entries.iter().filter(|e| e.w != e.w2 && !e.matrix.is_zero()).count();
                s += &format!("nonzero off-diagonal blocks: {off}\n");
                emit(out.out.as_deref(), &s)?;
            }
            if g.is_orthogonal() {
                Ok(())
            } else {
                Err(Failure::Identity("Gram table is not block diagonal".into()))
            }
        }
        Command::Weight { ell, sample, csv, out } => {
            let ell = ell.ell;
            warn_odd(ell);
            let weight = WeightMatrix::new(ell)?;
            let samples = sample
                .iter()
                .map(|&u| Ok((u, weight.eval_f64(u)?)))
                .collect::<std::result::Result<Vec<_>, Error>>()?;
            if csv {
                emit(out.out.as_deref(), &samples_to_csv(&samples)?)
            } else {
                let v: Vec<Value> = samples.iter().map(|(u, m)| json!({ "u": u, "W": complex_matrix_json(m) })).collect();
                emit_json(&out, &json!({ "ell": ell, "samples": v }))
            }
        }
        Command::Reduce { ell, out } => {
            warn_odd(ell.ell);
            let c = commutant(&WeightMatrix::new(ell.ell)?)?;
            emit_json(&out, &to_value(&c)?)
        }
        Command::Eigen { ell, n, out } => {
            let ell = ell.ell;
            warn_odd(ell);
            let nn = n as i64;
            let mut packets = Vec::new();
            for (mu, a) in l_eigensolve(ell, n)? {
                let ledger = eigen_ledger(ell, a.w, a.k)?;
                packets.push(json!({ "k": a.k, "w": a.w, "mu": mu.to_string(), "a": to_value(&a.a)?, "ledger": to_value(&ledger)? }));
            }
            emit_json(&out, &json!({ "ell": ell, "n": n, "lambda": -nn * (nn + 2), "eigenvectors": packets }))
        }
        Command::Reconstruct { ell, w, k, theta, out } => {
            let ell = ell.ell;
            warn_odd(ell);
            let mut rows = Vec::new();
            for t in theta {
                let phi = reconstruct_phi(ell, w, k, &Rotation::a_theta(t))?;
                rows.push(json!({ "theta": t, "Phi": complex_matrix_json(&phi) }));
            }
            emit_json(&out, &json!({ "ell": ell, "w": w, "k": k, "values": rows }))
        }
        Command::Cover { input, out } => {
            let text =
                std::fs::read_to_string(&input).map_err(|e| usage(format!("{}: {e}", input.display())))?;
            let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: expected a JSON array of rows: {e}", input.display())))?;
            let g = Rotation::from_rows(&rows)?;
            if g.dim() != 4 {
                return Err(usage(format!("expected a 4x4 matrix, got {0}x{0}", g.dim())));
            }
            let (a, b) = wedge_cover(&g)?;
            emit_json(&out, &json!({ "a": a.to_rows(), "b": b.to_rows() }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
