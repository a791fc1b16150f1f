use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use pauliwmc::bench::{self, BenchConfig, ErrorKind};
use pauliwmc::circuit::Circuit;
use pauliwmc::dimacs::{self, Dialect};
use pauliwmc::equivalence::{self, CheckConfig, Verdict, DEFAULT_EPSILON};
use pauliwmc::oracle;
use pauliwmc::qasm::{parse_qasm, to_qasm};
use pauliwmc::wmc::{count_with, CountOptions};

/// Quantum circuit equivalence checking by weighted model counting.
#[derive(Parser)]
#[command(name = "pauliwmc", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether two QASM circuits agree up to global phase.
    Check {
        u: PathBuf,
        v: PathBuf,
        #[command(flatten)]
        opts: CheckOpts,
        /// Print a JSON report instead of a one-line verdict.
        #[arg(long)]
        json: bool,
        /// Also write every check formula as weighted DIMACS into DIR.
        #[arg(long, value_name = "DIR")]
        emit_dimacs: Option<PathBuf>,
        #[arg(long, default_value = "plain")]
        dialect: Dialect,
    },
    /// Weighted model count of a DIMACS file (sidecar weights if present).
    Count {
        file: PathBuf,
        #[arg(long)]
        stats: bool,
        /// Seconds.
        #[arg(long, default_value_t = 300.0)]
        timeout: f64,
    },
    /// Write the 2n check formulas of `V^dagger U` as weighted DIMACS.
    Encode {
        u: PathBuf,
        v: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, default_value = "plain")]
        dialect: Dialect,
    },
    /// Dense-matrix tools.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Benchmark generation, error injection and batch runs.
    Bench {
        #[command(subcommand)]
        cmd: BenchCmd,
    },
}

#[derive(Args)]
struct CheckOpts {
    /// Float-mode tolerance for a count to equal 1.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 16)]
    jobs: usize,
    /// Seconds per count.
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
}

impl CheckOpts {
    fn config(&self) -> Result<CheckConfig, String> {
        if !(self.timeout > 0.0) {
            return Err(format!("timeout must be positive, got {}", self.timeout));
        }
        Ok(CheckConfig {
            epsilon: self.epsilon,
            jobs: self.jobs,
            timeout: Some(Duration::from_secs_f64(self.timeout)),
            ..CheckConfig::default()
        })
    }
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Matrix-level equivalence up to global phase (at most 10 qubits).
    Check { u: PathBuf, v: PathBuf },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Random circuit as QASM on stdout.
    Gen {
        #[arg(long)]
        qubits: u32,
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Full gate set with random angles instead of the Clifford+T mix.
        #[arg(long)]
        full: bool,
    },
    /// Apply one random error: remove, flip-cnot or phase:<delta>.
    Inject {
        input: PathBuf,
        #[arg(long)]
        kind: ErrorKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate, mutate or rewrite, check; CSV on stdout.
    Run {
        #[arg(long, value_delimiter = ',', default_value = "4,8")]
        qubits: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "20,40")]
        gates: Vec<usize>,
        /// Omit to compare against an equivalent rewrite.
        #[arg(long)]
        error: Option<ErrorKind>,
        #[arg(long, default_value_t = 10)]
        insertions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: CheckOpts,
    },
}

const USAGE: u8 = 3;

fn fail(kind: &str, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {kind}: {msg}");
    ExitCode::from(USAGE)
}

fn load(path: &Path) -> Result<Circuit, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
    parse_qasm(&text).map_err(|e| fail("qasm", format!("{}: {e}", path.display())))
}

fn load_pair(u: &Path, v: &Path) -> Result<(Circuit, Circuit), ExitCode> {
    Ok((load(u)?, load(v)?))
}

fn print_verdict(v: &Verdict) {
    match v {
        Verdict::Equivalent => println!("equivalent"),
        Verdict::NotEquivalent(w) => {
            println!("not_equivalent witness={} count={}", w.check.label(), w.count)
        }
        Verdict::Unknown(reason) => println!("unknown reason={reason:?}"),
    }
}

fn write_formulas(a: &Circuit, dir: &Path, dialect: Dialect) -> Result<(), ExitCode> {
    let formulas = equivalence::check_formulas(a).map_err(|e| fail("encode", e))?;
    for (spec, f) in formulas {
        dimacs::write_instance(&f, dir, &format!("check_{}", spec.label()), dialect)
            .map_err(|e| fail("io", e))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.cmd {
        Cmd::Check {
            u,
            v,
            opts,
            json,
            emit_dimacs,
            dialect,
        } => {
            let (u, v) = load_pair(&u, &v)?;
            let cfg = opts.config().map_err(|e| fail("usage", e))?;
            let a = equivalence::miter(&u, &v).map_err(|e| fail("check", e))?;
            if let Some(dir) = emit_dimacs {
                write_formulas(&a, &dir, dialect)?;
            }
            let report = equivalence::check_identity_report(&a, &cfg).map_err(|e| fail("check", e))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            } else {
                print_verdict(&report.verdict);
            }
            Ok(ExitCode::from(report.verdict.exit_code() as u8))
        }
        Cmd::Count {
            file,
            stats,
            timeout,
        } => {
            let f = dimacs::read_instance(&file).map_err(|e| fail("dimacs", e))?;
            let opts = CountOptions {
                timeout: Some(Duration::from_secs_f64(timeout.max(0.0))),
                ..CountOptions::default()
            };
            match count_with(&f, &opts) {
                Ok(r) => {
                    println!("{}", r.value);
                    if stats {
                        let s = r.stats;
                        eprintln!(
                            "decisions={} propagations={} cache_hits={} seconds={:.6}",
                            s.decisions,
                            s.propagations,
                            s.cache_hits,
                            s.elapsed.as_secs_f64()
                        );
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) if e.is_resource_limit() => {
                    println!("unknown reason={:?}", e.to_string());
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(fail("count", e)),
            }
        }
        Cmd::Encode { u, v, out, dialect } => {
            let (u, v) = load_pair(&u, &v)?;
            let a = equivalence::miter(&u, &v).map_err(|e| fail("check", e))?;
            write_formulas(&a, &out, dialect)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle {
            cmd: OracleCmd::Check { u, v },
        } => {
            let (u, v) = load_pair(&u, &v)?;
            let same = oracle::circuits_equivalent(&u, &v).map_err(|e| fail("oracle", e))?;
            println!("{}", if same { "equivalent" } else { "not_equivalent" });
            Ok(ExitCode::from(if same { 0 } else { 1 }))
        }
        Cmd::Bench { cmd } => match cmd {
            BenchCmd::Gen {
                qubits,
                gates,
                seed,
                full,
            } => {
                let c = if full {
                    bench::gen_random_circuit(qubits, gates, true, seed)
                } else {
                    bench::gen_random_clifford_t(qubits, gates, seed).map_err(|e| fail("bench", e))?
                };
                print!("{}", to_qasm(&c));
                Ok(ExitCode::SUCCESS)
            }
            BenchCmd::Inject { input, kind, seed } => {
                let c = load(&input)?;
                let c = bench::inject_error(&c, kind, seed).map_err(|e| fail("bench", e))?;
                print!("{}", to_qasm(&c));
                Ok(ExitCode::SUCCESS)
            }
            BenchCmd::Run {
                qubits,
                gates,
                error,
                insertions,
                seed,
                opts,
            } => {
                let cfg = BenchConfig {
                    qubits,
                    gates,
                    error,
                    insertions,
                    seed,
                };
                let check = opts.config().map_err(|e| fail("usage", e))?;
                let rows = bench::run_bench(&cfg, &check).map_err(|e| fail("bench", e))?;
                print!("{}", bench::rows_to_csv(&rows));
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
