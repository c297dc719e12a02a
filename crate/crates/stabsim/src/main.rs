//! Command-line front end: weak simulation, overlap tables, rank
//! certificates, and self-validation.

use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use stabsim::check::{run_checks, CheckLevel};
use stabsim::circuit::Circuit;
use stabsim::magic::{alpha, kappa, magic_gate, optimal_p, orbit};
use stabsim::sim::{SimConfig, Simulator};
use stabsim::{approx, Error};

#[derive(Parser)]
#[command(
    name = "stabsim",
    about = "Weak simulation of odd-prime qudit Clifford+T circuits via approximate stabilizer rank",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Sample measurement outcomes from a circuit file.
    Simulate {
        /// Circuit file in the line-oriented text format.
        #[arg(long)]
        circuit: std::path::PathBuf,
        /// Target infidelity of the approximate magic ancilla.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Master seed for code search and sampling.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of samples to draw.
        #[arg(long, default_value_t = 100)]
        samples: u64,
        /// Orbit representative override (default: argmax of |alpha|).
        #[arg(long)]
        p: Option<u64>,
        /// Worker thread cap (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Write samples here instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Cross-validate the prepared ancilla densely when small enough.
        #[arg(long, default_value_t = false)]
        dense_check: bool,
    },
    /// Print the magic-gate overlap table (|alpha|, optimal p, kappa).
    Table {
        /// Comma-separated list of odd prime dimensions.
        #[arg(long, default_value = "3,5,7")]
        d: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Search a code and report the approximate-rank certificate.
    Rank {
        #[arg(long)]
        d: u64,
        /// Number of T gates (magic states) the ancilla covers.
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Orbit representative override.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the self-validation suites.
    Check {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Level {
    Fast,
    Full,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Syntax { .. }
        | Error::IndexOutOfRange { .. }
        | Error::SameQudit { .. }
        | Error::NonPrimeDimension(_) => 2,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn dispatch(cmd: Command) -> stabsim::Result<i32> {
    match cmd {
        Command::Simulate {
            circuit,
            delta,
            seed,
            samples,
            p,
            threads,
            output,
            format,
            dense_check,
        } => cmd_simulate(circuit, delta, seed, samples, p, threads, output, format, dense_check),
        Command::Table { d, format } => cmd_table(&d, format),
        Command::Rank { d, t, delta, seed, p, format } => cmd_rank(d, t, delta, seed, p, format),
        Command::Check { level } => {
            let level = match level {
                Level::Fast => CheckLevel::Fast,
                Level::Full => CheckLevel::Full,
            };
            let suites = run_checks(level);
            let mut all_ok = true;
            for s in &suites {
                println!(
                    "{:<20} {:>5} passed {:>3} failed  {}",
                    s.name,
                    s.passed,
                    s.failed,
                    if s.ok() { "ok" } else { "FAIL" }
                );
                for note in &s.notes {
                    println!("    {note}");
                }
                all_ok &= s.ok();
            }
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    path: std::path::PathBuf,
    delta: f64,
    seed: u64,
    samples: u64,
    p: Option<u64>,
    threads: Option<usize>,
    output: Option<std::path::PathBuf>,
    format: Format,
    dense_check: bool,
) -> stabsim::Result<i32> {
    if let Some(n) = threads {
        // May fail if a pool already exists; the cap is best-effort then.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Syntax {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    let circuit = Circuit::parse(&text)?;
    let t0 = Instant::now();
    let sim = Simulator::new(
        &circuit,
        SimConfig { delta, seed, p_override: p, dense_check, ..Default::default() },
    )?;

    let mut sink: Box<dyn Write> = match &output {
        Some(path) => {
            Box::new(std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| {
                Error::Syntax { line: 0, msg: format!("cannot create {}: {e}", path.display()) }
            })?))
        }
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    };
    if format == Format::Csv {
        writeln!(sink, "outcomes,gadget_outcomes,chi,fidelity").unwrap();
    }
    // Chunked so long runs stream instead of buffering everything.
    const CHUNK: u64 = 8192;
    let mut start = 0;
    while start < samples {
        let end = (start + CHUNK).min(samples);
        let records: Vec<_> = (start..end)
            .into_par_iter()
            .map(|i| sim.sample_at(i))
            .collect::<stabsim::Result<_>>()?;
        for r in &records {
            match format {
                Format::Json | Format::Text => {
                    writeln!(sink, "{}", serde_json::to_string(r).unwrap()).unwrap();
                }
                Format::Csv => {
                    let join =
                        |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":");
                    writeln!(
                        sink,
                        "{},{},{},{}",
                        join(&r.outcomes),
                        join(&r.gadget_outcomes),
                        r.chi,
                        r.fidelity
                    )
                    .unwrap();
                }
            }
        }
        start = end;
    }
    sink.flush().unwrap();
    drop(sink);
    eprintln!(
        "# samples={} chi={} k={} fidelity={:.6} trials={} p={} seed={} wall_ms={}",
        samples,
        sim.chi(),
        sim.code_dimension(),
        sim.fidelity(),
        sim.code_trials(),
        sim.orbit_representative(),
        seed,
        t0.elapsed().as_millis()
    );
    Ok(0)
}

/// Diagonal of M_d rendered as exponents of e^{2 pi i / d^m}, centered.
fn diag_string(d: u64) -> stabsim::Result<String> {
    let gate = magic_gate(d)?;
    let order = (d as i64).pow(gate.order_exponent());
    let parts: Vec<String> = gate
        .lambdas()
        .iter()
        .map(|&l| {
            let mut v = l % order;
            if v > order / 2 {
                v -= order;
            }
            if v < -order / 2 {
                v += order;
            }
            format!("{v}/{order}")
        })
        .collect();
    Ok(parts.join(","))
}

fn cmd_table(dims: &str, format: Format) -> stabsim::Result<i32> {
    let ds: Vec<u64> = dims
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Syntax { line: 0, msg: format!("bad dimension list: {dims}") })
        })
        .collect::<stabsim::Result<_>>()?;
    let mut rows = Vec::new();
    for d in ds {
        let p = optimal_p(d)?;
        let a = alpha(d, p)?;
        rows.push((d, diag_string(d)?, p, a.norm(), kappa(d)?));
    }
    match format {
        Format::Text => {
            println!(
                "{:>3}  {:<44}  {:>2}  {:>10}  {:>7}",
                "d", "M_d diagonal (exponents of 2*pi/d^m)", "p*", "|alpha|", "kappa"
            );
            for (d, diag, p, a, k) in &rows {
                println!("{d:>3}  {diag:<44}  {p:>2}  {a:>10.6}  {k:>7.4}");
            }
        }
        Format::Csv => {
            println!("d,m_diag,p,alpha_abs,kappa");
            for (d, diag, p, a, k) in &rows {
                println!("{d},\"{diag}\",{p},{a:.6},{k:.6}");
            }
        }
        Format::Json => {
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|(d, diag, p, a, k)| {
                    serde_json::json!({
                        "d": d, "m_diag": diag, "p": p, "alpha_abs": a, "kappa": k
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&objs).unwrap());
        }
    }
    Ok(0)
}

fn cmd_rank(
    d: u64,
    t: usize,
    delta: f64,
    seed: u64,
    p: Option<u64>,
    format: Format,
) -> stabsim::Result<i32> {
    let p = match p {
        Some(p) => p % d,
        None => optimal_p(d)?,
    };
    let orb = orbit(d, p)?;
    if orb.alpha.norm() < 1e-9 {
        return Err(Error::DegenerateOrbit { d, p });
    }
    let mut rng = {
        use rand::SeedableRng;
        rand_chacha::ChaCha12Rng::seed_from_u64(seed)
    };
    let (cert, trials) = approx::find_code(t, delta, &orb, &mut rng, None)?;
    let k = cert.code.dimension();
    let chi = cert.code.size();
    match format {
        Format::Text => {
            println!("d        = {d}");
            println!("t        = {t}");
            println!("p        = {p}");
            println!("delta    = {delta}");
            println!("k        = {k}");
            println!("chi      = {chi}");
            println!("Z(L)     = {:.12}", cert.z);
            println!("fidelity = {:.12}", cert.fidelity);
            println!("trials   = {trials}");
            println!("seed     = {seed}");
        }
        Format::Csv => {
            println!("d,t,p,delta,k,chi,z,fidelity,trials,seed");
            println!(
                "{d},{t},{p},{delta},{k},{chi},{:.12},{:.12},{trials},{seed}",
                cert.z, cert.fidelity
            );
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "d": d, "t": t, "p": p, "delta": delta, "k": k, "chi": chi,
                    "z": cert.z, "fidelity": cert.fidelity, "trials": trials, "seed": seed
                })
            );
        }
    }
    Ok(0)
}
