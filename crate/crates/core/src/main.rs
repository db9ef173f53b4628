use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use charlab::arithmetic::unit_group;
use charlab::characters::Character;
use charlab::lab::{self, ScanConfig, ScanRecord};
use charlab::numeric::format_sig12;
use charlab::{Error, Result};

#[derive(Parser)]
#[command(name = "charlab", version, about = "Experiments on maxima of Dirichlet character sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print delta_g = 1 - (g/pi) sin(pi/g).
    Delta {
        #[arg(long)]
        g: u64,
    },
    /// Scan primitive characters of odd order g to primes q = 1 (mod g).
    Scan {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        qmin: u64,
        #[arg(long)]
        qmax: u64,
        #[arg(long, default_value_t = 25)]
        psi_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Also report M / (sqrt(q) (log log q)^(1 - delta_g - eps)) on stderr.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Scan the quadratic character mod every prime up to qmax.
    Paley {
        #[arg(long)]
        qmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the record for one character, chosen by its index in the character group.
    Msum {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        char_index: u64,
    },
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Resource(e.to_string()))?;
    pool.install(job)
}

fn emit(records: &[ScanRecord], format: Format, out: Option<PathBuf>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match format {
        Format::Csv => lab::write_csv(records, &mut sink)?,
        Format::Json => lab::write_json(records, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

/// `Ok(true)` on success, `Ok(false)` when a suite ran and failed.
fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Delta { g } => {
            println!("{}", format_sig12(lab::delta(g)?));
        }
        Command::Scan { order, qmin, qmax, psi_max, format, out, threads, eps } => {
            let cfg = ScanConfig { order, q_min: qmin, q_max: qmax, psi_max };
            let records = with_threads(threads, || lab::scan_odd_order(&cfg))?;
            if let Some(eps) = eps {
                let worst = records.iter().filter_map(|r| r.gs_norm_eps(eps)).fold(f64::NAN, f64::max);
                eprintln!("max M/(sqrt(q) (log log q)^(1-delta-{eps})) = {}", format_sig12(worst));
            }
            emit(&records, format, out)?;
        }
        Command::Paley { qmax, format, out, threads } => {
            if qmax < 5 {
                return Err(Error::Usage("--qmax must be at least 5".into()));
            }
            let scan = with_threads(threads, || lab::paley_scan(qmax))?;
            if let Some(m) = scan.running_max.last() {
                eprintln!("running max of M/(sqrt(q) log log q) over q <= {qmax}: {}", format_sig12(*m));
            }
            emit(&scan.records, format, out)?;
        }
        Command::Verify { suite, seed, threads } => {
            let report = with_threads(threads, || lab::run_suite(&suite, seed))?;
            println!("{report}");
            return Ok(report.passed);
        }
        Command::Msum { modulus, char_index } => {
            let chi = Character::from_index(Arc::new(unit_group(modulus)?), char_index)?;
            let record = lab::record_for(&chi, None)?;
            emit(&[record], Format::Csv, None)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("charlab: {e}");
            match e {
                Error::Usage(_) | Error::Domain(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
