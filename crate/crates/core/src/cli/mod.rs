//! The `torcov` command line.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, RunConfig, RunMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser, Debug)]
#[command(
    name = "torcov",
    version,
    about = "Cube coverings of the flat torus and illumination certificates"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// key=value configuration file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parallel verification
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// exact or float
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    margin: Option<f64>,
    /// Node budget of the minimal-cover search
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Smallest tested step is 2^-depth
    #[arg(long = "t-depth", global = true)]
    t_depth: Option<u32>,
    /// Write the artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cube covers of the torus
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Fractional covering numbers
    #[command(subcommand)]
    Frac(FracCmd),
    /// Illumination of polydiscs
    #[command(subcommand)]
    Polydisc(PolydiscCmd),
    /// Canonical zonotopes and their illuminating sets
    #[command(subcommand)]
    Zonotope(ZonotopeCmd),
    /// Discrete complex zonoids
    #[command(subcommand)]
    Zonoid(ZonoidCmd),
}

#[derive(Subcommand, Debug)]
enum CoverCmd {
    /// Cover by cubes of side 1/m
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        /// Verify and append the verdict
        #[arg(long)]
        certify: bool,
    },
    /// Decide whether a cover file covers the torus (stdin by default)
    Verify {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Also report membership of this point
        #[arg(long)]
        point: Option<String>,
    },
    /// Minimum cover among cubes based on the grid (Z/q)^n
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        grid: u64,
    },
    /// CSV of lower bounds and known exact values
    Table {
        #[arg(long)]
        dim: usize,
        #[arg(long = "eps-list", value_delimiter = ',')]
        eps_list: Vec<String>,
    },
    /// SVG picture of a cover of the 2-torus
    Plot {
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum FracCmd {
    /// Closed form (1/eps)^n
    Value {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
    },
    /// LP relaxation on the grid (Z/k)^n
    Lp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PolydiscCmd {
    /// Classical and fractional illumination numbers of D^n
    Ill {
        #[arg(long)]
        n: usize,
    },
    /// A minimal illuminating set of D^n
    Directions {
        #[arg(long)]
        n: usize,
    },
    /// Bounds on the number of light sources at distance r
    Lightsource {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
    },
    /// Check a direction file on a phase grid
    Check {
        #[arg(long)]
        directions: PathBuf,
        #[arg(long)]
        grid: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum ZonotopeCmd {
    /// Canonical form of a generator file
    Reduce {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Illuminating set of the canonical form
    Illuminate {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Half-circle measure instead of a finite set
        #[arg(long)]
        fractional: bool,
    },
    /// Check directions against the canonical form
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        dirs: PathBuf,
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum ZonoidCmd {
    /// Support function at theta
    Support {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Comma-separated complex entries
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Compare |<x,y>| with the rotation average of real inner products
    IdentityCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4096)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Zonotope approximation by the clustered summand
    Extract {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = crate::zonoid::DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// A failed command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    pub fn io(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.to_string(),
        }
    }
}

pub(crate) struct Context {
    pub cfg: RunConfig,
    /// Standard input, read up front when the command needs it.
    stdin: Option<String>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

pub(crate) fn is_stdin(path: Option<&Path>) -> bool {
    path.map_or(true, |p| p == Path::new("-"))
}

impl Context {
    pub fn read_input(&mut self, path: Option<&Path>) -> Result<String, Failure> {
        match path {
            Some(p) if !is_stdin(Some(p)) => {
                std::fs::read_to_string(p).map_err(|e| Failure::io(format!("{}: {e}", p.display())))
            }
            _ => self
                .stdin
                .take()
                .ok_or_else(|| Failure::io("stdin was already consumed")),
        }
    }

    /// Writes an artifact to `--out` (atomically) or to stdout.
    pub fn emit(&mut self, content: &str) -> Result<(), Failure> {
        match self.cfg.out.clone() {
            Some(path) => write_atomic(&path, content),
            None => {
                self.stdout.extend_from_slice(content.as_bytes());
                Ok(())
            }
        }
    }

    pub fn say(&mut self, line: &str) {
        self.stdout.extend_from_slice(line.as_bytes());
        self.stdout.push(b'\n');
    }

    pub fn note(&mut self, line: &str) {
        self.stderr.extend_from_slice(line.as_bytes());
        self.stderr.push(b'\n');
    }
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| Failure::io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(content.as_bytes()).map_err(|e| fail(&e))?;
    tmp.flush().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn build_config(global: &GlobalArgs) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &global.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        cfg.apply_file(&text).map_err(Failure::usage)?;
    }
    if let Some(m) = &global.mode {
        cfg.set("mode", m).map_err(Failure::usage)?;
    }
    if let Some(v) = global.margin {
        cfg.margin = v;
    }
    if let Some(v) = global.budget {
        cfg.budget = v;
    }
    if let Some(v) = global.t_depth {
        cfg.t_depth = v;
    }
    if let Some(v) = global.threads {
        cfg.threads = Some(v);
    }
    if let Some(v) = &global.out {
        cfg.out = Some(v.clone());
    }
    cfg.validate().map_err(Failure::usage)?;
    Ok(cfg)
}

/// Runs the command line with explicit streams and returns the exit code.
pub fn run_with<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let cfg = match build_config(&cli.global) {
        Ok(c) => c,
        Err(f) => {
            let _ = writeln!(stderr, "torcov: {}", f.message);
            return f.code;
        }
    };
    let mut ctx = Context {
        cfg,
        stdin: None,
        stdout: Vec::new(),
        stderr: Vec::new(),
    };
    if commands::reads_stdin(&cli.command) {
        let mut s = String::new();
        if let Err(e) = stdin.read_to_string(&mut s) {
            let _ = writeln!(stderr, "torcov: stdin: {e}");
            return EXIT_IO;
        }
        ctx.stdin = Some(s);
    }
    let result = match ctx.cfg.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command, &mut ctx)),
            Err(e) => Err(Failure::usage(e)),
        },
        None => commands::dispatch(&cli.command, &mut ctx),
    };
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            ctx.note(&format!("torcov: {}", f.message));
            f.code
        }
    };
    let _ = stderr.write_all(&ctx.stderr);
    if let Err(e) = stdout.write_all(&ctx.stdout).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "torcov: stdout: {e}");
        return EXIT_IO;
    }
    code
}

/// Runs with the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(
        args,
        &mut stdin.lock(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}
