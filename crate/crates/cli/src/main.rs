use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hallforge::hall::Caps;
use hallforge_cli::commands::{self, HallArgs};
use hallforge_cli::{parse_fields, AlgebraSource, CliError, CliResult, Format, RunConfig, EXIT_USAGE};

/// Exact Ringel-Hall algebra computations over finite fields.
#[derive(Parser)]
#[command(name = "hallforge", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// `builtin:<name>` (kronecker, kronecker-dup, d4tilde, d4tilde-dup) or an algebra JSON file.
    #[arg(long, default_value = "builtin:kronecker-dup")]
    algebra: String,
    /// Comma-separated field orders, each `q` or `p^r`.
    #[arg(long, default_value = "2,3")]
    field: String,
    /// Interpolation points (comma-separated field orders).
    #[arg(long)]
    points: Option<String>,
    /// Hold-out fields for validation.
    #[arg(long)]
    holdout: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Caps::default().submodules)]
    cap_submodules: u64,
    #[arg(long, default_value_t = Caps::default().cocycles)]
    cap_cocycles: u64,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl Common {
    fn config(&self, suite: Option<String>) -> CliResult<RunConfig> {
        Ok(RunConfig {
            algebra: AlgebraSource::parse(&self.algebra),
            fields: parse_fields(&self.field)?,
            points: self.points.as_deref().map(parse_fields).transpose()?,
            holdout: self.holdout.as_deref().map(parse_fields).transpose()?,
            cap_submodules: self.cap_submodules,
            cap_cocycles: self.cap_cocycles,
            seed: self.seed,
            format: self.format,
            suite,
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an algebra and write algebra.json and quiver.dot.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Hall number G^m_{n l}, or with --product the expansion of u_x u_y.
    Hall {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        l: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        product: bool,
        /// Cross-check every middle term against the extension-count formula.
        #[arg(long)]
        riedtmann: bool,
    },
    /// Interpolate the Hall polynomial g^m_{x y}.
    Interpolate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        m: String,
    },
    /// Bracket of two modules at q = 1, or the catalog bracket table.
    Bracket {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Run a verification suite and write report.json.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: String,
    },
}

fn run(cli: Cli) -> CliResult<i32> {
    let here = PathBuf::from(".");
    match cli.cmd {
        Cmd::Build { common } => {
            let cfg = common.config(None)?;
            commands::build(&cfg, common.out.as_ref().unwrap_or(&here))
        }
        Cmd::Hall { common, m, n, l, x, y, product, riedtmann } => {
            let cfg = common.config(None)?;
            let args = HallArgs { m, n, l, x, y, product, riedtmann };
            commands::hall(&cfg, &args, common.out.as_deref())
        }
        Cmd::Interpolate { common, x, y, m } => {
            let cfg = common.config(None)?;
            commands::interpolate_cmd(&cfg, &x, &y, &m, common.out.as_deref())
        }
        Cmd::Bracket { common, x, y } => {
            let cfg = common.config(None)?;
            commands::bracket_cmd(&cfg, x.as_deref(), y.as_deref(), common.out.as_deref())
        }
        Cmd::Verify { common, suite } => {
            let cfg = common.config(Some(suite))?;
            commands::verify(&cfg, common.out.as_ref().unwrap_or(&here))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let code = run(cli).unwrap_or_else(|e: CliError| {
        eprintln!("error: {e}");
        e.code
    });
    ExitCode::from(code as u8)
}
