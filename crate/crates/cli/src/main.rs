mod args;
mod cache;
mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::{ContextKind, ErrorKind};
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command};
use error::CliError;

const CACHE_ENV: &str = "SQRTLAB_CACHE_DIR";

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(code) => code,
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or_default());
            e.exit_code()
        }
    }
}

fn parse(argv: Vec<std::ffi::OsString>) -> Result<Result<Cli, ExitCode>, CliError> {
    let argv = config::expand(argv)?;
    match Cli::try_parse_from(argv) {
        Ok(cli) => Ok(Ok(cli)),
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                Ok(Err(ExitCode::SUCCESS))
            }
            ErrorKind::InvalidSubcommand => {
                let name = e.get(ContextKind::InvalidSubcommand).map(|v| v.to_string()).unwrap_or_default();
                Err(CliError::UnknownSubcommand(name))
            }
            _ => {
                let text = e.to_string();
                let first = text.lines().next().unwrap_or_default();
                Err(CliError::Usage(first.trim_start_matches("error: ").to_string()))
            }
        },
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Sieve { .. } => "sieve",
        Command::Sqrt { .. } => "sqrt",
        Command::Jacobi { .. } => "jacobi",
        Command::Gauss { .. } => "gauss",
        Command::Discrepancy { .. } => "discrepancy",
        Command::Maxlambda { .. } => "maxlambda",
        Command::Weyl { .. } => "weyl",
        Command::Bilinear { .. } => "bilinear",
        Command::Incomplete { .. } => "incomplete",
        Command::Bounds { .. } => "bounds",
        Command::HbVerify { .. } => "hb-verify",
        Command::Avg { .. } => "avg",
        Command::Charavg { .. } => "charavg",
        Command::Spacings { .. } => "spacings",
        Command::Sweep { .. } => "sweep",
        Command::Verify { .. } => "verify",
    }
}

/// Parameters identifying a computation, as recorded in `meta.params` and
/// hashed into the cache key.
fn params(cmd: &Command) -> Value {
    fn v<T: serde::Serialize>(t: &T) -> Value {
        serde_json::to_value(t).expect("arguments serialize")
    }
    match cmd {
        Command::Sieve { args, .. } => v(args),
        Command::Sqrt { args, .. } => v(args),
        Command::Jacobi { args, .. } => v(args),
        Command::Gauss { args, .. } => v(args),
        Command::Discrepancy { args, .. } => v(args),
        Command::Maxlambda { args, .. } => v(args),
        Command::Weyl { args, .. } => v(args),
        Command::Bilinear { args, .. } => v(args),
        Command::Incomplete { args, .. } => v(args),
        Command::Bounds { args, .. } => v(args),
        Command::HbVerify { args, .. } => v(args),
        Command::Avg { args, .. } => v(args),
        Command::Charavg { args, .. } => v(args),
        Command::Spacings { args, .. } => v(args),
        Command::Sweep { args, .. } => v(args),
        Command::Verify { .. } => json!({}),
    }
}

fn seed_of(cmd: &Command) -> Option<u64> {
    use args::{StrategyKind, WeightKind};
    let s = |a: &args::StrategyArgs| (a.strategy == StrategyKind::Sample).then_some(a.seed);
    match cmd {
        Command::Maxlambda { args, .. } => s(&args.strategy),
        Command::Avg { args, .. } => s(&args.strategy),
        Command::Sweep { args, .. } => s(&args.strategy),
        Command::Bilinear { args, .. } => (args.weights == WeightKind::Random).then_some(args.seed),
        _ => None,
    }
}

fn run(argv: Vec<std::ffi::OsString>) -> Result<ExitCode, CliError> {
    let cli = match parse(argv)? {
        Ok(cli) => cli,
        Err(code) => return Ok(code),
    };
    let cmd = cli.command;
    let common = cmd.common().clone();
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))?;
    }

    let sub = name(&cmd);
    let params = params(&cmd);
    let cacheable = !matches!(cmd, Command::Sweep { .. } | Command::Verify { .. });
    let cache_dir = std::env::var_os(CACHE_ENV)
        .filter(|s| !s.is_empty())
        .map(std::path::PathBuf::from)
        .or_else(|| common.cache_dir.clone());
    let cache = match cache_dir {
        Some(dir) if cacheable && !common.no_cache => Some(
            cache::Cache::open(&dir, sqrtlab_core::VERSION).map_err(|source| CliError::Io { path: dir, source })?,
        ),
        _ => None,
    };
    let key = cache::key(
        sqrtlab_core::VERSION,
        sub,
        &json!({ "args": params, "format": common.format }),
        seed_of(&cmd),
    );

    if let Some(bytes) = cache.as_ref().and_then(|c| c.get(&key)) {
        emit(&bytes, common.out.as_ref())?;
        return Ok(ExitCode::SUCCESS);
    }

    let mut checks_ok = true;
    let outcome = match &cmd {
        Command::Sieve { args, .. } => commands::sieve(args)?,
        Command::Sqrt { args, .. } => commands::sqrt(args)?,
        Command::Jacobi { args, .. } => commands::jacobi_cmd(args)?,
        Command::Gauss { args, .. } => commands::gauss(args)?,
        Command::Discrepancy { args, .. } => commands::discrepancy_cmd(args)?,
        Command::Maxlambda { args, .. } => commands::maxlambda(args)?,
        Command::Weyl { args, .. } => commands::weyl(args)?,
        Command::Bilinear { args, .. } => commands::bilinear(args)?,
        Command::Incomplete { args, .. } => commands::incomplete(args)?,
        Command::Bounds { args, .. } => commands::bounds(args)?,
        Command::HbVerify { args, .. } => commands::hb_verify(args)?,
        Command::Avg { args, .. } => commands::avg(args)?,
        Command::Charavg { args, .. } => commands::charavg(args)?,
        Command::Spacings { args, .. } => commands::spacings(args)?,
        Command::Sweep { args, .. } => commands::sweep(args, common.out.as_ref())?,
        Command::Verify { .. } => {
            let (o, ok) = commands::verify()?;
            checks_ok = ok;
            o
        }
    };
    let bytes = output::render(outcome, common.format, sub, params);
    // the sweep writes its table to --out itself; the summary goes to stdout
    let out = if matches!(cmd, Command::Sweep { .. }) { None } else { common.out.as_ref() };
    emit(&bytes, out)?;
    if let Some(c) = &cache {
        if let Err(e) = c.put(&key, &bytes) {
            eprintln!("warning: could not write cache entry: {e}");
        }
    }
    if !checks_ok {
        return Err(CliError::ChecksFailed("see the report above".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(bytes: &[u8], out: Option<&std::path::PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
