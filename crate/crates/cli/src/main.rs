use std::process::ExitCode;

use clap::Parser;

mod commands;

use commands::{Cli, Command};

fn exit_code(err: &rcpoly::Error) -> u8 {
    use rcpoly::Error::*;
    match err {
        Parameter(_) | Parse { .. } | State(_) => 2,
        Budget { .. } | Structure(_) | NoGiantComponent => 3,
        Convergence(_) | Singularity { .. } | Domain(_) => 4,
        Io(_) | Json(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RCPOLY_LOG", "warn"))
        .format_timestamp(None)
        .init();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("thread pool already initialised: {e}");
        }
    }
    let result = match &cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Sample(args) => commands::sample(args),
        Command::Estimate(args) => commands::estimate(args),
        Command::Diagnose(args) => commands::diagnose(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            let body = serde_json::json!({
                "error": err.kind(),
                "message": err.to_string(),
                "exit_code": code,
            });
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}
