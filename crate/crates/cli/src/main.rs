mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::Failure;

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("BARBELL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("BARBELL_THREADS must be a positive integer, got {:?}", raw)))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {}", path.display(), e))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let res = configure_threads()
        .and_then(|_| run::dispatch(&cli))
        .and_then(|body| emit(&cli, &body));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("barbell: {}", f);
            ExitCode::from(f.exit_code())
        }
    }
}
