mod args;
mod commands;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Run;
use manifest::{manifest_path, sha256_hex, FileDigest, RunManifest};

/// Exit codes: 0 success, 1 replay mismatch, 2 usage, 3 input validation,
/// 4 numerical guard.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(pseudocone::Error),
    Mismatch(String),
}

impl From<pseudocone::Error> for CliError {
    fn from(e: pseudocone::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Lib(e) if e.is_numerical() => 4,
            CliError::Lib(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Mismatch(m) => write!(f, "replay mismatch: {m}"),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Lib(pseudocone::Error::Io(format!("{}: {e}", path.display())))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Rays(_) => "rays",
        Command::Codewords(_) => "codewords",
        Command::Bounds(_) => "bounds",
        Command::Sim(_) => "sim",
        Command::Angles(_) => "angles",
        Command::Replay(_) => "replay",
    }
}

fn execute(cmd: &Command) -> Result<Run, CliError> {
    match cmd {
        Command::Rays(a) => commands::rays(a),
        Command::Codewords(a) => commands::codewords(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Sim(a) => commands::sim(a),
        Command::Angles(a) => commands::angles(a),
        Command::Replay(_) => Err(CliError::Usage("replay cannot be nested".into())),
    }
}

fn digest_inputs(run: &Run) -> Result<Vec<FileDigest>, CliError> {
    run.inputs
        .iter()
        .map(|p| {
            let bytes = std::fs::read(p).map_err(|e| io_err(p, e))?;
            Ok(FileDigest::of_bytes(p, &bytes))
        })
        .collect()
}

fn write_outputs(cmd: &Command, argv: Vec<String>, run: &Run) -> Result<(), CliError> {
    for (path, bytes) in &run.outputs {
        std::fs::write(path, bytes).map_err(|e| io_err(path, e))?;
    }
    let manifest = RunManifest {
        tool: "pseudocone".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command_name(cmd).into(),
        argv,
        cwd: std::env::current_dir().map_err(|e| io_err(Path::new("."), e))?,
        matrix_source: run.matrix_source.clone(),
        generator_source: run.generator_source.clone(),
        snr_grid: run.snr_grid.clone(),
        seed: run.seed,
        inputs: digest_inputs(run)?,
        outputs: run.outputs.iter().map(|(p, b)| FileDigest::of_bytes(p, b)).collect(),
    };
    let path = manifest_path(&run.outputs[0].0);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&path, json + "\n").map_err(|e| io_err(&path, e))?;
    Ok(())
}

fn replay(path: &PathBuf, write: bool) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let m: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Lib(pseudocone::Error::InvalidParameter(format!("bad manifest: {e}"))))?;
    std::env::set_current_dir(&m.cwd).map_err(|e| io_err(&m.cwd, e))?;
    for input in &m.inputs {
        let bytes = std::fs::read(&input.path).map_err(|e| io_err(&input.path, e))?;
        if sha256_hex(&bytes) != input.sha256 {
            return Err(CliError::Lib(pseudocone::Error::InvalidParameter(format!(
                "input {} changed since the recorded run",
                input.path.display()
            ))));
        }
    }
    let cli = Cli::try_parse_from(std::iter::once("pseudocone".to_string()).chain(m.argv.iter().cloned()))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let run = execute(&cli.command)?;
    let fresh: Vec<FileDigest> = run.outputs.iter().map(|(p, b)| FileDigest::of_bytes(p, b)).collect();
    if fresh != m.outputs {
        return Err(CliError::Mismatch(format!("{} outputs differ from the manifest", path.display())));
    }
    if write {
        for (p, b) in &run.outputs {
            std::fs::write(p, b).map_err(|e| io_err(p, e))?;
        }
    }
    Ok(format!("replayed {}: {} outputs identical\n", m.command, fresh.len()))
}

fn run_cli(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    if let Command::Replay(a) = &cli.command {
        print!("{}", replay(&a.manifest, a.write)?);
        return Ok(());
    }
    let run = execute(&cli.command)?;
    write_outputs(&cli.command, argv, &run)?;
    print!("{}", run.stdout);
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run_cli(cli, argv)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
