//! Command-line front end for `ptdeco`.
//!
//! [`run`] parses arguments, merges the config file, executes one
//! subcommand and writes its output; the binary maps the error to an exit
//! status with [`CliError::exit_code`].

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod grid;
pub mod output;
pub mod presets;
pub mod search;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::{ArgMatches, CommandFactory, FromArgMatches};

pub use error::CliError;

use args::Cli;
use commands::Output;
use config::{FileConfig, Settings};
use error::CliResult;
use grid::Axis;

/// Axes given as flags, in command-line order.
fn flag_order(matches: &ArgMatches) -> Vec<Axis> {
    let sub = matches.subcommand().map(|(_, m)| m);
    let mut found: Vec<(usize, Axis)> = Axis::ALL
        .into_iter()
        .filter_map(|a| {
            let id = a.name();
            let idx = sub
                .and_then(|m| m.index_of(id))
                .or_else(|| matches.index_of(id))?;
            Some((idx, a))
        })
        .collect();
    found.sort();
    found.into_iter().map(|(_, a)| a).collect()
}

fn emit(output: &Output, s: &Settings, stdout: &mut dyn Write) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: s.out.as_ref().map_or("<stdout>".into(), |p| p.display().to_string()),
        source,
    };
    let mut file;
    let sink: &mut dyn Write = match &s.out {
        Some(path) => {
            file = BufWriter::new(File::create(path).map_err(io_err)?);
            &mut file
        }
        None => stdout,
    };
    match output {
        Output::Table(t) => t.write(s.format, sink).map_err(io_err)?,
        Output::Json { text, .. } => writeln!(sink, "{text}").map_err(io_err)?,
    }
    sink.flush().map_err(io_err)
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            write!(stdout, "{}", e.render()).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    let (file, file_order) = match &cli.common.config {
        Some(path) => FileConfig::load(path)?,
        None => (FileConfig::default(), Vec::new()),
    };
    let settings = Settings::merge(&cli.common, &cli.command, file, &file_order, &flag_order(&matches));

    let output = ptdeco::par::with_jobs(settings.jobs, || commands::execute(&cli.command, &settings))?;
    emit(&output, &settings, stdout)?;
    if let Output::Json {
        failure: Some(why), ..
    } = output
    {
        return Err(CliError::OracleFailed(why));
    }
    Ok(())
}
