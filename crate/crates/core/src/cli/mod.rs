//! Batch command-line front end.
//!
//! Configuration comes from flags, a JSON document (`--config`), or both;
//! flags win. Each input is processed independently and yields its
//! rasters plus one JSON summary line.

mod config;
mod io;
mod run;

pub use config::{Args, Format, Mode, RunConfig};
pub use io::{
    decode_edge_png, decode_image, decode_pfm, encode_edge_png, encode_pfm, encode_tiff_f32,
    encode_trace_csv,
};
pub use run::{run, Stats, Summary};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("format error in {path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("numeric failure: {0}")]
    Numeric(#[from] crate::Error),
}

impl CliError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    /// 0 success, 1 config error, 2 I/O or format error, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Io { .. } | CliError::Format { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

/// Parses `args`, runs, prints summaries to stdout and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;

    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::resolve(&args).and_then(|cfg| run(&cfg));
    match result {
        Ok(summaries) => {
            for s in summaries {
                println!("{}", serde_json::to_string(&s).expect("summary serializes"));
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
