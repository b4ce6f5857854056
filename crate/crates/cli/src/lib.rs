//! Set-expression language and command-line front end for `meanlab`.

pub mod commands;
pub mod dsl;
pub mod number;

use std::fmt;
use std::io::{Read, Write};

use clap::Parser;
use meanlab_core::Error;
use serde_json::{json, Value};

pub use commands::{Cli, Command, Flags, Output};

#[derive(Debug)]
pub enum CliError {
    Parse(dsl::ParseError),
    Engine(Error),
    Usage(String),
    Io(String),
}

impl From<dsl::ParseError> for CliError {
    fn from(e: dsl::ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

fn engine_kind(e: &Error) -> &'static str {
    match e {
        Error::OverlappingClusterWindows => "overlapping_cluster_windows",
        Error::UnrepresentableResult(_) => "unrepresentable_result",
        Error::InvalidInterval { .. } => "invalid_interval",
        Error::ZeroScale => "zero_scale",
        Error::InfiniteLevel => "infinite_level",
        Error::EmptyDerivedSet => "empty_derived_set",
        Error::EmptySet => "empty_set",
        Error::OutsideSupport => "outside_support",
        Error::UnsupportedDepth(_) => "unsupported_depth",
        Error::NotCompact => "not_compact",
        Error::NullSet => "null_set",
        Error::NotFinite => "not_finite",
        Error::DomainViolation(_) => "domain_violation",
        Error::EmptySlice => "empty_slice",
        Error::NoConvergence { .. } => "no_convergence",
        Error::DegenerateSet => "degenerate_set",
        Error::DomainExit(_) => "domain_exit",
        Error::UnsupportedMean(_) => "unsupported_mean",
        Error::BadParameters(_) => "bad_parameters",
        Error::BadConfig(_) => "bad_config",
        Error::NotApplicable(_) => "not_applicable",
        Error::Unresolved => "unresolved",
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse_error",
            CliError::Engine(e) => engine_kind(e),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({"kind": self.kind(), "message": self.to_string()});
        match self {
            CliError::Parse(p) => {
                body["line"] = json!(p.line);
                body["col"] = json!(p.col);
                body["expected"] = json!(p.expected);
                body["found"] = json!(p.found);
            }
            CliError::Engine(Error::NoConvergence { estimate, spread }) => {
                body["estimate"] = json!(estimate);
                body["spread"] = json!(spread);
            }
            _ => {}
        }
        json!({ "error": body })
    }
}

/// Runs one command line. Results go to `out`; errors are written to
/// `err` as JSON and mapped to a nonzero exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let e = CliError::Usage(e.to_string().trim_end().to_string());
            let _ = writeln!(err, "{}", e.to_json());
            return e.exit_code();
        }
    };
    match commands::execute(&cli, stdin) {
        Ok(rendered) => {
            let _ = write!(out, "{rendered}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}
