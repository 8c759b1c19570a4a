//! The `hecke` command-line driver.
//!
//! Exit codes: 0 when every check passes, 1 on an assertion failure, 2 on a
//! configuration or IO error. Every JSON document carries `schema: 1`, the
//! seed and the configuration, and contains no timestamps, so identical
//! invocations produce identical bytes.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{Cli, Command, Format, RunConfig, Suite};
pub use report::{Report, Row, Status, Table, SCHEMA};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return EXIT_PASS;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_CONFIG;
        }
    };
    let cfg = match RunConfig::from_options(&cli.opts) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_CONFIG;
        }
    };
    match commands::dispatch(&cli.command, &cfg, cli.opts.out.as_deref(), out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}
