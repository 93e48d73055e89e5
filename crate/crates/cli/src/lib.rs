//! Batch driver: parse an input document, run one command, render a report.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

use sha2::{Digest, Sha256};

pub use commands::{Command, Options};
pub use document::{parse, serialize, InputDocument};
pub use error::{CliError, CliResult};
pub use report::{Format, Node, Report};

fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    let hex: String = hash.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn echo(command: Command, opts: &Options) -> String {
    let mut parts = vec![command.name().to_string()];
    if let Some(n) = opts.order {
        parts.push(format!("--order {n}"));
    }
    if !opts.modules.is_empty() {
        parts.push(format!("--modules {}", opts.modules.join(",")));
    }
    for e in &opts.elems {
        parts.push(format!("--elem '{e}'"));
    }
    parts.join(" ")
}

/// Parses `text` and runs `command` on it.
pub fn run(command: Command, text: &str, opts: Options) -> CliResult<Report> {
    let doc = parse(text)?;
    let algebra = doc.build_algebra()?;
    let cx = commands::Context { command, doc, algebra, opts };
    let (body, failed) = match command {
        Command::Simples => (commands::simples(&cx)?, false),
        Command::Ext => (commands::ext_report(&cx)?, false),
        Command::Hull => (commands::hull_report(&cx)?, false),
        Command::Oalg => (commands::oalg_report(&cx)?, false),
        Command::Aspec => (commands::aspec_report(&cx)?, false),
        Command::Dset => (commands::dset_report(&cx)?, false),
        Command::Stalk => (commands::stalk_report(&cx)?, false),
        Command::Verify => commands::verify_report(&cx)?,
    };
    Ok(Report { command: echo(command, &cx.opts), digest: digest(text), body, failed })
}
