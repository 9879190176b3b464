//! Output files: a `#` metadata line, then data rows with LF endings.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use margin_mcmc::RNG_ALGORITHM;

use crate::error::CliError;

/// `# margin-mcmc <version> seed=<seed|none> rng=<id> command="<argv>"`
pub fn metadata_line(seed: Option<u64>) -> String {
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    let argv: Vec<String> =
        std::iter::once("margin-mcmc".to_string()).chain(std::env::args().skip(1).map(|a| shell_quote(&a))).collect();
    format!(
        "# margin-mcmc {} seed={seed} rng={RNG_ALGORITHM} command=\"{}\"\n",
        env!("CARGO_PKG_VERSION"),
        argv.join(" ").replace('"', "\\\"")
    )
}

fn shell_quote(arg: &str) -> String {
    if !arg.is_empty() && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_./,=:".contains(c)) {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', "'\\''"))
    }
}

/// A CSV document with a fixed column order.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(seed: Option<u64>, header: &[&str]) -> Self {
        Csv::with_header(seed, header.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_header(seed: Option<u64>, header: Vec<String>) -> Self {
        let mut text = metadata_line(seed);
        text.push_str(&header.join(","));
        text.push('\n');
        Csv { text, columns: header.len() }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let fields: Vec<String> = fields.into_iter().map(|f| f.as_ref().to_string()).collect();
        assert_eq!(fields.len(), self.columns, "CSV row width must match the header");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Data(format!("cannot write to standard output: {e}")))
        }
    }
}

pub fn float(x: f64) -> String {
    x.to_string()
}
