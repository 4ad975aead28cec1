//! Text formats: ASPARTIX (`.apx`) and trivial graph format (`.tgf`) input,
//! extension listings, and JSON-lines traces.
//!
//! apx: one fact per `arg(NAME).` or `att(NAME,NAME).`, any number per line,
//! whitespace between tokens ignored, `%` starts a comment running to the end
//! of the line. `NAME` matches `[A-Za-z0-9_]+`.
//!
//! tgf: node lines `ID [label]` up to a line holding only `#`, then edge
//! lines `ID ID [label]`. Labels are ignored; the id is the argument name.

use std::fmt;
use std::io::{self, Write};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::argset::ArgId;
use crate::extension::Extension;
use crate::framework::{Framework, FrameworkBuilder};
use crate::label_enum::{BoundaryKind, TraceEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    /// 1-based; 0 when the diagnostic concerns the whole input.
    pub line: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "line {}: {sev}: {}", self.line, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared argument `{name}`")]
    UnknownArgument { line: usize, name: String },
    #[error("missing `#` line separating nodes from edges")]
    MissingSeparator,
}

impl ParseError {
    pub fn diagnostic(&self) -> ParseDiagnostic {
        let line = match self {
            ParseError::Syntax { line, .. } | ParseError::UnknownArgument { line, .. } => *line,
            ParseError::MissingSeparator => 0,
        };
        ParseDiagnostic {
            line,
            message: self.to_string(),
            severity: Severity::Error,
        }
    }
}

/// A parsed framework along with its warnings.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub framework: Framework,
    pub warnings: Vec<ParseDiagnostic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Apx,
    Tgf,
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "apx" => Some(Format::Apx),
            "tgf" => Some(Format::Tgf),
            _ => None,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "apx" => Ok(Format::Apx),
            "tgf" => Ok(Format::Tgf),
            other => Err(format!("unknown format `{other}` (expected apx or tgf)")),
        }
    }
}

pub fn parse(format: Format, text: &str) -> Result<Parsed, ParseError> {
    match format {
        Format::Apx => parse_apx_with_warnings(text),
        Format::Tgf => parse_tgf_with_warnings(text),
    }
}

pub fn parse_apx(text: &str) -> Result<Framework, ParseError> {
    parse_apx_with_warnings(text).map(|p| p.framework)
}

pub fn parse_tgf(text: &str) -> Result<Framework, ParseError> {
    parse_tgf_with_warnings(text).map(|p| p.framework)
}

fn duplicate_warning(line: usize, name: &str) -> ParseDiagnostic {
    ParseDiagnostic {
        line,
        message: format!("argument `{name}` declared more than once"),
        severity: Severity::Warning,
    }
}

fn is_name_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.bytes.len()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn name(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && is_name_char(self.bytes[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name of letters, digits or `_`"));
        }
        // only ASCII was consumed, so the slice is valid UTF-8
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }
}

pub fn parse_apx_with_warnings(text: &str) -> Result<Parsed, ParseError> {
    let mut builder = FrameworkBuilder::new();
    let mut warnings = Vec::new();
    let mut attacks: Vec<(usize, &str, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('%').next().unwrap_or("");
        let mut cur = Cursor {
            bytes: content.as_bytes(),
            pos: 0,
            line,
        };
        while !cur.at_end() {
            match cur.name()? {
                "arg" => {
                    cur.expect(b'(')?;
                    let name = cur.name()?;
                    cur.expect(b')')?;
                    cur.expect(b'.')?;
                    if builder.id(name).is_some() {
                        warnings.push(duplicate_warning(line, name));
                    } else {
                        builder.add_argument(name);
                    }
                }
                "att" => {
                    cur.expect(b'(')?;
                    let a = cur.name()?;
                    cur.expect(b',')?;
                    let b = cur.name()?;
                    cur.expect(b')')?;
                    cur.expect(b'.')?;
                    attacks.push((line, a, b));
                }
                other => return Err(cur.err(format!("unknown fact `{other}`"))),
            }
        }
    }

    for (line, a, b) in attacks {
        let resolve = |name: &str| {
            builder.id(name).ok_or_else(|| ParseError::UnknownArgument {
                line,
                name: name.to_string(),
            })
        };
        let (x, y) = (resolve(a)?, resolve(b)?);
        builder.add_attack(x, y);
    }
    Ok(Parsed {
        framework: builder.build(),
        warnings,
    })
}

pub fn parse_tgf_with_warnings(text: &str) -> Result<Parsed, ParseError> {
    let mut builder = FrameworkBuilder::new();
    let mut warnings = Vec::new();
    let mut edges = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !edges {
            if trimmed == "#" {
                edges = true;
                continue;
            }
            let id = trimmed.split_whitespace().next().unwrap();
            if builder.id(id).is_some() {
                warnings.push(duplicate_warning(line, id));
            } else {
                builder.add_argument(id);
            }
        } else {
            let mut parts = trimmed.split_whitespace();
            let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
                return Err(ParseError::Syntax {
                    line,
                    message: "edge line needs two node ids".into(),
                });
            };
            let resolve = |name: &str| {
                builder.id(name).ok_or_else(|| ParseError::UnknownArgument {
                    line,
                    name: name.to_string(),
                })
            };
            let (x, y) = (resolve(a)?, resolve(b)?);
            builder.add_attack(x, y);
        }
    }
    if !edges {
        return Err(ParseError::MissingSeparator);
    }
    Ok(Parsed {
        framework: builder.build(),
        warnings,
    })
}

pub fn write_apx<W: Write>(w: &mut W, f: &Framework) -> io::Result<()> {
    for name in f.names() {
        writeln!(w, "arg({name}).")?;
    }
    for &(a, b) in f.attacks() {
        writeln!(w, "att({},{}).", f.name(a), f.name(b))?;
    }
    Ok(())
}

pub fn write_tgf<W: Write>(w: &mut W, f: &Framework) -> io::Result<()> {
    for name in f.names() {
        writeln!(w, "{name}")?;
    }
    writeln!(w, "#")?;
    for &(a, b) in f.attacks() {
        writeln!(w, "{} {}", f.name(a), f.name(b))?;
    }
    Ok(())
}

pub fn to_apx(f: &Framework) -> String {
    let mut buf = Vec::new();
    write_apx(&mut buf, f).expect("writing to a Vec");
    String::from_utf8(buf).expect("names are UTF-8")
}

pub fn to_tgf(f: &Framework) -> String {
    let mut buf = Vec::new();
    write_tgf(&mut buf, f).expect("writing to a Vec");
    String::from_utf8(buf).expect("names are UTF-8")
}

/// The three stable-semantics tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    /// Enumerate all extensions.
    Enumerate,
    /// Report some extension, or `NO`.
    Some,
    /// Report the number of extensions.
    Count,
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "EE-ST" => Ok(Task::Enumerate),
            "SE-ST" => Ok(Task::Some),
            "CE-ST" => Ok(Task::Count),
            other => Err(format!("unknown task `{other}` (expected EE-ST, SE-ST or CE-ST)")),
        }
    }
}

/// Writes extensions as the task asks: one `[a,b,...]` line each for
/// `Enumerate`, the first one or `NO` for `Some`, `COUNT k` for `Count`.
pub fn write_extensions<W: Write>(
    w: &mut W,
    f: &Framework,
    extensions: &[Extension],
    task: Task,
) -> io::Result<()> {
    match task {
        Task::Enumerate => {
            for e in extensions {
                writeln!(w, "{}", e.display(f))?;
            }
        }
        Task::Some => match extensions.first() {
            Some(e) => writeln!(w, "{}", e.display(f))?,
            None => writeln!(w, "NO")?,
        },
        Task::Count => writeln!(w, "COUNT {}", extensions.len())?,
    }
    Ok(())
}

/// One trace event as a JSON object: `state_id`, `line`, `phase`, `arg`,
/// `mu` (name → label), `pi` (name → counter) and `gamma` (names in index
/// order).
pub fn trace_event_json(f: &Framework, e: &TraceEvent) -> Value {
    let mut mu = Map::new();
    let mut pi = Map::new();
    for x in f.arguments() {
        mu.insert(f.name(x).to_string(), json!(e.snapshot.mu[x.index()].as_str()));
        pi.insert(f.name(x).to_string(), json!(e.snapshot.pi[x.index()]));
    }
    let gamma: Vec<&str> = e.snapshot.gamma.iter().map(|&x: &ArgId| f.name(x)).collect();
    json!({
        "state_id": e.state_id,
        "line": match e.kind { BoundaryKind::Assign => 2, BoundaryKind::Exclude => 16 },
        "phase": e.phase.as_str(),
        "arg": f.name(e.arg),
        "mu": mu,
        "pi": pi,
        "gamma": gamma,
    })
}

pub fn write_trace<W: Write>(w: &mut W, f: &Framework, events: &[TraceEvent]) -> io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut *w, &trace_event_json(f, e))?;
        writeln!(w)?;
    }
    Ok(())
}
