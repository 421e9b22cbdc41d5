//! Canonical report text.
//!
//! ```text
//! # logpois 0.1.0
//! command: normalize
//! status: ok
//! exit: 0
//!
//! [residues]
//!   A1 = [[1/2,0],[0,0]]
//! ```
//!
//! The first line is metadata; everything after it is a pure function of
//! the job. Section bodies are indented by two spaces.

use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error { code: String, exit: i32 },
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Error { exit, .. } => *exit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub status: Status,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            status: Status::Ok,
            sections: Vec::new(),
        }
    }

    /// Appends a section; multi-line entries are split and blank lines dropped.
    pub fn section<I, S>(&mut self, name: &str, lines: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let lines = lines.into_iter().flat_map(|l| l.into().lines().filter(|x| !x.trim().is_empty()).map(str::to_string).collect::<Vec<_>>()).collect();
        self.sections.push(Section { name: name.to_string(), lines });
    }

    pub fn fail(&mut self, code: &str, exit: i32) {
        self.status = Status::Error { code: code.to_string(), exit };
    }

    pub fn get(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Report text without the metadata line.
    pub fn body(&self) -> String {
        let s = self.to_string();
        s.split_once('\n').map(|(_, b)| b.to_string()).unwrap_or_default()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# logpois {}", self.version)?;
        writeln!(f, "command: {}", self.command)?;
        match &self.status {
            Status::Ok => writeln!(f, "status: ok")?,
            Status::Error { code, .. } => writeln!(f, "status: error {code}")?,
        }
        writeln!(f, "exit: {}", self.status.exit_code())?;
        for s in &self.sections {
            writeln!(f)?;
            writeln!(f, "[{}]", s.name)?;
            for l in &s.lines {
                writeln!(f, "  {l}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ReportParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ReportParseError {}

fn header<'a>(lines: &[&'a str], i: usize, key: &str) -> Result<&'a str, ReportParseError> {
    let err = |m: String| ReportParseError { line: i + 1, message: m };
    let l = lines.get(i).ok_or_else(|| err(format!("missing `{key}` line")))?;
    l.strip_prefix(key)
        .and_then(|r| r.strip_prefix(": "))
        .ok_or_else(|| err(format!("expected `{key}: ...`, got `{l}`")))
}

pub fn parse_report(text: &str) -> Result<Report, ReportParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let err = |line: usize, m: &str| ReportParseError { line, message: m.to_string() };
    let version = lines
        .first()
        .and_then(|l| l.strip_prefix("# logpois "))
        .ok_or_else(|| err(1, "missing metadata line"))?
        .to_string();
    let command = header(&lines, 1, "command")?.to_string();
    let status_text = header(&lines, 2, "status")?;
    let exit: i32 = header(&lines, 3, "exit")?.parse().map_err(|_| err(4, "exit code is not an integer"))?;
    let status = if status_text == "ok" {
        if exit != EXIT_OK {
            return Err(err(4, "ok status with nonzero exit"));
        }
        Status::Ok
    } else if let Some(code) = status_text.strip_prefix("error ") {
        Status::Error { code: code.to_string(), exit }
    } else {
        return Err(err(3, "unknown status"));
    };
    let mut sections: Vec<Section> = Vec::new();
    let mut i = 4;
    while i < lines.len() {
        let l = lines[i];
        if l.is_empty() {
            if !lines.get(i + 1).is_some_and(|n| n.starts_with('[')) {
                return Err(err(i + 1, "blank lines only separate sections"));
            }
        } else if let Some(name) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            sections.push(Section { name: name.to_string(), lines: Vec::new() });
        } else if let Some(body) = l.strip_prefix("  ").filter(|b| !b.trim().is_empty()) {
            let s = sections.last_mut().ok_or_else(|| err(i + 1, "content before the first section"))?;
            s.lines.push(body.to_string());
        } else {
            return Err(err(i + 1, "section lines must be indented by two spaces"));
        }
        i += 1;
    }
    Ok(Report { version, command, status, sections })
}
