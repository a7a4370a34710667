//! Text format for covers.
//!
//! ```text
//! n=2 eps=1/2 mode=exact
//! 1/7,2/7
//! 2/7,4/7
//! # verdict: covered
//! ```
//!
//! Float-mode files carry a decimal side and a margin:
//! `n=2 eps=0.3333333333 mode=float margin=1e-9`. Blank lines and other `#`
//! lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::{CoverCertificate, CoverError, CubeCover, Side, Verdict, DEFAULT_FLOAT_MARGIN};
use crate::torus::{format_rational, parse_rational, TorusPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// A verdict line read back from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum RecordedVerdict {
    Covered,
    Uncovered(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverFile {
    pub cover: CubeCover,
    pub recorded: Option<RecordedVerdict>,
}

fn header(cover: &CubeCover) -> String {
    match cover.side() {
        Side::Exact(eps) => format!(
            "n={} eps={} mode=exact",
            cover.dimension(),
            format_rational(eps)
        ),
        Side::Float { value, margin } => format!(
            "n={} eps={value:?} mode=float margin={margin:e}",
            cover.dimension()
        ),
    }
}

/// The `# verdict: ...` line for a certificate.
pub fn verdict_line(cert: &CoverCertificate) -> String {
    match &cert.verdict {
        Verdict::Covered => "# verdict: covered".to_string(),
        Verdict::Uncovered(w) => format!("# verdict: uncovered {w}"),
    }
}

/// Serializes a cover, with its certificate line if one is attached.
pub fn write_cover(cover: &CubeCover) -> String {
    let mut out = header(cover);
    out.push('\n');
    for b in cover.bases() {
        let _ = writeln!(out, "{b}");
    }
    if let Some(cert) = &cover.certificate {
        out.push_str(&verdict_line(cert));
        out.push('\n');
    }
    out
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, Side), FormatError> {
    let mut n = None;
    let mut eps = None;
    let mut mode = None;
    let mut margin = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| syntax(lineno, format!("expected key=value, got `{field}`")))?;
        match key {
            "n" => {
                n = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| syntax(lineno, format!("bad dimension `{value}`")))?,
                )
            }
            "eps" => eps = Some(value.to_string()),
            "mode" => mode = Some(value.to_string()),
            "margin" => {
                margin = Some(
                    value
                        .parse::<f64>()
                        .map_err(|_| syntax(lineno, format!("bad margin `{value}`")))?,
                )
            }
            other => return Err(syntax(lineno, format!("unknown header key `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| syntax(lineno, "header lacks n="))?;
    let eps = eps.ok_or_else(|| syntax(lineno, "header lacks eps="))?;
    let side = match mode.as_deref().unwrap_or("exact") {
        "exact" => {
            let r = parse_rational(&eps).map_err(|e| syntax(lineno, e.to_string()))?;
            Side::exact(r)?
        }
        "float" => {
            let v = eps
                .parse::<f64>()
                .map_err(|_| syntax(lineno, format!("bad float eps `{eps}`")))?;
            Side::float(v, margin.unwrap_or(DEFAULT_FLOAT_MARGIN))?
        }
        other => return Err(syntax(lineno, format!("unknown mode `{other}`"))),
    };
    Ok((n, side))
}

/// Parses the cover format.
pub fn parse_cover(text: &str) -> Result<CoverFile, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut recorded = None;
    let (n, side) = loop {
        let (lineno, line) = lines.next().ok_or_else(|| syntax(0, "missing header"))?;
        if line.starts_with('#') {
            continue;
        }
        break parse_header(line, lineno)?;
    };
    let mut bases = Vec::new();
    for (lineno, line) in lines {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("verdict:") {
                let v = v.trim();
                recorded = Some(if v == "covered" {
                    RecordedVerdict::Covered
                } else if let Some(p) = v.strip_prefix("uncovered") {
                    RecordedVerdict::Uncovered(p.trim().to_string())
                } else {
                    return Err(syntax(lineno, format!("unknown verdict `{v}`")));
                });
            }
            continue;
        }
        let p: TorusPoint = line
            .parse()
            .map_err(|e: crate::torus::ParseRationalError| syntax(lineno, e.to_string()))?;
        bases.push(p);
    }
    let cover = CubeCover::new(n, side, bases)?;
    Ok(CoverFile { cover, recorded })
}
