//! Text serialization of mapping tables and passthrough lines.
//!
//! Mapping table, one record per sentence:
//!
//! ```text
//! S<k> | id: a,b,... | op: ... | tp: ... | orig: <original tokens, space-separated>
//! ```
//!
//! Passthrough file, one record per comment or directive:
//!
//! ```text
//! L<line> | comment|directive | <text>
//! ```
//!
//! Inside names and text, `\` `,` `|` and line breaks are escaped as
//! `\\` `\,` `\|` `\n` (`\r` for carriage returns).

use thiserror::Error;

use crate::abstraction::{PreprocessedUnit, SymbolMap};
use crate::lexer::{PassthroughKind, PassthroughLine};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapFileError {
    #[error("line {line}: malformed record: {reason}")]
    Malformed { line: usize, reason: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapRecord {
    pub index: usize,
    pub map: SymbolMap,
    pub orig: String,
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            ',' => out.push_str("\\,"),
            '|' => out.push_str("\\|"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(text: &str) -> String {
    split_unescaped(text, None).concat()
}

/// Split on an unescaped separator, unescaping each piece.
fn split_unescaped(text: &str, sep: Option<char>) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => parts.last_mut().unwrap().push('\n'),
                Some('r') => parts.last_mut().unwrap().push('\r'),
                Some(other) => parts.last_mut().unwrap().push(other),
                None => parts.last_mut().unwrap().push('\\'),
            }
        } else if Some(c) == sep {
            parts.push(String::new());
        } else {
            parts.last_mut().unwrap().push(c);
        }
    }
    parts
}

/// Split a record into raw (still escaped) fields on unescaped `|`, dropping
/// the single space on either side of each separator.
fn raw_fields(line: &str) -> Vec<&str> {
    let mut fields = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        if escaped {
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == '|' {
            fields.push(&line[start..i]);
            start = i + 1;
        }
    }
    fields.push(&line[start..]);
    let last = fields.len() - 1;
    for (i, f) in fields.iter_mut().enumerate() {
        if i > 0 {
            *f = f.strip_prefix(' ').unwrap_or(f);
        }
        if i < last {
            *f = f.strip_suffix(' ').unwrap_or(f);
        }
    }
    fields
}

fn strip_tag<'a>(field: &'a str, tag: &str) -> Option<&'a str> {
    let body = field.strip_prefix(tag)?;
    Some(body.strip_prefix(' ').unwrap_or(body))
}

fn join_names(names: &[String]) -> String {
    names
        .iter()
        .map(|n| escape(n))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_mapping_table(unit: &PreprocessedUnit) -> String {
    let mut out = String::new();
    for (k, (map, origin)) in unit.maps.iter().zip(&unit.origins).enumerate() {
        out.push_str(&format!(
            "S{k} | id: {} | op: {} | tp: {} | orig: {}\n",
            join_names(&map.id_names),
            join_names(&map.op_names),
            join_names(&map.tp_names),
            escape(&origin.joined()),
        ));
    }
    out
}

pub fn parse_mapping_table(text: &str) -> Result<Vec<MapRecord>, MapFileError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason| MapFileError::Malformed {
            line: line_no,
            reason,
        };
        let fields = raw_fields(line);
        if fields.len() != 5 {
            return Err(malformed("expected 5 fields"));
        }
        let index = fields[0]
            .strip_prefix('S')
            .and_then(|n| n.parse().ok())
            .ok_or(malformed("bad sentence index"))?;
        let list = |field: &str, tag: &str| -> Result<Vec<String>, MapFileError> {
            let body = strip_tag(field, tag).ok_or(malformed("unexpected field tag"))?;
            if body.is_empty() {
                Ok(Vec::new())
            } else {
                Ok(split_unescaped(body, Some(',')))
            }
        };
        let orig = strip_tag(fields[4], "orig:").ok_or(malformed("missing orig field"))?;
        records.push(MapRecord {
            index,
            map: SymbolMap {
                id_names: list(fields[1], "id:")?,
                op_names: list(fields[2], "op:")?,
                tp_names: list(fields[3], "tp:")?,
            },
            orig: unescape(orig),
        });
    }
    Ok(records)
}

pub fn write_passthrough(lines: &[PassthroughLine]) -> String {
    lines
        .iter()
        .map(|p| {
            let kind = match p.kind {
                PassthroughKind::Comment => "comment",
                PassthroughKind::Directive => "directive",
            };
            format!("L{} | {kind} | {}\n", p.line, escape(&p.text))
        })
        .collect()
}

pub fn parse_passthrough(text: &str) -> Result<Vec<PassthroughLine>, MapFileError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason| MapFileError::Malformed {
            line: i + 1,
            reason,
        };
        let fields = raw_fields(line);
        let [num, kind, body] = fields[..] else {
            return Err(malformed("expected 3 fields"));
        };
        let line_no = num
            .strip_prefix('L')
            .and_then(|n| n.parse().ok())
            .ok_or(malformed("bad line number"))?;
        let kind = match kind {
            "comment" => PassthroughKind::Comment,
            "directive" => PassthroughKind::Directive,
            _ => return Err(malformed("unknown passthrough kind")),
        };
        out.push(PassthroughLine {
            line: line_no,
            text: unescape(body),
            kind,
        });
    }
    Ok(out)
}
