//! Line-oriented textual net format.
//!
//! ```text
//! net <name>
//! places <id> <id> ...
//! transitions <id> <id> ...
//! arc <id> -> <id>
//! marking <id>:<count> <id>:<count> ...
//! ```
//!
//! `#` starts a comment. `places`, `transitions` and `arc` lines may repeat;
//! at most one `marking` line is allowed; unknown directives are errors.
//! Serialization is canonical (sorted, one arc per line), so
//! `serialize(parse(serialize(d))) == serialize(d)`.

use std::fmt;

use thiserror::Error;

use crate::net::{is_valid_identifier, Marking, Net, NetError};

/// A net plus an optional initial marking, as read from a `.net` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDocument {
    pub name: String,
    pub net: Net,
    pub initial_marking: Option<Marking>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl fmt::Display) -> ParseError {
        ParseError { line, column, message: message.to_string() }
    }
}

/// Tokens of one line with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        let end = line.find('#').unwrap_or(line.len());
        out.push((s + 1, line[s..end].trim_end()));
    }
    out
}

pub fn parse(text: &str) -> Result<NetDocument, ParseError> {
    let mut name: Option<String> = None;
    let mut places: Vec<(usize, usize, String)> = Vec::new();
    let mut transitions: Vec<(usize, usize, String)> = Vec::new();
    let mut arcs: Vec<(usize, usize, String, String)> = Vec::new();
    let mut marking: Option<Vec<(usize, usize, String, u64)>> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokens(raw);
        let Some(&(col0, directive)) = toks.first() else { continue };
        match directive {
            "net" => {
                if name.is_some() {
                    return Err(ParseError::new(lineno, col0, "duplicate `net` directive"));
                }
                match toks.get(1..) {
                    Some([(col, id)]) => {
                        if !is_valid_identifier(id) {
                            return Err(ParseError::new(lineno, *col, format!("invalid identifier `{id}`")));
                        }
                        name = Some(id.to_string());
                    }
                    _ => return Err(ParseError::new(lineno, col0, "expected `net <name>`")),
                }
            }
            "places" | "transitions" => {
                let target = if directive == "places" { &mut places } else { &mut transitions };
                for &(col, id) in &toks[1..] {
                    if !is_valid_identifier(id) {
                        return Err(ParseError::new(lineno, col, format!("invalid identifier `{id}`")));
                    }
                    target.push((lineno, col, id.to_string()));
                }
            }
            "arc" => match toks.get(1..) {
                Some([(fcol, from), (acol, arrow), (_, to)]) => {
                    if *arrow != "->" {
                        return Err(ParseError::new(lineno, *acol, "expected `->`"));
                    }
                    arcs.push((lineno, *fcol, from.to_string(), to.to_string()));
                }
                _ => return Err(ParseError::new(lineno, col0, "expected `arc <from> -> <to>`")),
            },
            "marking" => {
                if marking.is_some() {
                    return Err(ParseError::new(lineno, col0, "duplicate `marking` directive"));
                }
                let mut entries = Vec::new();
                for &(col, item) in &toks[1..] {
                    let Some((id, count)) = item.split_once(':') else {
                        return Err(ParseError::new(lineno, col, format!("expected `<place>:<count>`, got `{item}`")));
                    };
                    let count: u64 = count.parse().map_err(|_| {
                        ParseError::new(lineno, col, format!("invalid token count in `{item}`"))
                    })?;
                    entries.push((lineno, col, id.to_string(), count));
                }
                marking = Some(entries);
            }
            other => {
                return Err(ParseError::new(lineno, col0, format!("unknown directive `{other}`")));
            }
        }
    }

    let name = name.ok_or_else(|| ParseError::new(1, 1, "missing `net` directive"))?;

    // Build the net, mapping constructor errors back to source locations.
    let place_names: Vec<&str> = places.iter().map(|(_, _, n)| n.as_str()).collect();
    let trans_names: Vec<&str> = transitions.iter().map(|(_, _, n)| n.as_str()).collect();
    let arc_pairs: Vec<(&str, &str)> =
        arcs.iter().map(|(_, _, f, t)| (f.as_str(), t.as_str())).collect();
    let net = Net::build(&place_names, &trans_names, &arc_pairs).map_err(|e| {
        let position = match &e {
            NetError::DuplicateNode(n) | NetError::InvalidIdentifier(n) | NetError::UnknownNode(n) => places
                .iter()
                .chain(transitions.iter())
                .find(|(_, _, name)| name == n)
                .map(|(l, c, _)| (*l, *c))
                .or_else(|| {
                    arcs.iter()
                        .find(|(_, _, f, t)| f == n || t == n)
                        .map(|(l, c, _, _)| (*l, *c))
                }),
            NetError::DuplicateArc(f, t) | NetError::NonBipartiteArc(f, t) => arcs
                .iter()
                .filter(|(_, _, af, at)| af == f && at == t)
                .map(|(l, c, _, _)| (*l, *c))
                .last(),
            _ => None,
        };
        let (line, column) = position.unwrap_or((1, 1));
        ParseError::new(line, column, e)
    })?;

    let initial_marking = match marking {
        None => None,
        Some(entries) => {
            let pairs: Vec<(&str, u64)> =
                entries.iter().map(|(_, _, id, c)| (id.as_str(), *c)).collect();
            Some(Marking::from_pairs(&net, &pairs).map_err(|e| {
                let position = entries
                    .iter()
                    .find(|(_, _, id, _)| match &e {
                        NetError::UnknownNode(n) | NetError::DuplicateMarkingEntry(n) => id == n,
                        _ => false,
                    })
                    .map(|(l, c, _, _)| (*l, *c));
                let (line, column) = position.unwrap_or((1, 1));
                ParseError::new(line, column, e)
            })?)
        }
    };

    Ok(NetDocument { name, net, initial_marking })
}

/// Canonical textual form: sorted node lists, one arc per line, nonzero
/// marking entries only.
pub fn serialize(doc: &NetDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("net {}\n", doc.name));
    let places: Vec<&str> = doc.net.places().collect();
    if !places.is_empty() {
        out.push_str(&format!("places {}\n", places.join(" ")));
    }
    let transitions: Vec<&str> = doc.net.transitions().collect();
    if !transitions.is_empty() {
        out.push_str(&format!("transitions {}\n", transitions.join(" ")));
    }
    for (from, to) in doc.net.arcs() {
        out.push_str(&format!("arc {} -> {}\n", from.name, to.name));
    }
    if let Some(m) = &doc.initial_marking {
        let entries: Vec<String> = doc
            .net
            .places()
            .zip(m.tokens())
            .filter(|(_, &c)| c > 0)
            .map(|(p, c)| format!("{p}:{c}"))
            .collect();
        if entries.is_empty() {
            out.push_str("marking\n");
        } else {
            out.push_str(&format!("marking {}\n", entries.join(" ")));
        }
    }
    out
}
