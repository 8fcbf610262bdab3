//! Register ingestion: numbered presentation collections with identifiers and
//! commensurability-class labels, in either an annotated `.grp` text format or
//! a JSON record format. A tolerant importer accepts `Group< ... >`
//! assignments with commutator shorthand `(u, v)`; anything else it does not
//! recognize is a hard error, never a guess.

use crate::error::EngineError;
use crate::presentation::{parse_presentation, Presentation};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct RegisterEntry {
    pub j: u32,
    pub identifier: String,
    pub commensurability_class: String,
    pub presentation: Arc<Presentation>,
}

/// Load a register from `.grp` text or JSON (detected by the first
/// non-whitespace byte). Entries are validated: j must be 1..=N with no gaps
/// or duplicates, and identifiers must be unique.
pub fn load_register(path: &Path) -> Result<Vec<RegisterEntry>, EngineError> {
    let text = std::fs::read_to_string(path)?;
    parse_register(&text)
}

pub fn parse_register(text: &str) -> Result<Vec<RegisterEntry>, EngineError> {
    let entries = match text.trim_start().chars().next() {
        Some('[') | Some('{') => parse_register_json(text)?,
        _ => parse_register_grp(text)?,
    };
    validate(entries)
}

fn validate(mut entries: Vec<RegisterEntry>) -> Result<Vec<RegisterEntry>, EngineError> {
    entries.sort_by_key(|e| e.j);
    for (i, e) in entries.iter().enumerate() {
        let expect = i as u32 + 1;
        if e.j != expect {
            return Err(EngineError::Register(if e.j < expect {
                format!("duplicate entry number j = {}", e.j)
            } else {
                format!("numbering gap: expected j = {expect}, found j = {}", e.j)
            }));
        }
    }
    let mut ids = std::collections::HashSet::new();
    for e in &entries {
        if !ids.insert(e.identifier.clone()) {
            return Err(EngineError::Register(format!(
                "duplicate identifier {:?}",
                e.identifier
            )));
        }
    }
    Ok(entries)
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    j: u32,
    identifier: String,
    #[serde(default)]
    class: String,
    generators: Vec<String>,
    relators: Vec<String>,
}

fn parse_register_json(text: &str) -> Result<Vec<RegisterEntry>, EngineError> {
    let raw: Vec<JsonEntry> =
        serde_json::from_str(text).map_err(|e| EngineError::Register(e.to_string()))?;
    let mut out = Vec::with_capacity(raw.len());
    for e in raw {
        let body = format!("< {} | {} >", e.generators.join(", "), e.relators.join(", "));
        let p = parse_presentation(&format!("G{}", e.j), &expand_commutators(&body)?)
            .map_err(|err| EngineError::Register(format!("entry j = {}: {err}", e.j)))?;
        out.push(RegisterEntry {
            j: e.j,
            identifier: e.identifier,
            commensurability_class: e.class,
            presentation: Arc::new(p),
        });
    }
    Ok(out)
}

/// `.grp` format: metadata comment lines (`# key = value`) attach to the next
/// assignment `Name := < gens | relators >;` (the `Group< ... >` spelling is
/// also accepted). Metadata keys: j (required), identifier, class.
fn parse_register_grp(text: &str) -> Result<Vec<RegisterEntry>, EngineError> {
    let mut out = Vec::new();
    let mut meta: Vec<(String, String)> = Vec::new();
    let mut pending = String::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if pending.is_empty() {
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    meta.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
        }
        pending.push_str(line);
        pending.push('\n');
        if trimmed.ends_with(';') {
            let stmt = std::mem::take(&mut pending);
            let m = std::mem::take(&mut meta);
            out.push(parse_assignment(&stmt, &m, lineno + 1)?);
        }
    }
    if !pending.trim().is_empty() {
        return Err(EngineError::Register("unterminated statement (missing ';')".into()));
    }
    Ok(out)
}

fn parse_assignment(
    stmt: &str,
    meta: &[(String, String)],
    lineno: usize,
) -> Result<RegisterEntry, EngineError> {
    let err = |msg: String| EngineError::Register(format!("line {lineno}: {msg}"));
    let stmt = stmt.trim().strip_suffix(';').ok_or_else(|| err("missing ';'".into()))?;
    let (name, rhs) = stmt
        .split_once(":=")
        .ok_or_else(|| err("expected `Name := < ... >;`".into()))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(err(format!("bad name {name:?}")));
    }
    let rhs = rhs.trim();
    let body = if let Some(b) = rhs.strip_prefix("Group") {
        let b = b.trim();
        if !(b.starts_with('<') && b.ends_with('>')) {
            return Err(err("expected `Group< ... >`".into()));
        }
        b.to_string()
    } else if rhs.starts_with('<') && rhs.ends_with('>') {
        rhs.to_string()
    } else {
        return Err(err(format!("unrecognized construct {rhs:?}")));
    };
    let body = expand_commutators(&body).map_err(|e| match e {
        EngineError::Register(m) => err(m),
        other => other,
    })?;
    let p = parse_presentation(name, &body)
        .map_err(|e| err(format!("in presentation {name}: {e}")))?;
    let get = |k: &str| meta.iter().rev().find(|(mk, _)| mk == k).map(|(_, v)| v.clone());
    let j: u32 = get("j")
        .ok_or_else(|| err(format!("entry {name} missing `# j = N` metadata")))?
        .parse()
        .map_err(|_| err("j is not a number".into()))?;
    Ok(RegisterEntry {
        j,
        identifier: get("identifier").unwrap_or_else(|| name.to_string()),
        commensurability_class: get("class").unwrap_or_default(),
        presentation: Arc::new(p),
    })
}

/// Rewrite commutator shorthand `(u, v)` (nested and multi-argument, with
/// `(u, v, w) = ((u, v), w)`) into explicit inverses, leaving ordinary
/// grouping parentheses alone.
pub fn expand_commutators(text: &str) -> Result<String, EngineError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '(' {
            let (expanded, next) = expand_paren(&chars, i)?;
            out.push_str(&expanded);
            i = next;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    Ok(out)
}

/// Expand the parenthesized group starting at `open`; returns the rewritten
/// text and the index just past the closing parenthesis.
fn expand_paren(chars: &[char], open: usize) -> Result<(String, usize), EngineError> {
    let mut depth = 0usize;
    let mut parts: Vec<String> = vec![String::new()];
    let mut i = open;
    loop {
        if i >= chars.len() {
            return Err(EngineError::Register("unbalanced parenthesis".into()));
        }
        match chars[i] {
            '(' => {
                if depth == 0 {
                    depth = 1;
                    i += 1;
                    continue;
                }
                let (inner, next) = expand_paren(chars, i)?;
                parts.last_mut().unwrap().push_str(&inner);
                i = next;
                continue;
            }
            ')' => {
                i += 1;
                break;
            }
            ',' if depth == 1 => parts.push(String::new()),
            c => parts.last_mut().unwrap().push(c),
        }
        i += 1;
    }
    if parts.len() == 1 {
        return Ok((format!("({})", parts[0]), i));
    }
    // left-nested commutator: (u, v, w) = ((u, v), w)
    let mut acc = parts[0].trim().to_string();
    for p in &parts[1..] {
        let v = p.trim();
        acc = format!("(({acc})^-1*({v})^-1*({acc})*({v}))");
    }
    Ok((acc, i))
}
