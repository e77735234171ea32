//! Line-oriented text format for systems and for composed marked graphs.
//!
//! ```text
//! # comment
//! net <name>
//! pl <id> <tokens>
//! tr <id> : <arc>* -> <arc>*      arc = <place> | <place>*<weight>
//! ```
//!
//! Composition files list `v <id>` and `e <id> <v> <v>` lines, then one
//! `component <edge> <netfile> <placeA> <placeB>` line per edge.

use std::collections::HashSet;

use thiserror::Error;

use crate::net::{Net, NetError, System};
use crate::structure::{PcmgEdge, PcmgSpec};
use crate::Tokens;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: duplicate identifier `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown identifier `{id}`")]
    UnknownId { line: usize, id: String },
    #[error("line {line}: arc weight of `{place}` is zero")]
    ZeroWeight { line: usize, place: String },
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("component of edge `{edge}`: {source}")]
    Component { edge: String, source: Box<FormatError> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDecl {
    pub id: String,
    pub inputs: Vec<(String, Tokens)>,
    pub outputs: Vec<(String, Tokens)>,
}

/// A parsed net file: declaration order fixes vector indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDocument {
    pub name: String,
    pub places: Vec<(String, Tokens)>,
    pub transitions: Vec<TransitionDecl>,
}

struct Lexer<'a> {
    line: usize,
    text: &'a str,
    /// Byte offsets of the tokens within the line.
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Lexer<'a> {
    fn new(line: usize, raw: &'a str) -> Self {
        let text = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push((s, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s, &text[s..]));
        }
        Lexer { line, text, tokens }
    }

    fn col(&self, k: usize) -> usize {
        match self.tokens.get(k) {
            Some(&(off, _)) => self.text[..off].chars().count() + 1,
            None => self.text.chars().count() + 1,
        }
    }

    fn err(&self, k: usize, message: impl Into<String>) -> FormatError {
        FormatError::Syntax { line: self.line, col: self.col(k), message: message.into() }
    }

    fn nat(&self, k: usize) -> Result<Tokens, FormatError> {
        let (_, s) = self.tokens.get(k).ok_or_else(|| self.err(k, "expected a natural number"))?;
        s.parse().map_err(|_| self.err(k, format!("`{s}` is not a natural number")))
    }

    fn ident(&self, k: usize) -> Result<&'a str, FormatError> {
        let &(_, s) = self.tokens.get(k).ok_or_else(|| self.err(k, "expected an identifier"))?;
        if valid_ident(s) {
            Ok(s)
        } else {
            Err(self.err(k, format!("`{s}` is not an identifier")))
        }
    }

    fn end(&self, k: usize) -> Result<(), FormatError> {
        if k < self.tokens.len() {
            Err(self.err(k, "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty()
        && s != "->"
        && s != ":"
        && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-' | '[' | ']' | '+'))
        && !s.starts_with("->")
}

fn parse_arc(lx: &Lexer<'_>, k: usize) -> Result<(String, Tokens), FormatError> {
    let (off, s) = lx.tokens[k];
    let (id, weight) = match s.split_once('*') {
        None => (s, 1),
        Some((id, w)) => {
            let col = lx.text[..off].chars().count() + id.chars().count() + 2;
            let w: Tokens = w.parse().map_err(|_| FormatError::Syntax {
                line: lx.line,
                col,
                message: format!("`{w}` is not a weight"),
            })?;
            (id, w)
        }
    };
    if !valid_ident(id) {
        return Err(lx.err(k, format!("`{id}` is not a place identifier")));
    }
    if weight == 0 {
        return Err(FormatError::ZeroWeight { line: lx.line, place: id.into() });
    }
    Ok((id.into(), weight))
}

pub fn parse(text: &str) -> Result<NetDocument, FormatError> {
    let mut name = None;
    let mut places: Vec<(String, Tokens)> = Vec::new();
    let mut transitions: Vec<TransitionDecl> = Vec::new();
    let mut ids: HashSet<String> = HashSet::new();
    // Arcs are resolved after every place is known.
    let mut pending: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lx = Lexer::new(i + 1, raw);
        let Some(&(_, kw)) = lx.tokens.first() else { continue };
        match kw {
            "net" => {
                if name.is_some() {
                    return Err(lx.err(0, "second `net` line"));
                }
                name = Some(lx.ident(1)?.to_string());
                lx.end(2)?;
            }
            "pl" => {
                let id = lx.ident(1)?;
                let tokens = lx.nat(2)?;
                lx.end(3)?;
                if !ids.insert(id.into()) {
                    return Err(FormatError::DuplicateId { line: lx.line, id: id.into() });
                }
                places.push((id.into(), tokens));
            }
            "tr" => {
                let id = lx.ident(1)?;
                if lx.tokens.get(2).map(|t| t.1) != Some(":") {
                    return Err(lx.err(2, "expected `:`"));
                }
                let arrow = (3..lx.tokens.len())
                    .find(|&k| lx.tokens[k].1 == "->")
                    .ok_or_else(|| lx.err(lx.tokens.len(), "expected `->`"))?;
                let inputs = (3..arrow).map(|k| parse_arc(&lx, k)).collect::<Result<Vec<_>, _>>()?;
                let outputs = (arrow + 1..lx.tokens.len()).map(|k| parse_arc(&lx, k)).collect::<Result<Vec<_>, _>>()?;
                if !ids.insert(id.into()) {
                    return Err(FormatError::DuplicateId { line: lx.line, id: id.into() });
                }
                for (p, _) in inputs.iter().chain(&outputs) {
                    pending.push((lx.line, p.clone()));
                }
                transitions.push(TransitionDecl { id: id.into(), inputs, outputs });
            }
            _ => return Err(lx.err(0, format!("unknown keyword `{kw}`"))),
        }
    }
    let place_ids: HashSet<&str> = places.iter().map(|(p, _)| p.as_str()).collect();
    if let Some((line, id)) = pending.into_iter().find(|(_, p)| !place_ids.contains(p.as_str())) {
        return Err(FormatError::UnknownId { line, id });
    }
    let name = name.ok_or(FormatError::Syntax { line: 1, col: 1, message: "missing `net` line".into() })?;
    Ok(NetDocument { name, places, transitions })
}

fn write_arcs(out: &mut String, arcs: &[(String, Tokens)]) {
    for (p, w) in arcs {
        out.push(' ');
        out.push_str(p);
        if *w != 1 {
            out.push_str(&format!("*{w}"));
        }
    }
}

/// Canonical text: `net`, then places, then transitions, single spaces.
pub fn serialize(doc: &NetDocument) -> String {
    let mut out = format!("net {}\n", doc.name);
    for (p, m) in &doc.places {
        out.push_str(&format!("pl {p} {m}\n"));
    }
    for t in &doc.transitions {
        out.push_str(&format!("tr {} :", t.id));
        write_arcs(&mut out, &t.inputs);
        out.push_str(" ->");
        write_arcs(&mut out, &t.outputs);
        out.push('\n');
    }
    out
}

impl NetDocument {
    pub fn to_system(&self) -> Result<System, NetError> {
        let places: Vec<String> = self.places.iter().map(|(p, _)| p.clone()).collect();
        let index = |id: &str| places.iter().position(|p| p == id).ok_or(NetError::UnknownPlace(id.into()));
        let side = |arcs: &[(String, Tokens)]| -> Result<Vec<(usize, Tokens)>, NetError> {
            arcs.iter().map(|(p, w)| Ok((index(p)?, *w))).collect()
        };
        let pre = self.transitions.iter().map(|t| side(&t.inputs)).collect::<Result<Vec<_>, _>>()?;
        let post = self.transitions.iter().map(|t| side(&t.outputs)).collect::<Result<Vec<_>, _>>()?;
        let transitions = self.transitions.iter().map(|t| t.id.clone()).collect();
        let net = Net::from_arcs(self.name.clone(), places, transitions, pre, post)?;
        System::new(net, self.places.iter().map(|(_, m)| *m).collect())
    }

    pub fn from_system(sys: &System) -> NetDocument {
        let net = &sys.net;
        let named = |arcs: &[(usize, Tokens)]| arcs.iter().map(|&(p, w)| (net.place_id(p).to_string(), w)).collect();
        NetDocument {
            name: net.name().to_string(),
            places: (0..net.num_places()).map(|p| (net.place_id(p).to_string(), sys.m0[p])).collect(),
            transitions: (0..net.num_transitions())
                .map(|t| TransitionDecl {
                    id: net.transition_id(t).to_string(),
                    inputs: named(net.inputs(t)),
                    outputs: named(net.outputs(t)),
                })
                .collect(),
        }
    }
}

/// Parses a system file.
pub fn parse_system(text: &str) -> Result<System, FormatError> {
    let doc = parse(text)?;
    doc.to_system().map_err(|e| FormatError::Syntax { line: 1, col: 1, message: e.to_string() })
}

pub fn serialize_system(sys: &System) -> String {
    serialize(&NetDocument::from_system(sys))
}

/// Parses a composition file; `load` returns the text of a component file.
pub fn parse_pcmg(
    text: &str,
    mut load: impl FnMut(&str) -> Result<String, FormatError>,
) -> Result<PcmgSpec, FormatError> {
    let mut vertices = Vec::new();
    let mut edges: Vec<(String, String, String, usize)> = Vec::new();
    let mut comps: Vec<Option<(System, String, String)>> = Vec::new();
    let mut ids = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lx = Lexer::new(i + 1, raw);
        let Some(&(_, kw)) = lx.tokens.first() else { continue };
        match kw {
            "graph" => lx.end(1)?,
            "v" => {
                let id = lx.ident(1)?;
                lx.end(2)?;
                if !ids.insert(id.to_string()) {
                    return Err(FormatError::DuplicateId { line: lx.line, id: id.into() });
                }
                vertices.push(id.to_string());
            }
            "e" => {
                let (id, a, b) = (lx.ident(1)?, lx.ident(2)?, lx.ident(3)?);
                lx.end(4)?;
                if !ids.insert(id.to_string()) {
                    return Err(FormatError::DuplicateId { line: lx.line, id: id.into() });
                }
                for v in [a, b] {
                    if !vertices.iter().any(|x| x == v) {
                        return Err(FormatError::UnknownId { line: lx.line, id: v.into() });
                    }
                }
                edges.push((id.into(), a.into(), b.into(), lx.line));
                comps.push(None);
            }
            "component" => {
                let edge = lx.ident(1)?;
                let file = lx.tokens.get(2).map(|t| t.1).ok_or_else(|| lx.err(2, "expected a file name"))?;
                let (pa, pb) = (lx.ident(3)?, lx.ident(4)?);
                lx.end(5)?;
                let k = edges
                    .iter()
                    .position(|e| e.0 == edge)
                    .ok_or_else(|| FormatError::UnknownId { line: lx.line, id: edge.into() })?;
                if comps[k].is_some() {
                    return Err(FormatError::DuplicateId { line: lx.line, id: edge.into() });
                }
                let sys = parse_system(&load(file)?)
                    .map_err(|e| FormatError::Component { edge: edge.into(), source: Box::new(e) })?;
                for p in [pa, pb] {
                    if sys.net.place(p).is_err() {
                        return Err(FormatError::UnknownId { line: lx.line, id: p.into() });
                    }
                }
                comps[k] = Some((sys, pa.into(), pb.into()));
            }
            _ => return Err(lx.err(0, format!("unknown keyword `{kw}`"))),
        }
    }
    let mut out = Vec::new();
    for ((id, a, b, line), c) in edges.into_iter().zip(comps) {
        let (component, place_a, place_b) =
            c.ok_or(FormatError::Syntax { line, col: 1, message: format!("edge `{id}` has no component") })?;
        out.push(PcmgEdge { id, a, b, component, place_a, place_b });
    }
    Ok(PcmgSpec { vertices, edges: out })
}
