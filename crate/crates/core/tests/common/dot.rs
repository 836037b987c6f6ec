//! A checker for the Graphviz DOT language (graph/stmt_list/node_stmt/
//! edge_stmt/attr_stmt/ID '=' ID/subgraph, with identifier, numeral and
//! quoted-string IDs). Used to confirm emitted graphs load in standard
//! tooling and to read back their node and edge sets.
#![allow(dead_code)]

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Colon,
    Arrow,
    Line,
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                while i + 1 < chars.len() && !(chars[i] == '*' && chars[i + 1] == '/') {
                    i += 1;
                }
                i += 2;
            }
            '{' => {
                out.push(Tok::LBrace);
                i += 1;
            }
            '}' => {
                out.push(Tok::RBrace);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1;
            }
            ';' => {
                out.push(Tok::Semi);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            ':' => {
                out.push(Tok::Colon);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Tok::Arrow);
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                out.push(Tok::Line);
                i += 2;
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'\\') => {
                            s.push('\\');
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Tok::Id(s));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let num: String = chars[start..i].iter().collect();
                if num.matches('.').count() > 1 {
                    return Err(format!("bad numeral `{num}`"));
                }
                out.push(Tok::Id(num));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

#[derive(Debug, Default)]
pub struct DotGraph {
    pub directed: bool,
    pub nodes: BTreeSet<String>,
    pub edges: Vec<(String, String)>,
    pub labels: Vec<(String, String)>,
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
    directed: bool,
    g: DotGraph,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }
    fn expect(&mut self, t: Tok) -> Result<(), String> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(format!("expected {t:?}, got {other:?}")),
        }
    }
    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            other => Err(format!("expected ID, got {other:?}")),
        }
    }
    fn keyword(s: &str, kw: &str) -> bool {
        s.eq_ignore_ascii_case(kw)
    }

    fn graph(&mut self) -> Result<(), String> {
        let mut kw = self.id()?;
        if Self::keyword(&kw, "strict") {
            kw = self.id()?;
        }
        self.directed = if Self::keyword(&kw, "digraph") {
            true
        } else if Self::keyword(&kw, "graph") {
            false
        } else {
            return Err(format!("expected graph or digraph, got `{kw}`"));
        };
        self.g.directed = self.directed;
        if let Some(Tok::Id(_)) = self.peek() {
            self.next();
        }
        self.expect(Tok::LBrace)?;
        self.stmt_list()?;
        self.expect(Tok::RBrace)?;
        if self.pos != self.toks.len() {
            return Err("trailing tokens after graph".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !matches!(self.peek(), Some(Tok::RBrace) | None) {
            self.stmt()?;
            if self.peek() == Some(&Tok::Semi) {
                self.next();
            }
        }
        Ok(())
    }

    fn attr_list(&mut self) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        while self.peek() == Some(&Tok::LBracket) {
            self.next();
            while self.peek() != Some(&Tok::RBracket) {
                let k = self.id()?;
                self.expect(Tok::Eq)?;
                let v = self.id()?;
                out.push((k, v));
                if matches!(self.peek(), Some(Tok::Semi) | Some(Tok::Comma)) {
                    self.next();
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(out)
    }

    fn node_id(&mut self) -> Result<String, String> {
        let id = self.id()?;
        if self.peek() == Some(&Tok::Colon) {
            self.next();
            self.id()?;
            if self.peek() == Some(&Tok::Colon) {
                self.next();
                self.id()?;
            }
        }
        Ok(id)
    }

    fn stmt(&mut self) -> Result<(), String> {
        if let Some(Tok::Id(s)) = self.peek() {
            let s = s.clone();
            if ["graph", "node", "edge"].iter().any(|k| Self::keyword(&s, k)) {
                self.next();
                self.attr_list()?;
                return Ok(());
            }
            if Self::keyword(&s, "subgraph") {
                return Err("subgraphs not expected".into());
            }
        }
        let first = self.node_id()?;
        if self.peek() == Some(&Tok::Eq) {
            self.next();
            self.id()?;
            return Ok(());
        }
        self.g.nodes.insert(first.clone());
        let mut prev = first.clone();
        let mut is_edge = false;
        loop {
            match self.peek() {
                Some(Tok::Arrow) if self.directed => {}
                Some(Tok::Line) if !self.directed => {}
                Some(Tok::Arrow) | Some(Tok::Line) => return Err("edge operator does not match graph kind".into()),
                _ => break,
            }
            self.next();
            let to = self.node_id()?;
            self.g.nodes.insert(to.clone());
            self.g.edges.push((prev, to.clone()));
            prev = to;
            is_edge = true;
        }
        let attrs = self.attr_list()?;
        if !is_edge {
            for (k, v) in attrs {
                if k == "label" {
                    self.g.labels.push((first.clone(), v));
                }
            }
        }
        Ok(())
    }
}

pub fn parse_dot(src: &str) -> Result<DotGraph, String> {
    let mut p = P {
        toks: lex(src)?,
        pos: 0,
        directed: false,
        g: DotGraph::default(),
    };
    p.graph()?;
    Ok(p.g)
}

#[test]
fn checker_rejects_broken_graphs() {
    assert!(parse_dot("digraph { a -> b; }").is_ok());
    assert!(parse_dot("digraph { a -> ; }").is_err());
    assert!(parse_dot("digraph { \"a -> b; }").is_err());
    assert!(parse_dot("graph { a -> b }").is_err());
    assert!(parse_dot("digraph { a [label=x }").is_err());
    assert!(parse_dot("digraph { a } extra").is_err());
}
