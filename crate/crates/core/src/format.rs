//! The canonical `.srs` text format.
//!
//! Line oriented. `@key: value` directives come first, then blocks, each
//! opened by a `[kind arg]` line and running until the next block header or
//! end of file, minus trailing blank lines:
//!
//! ```text
//! @project: SRS ATM
//! @id: 1
//! @template: ieee-830
//!
//! [section introduction.references]
//! NA
//!
//! [req FR-1]
//! kind: functional
//! title: Get Balance Information
//! trace: FR-2, FR-3
//!
//! The customer can ask for the balance of an account.
//! ```
//!
//! Block kinds are `template-node`, `section`, `define`, `function`, `req`
//! and `signoff`. A body line beginning with `[` or `\` is written with an
//! extra leading `\`, which the parser strips. `#` lines before the first
//! block are comments and are dropped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::ModelError;
use crate::model::{
    builtin_template, parse_date, FunctionNumber, Project, ReqId, ReqKind, Requirement, SectionBody, SectionKind,
    SectionNode, SectionPath, SignoffRole, Template, TemplateId, IEEE_830,
};

/// A parse finding tied to a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub code: &'static str,
    pub file: Option<PathBuf>,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{}:{}: {} {}", file.display(), self.line, self.code, self.message),
            None => write!(f, "line {}: {} {}", self.line, self.code, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseOutcome {
    Success(Project),
    /// Never empty.
    Failure(Vec<ParseDiagnostic>),
}

impl ParseOutcome {
    pub fn into_result(self) -> Result<Project, Vec<ParseDiagnostic>> {
        match self {
            ParseOutcome::Success(p) => Ok(p),
            ParseOutcome::Failure(d) => Err(d),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {} parse error(s), first: {}", path.display(), diagnostics.len(), diagnostics[0])]
    Parse {
        path: PathBuf,
        diagnostics: Vec<ParseDiagnostic>,
    },
}

/// Parse diagnostic codes and what they mean.
pub const PARSE_CODES: &[(&str, &str)] = &[
    ("E-ENC", "input is not valid UTF-8"),
    (
        "E-HDR",
        "missing, duplicate or malformed @project/@id/@template directive",
    ),
    ("E-SYNTAX", "line is neither a directive, comment nor block header"),
    ("E-TEMPLATE", "template-node blocks are inconsistent"),
    ("E-PATH", "unknown or malformed section path"),
    ("E-DUP-SECTION", "section block repeated"),
    ("E-BODY", "block body does not fit its block kind"),
    ("E-DUP-DEF", "define block repeated"),
    ("E-FN-NUM", "malformed function number"),
    ("E-DUP-FN", "function block repeated"),
    ("E-REQ-ID", "malformed requirement id"),
    ("E-DUP-REQ", "requirement block repeated"),
    ("E-REQ-META", "requirement metadata missing or repeated"),
    ("E-REQ-KIND", "unknown requirement kind, or no section for it"),
    (
        "E-REQ-TRACE",
        "trace list repeats an id or names the requirement itself",
    ),
    ("E-ROLE", "unknown sign-off role"),
    ("E-DUP-SIGNOFF", "sign-off block repeated"),
    ("E-DATE", "malformed sign-off date"),
];

struct Block<'a> {
    kind: &'a str,
    arg: &'a str,
    line: usize,
    body: Vec<(usize, &'a str)>,
}

impl Block<'_> {
    fn text(&self) -> String {
        self.body
            .iter()
            .map(|(_, l)| unescape(l))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn unescape(line: &str) -> &str {
    line.strip_prefix('\\').unwrap_or(line)
}

fn escape(line: &str) -> String {
    if line.starts_with('[') || line.starts_with('\\') {
        format!("\\{line}")
    } else {
        line.to_string()
    }
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

const BLOCK_KINDS: &[&str] = &["template-node", "section", "define", "function", "req", "signoff"];

struct Parser {
    diags: Vec<ParseDiagnostic>,
}

impl Parser {
    fn error(&mut self, code: &'static str, line: usize, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic {
            code,
            file: None,
            line,
            message: message.into(),
        });
    }
}

/// Parses a `.srs` document. Never panics; any byte sequence yields either
/// a project or a non-empty list of diagnostics.
pub fn parse(bytes: &[u8]) -> ParseOutcome {
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            let line = bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1;
            return ParseOutcome::Failure(vec![ParseDiagnostic {
                code: "E-ENC",
                file: None,
                line,
                message: format!("invalid UTF-8 at byte {}", e.valid_up_to()),
            }]);
        }
    };
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut p = Parser { diags: Vec::new() };
    let project = parse_text(text, &mut p);
    if p.diags.is_empty() {
        if let Some(project) = project {
            return ParseOutcome::Success(project);
        }
        p.error("E-HDR", 1, "no project could be built");
    }
    p.diags.sort_by(|a, b| a.line.cmp(&b.line).then(a.code.cmp(b.code)));
    ParseOutcome::Failure(p.diags)
}

fn split_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if text.ends_with('\n') {
        lines.pop();
    }
    lines.into_iter().map(|l| l.strip_suffix('\r').unwrap_or(l)).collect()
}

fn parse_text(text: &str, p: &mut Parser) -> Option<Project> {
    let mut headers: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut blocks: Vec<Block> = Vec::new();

    for (i, line) in split_lines(text).into_iter().enumerate() {
        let n = i + 1;
        if line.len() >= 2 && line.starts_with('[') && line.ends_with(']') {
            let inner = &line[1..line.len() - 1];
            let (kind, arg) = inner.split_once(' ').unwrap_or((inner, ""));
            let arg = arg.trim();
            if !BLOCK_KINDS.contains(&kind) {
                p.error("E-SYNTAX", n, format!("unknown block kind `{kind}`"));
            } else if arg.is_empty() {
                p.error("E-SYNTAX", n, format!("block `{kind}` needs an argument"));
            }
            blocks.push(Block {
                kind,
                arg,
                line: n,
                body: Vec::new(),
            });
            continue;
        }
        if let Some(block) = blocks.last_mut() {
            block.body.push((n, line));
            continue;
        }
        if is_blank(line) || line.starts_with('#') {
            continue;
        }
        match line.strip_prefix('@').and_then(|d| d.split_once(':')) {
            Some((key, value)) => {
                let key = key.trim();
                if !matches!(key, "project" | "id" | "template" | "signoff-title") {
                    p.error("E-HDR", n, format!("unknown directive `@{key}`"));
                } else if headers.contains_key(key) {
                    p.error("E-HDR", n, format!("duplicate directive `@{key}`"));
                } else {
                    headers.insert(key, (n, value.trim()));
                }
            }
            None => p.error("E-SYNTAX", n, "expected `@key: value`, a comment, or a block header"),
        }
    }
    for block in &mut blocks {
        while block.body.last().is_some_and(|(_, l)| is_blank(l)) {
            block.body.pop();
        }
    }

    let template = build_template(&headers, &blocks, p);
    let mut project = build_header(&headers, template, p);

    let mut seen_sections = BTreeSet::new();
    let mut seen_terms = BTreeSet::new();
    let mut seen_functions = BTreeSet::new();
    let mut seen_reqs = BTreeSet::new();
    let mut seen_roles = BTreeSet::new();

    for block in blocks.iter().filter(|b| !b.arg.is_empty()) {
        match block.kind {
            "section" => {
                let Ok(path) = SectionPath::parse(block.arg) else {
                    p.error("E-PATH", block.line, format!("malformed section path `{}`", block.arg));
                    continue;
                };
                if !seen_sections.insert(path.clone()) {
                    p.error(
                        "E-DUP-SECTION",
                        block.line,
                        format!("section `{path}` appears more than once"),
                    );
                    continue;
                }
                let raw: Vec<&str> = block.body.iter().map(|(_, l)| *l).collect();
                let body = if raw == ["NA"] {
                    SectionBody::Na
                } else {
                    match SectionBody::text(&block.text()) {
                        Ok(b) => b,
                        Err(_) => {
                            p.error(
                                "E-BODY",
                                block.line,
                                format!("section `{path}` is empty; write NA instead"),
                            );
                            continue;
                        }
                    }
                };
                if let Some(proj) = &project {
                    match proj.set_section(&path, body) {
                        Ok(next) => project = Some(next),
                        Err(e @ (ModelError::UnknownPath(_) | ModelError::ContainerPath(_))) => {
                            p.error("E-PATH", block.line, e.to_string())
                        }
                        Err(e) => p.error("E-BODY", block.line, e.to_string()),
                    }
                }
            }
            "define" => {
                if !seen_terms.insert(block.arg) {
                    p.error(
                        "E-DUP-DEF",
                        block.line,
                        format!("term `{}` defined more than once", block.arg),
                    );
                    continue;
                }
                if let Some(proj) = &project {
                    match proj.add_definition(block.arg, &block.text()) {
                        Ok(next) => project = Some(next),
                        Err(e) => p.error("E-BODY", block.line, e.to_string()),
                    }
                }
            }
            "function" => {
                let Ok(num) = FunctionNumber::parse(block.arg) else {
                    p.error(
                        "E-FN-NUM",
                        block.line,
                        format!("malformed function number `{}`", block.arg),
                    );
                    continue;
                };
                if !seen_functions.insert(num.clone()) {
                    p.error(
                        "E-DUP-FN",
                        block.line,
                        format!("function `{num}` appears more than once"),
                    );
                    continue;
                }
                let title = block.text();
                if title.contains('\n') || title.trim().is_empty() {
                    p.error(
                        "E-BODY",
                        block.line,
                        format!("function `{num}` needs a single-line title"),
                    );
                    continue;
                }
                if let Some(proj) = &project {
                    match proj.set_function(num, &title) {
                        Ok(next) => project = Some(next),
                        Err(e) => p.error("E-BODY", block.line, e.to_string()),
                    }
                }
            }
            "req" => {
                let Ok(id) = ReqId::parse(block.arg) else {
                    p.error(
                        "E-REQ-ID",
                        block.line,
                        format!("malformed requirement id `{}`", block.arg),
                    );
                    continue;
                };
                if !seen_reqs.insert(id.clone()) {
                    p.error(
                        "E-DUP-REQ",
                        block.line,
                        format!("requirement `{id}` appears more than once"),
                    );
                    continue;
                }
                let Some(req) = parse_requirement(id, block, p) else {
                    continue;
                };
                if let Some(proj) = &project {
                    match proj.add_requirement(req) {
                        Ok(next) => project = Some(next),
                        Err(e @ ModelError::UnroutableKind(_)) => p.error("E-REQ-KIND", block.line, e.to_string()),
                        Err(e) => p.error("E-BODY", block.line, e.to_string()),
                    }
                }
            }
            "signoff" => {
                let Ok(role) = block.arg.parse::<SignoffRole>() else {
                    p.error("E-ROLE", block.line, format!("unknown sign-off role `{}`", block.arg));
                    continue;
                };
                if !seen_roles.insert(role) {
                    p.error(
                        "E-DUP-SIGNOFF",
                        block.line,
                        format!("sign-off `{role}` appears more than once"),
                    );
                    continue;
                }
                let fields = parse_fields(block, &["name", "date"], "E-SYNTAX", p);
                let name = fields.get("name").map(|(_, v)| *v).unwrap_or("");
                let date = match fields.get("date") {
                    Some((line, v)) => match parse_date(v) {
                        Ok(d) => d,
                        Err(e) => {
                            p.error("E-DATE", *line, e.to_string());
                            continue;
                        }
                    },
                    None => None,
                };
                if let Some(proj) = &project {
                    match proj.set_signoff(role, name, date) {
                        Ok(next) => project = Some(next),
                        Err(e) => p.error("E-BODY", block.line, e.to_string()),
                    }
                }
            }
            _ => {}
        }
    }
    project
}

/// Reads `key: value` lines from a block body. Unknown or repeated keys are
/// reported under `code`.
fn parse_fields<'a>(
    block: &Block<'a>,
    keys: &[&str],
    code: &'static str,
    p: &mut Parser,
) -> BTreeMap<&'a str, (usize, &'a str)> {
    let mut out = BTreeMap::new();
    for (n, line) in &block.body {
        if is_blank(line) {
            continue;
        }
        match line.split_once(':') {
            Some((k, v)) if keys.contains(&k.trim()) => {
                let k = k.trim();
                if out.insert(k, (*n, v.trim())).is_some() {
                    p.error(code, *n, format!("`{k}` given more than once"));
                }
            }
            _ => p.error(code, *n, format!("expected one of {} as `key: value`", keys.join(", "))),
        }
    }
    out
}

fn parse_requirement(id: ReqId, block: &Block, p: &mut Parser) -> Option<Requirement> {
    let mut kind = None;
    let mut title = None;
    let mut trace = Vec::new();
    let mut ok = true;
    let mut seen = BTreeSet::new();
    let mut text_start = block.body.len();

    for (i, (n, line)) in block.body.iter().enumerate() {
        if is_blank(line) {
            text_start = i + 1;
            break;
        }
        let Some((key, value)) = line
            .split_once(':')
            .filter(|(k, _)| matches!(*k, "kind" | "title" | "trace"))
        else {
            text_start = i;
            break;
        };
        if !seen.insert(key) {
            p.error("E-REQ-META", *n, format!("`{key}` given more than once"));
            ok = false;
            continue;
        }
        let value = value.trim();
        match key {
            "kind" => match value.parse::<ReqKind>() {
                Ok(k) => kind = Some(k),
                Err(_) => {
                    p.error("E-REQ-KIND", *n, format!("unknown requirement kind `{value}`"));
                    ok = false;
                }
            },
            "title" => title = Some(value),
            _ => {
                for target in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    match ReqId::parse(target) {
                        Ok(t) => trace.push(t),
                        Err(_) => {
                            p.error("E-REQ-ID", *n, format!("malformed trace target `{target}`"));
                            ok = false;
                        }
                    }
                }
            }
        }
    }
    if kind.is_none() && !seen.contains("kind") {
        p.error("E-REQ-META", block.line, format!("requirement `{id}` has no kind"));
        ok = false;
    }
    if title.is_none_or(str::is_empty) {
        p.error("E-REQ-META", block.line, format!("requirement `{id}` has no title"));
        ok = false;
    }
    if !ok {
        return None;
    }
    let text = block.body[text_start.min(block.body.len())..]
        .iter()
        .map(|(_, l)| unescape(l))
        .collect::<Vec<_>>()
        .join("\n");
    let req = Requirement::new(id, kind?, title?).ok()?.with_text(&text);
    match req.with_trace(trace) {
        Ok(r) => Some(r),
        Err(e) => {
            p.error("E-REQ-TRACE", block.line, e.to_string());
            None
        }
    }
}

fn build_template(headers: &BTreeMap<&str, (usize, &str)>, blocks: &[Block], p: &mut Parser) -> Option<Template> {
    let nodes: Vec<&Block> = blocks
        .iter()
        .filter(|b| b.kind == "template-node" && !b.arg.is_empty())
        .collect();
    let (line, id) = *headers.get("template")?;
    if id == IEEE_830 {
        if let Some(b) = nodes.first() {
            p.error(
                "E-TEMPLATE",
                b.line,
                "template-node blocks are only allowed with a custom template",
            );
            return None;
        }
        return builtin_template(id).ok();
    }
    let Ok(template_id) = TemplateId::parse(id) else {
        p.error("E-HDR", line, format!("malformed template id `{id}`"));
        return None;
    };
    if nodes.is_empty() {
        p.error(
            "E-HDR",
            line,
            format!("unknown template `{id}` and no template-node blocks"),
        );
        return None;
    }
    let mut out = Vec::new();
    let mut ok = true;
    for b in &nodes {
        let Ok(path) = SectionPath::parse(b.arg) else {
            p.error("E-PATH", b.line, format!("malformed section path `{}`", b.arg));
            ok = false;
            continue;
        };
        let fields = parse_fields(b, &["label", "kind", "mandatory"], "E-TEMPLATE", p);
        let label = fields.get("label").map(|(_, v)| v.to_string()).unwrap_or_default();
        let kind = match fields.get("kind").map(|(_, v)| v.parse::<SectionKind>()) {
            Some(Ok(k)) => k,
            _ => {
                p.error(
                    "E-TEMPLATE",
                    b.line,
                    format!("template node `{path}` needs a valid kind"),
                );
                ok = false;
                continue;
            }
        };
        let mandatory = match fields.get("mandatory").map(|(_, v)| *v) {
            Some("true") => true,
            Some("false") | None => false,
            Some(other) => {
                p.error(
                    "E-TEMPLATE",
                    b.line,
                    format!("mandatory must be true or false, got `{other}`"),
                );
                ok = false;
                continue;
            }
        };
        out.push(SectionNode {
            path,
            label,
            kind,
            mandatory,
        });
    }
    if !ok {
        return None;
    }
    match Template::from_nodes(template_id, out) {
        Ok(t) => Some(t),
        Err(e) => {
            p.error("E-TEMPLATE", nodes[0].line, e.to_string());
            None
        }
    }
}

fn build_header(
    headers: &BTreeMap<&str, (usize, &str)>,
    template: Option<Template>,
    p: &mut Parser,
) -> Option<Project> {
    for key in ["project", "id", "template"] {
        if !headers.contains_key(key) {
            p.error("E-HDR", 1, format!("missing `@{key}` directive"));
        }
    }
    let (title_line, title) = *headers.get("project")?;
    let (id_line, id) = *headers.get("id")?;
    let id = match id.bytes().all(|b| b.is_ascii_digit()).then(|| id.parse::<u64>()) {
        Some(Ok(n)) => n,
        _ => {
            p.error(
                "E-HDR",
                id_line,
                format!("project id must be a nonnegative integer, got `{id}`"),
            );
            return None;
        }
    };
    let template = template?;
    let mut project = match Project::with_template(title, id, template) {
        Ok(pr) => pr,
        Err(e) => {
            p.error("E-HDR", title_line, e.to_string());
            return None;
        }
    };
    if let Some((line, t)) = headers.get("signoff-title") {
        match project.set_signoff_title(Some(t)) {
            Ok(next) => project = next,
            Err(e) => p.error("E-HDR", *line, e.to_string()),
        }
    }
    Some(project)
}

/// Writes the canonical form of a project: LF line endings, one trailing
/// newline, fixed block order, exactly one blank line between blocks.
pub fn serialize(project: &Project) -> String {
    let mut blocks: Vec<String> = Vec::new();

    let mut header = format!(
        "@project: {}\n@id: {}\n@template: {}",
        project.title(),
        project.id(),
        project.template().id()
    );
    if let Some(t) = project.signoff_title() {
        header.push_str(&format!("\n@signoff-title: {t}"));
    }
    blocks.push(header);

    let template = project.template();
    if !template.is_builtin() {
        for node in template.nodes() {
            blocks.push(format!(
                "[template-node {}]\nlabel: {}\nkind: {}\nmandatory: {}",
                node.path, node.label, node.kind, node.mandatory
            ));
        }
    }
    for node in template.leaves() {
        if let Some(body) = project.section(&node.path) {
            let text = match body {
                SectionBody::Na => "NA".to_string(),
                SectionBody::Text(t) if t == "NA" => "\\NA".to_string(),
                SectionBody::Text(t) => escape_text(t),
            };
            blocks.push(format!("[section {}]\n{}", node.path, text));
        }
    }
    for d in project.definitions() {
        blocks.push(with_body(format!("[define {}]", d.term), &escape_text(&d.meaning)));
    }
    for (num, title) in project.functions() {
        blocks.push(format!("[function {num}]\n{}", escape(title)));
    }
    for req in project.requirements().values() {
        let mut b = format!("[req {}]\nkind: {}\ntitle: {}", req.id(), req.kind(), req.title());
        if !req.trace().is_empty() {
            let trace: Vec<String> = req.trace().iter().map(ToString::to_string).collect();
            b.push_str(&format!("\ntrace: {}", trace.join(", ")));
        }
        if !req.text().is_empty() {
            b.push_str("\n\n");
            b.push_str(&escape_text(req.text()));
        }
        blocks.push(b);
    }
    for (role, s) in project.signoffs() {
        let date = s.date.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default();
        blocks.push(
            format!("[signoff {role}]\nname: {}\ndate: {}", s.name, date)
                .lines()
                .map(str::trim_end)
                .collect::<Vec<_>>()
                .join("\n"),
        );
    }
    let mut out = blocks.join("\n\n");
    out.push('\n');
    out
}

fn escape_text(text: &str) -> String {
    text.split('\n').map(escape).collect::<Vec<_>>().join("\n")
}

fn with_body(header: String, body: &str) -> String {
    if body.is_empty() {
        header
    } else {
        format!("{header}\n{body}")
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Project, LoadError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&bytes).into_result().map_err(|diagnostics| LoadError::Parse {
        path: path.to_path_buf(),
        diagnostics: diagnostics
            .into_iter()
            .map(|d| ParseDiagnostic {
                file: Some(path.to_path_buf()),
                ..d
            })
            .collect(),
    })
}

/// Saves the canonical form atomically: the bytes go to a temporary file in
/// the target directory, which is then renamed over the destination.
pub fn save(project: &Project, path: impl AsRef<Path>) -> Result<(), LoadError> {
    let path = path.as_ref();
    let io_err = |source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "project.srs".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serialize(project).as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}
