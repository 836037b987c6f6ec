use super::{Content, Outline, DOCUMENT_HEADING, SIGNOFF_GROUPS};

const STYLE: &str = "body{font-family:sans-serif;max-width:48em;margin:2em auto;line-height:1.4}\
section{margin-left:0.5em}.na{color:#666}table{border-collapse:collapse}\
td,th{border:1px solid #999;padding:0.2em 0.6em;text-align:left}";

pub(super) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Blank-line separated paragraphs, single newlines as `<br />`.
fn paragraphs(text: &str) -> String {
    let mut out = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(format!("<p>{}</p>", current.join("<br />")));
                current.clear();
            }
        } else {
            current.push(escape(line));
        }
    }
    if !current.is_empty() {
        out.push(format!("<p>{}</p>", current.join("<br />")));
    }
    out.join("\n")
}

pub(super) fn emit(outline: &Outline) -> String {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\" />\n");
    out.push_str(&format!("<title>{}</title>\n", escape(outline.title)));
    out.push_str(&format!("<style>{STYLE}</style>\n</head>\n<body>\n"));
    out.push_str(&format!(
        "<p class=\"project\">Project Title: {}<br />Project Id: {}</p>\n",
        escape(outline.title),
        outline.id
    ));
    out.push_str(&format!(
        "<p class=\"doc-heading\"><strong>{DOCUMENT_HEADING}</strong></p>\n"
    ));

    let mut open: usize = 0;
    for item in &outline.items {
        let depth = item.node.depth();
        while open >= depth {
            out.push_str("</section>\n");
            open -= 1;
        }
        let h = depth.min(6);
        out.push_str(&format!(
            "<section id=\"{}\">\n<h{h}>{}</h{h}>\n",
            escape(item.node.path.as_str()),
            escape(&item.node.label)
        ));
        open += 1;
        let Some(content) = &item.content else {
            continue;
        };
        match content {
            Content::Na => out.push_str("<p class=\"na\">NA</p>\n"),
            Content::Text(t) => {
                out.push_str(&paragraphs(t));
                out.push('\n');
            }
            Content::Definitions(defs) => {
                out.push_str("<dl>\n");
                for d in *defs {
                    out.push_str(&format!(
                        "<dt>{}</dt>\n<dd>{}</dd>\n",
                        escape(&d.term),
                        paragraphs(&d.meaning)
                    ));
                }
                out.push_str("</dl>\n");
            }
            Content::Functions(fns) => {
                out.push_str("<ul class=\"functions\">\n");
                for (num, title) in fns {
                    out.push_str(&format!("<li>{num}. {}</li>\n", escape(title)));
                }
                out.push_str("</ul>\n");
            }
            Content::Requirements(reqs) => {
                out.push_str("<ul class=\"requirements\">\n");
                for r in reqs {
                    out.push_str(&format!(
                        "<li id=\"req-{}\"><strong>{}</strong>{}</li>\n",
                        r.id(),
                        escape(r.title()),
                        paragraphs(r.text())
                    ));
                }
                out.push_str("</ul>\n");
            }
        }
    }
    for _ in 0..open {
        out.push_str("</section>\n");
    }

    out.push_str("<section class=\"signoff\">\n");
    out.push_str(&format!(
        "<p><strong>{}</strong></p>\n",
        escape(&outline.document_title)
    ));
    for (heading, roles) in SIGNOFF_GROUPS {
        out.push_str(&format!("<p><strong>{heading}</strong></p>\n<table>\n"));
        for role in roles {
            let s = outline.signoff(*role);
            out.push_str(&format!(
                "<tr><th>{}</th><td>{}</td><td>Date: {}</td></tr>\n",
                escape(role.display_name()),
                escape(s.name),
                s.date.as_deref().unwrap_or("")
            ));
        }
        out.push_str("</table>\n");
    }
    out.push_str("</section>\n</body>\n</html>\n");
    out
}
