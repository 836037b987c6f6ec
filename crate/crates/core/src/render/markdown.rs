use super::{Content, Outline, DOCUMENT_HEADING, SIGNOFF_GROUPS};

/// Escapes a body line so it cannot turn into a heading or a setext
/// underline.
pub(super) fn escape_line(line: &str) -> String {
    let trimmed = line.trim_start();
    if trimmed.starts_with('#') {
        let lead = line.len() - trimmed.len();
        return format!("{}\\{}", &line[..lead], trimmed);
    }
    let t = trimmed.trim_end();
    if !t.is_empty() && (t.chars().all(|c| c == '=') || t.chars().all(|c| c == '-')) {
        return format!("\\{line}");
    }
    line.to_string()
}

fn escape_inline(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '*' | '_' | '`' | '\\' | '|' | '[' | ']' | '<' | '>') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn body(text: &str) -> String {
    text.lines().map(escape_line).collect::<Vec<_>>().join("\n")
}

fn item_lines(first: String, rest: &str) -> String {
    let mut b = first;
    for line in rest.lines() {
        b.push('\n');
        if !line.is_empty() {
            b.push_str("  ");
            b.push_str(&escape_line(line));
        }
    }
    b
}

pub(super) fn emit(outline: &Outline) -> String {
    let mut blocks: Vec<String> = vec![
        format!("Project Title: {}", escape_inline(outline.title)),
        format!("Project Id: {}", outline.id),
        format!("**{DOCUMENT_HEADING}**"),
    ];

    for item in &outline.items {
        let depth = item.node.depth().min(6);
        blocks.push(format!("{} {}", "#".repeat(depth), item.node.label));
        let Some(content) = &item.content else {
            continue;
        };
        let block = match content {
            Content::Na => "NA".to_string(),
            Content::Text(t) => body(t),
            Content::Definitions(defs) => defs
                .iter()
                .map(|d| {
                    let (first, rest) = d.meaning.split_once('\n').unwrap_or((d.meaning.as_str(), ""));
                    let head = format!("- **{}:** {}", escape_inline(&d.term), escape_line(first));
                    item_lines(head.trim_end().to_string(), rest)
                })
                .collect::<Vec<_>>()
                .join("\n"),
            Content::Functions(fns) => fns
                .iter()
                .map(|(num, title)| format!("- **{num}** {}", escape_inline(title)))
                .collect::<Vec<_>>()
                .join("\n"),
            Content::Requirements(reqs) => reqs
                .iter()
                .map(|r| {
                    let text = r.text();
                    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
                    let head = if text.is_empty() {
                        format!("- **{}** ({})", escape_inline(r.title()), r.id())
                    } else {
                        format!(
                            "- **{}** ({}): {}",
                            escape_inline(r.title()),
                            r.id(),
                            escape_line(first)
                        )
                    };
                    item_lines(head, rest)
                })
                .collect::<Vec<_>>()
                .join("\n"),
        };
        blocks.push(block);
    }

    blocks.push(format!("**{}**", escape_inline(&outline.document_title)));
    for (heading, roles) in SIGNOFF_GROUPS {
        blocks.push(format!("**{heading}**"));
        let mut table = String::from("| Role | Name | Date |\n| --- | --- | --- |");
        for role in roles {
            let s = outline.signoff(*role);
            table.push_str(&format!(
                "\n| {} | {} | {} |",
                role.display_name(),
                escape_inline(s.name),
                s.date.as_deref().unwrap_or("")
            ));
        }
        blocks.push(table);
    }

    let mut out = blocks.join("\n\n");
    out.push('\n');
    out
}
