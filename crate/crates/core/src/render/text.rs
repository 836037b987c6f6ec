use super::{Content, Outline, DOCUMENT_HEADING, SIGNOFF_GROUPS};

/// Plain text layout. Blocks are separated by one blank line; NA leaves
/// render inline as `Label: NA`, content goes on the lines after `Label:`.
pub(super) fn emit(outline: &Outline) -> String {
    let mut blocks: Vec<String> = vec![
        format!("Project Title: {}\nProject Id: {}", outline.title, outline.id),
        DOCUMENT_HEADING.to_string(),
    ];

    for item in &outline.items {
        let label = &item.node.label;
        let block = match &item.content {
            None => label.clone(),
            Some(Content::Na) => format!("{label}: NA"),
            Some(Content::Text(t)) => format!("{label}:\n{t}"),
            Some(Content::Definitions(defs)) => {
                let mut b = format!("{label}:");
                for d in *defs {
                    b.push_str(&format!("\n- {}:", d.term));
                    for line in d.meaning.lines() {
                        b.push('\n');
                        b.push_str(&indent(line));
                    }
                }
                b
            }
            Some(Content::Functions(fns)) => {
                let mut b = format!("{label}:");
                for (num, title) in fns {
                    b.push_str(&format!("\n{num}. {title}"));
                }
                b
            }
            Some(Content::Requirements(reqs)) => {
                let mut b = format!("{label}:");
                for r in reqs {
                    let mut lines = r.text().lines();
                    match lines.next() {
                        Some(first) if !r.text().is_empty() => b.push_str(&format!("\n- {}: {first}", r.title())),
                        _ => b.push_str(&format!("\n- {}", r.title())),
                    }
                    for line in lines {
                        b.push('\n');
                        b.push_str(&indent(line));
                    }
                }
                b
            }
        };
        blocks.push(block);
    }

    blocks.push(outline.document_title.clone());
    for (heading, roles) in SIGNOFF_GROUPS {
        let mut b = heading.to_string();
        for role in roles {
            let s = outline.signoff(*role);
            if s.name.is_empty() {
                b.push_str(&format!("\n{}", role.display_name()));
            } else {
                b.push_str(&format!("\n{}: {}", role.display_name(), s.name));
            }
            match &s.date {
                Some(d) => b.push_str(&format!("\nDate: {d}")),
                None => b.push_str("\nDate"),
            }
        }
        blocks.push(b);
    }

    let mut out = blocks.join("\n\n");
    out.push('\n');
    out
}

fn indent(line: &str) -> String {
    if line.is_empty() {
        String::new()
    } else {
        format!("  {line}")
    }
}
