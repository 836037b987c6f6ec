//! Function Hierarchy Diagram: the product functions nested by their
//! dotted-decimal numbers under a root named after the project.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;
use crate::model::{FunctionNumber, Project};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FhdNode {
    /// `None` only for the root.
    pub number: Option<FunctionNumber>,
    pub title: String,
    pub children: Vec<FhdNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FhdTree {
    pub root: FhdNode,
}

impl FhdTree {
    pub fn node_count(&self) -> usize {
        self.preorder().len()
    }

    /// Nodes in pre-order with their depth (root at depth 0).
    pub fn preorder(&self) -> Vec<(usize, &FhdNode)> {
        fn walk<'a>(node: &'a FhdNode, depth: usize, out: &mut Vec<(usize, &'a FhdNode)>) {
            out.push((depth, node));
            for child in &node.children {
                walk(child, depth + 1, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, 0, &mut out);
        out
    }

    /// Parent/child pairs in pre-order of the child; `None` is the root.
    pub fn edges(&self) -> Vec<(Option<&FunctionNumber>, &FunctionNumber)> {
        fn walk<'a>(node: &'a FhdNode, out: &mut Vec<(Option<&'a FunctionNumber>, &'a FunctionNumber)>) {
            for child in &node.children {
                let num = child.number.as_ref().expect("non-root nodes are numbered");
                out.push((node.number.as_ref(), num));
                walk(child, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }
}

/// Builds the hierarchy. Fails on the first function whose parent number
/// is not itself a function.
pub fn build_fhd(project: &Project) -> Result<FhdTree, ModelError> {
    let functions = project.functions();
    let mut children: BTreeMap<Option<&FunctionNumber>, Vec<&FunctionNumber>> = BTreeMap::new();
    for num in functions.keys() {
        let parent = match num.parent() {
            Some(parent) => match functions.get_key_value(&parent) {
                Some((key, _)) => Some(key),
                None => return Err(ModelError::OrphanFunction(num.clone())),
            },
            None => None,
        };
        // keys iterate in numeric order, so each sibling list is sorted
        children.entry(parent).or_default().push(num);
    }

    fn grow(
        parent: Option<&FunctionNumber>,
        children: &BTreeMap<Option<&FunctionNumber>, Vec<&FunctionNumber>>,
        functions: &BTreeMap<FunctionNumber, String>,
    ) -> Vec<FhdNode> {
        children
            .get(&parent)
            .map(|nums| {
                nums.iter()
                    .map(|num| FhdNode {
                        number: Some((*num).clone()),
                        title: functions[*num].clone(),
                        children: grow(Some(num), children, functions),
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    Ok(FhdTree {
        root: FhdNode {
            number: None,
            title: project.title().to_string(),
            children: grow(None, &children, functions),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FhdFormat {
    Tree,
    Dot,
}

impl FhdFormat {
    pub fn content_type(self) -> &'static str {
        match self {
            FhdFormat::Tree => "text/plain; charset=utf-8",
            FhdFormat::Dot => "text/vnd.graphviz; charset=utf-8",
        }
    }
}

impl fmt::Display for FhdFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FhdFormat::Tree => "tree",
            FhdFormat::Dot => "dot",
        })
    }
}

impl FromStr for FhdFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree" => Ok(FhdFormat::Tree),
            "dot" => Ok(FhdFormat::Dot),
            other => Err(format!("unknown format `{other}` (expected tree or dot)")),
        }
    }
}

fn dot_string(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn dot_id(num: Option<&FunctionNumber>) -> String {
    match num {
        Some(n) => format!("\"{n}\""),
        None => "\"root\"".to_string(),
    }
}

pub fn render_fhd(tree: &FhdTree, format: FhdFormat) -> String {
    let mut out = String::new();
    match format {
        FhdFormat::Tree => {
            for (depth, node) in tree.preorder() {
                out.push_str(&"  ".repeat(depth));
                match &node.number {
                    Some(n) => out.push_str(&format!("{n} {}\n", node.title)),
                    None => out.push_str(&format!("{}\n", node.title)),
                }
            }
        }
        FhdFormat::Dot => {
            out.push_str("digraph fhd {\n  node [shape=box];\n");
            fn walk(node: &FhdNode, parent: Option<Option<&FunctionNumber>>, out: &mut String) {
                let label = match &node.number {
                    Some(n) => format!("{n} {}", node.title),
                    None => node.title.clone(),
                };
                out.push_str(&format!(
                    "  {} [label={}];\n",
                    dot_id(node.number.as_ref()),
                    dot_string(&label)
                ));
                if let Some(parent) = parent {
                    out.push_str(&format!("  {} -> {};\n", dot_id(parent), dot_id(node.number.as_ref())));
                }
                for child in &node.children {
                    walk(child, Some(node.number.as_ref()), out);
                }
            }
            walk(&tree.root, None, &mut out);
            out.push_str("}\n");
        }
    }
    out
}
