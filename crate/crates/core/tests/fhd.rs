mod common;

use std::collections::{BTreeMap, HashSet};

use common::dot::parse_dot;
use srs_core::render::{build_fhd, render_fhd, FhdFormat, FhdTree};
use srs_core::{new_project, FunctionNumber, Project, TemplateRegistry, IEEE_830};

/// (parent, number, title) in pre-order.
type Flat = Vec<(Option<Vec<u32>>, Vec<u32>, String)>;

const POOL: [&str; 7] = ["1", "2", "3", "1.1", "1.2", "2.1", "1.1.1"];

/// Independent oracle: sort the numbers componentwise, attach each to the
/// longest proper prefix that is present (root if none). Returns the
/// pre-order sequence as (parent, number, title), or `None` if some number's
/// immediate parent is missing.
fn oracle(functions: &BTreeMap<Vec<u32>, String>) -> Option<Flat> {
    let mut nums: Vec<&Vec<u32>> = functions.keys().collect();
    nums.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b.iter()) {
            if x != y {
                return x.cmp(y);
            }
        }
        a.len().cmp(&b.len())
    });
    let mut out = Vec::new();
    for n in nums {
        let parent = (1..n.len())
            .rev()
            .map(|k| n[..k].to_vec())
            .find(|p| functions.contains_key(p));
        if n.len() > 1 && parent.as_ref().map(Vec::len) != Some(n.len() - 1) {
            return None;
        }
        out.push((parent, n.clone(), functions[n].clone()));
    }
    Some(out)
}

fn flatten(tree: &FhdTree) -> Flat {
    fn walk(node: &srs_core::render::FhdNode, out: &mut Flat) {
        for c in &node.children {
            out.push((
                node.number.as_ref().map(|n| n.components().to_vec()),
                c.number.as_ref().unwrap().components().to_vec(),
                c.title.clone(),
            ));
            walk(c, out);
        }
    }
    let mut out = Vec::new();
    walk(&tree.root, &mut out);
    out
}

fn components(s: &str) -> Vec<u32> {
    s.split('.').map(|p| p.parse().unwrap()).collect()
}

fn sequences(max_len: usize) -> Vec<Vec<usize>> {
    let mut all = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for i in 0..POOL.len() {
                let mut s: Vec<usize> = seq.clone();
                s.push(i);
                next.push(s);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[test]
fn build_fhd_matches_oracle_for_every_insertion_sequence() {
    let base = new_project("SRS ATM", 1, IEEE_830, &TemplateRegistry::new()).unwrap();
    let mut checked_dot = HashSet::new();
    let mut orphan_free = 0usize;
    for seq in sequences(6) {
        let mut p: Project = base.clone();
        let mut expected_map = BTreeMap::new();
        for (pos, &i) in seq.iter().enumerate() {
            let title = format!("{}@{pos}", POOL[i]);
            p = p.set_function(FunctionNumber::parse(POOL[i]).unwrap(), &title).unwrap();
            expected_map.insert(components(POOL[i]), title);
        }
        let expected = oracle(&expected_map);
        let got = build_fhd(&p);
        match (expected, got) {
            (None, Err(e)) => assert_eq!(e.code(), "orphan-function"),
            (Some(exp), Ok(tree)) => {
                orphan_free += 1;
                assert_eq!(flatten(&tree), exp, "sequence {seq:?}");
                assert_eq!(tree.node_count(), expected_map.len() + 1);
                let dot = render_fhd(&tree, FhdFormat::Dot);
                if checked_dot.insert(dot.clone()) {
                    let g = parse_dot(&dot).unwrap_or_else(|e| panic!("{e}\n{dot}"));
                    assert!(g.directed);
                    assert_eq!(g.nodes.len(), expected_map.len() + 1);
                    assert_eq!(g.edges.len(), expected_map.len());
                    let edges: Vec<(String, String)> = exp
                        .iter()
                        .map(|(parent, n, _)| {
                            let join = |v: &Vec<u32>| v.iter().map(u32::to_string).collect::<Vec<_>>().join(".");
                            (parent.as_ref().map(join).unwrap_or_else(|| "root".into()), join(n))
                        })
                        .collect();
                    assert_eq!(g.edges, edges, "edges in pre-order");
                }
            }
            (exp, got) => panic!("oracle {exp:?} vs build_fhd {got:?} for {seq:?}"),
        }
    }
    assert!(orphan_free > 1000);
}

#[test]
fn tree_format_indents_two_spaces_per_level() {
    let mut p = new_project("SRS ATM", 1, IEEE_830, &TemplateRegistry::new()).unwrap();
    for n in ["1", "1.1", "1.1.1", "2"] {
        p = p
            .set_function(FunctionNumber::parse(n).unwrap(), &format!("F{n}"))
            .unwrap();
    }
    let text = render_fhd(&build_fhd(&p).unwrap(), FhdFormat::Tree);
    assert_eq!(text, "SRS ATM\n  1 F1\n    1.1 F1.1\n      1.1.1 F1.1.1\n  2 F2\n");
}

#[test]
fn fixture_fhd() {
    let tree = build_fhd(&common::atm()).unwrap();
    assert_eq!(
        render_fhd(&tree, FhdFormat::Tree),
        "SRS ATM\n  1 Get Balance Information\n"
    );
    let g = parse_dot(&render_fhd(&tree, FhdFormat::Dot)).unwrap();
    assert_eq!(g.edges, [("root".to_string(), "1".to_string())]);
    assert!(g.labels.contains(&("root".to_string(), "SRS ATM".to_string())));
}
