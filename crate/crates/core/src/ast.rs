//! Syntax trees and the structural measurables derived from them.
//!
//! Parsing is backed by tree-sitter. The concrete tree is copied into an
//! owned, arena-allocated [`SyntaxTree`] so the rest of the crate never holds
//! parser state and deep trees never recurse on the call stack.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::histogram::SymbolHistogram;

/// Separator between parent and child kinds in an edge label.
pub const EDGE_SEPARATOR: char = '→';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
}

impl Language {
    /// Grammar selected by file extension, with or without the leading dot.
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.trim_start_matches('.').to_ascii_lowercase().as_str() {
            "java" => Some(Language::Java),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Language::Java => "java",
        }
    }

    fn grammar(self) -> tree_sitter::Language {
        match self {
            Language::Java => tree_sitter_java::LANGUAGE.into(),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            other => Err(ParseError::UnsupportedLanguage(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxNode {
    pub kind: String,
    /// True for grammar-rule nodes, false for punctuation and keywords.
    pub is_named: bool,
    pub children: Vec<NodeId>,
}

/// Arena-allocated syntax tree. The first node added is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyntaxTree {
    nodes: Vec<SyntaxNode>,
}

impl SyntaxTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a node under `parent` (or as the root when `parent` is `None`).
    ///
    /// # Panics
    ///
    /// Panics when adding a second root or when `parent` is not in this tree.
    pub fn add(
        &mut self,
        parent: Option<NodeId>,
        kind: impl Into<String>,
        is_named: bool,
    ) -> NodeId {
        let id = NodeId(self.nodes.len());
        match parent {
            None => assert!(self.nodes.is_empty(), "tree already has a root"),
            Some(p) => self.nodes[p.0].children.push(id),
        }
        self.nodes.push(SyntaxNode {
            kind: kind.into(),
            is_named,
            children: Vec::new(),
        });
        id
    }

    pub fn root(&self) -> Option<NodeId> {
        (!self.nodes.is_empty()).then_some(NodeId(0))
    }

    pub fn node(&self, id: NodeId) -> &SyntaxNode {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn named_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_named).count()
    }

    /// Node ids in breadth-first order from the root.
    pub fn bfs(&self) -> impl Iterator<Item = NodeId> + '_ {
        let mut queue: VecDeque<NodeId> = self.root().into_iter().collect();
        std::iter::from_fn(move || {
            let id = queue.pop_front()?;
            queue.extend(self.node(id).children.iter().copied());
            Some(id)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub status: ParseStatus,
    /// Present only when `status` is `Ok`.
    pub tree: Option<SyntaxTree>,
    pub error_count: usize,
}

impl ParseOutcome {
    pub fn is_ok(&self) -> bool {
        self.status == ParseStatus::Ok
    }
}

thread_local! {
    static PARSERS: RefCell<Vec<(Language, tree_sitter::Parser)>> = const { RefCell::new(Vec::new()) };
}

/// Parses `text` with the grammar for `language`.
///
/// Syntax errors produce `ParseStatus::Failed` with a positive error count;
/// only a grammar that cannot be loaded is reported as `Err`. Each thread
/// keeps its own parser instance.
pub fn parse_source(text: &str, language: Language) -> Result<ParseOutcome, ParseError> {
    PARSERS.with(|cell| {
        let mut parsers = cell.borrow_mut();
        let idx = match parsers.iter().position(|(l, _)| *l == language) {
            Some(i) => i,
            None => {
                let mut parser = tree_sitter::Parser::new();
                parser
                    .set_language(&language.grammar())
                    .map_err(|e| ParseError::Grammar(e.to_string()))?;
                parsers.push((language, parser));
                parsers.len() - 1
            }
        };
        let parser = &mut parsers[idx].1;
        let Some(ts_tree) = parser.parse(text, None) else {
            parser.reset();
            return Ok(ParseOutcome {
                status: ParseStatus::Failed,
                tree: None,
                error_count: 1,
            });
        };
        let root = ts_tree.root_node();
        if root.has_error() {
            return Ok(ParseOutcome {
                status: ParseStatus::Failed,
                tree: None,
                error_count: count_errors(root).max(1),
            });
        }
        Ok(ParseOutcome {
            status: ParseStatus::Ok,
            tree: Some(copy_tree(root)),
            error_count: 0,
        })
    })
}

fn count_errors(root: tree_sitter::Node<'_>) -> usize {
    let mut count = 0;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_error() || node.is_missing() {
            count += 1;
        }
        if node.has_error() {
            let mut cursor = node.walk();
            stack.extend(node.children(&mut cursor));
        }
    }
    count
}

/// Copies a tree-sitter tree into the arena, dropping extras (comments).
fn copy_tree(root: tree_sitter::Node<'_>) -> SyntaxTree {
    let mut tree = SyntaxTree::new();
    let root_id = tree.add(None, root.kind(), root.is_named());
    let mut stack = vec![(root, root_id)];
    while let Some((node, id)) = stack.pop() {
        let mut cursor = node.walk();
        let mut pending = Vec::with_capacity(node.child_count() as usize);
        for child in node.children(&mut cursor) {
            if child.is_extra() {
                continue;
            }
            let child_id = tree.add(Some(id), child.kind(), child.is_named());
            pending.push((child, child_id));
        }
        stack.extend(pending.into_iter().rev());
    }
    tree
}

/// Canonical `parent→child` label.
pub fn edge_label(parent: &str, child: &str) -> String {
    let mut s = String::with_capacity(parent.len() + child.len() + EDGE_SEPARATOR.len_utf8());
    s.push_str(parent);
    s.push(EDGE_SEPARATOR);
    s.push_str(child);
    s
}

/// Histogram of parent→child kind pairs between named nodes, collected in
/// breadth-first order. Anonymous tokens neither contribute edges nor
/// connect their named descendants.
pub fn edge_histogram(tree: &SyntaxTree) -> SymbolHistogram {
    let mut hist = SymbolHistogram::new();
    for id in tree.bfs() {
        let parent = tree.node(id);
        if !parent.is_named {
            continue;
        }
        for &child_id in &parent.children {
            let child = tree.node(child_id);
            if child.is_named {
                hist.add(edge_label(&parent.kind, &child.kind));
            }
        }
    }
    hist
}

/// Extended McCabe complexity summed over every method, constructor and
/// initializer body. Each body contributes one plus its decision points;
/// decisions inside a nested body (e.g. an anonymous class method) count
/// toward that body only. A file without bodies scores 0.
pub fn cyclomatic_complexity(tree: &SyntaxTree) -> u32 {
    let Some(root) = tree.root() else {
        return 0;
    };
    let mut total = 0;
    // (node, inside a body, parent holds class members)
    let mut stack = vec![(root, false, false)];
    while let Some((id, inside_body, in_member_list)) = stack.pop() {
        let node = tree.node(id);
        let starts_body = is_body(tree, id, in_member_list);
        if starts_body || (inside_body && is_decision(tree, id)) {
            total += 1;
        }
        let inside = inside_body || starts_body;
        let members = matches!(node.kind.as_str(), "class_body" | "enum_body_declarations");
        stack.extend(node.children.iter().map(|&c| (c, inside, members)));
    }
    total
}

fn is_body(tree: &SyntaxTree, id: NodeId, in_member_list: bool) -> bool {
    let node = tree.node(id);
    match node.kind.as_str() {
        "method_declaration" => node.children.iter().any(|&c| tree.node(c).kind == "block"),
        "constructor_declaration" | "compact_constructor_declaration" | "static_initializer" => {
            true
        }
        // instance initializer
        "block" => in_member_list,
        _ => false,
    }
}

fn is_decision(tree: &SyntaxTree, id: NodeId) -> bool {
    let node = tree.node(id);
    match node.kind.as_str() {
        "if_statement"
        | "for_statement"
        | "enhanced_for_statement"
        | "while_statement"
        | "do_statement"
        | "catch_clause"
        | "ternary_expression" => true,
        "switch_label" => node
            .children
            .first()
            .is_some_and(|&c| tree.node(c).kind == "case"),
        "binary_expression" => node.children.iter().any(|&c| {
            let child = tree.node(c);
            !child.is_named && (child.kind == "&&" || child.kind == "||")
        }),
        _ => false,
    }
}

/// Lines containing at least one non-whitespace character.
pub fn line_count(text: &str) -> u32 {
    text.lines().filter(|l| !l.trim().is_empty()).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> ParseOutcome {
        parse_source(src, Language::Java).unwrap()
    }

    fn java_tree(src: &str) -> SyntaxTree {
        let outcome = parse(src);
        assert!(outcome.is_ok(), "failed to parse {src:?}");
        outcome.tree.unwrap()
    }

    fn cc(src: &str) -> u32 {
        cyclomatic_complexity(&java_tree(src))
    }

    #[test]
    fn parses_minimal_class() {
        let tree = java_tree("class A {}");
        let root = tree.node(tree.root().unwrap());
        assert_eq!(root.kind, "program");
        assert_eq!(tree.node(root.children[0]).kind, "class_declaration");
    }

    #[test]
    fn parses_empty_file() {
        let tree = java_tree("");
        let root = tree.node(tree.root().unwrap());
        assert!(root.children.iter().all(|&c| !tree.node(c).is_named));
        assert!(edge_histogram(&tree).is_empty());
    }

    #[test]
    fn unbalanced_brace_fails() {
        let outcome = parse("class A {");
        assert_eq!(outcome.status, ParseStatus::Failed);
        assert!(outcome.tree.is_none());
        assert!(outcome.error_count >= 1);
    }

    #[test]
    fn unsupported_language_name() {
        assert!(matches!(
            "cobol".parse::<Language>(),
            Err(ParseError::UnsupportedLanguage(_))
        ));
        assert_eq!(Language::from_extension(".java"), Some(Language::Java));
        assert_eq!(Language::from_extension("JAVA"), Some(Language::Java));
        assert_eq!(Language::from_extension(".kt"), None);
    }

    #[test]
    fn abstract_tree_edges() {
        let mut t = SyntaxTree::new();
        let r = t.add(None, "R", true);
        let a = t.add(Some(r), "A", true);
        t.add(Some(r), "B", true);
        t.add(Some(a), "C", true);
        t.add(Some(a), ";", false);
        let h = edge_histogram(&t);
        assert_eq!(h.count("R→A"), 1);
        assert_eq!(h.count("R→B"), 1);
        assert_eq!(h.count("A→C"), 1);
        assert_eq!(h.total(), 3);
    }

    #[test]
    fn leaf_root_has_no_edges() {
        let mut t = SyntaxTree::new();
        t.add(None, "R", true);
        assert!(edge_histogram(&t).is_empty());
    }

    #[test]
    fn bfs_visits_level_by_level() {
        let mut t = SyntaxTree::new();
        let r = t.add(None, "R", true);
        let a = t.add(Some(r), "A", true);
        let b = t.add(Some(r), "B", true);
        let c = t.add(Some(a), "C", true);
        assert_eq!(t.bfs().collect::<Vec<_>>(), vec![r, a, b, c]);
    }

    #[test]
    fn edges_ignore_identifier_names() {
        let a = java_tree("class A { int add(int x, int y) { return x + y; } }");
        let b =
            java_tree("class Zz { int plus(int first, int second) { return first + second; } }");
        assert_eq!(edge_histogram(&a), edge_histogram(&b));
    }

    #[test]
    fn comments_are_not_syntax() {
        let a = java_tree("class A { void f() {} }");
        let b = java_tree("/** doc */ class A { // note\n void f() { /* x */ } }");
        assert_eq!(edge_histogram(&a), edge_histogram(&b));
    }

    #[test]
    fn cc_examples() {
        assert_eq!(cc("class A {}"), 0);
        assert_eq!(cc("class A { void f() {} }"), 1);
        assert_eq!(cc("class A { void f(int a) { if (a > 0) { a++; } } }"), 2);
        // 1 + if + while + ternary
        assert_eq!(
            cc("class A { int f(int a) { if (a > 0) { a--; } while (a < 9) { a++; } return a > 3 ? 1 : 0; } }"),
            4
        );
    }

    #[test]
    fn cc_counts_cases_catches_and_short_circuits() {
        let src = r#"
            class A {
                int f(int a, boolean b, boolean c) {
                    switch (a) { case 1: case 2: break; default: break; }
                    try { a++; } catch (RuntimeException e) { } catch (Exception e) { }
                    if (b && c || a == 3) { return 1; }
                    for (int i = 0; i < a; i++) { }
                    for (int x : new int[] {1}) { }
                    do { a--; } while (a > 0);
                    return 0;
                }
            }
        "#;
        // 1 + 2 cases + 2 catches + if + && + || + for + enhanced for + do
        assert_eq!(cc(src), 11);
    }

    #[test]
    fn cc_counts_constructors_and_initializers() {
        let src = "class A { static { } { } A() { } abstract void g(); }";
        assert_eq!(cc(src), 3);
    }

    #[test]
    fn cc_nested_body_is_separate() {
        let src = r#"
            class A {
                Runnable f(boolean b) {
                    return new Runnable() {
                        public void run() { if (b) { } }
                    };
                }
            }
        "#;
        // outer body 1, inner run() 1 + if
        assert_eq!(cc(src), 3);
    }

    #[test]
    fn line_count_examples() {
        assert_eq!(line_count(""), 0);
        assert_eq!(line_count("a\n\nb\n"), 2);
        assert_eq!(line_count("class A {}\n"), 1);
        assert_eq!(line_count("  \n\t\n x"), 1);
    }

    #[test]
    fn deep_expression_does_not_overflow() {
        let expr = vec!["1"; 20_000].join(" + ");
        let src = format!("class A {{ int f() {{ return {expr}; }} }}");
        let tree = java_tree(&src);
        let h = edge_histogram(&tree);
        assert!(h.count("binary_expression→binary_expression") > 19_000);
    }
}
