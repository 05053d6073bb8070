use codentropy::ast::{cyclomatic_complexity, edge_histogram, parse_source};
use codentropy::{Language, SyntaxTree};
use proptest::prelude::*;

/// A method shape with two identifier slots and a numeric literal.
#[derive(Debug, Clone)]
struct MethodShape {
    template: usize,
    a: usize,
    b: usize,
    n: u32,
}

fn render_method(shape: &MethodShape, names: &dyn Fn(usize) -> String) -> String {
    let (a, b, n) = (names(shape.a), names(shape.b + 100), shape.n);
    let m = names(shape.a + 200);
    match shape.template % 4 {
        0 => format!("int {m}(int {a}) {{ int {b} = {a} * {n}; if ({b} > {n} && {a} < 0) {{ {b}--; }} return {b}; }}"),
        1 => format!("void {m}(int[] {a}) {{ for (int {b} = 0; {b} < {a}.length; {b}++) {{ {a}[{b}] += {n}; }} }}"),
        2 => format!("String {m}(String {a}) {{ String {b} = {a}.trim(); return {b}.isEmpty() ? \"{n}\" : {b}; }}"),
        _ => format!(
            "int {m}(int {a}) {{ switch ({a}) {{ case {n}: return 1; default: try {{ return {a} / {n}; }} catch (RuntimeException {b}) {{ return -1; }} }} }}"
        ),
    }
}

fn render_class(class: usize, methods: &[MethodShape], names: &dyn Fn(usize) -> String) -> String {
    let body: Vec<String> = methods.iter().map(|m| render_method(m, names)).collect();
    format!("class {} {{\n{}\n}}\n", names(class + 300), body.join("\n"))
}

fn tree(src: &str) -> SyntaxTree {
    let outcome = parse_source(src, Language::Java).unwrap();
    assert!(outcome.is_ok(), "generated source must parse: {src}");
    outcome.tree.unwrap()
}

fn shapes() -> impl Strategy<Value = Vec<MethodShape>> {
    prop::collection::vec(
        (0usize..4, 0usize..5, 0usize..5, 1u32..1000).prop_map(|(template, a, b, n)| MethodShape {
            template,
            a,
            b,
            n,
        }),
        0..6,
    )
}

fn plain(i: usize) -> String {
    format!("v{i}")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parsing_is_deterministic(methods in shapes()) {
        let src = render_class(0, &methods, &plain);
        let (a, b) = (tree(&src), tree(&src));
        prop_assert_eq!(edge_histogram(&a), edge_histogram(&b));
        prop_assert_eq!(cyclomatic_complexity(&a), cyclomatic_complexity(&b));
    }

    #[test]
    fn edges_are_blind_to_identifier_names(methods in shapes(), salt in "[a-z]{1,6}") {
        let original = render_class(0, &methods, &plain);
        let renamed = render_class(0, &methods, &|i| format!("{salt}_{i}_x"));
        prop_assert_eq!(edge_histogram(&tree(&original)), edge_histogram(&tree(&renamed)));
    }

    #[test]
    fn edge_total_is_bounded_by_named_nodes(methods in shapes()) {
        let t = tree(&render_class(0, &methods, &plain));
        prop_assert!(edge_histogram(&t).total() as usize <= t.named_count().saturating_sub(1));
    }

    #[test]
    fn concatenated_declarations_add_edge_counts(first in shapes(), second in shapes()) {
        let a = render_class(0, &first, &plain);
        let b = render_class(1, &second, &plain);
        let joined = edge_histogram(&tree(&format!("{a}{b}")));
        let (ha, hb) = (edge_histogram(&tree(&a)), edge_histogram(&tree(&b)));
        for (label, count) in joined.iter() {
            if label.starts_with("program") {
                continue;
            }
            prop_assert_eq!(*count, ha.count(label) + hb.count(label), "label {}", label);
        }
        for (label, _) in ha.iter().chain(hb.iter()) {
            prop_assert!(joined.count(label) > 0);
        }
    }
}
