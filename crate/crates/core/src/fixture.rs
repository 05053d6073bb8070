//! Generated git repositories: the labelled calculator history used for
//! calibration, and larger synthetic histories for performance runs.
//!
//! Both generators are deterministic: fixed author, fixed timestamps, and
//! seeded randomness, so the same call always yields the same commit hashes.

use std::collections::BTreeMap;
use std::path::Path;

use git2::{Oid, Repository, Signature, Time};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::analytics::Expectation;
use crate::error::FixtureError;

const AUTHOR: &str = "Fixture Author";
const EMAIL: &str = "fixture@example.com";
const EPOCH: i64 = 1_600_000_000;

/// Writes a linear history one commit at a time into a fresh repository.
pub struct RepoBuilder {
    repo: Repository,
    files: BTreeMap<String, Oid>,
    parent: Option<Oid>,
    commits: i64,
}

impl RepoBuilder {
    /// Initializes a repository at `dir`, which must be absent or empty.
    pub fn init(dir: &Path) -> Result<Self, FixtureError> {
        if dir.exists() && std::fs::read_dir(dir)?.next().is_some() {
            return Err(FixtureError::NotEmpty(dir.to_path_buf()));
        }
        std::fs::create_dir_all(dir)?;
        let repo = Repository::init(dir)?;
        repo.set_head("refs/heads/main")?;
        Ok(Self {
            repo,
            files: BTreeMap::new(),
            parent: None,
            commits: 0,
        })
    }

    pub fn write(&mut self, path: &str, content: &str) -> Result<(), FixtureError> {
        let oid = self.repo.blob(content.as_bytes())?;
        self.files.insert(path.to_string(), oid);
        Ok(())
    }

    pub fn remove(&mut self, path: &str) {
        self.files.remove(path);
    }

    /// Makes the tracked files exactly `files`.
    pub fn sync(&mut self, files: &BTreeMap<String, String>) -> Result<(), FixtureError> {
        self.files.retain(|path, _| files.contains_key(path));
        for (path, content) in files {
            self.write(path, content)?;
        }
        Ok(())
    }

    /// Commits the current file set; commits are one hour apart.
    pub fn commit(&mut self, message: &str) -> Result<Oid, FixtureError> {
        let entries: Vec<(&str, Oid)> = self.files.iter().map(|(p, o)| (p.as_str(), *o)).collect();
        let tree_id = build_tree(&self.repo, &entries)?;
        let tree = self.repo.find_tree(tree_id)?;
        let time = Time::new(EPOCH + self.commits * 3600, 0);
        let signature = Signature::new(AUTHOR, EMAIL, &time)?;
        let parents = match self.parent {
            Some(oid) => vec![self.repo.find_commit(oid)?],
            None => Vec::new(),
        };
        let parent_refs: Vec<&git2::Commit<'_>> = parents.iter().collect();
        let oid = self.repo.commit(
            Some("HEAD"),
            &signature,
            &signature,
            message,
            &tree,
            &parent_refs,
        )?;
        self.parent = Some(oid);
        self.commits += 1;
        Ok(oid)
    }

    /// Checks the final tree out into the working directory.
    pub fn finish(self) -> Result<(), FixtureError> {
        if self.parent.is_some() {
            self.repo
                .checkout_head(Some(git2::build::CheckoutBuilder::new().force()))?;
        }
        Ok(())
    }
}

fn build_tree(repo: &Repository, entries: &[(&str, Oid)]) -> Result<Oid, git2::Error> {
    let mut builder = repo.treebuilder(None)?;
    let mut subdirs: BTreeMap<&str, Vec<(&str, Oid)>> = BTreeMap::new();
    for &(path, oid) in entries {
        match path.split_once('/') {
            Some((dir, rest)) => subdirs.entry(dir).or_default().push((rest, oid)),
            None => {
                builder.insert(path, oid, 0o100644)?;
            }
        }
    }
    for (dir, children) in subdirs {
        let child = build_tree(repo, &children)?;
        builder.insert(dir, child, 0o040000)?;
    }
    builder.write()
}

// ---------------------------------------------------------------------------
// Calculator history

struct OperationSpec {
    class: &'static str,
    symbol: &'static str,
    body: &'static str,
}

const POWER_LOOP: &str = "int exponent = (int) right;
double product = 1;
for (int step = 0; step < exponent; step++) {
    product *= left;
}
return product;";

const OPERATIONS: &[OperationSpec] = &[
    OperationSpec {
        class: "Add",
        symbol: "+",
        body: "return left + right;",
    },
    OperationSpec {
        class: "Subtract",
        symbol: "-",
        body: "return left - right;",
    },
    OperationSpec {
        class: "Multiply",
        symbol: "*",
        body: "return left * right;",
    },
    OperationSpec {
        class: "Divide",
        symbol: "/",
        body: "if (right == 0) {
    throw new ArithmeticException(\"divide by zero\");
}
return left / right;",
    },
    OperationSpec {
        class: "Modulo",
        symbol: "%",
        body: "if (right == 0) {
    throw new ArithmeticException(\"modulo by zero\");
}
return left % right;",
    },
    OperationSpec {
        class: "Power",
        symbol: "^",
        body: POWER_LOOP,
    },
    OperationSpec {
        class: "Maximum",
        symbol: "max",
        body: "return Math.max(left, right);",
    },
    OperationSpec {
        class: "Minimum",
        symbol: "min",
        body: "return Math.min(left, right);",
    },
    OperationSpec {
        class: "Hypotenuse",
        symbol: "hypot",
        body: "return Math.sqrt(left * left + right * right);",
    },
];

const STRING_METHODS: &[(&str, &str)] = &[
    (
        "reverse",
        "public String reverse(String text) {
    return new StringBuilder(text).reverse().toString();
}",
    ),
    (
        "countVowels",
        "public int countVowels(String text) {
    int count = 0;
    for (char letter : text.toLowerCase().toCharArray()) {
        if (\"aeiou\".indexOf(letter) >= 0) {
            count++;
        }
    }
    return count;
}",
    ),
    (
        "capitalize",
        "public String capitalize(String text) {
    if (text.isEmpty()) {
        return text;
    }
    char[] letters = text.toCharArray();
    letters[0] = Character.toUpperCase(letters[0]);
    return new String(letters);
}",
    ),
];

const OPERATION_INTERFACE: &str = "package calculator;

public interface Operation {
    String symbol();

    double apply(double left, double right);
}
";

const CALCULATOR_TEST: &str = "package calculator;

public class CalculatorTest {
    public static void main(String[] args) {
        Calculator calculator = new Calculator();
        check(calculator.compute(\"+\", 2, 3) == 5, \"sum of small integers\");
        check(calculator.compute(\"*\", 4, 5) == 20, \"product of small integers\");
    }

    private static void check(boolean condition, String name) {
        if (!condition) {
            throw new AssertionError(name + \" failed\");
        }
    }
}
";

const HISTORY: &str = "package calculator;

import java.util.ArrayList;
import java.util.List;

public class History {
    private final List<String> entries = new ArrayList<>();

    public void record(String symbol, double left, double right, double result) {
        entries.add(left + \" \" + symbol + \" \" + right + \" = \" + result);
    }

    public List<String> entries() {
        return entries;
    }
";

const HISTORY_CLEAR: &str = "
    public void clear() {
        entries.clear();
    }
";

const README: &str = "# Calculator\n\nA small calculator with pluggable operations.\n";
const README_USAGE: &str = "# Calculator\n\nA small calculator with pluggable operations.\n\n\
Build with `javac` and call `Calculator.compute(symbol, left, right)`.\n";

/// Snapshot of the calculator project; each commit edits one field.
#[derive(Clone)]
struct Calculator {
    dir: &'static str,
    operations: Vec<&'static str>,
    power_loop: bool,
    /// String helpers living (out of place) in `Calculator.java`.
    embedded: Vec<&'static str>,
    string_ops: Option<Vec<&'static str>>,
    tabbed: Vec<&'static str>,
    compute_first: bool,
    readme: Option<&'static str>,
    gitignore: bool,
    test: bool,
    history: Option<bool>,
    readme_path: &'static str,
}

fn indent(block: &str, level: usize) -> String {
    let pad = "    ".repeat(level);
    block
        .lines()
        .map(|l| {
            if l.is_empty() {
                String::new()
            } else {
                format!("{pad}{l}")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Re-indents with tabs: formatting only, no token or syntax change.
fn tabify(source: &str) -> String {
    source
        .lines()
        .map(|line| {
            let spaces = line.len() - line.trim_start_matches(' ').len();
            format!("{}{}", "\t".repeat(spaces / 4), &line[spaces / 4 * 4..])
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

fn string_method(name: &str) -> &'static str {
    STRING_METHODS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, body)| *body)
        .expect("known string method")
}

impl Calculator {
    fn new() -> Self {
        Self {
            dir: "",
            operations: vec!["Add"],
            power_loop: true,
            embedded: Vec::new(),
            string_ops: None,
            tabbed: Vec::new(),
            compute_first: false,
            readme: None,
            gitignore: false,
            test: false,
            history: None,
            readme_path: "README.md",
        }
    }

    fn operation_source(&self, class: &str) -> String {
        let spec = OPERATIONS
            .iter()
            .find(|s| s.class == class)
            .expect("known operation");
        let body = if class == "Power" && !self.power_loop {
            "return Math.pow(left, right);"
        } else {
            spec.body
        };
        format!(
            "package calculator;

public class {class} implements Operation {{
    @Override
    public String symbol() {{
        return \"{}\";
    }}

    @Override
    public double apply(double left, double right) {{
{}
    }}
}}
",
            spec.symbol,
            indent(body, 2)
        )
    }

    fn calculator_source(&self) -> String {
        let registrations: Vec<String> = self
            .operations
            .iter()
            .map(|class| format!("        register(new {class}());"))
            .collect();
        let register = "    public void register(Operation operation) {
        operations.put(operation.symbol(), operation);
    }";
        let compute = "    public double compute(String symbol, double left, double right) {
        Operation operation = operations.get(symbol);
        if (operation == null) {
            throw new IllegalArgumentException(\"unknown operation \" + symbol);
        }
        return operation.apply(left, right);
    }";
        let mut methods = if self.compute_first {
            vec![compute.to_string(), register.to_string()]
        } else {
            vec![register.to_string(), compute.to_string()]
        };
        methods.extend(
            self.embedded
                .iter()
                .map(|name| indent(string_method(name), 1)),
        );
        format!(
            "package calculator;

import java.util.LinkedHashMap;
import java.util.Map;

public class Calculator {{
    private final Map<String, Operation> operations = new LinkedHashMap<>();

    public Calculator() {{
{}
    }}

{}
}}
",
            registrations.join("\n"),
            methods.join("\n\n")
        )
    }

    fn string_ops_source(methods: &[&str]) -> String {
        let bodies: Vec<String> = methods
            .iter()
            .map(|name| indent(string_method(name), 1))
            .collect();
        format!(
            "package calculator;\n\npublic class StringOps {{\n{}\n}}\n",
            bodies.join("\n\n")
        )
    }

    fn files(&self) -> BTreeMap<String, String> {
        let mut java: Vec<(String, String)> = vec![
            ("Operation".into(), OPERATION_INTERFACE.to_string()),
            ("Calculator".into(), self.calculator_source()),
        ];
        java.extend(
            self.operations
                .iter()
                .map(|c| (c.to_string(), self.operation_source(c))),
        );
        if let Some(methods) = &self.string_ops {
            java.push(("StringOps".into(), Self::string_ops_source(methods)));
        }
        if self.test {
            java.push(("CalculatorTest".into(), CALCULATOR_TEST.to_string()));
        }
        if let Some(clear) = self.history {
            let clear = if clear { HISTORY_CLEAR } else { "" };
            java.push(("History".into(), format!("{HISTORY}{clear}}}\n")));
        }
        let mut files: BTreeMap<String, String> = java
            .into_iter()
            .map(|(class, source)| {
                let source = if self.tabbed.contains(&class.as_str()) {
                    tabify(&source)
                } else {
                    source
                };
                (format!("{}{class}.java", self.dir), source)
            })
            .collect();
        if let Some(readme) = self.readme {
            files.insert(self.readme_path.into(), readme.to_string());
        }
        if self.gitignore {
            files.insert(".gitignore".into(), "*.class\nout/\n".into());
        }
        files
    }
}

type Step = (&'static str, Expectation, fn(&mut Calculator));

fn calculator_steps() -> Vec<Step> {
    use Expectation::{Decrease as Dec, Increase as Inc, NoChange as Same};
    vec![
        ("Start calculator with addition", Inc, |_| {}),
        ("Add subtraction", Inc, |c| c.operations.push("Subtract")),
        ("Add multiplication", Inc, |c| c.operations.push("Multiply")),
        ("Add README", Same, |c| c.readme = Some(README)),
        ("Add division", Inc, |c| c.operations.push("Divide")),
        ("Indent Calculator with tabs", Same, |c| {
            c.tabbed.push("Calculator")
        }),
        ("Add modulo", Inc, |c| c.operations.push("Modulo")),
        ("Add power", Inc, |c| c.operations.push("Power")),
        ("Simplify power with Math.pow", Dec, |c| {
            c.power_loop = false
        }),
        ("Move sources into src/calculator", Same, |c| {
            c.dir = "src/calculator/"
        }),
        ("Add maximum", Inc, |c| c.operations.push("Maximum")),
        ("Move README into docs", Same, |c| {
            c.readme_path = "docs/README.md"
        }),
        ("Put compute before register", Same, |c| {
            c.compute_first = true
        }),
        ("Add string reversal to Calculator", Inc, |c| {
            c.embedded.push("reverse")
        }),
        ("Add vowel counting to Calculator", Inc, |c| {
            c.embedded.push("countVowels")
        }),
        ("Ignore class files", Same, |c| c.gitignore = true),
        ("Copy string helpers into StringOps", Inc, |c| {
            c.string_ops = Some(c.embedded.clone())
        }),
        ("Remove string helpers from Calculator", Dec, |c| {
            c.embedded.clear()
        }),
        ("Drop modulo", Dec, |c| {
            c.operations.retain(|o| *o != "Modulo")
        }),
        ("Indent Power with tabs", Same, |c| c.tabbed.push("Power")),
        ("Add calculator smoke test", Inc, |c| c.test = true),
        ("Remove smoke test", Dec, |c| c.test = false),
        ("Add hypotenuse", Inc, |c| c.operations.push("Hypotenuse")),
        ("Drop hypotenuse", Dec, |c| {
            c.operations.retain(|o| *o != "Hypotenuse")
        }),
        ("Document usage in README", Same, |c| {
            c.readme = Some(README_USAGE)
        }),
        ("Add capitalize to StringOps", Inc, |c| {
            c.string_ops
                .as_mut()
                .expect("StringOps exists")
                .push("capitalize")
        }),
        ("Drop vowel counting", Dec, |c| {
            c.string_ops
                .as_mut()
                .expect("StringOps exists")
                .retain(|m| *m != "countVowels")
        }),
        ("Reorder StringOps methods", Same, |c| {
            c.string_ops.as_mut().expect("StringOps exists").reverse()
        }),
        ("Add calculation history", Inc, |c| c.history = Some(true)),
        ("Drop history clearing", Dec, |c| c.history = Some(false)),
        ("Drop maximum", Dec, |c| {
            c.operations.retain(|o| *o != "Maximum")
        }),
    ]
}

/// Number of commits in the calculator history.
pub fn calculator_commit_count() -> usize {
    calculator_steps().len()
}

/// Builds the calculator history at `dir` and returns each commit's hash with
/// its expected entropy direction, oldest first.
pub fn generate_calculator(dir: &Path) -> Result<Vec<(String, Expectation)>, FixtureError> {
    let mut builder = RepoBuilder::init(dir)?;
    let mut state = Calculator::new();
    let mut labels = Vec::new();
    for (message, label, edit) in calculator_steps() {
        edit(&mut state);
        builder.sync(&state.files())?;
        let oid = builder.commit(message)?;
        labels.push((oid.to_string(), label));
    }
    builder.finish()?;
    Ok(labels)
}

// ---------------------------------------------------------------------------
// Synthetic history

/// Shape of a synthetic history.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub commits: usize,
    pub files: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    /// 500 commits growing to about 200 files and 50,000 lines.
    fn default() -> Self {
        Self {
            commits: 500,
            files: 200,
            seed: 7,
        }
    }
}

const WORDS: &[&str] = &[
    "account", "buffer", "cache", "delta", "event", "factor", "graph", "header", "index",
    "journal", "key", "ledger", "matrix", "node", "offset", "packet", "query", "record", "sample",
    "token", "user", "value", "window", "batch", "channel", "digest", "entry", "frame", "group",
    "limit", "metric", "order", "price", "queue", "range", "score", "total", "unit", "vector",
    "weight",
];

struct SyntheticFile {
    path: String,
    class: String,
    methods: Vec<String>,
}

impl SyntheticFile {
    fn render(&self) -> String {
        let package = self
            .path
            .rsplit_once('/')
            .map_or("", |(dir, _)| dir)
            .replace('/', ".");
        format!(
            "package {package};\n\nimport java.util.ArrayList;\nimport java.util.List;\n\npublic class {} {{\n    private final List<String> log = new ArrayList<>();\n    private int state;\n\n{}\n}}\n",
            self.class,
            self.methods.join("\n\n")
        )
    }
}

fn camel(rng: &mut StdRng, parts: usize, upper_first: bool) -> String {
    let mut out = String::new();
    for i in 0..parts {
        let word = WORDS.choose(rng).expect("non-empty word list");
        if i == 0 && !upper_first {
            out.push_str(word);
        } else {
            out.push_str(&word[..1].to_uppercase());
            out.push_str(&word[1..]);
        }
    }
    out
}

fn synthetic_method(rng: &mut StdRng) -> String {
    let name = camel(rng, 2, false);
    let a = camel(rng, 1, false);
    let b = camel(rng, 2, false);
    let n: u32 = rng.gen_range(2..500);
    let body = match rng.gen_range(0..5) {
        0 => format!(
            "public int {name}(int[] {a}) {{
    int {b} = {n};
    for (int i = 0; i < {a}.length; i++) {{
        if ({a}[i] > {b}) {{
            {b} += {a}[i] % {n};
        }} else {{
            {b} -= i;
        }}
    }}
    state += {b};
    return {b};
}}"
        ),
        1 => format!(
            "public String {name}(List<String> {a}) {{
    StringBuilder {b} = new StringBuilder();
    for (String item : {a}) {{
        if (item.isEmpty() || item.length() > {n}) {{
            continue;
        }}
        {b}.append(item).append(',');
    }}
    log.add({b}.toString());
    return {b}.toString();
}}"
        ),
        2 => format!(
            "public double {name}(double {a}, double {b}) {{
    double result = {a} * {n}.0;
    while (result > {b} && {b} > 0) {{
        result = result / 2 - {b};
    }}
    return result > 0 ? result : -result;
}}"
        ),
        3 => format!(
            "public int {name}(String {a}) {{
    try {{
        int {b} = Integer.parseInt({a});
        return {b} * {n};
    }} catch (NumberFormatException e) {{
        log.add(\"bad {a}: \" + {a});
        return -1;
    }}
}}"
        ),
        _ => format!(
            "public String {name}(int {a}) {{
    switch ({a} % 4) {{
        case 0:
            return \"{a} zero\";
        case 1:
            return \"{b} one\";
        case 2:
            state = {n};
            return \"two\";
        default:
            return String.valueOf({a} + state);
    }}
}}"
        ),
    };
    indent(&body, 1)
}

/// Builds a seeded synthetic Java history at `dir`.
pub fn generate_synthetic(dir: &Path, spec: SyntheticSpec) -> Result<(), FixtureError> {
    let mut rng = StdRng::seed_from_u64(spec.seed);
    let mut builder = RepoBuilder::init(dir)?;
    let mut files: Vec<SyntheticFile> = Vec::new();
    let initial = (spec.files / 20).max(1);
    // Expected new files per later commit, so the count reaches `spec.files`.
    let add_rate = (spec.files - initial.min(spec.files)) as f64
        / spec.commits.saturating_sub(1).max(1) as f64;

    let new_file = |rng: &mut StdRng, index: usize| {
        let class = format!("{}{index}", camel(rng, 2, true));
        let methods = (0..rng.gen_range(4..9))
            .map(|_| synthetic_method(rng))
            .collect();
        SyntheticFile {
            path: format!("src/gen/p{}/{class}.java", index % 10),
            class,
            methods,
        }
    };

    for c in 0..spec.commits {
        let mut touched: Vec<usize> = Vec::new();
        let adds = if c == 0 {
            initial
        } else {
            usize::from(rng.gen_bool(add_rate.fract())) + add_rate.trunc() as usize
        };
        for _ in 0..adds {
            if files.len() < spec.files {
                let file = new_file(&mut rng, files.len());
                files.push(file);
                touched.push(files.len() - 1);
            }
        }
        if c > 0 {
            for _ in 0..rng.gen_range(2..6) {
                let i = rng.gen_range(0..files.len());
                let file = &mut files[i];
                match rng.gen_range(0..10) {
                    0 if file.methods.len() > 2 => {
                        let m = rng.gen_range(0..file.methods.len());
                        file.methods.remove(m);
                    }
                    1 => {
                        let m = rng.gen_range(0..file.methods.len());
                        file.methods[m] = synthetic_method(&mut rng);
                    }
                    _ => {
                        for _ in 0..rng.gen_range(1..5) {
                            file.methods.push(synthetic_method(&mut rng));
                        }
                    }
                }
                touched.push(i);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for i in touched {
            builder.write(&files[i].path, &files[i].render())?;
        }
        builder.commit(&format!("Synthetic change {c}"))?;
    }
    builder.finish()
}
