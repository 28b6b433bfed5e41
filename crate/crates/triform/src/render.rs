//! Text renderings: derivation tables, bracketed phrase structure (with a
//! yield-indexed form for tangled trees), tabular dependencies, Graphviz
//! output, and the correspondence report.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::correspondence::{CorrespondenceRecord, PhraseNode};
use crate::dependency::DependencyGraph;
use crate::engine::{is_interval, Constituent, Derivation, Direction};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("bracketed form error at offset {offset}: {reason}")]
    Bracket { offset: usize, reason: String },
}

/// Rendering knobs shared by the text formats.
#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    /// Replace the angle-bracket and equivalence glyphs with ASCII.
    pub ascii: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { ascii: false }
    }
}

impl RenderOptions {
    fn open(&self) -> &'static str {
        if self.ascii {
            "<"
        } else {
            "\u{27e8}"
        }
    }

    fn close(&self) -> &'static str {
        if self.ascii {
            ">"
        } else {
            "\u{27e9}"
        }
    }

    fn equiv(&self) -> &'static str {
        if self.ascii {
            "=="
        } else {
            "\u{2261}"
        }
    }
}

/// Renders a derivation as a table: one column per token, one row per
/// state. Row `Step k` shows the live constituents after `k - 1`
/// combinations, each category printed in its head's column. The last line
/// names the final category and its head.
pub fn derivation_table(derivation: &Derivation, forms: &[String]) -> String {
    let n = forms.len();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header: Vec<String> = vec![String::new()];
    header.extend(forms.iter().cloned());
    rows.push(header);
    if derivation.steps.is_empty() {
        return forms.join("  ") + "\n";
    }
    let mut live: Vec<Constituent> = (1..=n)
        .map(|i| Constituent::leaf(i, leaf_category(derivation, i)))
        .collect();
    for (k, step) in derivation.steps.iter().enumerate() {
        let mut row = vec![format!("Step {}", k + 1)];
        row.extend((1..=n).map(|col| {
            live.iter()
                .find(|c| c.head == col)
                .map(|c| c.category.to_string())
                .unwrap_or_default()
        }));
        rows.push(row);
        live.retain(|c| {
            c.token_set != step.functor.token_set && c.token_set != step.argument.token_set
        });
        live.push(step.result.clone());
    }
    let fin = &derivation.steps.last().expect("non-empty").result;
    let widths: Vec<usize> = (0..=n)
        .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "Final: {} (head: {})",
        fin.category,
        forms[fin.head - 1]
    );
    out
}

fn leaf_category(derivation: &Derivation, position: usize) -> crate::category::Category {
    for step in &derivation.steps {
        for op in [&step.functor, &step.argument] {
            if op.token_set.len() == 1 && op.token_set.contains(&position) {
                return op.category.clone();
            }
        }
    }
    // A leaf never consumed can only be the whole derivation's input, which
    // the final result then equals.
    derivation
        .steps
        .last()
        .expect("non-empty")
        .result
        .category
        .clone()
}

/// Renders a phrase-structure tree in bracket notation. Projective trees
/// come out plainly (`[S [NP John] [VP laughed]]`); trees with a tangled
/// node are rendered with explicit yields on every node and position marks
/// on every leaf, so the structure stays unambiguous.
pub fn bracketed(tree: &PhraseNode, options: RenderOptions) -> String {
    let indexed = !tree.tangled_nodes().is_empty();
    let mut out = String::new();
    write_node(tree, indexed, options, &mut out);
    out
}

fn write_node(node: &PhraseNode, indexed: bool, options: RenderOptions, out: &mut String) {
    match node {
        PhraseNode::Leaf { position, form, .. } => {
            out.push_str(form);
            if indexed {
                let _ = write!(out, "{}{position}{}", options.open(), options.close());
            }
        }
        PhraseNode::Internal { label, children } => {
            out.push('[');
            out.push_str(label);
            if indexed {
                let ys: Vec<String> =
                    node.yield_set().iter().map(|p| p.to_string()).collect();
                let _ = write!(out, "{}{}{}", options.open(), ys.join(","), options.close());
            }
            for c in children {
                out.push(' ');
                write_node(c, indexed, options, out);
            }
            out.push(']');
        }
    }
}

/// Parses the output of [`bracketed`] back into a tree. Leaf labels are not
/// recorded in the notation, so parsed leaves carry an empty label; yields
/// on internal nodes are recomputed rather than trusted. Unindexed leaves
/// are numbered left to right.
pub fn parse_bracketed(text: &str, options: RenderOptions) -> Result<PhraseNode, RenderError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let mut next_leaf = 1usize;
    let node = parse_node(&chars, &mut pos, &mut next_leaf, options)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(RenderError::Bracket {
            offset: pos,
            reason: "trailing input".to_string(),
        });
    }
    Ok(node)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while chars.get(*pos).map_or(false, |c| c.is_whitespace()) {
        *pos += 1;
    }
}

fn parse_node(
    chars: &[char],
    pos: &mut usize,
    next_leaf: &mut usize,
    options: RenderOptions,
) -> Result<PhraseNode, RenderError> {
    skip_ws(chars, pos);
    if chars.get(*pos) == Some(&'[') {
        *pos += 1;
        let label = parse_word(chars, pos)?;
        // Discard the redundant yield annotation if present.
        let _ = parse_indices(chars, pos, options)?;
        let mut children = Vec::new();
        loop {
            skip_ws(chars, pos);
            match chars.get(*pos) {
                Some(']') => {
                    *pos += 1;
                    break;
                }
                Some(_) => children.push(parse_node(chars, pos, next_leaf, options)?),
                None => {
                    return Err(RenderError::Bracket {
                        offset: *pos,
                        reason: "expected ']'".to_string(),
                    })
                }
            }
        }
        if children.is_empty() {
            return Err(RenderError::Bracket {
                offset: *pos,
                reason: format!("node {label} has no children"),
            });
        }
        Ok(PhraseNode::Internal { label, children })
    } else {
        let form = parse_word(chars, pos)?;
        let position = match parse_indices(chars, pos, options)? {
            Some(idx) if idx.len() == 1 => *idx.iter().next().expect("one index"),
            Some(_) => {
                return Err(RenderError::Bracket {
                    offset: *pos,
                    reason: "a leaf carries exactly one position".to_string(),
                })
            }
            None => {
                let p = *next_leaf;
                *next_leaf += 1;
                p
            }
        };
        Ok(PhraseNode::Leaf {
            position,
            form,
            label: String::new(),
        })
    }
}

fn parse_word(chars: &[char], pos: &mut usize) -> Result<String, RenderError> {
    skip_ws(chars, pos);
    let start = *pos;
    while chars.get(*pos).map_or(false, |&c| {
        !c.is_whitespace() && !matches!(c, '[' | ']' | '<' | '>' | '\u{27e8}' | '\u{27e9}')
    }) {
        *pos += 1;
    }
    if start == *pos {
        return Err(RenderError::Bracket {
            offset: start,
            reason: "expected a word or label".to_string(),
        });
    }
    Ok(chars[start..*pos].iter().collect())
}

fn parse_indices(
    chars: &[char],
    pos: &mut usize,
    _options: RenderOptions,
) -> Result<Option<BTreeSet<usize>>, RenderError> {
    let open = matches!(chars.get(*pos), Some('<') | Some('\u{27e8}'));
    if !open {
        return Ok(None);
    }
    *pos += 1;
    let start = *pos;
    let mut out = BTreeSet::new();
    let mut current = String::new();
    loop {
        match chars.get(*pos) {
            Some(&c) if c.is_ascii_digit() => {
                current.push(c);
                *pos += 1;
            }
            Some(',') => {
                push_index(&mut out, &mut current, start)?;
                *pos += 1;
            }
            Some('>') | Some('\u{27e9}') => {
                push_index(&mut out, &mut current, start)?;
                *pos += 1;
                return Ok(Some(out));
            }
            _ => {
                return Err(RenderError::Bracket {
                    offset: *pos,
                    reason: "unterminated position list".to_string(),
                })
            }
        }
    }
}

fn push_index(
    out: &mut BTreeSet<usize>,
    current: &mut String,
    offset: usize,
) -> Result<(), RenderError> {
    if current.is_empty() {
        return Err(RenderError::Bracket {
            offset,
            reason: "empty position".to_string(),
        });
    }
    out.insert(current.parse().expect("digits only"));
    current.clear();
    Ok(())
}

/// Renders a dependency graph as Graphviz. Node identifiers are the forms
/// themselves when unique, otherwise suffixed with their position.
pub fn dependency_dot(g: &DependencyGraph, forms: &[String]) -> String {
    let ident = |t: usize| -> String {
        let form = &forms[t - 1];
        if forms.iter().filter(|f| *f == form).count() == 1 {
            form.clone()
        } else {
            format!("{form}#{t}")
        }
    };
    let mut out = String::from("digraph dependencies {\n");
    for t in 1..=g.n() {
        let _ = writeln!(out, "    \"{}\";", ident(t));
    }
    for &(h, d) in g.edges() {
        let _ = writeln!(out, "    \"{}\" -> \"{}\";", ident(h), ident(d));
    }
    out.push_str("}\n");
    out
}

/// Renders a phrase-structure tree as Graphviz, with tangled yields kept
/// visible through the leaves' fixed left-to-right order.
pub fn phrase_dot(tree: &PhraseNode) -> String {
    let mut out = String::from("graph phrase {\n");
    let mut counter = 0usize;
    phrase_dot_node(tree, &mut counter, &mut out);
    out.push_str("}\n");
    out
}

fn phrase_dot_node(node: &PhraseNode, counter: &mut usize, out: &mut String) -> String {
    let id = format!("n{counter}");
    *counter += 1;
    match node {
        PhraseNode::Leaf { form, position, .. } => {
            let _ = writeln!(out, "    {id} [label=\"{form}\", ord={position}];");
        }
        PhraseNode::Internal { label, children } => {
            let _ = writeln!(out, "    {id} [label=\"{label}\", shape=box];");
            for c in children {
                let cid = phrase_dot_node(c, counter, out);
                let _ = writeln!(out, "    {id} -- {cid};");
            }
        }
    }
    id
}

/// Renders one correspondence record as an equivalence line, for example
/// `V2(N2*) ≡ N2\V2`. Exceptional records are prefixed with `! `.
pub fn correspondence_line(r: &CorrespondenceRecord, options: RenderOptions) -> String {
    let inner = if r.dependent < r.head {
        format!("{}*", r.dependent_label)
    } else {
        format!("*{}", r.dependent_label)
    };
    let rhs = match r.direction {
        Direction::Forward => format!("{}/{}", r.functor_label, r.argument_label),
        Direction::Backward => format!("{}\\{}", r.argument_label, r.functor_label),
    };
    let bang = if r.exceptional { "! " } else { "" };
    format!(
        "{bang}{}({inner}) {} {rhs}",
        r.head_label,
        options.equiv()
    )
}

/// The full correspondence report, one line per step.
pub fn correspondence_report(records: &[CorrespondenceRecord], options: RenderOptions) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "Step {}: {}", r.step_no, correspondence_line(r, options));
    }
    out
}

/// Tabular dependency output from parallel form and POS slices.
pub fn write_tabular_for(g: &DependencyGraph, forms: &[String], pos: &[String]) -> String {
    let words: Vec<(String, String)> = forms
        .iter()
        .cloned()
        .zip(pos.iter().cloned())
        .collect();
    crate::dependency::write_tabular(g, &words)
}

/// True when the tree needs the yield-indexed bracket form.
pub fn needs_indices(tree: &PhraseNode) -> bool {
    !tree.tangled_nodes().is_empty() || !is_interval(&tree.yield_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::GrammarSignature;
    use crate::correspondence::{cg_to_psg, correspondence_records, ProjectionMap};
    use crate::corpus::by_id;
    use crate::engine::replay;

    fn tree_for(id: &str) -> (PhraseNode, Vec<String>) {
        let item = by_id(id).unwrap();
        let cats: Vec<_> = item
            .entry
            .sentence
            .tokens
            .iter()
            .map(|t| t.category.clone())
            .collect();
        let d = replay(&cats, &item.entry.steps, true).unwrap();
        let tree = cg_to_psg(
            &d,
            &item.entry.sentence.forms(),
            &item.entry.sentence.pos_labels(),
            &ProjectionMap::default(),
            "S",
        )
        .unwrap();
        (tree, item.entry.sentence.forms())
    }

    #[test]
    fn projective_tree_brackets_plainly() {
        let (tree, _) = tree_for("ex9-english");
        let text = bracketed(&tree, RenderOptions::default());
        assert_eq!(
            text,
            "[S [NP John] [VP thinks [VP [NP Bill] laughed]]]"
        );
    }

    #[test]
    fn tangled_tree_brackets_with_yields() {
        let (tree, _) = tree_for("ex11-croatian");
        let text = bracketed(&tree, RenderOptions { ascii: true });
        assert!(text.starts_with("[S<1,2,3,4>"));
        assert!(text.contains("[NP<1,3>"));
        assert!(text.contains("u\u{10d}ionica<3>"));
    }

    #[test]
    fn bracket_round_trip_projective() {
        let (tree, _) = tree_for("ex9-english");
        let text = bracketed(&tree, RenderOptions::default());
        let back = parse_bracketed(&text, RenderOptions::default()).unwrap();
        assert_eq!(back.yield_set(), tree.yield_set());
        assert_eq!(bracketed(&back, RenderOptions::default()), text);
    }

    #[test]
    fn bracket_round_trip_tangled() {
        for id in ["ex10-german", "ex11-croatian", "ex12-kalkatungu", "ex7-kwakwala"] {
            for ascii in [false, true] {
                let options = RenderOptions { ascii };
                let (tree, _) = tree_for(id);
                let text = bracketed(&tree, options);
                let back = parse_bracketed(&text, options).unwrap();
                assert_eq!(bracketed(&back, options), text, "{id}");
                let tangled: Vec<_> =
                    back.tangled_nodes().into_iter().map(|(_, y)| y).collect();
                let want: Vec<_> =
                    tree.tangled_nodes().into_iter().map(|(_, y)| y).collect();
                assert_eq!(tangled, want, "{id}");
            }
        }
    }

    #[test]
    fn parse_bracketed_rejects_garbage() {
        assert!(parse_bracketed("[S", RenderOptions::default()).is_err());
        assert!(parse_bracketed("[S ]", RenderOptions::default()).is_err());
        assert!(parse_bracketed("[S x] y", RenderOptions::default()).is_err());
    }

    #[test]
    fn derivation_table_shows_header_steps_and_final() {
        let item = by_id("ex9-english").unwrap();
        let cats: Vec<_> = item
            .entry
            .sentence
            .tokens
            .iter()
            .map(|t| t.category.clone())
            .collect();
        let d = replay(&cats, &item.entry.steps, true).unwrap();
        let table = derivation_table(&d, &item.entry.sentence.forms());
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[0].contains("John") && lines[0].contains("laughed"));
        assert!(lines[1].starts_with("Step 1"));
        assert!(lines[1].contains("(N\\S)/S"));
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("Final: S (head: thinks)"));
    }

    #[test]
    fn dependency_dot_names_forms() {
        let item = by_id("ex11-croatian").unwrap();
        let g = crate::dependency::validate(
            item.entry.sentence.len(),
            &item.entry.sentence.gold_edges(),
            item.entry.sentence.gold_root().unwrap(),
        )
        .unwrap();
        let dot = dependency_dot(&g, &item.entry.sentence.forms());
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"je\" -> \"u\u{10d}ionica\""));
        assert!(dot.contains("\"u\u{10d}ionica\" -> \"Na\u{161}a\""));
    }

    #[test]
    fn dependency_dot_disambiguates_repeated_forms() {
        let sig = GrammarSignature::default_ns();
        let edges = std::collections::BTreeSet::from([(1, 2), (1, 3)]);
        let g = crate::dependency::validate(3, &edges, 1).unwrap();
        let forms = vec!["buffalo".to_string(), "x".to_string(), "buffalo".to_string()];
        let dot = dependency_dot(&g, &forms);
        assert!(dot.contains("\"buffalo#1\" -> \"buffalo#3\""));
        let _ = sig;
    }

    #[test]
    fn report_marks_exceptional_lines() {
        let item = by_id("ex12-kalkatungu").unwrap();
        let cats: Vec<_> = item
            .entry
            .sentence
            .tokens
            .iter()
            .map(|t| t.category.clone())
            .collect();
        let d = replay(&cats, &item.entry.steps, true).unwrap();
        let recs = correspondence_records(&d, &item.entry.sentence.pos_labels());
        let report = correspondence_report(&recs, RenderOptions { ascii: true });
        let lines: Vec<&str> = report.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "Step 2: ! V(*N2) == V/Det2");
        assert_eq!(lines[0], "Step 1: N2(*Det2) == N2\\Det2");
    }

    #[test]
    fn phrase_dot_contains_all_leaves() {
        let (tree, forms) = tree_for("ex10-german");
        let dot = phrase_dot(&tree);
        for f in &forms {
            assert!(dot.contains(&format!("label=\"{f}\"")), "{f}");
        }
        assert!(dot.contains("shape=box"));
    }
}
