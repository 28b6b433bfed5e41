//! Dependency trees: validation, delta valuation, projectivity, rule
//! conformance, and dependency-constituent enumeration.
//!
//! Tokens are 1-based positions. Edges run head -> dependent; exactly one
//! token is the root.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lexicon::DependencyRule;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DependencyError {
    #[error("token index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("token {0} has multiple heads")]
    MultipleHeads(usize),
    #[error("multiple roots: tokens {0:?} have no head")]
    MultipleRoots(Vec<usize>),
    #[error("no root: every token has a head")]
    NoRoot,
    #[error("cycle involving token {0}")]
    Cycle(usize),
    #[error("graph is disconnected: token {0} is not reachable from the root")]
    Disconnected(usize),
    #[error("declared root {declared} does not match computed root {computed}")]
    RootMismatch { declared: usize, computed: usize },
    #[error("self-dependency at token {0}")]
    SelfEdge(usize),
    #[error("refusing constituent enumeration for n={0} > {1} tokens")]
    TooLarge(usize, usize),
    #[error("tabular format error at line {line}: {reason}")]
    Format { line: usize, reason: String },
}

/// A validated rooted dependency tree over token positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    root: usize,
}

/// Per-token valuation; strictly increases from head to dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaValuation {
    values: Vec<u64>,
}

/// Result of the projectivity analysis.
///
/// `crossings` lists pairs of crossing edges, where the projection of the
/// root is included as the virtual edge `(0, root)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    pub projective: bool,
    pub crossings: BTreeSet<((usize, usize), (usize, usize))>,
}

const MAX_CONSTITUENT_TOKENS: usize = 20;

impl DependencyGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Head of a token, or `None` for the root.
    pub fn head_of(&self, token: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|&&(_, d)| d == token)
            .map(|&(h, _)| h)
    }

    /// Dependents of a head in linear order.
    pub fn dependents_of(&self, head: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(h, _)| h == head)
            .map(|&(_, d)| d)
            .collect()
    }

    /// All tokens dominated by `token`, including itself.
    pub fn descendants_of(&self, token: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![token];
        while let Some(t) = stack.pop() {
            if out.insert(t) {
                stack.extend(self.dependents_of(t));
            }
        }
        out
    }
}

/// Checks the tree invariants and returns the validated graph.
///
/// Each failure mode is reported distinctly: a token with two heads, a
/// missing or duplicated root, a cycle, or a disconnected token.
pub fn validate(
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    root: usize,
) -> Result<DependencyGraph, DependencyError> {
    if root < 1 || root > n {
        return Err(DependencyError::IndexOutOfRange(root, n));
    }
    let mut head: BTreeMap<usize, usize> = BTreeMap::new();
    for &(h, d) in edges {
        for t in [h, d] {
            if t < 1 || t > n {
                return Err(DependencyError::IndexOutOfRange(t, n));
            }
        }
        if h == d {
            return Err(DependencyError::SelfEdge(h));
        }
        if head.insert(d, h).is_some() {
            return Err(DependencyError::MultipleHeads(d));
        }
    }
    let headless: Vec<usize> = (1..=n).filter(|t| !head.contains_key(t)).collect();
    match headless.as_slice() {
        [] => return Err(DependencyError::NoRoot),
        [r] => {
            if *r != root {
                return Err(DependencyError::RootMismatch {
                    declared: root,
                    computed: *r,
                });
            }
        }
        many => return Err(DependencyError::MultipleRoots(many.to_vec())),
    }
    // Every non-root token has exactly one head, so a cycle exists iff some
    // token never reaches the root by following heads.
    for start in 1..=n {
        let mut seen = BTreeSet::new();
        let mut t = start;
        while t != root {
            if !seen.insert(t) {
                return Err(DependencyError::Cycle(t));
            }
            t = head[&t];
        }
    }
    let graph = DependencyGraph {
        n,
        edges: edges.clone(),
        root,
    };
    let reach = graph.descendants_of(root);
    if let Some(missing) = (1..=n).find(|t| !reach.contains(t)) {
        return Err(DependencyError::Disconnected(missing));
    }
    Ok(graph)
}

/// Depth-from-root valuation, shifted by `offset` (0 by default; pass 1 to
/// start counting at the top with 1).
pub fn delta(g: &DependencyGraph, offset: u64) -> DeltaValuation {
    let mut values = vec![0u64; g.n + 1];
    let mut stack = vec![(g.root, offset)];
    while let Some((t, v)) = stack.pop() {
        values[t] = v;
        for d in g.dependents_of(t) {
            stack.push((d, v + 1));
        }
    }
    DeltaValuation { values }
}

impl DeltaValuation {
    pub fn value(&self, token: usize) -> u64 {
        self.values[token]
    }
}

/// An edge `(h, d)` is projective iff every token strictly between `h` and
/// `d` is a descendant of `h`. The crossing list pairs up edges whose spans
/// properly interleave, treating the root's projection as the virtual edge
/// `(0, root)`.
pub fn projectivity(g: &DependencyGraph) -> CrossingReport {
    let mut projective = true;
    for &(h, d) in g.edges() {
        let (lo, hi) = (h.min(d), h.max(d));
        let desc = g.descendants_of(h);
        if ((lo + 1)..hi).any(|t| !desc.contains(&t)) {
            projective = false;
            break;
        }
    }
    let mut all_edges: Vec<(usize, usize)> = g.edges().iter().copied().collect();
    all_edges.push((0, g.root));
    let mut crossings = BTreeSet::new();
    for (i, &e1) in all_edges.iter().enumerate() {
        for &e2 in &all_edges[i + 1..] {
            if spans_cross(e1, e2) {
                let (a, b) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
                crossings.insert((a, b));
            }
        }
    }
    CrossingReport {
        projective,
        crossings,
    }
}

fn spans_cross(e1: (usize, usize), e2: (usize, usize)) -> bool {
    let (a, b) = (e1.0.min(e1.1), e1.0.max(e1.1));
    let (c, d) = (e2.0.min(e2.1), e2.0.max(e2.1));
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// The first token that violates the rule set, with the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub token: usize,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

/// Checks every token's left/right dependent label sequences against the
/// dependency rule schemas. Leaves must be licensed by an empty rule.
pub fn conforms(
    g: &DependencyGraph,
    pos: &[String],
    rules: &[DependencyRule],
) -> Result<(), RuleViolation> {
    assert_eq!(pos.len(), g.n(), "one POS label per token");
    for t in 1..=g.n() {
        let deps = g.dependents_of(t);
        let left: Vec<String> = deps
            .iter()
            .filter(|&&d| d < t)
            .map(|&d| pos[d - 1].clone())
            .collect();
        let right: Vec<String> = deps
            .iter()
            .filter(|&&d| d > t)
            .map(|&d| pos[d - 1].clone())
            .collect();
        let licensed = rules.iter().any(|r| {
            r.head_label == pos[t - 1] && r.left_deps == left && r.right_deps == right
        });
        if !licensed {
            return Err(RuleViolation {
                token: t,
                left,
                right,
            });
        }
    }
    Ok(())
}

/// Enumerates every connected subgraph of the tree as a token set, flagged
/// continuous when the set is an interval of positions.
pub fn dependency_constituents(
    g: &DependencyGraph,
) -> Result<BTreeSet<(BTreeSet<usize>, bool)>, DependencyError> {
    if g.n() > MAX_CONSTITUENT_TOKENS {
        return Err(DependencyError::TooLarge(g.n(), MAX_CONSTITUENT_TOKENS));
    }
    // With n capped at 20 a subset sweep is affordable and leaves no room
    // for enumeration bugs. A nonempty set is connected iff its members
    // minus the shallowest one all have their head inside the set.
    let n = g.n();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1u32 << n) {
        let set: BTreeSet<usize> = (1..=n).filter(|t| mask & (1 << (t - 1)) != 0).collect();
        let headless = set
            .iter()
            .filter(|&&t| match g.head_of(t) {
                Some(h) => !set.contains(&h),
                None => true,
            })
            .count();
        if headless == 1 {
            let continuous = is_interval(&set);
            out.insert((set, continuous));
        }
    }
    Ok(out)
}

fn is_interval(set: &BTreeSet<usize>) -> bool {
    match (set.iter().next(), set.iter().next_back()) {
        (Some(&lo), Some(&hi)) => hi - lo + 1 == set.len(),
        _ => false,
    }
}

/// Reads the tabular dependency format: one `INDEX<TAB>FORM<TAB>POS<TAB>HEAD`
/// line per token, HEAD 0 for the root; a blank line terminates the sentence.
pub fn read_tabular(
    text: &str,
) -> Result<(DependencyGraph, Vec<(String, String)>), DependencyError> {
    let mut rows: Vec<(usize, String, String, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            break;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(DependencyError::Format {
                line: lineno + 1,
                reason: format!("expected 4 tab-separated fields, got {}", fields.len()),
            });
        }
        let index: usize = fields[0].parse().map_err(|_| DependencyError::Format {
            line: lineno + 1,
            reason: format!("bad index {:?}", fields[0]),
        })?;
        let head: usize = fields[3].parse().map_err(|_| DependencyError::Format {
            line: lineno + 1,
            reason: format!("bad head {:?}", fields[3]),
        })?;
        if index != rows.len() + 1 {
            return Err(DependencyError::Format {
                line: lineno + 1,
                reason: format!("expected index {}, got {}", rows.len() + 1, index),
            });
        }
        rows.push((index, fields[1].to_string(), fields[2].to_string(), head));
    }
    let n = rows.len();
    let mut edges = BTreeSet::new();
    let mut root = None;
    for &(index, _, _, head) in &rows {
        if head == 0 {
            root = Some(index);
        } else {
            edges.insert((head, index));
        }
    }
    let root = root.ok_or(DependencyError::NoRoot)?;
    let graph = validate(n, &edges, root)?;
    let words = rows.into_iter().map(|(_, f, p, _)| (f, p)).collect();
    Ok((graph, words))
}

/// Writes the tabular dependency format; inverse of [`read_tabular`].
pub fn write_tabular(g: &DependencyGraph, words: &[(String, String)]) -> String {
    let mut out = String::new();
    for (i, (form, pos)) in words.iter().enumerate() {
        let token = i + 1;
        let head = g.head_of(token).unwrap_or(0);
        out.push_str(&format!("{token}\t{form}\t{pos}\t{head}\n"));
    }
    out.push('\n');
    out
}
