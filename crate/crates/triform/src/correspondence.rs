//! Bridges between the three representations.
//!
//! Every application step induces one dependency edge: the edge runs from
//! the head of the step's result to the head of the other operand. Walking
//! a dependency tree back into a derivation, and projecting a derivation
//! into a phrase-structure tree, both follow from that single principle.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::category::{Atom, Category, GrammarSignature};
use crate::dependency::{validate, DependencyError, DependencyGraph};
use crate::engine::{combine, Constituent, Derivation, DerivationStep, Direction};
use crate::lexicon::GoldRule;

#[derive(Debug, Error)]
pub enum CorrespondenceError {
    #[error("no derivation order attaches all dependents of token {0}")]
    Underivable(usize),
    #[error("empty derivation has no dependency reading")]
    EmptyDerivation,
    #[error(transparent)]
    Dependency(#[from] DependencyError),
    #[error("round trip diverged: {0}")]
    RoundTrip(String),
}

/// One correspondence line: the dependency edge a step induces, together
/// with the labels on both sides of the equivalence.
///
/// The categorial side names the parts of speech of the functor's and
/// argument's category words (the tokens whose lexical categories drive the
/// application). The dependency side names the head and dependent. The
/// record is exceptional when the two sides disagree about which tokens are
/// involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceRecord {
    pub step_no: usize,
    pub head: usize,
    pub dependent: usize,
    pub head_label: String,
    pub dependent_label: String,
    pub functor_label: String,
    pub argument_label: String,
    pub direction: Direction,
    pub exceptional: bool,
}

fn step_edge(step: &DerivationStep) -> (usize, usize) {
    let dependent = if step.result.head == step.functor.head {
        step.argument.head
    } else {
        step.functor.head
    };
    (step.result.head, dependent)
}

/// Converts a derivation into its induced dependency tree.
pub fn cg_to_dg(
    derivation: &Derivation,
    n: usize,
) -> Result<DependencyGraph, CorrespondenceError> {
    let last = derivation
        .steps
        .last()
        .ok_or(CorrespondenceError::EmptyDerivation)?;
    let edges: BTreeSet<(usize, usize)> = derivation.steps.iter().map(step_edge).collect();
    Ok(validate(n, &edges, last.result.head)?)
}

/// Produces one correspondence record per step. `pos` holds the part of
/// speech of each token, indexed by position minus one.
pub fn correspondence_records(
    derivation: &Derivation,
    pos: &[String],
) -> Vec<CorrespondenceRecord> {
    derivation
        .steps
        .iter()
        .map(|s| {
            let (head, dependent) = step_edge(s);
            let fw = s.functor.cat_word;
            let aw = s.argument.cat_word;
            let exceptional =
                BTreeSet::from([fw, aw]) != BTreeSet::from([head, dependent]);
            CorrespondenceRecord {
                step_no: s.step_no,
                head,
                dependent,
                head_label: pos[head - 1].clone(),
                dependent_label: pos[dependent - 1].clone(),
                functor_label: pos[fw - 1].clone(),
                argument_label: pos[aw - 1].clone(),
                direction: s.direction,
                exceptional,
            }
        })
        .collect()
}

fn right_then_left(g: &DependencyGraph, head: usize) -> Vec<usize> {
    let deps = g.dependents_of(head);
    let mut order: Vec<usize> = deps.iter().copied().filter(|&d| d > head).collect();
    order.sort_by(|a, b| b.cmp(a));
    let mut left: Vec<usize> = deps.into_iter().filter(|&d| d < head).collect();
    left.sort_by(|a, b| b.cmp(a));
    order.extend(left);
    order
}

/// Rebuilds a canonical derivation from a dependency tree and the lexical
/// categories of its tokens.
///
/// Each head attaches its dependents' subtrees in a fixed priority order
/// (rightward dependents farthest first, then leftward dependents nearest
/// first). A subtree whose combination is not yet licensed is set aside and
/// retried after the others; if no order succeeds the head is reported.
pub fn dg_to_cg(
    g: &DependencyGraph,
    categories: &[Category],
) -> Result<Derivation, CorrespondenceError> {
    let mut steps = Vec::new();
    let _root = build_subtree(g, g.root(), categories, &mut steps)?;
    for (i, s) in steps.iter_mut().enumerate() {
        s.step_no = i + 1;
    }
    Ok(Derivation {
        raises: Vec::new(),
        steps,
    })
}

fn build_subtree(
    g: &DependencyGraph,
    head: usize,
    categories: &[Category],
    steps: &mut Vec<DerivationStep>,
) -> Result<Constituent, CorrespondenceError> {
    let mut current = Constituent::leaf(head, categories[head - 1].clone());
    let mut pending: Vec<Constituent> = Vec::new();
    for d in right_then_left(g, head) {
        let sub = build_subtree(g, d, categories, steps)?;
        if !attach(&mut current, &sub, steps) {
            pending.push(sub);
        }
    }
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|sub| !attach(&mut current, sub, steps));
        if pending.len() == before {
            return Err(CorrespondenceError::Underivable(head));
        }
    }
    Ok(current)
}

/// Tries to combine the running constituent with a finished subtree, with
/// either side as functor. On success the step is recorded and the running
/// constituent replaced.
fn attach(current: &mut Constituent, sub: &Constituent, steps: &mut Vec<DerivationStep>) -> bool {
    let attempt = |f: &Constituent, a: &Constituent| {
        combine(f, a, true).ok().map(|(result, direction, wrapped)| DerivationStep {
            step_no: 0,
            functor: f.clone(),
            argument: a.clone(),
            direction,
            result,
            wrapped,
        })
    };
    if let Some(step) = attempt(current, sub).or_else(|| attempt(sub, current)) {
        *current = step.result.clone();
        steps.push(step);
        true
    } else {
        false
    }
}

/// Infers a lexical category for every token of a dependency tree.
///
/// `atom_map` sends each part of speech to a primitive category of the
/// signature. A leaf dependent whose mapped atom is nominal or adjectival
/// (base `N` or `A` after trailing digits are stripped) and whose head maps
/// to a nominal atom becomes a modifier, `X/X` before the head and `X\X`
/// after it, over the head's atom `X`. Every other token's category folds
/// its remaining dependents around its own atom (the sentence atom at the
/// root), slashed toward the side where the dependent subtree's category
/// word ends up.
pub fn infer_categories(
    g: &DependencyGraph,
    pos: &[String],
    atom_map: &BTreeMap<String, Atom>,
    signature: &GrammarSignature,
) -> Result<Vec<Category>, CorrespondenceError> {
    let atom_of = |t: usize| -> Atom {
        atom_map
            .get(&pos[t - 1])
            .cloned()
            .unwrap_or_else(|| signature.sentence_atom().clone())
    };
    let base = |a: &Atom| -> String {
        a.as_str()
            .trim_end_matches(|c: char| c.is_ascii_digit())
            .to_string()
    };
    let is_modifier_dep = |d: usize| -> bool {
        let Some(h) = g.head_of(d) else { return false };
        g.dependents_of(d).is_empty()
            && matches!(base(&atom_of(d)).as_str(), "N" | "A")
            && base(&atom_of(h)) == "N"
    };
    // The token whose lexical category ends up labelling the subtree of
    // `d`: the last modifier attached to `d`, or `d` itself.
    let representative = |d: usize| -> usize {
        right_then_left(g, d)
            .into_iter()
            .filter(|&m| is_modifier_dep(m))
            .last()
            .unwrap_or(d)
    };
    let mut out = Vec::with_capacity(g.n());
    for t in 1..=g.n() {
        if is_modifier_dep(t) {
            let h = g.head_of(t).expect("modifier has a head");
            let x = Category::Atom(atom_of(h));
            out.push(if t < h {
                Category::forward(x.clone(), x)
            } else {
                Category::backward(x.clone(), x)
            });
            continue;
        }
        let mut cat = if t == g.root() {
            signature.sentence_category()
        } else {
            Category::Atom(atom_of(t))
        };
        let args: Vec<usize> = right_then_left(g, t)
            .into_iter()
            .filter(|&d| !is_modifier_dep(d))
            .collect();
        // The first-attached argument carries the outermost slash.
        for &d in args.iter().rev() {
            let arg = Category::Atom(atom_of(d));
            cat = if representative(d) > t {
                Category::forward(cat, arg)
            } else {
                Category::backward(arg, cat)
            };
        }
        out.push(cat);
    }
    Ok(out)
}

/// How a part of speech shows up in phrase structure: its leaf label, its
/// phrasal projection, and whether a bare leaf projects a unary phrase when
/// it is not the head of its constituent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub leaf: String,
    pub phrasal: String,
    pub unary: bool,
}

/// Maps parts of speech to projections. Unlisted labels fall back to a
/// default: trailing digits are stripped (`N2` to `N`), `Infinitive` and
/// `Inf` become `I`, the phrasal label appends `P`, and only nominal and
/// adjectival leaves project unary phrases.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectionMap {
    overrides: BTreeMap<String, Projection>,
}

impl ProjectionMap {
    pub fn with_override(mut self, pos: &str, projection: Projection) -> Self {
        self.overrides.insert(pos.to_string(), projection);
        self
    }

    pub fn get(&self, pos: &str) -> Projection {
        if let Some(p) = self.overrides.get(pos) {
            return p.clone();
        }
        let stripped = pos.trim_end_matches(|c: char| c.is_ascii_digit());
        let leaf = match stripped {
            "Infinitive" | "Inf" => "I".to_string(),
            other => other.to_string(),
        };
        Projection {
            phrasal: format!("{leaf}P"),
            unary: matches!(leaf.as_str(), "N" | "A"),
            leaf,
        }
    }
}

/// A node of a phrase-structure tree. Yields are explicit so that tangled
/// trees (internal nodes with non-interval yields) are representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhraseNode {
    Leaf {
        position: usize,
        form: String,
        label: String,
    },
    Internal {
        label: String,
        children: Vec<PhraseNode>,
    },
}

impl PhraseNode {
    pub fn label(&self) -> &str {
        match self {
            PhraseNode::Leaf { label, .. } => label,
            PhraseNode::Internal { label, .. } => label,
        }
    }

    pub fn yield_set(&self) -> BTreeSet<usize> {
        match self {
            PhraseNode::Leaf { position, .. } => BTreeSet::from([*position]),
            PhraseNode::Internal { children, .. } => {
                children.iter().flat_map(|c| c.yield_set()).collect()
            }
        }
    }

    /// Internal nodes whose yield is not an interval of positions.
    pub fn tangled_nodes(&self) -> Vec<(String, BTreeSet<usize>)> {
        let mut out = Vec::new();
        self.collect_tangled(&mut out);
        out
    }

    fn collect_tangled(&self, out: &mut Vec<(String, BTreeSet<usize>)>) {
        if let PhraseNode::Internal { label, children } = self {
            let y = self.yield_set();
            if !crate::engine::is_interval(&y) {
                out.push((label.clone(), y));
            }
            for c in children {
                c.collect_tangled(out);
            }
        }
    }

    /// All rewrite rules read off the tree, one per internal node, in
    /// pre-order.
    pub fn rules(&self) -> Vec<GoldRule> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut Vec<GoldRule>) {
        if let PhraseNode::Internal { label, children } = self {
            out.push(GoldRule {
                lhs: label.clone(),
                rhs: children.iter().map(|c| c.label().to_string()).collect(),
            });
            for c in children {
                c.collect_rules(out);
            }
        }
    }
}

/// Projects a derivation into a phrase-structure tree.
///
/// Each step becomes a node labelled with the phrasal projection of its
/// result's head (the topmost node is relabelled with the sentence symbol).
/// A step that extends the immediately preceding step's result under the
/// same head and label is flattened into it, yielding n-ary nodes. The head
/// token of a node stays a bare leaf; other leaves project unary phrases
/// when their projection says so. Children are ordered by category word.
pub fn cg_to_psg(
    derivation: &Derivation,
    forms: &[String],
    pos: &[String],
    projection: &ProjectionMap,
    sentence_label: &str,
) -> Result<PhraseNode, CorrespondenceError> {
    if derivation.steps.is_empty() {
        return Err(CorrespondenceError::EmptyDerivation);
    }
    struct Piece {
        node: PhraseNode,
        head: usize,
        cat_word: usize,
        created_at: usize,
    }
    let mut pieces: BTreeMap<BTreeSet<usize>, Piece> = BTreeMap::new();
    for (i, form) in forms.iter().enumerate() {
        let position = i + 1;
        pieces.insert(
            BTreeSet::from([position]),
            Piece {
                node: PhraseNode::Leaf {
                    position,
                    form: form.clone(),
                    label: projection.get(&pos[i]).leaf,
                },
                head: position,
                cat_word: position,
                created_at: 0,
            },
        );
    }
    let last_no = derivation.steps.last().expect("non-empty").step_no;
    for step in &derivation.steps {
        let label = if step.step_no == last_no {
            sentence_label.to_string()
        } else {
            projection.get(&pos[step.result.head - 1]).phrasal
        };
        let mut children: Vec<(usize, PhraseNode)> = Vec::new();
        for operand in [&step.functor, &step.argument] {
            let piece = pieces
                .remove(&operand.token_set)
                .expect("operands are live constituents");
            let flatten = piece.created_at + 1 == step.step_no
                && piece.head == step.result.head
                && piece.node.label() == label;
            match piece.node {
                PhraseNode::Internal {
                    children: inner, ..
                } if flatten => {
                    // Re-derive each inner child's ordering key from its
                    // yield; category words inside a flattened node are
                    // recovered from the leaf positions.
                    for c in inner {
                        let key = *c.yield_set().iter().next().expect("non-empty yield");
                        children.push((key, c));
                    }
                }
                node @ PhraseNode::Internal { .. } => {
                    children.push((piece.cat_word, node));
                }
                leaf @ PhraseNode::Leaf { .. } => {
                    let proj = projection.get(&pos[piece.head - 1]);
                    if piece.head != step.result.head && proj.unary {
                        children.push((
                            piece.cat_word,
                            PhraseNode::Internal {
                                label: proj.phrasal,
                                children: vec![leaf],
                            },
                        ));
                    } else {
                        children.push((piece.cat_word, leaf));
                    }
                }
            }
        }
        children.sort_by_key(|(key, _)| *key);
        pieces.insert(
            step.result.token_set.clone(),
            Piece {
                node: PhraseNode::Internal {
                    label,
                    children: children.into_iter().map(|(_, c)| c).collect(),
                },
                head: step.result.head,
                cat_word: step.result.cat_word,
                created_at: step.step_no,
            },
        );
    }
    let (_, piece) = pieces.pop_last().expect("final constituent");
    Ok(piece.node)
}

/// Checks that a derivation survives the trip through its dependency tree:
/// converting to dependencies and deriving back must reproduce the same
/// tree and the same final category.
pub fn round_trip(
    derivation: &Derivation,
    categories: &[Category],
) -> Result<Derivation, CorrespondenceError> {
    let n = categories.len();
    let g = cg_to_dg(derivation, n)?;
    let back = dg_to_cg(&g, categories)?;
    let g2 = cg_to_dg(&back, n)?;
    if g2 != g {
        return Err(CorrespondenceError::RoundTrip(format!(
            "dependency trees differ: {:?} vs {:?}",
            g.edges(),
            g2.edges()
        )));
    }
    let (a, b) = (
        &derivation.steps.last().expect("non-empty").result.category,
        &back.steps.last().expect("non-empty").result.category,
    );
    if a != b {
        return Err(CorrespondenceError::RoundTrip(format!(
            "final categories differ: {a} vs {b}"
        )));
    }
    Ok(back)
}
