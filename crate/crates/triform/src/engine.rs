//! The derivation engine: combining constituents by slash application,
//! replaying scripted derivations, and searching for all derivations of a
//! goal category.
//!
//! Combination is order-sensitive but not adjacency-bound: with wrapping
//! enabled, a functor may consume an argument whose tokens interleave with
//! its own. A step is recorded as wrapped whenever functor, argument, or
//! their union fails to be an interval of positions.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::category::{
    backward_apply, forward_apply, is_modifier, print_category, type_raise, Category,
};
use crate::lexicon::ScriptStep;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("constituents overlap: {0:?} and {1:?}")]
    Overlap(BTreeSet<usize>, BTreeSet<usize>),
    #[error("category {functor} does not apply to {argument}")]
    CategoryMismatch { functor: String, argument: String },
    #[error("{direction} application from head {head} is not licensed by the argument span")]
    DirectionUnlicensed { direction: &'static str, head: usize },
    #[error("combination would wrap, but wrapping is disabled")]
    WrapDisallowed,
    #[error("step {step}: no live constituent with token set {set:?}")]
    NoSuchConstituent { step: usize, set: BTreeSet<usize> },
    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<EngineError>,
    },
    #[error("derivation left {0} constituents instead of one")]
    Incomplete(usize),
    #[error("derivation ended with {got}, expected {expected}")]
    WrongGoal { got: String, expected: String },
}

/// A live piece of the derivation: a token set with its category and head.
///
/// `cat_word` is the token whose lexical category the constituent's
/// category descends from. It starts at the leaf itself and is inherited
/// from the functor at every step, so it can differ from `head` once a
/// modifier has taken an argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constituent {
    pub token_set: BTreeSet<usize>,
    pub category: Category,
    pub head: usize,
    pub cat_word: usize,
}

impl Constituent {
    pub fn leaf(position: usize, category: Category) -> Constituent {
        Constituent {
            token_set: BTreeSet::from([position]),
            category,
            head: position,
            cat_word: position,
        }
    }

    pub fn is_interval(&self) -> bool {
        is_interval(&self.token_set)
    }
}

pub fn is_interval(set: &BTreeSet<usize>) -> bool {
    match (set.iter().next(), set.iter().next_back()) {
        (Some(&lo), Some(&hi)) => hi - lo + 1 == set.len(),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    /// 1-based step number.
    pub step_no: usize,
    pub functor: Constituent,
    pub argument: Constituent,
    pub direction: Direction,
    pub result: Constituent,
    pub wrapped: bool,
}

/// A leaf whose category was type-raised before the derivation proper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaisedLeaf {
    pub position: usize,
    pub from: Category,
    pub to: Category,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub raises: Vec<RaisedLeaf>,
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    pub fn final_constituent(&self) -> &Constituent {
        &self.steps.last().expect("non-empty derivation").result
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DeriveOptions {
    /// Allow non-adjacent (wrapping) combination. On by default.
    pub wrap: bool,
    /// Allow forward type-raising of atomic leaves toward the goal.
    pub type_raise: bool,
    /// Hard cap on the number of distinct derivations returned.
    pub max_results: usize,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        DeriveOptions {
            wrap: true,
            type_raise: false,
            max_results: 64,
        }
    }
}

/// Combines a functor constituent with an argument constituent.
///
/// The functor's outer slash picks the direction. Forward application is
/// licensed when the functor's head precedes some argument token; backward
/// application when some argument token precedes the functor's head. The
/// result's head is the functor's head, except that a modifier functor
/// (`X/X` or `X\X`) surrenders headship to its argument.
pub fn combine(
    functor: &Constituent,
    argument: &Constituent,
    allow_wrap: bool,
) -> Result<(Constituent, Direction, bool), EngineError> {
    if functor.token_set.intersection(&argument.token_set).next().is_some() {
        return Err(EngineError::Overlap(
            functor.token_set.clone(),
            argument.token_set.clone(),
        ));
    }
    let mismatch = || EngineError::CategoryMismatch {
        functor: print_category(&functor.category),
        argument: print_category(&argument.category),
    };
    let (category, direction) = match &functor.category {
        Category::Forward { .. } => {
            let cat = forward_apply(&functor.category, &argument.category).ok_or_else(mismatch)?;
            let arg_max = *argument.token_set.iter().next_back().expect("non-empty");
            if functor.head >= arg_max {
                return Err(EngineError::DirectionUnlicensed {
                    direction: "forward",
                    head: functor.head,
                });
            }
            (cat, Direction::Forward)
        }
        Category::Backward { .. } => {
            let cat = backward_apply(&argument.category, &functor.category).ok_or_else(mismatch)?;
            let arg_min = *argument.token_set.iter().next().expect("non-empty");
            if arg_min >= functor.head {
                return Err(EngineError::DirectionUnlicensed {
                    direction: "backward",
                    head: functor.head,
                });
            }
            (cat, Direction::Backward)
        }
        Category::Atom(_) => return Err(mismatch()),
    };
    let union: BTreeSet<usize> = functor.token_set.union(&argument.token_set).copied().collect();
    let wrapped =
        !(functor.is_interval() && argument.is_interval() && is_interval(&union));
    if wrapped && !allow_wrap {
        return Err(EngineError::WrapDisallowed);
    }
    let head = if is_modifier(&functor.category) {
        argument.head
    } else {
        functor.head
    };
    let result = Constituent {
        token_set: union,
        category,
        head,
        cat_word: functor.cat_word,
    };
    Ok((result, direction, wrapped))
}

/// Replays a scripted derivation over the given leaf categories.
///
/// Leaves are positions `1..=categories.len()`. Fails loudly on the first
/// step whose token sets do not name live constituents or whose combination
/// is not licensed.
pub fn replay(
    categories: &[Category],
    script: &[ScriptStep],
    allow_wrap: bool,
) -> Result<Derivation, EngineError> {
    let mut live: Vec<Constituent> = categories
        .iter()
        .enumerate()
        .map(|(i, c)| Constituent::leaf(i + 1, c.clone()))
        .collect();
    let mut steps = Vec::new();
    for (i, s) in script.iter().enumerate() {
        let step_no = i + 1;
        let find = |set: &BTreeSet<usize>| {
            live.iter()
                .position(|c| &c.token_set == set)
                .ok_or_else(|| EngineError::NoSuchConstituent {
                    step: step_no,
                    set: set.clone(),
                })
        };
        let fi = find(&s.functor)?;
        let ai = find(&s.argument)?;
        let (result, direction, wrapped) = combine(&live[fi], &live[ai], allow_wrap)
            .map_err(|source| EngineError::Step {
                step: step_no,
                source: Box::new(source),
            })?;
        steps.push(DerivationStep {
            step_no,
            functor: live[fi].clone(),
            argument: live[ai].clone(),
            direction,
            result: result.clone(),
            wrapped,
        });
        let (lo, hi) = (fi.min(ai), fi.max(ai));
        live.remove(hi);
        live.remove(lo);
        live.push(result);
    }
    if live.len() != 1 {
        return Err(EngineError::Incomplete(live.len()));
    }
    Ok(Derivation {
        raises: Vec::new(),
        steps,
    })
}

/// Replays and additionally checks that the derivation ends in `goal`.
pub fn replay_to_goal(
    categories: &[Category],
    script: &[ScriptStep],
    goal: &Category,
    allow_wrap: bool,
) -> Result<Derivation, EngineError> {
    let derivation = replay(categories, script, allow_wrap)?;
    let got = &derivation.final_constituent().category;
    if got != goal {
        return Err(EngineError::WrongGoal {
            got: print_category(got),
            expected: print_category(goal),
        });
    }
    Ok(derivation)
}

/// Searches for every derivation of `goal` from the leaf category choices.
///
/// `choices[i]` lists the admissible categories for position `i + 1`.
/// Results are deduplicated up to step order (two derivations count as the
/// same when they perform the same multiset of combinations), sorted
/// canonically, and truncated to `max_results`.
pub fn derive(choices: &[Vec<Category>], goal: &Category, options: DeriveOptions) -> Vec<Derivation> {
    let mut results: Vec<Derivation> = Vec::new();
    let mut signatures: BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)>> =
        BTreeSet::new();
    let mut assignment: Vec<Category> = Vec::new();
    assign(
        choices,
        goal,
        options,
        &mut assignment,
        &mut results,
        &mut signatures,
    );
    results.sort_by(|a, b| signature_of(a).cmp(&signature_of(b)));
    results.truncate(options.max_results);
    results
}

fn assign(
    choices: &[Vec<Category>],
    goal: &Category,
    options: DeriveOptions,
    assignment: &mut Vec<Category>,
    results: &mut Vec<Derivation>,
    signatures: &mut BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)>>,
) {
    let i = assignment.len();
    if i == choices.len() {
        raise_and_search(goal, options, assignment, results, signatures);
        return;
    }
    for c in &choices[i] {
        assignment.push(c.clone());
        assign(choices, goal, options, assignment, results, signatures);
        assignment.pop();
    }
}

/// Branches over optional forward type-raising of atomic leaves, then runs
/// the combination search. A leaf `Y` may be raised to `G/(Y\G)` for the
/// goal `G`; compound leaves are never raised.
fn raise_and_search(
    goal: &Category,
    options: DeriveOptions,
    assignment: &[Category],
    results: &mut Vec<Derivation>,
    signatures: &mut BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)>>,
) {
    let mut raises = Vec::new();
    let mut leaves: Vec<Constituent> = assignment
        .iter()
        .enumerate()
        .map(|(i, c)| Constituent::leaf(i + 1, c.clone()))
        .collect();
    search(&leaves, goal, options, &raises, results, signatures);
    if !options.type_raise {
        return;
    }
    let raisable: Vec<usize> = assignment
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_atomic())
        .map(|(i, _)| i)
        .collect();
    // Enumerate nonempty subsets of raisable leaves.
    for mask in 1u32..(1u32 << raisable.len()) {
        raises.clear();
        for (bit, &i) in raisable.iter().enumerate() {
            let leaf = &mut leaves[i];
            if mask & (1 << bit) != 0 {
                let raised = type_raise(&assignment[i], goal);
                raises.push(RaisedLeaf {
                    position: i + 1,
                    from: assignment[i].clone(),
                    to: raised.clone(),
                });
                leaf.category = raised;
            } else {
                leaf.category = assignment[i].clone();
            }
        }
        search(&leaves, goal, options, &raises, results, signatures);
    }
}

fn search(
    live: &[Constituent],
    goal: &Category,
    options: DeriveOptions,
    raises: &[RaisedLeaf],
    results: &mut Vec<Derivation>,
    signatures: &mut BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)>>,
) {
    let mut steps = Vec::new();
    let mut live = live.to_vec();
    dfs(&mut live, goal, options, raises, &mut steps, results, signatures);
}

fn dfs(
    live: &mut Vec<Constituent>,
    goal: &Category,
    options: DeriveOptions,
    raises: &[RaisedLeaf],
    steps: &mut Vec<DerivationStep>,
    results: &mut Vec<Derivation>,
    signatures: &mut BTreeSet<Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)>>,
) {
    if live.len() == 1 {
        if &live[0].category == goal && !steps.is_empty() {
            let sig = steps_signature(steps);
            if signatures.insert(sig) {
                results.push(Derivation {
                    raises: raises.to_vec(),
                    steps: steps.clone(),
                });
            }
        }
        return;
    }
    for fi in 0..live.len() {
        for ai in 0..live.len() {
            if fi == ai {
                continue;
            }
            let Ok((result, direction, wrapped)) = combine(&live[fi], &live[ai], options.wrap)
            else {
                continue;
            };
            let functor = live[fi].clone();
            let argument = live[ai].clone();
            let (lo, hi) = (fi.min(ai), fi.max(ai));
            let kept_hi = live.remove(hi);
            let kept_lo = live.remove(lo);
            live.push(result.clone());
            steps.push(DerivationStep {
                step_no: steps.len() + 1,
                functor,
                argument,
                direction,
                result,
                wrapped,
            });
            dfs(live, goal, options, raises, steps, results, signatures);
            steps.pop();
            live.pop();
            live.insert(lo, kept_lo);
            live.insert(hi, kept_hi);
        }
    }
}

fn steps_signature(
    steps: &[DerivationStep],
) -> Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)> {
    let mut sig: Vec<_> = steps
        .iter()
        .map(|s| {
            (
                s.functor.token_set.clone(),
                s.argument.token_set.clone(),
                s.direction,
            )
        })
        .collect();
    sig.sort();
    sig
}

fn signature_of(d: &Derivation) -> Vec<(BTreeSet<usize>, BTreeSet<usize>, Direction)> {
    steps_signature(&d.steps)
}

/// Folds a functor over a sequence of arguments, wrapping as needed: the
/// result of each combination becomes the functor of the next.
pub fn iterate_wrap(
    functor: &Constituent,
    arguments: &[Constituent],
) -> Result<Vec<DerivationStep>, EngineError> {
    let mut current = functor.clone();
    let mut steps = Vec::new();
    for (i, arg) in arguments.iter().enumerate() {
        let step_no = i + 1;
        let (result, direction, wrapped) =
            combine(&current, arg, true).map_err(|source| EngineError::Step {
                step: step_no,
                source: Box::new(source),
            })?;
        steps.push(DerivationStep {
            step_no,
            functor: current.clone(),
            argument: arg.clone(),
            direction,
            result: result.clone(),
            wrapped,
        });
        current = result;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::GrammarSignature;
    use crate::lexicon::{parse_entry, CorpusEntry};

    fn sig() -> GrammarSignature {
        GrammarSignature::default_ns()
    }

    fn cat(s: &str) -> Category {
        crate::category::parse_category(s, &sig()).unwrap()
    }

    fn entry(text: &str) -> CorpusEntry {
        parse_entry(text, &sig()).unwrap()
    }

    const EX9: &str = "#SENT id=ex9 lang=en\n\
        1\tJohn\tN\tN\t2\n\
        2\tthinks\tV\t(N\\S)/S\t0\n\
        3\tBill\tN\tN\t4\n\
        4\tlaughed\tV\tN\\S\t2\n\
        #STEP functor={4} arg={3}\n\
        #STEP functor={2} arg={3,4}\n\
        #STEP functor={2,3,4} arg={1}\n";

    const EX11: &str = "#SENT id=ex11 lang=hr\n\
        1\tNa\u{161}a\tDet\tN/N\t3\n\
        2\tje\tAux\t(N\\S)/A\t0\n\
        3\tu\u{10d}ionica\tN\tN\t2\n\
        4\tudobna\tA\tA\t2\n\
        #STEP functor={2} arg={4}\n\
        #STEP functor={1} arg={3}\n\
        #STEP functor={2,4} arg={1,3}\n";

    fn sig_nsa() -> GrammarSignature {
        use crate::category::Atom;
        let atoms = ["N", "S", "A"].map(|a| Atom::new(a).unwrap());
        GrammarSignature::new(atoms, Atom::new("S").unwrap()).unwrap()
    }

    #[test]
    fn combine_forward_adjacent() {
        let f = Constituent::leaf(1, cat("S/N"));
        let a = Constituent::leaf(2, cat("N"));
        let (r, d, w) = combine(&f, &a, true).unwrap();
        assert_eq!(r.category, cat("S"));
        assert_eq!(r.head, 1);
        assert_eq!(d, Direction::Forward);
        assert!(!w);
    }

    #[test]
    fn combine_modifier_surrenders_headship() {
        let f = Constituent::leaf(1, cat("N/N"));
        let a = Constituent::leaf(2, cat("N"));
        let (r, _, _) = combine(&f, &a, true).unwrap();
        assert_eq!(r.head, 2);
        assert_eq!(r.cat_word, 1);
    }

    #[test]
    fn combine_rejects_mismatch_and_overlap() {
        let f = Constituent::leaf(1, cat("S/N"));
        let a = Constituent::leaf(2, cat("S"));
        assert!(matches!(
            combine(&f, &a, true),
            Err(EngineError::CategoryMismatch { .. })
        ));
        let a2 = Constituent::leaf(1, cat("N"));
        assert!(matches!(combine(&f, &a2, true), Err(EngineError::Overlap(..))));
    }

    #[test]
    fn forward_needs_argument_material_to_the_right() {
        let f = Constituent::leaf(2, cat("S/N"));
        let a = Constituent::leaf(1, cat("N"));
        assert!(matches!(
            combine(&f, &a, true),
            Err(EngineError::DirectionUnlicensed { .. })
        ));
    }

    #[test]
    fn backward_licensed_by_leftmost_argument_token() {
        // Functor head 2 takes an argument spanning {1,3}: backward is fine
        // because token 1 precedes the head.
        let mut a = Constituent::leaf(1, cat("N"));
        a.token_set = BTreeSet::from([1, 3]);
        let f = Constituent::leaf(2, cat("N\\S"));
        let (r, d, w) = combine(&f, &a, true).unwrap();
        assert_eq!(d, Direction::Backward);
        assert_eq!(r.head, 2);
        // The argument itself is discontinuous, so the step wraps even
        // though the union is a solid interval.
        assert!(w);
    }

    #[test]
    fn wrapped_flag_set_for_discontinuous_results() {
        let c = |s: &str| crate::category::parse_category(s, &sig_nsa()).unwrap();
        let f = Constituent::leaf(2, c("(N\\S)/A"));
        let a = Constituent::leaf(4, c("A"));
        let (r, _, w) = combine(&f, &a, true).unwrap();
        assert!(w);
        assert_eq!(r.token_set, BTreeSet::from([2, 4]));
    }

    #[test]
    fn no_wrap_rejects_discontinuous_combination() {
        let c = |s: &str| crate::category::parse_category(s, &sig_nsa()).unwrap();
        let f = Constituent::leaf(2, c("(N\\S)/A"));
        let a = Constituent::leaf(4, c("A"));
        assert_eq!(combine(&f, &a, false), Err(EngineError::WrapDisallowed));
    }

    #[test]
    fn replay_ex9_reaches_s_with_gold_heads() {
        let e = entry(EX9);
        let cats: Vec<Category> = e.sentence.tokens.iter().map(|t| t.category.clone()).collect();
        let d = replay_to_goal(&cats, &e.steps, &cat("S"), true).unwrap();
        assert_eq!(d.steps.len(), 3);
        let fin = d.final_constituent();
        assert_eq!(fin.head, 2);
        assert_eq!(fin.token_set, (1..=4).collect());
        assert!(d.steps.iter().all(|s| !s.wrapped));
    }

    #[test]
    fn replay_ex11_wraps_and_keeps_aux_head() {
        let e = parse_entry(EX11, &sig_nsa()).unwrap();
        let cats: Vec<Category> = e.sentence.tokens.iter().map(|t| t.category.clone()).collect();
        let d = replay(&cats, &e.steps, true).unwrap();
        let fin = d.final_constituent();
        assert_eq!(fin.category, crate::category::parse_category("S", &sig_nsa()).unwrap());
        assert_eq!(fin.head, 2);
        assert!(d.steps.iter().all(|s| s.wrapped));
        // Step 3 is backward application licensed by token 1 even though the
        // argument's head (3) follows the functor's head (2).
        assert_eq!(d.steps[2].direction, Direction::Backward);
    }

    #[test]
    fn replay_reports_missing_constituent_with_step_number() {
        let e = entry(EX9);
        let cats: Vec<Category> = e.sentence.tokens.iter().map(|t| t.category.clone()).collect();
        let mut script = e.steps.clone();
        script[1].argument = BTreeSet::from([3]);
        let err = replay(&cats, &script, true).unwrap_err();
        assert_eq!(
            err,
            EngineError::NoSuchConstituent {
                step: 2,
                set: BTreeSet::from([3])
            }
        );
    }

    #[test]
    fn derive_finds_the_ex9_derivation() {
        let e = entry(EX9);
        let choices: Vec<Vec<Category>> = e
            .sentence
            .tokens
            .iter()
            .map(|t| vec![t.category.clone()])
            .collect();
        let results = derive(&choices, &cat("S"), DeriveOptions::default());
        assert!(!results.is_empty());
        let gold: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = e
            .steps
            .iter()
            .map(|s| (s.functor.clone(), s.argument.clone()))
            .collect();
        assert!(results.iter().any(|d| {
            d.steps
                .iter()
                .map(|s| (s.functor.token_set.clone(), s.argument.token_set.clone()))
                .collect::<Vec<_>>()
                == gold
        }));
    }

    #[test]
    fn derive_respects_no_wrap() {
        let e = parse_entry(EX11, &sig_nsa()).unwrap();
        let goal = crate::category::parse_category("S", &sig_nsa()).unwrap();
        let choices: Vec<Vec<Category>> = e
            .sentence
            .tokens
            .iter()
            .map(|t| vec![t.category.clone()])
            .collect();
        let wrapped = derive(&choices, &goal, DeriveOptions::default());
        assert!(!wrapped.is_empty());
        let unwrapped = derive(
            &choices,
            &goal,
            DeriveOptions {
                wrap: false,
                ..DeriveOptions::default()
            },
        );
        assert!(unwrapped.is_empty());
    }

    #[test]
    fn derive_deduplicates_step_orderings() {
        // Det N V-intrans: raising Det+N before or after nothing else exists;
        // a two-leaf modifier case has exactly one derivation signature.
        let choices = vec![vec![cat("N/N")], vec![cat("N")]];
        let results = derive(&choices, &cat("N"), DeriveOptions::default());
        assert_eq!(results.len(), 1);
    }

    #[test]
    fn type_raising_unlocks_subject_as_functor() {
        let choices = vec![vec![cat("N")], vec![cat("N\\S")]];
        let plain = derive(&choices, &cat("S"), DeriveOptions::default());
        assert_eq!(plain.len(), 1);
        assert!(plain[0].raises.is_empty());
        let raised = derive(
            &choices,
            &cat("S"),
            DeriveOptions {
                type_raise: true,
                ..DeriveOptions::default()
            },
        );
        assert!(raised.len() >= 2);
        assert!(raised.iter().any(|d| {
            d.raises.len() == 1
                && d.raises[0].position == 1
                && d.raises[0].to == cat("S/(N\\S)")
        }));
    }

    #[test]
    fn max_results_truncates() {
        let e = entry(EX9);
        let choices: Vec<Vec<Category>> = e
            .sentence
            .tokens
            .iter()
            .map(|t| vec![t.category.clone()])
            .collect();
        let results = derive(
            &choices,
            &cat("S"),
            DeriveOptions {
                max_results: 1,
                ..DeriveOptions::default()
            },
        );
        assert_eq!(results.len(), 1);
    }

    #[test]
    fn iterate_wrap_folds_through_successive_arguments() {
        // A verb wraps in an adverb, then takes a particle on the right.
        let sig = {
            use crate::category::Atom;
            let atoms = ["V", "Adv", "P", "S"].map(|a| Atom::new(a).unwrap());
            GrammarSignature::new(atoms, Atom::new("S").unwrap()).unwrap()
        };
        let c = |s: &str| crate::category::parse_category(s, &sig).unwrap();
        let v = Constituent::leaf(1, c("(V/P)/Adv"));
        let adv = Constituent::leaf(3, c("Adv"));
        let p = Constituent::leaf(2, c("P"));
        let steps = iterate_wrap(&v, &[adv, p]).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(steps[0].wrapped);
        assert_eq!(steps[1].result.category, c("V"));
        assert_eq!(steps[1].result.token_set, (1..=3).collect());
    }
}
