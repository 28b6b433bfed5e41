//! Lexicons, sentences, and annotated corpus entries, with their plain-text
//! file formats.
//!
//! All text is normalized to Unicode NFC on the way in, so lookups behave
//! the same regardless of how a form was composed in the source file.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::category::{
    parse_category, print_category, Atom, Category, CategoryError, GrammarSignature,
};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {source}")]
    Category {
        line: usize,
        #[source]
        source: CategoryError,
    },
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("missing `atoms:` header")]
    MissingAtoms,
    #[error("missing `sentence:` header")]
    MissingSentence,
    #[error("no lexicon entry for form {0:?} with POS {1:?}")]
    MissingEntry(String, String),
}

/// A single word of an annotated sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 1-based linear position.
    pub index: usize,
    pub form: String,
    pub pos: String,
    pub category: Category,
    /// Gold head position, 0 for the root.
    pub gold_head: usize,
    /// Optional interlinear gloss.
    pub gloss: Option<String>,
}

/// An ordered sequence of tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    pub fn forms(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.form.clone()).collect()
    }

    pub fn pos_labels(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.pos.clone()).collect()
    }

    /// Gold edges as (head, dependent) pairs, root excluded.
    pub fn gold_edges(&self) -> BTreeSet<(usize, usize)> {
        self.tokens
            .iter()
            .filter(|t| t.gold_head != 0)
            .map(|t| (t.gold_head, t.index))
            .collect()
    }

    pub fn gold_root(&self) -> Option<usize> {
        self.tokens.iter().find(|t| t.gold_head == 0).map(|t| t.index)
    }
}

/// One lexicon line: a form with a POS label and its category alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub form: String,
    pub pos: String,
    pub categories: Vec<Category>,
}

/// A grammar signature plus a list of word entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub signature: GrammarSignature,
    pub entries: Vec<LexEntry>,
}

impl Lexicon {
    pub fn lookup(&self, form: &str, pos: &str) -> Result<&LexEntry, LexiconError> {
        let form: String = form.nfc().collect();
        self.entries
            .iter()
            .find(|e| e.form == form && e.pos == pos)
            .ok_or_else(|| LexiconError::MissingEntry(form, pos.to_string()))
    }
}

/// A Hays-style dependency rule: the head label with the ordered labels of
/// its left and right dependents. Empty dependent lists license leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyRule {
    pub head_label: String,
    pub left_deps: Vec<String>,
    pub right_deps: Vec<String>,
}

impl DependencyRule {
    pub fn new(head: &str, left: &[&str], right: &[&str]) -> Self {
        DependencyRule {
            head_label: head.to_string(),
            left_deps: left.iter().map(|s| s.to_string()).collect(),
            right_deps: right.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn leaf(head: &str) -> Self {
        DependencyRule::new(head, &[], &[])
    }
}

/// One scripted derivation step: which token set acts as functor and which
/// as argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptStep {
    pub functor: BTreeSet<usize>,
    pub argument: BTreeSet<usize>,
}

/// A gold phrase-structure rule attached to a corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GoldRule {
    pub lhs: String,
    pub rhs: Vec<String>,
}

/// A fully annotated sentence: tokens with gold heads, an optional
/// derivation script, gold phrase-structure rules, and free-form notes.
///
/// Entries without a script are fragments: the lexicon and gold edges are
/// recorded but no derivation is replayed for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub lang: String,
    pub sentence: Sentence,
    pub steps: Vec<ScriptStep>,
    pub gold_rules: Vec<GoldRule>,
    pub notes: Vec<String>,
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Parses the lexicon format:
///
/// ```text
/// atoms: N S
/// sentence: S
/// # comment
/// walks<TAB>V<TAB>N\S
/// saw<TAB>V<TAB>(N\S)/N,N\S
/// ```
pub fn parse_lexicon(text: &str) -> Result<Lexicon, LexiconError> {
    let mut atoms: Option<Vec<String>> = None;
    let mut sentence_atom: Option<String> = None;
    let mut raw_entries: Vec<(usize, String, String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = nfc(raw.trim_end_matches('\r'));
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("atoms:") {
            atoms = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
        } else if let Some(rest) = trimmed.strip_prefix("sentence:") {
            sentence_atom = Some(rest.trim().to_string());
        } else {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(LexiconError::Format {
                    line: lineno + 1,
                    reason: format!(
                        "expected FORM<TAB>POS<TAB>CATEGORY, got {} fields",
                        fields.len()
                    ),
                });
            }
            raw_entries.push((
                lineno + 1,
                fields[0].to_string(),
                fields[1].to_string(),
                fields[2].to_string(),
            ));
        }
    }
    let atoms = atoms.ok_or(LexiconError::MissingAtoms)?;
    let sentence_atom = sentence_atom.ok_or(LexiconError::MissingSentence)?;
    let wrap_err = |source| LexiconError::Category { line: 1, source };
    let atoms: Vec<Atom> = atoms
        .iter()
        .map(|s| Atom::new(s))
        .collect::<Result<_, _>>()
        .map_err(wrap_err)?;
    let sentence_atom = Atom::new(&sentence_atom).map_err(wrap_err)?;
    let signature = GrammarSignature::new(atoms, sentence_atom).map_err(wrap_err)?;
    let mut entries = Vec::new();
    for (line, form, pos, cats) in raw_entries {
        let mut categories = Vec::new();
        for cat in cats.split(',') {
            categories.push(
                parse_category(cat.trim(), &signature)
                    .map_err(|source| LexiconError::Category { line, source })?,
            );
        }
        entries.push(LexEntry {
            form,
            pos,
            categories,
        });
    }
    Ok(Lexicon { signature, entries })
}

/// Serializes a lexicon; inverse of [`parse_lexicon`] up to comments and
/// whitespace.
pub fn write_lexicon(lex: &Lexicon) -> String {
    let mut out = String::new();
    let atoms: Vec<String> = lex
        .signature
        .atoms()
        .iter()
        .map(|a| a.as_str().to_string())
        .collect();
    let _ = writeln!(out, "atoms: {}", atoms.join(" "));
    let _ = writeln!(out, "sentence: {}", lex.signature.sentence_atom().as_str());
    for e in &lex.entries {
        let cats: Vec<String> = e.categories.iter().map(print_category).collect();
        let _ = writeln!(out, "{}\t{}\t{}", e.form, e.pos, cats.join(","));
    }
    out
}

/// Parses a corpus entry given its grammar signature. Format:
///
/// ```text
/// #SENT id=ex9-english lang=en
/// 1<TAB>John<TAB>N<TAB>N<TAB>2
/// ...
/// #STEP functor={4} arg={3}
/// #RULE S -> NP VP
/// #NOTE free text
/// ```
pub fn parse_entry(text: &str, signature: &GrammarSignature) -> Result<CorpusEntry, LexiconError> {
    let mut id = String::new();
    let mut lang = String::new();
    let mut seen_sent = false;
    let mut tokens: Vec<Token> = Vec::new();
    let mut steps = Vec::new();
    let mut gold_rules = Vec::new();
    let mut notes = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = nfc(raw.trim_end_matches('\r'));
        let trimmed = line.trim();
        let err = |reason: String| LexiconError::Format {
            line: lineno + 1,
            reason,
        };
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#SENT") {
            seen_sent = true;
            for field in rest.split_whitespace() {
                if let Some(v) = field.strip_prefix("id=") {
                    id = v.to_string();
                } else if let Some(v) = field.strip_prefix("lang=") {
                    lang = v.to_string();
                }
            }
        } else if let Some(rest) = trimmed.strip_prefix("#STEP") {
            let mut functor = None;
            let mut argument = None;
            for field in rest.split_whitespace() {
                if let Some(v) = field.strip_prefix("functor=") {
                    functor = Some(parse_index_set(v).map_err(&err)?);
                } else if let Some(v) = field.strip_prefix("arg=") {
                    argument = Some(parse_index_set(v).map_err(&err)?);
                }
            }
            match (functor, argument) {
                (Some(functor), Some(argument)) => steps.push(ScriptStep { functor, argument }),
                _ => return Err(err("#STEP needs functor={...} and arg={...}".into())),
            }
        } else if let Some(rest) = trimmed.strip_prefix("#RULE") {
            let (lhs, rhs) = rest
                .split_once("->")
                .ok_or_else(|| err("#RULE needs `LHS -> RHS...`".into()))?;
            gold_rules.push(GoldRule {
                lhs: lhs.trim().to_string(),
                rhs: rhs.split_whitespace().map(|s| s.to_string()).collect(),
            });
        } else if let Some(rest) = trimmed.strip_prefix("#NOTE") {
            notes.push(rest.trim().to_string());
        } else if trimmed.starts_with('#') {
            continue;
        } else {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 && fields.len() != 6 {
                return Err(err(format!(
                    "expected INDEX FORM POS CATEGORY HEAD [GLOSS], got {} fields",
                    fields.len()
                )));
            }
            let index: usize = fields[0]
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index {:?}", fields[0])))?;
            if index != tokens.len() + 1 {
                return Err(err(format!(
                    "expected index {}, got {}",
                    tokens.len() + 1,
                    index
                )));
            }
            let category = parse_category(fields[3].trim(), signature)
                .map_err(|source| LexiconError::Category {
                    line: lineno + 1,
                    source,
                })?;
            let gold_head: usize = fields[4]
                .trim()
                .parse()
                .map_err(|_| err(format!("bad head {:?}", fields[4])))?;
            tokens.push(Token {
                index,
                form: fields[1].to_string(),
                pos: fields[2].to_string(),
                category,
                gold_head,
                gloss: fields.get(5).map(|s| s.to_string()),
            });
        }
    }
    if !seen_sent {
        return Err(LexiconError::Format {
            line: 1,
            reason: "missing #SENT header".into(),
        });
    }
    Ok(CorpusEntry {
        id,
        lang,
        sentence: Sentence { tokens },
        steps,
        gold_rules,
        notes,
    })
}

fn parse_index_set(s: &str) -> Result<BTreeSet<usize>, String> {
    let inner = s
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format!("expected {{i,j,...}}, got {s:?}"))?;
    inner
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad index {p:?}"))
        })
        .collect()
}

fn write_index_set(set: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Serializes a corpus entry; inverse of [`parse_entry`] up to whitespace
/// and comments.
pub fn write_entry(entry: &CorpusEntry) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#SENT id={} lang={}", entry.id, entry.lang);
    for t in &entry.sentence.tokens {
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            t.index,
            t.form,
            t.pos,
            print_category(&t.category),
            t.gold_head
        );
        if let Some(g) = &t.gloss {
            let _ = write!(out, "\t{g}");
        }
        out.push('\n');
    }
    for s in &entry.steps {
        let _ = writeln!(
            out,
            "#STEP functor={} arg={}",
            write_index_set(&s.functor),
            write_index_set(&s.argument)
        );
    }
    for r in &entry.gold_rules {
        let _ = writeln!(out, "#RULE {} -> {}", r.lhs, r.rhs.join(" "));
    }
    for n in &entry.notes {
        let _ = writeln!(out, "#NOTE {n}");
    }
    out
}
