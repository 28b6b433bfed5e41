//! Slash categories over a configurable atom set.
//!
//! Categories follow the Lambek reading: `X/Y` consumes a `Y` to its right
//! and yields `X`; `Y\X` consumes a `Y` to its left and yields `X`. Slashes
//! are non-associative in the concrete syntax, so anything nested on either
//! side of a slash must be parenthesized explicitly (`(S/N)/N`, never
//! `S/N/N`).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("invalid atom name {0:?}: must be [A-Za-z][A-Za-z0-9]*")]
    InvalidAtomName(String),
    #[error("unknown atom {name:?} at offset {offset}")]
    UnknownAtom { name: String, offset: usize },
    #[error("malformed category at offset {offset}: {reason}")]
    Malformed { offset: usize, reason: String },
}

/// A primitive category symbol such as `N`, `S`, `N1` or `Inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, CategoryError> {
        let mut chars = name.chars();
        let head_ok = chars.next().map_or(false, |c| c.is_ascii_alphabetic());
        if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric()) {
            return Err(CategoryError::InvalidAtomName(name.to_string()));
        }
        Ok(Atom(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A slash category. `Forward` is `result/argument`, `Backward` is
/// `argument\result`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atom(Atom),
    Forward {
        result: Box<Category>,
        argument: Box<Category>,
    },
    Backward {
        argument: Box<Category>,
        result: Box<Category>,
    },
}

impl Category {
    pub fn atom(name: &str) -> Result<Category, CategoryError> {
        Ok(Category::Atom(Atom::new(name)?))
    }

    pub fn forward(result: Category, argument: Category) -> Category {
        Category::Forward {
            result: Box::new(result),
            argument: Box::new(argument),
        }
    }

    pub fn backward(argument: Category, result: Category) -> Category {
        Category::Backward {
            argument: Box::new(argument),
            result: Box::new(result),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Category::Atom(_))
    }

    /// Atoms occurring anywhere in the category.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Category::Atom(a) => {
                out.insert(a.clone());
            }
            Category::Forward { result, argument } | Category::Backward { argument, result } => {
                result.collect_atoms(out);
                argument.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_category(self))
    }
}

/// The set `C` of primitive categories plus the designated sentence atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSignature {
    atoms: BTreeSet<Atom>,
    sentence_atom: Atom,
}

impl GrammarSignature {
    pub fn new(
        atoms: impl IntoIterator<Item = Atom>,
        sentence_atom: Atom,
    ) -> Result<GrammarSignature, CategoryError> {
        let atoms: BTreeSet<Atom> = atoms.into_iter().collect();
        if !atoms.contains(&sentence_atom) {
            return Err(CategoryError::UnknownAtom {
                name: sentence_atom.as_str().to_string(),
                offset: 0,
            });
        }
        Ok(GrammarSignature {
            atoms,
            sentence_atom,
        })
    }

    /// The default signature with `C = {N, S}` and sentence atom `S`.
    pub fn default_ns() -> GrammarSignature {
        let n = Atom::new("N").unwrap();
        let s = Atom::new("S").unwrap();
        GrammarSignature::new([n, s.clone()], s).unwrap()
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn sentence_atom(&self) -> &Atom {
        &self.sentence_atom
    }

    pub fn sentence_category(&self) -> Category {
        Category::Atom(self.sentence_atom.clone())
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }
}

/// Parses category notation such as `(S/N)/N` against a signature.
///
/// The grammar is `CAT := UNIT (("/" | "\") UNIT)?` with
/// `UNIT := ATOM | "(" CAT ")"`; whitespace is not permitted.
pub fn parse_category(text: &str, sig: &GrammarSignature) -> Result<Category, CategoryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let cat = parse_cat(&chars, &mut pos, sig)?;
    if pos != chars.len() {
        return Err(CategoryError::Malformed {
            offset: pos,
            reason: format!("unexpected {:?}", chars[pos]),
        });
    }
    Ok(cat)
}

fn parse_cat(
    chars: &[char],
    pos: &mut usize,
    sig: &GrammarSignature,
) -> Result<Category, CategoryError> {
    let left = parse_unit(chars, pos, sig)?;
    match chars.get(*pos) {
        Some('/') => {
            *pos += 1;
            let right = parse_unit(chars, pos, sig)?;
            Ok(Category::forward(left, right))
        }
        Some('\\') => {
            *pos += 1;
            let right = parse_unit(chars, pos, sig)?;
            Ok(Category::backward(left, right))
        }
        _ => Ok(left),
    }
}

fn parse_unit(
    chars: &[char],
    pos: &mut usize,
    sig: &GrammarSignature,
) -> Result<Category, CategoryError> {
    match chars.get(*pos) {
        Some('(') => {
            *pos += 1;
            let inner = parse_cat(chars, pos, sig)?;
            if chars.get(*pos) != Some(&')') {
                return Err(CategoryError::Malformed {
                    offset: *pos,
                    reason: "expected ')'".to_string(),
                });
            }
            *pos += 1;
            Ok(inner)
        }
        Some(c) if c.is_ascii_alphabetic() => {
            let start = *pos;
            while chars
                .get(*pos)
                .map_or(false, |c| c.is_ascii_alphanumeric())
            {
                *pos += 1;
            }
            let name: String = chars[start..*pos].iter().collect();
            let atom = Atom::new(&name)?;
            if !sig.contains(&atom) {
                return Err(CategoryError::UnknownAtom {
                    name,
                    offset: start,
                });
            }
            Ok(Category::Atom(atom))
        }
        Some(c) => Err(CategoryError::Malformed {
            offset: *pos,
            reason: format!("unexpected {c:?}"),
        }),
        None => Err(CategoryError::Malformed {
            offset: *pos,
            reason: "unexpected end of input".to_string(),
        }),
    }
}

/// Canonical notation with minimal parentheses; `parse_category` of the
/// output reproduces the input category exactly.
pub fn print_category(c: &Category) -> String {
    match c {
        Category::Atom(a) => a.as_str().to_string(),
        Category::Forward { result, argument } => {
            format!("{}/{}", wrap(result), wrap(argument))
        }
        Category::Backward { argument, result } => {
            format!("{}\\{}", wrap(argument), wrap(result))
        }
    }
}

fn wrap(c: &Category) -> String {
    match c {
        Category::Atom(a) => a.as_str().to_string(),
        _ => format!("({})", print_category(c)),
    }
}

/// `X/Y` applied to `Y` yields `X`; anything else yields nothing.
pub fn forward_apply(f: &Category, a: &Category) -> Option<Category> {
    match f {
        Category::Forward { result, argument } if argument.as_ref() == a => {
            Some(result.as_ref().clone())
        }
        _ => None,
    }
}

/// `Y` followed by `Y\X` yields `X`; anything else yields nothing.
pub fn backward_apply(a: &Category, f: &Category) -> Option<Category> {
    match f {
        Category::Backward { argument, result } if argument.as_ref() == a => {
            Some(result.as_ref().clone())
        }
        _ => None,
    }
}

/// Forward type-raising: `Y => X/(Y\X)`.
pub fn type_raise(y: &Category, x: &Category) -> Category {
    Category::forward(x.clone(), Category::backward(y.clone(), x.clone()))
}

/// True for the modifier shapes `X/X` and `X\X`.
pub fn is_modifier(c: &Category) -> bool {
    match c {
        Category::Atom(_) => false,
        Category::Forward { result, argument } | Category::Backward { argument, result } => {
            result == argument
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> GrammarSignature {
        GrammarSignature::default_ns()
    }

    fn cat(s: &str) -> Category {
        parse_category(s, &sig()).unwrap()
    }

    #[test]
    fn parses_nested_forward() {
        let s = Category::atom("S").unwrap();
        let n = Category::atom("N").unwrap();
        let expect = Category::forward(Category::forward(s, n.clone()), n);
        assert_eq!(cat("(S/N)/N"), expect);
    }

    #[test]
    fn parses_atom() {
        assert_eq!(cat("N"), Category::atom("N").unwrap());
    }

    #[test]
    fn parses_mixed_slashes() {
        let s = Category::atom("S").unwrap();
        let n = Category::atom("N").unwrap();
        let expect = Category::forward(Category::backward(s.clone(), s), n);
        assert_eq!(cat("(S\\S)/N"), expect);
    }

    #[test]
    fn unparenthesized_double_slash_is_an_error() {
        let err = parse_category("S/N/N", &sig()).unwrap_err();
        assert!(matches!(err, CategoryError::Malformed { offset: 3, .. }), "{err:?}");
    }

    #[test]
    fn unknown_atom_reports_offset() {
        let err = parse_category("S/Q", &sig()).unwrap_err();
        assert_eq!(
            err,
            CategoryError::UnknownAtom {
                name: "Q".to_string(),
                offset: 2
            }
        );
    }

    #[test]
    fn whitespace_is_rejected() {
        assert!(parse_category("S / N", &sig()).is_err());
    }

    #[test]
    fn prints_canonical_forms() {
        assert_eq!(print_category(&cat("(S/N)/N")), "(S/N)/N");
        assert_eq!(print_category(&cat("S")), "S");
        assert_eq!(print_category(&cat("N\\S")), "N\\S");
        assert_eq!(print_category(&cat("S/(N\\S)")), "S/(N\\S)");
    }

    #[test]
    fn forward_application() {
        assert_eq!(forward_apply(&cat("(S/N)/N"), &cat("N")), Some(cat("S/N")));
        assert_eq!(forward_apply(&cat("N/N"), &cat("N")), Some(cat("N")));
        assert_eq!(forward_apply(&cat("N"), &cat("N")), None);
    }

    #[test]
    fn backward_application() {
        assert_eq!(backward_apply(&cat("N"), &cat("N\\S")), Some(cat("S")));
        assert_eq!(backward_apply(&cat("S"), &cat("S\\S")), Some(cat("S")));
        assert_eq!(backward_apply(&cat("S"), &cat("N\\S")), None);
    }

    #[test]
    fn type_raising() {
        assert_eq!(type_raise(&cat("N"), &cat("S")), cat("S/(N\\S)"));
        assert_eq!(type_raise(&cat("S"), &cat("S")), cat("S/(S\\S)"));
        // Raise-then-apply collapses back to the target.
        let raised = type_raise(&cat("N"), &cat("S"));
        assert_eq!(forward_apply(&raised, &cat("N\\S")), Some(cat("S")));
    }

    #[test]
    fn modifier_shapes() {
        assert!(is_modifier(&cat("N/N")));
        assert!(is_modifier(&cat("N\\N")));
        assert!(!is_modifier(&cat("(S/N)/N")));
        assert!(!is_modifier(&cat("N")));
    }

    #[test]
    fn signature_requires_sentence_atom_membership() {
        let n = Atom::new("N").unwrap();
        let s = Atom::new("S").unwrap();
        assert!(GrammarSignature::new([n], s).is_err());
    }
}
