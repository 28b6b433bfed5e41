//! The built-in corpus: annotated sentences from seven languages, each
//! paired with its lexicon. Entries with a derivation script are fully
//! replayable; entries without one are fragments kept for their lexicon,
//! gold heads, and notes.

use crate::lexicon::{parse_entry, parse_lexicon, CorpusEntry, Lexicon};

/// A corpus entry together with the lexicon it was annotated against.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub lexicon: Lexicon,
    pub entry: CorpusEntry,
}

macro_rules! items {
    ($($name:literal),* $(,)?) => {
        vec![$(
            {
                let lexicon = parse_lexicon(include_str!(concat!("../data/", $name, ".lex")))
                    .expect(concat!("embedded lexicon ", $name));
                let entry = parse_entry(
                    include_str!(concat!("../data/", $name, ".ent")),
                    &lexicon.signature,
                )
                .expect(concat!("embedded entry ", $name));
                CorpusItem { lexicon, entry }
            }
        ),*]
    };
}

/// All built-in entries, in a fixed order.
pub fn builtin_corpus() -> Vec<CorpusItem> {
    items![
        "ex1-warlpiri",
        "ex6-malayalam",
        "ex7-kwakwala",
        "ex9-english",
        "ex10-german",
        "ex11-croatian",
        "ex12-kalkatungu",
        "ex-np-english",
    ]
}

/// Looks an entry up by its id.
pub fn by_id(id: &str) -> Option<CorpusItem> {
    builtin_corpus().into_iter().find(|i| i.entry.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::write_entry;

    #[test]
    fn corpus_loads_and_ids_are_unique() {
        let corpus = builtin_corpus();
        assert_eq!(corpus.len(), 8);
        let mut ids: Vec<&str> = corpus.iter().map(|i| i.entry.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 8);
    }

    #[test]
    fn every_token_has_a_lexicon_entry_with_its_category() {
        for item in builtin_corpus() {
            for t in &item.entry.sentence.tokens {
                let le = item
                    .lexicon
                    .lookup(&t.form, &t.pos)
                    .unwrap_or_else(|e| panic!("{}: {e}", item.entry.id));
                assert!(
                    le.categories.contains(&t.category),
                    "{}: {} lacks {}",
                    item.entry.id,
                    t.form,
                    t.category
                );
            }
        }
    }

    #[test]
    fn entries_round_trip_through_their_format() {
        for item in builtin_corpus() {
            let text = write_entry(&item.entry);
            let back = parse_entry(&text, &item.lexicon.signature).unwrap();
            assert_eq!(back, item.entry, "{}", item.entry.id);
        }
    }

    #[test]
    fn only_the_warlpiri_fragment_lacks_a_script() {
        for item in builtin_corpus() {
            if item.entry.id == "ex1-warlpiri" {
                assert!(item.entry.steps.is_empty());
            } else {
                assert!(!item.entry.steps.is_empty(), "{}", item.entry.id);
            }
        }
    }
}
