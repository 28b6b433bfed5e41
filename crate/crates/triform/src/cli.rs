//! Command-line interface.
//!
//! Exit codes are a stable contract: 0 on success, 1 on semantic failure
//! (no derivation, failed check, failed conversion), 2 on usage or input
//! errors. Results go to standard output, diagnostics to standard error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::category::Category;
use crate::corpus::{builtin_corpus, by_id, CorpusItem};
use crate::correspondence::{
    cg_to_dg, cg_to_psg, correspondence_records, dg_to_cg, round_trip, ProjectionMap,
};
use crate::dependency::{projectivity, validate, DependencyGraph};
use crate::engine::{derive, replay, Derivation, DeriveOptions};
use crate::lexicon::{parse_entry, parse_lexicon, write_entry, GoldRule};
use crate::render::{
    bracketed, correspondence_report, dependency_dot, derivation_table, phrase_dot,
    write_tabular_for, RenderOptions,
};

#[derive(Parser)]
#[command(
    name = "triform",
    about = "Categorial, dependency, and phrase-structure views of sentences, continuous or not",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for derivations of a sentence over a lexicon
    Derive {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Also try forward type-raising of atomic leaves
        #[arg(long = "type-raise")]
        type_raise: bool,
        /// Cap on the number of derivations printed
        #[arg(long = "max-results", default_value_t = 64)]
        max_results: usize,
    },
    /// Convert between the three representations
    Convert {
        direction: ConvertDirection,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Validate corpus entries against their gold annotations
    Check {
        /// Entry files to check
        entries: Vec<PathBuf>,
        /// Check every built-in corpus entry
        #[arg(long)]
        builtin: bool,
        /// Lexicon used for entries given as files
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// List or dump the built-in corpus
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Render an entry's own derivation in a chosen format
    Render {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// One line per entry: id, language, token and step counts
    List,
    /// Print an entry in the corpus file format
    Dump {
        id: String,
        /// Print the entry's lexicon instead
        #[arg(long)]
        lexicon: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertDirection {
    Cg2dg,
    Dg2cg,
    Cg2psg,
}

#[derive(Args)]
struct InputArgs {
    /// Entry file to read
    entry: Option<PathBuf>,
    /// Use a built-in corpus entry instead of a file
    #[arg(long)]
    id: Option<String>,
    /// Lexicon file (required with a file entry, ignored with --id)
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    /// Allow non-adjacent combination (the default)
    #[arg(long, overrides_with = "no_wrap")]
    wrap: bool,
    /// Forbid non-adjacent combination
    #[arg(long = "no-wrap")]
    no_wrap: bool,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Avoid non-ASCII glyphs in output
    #[arg(long)]
    ascii: bool,
}

impl CommonArgs {
    fn wrap_enabled(&self) -> bool {
        !self.no_wrap
    }

    fn render_options(&self) -> RenderOptions {
        RenderOptions { ascii: self.ascii }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Bracket,
    Tabular,
    Dot,
    Report,
}

/// An error carrying its process exit code.
struct CliError {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

fn failure(message: impl Into<String>) -> CliError {
    CliError {
        code: 1,
        message: message.into(),
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, everything else is a
            // usage error.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Derive {
            input,
            common,
            type_raise,
            max_results,
        } => cmd_derive(input, common, type_raise, max_results),
        Command::Convert {
            direction,
            input,
            common,
        } => cmd_convert(direction, input, common),
        Command::Check {
            entries,
            builtin,
            lexicon,
        } => cmd_check(entries, builtin, lexicon),
        Command::Corpus { action } => cmd_corpus(action),
        Command::Render { input, common } => cmd_render(input, common),
    }
}

fn load_input(input: &InputArgs) -> Result<CorpusItem, CliError> {
    match (&input.id, &input.entry) {
        (Some(id), None) => {
            by_id(id).ok_or_else(|| usage(format!("no built-in entry with id {id:?}")))
        }
        (None, Some(path)) => {
            let lex_path = input
                .lexicon
                .as_ref()
                .ok_or_else(|| usage("--lexicon is required with an entry file"))?;
            let lex_text = fs::read_to_string(lex_path)
                .map_err(|e| usage(format!("cannot read {}: {e}", lex_path.display())))?;
            let lexicon = parse_lexicon(&lex_text)
                .map_err(|e| usage(format!("{}: {e}", lex_path.display())))?;
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let entry = parse_entry(&text, &lexicon.signature)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok(CorpusItem { lexicon, entry })
        }
        (Some(_), Some(_)) => Err(usage("give either an entry file or --id, not both")),
        (None, None) => Err(usage("an entry file or --id is required")),
    }
}

fn emit(common: &CommonArgs, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn token_categories(item: &CorpusItem) -> Vec<Category> {
    item.entry
        .sentence
        .tokens
        .iter()
        .map(|t| t.category.clone())
        .collect()
}

fn replayed(item: &CorpusItem, wrap: bool) -> Result<Derivation, CliError> {
    if item.entry.steps.is_empty() {
        return Err(failure(format!(
            "entry {} has no derivation script",
            item.entry.id
        )));
    }
    replay(&token_categories(item), &item.entry.steps, wrap)
        .map_err(|e| failure(format!("{}: {e}", item.entry.id)))
}

fn gold_graph(item: &CorpusItem) -> Result<DependencyGraph, CliError> {
    let root = item
        .entry
        .sentence
        .gold_root()
        .ok_or_else(|| usage(format!("entry {} declares no root", item.entry.id)))?;
    validate(item.entry.sentence.len(), &item.entry.sentence.gold_edges(), root)
        .map_err(|e| usage(format!("{}: {e}", item.entry.id)))
}

fn cmd_derive(
    input: InputArgs,
    common: CommonArgs,
    type_raise: bool,
    max_results: usize,
) -> Result<(), CliError> {
    let item = load_input(&input)?;
    let choices: Vec<Vec<Category>> = item
        .entry
        .sentence
        .tokens
        .iter()
        .map(|t| {
            item.lexicon
                .lookup(&t.form, &t.pos)
                .map(|e| e.categories.clone())
                .unwrap_or_else(|_| vec![t.category.clone()])
        })
        .collect();
    let goal = item.lexicon.signature.sentence_category();
    let options = DeriveOptions {
        wrap: common.wrap_enabled(),
        type_raise,
        max_results,
    };
    let results = derive(&choices, &goal, options);
    if results.is_empty() {
        return Err(failure("no derivation"));
    }
    let mut out = String::new();
    for (i, d) in results.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "Derivation {}:", i + 1);
        out.push_str(&render_derivation(&item, d, &common, Format::Table)?);
    }
    emit(&common, &out)
}

fn render_derivation(
    item: &CorpusItem,
    d: &Derivation,
    common: &CommonArgs,
    default_format: Format,
) -> Result<String, CliError> {
    let format = common.format.unwrap_or(default_format);
    let forms = item.entry.sentence.forms();
    let pos = item.entry.sentence.pos_labels();
    match format {
        Format::Table => Ok(derivation_table(d, &forms)),
        Format::Bracket => {
            let tree = cg_to_psg(d, &forms, &pos, &ProjectionMap::default(), "S")
                .map_err(|e| failure(e.to_string()))?;
            Ok(bracketed(&tree, common.render_options()) + "\n")
        }
        Format::Tabular => {
            let g = cg_to_dg(d, forms.len()).map_err(|e| failure(e.to_string()))?;
            Ok(write_tabular_for(&g, &forms, &pos))
        }
        Format::Dot => {
            let g = cg_to_dg(d, forms.len()).map_err(|e| failure(e.to_string()))?;
            Ok(dependency_dot(&g, &forms))
        }
        Format::Report => {
            let recs = correspondence_records(d, &pos);
            Ok(correspondence_report(&recs, common.render_options()))
        }
    }
}

fn cmd_convert(
    direction: ConvertDirection,
    input: InputArgs,
    common: CommonArgs,
) -> Result<(), CliError> {
    let item = load_input(&input)?;
    let text = match direction {
        ConvertDirection::Cg2dg => {
            let d = replayed(&item, common.wrap_enabled())?;
            render_derivation(&item, &d, &common, Format::Tabular)?
        }
        ConvertDirection::Cg2psg => {
            let d = replayed(&item, common.wrap_enabled())?;
            let forms = item.entry.sentence.forms();
            let pos = item.entry.sentence.pos_labels();
            let tree = cg_to_psg(&d, &forms, &pos, &ProjectionMap::default(), "S")
                .map_err(|e| failure(e.to_string()))?;
            match common.format.unwrap_or(Format::Bracket) {
                Format::Dot => phrase_dot(&tree),
                Format::Report => {
                    let mut out = String::new();
                    for r in tree.rules() {
                        let _ = writeln!(out, "{} -> {}", r.lhs, r.rhs.join(" "));
                    }
                    out
                }
                _ => bracketed(&tree, common.render_options()) + "\n",
            }
        }
        ConvertDirection::Dg2cg => {
            let g = gold_graph(&item)?;
            let d = dg_to_cg(&g, &token_categories(&item))
                .map_err(|e| failure(format!("{}: {e}", item.entry.id)))?;
            let mut out = String::new();
            for s in &d.steps {
                let _ = writeln!(
                    out,
                    "#STEP functor={} arg={}",
                    index_set(&s.functor.token_set),
                    index_set(&s.argument.token_set)
                );
            }
            let fin = d.final_constituent();
            let _ = writeln!(out, "# final: {}", fin.category);
            out
        }
    };
    emit(&common, &text)
}

fn index_set(set: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_corpus(action: CorpusAction) -> Result<(), CliError> {
    match action {
        CorpusAction::List => {
            for item in builtin_corpus() {
                println!(
                    "{}\t{}\t{} tokens\t{} steps",
                    item.entry.id,
                    item.entry.lang,
                    item.entry.sentence.len(),
                    item.entry.steps.len()
                );
            }
            Ok(())
        }
        CorpusAction::Dump { id, lexicon } => {
            let item =
                by_id(&id).ok_or_else(|| usage(format!("no built-in entry with id {id:?}")))?;
            if lexicon {
                print!("{}", crate::lexicon::write_lexicon(&item.lexicon));
            } else {
                print!("{}", write_entry(&item.entry));
            }
            Ok(())
        }
    }
}

fn cmd_render(input: InputArgs, common: CommonArgs) -> Result<(), CliError> {
    let item = load_input(&input)?;
    let d = replayed(&item, common.wrap_enabled())?;
    let text = render_derivation(&item, &d, &common, Format::Table)?;
    emit(&common, &text)
}

fn cmd_check(
    entries: Vec<PathBuf>,
    builtin: bool,
    lexicon: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut items: Vec<CorpusItem> = Vec::new();
    if builtin {
        items.extend(builtin_corpus());
    }
    if !entries.is_empty() {
        let lex_path =
            lexicon.ok_or_else(|| usage("--lexicon is required with entry files"))?;
        let lex_text = fs::read_to_string(&lex_path)
            .map_err(|e| usage(format!("cannot read {}: {e}", lex_path.display())))?;
        let lex = parse_lexicon(&lex_text)
            .map_err(|e| usage(format!("{}: {e}", lex_path.display())))?;
        for path in entries {
            let text = fs::read_to_string(&path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let entry = parse_entry(&text, &lex.signature)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            items.push(CorpusItem {
                lexicon: lex.clone(),
                entry,
            });
        }
    }
    if items.is_empty() {
        return Err(usage("nothing to check"));
    }
    let mut failed = false;
    for item in &items {
        for line in check_item(item) {
            match line {
                Ok(msg) => println!("PASS {}: {msg}", item.entry.id),
                Err(msg) => {
                    failed = true;
                    println!("FAIL {}: {msg}", item.entry.id);
                }
            }
        }
    }
    if failed {
        Err(failure("some checks failed"))
    } else {
        Ok(())
    }
}

type CheckLine = Result<String, String>;

fn check_item(item: &CorpusItem) -> Vec<CheckLine> {
    let mut out: Vec<CheckLine> = Vec::new();
    let n = item.entry.sentence.len();
    let graph = match item.entry.sentence.gold_root() {
        Some(root) => match validate(n, &item.entry.sentence.gold_edges(), root) {
            Ok(g) => {
                out.push(Ok("gold edges form a rooted tree".to_string()));
                Some(g)
            }
            Err(e) => {
                out.push(Err(format!("gold edges: {e}")));
                None
            }
        },
        None => {
            out.push(Err("no gold root".to_string()));
            None
        }
    };
    if let Some(g) = &graph {
        let report = projectivity(g);
        out.push(Ok(format!(
            "projectivity: {}",
            if report.projective {
                "projective".to_string()
            } else {
                format!("non-projective ({} crossing pairs)", report.crossings.len())
            }
        )));
    }
    if item.entry.steps.is_empty() {
        out.push(Ok("fragment entry, no script to replay".to_string()));
        return out;
    }
    let cats = token_categories(item);
    let goal = item.lexicon.signature.sentence_category();
    let derivation = match crate::engine::replay_to_goal(&cats, &item.entry.steps, &goal, true) {
        Ok(d) => {
            out.push(Ok(format!("script replays to {}", goal)));
            d
        }
        Err(e) => {
            out.push(Err(format!("replay: {e}")));
            return out;
        }
    };
    match (cg_to_dg(&derivation, n), &graph) {
        (Ok(g), Some(gold)) => {
            if &g == gold {
                out.push(Ok("derived dependencies match gold edges".to_string()));
            } else {
                let extra: Vec<_> = g.edges().difference(gold.edges()).collect();
                let missing: Vec<_> = gold.edges().difference(g.edges()).collect();
                out.push(Err(format!(
                    "derived dependencies differ: unexpected {extra:?}, missing {missing:?}"
                )));
            }
        }
        (Err(e), _) => out.push(Err(format!("cg_to_dg: {e}"))),
        (Ok(_), None) => {}
    }
    if !item.entry.gold_rules.is_empty() {
        match cg_to_psg(
            &derivation,
            &item.entry.sentence.forms(),
            &item.entry.sentence.pos_labels(),
            &ProjectionMap::default(),
            "S",
        ) {
            Ok(tree) => {
                let mut got: Vec<GoldRule> = tree.rules();
                let mut want = item.entry.gold_rules.clone();
                got.sort();
                want.sort();
                if got == want {
                    out.push(Ok("phrase-structure rules match gold rules".to_string()));
                } else {
                    out.push(Err(format!(
                        "phrase-structure rules differ: got {got:?}, want {want:?}"
                    )));
                }
            }
            Err(e) => out.push(Err(format!("cg_to_psg: {e}"))),
        }
    }
    match round_trip(&derivation, &cats) {
        Ok(_) => out.push(Ok("dependency round trip preserves the tree".to_string())),
        Err(e) => out.push(Err(format!("round trip: {e}"))),
    }
    out
}
