//! Three views of a sentence and the bridges between them: slash-category
//! derivations, dependency trees, and phrase-structure trees, including the
//! discontinuous cases where functors combine with non-adjacent arguments.

pub mod category;
pub mod cli;
pub mod corpus;
pub mod correspondence;
pub mod dependency;
pub mod engine;
pub mod lexicon;
pub mod render;
