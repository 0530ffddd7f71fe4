//! Generators for the worked examples and the freeness test corpus.

mod cocycle;
mod corpus;
mod crossed;

pub use cocycle::{heisenberg_cocycle, root_of_unity, TwoCocycle};
pub use corpus::{freeness_corpus, CorpusEntry};
pub use crossed::{
    crossed_product, inner_automorphism, left_translations, projective_cocycle_algebra, right_translations,
};
