//! Free-group commutator calculus for n-triviality of Seifert surface
//! push-offs: words and their notation, the Magnus test for the lower central
//! series, simple commutators and their decomposition, triviality witnesses,
//! disc-band surfaces, and the resulting triviality-order bounds.

pub mod bounds;
pub mod cli;
pub mod commutator;
pub mod lie;
pub mod limits;
pub mod magnus;
pub mod notation;
pub mod sample;
pub mod surface;
pub mod triviality;
pub mod word;

pub use commutator::{CommutatorTree, Decomposer, Shape, Side};
pub use limits::Limits;
pub use magnus::{lcs_member, magnus_expand, TruncatedSeries};
pub use notation::{flatten, parse, print};
pub use word::{Alphabet, Letter, Word};
