//! Simple commutators as structured trees, the Witt–Hall identities, and
//! decomposition of lower central series elements.

pub mod decompose;
pub mod identities;
pub mod structural;
pub mod tree;

pub use decompose::{decompose, DecomposeError, Decomposer, Decomposition};
pub use identities::{check_whi_congruence, witt_hall_b, witt_hall_c, Congruence, IdentityError};
pub use tree::{CommutatorTree, Insertion, Shape, Side, TreeError};
